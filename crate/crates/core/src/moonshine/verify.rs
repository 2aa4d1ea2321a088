//! The six conditions, checked per `SL2(Z)`-orbit of commuting pairs.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::Signed;
use serde::Serialize;

use super::construct::{build_candidates, minus_identity_transport, t_transport, CandidateFunctionSet, Provenance, TransportCheck, ZTwistChoice};
use super::data::Lambency;
use super::function::{sample_points, TwinedFunction};
use super::module::{decompose_sector, ModuleResult};
use super::newfn::NewFunction;
use crate::cohomology::theta::{multiplier, obstruction_check, xi_phase, Obstruction};
use crate::error::Result;
use crate::groups::congruence::{recognize_congruence, stabilizer_with};
use crate::groups::pairs::{conj_pair, PairCanonicalizer};
use crate::groups::{sl2_act, CommutingPair, Sl2};
use crate::jacobi::{theta_decompose, theta_recompose};
use crate::numeric::phase::format_rational;
use crate::numeric::{rat, Cyclotomic};

pub const CONDITIONS: [&str; 6] = ["I", "II", "III", "IV", "V", "VI"];

/// Relative tolerance of the numeric `S`-link checks.
pub const NUMERIC_TOLERANCE: f64 = 1e-8;

const S: Sl2 = [0, -1, 1, 0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotCheckable,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionStatus {
    pub status: Verdict,
    pub details: Vec<String>,
}

impl ConditionStatus {
    fn from_findings(failures: Vec<String>, checked: usize, what: &str) -> Self {
        if !failures.is_empty() {
            ConditionStatus { status: Verdict::Fail, details: failures }
        } else if checked == 0 {
            ConditionStatus { status: Verdict::NotCheckable, details: vec![format!("no {what}")] }
        } else {
            ConditionStatus { status: Verdict::Pass, details: Vec::new() }
        }
    }

    fn not_checkable(reason: impl Into<String>) -> Self {
        ConditionStatus { status: Verdict::NotCheckable, details: vec![reason.into()] }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerInfo {
    pub name: Option<String>,
    pub level: i64,
    pub index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub representative: CommutingPair,
    /// Class names of the representative.
    pub label: (String, String),
    pub members: Vec<CommutingPair>,
    pub size: usize,
    pub is_old: bool,
    pub stabilizer: StabilizerInfo,
    pub obstruction: Obstruction,
    /// Whether the data violates `varsigma(-I) psi|(-I) = xi psi`.
    pub obstructed_by_data: bool,
    /// The candidate is replaced by zero because of an obstruction.
    pub forced_zero: bool,
    pub candidate_pair: Option<CommutingPair>,
    pub provenance: Option<Provenance>,
    pub conditions: BTreeMap<String, ConditionStatus>,
    pub new_function: Option<NewFunction>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub g: usize,
    pub class: String,
    pub integral: bool,
    pub issues: Vec<String>,
    pub error: Option<String>,
    pub table: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub lambency: String,
    pub index: i64,
    pub group_order: usize,
    pub classes: Vec<String>,
    pub center_n: Vec<usize>,
    pub cocycle_exhaustive: bool,
    pub z_twists: Vec<ZTwistChoice>,
    pub transport_checks: Vec<TransportCheck>,
    pub orbits: Vec<OrbitReport>,
    pub modules: Vec<ModuleReport>,
}

impl VerificationReport {
    /// Whether some condition failed on some orbit.
    pub fn any_failure(&self) -> bool {
        self.orbits.iter().any(|o| o.conditions.values().any(|c| c.status == Verdict::Fail))
    }

    pub fn count(&self, condition: &str, v: Verdict) -> usize {
        self.orbits.iter().filter(|o| o.conditions.get(condition).map(|c| c.status) == Some(v)).count()
    }
}

pub struct VerifyOptions {
    /// Coefficients per component read for condition IV.
    pub n_coeffs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { n_coeffs: 5 }
    }
}

fn pair_label(lam: &Lambency, p: CommutingPair) -> String {
    format!("({}, {})", lam.class_name_of(p.g), lam.class_name_of(p.h))
}

/// Exact elliptic invariance under `(1, 0)`, `(0, 1)` and the theta-decomposition roundtrip.
fn elliptic_failures(lam: &Lambency, p: CommutingPair, f: &TwinedFunction) -> Vec<String> {
    let mut out = Vec::new();
    for (l, u) in [(1, 0), (0, 1)] {
        match f.elliptic_act(&rat(l, 1), &rat(u, 1)) {
            Ok(g) if g.same_function(f) => {}
            Ok(_) => out.push(format!("psi_{} is not invariant under ({l}, {u})", pair_label(lam, p))),
            Err(e) => out.push(format!("psi_{}: {e}", pair_label(lam, p))),
        }
    }
    let roundtrip = theta_recompose(&f.h).and_then(|phi| theta_decompose(&phi, f.h.weight.clone(), f.h.symmetry));
    match roundtrip {
        Ok(h) if h.agrees_with(&f.h) => {}
        Ok(_) => out.push(format!("theta roundtrip changes H_{}", pair_label(lam, p))),
        Err(e) => out.push(format!("theta roundtrip of H_{}: {e}", pair_label(lam, p))),
    }
    out
}

/// Ratios `psi_{pS}(x) / (psi_p|S)(x)` at the sample points, or `None` when both sides vanish there.
fn s_ratios(p_fn: &TwinedFunction, q_fn: &TwinedFunction) -> Result<Option<Vec<Complex64>>> {
    let mut out = Vec::new();
    for (tau, z) in sample_points() {
        let lhs = p_fn.slash_eval(&S, tau, z)?;
        let rhs = q_fn.eval(tau, z, &q_fn.growth())?;
        let scale = lhs.value.norm().max(rhs.value.norm());
        if scale < 1e-12 {
            continue;
        }
        if lhs.value.norm() < 1e-9 * scale {
            return Ok(Some(vec![Complex64::new(f64::INFINITY, 0.0)]));
        }
        out.push(rhs.value / lhs.value);
    }
    Ok(if out.is_empty() { None } else { Some(out) })
}

#[derive(Default)]
struct LinkFindings {
    elliptic: Vec<String>,
    multiplier: Vec<String>,
    links: usize,
    functions: usize,
}

fn check_links(lam: &Lambency, set: &CandidateFunctionSet, members: &[CommutingPair]) -> Result<LinkFindings> {
    let group = lam.group();
    let mut out = LinkFindings::default();
    for &c in members {
        let Some(f) = set.function_at(c) else { continue };
        out.functions += 1;
        out.elliptic.extend(elliptic_failures(lam, c, &f));
        // T and -I links are exact.
        for (name, (q, predicted)) in [("T", t_transport(lam, c, &f)), ("-I", minus_identity_transport(lam, c, &f))] {
            let Some(stored) = set.function_at(q) else { continue };
            out.links += 1;
            match stored.ratio_to(&predicted) {
                None => out.elliptic.push(format!("psi_{} is not proportional to psi_{}|{name}", pair_label(lam, q), pair_label(lam, c))),
                Some(r) if r != Cyclotomic::from_int(1) && !(r.is_zero() && predicted.is_zero()) => out.multiplier.push(format!(
                    "psi_{} = {r} varsigma psi_{}|{name}",
                    pair_label(lam, q),
                    pair_label(lam, c)
                )),
                Some(_) => {}
            }
        }
        // S links are checked numerically.
        let q = sl2_act(group, &S, c)?;
        let Some(stored) = set.function_at(q) else { continue };
        let sigma = Cyclotomic::root(multiplier(&lam.omega, group, c, &S)?).to_complex();
        let Some(ratios) = s_ratios(&f, &stored)? else { continue };
        out.links += 1;
        let r0 = ratios[0];
        let spread = ratios.iter().map(|r| (r - r0).norm()).fold(0.0, f64::max);
        if !r0.is_finite() || spread > NUMERIC_TOLERANCE * r0.norm().max(1.0) {
            out.elliptic.push(format!("psi_{} is not proportional to psi_{}|S (ratio spread {spread:.3e})", pair_label(lam, q), pair_label(lam, c)));
        } else if (r0 - sigma).norm() > NUMERIC_TOLERANCE * sigma.norm().max(1.0) {
            out.multiplier.push(format!(
                "psi_{} / psi_{}|S = {:.8}{:+.8}i, varsigma(S) = {:.8}{:+.8}i",
                pair_label(lam, q),
                pair_label(lam, c),
                r0.re,
                r0.im,
                sigma.re,
                sigma.im
            ));
        }
    }
    Ok(out)
}

/// Condition III: `xi_p(k) = 1` on the centraliser of the pair unless `psi_p = 0`, and the `-I` relation.
fn check_projective(lam: &Lambency, set: &CandidateFunctionSet, members: &[CommutingPair]) -> Result<(Vec<String>, usize, bool)> {
    let group = lam.group();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut data_obstructed = false;
    for &c in members {
        let Some(f) = set.function_at(c) else { continue };
        checked += 1;
        if f.is_zero() {
            continue;
        }
        for k in 0..group.order() {
            if conj_pair(group, c, k) == c && !xi_phase(&lam.omega, group, c, k)?.is_one() {
                failures.push(format!("xi_{}({}) is nontrivial but psi is nonzero", pair_label(lam, c), k));
            }
        }
        if let Obstruction::Obstructed { .. } = obstruction_check(&lam.omega, group, c)? {
            failures.push(format!("{} is obstructed but psi is nonzero", pair_label(lam, c)));
        }
        let (q, predicted) = minus_identity_transport(lam, c, &f);
        if let Some(stored) = set.function_at(q) {
            if set.canonicalizer().canonical(q) == set.canonicalizer().canonical(c) && !stored.same_function(&predicted) {
                data_obstructed = true;
                failures.push(format!("varsigma(-I) psi_{0}|(-I) differs from xi psi_{0}: obstructed by data", pair_label(lam, c)));
            }
        }
    }
    Ok((failures, checked, data_obstructed))
}

/// Condition V: untwisted members come from data, and `psi_(e,zg) = -psi_(e,g)|(0, 1/2)` for `z` of order 2.
fn check_untwisted(lam: &Lambency, set: &CandidateFunctionSet, members: &[CommutingPair]) -> (Vec<String>, usize) {
    let group = lam.group();
    let e = group.identity();
    let mut failures = Vec::new();
    let mut checked = 0;
    for &c in members.iter().filter(|c| c.g == e) {
        checked += 1;
        match set.function_at(c) {
            Some(f) if f.same_function(lam.untwisted_for(c.h)) => {}
            _ => failures.push(format!("psi_{} differs from the untwisted data", pair_label(lam, c))),
        }
        for &z in lam.center_n() {
            let zh = group.mul(z, c.h);
            let psi = lam.untwisted_for(c.h);
            let expected = match group.elem_order(z) {
                2 => psi.elliptic_act(&rat(0, 1), &rat(1, 2)).map(|f| f.scale(&Cyclotomic::from_int(-1))),
                3 if group.elem_order(c.h) % 3 != 0 && lam.index() % 3 == 0 => (0..3).try_fold(psi.clone(), |acc, a| {
                    acc.add(&psi.elliptic_act(&rat(0, 1), &rat(a, 3))?.scale(&Cyclotomic::from_rational(rat(-1, 2))))
                }),
                _ => continue,
            };
            match expected {
                Ok(f) if f.same_function(lam.untwisted_for(zh)) => {}
                Ok(_) => failures.push(format!(
                    "psi_(e,{}) does not satisfy the z-shift relation with psi_(e,{})",
                    lam.class_name_of(zh),
                    lam.class_name_of(c.h)
                )),
                Err(err) => failures.push(err.to_string()),
            }
        }
    }
    (failures, checked)
}

/// Condition VI (heuristic): `H_(g,h)` with `g` outside `n` has no negative exponents;
/// theta-span solutions are bounded at every cusp.
fn check_cusps(lam: &Lambency, set: &CandidateFunctionSet, members: &[CommutingPair]) -> (Vec<String>, usize) {
    let e = lam.group().identity();
    let mut failures = Vec::new();
    let mut checked = 0;
    for &c in members {
        let Some(f) = set.function_at(c) else { continue };
        checked += 1;
        if set.store.provenance(c) == Some(Provenance::ConstructedNew) || c.g == e || lam.center_n().contains(&c.g) {
            continue;
        }
        for r in 0..2 * f.index() {
            if let Some((a, _)) = f.h.component(r).terms().find(|(a, _)| a.is_negative()) {
                failures.push(format!("H_{},{r} has the term q^{} at infinity", pair_label(lam, c), format_rational(a)));
            }
        }
    }
    (failures, checked)
}

pub fn sector_results(lam: &Lambency, set: &CandidateFunctionSet, n_coeffs: usize) -> BTreeMap<usize, std::result::Result<ModuleResult, String>> {
    let reps: Vec<usize> = lam.classes.iter().map(|c| c[0]).collect();
    let results: Vec<(usize, std::result::Result<ModuleResult, String>)> = std::thread::scope(|s| {
        let handles: Vec<_> = reps
            .iter()
            .map(|&g| s.spawn(move || (g, decompose_sector(lam, g, |p| set.function_at(p), n_coeffs).map_err(|e| e.to_string()))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sector thread")).collect()
    });
    results.into_iter().collect()
}

pub fn verify_all(lam: &Lambency, set: &CandidateFunctionSet, opts: &VerifyOptions) -> Result<VerificationReport> {
    let group = lam.group();
    let sectors = sector_results(lam, set, opts.n_coeffs);
    let mut orbits = Vec::new();
    for entry in &set.orbits {
        let o = &entry.orbit;
        let rep = o.representative;
        let stab = stabilizer_with(group, set.canonicalizer(), rep)?;
        let stabilizer = StabilizerInfo { name: stab.name.clone().or_else(|| recognize_congruence(&stab)), level: stab.level, index: stab.index };
        let obstruction = obstruction_check(&lam.omega, group, rep)?;
        let mut conditions = BTreeMap::new();
        let mut obstructed_by_data = false;
        let links = check_links(lam, set, &o.members)?;
        if links.functions == 0 {
            for c in CONDITIONS {
                conditions.insert(c.to_string(), ConditionStatus::not_checkable("no function known on the orbit"));
            }
        } else {
            conditions.insert("I".into(), ConditionStatus::from_findings(links.elliptic, links.functions, "functions"));
            conditions.insert("II".into(), ConditionStatus::from_findings(links.multiplier, links.links, "gamma-links between known functions"));
            let (f3, n3, by_data) = check_projective(lam, set, &o.members)?;
            obstructed_by_data = by_data;
            conditions.insert("III".into(), ConditionStatus::from_findings(f3, n3, "functions"));
            let mut f4 = Vec::new();
            let mut n4 = 0;
            let mut missing = None;
            let mut seen = std::collections::BTreeSet::new();
            for m in &o.members {
                let g = set.canonicalizer().class_rep(m.g);
                if !seen.insert(g) {
                    continue;
                }
                match sectors.get(&lam.classes[lam.class_of(g)][0]) {
                    Some(Ok(r)) => {
                        n4 += 1;
                        f4.extend(r.characters.issues.iter().cloned());
                        if let Err(e) = &r.decomposition {
                            f4.push(format!("K^({}): {e}", lam.class_name_of(g)));
                        }
                    }
                    Some(Err(e)) => missing = Some(format!("K^({}): {e}", lam.class_name_of(g))),
                    None => {}
                }
            }
            conditions.insert(
                "IV".into(),
                match missing {
                    Some(reason) if f4.is_empty() => ConditionStatus::not_checkable(reason),
                    _ => ConditionStatus::from_findings(f4, n4, "sectors"),
                },
            );
            let (f5, n5) = check_untwisted(lam, set, &o.members);
            conditions.insert("V".into(), ConditionStatus::from_findings(f5, n5, "untwisted members"));
            let (f6, n6) = check_cusps(lam, set, &o.members);
            let mut vi = ConditionStatus::from_findings(f6, n6, "functions");
            vi.details.push("heuristic".into());
            conditions.insert("VI".into(), vi);
        }
        let forced_zero = obstruction.is_obstructed() || obstructed_by_data;
        orbits.push(OrbitReport {
            representative: rep,
            label: (lam.class_name_of(rep.g).to_string(), lam.class_name_of(rep.h).to_string()),
            members: o.members.clone(),
            size: o.size,
            is_old: o.is_old,
            stabilizer,
            obstruction,
            obstructed_by_data,
            forced_zero,
            candidate_pair: entry.candidate.as_ref().map(|c| c.pair),
            provenance: entry.candidate.as_ref().map(|c| c.provenance),
            conditions,
            new_function: entry.new_function.as_ref().map(|r| r.result.clone()),
        });
    }
    let modules = sectors
        .into_iter()
        .map(|(g, r)| match r {
            Ok(r) => ModuleReport {
                g,
                class: lam.class_name_of(g).to_string(),
                integral: r.is_integral(),
                issues: r.characters.issues.clone(),
                error: r.decomposition.as_ref().err().cloned(),
                table: r.render(lam),
            },
            Err(e) => ModuleReport { g, class: lam.class_name_of(g).to_string(), integral: false, issues: Vec::new(), error: Some(e), table: String::new() },
        })
        .collect();
    Ok(VerificationReport {
        lambency: lam.config.label.clone(),
        index: lam.index(),
        group_order: group.order(),
        classes: lam.class_names.clone(),
        center_n: lam.center_n().to_vec(),
        cocycle_exhaustive: lam.cocycle_check.exhaustive,
        z_twists: set.z_twists.clone(),
        transport_checks: set.transport_checks.clone(),
        orbits,
        modules,
    })
}

/// Candidates and verification in one call.
pub fn run_verification(lam: &Lambency, opts: &VerifyOptions) -> Result<VerificationReport> {
    let canon = PairCanonicalizer::new(lam.group());
    let set = build_candidates(lam, &canon)?;
    verify_all(lam, &set, opts)
}

/// `K^g` for any `g`, read off the constructed candidate functions.
pub fn decompose_module(lam: &Lambency, g: usize, n_coeffs: usize) -> Result<ModuleResult> {
    if g >= lam.group().order() {
        return Err(crate::error::Error::Data(format!("element {g} outside the group")));
    }
    let canon = PairCanonicalizer::new(lam.group());
    let set = build_candidates(lam, &canon)?;
    decompose_sector(lam, g, |p| set.function_at(p), n_coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moonshine::data::{build_lambency, LambencyFiles};
    use crate::moonshine::synth::{toy_z2_m1, toy_z2_m1_half_shifts, toy_z2_m2};
    use crate::numeric::io::{qexp_from_json, qexp_to_json};

    fn report(files: &LambencyFiles) -> VerificationReport {
        let lam = build_lambency(files).unwrap();
        run_verification(&lam, &VerifyOptions::default()).unwrap()
    }

    fn failed(r: &VerificationReport) -> Vec<String> {
        let mut out = Vec::new();
        for o in &r.orbits {
            for (c, s) in &o.conditions {
                if s.status == Verdict::Fail {
                    out.push(format!("{:?} {c}", o.label));
                }
            }
        }
        out
    }

    #[test]
    fn consistent_toys_pass_everything() {
        for files in [toy_z2_m1(true), toy_z2_m1_half_shifts(true), toy_z2_m2(12)] {
            let r = report(&files);
            assert!(!r.any_failure(), "{}: {:?}", r.lambency, failed(&r));
            assert_eq!(r.orbits.len(), 2);
            for c in CONDITIONS {
                assert_eq!(r.count(c, Verdict::Pass), 2, "{} condition {c}", r.lambency);
            }
            assert!(r.orbits.iter().all(|o| !o.forced_zero));
        }
    }

    #[test]
    fn inconsistent_variant_is_obstructed_by_data() {
        let r = report(&toy_z2_m1(false));
        let o = r.orbits.iter().find(|o| o.label == ("1a".to_string(), "2a".to_string())).unwrap();
        assert!(o.obstructed_by_data && o.forced_zero);
        assert_eq!(o.conditions["III"].status, Verdict::Fail);
        assert!(!r.orbits[0].forced_zero);
    }

    #[test]
    fn half_shifts_need_the_nontrivial_cocycle() {
        let r = report(&toy_z2_m1_half_shifts(false));
        assert_eq!(failed(&r), vec![r#"("1a", "2a") II"#.to_string()]);
    }

    #[test]
    fn corrupted_coefficient_fails_condition_iv() {
        let mut files = toy_z2_m2(12);
        let u = files.untwisted.iter_mut().find(|u| u.class == "2a").unwrap();
        for (r, sign) in [(1, 1), (3, -1)] {
            let mut f = qexp_from_json(&u.components[&r]).unwrap();
            f.add_term(rat(15, 8), Cyclotomic::from_int(sign));
            u.components.insert(r, qexp_to_json(&f));
        }
        let r = report(&files);
        let f = failed(&r);
        assert!(f.iter().any(|x| x.ends_with(" IV")), "{f:?}");
        let module = r.modules.iter().find(|m| m.class == "1a").unwrap();
        assert!(!module.integral);
        assert!(module.error.as_ref().unwrap().contains("15/8"), "{:?}", module.error);
    }
}
