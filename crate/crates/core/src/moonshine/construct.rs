//! The candidate set: one function per `SL2(Z)`-orbit of commuting pairs,
//! taken from data or constructed by z-twists, theta-span solutions and
//! exact `T`, `-I` transport.

use std::collections::{BTreeMap, VecDeque};

use num::complex::Complex64;
use serde::Serialize;

use super::data::Lambency;
use super::function::{sample_points, TwinedFunction};
use super::module::decompose_sector;
use super::newfn::{build_new_function, NewFunctionResult};
use crate::cohomology::theta::{multiplier, multiplier_letter, multiplier_on_word, xi_phase};
use crate::error::{Error, Result};
use crate::groups::congruence::Letter;
use crate::groups::pairs::{conj_pair, PairCanonicalizer};
use crate::groups::{classify_pairs, CommutingPair, PairOrbit, Sl2};
use crate::jacobi::Symmetry;
use crate::numeric::{rat, Cyclotomic, Phase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Ingested,
    ConstructedZTwist,
    ConstructedNew,
    TShifted,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub pair: CommutingPair,
    pub function: TwinedFunction,
    pub provenance: Provenance,
}

/// Functions on canonical pairs; other pairs are reached through
/// `psi_{(g,h)|^k} = xi_{(g,h)}(k) psi_{(g,h)}`.
#[derive(Clone)]
pub struct FunctionStore<'a> {
    lam: &'a Lambency,
    canon: &'a PairCanonicalizer<'a>,
    pub known: BTreeMap<CommutingPair, Candidate>,
}

impl<'a> FunctionStore<'a> {
    pub fn new(lam: &'a Lambency, canon: &'a PairCanonicalizer<'a>) -> Self {
        FunctionStore { lam, canon, known: BTreeMap::new() }
    }

    fn conjugator(&self, from: CommutingPair, to: CommutingPair) -> usize {
        let group = self.lam.group();
        (0..group.order()).find(|&k| conj_pair(group, from, k) == to).expect("pairs in one conjugation orbit")
    }

    /// `f` moved from `p` to its canonical pair.
    fn to_canonical(&self, p: CommutingPair, f: &TwinedFunction) -> (CommutingPair, TwinedFunction) {
        let c = self.canon.canonical(p);
        let k = self.conjugator(p, c);
        let xi = xi_phase(&self.lam.omega, self.lam.group(), p, k).expect("commuting pair");
        (c, f.scale(&Cyclotomic::root(xi)))
    }

    /// Stores `f` as `psi_p` unless the canonical pair is already known.
    pub fn insert(&mut self, p: CommutingPair, f: &TwinedFunction, provenance: Provenance) -> bool {
        let (c, g) = self.to_canonical(p, f);
        if self.known.contains_key(&c) {
            return false;
        }
        self.known.insert(c, Candidate { pair: c, function: g, provenance });
        true
    }

    pub fn contains(&self, p: CommutingPair) -> bool {
        self.known.contains_key(&self.canon.canonical(p))
    }

    pub fn provenance(&self, p: CommutingPair) -> Option<Provenance> {
        self.known.get(&self.canon.canonical(p)).map(|c| c.provenance)
    }

    /// `psi_p` for any commuting pair.
    pub fn get(&self, p: CommutingPair) -> Option<TwinedFunction> {
        let c = self.canon.canonical(p);
        let f = &self.known.get(&c)?.function;
        let k = self.conjugator(c, p);
        let xi = xi_phase(&self.lam.omega, self.lam.group(), c, k).ok()?;
        Some(f.scale(&Cyclotomic::root(xi)))
    }
}

/// `psi_{p T} = varsigma_p(T) psi_p|T`.
pub fn t_transport(lam: &Lambency, p: CommutingPair, f: &TwinedFunction) -> (CommutingPair, TwinedFunction) {
    let group = lam.group();
    let s = multiplier_letter(&lam.omega, group, p, Letter::T);
    let q = CommutingPair { g: p.g, h: group.mul(p.g, p.h) };
    (q, f.t_act().scale(&Cyclotomic::root(s)))
}

/// `psi_{p (-I)} = varsigma_p(-I) psi_p|(-I)`, with `-I = S^2`.
pub fn minus_identity_transport(lam: &Lambency, p: CommutingPair, f: &TwinedFunction) -> (CommutingPair, TwinedFunction) {
    let group = lam.group();
    let (s, q) = multiplier_on_word(&lam.omega, group, p, &[Letter::S, Letter::S]);
    (q, f.minus_identity().scale(&Cyclotomic::root(s)))
}

/// `psi_{(z,g)}` up to the scalar `varsigma`: `psi_{(e,g)}|(1/2, 0)` when `z`
/// has order 2.
pub fn build_z_twist(lam: &Lambency, z: usize, g: usize) -> Result<TwinedFunction> {
    let group = lam.group();
    if group.elem_order(z) != 2 {
        return Err(Error::Data(format!("z = {z} has order {}, not 2", group.elem_order(z))));
    }
    lam.untwisted_for(g).elliptic_act(&rat(1, 2), &rat(0, 1))
}

/// The order-3 variant `psi_{(e,g)} - 1/2 sum_{A mod 3} psi_{(e,g)}|(A/3, 0)`,
/// for `o(g)` prime to 3.
pub fn build_z_twist_6p3(lam: &Lambency, z: usize, g: usize) -> Result<TwinedFunction> {
    let group = lam.group();
    if group.elem_order(z) != 3 || lam.index() % 3 != 0 {
        return Err(Error::Data(format!("the order-3 twist needs o(z) = 3 and 3 | m, got o(z) = {}, m = {}", group.elem_order(z), lam.index())));
    }
    if group.elem_order(g) % 3 == 0 {
        return Err(Error::Data(format!("o(g) = {} is divisible by 3", group.elem_order(g))));
    }
    let psi = lam.untwisted_for(g);
    let half = Cyclotomic::from_rational(rat(-1, 2));
    let mut out = psi.clone();
    for a in 0..3 {
        out = out.add(&psi.elliptic_act(&rat(a, 3), &rat(0, 1))?.scale(&half))?;
    }
    Ok(out)
}

/// The scalar chosen for the z-twists of one central element.
#[derive(Clone, Debug, Serialize)]
pub struct ZTwistChoice {
    pub z: usize,
    pub varsigma: Phase,
    /// Whether some root gave a non-negative integral `K^z`; otherwise `varsigma = 1`.
    pub feasible: bool,
    /// Total multiplicity of the leading grades.
    pub leading_multiplicity: Option<i64>,
    pub roots_tried: usize,
    /// The numeric `S`-transport ratio used to break ties.
    pub numeric_ratio: Option<String>,
    pub skipped: Vec<String>,
}

/// Agreement of a z-twist with the `T`-transport of another z-twist.
#[derive(Clone, Debug, Serialize)]
pub struct TransportCheck {
    pub from: CommutingPair,
    pub to: CommutingPair,
    /// `psi_to / (varsigma(T) psi_from|T)` when the two are proportional.
    pub ratio: Option<String>,
}

#[derive(Clone, Debug)]
pub struct OrbitEntry {
    pub orbit: PairOrbit,
    pub candidate: Option<Candidate>,
    pub new_function: Option<NewFunctionResult>,
}

pub struct CandidateFunctionSet<'a> {
    pub store: FunctionStore<'a>,
    pub orbits: Vec<OrbitEntry>,
    pub z_twists: Vec<ZTwistChoice>,
    pub transport_checks: Vec<TransportCheck>,
    pub symmetry: Symmetry,
}

impl CandidateFunctionSet<'_> {
    pub fn function_at(&self, p: CommutingPair) -> Option<TwinedFunction> {
        self.store.get(p)
    }

    pub fn canonicalizer(&self) -> &PairCanonicalizer<'_> {
        self.store.canon
    }
}

/// Number of decomposition grades read when fixing `varsigma`.
const SEARCH_COEFFS: usize = 3;

fn leading_multiplicity(d: &crate::projective::decompose::ModuleDecomposition) -> i64 {
    let mut first: BTreeMap<i64, &Vec<i64>> = BTreeMap::new();
    for ((r, _), m) in &d.multiplicities {
        first.entry(*r).or_insert(m);
    }
    first.values().flat_map(|m| m.iter()).sum()
}

/// `varsigma_{(e,z)}(S) psi_{(e,z)}|S / psi'_{(z,e)}` at a sample point, where
/// `psi'` is the unscaled twist.
fn s_transport_ratio(store: &FunctionStore, z: usize, twists: &[(CommutingPair, TwinedFunction)]) -> Option<Complex64> {
    let lam = store.lam;
    let e = lam.group().identity();
    let from = CommutingPair { g: e, h: z };
    let psi = store.get(from)?;
    let (_, target) = twists.iter().find(|(p, _)| *p == CommutingPair { g: z, h: e })?;
    let sigma = multiplier(&lam.omega, lam.group(), from, &S).ok()?;
    let (tau, w) = sample_points()[0];
    let lhs = psi.slash_eval(&S, tau, w).ok()?.value * Cyclotomic::root(sigma).to_complex();
    let rhs = target.eval(tau, w, &target.growth()).ok()?.value;
    (rhs.norm() > 1e-6).then(|| lhs / rhs)
}

const S: Sl2 = [0, -1, 1, 0];

/// Picks `varsigma = e(k/N)` making the first grades of `K^z` non-negative
/// integral with the least leading multiplicity. Ties go to the root nearest
/// the numeric `S`-transport ratio when it is defined, else to the smallest `k`.
fn choose_varsigma(store: &FunctionStore, z: usize, twists: &[(CommutingPair, TwinedFunction)], skipped: Vec<String>) -> Result<ZTwistChoice> {
    let lam = store.lam;
    let group = lam.group();
    let n = 2 * num::integer::lcm(num::integer::lcm(4 * lam.index() as u64, group.exponent() as u64), lam.omega.denominator_lcm().max(1));
    let mut feasible: Vec<(i64, Phase)> = Vec::new();
    for k in 0..n {
        let phase = Phase::new(k as i64, n as i64);
        let mut trial = store.clone();
        for (p, f) in twists {
            trial.insert(*p, &f.scale(&Cyclotomic::root(phase)), Provenance::ConstructedZTwist);
        }
        let res = decompose_sector(lam, z, |p| trial.get(p), SEARCH_COEFFS)?;
        if !res.is_integral() {
            continue;
        }
        let d = res.decomposition.as_ref().expect("integral");
        if d.multiplicities.values().flatten().any(|x| *x < 0) {
            continue;
        }
        feasible.push((leading_multiplicity(d), phase));
    }
    let ratio = s_transport_ratio(store, z, twists);
    let numeric_ratio = ratio.map(|c| format!("{:.6}{:+.6}i", c.re, c.im));
    let Some(least) = feasible.iter().map(|f| f.0).min() else {
        return Ok(ZTwistChoice { z, varsigma: Phase::ONE, feasible: false, leading_multiplicity: None, roots_tried: n as usize, numeric_ratio, skipped });
    };
    let ties: Vec<Phase> = feasible.iter().filter(|f| f.0 == least).map(|f| f.1).collect();
    let varsigma = match ratio {
        Some(c) if ties.len() > 1 => *ties
            .iter()
            .min_by(|a, b| {
                let da = (Cyclotomic::root(**a).to_complex() - c).norm();
                let db = (Cyclotomic::root(**b).to_complex() - c).norm();
                da.total_cmp(&db)
            })
            .expect("nonempty"),
        _ => ties[0],
    };
    Ok(ZTwistChoice { z, varsigma, feasible: true, leading_multiplicity: Some(least), roots_tried: n as usize, numeric_ratio, skipped })
}

/// Orbit-member preference: untwisted data, z-twists, other data, new
/// functions, transported functions.
fn preference(p: CommutingPair, prov: Provenance, lam: &Lambency) -> (u8, CommutingPair) {
    let e = lam.group().identity();
    let rank = match prov {
        Provenance::Ingested if p.g == e => 0,
        Provenance::ConstructedZTwist => 1,
        Provenance::Ingested => 2,
        Provenance::ConstructedNew => 3,
        Provenance::TShifted => 4,
    };
    (rank, p)
}

/// Closes the store under `T` and `-I` transport.
fn transport_closure(store: &mut FunctionStore) {
    let lam = store.lam;
    let mut queue: VecDeque<CommutingPair> = store.known.keys().copied().collect();
    while let Some(p) = queue.pop_front() {
        let f = store.known[&p].function.clone();
        for (q, g) in [t_transport(lam, p, &f), minus_identity_transport(lam, p, &f)] {
            if store.insert(q, &g, Provenance::TShifted) {
                queue.push_back(store.canon.canonical(q));
            }
        }
    }
}

pub fn build_candidates<'a>(lam: &'a Lambency, canon: &'a PairCanonicalizer<'a>) -> Result<CandidateFunctionSet<'a>> {
    let group = lam.group();
    let e = group.identity();
    let mut store = FunctionStore::new(lam, canon);
    for c in &lam.classes {
        store.insert(CommutingPair { g: e, h: c[0] }, &lam.untwisted[&c[0]], Provenance::Ingested);
    }
    for (p, f) in &lam.twisted {
        store.insert(*p, f, Provenance::Ingested);
    }
    let symmetry = lam.untwisted_for(e).h.symmetry;
    let mut z_twists = Vec::new();
    let mut transport_checks = Vec::new();
    for &z in lam.center_n() {
        let mut twists = Vec::new();
        let mut skipped = Vec::new();
        for c in &lam.classes {
            let p = CommutingPair { g: z, h: c[0] };
            if store.contains(p) {
                continue;
            }
            let f = match group.elem_order(z) {
                2 => build_z_twist(lam, z, c[0]),
                3 => build_z_twist_6p3(lam, z, c[0]),
                o => Err(Error::Data(format!("no z-twist for o(z) = {o}"))),
            };
            match f {
                Ok(f) => twists.push((p, f)),
                Err(err) => skipped.push(format!("({}, {}): {err}", lam.class_name_of(z), lam.class_name_of(c[0]))),
            }
        }
        if twists.is_empty() {
            continue;
        }
        let choice = choose_varsigma(&store, z, &twists, skipped)?;
        let s = Cyclotomic::root(choice.varsigma);
        let scaled: Vec<(CommutingPair, TwinedFunction)> = twists.iter().map(|(p, f)| (*p, f.scale(&s))).collect();
        for (p, f) in &scaled {
            store.insert(*p, f, Provenance::ConstructedZTwist);
        }
        for (p, f) in &scaled {
            let (q, g) = t_transport(lam, *p, f);
            if let Some((_, target)) = scaled.iter().find(|(x, _)| canon.canonical(*x) == canon.canonical(q)) {
                let (qc, gc) = store.to_canonical(q, &g);
                let (_, tc) = store.to_canonical(qc, target);
                transport_checks.push(TransportCheck { from: *p, to: qc, ratio: tc.ratio_to(&gc).map(|r| r.to_string()) });
            }
        }
        z_twists.push(choice);
    }
    let orbits = classify_pairs(group, lam.center_n());
    let mut new_functions = BTreeMap::new();
    for o in orbits.iter().filter(|o| !o.is_old) {
        let r = build_new_function(lam, canon, o.representative, symmetry)?;
        if !o.members.iter().any(|m| store.contains(*m)) {
            let f = r.function.clone().unwrap_or_else(|| zero_function(lam));
            store.insert(o.representative, &f, Provenance::ConstructedNew);
        }
        new_functions.insert(o.representative, r);
    }
    transport_closure(&mut store);
    let entries = orbits
        .into_iter()
        .map(|o| {
            let candidate = o
                .members
                .iter()
                .filter_map(|m| store.known.get(m))
                .min_by_key(|c| preference(c.pair, c.provenance, lam))
                .cloned();
            let new_function = new_functions.remove(&o.representative);
            OrbitEntry { orbit: o, candidate, new_function }
        })
        .collect();
    Ok(CandidateFunctionSet { store, orbits: entries, z_twists, transport_checks, symmetry })
}

fn zero_function(lam: &Lambency) -> TwinedFunction {
    let u = lam.untwisted_for(lam.group().identity());
    u.scale(&Cyclotomic::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::small::cyclic;
    use crate::moonshine::data::build_lambency;
    use crate::moonshine::synth::{toy_z2_m1, toy_z2_m2};

    #[test]
    fn z_twist_reorders_components() {
        let lam = build_lambency(&toy_z2_m2(8)).unwrap();
        let f = build_z_twist(&lam, 1, 0).unwrap();
        let u = lam.untwisted_for(0);
        for r in 0..4 {
            assert!(f.h.component(r).agrees_with(u.h.component(r + 2)), "r = {r}");
        }
        // Twice the shift (1/2, 0) is the integral shift (1, 0).
        let twice = f.elliptic_act(&rat(1, 2), &rat(0, 1)).unwrap();
        assert_eq!(twice.ratio_to(u), Some(Cyclotomic::from_int(1)));
        assert!(build_z_twist_6p3(&lam, 1, 0).is_err());
    }

    #[test]
    fn mathieu_toy_fixes_varsigma_by_positivity() {
        let lam = build_lambency(&toy_z2_m2(12)).unwrap();
        let canon = PairCanonicalizer::new(lam.group());
        let set = build_candidates(&lam, &canon).unwrap();
        let choice = &set.z_twists[0];
        assert!(choice.feasible);
        assert_eq!(choice.varsigma, Phase::new(1, 2));
        assert_eq!(choice.leading_multiplicity, Some(90));
        // The z-twists agree with each other's T-transports exactly.
        assert_eq!(set.transport_checks.len(), 2);
        assert!(set.transport_checks.iter().all(|t| t.ratio.as_deref() == Some("1")));
        for o in &set.orbits {
            assert!(o.candidate.is_some());
        }
        assert_eq!(set.store.provenance(CommutingPair { g: 1, h: 0 }), Some(Provenance::ConstructedZTwist));
    }

    #[test]
    fn store_applies_xi_under_conjugation() {
        let lam = build_lambency(&toy_z2_m1(true)).unwrap();
        let canon = PairCanonicalizer::new(lam.group());
        let set = build_candidates(&lam, &canon).unwrap();
        assert_eq!(lam.group().order(), cyclic(2).order());
        for p in canon.all_canonical_pairs() {
            let f = set.function_at(p).unwrap();
            assert_eq!(set.store.provenance(p), Some(Provenance::Ingested));
            assert!(f.same_function(&set.store.known[&p].function));
        }
    }

    #[test]
    fn order_three_twist_matches_direct_average() {
        // psi - 1/2 sum_A psi|(A/3, 0) on a Z/6 group with z of order 3 and m = 3.
        let g = cyclic(6);
        let omega = crate::cohomology::Cochain::trivial(3, 6);
        let mut untwisted = BTreeMap::new();
        let t = rat(4, 1);
        let mut h = crate::jacobi::VectorValuedForm::zero(3, rat(1, 2), &t, Symmetry::Odd);
        let mut f = crate::numeric::QExpansion::new(t.clone(), 12);
        f.add_term(rat(-1, 12), Cyclotomic::from_int(-2));
        f.add_term(rat(11, 12), Cyclotomic::from_int(10));
        for r in [1, 2] {
            *h.component_mut(r) = f.clone();
            *h.component_mut(-r) = f.neg();
        }
        for name in ["1a", "2a", "3a", "3b", "6a", "6b"] {
            untwisted.insert(name.to_string(), (h.clone(), crate::jacobi::PolarTable::from([((0, 0), Cyclotomic::from_int(-2))])));
        }
        let spec = crate::moonshine::synth::SynthSpec { label: "z6", index: 3, group: &g, center_n: &[], omega: &omega, truncation: t.clone(), untwisted };
        let lam = build_lambency(&crate::moonshine::synth::synth_files(&spec)).unwrap();
        let z = (0..6).find(|&x| g.elem_order(x) == 3).unwrap();
        let twist = build_z_twist_6p3(&lam, z, 0).unwrap();
        let psi = lam.untwisted_for(0);
        let truncation = rat(3, 1);
        let mut expect = psi.expansion(&truncation).unwrap();
        for a in 0..3 {
            let shifted = psi.elliptic_act(&rat(a, 3), &rat(0, 1)).unwrap().expansion(&truncation).unwrap();
            expect.regular = expect.regular.sub(&shifted.regular.scale(&Cyclotomic::from_rational(rat(1, 2)))).unwrap();
        }
        let got = twist.expansion(&truncation).unwrap();
        assert!(got.regular.agrees_with(&expect.regular));
        let g2 = (0..6).find(|&x| g.elem_order(x) == 3 && x != z).unwrap();
        assert!(build_z_twist_6p3(&lam, z, g2).is_err());
    }
}
