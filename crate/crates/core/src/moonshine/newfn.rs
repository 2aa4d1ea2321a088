//! Twisted–twined functions for new orbits as theta-function combinations.
//!
//! Each component `H_r` is sought in the span of unary thetas `theta^0_{m',s}`
//! whose exponents lie in the support lattice of `H_{(g,e),r}`. The vector
//! `H` must satisfy `H|_{1/2} gamma = lambda(gamma) rho_m(gamma) H` for the
//! generators of the stabiliser, with `lambda = xi / varsigma`; the solutions
//! form the simultaneous eigenspace.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num::{One, Signed};
use serde::Serialize;

use super::data::Lambency;
use super::function::TwinedFunction;
use crate::cohomology::theta::{multiplier_on_word, obstruction_check, xi_phase};
use crate::error::{Error, Result};
use crate::groups::congruence::{evaluate_letters, sl2_mul, Letter};
use crate::groups::pairs::{conj_pair, pair_level, PairCanonicalizer};
use crate::groups::{sl2_act, CommutingPair, Group, Sl2};
use crate::jacobi::{epsilon, unary_theta, weil_rep, AppellLerchSum, Symmetry, VectorValuedForm};
use crate::numeric::linalg::CycMatrix;
use crate::numeric::phase::format_rational;
use crate::numeric::{rat, Cyclotomic, Phase, QExpansion, Rational};

/// A unary theta `theta^0_{m',s}` with `0 <= s <= m'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct UnaryTheta {
    pub m: i64,
    pub s: i64,
}

impl UnaryTheta {
    pub fn reduced(m: i64, s: i64) -> Self {
        let s0 = s.rem_euclid(2 * m);
        UnaryTheta { m, s: s0.min(2 * m - s0) }
    }

    pub fn leading_exponent(&self) -> Rational {
        rat(self.s * self.s, 4 * self.m)
    }

    pub fn render(&self) -> String {
        format!("θ⁰_{{{},{}}}", self.m, self.s)
    }
}

/// `H_r` as a combination of unary thetas, for `0 < r < m` (or all `r` without symmetry).
#[derive(Clone, Debug, Serialize)]
pub struct ThetaCombination {
    pub r: i64,
    pub terms: Vec<(UnaryTheta, String)>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NewFunction {
    Zero {
        reason: String,
    },
    Found {
        /// Components `H_r` in the chosen theta basis.
        components: Vec<ThetaCombination>,
        /// The hat-notation expression of `psi`.
        expression: String,
        /// The scalar divided out to normalise the first coefficient.
        normalisation: String,
        /// Its phase when that scalar is a rational multiple of a root of unity.
        phase_removed: Option<Phase>,
    },
}

/// The output of the solver with the intermediate data the report shows.
#[derive(Clone, Debug)]
pub struct NewFunctionResult {
    pub result: NewFunction,
    pub dimension: usize,
    pub function: Option<TwinedFunction>,
    /// The stabiliser generators used, with `lambda(gamma)`.
    pub generators: Vec<(Sl2, Cyclotomic)>,
    /// Span size per component before the eigenvalue conditions.
    pub span_sizes: BTreeMap<i64, usize>,
}

impl NewFunctionResult {
    fn zero(reason: impl Into<String>) -> Self {
        NewFunctionResult {
            result: NewFunction::Zero { reason: reason.into() },
            dimension: 0,
            function: None,
            generators: Vec::new(),
            span_sizes: BTreeMap::new(),
        }
    }
}

/// Integer matrices generating the stabiliser of `p` (up to conjugation),
/// from a Schreier transversal of its `SL2(Z)`-orbit.
pub fn stabilizer_generators(group: &Group, canon: &PairCanonicalizer, p: CommutingPair) -> Result<Vec<Sl2>> {
    let start = canon.canonical(p);
    let mut word: HashMap<CommutingPair, Sl2> = HashMap::from([(start, evaluate_letters(&[]))]);
    let mut queue = VecDeque::from([start]);
    let mut order = vec![start];
    while let Some(c) = queue.pop_front() {
        for l in [Letter::S, Letter::T] {
            let d = canon.canonical(sl2_act(group, &l.matrix(), c)?);
            if !word.contains_key(&d) {
                word.insert(d, sl2_mul(&word[&c], &l.matrix()));
                queue.push_back(d);
                order.push(d);
            }
        }
    }
    let mut gens: Vec<Sl2> = Vec::new();
    for c in &order {
        for l in [Letter::S, Letter::T] {
            let d = canon.canonical(sl2_act(group, &l.matrix(), *c)?);
            let u = sl2_mul(&word[c], &l.matrix());
            let g = sl2_mul(&u, &crate::groups::congruence::sl2_inv(&word[&d]));
            if g != evaluate_letters(&[]) && !gens.contains(&g) {
                gens.push(g);
            }
        }
    }
    Ok(gens)
}

/// `lambda(gamma) = xi_p(k) / varsigma_p(gamma)` with `p . gamma = p|^k`.
fn eigenvalue(lam: &Lambency, p: CommutingPair, gamma: &Sl2) -> Result<Phase> {
    let group = lam.group();
    let word = crate::groups::sl2_word(gamma)?;
    let (sigma, image) = multiplier_on_word(&lam.omega, group, p, &word.letters);
    let k = (0..group.order())
        .find(|&k| conj_pair(group, p, k) == image)
        .ok_or_else(|| Error::Data(format!("{gamma:?} does not stabilise the pair")))?;
    Ok(xi_phase(&lam.omega, group, p, k)? - sigma)
}

/// Exponents of `H_{(g,e),r}` lie in `-r^2/4m + (phi + Z)/n`, `n = o(g)`, where
/// `e(-phi)` is the multiplier of `T^n` at `(g, e)`.
fn support_offset(lam: &Lambency, g: usize) -> (Rational, i64) {
    let group = lam.group();
    let n = group.elem_order(g);
    let p = CommutingPair { g, h: 0 };
    let (sigma, _) = multiplier_on_word(&lam.omega, group, p, &vec![Letter::T; n]);
    (-sigma.value(), n as i64)
}

fn in_support(alpha: &Rational, r: i64, m: i64, offset: &Rational, n: i64) -> bool {
    ((alpha + rat(r * r, 4 * m)) * rat(n, 1) - offset).is_integer()
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Coefficient vectors over a shared exponent list.
struct CoefficientSpace {
    truncation: Rational,
    index: BTreeMap<Rational, usize>,
    cache: HashMap<UnaryTheta, QExpansion>,
}

impl CoefficientSpace {
    fn new(truncation: Rational) -> Self {
        CoefficientSpace { truncation, index: BTreeMap::new(), cache: HashMap::new() }
    }

    fn series(&mut self, t: UnaryTheta) -> QExpansion {
        let tr = self.truncation.clone();
        self.cache.entry(t).or_insert_with(|| unary_theta(t.m, t.s, &tr)).clone()
    }

    fn register(&mut self, t: UnaryTheta) {
        let f = self.series(t);
        for (a, _) in f.terms() {
            let n = self.index.len();
            self.index.entry(a.clone()).or_insert(n);
        }
    }

    fn finish(&mut self) {
        let keys: Vec<Rational> = self.index.keys().cloned().collect();
        self.index = keys.into_iter().enumerate().map(|(i, a)| (a, i)).collect();
    }

    fn dim(&self) -> usize {
        self.index.len()
    }

    fn vector(&mut self, combo: &[(UnaryTheta, Cyclotomic)]) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); self.dim()];
        for (t, c) in combo {
            let f = self.series(*t);
            for (a, x) in f.terms() {
                v[self.index[a]] += &(x * c);
            }
        }
        v
    }
}

/// `theta^0_{m'}|_{1/2} gamma = (rho_{m'}(gamma)^T)^-1 theta^0_{m'}`, as the images of
/// the reduced basis functions.
fn unary_action(mp: i64, gamma: &Sl2, cache: &mut HashMap<(i64, Sl2), CycMatrix>) -> Result<CycMatrix> {
    if let Some(x) = cache.get(&(mp, *gamma)) {
        return Ok(x.clone());
    }
    let rho = weil_rep(mp, gamma)?.matrix;
    let inv = rho.transpose().inverse().ok_or_else(|| Error::LinAlg("Weil matrix is singular".into()))?;
    cache.insert((mp, *gamma), inv.clone());
    Ok(inv)
}

/// Keeps the candidates whose coefficient vectors are independent of the
/// earlier ones, by incremental row reduction.
fn independent_subset(cands: &[UnaryTheta], space: &mut CoefficientSpace) -> Vec<UnaryTheta> {
    let mut pivots: Vec<(usize, Vec<Cyclotomic>)> = Vec::new();
    let mut kept = Vec::new();
    for t in cands {
        let mut v = space.vector(&[(*t, Cyclotomic::one())]);
        for (p, row) in &pivots {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &(&c * y);
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].inverse().expect("nonzero pivot");
            let row: Vec<Cyclotomic> = v.iter().map(|x| x * &inv).collect();
            pivots.push((p, row));
            kept.push(*t);
        }
    }
    kept
}

/// The simultaneous eigenspace of `H|_{1/2} gamma = lambda rho_m(gamma) H`
/// for `H_r` in the span of `spans[r]`.
#[derive(Clone, Debug)]
pub struct ThetaEigenspace {
    pub dimension: usize,
    /// Span size per component after removing dependent thetas.
    pub span_sizes: BTreeMap<i64, usize>,
    /// The normalised generator when the eigenspace is a line.
    pub solution: Option<ThetaSolution>,
}

#[derive(Clone, Debug)]
pub struct ThetaSolution {
    pub components: Vec<ThetaCombination>,
    pub h: VectorValuedForm,
    /// The scalar divided out by the normalisation.
    pub factor: Cyclotomic,
}

/// Solves the eigen-equations with coefficients compared below `truncation`.
/// Under odd symmetry only `0 < r < m` carry variables and `H_{-r} = -H_r`.
pub fn solve_theta_eigenspace(
    m: i64,
    symmetry: Symmetry,
    spans: &BTreeMap<i64, Vec<UnaryTheta>>,
    gens: &[(Sl2, Cyclotomic)],
    truncation: Rational,
) -> Result<ThetaEigenspace> {
    let mut space = CoefficientSpace::new(truncation);
    let mut all: Vec<UnaryTheta> = spans.values().flatten().copied().collect();
    all.sort();
    all.dedup();
    let mut registered = std::collections::BTreeSet::new();
    for t in &all {
        for sp in 0..=t.m {
            if registered.insert((t.m, sp)) {
                space.register(UnaryTheta { m: t.m, s: sp });
            }
        }
    }
    space.finish();
    let mut basis: BTreeMap<i64, Vec<UnaryTheta>> = BTreeMap::new();
    let mut span_sizes = BTreeMap::new();
    for (r, cands) in spans {
        let kept = independent_subset(cands, &mut space);
        span_sizes.insert(*r, kept.len());
        basis.insert(*r, kept);
    }
    let vars: Vec<(i64, UnaryTheta)> = basis.iter().flat_map(|(r, c)| c.iter().map(move |t| (*r, *t))).collect();
    if vars.is_empty() {
        return Ok(ThetaEigenspace { dimension: 0, span_sizes, solution: None });
    }
    // H_r = e H_rr for the variable component rr.
    let sign_of = |r: i64| -> Option<(i64, i64)> {
        let r0 = r.rem_euclid(2 * m);
        match symmetry {
            Symmetry::Odd => match epsilon(m, r0) {
                0 => None,
                1 => Some((r0, 1)),
                _ => Some((2 * m - r0, -1)),
            },
            _ => Some((r0, 1)),
        }
    };
    let mut weil_cache = HashMap::new();
    let d = space.dim();
    let mut rows: Vec<Vec<Cyclotomic>> = Vec::new();
    for (gamma, lambda) in gens {
        let rho_m = weil_rep(m, gamma)?.matrix;
        // Column j: component r of (H|gamma - lambda rho_m H) for H = e_j.
        let mut block = vec![vec![Cyclotomic::zero(); vars.len()]; (2 * m) as usize * d];
        for (j, (rv, t)) in vars.iter().enumerate() {
            let act = unary_action(t.m, gamma, &mut weil_cache)?;
            let image: Vec<(UnaryTheta, Cyclotomic)> =
                (0..2 * t.m).map(|sp| (UnaryTheta::reduced(t.m, sp), act.row(t.s as usize)[sp as usize].clone())).collect();
            let image_vec = space.vector(&image);
            let base_vec = space.vector(&[(*t, Cyclotomic::one())]);
            for r in 0..2 * m {
                let Some((rr, e)) = sign_of(r) else { continue };
                if rr != *rv {
                    continue;
                }
                let e = Cyclotomic::from_int(e);
                for (i, x) in image_vec.iter().enumerate() {
                    block[r as usize * d + i][j] += &(x * &e);
                }
            }
            for r in 0..2 * m {
                for rp in 0..2 * m {
                    let Some((rr, e)) = sign_of(rp) else { continue };
                    if rr != *rv {
                        continue;
                    }
                    let c = &rho_m.row(r as usize)[rp as usize] * lambda * Cyclotomic::from_int(e);
                    if c.is_zero() {
                        continue;
                    }
                    for (i, x) in base_vec.iter().enumerate() {
                        block[r as usize * d + i][j] -= &(x * &c);
                    }
                }
            }
        }
        rows.extend(block.into_iter().filter(|row| row.iter().any(|x| !x.is_zero())));
    }
    let null = if rows.is_empty() {
        (0..vars.len())
            .map(|j| (0..vars.len()).map(|i| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() }).collect())
            .collect()
    } else {
        CycMatrix::from_rows(rows).nullspace()
    };
    let dimension = null.len();
    if dimension != 1 {
        return Ok(ThetaEigenspace { dimension, span_sizes, solution: None });
    }
    let (x, factor) = normalise(&vars, &null[0], &mut space);
    let mut components = Vec::new();
    let mut h = VectorValuedForm::zero(m, rat(1, 2), &space.truncation, symmetry);
    for r in basis.keys() {
        let terms: Vec<(UnaryTheta, Cyclotomic)> =
            vars.iter().zip(&x).filter(|((rv, _), c)| rv == r && !c.is_zero()).map(|((_, t), c)| (*t, c.clone())).collect();
        if terms.is_empty() {
            continue;
        }
        let modulus = terms.iter().fold(4 * m as u64, |acc, (t, _)| num::integer::lcm(acc, 4 * t.m as u64));
        let mut f = QExpansion::new(space.truncation.clone(), modulus);
        for (t, c) in &terms {
            for (a, y) in space.series(*t).terms() {
                f.add_term(a.clone(), y * c);
            }
        }
        *h.component_mut(*r) = f.clone();
        if symmetry == Symmetry::Odd {
            *h.component_mut(-*r) = f.neg();
        }
        components.push(ThetaCombination { r: *r, terms: terms.iter().map(|(t, c)| (*t, c.to_string())).collect() });
    }
    Ok(ThetaEigenspace { dimension, span_sizes, solution: Some(ThetaSolution { components, h, factor }) })
}

/// Solves for `H` at the pair `p`.
pub fn build_new_function(lam: &Lambency, canon: &PairCanonicalizer, p: CommutingPair, symmetry: Symmetry) -> Result<NewFunctionResult> {
    let group = lam.group();
    let m = lam.index();
    let obstruction = obstruction_check(&lam.omega, group, p)?;
    if obstruction.is_obstructed() {
        return Ok(NewFunctionResult::zero("obstructed: varsigma(-I) differs from xi"));
    }
    for k in 0..group.order() {
        if conj_pair(group, p, k) == p && !xi_phase(&lam.omega, group, p, k)?.is_one() {
            return Ok(NewFunctionResult::zero(format!("xi(k) is nontrivial on the centraliser element {k}")));
        }
    }
    let components: Vec<i64> = match symmetry {
        Symmetry::Odd => (1..m).filter(|&r| epsilon(m, r) != 0).collect(),
        _ => (0..2 * m).collect(),
    };
    let level = pair_level(group, p) as i64;
    let (offset, n) = support_offset(lam, p.g);
    let primes: Vec<i64> = divisors(m * level * level);
    let max_m = *primes.last().unwrap();
    let mut spans: BTreeMap<i64, Vec<UnaryTheta>> = BTreeMap::new();
    for &r in &components {
        let mut cands = Vec::new();
        for &mp in &primes {
            for s in 0..=mp {
                let t = UnaryTheta { m: mp, s };
                if in_support(&t.leading_exponent(), r, m, &offset, n) {
                    cands.push(t);
                }
            }
        }
        spans.insert(r, cands);
    }
    if spans.values().all(|c| c.is_empty()) {
        let mut out = NewFunctionResult::zero("empty admissible support");
        out.span_sizes = spans.keys().map(|r| (*r, 0)).collect();
        return Ok(out);
    }
    let mut generators = Vec::new();
    for gamma in stabilizer_generators(group, canon, p)? {
        generators.push((gamma, Cyclotomic::root(eigenvalue(lam, p, &gamma)?)));
    }
    let eig = solve_theta_eigenspace(m, symmetry, &spans, &generators, rat(max_m + 2, 1))?;
    if eig.dimension >= 2 {
        return Err(Error::EigenspaceDimension(eig.dimension));
    }
    let Some(sol) = eig.solution else {
        let mut out = NewFunctionResult::zero("trivial simultaneous eigenspace");
        out.generators = generators;
        out.span_sizes = eig.span_sizes;
        return Ok(out);
    };
    let expression = hat_expression(&sol.components, symmetry);
    let phase_removed = factor_phase(&sol.factor);
    let function = TwinedFunction::new(AppellLerchSum::zero(m), sol.h)?;
    Ok(NewFunctionResult {
        result: NewFunction::Found { components: sol.components, expression, normalisation: sol.factor.to_string(), phase_removed },
        dimension: 1,
        function: Some(function),
        generators,
        span_sizes: eig.span_sizes,
    })
}

/// Scales the solution so its first coefficient (lowest component, lowest
/// exponent) is 1, then clears denominators when all coefficients are rational.
fn normalise(vars: &[(i64, UnaryTheta)], v: &[Cyclotomic], space: &mut CoefficientSpace) -> (Vec<Cyclotomic>, Cyclotomic) {
    let mut best: Option<(i64, Rational, Cyclotomic)> = None;
    let comps: std::collections::BTreeSet<i64> = vars.iter().map(|(r, _)| *r).collect();
    for r in comps {
        let combo: Vec<(UnaryTheta, Cyclotomic)> =
            vars.iter().zip(v).filter(|((rv, _), _)| *rv == r).map(|((_, t), c)| (*t, c.clone())).collect();
        let vec = space.vector(&combo);
        let first = space.index.iter().find(|(_, &i)| !vec[i].is_zero()).map(|(a, &i)| (a.clone(), vec[i].clone()));
        if let Some((a, c)) = first {
            best = Some((r, a, c));
            break;
        }
    }
    let c = best.map(|b| b.2).unwrap_or_else(Cyclotomic::one);
    let inv = c.inverse().expect("nonzero leading coefficient");
    let mut x: Vec<Cyclotomic> = v.iter().map(|y| y * &inv).collect();
    let mut factor = c;
    if x.iter().all(|y| y.as_rational().is_some()) {
        let l = x
            .iter()
            .map(|y| y.as_rational().unwrap().denom().clone())
            .fold(num::BigInt::one(), |a, b| num::integer::lcm(a, b));
        let lr = Rational::from_integer(l);
        x = x.iter().map(|y| y.scale(&lr)).collect();
        factor = factor.scale(&lr.recip());
    }
    (x, factor)
}

/// The phase of `c` when `c` is a rational multiple of a root of unity.
fn factor_phase(c: &Cyclotomic) -> Option<Phase> {
    let n = 2 * c.conductor().max(1) as i64;
    (0..n).map(|k| Phase::new(k, n)).find(|&p| {
        c.mul_phase(p.inv()).as_rational().map(|q| q.is_positive()).unwrap_or(false)
    })
}

/// `psi = sum_r H_r r^` with `r^ = theta_{m,r} - theta_{m,-r}` under odd symmetry.
pub fn hat_expression(comps: &[ThetaCombination], symmetry: Symmetry) -> String {
    if comps.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = comps
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.terms.iter().map(|(t, x)| format!("{x}·{}", t.render())).collect();
            let basis = if symmetry == Symmetry::Odd { format!("{}\u{302}", c.r) } else { format!("θ_{{m,{}}}", c.r) };
            format!("({})·{basis}", inner.join(" + "))
        })
        .collect();
    parts.join(" + ")
}

/// Exponent summary used in reports.
pub fn render_support(lam: &Lambency, g: usize) -> String {
    let (offset, n) = support_offset(lam, g);
    format!("-r^2/4m + ({} + Z)/{n}", format_rational(&offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::Cochain;
    use crate::groups::classify_pairs;
    use crate::groups::small::abelian;
    use crate::moonshine::data::build_lambency;
    use crate::moonshine::synth::{synth_files, SynthSpec};

    const S: Sl2 = [0, -1, 1, 0];
    const T: Sl2 = [1, 1, 0, 1];

    /// `eta(tau) theta_1(tau, 2z)` has `H_1 = -H_3` proportional to
    /// `eta = theta^0_{6,1} - theta^0_{6,5}` and multiplier `e(1/6)` on `T`, `-1` on `S`.
    #[test]
    fn recovers_eta_theta() {
        let spans = BTreeMap::from([(1, (0..=12).map(|s| UnaryTheta { m: 12, s }).chain((0..=6).map(|s| UnaryTheta { m: 6, s })).collect())]);
        let gens = vec![(S, Cyclotomic::from_int(-1)), (T, Cyclotomic::root(Phase::new(1, 6)))];
        let eig = solve_theta_eigenspace(2, Symmetry::Odd, &spans, &gens, rat(8, 1)).unwrap();
        assert_eq!(eig.dimension, 1);
        let h = eig.solution.unwrap().h;
        let mut eta = QExpansion::new(rat(8, 1), 24);
        for n in (-20i64..=20).filter(|n| n.rem_euclid(2) == 1 && n.rem_euclid(3) != 0) {
            let sign = if n.rem_euclid(12) == 1 || n.rem_euclid(12) == 11 { 1 } else { -1 };
            if rat(n * n, 24) < rat(8, 1) && n > 0 {
                eta.add_term(rat(n * n, 24), Cyclotomic::from_int(sign));
            }
        }
        assert!(h.component(1).agrees_with(&eta), "{:?}", h.component(1));
        assert!(h.component(3).agrees_with(&eta.neg()));
        // A wrong multiplier has no solution in the same span.
        let wrong = vec![(S, Cyclotomic::from_int(1)), (T, Cyclotomic::root(Phase::new(1, 6)))];
        assert_eq!(solve_theta_eigenspace(2, Symmetry::Odd, &spans, &wrong, rat(8, 1)).unwrap().dimension, 0);
    }

    #[test]
    fn stabilizer_generators_fix_the_pair() {
        let g = abelian(&[2, 2]);
        let canon = PairCanonicalizer::new(&g);
        for o in classify_pairs(&g, &[]) {
            for gamma in stabilizer_generators(&g, &canon, o.representative).unwrap() {
                let image = sl2_act(&g, &gamma, o.representative).unwrap();
                assert_eq!(canon.canonical(image), canon.canonical(o.representative));
            }
        }
    }

    #[test]
    fn klein_four_new_orbits_have_dimension_at_most_one() {
        let g = abelian(&[2, 2]);
        let omega = Cochain::trivial(3, 4);
        let canon = PairCanonicalizer::new(&g);
        for (m, sym) in [(1, Symmetry::Unspecified), (2, Symmetry::Odd), (3, Symmetry::Odd)] {
            let spec = SynthSpec { label: "v4", index: m, group: &g, center_n: &[], omega: &omega, truncation: rat(4, 1), untwisted: BTreeMap::new() };
            let lam = build_lambency(&synth_files(&spec)).unwrap();
            for o in classify_pairs(&g, &[]).iter().filter(|o| !o.is_old) {
                let r = build_new_function(&lam, &canon, o.representative, sym).unwrap();
                assert!(r.dimension <= 1);
                assert_eq!(r.function.is_some(), r.dimension == 1);
            }
        }
    }
}
