//! Finite quotients `SL2(Z/N)` and the stabilizers of commuting pairs.

use std::collections::HashSet;

use serde::Serialize;

use super::pairs::{pair_level, sl2_act, CommutingPair, PairCanonicalizer};
use super::Group;
use crate::error::{Error, Result};

/// An integer 2x2 matrix `[a, b, c, d] = [[a, b], [c, d]]`.
pub type Sl2 = [i64; 4];

pub const IDENTITY: Sl2 = [1, 0, 0, 1];
pub const S: Sl2 = [0, -1, 1, 0];
pub const T: Sl2 = [1, 1, 0, 1];

pub fn sl2_mul(x: &Sl2, y: &Sl2) -> Sl2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn sl2_inv(x: &Sl2) -> Sl2 {
    [x[3], -x[1], -x[2], x[0]]
}

pub fn det(x: &Sl2) -> i64 {
    x[0] * x[3] - x[1] * x[2]
}

pub fn sl2_reduce(x: &Sl2, n: i64) -> Sl2 {
    x.map(|v| v.rem_euclid(n))
}

/// All elements of `SL2(Z/N)` with entries in `0..N`.
pub fn sl2_mod_elements(n: i64) -> Vec<Sl2> {
    if n == 1 {
        return vec![[0, 0, 0, 0]];
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if (a * d - b * c).rem_euclid(n) == 1 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceGroup {
    /// Modulus `N` at which the subgroup is described.
    pub level: i64,
    /// Sorted elements of the subgroup of `SL2(Z/N)`.
    #[serde(skip)]
    pub elements: Vec<Sl2>,
    pub generators: Vec<Sl2>,
    pub index: usize,
    pub name: Option<String>,
}

impl CongruenceGroup {
    pub fn from_elements(level: i64, mut elements: Vec<Sl2>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let total = sl2_mod_elements(level).len();
        let generators = generating_set(level, &elements);
        let index = total / elements.len().max(1);
        let mut g = CongruenceGroup { level, elements, generators, index, name: None };
        g.name = recognize_congruence(&g);
        g
    }

    pub fn contains(&self, x: &Sl2) -> bool {
        self.elements.binary_search(&sl2_reduce(x, self.level)).is_ok()
    }

    pub fn name_or_unrecognized(&self) -> String {
        self.name.clone().unwrap_or_else(|| "unrecognized".to_string())
    }
}

fn closure(n: i64, gens: &[Sl2]) -> HashSet<Sl2> {
    let id = sl2_reduce(&IDENTITY, n);
    let mut set = HashSet::from([id]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = sl2_reduce(&sl2_mul(&x, g), n);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

fn generating_set(n: i64, elements: &[Sl2]) -> Vec<Sl2> {
    let mut gens: Vec<Sl2> = Vec::new();
    let mut span = closure(n, &gens);
    for x in elements {
        if span.len() == elements.len() {
            break;
        }
        if !span.contains(x) {
            gens.push(*x);
            span = closure(n, &gens);
        }
    }
    gens
}

/// Subgroup of `SL2(Z/N)`, `N` the exponent of `<g, h>`, of all `gamma` with
/// `gamma(g, h)` simultaneously conjugate to `(g, h)`.
pub fn stabilizer_group(group: &Group, pair: CommutingPair) -> Result<CongruenceGroup> {
    let canon = PairCanonicalizer::new(group);
    stabilizer_with(group, &canon, pair)
}

pub fn stabilizer_with(group: &Group, canon: &PairCanonicalizer, pair: CommutingPair) -> Result<CongruenceGroup> {
    if !group.commutes(pair.g, pair.h) {
        return Err(Error::NonCommuting(pair.g, pair.h));
    }
    let n = pair_level(group, pair) as i64;
    let target = canon.canonical(pair);
    let mut elems = Vec::new();
    for gamma in sl2_mod_elements(n) {
        if canon.canonical(sl2_act(group, &gamma, pair)?) == target {
            elems.push(gamma);
        }
    }
    Ok(CongruenceGroup::from_elements(n, elems))
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `H(p,q,r) = { gamma = I mod [[p, q], [r, p]] }`, a group iff `p | qr`.
pub fn h_member(p: i64, q: i64, r: i64, x: &Sl2) -> bool {
    (x[0] - 1).rem_euclid(p) == 0 && (x[3] - 1).rem_euclid(p) == 0 && x[1].rem_euclid(q) == 0 && x[2].rem_euclid(r) == 0
}

/// Validates the parameters of `H(p,q,r)`.
pub fn h_group(p: i64, q: i64, r: i64) -> Result<(i64, i64, i64)> {
    if p <= 0 || q <= 0 || r <= 0 || (q * r) % p != 0 {
        return Err(Error::Congruence(format!("H({p},{q},{r}) is not a group: p must divide qr")));
    }
    Ok((p, q, r))
}

fn gamma_4a4c(x: &Sl2) -> bool {
    h_member(2, 2, 2, x) && (x[0] + x[1] + x[2] - 1).rem_euclid(4) == 0
}

fn family_name(p: i64, q: i64, r: i64) -> String {
    if p == 1 && q == 1 && r == 1 {
        "SL2(Z)".to_string()
    } else if p == 1 && q == 1 {
        format!("Gamma0({r})")
    } else if q == 1 && p == r {
        format!("Gamma1({r})")
    } else if p == q && q == r {
        format!("Gamma({p})")
    } else {
        format!("H({p},{q},{r})")
    }
}

/// Names the subgroup when it is the image of `SL2(Z)`, `Gamma0`, `Gamma1`,
/// `Gamma`, `H(p,q,r)` or `Gamma(4A,4c)`, possibly extended by `-I`.
///
/// Recognition is by exact comparison of element sets in `SL2(Z/N)`.
pub fn recognize_congruence(h: &CongruenceGroup) -> Option<String> {
    let n = h.level;
    let all = sl2_mod_elements(n);
    let set: HashSet<Sl2> = h.elements.iter().copied().collect();
    let matches = |pred: &dyn Fn(&Sl2) -> bool| all.iter().all(|x| pred(x) == set.contains(x));
    let neg = |x: &Sl2| sl2_reduce(&x.map(|v| -v), n.max(1));
    let divs = divisors(n);
    // Candidates in preference order: SL2(Z), Gamma0, Gamma1, Gamma, general H.
    let mut cands: Vec<(i64, i64, i64)> = vec![(1, 1, 1)];
    cands.extend(divs.iter().filter(|&&r| r > 1).map(|&r| (1, 1, r)));
    cands.extend(divs.iter().filter(|&&r| r > 1).map(|&r| (r, 1, r)));
    cands.extend(divs.iter().filter(|&&r| r > 1).map(|&r| (r, r, r)));
    for &p in &divs {
        for &q in &divs {
            for &r in &divs {
                if (q * r) % p == 0 && !cands.contains(&(p, q, r)) {
                    cands.push((p, q, r));
                }
            }
        }
    }
    for &(p, q, r) in &cands {
        if matches(&|x| h_member(p, q, r, x)) {
            return Some(family_name(p, q, r));
        }
    }
    if n % 4 == 0 && matches(&gamma_4a4c) {
        return Some("Gamma(4A,4c)".to_string());
    }
    for &(p, q, r) in &cands {
        if matches(&|x| h_member(p, q, r, x) || h_member(p, q, r, &neg(x))) {
            return Some(format!("+-{}", family_name(p, q, r)));
        }
    }
    if n % 4 == 0 && matches(&|x| gamma_4a4c(x) || gamma_4a4c(&neg(x))) {
        return Some("+-Gamma(4A,4c)".to_string());
    }
    None
}

/// A letter of the alphabet `{S, T, T^-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Letter {
    S,
    T,
    TInv,
}

impl Letter {
    pub fn matrix(self) -> Sl2 {
        match self {
            Letter::S => S,
            Letter::T => T,
            Letter::TInv => [1, -1, 0, 1],
        }
    }
}

/// A word in `S, T, T^-1` whose product is `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2Word {
    pub letters: Vec<Letter>,
    pub target: Sl2,
}

impl Sl2Word {
    pub fn evaluate(&self) -> Sl2 {
        evaluate_letters(&self.letters)
    }

    pub fn render(&self) -> String {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::S => "S",
                Letter::T => "T",
                Letter::TInv => "t",
            })
            .collect()
    }
}

pub fn evaluate_letters(letters: &[Letter]) -> Sl2 {
    letters.iter().fold(IDENTITY, |m, l| sl2_mul(&m, &l.matrix()))
}

/// Rounding rule for the Euclidean quotients in [`sl2_word_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordStrategy {
    Floor,
    Ceil,
}

/// Decomposes `gamma` into `S, T, T^-1` by Euclidean reduction of its first column.
pub fn sl2_word(gamma: &Sl2) -> Result<Sl2Word> {
    sl2_word_with(gamma, WordStrategy::Floor)
}

pub fn sl2_word_with(gamma: &Sl2, strategy: WordStrategy) -> Result<Sl2Word> {
    if det(gamma) != 1 {
        return Err(Error::Determinant(det(gamma)));
    }
    let mut letters = Vec::new();
    let mut m = *gamma;
    let push_t = |letters: &mut Vec<Letter>, q: i64| {
        let l = if q >= 0 { Letter::T } else { Letter::TInv };
        letters.extend(std::iter::repeat(l).take(q.unsigned_abs() as usize));
    };
    // Invariant: gamma = letters * m.
    while m[2] != 0 {
        let (a, c) = (m[0], m[2]);
        let q = match strategy {
            WordStrategy::Floor => a.div_euclid(c),
            WordStrategy::Ceil => -((-a).div_euclid(c)),
        };
        push_t(&mut letters, q);
        m = sl2_mul(&[1, -q, 0, 1], &m);
        letters.push(Letter::S);
        // S^-1 m = [[c, d], [-a, -b]]
        m = [m[2], m[3], -m[0], -m[1]];
    }
    if m[0] == 1 {
        push_t(&mut letters, m[1]);
    } else {
        // m = -T^(-b) = S S T^(-b)
        letters.push(Letter::S);
        letters.push(Letter::S);
        push_t(&mut letters, -m[1]);
    }
    let w = Sl2Word { letters, target: *gamma };
    debug_assert_eq!(w.evaluate(), *gamma);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::super::small::*;
    use super::*;

    #[test]
    fn words_evaluate_to_targets() {
        assert_eq!(sl2_word(&T).unwrap().render(), "T");
        assert_eq!(sl2_word(&[-1, 0, 0, -1]).unwrap().render(), "SS");
        let m = [1, 0, 1, 1];
        for st in [WordStrategy::Floor, WordStrategy::Ceil] {
            assert_eq!(sl2_word_with(&m, st).unwrap().evaluate(), m);
        }
        for m in [[2, 3, 3, 5], [-7, 4, 12, -7], [13, 8, -18, -11], [0, -1, 1, 20]] {
            assert_eq!(det(&m), 1);
            assert_eq!(sl2_word(&m).unwrap().evaluate(), m);
            assert_eq!(sl2_word_with(&m, WordStrategy::Ceil).unwrap().evaluate(), m);
        }
        assert!(matches!(sl2_word(&[2, 0, 0, 1]), Err(Error::Determinant(2))));
    }

    #[test]
    fn sl2_mod_sizes() {
        assert_eq!(sl2_mod_elements(2).len(), 6);
        assert_eq!(sl2_mod_elements(3).len(), 24);
        assert_eq!(sl2_mod_elements(4).len(), 48);
        assert_eq!(sl2_mod_elements(6).len(), 144);
    }

    #[test]
    fn trivial_pair_is_stabilized_by_everything() {
        let g = cyclic(3);
        let st = stabilizer_group(&g, CommutingPair { g: 0, h: 0 }).unwrap();
        assert_eq!(st.name.as_deref(), Some("SL2(Z)"));
        assert_eq!(st.index, 1);
    }

    #[test]
    fn named_families_are_recognized() {
        for n in [2i64, 3, 4, 6] {
            let all = sl2_mod_elements(n);
            let gamma0: Vec<Sl2> = all.iter().copied().filter(|x| x[2] == 0).collect();
            assert_eq!(CongruenceGroup::from_elements(n, gamma0).name, Some(format!("Gamma0({n})")));
            let gamma: Vec<Sl2> = vec![sl2_reduce(&IDENTITY, n)];
            assert_eq!(CongruenceGroup::from_elements(n, gamma).name, Some(format!("Gamma({n})")));
            let full = CongruenceGroup::from_elements(n, all.clone());
            assert_eq!(full.name.as_deref(), Some("SL2(Z)"));
        }
        let all = sl2_mod_elements(4);
        let special: Vec<Sl2> = all.iter().copied().filter(gamma_4a4c).collect();
        assert_eq!(CongruenceGroup::from_elements(4, special).name.as_deref(), Some("Gamma(4A,4c)"));
        assert!(h_group(2, 1, 1).is_err());
        assert!(h_group(2, 2, 1).is_ok());
    }

    #[test]
    fn cyclic_group_untwisted_pairs() {
        // (e, g) in Z/N: gamma(e,g) = (g^c, g^d), fixed iff c = 0, d = 1 mod N.
        for n in [2usize, 3, 4, 5] {
            let g = cyclic(n);
            let st = stabilizer_group(&g, CommutingPair { g: 0, h: 1 }).unwrap();
            let expect = if n == 2 { "Gamma0(2)".to_string() } else { format!("Gamma1({n})") };
            assert_eq!(st.name, Some(expect));
        }
    }

    #[test]
    fn diagonal_involution_pair() {
        let g = cyclic(2);
        let st = stabilizer_group(&g, CommutingPair { g: 1, h: 1 }).unwrap();
        for x in &st.elements {
            assert_eq!((x[0] + x[2]) % 2, 1);
            assert_eq!((x[1] + x[3]) % 2, 1);
        }
        assert_eq!(st.elements.len(), 2);
    }

    #[test]
    fn orbit_stabilizer_counts() {
        use super::super::pairs::classify_pairs;
        for g in [symmetric(3), quaternion(), dihedral(4), abelian(&[2, 2])] {
            let canon = PairCanonicalizer::new(&g);
            for o in classify_pairs(&g, &[]) {
                let st = stabilizer_with(&g, &canon, o.representative).unwrap();
                // SL2(Z/N) acts transitively on the conjugation classes of the orbit.
                assert_eq!(st.index, o.members.len());
            }
        }
    }
}
