//! The Weil representation attached to the index-m theta vector.
//!
//! Convention: `sum_r (theta|_{1/2,m} gamma)_r rho(gamma)_{r r'} = theta_{r'}`,
//! so that `rho(g1 g2) = s(g1, g2) rho(g1) rho(g2)` with a sign `s` coming from
//! the principal branch of `(c tau + d)^(1/2)`.

use num::complex::Complex64;

use super::numeric::{automorphy, automorphy_power, mobius};
use crate::error::Result;
use crate::groups::congruence::{sl2_mul, sl2_word, Letter, Sl2, Sl2Word, IDENTITY};
use crate::numeric::linalg::CycMatrix;
use crate::numeric::{rat, Cyclotomic, Phase};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilMatrix {
    pub m: i64,
    pub word: Sl2Word,
    pub matrix: CycMatrix,
}

pub fn rho_t(m: i64, inverse: bool) -> CycMatrix {
    let sign = if inverse { 1 } else { -1 };
    CycMatrix::diagonal((0..2 * m).map(|r| Cyclotomic::root(Phase::from_rational(&rat(sign * r * r, 4 * m)))).collect())
}

/// `e(1/8) / sqrt(2m) [e(r r'/2m)]`.
pub fn rho_s(m: i64) -> CycMatrix {
    let n = 2 * m;
    let scalar = Cyclotomic::root(Phase::new(1, 8))
        * Cyclotomic::sqrt_int(n as u64).inverse().expect("nonzero square root");
    let rows = (0..n)
        .map(|r| (0..n).map(|rp| &scalar * &Cyclotomic::root(Phase::new(r * rp, n))).collect())
        .collect();
    CycMatrix::from_rows(rows)
}

pub fn letter_matrix(m: i64, l: Letter) -> CycMatrix {
    match l {
        Letter::S => rho_s(m),
        Letter::T => rho_t(m, false),
        Letter::TInv => rho_t(m, true),
    }
}

/// `s(g1, g2) = sqrt(j(g1 g2, tau)) / (sqrt(j(g1, g2 tau)) sqrt(j(g2, tau)))`, which is `+-1`
/// and independent of `tau`.
pub fn branch_sign(g1: &Sl2, g2: &Sl2) -> i64 {
    let tau = Complex64::new(0.123, 1.37);
    let g12 = sl2_mul(g1, g2);
    let root = |j: Complex64| automorphy_power(j, -0.5);
    let v = root(automorphy(&g12, tau)) / (root(automorphy(g1, mobius(g2, tau))) * root(automorphy(g2, tau)));
    debug_assert!((v.norm() - 1.0).abs() < 1e-9 && v.im.abs() < 1e-9);
    if v.re > 0.0 {
        1
    } else {
        -1
    }
}

/// `rho_m` along a word, tracking the branch sign at every step.
pub fn weil_rep_word(m: i64, word: &Sl2Word) -> WeilMatrix {
    let mut acc = IDENTITY;
    let mut mat = CycMatrix::identity(2 * m as usize);
    let mut sign = 1;
    for l in &word.letters {
        let lm = l.matrix();
        sign *= branch_sign(&acc, &lm);
        mat = mat.mul(&letter_matrix(m, *l));
        acc = sl2_mul(&acc, &lm);
    }
    debug_assert_eq!(acc, word.target);
    if sign < 0 {
        mat = mat.scale(&Cyclotomic::from_int(-1));
    }
    WeilMatrix { m, word: word.clone(), matrix: mat }
}

pub fn weil_rep(m: i64, g: &Sl2) -> Result<WeilMatrix> {
    Ok(weil_rep_word(m, &sl2_word(g)?))
}

impl WeilMatrix {
    pub fn is_unitary(&self) -> bool {
        self.matrix.mul(&self.matrix.conj_transpose()).is_identity()
    }
}

#[cfg(test)]
mod tests {
    use super::super::numeric::{balanced_point, c, weil_check};
    use super::*;
    use crate::groups::congruence::{sl2_inv, sl2_word_with, WordStrategy, S, T};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_sl2(rng: &mut ChaCha8Rng, bound: i64) -> Sl2 {
        loop {
            let a: i64 = rng.gen_range(-bound..=bound);
            let c: i64 = rng.gen_range(-bound..=bound);
            if num::integer::gcd(a, c) != 1 {
                continue;
            }
            // Solve a d - b c = 1 by the extended Euclidean algorithm, then shift.
            let e = num::integer::Integer::extended_gcd(&a, &c);
            let (mut d, mut b) = (e.x * e.gcd, -e.y * e.gcd);
            let k = rng.gen_range(-2..=2);
            d += k * c;
            b += k * a;
            let g = [a, b, c, d];
            if g.iter().all(|x| x.abs() <= bound) && a * d - b * c == 1 {
                return g;
            }
        }
    }

    #[test]
    fn generator_matrices() {
        for m in 1..4 {
            let id = weil_rep(m, &IDENTITY).unwrap();
            assert!(id.matrix.is_identity());
            let t = weil_rep(m, &T).unwrap();
            for r in 0..2 * m {
                assert_eq!(t.matrix.row(r as usize)[r as usize], Cyclotomic::root(Phase::from_rational(&rat(-r * r, 4 * m))));
            }
            let s = weil_rep(m, &S).unwrap();
            assert!(s.is_unitary());
            let s4 = weil_rep_word(m, &Sl2Word { letters: vec![Letter::S; 4], target: IDENTITY });
            assert!(s4.matrix.is_identity());
        }
    }

    #[test]
    fn s_transformation_at_reference_point() {
        for m in 1..4 {
            let rho = weil_rep(m, &S).unwrap();
            let r = weil_check(m, &S, &rho.matrix, &[(c(0.0, 1.0), c(0.1, 0.2))], 25.0).unwrap();
            assert!(r.passes(1e-8), "{r:?}");
        }
    }

    #[test]
    fn random_matrices_transform_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for m in 1..4 {
            for _ in 0..4 {
                let g = random_sl2(&mut rng, 20);
                let rho = weil_rep(m, &g).unwrap();
                assert!(rho.is_unitary());
                let pts: Vec<_> = [-0.3, 0.0, 0.4].iter().map(|s| (balanced_point(&g, *s), c(0.07, -0.05))).collect();
                let r = weil_check(m, &g, &rho.matrix, &pts, 25.0).unwrap();
                assert!(r.passes(1e-8), "m = {m}, gamma = {g:?}: {r:?}");
            }
        }
    }

    #[test]
    fn word_independence_and_projective_multiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let m = rng.gen_range(1..4);
            let g = random_sl2(&mut rng, 15);
            let a = weil_rep_word(m, &sl2_word_with(&g, WordStrategy::Floor).unwrap());
            let b = weil_rep_word(m, &sl2_word_with(&g, WordStrategy::Ceil).unwrap());
            assert_eq!(a.matrix, b.matrix);
            let h = random_sl2(&mut rng, 15);
            let gh = sl2_mul(&g, &h);
            let p = weil_rep(m, &g)
                .unwrap()
                .matrix
                .mul(&weil_rep(m, &h).unwrap().matrix)
                .mul(&weil_rep(m, &sl2_inv(&gh)).unwrap().matrix);
            let s = p.as_scalar().expect("scalar");
            assert!(s == Cyclotomic::one() || s == Cyclotomic::from_int(-1));
        }
    }
}
