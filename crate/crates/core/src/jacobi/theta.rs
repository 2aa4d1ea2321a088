//! Index-m theta functions and unary theta series.

use num::integer::Roots;
use num::{ToPrimitive, Zero};

use crate::numeric::{rat, Cyclotomic, JacobiExpansion, QExpansion, Rational};

/// Largest `k >= 0` with `k^2 / 4m < t` is below this bound.
fn k_bound(m: i64, t: &Rational) -> i64 {
    if *t <= Rational::zero() {
        return 0;
    }
    let x = (t * rat(4 * m, 1)).ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4);
    x.sqrt() + 2
}

/// `theta_{m,r} = sum_{k = r mod 2m} q^(k^2/4m) y^k`, known below `q^truncation`.
pub fn theta_mr(m: i64, r: i64, truncation: &Rational) -> JacobiExpansion {
    assert!(m >= 1, "theta index must be positive");
    let mut out = JacobiExpansion::new(m, truncation.clone(), 4 * m as u64, None);
    let kb = k_bound(m, truncation);
    let r0 = r.rem_euclid(2 * m);
    let mut k = r0 - 2 * m * ((kb + r0) / (2 * m) + 1);
    while k <= kb {
        out.add_term(rat(k * k, 4 * m), k, Cyclotomic::one());
        k += 2 * m;
    }
    out
}

/// `theta^0_{m,s} = sum_k q^((2mk + s)^2 / 4m)`.
pub fn unary_theta(m: i64, s: i64, truncation: &Rational) -> QExpansion {
    theta_mr(m, s, truncation).at_y_one()
}

/// The vector `(theta_{m,r})` for `r = 0, ..., 2m - 1`.
#[derive(Clone, Debug)]
pub struct ThetaVector {
    pub m: i64,
    pub components: Vec<JacobiExpansion>,
    pub truncation: Rational,
}

impl ThetaVector {
    pub fn new(m: i64, truncation: &Rational) -> Self {
        let components = (0..2 * m).map(|r| theta_mr(m, r, truncation)).collect();
        ThetaVector { m, components, truncation: truncation.clone() }
    }

    pub fn component(&self, r: i64) -> &JacobiExpansion {
        &self.components[r.rem_euclid(2 * self.m) as usize]
    }
}

/// The substitution `y -> y^-1` on an expansion.
pub fn invert_y(f: &JacobiExpansion) -> JacobiExpansion {
    let mut out = JacobiExpansion::new(f.index(), f.q_truncation().clone(), f.q_modulus(), f.y_window());
    for ((a, b), c) in f.terms() {
        out.add_term(a.clone(), -b, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Cyclotomic {
        Cyclotomic::one()
    }

    #[test]
    fn index_one_thetas() {
        let t = rat(5, 1);
        let th0 = theta_mr(1, 0, &t);
        let mut expect = JacobiExpansion::new(1, t.clone(), 4, None);
        for (a, b) in [(0, 0), (1, 2), (1, -2), (4, 4), (4, -4)] {
            expect.add_term(rat(a, 1), b, one());
        }
        assert_eq!(th0.terms().collect::<Vec<_>>(), expect.terms().collect::<Vec<_>>());
        let th1 = theta_mr(1, 1, &t);
        let mut expect = JacobiExpansion::new(1, t.clone(), 4, None);
        for (a, b) in [(1, 1), (1, -1), (9, 3), (9, -3)] {
            expect.add_term(rat(a, 4), b, one());
        }
        assert_eq!(th1.terms().collect::<Vec<_>>(), expect.terms().collect::<Vec<_>>());
    }

    #[test]
    fn periodicity_and_reflection() {
        let t = rat(12, 1);
        for m in 1..5 {
            for r in -2 * m..2 * m {
                let a = theta_mr(m, r, &t);
                assert!(a.agrees_with(&theta_mr(m, r + 2 * m, &t)));
                assert!(invert_y(&a).agrees_with(&theta_mr(m, -r, &t)));
            }
        }
    }

    #[test]
    fn unary_examples() {
        let t = rat(5, 1);
        let u0 = unary_theta(1, 0, &t);
        let expect = QExpansion::from_terms(
            [(rat(0, 1), one()), (rat(1, 1), Cyclotomic::from_int(2)), (rat(4, 1), Cyclotomic::from_int(2))],
            t.clone(),
            1,
        )
        .unwrap();
        assert!(u0.agrees_with(&expect));
        let u1 = unary_theta(1, 1, &t);
        let expect = QExpansion::from_terms(
            [(rat(1, 4), Cyclotomic::from_int(2)), (rat(9, 4), Cyclotomic::from_int(2))],
            t.clone(),
            4,
        )
        .unwrap();
        assert!(u1.agrees_with(&expect));
        for m in 1..6 {
            for s in 0..2 * m {
                let u = unary_theta(m, s, &t);
                assert!(u.agrees_with(&unary_theta(m, -s, &t)));
                assert!(u.agrees_with(&unary_theta(m, s + 2 * m, &t)));
                if s != 0 && s != m {
                    // theta_{m,s} and theta_{m,-s} each specialise to the unary series.
                    let both = theta_mr(m, s, &t).add(&theta_mr(m, -s, &t)).unwrap().at_y_one();
                    assert!(both.agrees_with(&u.scale(&Cyclotomic::from_int(2))));
                }
            }
        }
    }

    #[test]
    fn truncation_is_respected() {
        let t = rat(7, 3);
        let th = theta_mr(3, 2, &t);
        assert!(th.terms().all(|((a, _), _)| *a < t));
        // k = 2, -4, 8, -10 give exponents 1/3, 4/3, 16/3, 25/3
        assert_eq!(th.len(), 2);
    }
}
