//! Floating evaluation with an explicit error bound.

use std::f64::consts::PI;
use std::fmt;

use num::complex::Complex64;
use num::ToPrimitive;

use super::phase::Rational;
use super::qseries::QExpansion;
use crate::error::{Error, Result};

/// A complex number known to lie within `error_bound` of `value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexApprox {
    pub value: Complex64,
    pub error_bound: f64,
}

impl ComplexApprox {
    pub fn new(value: Complex64, error_bound: f64) -> Self {
        ComplexApprox { value, error_bound }
    }

    pub fn exact(value: Complex64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.value + o.value, self.error_bound + o.error_bound + rounding(self.value + o.value))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let v = self.value * o.value;
        let e = self.value.norm() * o.error_bound
            + o.value.norm() * self.error_bound
            + self.error_bound * o.error_bound
            + rounding(v);
        Self::new(v, e)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let v = self.value * z;
        Self::new(v, self.error_bound * z.norm() + rounding(v))
    }

    /// Whether the disc around `self` overlaps the disc around `o` once widened by `tol`.
    pub fn close_to(&self, o: &Self, tol: f64) -> bool {
        (self.value - o.value).norm() <= self.error_bound + o.error_bound + tol
    }
}

fn rounding(z: Complex64) -> f64 {
    4.0 * f64::EPSILON * z.norm()
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}{:+.12}i ± {:.2e}", self.value.re, self.value.im, self.error_bound)
    }
}

/// `e(x) = exp(2 pi i x)` for complex `x`.
pub fn e_complex(x: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * x).exp()
}

/// `q^alpha = e(alpha tau)` using the branch attached to `tau`.
pub fn q_power(alpha: &Rational, tau: Complex64) -> Complex64 {
    e_complex(tau * alpha.to_f64().unwrap())
}

/// Evaluates a truncated q-series at `tau`.
///
/// `growth(alpha)` must bound the absolute value of the unknown coefficient at
/// exponent `alpha` for `alpha >= truncation`; the tail bound sums it over the
/// exponent lattice `(1/modulus) Z` until the terms are negligible.
pub fn qexp_eval<F>(f: &QExpansion, tau: Complex64, growth: F) -> Result<ComplexApprox>
where
    F: Fn(f64) -> f64,
{
    if tau.im <= 0.0 {
        return Err(Error::NotUpperHalfPlane(tau.im));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for (a, c) in f.terms() {
        let t = c.to_complex() * q_power(a, tau);
        abs_sum += t.norm();
        sum += t;
    }
    let tail = tail_bound(f.truncation().to_f64().unwrap(), f.modulus(), tau.im, growth);
    let round = 8.0 * f64::EPSILON * (abs_sum + 1.0) * (f.len() as f64 + 1.0);
    Ok(ComplexApprox::new(sum, tail + round))
}

/// Upper bound for `sum_{alpha >= t, alpha in (1/d)Z} growth(alpha) |q|^alpha`.
pub fn tail_bound<F>(t: f64, d: u64, im_tau: f64, growth: F) -> f64
where
    F: Fn(f64) -> f64,
{
    let step = 1.0 / d as f64;
    let mut alpha = (t * d as f64).ceil() / d as f64;
    let mut total = 0.0;
    let mut prev = f64::INFINITY;
    for _ in 0..10_000_000 {
        let term = growth(alpha) * (-2.0 * PI * im_tau * alpha).exp();
        total += term;
        // Once terms are decreasing and tiny relative to the running total, stop
        // after bounding the remainder by a geometric series with the current ratio.
        if term < prev && prev.is_finite() {
            let ratio = term / prev;
            if ratio < 0.999 && term < 1e-30_f64.max(total * 1e-18) {
                total += term * ratio / (1.0 - ratio);
                return total;
            }
        }
        prev = term;
        alpha += step;
    }
    f64::INFINITY
}

/// Coefficient growth bound `C exp(k sqrt(max(alpha, 0)))`.
pub fn subexponential_growth(c: f64, k: f64) -> impl Fn(f64) -> f64 {
    move |a: f64| c * (k * a.max(0.0).sqrt()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::phase::rat;
    use crate::numeric::Cyclotomic;

    #[test]
    fn constant_series() {
        let f = QExpansion::monomial(rat(0, 1), Cyclotomic::one(), rat(10, 1), 1);
        let v = qexp_eval(&f, Complex64::new(0.3, 1.0), |_| 0.0).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn q_at_i() {
        let f = QExpansion::monomial(rat(1, 1), Cyclotomic::one(), rat(10, 1), 1);
        let v = qexp_eval(&f, Complex64::new(0.0, 1.0), |_| 0.0).unwrap();
        assert!((v.re() - 0.00186744).abs() < 1e-8);
        let g = QExpansion::monomial(rat(1, 4), Cyclotomic::one(), rat(10, 1), 4);
        let w = qexp_eval(&g, Complex64::new(0.0, 1.0), |_| 0.0).unwrap();
        assert!((w.re() - 0.20787958).abs() < 1e-8);
    }

    #[test]
    fn rejects_lower_half_plane() {
        let f = QExpansion::new(rat(1, 1), 1);
        assert!(qexp_eval(&f, Complex64::new(0.0, -1.0), |_| 1.0).is_err());
    }

    #[test]
    fn tail_bound_matches_geometric_sum() {
        // sum_{n>=1} e^{-2 pi n} = r/(1-r)
        let r = (-2.0 * PI).exp();
        let b = tail_bound(1.0, 1, 1.0, |_| 1.0);
        assert!(b >= r / (1.0 - r) * (1.0 - 1e-12));
        assert!(b <= r / (1.0 - r) * (1.0 + 1e-9));
    }
}
