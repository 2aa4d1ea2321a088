//! Floating-point checks of modular and elliptic transformation laws.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::groups::congruence::Sl2;
use crate::numeric::complex::{e_complex, qexp_eval};
use crate::numeric::linalg::CycMatrix;
use crate::numeric::{ComplexApprox, QExpansion, Rational};

/// Terms of absolute value below this fraction of the running maximum count as tail.
const NEGLIGIBLE: f64 = 1e-22;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `c tau + d`, exact when `c = 0`.
pub fn automorphy(g: &Sl2, tau: Complex64) -> Complex64 {
    if g[2] == 0 {
        c(g[3] as f64, 0.0)
    } else {
        tau * g[2] as f64 + g[3] as f64
    }
}

pub fn mobius(g: &Sl2, tau: Complex64) -> Complex64 {
    (tau * g[0] as f64 + g[1] as f64) / automorphy(g, tau)
}

/// `j^-k` on the principal branch, `arg j^(1/2)` in `(-pi/2, pi/2]`.
pub fn automorphy_power(j: Complex64, k: f64) -> Complex64 {
    let arg = if j.im == 0.0 && j.re < 0.0 { PI } else { j.arg() };
    Complex64::from_polar(j.norm().powf(-k), -k * arg)
}

/// Direct evaluation of `theta_{m,r}(tau, z)` with a certified tail bound.
///
/// At least every `k` with `k^2/4m < min_truncation` is summed; the sum then
/// continues until the terms fall below [`NEGLIGIBLE`].
pub fn theta_eval(m: i64, r: i64, tau: Complex64, z: Complex64, min_truncation: f64) -> Result<ComplexApprox> {
    if tau.im <= 0.0 {
        return Err(Error::NotUpperHalfPlane(tau.im));
    }
    let two_m = 2 * m;
    let r0 = r.rem_euclid(two_m);
    // |term| = exp(-2 pi (Im tau k^2/4m + Im z k)) peaks near k = -2m Im z / Im tau.
    let vertex = (-(two_m as f64) * z.im / tau.im).round() as i64;
    let start = vertex - (vertex - r0).rem_euclid(two_m);
    let term = |k: i64| {
        let kf = k as f64;
        e_complex(tau * (kf * kf / (4 * m) as f64) + z * kf)
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut peak: f64 = 0.0;
    let mut abs_sum = 0.0;
    let mut tail = 0.0;
    let mut count = 0usize;
    for dir in [1i64, -1] {
        let mut k = if dir == 1 { start } else { start - two_m };
        let mut prev = f64::INFINITY;
        loop {
            let t = term(k);
            let a = t.norm();
            sum += t;
            abs_sum += a;
            peak = peak.max(a);
            count += 1;
            let kf = k as f64;
            let past_truncation = kf * kf / (4 * m) as f64 >= min_truncation;
            let moving_out = (k - vertex) * dir > 0;
            if past_truncation && moving_out && a < prev && a <= NEGLIGIBLE * peak {
                // Successive ratios decrease past the vertex, so the remaining
                // terms are bounded by a geometric series with the current ratio.
                let ratio = a / prev;
                tail += a * ratio / (1.0 - ratio);
                break;
            }
            if count > 50_000_000 {
                return Err(Error::NotUpperHalfPlane(tau.im));
            }
            prev = a;
            k += dir * two_m;
        }
    }
    let round = 4.0 * f64::EPSILON * abs_sum * (count as f64).sqrt().max(1.0);
    Ok(ComplexApprox::new(sum, tail + round))
}

/// `mu_m|(lambda, mu)(tau, z)` summed directly; `z` must avoid the poles.
pub fn mu_eval(m: i64, lambda: f64, mu: f64, tau: Complex64, z: Complex64) -> Result<ComplexApprox> {
    if tau.im <= 0.0 {
        return Err(Error::NotUpperHalfPlane(tau.im));
    }
    let mf = m as f64;
    let zz = z + tau * lambda + mu;
    let pre = e_complex((tau * (lambda * lambda) + z * (2.0 * lambda) + lambda * mu) * mf);
    let vertex = (-zz.im / tau.im).round() as i64;
    let term = |k: i64| {
        let kf = k as f64;
        let v = e_complex(zz + tau * kf);
        -e_complex(tau * (mf * kf * kf) + zz * (2.0 * mf * kf)) * (1.0 + v) / (1.0 - v)
    };
    let mut sum = term(vertex);
    let mut peak = sum.norm();
    let mut tail = 0.0;
    for dir in [1i64, -1] {
        let mut k = vertex + dir;
        let mut prev = f64::INFINITY;
        loop {
            let t = term(k);
            let a = t.norm();
            sum += t;
            peak = peak.max(a);
            if a < prev && a <= NEGLIGIBLE * peak.max(1e-300) && (k - vertex).abs() > 2 {
                let ratio = a / prev;
                // |1 + v|/|1 - v| tends to 1 away from the vertex, so the Gaussian
                // factor dominates and the ratio keeps decreasing.
                tail += a * ratio / (1.0 - ratio);
                break;
            }
            if (k - vertex).abs() > 10_000_000 {
                return Err(Error::NotUpperHalfPlane(tau.im));
            }
            prev = a;
            k += dir;
        }
    }
    let v = sum * pre;
    Ok(ComplexApprox::new(v, (tail + 16.0 * f64::EPSILON * peak) * pre.norm()))
}

/// `(theta_{m,r}|_{1/2,m} gamma)(tau, z)` for all `r`.
pub fn theta_slash(m: i64, g: &Sl2, tau: Complex64, z: Complex64, min_truncation: f64) -> Result<Vec<ComplexApprox>> {
    let j = automorphy(g, tau);
    let factor = automorphy_power(j, 0.5) * e_complex(-(g[2] * m) as f64 * z * z / j);
    let (gt, gz) = (mobius(g, tau), z / j);
    (0..2 * m).map(|r| Ok(theta_eval(m, r, gt, gz, min_truncation)?.scale(factor))).collect()
}

/// Elliptic action on a function of `(tau, z)`.
pub fn elliptic_num<F>(f: F, m: i64, lambda: f64, mu: f64) -> impl Fn(Complex64, Complex64) -> ComplexApprox
where
    F: Fn(Complex64, Complex64) -> ComplexApprox,
{
    move |tau, z| {
        let v = f(tau, z + tau * lambda + mu);
        v.scale(e_complex((tau * (lambda * lambda) + z * (2.0 * lambda) + lambda * mu) * m as f64))
    }
}

/// Weight-k index-m slash action on a function of `(tau, z)`.
pub fn slash_num<F>(f: F, k: f64, m: i64, g: Sl2) -> impl Fn(Complex64, Complex64) -> ComplexApprox
where
    F: Fn(Complex64, Complex64) -> ComplexApprox,
{
    move |tau, z| {
        let j = automorphy(&g, tau);
        let factor = automorphy_power(j, k) * e_complex(-(g[2] * m) as f64 * z * z / j);
        f(mobius(&g, tau), z / j).scale(factor)
    }
}

/// Sample point `-d/c + (s + i)/|c|`: both it and its image have imaginary part near `1/|c|`.
pub fn balanced_point(g: &Sl2, s: f64) -> Complex64 {
    if g[2] == 0 {
        c(s, 1.0)
    } else {
        let cc = g[2] as f64;
        c(-(g[3] as f64) / cc + s / cc.abs(), 1.0 / cc.abs())
    }
}

/// Maximum deviation and certified bound of a numeric comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct CheckReport {
    pub max_deviation: f64,
    pub max_error_bound: f64,
}

impl CheckReport {
    pub fn record(&mut self, lhs: &ComplexApprox, rhs: &ComplexApprox) {
        self.max_deviation = self.max_deviation.max((lhs.value - rhs.value).norm());
        self.max_error_bound = self.max_error_bound.max(lhs.error_bound + rhs.error_bound);
    }

    pub fn merge(&mut self, o: &CheckReport) {
        self.max_deviation = self.max_deviation.max(o.max_deviation);
        self.max_error_bound = self.max_error_bound.max(o.max_error_bound);
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation < tol && self.max_error_bound < tol
    }
}

/// Checks `rho(gamma)^T (theta_m|gamma) = theta_m` at the given points.
pub fn weil_check(m: i64, g: &Sl2, rho: &CycMatrix, points: &[(Complex64, Complex64)], min_truncation: f64) -> Result<CheckReport> {
    let n = 2 * m as usize;
    let mut report = CheckReport::default();
    let entries: Vec<Vec<Complex64>> = (0..n).map(|i| rho.row(i).iter().map(|x| x.to_complex()).collect()).collect();
    for &(tau, z) in points {
        let slashed = theta_slash(m, g, tau, z, min_truncation)?;
        for rp in 0..n {
            let mut acc = ComplexApprox::exact(c(0.0, 0.0));
            for (r, s) in slashed.iter().enumerate() {
                acc = acc.add(&s.scale(entries[r][rp]));
            }
            let direct = theta_eval(m, rp as i64, tau, z, min_truncation)?;
            report.record(&acc, &direct);
        }
    }
    Ok(report)
}

/// Checks `(F|_k gamma)(tau) = M G(tau)` for truncated vector-valued q-series.
///
/// `growth` bounds the unknown coefficients of every component; samples whose
/// image or preimage has imaginary part below `min_im` are rejected.
#[allow(clippy::too_many_arguments)]
pub fn numeric_modular_check<Gr>(
    f: &[QExpansion],
    target: &[QExpansion],
    m_matrix: &CycMatrix,
    g: &Sl2,
    weight: &Rational,
    samples: &[Complex64],
    min_im: f64,
    growth: Gr,
) -> Result<CheckReport>
where
    Gr: Fn(f64) -> f64,
{
    let k = weight.to_f64().unwrap();
    let mut report = CheckReport::default();
    for &tau in samples {
        let gt = mobius(g, tau);
        if tau.im < min_im || gt.im < min_im {
            return Err(Error::NotUpperHalfPlane(tau.im.min(gt.im)));
        }
        let factor = automorphy_power(automorphy(g, tau), k);
        let at_g: Vec<ComplexApprox> = f.iter().map(|h| Ok(qexp_eval(h, gt, &growth)?.scale(factor))).collect::<Result<_>>()?;
        let at_t: Vec<ComplexApprox> = target.iter().map(|h| qexp_eval(h, tau, &growth)).collect::<Result<_>>()?;
        for (i, lhs) in at_g.iter().enumerate() {
            let mut rhs = ComplexApprox::exact(c(0.0, 0.0));
            for (j, v) in at_t.iter().enumerate() {
                rhs = rhs.add(&v.scale(m_matrix.row(i)[j].to_complex()));
            }
            report.record(lhs, &rhs);
        }
    }
    Ok(report)
}
