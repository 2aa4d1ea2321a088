//! A twisted–twined function `psi = psi^P + sum_r H_r theta_{m,r}`, with the
//! polar part kept as a formal Appell–Lerch combination.

use num::complex::Complex64;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::jacobi::{mu_eval, theta_eval, theta_recompose, AppellLerchSum, LerchExpansion, VectorValuedForm};
use crate::groups::Sl2;
use crate::numeric::complex::{e_complex, qexp_eval, subexponential_growth};
use crate::numeric::{rat, ComplexApprox, Cyclotomic, Phase, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinedFunction {
    pub polar: AppellLerchSum,
    pub h: VectorValuedForm,
}

impl TwinedFunction {
    pub fn new(polar: AppellLerchSum, h: VectorValuedForm) -> Result<Self> {
        if polar.m != h.m {
            return Err(Error::Data(format!("polar part has index {}, H has index {}", polar.m, h.m)));
        }
        Ok(TwinedFunction { polar, h })
    }

    pub fn index(&self) -> i64 {
        self.h.m
    }

    pub fn is_zero(&self) -> bool {
        self.polar.is_zero() && self.h.components.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        TwinedFunction { polar: self.polar.scale(c), h: self.h.scale(c) }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.index() != o.index() {
            return Err(Error::Data("adding functions of different index".into()));
        }
        Ok(TwinedFunction { polar: self.polar.add(&o.polar).canonical(), h: self.h.add(&o.h)? })
    }

    /// `psi|_m(lambda, mu)` for `2m lambda, 2m mu` integral, using
    /// `theta_{m,r}|(lambda, mu) = e(m lambda mu + mu r) theta_{m, r + 2m lambda}`.
    pub fn elliptic_act(&self, lambda: &Rational, mu: &Rational) -> Result<Self> {
        let m = self.index();
        let a = lambda * rat(2 * m, 1);
        if !a.is_integer() || !(mu * rat(2 * m, 1)).is_integer() {
            return Err(Error::EllipticShift(format!("({lambda}, {mu}) is not in (1/2m) Z^2 for m = {m}")));
        }
        let a = a.to_integer().to_i64().unwrap();
        let polar = self.polar.elliptic_act(lambda, mu)?.canonical();
        let mut h = self.h.shift_components(a);
        for r in 0..2 * m {
            let p = Phase::from_rational(&(rat(m, 1) * lambda * mu + mu * rat(r - a, 1)));
            *h.component_mut(r) = h.component(r).scale(&Cyclotomic::root(p));
        }
        Ok(TwinedFunction { polar, h })
    }

    /// `psi|_{1,m} T`.
    pub fn t_act(&self) -> Self {
        let m = self.index();
        let mut h = self.h.t_act(1);
        for r in 0..2 * m {
            let p = Phase::new(r * r, 4 * m);
            *h.component_mut(r) = h.component(r).scale(&Cyclotomic::root(p));
        }
        TwinedFunction { polar: self.polar.t_act().canonical(), h }
    }

    /// `psi|_{1,m}(-I)(tau, z) = -psi(tau, -z)`.
    pub fn minus_identity(&self) -> Self {
        let m = self.index();
        let mut h = self.h.clone();
        for r in 0..2 * m {
            *h.component_mut(r) = self.h.component(-r).neg();
        }
        TwinedFunction { polar: self.polar.minus_identity().canonical(), h }
    }

    /// Exact equality on the common known range of `H`.
    pub fn same_function(&self, o: &Self) -> bool {
        self.polar.same_function(&o.polar) && self.h.agrees_with(&o.h)
    }

    /// The scalar `c` with `self = c o`, if one exists. Zero functions are
    /// proportional to everything with `c = 0`.
    pub fn ratio_to(&self, o: &Self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return Some(Cyclotomic::zero());
        }
        let c = first_ratio(self, o)?;
        if self.same_function(&o.scale(&c)) {
            Some(c)
        } else {
            None
        }
    }

    /// The full truncated expansion, pole terms included.
    pub fn expansion(&self, truncation: &Rational) -> Result<LerchExpansion> {
        let mut e = self.polar.expand(truncation);
        let theta_part = theta_recompose(&self.h)?;
        let t = truncation.clone().min(theta_part.q_truncation().clone());
        e.regular = e.regular.restrict(&t, None).add(&theta_part.restrict(&t, None))?;
        Ok(e)
    }

    /// Numeric value at `(tau, z)`; `growth` bounds the unknown coefficients of `H_r`.
    pub fn eval<G: Fn(f64) -> f64>(&self, tau: Complex64, z: Complex64, growth: &G) -> Result<ComplexApprox> {
        let m = self.index();
        let mut total = ComplexApprox::exact(Complex64::new(0.0, 0.0));
        for (c, l, u) in &self.polar.terms {
            let v = mu_eval(m, l.to_f64().unwrap(), u.to_f64().unwrap(), tau, z)?;
            total = total.add(&v.scale(c.to_complex()));
        }
        for r in 0..2 * m {
            let hr = self.h.component(r);
            if hr.is_zero() {
                continue;
            }
            let hv = qexp_eval(hr, tau, growth)?;
            let th = theta_eval(m, r, tau, z, 0.0)?;
            total = total.add(&hv.mul(&th));
        }
        Ok(total)
    }

    /// A growth bound `C exp(2 pi sqrt(alpha / m))` fitted to the known coefficients of `H`.
    pub fn growth(&self) -> impl Fn(f64) -> f64 {
        let k = 2.0 * std::f64::consts::PI / (self.index() as f64).sqrt();
        let mut c: f64 = 1.0;
        for comp in &self.h.components {
            for (a, x) in comp.terms() {
                let a = a.to_f64().unwrap_or(0.0).max(0.0);
                c = c.max(x.to_complex().norm() / (k * a.sqrt()).exp());
            }
        }
        subexponential_growth(10.0 * c, k)
    }

    /// `(psi|_{1,m} gamma)(tau, z) = (c tau + d)^-1 e(-m c z^2 / (c tau + d)) psi(gamma tau, z / (c tau + d))`.
    pub fn slash_eval(&self, gamma: &Sl2, tau: Complex64, z: Complex64) -> Result<ComplexApprox> {
        let [a, b, c, d] = gamma.map(|x| x as f64);
        let j = tau * c + d;
        let v = self.eval((tau * a + b) / j, z / j, &self.growth())?;
        let f = e_complex(-(self.index() as f64) * c * z * z / j) / j;
        Ok(v.scale(f))
    }
}

/// Points where `tau` and `-1/tau` both have imaginary part near 1, with `z`
/// away from the half-periods.
pub fn sample_points() -> Vec<(Complex64, Complex64)> {
    (0..5)
        .map(|i| {
            let t = 1.25 + 0.15 * i as f64;
            (Complex64::from_polar(1.0, t), Complex64::new(0.11 + 0.02 * i as f64, 0.07 - 0.01 * i as f64))
        })
        .collect()
}

/// Candidate ratio from the first nonzero coefficient of `a`.
fn first_ratio(a: &TwinedFunction, b: &TwinedFunction) -> Option<Cyclotomic> {
    let ca = a.polar.canonical();
    let cb = b.polar.canonical();
    if let Some((x, l, u)) = ca.terms.first() {
        let y = cb.terms.iter().find(|(_, l2, u2)| l2 == l && u2 == u)?;
        return Some(x * &y.0.inverse()?);
    }
    for r in 0..2 * a.index() {
        if let Some((e, x)) = a.h.component(r).terms().next() {
            let y = b.h.component(r).coeff(e)?;
            return Some(x * &y.inverse()?);
        }
    }
    Some(Cyclotomic::zero())
}
