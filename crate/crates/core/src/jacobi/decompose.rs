//! Theta decomposition `phi = sum_r H_r theta_{m,r}` and its inverse.

use num::Zero;
use serde::{Deserialize, Serialize};

use super::theta::theta_mr;
use crate::error::{Error, Result};
use crate::numeric::{rat, Cyclotomic, JacobiExpansion, QExpansion, Rational};

/// Declared relation between `H_r` and `H_{-r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Odd,
    Even,
    Unspecified,
}

/// `epsilon_m(r)`: `+1` or `-1` when `r` or `-r` reduces into `(0, m)`, else `0`.
pub fn epsilon(m: i64, r: i64) -> i64 {
    let r0 = r.rem_euclid(2 * m);
    if r0 == 0 || r0 == m {
        0
    } else if r0 < m {
        1
    } else {
        -1
    }
}

/// The representative of `r mod 2m` in `(-m, m]`.
pub fn minimal_rep(m: i64, r: i64) -> i64 {
    let r0 = r.rem_euclid(2 * m);
    if r0 > m {
        r0 - 2 * m
    } else {
        r0
    }
}

/// A vector `(H_r)` for `r = 0, ..., 2m - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorValuedForm {
    pub m: i64,
    pub weight: Rational,
    pub components: Vec<QExpansion>,
    pub symmetry: Symmetry,
}

impl VectorValuedForm {
    pub fn zero(m: i64, weight: Rational, truncation: &Rational, symmetry: Symmetry) -> Self {
        let components = (0..2 * m).map(|_| QExpansion::new(truncation.clone(), 4 * m as u64)).collect();
        VectorValuedForm { m, weight, components, symmetry }
    }

    pub fn component(&self, r: i64) -> &QExpansion {
        &self.components[r.rem_euclid(2 * self.m) as usize]
    }

    pub fn component_mut(&mut self, r: i64) -> &mut QExpansion {
        let i = r.rem_euclid(2 * self.m) as usize;
        &mut self.components[i]
    }

    fn zip(&self, o: &Self, f: impl Fn(&QExpansion, &QExpansion) -> Result<QExpansion>) -> Result<Self> {
        if self.m != o.m {
            return Err(Error::Data(format!("index mismatch {} vs {}", self.m, o.m)));
        }
        let components = self.components.iter().zip(&o.components).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        let symmetry = if self.symmetry == o.symmetry { self.symmetry } else { Symmetry::Unspecified };
        Ok(VectorValuedForm { m: self.m, weight: self.weight.clone(), components, symmetry })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let components = self.components.iter().map(|h| h.scale(c)).collect();
        VectorValuedForm { components, ..self.clone() }
    }

    pub fn t_act(&self, n: i64) -> Self {
        let components = self.components.iter().map(|h| h.t_act(n)).collect();
        VectorValuedForm { components, ..self.clone() }
    }

    /// Reorders components by `r -> r + shift`.
    pub fn shift_components(&self, shift: i64) -> Self {
        let components = (0..2 * self.m).map(|r| self.component(r - shift).clone()).collect();
        VectorValuedForm { components, ..self.clone() }
    }

    pub fn agrees_with(&self, o: &Self) -> bool {
        self.m == o.m && self.components.iter().zip(&o.components).all(|(a, b)| a.agrees_with(b))
    }

    /// Whether every exponent of `H_r` lies in `-r^2/4m + (1/n) Z`.
    pub fn exponents_consistent(&self, n: i64) -> bool {
        (0..2 * self.m).all(|r| {
            let shift = rat(r * r, 4 * self.m);
            self.component(r).terms().all(|(a, _)| ((a + &shift) * rat(n, 1)).is_integer())
        })
    }

    /// Whether the declared symmetry holds on the common known range.
    pub fn symmetry_holds(&self) -> bool {
        let sign = match self.symmetry {
            Symmetry::Odd => -1,
            Symmetry::Even => 1,
            Symmetry::Unspecified => return true,
        };
        (0..2 * self.m).all(|r| self.component(r).agrees_with(&self.component(-r).scale(&Cyclotomic::from_int(sign))))
    }

    /// The largest truncation known for every component.
    pub fn truncation(&self) -> Rational {
        self.components.iter().map(|h| h.truncation().clone()).min().unwrap_or_else(Rational::zero)
    }
}

/// Extracts `(H_r)` from an index-m expansion, checking the elliptic invariance
/// `c(alpha, beta) = c(alpha - (beta^2 - r^2)/4m, r)` exactly on the known region.
pub fn theta_decompose(phi: &JacobiExpansion, weight: Rational, symmetry: Symmetry) -> Result<VectorValuedForm> {
    let m = phi.index();
    if m < 1 {
        return Err(Error::Data(format!("theta decomposition needs positive index, got {m}")));
    }
    if let Some(w) = phi.y_window() {
        if w < m {
            return Err(Error::NotElliptic(format!("y-window {w} is smaller than the index {m}")));
        }
    }
    let shift = |b: i64| rat(b * b, 4 * m);
    let t = phi.q_truncation();
    let mut components = Vec::with_capacity(2 * m as usize);
    for r in 0..2 * m {
        let rho = minimal_rep(m, r);
        let mut h = QExpansion::new(t - shift(rho), phi.q_modulus().max(1) * 4 * m as u64);
        for ((a, b), c) in phi.terms() {
            if *b == rho {
                h.add_term(a - shift(rho), c.clone());
            }
        }
        components.push(h);
    }
    let out = VectorValuedForm { m, weight, components, symmetry };
    for ((a, b), c) in phi.terms() {
        let e = a - shift(*b);
        let expect = out.component(*b).coeff(&e).unwrap_or_else(Cyclotomic::zero);
        if expect != *c {
            return Err(Error::NotElliptic(format!(
                "coefficient of q^{a} y^{b} is {c}, the theta decomposition predicts {expect}"
            )));
        }
    }
    // Every component term must reappear at each admissible y-power.
    for r in 0..2 * m {
        for (e, c) in out.component(r).terms() {
            let rho = minimal_rep(m, r);
            for sgn in [1i64, -1] {
                let mut beta = rho;
                loop {
                    let a = e + shift(beta);
                    if a >= *t || phi.y_window().map(|w| beta.abs() > w).unwrap_or(false) {
                        break;
                    }
                    if phi.coeff(&a, beta).as_ref() != Some(c) {
                        return Err(Error::NotElliptic(format!("missing q^{a} y^{beta} predicted by H_{r}")));
                    }
                    beta += sgn * 2 * m;
                }
            }
        }
    }
    Ok(out)
}

/// `sum_r H_r theta_{m,r}`.
pub fn theta_recompose(h: &VectorValuedForm) -> Result<JacobiExpansion> {
    let m = h.m;
    let mut total: Option<Rational> = None;
    let mut parts = Vec::new();
    for r in 0..2 * m {
        let hr = h.component(r);
        let rho = minimal_rep(m, r);
        let reach = hr.truncation() + rat(rho * rho, 4 * m);
        total = Some(total.map(|t| t.min(reach.clone())).unwrap_or_else(|| reach.clone()));
        if hr.is_zero() {
            continue;
        }
        let th = theta_mr(m, r, &(&reach - hr.valuation() + rat(1, 1)));
        parts.push(th.mul_q(hr)?);
    }
    let t = total.unwrap_or_else(Rational::zero);
    let mut out = JacobiExpansion::new(m, t.clone(), 4 * m as u64, None);
    for p in parts {
        out = out.add(&p.restrict(&t, None))?;
    }
    Ok(out.restrict(&t, None))
}
