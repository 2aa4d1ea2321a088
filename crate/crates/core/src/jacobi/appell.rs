//! Generalised Appell–Lerch sums and polar parts.
//!
//! `mu_m = -sum_k q^(mk^2) y^(2mk) (1 + y q^k) / (1 - y q^k)` is kept as a
//! formal combination of elliptic shifts of itself. Expanding a shifted sum
//! `mu_m|(lambda, mu)` treats its k-th term according to `L = k + lambda`:
//! for `L > 0` it is expanded in `u = e(mu) y q^L`, for `L < 0` in `1/u`, and
//! for `L = 0` the rational function `(1 + e(mu) y) / (1 - e(mu) y)` is kept
//! exactly as a pole term. Integer elliptic shifts then permute the terms.

use std::collections::BTreeMap;

use num::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{rat, Cyclotomic, JacobiExpansion, Phase, Rational};

/// `sum_zeta c_zeta (1 + zeta y) / (1 - zeta y)` at `q^0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolePart {
    pub terms: BTreeMap<Phase, Cyclotomic>,
}

impl PolePart {
    pub fn add_term(&mut self, zeta: Phase, c: Cyclotomic) {
        let s = self.terms.get(&zeta).map(|x| x + &c).unwrap_or(c);
        if s.is_zero() {
            self.terms.remove(&zeta);
        } else {
            self.terms.insert(zeta, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (z, c) in &o.terms {
            out.add_term(*z, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = PolePart::default();
        for (z, x) in &self.terms {
            out.add_term(*z, x * c);
        }
        out
    }

    /// Expansion in `|y| < 1`: `(1 + zeta y)/(1 - zeta y) = 1 + 2 sum_n zeta^n y^n`.
    pub fn unit_disc_coefficients(&self, window: i64) -> Vec<(i64, Cyclotomic)> {
        let mut out = Vec::new();
        for n in 0..=window {
            let mut s = Cyclotomic::zero();
            for (z, c) in &self.terms {
                let w = if n == 0 { Cyclotomic::one() } else { Cyclotomic::root(z.pow(n)).scale(&rat(2, 1)) };
                s += &(c * &w);
            }
            if !s.is_zero() {
                out.push((n, s));
            }
        }
        out
    }
}

/// A truncated expansion split into its Laurent-polynomial part and pole terms.
#[derive(Clone, Debug)]
pub struct LerchExpansion {
    pub regular: JacobiExpansion,
    pub poles: PolePart,
}

impl LerchExpansion {
    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(LerchExpansion { regular: self.regular.add(&o.regular)?, poles: self.poles.add(&o.poles) })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&Cyclotomic::from_int(-1)))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        LerchExpansion { regular: self.regular.scale(c), poles: self.poles.scale(c) }
    }

    /// Exact equality on the common known region, pole terms included.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.poles == o.poles && self.regular.agrees_with(&o.regular)
    }

    /// The expansion in the annulus `|q| < |y| < 1`, known for `|beta| <= window`.
    pub fn annulus_expansion(&self, window: i64) -> JacobiExpansion {
        let r = &self.regular;
        let mut out = JacobiExpansion::new(r.index(), r.q_truncation().clone(), r.q_modulus(), Some(window));
        for ((a, b), c) in r.terms() {
            out.add_term(a.clone(), *b, c.clone());
        }
        if Rational::zero() < *r.q_truncation() {
            for (n, c) in self.poles.unit_disc_coefficients(window) {
                out.add_term(Rational::zero(), n, c);
            }
        }
        out
    }
}

/// A finite combination `sum_i c_i mu_m|(lambda_i, mu_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppellLerchSum {
    pub m: i64,
    pub terms: Vec<(Cyclotomic, Rational, Rational)>,
}

impl AppellLerchSum {
    pub fn mu(m: i64) -> Self {
        assert!(m >= 1, "Appell–Lerch index must be positive");
        AppellLerchSum { m, terms: vec![(Cyclotomic::one(), Rational::zero(), Rational::zero())] }
    }

    pub fn zero(m: i64) -> Self {
        AppellLerchSum { m, terms: Vec::new() }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let terms = self.terms.iter().map(|(x, l, u)| (x * c, l.clone(), u.clone())).collect();
        AppellLerchSum { m: self.m, terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m, "Appell–Lerch sums of different index");
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        AppellLerchSum { m: self.m, terms }
    }

    /// `f|(l1,u1)|(l2,u2) = e(m (l1 u2 - l2 u1)) f|(l1 + l2, u1 + u2)`.
    pub fn elliptic_act(&self, lambda: &Rational, mu: &Rational) -> Result<Self> {
        let m = rat(self.m, 1);
        if !(&m * lambda * rat(2, 1)).is_integer() {
            return Err(Error::EllipticShift(format!("2m*lambda is not an integer for lambda = {lambda}")));
        }
        let terms = self
            .terms
            .iter()
            .map(|(c, l, u)| {
                let p = Phase::from_rational(&(&m * (l * mu - lambda * u)));
                (c.mul_phase(p), l + lambda, u + mu)
            })
            .collect();
        Ok(AppellLerchSum { m: self.m, terms })
    }

    /// Integer shifts reduce every term to `0 <= lambda, mu < 1`, using
    /// `mu_m|(l + p, u + q) = e(-m (p u - l q)) mu_m|(l, u)`; equal shifts are merged.
    pub fn canonical(&self) -> Self {
        let m = rat(self.m, 1);
        let mut merged: BTreeMap<(Rational, Rational), Cyclotomic> = BTreeMap::new();
        for (c, l, u) in &self.terms {
            let (lf, uf) = (l - l.floor(), u - u.floor());
            let (p, q) = (l - &lf, u - &uf);
            let ph = Phase::from_rational(&(-&m * (&p * &uf - &lf * &q)));
            let e = merged.entry((lf, uf)).or_insert_with(Cyclotomic::zero);
            *e += &c.mul_phase(ph);
        }
        let terms = merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|((l, u), c)| (c, l, u)).collect();
        AppellLerchSum { m: self.m, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().terms.is_empty()
    }

    /// Exact equality of the underlying functions.
    pub fn same_function(&self, o: &Self) -> bool {
        self.m == o.m && self.canonical() == o.canonical()
    }

    /// `|_{1,m} T`: `mu_m|(l, u)` goes to `mu_m|(l, l + u)`.
    pub fn t_act(&self) -> Self {
        let terms = self.terms.iter().map(|(c, l, u)| (c.clone(), l.clone(), l + u)).collect();
        AppellLerchSum { m: self.m, terms }
    }

    /// `|_{1,m} (-I)`: `mu_m|(l, u)` goes to `mu_m|(-l, -u)`.
    pub fn minus_identity(&self) -> Self {
        let terms = self.terms.iter().map(|(c, l, u)| (c.clone(), -l, -u)).collect();
        AppellLerchSum { m: self.m, terms }
    }

    pub fn expand(&self, truncation: &Rational) -> LerchExpansion {
        let mut regular = JacobiExpansion::new(self.m, truncation.clone(), 1, None);
        let mut poles = PolePart::default();
        for (c, l, u) in &self.terms {
            expand_shifted(self.m, c, l, u, truncation, &mut regular, &mut poles);
        }
        LerchExpansion { regular, poles }
    }
}

/// Adds `c mu_m|(lambda, mu)` to the accumulators.
///
/// Its k-th term is `-e(m mu (2k + lambda)) q^(mL^2) y^(2mL) (1 + v)/(1 - v)`
/// with `L = k + lambda` and `v = e(mu) y q^L`.
fn expand_shifted(
    m: i64,
    c: &Cyclotomic,
    lambda: &Rational,
    mu: &Rational,
    t: &Rational,
    regular: &mut JacobiExpansion,
    poles: &mut PolePart,
) {
    let mq = rat(m, 1);
    let reach = (t / &mq).to_f64().unwrap().max(0.0).sqrt().ceil() as i64 + 2;
    let l0 = lambda.floor().to_integer().to_i64().unwrap();
    let zeta = Phase::from_rational(mu);
    for k in (-l0 - reach)..=(-l0 + reach) {
        let big_l = lambda + rat(k, 1);
        let base = &mq * &big_l * &big_l;
        if base >= *t {
            continue;
        }
        let pre = Phase::from_rational(&(&mq * mu * (rat(2 * k, 1) + lambda)));
        let lead = -c.mul_phase(pre);
        let y0 = (&mq * &big_l * rat(2, 1)).to_integer().to_i64().unwrap();
        if big_l.is_zero() {
            poles.add_term(zeta, lead);
            continue;
        }
        // (1+v)/(1-v) = 1 + 2 sum v^n for |v| < 1 and -(1 + 2 sum v^-n) otherwise.
        let (sign, dir) = if big_l.is_positive() { (1, 1) } else { (-1, -1) };
        let step = big_l.abs();
        let lead = if sign == 1 { lead } else { -lead };
        regular.add_term(base.clone(), y0, lead.clone());
        let mut n = 1i64;
        loop {
            let a = &base + &step * rat(n, 1);
            if a >= *t {
                break;
            }
            let ph = zeta.pow(dir * n);
            regular.add_term(a, y0 + dir * n, lead.mul_phase(ph).scale(&rat(2, 1)));
            n += 1;
        }
    }
}

/// `mu_m` truncated below `q^truncation`.
pub fn appell_lerch(m: i64, truncation: &Rational) -> LerchExpansion {
    AppellLerchSum::mu(m).expand(truncation)
}

/// The table `chi^(a,b)` indexed by residues modulo `2m`.
pub type PolarTable = BTreeMap<(i64, i64), Cyclotomic>;

/// `sum_{a,b mod 2m} chi^(a,b) mu_m|(a/2m, b/2m)` with representatives in `[0, 2m)`.
pub fn polar_sum(m: i64, chi: &PolarTable) -> Result<AppellLerchSum> {
    let mut out = AppellLerchSum::zero(m);
    let mut reduced: BTreeMap<(i64, i64), Cyclotomic> = BTreeMap::new();
    for ((a, b), c) in chi {
        let key = (a.rem_euclid(2 * m), b.rem_euclid(2 * m));
        let s = reduced.get(&key).map(|x| x + c).unwrap_or_else(|| c.clone());
        reduced.insert(key, s);
    }
    for ((a, b), c) in reduced {
        if c.is_zero() {
            continue;
        }
        let shifted = AppellLerchSum::mu(m).elliptic_act(&rat(a, 2 * m), &rat(b, 2 * m))?;
        out = out.add(&shifted.scale(&c));
    }
    Ok(out)
}

pub fn polar_part(m: i64, chi: &PolarTable, truncation: &Rational) -> Result<LerchExpansion> {
    Ok(polar_sum(m, chi)?.expand(truncation))
}
