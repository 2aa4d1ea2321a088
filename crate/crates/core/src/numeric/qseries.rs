//! Truncated q-expansions and (q, y)-expansions with rational q-exponents.
//!
//! Truncation semantics: every coefficient at an exponent at or above the
//! truncation order is unknown rather than zero. Binary operations propagate
//! the weakest bound.

use std::collections::BTreeMap;
use std::fmt;

use num::integer::Integer;
use num::{Signed, ToPrimitive, Zero};

use super::cyclotomic::Cyclotomic;
use super::phase::{format_rational, rat, Phase, Rational};
use crate::error::{Error, Result};

/// Largest exponent modulus accepted when combining series of different moduli.
pub const MODULUS_CAP: u64 = 1 << 20;

fn denom_u64(r: &Rational) -> u64 {
    r.denom().to_u64().expect("exponent denominator fits in u64")
}

fn combine_moduli(a: u64, b: u64) -> Result<u64> {
    let l = a.lcm(&b);
    if l > MODULUS_CAP {
        return Err(Error::IncompatibleModuli(a, b));
    }
    Ok(l)
}

/// A truncated series `sum c_alpha q^alpha` with `alpha` in `(1/modulus) Z`.
#[derive(Clone, PartialEq, Eq)]
pub struct QExpansion {
    terms: BTreeMap<Rational, Cyclotomic>,
    truncation: Rational,
    modulus: u64,
}

impl QExpansion {
    pub fn new(truncation: Rational, modulus: u64) -> Self {
        assert!(modulus >= 1);
        QExpansion { terms: BTreeMap::new(), truncation, modulus }
    }

    pub fn monomial(exp: Rational, coeff: Cyclotomic, truncation: Rational, modulus: u64) -> Self {
        let mut f = Self::new(truncation, modulus);
        f.add_term(exp, coeff);
        f
    }

    /// Builds from terms, checking every exponent against the modulus.
    pub fn from_terms<I>(terms: I, truncation: Rational, modulus: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Cyclotomic)>,
    {
        let mut f = Self::new(truncation, modulus);
        for (e, c) in terms {
            if modulus % denom_u64(&e) != 0 {
                return Err(Error::Data(format!(
                    "exponent {} not in (1/{modulus})Z",
                    format_rational(&e)
                )));
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    /// Adds `c q^exp`; terms at or above the truncation are dropped.
    pub fn add_term(&mut self, exp: Rational, c: Cyclotomic) {
        debug_assert!(self.modulus % denom_u64(&exp) == 0, "exponent outside modulus");
        if exp >= self.truncation || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn truncation(&self) -> &Rational {
        &self.truncation
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^exp`, or `None` when the exponent lies beyond the truncation.
    pub fn coeff(&self, exp: &Rational) -> Option<Cyclotomic> {
        if *exp >= self.truncation {
            return None;
        }
        Some(self.terms.get(exp).cloned().unwrap_or_else(Cyclotomic::zero))
    }

    /// Smallest exponent with a nonzero coefficient; the truncation if none is known.
    pub fn valuation(&self) -> Rational {
        self.terms.keys().next().cloned().unwrap_or_else(|| self.truncation.clone())
    }

    /// True when all known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, t: &Rational) -> Self {
        let t = t.min(&self.truncation).clone();
        let terms = self.terms.range(..t.clone()).map(|(a, c)| (a.clone(), c.clone())).collect();
        QExpansion { terms, truncation: t, modulus: self.modulus }
    }

    pub fn with_modulus(&self, modulus: u64) -> Result<Self> {
        for e in self.terms.keys() {
            if modulus % denom_u64(e) != 0 {
                return Err(Error::IncompatibleModuli(self.modulus, modulus));
            }
        }
        Ok(QExpansion { modulus, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let modulus = combine_moduli(self.modulus, other.modulus)?;
        let t = self.truncation.clone().min(other.truncation.clone());
        let mut out = Self::new(t, modulus);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Cyclotomic::from_int(-1))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let modulus = combine_moduli(self.modulus, other.modulus)?;
        let t1 = &self.truncation + other.valuation();
        let t2 = &other.truncation + self.valuation();
        let t = t1.min(t2);
        let mut out = Self::new(t.clone(), modulus);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a + b;
                if e < t {
                    out.add_term(e, x * y);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::new(self.truncation.clone(), self.modulus);
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x * c);
        }
        out
    }

    /// Multiplication by `q^shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        let modulus = self.modulus.lcm(&denom_u64(shift));
        let terms = self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect();
        QExpansion { terms, truncation: &self.truncation + shift, modulus }
    }

    /// Action of `T^n`: `q^alpha -> e(n alpha) q^alpha`.
    pub fn t_act(&self, n: i64) -> Self {
        let mut out = Self::new(self.truncation.clone(), self.modulus);
        for (e, c) in &self.terms {
            let p = Phase::from_rational(&(e * rat(n, 1)));
            out.terms.insert(e.clone(), c.mul_phase(p));
        }
        out
    }

    /// Equality of all coefficients below the smaller of the two truncations.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let t = self.truncation.clone().min(other.truncation.clone());
        self.truncate(&t).terms == other.truncate(&t).terms
    }
}

impl fmt::Debug for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in &self.terms {
            write!(f, "({c})q^{} + ", format_rational(e))?;
        }
        write!(f, "O(q^{})", format_rational(&self.truncation))
    }
}

/// A truncated (q, y)-expansion `sum c_{alpha,beta} q^alpha y^beta` of index `m`.
///
/// Coefficients are known for `alpha < q_truncation` and, when `y_window` is
/// set, only for `|beta| <= y_window`. Without a window every y-power of a known
/// q-power is stored.
#[derive(Clone, PartialEq, Eq)]
pub struct JacobiExpansion {
    terms: BTreeMap<(Rational, i64), Cyclotomic>,
    q_truncation: Rational,
    q_modulus: u64,
    index: i64,
    y_window: Option<i64>,
}

impl JacobiExpansion {
    pub fn new(index: i64, q_truncation: Rational, q_modulus: u64, y_window: Option<i64>) -> Self {
        JacobiExpansion { terms: BTreeMap::new(), q_truncation, q_modulus, index, y_window }
    }

    pub fn index(&self) -> i64 {
        self.index
    }

    pub fn q_truncation(&self) -> &Rational {
        &self.q_truncation
    }

    pub fn q_modulus(&self) -> u64 {
        self.q_modulus
    }

    pub fn y_window(&self) -> Option<i64> {
        self.y_window
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Rational, i64), &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn in_region(&self, a: &Rational, b: i64) -> bool {
        *a < self.q_truncation && self.y_window.map(|w| b.abs() <= w).unwrap_or(true)
    }

    pub fn add_term(&mut self, a: Rational, b: i64, c: Cyclotomic) {
        if !self.in_region(&a, b) || c.is_zero() {
            return;
        }
        self.q_modulus = self.q_modulus.lcm(&denom_u64(&a));
        use std::collections::btree_map::Entry;
        match self.terms.entry((a, b)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, a: &Rational, b: i64) -> Option<Cyclotomic> {
        if !self.in_region(a, b) {
            return None;
        }
        Some(self.terms.get(&(a.clone(), b)).cloned().unwrap_or_else(Cyclotomic::zero))
    }

    /// Largest `|beta|` among stored terms.
    pub fn max_abs_y(&self) -> i64 {
        self.terms.keys().map(|(_, b)| b.abs()).max().unwrap_or(0)
    }

    pub fn q_valuation(&self) -> Rational {
        self.terms.keys().map(|(a, _)| a.clone()).min().unwrap_or_else(|| self.q_truncation.clone())
    }

    /// Restriction to a smaller known region.
    pub fn restrict(&self, q_truncation: &Rational, y_window: Option<i64>) -> Self {
        let t = q_truncation.min(&self.q_truncation).clone();
        let w = match (self.y_window, y_window) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = JacobiExpansion::new(self.index, t, self.q_modulus, w);
        for ((a, b), c) in &self.terms {
            out.add_term(a.clone(), *b, c.clone());
        }
        out
    }

    fn region_meet(&self, other: &Self) -> (Rational, Option<i64>) {
        let t = self.q_truncation.clone().min(other.q_truncation.clone());
        let w = match (self.y_window, other.y_window) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        (t, w)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.index != other.index {
            return Err(Error::Data(format!(
                "cannot add expansions of index {} and {}",
                self.index, other.index
            )));
        }
        let modulus = combine_moduli(self.q_modulus, other.q_modulus)?;
        let (t, w) = self.region_meet(other);
        let mut out = JacobiExpansion::new(self.index, t, modulus, w);
        for ((a, b), c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(a.clone(), *b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Cyclotomic::from_int(-1)))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = JacobiExpansion::new(self.index, self.q_truncation.clone(), self.q_modulus, self.y_window);
        if c.is_zero() {
            return out;
        }
        for (k, x) in &self.terms {
            out.terms.insert(k.clone(), x * c);
        }
        out
    }

    /// Product of two expansions; the index is additive.
    ///
    /// At most one factor may carry a y-window: the window shrinks by the
    /// y-degree of the other factor.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let window = match (self.y_window, other.y_window) {
            (None, None) => None,
            (Some(w), None) => Some(w - other.max_abs_y()),
            (None, Some(w)) => Some(w - self.max_abs_y()),
            (Some(_), Some(_)) => {
                return Err(Error::Data("product of two y-windowed expansions is undetermined".into()))
            }
        };
        if window.map(|w| w < 0).unwrap_or(false) {
            return Err(Error::Data("product leaves no known y-range".into()));
        }
        let modulus = combine_moduli(self.q_modulus, other.q_modulus)?;
        let t1 = &self.q_truncation + other.q_valuation();
        let t2 = &other.q_truncation + self.q_valuation();
        let t = t1.min(t2);
        let mut out = JacobiExpansion::new(self.index + other.index, t, modulus, window);
        for ((a1, b1), x) in &self.terms {
            for ((a2, b2), y) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, x * y);
            }
        }
        Ok(out)
    }

    /// Product with a q-series (index unchanged).
    pub fn mul_q(&self, h: &QExpansion) -> Result<Self> {
        let modulus = combine_moduli(self.q_modulus, h.modulus())?;
        let t1 = &self.q_truncation + h.valuation();
        let t2 = h.truncation() + self.q_valuation();
        let mut out = JacobiExpansion::new(self.index, t1.min(t2), modulus, self.y_window);
        for ((a, b), x) in &self.terms {
            for (e, y) in h.terms() {
                out.add_term(a + e, *b, x * y);
            }
        }
        Ok(out)
    }

    /// Action of `T^n`: `q^alpha y^beta -> e(n alpha) q^alpha y^beta`.
    pub fn t_act(&self, n: i64) -> Self {
        let mut out = self.scale(&Cyclotomic::one());
        for ((a, _), c) in out.terms.iter_mut() {
            *c = c.mul_phase(Phase::from_rational(&(a * rat(n, 1))));
        }
        out
    }

    /// Elliptic action of `(lambda, mu)` at index `m`:
    /// `q^a y^b -> e(mu b + m lambda mu) q^(a + lambda b + m lambda^2) y^(b + 2 m lambda)`.
    ///
    /// The known region of the result is the largest window-rectangle contained
    /// in the image of the known region of the input.
    pub fn elliptic_act(&self, lambda: &Rational, mu: &Rational) -> Result<Self> {
        let m = rat(self.index, 1);
        let shift_y = &m * lambda * rat(2, 1);
        if !shift_y.is_integer() {
            return Err(Error::EllipticShift(format!(
                "2m*lambda = {} is not an integer",
                format_rational(&shift_y)
            )));
        }
        let shift_y = shift_y.to_integer().to_i64().unwrap();
        let lam_abs = lambda.abs();
        let w_new = match self.y_window {
            Some(w) => w - shift_y.abs(),
            None => self.max_abs_y() + shift_y.abs(),
        };
        if w_new < 0 {
            return Err(Error::EllipticShift("shift exceeds the known y-range".into()));
        }
        let q_const = &m * lambda * lambda;
        let t_new = &self.q_truncation - &lam_abs * rat(w_new, 1) - &q_const;
        let phase_const = &m * lambda * mu;
        let modulus = self.q_modulus.lcm(&denom_u64(lambda)).lcm(&denom_u64(&q_const));
        let window = if self.y_window.is_some() { Some(w_new) } else { None };
        let mut out = JacobiExpansion::new(self.index, t_new, modulus, window);
        for ((a, b), c) in &self.terms {
            let na = a + lambda * rat(*b, 1) + &q_const;
            let nb = b + shift_y;
            let p = Phase::from_rational(&(mu * rat(*b, 1) + &phase_const));
            out.add_term(na, nb, c.mul_phase(p));
        }
        if self.y_window.is_none() && !lambda.is_zero() {
            // Terms whose preimage lies beyond the stored y-range are unknown
            // only outside the rectangle, so a window is imposed on the result.
            out.y_window = Some(w_new);
        }
        Ok(out)
    }

    /// Equality of all coefficients in the common known region.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let (t, w) = self.region_meet(other);
        let a = self.restrict(&t, w);
        let b = other.restrict(&t, w);
        a.terms == b.terms
    }

    /// Specialisation `y = 1` as a q-series.
    pub fn at_y_one(&self) -> QExpansion {
        let mut out = QExpansion::new(self.q_truncation.clone(), self.q_modulus);
        for ((a, _), c) in &self.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    /// The q-series coefficient of `y^beta`.
    pub fn y_coefficient(&self, beta: i64) -> QExpansion {
        let mut out = QExpansion::new(self.q_truncation.clone(), self.q_modulus);
        for ((a, b), c) in &self.terms {
            if *b == beta {
                out.add_term(a.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Debug for JacobiExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((a, b), c) in &self.terms {
            write!(f, "({c})q^{}y^{b} + ", format_rational(a))?;
        }
        write!(f, "O(q^{})", format_rational(&self.q_truncation))?;
        if let Some(w) = self.y_window {
            write!(f, " [|y-exp| <= {w}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn disjoint_sum() {
        let f = QExpansion::monomial(rat(-1, 8), c(1), rat(2, 1), 8);
        let g = QExpansion::monomial(rat(7, 8), c(2), rat(2, 1), 8);
        let s = f.add(&g).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeff(&rat(7, 8)), Some(c(2)));
        assert_eq!(s.coeff(&rat(-1, 8)), Some(c(1)));
    }

    #[test]
    fn polynomial_product() {
        let t = rat(10, 1);
        let f = QExpansion::from_terms([(rat(0, 1), c(1)), (rat(1, 1), c(1))], t.clone(), 1).unwrap();
        let g = QExpansion::from_terms([(rat(0, 1), c(1)), (rat(1, 1), c(-1))], t.clone(), 1).unwrap();
        let p = f.mul(&g).unwrap();
        let expect = QExpansion::from_terms([(rat(0, 1), c(1)), (rat(2, 1), c(-1))], t, 1).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn product_truncation_uses_valuations() {
        let f = QExpansion::monomial(rat(-1, 4), c(1), rat(3, 1), 4);
        let g = QExpansion::monomial(rat(1, 1), c(1), rat(2, 1), 4);
        let p = f.mul(&g).unwrap();
        // min(3 + 1, 2 - 1/4)
        assert_eq!(*p.truncation(), rat(7, 4));
    }

    #[test]
    fn scale_by_half_turn() {
        let f = QExpansion::monomial(rat(1, 4), c(1), rat(1, 1), 4);
        let g = f.scale(&Cyclotomic::root(Phase::new(1, 2)));
        assert_eq!(g.coeff(&rat(1, 4)), Some(c(-1)));
    }

    #[test]
    fn unknown_beyond_truncation() {
        let f = QExpansion::monomial(rat(0, 1), c(1), rat(1, 1), 1);
        assert_eq!(f.coeff(&rat(1, 1)), None);
        assert_eq!(f.coeff(&rat(1, 2)), Some(c(0)));
    }

    #[test]
    fn incompatible_moduli_rejected() {
        let f = QExpansion::new(rat(1, 1), MODULUS_CAP);
        let g = QExpansion::new(rat(1, 1), 3);
        assert!(matches!(f.add(&g), Err(Error::IncompatibleModuli(..))));
        assert!(QExpansion::from_terms([(rat(1, 3), c(1))], rat(1, 1), 2).is_err());
    }

    #[test]
    fn t_action_on_quarter_power() {
        let f = QExpansion::monomial(rat(1, 4), c(1), rat(1, 1), 4);
        assert_eq!(f.t_act(1).coeff(&rat(1, 4)), Some(Cyclotomic::root(Phase::new(1, 4))));
        assert_eq!(f.t_act(0), f);
        let g = QExpansion::from_terms([(rat(0, 1), c(3)), (rat(2, 1), c(1))], rat(5, 1), 1).unwrap();
        assert_eq!(g.t_act(1), g);
    }

    #[test]
    fn elliptic_monomial_rule() {
        let mut f = JacobiExpansion::new(1, rat(5, 1), 1, None);
        f.add_term(rat(0, 1), 0, c(1));
        let g = f.elliptic_act(&rat(1, 1), &rat(0, 1)).unwrap();
        assert_eq!(g.coeff(&rat(1, 1), 2), Some(c(1)));
        let id = f.elliptic_act(&rat(0, 1), &rat(0, 1)).unwrap();
        assert_eq!(id, f);
        let mut h = JacobiExpansion::new(2, rat(5, 1), 1, None);
        h.add_term(rat(1, 1), 3, c(1));
        let k = h.elliptic_act(&rat(0, 1), &rat(1, 2)).unwrap();
        assert_eq!(k.coeff(&rat(1, 1), 3), Some(c(-1)));
        assert!(f.elliptic_act(&rat(1, 3), &rat(0, 1)).is_err());
    }
}
