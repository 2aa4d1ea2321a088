//! Elements of cyclotomic fields `Q(zeta_N)`.
//!
//! An element is stored in the power basis `1, z, ..., z^(phi(N)-1)` of
//! `Q[z]/Phi_N(z)` where `z = e(1/N)`. This basis representation is unique for
//! a fixed conductor; values at different conductors are compared after
//! lifting both to the least common multiple.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num::integer::Integer;
use num::{BigInt, One, ToPrimitive, Zero};

use super::phase::{format_rational, rat, Phase, Rational};
use crate::error::{Error, Result};

/// Largest conductor created implicitly, `2^7 * 3^3 * 5 * 7`.
pub const DEFAULT_CONDUCTOR_CAP: u64 = 120_960;

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &div);
        }
    }
    let p = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn int_poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    quot
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[derive(Clone)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

fn reduce_mod_phi(mut c: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if c.len() > deg {
        for k in (deg..c.len()).rev() {
            if c[k].is_zero() {
                continue;
            }
            let lead = std::mem::replace(&mut c[k], Rational::zero());
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    c[k - deg + j] -= &lead * BigInt::from(pj);
                }
            }
        }
        c.truncate(deg);
    }
    c.resize(deg, Rational::zero());
    c
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    /// The root of unity `e(p)`.
    pub fn root(p: Phase) -> Self {
        let n = p.denom();
        let mut c = vec![Rational::zero(); p.numer() as usize + 1];
        c[p.numer() as usize] = Rational::one();
        Cyclotomic { conductor: n, coeffs: reduce_mod_phi(c, n) }.normalized()
    }

    /// `cyc_canonicalize`: a finite formal sum of weighted phases, reduced.
    pub fn from_phases<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Phase, Rational)>,
    {
        Self::from_phases_capped(terms, DEFAULT_CONDUCTOR_CAP)
    }

    pub fn from_phases_capped<I>(terms: I, cap: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (Phase, Rational)>,
    {
        let terms: Vec<(Phase, Rational)> = terms.into_iter().collect();
        let n = terms.iter().fold(1u64, |acc, (p, _)| acc.lcm(&p.denom()));
        if n > cap {
            return Err(Error::ConductorOverflow(n, cap));
        }
        let mut c = vec![Rational::zero(); n as usize];
        for (p, w) in terms {
            let k = p.numer() * (n / p.denom());
            c[k as usize] += w;
        }
        Ok(Cyclotomic { conductor: n, coeffs: reduce_mod_phi(c, n) }.normalized())
    }

    /// Exact square root of a non-negative integer via quadratic Gauss sums.
    pub fn sqrt_int(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let mut m = n;
        let mut outside = 1i64;
        let mut result = Self::one();
        let mut p = 2u64;
        while p * p <= m || m > 1 {
            if p * p > m {
                p = m;
            }
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            outside *= (p as i64).pow(e / 2);
            if e % 2 == 1 {
                result = &result * &Self::sqrt_prime(p);
            }
            p += 1;
        }
        result.scale(&rat(outside, 1))
    }

    fn sqrt_prime(p: u64) -> Self {
        if p == 2 {
            // e(1/8) + e(7/8)
            return &Self::root(Phase::new(1, 8)) + &Self::root(Phase::new(7, 8));
        }
        // Gauss sum g = sum_k e(k^2/p) equals sqrt(p) or i sqrt(p).
        let mut g = Self::zero();
        for k in 0..p {
            g += &Self::root(Phase::new((k * k % p) as i64, p as i64));
        }
        if p % 4 == 1 {
            g
        } else {
            &g * &Self::root(Phase::new(3, 4))
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coefficients in the power basis of the current conductor.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Attempts to recognise the value as a root of unity.
    pub fn as_root_of_unity(&self) -> Option<Phase> {
        let n = self.conductor;
        // Roots of unity in Q(zeta_N) have order dividing lcm(2, N).
        let order = n.lcm(&2);
        (0..order).map(|k| Phase::new(k as i64, order as i64)).find(|p| *self == Self::root(*p))
    }

    fn normalized(mut self) -> Self {
        if self.conductor > 1 && self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            let c0 = std::mem::take(&mut self.coeffs[0]);
            return Self::from_rational(c0);
        }
        // If only exponents divisible by g occur, the element lives in Q(zeta_{N/g}).
        let mut g = self.conductor;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&(k as u64));
            }
        }
        if g > 1 && g < self.conductor {
            let n = self.conductor / g;
            let mut c = vec![Rational::zero(); euler_phi(n) as usize];
            for (k, v) in self.coeffs.iter().enumerate() {
                if !v.is_zero() {
                    c[k / g as usize] = v.clone();
                }
            }
            return Cyclotomic { conductor: n, coeffs: c };
        }
        self
    }

    /// Re-expresses the element in `Q(zeta_L)` for a multiple `L` of the conductor.
    pub fn lift(&self, l: u64) -> Self {
        assert_eq!(l % self.conductor, 0, "lift target must be a multiple");
        if l == self.conductor {
            return self.clone();
        }
        assert!(l <= DEFAULT_CONDUCTOR_CAP, "conductor {l} exceeds cap");
        let f = (l / self.conductor) as usize;
        let mut c = vec![Rational::zero(); (self.coeffs.len() - 1) * f + 1];
        for (k, v) in self.coeffs.iter().enumerate() {
            c[k * f] = v.clone();
        }
        Cyclotomic { conductor: l, coeffs: reduce_mod_phi(c, l) }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let l = a.conductor.lcm(&b.conductor);
        (a.lift(l), b.lift(l))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
            .normalized()
    }

    pub fn mul_phase(&self, p: Phase) -> Self {
        self * &Self::root(p)
    }

    /// Galois automorphism `zeta_N -> zeta_N^k` for `k` coprime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor;
        let k = k.rem_euclid(n as i64) as u64;
        assert_eq!(k.gcd(&n), 1, "Galois exponent must be a unit");
        let mut c = vec![Rational::zero(); n as usize];
        for (j, v) in self.coeffs.iter().enumerate() {
            if !v.is_zero() {
                c[(j as u64 * k % n) as usize] += v;
            }
        }
        Cyclotomic { conductor: n, coeffs: reduce_mod_phi(c, n) }.normalized()
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        if self.conductor <= 2 {
            return self.clone();
        }
        self.galois(-1)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, via the extended Euclidean algorithm modulo `Phi_N`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(r.recip()));
        }
        let n = self.conductor;
        let phi: Vec<Rational> = cyclotomic_polynomial(n).iter().map(|&v| rat(v, 1)).collect();
        let a = trim(self.coeffs.clone());
        // Invariant: s * a == r (mod phi).
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
        while !(r1.len() == 1) {
            if r1.is_empty() {
                return None;
            }
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        let c = r1[0].recip();
        let s: Vec<Rational> = s1.iter().map(|v| v * &c).collect();
        Some(Cyclotomic { conductor: n, coeffs: reduce_mod_phi(s, n) }.normalized())
    }

    pub fn to_complex(&self) -> num::complex::Complex64 {
        let n = self.conductor as f64;
        let mut z = num::complex::Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let ang = 2.0 * std::f64::consts::PI * k as f64 / n;
                z += num::complex::Complex64::from_polar(c.to_f64().unwrap(), ang);
            }
        }
        z
    }

    /// Expansion as weighted phases `(k/N, c_k)` with nonzero weights.
    pub fn to_phases(&self) -> Vec<(Phase, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Phase::new(k as i64, self.conductor as i64), c.clone()))
            .collect()
    }

    /// True when every coefficient is an integer (the value is an algebraic integer).
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        let r = self.as_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] -= v;
    }
    trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
        r = trim(r);
    }
    (trim(q), r)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Phase> for Cyclotomic {
    fn from(p: Phase) -> Self {
        Self::root(p)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        if self.conductor == o.conductor {
            let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
            return Cyclotomic { conductor: self.conductor, coeffs }.normalized();
        }
        let (a, b) = Cyclotomic::common(self, o);
        &a + &b
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        if let Some(r) = self.as_rational() {
            return o.scale(&r);
        }
        if let Some(r) = o.as_rational() {
            return self.scale(&r);
        }
        if self.conductor != o.conductor {
            let (a, b) = Cyclotomic::common(self, o);
            return &a * &b;
        }
        let n = self.conductor;
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len()];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        Cyclotomic { conductor: n, coeffs: reduce_mod_phi(c, n) }.normalized()
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, o: Cyclotomic) -> Cyclotomic {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, o: &Cyclotomic) -> Cyclotomic {
                (&self).$m(o)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, o: &Cyclotomic) {
        *self = &*self + o;
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, o: &Cyclotomic) {
        *self = &*self - o;
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, o: &Cyclotomic) {
        *self = &*self * o;
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let mut first = true;
        for (p, c) in self.to_phases() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if p.is_one() {
                write!(f, "{}", format_rational(&c))?;
            } else if c.is_one() {
                write!(f, "e({p})")?;
            } else {
                write!(f, "({})e({p})", format_rational(&c))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}]({})", self.conductor, self)
    }
}
