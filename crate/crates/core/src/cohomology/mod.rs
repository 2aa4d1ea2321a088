//! Cochains on finite groups with values in `U(1) = Q/Z`.
//!
//! Phases are written additively. Arguments are element indices of a
//! [`Group`]; index 0 is the identity.

pub mod h3;
pub mod theta;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::groups::Group;
use crate::numeric::Phase;

pub use h3::{cohomologous, h3_compute, sylow_restrict, CohomologyResult, DEFAULT_H3_BOUND};
pub use theta::{
    eta, multiplier_on_generators, multiplier_on_word, obstruction_check, theta, theta_from_omega,
    xi_phase, Obstruction, ThetaTwoCocycle,
};

/// Largest table stored densely.
const DENSE_LIMIT: u64 = 1 << 22;
/// Default bound for exhaustive 3-cocycle checks.
pub const EXHAUSTIVE_BOUND: usize = 64;
/// Default number of random quadruples in sampling mode.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
enum Storage {
    Dense(Vec<Phase>),
    Sparse(HashMap<u64, Phase>),
}

/// An `n`-cochain `G^n -> Q/Z`; absent sparse entries are trivial.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    arity: usize,
    order: usize,
    storage: Storage,
}

impl Cochain {
    pub fn trivial(arity: usize, order: usize) -> Self {
        let size = (order as u64).checked_pow(arity as u32).expect("cochain index overflow");
        let storage = if size <= DENSE_LIMIT {
            Storage::Dense(vec![Phase::ONE; size as usize])
        } else {
            Storage::Sparse(HashMap::new())
        };
        Cochain { arity, order, storage }
    }

    pub fn from_fn<F: FnMut(&[usize]) -> Phase>(arity: usize, order: usize, mut f: F) -> Self {
        let mut c = Self::trivial(arity, order);
        let mut args = vec![0usize; arity];
        for_each_tuple(order, arity, false, &mut args, &mut |a| {
            let v = f(a);
            if !v.is_one() {
                c.set(a, v);
            }
        });
        c
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn key(&self, args: &[usize]) -> u64 {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0u64, |acc, &a| acc * self.order as u64 + a as u64)
    }

    fn unkey(&self, mut k: u64) -> Vec<usize> {
        let mut out = vec![0; self.arity];
        for i in (0..self.arity).rev() {
            out[i] = (k % self.order as u64) as usize;
            k /= self.order as u64;
        }
        out
    }

    #[inline]
    pub fn get(&self, args: &[usize]) -> Phase {
        let k = self.key(args);
        match &self.storage {
            Storage::Dense(v) => v[k as usize],
            Storage::Sparse(m) => m.get(&k).copied().unwrap_or(Phase::ONE),
        }
    }

    pub fn set(&mut self, args: &[usize], v: Phase) {
        let k = self.key(args);
        match &mut self.storage {
            Storage::Dense(d) => d[k as usize] = v,
            Storage::Sparse(m) => {
                if v.is_one() {
                    m.remove(&k);
                } else {
                    m.insert(k, v);
                }
            }
        }
    }

    /// Nontrivial entries as `(arguments, value)`, in increasing key order.
    pub fn entries(&self) -> Vec<(Vec<usize>, Phase)> {
        let mut out: Vec<(u64, Phase)> = match &self.storage {
            Storage::Dense(v) => v.iter().enumerate().filter(|(_, p)| !p.is_one()).map(|(k, p)| (k as u64, *p)).collect(),
            Storage::Sparse(m) => m.iter().map(|(k, p)| (*k, *p)).collect(),
        };
        out.sort_by_key(|e| e.0);
        out.into_iter().map(|(k, p)| (self.unkey(k), p)).collect()
    }

    /// Whether every entry with an identity argument is trivial.
    pub fn is_normalized(&self) -> bool {
        self.entries().iter().all(|(a, _)| !a.contains(&0))
    }

    pub fn add(&self, o: &Cochain) -> Cochain {
        assert_eq!((self.arity, self.order), (o.arity, o.order));
        let mut out = self.clone();
        for (a, v) in o.entries() {
            let w = out.get(&a) + v;
            out.set(&a, w);
        }
        out
    }

    pub fn neg(&self) -> Cochain {
        let mut out = Cochain::trivial(self.arity, self.order);
        for (a, v) in self.entries() {
            out.set(&a, -v);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Cochain {
        let mut out = Cochain::trivial(self.arity, self.order);
        for (a, v) in self.entries() {
            out.set(&a, v.pow(k));
        }
        out
    }

    /// Least common multiple of the value denominators.
    pub fn denominator_lcm(&self) -> u64 {
        self.entries().iter().fold(1u64, |acc, (_, p)| num::integer::lcm(acc, p.denom()))
    }

    /// Value of the coboundary at one tuple of `arity + 1` arguments.
    pub fn coboundary_at(&self, group: &Group, x: &[usize]) -> Phase {
        let n = self.arity;
        debug_assert_eq!(x.len(), n + 1);
        let mut buf = vec![0usize; n];
        let mut acc = self.get(&x[1..]);
        let last = self.get(&x[..n]);
        acc = if (n + 1) % 2 == 0 { acc + last } else { acc - last };
        for i in 0..n {
            // merge x_i x_{i+1}
            let mut k = 0;
            for j in 0..=n {
                if j == i {
                    buf[k] = group.mul(x[i], x[i + 1]);
                    k += 1;
                } else if j != i + 1 {
                    buf[k] = x[j];
                    k += 1;
                }
            }
            let v = self.get(&buf);
            acc = if (i + 1) % 2 == 0 { acc + v } else { acc - v };
        }
        acc
    }

    /// The coboundary as a full table.
    pub fn coboundary(&self, group: &Group) -> Cochain {
        assert_eq!(group.order(), self.order);
        let normalized = self.is_normalized();
        Cochain::from_fn(self.arity + 1, self.order, |x| {
            if normalized && x.contains(&0) {
                Phase::ONE
            } else {
                self.coboundary_at(group, x)
            }
        })
    }

    /// Restriction to a subgroup given by its sorted parent indices.
    pub fn restrict(&self, elems: &[usize]) -> Cochain {
        let k = elems.len();
        let mut args = vec![0usize; self.arity];
        Cochain::from_fn(self.arity, k, |a| {
            for (i, &x) in a.iter().enumerate() {
                args[i] = elems[x];
            }
            self.get(&args)
        })
    }
}

/// Calls `f` on every tuple in `{0..order}^arity` (skipping tuples containing
/// the identity when `skip_identity`).
pub fn for_each_tuple<F: FnMut(&[usize])>(order: usize, arity: usize, skip_identity: bool, args: &mut [usize], f: &mut F) {
    let lo = usize::from(skip_identity);
    if order <= lo && arity > 0 {
        return;
    }
    for a in args.iter_mut() {
        *a = lo;
    }
    loop {
        f(args);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            args[i] += 1;
            if args[i] < order {
                break;
            }
            args[i] = lo;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleCheck {
    pub passed: bool,
    pub exhaustive: bool,
    pub checked: usize,
    pub normalized: bool,
    pub failure: Option<Vec<usize>>,
}

/// Checks `d omega = 0`, exhaustively up to `bound` elements and by seeded
/// random sampling of `samples` quadruples beyond.
pub fn check_cocycle(omega: &Cochain, group: &Group, bound: usize, samples: usize, seed: u64) -> CocycleCheck {
    let normalized = omega.is_normalized();
    let n = group.order();
    let mut checked = 0;
    let mut failure = None;
    if n <= bound {
        let mut args = [0usize; 4];
        for_each_tuple(n, 4, normalized, &mut args, &mut |x| {
            if failure.is_none() {
                checked += 1;
                if !omega.coboundary_at(group, x).is_one() {
                    failure = Some(x.to_vec());
                }
            }
        });
        return CocycleCheck { passed: normalized && failure.is_none(), exhaustive: true, checked, normalized, failure };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
        checked += 1;
        if !omega.coboundary_at(group, &x).is_one() {
            failure = Some(x.to_vec());
            break;
        }
    }
    CocycleCheck { passed: normalized && failure.is_none(), exhaustive: false, checked, normalized, failure }
}

pub fn is_cocycle(omega: &Cochain, group: &Group) -> bool {
    check_cocycle(omega, group, EXHAUSTIVE_BOUND, DEFAULT_SAMPLES, 0).passed
}

/// On-disk cochain: `{ "group": .., "arity": n, "entries": [[i, j, k, "a/b"], ..] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CochainFile {
    #[serde(default)]
    pub group: Value,
    pub arity: usize,
    pub entries: Vec<Vec<Value>>,
}

impl CochainFile {
    pub fn build(&self, order: usize) -> Result<Cochain> {
        let mut c = Cochain::trivial(self.arity, order);
        for e in &self.entries {
            if e.len() != self.arity + 1 {
                return Err(Error::Parse(format!("cochain entry {e:?} has wrong length")));
            }
            let mut args = Vec::with_capacity(self.arity);
            for v in &e[..self.arity] {
                let i = v.as_u64().ok_or_else(|| Error::Parse(format!("bad element index {v}")))? as usize;
                if i >= order {
                    return Err(Error::Data(format!("element index {i} outside group of order {order}")));
                }
                args.push(i);
            }
            let p = match &e[self.arity] {
                Value::String(s) => Phase::parse(s)?,
                Value::Number(n) if n.is_i64() => Phase::new(n.as_i64().unwrap(), 1),
                v => return Err(Error::Parse(format!("bad phase {v}"))),
            };
            let w = c.get(&args) + p;
            c.set(&args, w);
        }
        Ok(c)
    }

    pub fn from_cochain(c: &Cochain, group: Value) -> Self {
        let entries = c
            .entries()
            .into_iter()
            .map(|(a, p)| {
                let mut row: Vec<Value> = a.into_iter().map(|x| Value::from(x as u64)).collect();
                row.push(Value::String(p.to_string()));
                row
            })
            .collect();
        CochainFile { group, arity: c.arity, entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::small::*;

    pub(crate) fn random_normalized(arity: usize, g: &Group, rng: &mut ChaCha8Rng, den: i64) -> Cochain {
        Cochain::from_fn(arity, g.order(), |a| {
            if a.contains(&0) {
                Phase::ONE
            } else {
                Phase::new(rng.gen_range(0..den), den)
            }
        })
    }

    #[test]
    fn coboundary_of_zero_is_zero() {
        let g = quaternion();
        let z = Cochain::trivial(2, g.order());
        assert!(z.coboundary(&g).entries().is_empty());
    }

    #[test]
    fn coboundary_example_on_z2() {
        let g = cyclic(2);
        let mut l = Cochain::trivial(1, 2);
        l.set(&[1], Phase::new(1, 2));
        assert!(l.coboundary(&g).get(&[1, 1]).is_one());
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for g in [cyclic(3), symmetric(3), quaternion()] {
            for arity in [1, 2] {
                for _ in 0..5 {
                    let l = random_normalized(arity, &g, &mut rng, 12);
                    let dd = l.coboundary(&g).coboundary(&g);
                    assert!(dd.entries().is_empty());
                }
            }
        }
    }

    #[test]
    fn cocycle_examples_on_z2() {
        let g = cyclic(2);
        assert!(is_cocycle(&Cochain::trivial(3, 2), &g));
        let mut w = Cochain::trivial(3, 2);
        w.set(&[1, 1, 1], Phase::new(1, 2));
        let chk = check_cocycle(&w, &g, 64, 0, 0);
        assert!(chk.passed && chk.exhaustive);
        assert_eq!(chk.checked, 1);
        let mut bad = Cochain::trivial(3, 2);
        bad.set(&[1, 1, 0], Phase::new(1, 2));
        assert!(!is_cocycle(&bad, &g));
    }

    #[test]
    fn sampling_mode_detects_failures() {
        let g = symmetric(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = random_normalized(3, &g, &mut rng, 2);
        let chk = check_cocycle(&w, &g, 2, 10_000, 1);
        assert!(!chk.exhaustive);
        assert!(!chk.passed);
    }

    #[test]
    fn cochain_file_round_trip() {
        let g = cyclic(3);
        let mut w = Cochain::trivial(3, 3);
        w.set(&[1, 2, 1], Phase::new(1, 3));
        let f = CochainFile::from_cochain(&w, Value::Null);
        let s = serde_json::to_string(&f).unwrap();
        let back: CochainFile = serde_json::from_str(&s).unwrap();
        assert_eq!(back.build(g.order()).unwrap(), w);
    }
}
