//! `H^3(G, U(1))` from the normalized bar complex.
//!
//! `H^3(G, U(1))` is isomorphic to `H^4(G, Z)`, the torsion of the cokernel of
//! the integral coboundary `d: C^3 -> C^4`. Its invariant factors divide
//! `|G|`, so a Smith form of `d` over `Z/|G|^2` separates them from the free
//! directions. A cocycle representing the factor `Z/k` at Smith position `i`
//! is `(Q e_i mod k) / k`, with `Q` the column transform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_cocycle, for_each_tuple, Cochain};
use crate::error::{Error, Result};
use crate::groups::Group;
use crate::numeric::modring::{smith_form, solve_mod, ModMatrix};
use crate::numeric::Phase;

/// Default bound on `|G|` for bar-complex computations.
pub const DEFAULT_H3_BOUND: usize = 16;

#[derive(Clone, Debug)]
pub struct CohomologyResult {
    /// Invariant factors `d_1 | d_2 | ...` of `H^3(G, U(1))`.
    pub divisors: Vec<u64>,
    /// One normalized cocycle per invariant factor, of that order.
    pub representatives: Vec<Cochain>,
}

#[derive(Serialize)]
pub struct CohomologySummary {
    pub divisors: Vec<u64>,
    pub group_order: usize,
}

/// Index of a tuple of non-identity elements in base `|G| - 1`.
fn tuple_index(args: &[usize], base: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * base + (a - 1))
}

/// Sparse rows of the normalized integral coboundary `C^k -> C^(k+1)`.
fn coboundary_rows(group: &Group, k: usize) -> Vec<Vec<(usize, i64)>> {
    let n = group.order();
    let base = n - 1;
    let mut rows = Vec::new();
    let mut args = vec![0usize; k + 1];
    let mut buf = vec![0usize; k];
    for_each_tuple(n, k + 1, true, &mut args, &mut |x| {
        let mut row: Vec<(usize, i64)> = Vec::with_capacity(k + 2);
        let push = |t: &[usize], s: i64, row: &mut Vec<(usize, i64)>| {
            if !t.contains(&0) {
                row.push((tuple_index(t, base), s));
            }
        };
        push(&x[1..], 1, &mut row);
        push(&x[..k], if (k + 1) % 2 == 0 { 1 } else { -1 }, &mut row);
        for i in 0..k {
            let mut m = 0;
            for j in 0..=k {
                if j == i {
                    buf[m] = group.mul(x[i], x[i + 1]);
                    m += 1;
                } else if j != i + 1 {
                    buf[m] = x[j];
                    m += 1;
                }
            }
            push(&buf, if (i + 1) % 2 == 0 { 1 } else { -1 }, &mut row);
        }
        row.sort_unstable();
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
        for (c, s) in row {
            match merged.last_mut() {
                Some(l) if l.0 == c => l.1 += s,
                _ => merged.push((c, s)),
            }
        }
        merged.retain(|e| e.1 != 0);
        rows.push(merged);
    });
    rows
}

fn dense_from_rows(rows: &[Vec<(usize, i64)>], cols: usize, modulus: u64) -> ModMatrix {
    let mut a = ModMatrix::zeros(rows.len(), cols, modulus);
    for (i, r) in rows.iter().enumerate() {
        for &(c, s) in r {
            a.add_at(i, c, s);
        }
    }
    a
}

/// Random combinations of the rows: with a few extra rows the row module is
/// preserved with overwhelming probability, and the result is verified.
fn compressed_from_rows(rows: &[Vec<(usize, i64)>], cols: usize, modulus: u64, extra: usize, seed: u64) -> ModMatrix {
    let k = cols + extra;
    let mut a = ModMatrix::zeros(k, cols, modulus);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coef = vec![0u64; k];
    let mut acc = vec![0u64; k * cols];
    for r in rows {
        for c in coef.iter_mut() {
            *c = rng.gen_range(0..modulus);
        }
        for &(col, s) in r {
            let s = s.rem_euclid(modulus as i64) as u64;
            for (i, &c) in coef.iter().enumerate() {
                let e = &mut acc[i * cols + col];
                *e = (*e + c * s) % modulus;
            }
        }
    }
    for i in 0..k {
        for j in 0..cols {
            a.set(i, j, acc[i * cols + j]);
        }
    }
    a
}

fn order_bound(group: &Group, bound: usize) -> Result<()> {
    if group.order() > bound {
        return Err(Error::OrderBound(bound));
    }
    Ok(())
}

/// Invariant factors of `H^3(G, U(1))` with representative cocycles.
pub fn h3_compute(group: &Group, bound: usize) -> Result<CohomologyResult> {
    order_bound(group, bound)?;
    let n = group.order();
    if n == 1 {
        return Ok(CohomologyResult { divisors: vec![], representatives: vec![] });
    }
    let m = n as u64;
    let modulus = m * m;
    let base = n - 1;
    let cols = base.pow(3);
    let rows = coboundary_rows(group, 3);
    let try_with = |compress: Option<u64>| -> Option<CohomologyResult> {
        let a = match compress {
            Some(seed) => compressed_from_rows(&rows, cols, modulus, 48, seed),
            None => dense_from_rows(&rows, cols, modulus),
        };
        let s = smith_form(a, &mut []);
        let mut divisors = Vec::new();
        let mut reps = Vec::new();
        for (i, &d) in s.diagonal.iter().enumerate() {
            if d == 1 || d == modulus {
                continue;
            }
            if m % d != 0 {
                return None;
            }
            let v = s.col_transform.column(i);
            let mut w = Cochain::trivial(3, n);
            let mut args = [0usize; 3];
            for_each_tuple(n, 3, true, &mut args, &mut |x| {
                let val = v[tuple_index(x, base)] % d;
                if val != 0 {
                    w.set(x, Phase::new(val as i64, d as i64));
                }
            });
            divisors.push(d);
            reps.push(w);
        }
        // Representatives must be cocycles of the stated order.
        for w in &reps {
            if !check_cocycle(w, group, usize::MAX, 0, 0).passed {
                return None;
            }
        }
        Some(CohomologyResult { divisors, representatives: reps })
    };
    if rows.len() > cols + 64 {
        for seed in 0..3 {
            if let Some(r) = try_with(Some(seed)) {
                // The compressed matrix can only lose relations, which would show
                // up as extra or larger factors; cross-check the total order.
                if verify_orders(group, &r) {
                    return Ok(r);
                }
            }
        }
    }
    try_with(None).ok_or_else(|| Error::LinAlg("Smith form produced an invalid representative".into()))
}

/// Checks that each representative has exactly its stated order.
fn verify_orders(group: &Group, r: &CohomologyResult) -> bool {
    r.representatives.iter().zip(&r.divisors).all(|(w, &d)| {
        let p = smallest_prime_factor(d);
        cohomologous(&w.scale((d / p) as i64), &Cochain::trivial(3, group.order()), group).ok().flatten().is_none()
    })
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..=n).find(|p| n % p == 0).unwrap_or(n)
}

/// A normalized 2-cochain `mu` with `omega1 - omega2 = d mu`, or `None`.
pub fn cohomologous(omega1: &Cochain, omega2: &Cochain, group: &Group) -> Result<Option<Cochain>> {
    let n = group.order();
    if !omega1.is_normalized() || !omega2.is_normalized() {
        return Err(Error::NotCocycle("cochains must be normalized".into()));
    }
    let diff = omega1.add(&omega2.neg());
    if diff.entries().is_empty() {
        return Ok(Some(Cochain::trivial(2, n)));
    }
    if n == 1 {
        return Ok(None);
    }
    // A witness can be chosen with values in (1/(L |G|)) Z / Z.
    let l = diff.denominator_lcm();
    let q = l * n as u64;
    let base = n - 1;
    let rows = coboundary_rows(group, 2);
    let a = dense_from_rows(&rows, base * base, q);
    let mut b = vec![0u64; rows.len()];
    let mut args = [0usize; 3];
    let mut idx = 0;
    for_each_tuple(n, 3, true, &mut args, &mut |x| {
        let p = diff.get(x);
        b[idx] = p.numer() * (q / p.denom());
        idx += 1;
    });
    let Some(x) = solve_mod(&a, &b) else { return Ok(None) };
    let mut mu = Cochain::trivial(2, n);
    let mut args2 = [0usize; 2];
    for_each_tuple(n, 2, true, &mut args2, &mut |t| {
        let v = x[tuple_index(t, base)];
        if v != 0 {
            mu.set(t, Phase::new(v as i64, q as i64));
        }
    });
    debug_assert_eq!(omega2.add(&mu.coboundary(group)).entries(), omega1.entries());
    Ok(Some(mu))
}

/// Order of the class of a normalized 3-cocycle.
pub fn class_order(omega: &Cochain, group: &Group) -> Result<u64> {
    let zero = Cochain::trivial(3, group.order());
    let d = omega.denominator_lcm().max(1) * group.order() as u64;
    for k in 1..=d {
        if k % group.order() as u64 != 0 && group.order() as u64 % k != 0 {
            continue;
        }
        if cohomologous(&omega.scale(k as i64), &zero, group)?.is_some() {
            return Ok(k);
        }
    }
    Ok(d)
}

/// Restriction of `omega` to a `p`-Sylow subgroup; returns the subgroup
/// elements (parent indices) and the restricted cochain.
pub fn sylow_restrict(omega: &Cochain, group: &Group, p: usize) -> (Vec<usize>, Cochain) {
    let s = group.sylow_subgroup(p);
    let r = omega.restrict(&s);
    (s, r)
}

/// Restriction to an arbitrary subgroup, checking closure.
pub fn restrict_to(omega: &Cochain, group: &Group, elems: &[usize]) -> Result<(Group, Cochain)> {
    if !group.is_subgroup(elems) {
        return Err(Error::Data("restriction target is not a subgroup".into()));
    }
    let (sub, emb) = group.subgroup(elems)?;
    Ok((sub, omega.restrict(&emb)))
}
