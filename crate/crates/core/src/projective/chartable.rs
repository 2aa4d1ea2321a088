//! Ordinary character tables by the Burnside–Dixon method.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::Group;
use crate::numeric::io::{cyc_from_json, cyc_to_json, CoeffJson};
use crate::numeric::{rat, Cyclotomic, Phase};

pub const DEFAULT_TABLE_BOUND: usize = 10_000;

/// Irreducible characters as rows over the conjugacy classes of a group.
#[derive(Clone, Debug)]
pub struct CharTable {
    pub classes: Vec<Vec<usize>>,
    pub class_names: Vec<String>,
    pub rows: Vec<Vec<Cyclotomic>>,
    class_of: Vec<usize>,
}

impl CharTable {
    pub fn group_order(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r[0].to_i64().expect("integral degree")).collect()
    }

    /// Value of row `i` on the element `x`.
    pub fn value(&self, i: usize, x: usize) -> &Cyclotomic {
        &self.rows[i][self.class_of[x]]
    }

    /// `sum_k |C_k| chi_i(C_k) conj(chi_j(C_k)) / |G|`.
    pub fn inner_product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let mut s = Cyclotomic::zero();
        for (k, c) in self.classes.iter().enumerate() {
            s += &(&a[k] * &b[k].conj()).scale(&rat(c.len() as i64, 1));
        }
        s.scale(&rat(1, self.group_order() as i64))
    }

    /// Exact row orthogonality.
    pub fn is_orthonormal(&self) -> bool {
        for i in 0..self.rows.len() {
            for j in 0..self.rows.len() {
                let ip = self.inner_product(&self.rows[i], &self.rows[j]);
                if ip != Cyclotomic::from_int((i == j) as i64) {
                    return false;
                }
            }
        }
        true
    }

    fn from_parts(group: &Group, classes: Vec<Vec<usize>>, rows: Vec<Vec<Cyclotomic>>) -> CharTable {
        let class_of = group.class_index_map(&classes);
        let class_names = default_class_names(group, &classes);
        CharTable { classes, class_names, rows, class_of }
    }

    pub fn to_file(&self) -> CharTableFile {
        CharTableFile {
            classes: self.class_names.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| self.class_names.iter().cloned().zip(r.iter().map(cyc_to_json)).collect())
                .collect(),
        }
    }

    /// Table from a file whose class names match those of `group`.
    pub fn from_file(group: &Group, file: &CharTableFile) -> Result<CharTable> {
        let classes = group.conjugacy_classes();
        let mut t = CharTable::from_parts(group, classes, Vec::new());
        if file.rows.len() != t.classes.len() {
            return Err(Error::Data(format!("{} rows for {} classes", file.rows.len(), t.classes.len())));
        }
        for row in &file.rows {
            let vals = t
                .class_names
                .iter()
                .map(|n| {
                    let v = row.get(n).ok_or_else(|| Error::Data(format!("row lacks class {n}")))?;
                    cyc_from_json(v)
                })
                .collect::<Result<Vec<_>>>()?;
            t.rows.push(vals);
        }
        if !t.is_orthonormal() {
            return Err(Error::Data("loaded character table is not orthonormal".into()));
        }
        Ok(t)
    }
}

/// Class names from the group when present, otherwise order and position.
pub fn default_class_names(group: &Group, classes: &[Vec<usize>]) -> Vec<String> {
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    classes
        .iter()
        .map(|c| {
            if let Some(n) = group.class_name(c[0]) {
                return n.to_string();
            }
            let o = group.elem_order(c[0]);
            let k = seen.entry(o).or_insert(0);
            *k += 1;
            let letter = (b'a' + ((*k - 1) % 26) as u8) as char;
            format!("{o}{letter}")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharTableFile {
    pub classes: Vec<String>,
    pub rows: Vec<BTreeMap<String, CoeffJson>>,
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `p = 1 mod e` with `p > 2 sqrt(order)`.
pub fn dixon_prime(order: usize, e: usize) -> u64 {
    let e = e as u64;
    let mut p = e + 1;
    while !(is_prime(p) && (p * p) > 4 * order as u64) {
        p += e;
    }
    p
}

/// An element of multiplicative order exactly `e` modulo `p`.
fn root_of_order(e: u64, p: u64) -> u64 {
    let mut qs = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            qs.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        qs.push(m);
    }
    let g = (2..p).find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("primitive root");
    pow_mod(g, (p - 1) / e, p)
}

/// Row-reduces `rows` in place, returning pivot columns. Rows end up in RREF.
fn rref_mod(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Null space of a square matrix modulo `p`.
fn nullspace_mod(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.first().map_or(0, Vec::len);
    let mut m = a.to_vec();
    let piv = rref_mod(&mut m, p);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; n];
            v[f] = 1;
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = (p - m[r][f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial modulo `p` via Hessenberg reduction; coefficients
/// in increasing degree.
fn charpoly_mod(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.to_vec();
    for c in 0..n.saturating_sub(2) {
        let Some(i) = (c + 1..n).find(|&i| h[i][c] != 0) else { continue };
        if i != c + 1 {
            h.swap(i, c + 1);
            for row in h.iter_mut() {
                row.swap(i, c + 1);
            }
        }
        let inv = inv_mod(h[c + 1][c], p);
        for i in c + 2..n {
            let f = h[i][c] * inv % p;
            if f == 0 {
                continue;
            }
            for j in 0..n {
                h[i][j] = (h[i][j] + (p - f) * h[c + 1][j]) % p;
            }
            for row in h.iter_mut() {
                row[c + 1] = (row[c + 1] + f * row[i]) % p;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        // p_{m+1} = (x - h_mm) p_m - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_i
        let mut next = vec![0; m + 2];
        for (k, &c) in polys[m].iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + (p - h[m][m]) * c) % p;
        }
        let mut prod = 1;
        for i in (0..m).rev() {
            prod = prod * h[i + 1][i] % p;
            let f = h[i][m] * prod % p;
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = (next[k] + (p - f) * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn eval_poly(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| (acc * x + a) % p)
}

struct ClassData<'a> {
    group: &'a Group,
    classes: &'a [Vec<usize>],
    class_of: Vec<usize>,
}

impl ClassData<'_> {
    /// `M_jk = sum_i a_i c_ijk` with `c_ijk = #{x in C_i : x^-1 z_k in C_j}`.
    fn combined_matrix(&self, a: &[u64], p: u64) -> Vec<Vec<u64>> {
        let r = self.classes.len();
        let mut m = vec![vec![0u64; r]; r];
        for (k, c) in self.classes.iter().enumerate() {
            let z = c[0];
            for x in 0..self.group.order() {
                let y = self.group.mul(self.group.inv(x), z);
                let j = self.class_of[y];
                m[j][k] = (m[j][k] + a[self.class_of[x]]) % p;
            }
        }
        m
    }
}

/// Splits the space into common eigenlines of the class-multiplication matrices.
fn common_eigenvectors(data: &ClassData, p: u64, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<u64>>> {
    let r = data.classes.len();
    let mut done = Vec::new();
    let identity: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as u64).collect()).collect();
    let mut work = vec![identity];
    let mut attempts = 0;
    while let Some(basis) = work.pop() {
        if basis.len() == 1 {
            done.push(basis.into_iter().next().unwrap());
            continue;
        }
        attempts += 1;
        if attempts > 64 * r + 64 {
            return Err(Error::Representation("class algebra failed to split".into()));
        }
        let a: Vec<u64> = (0..r).map(|_| rng.gen_range(0..p)).collect();
        let m = data.combined_matrix(&a, p);
        // Restriction to span(basis); basis rows are in RREF with pivots `piv`.
        let mut b = basis.clone();
        let piv = rref_mod(&mut b, p);
        let d = b.len();
        let mut x = vec![vec![0u64; d]; d];
        for (jj, bj) in b.iter().enumerate() {
            for (l, &pc) in piv.iter().enumerate() {
                let mut s = 0u64;
                for k in 0..r {
                    s = (s + m[pc][k] * bj[k]) % p;
                }
                x[l][jj] = s;
            }
        }
        let cp = charpoly_mod(&x, p);
        let roots: Vec<u64> = (0..p).filter(|&l| eval_poly(&cp, l, p) == 0).collect();
        let mut pieces = Vec::new();
        for &l in &roots {
            let mut y = x.clone();
            for (i, row) in y.iter_mut().enumerate() {
                row[i] = (row[i] + p - l) % p;
            }
            let ns = nullspace_mod(&y, p);
            let mut sub: Vec<Vec<u64>> = ns
                .iter()
                .map(|c| {
                    let mut v = vec![0u64; r];
                    for (l, bl) in b.iter().enumerate() {
                        for k in 0..r {
                            v[k] = (v[k] + c[l] * bl[k]) % p;
                        }
                    }
                    v
                })
                .collect();
            rref_mod(&mut sub, p);
            pieces.push(sub);
        }
        if pieces.iter().map(Vec::len).sum::<usize>() != d {
            return Err(Error::Representation("class matrix not diagonalizable modulo p".into()));
        }
        work.extend(pieces);
    }
    Ok(done)
}

/// Exact character table of `group`.
pub fn char_table(group: &Group) -> Result<CharTable> {
    char_table_bounded(group, DEFAULT_TABLE_BOUND)
}

pub fn char_table_bounded(group: &Group, bound: usize) -> Result<CharTable> {
    let n = group.order();
    if n > bound {
        return Err(Error::OrderBound(bound));
    }
    let classes = group.conjugacy_classes();
    let class_of = group.class_index_map(&classes);
    let r = classes.len();
    let e = group.exponent();
    let p = dixon_prime(n, e);
    let z = root_of_order(e as u64, p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let data = ClassData { group, classes: &classes, class_of: class_of.clone() };
    let vecs = common_eigenvectors(&data, p, &mut rng)?;
    let sizes: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();
    let inv_class: Vec<usize> = classes.iter().map(|c| class_of[group.inv(c[0])]).collect();
    let mut rows_mod = Vec::with_capacity(r);
    for v in vecs {
        if v[0] == 0 {
            return Err(Error::Representation("eigenvector vanishes at the identity".into()));
        }
        let s = inv_mod(v[0], p);
        let w: Vec<u64> = v.iter().map(|x| x * s % p).collect();
        let mut denom = 0u64;
        for k in 0..r {
            denom = (denom + w[k] * w[inv_class[k]] % p * inv_mod(sizes[k] % p, p)) % p;
        }
        let d2 = n as u64 % p * inv_mod(denom, p) % p;
        let d = (1..=n as u64).take_while(|d| d * d <= n as u64).find(|d| d * d % p == d2).ok_or_else(|| {
            Error::Representation("no integral degree matches".into())
        })?;
        let chi: Vec<u64> = (0..r).map(|k| d * w[k] % p * inv_mod(sizes[k] % p, p) % p).collect();
        rows_mod.push((d, chi));
    }
    let trivial = rows_mod.iter().position(|(d, c)| *d == 1 && c.iter().all(|&x| x == 1)).unwrap();
    let triv = rows_mod.remove(trivial);
    rows_mod.sort();
    rows_mod.insert(0, triv);
    let mut rows = Vec::with_capacity(r);
    for (d, chi) in &rows_mod {
        let mut row = Vec::with_capacity(r);
        for c in &classes {
            let g = c[0];
            let o = group.elem_order(g);
            let zo = pow_mod(z, (e / o) as u64, p);
            let vals: Vec<u64> = (0..o).map(|l| chi[class_of[group.pow(g, l as i64)]]).collect();
            let inv_o = inv_mod(o as u64 % p, p);
            let mut terms = Vec::new();
            for j in 0..o {
                let mut s = 0u64;
                for (l, &v) in vals.iter().enumerate() {
                    let ex = ((o - (j * l) % o) % o) as u64;
                    s = (s + v * pow_mod(zo, ex, p)) % p;
                }
                let mj = s * inv_o % p;
                if mj > *d {
                    return Err(Error::Representation(format!("eigenvalue multiplicity {mj} exceeds degree {d}")));
                }
                if mj > 0 {
                    terms.push((Phase::new(j as i64, o as i64), rat(mj as i64, 1)));
                }
            }
            row.push(Cyclotomic::from_phases(terms)?);
        }
        rows.push(row);
    }
    Ok(CharTable::from_parts(group, classes, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::small::*;

    #[test]
    fn cyclic_two() {
        let t = char_table(&cyclic(2)).unwrap();
        assert_eq!(t.rows, vec![vec![Cyclotomic::one(), Cyclotomic::one()], vec![Cyclotomic::one(), Cyclotomic::from_int(-1)]]);
    }

    #[test]
    fn symmetric_three() {
        let g = symmetric(3);
        let t = char_table(&g).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 2]);
        let tr = g.element_of(&[1, 0, 2]).unwrap();
        assert!(t.value(2, tr).is_zero());
        assert!(t.is_orthonormal());
    }

    #[test]
    fn quaternion_table() {
        let g = quaternion();
        let t = char_table(&g).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2]);
        let z = g.center().into_iter().find(|&x| x != 0).unwrap();
        assert_eq!(t.value(4, z), &Cyclotomic::from_int(-2));
        assert!(t.is_orthonormal());
    }

    #[test]
    fn tables_with_irrational_values() {
        for g in [cyclic(5), alternating4(), dihedral(5), symmetric(4), abelian(&[4, 2]), cyclic(12)] {
            let t = char_table(&g).unwrap();
            assert_eq!(t.rows.len(), t.classes.len());
            assert!(t.is_orthonormal());
            let s: i64 = t.degrees().iter().map(|d| d * d).sum();
            assert_eq!(s as usize, g.order());
        }
    }

    #[test]
    fn file_round_trip() {
        let g = alternating4();
        let t = char_table(&g).unwrap();
        let f = t.to_file();
        let s = serde_json::to_string(&f).unwrap();
        let back = CharTable::from_file(&g, &serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.rows, t.rows);
    }
}
