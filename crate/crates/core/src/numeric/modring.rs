//! Dense matrices over `Z/nZ` and their Smith normal form.

use num::integer::Integer;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    n: u64,
    data: Vec<u64>,
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

fn to_mod(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, n: u64) -> Self {
        assert!(n >= 1 && n < (1 << 32), "modulus out of range");
        ModMatrix { rows, cols, n, data: vec![0; rows * cols] }
    }

    pub fn identity(k: usize, n: u64) -> Self {
        let mut m = Self::zeros(k, k, n);
        for i in 0..k {
            m.set(i, i, 1 % n);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.n;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        let k = i * self.cols + j;
        self.data[k] = to_mod(self.data[k] as i128 + v as i128, self.n);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let n = self.n as u128;
        (0..self.rows)
            .map(|i| {
                let s: u128 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u128 * b as u128).sum();
                (s % n) as u64
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Rows `(a, b) <- (s a + t b, u a + v b)` from column `from` on.
    fn combine_rows(&mut self, a: usize, b: usize, c: [u64; 4], from: usize) {
        let n = self.n;
        let [s, t, u, v] = c;
        for j in from..self.cols {
            let x = self.data[a * self.cols + j];
            let y = self.data[b * self.cols + j];
            if x == 0 && y == 0 {
                continue;
            }
            self.data[a * self.cols + j] = lin(s, x, t, y, n);
            self.data[b * self.cols + j] = lin(u, x, v, y, n);
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, c: [u64; 4], from: usize) {
        let n = self.n;
        let [s, t, u, v] = c;
        for i in from..self.rows {
            let x = self.data[i * self.cols + a];
            let y = self.data[i * self.cols + b];
            if x == 0 && y == 0 {
                continue;
            }
            self.data[i * self.cols + a] = lin(s, x, t, y, n);
            self.data[i * self.cols + b] = lin(u, x, v, y, n);
        }
    }
}

fn lin(s: u64, x: u64, t: u64, y: u64, n: u64) -> u64 {
    ((s as u128 * x as u128 + t as u128 * y as u128) % n as u128) as u64
}

/// Unimodular 2x2 transform sending `(a, b)` to `(g, 0)`, as `[s, t, u, v]` mod `n`.
fn bezout(a: u64, b: u64, n: u64) -> [u64; 4] {
    if a != 0 && b % a == 0 {
        return [1, 0, to_mod(-((b / a) as i128), n), 1];
    }
    let (g, s, t) = egcd(a as i128, b as i128);
    let (ap, bp) = (a as i128 / g, b as i128 / g);
    [to_mod(s, n), to_mod(t, n), to_mod(-bp, n), to_mod(ap, n)]
}

/// Result of a Smith reduction `P A Q = D` over `Z/n`.
pub struct Smith {
    /// Diagonal entries reduced to their associate divisor of `n`; a chain
    /// under divisibility. Zero entries (free directions) are reported as `n`.
    pub diagonal: Vec<u64>,
    /// The column transform `Q` (square, invertible).
    pub col_transform: ModMatrix,
    /// Raw diagonal entries of `D` (associates of `diagonal`).
    pub raw_diagonal: Vec<u64>,
}

impl Smith {
    /// Solves `D y = c` where `c` has already been transformed by `P`; returns
    /// `Q y` or `None` if inconsistent.
    pub fn back_substitute(&self, c: &[u64]) -> Option<Vec<u64>> {
        let n = self.col_transform.n;
        let k = self.col_transform.rows;
        let mut y = vec![0u64; k];
        for (i, &ci) in c.iter().enumerate() {
            let d = self.raw_diagonal.get(i).copied().unwrap_or(0);
            if d == 0 {
                if ci % n != 0 {
                    return None;
                }
                continue;
            }
            let g = d.gcd(&n);
            if ci % g != 0 {
                return None;
            }
            let nn = n / g;
            let inv = mod_inverse((d / g) % nn.max(1), nn);
            y[i] = ((ci / g) as u128 * inv as u128 % nn.max(1) as u128) as u64;
        }
        Some(self.col_transform.mul_vec(&y))
    }
}

/// Inverse of a unit `a` modulo `n` (with `n = 1` giving 0).
pub fn mod_inverse(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let (g, s, _) = egcd(a as i128, n as i128);
    assert_eq!(g, 1, "{a} is not a unit mod {n}");
    to_mod(s, n)
}

/// Smith normal form over `Z/n`, tracking the column transform. The row
/// operations are also applied to every vector in `rhs`.
pub fn smith_form(mut a: ModMatrix, rhs: &mut [Vec<u64>]) -> Smith {
    let n = a.n;
    let (r, c) = (a.rows, a.cols);
    let mut q = ModMatrix::identity(c, n);
    let mut raw = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        // Pivot: entry with the smallest ideal in the remaining block.
        let mut best: Option<(u64, usize, usize)> = None;
        'scan: for i in t..r {
            for j in t..c {
                let v = a.get(i, j);
                if v != 0 {
                    let g = v.gcd(&n);
                    if best.map(|b| g < b.0).unwrap_or(true) {
                        best = Some((g, i, j));
                        if g == 1 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        for v in rhs.iter_mut() {
            v.swap(t, pi);
        }
        a.swap_cols(t, pj);
        q.swap_cols(t, pj);
        loop {
            for i in t + 1..r {
                let b = a.get(i, t);
                if b != 0 {
                    let m = bezout(a.get(t, t), b, n);
                    a.combine_rows(t, i, m, t);
                    for v in rhs.iter_mut() {
                        let (x, y) = (v[t] as u128, v[i] as u128);
                        let nn = n as u128;
                        v[t] = ((m[0] as u128 * x + m[1] as u128 * y) % nn) as u64;
                        v[i] = ((m[2] as u128 * x + m[3] as u128 * y) % nn) as u64;
                    }
                }
            }
            let mut dirty = false;
            for j in t + 1..c {
                let b = a.get(t, j);
                if b != 0 {
                    let m = bezout(a.get(t, t), b, n);
                    a.combine_cols(t, j, m, t);
                    q.combine_cols(t, j, m, 0);
                    dirty = true;
                }
            }
            if dirty && (t + 1..r).any(|i| a.get(i, t) != 0) {
                continue;
            }
            // Divisibility: the pivot must divide the rest of the block.
            let g = a.get(t, t).gcd(&n);
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| a.get(i, j) % g != 0));
            match bad {
                Some(i) => {
                    a.combine_rows(t, i, [1, 1, 0, 1], t);
                    for v in rhs.iter_mut() {
                        v[t] = ((v[t] as u128 + v[i] as u128) % n as u128) as u64;
                    }
                }
                None => break,
            }
        }
        raw.push(a.get(t, t));
        t += 1;
    }
    let diagonal = (0..c)
        .map(|i| raw.get(i).map(|&d| d.gcd(&n)).unwrap_or(n))
        .collect();
    Smith { diagonal, col_transform: q, raw_diagonal: raw }
}

/// Solves `A x = b` over `Z/n`, returning one solution if any exists.
pub fn solve_mod(a: &ModMatrix, b: &[u64]) -> Option<Vec<u64>> {
    let mut rhs = vec![b.to_vec()];
    let s = smith_form(a.clone(), &mut rhs);
    // Rows past the pivots must be zero; back_substitute checks c[i] for i < rank.
    let c = &rhs[0];
    if c.iter().skip(s.raw_diagonal.len()).any(|&x| x != 0) {
        return None;
    }
    s.back_substitute(&c[..s.raw_diagonal.len().min(c.len())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn from_rows(rows: &[&[i64]], n: u64) -> ModMatrix {
        let mut m = ModMatrix::zeros(rows.len(), rows[0].len(), n);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.add_at(i, j, v);
            }
        }
        m
    }

    #[test]
    fn smith_of_small_integer_matrix() {
        // Over Z the matrix [[2,4],[6,8]] has invariant factors 2, 4.
        let a = from_rows(&[&[2, 4], &[6, 8]], 64);
        let s = smith_form(a, &mut []);
        assert_eq!(s.diagonal, vec![2, 4]);
    }

    #[test]
    fn smith_divisibility_chain_composite_modulus() {
        let a = from_rows(&[&[2, 0], &[0, 3]], 36);
        let s = smith_form(a, &mut []);
        assert_eq!(s.diagonal, vec![1, 6]);
    }

    #[test]
    fn column_transform_kills_torsion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = 64;
            let mut a = ModMatrix::zeros(5, 4, n);
            for i in 0..5 {
                for j in 0..4 {
                    a.set(i, j, 2 * rng.gen_range(0..4));
                }
            }
            let s = smith_form(a.clone(), &mut []);
            for (i, &d) in s.diagonal.iter().enumerate() {
                let v = s.col_transform.column(i);
                let av = a.mul_vec(&v);
                assert!(av.iter().all(|x| x % d == 0));
            }
        }
    }

    #[test]
    fn solving_random_consistent_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = 24;
            let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..6));
            let mut a = ModMatrix::zeros(r, c, n);
            for i in 0..r {
                for j in 0..c {
                    a.set(i, j, rng.gen_range(0..n));
                }
            }
            let x: Vec<u64> = (0..c).map(|_| rng.gen_range(0..n)).collect();
            let b = a.mul_vec(&x);
            let y = solve_mod(&a, &b).expect("consistent system");
            assert_eq!(a.mul_vec(&y), b);
        }
    }

    #[test]
    fn inconsistent_system_detected() {
        let a = from_rows(&[&[2], &[0]], 4);
        assert!(solve_mod(&a, &[1, 0]).is_none());
        assert!(solve_mod(&a, &[2, 1]).is_none());
        assert_eq!(solve_mod(&a, &[2, 0]).map(|x| a.mul_vec(&x)), Some(vec![2, 0]));
    }
}
