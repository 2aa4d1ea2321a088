//! Modular `S`, `T` action on double characters and Verlinde fusion.

use super::{double_character, CharVector, DoubleAlgebra, DoubleIrrepLabel};
use crate::error::{Error, Result};
use crate::numeric::linalg::CycMatrix;
use crate::numeric::{Cyclotomic, Phase};

/// `S`, `T` as matrices in the basis of irreducible characters, with
/// `A Ch_j = sum_i A_ij Ch_i`. Index 0 is the vacuum `({e}, trivial)`.
#[derive(Clone, Debug)]
pub struct ModularData {
    pub labels: Vec<DoubleIrrepLabel>,
    pub characters: Vec<CharVector>,
    pub s: CycMatrix,
    pub t: CycMatrix,
}

impl ModularData {
    /// `S^2 = (ST)^3`.
    pub fn st_relation_holds(&self) -> bool {
        let s2 = self.s.mul(&self.s);
        let st = self.s.mul(&self.t);
        s2 == st.mul(&st).mul(&st)
    }

    /// `S^4 = id`.
    pub fn s4_is_identity(&self) -> bool {
        self.s.pow(4).is_identity()
    }

    /// Eigenvalues of the diagonal `T`.
    pub fn t_phases(&self) -> Option<Vec<Phase>> {
        (0..self.t.rows())
            .map(|i| {
                if (0..self.t.cols()).any(|j| j != i && !self.t[(i, j)].is_zero()) {
                    return None;
                }
                self.t[(i, i)].as_root_of_unity()
            })
            .collect()
    }
}

/// `(T f)(x, y) = theta_x(x, y) f(x, xy)`.
fn t_apply(alg: &DoubleAlgebra, f: &CharVector, x: usize, y: usize) -> Cyclotomic {
    f.get(x, alg.group.mul(x, y)).mul_phase(alg.theta(x, x, y))
}

/// `(S f)(x, y) = theta_y(x, x^-1)^-1 f(y, x^-1)`.
fn s_apply(alg: &DoubleAlgebra, f: &CharVector, x: usize, y: usize) -> Cyclotomic {
    let xi = alg.group.inv(x);
    f.get(y, xi).mul_phase(-alg.theta(y, x, xi))
}

pub fn modular_data(alg: &DoubleAlgebra) -> Result<ModularData> {
    let labels = alg.irreducible_labels()?;
    let characters: Vec<CharVector> = labels.iter().map(|l| double_character(alg, l)).collect();
    let g = &alg.group;
    let n = g.order();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| g.centralizer(x).into_iter().map(move |y| (x, y))).collect();
    let r = characters.len();
    let mut x = CycMatrix::from_rows(
        characters.iter().map(|c| pairs.iter().map(|&(a, b)| c.get(a, b)).collect()).collect(),
    );
    let piv = x.rref();
    if piv.len() != r {
        return Err(Error::Representation(format!("characters span {} of {r} dimensions", piv.len())));
    }
    let a = CycMatrix::from_rows(
        piv.iter().map(|&c| characters.iter().map(|ch| ch.get(pairs[c].0, pairs[c].1)).collect()).collect(),
    );
    let a_inv = a.inverse().ok_or(Error::LinAlg("character submatrix is singular".into()))?;
    let express = |op: &dyn Fn(&CharVector, usize, usize) -> Cyclotomic| -> Result<CycMatrix> {
        let mut m = CycMatrix::zeros(r, r);
        for (j, ch) in characters.iter().enumerate() {
            let u: Vec<Cyclotomic> = piv.iter().map(|&c| op(ch, pairs[c].0, pairs[c].1)).collect();
            let coef = a_inv.mul_vec(&u);
            for &(p, q) in &pairs {
                let mut s = Cyclotomic::zero();
                for (i, c) in characters.iter().enumerate() {
                    s += &(&coef[i] * &c.get(p, q));
                }
                if s != op(ch, p, q) {
                    return Err(Error::Representation("transformed character leaves the character span".into()));
                }
            }
            for i in 0..r {
                m[(i, j)] = coef[i].clone();
            }
        }
        Ok(m)
    };
    let t = express(&|f, p, q| t_apply(alg, f, p, q))?;
    let s = express(&|f, p, q| s_apply(alg, f, p, q))?;
    Ok(ModularData { labels, characters, s, t })
}

/// `N_ij^k` as integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTensor {
    pub n: Vec<Vec<Vec<i64>>>,
}

impl FusionTensor {
    pub fn is_associative(&self) -> bool {
        let r = self.n.len();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let a: i64 = (0..r).map(|m| self.n[i][j][m] * self.n[m][k][l]).sum();
                        let b: i64 = (0..r).map(|m| self.n[j][k][m] * self.n[i][m][l]).sum();
                        if a != b {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// `N_ij^k = sum_a S_ia S_ja (S^-1)_ak / S_0a` with `S^-1 = S^3` and row 0 the vacuum.
pub fn verlinde_fusion(s: &CycMatrix) -> Result<FusionTensor> {
    let r = s.rows();
    let s_inv = s.pow(3);
    if !s.mul(&s_inv).is_identity() {
        return Err(Error::LinAlg("S^4 is not the identity".into()));
    }
    let vac: Vec<Cyclotomic> = (0..r)
        .map(|a| s[(0, a)].inverse().ok_or(Error::Representation(format!("vacuum entry S_0{a} vanishes"))))
        .collect::<Result<_>>()?;
    let mut n = vec![vec![vec![0i64; r]; r]; r];
    for i in 0..r {
        for j in 0..r {
            let w: Vec<Cyclotomic> = (0..r).map(|a| &(&s[(i, a)] * &s[(j, a)]) * &vac[a]).collect();
            for k in 0..r {
                let mut v = Cyclotomic::zero();
                for a in 0..r {
                    v += &(&w[a] * &s_inv[(a, k)]);
                }
                match v.to_i64() {
                    Some(x) if x >= 0 => n[i][j][k] = x,
                    _ => return Err(Error::Representation(format!("fusion coefficient N_{i}{j}^{k} = {v}"))),
                }
            }
        }
    }
    Ok(FusionTensor { n })
}

#[cfg(test)]
mod tests {
    use super::super::tests::z2_twisted;
    use super::*;
    use crate::cohomology::h3::h3_compute;
    use crate::groups::small::*;
    use crate::numeric::rat;

    #[test]
    fn untwisted_z2_modular_data() {
        let md = modular_data(&DoubleAlgebra::untwisted(cyclic(2))).unwrap();
        assert_eq!(md.s.rows(), 4);
        let half = Cyclotomic::from_rational(rat(1, 2));
        for i in 0..4 {
            for j in 0..4 {
                let v = &md.s[(i, j)];
                assert!(*v == half || *v == -&half);
            }
        }
        assert!(md.s4_is_identity());
        assert!(md.st_relation_holds());
        assert!(md.t_phases().unwrap()[0].is_one());
        let f = verlinde_fusion(&md.s).unwrap();
        // Group algebra of Z/2 x Z/2: every product is a single simple object.
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(f.n[i][j].iter().sum::<i64>(), 1);
            }
            assert_eq!(f.n[0][i][i], 1);
        }
        assert!(f.is_associative());
    }

    #[test]
    fn twisted_z2_has_order_four_twist() {
        let alg = z2_twisted();
        let md = modular_data(&alg).unwrap();
        let t = md.t_phases().unwrap();
        for (i, l) in md.labels.iter().enumerate() {
            if l.g_a == 1 {
                assert_eq!(t[i].order(), 4);
            } else {
                assert_eq!(t[i].order(), 1);
            }
        }
        assert!(md.s4_is_identity());
        assert!(md.st_relation_holds());
        let f = verlinde_fusion(&md.s).unwrap();
        let z: Vec<usize> = (0..4).filter(|&i| md.labels[i].g_a == 1).collect();
        for &a in &z {
            for &b in &z {
                for k in 0..4 {
                    if f.n[a][b][k] > 0 {
                        assert_eq!(md.labels[k].g_a, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn relations_for_every_cocycle_class() {
        for g in [cyclic(2), cyclic(3), cyclic(4), abelian(&[2, 2]), symmetric(3), quaternion()] {
            let reps = h3_compute(&g, 16).unwrap().representatives;
            let mut ws = vec![crate::cohomology::Cochain::trivial(3, g.order())];
            for w in &reps {
                ws.push(w.clone());
                ws.push(w.scale(-1));
            }
            for w in ws {
                let alg = DoubleAlgebra::new(g.clone(), w).unwrap();
                let md = modular_data(&alg).unwrap();
                assert!(md.st_relation_holds());
                assert!(md.s4_is_identity());
                assert!(md.t_phases().is_some());
                assert_eq!(md.s, md.s.transpose());
                let f = verlinde_fusion(&md.s).unwrap();
                assert!(f.is_associative());
                for j in 0..md.s.rows() {
                    for k in 0..md.s.rows() {
                        assert_eq!(f.n[0][j][k], (j == k) as i64);
                    }
                }
            }
        }
    }
}
