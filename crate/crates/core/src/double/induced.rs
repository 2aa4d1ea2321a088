//! Explicit DPR-induced representations.

use std::collections::HashMap;

use super::{Cosets, DoubleAlgebra, DoubleIrrepLabel};
use crate::error::Result;
use crate::numeric::linalg::CycMatrix;
use crate::numeric::Cyclotomic;
use crate::projective::spin::projective_irrep_matrices;

/// `Ind(V) = C[G] (x)_B V` with basis `x_j (x) v_a`, ordered by `j` then `a`.
#[derive(Clone, Debug)]
pub struct InducedRep {
    pub cosets: Cosets,
    /// Flux `x_j g_A x_j^-1` of each coset.
    pub fluxes: Vec<usize>,
    /// `rho(h)` for `h` in the centralizer, indexed by local element.
    pub base_matrices: Vec<CycMatrix>,
    pub base_dim: usize,
    local: HashMap<usize, usize>,
}

/// Induces `label`. With `x x_j = x_k h`, `h` in `C_G(g_A)`,
/// `Q(x) (x_j (x) v) = theta_{g_k}(x, x_j) / theta_{g_k}(x_k, h) x_k (x) rho(h) v`
/// where `g_k = x_k g_A x_k^-1`, and `P(g)` projects onto the cosets with flux `g`.
pub fn dpr_induce(alg: &DoubleAlgebra, label: &DoubleIrrepLabel) -> Result<InducedRep> {
    let g = &alg.group;
    let cosets = Cosets::new(g, &label.centralizer);
    let fluxes = cosets.reps.iter().map(|&x| g.conj(label.g_a, g.inv(x))).collect();
    let base_matrices = projective_irrep_matrices(&label.base, &label.cocycle, &label.chi, label.dim)?;
    let local = label.centralizer.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    Ok(InducedRep { cosets, fluxes, base_matrices, base_dim: label.dim, local })
}

impl InducedRep {
    pub fn dim(&self) -> usize {
        self.cosets.reps.len() * self.base_dim
    }

    pub fn q_matrix(&self, alg: &DoubleAlgebra, x: usize) -> CycMatrix {
        let g = &alg.group;
        let d = self.base_dim;
        let mut m = CycMatrix::zeros(self.dim(), self.dim());
        for (j, &xj) in self.cosets.reps.iter().enumerate() {
            let y = g.mul(x, xj);
            let k = self.cosets.coset_of[y];
            let xk = self.cosets.reps[k];
            let h = g.mul(g.inv(xk), y);
            let gk = self.fluxes[k];
            let ph = alg.theta(gk, x, xj) - alg.theta(gk, xk, h);
            let rho = &self.base_matrices[self.local[&h]];
            for a in 0..d {
                for b in 0..d {
                    m[(k * d + a, j * d + b)] = rho[(a, b)].mul_phase(ph);
                }
            }
        }
        m
    }

    pub fn p_matrix(&self, g: usize) -> CycMatrix {
        let d = self.base_dim;
        let mut m = CycMatrix::zeros(self.dim(), self.dim());
        for (j, &f) in self.fluxes.iter().enumerate() {
            if f == g {
                for a in 0..d {
                    m[(j * d + a, j * d + a)] = Cyclotomic::one();
                }
            }
        }
        m
    }

    /// `pi(P(g) Q(x))`.
    pub fn action(&self, alg: &DoubleAlgebra, g: usize, x: usize) -> CycMatrix {
        self.p_matrix(g).mul(&self.q_matrix(alg, x))
    }

    /// Dimension of the space of matrices commuting with every `P(g)` and
    /// with `Q(s)` for the generators `s`.
    pub fn commutant_dim(&self, alg: &DoubleAlgebra) -> usize {
        let n = self.dim();
        let mut mats: Vec<CycMatrix> = (0..alg.group.order()).map(|g| self.p_matrix(g)).collect();
        mats.extend(alg.group.generators().iter().map(|&s| self.q_matrix(alg, s)));
        // Unknown X flattened row-major; rows of the system are entries of XM - MX.
        let mut rows = Vec::new();
        for m in &mats {
            for i in 0..n {
                for j in 0..n {
                    let mut r = vec![Cyclotomic::zero(); n * n];
                    for k in 0..n {
                        r[i * n + k] += &m[(k, j)];
                        r[k * n + j] -= &m[(i, k)];
                    }
                    rows.push(r);
                }
            }
        }
        let a = CycMatrix::from_rows(rows);
        n * n - a.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::z2_twisted;
    use super::super::*;
    use super::*;
    use crate::cohomology::h3::h3_compute;
    use crate::cohomology::Cochain;
    use crate::groups::small::*;
    use crate::groups::Group;

    fn check_algebra(alg: &DoubleAlgebra, rep: &InducedRep) {
        let g = &alg.group;
        let n = g.order();
        assert!(rep.q_matrix(alg, 0).is_identity());
        let q: Vec<CycMatrix> = (0..n).map(|x| rep.q_matrix(alg, x)).collect();
        let p: Vec<CycMatrix> = (0..n).map(|x| rep.p_matrix(x)).collect();
        for x in 0..n {
            for y in 0..n {
                // Q(x) Q(y) = sum_z theta_z(x, y) P(z) Q(xy)
                let mut rhs = CycMatrix::zeros(rep.dim(), rep.dim());
                for z in 0..n {
                    rhs = rhs.add(&p[z].mul(&q[g.mul(x, y)]).scale(&Cyclotomic::root(alg.theta(z, x, y))));
                }
                assert_eq!(q[x].mul(&q[y]), rhs);
                // Q(x) P(y) = P(x y x^-1) Q(x)
                assert_eq!(q[x].mul(&p[y]), p[g.conj(y, g.inv(x))].mul(&q[x]));
            }
        }
    }

    fn all_algebras() -> Vec<DoubleAlgebra> {
        let mut out = vec![z2_twisted()];
        let groups: Vec<Group> = vec![cyclic(3), abelian(&[2, 2]), symmetric(3), quaternion()];
        for g in groups {
            out.push(DoubleAlgebra::untwisted(g.clone()));
            for w in h3_compute(&g, 16).unwrap().representatives {
                out.push(DoubleAlgebra::new(g.clone(), w).unwrap());
            }
        }
        out
    }

    #[test]
    fn induced_reps_are_irreducible_representations() {
        for alg in all_algebras() {
            for l in alg.irreducible_labels().unwrap() {
                let rep = dpr_induce(&alg, &l).unwrap();
                assert_eq!(rep.dim(), rep.cosets.reps.len() * l.dim);
                check_algebra(&alg, &rep);
                assert_eq!(rep.commutant_dim(&alg), 1);
                let ch = double_character(&alg, &l);
                for x in 0..alg.group.order() {
                    for y in 0..alg.group.order() {
                        assert_eq!(rep.action(&alg, x, y).trace(), ch.get(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn s3_three_cycle_induction_has_dimension_two() {
        let g = symmetric(3);
        let alg = DoubleAlgebra::untwisted(g.clone());
        let c3 = g.element_of(&[1, 2, 0]).unwrap();
        let l = alg
            .irreducible_labels()
            .unwrap()
            .into_iter()
            .find(|l| g.conj(l.g_a, 0) == l.g_a && g.elem_order(l.g_a) == 3 && l.irrep_index == 1)
            .unwrap();
        assert!(g.conjugacy_classes()[l.class_index].contains(&c3));
        assert_eq!(dpr_induce(&alg, &l).unwrap().dim(), 2);
    }

    #[test]
    fn reducible_base_gives_reducible_induction() {
        // The regular character of Z/3 as base rep: commutant dimension 3.
        let g = cyclic(3);
        let alg = DoubleAlgebra::untwisted(g.clone());
        let mut l = alg.irreducible_labels().unwrap().remove(0);
        l.chi = vec![Cyclotomic::from_int(3), Cyclotomic::zero(), Cyclotomic::zero()];
        l.dim = 3;
        l.cocycle = Cochain::trivial(2, 3);
        let mats: Vec<CycMatrix> = (0..3)
            .map(|h| {
                let mut m = CycMatrix::zeros(3, 3);
                for x in 0..3 {
                    m[(g.mul(h, x), x)] = Cyclotomic::one();
                }
                m
            })
            .collect();
        let rep = InducedRep {
            cosets: Cosets::new(&g, &l.centralizer),
            fluxes: vec![0],
            base_matrices: mats,
            base_dim: 3,
            local: (0..3).map(|i| (i, i)).collect(),
        };
        assert_eq!(rep.commutant_dim(&alg), 3);
    }
}
