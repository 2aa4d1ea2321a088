//! Representations of the twisted Drinfel'd double `D^omega(G)`.

pub mod induced;
pub mod modular;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cohomology::theta::theta;
use crate::cohomology::{check_cocycle, Cochain};
use crate::error::{Error, Result};
use crate::groups::Group;
use crate::numeric::{Cyclotomic, Phase};
use crate::projective::extension::projective_table;

pub use induced::{dpr_induce, InducedRep};
pub use modular::{modular_data, verlinde_fusion, FusionTensor, ModularData};

/// `D^omega(G)` for a normalized 3-cocycle `omega`.
#[derive(Clone)]
pub struct DoubleAlgebra {
    pub group: Group,
    pub omega: Arc<Cochain>,
}

impl DoubleAlgebra {
    pub fn new(group: Group, omega: Cochain) -> Result<Self> {
        if omega.arity() != 3 || omega.order() != group.order() {
            return Err(Error::NotCocycle("cochain does not match the group".into()));
        }
        let chk = check_cocycle(&omega, &group, 64, 100_000, 1);
        if !chk.passed {
            return Err(Error::NotCocycle(format!("failure at {:?}", chk.failure)));
        }
        Ok(DoubleAlgebra { group, omega: Arc::new(omega) })
    }

    pub fn untwisted(group: Group) -> Self {
        let n = group.order();
        DoubleAlgebra { group, omega: Arc::new(Cochain::trivial(3, n)) }
    }

    pub fn theta(&self, g: usize, x: usize, y: usize) -> Phase {
        theta(&self.omega, &self.group, g, x, y)
    }

    /// One label per conjugacy class and `theta_{g_A}`-projective irrep of `C_G(g_A)`.
    pub fn irreducible_labels(&self) -> Result<Vec<DoubleIrrepLabel>> {
        let g = &self.group;
        let mut out = Vec::new();
        for (ci, class) in g.conjugacy_classes().into_iter().enumerate() {
            let ga = class[0];
            let (h, emb) = g.subgroup(&g.centralizer(ga))?;
            let c = Cochain::from_fn(2, h.order(), |t| self.theta(ga, emb[t[0]], emb[t[1]]));
            let table = projective_table(&h, &c)?;
            for i in 0..table.len() {
                if !table.gauged[i] {
                    return Err(Error::Representation(format!("irrep {i} over class {ci} is not theta-compatible")));
                }
                out.push(DoubleIrrepLabel {
                    class_index: ci,
                    g_a: ga,
                    centralizer: emb.clone(),
                    base: h.clone(),
                    cocycle: c.clone(),
                    chi: table.rows[i].clone(),
                    dim: table.dims[i] as usize,
                    irrep_index: i,
                });
            }
        }
        Ok(out)
    }
}

/// A conjugacy class with a projective irrep of the centralizer of its representative.
#[derive(Clone, Debug)]
pub struct DoubleIrrepLabel {
    pub class_index: usize,
    pub g_a: usize,
    /// Parent indices of `C_G(g_A)`, indexed by elements of `base`.
    pub centralizer: Vec<usize>,
    pub base: Group,
    /// `theta_{g_A}` on `base`.
    pub cocycle: Cochain,
    /// Projective character on `base`.
    pub chi: Vec<Cyclotomic>,
    pub dim: usize,
    pub irrep_index: usize,
}

/// Characters `Ch_(x, y) = Tr(P(x) Q(y))`, stored on non-zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CharVector {
    pub order: usize,
    pub values: BTreeMap<(usize, usize), Cyclotomic>,
}

impl CharVector {
    pub fn get(&self, x: usize, y: usize) -> Cyclotomic {
        self.values.get(&(x, y)).cloned().unwrap_or_else(Cyclotomic::zero)
    }
}

/// Left-coset data for `G / C_G(g_A)` with lexicographically least representatives.
#[derive(Clone, Debug)]
pub struct Cosets {
    pub reps: Vec<usize>,
    /// Coset index of every element.
    pub coset_of: Vec<usize>,
}

impl Cosets {
    pub fn new(group: &Group, sub: &[usize]) -> Cosets {
        Self::with_choice(group, sub, |c| c[0])
    }

    /// Coset representatives picked by `choose` from each sorted coset.
    pub fn with_choice(group: &Group, sub: &[usize], choose: impl Fn(&[usize]) -> usize) -> Cosets {
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let mut c: Vec<usize> = sub.iter().map(|&h| group.mul(x, h)).collect();
            c.sort_unstable();
            for &y in &c {
                coset_of[y] = reps.len();
            }
            reps.push(choose(&c));
        }
        Cosets { reps, coset_of }
    }
}

/// Exact character of the DPR-induced representation: on `(x, y)` with
/// `x = x_j g_A x_j^-1` and `h = x_j^-1 y x_j` in `C_G(g_A)` it is
/// `theta_x(y, x_j) / theta_x(x_j, h) chi(h)`, and zero elsewhere.
pub fn double_character(alg: &DoubleAlgebra, label: &DoubleIrrepLabel) -> CharVector {
    let cos = Cosets::new(&alg.group, &label.centralizer);
    character_with_cosets(alg, label, &cos)
}

pub fn character_with_cosets(alg: &DoubleAlgebra, label: &DoubleIrrepLabel, cos: &Cosets) -> CharVector {
    let g = &alg.group;
    let local: std::collections::HashMap<usize, usize> =
        label.centralizer.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut values = BTreeMap::new();
    for &xj in &cos.reps {
        let x = g.conj(label.g_a, g.inv(xj));
        for y in g.centralizer(x) {
            let h = g.conj(y, xj);
            let v = &label.chi[local[&h]];
            if v.is_zero() {
                continue;
            }
            let ph = alg.theta(x, y, xj) - alg.theta(x, xj, h);
            values.insert((x, y), v.mul_phase(ph));
        }
    }
    CharVector { order: g.order(), values }
}

/// A failure of `Ch_(x|^z, y|^z) = theta_x(z, y|^z) / theta_x(y, z) Ch_(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceViolation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

/// Exhaustive check of conjugation covariance and support on commuting pairs.
pub fn conj_covariance_check(ch: &CharVector, alg: &DoubleAlgebra) -> Vec<CovarianceViolation> {
    let g = &alg.group;
    let n = g.order();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let v = ch.get(x, y);
            if !g.commutes(x, y) {
                if !v.is_zero() {
                    out.push(CovarianceViolation { x, y, z: 0 });
                }
                continue;
            }
            for z in 0..n {
                let (xz, yz) = (g.conj(x, z), g.conj(y, z));
                let expect = v.mul_phase(alg.theta(x, z, yz) - alg.theta(x, y, z));
                if ch.get(xz, yz) != expect {
                    out.push(CovarianceViolation { x, y, z });
                }
            }
        }
    }
    out
}
