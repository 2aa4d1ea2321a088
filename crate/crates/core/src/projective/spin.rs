//! Explicit matrices for projective irreps, cut out of the twisted group algebra.

use crate::cohomology::Cochain;
use crate::error::{Error, Result};
use crate::groups::Group;
use crate::numeric::linalg::CycMatrix;
use crate::numeric::{rat, Cyclotomic, Phase};

fn root(p: Phase) -> Cyclotomic {
    Cyclotomic::root(p)
}

/// Row-reduced basis of the span of `vecs`, with pivot columns.
fn reduced_basis(vecs: Vec<Vec<Cyclotomic>>) -> (CycMatrix, Vec<usize>) {
    if vecs.is_empty() {
        return (CycMatrix::zeros(0, 0), Vec::new());
    }
    let mut m = CycMatrix::from_rows(vecs);
    let piv = m.rref();
    let rows = (0..piv.len()).map(|i| m.row(i).to_vec()).collect();
    (CycMatrix::from_rows(rows), piv)
}

/// Matrix of a linear map on the span of `basis`, given images of basis rows.
fn restrict(basis: &CycMatrix, piv: &[usize], apply: impl Fn(&[Cyclotomic]) -> Vec<Cyclotomic>) -> CycMatrix {
    let d = basis.rows();
    let mut m = CycMatrix::zeros(d, d);
    for j in 0..d {
        let img = apply(basis.row(j));
        for (i, &p) in piv.iter().enumerate() {
            m[(i, j)] = img[p].clone();
        }
    }
    m
}

/// `L(h) v` where `L(h) e_x = c(h, x) e_{hx}`.
fn left_act(group: &Group, c: &Cochain, h: usize, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(); v.len()];
    for (x, vx) in v.iter().enumerate() {
        if !vx.is_zero() {
            out[group.mul(h, x)] += &vx.mul_phase(c.get(&[h, x]));
        }
    }
    out
}

/// `R(k) v` where `R(k) e_x = c(x, k) e_{xk}`; commutes with every `L(h)`.
fn right_act(group: &Group, c: &Cochain, k: usize, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(); v.len()];
    for (x, vx) in v.iter().enumerate() {
        if !vx.is_zero() {
            out[group.mul(x, k)] += &vx.mul_phase(c.get(&[x, k]));
        }
    }
    out
}

/// Matrices `rho(h)` for every `h`, with `rho(h1) rho(h2) = c(h1, h2) rho(h1 h2)`
/// and trace `chi`. The isotypic component of `chi` in the twisted regular
/// representation is cut down to one copy by an eigenspace of some `R(k)`
/// whose eigenvalue occurs with multiplicity one in the multiplicity space.
pub fn projective_irrep_matrices(group: &Group, c: &Cochain, chi: &[Cyclotomic], dim: usize) -> Result<Vec<CycMatrix>> {
    let n = group.order();
    let scale = rat(dim as i64, n as i64);
    let project = |v: &[Cyclotomic]| -> Vec<Cyclotomic> {
        let mut out = vec![Cyclotomic::zero(); n];
        for h in 0..n {
            if chi[h].is_zero() {
                continue;
            }
            let w = left_act(group, c, h, v);
            let f = chi[h].conj().scale(&scale);
            for (o, x) in out.iter_mut().zip(&w) {
                if !x.is_zero() {
                    *o += &(&f * x);
                }
            }
        }
        out
    };
    let images: Vec<Vec<Cyclotomic>> = (0..n)
        .map(|x| {
            let mut e = vec![Cyclotomic::zero(); n];
            e[x] = Cyclotomic::one();
            project(&e)
        })
        .collect();
    let (iso, iso_piv) = reduced_basis(images);
    if iso.rows() != dim * dim {
        return Err(Error::Representation(format!(
            "isotypic component has dimension {} instead of {}",
            iso.rows(),
            dim * dim
        )));
    }
    let piece = if dim == 1 {
        (iso, iso_piv)
    } else {
        let mut found = None;
        'search: for k in 1..n {
            let rk = restrict(&iso, &iso_piv, |v| right_act(group, c, k, v));
            let o = group.elem_order(k);
            // R(k)^o is the scalar c-product along the powers of k.
            let mut mu = Phase::ONE;
            let mut x = 0;
            for _ in 0..o {
                mu = mu + c.get(&[x, k]);
                x = group.mul(x, k);
            }
            for j in 0..o as i64 {
                let lam = Phase::from_rational(&((mu.value() + rat(j, 1)) / rat(o as i64, 1)));
                let m = rk.sub(&CycMatrix::identity(rk.rows()).scale(&root(lam)));
                let ker = m.nullspace();
                if ker.len() == dim {
                    let vecs = ker
                        .iter()
                        .map(|coords| {
                            let mut v = vec![Cyclotomic::zero(); n];
                            for (l, cl) in coords.iter().enumerate() {
                                if cl.is_zero() {
                                    continue;
                                }
                                for (vx, bx) in v.iter_mut().zip(iso.row(l)) {
                                    if !bx.is_zero() {
                                        *vx += &(cl * bx);
                                    }
                                }
                            }
                            v
                        })
                        .collect();
                    found = Some(reduced_basis(vecs));
                    break 'search;
                }
            }
        }
        found.ok_or(Error::Representation("no right multiplication separates the copies".into()))?
    };
    let (w, piv) = piece;
    let mats: Vec<CycMatrix> = (0..n).map(|h| restrict(&w, &piv, |v| left_act(group, c, h, v))).collect();
    for h in 0..n {
        if mats[h].trace() != chi[h] {
            return Err(Error::Representation(format!("trace mismatch at element {h}")));
        }
    }
    Ok(mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::small::*;
    use crate::projective::extension::projective_table;

    fn check(g: &Group, c: &Cochain) {
        let t = projective_table(g, c).unwrap();
        for i in 0..t.len() {
            let m = projective_irrep_matrices(g, c, &t.rows[i], t.dims[i] as usize).unwrap();
            assert!(m[0].is_identity());
            for a in 0..g.order() {
                for b in 0..g.order() {
                    let lhs = m[a].mul(&m[b]);
                    let rhs = m[g.mul(a, b)].scale(&root(c.get(&[a, b])));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn ordinary_irreps_of_small_groups() {
        check(&symmetric(3), &Cochain::trivial(2, 6));
        check(&quaternion(), &Cochain::trivial(2, 8));
        check(&alternating4(), &Cochain::trivial(2, 12));
    }

    #[test]
    fn twisted_irrep_of_klein_group() {
        let g = abelian(&[2, 2]);
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let ab = g.mul(a, b);
        let mut c = Cochain::trivial(2, 4);
        // x_1 y_2 / 2 in coordinates over (a, b)
        for (x, y) in [(a, b), (a, ab), (ab, b), (ab, ab)] {
            c.set(&[x, y], Phase::new(1, 2));
        }
        check(&g, &c);
    }
}
