//! 2-cocycles derived from a 3-cocycle, multiplier phases and obstructions.

use std::sync::Arc;

use serde::Serialize;

use super::{check_cocycle, Cochain};
use crate::error::{Error, Result};
use crate::groups::congruence::{sl2_word, Letter, Sl2};
use crate::groups::pairs::CommutingPair;
use crate::groups::Group;
use crate::numeric::Phase;

/// `theta_g(x, y) = omega(x, g|^x, y) - omega(g, x, y) - omega(x, y, g|^(xy))`.
pub fn theta(omega: &Cochain, group: &Group, g: usize, x: usize, y: usize) -> Phase {
    let gx = group.conj(g, x);
    let gxy = group.conj(g, group.mul(x, y));
    omega.get(&[x, gx, y]) - omega.get(&[g, x, y]) - omega.get(&[x, y, gxy])
}

/// `eta_g(x, y) = omega(x, g, y|^g) - omega(x, y, g) - omega(g, x|^g, y|^g)`.
pub fn eta(omega: &Cochain, group: &Group, g: usize, x: usize, y: usize) -> Phase {
    let yg = group.conj(y, g);
    let xg = group.conj(x, g);
    omega.get(&[x, g, yg]) - omega.get(&[x, y, g]) - omega.get(&[g, xg, yg])
}

/// `theta_g` together with the centralizer it restricts to.
#[derive(Clone)]
pub struct ThetaTwoCocycle {
    pub g: usize,
    /// Sorted parent indices of `C_G(g)`.
    pub centralizer: Vec<usize>,
    omega: Arc<Cochain>,
}

impl ThetaTwoCocycle {
    pub fn value(&self, group: &Group, x: usize, y: usize) -> Phase {
        theta(&self.omega, group, self.g, x, y)
    }

    pub fn omega(&self) -> &Cochain {
        &self.omega
    }

    /// Table of values on `C_G(g)` in the order of [`ThetaTwoCocycle::centralizer`].
    pub fn table(&self, group: &Group) -> Vec<Vec<Phase>> {
        self.centralizer
            .iter()
            .map(|&x| self.centralizer.iter().map(|&y| self.value(group, x, y)).collect())
            .collect()
    }

    /// First failure of the 2-cocycle identity on `C_G(g)`, if any.
    pub fn cocycle_failure(&self, group: &Group) -> Option<(usize, usize, usize)> {
        let c = &self.centralizer;
        for &x in c {
            for &y in c {
                let xy = group.mul(x, y);
                let cxy = self.value(group, x, y);
                for &z in c {
                    let d = self.value(group, y, z) - self.value(group, xy, z) + self.value(group, x, group.mul(y, z))
                        - cxy;
                    if !d.is_one() {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// First pair in `C_G(g)` where `theta_g` and `eta_g` differ.
    pub fn eta_mismatch(&self, group: &Group) -> Option<(usize, usize)> {
        for &x in &self.centralizer {
            for &y in &self.centralizer {
                if self.value(group, x, y) != eta(&self.omega, group, self.g, x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// `theta_g` for a 3-cocycle, checking the cocycle condition first (exhaustive
/// up to 64 elements, sampled beyond).
pub fn theta_from_omega(omega: &Arc<Cochain>, group: &Group, g: usize) -> Result<ThetaTwoCocycle> {
    let chk = check_cocycle(omega, group, 64, 20_000, 17);
    if !chk.passed {
        return Err(Error::NotCocycle(format!("failure at {:?}", chk.failure)));
    }
    Ok(theta_unchecked(omega, group, g))
}

pub fn theta_unchecked(omega: &Arc<Cochain>, group: &Group, g: usize) -> ThetaTwoCocycle {
    ThetaTwoCocycle { g, centralizer: group.centralizer(g), omega: omega.clone() }
}

fn require_commuting(group: &Group, p: CommutingPair) -> Result<()> {
    if !group.commutes(p.g, p.h) {
        return Err(Error::NonCommuting(p.g, p.h));
    }
    Ok(())
}

/// `(varsigma(T), varsigma(S)) = (theta_g(g, h)^-1, theta_h(g, g^-1))`.
pub fn multiplier_on_generators(omega: &Cochain, group: &Group, p: CommutingPair) -> Result<(Phase, Phase)> {
    require_commuting(group, p)?;
    Ok((sigma_t(omega, group, p), sigma_s(omega, group, p)))
}

fn sigma_t(omega: &Cochain, group: &Group, p: CommutingPair) -> Phase {
    -theta(omega, group, p.g, p.g, p.h)
}

fn sigma_s(omega: &Cochain, group: &Group, p: CommutingPair) -> Phase {
    theta(omega, group, p.h, p.g, group.inv(p.g))
}

fn act_letter(group: &Group, p: CommutingPair, l: Letter) -> CommutingPair {
    match l {
        Letter::S => CommutingPair { g: p.h, h: group.inv(p.g) },
        Letter::T => CommutingPair { g: p.g, h: group.mul(p.g, p.h) },
        Letter::TInv => CommutingPair { g: p.g, h: group.mul(group.inv(p.g), p.h) },
    }
}

/// Multiplier on one letter at pair `p`; `varsigma_p(T^-1) = varsigma_{p T^-1}(T)^-1`.
pub fn multiplier_letter(omega: &Cochain, group: &Group, p: CommutingPair, l: Letter) -> Phase {
    match l {
        Letter::S => sigma_s(omega, group, p),
        Letter::T => sigma_t(omega, group, p),
        Letter::TInv => -sigma_t(omega, group, act_letter(group, p, Letter::TInv)),
    }
}

/// Multiplier along a word via `varsigma_p(AB) = varsigma_p(A) varsigma_{p A}(B)`;
/// also returns the pair `p . word`.
pub fn multiplier_on_word(omega: &Cochain, group: &Group, p: CommutingPair, word: &[Letter]) -> (Phase, CommutingPair) {
    let mut acc = Phase::ONE;
    let mut cur = p;
    for &l in word {
        acc = acc + multiplier_letter(omega, group, cur, l);
        cur = act_letter(group, cur, l);
    }
    (acc, cur)
}

/// Multiplier of a matrix through its canonical word.
pub fn multiplier(omega: &Cochain, group: &Group, p: CommutingPair, gamma: &Sl2) -> Result<Phase> {
    require_commuting(group, p)?;
    let w = sl2_word(gamma)?;
    Ok(multiplier_on_word(omega, group, p, &w.letters).0)
}

/// Defects of the relations `S^4 = 1` and `(ST)^3 = S^2` for the multiplier
/// at `p`: trivial phases mean the word-defined multiplier is consistent there.
pub fn relation_defects(omega: &Cochain, group: &Group, p: CommutingPair) -> (Phase, Phase) {
    use Letter::*;
    let s4 = multiplier_on_word(omega, group, p, &[S, S, S, S]).0;
    let st3 = multiplier_on_word(omega, group, p, &[S, T, S, T, S, T]).0;
    let s2 = multiplier_on_word(omega, group, p, &[S, S]).0;
    (s4, st3 - s2)
}

/// `xi_(g,h)(k) = theta_g(k, h|^k) - theta_g(h, k)`.
pub fn xi_phase(omega: &Cochain, group: &Group, p: CommutingPair, k: usize) -> Result<Phase> {
    require_commuting(group, p)?;
    Ok(theta(omega, group, p.g, k, group.conj(p.h, k)) - theta(omega, group, p.g, p.h, k))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Obstruction {
    /// No `k` conjugates `(g, h)` to `(g^-1, h^-1)`.
    NotApplicable,
    Unobstructed { k: usize, sigma_minus_identity: Phase, xi_inverse_pair: Phase, xi_pair: Phase },
    Obstructed { k: usize, sigma_minus_identity: Phase, xi_inverse_pair: Phase, xi_pair: Phase },
}

impl Obstruction {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, Obstruction::Obstructed { .. })
    }
}

/// Compares `varsigma_(g,h)(-I)`, computed along the word `SS`, with
/// `xi_(g,h)(k)` for the least `k` with `(g|^k, h|^k) = (g^-1, h^-1)`.
/// The phase `xi_(g^-1,h^-1)(k)` is reported alongside; comparing against it
/// instead is not invariant under coboundary shifts of `omega`.
pub fn obstruction_check(omega: &Cochain, group: &Group, p: CommutingPair) -> Result<Obstruction> {
    require_commuting(group, p)?;
    let (gi, hi) = (group.inv(p.g), group.inv(p.h));
    let Some(k) = (0..group.order()).find(|&k| group.conj(p.g, k) == gi && group.conj(p.h, k) == hi) else {
        return Ok(Obstruction::NotApplicable);
    };
    let (sigma, _) = multiplier_on_word(omega, group, p, &[Letter::S, Letter::S]);
    let xi_inv = xi_phase(omega, group, CommutingPair { g: gi, h: hi }, k)?;
    let xi = xi_phase(omega, group, p, k)?;
    Ok(if sigma == xi {
        Obstruction::Unobstructed { k, sigma_minus_identity: sigma, xi_inverse_pair: xi_inv, xi_pair: xi }
    } else {
        Obstruction::Obstructed { k, sigma_minus_identity: sigma, xi_inverse_pair: xi_inv, xi_pair: xi }
    })
}

#[cfg(test)]
mod tests {
    use super::super::h3::h3_compute;
    use super::*;
    use crate::groups::small::*;

    fn z2_omega() -> Arc<Cochain> {
        let mut w = Cochain::trivial(3, 2);
        w.set(&[1, 1, 1], Phase::new(1, 2));
        Arc::new(w)
    }

    #[test]
    fn theta_for_z2() {
        let g = cyclic(2);
        let w = z2_omega();
        assert_eq!(theta(&w, &g, 1, 1, 1), Phase::new(1, 2));
        let t = Arc::new(Cochain::trivial(3, 2));
        for x in 0..2 {
            for y in 0..2 {
                assert!(theta(&t, &g, 1, x, y).is_one());
                assert!(theta(&w, &g, 0, x, y).is_one());
            }
        }
        let th = theta_from_omega(&w, &g, 1).unwrap();
        assert!(th.cocycle_failure(&g).is_none());
    }

    #[test]
    fn multiplier_examples() {
        let g = cyclic(2);
        let w = z2_omega();
        let (t, s) = multiplier_on_generators(&w, &g, CommutingPair { g: 1, h: 1 }).unwrap();
        assert_eq!(t, Phase::new(1, 2));
        let _ = s;
        let (t, _) = multiplier_on_generators(&w, &g, CommutingPair { g: 0, h: 1 }).unwrap();
        assert!(t.is_one());
        let triv = Cochain::trivial(3, 2);
        assert_eq!(multiplier_on_generators(&triv, &g, CommutingPair { g: 1, h: 1 }).unwrap(), (Phase::ONE, Phase::ONE));
    }

    #[test]
    fn xi_examples() {
        let g = cyclic(2);
        let w = z2_omega();
        let p = CommutingPair { g: 1, h: 1 };
        assert!(xi_phase(&w, &g, p, 1).unwrap().is_one());
        assert!(xi_phase(&w, &g, p, 0).unwrap().is_one());
    }

    #[test]
    fn theta_is_cocycle_and_matches_eta_for_nonabelian() {
        for g in [symmetric(3), quaternion()] {
            let r = h3_compute(&g, 16).unwrap();
            for w in r.representatives {
                let w = Arc::new(w);
                for x in 0..g.order() {
                    let th = theta_from_omega(&w, &g, x).unwrap();
                    assert!(th.cocycle_failure(&g).is_none());
                    assert!(th.eta_mismatch(&g).is_none());
                }
            }
        }
    }

    #[test]
    fn trivial_cocycle_is_unobstructed() {
        let g = abelian(&[2, 2]);
        let triv = Cochain::trivial(3, 4);
        for x in 0..4 {
            for y in 0..4 {
                let o = obstruction_check(&triv, &g, CommutingPair { g: x, h: y }).unwrap();
                assert!(matches!(o, Obstruction::Unobstructed { k: 0, .. }));
            }
        }
        let s3 = symmetric(3);
        let c3 = s3.element_of(&[1, 2, 0]).unwrap();
        let o = obstruction_check(&Cochain::trivial(3, 6), &s3, CommutingPair { g: c3, h: 0 }).unwrap();
        assert!(matches!(o, Obstruction::Unobstructed { .. }));
    }

    #[test]
    fn verdict_is_stable_under_coboundary_shifts() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for g in [dihedral(4), quaternion(), abelian(&[2, 2])] {
            let n = g.order();
            let r = h3_compute(&g, 16).unwrap();
            for w in &r.representatives {
                for _ in 0..20 {
                    let beta = Cochain::from_fn(2, n, |t: &[usize]| {
                        if t.contains(&0) { Phase::ONE } else { Phase::new(rng.gen_range(0..8), 8) }
                    });
                    let shifted = w.add(&beta.coboundary(&g));
                    for x in 0..n {
                        for y in g.centralizer(x) {
                            let p = CommutingPair { g: x, h: y };
                            let a = obstruction_check(w, &g, p).unwrap();
                            let b = obstruction_check(&shifted, &g, p).unwrap();
                            assert_eq!(a.is_obstructed(), b.is_obstructed());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn groups_with_order_four_elements_have_obstructed_pairs() {
        // Exhaustive over every class produced by the Smith form; the
        // obstructed pairs found all consist of involutions.
        for g in [dihedral(4), abelian(&[4, 2])] {
            let r = h3_compute(&g, 16).unwrap();
            let mut found = false;
            for (i, w) in r.representatives.iter().enumerate() {
                for s in 1..r.divisors[i] as i64 {
                    let w = w.scale(s);
                    for x in 0..g.order() {
                        for y in g.centralizer(x) {
                            found |= obstruction_check(&w, &g, CommutingPair { g: x, h: y }).unwrap().is_obstructed();
                        }
                    }
                }
            }
            assert!(found);
        }
        let q8 = quaternion();
        let w = &h3_compute(&q8, 16).unwrap().representatives[0];
        for x in 0..8 {
            for y in q8.centralizer(x) {
                assert!(!obstruction_check(w, &q8, CommutingPair { g: x, h: y }).unwrap().is_obstructed());
            }
        }
    }
}
