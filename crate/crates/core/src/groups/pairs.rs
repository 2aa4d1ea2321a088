//! Commuting pairs and their classification under conjugation and `SL2(Z)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::congruence::Sl2;
use super::Group;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CommutingPair {
    pub g: usize,
    pub h: usize,
}

impl CommutingPair {
    pub fn new(group: &Group, g: usize, h: usize) -> Result<Self> {
        if !group.commutes(g, h) {
            return Err(Error::NonCommuting(g, h));
        }
        Ok(CommutingPair { g, h })
    }
}

/// Exponent of the abelian group generated by a commuting pair.
pub fn pair_level(group: &Group, p: CommutingPair) -> usize {
    num::integer::lcm(group.elem_order(p.g), group.elem_order(p.h))
}

/// `gamma(g, h) = (g^a h^c, g^b h^d)` for `gamma = [[a, b], [c, d]]`.
///
/// This is a right action: `(p . gamma1) . gamma2 = p . (gamma1 gamma2)`.
pub fn sl2_act(group: &Group, gamma: &Sl2, p: CommutingPair) -> Result<CommutingPair> {
    if !group.commutes(p.g, p.h) {
        return Err(Error::NonCommuting(p.g, p.h));
    }
    let [a, b, c, d] = *gamma;
    let g = group.mul(group.pow(p.g, a), group.pow(p.h, c));
    let h = group.mul(group.pow(p.g, b), group.pow(p.h, d));
    Ok(CommutingPair { g, h })
}

/// Simultaneous conjugation `(g|^k, h|^k)`.
pub fn conj_pair(group: &Group, p: CommutingPair, k: usize) -> CommutingPair {
    CommutingPair { g: group.conj(p.g, k), h: group.conj(p.h, k) }
}

/// Reduces pairs to canonical representatives of their conjugation orbits:
/// the lexicographically smallest `(g, h)` in the orbit.
pub struct PairCanonicalizer<'a> {
    group: &'a Group,
    class_rep: Vec<usize>,
    /// `transporter[x] = t` with `t x t^-1 = class_rep[x]`.
    transporter: Vec<usize>,
    /// For each class representative `g`, the map from `h` in `C(g)` to the
    /// smallest element of its `C(g)`-conjugation orbit.
    cent_rep: HashMap<usize, HashMap<usize, usize>>,
}

impl<'a> PairCanonicalizer<'a> {
    pub fn new(group: &'a Group) -> Self {
        let n = group.order();
        let gens = if group.generators().is_empty() && n > 1 {
            (0..n).collect()
        } else {
            group.generators().to_vec()
        };
        let mut class_rep = vec![usize::MAX; n];
        let mut transporter = vec![0usize; n];
        let mut cent_rep = HashMap::new();
        for x in 0..n {
            if class_rep[x] != usize::MAX {
                continue;
            }
            // x is the smallest element of its class; BFS records transporters.
            class_rep[x] = x;
            transporter[x] = 0;
            let mut queue = vec![x];
            let mut i = 0;
            while i < queue.len() {
                let y = queue[i];
                for &s in &gens {
                    // t y t^-1 = x and z = s^-1 y s give (t s) z (t s)^-1 = x.
                    let z = group.conj(y, s);
                    if class_rep[z] == usize::MAX {
                        class_rep[z] = x;
                        transporter[z] = group.mul(transporter[y], s);
                        queue.push(z);
                    }
                }
                i += 1;
            }
            let cent = group.centralizer(x);
            let cgens = super::small_generating_set(group, &cent);
            let mut reps: HashMap<usize, usize> = HashMap::new();
            for &h in &cent {
                if reps.contains_key(&h) {
                    continue;
                }
                let mut orb = vec![h];
                let mut seen = std::collections::HashSet::from([h]);
                let mut j = 0;
                while j < orb.len() {
                    for &s in &cgens {
                        let z = group.conj(orb[j], s);
                        if seen.insert(z) {
                            orb.push(z);
                        }
                    }
                    j += 1;
                }
                let m = *orb.iter().min().unwrap();
                for y in orb {
                    reps.insert(y, m);
                }
            }
            cent_rep.insert(x, reps);
        }
        PairCanonicalizer { group, class_rep, transporter, cent_rep }
    }

    pub fn canonical(&self, p: CommutingPair) -> CommutingPair {
        let t = self.transporter[p.g];
        let g = self.class_rep[p.g];
        // t g t^-1 = rep, i.e. conjugation by t^-1 in the y|^x notation.
        let h = self.group.conj(p.h, self.group.inv(t));
        debug_assert_eq!(self.group.conj(p.g, self.group.inv(t)), g);
        CommutingPair { g, h: self.cent_rep[&g][&h] }
    }

    pub fn class_rep(&self, x: usize) -> usize {
        self.class_rep[x]
    }

    /// Number of pairs simultaneously conjugate to `p`.
    pub fn conj_orbit_size(&self, p: CommutingPair) -> usize {
        let c = self.canonical(p);
        let stab = (0..self.group.order())
            .filter(|&k| self.group.commutes(k, c.g) && self.group.commutes(k, c.h))
            .count();
        self.group.order() / stab
    }

    /// Canonical representatives of all conjugation orbits of commuting pairs.
    pub fn all_canonical_pairs(&self) -> Vec<CommutingPair> {
        let mut out = Vec::new();
        let mut reps: Vec<&usize> = self.cent_rep.keys().collect();
        reps.sort();
        for &g in reps {
            let mut hs: Vec<usize> = self.cent_rep[&g].values().copied().collect();
            hs.sort_unstable();
            hs.dedup();
            out.extend(hs.into_iter().map(|h| CommutingPair { g, h }));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairOrbit {
    pub representative: CommutingPair,
    /// Canonical representatives of the conjugation orbits the orbit contains.
    pub members: Vec<CommutingPair>,
    /// Total number of commuting pairs in the orbit.
    pub size: usize,
    pub is_old: bool,
    pub orders: (usize, usize),
    pub generated_order: usize,
    pub level: usize,
}

/// Group data of one lambency beyond the group itself.
#[derive(Clone)]
pub struct LambencyConfig {
    pub label: String,
    pub index: i64,
    pub group: Group,
    pub center_n: Vec<usize>,
    pub n_g: HashMap<String, u32>,
}

/// Whether `<g, h>` equals `<z, g'>` for some `z` in `n` and some `g'`.
pub fn is_old(group: &Group, center_n: &[usize], p: CommutingPair) -> bool {
    let a = group.generated(&[p.g, p.h]);
    let zs: Vec<usize> = std::iter::once(0)
        .chain(center_n.iter().copied())
        .filter(|z| a.binary_search(z).is_ok())
        .collect();
    for &z in &zs {
        let oz = group.elem_order(z);
        for &x in &a {
            // |<z, x>| = |<z>| |<x>| / |<z> n <x>|
            if oz * group.elem_order(x) < a.len() {
                continue;
            }
            if group.generated(&[z, x]).len() == a.len() {
                return true;
            }
        }
    }
    false
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Orbits of commuting pairs under conjugation and `SL2(Z)`, ordered by representative.
pub fn classify_pairs(group: &Group, center_n: &[usize]) -> Vec<PairOrbit> {
    let canon = PairCanonicalizer::new(group);
    let pairs = canon.all_canonical_pairs();
    let pos: HashMap<CommutingPair, usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut uf = UnionFind((0..pairs.len()).collect());
    let s: Sl2 = [0, -1, 1, 0];
    let t: Sl2 = [1, 1, 0, 1];
    for (i, &p) in pairs.iter().enumerate() {
        for gamma in [&s, &t] {
            let q = canon.canonical(sl2_act(group, gamma, p).expect("commuting"));
            uf.union(i, pos[&q]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<CommutingPair>> = BTreeMap::new();
    for (i, &p) in pairs.iter().enumerate() {
        let r = uf.find(i);
        groups.entry(r).or_default().push(p);
    }
    groups
        .into_values()
        .map(|members| {
            let rep = members[0];
            let size = members.iter().map(|&m| canon.conj_orbit_size(m)).sum();
            PairOrbit {
                representative: rep,
                size,
                is_old: is_old(group, center_n, rep),
                orders: (group.elem_order(rep.g), group.elem_order(rep.h)),
                generated_order: group.generated(&[rep.g, rep.h]).len(),
                level: pair_level(group, rep),
                members,
            }
        })
        .collect()
}
