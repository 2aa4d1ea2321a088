//! Finite permutation groups with full element enumeration.
//!
//! Elements are indexed `0..order` in breadth-first order from the identity
//! (index 0) over the generator list, so indices are reproducible from the
//! generators alone. Products follow the convention `i^(gh) = (i^g)^h`.

pub mod congruence;
pub mod pairs;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use congruence::{recognize_congruence, sl2_word, stabilizer_group, CongruenceGroup, Letter, Sl2, Sl2Word};
pub use pairs::{classify_pairs, sl2_act, CommutingPair, LambencyConfig, PairOrbit};

/// Default bound on the order of an enumerated group.
pub const DEFAULT_ORDER_BOUND: usize = 200_000;
const TABLE_BOUND: usize = 4096;

pub type Perm = Vec<u32>;

#[derive(Clone)]
pub struct Group {
    degree: usize,
    generators: Vec<usize>,
    perms: Vec<Perm>,
    lookup: HashMap<Perm, usize>,
    table: Option<Vec<u32>>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
    class_names: HashMap<usize, String>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group(order {}, degree {})", self.order(), self.degree)
    }
}

fn compose(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&i| b[i as usize]).collect()
}

fn validate_perm(p: &[u32], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::InvalidPermutation(format!("length {} but degree {degree}", p.len())));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        let x = x as usize;
        if x >= degree || seen[x] {
            return Err(Error::InvalidPermutation(format!("{p:?} is not a bijection")));
        }
        seen[x] = true;
    }
    Ok(())
}

impl Group {
    /// Enumerates the group generated by the given permutations of `0..degree`.
    pub fn from_generators(degree: usize, gens: &[Perm]) -> Result<Group> {
        Self::from_generators_bounded(degree, gens, DEFAULT_ORDER_BOUND)
    }

    pub fn from_generators_bounded(degree: usize, gens: &[Perm], bound: usize) -> Result<Group> {
        for g in gens {
            validate_perm(g, degree)?;
        }
        let id: Perm = (0..degree as u32).collect();
        let mut perms = vec![id.clone()];
        let mut lookup = HashMap::new();
        lookup.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = compose(&perms[x], g);
                if !lookup.contains_key(&y) {
                    if perms.len() >= bound {
                        return Err(Error::OrderBound(bound));
                    }
                    lookup.insert(y.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(y);
                }
            }
        }
        let generators = gens.iter().map(|g| lookup[g]).collect();
        Ok(Self::finish(degree, generators, perms, lookup))
    }

    /// Builds a group from a multiplication table `table[i][j] = index of i*j`,
    /// with element 0 the identity, via its right regular representation.
    pub fn from_table(table: &[Vec<usize>], generators: Vec<usize>) -> Result<Group> {
        let n = table.len();
        if n == 0 || (0..n).any(|i| table[0][i] != i || table[i][0] != i) {
            return Err(Error::Data("element 0 must be the identity".into()));
        }
        let perms: Vec<Perm> = (0..n).map(|g| (0..n).map(|x| table[x][g] as u32).collect()).collect();
        let mut lookup = HashMap::new();
        for (i, p) in perms.iter().enumerate() {
            validate_perm(p, n)?;
            lookup.insert(p.clone(), i);
        }
        let flat = (n <= TABLE_BOUND).then(|| table.iter().flatten().map(|&x| x as u32).collect());
        Ok(Self::finish_with(n, generators, perms, lookup, flat))
    }

    fn finish(degree: usize, generators: Vec<usize>, perms: Vec<Perm>, lookup: HashMap<Perm, usize>) -> Group {
        Self::finish_with(degree, generators, perms, lookup, None)
    }

    fn finish_with(
        degree: usize,
        generators: Vec<usize>,
        perms: Vec<Perm>,
        lookup: HashMap<Perm, usize>,
        given: Option<Vec<u32>>,
    ) -> Group {
        let n = perms.len();
        let table = given.or_else(|| (n <= TABLE_BOUND).then(|| {
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = lookup[&compose(&perms[i], &perms[j])] as u32;
                }
            }
            t
        }));
        let mut g = Group {
            degree,
            generators,
            perms,
            lookup,
            table,
            inverses: vec![],
            orders: vec![],
            class_names: HashMap::new(),
        };
        g.inverses = (0..n)
            .map(|i| {
                let p = &g.perms[i];
                let mut inv = vec![0u32; p.len()];
                for (k, &x) in p.iter().enumerate() {
                    inv[x as usize] = k as u32;
                }
                g.lookup[&inv]
            })
            .collect();
        g.orders = (0..n)
            .map(|i| {
                let mut k = 1;
                let mut x = i;
                while x != 0 {
                    x = g.mul(x, i);
                    k += 1;
                }
                k
            })
            .collect();
        g
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn perm(&self, x: usize) -> &Perm {
        &self.perms[x]
    }

    pub fn element_of(&self, p: &[u32]) -> Option<usize> {
        self.lookup.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.perms.len() + b] as usize,
            None => self.lookup[&compose(&self.perms[a], &self.perms[b])],
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elem_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let k = k.rem_euclid(o);
        let mut x = 0;
        for _ in 0..k {
            x = self.mul(x, a);
        }
        x
    }

    /// `x^-1 y x`, written `y|^x`.
    pub fn conj(&self, y: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), y), x)
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| num::integer::lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| self.commutes(a, b)))
    }

    pub fn class_name(&self, x: usize) -> Option<&str> {
        self.class_names.get(&x).map(|s| s.as_str())
    }

    pub fn set_class_names(&mut self, names: HashMap<usize, String>) {
        self.class_names = names;
    }

    /// Conjugacy classes, each sorted, ordered by smallest member; `{e}` first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let gens = self.all_or_generators();
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            let orb = self.orbit_under(x, &gens, &mut seen);
            out.push(orb);
        }
        out
    }

    fn all_or_generators(&self) -> Vec<usize> {
        if self.generators.is_empty() && self.order() > 1 {
            (0..self.order()).collect()
        } else {
            self.generators.clone()
        }
    }

    fn orbit_under(&self, x: usize, gens: &[usize], seen: &mut [bool]) -> Vec<usize> {
        let mut orb = vec![x];
        seen[x] = true;
        let mut i = 0;
        while i < orb.len() {
            let y = orb[i];
            for &s in gens {
                let z = self.conj(y, s);
                if !seen[z] {
                    seen[z] = true;
                    orb.push(z);
                }
            }
            i += 1;
        }
        orb.sort_unstable();
        orb
    }

    /// Map from element to the index of its class in [`Group::conjugacy_classes`].
    pub fn class_index_map(&self, classes: &[Vec<usize>]) -> Vec<usize> {
        let mut m = vec![0; self.order()];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                m[x] = i;
            }
        }
        m
    }

    /// Sorted elements of the centralizer of `g`.
    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order()).filter(|&x| self.commutes(x, g)).collect()
    }

    pub fn center(&self) -> Vec<usize> {
        let gens = self.all_or_generators();
        (0..self.order()).filter(|&x| gens.iter().all(|&s| self.commutes(x, s))).collect()
    }

    /// Sorted elements of the subgroup generated by the given elements.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// True when the sorted element list is closed under multiplication.
    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: std::collections::HashSet<usize> = elems.iter().copied().collect();
        set.contains(&0) && elems.iter().all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// A standalone group on a subgroup, with the embedding into `self`.
    ///
    /// Sub-elements are listed in increasing parent index, so the identity is 0.
    pub fn subgroup(&self, elems: &[usize]) -> Result<(Group, Vec<usize>)> {
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) {
            return Err(Error::Data("subgroup must contain the identity".into()));
        }
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let perms: Vec<Perm> = elems.iter().map(|&x| self.perms[x].clone()).collect();
        let mut lookup = HashMap::new();
        for (i, p) in perms.iter().enumerate() {
            lookup.insert(p.clone(), i);
        }
        for &a in &elems {
            for &b in &elems {
                if !pos.contains_key(&self.mul(a, b)) {
                    return Err(Error::Data("element list is not closed under products".into()));
                }
            }
        }
        let generators = small_generating_set(self, &elems).iter().map(|x| pos[x]).collect();
        let mut g = Self::finish(self.degree, generators, perms, lookup);
        g.class_names = elems
            .iter()
            .enumerate()
            .filter_map(|(i, x)| self.class_names.get(x).map(|n| (i, n.clone())))
            .collect();
        Ok((g, elems))
    }

    /// Subgroup generated by `p`-elements greedily grown to a `p`-Sylow subgroup.
    pub fn sylow_subgroup(&self, p: usize) -> Vec<usize> {
        let n = self.order();
        let mut target = 1;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            target *= p;
        }
        let mut cur = vec![0usize];
        if target == 1 {
            return cur;
        }
        // A maximal p-subgroup containing `cur` is Sylow; extend by p-elements
        // normalizing the current subgroup, which always exist until the order is reached.
        while cur.len() < target {
            let set: std::collections::HashSet<usize> = cur.iter().copied().collect();
            let mut grown = false;
            for x in 0..n {
                if set.contains(&x) || !is_p_power(self.orders[x], p) {
                    continue;
                }
                let normalizes = cur.iter().all(|&c| set.contains(&self.conj(c, x)));
                if !normalizes {
                    continue;
                }
                let mut gens = small_generating_set(self, &cur);
                gens.push(x);
                let h = self.generated(&gens);
                if is_p_power(h.len(), p) {
                    cur = h;
                    grown = true;
                    break;
                }
            }
            assert!(grown, "failed to grow a p-subgroup");
        }
        cur
    }

    pub fn to_file(&self, center_n: &[usize]) -> GroupFile {
        GroupFile {
            degree: self.degree,
            generators: self.generators.iter().map(|&g| self.perms[g].clone()).collect(),
            class_names: self.class_names.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            center_n: center_n.to_vec(),
            n_g: HashMap::new(),
            lambency: None,
            index: None,
        }
    }
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Greedy generating set of a subgroup given by its elements.
pub fn small_generating_set(g: &Group, elems: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    // Prefer high-order elements so few generators are needed.
    let mut order: Vec<usize> = elems.to_vec();
    order.sort_by_key(|&x| (std::cmp::Reverse(g.elem_order(x)), x));
    for x in order {
        if span.len() == elems.len() {
            break;
        }
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.generated(&gens);
        }
    }
    gens
}

/// On-disk group description with element indices referring to the
/// breadth-first enumeration from the listed generators.
#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
    #[serde(default)]
    pub class_names: HashMap<String, String>,
    #[serde(default)]
    pub center_n: Vec<usize>,
    #[serde(default)]
    pub n_g: HashMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambency: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
}

impl GroupFile {
    pub fn build(&self) -> Result<Group> {
        let mut g = Group::from_generators(self.degree, &self.generators)?;
        let mut names = HashMap::new();
        for (k, v) in &self.class_names {
            let i: usize = k.parse().map_err(|_| Error::Parse(format!("element index {k:?}")))?;
            if i >= g.order() {
                return Err(Error::Data(format!("class name for element {i} outside the group")));
            }
            names.insert(i, v.clone());
        }
        // Propagate names to whole classes so any member can be looked up.
        let classes = g.conjugacy_classes();
        let cmap = g.class_index_map(&classes);
        let mut full = HashMap::new();
        for (i, v) in &names {
            for &x in &classes[cmap[*i]] {
                full.insert(x, v.clone());
            }
        }
        g.set_class_names(full);
        for &z in &self.center_n {
            if z >= g.order() {
                return Err(Error::Data(format!("center element {z} outside the group")));
            }
        }
        Ok(g)
    }
}

/// Small groups used throughout the tests and examples.
pub mod small {
    use super::*;

    pub fn cyclic(n: usize) -> Group {
        let gen: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        let gens = if n > 1 { vec![gen] } else { vec![] };
        Group::from_generators(n.max(1), &gens).unwrap()
    }

    /// Direct product of cyclic groups acting on disjoint point sets.
    pub fn abelian(factors: &[usize]) -> Group {
        let degree: usize = factors.iter().sum();
        let mut gens = Vec::new();
        let mut off = 0;
        for &n in factors {
            let mut p: Perm = (0..degree as u32).collect();
            for i in 0..n {
                p[off + i] = (off + (i + 1) % n) as u32;
            }
            if n > 1 {
                gens.push(p);
            }
            off += n;
        }
        Group::from_generators(degree, &gens).unwrap()
    }

    pub fn symmetric(n: usize) -> Group {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Perm = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(t);
            let c: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
            gens.push(c);
        }
        Group::from_generators(n.max(1), &gens).unwrap()
    }

    pub fn dihedral(n: usize) -> Group {
        let r: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        let s: Perm = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
        Group::from_generators(n, &[r, s]).unwrap()
    }

    /// The quaternion group as permutations of its 8 elements.
    pub fn quaternion() -> Group {
        // Points 0..8 encode +-1, +-i, +-j, +-k as (sign, unit); right multiplication by i and j.
        let mul = |a: usize, b: usize| -> usize {
            // unit table for 1,i,j,k
            const T: [[(u8, usize); 4]; 4] = [
                [(0, 0), (0, 1), (0, 2), (0, 3)],
                [(0, 1), (1, 0), (0, 3), (1, 2)],
                [(0, 2), (1, 3), (1, 0), (0, 1)],
                [(0, 3), (0, 2), (1, 1), (1, 0)],
            ];
            let (sa, ua) = (a / 4, a % 4);
            let (sb, ub) = (b / 4, b % 4);
            let (s, u) = T[ua][ub];
            ((sa + sb + s as usize) % 2) * 4 + u
        };
        let gi: Perm = (0..8).map(|x| mul(x, 1) as u32).collect();
        let gj: Perm = (0..8).map(|x| mul(x, 2) as u32).collect();
        Group::from_generators(8, &[gi, gj]).unwrap()
    }

    pub fn alternating4() -> Group {
        Group::from_generators(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap()
    }
}
