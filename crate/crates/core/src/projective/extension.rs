//! Central extensions and projective character tables.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::chartable::{char_table, default_class_names, CharTable};
use crate::cohomology::Cochain;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupFile};
use crate::numeric::modring::{solve_mod, ModMatrix};
use crate::numeric::{Cyclotomic, Phase};

/// A central extension `1 -> M -> cover -> base -> 1` with a fixed section.
#[derive(Clone)]
pub struct CentralExtension {
    pub cover: Group,
    pub base: Group,
    /// Image in `base` of every cover element.
    pub projection: Vec<usize>,
    /// Sorted kernel of the projection.
    pub kernel: Vec<usize>,
    /// Least preimage of each base element.
    pub section: Vec<usize>,
}

impl CentralExtension {
    /// Extension given by the images of the cover generators.
    pub fn new(cover: Group, base: Group, generator_images: &[usize]) -> Result<Self> {
        if generator_images.len() != cover.generators().len() {
            return Err(Error::Data(format!(
                "{} generator images for {} generators",
                generator_images.len(),
                cover.generators().len()
            )));
        }
        if let Some(&bad) = generator_images.iter().find(|&&x| x >= base.order()) {
            return Err(Error::Data(format!("image {bad} outside the base group")));
        }
        let n = cover.order();
        let mut img = vec![usize::MAX; n];
        img[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (j, &s) in cover.generators().iter().enumerate() {
                let y = cover.mul(x, s);
                if img[y] == usize::MAX {
                    img[y] = base.mul(img[x], generator_images[j]);
                    queue.push_back(y);
                }
            }
        }
        Self::from_element_images(cover, base, img)
    }

    /// Extension from the image of every cover element.
    pub fn from_element_images(cover: Group, base: Group, projection: Vec<usize>) -> Result<Self> {
        let n = cover.order();
        if projection.len() != n || projection.iter().any(|&x| x >= base.order()) {
            return Err(Error::Data("projection must map every cover element into the base".into()));
        }
        for x in 0..n {
            for &s in cover.generators() {
                if projection[cover.mul(x, s)] != base.mul(projection[x], projection[s]) {
                    return Err(Error::Data("projection is not a homomorphism".into()));
                }
            }
        }
        let mut section = vec![usize::MAX; base.order()];
        for x in (0..n).rev() {
            section[projection[x]] = x;
        }
        if section.contains(&usize::MAX) {
            return Err(Error::Data("projection is not surjective".into()));
        }
        let kernel: Vec<usize> = (0..n).filter(|&x| projection[x] == 0).collect();
        if kernel.iter().any(|&k| cover.generators().iter().any(|&s| !cover.commutes(k, s))) {
            return Err(Error::Data("kernel of the projection is not central".into()));
        }
        Ok(CentralExtension { cover, base, projection, kernel, section })
    }

    pub fn trivial(base: Group) -> Self {
        let n = base.order();
        CentralExtension {
            cover: base.clone(),
            base,
            projection: (0..n).collect(),
            kernel: vec![0],
            section: (0..n).collect(),
        }
    }

    /// The extension `Z/n x_c H` with product `(a, x)(b, y) = (a + b + n c(x, y), xy)`,
    /// where `n` is the lcm of the denominators of the 2-cocycle `c`. The
    /// element `(a, x)` has index `a |H| + x`, so the section is `x -> (0, x)`.
    pub fn from_cocycle(base: Group, c: &Cochain) -> Result<Self> {
        let h = base.order();
        let n = c.denominator_lcm() as usize;
        let total = n * h;
        if total > 4096 {
            return Err(Error::OrderBound(4096));
        }
        let table: Vec<Vec<usize>> = (0..total)
            .map(|i| {
                let (a, x) = (i / h, i % h);
                (0..total)
                    .map(|j| {
                        let (b, y) = (j / h, j % h);
                        let v = c.get(&[x, y]);
                        let k = (v.numer() * (n as u64 / v.denom())) as usize;
                        ((a + b + k) % n) * h + base.mul(x, y)
                    })
                    .collect()
            })
            .collect();
        let mut gens: Vec<usize> = base.generators().to_vec();
        if n > 1 {
            gens.push(h);
        }
        let cover = Group::from_table(&table, gens)?;
        let projection = (0..total).map(|i| i % h).collect();
        Self::from_element_images(cover, base, projection)
    }

    pub fn lift(&self, h: usize) -> usize {
        self.section[h]
    }

    /// `s(h1) s(h2) s(h1 h2)^-1`, an element of the kernel.
    pub fn section_defect(&self, h1: usize, h2: usize) -> usize {
        let c = &self.cover;
        c.mul(c.mul(self.lift(h1), self.lift(h2)), c.inv(self.lift(self.base.mul(h1, h2))))
    }

    /// The commutator `s(h1) s(h2) s(h1)^-1 s(h2)^-1` of lifts of commuting elements.
    pub fn commutator_lift(&self, h1: usize, h2: usize) -> usize {
        let c = &self.cover;
        let (a, b) = (self.lift(h1), self.lift(h2));
        c.mul(c.mul(a, b), c.mul(c.inv(a), c.inv(b)))
    }
}

/// Image of a cover generator: a base element index or a permutation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ImageJson {
    Index(usize),
    Perm(Vec<u32>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub cover: GroupFile,
    pub projection: Vec<ImageJson>,
    #[serde(default)]
    pub multiplier: Vec<usize>,
}

impl ExtensionFile {
    /// Builds the extension onto `base`. One image per cover generator, or
    /// one per cover element.
    pub fn build(&self, base: &Group) -> Result<CentralExtension> {
        let cover = self.cover.build()?;
        let images = self
            .projection
            .iter()
            .map(|im| match im {
                ImageJson::Index(i) => Ok(*i),
                ImageJson::Perm(p) => base
                    .element_of(p)
                    .ok_or_else(|| Error::Data(format!("permutation {p:?} not in the base group"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let ext = if images.len() == cover.order() && images.len() != cover.generators().len() {
            CentralExtension::from_element_images(cover, base.clone(), images)?
        } else {
            CentralExtension::new(cover, base.clone(), &images)?
        };
        if !self.multiplier.is_empty() {
            let mut m = self.multiplier.clone();
            m.sort_unstable();
            if m != ext.kernel {
                return Err(Error::Data("listed multiplier differs from the kernel".into()));
            }
        }
        Ok(ext)
    }
}

/// `rho(k)` for central `k` as a phase, read off the character.
fn central_scalar(table: &CharTable, row: usize, k: usize) -> Result<Phase> {
    let d = &table.rows[row][0];
    let v = table.value(row, k);
    let q = d.inverse().map(|di| v * &di).ok_or(Error::Representation("zero degree".into()))?;
    q.as_root_of_unity()
        .ok_or_else(|| Error::Representation(format!("element {k} does not act as a scalar")))
}

/// The 2-cocycle `c(h1, h2) = rho(s(h1) s(h2) s(h1 h2)^-1)` of a cover irrep.
pub fn cocycle_of_rep(ext: &CentralExtension, table: &CharTable, row: usize) -> Result<Cochain> {
    let n = ext.base.order();
    let mut c = Cochain::trivial(2, n);
    for x in 0..n {
        for y in 0..n {
            c.set(&[x, y], central_scalar(table, row, ext.section_defect(x, y))?);
        }
    }
    Ok(c)
}

/// `c(h1, h2) / c(h2, h1)`.
pub fn pairing(c: &Cochain, h1: usize, h2: usize) -> Phase {
    c.get(&[h1, h2]) - c.get(&[h2, h1])
}

/// Classes of `H` on which every `c`-projective character can be non-zero.
pub fn regular_classes(base: &Group, c: &Cochain) -> Vec<Vec<usize>> {
    base.conjugacy_classes()
        .into_iter()
        .filter(|cl| {
            let h = cl[0];
            base.centralizer(h).into_iter().all(|x| pairing(c, h, x).is_one())
        })
        .collect()
}

/// Solves `delta beta = d` for a normalized 1-cochain `beta`, where `d` is a
/// 2-cocycle; `delta beta(x, y) = beta(x) + beta(y) - beta(xy)`.
pub fn coboundary_preimage(base: &Group, d: &Cochain) -> Option<Vec<Phase>> {
    let n = base.order();
    let m = d.denominator_lcm() * n as u64;
    let gens = base.generators();
    let rows = n * gens.len().max(1);
    let mut a = ModMatrix::zeros(rows, n, m);
    let mut b = vec![0u64; rows];
    for x in 0..n {
        for (j, &s) in gens.iter().enumerate() {
            let r = x * gens.len() + j;
            a.add_at(r, x, 1);
            a.add_at(r, s, 1);
            a.add_at(r, base.mul(x, s), -1);
            let v = d.get(&[x, s]);
            b[r] = v.numer() * (m / v.denom()) % m;
        }
    }
    let sol = solve_mod(&a, &b)?;
    let beta: Vec<Phase> = (0..n).map(|x| Phase::new(sol[x] as i64, m as i64) - Phase::new(sol[0] as i64, m as i64)).collect();
    for x in 0..n {
        for y in 0..n {
            if beta[x] + beta[y] - beta[base.mul(x, y)] != d.get(&[x, y]) {
                return None;
            }
        }
    }
    Some(beta)
}

/// Irreducible projective characters of a group for a fixed 2-cocycle.
#[derive(Clone, Debug)]
pub struct ProjCharTable {
    pub cocycle: Cochain,
    /// Classes of the base group that are regular for the cocycle.
    pub classes: Vec<Vec<usize>>,
    pub class_names: Vec<String>,
    /// Values on every base element.
    pub rows: Vec<Vec<Cyclotomic>>,
    pub dims: Vec<i64>,
    /// Cover irrep behind each row.
    pub cover_rows: Vec<usize>,
    /// Whether the row's cocycle was gauged to exactly the target cocycle.
    pub gauged: Vec<bool>,
}

impl ProjCharTable {
    pub fn value(&self, row: usize, h: usize) -> &Cyclotomic {
        &self.rows[row][h]
    }

    /// Row values at the representatives (least members) of the regular classes.
    pub fn row_on_classes(&self, row: usize) -> Vec<Cyclotomic> {
        self.classes.iter().map(|c| self.rows[row][c[0]].clone()).collect()
    }

    pub fn class_reps(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Keeps the cover irreps whose commutator pairing `rho(s(h1) s(h2) s(h1)^-1 s(h2)^-1)`
/// matches `target(h1, h2) / target(h2, h1)` on all commuting pairs, and
/// projects them to `H` through the section. Rows whose cocycle is
/// cohomologous to `target` are rescaled by a 1-cochain so that they
/// realize `target` exactly.
pub fn filter_by_class(ext: &CentralExtension, table: &CharTable, target: &Cochain) -> Result<ProjCharTable> {
    let base = &ext.base;
    let n = base.order();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|x| base.centralizer(x).into_iter().map(move |y| (x, y))).collect();
    let mut out = ProjCharTable {
        cocycle: target.clone(),
        classes: regular_classes(base, target),
        class_names: Vec::new(),
        rows: Vec::new(),
        dims: Vec::new(),
        cover_rows: Vec::new(),
        gauged: Vec::new(),
    };
    let all_names = default_class_names(base, &base.conjugacy_classes());
    let all = base.conjugacy_classes();
    out.class_names = out.classes.iter().map(|c| all_names[all.iter().position(|a| a == c).unwrap()].clone()).collect();
    for row in 0..table.rows.len() {
        let mut ok = true;
        for &(x, y) in &pairs {
            if central_scalar(table, row, ext.commutator_lift(x, y))? != pairing(target, x, y) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let c = cocycle_of_rep(ext, table, row)?;
        let d = target.add(&c.neg());
        let beta = coboundary_preimage(base, &d);
        let vals = (0..n)
            .map(|h| {
                let v = table.value(row, ext.lift(h)).clone();
                match &beta {
                    Some(b) => v.mul_phase(b[h]),
                    None => v,
                }
            })
            .collect();
        out.rows.push(vals);
        out.dims.push(table.rows[row][0].to_i64().unwrap_or(0));
        out.cover_rows.push(row);
        out.gauged.push(beta.is_some());
    }
    if out.rows.is_empty() {
        return Err(Error::Representation("no cover irrep matches the target pairing".into()));
    }
    Ok(out)
}

/// Projective table for `target` built from the extension `Z/n x_target H`,
/// keeping the irreps on which the central generator acts as `e(1/n)`.
pub fn projective_table(base: &Group, target: &Cochain) -> Result<ProjCharTable> {
    let ext = CentralExtension::from_cocycle(base.clone(), target)?;
    let table = char_table(&ext.cover)?;
    let h = base.order();
    let n = ext.cover.order() / h;
    let z = if n > 1 { h } else { 0 };
    let all = filter_by_class(&ext, &table, target)?;
    let mut out = ProjCharTable { rows: vec![], dims: vec![], cover_rows: vec![], gauged: vec![], ..all.clone() };
    for i in 0..all.len() {
        if central_scalar(&table, all.cover_rows[i], z)? == Phase::new(1, n as i64) {
            out.rows.push(all.rows[i].clone());
            out.dims.push(all.dims[i]);
            out.cover_rows.push(all.cover_rows[i]);
            out.gauged.push(all.gauged[i]);
        }
    }
    Ok(out)
}

/// Per-element rescaling under a change of lift `s'(h) = s(h) * k(h)`, with
/// `k(h)` in the kernel acting on the irrep as `xi(h)`.
pub fn lift_rescaling(ext: &CentralExtension, table: &CharTable, row: usize, new_section: &[usize]) -> Result<Vec<Phase>> {
    (0..ext.base.order())
        .map(|h| {
            let k = ext.cover.mul(ext.cover.inv(ext.lift(h)), new_section[h]);
            if ext.projection[k] != 0 {
                return Err(Error::Data(format!("new lift of {h} is not a preimage")));
            }
            central_scalar(table, row, k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::small::*;

    /// `Q8 -> (Z/2)^2` sending `i, j` to the two generators.
    fn q8_cover() -> CentralExtension {
        let base = abelian(&[2, 2]);
        let gens = base.generators().to_vec();
        CentralExtension::new(quaternion(), base, &gens).unwrap()
    }

    fn bilinear(base: &Group) -> Cochain {
        // c(x, y) = x_1 y_2 / 2 in coordinates over the generators a, b.
        let (a, b) = (base.generators()[0], base.generators()[1]);
        let coords = |x: usize| -> (u8, u8) {
            for i in 0..2u8 {
                for j in 0..2u8 {
                    let y = base.mul(base.pow(a, i as i64), base.pow(b, j as i64));
                    if y == x {
                        return (i, j);
                    }
                }
            }
            unreachable!()
        };
        Cochain::from_fn(2, 4, |t| Phase::new((coords(t[0]).0 * coords(t[1]).1) as i64, 2))
    }

    fn is_two_cocycle(c: &Cochain, g: &Group) -> bool {
        let n = g.order();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    (c.get(&[y, z]) - c.get(&[g.mul(x, y), z]) + c.get(&[x, g.mul(y, z)]) - c.get(&[x, y])).is_one()
                })
            })
        })
    }

    fn assert_projective_orthonormal(t: &ProjCharTable, n: usize) {
        for i in 0..t.len() {
            for j in 0..t.len() {
                let mut s = Cyclotomic::zero();
                for h in 0..n {
                    s += &(t.value(i, h) * &t.value(j, h).conj());
                }
                assert_eq!(s, Cyclotomic::from_int(if i == j { n as i64 } else { 0 }));
            }
        }
    }

    #[test]
    fn trivial_extension_recovers_ordinary_table() {
        let g = symmetric(3);
        let ext = CentralExtension::trivial(g.clone());
        let t = char_table(&g).unwrap();
        let p = filter_by_class(&ext, &t, &Cochain::trivial(2, 6)).unwrap();
        assert_eq!(p.len(), 3);
        for i in 0..3 {
            for h in 0..6 {
                assert_eq!(p.value(i, h), t.value(i, h));
            }
            assert!(cocycle_of_rep(&ext, &t, i).unwrap().entries().iter().all(|(_, v)| v.is_one()));
        }
    }

    #[test]
    fn quaternion_cover_of_klein_group() {
        let ext = q8_cover();
        assert_eq!(ext.kernel.len(), 2);
        let t = char_table(&ext.cover).unwrap();
        let (a, b) = (ext.base.generators()[0], ext.base.generators()[1]);
        for row in 0..t.rows.len() {
            let c = cocycle_of_rep(&ext, &t, row).unwrap();
            assert!(is_two_cocycle(&c, &ext.base));
            let expect = if t.degrees()[row] == 2 { Phase::new(1, 2) } else { Phase::ONE };
            assert_eq!(pairing(&c, a, b), expect);
        }
        let twisted = filter_by_class(&ext, &t, &bilinear(&ext.base)).unwrap();
        assert_eq!(twisted.dims, vec![2]);
        assert!(twisted.gauged[0]);
        assert_eq!(twisted.classes.len(), 1);
        assert_projective_orthonormal(&twisted, 4);
        let untwisted = filter_by_class(&ext, &t, &Cochain::trivial(2, 4)).unwrap();
        assert_eq!(untwisted.dims, vec![1, 1, 1, 1]);
        let mut all: Vec<usize> = twisted.cover_rows.iter().chain(&untwisted.cover_rows).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn central_lift_acts_as_scalar() {
        let ext = q8_cover();
        let t = char_table(&ext.cover).unwrap();
        let z = ext.kernel[1];
        let two_dim = t.degrees().iter().position(|&d| d == 2).unwrap();
        assert_eq!(central_scalar(&t, two_dim, z).unwrap(), Phase::new(1, 2));
        // Moving every lift by z rescales the 2-dim irrep by -1 and fixes e's lift.
        let mut moved: Vec<usize> = (0..4).map(|h| ext.cover.mul(ext.lift(h), z)).collect();
        moved[0] = ext.lift(0);
        let r = lift_rescaling(&ext, &t, two_dim, &moved).unwrap();
        assert!(r[0].is_one());
        assert!(r[1..].iter().all(|&p| p == Phase::new(1, 2)));
    }

    #[test]
    fn table_from_cocycle_extension() {
        let base = abelian(&[2, 2]);
        let t = projective_table(&base, &bilinear(&base)).unwrap();
        assert_eq!(t.dims, vec![2]);
        assert!(t.gauged.iter().all(|&g| g));
    }

    #[test]
    fn theta_tables_have_regular_class_count() {
        use crate::cohomology::h3::h3_compute;
        use crate::cohomology::theta::theta;
        for g in [dihedral(4), quaternion(), abelian(&[2, 2, 2])] {
            let reps = h3_compute(&g, 16).unwrap().representatives;
            for w in reps {
                for x in 0..g.order() {
                    let (h, emb) = g.subgroup(&g.centralizer(x)).unwrap();
                    let c = Cochain::from_fn(2, h.order(), |t| theta(&w, &g, x, emb[t[0]], emb[t[1]]));
                    assert!(is_two_cocycle(&c, &h));
                    let t = projective_table(&h, &c).unwrap();
                    assert_eq!(t.len(), regular_classes(&h, &c).len());
                    assert_eq!(t.dims.iter().map(|d| d * d).sum::<i64>() as usize, h.order());
                    assert!(t.gauged.iter().all(|&g| g));
                    assert_projective_orthonormal(&t, h.order());
                }
            }
        }
    }
}
