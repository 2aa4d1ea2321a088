//! Lambency directories: file formats, reading, writing and validation.
//!
//! ```text
//! group.json               GroupFile with lambency label, index, n and n_g
//! cocycle.json             CochainFile for omega
//! covers/<class>.json      optional ExtensionFile for the centraliser of <class>
//! series/untwisted/*.json  UntwistedFile, one per conjugacy class
//! series/twisted/*.json    optional TwistedFile
//! polar.json               PolarFile, chi^(a,b)_g per class
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::function::TwinedFunction;
use crate::cohomology::{check_cocycle, Cochain, CochainFile, CocycleCheck};
use crate::error::{Error, Result};
use crate::groups::{CommutingPair, Group, GroupFile, LambencyConfig};
use crate::jacobi::{polar_sum, PolarTable, Symmetry, VectorValuedForm};
use crate::numeric::io::{cyc_from_json, cyc_to_json, qexp_from_json, qexp_to_json, CoeffJson, SeriesJson};
use crate::numeric::{rat, QExpansion};
use crate::projective::chartable::default_class_names;
use crate::projective::extension::ExtensionFile;

/// Exhaustive cocycle check up to this group order, sampling beyond.
pub const COCYCLE_EXHAUSTIVE_BOUND: usize = 24;
pub const COCYCLE_SAMPLES: usize = 20_000;
pub const COCYCLE_SEED: u64 = 0x5eed;

fn odd() -> Symmetry {
    Symmetry::Odd
}

/// `H_{(e,h)}` for the class named `class`, components keyed by `r mod 2m`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UntwistedFile {
    pub class: String,
    #[serde(default = "odd")]
    pub symmetry: Symmetry,
    pub components: BTreeMap<i64, SeriesJson>,
}

/// `psi_{(g,h)}` for a pair of element indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistedFile {
    pub g: usize,
    pub h: usize,
    #[serde(default = "odd")]
    pub symmetry: Symmetry,
    pub components: BTreeMap<i64, SeriesJson>,
    #[serde(default)]
    pub polar: Vec<PolarEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolarEntry {
    pub a: i64,
    pub b: i64,
    pub coeff: CoeffJson,
}

/// `chi^(a,b)_g` keyed by class name; classes not listed have no polar part.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PolarFile {
    pub tables: BTreeMap<String, Vec<PolarEntry>>,
}

/// The raw contents of a lambency directory.
#[derive(Clone, Debug)]
pub struct LambencyFiles {
    pub group: GroupFile,
    pub cocycle: CochainFile,
    pub covers: BTreeMap<String, ExtensionFile>,
    pub untwisted: Vec<UntwistedFile>,
    pub twisted: Vec<TwistedFile>,
    pub polar: PolarFile,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// `*.json` files of a directory in name order; a missing directory is empty.
fn json_files(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut out: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
        .collect();
    out.sort();
    Ok(out)
}

impl LambencyFiles {
    pub fn read(dir: &Path) -> Result<Self> {
        let group = read_json(&dir.join("group.json"))?;
        let cocycle = read_json(&dir.join("cocycle.json"))?;
        let mut covers = BTreeMap::new();
        for p in json_files(&dir.join("covers"))? {
            let name = p.file_stem().unwrap().to_string_lossy().to_string();
            covers.insert(name, read_json(&p)?);
        }
        let untwisted = json_files(&dir.join("series/untwisted"))?.iter().map(|p| read_json(p)).collect::<Result<_>>()?;
        let twisted = json_files(&dir.join("series/twisted"))?.iter().map(|p| read_json(p)).collect::<Result<_>>()?;
        let polar_path = dir.join("polar.json");
        let polar = if polar_path.exists() { read_json(&polar_path)? } else { PolarFile::default() };
        Ok(LambencyFiles { group, cocycle, covers, untwisted, twisted, polar })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir.join("series/untwisted"))?;
        write_json(&dir.join("group.json"), &self.group)?;
        write_json(&dir.join("cocycle.json"), &self.cocycle)?;
        write_json(&dir.join("polar.json"), &self.polar)?;
        if !self.covers.is_empty() {
            fs::create_dir_all(dir.join("covers"))?;
        }
        for (name, c) in &self.covers {
            write_json(&dir.join("covers").join(format!("{name}.json")), c)?;
        }
        for u in &self.untwisted {
            write_json(&dir.join("series/untwisted").join(format!("{}.json", u.class)), u)?;
        }
        if !self.twisted.is_empty() {
            fs::create_dir_all(dir.join("series/twisted"))?;
        }
        for t in &self.twisted {
            write_json(&dir.join("series/twisted").join(format!("{}_{}.json", t.g, t.h)), t)?;
        }
        Ok(())
    }
}

/// A validated lambency.
#[derive(Clone)]
pub struct Lambency {
    pub config: LambencyConfig,
    pub omega: Arc<Cochain>,
    pub cocycle_check: CocycleCheck,
    /// Conjugacy classes in enumeration order, with their names.
    pub classes: Vec<Vec<usize>>,
    pub class_names: Vec<String>,
    /// `psi_{(e,h)}` keyed by the least element `h` of each class.
    pub untwisted: BTreeMap<usize, TwinedFunction>,
    pub twisted: BTreeMap<CommutingPair, TwinedFunction>,
    pub covers: BTreeMap<String, ExtensionFile>,
}

impl Lambency {
    pub fn group(&self) -> &Group {
        &self.config.group
    }

    pub fn index(&self) -> i64 {
        self.config.index
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.classes.iter().position(|c| c.contains(&x)).expect("element outside the group")
    }

    pub fn class_name_of(&self, x: usize) -> &str {
        &self.class_names[self.class_of(x)]
    }

    /// `psi_{(e,h)}` for any element `h`.
    pub fn untwisted_for(&self, h: usize) -> &TwinedFunction {
        &self.untwisted[&self.classes[self.class_of(h)][0]]
    }

    /// The nontrivial elements of `n`.
    pub fn center_n(&self) -> &[usize] {
        &self.config.center_n
    }

    /// `n_g` for an element, defaulting to its order.
    pub fn n_g(&self, g: usize) -> u32 {
        let name = self.class_name_of(g);
        self.config.n_g.get(name).copied().unwrap_or(self.group().elem_order(g) as u32)
    }
}

fn components(m: i64, symmetry: Symmetry, comps: &BTreeMap<i64, SeriesJson>, what: &str) -> Result<VectorValuedForm> {
    let parsed: BTreeMap<i64, QExpansion> =
        comps.iter().map(|(r, s)| Ok((r.rem_euclid(2 * m), qexp_from_json(s)?))).collect::<Result<_>>()?;
    let t = parsed
        .values()
        .map(|h| h.truncation().clone())
        .min()
        .ok_or_else(|| Error::Data(format!("{what}: no components")))?;
    let mut h = VectorValuedForm::zero(m, rat(1, 2), &t, symmetry);
    for (r, f) in parsed {
        *h.component_mut(r) = f.with_modulus(num::integer::lcm(f.modulus().max(1), 4 * m as u64))?;
    }
    // Zero components inherit the common truncation.
    for r in 0..2 * m {
        if h.component(r).is_zero() {
            *h.component_mut(r) = QExpansion::new(t.clone(), 4 * m as u64);
        }
    }
    if !h.symmetry_holds() {
        return Err(Error::Data(format!("{what}: declared symmetry {symmetry:?} does not hold")));
    }
    Ok(h)
}

pub fn polar_table(entries: &[PolarEntry]) -> Result<PolarTable> {
    let mut t = PolarTable::new();
    for e in entries {
        t.insert((e.a, e.b), cyc_from_json(&e.coeff)?);
    }
    Ok(t)
}

pub fn polar_entries(t: &PolarTable) -> Vec<PolarEntry> {
    t.iter().map(|((a, b), c)| PolarEntry { a: *a, b: *b, coeff: cyc_to_json(c) }).collect()
}

pub fn components_json(h: &VectorValuedForm) -> BTreeMap<i64, SeriesJson> {
    (0..2 * h.m).map(|r| (r, qexp_to_json(h.component(r)))).collect()
}

/// Validates the files: the cocycle check, one untwisted series per class
/// and well-formed twisted data.
pub fn build_lambency(files: &LambencyFiles) -> Result<Lambency> {
    let group = files.group.build()?;
    let m = files.group.index.ok_or_else(|| Error::Data("group.json has no index".into()))?;
    if m < 1 {
        return Err(Error::Data(format!("index must be positive, got {m}")));
    }
    let label = files.group.lambency.clone().unwrap_or_else(|| m.to_string());
    let config = LambencyConfig {
        label,
        index: m,
        group: group.clone(),
        center_n: files.group.center_n.clone(),
        n_g: files.group.n_g.iter().map(|(k, v)| (k.clone(), *v)).collect::<HashMap<_, _>>(),
    };
    for &z in &config.center_n {
        if (0..group.order()).any(|x| !group.commutes(x, z)) {
            return Err(Error::Data(format!("element {z} of n is not central")));
        }
    }
    let omega = files.cocycle.build(group.order())?;
    let check = check_cocycle(&omega, &group, COCYCLE_EXHAUSTIVE_BOUND, COCYCLE_SAMPLES, COCYCLE_SEED);
    if !check.passed {
        return Err(match &check.failure {
            Some(q) => Error::NotCocycle(format!("d omega != 1 at quadruple {q:?}")),
            None => Error::NotCocycle("omega is not normalised".into()),
        });
    }
    let classes = group.conjugacy_classes();
    let class_names = default_class_names(&group, &classes);
    let by_name: HashMap<&str, usize> = class_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut polar = BTreeMap::new();
    for (name, entries) in &files.polar.tables {
        let i = *by_name.get(name.as_str()).ok_or_else(|| Error::Data(format!("polar.json names unknown class {name}")))?;
        polar.insert(i, polar_table(entries)?);
    }
    let mut untwisted = BTreeMap::new();
    for u in &files.untwisted {
        let i = *by_name
            .get(u.class.as_str())
            .ok_or_else(|| Error::Data(format!("untwisted series for unknown class {}", u.class)))?;
        let h = components(m, u.symmetry, &u.components, &format!("class {}", u.class))?;
        let p = polar_sum(m, polar.get(&i).unwrap_or(&PolarTable::new()))?;
        if untwisted.insert(classes[i][0], TwinedFunction::new(p, h)?).is_some() {
            return Err(Error::Data(format!("two untwisted series for class {}", u.class)));
        }
    }
    for (i, c) in classes.iter().enumerate() {
        if !untwisted.contains_key(&c[0]) {
            return Err(Error::Data(format!("missing untwisted series for class {}", class_names[i])));
        }
    }
    let mut twisted = BTreeMap::new();
    for t in &files.twisted {
        if t.g >= group.order() || t.h >= group.order() {
            return Err(Error::Data(format!("twisted pair ({}, {}) outside the group", t.g, t.h)));
        }
        let p = CommutingPair::new(&group, t.g, t.h)?;
        let h = components(m, t.symmetry, &t.components, &format!("pair ({}, {})", t.g, t.h))?;
        let f = TwinedFunction::new(polar_sum(m, &polar_table(&t.polar)?)?, h)?;
        twisted.insert(p, f);
    }
    Ok(Lambency {
        config,
        omega: Arc::new(omega),
        cocycle_check: check,
        classes,
        class_names,
        untwisted,
        twisted,
        covers: files.covers.clone(),
    })
}

pub fn load_lambency(dir: &Path) -> Result<Lambency> {
    build_lambency(&LambencyFiles::read(dir)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moonshine::synth::{toy_z2_m1, toy_z2_m2};
    use crate::numeric::Phase;

    #[test]
    fn missing_class_is_named() {
        let mut files = toy_z2_m2(6);
        files.untwisted.retain(|u| u.class != "2a");
        let err = build_lambency(&files).err().unwrap().to_string();
        assert!(err.contains("missing untwisted series for class 2a"), "{err}");
    }

    #[test]
    fn non_cocycle_names_the_quadruple() {
        let mut files = toy_z2_m2(6);
        let mut omega = files.cocycle.build(2).unwrap();
        omega.set(&[1, 1, 1], Phase::new(1, 3));
        files.cocycle = CochainFile::from_cochain(&omega, serde_json::Value::Null);
        let err = build_lambency(&files).err().unwrap();
        assert!(matches!(err, Error::NotCocycle(_)));
        assert!(err.to_string().contains("quadruple [1, 1, 1, 1]"), "{err}");
    }

    #[test]
    fn central_elements_are_checked() {
        let mut files = toy_z2_m2(6);
        files.group = crate::groups::small::symmetric(3).to_file(&[1]);
        files.group.index = Some(2);
        let err = build_lambency(&files).err().unwrap().to_string();
        assert!(err.contains("of n is not central"), "{err}");
    }

    #[test]
    fn write_read_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        for files in [toy_z2_m2(6), toy_z2_m1(true)] {
            let path = dir.path().join(files.group.lambency.clone().unwrap());
            files.write(&path).unwrap();
            let back = LambencyFiles::read(&path).unwrap();
            assert_eq!(serde_json::to_value(&back.untwisted).unwrap(), serde_json::to_value(&files.untwisted).unwrap());
            assert_eq!(serde_json::to_value(&back.twisted).unwrap(), serde_json::to_value(&files.twisted).unwrap());
            let a = build_lambency(&files).unwrap();
            let b = load_lambency(&path).unwrap();
            assert_eq!(a.index(), b.index());
            for h in 0..a.group().order() {
                assert!(a.untwisted_for(h).h.components.iter().zip(&b.untwisted_for(h).h.components).all(|(x, y)| x.agrees_with(y)));
            }
            assert_eq!(a.twisted.len(), b.twisted.len());
        }
    }
}
