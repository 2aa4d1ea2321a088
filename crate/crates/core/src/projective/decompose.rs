//! Decomposition of graded characters into projective irreducibles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::extension::ProjCharTable;
use crate::error::{Error, Result};
use crate::numeric::io::{cyc_from_json, cyc_to_json, CoeffJson};
use crate::numeric::linalg::CycMatrix;
use crate::numeric::phase::format_rational;
use crate::numeric::{parse_rational, rat, Cyclotomic, Rational};

/// A homogeneous component `(r mod 2m, alpha)`.
pub type GradeKey = (i64, Rational);

/// Graded characters, valued at the class representatives of a table.
pub type GradedCharacters = BTreeMap<GradeKey, Vec<Cyclotomic>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecomposition {
    pub multiplicities: BTreeMap<GradeKey, Vec<i64>>,
}

impl ModuleDecomposition {
    pub fn to_file(&self) -> DecompositionFile {
        DecompositionFile {
            entries: self
                .multiplicities
                .iter()
                .map(|((r, a), m)| DecompositionEntry { r: *r, alpha: format_rational(a), multiplicities: m.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub r: i64,
    pub alpha: String,
    pub multiplicities: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub entries: Vec<DecompositionEntry>,
}

/// Projective table restricted to class representatives.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjTableFile {
    pub classes: Vec<String>,
    pub class_reps: Vec<usize>,
    pub dims: Vec<i64>,
    pub rows: Vec<BTreeMap<String, CoeffJson>>,
}

impl ProjTableFile {
    pub fn from_table(t: &ProjCharTable) -> Self {
        ProjTableFile {
            classes: t.class_names.clone(),
            class_reps: t.class_reps(),
            dims: t.dims.clone(),
            rows: (0..t.len())
                .map(|i| t.class_names.iter().cloned().zip(t.row_on_classes(i).iter().map(cyc_to_json)).collect())
                .collect(),
        }
    }

    pub fn rows_on_classes(&self) -> Result<Vec<Vec<Cyclotomic>>> {
        self.rows
            .iter()
            .map(|r| {
                self.classes
                    .iter()
                    .map(|n| cyc_from_json(r.get(n).ok_or_else(|| Error::Data(format!("row lacks class {n}")))?))
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradedEntry {
    pub r: i64,
    pub alpha: String,
    pub values: BTreeMap<String, CoeffJson>,
}

/// Graded characters keyed by class name.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradedFile {
    pub entries: Vec<GradedEntry>,
}

impl GradedFile {
    pub fn to_characters(&self, classes: &[String]) -> Result<GradedCharacters> {
        let mut out = GradedCharacters::new();
        for e in &self.entries {
            let vals = classes
                .iter()
                .map(|n| cyc_from_json(e.values.get(n).ok_or_else(|| Error::Data(format!("entry lacks class {n}")))?))
                .collect::<Result<Vec<_>>>()?;
            out.insert((e.r, parse_rational(&e.alpha)?), vals);
        }
        Ok(out)
    }

    pub fn from_characters(chars: &GradedCharacters, classes: &[String]) -> Self {
        GradedFile {
            entries: chars
                .iter()
                .map(|((r, a), v)| GradedEntry {
                    r: *r,
                    alpha: format_rational(a),
                    values: classes.iter().cloned().zip(v.iter().map(cyc_to_json)).collect(),
                })
                .collect(),
        }
    }
}

pub fn decompose(chars: &GradedCharacters, table: &ProjCharTable) -> Result<ModuleDecomposition> {
    let rows: Vec<Vec<Cyclotomic>> = (0..table.len()).map(|i| table.row_on_classes(i)).collect();
    decompose_rows(chars, &rows)
}

/// Solves `sum_i m_i row_i = chi` exactly for each grade, requiring every
/// `m_i` to be a non-negative integer.
pub fn decompose_rows(chars: &GradedCharacters, rows: &[Vec<Cyclotomic>]) -> Result<ModuleDecomposition> {
    let k = rows.first().map_or(0, Vec::len);
    if rows.len() != k {
        return Err(Error::Decomposition(format!("{} irreps on {k} classes", rows.len())));
    }
    let a = CycMatrix::from_rows((0..k).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect());
    let inv = a.inverse().ok_or_else(|| Error::Decomposition("projective table is singular".into()))?;
    let mut out = BTreeMap::new();
    for ((r, alpha), chi) in chars {
        if chi.len() != k {
            return Err(Error::Decomposition(format!("character at ({r}, {alpha}) has {} values", chi.len())));
        }
        let m = inv.mul_vec(chi);
        let mut ints = Vec::with_capacity(m.len());
        for (i, x) in m.iter().enumerate() {
            match x.to_i64() {
                Some(v) if v >= 0 => ints.push(v),
                _ => {
                    return Err(Error::Decomposition(format!(
                        "multiplicity of irrep {i} at (r = {r}, alpha = {}) is {x}",
                        format_rational(alpha)
                    )))
                }
            }
        }
        out.insert((*r, alpha.clone()), ints);
    }
    Ok(ModuleDecomposition { multiplicities: out })
}

/// Characters of the module with the given multiplicities.
pub fn characters_from_multiplicities(d: &ModuleDecomposition, rows: &[Vec<Cyclotomic>]) -> GradedCharacters {
    let k = rows.first().map_or(0, Vec::len);
    d.multiplicities
        .iter()
        .map(|(key, m)| {
            let mut v = vec![Cyclotomic::zero(); k];
            for (i, &mi) in m.iter().enumerate() {
                for c in 0..k {
                    v[c] += &rows[i][c].scale(&rat(mi, 1));
                }
            }
            (key.clone(), v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h3::h3_compute;
    use crate::cohomology::theta::theta;
    use crate::cohomology::Cochain;
    use crate::groups::small::*;
    use crate::projective::extension::projective_table;
    use rand::{Rng, SeedableRng};

    fn rows(t: &ProjCharTable) -> Vec<Vec<Cyclotomic>> {
        (0..t.len()).map(|i| t.row_on_classes(i)).collect()
    }

    fn q8_theta_table() -> ProjCharTable {
        let g = dihedral(4);
        let w = &h3_compute(&g, 16).unwrap().representatives[2];
        let x = g.center()[1];
        let (h, emb) = g.subgroup(&g.centralizer(x)).unwrap();
        let c = Cochain::from_fn(2, h.order(), |t| theta(w, &g, x, emb[t[0]], emb[t[1]]));
        projective_table(&h, &c).unwrap()
    }

    #[test]
    fn unit_and_linear_combinations() {
        for t in [projective_table(&symmetric(3), &Cochain::trivial(2, 6)).unwrap(), q8_theta_table()] {
            let rs = rows(&t);
            let mut chars = GradedCharacters::new();
            chars.insert((1, rat(1, 8)), rs[0].clone());
            let d = decompose(&chars, &t).unwrap();
            let mut unit = vec![0; t.len()];
            unit[0] = 1;
            assert_eq!(d.multiplicities[&(1, rat(1, 8))], unit);
            if t.len() >= 2 {
                let v: Vec<Cyclotomic> =
                    (0..rs[0].len()).map(|c| &rs[0][c].scale(&rat(2, 1)) + &rs[1][c].scale(&rat(3, 1))).collect();
                let mut chars = GradedCharacters::new();
                chars.insert((1, rat(9, 8)), v);
                let mut expect = vec![0; t.len()];
                expect[0] = 2;
                expect[1] = 3;
                assert_eq!(decompose(&chars, &t).unwrap().multiplicities[&(1, rat(9, 8))], expect);
            }
        }
    }

    #[test]
    fn non_integral_multiplicity_rejected() {
        let t = projective_table(&symmetric(3), &Cochain::trivial(2, 6)).unwrap();
        let half: Vec<Cyclotomic> = t.row_on_classes(1).iter().map(|x| x.scale(&rat(1, 2))).collect();
        let chars = GradedCharacters::from([((0, rat(1, 1)), half)]);
        assert!(matches!(decompose(&chars, &t), Err(Error::Decomposition(_))));
    }

    #[test]
    fn decompose_inverts_reconstruction() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for t in [projective_table(&alternating4(), &Cochain::trivial(2, 12)).unwrap(), q8_theta_table()] {
            let rs = rows(&t);
            for trial in 0..100 {
                let m: Vec<i64> = (0..t.len()).map(|_| rng.gen_range(0..20)).collect();
                let d = ModuleDecomposition { multiplicities: BTreeMap::from([((trial % 4, rat(trial, 8)), m)]) };
                let chars = characters_from_multiplicities(&d, &rs);
                assert_eq!(decompose(&chars, &t).unwrap(), d);
            }
        }
    }

    #[test]
    fn files_round_trip() {
        let t = q8_theta_table();
        let f = ProjTableFile::from_table(&t);
        let back: ProjTableFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        let rs = back.rows_on_classes().unwrap();
        assert_eq!(rs, rows(&t));
        let chars = GradedCharacters::from([((1, rat(7, 8)), rs[0].clone())]);
        let g = GradedFile::from_characters(&chars, &back.classes);
        assert_eq!(g.to_characters(&back.classes).unwrap(), chars);
    }
}
