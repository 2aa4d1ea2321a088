//! The twisted modules `K^g`: graded projective characters of `C_G(g)` read
//! off the functions `H_{(g,h)}`, their decompositions and table rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num::Zero;

use super::data::Lambency;
use super::function::TwinedFunction;
use crate::cohomology::theta::theta;
use crate::cohomology::Cochain;
use crate::error::{Error, Result};
use crate::groups::{CommutingPair, Group};
use crate::jacobi::{epsilon, VectorValuedForm};
use crate::numeric::phase::format_rational;
use crate::numeric::{rat, Cyclotomic, Rational};
use crate::projective::decompose::{decompose_rows, ModuleDecomposition};
use crate::projective::{char_table, filter_by_class, projective_table, regular_classes, ProjCharTable};

/// `C_G(g)` with `theta_g` and its projective character table.
#[derive(Clone, Debug)]
pub struct Sector {
    pub g: usize,
    pub centralizer: Group,
    /// Parent index of each centraliser element.
    pub embed: Vec<usize>,
    pub cocycle: Cochain,
    pub table: ProjCharTable,
    /// Parent indices of representatives of every class of `C_G(g)`, regular or not.
    pub all_class_reps: Vec<usize>,
    pub irrep_names: Vec<String>,
}

/// Names `1a, 1b, 2a, ...` by dimension.
pub fn irrep_names(dims: &[i64]) -> Vec<String> {
    let mut seen: BTreeMap<i64, usize> = BTreeMap::new();
    dims.iter()
        .map(|d| {
            let k = seen.entry(*d).or_insert(0);
            *k += 1;
            format!("{d}{}", (b'a' + ((*k - 1) % 26) as u8) as char)
        })
        .collect()
}

pub fn sector(lam: &Lambency, g: usize) -> Result<Sector> {
    let group = lam.group();
    let elems = group.centralizer(g);
    let (centralizer, embed) = group.subgroup(&elems)?;
    let cocycle = Cochain::from_fn(2, centralizer.order(), |a| theta(&lam.omega, group, g, embed[a[0]], embed[a[1]]));
    let table = match lam.covers.get(lam.class_name_of(g)) {
        Some(file) => {
            let ext = file.build(&centralizer)?;
            let t = char_table(&ext.cover)?;
            let all = filter_by_class(&ext, &t, &cocycle)?;
            if all.len() != regular_classes(&centralizer, &cocycle).len() {
                return Err(Error::Data(format!(
                    "cover for class {} gives {} projective irreps on {} regular classes",
                    lam.class_name_of(g),
                    all.len(),
                    all.classes.len()
                )));
            }
            all
        }
        None => projective_table(&centralizer, &cocycle)?,
    };
    let all_class_reps = centralizer.conjugacy_classes().iter().map(|c| embed[c[0]]).collect();
    let irrep_names = irrep_names(&table.dims);
    Ok(Sector { g, centralizer, embed, cocycle, table, all_class_reps, irrep_names })
}

/// Graded characters of `K^g` and the problems found reading them off.
#[derive(Clone, Debug, Default)]
pub struct SectorCharacters {
    pub chars: BTreeMap<(i64, Rational), Vec<Cyclotomic>>,
    pub issues: Vec<String>,
}

/// Whether `a = s b` on the common known range.
fn equals_signed(a: &crate::numeric::QExpansion, b: &crate::numeric::QExpansion, s: i64) -> bool {
    a.agrees_with(&b.scale(&Cyclotomic::from_int(s)))
}

/// Reads `epsilon(r) H_{(g,h),r}` at the first `n_coeffs` positive exponents of
/// each component `0 < r < m`. The `q^(-1/4m)` coefficient must be `-2s` when
/// `H_{(g,h),r} = s H_{(e,h),1}` and `0` otherwise; no other non-positive
/// exponents may occur. Characters must vanish on non-regular classes.
pub fn sector_characters<F>(lam: &Lambency, sector: &Sector, fetch: F, n_coeffs: usize) -> Result<SectorCharacters>
where
    F: Fn(CommutingPair) -> Option<TwinedFunction>,
{
    let m = lam.index();
    let g = sector.g;
    let mut funcs: BTreeMap<usize, VectorValuedForm> = BTreeMap::new();
    for &h in &sector.all_class_reps {
        let f = fetch(CommutingPair { g, h }).ok_or_else(|| {
            Error::Data(format!("no function for the pair ({}, {})", lam.class_name_of(g), lam.class_name_of(h)))
        })?;
        funcs.insert(h, f.h);
    }
    let regular: BTreeSet<usize> = sector.table.class_reps().iter().map(|&x| sector.embed[x]).collect();
    let polar_exp = rat(-1, 4 * m);
    let mut out = SectorCharacters::default();
    for r in (1..m).filter(|&r| epsilon(m, r) != 0) {
        let eps = Cyclotomic::from_int(epsilon(m, r));
        let mut exps: BTreeSet<Rational> = BTreeSet::new();
        let mut truncation: Option<Rational> = None;
        for (&h, hf) in &funcs {
            let comp = hf.component(r);
            let t = comp.truncation().clone();
            truncation = Some(truncation.map_or(t.clone(), |x: Rational| x.min(t)));
            let untwined = lam.untwisted_for(h).h.component(1);
            let c = comp.coeff(&polar_exp).unwrap_or_else(Cyclotomic::zero) * &eps;
            let expected = if equals_signed(comp, untwined, 1) && !untwined.is_zero() {
                -2
            } else if equals_signed(comp, untwined, -1) && !untwined.is_zero() {
                2
            } else {
                0
            };
            if c != Cyclotomic::from_int(expected) {
                out.issues.push(format!(
                    "polar coefficient of H_({},{}),{r} is {c}, expected {expected}",
                    lam.class_name_of(g),
                    lam.class_name_of(h)
                ));
            }
            for (a, _) in comp.terms() {
                if *a > Rational::zero() {
                    exps.insert(a.clone());
                } else if *a != polar_exp {
                    out.issues.push(format!(
                        "H_({},{}),{r} has a term at q^{}",
                        lam.class_name_of(g),
                        lam.class_name_of(h),
                        format_rational(a)
                    ));
                }
            }
        }
        // Grades are the positive exponents allowed by the component, known in every function.
        let t = truncation.unwrap_or_else(Rational::zero);
        let base = rat(-r * r, 4 * m);
        let step = exps
            .iter()
            .map(|a| (a - &base).denom().clone())
            .fold(num::BigInt::from(1), |x, y| num::integer::lcm(x, y));
        let step = Rational::new(1.into(), step);
        let mut alpha = &base + &step * ((-&base) / &step).floor() + &step;
        let mut count = 0;
        while count < n_coeffs && alpha < t {
            if alpha > Rational::zero() {
                let mut values = Vec::new();
                for &x in &sector.table.class_reps() {
                    let h = sector.embed[x];
                    values.push(funcs[&h].component(r).coeff(&alpha).unwrap_or_else(Cyclotomic::zero) * &eps);
                }
                for (&h, hf) in &funcs {
                    let v = hf.component(r).coeff(&alpha).unwrap_or_else(Cyclotomic::zero);
                    if !regular.contains(&h) && !v.is_zero() {
                        out.issues.push(format!(
                            "trace {v} at (r = {r}, alpha = {}) on the non-regular class of {}",
                            format_rational(&alpha),
                            lam.class_name_of(h)
                        ));
                    }
                }
                out.chars.insert((r, alpha.clone()), values);
                count += 1;
            }
            alpha += &step;
        }
    }
    Ok(out)
}

/// Decomposition of the first graded pieces of `K^g`.
#[derive(Clone, Debug)]
pub struct ModuleResult {
    pub sector: Sector,
    pub characters: SectorCharacters,
    /// The failure message when some multiplicity is not a non-negative integer.
    pub decomposition: std::result::Result<ModuleDecomposition, String>,
}

impl ModuleResult {
    pub fn is_integral(&self) -> bool {
        self.decomposition.is_ok() && self.characters.issues.is_empty()
    }

    pub fn render(&self, lam: &Lambency) -> String {
        let title = format!("K^({}) over C({}), {} projective irreps", lam.class_name_of(self.sector.g), lam.class_name_of(self.sector.g), self.sector.table.len());
        match &self.decomposition {
            Ok(d) => render_table(&title, d, &self.sector.irrep_names, lam.index()),
            Err(e) => format!("{title}\n  decomposition failed: {e}\n"),
        }
    }
}

pub fn decompose_sector<F>(lam: &Lambency, g: usize, fetch: F, n_coeffs: usize) -> Result<ModuleResult>
where
    F: Fn(CommutingPair) -> Option<TwinedFunction>,
{
    let sector = sector(lam, g)?;
    let characters = sector_characters(lam, &sector, fetch, n_coeffs)?;
    let rows: Vec<Vec<Cyclotomic>> = (0..sector.table.len()).map(|i| sector.table.row_on_classes(i)).collect();
    let decomposition = decompose_rows(&characters.chars, &rows).map_err(|e| e.to_string());
    Ok(ModuleResult { sector, characters, decomposition })
}

/// Rows `(r, alpha)`, columns irreps, zero shown as `.`; components with
/// `epsilon(r) = 0` are left out.
pub fn render_table(title: &str, d: &ModuleDecomposition, names: &[String], m: i64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let width = names.iter().map(|n| n.len()).chain(d.multiplicities.values().flatten().map(|x| x.to_string().len())).max().unwrap_or(1).max(1);
    for r in (1..m).filter(|&r| epsilon(m, r) != 0) {
        let _ = writeln!(out, "r = {r}");
        let _ = write!(out, "{:>8}", "alpha");
        for n in names {
            let _ = write!(out, " {n:>width$}");
        }
        let _ = writeln!(out);
        for ((rr, alpha), mults) in &d.multiplicities {
            if *rr != r {
                continue;
            }
            let _ = write!(out, "{:>8}", format_rational(alpha));
            for x in mults {
                let cell = if *x == 0 { ".".to_string() } else { x.to_string() };
                let _ = write!(out, " {cell:>width$}");
            }
            let _ = writeln!(out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{PolarTable, Symmetry};
    use crate::moonshine::synth::{synth_files, SynthSpec};
    use crate::moonshine::build_lambency;
    use crate::numeric::QExpansion;

    /// `S_3` at `m = 2`, with `H_{(e,h),1} = -2 q^(-1/8) + chi_1(h) q^(7/8) + chi_2(h) q^(15/8)`
    /// for the characters `chi_1 = triv + 2 sgn + 3 std` and `chi_2 = sgn + std`.
    fn s3_lambency() -> Lambency {
        let g = crate::groups::small::symmetric(3);
        let omega = Cochain::trivial(3, 6);
        let t = rat(2, 1);
        let values = [("1a", 9, 3), ("2a", -1, -1), ("3a", 0, 0)];
        let mut untwisted = BTreeMap::new();
        for (name, a, b) in values {
            let mut h1 = QExpansion::new(t.clone(), 8);
            h1.add_term(rat(-1, 8), Cyclotomic::from_int(-2));
            h1.add_term(rat(7, 8), Cyclotomic::from_int(a));
            h1.add_term(rat(15, 8), Cyclotomic::from_int(b));
            let mut h = VectorValuedForm::zero(2, rat(1, 2), &t, Symmetry::Odd);
            *h.component_mut(3) = h1.neg();
            *h.component_mut(1) = h1;
            untwisted.insert(name.to_string(), (h, PolarTable::from([((0, 0), Cyclotomic::from_int(-2))])));
        }
        let files = synth_files(&SynthSpec { label: "s3", index: 2, group: &g, center_n: &[], omega: &omega, truncation: t, untwisted });
        build_lambency(&files).unwrap()
    }

    #[test]
    fn irrep_names_count_by_dimension() {
        assert_eq!(irrep_names(&[1, 1, 2, 3, 1]), ["1a", "1b", "2a", "3a", "1c"]);
    }

    #[test]
    fn untwisted_sector_decomposes_as_ordinary_characters() {
        let lam = s3_lambency();
        let res = decompose_sector(&lam, 0, |p| Some(lam.untwisted_for(p.h).clone()), 5).unwrap();
        assert!(res.is_integral(), "{:?}", res.characters.issues);
        let d = res.decomposition.as_ref().unwrap();
        let classes = lam.group().conjugacy_classes();
        let size = |h: usize| classes[lam.class_of(h)].len() as i64;
        let reps = res.sector.table.class_reps();
        for ((r, alpha), chars) in &res.characters.chars {
            // Multiplicity of the trivial representation is the class-weighted mean.
            let total: i64 = reps.iter().zip(chars).map(|(&x, c)| size(res.sector.embed[x]) * c.to_i64().unwrap()).sum();
            let triv = (0..res.sector.table.len())
                .find(|&i| res.sector.table.row_on_classes(i).iter().all(|v| *v == Cyclotomic::from_int(1)))
                .unwrap();
            assert_eq!(d.multiplicities[&(*r, alpha.clone())][triv] * 6, total);
        }
        let mut dims: Vec<(i64, i64)> = res.sector.table.dims.iter().zip(&d.multiplicities[&(1, rat(7, 8))]).map(|(a, b)| (*a, *b)).collect();
        dims.sort();
        assert_eq!(dims.iter().map(|x| x.0 * x.1).sum::<i64>(), 9);
    }

    #[test]
    fn render_marks_zero_with_dots() {
        let lam = s3_lambency();
        let res = decompose_sector(&lam, 0, |p| Some(lam.untwisted_for(p.h).clone()), 5).unwrap();
        let text = res.render(&lam);
        assert!(text.starts_with("K^(1a) over C(1a), 3 projective irreps"));
        let row = text.lines().find(|l| l.trim_start().starts_with("15/8")).unwrap();
        assert_eq!(row.split_whitespace().filter(|c| *c == ".").count(), 1);
        assert!(text.lines().any(|l| l == "r = 1"));
    }

    #[test]
    fn wrong_polar_coefficient_is_reported() {
        let lam = s3_lambency();
        let res = decompose_sector(&lam, 0, |p| Some(lam.untwisted_for(p.h).clone()).map(|f| {
            let h = f.h.scale(&Cyclotomic::from_int(2));
            TwinedFunction::new(f.polar.clone(), h).unwrap()
        }), 5).unwrap();
        assert!(res.characters.issues.iter().any(|i| i.contains("expected 0")), "{:?}", res.characters.issues);
    }
}
