//! Synthetic lambency datasets for exercising the pipeline end to end.

use std::collections::BTreeMap;

use serde_json::Value;

use super::data::{components_json, polar_entries, LambencyFiles, PolarFile, TwistedFile, UntwistedFile};
use crate::cohomology::{Cochain, CochainFile};
use crate::groups::Group;
use crate::jacobi::{PolarTable, Symmetry, VectorValuedForm};
use crate::numeric::{rat, Cyclotomic, QExpansion, Rational};
use crate::projective::chartable::default_class_names;

/// Integer power series `sum c_n q^n`, `n < len`.
fn series_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len().min(b.len());
    let mut out = vec![0i128; n];
    for (i, x) in a.iter().enumerate().take(n) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `prod (1 - q^n)^(-3)` up to `q^(len - 1)`.
fn inverse_cube_euler(len: usize) -> Vec<i128> {
    let mut p = vec![0i128; len];
    p[0] = 1;
    for n in 1..len {
        // Dividing by (1 - q^n) three times is a running sum with stride n.
        for _ in 0..3 {
            for k in n..len {
                p[k] += p[k - n];
            }
        }
    }
    p
}

/// The weight-1/2 mock modular form `H = (48 F - 2 E_2) / eta^3` with
/// `F = sum_{r > s > 0, r - s odd} (-1)^r s q^(rs/2)`, known below `q^(len - 1/8)`.
pub fn mathieu_h(len: usize) -> QExpansion {
    let mut f = vec![0i128; len];
    for s in 1..len {
        let mut r = s + 1;
        while r * s / 2 < len {
            let sign = if r % 2 == 0 { 1 } else { -1 };
            f[r * s / 2] += sign * s as i128;
            r += 2;
        }
    }
    let mut e2 = vec![0i128; len];
    e2[0] = 1;
    for (n, c) in e2.iter_mut().enumerate().skip(1) {
        let sigma: usize = (1..=n).filter(|d| n % d == 0).sum();
        *c = -24 * sigma as i128;
    }
    let num: Vec<i128> = f.iter().zip(&e2).map(|(a, b)| 48 * a - 2 * b).collect();
    let coeffs = series_mul(&num, &inverse_cube_euler(len));
    let mut h = QExpansion::new(rat(8 * len as i64 - 1, 8), 8);
    for (n, c) in coeffs.iter().enumerate() {
        if *c != 0 {
            h.add_term(rat(8 * n as i64 - 1, 8), Cyclotomic::from_int(i64::try_from(*c).expect("coefficient overflow")));
        }
    }
    h
}

/// A lambency whose untwisted data is given per class name; classes not in
/// `untwisted` get `H = 0` known below `truncation`.
pub struct SynthSpec<'a> {
    pub label: &'a str,
    pub index: i64,
    pub group: &'a Group,
    pub center_n: &'a [usize],
    pub omega: &'a Cochain,
    pub truncation: Rational,
    pub untwisted: BTreeMap<String, (VectorValuedForm, PolarTable)>,
}

pub fn synth_files(spec: &SynthSpec) -> LambencyFiles {
    let mut group = spec.group.to_file(spec.center_n);
    group.lambency = Some(spec.label.to_string());
    group.index = Some(spec.index);
    let classes = spec.group.conjugacy_classes();
    let names = default_class_names(spec.group, &classes);
    let mut untwisted = Vec::new();
    let mut polar = PolarFile::default();
    for name in &names {
        let zero = VectorValuedForm::zero(spec.index, rat(1, 2), &spec.truncation, Symmetry::Odd);
        let (h, chi) = spec.untwisted.get(name).cloned().unwrap_or((zero, PolarTable::new()));
        if !chi.is_empty() {
            polar.tables.insert(name.clone(), polar_entries(&chi));
        }
        untwisted.push(UntwistedFile { class: name.clone(), symmetry: h.symmetry, components: components_json(&h) });
    }
    LambencyFiles {
        group,
        cocycle: CochainFile::from_cochain(spec.omega, Value::Null),
        covers: BTreeMap::new(),
        untwisted,
        twisted: Vec::new(),
        polar,
    }
}

fn z2_m1(label: &str, omega: &Cochain, chi_z: PolarTable, twisted: [PolarTable; 2], class_z: Option<VectorValuedForm>) -> LambencyFiles {
    let g = crate::groups::small::cyclic(2);
    let t = rat(6, 1);
    let zero = VectorValuedForm::zero(1, rat(1, 2), &t, Symmetry::Odd);
    let mut untwisted = BTreeMap::new();
    untwisted.insert("1a".to_string(), (zero.clone(), PolarTable::from([((0, 0), Cyclotomic::from_int(-2))])));
    untwisted.insert("2a".to_string(), (class_z.unwrap_or_else(|| zero.clone()), chi_z));
    let mut files = synth_files(&SynthSpec { label, index: 1, group: &g, center_n: &[], omega, truncation: t, untwisted });
    for (h, chi) in twisted.iter().enumerate() {
        files.twisted.push(TwistedFile { g: 1, h, symmetry: Symmetry::Odd, components: components_json(&zero), polar: polar_entries(chi) });
    }
    files
}

/// The `G = Z/2`, `m = 1` toy with trivial `omega` and `n`: `H = 0`,
/// `psi_(e,e) = -2 mu_1` and `psi_(e,z) = psi_(z,e) = psi_(z,z) = 2 mu_1`.
/// The inconsistent variant replaces the class `z` data by an even function,
/// which changes sign under `-I`.
pub fn toy_z2_m1(consistent: bool) -> LambencyFiles {
    let omega = Cochain::trivial(3, 2);
    let two = || PolarTable::from([((0, 0), Cyclotomic::from_int(2))]);
    if consistent {
        return z2_m1("toy-z2-m1", &omega, two(), [two(), two()], None);
    }
    let t = rat(6, 1);
    let mut h = VectorValuedForm::zero(1, rat(1, 2), &t, Symmetry::Even);
    for r in 0..2 {
        *h.component_mut(r) = crate::jacobi::unary_theta(1, r, &t).with_modulus(4).expect("modulus");
    }
    z2_m1("toy-z2-m1-inconsistent", &omega, PolarTable::new(), [two(), two()], Some(h))
}

/// `psi_(e,z) = 2 mu_1|(0, 1/2)`, `psi_(z,e) = 2 mu_1|(1/2, 0)`, `psi_(z,z) = 2 mu_1|(1/2, 1/2)`;
/// consistent with the multipliers of the nontrivial class of `H^3(Z/2, U(1))` only.
pub fn toy_z2_m1_half_shifts(nontrivial_omega: bool) -> LambencyFiles {
    let mut omega = Cochain::trivial(3, 2);
    if nontrivial_omega {
        omega.set(&[1, 1, 1], crate::numeric::Phase::new(1, 2));
    }
    let at = |a: i64, b: i64| PolarTable::from([((a, b), Cyclotomic::from_int(2))]);
    let label = if nontrivial_omega { "toy-z2-m1-half-shifts" } else { "toy-z2-m1-half-shifts-trivial-omega" };
    z2_m1(label, &omega, at(0, 1), [at(1, 0), at(1, 1)], None)
}

/// The `G = Z/2`, `m = 2` toy with `n = {z}` built on `H = (48 F - 2 E_2) / eta^3`:
/// `psi_(e,e) = -24 mu_2 + H 1^` and `psi_(e,z) = -psi_(e,e)|(0, 1/2)`.
pub fn toy_z2_m2(len: usize) -> LambencyFiles {
    let g = crate::groups::small::cyclic(2);
    let omega = Cochain::trivial(3, 2);
    let h1 = mathieu_h(len);
    let mut h = VectorValuedForm::zero(2, rat(1, 2), h1.truncation(), Symmetry::Odd);
    *h.component_mut(1) = h1.clone();
    *h.component_mut(3) = h1.neg();
    let mut untwisted = BTreeMap::new();
    untwisted.insert("1a".to_string(), (h.clone(), PolarTable::from([((0, 0), Cyclotomic::from_int(-24))])));
    untwisted.insert("2a".to_string(), (h, PolarTable::from([((0, 2), Cyclotomic::from_int(24))])));
    let t = h1.truncation().clone();
    synth_files(&SynthSpec { label: "toy-z2-m2", index: 2, group: &g, center_n: &[1], omega: &omega, truncation: t, untwisted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mathieu_coefficients() {
        let h = mathieu_h(8);
        let expect = [-2i64, 90, 462, 1540, 4554, 11592, 27830, 61686];
        for (n, c) in expect.iter().enumerate() {
            assert_eq!(h.coeff(&rat(8 * n as i64 - 1, 8)), Some(Cyclotomic::from_int(*c)), "n = {n}");
        }
    }

    /// `-24 mu_2 + H (theta_{2,1} - theta_{2,3})` is invariant under `S`; `+24` is not.
    #[test]
    fn mathieu_polar_normalisation() {
        use crate::jacobi::AppellLerchSum;
        use crate::moonshine::TwinedFunction;
        use crate::numeric::complex::{e_complex, subexponential_growth};
        use num::complex::Complex64;
        let h1 = mathieu_h(30);
        let mut h = VectorValuedForm::zero(2, rat(1, 2), h1.truncation(), Symmetry::Odd);
        *h.component_mut(1) = h1.clone();
        *h.component_mut(3) = h1.neg();
        let growth = subexponential_growth(10.0, 4.0 * std::f64::consts::PI * (1.0f64 / 8.0).sqrt());
        let deviation = |chi: i64| {
            let f = TwinedFunction::new(AppellLerchSum::mu(2).scale(&Cyclotomic::from_int(chi)), h.clone()).unwrap();
            let tau = Complex64::from_polar(1.0, 1.3);
            let z = Complex64::new(0.07, 0.03);
            let lhs = f.eval(-1.0 / tau, z / tau, &growth).unwrap().value / tau * e_complex(-2.0 * z * z / tau);
            (lhs - f.eval(tau, z, &growth).unwrap().value).norm()
        };
        assert!(deviation(-24) < 1e-8);
        assert!(deviation(24) > 1e-2);
    }
}
