//! JSON encodings of series and cyclotomic numbers.
//!
//! A coefficient is a list of `[phase, weight]` string pairs, both rationals,
//! read as `sum weight * e(phase)`.

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::cyclotomic::Cyclotomic;
use super::phase::{format_rational, parse_rational, Phase};
use super::qseries::{JacobiExpansion, QExpansion};
use crate::error::{Error, Result};

pub type CoeffJson = Vec<(String, String)>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_exp: Option<i64>,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub modulus: u64,
    pub truncation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_window: Option<i64>,
    pub terms: Vec<TermJson>,
}

pub fn cyc_to_json(c: &Cyclotomic) -> CoeffJson {
    c.to_phases()
        .into_iter()
        .map(|(p, w)| (p.to_string(), format_rational(&w)))
        .collect()
}

pub fn cyc_from_json(c: &CoeffJson) -> Result<Cyclotomic> {
    let mut terms = Vec::with_capacity(c.len());
    for (p, w) in c {
        terms.push((Phase::parse(p)?, parse_rational(w)?));
    }
    Cyclotomic::from_phases(terms)
}

pub fn qexp_to_json(f: &QExpansion) -> SeriesJson {
    SeriesJson {
        modulus: f.modulus(),
        truncation: format_rational(f.truncation()),
        index: None,
        y_window: None,
        terms: f
            .terms()
            .map(|(e, c)| TermJson { exp: format_rational(e), y_exp: None, coeff: cyc_to_json(c) })
            .collect(),
    }
}

pub fn qexp_from_json(s: &SeriesJson) -> Result<QExpansion> {
    let mut terms = Vec::with_capacity(s.terms.len());
    for t in &s.terms {
        if t.y_exp.is_some() {
            return Err(Error::Parse("unexpected y_exp in a q-series".into()));
        }
        terms.push((parse_rational(&t.exp)?, cyc_from_json(&t.coeff)?));
    }
    QExpansion::from_terms(terms, parse_rational(&s.truncation)?, s.modulus)
}

pub fn jacobi_to_json(f: &JacobiExpansion) -> SeriesJson {
    SeriesJson {
        modulus: f.q_modulus(),
        truncation: format_rational(f.q_truncation()),
        index: Some(f.index()),
        y_window: f.y_window(),
        terms: f
            .terms()
            .map(|((a, b), c)| TermJson { exp: format_rational(a), y_exp: Some(*b), coeff: cyc_to_json(c) })
            .collect(),
    }
}

pub fn jacobi_from_json(s: &SeriesJson) -> Result<JacobiExpansion> {
    let index = s.index.ok_or_else(|| Error::Parse("Jacobi series needs an index".into()))?;
    let mut f = JacobiExpansion::new(index, parse_rational(&s.truncation)?, s.modulus, s.y_window);
    for t in &s.terms {
        let b = t.y_exp.ok_or_else(|| Error::Parse("Jacobi term without y_exp".into()))?;
        let a = parse_rational(&t.exp)?;
        let d = a.denom().to_u64().unwrap_or(0);
        if d == 0 || s.modulus % d != 0 {
            return Err(Error::Data(format!("exponent {} not in (1/{})Z", t.exp, s.modulus)));
        }
        f.add_term(a, b, cyc_from_json(&t.coeff)?);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::phase::rat;

    #[test]
    fn series_round_trip() {
        let c = &Cyclotomic::root(Phase::new(1, 8)) + &Cyclotomic::from_int(-3);
        let f = QExpansion::from_terms(
            [(rat(-1, 8), Cyclotomic::from_int(-2)), (rat(7, 8), c)],
            rat(4, 1),
            8,
        )
        .unwrap();
        let s = serde_json::to_string(&qexp_to_json(&f)).unwrap();
        let back = qexp_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn jacobi_round_trip() {
        let mut f = JacobiExpansion::new(2, rat(3, 1), 8, Some(5));
        f.add_term(rat(1, 8), -1, Cyclotomic::root(Phase::new(2, 3)));
        f.add_term(rat(0, 1), 4, Cyclotomic::from_int(7));
        let s = serde_json::to_string(&jacobi_to_json(&f)).unwrap();
        let back = jacobi_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn weighted_phase_coefficients() {
        let c = cyc_from_json(&vec![("1/2".into(), "3".into()), ("0".into(), "1/2".into())]).unwrap();
        assert_eq!(c, Cyclotomic::from_rational(rat(-5, 2)));
    }
}
