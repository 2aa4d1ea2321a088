//! Deterministic JSON and plain-text renderings of a verification report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use super::newfn::NewFunction;
use super::verify::{OrbitReport, VerificationReport, Verdict, CONDITIONS};
use crate::cohomology::theta::Obstruction;
use crate::error::{Error, Result};

/// Schema of `report.json`, in the JSON Schema subset checked by [`validate`].
pub const REPORT_SCHEMA: &str = include_str!("report.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

pub fn to_json(report: &VerificationReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Left-aligned columns separated by two spaces; the header row is always present.
fn table(title: &str, headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{}", line(headers.to_vec()));
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn label(o: &OrbitReport) -> String {
    format!("({}, {})", o.label.0, o.label.1)
}

fn verdict(v: Option<Verdict>) -> &'static str {
    match v {
        Some(Verdict::Pass) => "ok",
        Some(Verdict::Fail) => "FAIL",
        Some(Verdict::NotCheckable) | None => "n/c",
    }
}

fn stabilizer(o: &OrbitReport) -> String {
    match &o.stabilizer.name {
        Some(n) => n.clone(),
        None => format!("index {} level {}", o.stabilizer.index, o.stabilizer.level),
    }
}

fn obstruction_flag(o: &OrbitReport) -> &'static str {
    match (&o.obstruction, o.obstructed_by_data) {
        (Obstruction::Obstructed { .. }, _) => "omega",
        (_, true) => "data",
        (Obstruction::Unobstructed { .. }, false) => "no",
        (Obstruction::NotApplicable, false) => "-",
    }
}

pub fn to_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let n: Vec<String> = r.center_n.iter().map(|z| z.to_string()).collect();
    let _ = writeln!(out, "lambency {}  m = {}  |G| = {}  n = {{{}}}", r.lambency, r.index, r.group_order, n.join(", "));
    let _ = writeln!(out, "classes {}", r.classes.join(" "));
    let _ = writeln!(out, "cocycle check {}", if r.cocycle_exhaustive { "exhaustive" } else { "sampled" });
    let _ = writeln!(out);

    let mut headers = vec!["orbit", "size", "type", "stabilizer", "obstructed"];
    headers.extend(CONDITIONS);
    headers.push("source");
    let rows: Vec<Vec<String>> = r
        .orbits
        .iter()
        .map(|o| {
            let mut row = vec![label(o), o.size.to_string(), if o.is_old { "old" } else { "new" }.into(), stabilizer(o), obstruction_flag(o).into()];
            row.extend(CONDITIONS.iter().map(|c| verdict(o.conditions.get(*c).map(|s| s.status)).to_string()));
            let source = match (&o.candidate_pair, &o.provenance) {
                (Some(p), Some(prov)) => format!("{} at ({}, {})", serde_json::to_value(prov).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(), p.g, p.h),
                _ => "-".into(),
            };
            row.push(if o.forced_zero { format!("{source}, forced zero") } else { source });
            row
        })
        .collect();
    out += &table("Orbits", &headers, &rows);
    let _ = writeln!(out);

    let rows: Vec<Vec<String>> = r
        .orbits
        .iter()
        .filter_map(|o| match &o.obstruction {
            Obstruction::NotApplicable => None,
            Obstruction::Unobstructed { k, sigma_minus_identity, xi_inverse_pair, xi_pair } | Obstruction::Obstructed { k, sigma_minus_identity, xi_inverse_pair, xi_pair } => Some(vec![
                label(o),
                k.to_string(),
                format!("{sigma_minus_identity:?}"),
                format!("{xi_inverse_pair:?}"),
                format!("{xi_pair:?}"),
                if o.obstruction.is_obstructed() { "obstructed" } else { "unobstructed" }.into(),
            ]),
        })
        .collect();
    out += &table("Obstructions", &["orbit", "k", "varsigma(-I)", "xi(g^-1,h^-1)", "xi(g,h)", "status"], &rows);
    let _ = writeln!(out);

    let rows: Vec<Vec<String>> = r
        .orbits
        .iter()
        .filter_map(|o| {
            o.new_function.as_ref().map(|f| match f {
                NewFunction::Zero { reason } => vec![label(o), "0".into(), reason.clone()],
                NewFunction::Found { expression, normalisation, .. } => vec![label(o), expression.clone(), format!("divided by {normalisation}")],
            })
        })
        .collect();
    out += &table("New functions", &["orbit", "psi", "note"], &rows);
    let _ = writeln!(out);

    let rows: Vec<Vec<String>> = r
        .z_twists
        .iter()
        .map(|z| {
            vec![
                z.z.to_string(),
                format!("{:?}", z.varsigma),
                if z.feasible { "yes" } else { "no" }.into(),
                z.leading_multiplicity.map_or("-".into(), |x| x.to_string()),
                z.numeric_ratio.clone().unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    out += &table("z-twists", &["z", "varsigma", "feasible", "leading multiplicity", "S-ratio"], &rows);
    let _ = writeln!(out);

    let rows: Vec<Vec<String>> = r
        .orbits
        .iter()
        .flat_map(|o| {
            o.conditions
                .iter()
                .filter(|(_, s)| s.status != Verdict::Pass)
                .flat_map(move |(c, s)| s.details.iter().map(move |d| vec![label(o), c.clone(), d.clone()]))
        })
        .collect();
    out += &table("Findings", &["orbit", "condition", "detail"], &rows);

    for m in &r.modules {
        let _ = writeln!(out);
        out += &m.table;
        for i in &m.issues {
            let _ = writeln!(out, "  issue: {i}");
        }
    }
    out
}

/// Writes `report.json` and/or `report.txt` into `dir`.
pub fn emit_report(report: &VerificationReport, formats: &[ReportFormat], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for f in formats {
        let (name, body) = match f {
            ReportFormat::Json => ("report.json", to_json(report)?),
            ReportFormat::Text => ("report.txt", to_text(report)),
        };
        let path = dir.join(name);
        fs::write(&path, body)?;
        out.push(path);
    }
    Ok(out)
}

/// Checks `value` against `schema` using `type`, `required`, `properties`,
/// `items` and `enum`; returns the path of the first mismatch.
pub fn validate(value: &Value, schema: &Value) -> Result<()> {
    fn go(v: &Value, s: &Value, path: &str) -> std::result::Result<(), String> {
        if let Some(t) = s.get("type") {
            let types: Vec<&str> = match t {
                Value::String(x) => vec![x.as_str()],
                Value::Array(xs) => xs.iter().filter_map(Value::as_str).collect(),
                _ => vec![],
            };
            let ok = types.iter().any(|t| match *t {
                "object" => v.is_object(),
                "array" => v.is_array(),
                "string" => v.is_string(),
                "integer" => v.is_i64() || v.is_u64(),
                "number" => v.is_number(),
                "boolean" => v.is_boolean(),
                "null" => v.is_null(),
                _ => false,
            });
            if !ok {
                return Err(format!("{path}: expected {t}"));
            }
        }
        if let Some(Value::Array(allowed)) = s.get("enum") {
            if !allowed.contains(v) {
                return Err(format!("{path}: {v} not allowed"));
            }
        }
        if let (Some(Value::Array(req)), Some(obj)) = (s.get("required"), v.as_object()) {
            for k in req.iter().filter_map(Value::as_str) {
                if !obj.contains_key(k) {
                    return Err(format!("{path}: missing {k}"));
                }
            }
        }
        if let (Some(Value::Object(props)), Some(obj)) = (s.get("properties"), v.as_object()) {
            for (k, sub) in props {
                if let Some(x) = obj.get(k) {
                    go(x, sub, &format!("{path}.{k}"))?;
                }
            }
        }
        if let (Some(sub @ Value::Object(_)), Some(obj)) = (s.get("additionalProperties"), v.as_object()) {
            for (k, x) in obj {
                if s.get("properties").and_then(|p| p.get(k)).is_none() {
                    go(x, sub, &format!("{path}.{k}"))?;
                }
            }
        }
        if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
            for (i, x) in arr.iter().enumerate() {
                go(x, items, &format!("{path}[{i}]"))?;
            }
        }
        Ok(())
    }
    go(value, schema, "$").map_err(Error::Data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moonshine::build_lambency;
    use crate::moonshine::synth::{toy_z2_m1, toy_z2_m2};
    use crate::moonshine::verify::{run_verification, VerifyOptions};

    fn empty_report() -> VerificationReport {
        VerificationReport {
            lambency: "empty".into(),
            index: 1,
            group_order: 1,
            classes: vec!["1a".into()],
            center_n: Vec::new(),
            cocycle_exhaustive: true,
            z_twists: Vec::new(),
            transport_checks: Vec::new(),
            orbits: Vec::new(),
            modules: Vec::new(),
        }
    }

    fn schema() -> Value {
        serde_json::from_str(REPORT_SCHEMA).unwrap()
    }

    #[test]
    fn empty_report_has_header_only_tables() {
        let text = to_text(&empty_report());
        for title in ["Orbits", "Obstructions", "New functions", "z-twists", "Findings"] {
            let mut lines = text.lines().skip_while(|l| *l != title);
            assert_eq!(lines.next(), Some(title));
            assert!(!lines.next().unwrap().is_empty());
            assert!(lines.next().map_or(true, |l| l.is_empty()), "{title} has rows");
        }
        validate(&serde_json::from_str(&to_json(&empty_report()).unwrap()).unwrap(), &schema()).unwrap();
    }

    #[test]
    fn toy_reports_validate_and_are_deterministic() {
        for files in [toy_z2_m1(true), toy_z2_m1(false), toy_z2_m2(10)] {
            let run = || {
                let lam = build_lambency(&files).unwrap();
                let r = run_verification(&lam, &VerifyOptions::default()).unwrap();
                (to_json(&r).unwrap(), to_text(&r))
            };
            let (j1, t1) = run();
            let (j2, t2) = run();
            assert_eq!(j1, j2);
            assert_eq!(t1, t2);
            validate(&serde_json::from_str(&j1).unwrap(), &schema()).unwrap();
            assert!(t1.contains("(1a, 2a)"));
        }
    }

    #[test]
    fn schema_rejects_bad_verdicts() {
        let lam = build_lambency(&toy_z2_m1(true)).unwrap();
        let r = run_verification(&lam, &VerifyOptions::default()).unwrap();
        let mut v = serde_json::to_value(&r).unwrap();
        v["orbits"][0]["conditions"]["I"]["status"] = Value::String("maybe".into());
        let err = validate(&v, &schema()).err().unwrap().to_string();
        assert!(err.contains("orbits[0].conditions.I.status"), "{err}");
        let mut v = serde_json::to_value(&r).unwrap();
        v.as_object_mut().unwrap().remove("modules");
        assert!(validate(&v, &schema()).is_err());
    }

    #[test]
    fn emit_writes_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_report(&empty_report(), &[ReportFormat::Json, ReportFormat::Text], dir.path()).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(fs::read_to_string(&paths[1]).unwrap().starts_with("lambency empty"));
    }
}
