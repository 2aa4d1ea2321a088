use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use umbral::cohomology::theta::{obstruction_check, theta_from_omega};
use umbral::cohomology::{check_cocycle, h3_compute, CochainFile, Cochain, DEFAULT_H3_BOUND};
use umbral::double::{double_character, modular_data, verlinde_fusion, DoubleAlgebra};
use umbral::groups::congruence::stabilizer_group;
use umbral::groups::pairs::PairCanonicalizer;
use umbral::groups::{classify_pairs, Group, GroupFile, Sl2};
use umbral::jacobi::{polar_part, theta_decompose, theta_mr, unary_theta, weil_check, weil_rep, AppellLerchSum, Symmetry};
use umbral::moonshine::construct::build_candidates;
use umbral::moonshine::data::{polar_table, PolarEntry};
use umbral::moonshine::function::sample_points;
use umbral::moonshine::report::{emit_report, to_text, ReportFormat};
use umbral::moonshine::verify::{decompose_module, run_verification, VerifyOptions};
use umbral::moonshine::{load_lambency, synth, Lambency};
use umbral::numeric::io::{cyc_to_json, jacobi_from_json, jacobi_to_json, qexp_to_json, CoeffJson};
use umbral::numeric::linalg::CycMatrix;
use umbral::numeric::parse_rational;
use umbral::projective::decompose::{decompose_rows, GradedFile};
use umbral::projective::extension::ExtensionFile;
use umbral::projective::{char_table, filter_by_class, projective_table, ProjTableFile};
use umbral::{Error, Result};

#[derive(Parser)]
#[command(name = "umbral", version, about = "Twisted doubles, projective characters and umbral moonshine series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Commuting pairs and their SL2(Z)-orbits.
    Pairs {
        #[command(subcommand)]
        cmd: PairsCmd,
    },
    /// 3-cocycles, derived 2-cocycles and obstructions.
    Cocycle {
        #[command(subcommand)]
        cmd: CocycleCmd,
    },
    /// Projective character tables and decompositions.
    Proj {
        #[command(subcommand)]
        cmd: ProjCmd,
    },
    /// Representations and modular data of the twisted double.
    Double {
        #[command(subcommand)]
        cmd: DoubleCmd,
    },
    /// Theta functions, Appell-Lerch sums and the Weil representation.
    Jacobi {
        #[command(subcommand)]
        cmd: JacobiCmd,
    },
    /// The lambency pipeline.
    Moonshine {
        #[command(subcommand)]
        cmd: MoonshineCmd,
    },
}

#[derive(Args, Clone)]
struct Output {
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GroupCocycle {
    #[arg(long)]
    group: PathBuf,
    /// Omitted means trivial.
    #[arg(long)]
    cocycle: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PairsCmd {
    Classify {
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// Exit status 1 when the cochain is not a normalised 3-cocycle.
    Verify {
        #[command(flatten)]
        input: GroupCocycle,
        #[command(flatten)]
        out: Output,
    },
    /// `theta_g` on `C_G(g)`.
    Theta {
        #[command(flatten)]
        input: GroupCocycle,
        /// Element index or class name.
        #[arg(long)]
        g: String,
        #[command(flatten)]
        out: Output,
    },
    H3 {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = DEFAULT_H3_BOUND)]
        bound: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Obstruction phases for every commuting pair up to conjugation.
    Obstruct {
        #[command(flatten)]
        input: GroupCocycle,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum ProjCmd {
    /// The `theta_g`-projective table of `C_G(g)`.
    Table {
        #[command(flatten)]
        input: GroupCocycle,
        #[arg(long)]
        g: String,
        /// Central extension of the centraliser to filter instead of the spin construction.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    Decompose {
        /// Graded characters keyed by class name.
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        table: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Clone)]
enum DoubleCmd {
    Irreps(GroupCocycle),
    Chars(GroupCocycle),
    /// `S` and `T` in the character basis with the relation checks.
    Smatrix(GroupCocycle),
    /// Verlinde fusion coefficients.
    Fusion(GroupCocycle),
}

#[derive(Args, Clone)]
struct JacobiOpts {
    #[arg(long)]
    m: i64,
    #[arg(long, default_value = "5")]
    truncation: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand)]
enum JacobiCmd {
    /// `theta_{m,r}(tau, z)`, or the unary `theta^0_{m,r}` with `--unary`.
    Theta {
        #[command(flatten)]
        opts: JacobiOpts,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        unary: bool,
    },
    /// The Appell-Lerch sum `mu_m` in the annulus `|q| < |y| < 1`.
    Mu {
        #[command(flatten)]
        opts: JacobiOpts,
        #[arg(long, default_value_t = 4)]
        y_window: i64,
    },
    /// The polar part from a list of `{a, b, coeff}` entries.
    Polar {
        #[command(flatten)]
        opts: JacobiOpts,
        #[arg(long)]
        chi: PathBuf,
        #[arg(long, default_value_t = 4)]
        y_window: i64,
    },
    /// Theta coefficients of a Jacobi expansion.
    Decompose {
        #[command(flatten)]
        opts: JacobiOpts,
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value = "1/2")]
        weight: String,
    },
    /// `rho_m(gamma)` and its word in `S`, `T`.
    Weil {
        #[command(flatten)]
        opts: JacobiOpts,
        /// `a,b,c,d`.
        #[arg(long, value_parser = parse_sl2, allow_hyphen_values = true)]
        gamma: Sl2,
    },
    /// Numeric check of the Weil representation against the theta transformation.
    Check {
        #[command(flatten)]
        opts: JacobiOpts,
        #[arg(long, value_parser = parse_sl2, allow_hyphen_values = true)]
        gamma: Sl2,
        /// JSON list of `[tau_re, tau_im, z_re, z_im]`.
        #[arg(long)]
        samples: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct LambencyArg {
    #[arg(long)]
    lambency: PathBuf,
    /// Coefficients read per component.
    #[arg(long, default_value_t = 5)]
    coeffs: usize,
}

#[derive(Subcommand)]
enum MoonshineCmd {
    Load {
        #[command(flatten)]
        lam: LambencyArg,
    },
    /// Candidate functions on every orbit with their provenance.
    Build {
        #[command(flatten)]
        lam: LambencyArg,
        #[command(flatten)]
        out: Output,
    },
    /// Runs the six conditions; `--json` prints the full report.
    Verify {
        #[command(flatten)]
        lam: LambencyArg,
        #[arg(long)]
        json: bool,
    },
    /// Tables of `K^g` for one class or all of them.
    Decompose {
        #[command(flatten)]
        lam: LambencyArg,
        #[arg(long)]
        class: Option<String>,
    },
    /// Writes `report.json` and `report.txt`.
    Report {
        #[command(flatten)]
        lam: LambencyArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Writes one of the synthetic lambencies.
    Synth {
        #[arg(long, value_parser = ["z2-m1", "z2-m1-inconsistent", "z2-m1-half-shifts", "z2-m2"])]
        toy: String,
        #[arg(long)]
        out: PathBuf,
        /// Coefficients of the mock modular form for `z2-m2`.
        #[arg(long, default_value_t = 20)]
        len: usize,
    },
}

fn parse_sl2(s: &str) -> std::result::Result<Sl2, String> {
    let v: Vec<i64> = s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| e.to_string())).collect::<std::result::Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c, d] if a * d - b * c == 1 => Ok([*a, *b, *c, *d]),
        [_, _, _, _] => Err("determinant must be 1".into()),
        _ => Err("expected a,b,c,d".into()),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn emit<T: Serialize>(v: &T, out: &Output) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    match &out.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_group(path: &Path) -> Result<(Group, GroupFile)> {
    let file: GroupFile = read_json(path)?;
    Ok((file.build()?, file))
}

fn load_input(input: &GroupCocycle) -> Result<(Group, Cochain)> {
    let (group, _) = load_group(&input.group)?;
    let omega = match &input.cocycle {
        Some(p) => read_json::<CochainFile>(p)?.build(group.order())?,
        None => Cochain::trivial(3, group.order()),
    };
    Ok((group, omega))
}

/// An element index or the name of a class, resolved to its representative.
fn resolve_element(group: &Group, s: &str) -> Result<usize> {
    if let Ok(i) = s.parse::<usize>() {
        if i < group.order() {
            return Ok(i);
        }
        return Err(Error::Data(format!("element {i} outside the group")));
    }
    let classes = group.conjugacy_classes();
    let names = umbral::projective::chartable::default_class_names(group, &classes);
    names
        .iter()
        .position(|n| n == s)
        .map(|i| classes[i][0])
        .ok_or_else(|| Error::Data(format!("no class named {s}")))
}

fn matrix_json(m: &CycMatrix) -> Vec<Vec<CoeffJson>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(cyc_to_json).collect()).collect()
}

fn run_pairs(cmd: PairsCmd) -> Result<bool> {
    let PairsCmd::Classify { group, out } = cmd;
    let (g, file) = load_group(&group)?;
    let orbits = classify_pairs(&g, &file.center_n);
    let mut rows = Vec::new();
    for o in &orbits {
        let stab = stabilizer_group(&g, o.representative)?;
        rows.push(json!({ "orbit": o, "stabilizer": stab.name_or_unrecognized() }));
    }
    emit(&json!({ "group_order": g.order(), "orbits": rows }), &out)?;
    Ok(true)
}

fn run_cocycle(cmd: CocycleCmd) -> Result<bool> {
    match cmd {
        CocycleCmd::Verify { input, out } => {
            let (g, omega) = load_input(&input)?;
            let check = check_cocycle(&omega, &g, 24, 20_000, 0x5eed);
            emit(&check, &out)?;
            Ok(check.passed)
        }
        CocycleCmd::Theta { input, g, out } => {
            let (group, omega) = load_input(&input)?;
            let x = resolve_element(&group, &g)?;
            let t = theta_from_omega(&std::sync::Arc::new(omega), &group, x)?;
            let table: Vec<Vec<String>> = t.table(&group).iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
            emit(&json!({ "g": x, "centralizer": t.centralizer, "theta": table }), &out)?;
            Ok(true)
        }
        CocycleCmd::H3 { group, bound, out } => {
            let (g, _) = load_group(&group)?;
            let res = h3_compute(&g, bound)?;
            let reps: Vec<CochainFile> = res.representatives.iter().map(|c| CochainFile::from_cochain(c, Value::Null)).collect();
            emit(&json!({ "group_order": g.order(), "divisors": res.divisors, "representatives": reps }), &out)?;
            Ok(true)
        }
        CocycleCmd::Obstruct { input, out } => {
            let (g, omega) = load_input(&input)?;
            let canon = PairCanonicalizer::new(&g);
            let mut rows = Vec::new();
            let mut any = false;
            for p in canon.all_canonical_pairs() {
                let o = obstruction_check(&omega, &g, p)?;
                any |= o.is_obstructed();
                rows.push(json!({ "pair": p, "obstruction": o }));
            }
            emit(&json!({ "any_obstructed": any, "pairs": rows }), &out)?;
            Ok(true)
        }
    }
}

fn run_proj(cmd: ProjCmd) -> Result<bool> {
    match cmd {
        ProjCmd::Table { input, g, cover, out } => {
            let (group, omega) = load_input(&input)?;
            let x = resolve_element(&group, &g)?;
            let (c, embed) = group.subgroup(&group.centralizer(x))?;
            let theta = Cochain::from_fn(2, c.order(), |a| umbral::cohomology::theta::theta(&omega, &group, x, embed[a[0]], embed[a[1]]));
            let table = match cover {
                Some(p) => {
                    let ext = read_json::<ExtensionFile>(&p)?.build(&c)?;
                    filter_by_class(&ext, &char_table(&ext.cover)?, &theta)?
                }
                None => projective_table(&c, &theta)?,
            };
            emit(&ProjTableFile::from_table(&table), &out)?;
            Ok(true)
        }
        ProjCmd::Decompose { series, table, out } => {
            let table: ProjTableFile = read_json(&table)?;
            let graded: GradedFile = read_json(&series)?;
            let chars = graded.to_characters(&table.classes)?;
            let d = decompose_rows(&chars, &table.rows_on_classes()?)?;
            emit(&d.to_file(), &out)?;
            Ok(true)
        }
    }
}

fn run_double(cmd: DoubleCmd) -> Result<bool> {
    let input = match &cmd {
        DoubleCmd::Irreps(i) | DoubleCmd::Chars(i) | DoubleCmd::Smatrix(i) | DoubleCmd::Fusion(i) => i.clone(),
    };
    let (group, omega) = load_input(&input)?;
    let alg = DoubleAlgebra::new(group, omega)?;
    let labels = alg.irreducible_labels()?;
    let out = Output { out: None };
    let label_json = |l: &umbral::double::DoubleIrrepLabel| {
        json!({ "class": l.class_index, "g": l.g_a, "irrep": l.irrep_index, "dim": l.dim, "centralizer_order": l.base.order() })
    };
    match cmd {
        DoubleCmd::Irreps(_) => emit(&labels.iter().map(label_json).collect::<Vec<_>>(), &out)?,
        DoubleCmd::Chars(_) => {
            let rows: Vec<Value> = labels
                .iter()
                .map(|l| {
                    let ch = double_character(&alg, l);
                    let values: Vec<Value> = ch.values.iter().map(|((x, y), c)| json!([x, y, cyc_to_json(c)])).collect();
                    json!({ "label": label_json(l), "values": values })
                })
                .collect();
            emit(&rows, &out)?
        }
        DoubleCmd::Smatrix(_) => {
            let md = modular_data(&alg)?;
            emit(
                &json!({
                    "labels": md.labels.iter().map(label_json).collect::<Vec<_>>(),
                    "s": matrix_json(&md.s),
                    "t": matrix_json(&md.t),
                    "s2_equals_st3": md.st_relation_holds(),
                    "s4_identity": md.s4_is_identity(),
                }),
                &out,
            )?;
            return Ok(md.st_relation_holds() && md.s4_is_identity());
        }
        DoubleCmd::Fusion(_) => {
            let md = modular_data(&alg)?;
            let f = verlinde_fusion(&md.s)?;
            emit(&json!({ "n": f.n, "associative": f.is_associative() }), &out)?;
            return Ok(f.is_associative());
        }
    }
    Ok(true)
}

fn run_jacobi(cmd: JacobiCmd) -> Result<bool> {
    match cmd {
        JacobiCmd::Theta { opts, r, unary } => {
            let t = parse_rational(&opts.truncation)?;
            if unary {
                emit(&qexp_to_json(&unary_theta(opts.m, r, &t)), &opts.out)?;
            } else {
                emit(&jacobi_to_json(&theta_mr(opts.m, r, &t)), &opts.out)?;
            }
        }
        JacobiCmd::Mu { opts, y_window } => {
            let t = parse_rational(&opts.truncation)?;
            let f = AppellLerchSum::mu(opts.m).expand(&t).annulus_expansion(y_window);
            emit(&jacobi_to_json(&f), &opts.out)?;
        }
        JacobiCmd::Polar { opts, chi, y_window } => {
            let t = parse_rational(&opts.truncation)?;
            let entries: Vec<PolarEntry> = read_json(&chi)?;
            let f = polar_part(opts.m, &polar_table(&entries)?, &t)?.annulus_expansion(y_window);
            emit(&jacobi_to_json(&f), &opts.out)?;
        }
        JacobiCmd::Decompose { opts, series, weight } => {
            let phi = jacobi_from_json(&read_json(&series)?)?;
            if phi.index() != opts.m {
                return Err(Error::Data(format!("series has index {}, expected {}", phi.index(), opts.m)));
            }
            let h = theta_decompose(&phi, parse_rational(&weight)?, Symmetry::Unspecified)?;
            let comps: Vec<Value> = (0..2 * h.m).map(|r| json!({ "r": r, "h": qexp_to_json(h.component(r)) })).collect();
            emit(&comps, &opts.out)?;
        }
        JacobiCmd::Weil { opts, gamma } => {
            let w = weil_rep(opts.m, &gamma)?;
            emit(&json!({ "m": opts.m, "gamma": gamma, "word": w.word.render(), "matrix": matrix_json(&w.matrix) }), &opts.out)?;
        }
        JacobiCmd::Check { opts, gamma, samples } => {
            let points: Vec<(Complex64, Complex64)> = match samples {
                Some(p) => read_json::<Vec<[f64; 4]>>(&p)?.iter().map(|s| (Complex64::new(s[0], s[1]), Complex64::new(s[2], s[3]))).collect(),
                None => sample_points(),
            };
            let t: f64 = num::ToPrimitive::to_f64(&parse_rational(&opts.truncation)?).unwrap_or(25.0);
            let w = weil_rep(opts.m, &gamma)?;
            let report = weil_check(opts.m, &gamma, &w.matrix, &points, t)?;
            emit(&report, &opts.out)?;
            return Ok(report.passes(1e-8));
        }
    }
    Ok(true)
}

fn class_elements(lam: &Lambency, class: &Option<String>) -> Result<Vec<usize>> {
    match class {
        Some(name) => lam
            .class_names
            .iter()
            .position(|n| n == name)
            .map(|i| vec![lam.classes[i][0]])
            .ok_or_else(|| Error::Data(format!("no class named {name}"))),
        None => Ok(lam.classes.iter().map(|c| c[0]).collect()),
    }
}

fn run_moonshine(cmd: MoonshineCmd) -> Result<bool> {
    let opts = |l: &LambencyArg| VerifyOptions { n_coeffs: l.coeffs };
    match cmd {
        MoonshineCmd::Load { lam } => {
            let l = load_lambency(&lam.lambency)?;
            emit(
                &json!({
                    "lambency": l.config.label,
                    "index": l.index(),
                    "group_order": l.group().order(),
                    "classes": l.class_names,
                    "center_n": l.center_n(),
                    "cocycle_check": l.cocycle_check,
                    "twisted_series": l.twisted.len(),
                    "covers": l.covers.keys().collect::<Vec<_>>(),
                }),
                &Output { out: None },
            )?;
            Ok(true)
        }
        MoonshineCmd::Build { lam, out } => {
            let l = load_lambency(&lam.lambency)?;
            let canon = PairCanonicalizer::new(l.group());
            let set = build_candidates(&l, &canon)?;
            let known: Vec<Value> = set.store.known.iter().map(|(p, c)| json!({ "pair": p, "provenance": c.provenance })).collect();
            let orbits: Vec<Value> = set
                .orbits
                .iter()
                .map(|e| {
                    json!({
                        "representative": e.orbit.representative,
                        "is_old": e.orbit.is_old,
                        "candidate": e.candidate.as_ref().map(|c| json!({ "pair": c.pair, "provenance": c.provenance })),
                        "new_function": e.new_function.as_ref().map(|r| &r.result),
                    })
                })
                .collect();
            emit(&json!({ "functions": known, "orbits": orbits, "z_twists": set.z_twists, "transport_checks": set.transport_checks }), &out)?;
            Ok(true)
        }
        MoonshineCmd::Verify { lam, json } => {
            let l = load_lambency(&lam.lambency)?;
            let report = run_verification(&l, &opts(&lam))?;
            if json {
                emit(&report, &Output { out: None })?;
            } else {
                print!("{}", to_text(&report));
            }
            Ok(!report.any_failure())
        }
        MoonshineCmd::Decompose { lam, class } => {
            let l = load_lambency(&lam.lambency)?;
            let mut ok = true;
            for g in class_elements(&l, &class)? {
                let res = decompose_module(&l, g, lam.coeffs)?;
                ok &= res.is_integral();
                println!("{}", res.render(&l));
                for i in &res.characters.issues {
                    println!("  issue: {i}");
                }
            }
            Ok(ok)
        }
        MoonshineCmd::Report { lam, out } => {
            let l = load_lambency(&lam.lambency)?;
            let report = run_verification(&l, &opts(&lam))?;
            for p in emit_report(&report, &[ReportFormat::Json, ReportFormat::Text], &out)? {
                println!("{}", p.display());
            }
            Ok(!report.any_failure())
        }
        MoonshineCmd::Synth { toy, out, len } => {
            let files = match toy.as_str() {
                "z2-m1" => synth::toy_z2_m1(true),
                "z2-m1-inconsistent" => synth::toy_z2_m1(false),
                "z2-m1-half-shifts" => synth::toy_z2_m1_half_shifts(true),
                _ => synth::toy_z2_m2(len),
            };
            files.write(&out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Pairs { cmd } => run_pairs(cmd),
        Command::Cocycle { cmd } => run_cocycle(cmd),
        Command::Proj { cmd } => run_proj(cmd),
        Command::Double { cmd } => run_double(cmd),
        Command::Jacobi { cmd } => run_jacobi(cmd),
        Command::Moonshine { cmd } => run_moonshine(cmd),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
