//! One line per acceptance criterion with its runtime against the budget.
//! Criterion 11 reads lambency directories from `UMBRAL_LAMBENCY_DIRS`
//! (separated by `:`); without it the criterion is reported as not applicable.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use umbral::cohomology::theta::{eta, theta};
use umbral::cohomology::{h3_compute, Cochain};
use umbral::double::{conj_covariance_check, double_character, modular_data, verlinde_fusion, DoubleAlgebra};
use umbral::groups::small::{abelian, cyclic, quaternion, symmetric};
use umbral::groups::{Group, Sl2};
use umbral::jacobi::numeric::balanced_point;
use umbral::jacobi::{minimal_rep, theta_decompose, theta_recompose, weil_check, weil_rep, AppellLerchSum, Symmetry, VectorValuedForm};
use umbral::moonshine::construct::build_candidates;
use umbral::moonshine::synth::{synth_files, toy_z2_m1, toy_z2_m2, SynthSpec};
use umbral::moonshine::verify::{decompose_module, run_verification, Verdict, VerifyOptions, CONDITIONS};
use umbral::moonshine::{build_lambency, load_lambency, Lambency, LambencyFiles};
use umbral::groups::pairs::PairCanonicalizer;
use umbral::numeric::{rat, Cyclotomic, Phase, QExpansion};
use umbral::projective::decompose::{decompose_rows, ModuleDecomposition};
use umbral::projective::extension::{filter_by_class, CentralExtension};
use umbral::projective::{char_table, projective_table};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn test_groups() -> Vec<(&'static str, Group)> {
    vec![
        ("Z2", cyclic(2)),
        ("Z3", cyclic(3)),
        ("Z4", cyclic(4)),
        ("Z2xZ2", abelian(&[2, 2])),
        ("S3", symmetric(3)),
        ("Q8", quaternion()),
    ]
}

/// Every class `sum k_i w_i` of `H^3` from the invariant-factor representatives.
fn all_classes(g: &Group) -> Vec<Cochain> {
    let h = h3_compute(g, 16).expect("h3");
    let mut out = vec![Cochain::trivial(3, g.order())];
    for (w, d) in h.representatives.iter().zip(&h.divisors) {
        out = out.iter().flat_map(|c| (0..*d as i64).map(move |k| c.add(&w.scale(k)))).collect();
    }
    out
}

fn random_normalised(rng: &mut ChaCha8Rng, arity: usize, order: usize) -> Cochain {
    Cochain::from_fn(arity, order, |a| if a.contains(&0) { Phase::new(0, 1) } else { Phase::new(rng.gen_range(0..60), 60) })
}

/// `(d c)(g_1..g_{n+1}) = c(g_2..) prod_i c(..g_i g_(i+1)..)^((-1)^i) c(g_1..g_n)^((-1)^(n+1))`.
fn coboundary_oracle(c: &Cochain, g: &Group, args: &[usize]) -> Phase {
    let n = c.arity();
    let mut acc = c.get(&args[1..]);
    for i in 0..n {
        let mut merged: Vec<usize> = args[..i].to_vec();
        merged.push(g.mul(args[i], args[i + 1]));
        merged.extend_from_slice(&args[i + 2..]);
        let v = c.get(&merged);
        acc = if i % 2 == 0 { acc + v.inv() } else { acc + v };
    }
    let last = c.get(&args[..n]);
    if n % 2 == 0 {
        acc + last.inv()
    } else {
        acc + last
    }
}

fn tuples(order: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![vec![]], |acc, _| acc.into_iter().flat_map(|t| (0..order).map(move |x| [t.clone(), vec![x]].concat())).collect())
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for (name, g) in test_groups() {
        for arity in [1, 2] {
            for _ in 0..100 {
                let c = random_normalised(&mut rng, arity, g.order());
                let d = c.coboundary(&g);
                for t in tuples(g.order(), arity + 1) {
                    ensure(d.get(&t) == coboundary_oracle(&c, &g, &t), || format!("{name}: coboundary differs from the oracle at {t:?}"))?;
                }
                let dd = d.coboundary(&g);
                for t in tuples(g.order(), arity + 2) {
                    ensure(dd.get(&t).is_one() && coboundary_oracle(&d, &g, &t).is_one(), || format!("{name}: dd != 1 at {t:?}"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} cochains"))
}

fn criterion_2() -> Outcome {
    let expect: [(&str, Group, Vec<u64>); 4] =
        [("Z2", cyclic(2), vec![2]), ("Z3", cyclic(3), vec![3]), ("Z4", cyclic(4), vec![4]), ("Z2xZ2", abelian(&[2, 2]), vec![2, 2, 2])];
    let mut parts = Vec::new();
    for (name, g, d) in expect {
        let h = h3_compute(&g, 16).map_err(|e| e.to_string())?;
        ensure(h.divisors == d, || format!("{name}: divisors {:?}, expected {d:?}", h.divisors))?;
        for (w, n) in h.representatives.iter().zip(&h.divisors) {
            let bad = tuples(g.order(), 4).into_iter().find(|t| !coboundary_oracle(w, &g, t).is_one());
            ensure(bad.is_none(), || format!("{name}: representative not a cocycle at {bad:?}"))?;
            ensure(w.denominator_lcm() % n == 0, || format!("{name}: representative of order below {n}"))?;
        }
        parts.push(format!("{name} {d:?}"));
    }
    Ok(parts.join(", "))
}

fn criterion_3() -> Outcome {
    let groups = [("Z2", cyclic(2)), ("Z3", cyclic(3)), ("Z4", cyclic(4)), ("Z2xZ2", abelian(&[2, 2]))];
    let mut n = 0;
    for (name, g) in groups {
        for w in h3_compute(&g, 16).map_err(|e| e.to_string())?.representatives {
            for x in 0..g.order() {
                let c = g.centralizer(x);
                for &a in &c {
                    for &b in &c {
                        ensure(theta(&w, &g, x, a, b) == eta(&w, &g, x, a, b), || format!("{name}: theta != eta at g={x}, ({a}, {b})"))?;
                        for &d in &c {
                            let lhs = theta(&w, &g, x, a, b) + theta(&w, &g, x, g.mul(a, b), d);
                            let rhs = theta(&w, &g, x, b, d) + theta(&w, &g, x, a, g.mul(b, d));
                            ensure(lhs == rhs, || format!("{name}: theta_{x} fails the 2-cocycle identity at ({a}, {b}, {d})"))?;
                        }
                    }
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} (cocycle, g) pairs"))
}

fn criterion_4() -> Outcome {
    let mut n = 0;
    for (name, g) in test_groups() {
        for w in all_classes(&g) {
            let md = modular_data(&DoubleAlgebra::new(g.clone(), w).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let (s, t) = (&md.s, &md.t);
            let st = s.mul(t);
            ensure(s.mul(s) == st.mul(&st).mul(&st), || format!("{name}: S^2 != (ST)^3"))?;
            ensure(s.mul(s).mul(s).mul(s).is_identity(), || format!("{name}: S^4 != 1"))?;
            n += 1;
        }
    }
    Ok(format!("{n} doubles"))
}

fn criterion_5() -> Outcome {
    let mut n = 0;
    for (name, g) in test_groups() {
        for w in all_classes(&g) {
            let alg = DoubleAlgebra::new(g.clone(), w).map_err(|e| e.to_string())?;
            for label in alg.irreducible_labels().map_err(|e| e.to_string())? {
                let ch = double_character(&alg, &label);
                let v = conj_covariance_check(&ch, &alg);
                ensure(v.is_empty(), || format!("{name}: {} covariance violations, first {:?}", v.len(), v[0]))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} irreps"))
}

fn criterion_6() -> Outcome {
    let z2 = cyclic(2);
    let mut nontrivial = Cochain::trivial(3, 2);
    nontrivial.set(&[1, 1, 1], Phase::new(1, 2));
    let cases = [("D(Z2)", z2.clone(), Cochain::trivial(3, 2)), ("D^w(Z2)", z2, nontrivial), ("D(S3)", symmetric(3), Cochain::trivial(3, 6))];
    let mut parts = Vec::new();
    for (name, g, w) in cases {
        let md = modular_data(&DoubleAlgebra::new(g, w).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let f = verlinde_fusion(&md.s).map_err(|e| format!("{name}: {e}"))?;
        let r = f.n.len();
        ensure(f.n.iter().flatten().flatten().all(|&x| x >= 0), || format!("{name}: negative fusion coefficient"))?;
        for i in 0..r {
            for j in 0..r {
                ensure(f.n[0][i][j] == (i == j) as i64, || format!("{name}: vacuum is not the unit"))?;
                for k in 0..r {
                    for l in 0..r {
                        let a: i64 = (0..r).map(|m| f.n[i][j][m] * f.n[m][k][l]).sum();
                        let b: i64 = (0..r).map(|m| f.n[j][k][m] * f.n[i][m][l]).sum();
                        ensure(a == b, || format!("{name}: not associative at ({i}, {j}, {k}, {l})"))?;
                    }
                }
            }
        }
        parts.push(format!("{name} rank {r}"));
    }
    Ok(parts.join(", "))
}

fn random_form(rng: &mut ChaCha8Rng, m: i64, t: i64) -> VectorValuedForm {
    let mut h = VectorValuedForm::zero(m, rat(1, 2), &rat(0, 1), Symmetry::Unspecified);
    for r in 0..2 * m {
        let rho = minimal_rep(m, r);
        let tr = rat(t, 1) - rat(rho * rho, 4 * m);
        let mut q = QExpansion::new(tr.clone(), 4 * m as u64);
        for n in -1..t {
            let e = rat(-r * r, 4 * m) + rat(n, 1);
            if e < tr && rng.gen_bool(0.7) {
                q.add_term(e, Cyclotomic::from_int(rng.gen_range(-9..10)));
            }
        }
        *h.component_mut(r) = q;
    }
    h
}

fn criterion_7() -> Outcome {
    let t = rat(10, 1);
    for m in 1..=4 {
        let mu = AppellLerchSum::mu(m);
        let base = mu.expand(&t);
        for (l, u) in [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (2, -1)] {
            let shifted = mu.elliptic_act(&rat(l, 1), &rat(u, 1)).map_err(|e| e.to_string())?;
            // The shifted sum is expanded from its own terms, not reduced first.
            ensure(shifted.terms[0].1 == rat(l, 1), || "shift was reduced before expansion".into())?;
            ensure(shifted.expand(&t).agrees_with(&base), || format!("m = {m}: mu|({l},{u}) differs from mu below q^10"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..50 {
        let m = 1 + trial % 4;
        let h = random_form(&mut rng, m, 4);
        let back = theta_decompose(&theta_recompose(&h).map_err(|e| e.to_string())?, rat(1, 2), Symmetry::Unspecified).map_err(|e| e.to_string())?;
        ensure(back.agrees_with(&h), || format!("roundtrip {trial} (m = {m}) differs"))?;
    }
    Ok("m = 1..4 invariant; 50 roundtrips".into())
}

fn random_sl2(rng: &mut ChaCha8Rng, bound: i64) -> Sl2 {
    loop {
        let a: i64 = rng.gen_range(-bound..=bound);
        let c: i64 = rng.gen_range(-bound..=bound);
        if num::integer::gcd(a, c) != 1 || c == 0 {
            continue;
        }
        let e = num::integer::Integer::extended_gcd(&a, &c);
        let k = rng.gen_range(-2..=2);
        let (d, b) = (e.x * e.gcd + k * c, -e.y * e.gcd + k * a);
        if b.abs() <= bound && d.abs() <= bound && a * d - b * c == 1 {
            return [a, b, c, d];
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for m in 1..=3 {
        for _ in 0..10 {
            let g = random_sl2(&mut rng, 20);
            let rho = weil_rep(m, &g).map_err(|e| e.to_string())?;
            let pts: Vec<(Complex64, Complex64)> =
                [-0.4, -0.2, 0.0, 0.2, 0.4].iter().map(|s| (balanced_point(&g, *s), Complex64::new(0.07, -0.05))).collect();
            let r = weil_check(m, &g, &rho.matrix, &pts, 25.0).map_err(|e| e.to_string())?;
            worst = worst.max(r.max_deviation);
            ensure(r.passes(1e-8), || format!("m = {m}, gamma = {g:?}: deviation {:.2e}, bound {:.2e}", r.max_deviation, r.max_error_bound))?;
        }
    }
    Ok(format!("30 matrices, max deviation {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let base = abelian(&[2, 2]);
    let gens = base.generators().to_vec();
    let ext = CentralExtension::new(quaternion(), base.clone(), &gens).map_err(|e| e.to_string())?;
    let table = char_table(&ext.cover).map_err(|e| e.to_string())?;
    let (a, b) = (gens[0], gens[1]);
    let coords = |x: usize| (0..4).map(|k| (k / 2, k % 2)).find(|&(i, j)| base.mul(base.pow(a, i), base.pow(b, j)) == x).unwrap();
    let pairing = Cochain::from_fn(2, 4, |t| Phase::new(coords(t[0]).0 * coords(t[1]).1, 2));
    let twisted = filter_by_class(&ext, &table, &pairing).map_err(|e| e.to_string())?;
    ensure(twisted.dims == [2], || format!("nontrivial pairing gives dims {:?}", twisted.dims))?;
    let plain = filter_by_class(&ext, &table, &Cochain::trivial(2, 4)).map_err(|e| e.to_string())?;
    ensure(plain.dims == [1, 1, 1, 1], || format!("trivial pairing gives dims {:?}", plain.dims))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let groups = [symmetric(3), quaternion(), abelian(&[2, 2])];
    for trial in 0..100 {
        let g = &groups[trial % 3];
        let t = projective_table(g, &Cochain::trivial(2, g.order())).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<Cyclotomic>> = (0..t.len()).map(|i| t.row_on_classes(i)).collect();
        let mults: Vec<i64> = (0..t.len()).map(|_| rng.gen_range(0..100)).collect();
        let chars: BTreeMap<_, _> = [((1, rat(7, 8)), (0..rows[0].len())
            .map(|c| rows.iter().zip(&mults).fold(Cyclotomic::zero(), |acc, (row, k)| &acc + &(&row[c] * &Cyclotomic::from_int(*k))))
            .collect::<Vec<_>>())]
        .into_iter()
        .collect();
        let d: ModuleDecomposition = decompose_rows(&chars, &rows).map_err(|e| e.to_string())?;
        ensure(d.multiplicities[&(1, rat(7, 8))] == mults, || format!("trial {trial}: decompose(compose(m)) != m"))?;
    }
    Ok("Q8 cover: [2] and [1,1,1,1]; 100 roundtrips".into())
}

fn failures(lam: &Lambency) -> Result<Vec<String>, String> {
    let r = run_verification(lam, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for o in &r.orbits {
        for c in CONDITIONS {
            if o.conditions.get(c).map(|s| s.status) != Some(Verdict::Pass) {
                out.push(format!("({}, {}) {c}", o.label.0, o.label.1));
            }
        }
    }
    Ok(out)
}

fn criterion_10() -> Outcome {
    let lam = build_lambency(&toy_z2_m1(true)).map_err(|e| e.to_string())?;
    let bad = failures(&lam)?;
    ensure(bad.is_empty(), || format!("consistent toy: {bad:?} not passing"))?;

    let lam = build_lambency(&toy_z2_m1(false)).map_err(|e| e.to_string())?;
    let r = run_verification(&lam, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    let flagged: Vec<_> = r.orbits.iter().filter(|o| o.obstructed_by_data && o.forced_zero).collect();
    ensure(!flagged.is_empty() && r.any_failure(), || "inconsistent variant not flagged".into())?;

    let mut dims = Vec::new();
    let v4 = abelian(&[2, 2]);
    let omega = Cochain::trivial(3, 4);
    let mut corpora: Vec<LambencyFiles> = vec![toy_z2_m1(true), toy_z2_m1(false)];
    for m in 1..=3 {
        corpora.push(synth_files(&SynthSpec { label: "v4", index: m, group: &v4, center_n: &[], omega: &omega, truncation: rat(4, 1), untwisted: BTreeMap::new() }));
    }
    for files in &corpora {
        let lam = build_lambency(files).map_err(|e| e.to_string())?;
        let canon = PairCanonicalizer::new(lam.group());
        let set = build_candidates(&lam, &canon).map_err(|e| e.to_string())?;
        for e in &set.orbits {
            if let Some(nf) = &e.new_function {
                dims.push(nf.dimension);
            }
        }
    }
    ensure(dims.iter().all(|&d| d <= 1), || format!("eigenspace dimensions {dims:?}"))?;
    Ok(format!("flagged {} orbit(s); {} new-function eigenspaces, dims {:?}", flagged.len(), dims.len(), dims))
}

fn integral_tables(lam: &Lambency) -> Result<usize, String> {
    let mut n = 0;
    for c in &lam.classes {
        let res = decompose_module(lam, c[0], 5).map_err(|e| e.to_string())?;
        ensure(res.is_integral(), || {
            format!("K^({}) not integral: {:?} {:?}", lam.class_name_of(c[0]), res.decomposition.as_ref().err(), res.characters.issues)
        })?;
        n += 1;
    }
    Ok(n)
}

fn criterion_11() -> Result<Option<String>, String> {
    let Ok(dirs) = std::env::var("UMBRAL_LAMBENCY_DIRS") else {
        return Ok(None);
    };
    let mut parts = Vec::new();
    for dir in dirs.split(':').filter(|d| !d.is_empty()) {
        let lam = load_lambency(std::path::Path::new(dir)).map_err(|e| format!("{dir}: {e}"))?;
        let n = integral_tables(&lam).map_err(|e| format!("{dir}: {e}"))?;
        parts.push(format!("{} ({n} twists)", lam.config.label));
    }
    Ok(Some(parts.join(", ")))
}

fn main() {
    let criteria: Vec<(u32, u64, fn() -> Outcome)> = vec![
        (1, 10, criterion_1),
        (2, 60, criterion_2),
        (3, 30, criterion_3),
        (4, 120, criterion_4),
        (5, 120, criterion_5),
        (6, 30, criterion_6),
        (7, 60, criterion_7),
        (8, 120, criterion_8),
        (9, 30, criterion_9),
        (10, 60, criterion_10),
    ];
    let mut failed = 0;
    for (n, budget, f) in criteria {
        let start = Instant::now();
        let out = f();
        let dt = start.elapsed();
        let over = dt > Duration::from_secs(budget);
        let (verdict, detail) = match (&out, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {n:>2}: {verdict}  {:.2}s / {budget}s  {detail}", dt.as_secs_f64());
    }

    let start = Instant::now();
    match criterion_11() {
        Ok(None) => {
            let stand_in = build_lambency(&toy_z2_m2(12)).map_err(|e| e.to_string()).and_then(|l| integral_tables(&l));
            println!(
                "criterion 11: N/A   {:.2}s  no lambency data (set UMBRAL_LAMBENCY_DIRS); synthetic Z/2 m = 2 stand-in {}",
                start.elapsed().as_secs_f64(),
                match stand_in {
                    Ok(n) => format!("integral on {n} twists"),
                    Err(e) => format!("failed: {e}"),
                }
            );
        }
        Ok(Some(d)) => println!("criterion 11: PASS  {:.2}s  {d}", start.elapsed().as_secs_f64()),
        Err(e) => {
            failed += 1;
            println!("criterion 11: FAIL  {:.2}s  {e}", start.elapsed().as_secs_f64());
        }
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
