//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use braidcheck::catalog;
use braidcheck::numerics::ONE;
use braidcheck::report::DEFAULT_SEED;
use braidcheck::{
    canonical_twist, check_hexagons, enumerate_ribbon_structures, modular_data, quantum_dims, run_report,
    select_unitary_ribbon, sign_characters, solve_braidings, Error, GaugeTransformation, Model, RSymbolTable,
    RunOptions, Tolerance, Verdict, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const UNITARY: [&str; 8] = [
    "trivial",
    "z2_pointed",
    "semion",
    "svec",
    "z3_pointed",
    "toric_code",
    "fibonacci",
    "ising",
];
const STARTS: usize = 64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(name: &str) -> Result<Model, String> {
    catalog::model(name).map_err(|e| format!("{name}: {e}"))
}

fn braidings(m: &Model) -> Vec<RSymbolTable> {
    solve_braidings(&m.f, STARTS, DEFAULT_SEED, &Tolerance::default())
}

fn coherence_floor() -> Outcome {
    let start = Instant::now();
    for name in catalog::names() {
        let m = load(name)?;
        let violations = m.ring.validate();
        ensure(violations.is_empty(), || format!("{name}: {} ring violations", violations.len()))?;
        let p = m.f.check_pentagon();
        ensure(p < 1e-9, || format!("{name}: pentagon residual {p:e}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("9 models in {elapsed:.2?}"))
}

fn unitary_gauge_classification() -> Outcome {
    for name in UNITARY {
        let dev = load(name)?.f.check_f_unitarity();
        ensure(dev <= 1e-9, || format!("{name}: deviation {dev:e}"))?;
    }
    let dev = load("yang_lee")?.f.check_f_unitarity();
    ensure(dev > 0.1, || format!("yang_lee: deviation {dev:e}"))?;
    Ok(format!("yang_lee deviation {dev:.4}"))
}

fn braidings_are_unitary() -> Outcome {
    let expected = [
        ("trivial", 1),
        ("z2_pointed", 2),
        ("semion", 2),
        ("svec", 2),
        ("z3_pointed", 3),
        ("toric_code", 16),
        ("fibonacci", 2),
        ("ising", 4),
    ];
    let mut total = 0;
    for (name, count) in expected {
        let m = load(name)?;
        let start = Instant::now();
        let found = braidings(&m);
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(60), || format!("{name}: took {elapsed:?}"))?;
        ensure(found.len() == count, || format!("{name}: {} braidings, expected {count}", found.len()))?;
        for r in &found {
            let h = check_hexagons(&m.f, r);
            ensure(h <= 1e-9, || format!("{name}: hexagon residual {h:e}"))?;
            let dev = r.check_braiding_unitarity();
            ensure(dev <= 1e-6, || format!("{name}: unitarity deviation {dev:e}"))?;
        }
        total += found.len();
    }
    Ok(format!("{total} braidings, all unitary"))
}

fn torsor() -> Outcome {
    let tol = Tolerance::default();
    let pinned = [("fibonacci", 1), ("ising", 2), ("z2_pointed", 2)];
    for name in catalog::names() {
        let m = load(name)?;
        let signs = sign_characters(&m.ring);
        if let Some((_, n)) = pinned.iter().find(|(p, _)| *p == name) {
            ensure(signs.len() == *n, || format!("{name}: {} sign characters", signs.len()))?;
        }
        for r in braidings(&m) {
            let seed = canonical_twist(&m.ring, &r, &tol).map_err(|e| format!("{name}: {e}"))?;
            let all = enumerate_ribbon_structures(&m.ring, &r, &seed, &tol).map_err(|e| format!("{name}: {e}"))?;
            ensure(all.len() == signs.len(), || format!("{name}: {} ribbon structures", all.len()))?;
            for x in &all {
                for y in &all {
                    let ratio: Vec<C64> = x.twist.theta.iter().zip(&y.twist.theta).map(|(a, b)| b / a).collect();
                    let listed = signs.iter().any(|s| {
                        s.gamma
                            .iter()
                            .zip(&ratio)
                            .all(|(&g, q)| (q - C64::new(f64::from(g), 0.0)).norm() <= tol.eq_tol)
                    });
                    ensure(listed, || format!("{name}: twist ratio {ratio:?} is not a sign character"))?;
                }
            }
            let base = &all[0];
            for s in &all {
                for ((d, d0), &g) in s.dims.iter().zip(&base.dims).zip(&s.sign.gamma) {
                    let err = (d - d0 * f64::from(g)).norm();
                    ensure(err <= 1e-9, || format!("{name}: dims do not scale by the sign ({err:e})"))?;
                }
            }
        }
    }
    Ok("every braiding of every model".into())
}

fn unique_unitary_ribbon() -> Outcome {
    let tol = Tolerance::default();
    let mut checked = 0;
    for name in UNITARY {
        let m = load(name)?;
        let fp = m.ring.fp_dimensions().map_err(|e| e.to_string())?;
        for r in braidings(&m) {
            let seed = canonical_twist(&m.ring, &r, &tol).map_err(|e| format!("{name}: {e}"))?;
            let all = enumerate_ribbon_structures(&m.ring, &r, &seed, &tol).map_err(|e| e.to_string())?;
            let i = select_unitary_ribbon(&m.ring, &all, true, &tol).map_err(|e| format!("{name}: {e}"))?;
            let chosen = &all[i];
            for (d, f) in chosen.dims.iter().zip(&fp) {
                let err = (d - C64::new(*f, 0.0)).norm();
                ensure(err <= 1e-7, || format!("{name}: dim {d} vs FP {f}"))?;
            }
            let dev = chosen.twist.unitarity_defect();
            ensure(dev <= 1e-9, || format!("{name}: twist deviation {dev:e}"))?;
            checked += 1;
        }
    }
    let m = load("yang_lee")?;
    let found = braidings(&m);
    ensure(!found.is_empty(), || "yang_lee: no braidings".into())?;
    for r in &found {
        let seed = canonical_twist(&m.ring, r, &tol).map_err(|e| e.to_string())?;
        let all = enumerate_ribbon_structures(&m.ring, r, &seed, &tol).map_err(|e| e.to_string())?;
        let d = all[0].dims[1];
        ensure((d.re - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-9, || format!("yang_lee: d_tau = {d}"))?;
        let got = select_unitary_ribbon(&m.ring, &all, false, &tol);
        ensure(got == Err(Error::NoUnitaryRibbon), || format!("yang_lee: {got:?}"))?;
    }
    for name in catalog::names() {
        let report = run_report(&load(name)?, &RunOptions::default());
        ensure(report.exit_code != 4, || format!("{name}: theorem violation {:?}", report.errors))?;
        let expected = if name == "yang_lee" { 2 } else { 0 };
        ensure(report.exit_code == expected, || format!("{name}: exit {}", report.exit_code))?;
    }
    Ok(format!("{checked} unitary braidings; yang_lee has none"))
}

fn modular_remark() -> Outcome {
    let tol = Tolerance::default();
    let verdicts = [
        ("fibonacci", Verdict::Modular),
        ("ising", Verdict::Modular),
        ("semion", Verdict::Modular),
        ("toric_code", Verdict::Modular),
        ("z2_pointed", Verdict::Degenerate),
        ("svec", Verdict::Degenerate),
    ];
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    for name in catalog::names() {
        let m = load(name)?;
        let r = m.r.clone().ok_or_else(|| format!("{name}: catalog entry has no braiding"))?;
        let seed = canonical_twist(&m.ring, &r, &tol).map_err(|e| e.to_string())?;
        let all = enumerate_ribbon_structures(&m.ring, &r, &seed, &tol).map_err(|e| e.to_string())?;
        let i = select_unitary_ribbon(&m.ring, &all, m.f.is_unitary_gauge(&tol), &tol).unwrap_or(0);
        let data = modular_data(&m.ring, &all[i], &tol);
        for (b, d) in all[i].dims.iter().enumerate() {
            let err = (data.s_tilde[(0, b)] - d).norm();
            ensure(err <= 1e-9, || format!("{name}: first row differs from dims at {b}"))?;
        }
        if let Some((_, v)) = verdicts.iter().find(|(n, _)| *n == name) {
            ensure(data.verdict == *v, || format!("{name}: verdict {:?}", data.verdict))?;
        }
        if name == "fibonacci" {
            let expected = [[1.0, golden], [golden, -1.0]];
            for (a, row) in expected.iter().enumerate() {
                for (b, e) in row.iter().enumerate() {
                    let err = (data.s_tilde[(a, b)] - C64::new(*e, 0.0)).norm();
                    ensure(err <= 1e-7, || format!("fibonacci S~[{a},{b}] = {}", data.s_tilde[(a, b)]))?;
                }
            }
        }
    }
    Ok("S~ pinned for fibonacci; 6 verdicts".into())
}

fn gauge_invariance() -> Outcome {
    let tol = Tolerance::default();
    let bound = 10.0 * tol.eq_tol;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut total = 0;
    for name in catalog::names() {
        let m = load(name)?;
        let ring = &m.ring;
        let r = m.r.clone().ok_or_else(|| format!("{name}: no braiding"))?;
        let twist = canonical_twist(ring, &r, &tol).map_err(|e| e.to_string())?;
        let dims = quantum_dims(ring, &r, &twist, &tol).map_err(|e| e.to_string())?;
        for k in 0..100 {
            let g = GaugeTransformation::random(ring, &mut rng, k % 2 == 0);
            let f2 = m.f.apply_gauge(&g).map_err(|e| e.to_string())?;
            let r2 = r.apply_gauge(&g).map_err(|e| e.to_string())?;
            ensure(f2.check_pentagon() <= bound, || format!("{name}: pentagon after gauge {k}"))?;
            ensure(check_hexagons(&f2, &r2) <= bound, || format!("{name}: hexagons after gauge {k}"))?;
            for (a, b, c) in ring.admissible_triples() {
                let before = r.monodromy(a, b, c).map_err(|e| e.to_string())?;
                let after = r2.monodromy(a, b, c).map_err(|e| e.to_string())?;
                ensure((before - after).norm() <= bound, || format!("{name}: monodromy moved"))?;
            }
            let t2 = canonical_twist(ring, &r2, &tol).map_err(|e| format!("{name}: {e}"))?;
            for (x, y) in twist.theta.iter().zip(&t2.theta) {
                ensure((x - y).norm() <= bound, || format!("{name}: twist moved under gauge {k}"))?;
            }
            let d2 = quantum_dims(ring, &r2, &t2, &tol).map_err(|e| e.to_string())?;
            for (x, y) in dims.iter().zip(&d2) {
                ensure((x - y).norm() <= bound, || format!("{name}: dims moved under gauge {k}"))?;
            }
            total += 1;
        }
        ensure(twist.theta[0] == ONE, || format!("{name}: unit twist"))?;
    }
    Ok(format!("{total} gauges"))
}

fn determinism() -> Outcome {
    for name in catalog::names() {
        let m = load(name)?;
        let opts = RunOptions::default();
        let a = run_report(&m, &opts).to_json();
        let b = run_report(&load(name)?, &opts).to_json();
        ensure(a == b, || format!("{name}: reports differ"))?;
    }
    Ok("identical JSON for all 9 models".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("coherence floor", coherence_floor),
        ("unitary-gauge classification", unitary_gauge_classification),
        ("braidings of unitary data are unitary", braidings_are_unitary),
        ("ribbon structures form a sign-character torsor", torsor),
        ("unique unitary ribbon structure", unique_unitary_ribbon),
        ("S-matrix and modularity verdicts", modular_remark),
        ("gauge invariance", gauge_invariance),
        ("report determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {title}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
