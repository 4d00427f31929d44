//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any of them fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use twistlab::lfun::{asymmetric_fe_rhs, classical_fe_sides, ladder_fe_rhs, LSeriesEvaluator};
use twistlab::qseries::{build_preset, PRESET_NAMES};
use twistlab::special::{
    gamma, ln_gamma, ln_sin_pi, mellin_barnes_closed_form, mellin_barnes_numeric, LogComplex,
};
use twistlab::twist::{a_ladder, Rational};
use twistlab_cli::config::{RunConfig, Settings};
use twistlab_cli::record::{Quantity, Record};
use twistlab_cli::suites;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn config(text: &str) -> RunConfig {
    RunConfig::from_settings(Settings::parse(text).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Fails on the first failed record and reports the largest checked residual.
fn all_pass(records: &[Record]) -> Result<(usize, f64), String> {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for r in records {
        if r.failed() {
            return Err(format!(
                "{} at {} residual {:?} tolerance {:?} {}",
                r.paper_eq,
                r.point.as_deref().unwrap_or("-"),
                r.residual,
                r.tolerance,
                r.note.as_deref().unwrap_or("")
            ));
        }
        if r.pass == Some(true) {
            checked += 1;
            if let (Some(res), Some(tol)) = (r.residual, r.tolerance) {
                worst = worst.max(res / tol);
            }
        }
    }
    ensure(checked > 0, || "no checks ran".into())?;
    Ok((checked, worst))
}

fn ladder() -> Outcome {
    for h_star in 0..=6i128 {
        let a = a_ladder(h_star as u32);
        for x in 0..=h_star + 1 {
            let lhs: i128 = (1..=h_star).map(|j| x + 2 * j - 1).product();
            let rhs: Rational = a
                .iter()
                .enumerate()
                .map(|(l, al)| al * (0..h_star - l as i128).map(|v| x + v).product::<i128>())
                .sum();
            ensure(rhs == Rational::from_integer(lhs), || format!("h* = {h_star}, X = {x}"))?;
        }
    }
    let r = Rational::from_integer;
    ensure(a_ladder(2) == vec![r(1), r(3), r(3)], || format!("h* = 2 gives {:?}", a_ladder(2)))?;
    Ok("h* = 0..6 exact, h* = 2 -> [1, 3, 3]".into())
}

fn gamma_identities() -> Outcome {
    let one = c(1.0, 0.0);
    let grid: Vec<Complex64> =
        (0..50).map(|k| c(-4.63 + 0.211 * k as f64, -3.0 + 0.123 * k as f64)).collect();
    let mut worst: f64 = 0.0;
    for &z in &grid {
        let err = |e: twistlab::Error| format!("z = {z}: {e}");
        let refl = (ln_gamma(z).map_err(err)? * ln_gamma(one - z).map_err(err)? * ln_sin_pi(z))
            .to_complex()
            / PI;
        let dup_rhs = ln_gamma(z * 2.0).map_err(err)?
            * LogComplex::exp(c(0.5 * PI.ln(), 0.0) + (one - z * 2.0) * 2f64.ln());
        let dup = (ln_gamma(z).map_err(err)? * ln_gamma(z + 0.5).map_err(err)? / dup_rhs).to_complex();
        let g1 = gamma(z + 1.0).map_err(err)?;
        let rec = (g1 - z * gamma(z).map_err(err)?).norm() / g1.norm();
        worst = worst.max((refl - one).norm()).max((dup - one).norm()).max(rec);
    }
    ensure(worst < 1e-12, || format!("gamma identities {worst:e}"))?;
    let mut mb: f64 = 0.0;
    for i in 0..4 {
        for j in 0..5 {
            let xi = c(0.8 + 0.6 * i as f64, -1.0 + 0.5 * j as f64);
            let z = Complex64::from_polar(0.2 + 0.35 * j as f64, -1.5 + 0.9 * i as f64);
            let num = mellin_barnes_numeric(xi, z, 0.45 * xi.re).map_err(|e| e.to_string())?;
            let closed = mellin_barnes_closed_form(xi, z).map_err(|e| e.to_string())?;
            mb = mb.max((num - closed).norm());
        }
    }
    ensure(mb < 1e-8, || format!("Mellin-Barnes {mb:e}"))?;
    Ok(format!("identities {worst:.1e} < 1e-12, Mellin-Barnes {mb:.1e} < 1e-8"))
}

fn classical_chain() -> Outcome {
    let grid = [
        c(-1.2, 0.5),
        c(-0.7, 3.0),
        c(-0.45, -6.0),
        c(-0.1, 9.0),
        c(0.1, -2.0),
        c(0.35, 4.0),
        c(0.6, -8.0),
        c(0.9, 1.5),
        c(1.3, -4.0),
        c(1.8, 10.0),
    ];
    let (mut chain, mut overlap): (f64, f64) = (0.0, 0.0);
    for name in PRESET_NAMES {
        let ev = LSeriesEvaluator::new(build_preset(name).map_err(|e| e.to_string())?);
        let alt = ev.with_split(1.3);
        for s in grid {
            let err = |e: twistlab::Error| format!("{name} {s}: {e}");
            let f = ev.f_complete(s).map_err(err)?.value;
            let classical = classical_fe_sides(&ev, &alt, s).map_err(err)?.residual;
            let asym = (f - asymmetric_fe_rhs(&alt, s).map_err(err)?.value).norm() / f.norm();
            let lad = (f - ladder_fe_rhs(&alt, s).map_err(err)?.value).norm() / f.norm();
            chain = chain.max(classical).max(asym).max(lad);
        }
        for i in 0..5 {
            for t in [-30.0, -12.0, 0.0, 12.0, 30.0] {
                let s = c(ev.safe_abscissa + 0.5 + 0.625 * i as f64, t);
                let err = |e: twistlab::Error| format!("{name} {s}: {e}");
                let d = ev.f_direct(s).map_err(err)?.value;
                let f = ev.f_complete(s).map_err(err)?.value;
                overlap = overlap.max((d - f).norm() / d.norm());
            }
        }
    }
    ensure(chain < 1e-8, || format!("chain residual {chain:e}"))?;
    ensure(overlap < 1e-9, || format!("direct/completed overlap {overlap:e}"))?;
    Ok(format!("chain {chain:.1e} < 1e-8, overlap {overlap:.1e} < 1e-9"))
}

const BASIC_CASES: [(&str, &str); 4] =
    [("ETA24", "1/12"), ("ETA24", "3/10"), ("ETA8_CUBED", "1/4"), ("ETA8_CUBED", "1/3")];

fn basic_formula() -> Outcome {
    let mut total = 0;
    let mut worst: f64 = 0.0;
    for (form, alpha) in BASIC_CASES {
        let cfg = config(&format!("form = {form}\nalpha = {alpha}\ndelta = 0.4\nxgrid = 50, 100"));
        let records = suites::verify_basic(&cfg).map_err(|e| e.to_string())?;
        let (n, w) = all_pass(&records).map_err(|e| format!("{form} {alpha}: {e}"))?;
        ensure(n == 12, || format!("{form} {alpha}: {n} checks, want 12"))?;
        total += n;
        worst = worst.max(w);
    }
    Ok(format!("{total} checks, worst residual/tolerance {worst:.1e}"))
}

fn twisted_fe() -> Outcome {
    let cases = [
        "form = ETA24\nalpha = 1/12",
        "form = ETA24\nalpha = 3/10",
        "form = ETA8_CUBED\nalpha = 1/4",
        "form = ETA8_CUBED\nalpha = 1/3",
        "form = ETA24_FIFTH\nn_alpha = 5",
        "form = ETA24_FIFTH\nalpha = 1/12",
    ];
    let mut total = 0;
    let mut worst: f64 = 0.0;
    for text in cases {
        let cfg = config(&format!("{text}\npoints = default"));
        let records = suites::verify_fe(&cfg).map_err(|e| e.to_string())?;
        let label = text.replace('\n', " ");
        let (n, w) = all_pass(&records).map_err(|e| format!("{label}: {e}"))?;
        let count = |id: &str| records.iter().filter(|r| r.paper_eq == id).count();
        ensure(count("twisted_functional_equation") == 10, || format!("{label}: grid incomplete"))?;
        ensure(count("regularized_gap_decay") > 0, || format!("{label}: no decay check"))?;
        total += n;
        worst = worst.max(w);
    }
    Ok(format!("6 cases, {total} checks incl. decay, worst residual/tolerance {worst:.1e}"))
}

fn residues() -> Outcome {
    let mut parts = Vec::new();
    for (form, alpha) in BASIC_CASES {
        let cfg = config(&format!("form = {form}\nalpha = {alpha}"));
        let records = suites::residues(&cfg).map_err(|e| e.to_string())?;
        all_pass(&records).map_err(|e| format!("{form} {alpha}: {e}"))?;
        let kind = records
            .iter()
            .find(|r| r.paper_eq == "residue_at_s0" || r.paper_eq == "no_pole_off_spectrum")
            .ok_or_else(|| format!("{form} {alpha}: no s0 check"))?;
        let constancy = records.iter().filter(|r| r.paper_eq == "residue_constant").count();
        ensure(constancy >= 3, || format!("{form}: {constancy} spectral alphas"))?;
        parts.push(format!("{form} {alpha} {}", kind.paper_eq));
    }
    Ok(parts.join(", "))
}

fn trivial_zeros() -> Outcome {
    let cfg = config("form = ETA24\nalpha = 1/12\nrange = 5, 30");
    let out = suites::trivial_zeros(&cfg).map_err(|e| e.to_string())?;
    let expected_slope = (2.0f64 / 4.0).ln() / PI;
    ensure((out.tube.slope - expected_slope).abs() < 1e-12, || format!("slope {}", out.tube.slope))?;
    ensure((out.tube.slope + 0.2206).abs() < 5e-5, || format!("slope {}", out.tube.slope))?;
    all_pass(&out.records)?;
    for id in ["off_tube_lower_bound", "trivial_zero_density"] {
        ensure(out.records.iter().any(|r| r.paper_eq == id && r.pass == Some(true)), || {
            format!("{id} missing")
        })?;
    }
    let far = out.zeros.iter().map(|z| z.distance_to_line).fold(0.0, f64::max);
    Ok(format!(
        "{} zeros in [-30, -5], max distance {far:.1e} < 0.05, slope {:.4}",
        out.zeros.len(),
        out.tube.slope
    ))
}

fn rvm() -> Outcome {
    let cfg = config("form = ETA24\nalpha = 1/12\nt = 30");
    let records = suites::count_zeros(&cfg).map_err(|e| e.to_string())?;
    all_pass(&records)?;
    let counts: Vec<&Record> = records.iter().filter(|r| r.paper_eq == "zero_count").collect();
    ensure(counts.len() == 2, || "zero counts missing".into())?;
    let mut parts = Vec::new();
    for (r, t) in counts.iter().zip([15.0f64, 30.0]) {
        let dev = r.residual.unwrap_or(f64::NAN);
        ensure(dev <= 2.0 * t.ln(), || format!("T = {t}: deviation {dev} > 2 log T"))?;
        parts.push(format!("T={t} deviation {dev:.2}"));
    }
    let ratio = records.iter().find(|r| r.paper_eq == "zero_count_log_growth").unwrap();
    parts.push(format!(
        "ratio {:.3} <= {:.3}",
        ratio.residual.unwrap_or(f64::NAN),
        ratio.tolerance.unwrap_or(f64::NAN)
    ));
    Ok(parts.join(", "))
}

fn growth() -> Outcome {
    let cfg = config("form = ETA24\nalpha = 1/12\ntmin = 20\ntmax = 200");
    let mut parts = Vec::new();
    for sigma in [-1.0, 2.0] {
        let records = suites::growth(&cfg, sigma).map_err(|e| e.to_string())?;
        let (n, _) = all_pass(&records).map_err(|e| format!("sigma = {sigma}: {e}"))?;
        ensure(n == 2, || format!("sigma = {sigma}: {n} checks"))?;
        for r in &records {
            let got = match &r.lhs {
                Some(Quantity::Real(x)) => format!("{x:.3}"),
                other => format!("{other:?}"),
            };
            parts.push(format!("{} {got}", r.paper_eq.trim_start_matches("growth_exponent_")));
        }
    }
    Ok(format!("sigma -1 then 2: {}", parts.join(", ")))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_twistlab");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut payloads = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(bin)
            .args(["report", "--form", "ETA24", "--alpha", "1/12", "--out"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || format!("report exited with {}", status.status))?;
        payloads.push(std::fs::read(out.join("records.jsonl")).map_err(|e| e.to_string())?);
    }
    ensure(!payloads[0].is_empty(), || "empty report".into())?;
    ensure(payloads[0] == payloads[1], || "records.jsonl differs between runs".into())?;
    Ok(format!("records.jsonl identical, {} bytes", payloads[0].len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("ladder exactness", ladder, Duration::from_secs(1)),
        ("gamma identities", gamma_identities, Duration::from_secs(10)),
        ("classical functional equation", classical_chain, Duration::from_secs(60)),
        ("basic formula", basic_formula, Duration::from_secs(120)),
        ("twisted functional equation", twisted_fe, Duration::from_secs(600)),
        ("residues", residues, Duration::from_secs(300)),
        ("trivial zeros", trivial_zeros, Duration::from_secs(600)),
        ("zero counting", rvm, Duration::from_secs(1800)),
        ("growth", growth, Duration::from_secs(300)),
        ("determinism", determinism, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let slow = took > *budget;
        let (status, detail) = match &outcome {
            Ok(d) if !slow => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; over budget {budget:?}")),
            Err(e) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} {name} ({:.1}s): {detail}", i + 1, took.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
