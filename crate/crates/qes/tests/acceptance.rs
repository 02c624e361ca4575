//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qes_core::closed_forms::{asymptotic_exponents, density, wavefunction, TailBehavior};
use qes_core::grid::{linspace, logspace};
use qes_core::quadrature::{
    integrate_halfline, normalization, DivergentEnd, Normalization, Tolerances,
};
use qes_core::so21::{check_defining_odes, eigen_relation_residual, AlgebraClass};
use qes_core::tcs::{tau_of, v_int};
use qes_core::verify::{
    acceptance_grid, closed_vs_algebra_diff, convention_calibrate, residual_scan, standard_grid,
};
use qes_core::{Convention, QesClass, QesParams};

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn defining_conditions() -> Outcome {
    let mut worst: f64 = 0.0;
    for class in AlgebraClass::ALL {
        let grid = match class {
            AlgebraClass::III => linspace(0.1, 5.0, 101),
            _ => linspace(-5.0, 5.0, 101),
        };
        for b in [0.5, 1.0, 2.0, 5.0] {
            let (df, dg) = check_defining_odes(class, b, &grid).map_err(|e| e.to_string())?;
            ensure(df < 1e-12 && dg < 1e-12, || format!("class {class}, b={b}: {df:e} / {dg:e}"))?;
            worst = worst.max(df).max(dg);
        }
    }
    Ok(format!("max residual {worst:.1e}"))
}

fn eigen_relation() -> Outcome {
    let mut worst: f64 = 0.0;
    for class in [AlgebraClass::I, AlgebraClass::IIPlus, AlgebraClass::III] {
        for k in [2.0, 3.0, 5.0] {
            for b in [0.5, 1.0, 2.0] {
                for x in class.default_grid(101) {
                    let r = eigen_relation_residual(class, b, k, x).map_err(|e| e.to_string())?;
                    ensure(r < 1e-8, || format!("class {class}, k={k}, b={b}, x={x}: {r:e}"))?;
                    worst = worst.max(r);
                }
            }
        }
    }
    Ok(format!("max relative residual {worst:.1e}"))
}

fn calibrated(class: QesClass) -> Result<Convention, String> {
    let mut winner = None;
    for p in acceptance_grid().into_iter().filter(|p| p.class == class) {
        let cal = convention_calibrate(&p, &standard_grid()).map_err(|e| e.to_string())?;
        let (win, lose) = (cal.residual(cal.best), cal.residual(other(cal.best)));
        ensure(win < 1e-8 && lose > 1e-3 && !cal.ambiguous, || {
            format!("{p:?}: winner {win:e}, loser {lose:e}")
        })?;
        match winner {
            None => winner = Some(cal.best),
            Some(w) => ensure(w == cal.best, || format!("class {class}: winner changes at {p:?}"))?,
        }
    }
    winner.ok_or_else(|| format!("no parameter sets for class {class}"))
}

fn other(c: Convention) -> Convention {
    match c {
        Convention::Casimir => Convention::Chain,
        Convention::Chain => Convention::Casimir,
    }
}

fn convention_calibration() -> Outcome {
    let mut picks = Vec::new();
    for class in QesClass::ALL {
        picks.push(format!("{class}: {}", calibrated(class)?));
    }
    Ok(picks.join(", "))
}

fn derivation_chain() -> Outcome {
    let grid = logspace(0.1, 10.0, 100);
    let mut worst: f64 = 0.0;
    for class in QesClass::ALL {
        let conv = calibrated(class)?;
        for p in acceptance_grid().into_iter().filter(|p| p.class == class) {
            let (d, at) = closed_vs_algebra_diff(&p, conv, &grid).map_err(|e| e.to_string())?;
            ensure(d < 1e-8, || format!("{p:?}: {d:e} at rho={at}"))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("max relative difference {worst:.1e}"))
}

fn radial_residual() -> Outcome {
    let mut worst: f64 = 0.0;
    for class in QesClass::ALL {
        let conv = calibrated(class)?;
        for p in acceptance_grid().into_iter().filter(|p| p.class == class) {
            let r = residual_scan(&p, conv, &standard_grid(), 0.0).map_err(|e| e.to_string())?;
            ensure(r.passed && r.max_abs_relative_residual < 1e-8, || {
                format!("{p:?}: {:e} at rho={}", r.max_abs_relative_residual, r.argmax_rho)
            })?;
            worst = worst.max(r.max_abs_relative_residual);
        }
    }
    Ok(format!("max relative residual {worst:.1e}"))
}

/// Trapezoid rule in `u = ln rho`. The transformed integrand decays
/// exponentially at both ends, where the rule converges geometrically.
fn log_trapezoid(p: &QesParams) -> f64 {
    let (lo, hi, h) = (-60.0, 160.0, 5e-3);
    let n = ((hi - lo) / h) as usize;
    let f = |u: f64| {
        let rho = u.exp();
        density(p, rho).unwrap() * rho
    };
    let mut s = 0.5 * (f(lo) + f(hi));
    for i in 1..n {
        s += f(lo + i as f64 * h);
    }
    s * h
}

fn normalizability_boundary() -> Outcome {
    let tau = 5.0;
    let mut converged = 0;
    let mut diverged = 0;
    for k in [3.0, 3.5, 4.0, 4.5, 5.0] {
        let boundary = k - tau / 2.0 + 1.0;
        for delta in [-0.75, -0.25, 0.25, 0.75, 1.25] {
            let b = boundary + delta;
            let p = QesParams::new(QesClass::III, k, b, tau).map_err(|e| e.to_string())?;
            let n = normalization(&p, Tolerances::default()).map_err(|e| format!("{p:?}: {e}"))?;
            match n {
                Normalization::Finite { result, .. } => {
                    ensure(delta > 0.0, || format!("{p:?}: finite value below the boundary"))?;
                    let oracle = log_trapezoid(&p);
                    let rel = (result.value - oracle).abs() / oracle;
                    ensure(result.abs_error_estimate <= 1e-6 * result.value && rel <= 1e-6, || {
                        format!("{p:?}: value {} vs oracle {oracle} (rel {rel:e})", result.value)
                    })?;
                    converged += 1;
                }
                Normalization::Diverges { end, .. } => {
                    ensure(delta < 0.0 && end == DivergentEnd::Infinity, || {
                        format!("{p:?}: divergence verdict above the boundary")
                    })?;
                    // the integrator on its own must not report a finite value either
                    let raw = integrate_halfline(|r| density(&p, r).unwrap(), Tolerances::default());
                    ensure(raw.is_err(), || format!("{p:?}: integrator converged on a divergent case"))?;
                    diverged += 1;
                }
            }
        }
    }
    Ok(format!("{converged} finite, {diverged} divergent, all agree"))
}

fn fitted_slope(p: &QesParams, lo: f64, hi: f64, strip: impl Fn(f64) -> f64) -> f64 {
    let pts = logspace(lo, hi, 31);
    let xs: Vec<f64> = pts.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = pts
        .iter()
        .map(|&r| (wavefunction::<f64>(p, r).unwrap() / strip(r)).abs().ln())
        .collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn asymptotic_slopes() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in acceptance_grid() {
        let (k, b, tau) = (p.k, p.b, p.tau);
        let expected_inf = match p.class {
            QesClass::I | QesClass::II => 1.0 - tau / 2.0,
            QesClass::III => k - b - tau / 2.0 + 0.5,
        };
        let expected_zero = k - tau / 2.0;
        let a = asymptotic_exponents(&p);
        let reported = match a.at_inf {
            TailBehavior::Power { exponent } | TailBehavior::SaturatingPower { exponent, .. } => exponent,
        };
        ensure(reported == expected_inf && a.at_zero == expected_zero, || {
            format!("{p:?}: reported exponents {a:?}")
        })?;
        let strip = |r: f64| match p.class {
            QesClass::II => (-b * r / (r + 1.0)).exp(),
            _ => 1.0,
        };
        let inf = fitted_slope(&p, 1e3, 1e6, strip);
        let zero = fitted_slope(&p, 1e-6, 1e-3, |_| 1.0);
        let e_inf = (inf - expected_inf).abs() / expected_inf.abs();
        let e_zero = (zero - expected_zero).abs() / expected_zero.abs();
        ensure(e_inf < 0.01 && e_zero < 0.01, || {
            format!("{p:?}: slopes {inf} (want {expected_inf}), {zero} (want {expected_zero})")
        })?;
        worst = worst.max(e_inf).max(e_zero);
    }
    Ok(format!("worst relative slope error {:.2}%", 100.0 * worst))
}

fn qes(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qes"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run qes: {e}"))?;
    let code = out.status.code().ok_or("qes killed by a signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn validate(class: &str, k: &str, tau: &str, b: &str) -> Result<(i32, Vec<String>), String> {
    let (code, out) = qes(&["validate", "--class", class, "--k", k, "--tau", tau, "--b", b])?;
    let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| format!("bad JSON: {e}"))?;
    let violated = v["violated_constraints"]
        .as_array()
        .ok_or("no violated_constraints")?
        .iter()
        .map(|c| c.as_str().unwrap_or_default().to_string())
        .collect();
    Ok((code, violated))
}

fn constraint_logic() -> Outcome {
    let has = |v: &[String], name: &str| v.iter().any(|c| c == name);

    let (code, v) = validate("I", "3", "4", "1")?;
    ensure(code == 0 && v.is_empty(), || format!("class I (3,4,1): exit {code}, {v:?}"))?;

    let (code, v) = validate("II", "3", "4", "1")?;
    ensure(code == 0 && v.is_empty(), || format!("class II (3,4,1): exit {code}, {v:?}"))?;
    let (code, v) = validate("II", "3", "3", "1")?;
    ensure(code == 2 && v == ["tau >= 4"], || format!("class II tau=3: exit {code}, {v:?}"))?;
    let (code, v) = validate("II", "3", "4", "-1")?;
    ensure(code == 2 && v == ["b > 0"], || format!("class II b=-1: exit {code}, {v:?}"))?;

    // the tail criterion holds here; 2k > tau does not, so the exit code is still 2
    let (code, v) = validate("III", "2", "5", "1")?;
    ensure(code == 2 && !has(&v, "normalization-convergence"), || {
        format!("class III (2,5,1): exit {code}, {v:?}")
    })?;
    let (code, v) = validate("III", "2", "4", "1")?;
    ensure(code == 2 && has(&v, "normalization-convergence"), || {
        format!("class III (2,4,1): exit {code}, {v:?}")
    })?;

    let (code, _) = qes(&["validate", "--class", "I", "--k", "three", "--tau", "4", "--b", "1"])?;
    ensure(code == 1, || format!("malformed flag: exit {code}"))?;
    Ok("all verdicts and exit codes match".into())
}

fn read_column(path: &Path) -> Result<Vec<f64>, String> {
    let mut r = csv::Reader::from_path(path).map_err(|e| e.to_string())?;
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| e.to_string())?;
            rec[1].parse::<f64>().map_err(|e| e.to_string())
        })
        .collect()
}

fn figure_properties() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out_dir = dir.path().to_str().ok_or("non-UTF-8 temp dir")?;
    let (code, listing) = qes(&["figures", "--out-dir", out_dir])?;
    ensure(code == 0, || format!("figures exited {code}"))?;
    let densities: Vec<&str> = listing.lines().filter(|l| l.contains("_density_")).collect();
    ensure(!densities.is_empty(), || "no density presets".into())?;
    for file in &densities {
        let v = read_column(Path::new(file))?;
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let peak = v.iter().position(|&x| x == max).unwrap();
        ensure(v.iter().all(|&x| x >= 0.0), || format!("{file}: negative density"))?;
        ensure(v[0] < 1e-3 * max && v[v.len() - 1] < 1e-3 * max, || {
            format!("{file}: endpoints {} / {} vs max {max}", v[0], v[v.len() - 1])
        })?;
        let rises = v[..=peak].windows(2).all(|w| w[0] <= w[1]);
        let falls = v[peak..].windows(2).all(|w| w[0] >= w[1]);
        ensure(rises && falls, || format!("{file}: not unimodal"))?;
    }
    Ok(format!("{} density tables checked", densities.len()))
}

// Every pair and triple enumerated without the window built into the loops.
fn v_int_brute(x: &[f64], lambda: f64, r: usize) -> f64 {
    let n = x.len();
    let mut v = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i < j && j < k && j - i <= r && k - j <= r {
                    let (rij, rjk) = (x[i] - x[j], x[j] - x[k]);
                    v += lambda * lambda * rij * rjk / ((x[j] - x[i]).powi(2) * (x[j] - x[k]).powi(2));
                }
            }
            if i < j && j - i <= r {
                v += lambda * (lambda - 1.0) / (x[i] - x[j]).powi(2);
            }
        }
    }
    v
}

fn tau_mapping() -> Outcome {
    let t1 = tau_of(2, 0, 1.0, 1).map_err(|e| e.to_string())?;
    let t2 = tau_of(3, 0, 1.0, 2).map_err(|e| e.to_string())?;
    ensure(t1 == 3.0 && t2 == 8.0, || format!("tau = {t1}, {t2}"))?;
    let base = [-2.3, -0.9, 0.15, 1.4, 3.05];
    let mut cases = 0;
    for n in 2..=5 {
        let x = &base[..n];
        for lambda in [-0.6, 0.4, 1.0, 2.5] {
            let got = v_int(x, lambda, (n - 1) as u32).map_err(|e| e.to_string())?;
            let want = v_int_brute(x, lambda, n - 1);
            ensure((got - want).abs() <= 1e-12 * (1.0 + want.abs()), || {
                format!("N={n}, lambda={lambda}: {got} vs {want}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("tau exact; v_int matches brute force on {cases} cases"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "so(2,1) defining conditions", limit: Duration::from_secs(1), run: defining_conditions },
        Criterion { id: 2, name: "ground-state eigen-relation", limit: Duration::from_secs(1), run: eigen_relation },
        Criterion { id: 3, name: "convention calibration", limit: Duration::from_secs(5), run: convention_calibration },
        Criterion { id: 4, name: "derivation-chain consistency", limit: Duration::from_secs(5), run: derivation_chain },
        Criterion { id: 5, name: "zero-energy radial residual", limit: Duration::from_secs(5), run: radial_residual },
        Criterion { id: 6, name: "normalizability boundary", limit: Duration::from_secs(30), run: normalizability_boundary },
        Criterion { id: 7, name: "asymptotic exponents", limit: Duration::from_secs(5), run: asymptotic_slopes },
        Criterion { id: 8, name: "constraint logic", limit: Duration::from_secs(1), run: constraint_logic },
        Criterion { id: 9, name: "figure-surrogate properties", limit: Duration::from_secs(2), run: figure_properties },
        Criterion { id: 10, name: "tau mapping and v_int", limit: Duration::from_secs(1), run: tau_mapping },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => {
                Err(format!("{detail}; took {:.2} s, limit {} s", elapsed.as_secs_f64(), c.limit.as_secs()))
            }
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {:>2} {status}: {} ({:.3} s) - {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
