//! Acceptance checks. Prints one PASS/FAIL line per check and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use smallvec::smallvec;

use multitape::angle::Angle;
use multitape::bench::bench;
use multitape::engine::{probe, run_exact, run_monte_carlo, trace_until, ExactOptions, MonteCarloOptions, ProbeOutcome};
use multitape::library::{self, kpow_tqcfa, lsquare_2tqcfa, AnyMachine};
use multitape::machine::ClassicalMachine;
use multitape::oracle::{enumerate, Oracle};
use multitape::qcfa::{BranchNode, QuantumClassicalMachine};
use multitape::quantum::QuantumRegister;
use multitape::run::Configuration;
use multitape::verify::verify_classical;

const EPS: f64 = 0.125;

type Check = Result<String, String>;

fn word(n: usize, m: usize) -> String {
    "a".repeat(n) + &"b".repeat(m)
}

fn classical(id: &str) -> ClassicalMachine {
    match library::build(id, EPS).unwrap().machine {
        AnyMachine::Classical(m) => m,
        AnyMachine::Quantum(_) => panic!("{id} is quantum"),
    }
}

fn exact(threshold: f64) -> ExactOptions {
    ExactOptions {
        mass_threshold: threshold,
        ..Default::default()
    }
}

fn oracle_equivalence() -> Check {
    let ids = [
        "leq", "lpal", "ltrieq", "leq-k2", "leq-k3", "meq", "lbalance-count", "llinear-eq", "llinear-trieq",
        "llinear-eq-k2", "lcopy", "lmiddle", "lbalanced", "lsquare-3tfa", "kpow-tfa1", "kpow-tfa2", "kpow-tfa3",
        "multiple-tfa1", "multiple-tfa2", "multiple-tfa3",
    ];
    let mut strings = 0;
    for id in ids {
        let entry = library::build(id, EPS).unwrap();
        let AnyMachine::Classical(m) = &entry.machine else { unreachable!() };
        let max_len = match m.control().alphabet().len() {
            2 => 12,
            3 => 9,
            _ => 8,
        };
        let r = verify_classical(m, &entry.oracle, max_len);
        if let Some(c) = &r.counterexample {
            return Err(format!("{id} on {:?}: {}", c.input, c.detail));
        }
        strings += r.strings();
    }
    Ok(format!("{} machines, {strings} strings, no counterexample", ids.len()))
}

fn rejection_bound() -> Check {
    for d in (-100i64..=100).filter(|&d| d != 0) {
        let s = Angle::sqrt2_pi(d).radians().sin().powi(2);
        let bound = 1.0 / (2.0 * (d * d) as f64);
        if s < bound {
            return Err(format!("Δ = {d}: sin² = {s:e} < {bound:e}"));
        }
    }
    Ok("sin²(√2Δπ) ≥ 1/(2Δ²) for 1 ≤ |Δ| ≤ 100".into())
}

fn rotation_agreement(m: &QuantumClassicalMachine) -> Check {
    let mut worst: f64 = 0.0;
    for n in 1..=6usize {
        for k in 1..=6usize {
            let w = word(n, k * n);
            let t = trace_until(m, &w, "sm", 1_000_000)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("{w}: measurement state not reached"))?;
            let net = t.net_rotation.ok_or_else(|| format!("{w}: rotation not tracked"))?;
            let d = n as i64 - k as i64;
            if net != Angle::sqrt2_pi(d) {
                return Err(format!("{w}: net rotation {net}, expected {}", Angle::sqrt2_pi(d)));
            }
            let p1 = t.register.amplitudes()[1].norm_sqr();
            let expected = Angle::sqrt2_pi(d).radians().sin().powi(2);
            if k == n && !net.is_zero() {
                return Err(format!("{w}: net rotation {net} with k = n"));
            }
            worst = worst.max((p1 - expected).abs());
        }
    }
    if worst > 1e-9 {
        return Err(format!("max |P(1) - sin²| = {worst:e}"));
    }
    Ok(format!("36 inputs, max deviation {worst:.1e}, zero net rotation when k = n"))
}

/// Walk 1 from its first coin flip, T1 on the first a.
fn walk_probe(m: &QuantumClassicalMachine, n: usize, k: usize, trials: u64, seed: u64) -> ProbeOutcome {
    let control = m.control();
    let start = BranchNode {
        config: Configuration {
            state: control.state_id("s03_1").unwrap(),
            heads: smallvec![1, 0],
            active: 0,
            steps: 0,
        },
        register: QuantumRegister::basis(2, 0),
        probability: 1.0,
    };
    let options = MonteCarloOptions {
        trials,
        seed,
        ..Default::default()
    };
    probe(m, &word(n, k * n), &start, &["w2t", "w2f"], &options).unwrap()
}

fn walk_hits(m: &QuantumClassicalMachine) -> Check {
    let trials = 20_000;
    let mut notes = Vec::new();
    for (n, k) in [(2, 2), (3, 3), (2, 4), (4, 2)] {
        let out = walk_probe(m, n, k, trials, 11);
        if out.count("w2t") + out.count("w2f") != trials {
            return Err(format!("({n},{k}): {} trials did not end a walk", trials - out.count("w2t") - out.count("w2f")));
        }
        let p = 1.0 / (n + k + 1) as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let hat = out.count("w2t") as f64 / trials as f64;
        let z = (hat - p) / sigma;
        if z.abs() > 4.0 {
            return Err(format!("({n},{k}): {hat:.4} vs {p:.4}, {z:.2}σ"));
        }
        notes.push(format!("({n},{k}) {z:+.2}σ"));
    }
    Ok(notes.join(", "))
}

fn members_never_rejected(m: &QuantumClassicalMachine) -> Check {
    let mut notes = Vec::new();
    for n in 1..=3 {
        let out = run_exact(m, &word(n, n * n), &exact(1e-2)).map_err(|e| e.to_string())?;
        if out.reject_mass >= 1e-9 || out.accept_mass < 0.99 {
            return Err(format!("n = {n}: accept {}, reject {:e}", out.accept_mass, out.reject_mass));
        }
        notes.push(format!("n={n} accept {:.4}", out.accept_mass));
    }
    Ok(notes.join(", "))
}

fn non_member_report(m: &QuantumClassicalMachine, seed: u64) -> Vec<(u64, u64, u64)> {
    [(2, 1), (1, 2), (3, 2), (2, 3)]
        .iter()
        .map(|&(n, k)| {
            let o = MonteCarloOptions {
                trials: 5000,
                seed,
                ..Default::default()
            };
            let r = run_monte_carlo(m, &word(n, k * n), &o).unwrap();
            (r.accepts, r.rejects, r.truncated)
        })
        .collect()
}

fn non_members_rejected(m: &QuantumClassicalMachine) -> Check {
    let mut notes = Vec::new();
    for (n, k) in [(2, 1), (1, 2), (3, 2), (2, 3)] {
        let w = word(n, k * n);
        let out = run_exact(m, &w, &exact(1e-4)).map_err(|e| e.to_string())?;
        if out.unresolved_mass >= 1e-2 || out.reject_mass < 1.0 - EPS - out.unresolved_mass {
            return Err(format!(
                "({n},{k}): reject {}, unresolved {:e}",
                out.reject_mass, out.unresolved_mass
            ));
        }
        let trials = 5000;
        let o = MonteCarloOptions {
            trials,
            seed: 5,
            ..Default::default()
        };
        let mc = run_monte_carlo(m, &w, &o).map_err(|e| e.to_string())?;
        let hat = mc.rejects as f64 / trials as f64;
        // the exact value lies in [reject, reject + unresolved]
        let (lo, hi) = (out.reject_mass, out.reject_mass + out.unresolved_mass);
        let p = hat.clamp(lo, hi);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt().max(1.0 / trials as f64);
        let z = (hat - p) / sigma;
        if z.abs() > 4.0 {
            return Err(format!("({n},{k}): Monte-Carlo {hat:.4} vs exact [{lo:.6}, {hi:.6}], {z:.2}σ"));
        }
        notes.push(format!("({n},{k}) reject {:.5}", out.reject_mass));
    }
    Ok(notes.join(", "))
}

fn form_violations(m: &QuantumClassicalMachine) -> Check {
    let form = Oracle::QuantumForm(2);
    let mut count = 0;
    for w in enumerate(&['a', 'b'], 8).filter(|w| !form.member(w)) {
        let out = run_exact(m, &w, &exact(1e-4)).map_err(|e| e.to_string())?;
        if out.reject_mass != 1.0 {
            return Err(format!("{w:?}: reject mass {}", out.reject_mass));
        }
        count += 1;
    }
    Ok(format!("{count} strings rejected with mass exactly 1"))
}

fn linear_fits() -> Check {
    let sizes: Vec<usize> = (2..=40).collect();
    let mut notes = Vec::new();
    for id in ["leq", "lpal", "leq-k2", "lbalance-count", "lsquare-3tfa"] {
        let m = classical(id);
        let entry = library::build(id, EPS).unwrap();
        let r = bench(&m, &entry.oracle, &sizes).map_err(|e| e.to_string())?;
        let fit = r.fit.ok_or_else(|| format!("{id}: too few points"))?;
        if !fit.exact || fit.max_abs_residual > 1e-9 {
            return Err(format!("{id}: residual {}", fit.max_abs_residual));
        }
        if id == "lpal" {
            let c = m.run("", None).unwrap().steps as f64;
            if fit.slope != 3.0 || fit.intercept != c {
                return Err(format!("lpal: steps = {}·|w| + {}, ε takes {c}", fit.slope, fit.intercept));
            }
        }
        notes.push(format!("{id} {}·|w|+{} ({} points)", fit.slope, fit.intercept, r.points.len()));
    }
    Ok(notes.join(", "))
}

fn kpow_generalization(lsquare: &QuantumClassicalMachine) -> Check {
    let k2 = kpow_tqcfa(2, EPS).unwrap();
    let opts = exact(1e-7);
    let mut worst: f64 = 0.0;
    for w in enumerate(&['a', 'b'], 10) {
        let a = run_exact(lsquare, &w, &opts).map_err(|e| e.to_string())?;
        let b = run_exact(&k2, &w, &opts).map_err(|e| e.to_string())?;
        let d = (a.accept_mass - b.accept_mass).abs().max((a.reject_mass - b.reject_mass).abs());
        if d > 1e-6 {
            return Err(format!("{w:?}: lsquare ({}, {}) vs kpow2 ({}, {})", a.accept_mass, a.reject_mass, b.accept_mass, b.reject_mass));
        }
        worst = worst.max(d);
    }
    let k3 = kpow_tqcfa(3, EPS).unwrap();
    let acc = run_exact(&k3, &word(2, 8), &exact(1e-2)).map_err(|e| e.to_string())?;
    if acc.accept_mass < 0.99 {
        return Err(format!("kpow3 on a²b⁸: accept {}", acc.accept_mass));
    }
    let rej = run_exact(&k3, &word(2, 4), &exact(1e-2)).map_err(|e| e.to_string())?;
    if rej.reject_mass < 1.0 - EPS - 0.01 {
        return Err(format!("kpow3 on a²b⁴: reject {}", rej.reject_mass));
    }
    Ok(format!(
        "2047 strings, max mass gap {worst:.1e}; kpow3 a²b⁸ accept {:.4}, a²b⁴ reject {:.4}",
        acc.accept_mass, rej.reject_mass
    ))
}

fn determinism(m: &QuantumClassicalMachine) -> Check {
    if walk_probe(m, 2, 4, 20_000, 11) != walk_probe(m, 2, 4, 20_000, 11) {
        return Err("walk probe differs between runs".into());
    }
    if non_member_report(m, 5) != non_member_report(m, 5) {
        return Err("Monte-Carlo counts differ between runs".into());
    }
    let report = |seed| {
        let entry = library::build("lsquare-2tqcfa", EPS).unwrap();
        let opts = multitape::report::RunOptions {
            trials: 500,
            seed,
            ..Default::default()
        };
        let mut r = multitape::report::run_report(&entry.machine, "aab", &opts).unwrap();
        r.wall_ms = 0.0;
        (r.to_json(), r.to_csv())
    };
    if report(3) != report(3) {
        return Err("JSON/CSV reports differ between runs".into());
    }
    Ok("probe, Monte-Carlo counts and JSON/CSV reports repeat bit for bit".into())
}

fn running_time(m: &QuantumClassicalMachine) -> Check {
    let mut ratios = Vec::new();
    for n in 1..=4usize {
        let o = MonteCarloOptions {
            trials: 300,
            seed: 1,
            max_events: 100_000_000,
        };
        let r = run_monte_carlo(m, &word(n, n * n), &o).map_err(|e| e.to_string())?;
        let mean = r.mean_accept_steps().ok_or_else(|| format!("n = {n}: no accepted trial"))?;
        let nf = n as f64;
        ratios.push(mean / (nf * nf * (nf + nf * nf).powi(2)));
    }
    let c = ratios[0];
    if ratios.windows(2).any(|w| w[1] > w[0]) {
        return Err(format!("ratios not monotone: {ratios:.3?}"));
    }
    Ok(format!("mean steps / n²(n+n²)² = {ratios:.1?}, bounded by c = {c:.1}"))
}

fn main() -> ExitCode {
    let lsquare = lsquare_2tqcfa(EPS).unwrap();
    let checks: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("rejection bound", Box::new(rejection_bound)),
        ("rotation and measurement", Box::new(|| rotation_agreement(&lsquare))),
        ("walk hit probability", Box::new(|| walk_hits(&lsquare))),
        ("members never rejected", Box::new(|| members_never_rejected(&lsquare))),
        ("non-members rejected", Box::new(|| non_members_rejected(&lsquare))),
        ("form violations", Box::new(|| form_violations(&lsquare))),
        ("linear-time fits", Box::new(linear_fits)),
        ("kpow generalization", Box::new(|| kpow_generalization(&lsquare))),
        ("determinism", Box::new(|| determinism(&lsquare))),
        ("expected running time", Box::new(|| running_time(&lsquare))),
    ];
    let mut failed = 0;
    for (name, check) in &checks {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
