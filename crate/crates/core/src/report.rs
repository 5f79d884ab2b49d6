//! Single-input runs in any mode, summarized as one flat record.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::engine::{run_exact, run_monte_carlo, ExactOptions, MonteCarloOptions, DEFAULT_MASS_THRESHOLD, DEFAULT_TRIALS};
use crate::error::RunError;
use crate::library::AnyMachine;
use crate::run::RunVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Deterministic,
    MonteCarlo,
    Exact,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Deterministic => "deterministic",
            Mode::MonteCarlo => "monte-carlo",
            Mode::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Accept,
    Reject,
    /// The step or event limit was hit.
    Truncated,
    /// Neither verdict has a majority.
    Indeterminate,
    /// The machine got stuck (no transition, or a head left the tape).
    Error,
}

impl Outcome {
    /// 0 accept, 1 reject, 2 truncated or indeterminate, 3 error.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Accept => 0,
            Outcome::Reject => 1,
            Outcome::Truncated | Outcome::Indeterminate => 2,
            Outcome::Error => 3,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Accept => "accept",
            Outcome::Reject => "reject",
            Outcome::Truncated => "truncated",
            Outcome::Indeterminate => "indeterminate",
            Outcome::Error => "error",
        })
    }
}

/// Exact step count for deterministic runs, mean otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Steps {
    Count(u64),
    Mean(f64),
}

impl fmt::Display for Steps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Steps::Count(n) => write!(f, "{n}"),
            Steps::Mean(x) => write!(f, "{x}"),
        }
    }
}

/// Fields that do not apply to a mode are `None` (JSON `null`, empty in
/// CSV).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub machine: String,
    pub input: String,
    pub mode: Mode,
    pub verdict: Outcome,
    pub accept_mass: Option<f64>,
    pub reject_mass: Option<f64>,
    pub unresolved_mass: Option<f64>,
    pub trials: Option<u64>,
    pub accepts: Option<u64>,
    pub rejects: Option<u64>,
    pub truncated: u64,
    pub steps: Steps,
    pub seed: Option<u64>,
    pub wall_ms: f64,
    #[serde(skip)]
    pub error: Option<String>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Header line plus one record.
    pub fn to_csv(&self) -> String {
        csv_lines(std::slice::from_ref(self))
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("machine: {}", self.machine),
            format!("input: {:?}", self.input),
            format!("mode: {}", self.mode),
            format!("verdict: {}", self.verdict),
        ];
        let mut opt = |name: &str, v: Option<String>| {
            if let Some(v) = v {
                lines.push(format!("{name}: {v}"));
            }
        };
        opt("accept_mass", self.accept_mass.map(|x| x.to_string()));
        opt("reject_mass", self.reject_mass.map(|x| x.to_string()));
        opt("unresolved_mass", self.unresolved_mass.map(|x| x.to_string()));
        opt("trials", self.trials.map(|x| x.to_string()));
        opt("accepts", self.accepts.map(|x| x.to_string()));
        opt("rejects", self.rejects.map(|x| x.to_string()));
        opt("error", self.error.clone());
        lines.push(format!("truncated: {}", self.truncated));
        lines.push(format!("steps: {}", self.steps));
        if let Some(seed) = self.seed {
            lines.push(format!("seed: {seed}"));
        }
        lines.push(format!("wall_ms: {:.3}", self.wall_ms));
        lines.join("\n") + "\n"
    }
}

/// CSV with one header line and a record per report.
pub fn csv_lines(reports: &[RunReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(r).expect("report serializes");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// `None` picks deterministic for classical machines and Monte-Carlo
    /// for quantum ones.
    pub mode: Option<Mode>,
    pub trials: u64,
    pub seed: u64,
    /// Step limit (deterministic) or measurement-event limit (quantum).
    pub max_steps: Option<u64>,
    pub mass_threshold: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            mode: None,
            trials: DEFAULT_TRIALS,
            seed: 0,
            max_steps: None,
            mass_threshold: DEFAULT_MASS_THRESHOLD,
        }
    }
}

/// Runs `machine` on `input`. Asking for a quantum mode on a classical
/// machine, or the reverse, is an option error.
pub fn run_report(machine: &AnyMachine, input: &str, options: &RunOptions) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let mode = options.mode.unwrap_or(if machine.is_quantum() {
        Mode::MonteCarlo
    } else {
        Mode::Deterministic
    });
    let mut report = RunReport {
        machine: machine.name().to_string(),
        input: input.to_string(),
        mode,
        verdict: Outcome::Indeterminate,
        accept_mass: None,
        reject_mass: None,
        unresolved_mass: None,
        trials: None,
        accepts: None,
        rejects: None,
        truncated: 0,
        steps: Steps::Count(0),
        seed: None,
        wall_ms: 0.0,
        error: None,
    };
    match (machine, mode) {
        (AnyMachine::Classical(m), Mode::Deterministic) => {
            let out = m.run(input, options.max_steps)?;
            report.steps = Steps::Count(out.steps);
            report.verdict = match out.verdict {
                RunVerdict::Accept => Outcome::Accept,
                RunVerdict::Reject => Outcome::Reject,
                RunVerdict::StepLimit => {
                    report.truncated = 1;
                    Outcome::Truncated
                }
                RunVerdict::MachineError(e) => {
                    report.error = Some(e.to_string());
                    Outcome::Error
                }
            };
        }
        (AnyMachine::Quantum(m), Mode::MonteCarlo) => {
            let mut o = MonteCarloOptions {
                trials: options.trials,
                seed: options.seed,
                ..Default::default()
            };
            if let Some(limit) = options.max_steps {
                o.max_events = limit;
            }
            let out = run_monte_carlo(m, input, &o)?;
            report.trials = Some(out.trials);
            report.accepts = Some(out.accepts);
            report.rejects = Some(out.rejects);
            report.truncated = out.truncated;
            report.accept_mass = Some(out.accept_fraction());
            report.reject_mass = Some(out.reject_fraction());
            report.unresolved_mass = Some(out.truncated_fraction());
            report.steps = Steps::Mean(out.mean_steps());
            report.seed = Some(out.seed);
            report.verdict = majority(out.accept_fraction(), out.reject_fraction());
        }
        (AnyMachine::Quantum(m), Mode::Exact) => {
            let mut o = ExactOptions {
                mass_threshold: options.mass_threshold,
                ..Default::default()
            };
            if let Some(limit) = options.max_steps {
                o.max_events = limit;
            }
            let out = run_exact(m, input, &o)?;
            report.accept_mass = Some(out.accept_mass);
            report.reject_mass = Some(out.reject_mass);
            report.unresolved_mass = Some(out.unresolved_mass);
            report.truncated = u64::from(out.unresolved_mass >= options.mass_threshold);
            report.steps = Steps::Mean(out.expected_steps);
            report.verdict = majority(out.accept_mass, out.reject_mass);
        }
        (_, mode) => {
            let kind = if machine.is_quantum() { "quantum" } else { "classical" };
            return Err(RunError::Options(format!("mode {mode} does not apply to a {kind} machine")));
        }
    }
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn majority(accept: f64, reject: f64) -> Outcome {
    if accept > 0.5 {
        Outcome::Accept
    } else if reject > 0.5 {
        Outcome::Reject
    } else {
        Outcome::Indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn classical_report() {
        let m = library::build("leq", 0.125).unwrap().machine;
        let r = run_report(&m, "aabb", &RunOptions::default()).unwrap();
        assert_eq!((r.mode, r.verdict, r.steps), (Mode::Deterministic, Outcome::Accept, Steps::Count(12)));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["verdict"], "accept");
        assert_eq!(json["steps"], 12);
        assert!(json["accept_mass"].is_null());
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "machine,input,mode,verdict,accept_mass,reject_mass,unresolved_mass,trials,accepts,rejects,truncated,steps,seed,wall_ms"
        );
        assert!(lines.next().unwrap().starts_with("leq,aabb,deterministic,accept,,,,,,,0,12,,"));

        let r = run_report(&m, "aab", &RunOptions { max_steps: Some(3), ..Default::default() }).unwrap();
        assert_eq!((r.verdict, r.truncated, r.exit_code()), (Outcome::Truncated, 1, 2));
        assert!(run_report(&m, "ab", &RunOptions { mode: Some(Mode::Exact), ..Default::default() }).is_err());
        assert!(run_report(&m, "abc", &RunOptions::default()).is_err());
    }

    #[test]
    fn quantum_report_is_reproducible() {
        let m = library::build("lsquare-2tqcfa", 0.125).unwrap().machine;
        let opts = RunOptions { trials: 200, seed: 7, ..Default::default() };
        let a = run_report(&m, "ab", &opts).unwrap();
        let b = run_report(&m, "ab", &opts).unwrap();
        assert_eq!(a.mode, Mode::MonteCarlo);
        assert_eq!(a.verdict, Outcome::Accept);
        assert_eq!(RunReport { wall_ms: 0.0, ..a.clone() }, RunReport { wall_ms: 0.0, ..b });
        assert!(matches!(a.steps, Steps::Mean(_)));
        assert_eq!(a.accepts.unwrap() + a.rejects.unwrap() + a.truncated, 200);
    }
}
