//! `multitape` command line: run, verify, bench and export.
//!
//! Exit codes: 0 accept (or pass), 1 reject (or fail), 2 truncated or
//! indeterminate, 3 error.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{bench, default_sizes};
use crate::engine::{ExactOptions, DEFAULT_MASS_THRESHOLD, DEFAULT_TRIALS};
use crate::format::{export_machine, parse_machine};
use crate::library::{self, AnyMachine, DEFAULT_EPSILON};
use crate::oracle::Oracle;
use crate::report::{run_report, Mode, RunOptions};
use crate::verify::verify;

pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "multitape", version, about = "Run, verify, bench and export multi-tape automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a machine on one input
    Run(RunArgs),
    /// Compare a machine with its oracle on all short strings
    Verify(VerifyArgs),
    /// Step counts on growing accepted inputs, with an affine fit
    Bench(BenchArgs),
    /// Write a library machine in the text format
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct MachineArgs {
    /// Library id (e.g. `leq`, `kpow-tqcfa3`) or path to a machine file
    machine: String,
    /// Error bound for the quantum builders
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    machine: MachineArgs,
    input: String,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Step limit, or measurement-event limit for quantum modes
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MASS_THRESHOLD)]
    mass_threshold: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    machine: MachineArgs,
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    /// Library id whose oracle to use; defaults to the machine's name
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MASS_THRESHOLD)]
    mass_threshold: f64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    machine: MachineArgs,
    /// Input lengths, e.g. `4,8,...,40` or `2,6,12`
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    id: String,
    /// Output file; standard output when omitted or `-`
    path: Option<String>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
}

/// Parses a size list. `a,b,...,z` expands to the progression with step
/// `b - a` up to `z`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad size `{s}`"));
    match parts.iter().position(|p| *p == "...") {
        None => parts.iter().map(|p| num(p)).collect(),
        Some(i) if i == 2 && parts.len() == 4 => {
            let (a, b, z) = (num(parts[0])?, num(parts[1])?, num(parts[3])?);
            if b <= a {
                return Err("progression must increase".into());
            }
            Ok((a..=z).step_by(b - a).collect())
        }
        Some(_) => Err("use `a,b,...,z` for a progression".into()),
    }
}

struct Resolved {
    machine: AnyMachine,
    oracle: Option<Oracle>,
    form: Option<Oracle>,
    epsilon: f64,
}

/// A library id, or else a machine file. A file whose `machine` name is
/// a library id borrows that entry's oracle.
fn resolve(args: &MachineArgs) -> Result<Resolved, String> {
    match library::build(&args.machine, args.epsilon) {
        Ok(e) => Ok(Resolved {
            machine: e.machine,
            oracle: Some(e.oracle),
            form: e.form,
            epsilon: e.epsilon.unwrap_or(args.epsilon),
        }),
        Err(library::LibraryError::UnknownId(_)) if Path::new(&args.machine).is_file() => {
            let text = std::fs::read_to_string(&args.machine).map_err(|e| format!("{}: {e}", args.machine))?;
            let machine = parse_machine(&text).map_err(|e| format!("{}: {e}", args.machine))?;
            let entry = library::build(machine.name(), args.epsilon).ok();
            Ok(Resolved {
                oracle: entry.as_ref().map(|e| e.oracle.clone()),
                form: entry.and_then(|e| e.form),
                machine,
                epsilon: args.epsilon,
            })
        }
        Err(library::LibraryError::UnknownId(id)) => Err(format!("`{id}` is neither a library id nor a file")),
        Err(e) => Err(e.to_string()),
    }
}

fn oracle_for(resolved: &Resolved, flag: Option<&str>, epsilon: f64) -> Result<(Oracle, Option<Oracle>), String> {
    match flag {
        Some(id) => library::build(id, epsilon)
            .map(|e| (e.oracle, e.form))
            .map_err(|e| e.to_string()),
        None => resolved
            .oracle
            .clone()
            .map(|o| (o, resolved.form.clone()))
            .ok_or_else(|| format!("no oracle for `{}`; pass --oracle <id>", resolved.machine.name())),
    }
}

/// Runs the command line `args` (including the program name), writing
/// to `out` and `err`, and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match command {
        Command::Run(a) => {
            let r = resolve(&a.machine)?;
            let options = RunOptions {
                mode: a.mode,
                trials: a.trials,
                seed: a.seed,
                max_steps: a.max_steps,
                mass_threshold: a.mass_threshold,
            };
            let report = run_report(&r.machine, &a.input, &options).map_err(|e| e.to_string())?;
            let text = match a.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(report.exit_code())
        }
        Command::Verify(a) => {
            let r = resolve(&a.machine)?;
            let (oracle, form) = oracle_for(&r, a.oracle.as_deref(), a.machine.epsilon)?;
            let options = ExactOptions {
                mass_threshold: a.mass_threshold,
                ..Default::default()
            };
            let report = verify(&r.machine, &oracle, form.as_ref(), r.epsilon, a.max_len, &options)
                .map_err(|e| e.to_string())?;
            out.write_all(report.to_text().as_bytes()).map_err(io)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Bench(a) => {
            let r = resolve(&a.machine)?;
            let AnyMachine::Classical(m) = &r.machine else {
                return Err("bench needs a classical machine".into());
            };
            let (oracle, _) = oracle_for(&r, a.oracle.as_deref(), a.machine.epsilon)?;
            let sizes = match &a.sizes {
                Some(s) => parse_sizes(s)?,
                None => default_sizes(),
            };
            let report = bench(m, &oracle, &sizes).map_err(|e| e.to_string())?;
            out.write_all(report.to_csv().as_bytes()).map_err(io)?;
            Ok(0)
        }
        Command::Export(a) => {
            let entry = library::build(&a.id, a.epsilon).map_err(|e| e.to_string())?;
            let text = export_machine(&entry.machine).map_err(|e| e.to_string())?;
            match a.path.as_deref() {
                None | Some("-") => out.write_all(text.as_bytes()).map_err(io)?,
                Some(path) => std::fs::write(path, text).map_err(|e| format!("{path}: {e}"))?,
            }
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("4,8,...,20").unwrap(), vec![4, 8, 12, 16, 20]);
        assert_eq!(parse_sizes("2, 6,12").unwrap(), vec![2, 6, 12]);
        assert!(parse_sizes("4,...,20").is_err());
        assert!(parse_sizes("8,4,...,20").is_err());
        assert!(parse_sizes("x").is_err());
    }
}
