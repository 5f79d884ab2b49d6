//! Ready-made machines for the languages in [`crate::oracle`], addressed
//! by string ids such as `leq`, `leq-k2` or `kpow-tqcfa3`.

pub mod classical;
pub mod counter;
pub mod kpow_q;
pub mod linear;
pub mod lsquare;

use std::fmt;

use crate::error::BuildError;
use crate::machine::{ClassicalMachine, Control, MachineBuilder};
use crate::oracle::{Oracle, Restriction};
use crate::qcfa::{QuantumBuilder, QuantumClassicalMachine};

pub use classical::{lbalance_count, lbalanced, lcopy, leq, leq_k, lmiddle, lpal, ltrieq, meq};
pub use counter::{kpow_tfa, lsquare_3tfa, multiple_tfa};
pub use kpow_q::kpow_tqcfa;
pub use linear::llinear;
pub use lsquare::{coin_flips_for, lsquare_2tqcfa};

pub const DEFAULT_EPSILON: f64 = 0.125;

#[derive(Debug, Clone, PartialEq)]
pub enum AnyMachine {
    Classical(ClassicalMachine),
    Quantum(QuantumClassicalMachine),
}

impl AnyMachine {
    pub fn control(&self) -> &Control {
        match self {
            AnyMachine::Classical(m) => m.control(),
            AnyMachine::Quantum(m) => m.control(),
        }
    }

    pub fn name(&self) -> &str {
        self.control().name()
    }

    pub fn is_quantum(&self) -> bool {
        matches!(self, AnyMachine::Quantum(_))
    }
}

/// Growth of the running time in the input length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeBound {
    Linear,
    /// Expected time polynomial in the input length.
    ExpectedPolynomial,
}

#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub id: String,
    pub machine: AnyMachine,
    pub oracle: Oracle,
    /// For quantum machines, the shape checked deterministically before
    /// the probabilistic part starts.
    pub form: Option<Oracle>,
    pub bound: TimeBound,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LibraryError {
    #[error("no library machine named `{0}`")]
    UnknownId(String),
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// A representative instance of every family, in a stable order.
pub const IDS: &[&str] = &[
    "leq",
    "lpal",
    "ltrieq",
    "leq-k2",
    "leq-k3",
    "meq",
    "lbalance-count",
    "llinear-eq",
    "llinear-trieq",
    "llinear-eq-k2",
    "lcopy",
    "lmiddle",
    "lbalanced",
    "lsquare-3tfa",
    "kpow-tfa1",
    "kpow-tfa2",
    "kpow-tfa3",
    "multiple-tfa1",
    "multiple-tfa2",
    "multiple-tfa3",
    "lsquare-2tqcfa",
    "kpow-tqcfa2",
    "kpow-tqcfa3",
];

/// Splits `leq-k2` or `leq-k(2)` into (`leq-k`, 2).
fn split_param(id: &str) -> Option<(String, u32)> {
    let plain: String = id.chars().filter(|c| *c != '(' && *c != ')').collect();
    let head = plain.trim_end_matches(|c: char| c.is_ascii_digit());
    let k = plain[head.len()..].parse().ok()?;
    Some((head.to_string(), k))
}

/// Builds the machine with the given id. `epsilon` only matters for the
/// quantum machines.
pub fn build(id: &str, epsilon: f64) -> Result<LibraryEntry, LibraryError> {
    let classical = |m: ClassicalMachine, oracle: Oracle| LibraryEntry {
        id: id.to_string(),
        machine: AnyMachine::Classical(m),
        oracle,
        form: None,
        bound: TimeBound::Linear,
        epsilon: None,
    };
    if id.contains("tqcfa") && !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(LibraryError::Epsilon(epsilon));
    }
    let entry = match id {
        "leq" => classical(leq()?, Oracle::Leq),
        "lpal" => classical(lpal()?, Oracle::Lpal),
        "ltrieq" => classical(ltrieq()?, Oracle::Ltrieq),
        "meq" => classical(meq()?, Oracle::Meq),
        "lbalance-count" => classical(lbalance_count()?, Oracle::BalanceCount),
        "llinear-eq" | "llinear-trieq" => {
            let (alphabet, restrictions) = linear_instance(id, 0);
            let m = llinear(id, &alphabet, &restrictions)?;
            classical(m, Oracle::Linear { alphabet, restrictions })
        }
        "lcopy" => classical(lcopy()?, Oracle::Copy),
        "lmiddle" => classical(lmiddle()?, Oracle::Middle),
        "lbalanced" => classical(lbalanced()?, Oracle::Balanced),
        "lsquare-3tfa" => classical(lsquare_3tfa()?, Oracle::Kpow(2)),
        "lsquare-2tqcfa" => quantum(id, lsquare_2tqcfa(epsilon)?, 2, epsilon)?,
        _ => match split_param(id) {
            Some((family, k)) if k >= 1 => match family.as_str() {
                "leq-k" => classical(leq_k(k)?, Oracle::LeqK(k)),
                "llinear-eq-k" => {
                    let (alphabet, restrictions) = linear_instance("llinear-eq-k", k);
                    let m = llinear(id, &alphabet, &restrictions)?;
                    classical(m, Oracle::Linear { alphabet, restrictions })
                }
                "kpow-tfa" => classical(kpow_tfa(k)?, Oracle::Kpow(k)),
                "multiple-tfa" => classical(multiple_tfa(k)?, Oracle::Multiple(k)),
                "kpow-tqcfa" if k >= 2 => quantum(id, kpow_tqcfa(k, epsilon)?, k, epsilon)?,
                _ => return Err(LibraryError::UnknownId(id.to_string())),
            },
            _ => return Err(LibraryError::UnknownId(id.to_string())),
        },
    };
    Ok(entry)
}

fn quantum(
    id: &str,
    m: QuantumClassicalMachine,
    k: u32,
    epsilon: f64,
) -> Result<LibraryEntry, LibraryError> {
    Ok(LibraryEntry {
        id: id.to_string(),
        machine: AnyMachine::Quantum(m),
        oracle: Oracle::Kpow(k),
        form: Some(Oracle::QuantumForm(k)),
        bound: TimeBound::ExpectedPolynomial,
        epsilon: Some(epsilon),
    })
}

fn linear_instance(id: &str, k: u32) -> (Vec<char>, Vec<Restriction>) {
    match id {
        "llinear-eq" => (vec!['a', 'b'], vec![Restriction::new(0, 1, &[1])]),
        "llinear-trieq" => (
            vec!['a', 'b', 'c'],
            vec![Restriction::new(0, 1, &[1]), Restriction::new(1, 1, &[2])],
        ),
        _ => (vec!['a', 'b'], vec![Restriction::new(1, k, &[0])]),
    }
}

/// Every id in [`IDS`] with its entry, using the default epsilon.
pub fn all() -> Result<Vec<LibraryEntry>, LibraryError> {
    IDS.iter().map(|id| build(id, DEFAULT_EPSILON)).collect()
}

/// Uniform access to classical and quantum builders for generated
/// tables. Classical transitions on a quantum machine get Θ = identity.
pub(crate) trait Table {
    fn put(&mut self, from: &str, sym: &str, to: &str, moves: &str) -> Result<(), BuildError>;

    /// Like `put`, with Θ set to the named unitary when `op` is given.
    fn put_op(
        &mut self,
        op: Option<&str>,
        from: &str,
        sym: &str,
        to: &str,
        moves: &str,
    ) -> Result<(), BuildError> {
        match op {
            None => self.put(from, sym, to, moves),
            Some(op) => Err(BuildError::UnknownOperation(op.to_string())),
        }
    }

    fn rows(&mut self, rows: &[(&str, &str, &str, &str)]) -> Result<(), BuildError> {
        for (from, sym, to, moves) in rows {
            self.put(from, sym, to, moves)?;
        }
        Ok(())
    }
}

impl Table for MachineBuilder {
    fn put(&mut self, from: &str, sym: &str, to: &str, moves: &str) -> Result<(), BuildError> {
        self.delta(from, sym, to, moves).map(|_| ())
    }
}

impl Table for QuantumBuilder {
    fn put(&mut self, from: &str, sym: &str, to: &str, moves: &str) -> Result<(), BuildError> {
        self.delta(from, sym, to, moves).map(|_| ())
    }

    fn put_op(
        &mut self,
        op: Option<&str>,
        from: &str,
        sym: &str,
        to: &str,
        moves: &str,
    ) -> Result<(), BuildError> {
        match op {
            None => self.put(from, sym, to, moves),
            Some(op) => self.theta_unitary(from, sym, op, to, moves).map(|_| ()),
        }
    }
}

/// Move code where only `tape` moves, e.g. `mv(3, 1, 'R') == "SRS"`.
pub(crate) fn mv(tapes: usize, tape: usize, dir: char) -> String {
    (0..tapes).map(|t| if t == tape { dir } else { 'S' }).collect()
}

pub(crate) fn stay(tapes: usize) -> String {
    "S".repeat(tapes)
}

pub(crate) fn lm(tape: usize) -> String {
    format!("LM{}", tape + 1)
}

impl fmt::Display for TimeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeBound::Linear => f.write_str("linear"),
            TimeBound::ExpectedPolynomial => f.write_str("expected polynomial"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_resolve() {
        for id in IDS {
            let e = build(id, DEFAULT_EPSILON).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert_eq!(e.id, *id);
        }
        assert!(build("leq-k(2)", DEFAULT_EPSILON).is_ok());
        assert!(matches!(build("nope", 0.1), Err(LibraryError::UnknownId(_))));
        assert!(matches!(build("leq-k0", 0.1), Err(LibraryError::UnknownId(_))));
        assert!(matches!(build("lsquare-2tqcfa", 1.5), Err(LibraryError::Epsilon(_))));
    }

    #[test]
    fn move_codes() {
        assert_eq!(mv(3, 1, 'R'), "SRS");
        assert_eq!(stay(2), "SS");
    }
}
