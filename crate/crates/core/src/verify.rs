//! Exhaustive comparison of a machine against an oracle on all short
//! strings.

use std::fmt::Write as _;

use crate::engine::{run_exact, ExactOptions};
use crate::error::RunError;
use crate::library::AnyMachine;
use crate::machine::ClassicalMachine;
use crate::oracle::{enumerate, Oracle};
use crate::qcfa::QuantumClassicalMachine;
use crate::run::RunVerdict;

/// Reject mass a member may leave behind and still count as never
/// rejected.
pub const ONE_SIDED_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LengthRow {
    pub len: usize,
    pub strings: u64,
    pub members: u64,
    pub passed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub input: String,
    pub member: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub machine: String,
    pub oracle: String,
    pub rows: Vec<LengthRow>,
    pub counterexample: Option<Counterexample>,
}

impl VerifyReport {
    fn new(machine: &str, oracle: &Oracle, max_len: usize) -> Self {
        VerifyReport {
            machine: machine.to_string(),
            oracle: oracle.to_string(),
            rows: (0..=max_len).map(|len| LengthRow { len, ..Default::default() }).collect(),
            counterexample: None,
        }
    }

    fn record(&mut self, input: &str, member: bool, failure: Option<String>) {
        let row = &mut self.rows[input.chars().count()];
        row.strings += 1;
        row.members += u64::from(member);
        match failure {
            None => row.passed += 1,
            Some(detail) => {
                if self.counterexample.is_none() {
                    self.counterexample = Some(Counterexample {
                        input: input.to_string(),
                        member,
                        detail,
                    });
                }
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn strings(&self) -> u64 {
        self.rows.iter().map(|r| r.strings).sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} against {}\n", self.machine, self.oracle);
        out.push_str("length  strings  members  passed\n");
        for r in &self.rows {
            writeln!(out, "{:>6}  {:>7}  {:>7}  {:>6}", r.len, r.strings, r.members, r.passed).unwrap();
        }
        match &self.counterexample {
            None => writeln!(out, "PASS {} strings", self.strings()).unwrap(),
            Some(c) => {
                let kind = if c.member { "member" } else { "non-member" };
                writeln!(out, "FAIL on {:?} ({kind}): {}", c.input, c.detail).unwrap()
            }
        }
        out
    }
}

/// Verdicts must equal membership for every string over the machine's
/// alphabet up to `max_len`.
pub fn verify_classical(m: &ClassicalMachine, oracle: &Oracle, max_len: usize) -> VerifyReport {
    let mut report = VerifyReport::new(m.name(), oracle, max_len);
    for w in enumerate(m.control().alphabet(), max_len) {
        let member = oracle.member(&w);
        let verdict = m.run(&w, None).expect("letters come from the alphabet").verdict;
        let failure = match (&verdict, member) {
            (RunVerdict::Accept, true) | (RunVerdict::Reject, false) => None,
            (v, _) => Some(format!("machine says {v:?}")),
        };
        report.record(&w, member, failure);
    }
    report
}

/// Exact-mode check of a one-sided-error machine: members are never
/// rejected and accepted with mass at least `1 - epsilon - unresolved`;
/// non-members are rejected with mass at least `1 - epsilon - unresolved`;
/// strings outside `form` are rejected with mass 1.
pub fn verify_quantum(
    m: &QuantumClassicalMachine,
    oracle: &Oracle,
    form: Option<&Oracle>,
    epsilon: f64,
    max_len: usize,
    options: &ExactOptions,
) -> Result<VerifyReport, RunError> {
    let mut report = VerifyReport::new(m.name(), oracle, max_len);
    for w in enumerate(m.control().alphabet(), max_len) {
        let member = oracle.member(&w);
        let out = run_exact(m, &w, options)?;
        let bound = 1.0 - epsilon - out.unresolved_mass;
        let masses = format!(
            "accept {:.9}, reject {:.9}, unresolved {:.3e}",
            out.accept_mass, out.reject_mass, out.unresolved_mass
        );
        let ok = if member {
            out.reject_mass <= ONE_SIDED_TOLERANCE && out.accept_mass >= bound
        } else if form.is_some_and(|f| !f.member(&w)) {
            out.reject_mass >= 1.0 - ONE_SIDED_TOLERANCE
        } else {
            out.reject_mass >= bound
        };
        report.record(&w, member, (!ok).then_some(masses));
    }
    Ok(report)
}

/// Dispatches on the machine kind.
pub fn verify(
    machine: &AnyMachine,
    oracle: &Oracle,
    form: Option<&Oracle>,
    epsilon: f64,
    max_len: usize,
    options: &ExactOptions,
) -> Result<VerifyReport, RunError> {
    match machine {
        AnyMachine::Classical(m) => Ok(verify_classical(m, oracle, max_len)),
        AnyMachine::Quantum(m) => verify_quantum(m, oracle, form, epsilon, max_len, options),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn leq_passes_and_a_wrong_oracle_fails() {
        let m = library::leq().unwrap();
        let r = verify_classical(&m, &Oracle::Leq, 6);
        assert!(r.passed());
        assert_eq!(r.strings(), 127);
        assert_eq!(r.rows[4].members, 1);
        let r = verify_classical(&m, &Oracle::BalanceCount, 6);
        let c = r.counterexample.unwrap();
        assert_eq!((c.input.as_str(), c.member), ("ba", true));
    }

    #[test]
    fn quantum_short_strings() {
        let entry = library::build("lsquare-2tqcfa", 0.125).unwrap();
        let AnyMachine::Quantum(m) = &entry.machine else { panic!() };
        let r = verify_quantum(m, &entry.oracle, entry.form.as_ref(), 0.125, 3, &ExactOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}
