//! Configurations and deterministic stepping of classical machines.

use smallvec::SmallVec;

use crate::error::{InputError, StepError};
use crate::machine::{ClassicalMachine, Control, StateId, Transition, Verdict, Word};
use crate::symbol::{MoveVector, TapeSymbol};

/// State, head positions, active tape and step count.
///
/// Head positions run from 0 (left end-marker) to `|w|+1` (right
/// end-marker). `active` is zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub heads: SmallVec<[usize; 4]>,
    pub active: usize,
    pub steps: u64,
}

impl Configuration {
    pub fn initial(control: &Control) -> Self {
        Configuration {
            state: control.initial(),
            heads: SmallVec::from_elem(0, control.tapes()),
            active: 0,
            steps: 0,
        }
    }

    /// Dense index of the scanned symbol.
    pub fn scan(&self, control: &Control, word: &Word) -> usize {
        let pos = self.heads[self.active];
        let letters = control.alphabet().len();
        if pos == 0 {
            letters + 2 * self.active
        } else if pos == word.len() + 1 {
            letters + 2 * self.active + 1
        } else {
            word.letter(pos - 1)
        }
    }

    pub fn scanned_symbol(&self, control: &Control, word: &Word) -> TapeSymbol {
        control.symbol_at(self.scan(control, word))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    Halted(Verdict),
}

/// Applies a move vector and target state to `config`, checking the
/// movement rule and the tape bounds. Counts one step.
pub(crate) fn apply_transition(
    control: &Control,
    config: &mut Configuration,
    target: StateId,
    moves: &MoveVector,
    len: usize,
    symbol: usize,
) -> Result<Status, StepError> {
    let from = config.state;
    match moves.moving_count() {
        0 => {}
        1 => {
            let (tape, dir) = moves.moving_tape().expect("one moving tape");
            let pos = config.heads[tape] as isize + dir.offset();
            if pos < 0 || pos > len as isize + 1 {
                return Err(StepError::HeadOutOfRange { tape, position: pos });
            }
            config.heads[tape] = pos as usize;
            config.active = tape;
        }
        _ => {
            return Err(StepError::MoveRule {
                state: control.state_name(from).to_string(),
                symbol: control.symbol_at(symbol),
            })
        }
    }
    config.state = target;
    config.steps += 1;
    Ok(match control.halting(target) {
        Some(v) => Status::Halted(v),
        None => Status::Running,
    })
}

pub(crate) fn undefined(control: &Control, config: &Configuration, symbol: usize) -> StepError {
    StepError::UndefinedTransition {
        state: control.state_name(config.state).to_string(),
        symbol: control.symbol_at(symbol),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunVerdict {
    Accept,
    Reject,
    StepLimit,
    MachineError(StepError),
}

impl RunVerdict {
    pub fn accepted(&self) -> bool {
        matches!(self, RunVerdict::Accept)
    }

    pub fn as_verdict(&self) -> Option<Verdict> {
        match self {
            RunVerdict::Accept => Some(Verdict::Accept),
            RunVerdict::Reject => Some(Verdict::Reject),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub verdict: RunVerdict,
    pub steps: u64,
    pub config: Configuration,
}

/// `64·(|w|+2)²`.
pub fn default_max_steps(len: usize) -> u64 {
    let l = len as u64 + 2;
    64 * l * l
}

impl ClassicalMachine {
    /// Performs one δ application in place.
    pub fn step(&self, config: &mut Configuration, word: &Word) -> Result<Status, StepError> {
        let control = self.control();
        if control.halting(config.state).is_some() {
            return Err(StepError::Halted(control.state_name(config.state).to_string()));
        }
        let sym = config.scan(control, word);
        let Transition { target, moves } = self
            .transition(config.state, sym)
            .ok_or_else(|| undefined(control, config, sym))?;
        apply_transition(control, config, *target, moves, word.len(), sym)
    }

    pub fn run_word(&self, word: &Word, max_steps: u64) -> RunOutcome {
        let mut config = Configuration::initial(self.control());
        if let Some(v) = self.control().halting(config.state) {
            return finish(Status::Halted(v), config);
        }
        while config.steps < max_steps {
            match self.step(&mut config, word) {
                Ok(Status::Running) => {}
                Ok(status) => return finish(status, config),
                Err(e) => {
                    return RunOutcome {
                        verdict: RunVerdict::MachineError(e),
                        steps: config.steps,
                        config,
                    }
                }
            }
        }
        RunOutcome {
            verdict: RunVerdict::StepLimit,
            steps: config.steps,
            config,
        }
    }

    /// Runs on `input` with the given step limit, or the default
    /// quadratic limit when `None`.
    pub fn run(&self, input: &str, max_steps: Option<u64>) -> Result<RunOutcome, InputError> {
        let word = self.control().encode(input)?;
        let limit = max_steps.unwrap_or_else(|| default_max_steps(word.len()));
        Ok(self.run_word(&word, limit))
    }

    pub fn accepts(&self, input: &str) -> Result<bool, InputError> {
        Ok(self.run(input, None)?.verdict.accepted())
    }
}

fn finish(status: Status, config: Configuration) -> RunOutcome {
    let verdict = match status {
        Status::Halted(Verdict::Accept) => RunVerdict::Accept,
        Status::Halted(Verdict::Reject) => RunVerdict::Reject,
        Status::Running => RunVerdict::StepLimit,
    };
    RunOutcome {
        verdict,
        steps: config.steps,
        config,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::MachineBuilder;

    fn walker() -> ClassicalMachine {
        // Moves tape 1 to the right end, then tape 2 one step, then accepts.
        let mut b = MachineBuilder::new("walker", 2, &['a', 'b']);
        b.states(["s0", "s1", "acc"]).initial("s0").accept("acc");
        for sym in ["LM1", "a", "b"] {
            b.delta("s0", sym, "s0", "RS").unwrap();
        }
        b.delta("s0", "RM1", "s1", "SR").unwrap();
        for sym in ["a", "b", "RM2"] {
            b.delta("s1", sym, "acc", "SS").unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn scanned_symbol_follows_active_tape() {
        let m = walker();
        let c = m.control();
        let w = c.encode("ab").unwrap();
        let mut cfg = Configuration::initial(c);
        assert_eq!(cfg.scanned_symbol(c, &w), TapeSymbol::LeftEnd(0));
        cfg.heads = SmallVec::from_slice(&[2, 0]);
        assert_eq!(cfg.scanned_symbol(c, &w), TapeSymbol::Letter('b'));
        cfg.heads = SmallVec::from_slice(&[3, 1]);
        cfg.active = 1;
        assert_eq!(cfg.scanned_symbol(c, &w), TapeSymbol::Letter('a'));
    }

    #[test]
    fn active_tape_switches_on_move() {
        let m = walker();
        let out = m.run("ab", None).unwrap();
        assert_eq!(out.verdict, RunVerdict::Accept);
        assert_eq!(out.steps, 5);
        assert_eq!(out.config.active, 1);
        assert_eq!(out.config.heads.as_slice(), &[3, 1]);
    }

    #[test]
    fn errors_become_machine_error_verdicts() {
        let mut b = MachineBuilder::new("bad", 1, &['a']);
        b.initial("s0");
        b.delta("s0", "LM1", "s0", "L").unwrap();
        let m = b.build().unwrap();
        let out = m.run("a", None).unwrap();
        assert!(matches!(
            out.verdict,
            RunVerdict::MachineError(StepError::HeadOutOfRange { position: -1, .. })
        ));
        let out = m.run("", Some(10)).unwrap();
        assert!(matches!(out.verdict, RunVerdict::MachineError(_)));

        let mut b = MachineBuilder::new("stuck", 1, &['a']);
        b.initial("s0");
        b.delta("s0", "LM1", "s0", "R").unwrap();
        let out = b.build().unwrap().run("a", None).unwrap();
        assert!(matches!(
            out.verdict,
            RunVerdict::MachineError(StepError::UndefinedTransition { .. })
        ));
    }

    #[test]
    fn step_limit() {
        let mut b = MachineBuilder::new("loop", 1, &['a']);
        b.initial("s0");
        b.delta("s0", "LM1", "s0", "S").unwrap();
        let out = b.build().unwrap().run("", Some(7)).unwrap();
        assert_eq!(out.verdict, RunVerdict::StepLimit);
        assert_eq!(out.steps, 7);
        assert_eq!(default_max_steps(0), 256);
    }
}
