//! Multi-tape two-way finite automata with a constant-size quantum
//! register: Θ picks a unitary or a measurement per (state, symbol) and δ
//! picks the classical move, once per measurement result.

use std::collections::HashMap;

use crate::error::{BuildError, StepError};
use crate::machine::{
    validate_control, validate_entries, Control, ControlBuilder, StateId, Transition,
    ValidationReport, Verdict, Word,
};
use crate::quantum::{ProjectiveMeasurement, QuantumRegister, UnitaryOp};
use crate::run::{apply_transition, undefined, Configuration, Status};
use crate::symbol::{MoveVector, TapeSymbol};

/// Branches with probability at or below this are dropped.
pub const BRANCH_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Operation {
    Unitary(UnitaryOp),
    Measure(ProjectiveMeasurement),
}

impl Operation {
    pub fn dim(&self) -> usize {
        match self {
            Operation::Unitary(u) => u.dim(),
            Operation::Measure(m) => m.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedOperation {
    pub name: String,
    pub op: Operation,
}

/// Θ together with the matching δ entries for one (state, symbol) pair.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumAction {
    Unitary { op: usize, next: Transition },
    /// One transition per measurement result, in result order.
    Measure { op: usize, branches: Vec<Transition> },
}

impl QuantumAction {
    pub fn op(&self) -> usize {
        match self {
            QuantumAction::Unitary { op, .. } | QuantumAction::Measure { op, .. } => *op,
        }
    }

    pub fn transitions(&self) -> Vec<&Transition> {
        match self {
            QuantumAction::Unitary { next, .. } => vec![next],
            QuantumAction::Measure { branches, .. } => branches.iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumClassicalMachine {
    control: Control,
    qstates: Vec<String>,
    qinitial: usize,
    ops: Vec<NamedOperation>,
    actions: Vec<Option<QuantumAction>>,
}

impl QuantumClassicalMachine {
    pub fn control(&self) -> &Control {
        &self.control
    }

    pub fn name(&self) -> &str {
        self.control.name()
    }

    pub fn tapes(&self) -> usize {
        self.control.tapes()
    }

    pub fn qstates(&self) -> &[String] {
        &self.qstates
    }

    pub fn qinitial(&self) -> usize {
        self.qinitial
    }

    pub fn dim(&self) -> usize {
        self.qstates.len()
    }

    pub fn operations(&self) -> &[NamedOperation] {
        &self.ops
    }

    pub fn operation(&self, index: usize) -> &NamedOperation {
        &self.ops[index]
    }

    pub fn action(&self, state: StateId, symbol: usize) -> Option<&QuantumAction> {
        self.actions[self.control.slot(state, symbol)].as_ref()
    }

    pub fn lookup(&self, state: &str, symbol: &str) -> Option<&QuantumAction> {
        let s = self.control.state_id(state)?;
        let sym = self.control.symbol_index(TapeSymbol::parse_token(symbol).ok()?)?;
        self.action(s, sym)
    }

    /// All defined actions in canonical order.
    pub fn actions(&self) -> impl Iterator<Item = (StateId, TapeSymbol, &QuantumAction)> + '_ {
        let n = self.control.symbol_count();
        self.actions.iter().enumerate().filter_map(move |(slot, a)| {
            a.as_ref()
                .map(|a| (StateId((slot / n) as u32), self.control.symbol_at(slot % n), a))
        })
    }

    pub fn initial_register(&self) -> QuantumRegister {
        QuantumRegister::basis(self.dim(), self.qinitial)
    }

    pub fn initial_node(&self) -> BranchNode {
        BranchNode {
            config: Configuration::initial(&self.control),
            register: self.initial_register(),
            probability: 1.0,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = validate_control(&self.control);
        let entries = self.actions().map(|(s, sym, a)| (s, sym, a.transitions()));
        validate_entries(&self.control, entries, &mut report);
        for op in &self.ops {
            if op.op.dim() != self.dim() {
                report.push(
                    crate::machine::IssueKind::InvalidOperator,
                    crate::machine::Severity::Violation,
                    format!("operation `{}` has dimension {}", op.name, op.op.dim()),
                );
            }
        }
        report
    }

    /// Applies Θ and δ for one step. A unitary yields one successor; a
    /// measurement yields one successor per result whose probability
    /// exceeds [`BRANCH_EPSILON`].
    pub fn step(&self, node: &BranchNode, word: &Word) -> Result<StepBranches, StepError> {
        let control = &self.control;
        let config = &node.config;
        if control.halting(config.state).is_some() {
            return Err(StepError::Halted(control.state_name(config.state).to_string()));
        }
        let sym = config.scan(control, word);
        let action = self
            .action(config.state, sym)
            .ok_or_else(|| undefined(control, config, sym))?;
        let mut out = StepBranches::default();
        match action {
            QuantumAction::Unitary { op, next } => {
                let Operation::Unitary(u) = &self.ops[*op].op else {
                    unreachable!("unitary action bound to a measurement")
                };
                let register = node.register.apply(u)?;
                let mut config = config.clone();
                let status =
                    apply_transition(control, &mut config, next.target, &next.moves, word.len(), sym)?;
                out.successors.push((
                    BranchNode {
                        config,
                        register,
                        probability: node.probability,
                    },
                    status,
                ));
            }
            QuantumAction::Measure { op, branches } => {
                let Operation::Measure(m) = &self.ops[*op].op else {
                    unreachable!("measure action bound to a unitary")
                };
                let probs = node.register.probabilities(m)?;
                for (i, (&p, t)) in probs.iter().zip(branches).enumerate() {
                    if p <= BRANCH_EPSILON {
                        out.dropped += p.max(0.0) * node.probability;
                        continue;
                    }
                    let register = node.register.collapse(m, i)?;
                    let mut config = config.clone();
                    let status =
                        apply_transition(control, &mut config, t.target, &t.moves, word.len(), sym)?;
                    out.successors.push((
                        BranchNode {
                            config,
                            register,
                            probability: node.probability * p,
                        },
                        status,
                    ));
                    out.results.push(i);
                }
            }
        }
        Ok(out)
    }
}

/// A classical configuration, a register and the probability of the path
/// that led to them.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchNode {
    pub config: Configuration,
    pub register: QuantumRegister,
    pub probability: f64,
}

impl BranchNode {
    pub fn halted(&self, control: &Control) -> Option<Verdict> {
        control.halting(self.config.state)
    }
}

#[derive(Debug, Clone, Default)]
pub struct StepBranches {
    pub successors: Vec<(BranchNode, Status)>,
    /// Measurement result index of each successor; empty for unitaries.
    pub results: Vec<usize>,
    /// Path mass lost to negligible branches.
    pub dropped: f64,
}

#[derive(Debug, Clone)]
struct PendingEntry {
    op: usize,
    next: Option<Transition>,
    branches: Vec<Option<Transition>>,
}

/// Builder for [`QuantumClassicalMachine`].
///
/// Pairs whose Θ is the identity can be added with [`QuantumBuilder::delta`],
/// which binds them to an identity operation named `I`.
#[derive(Debug, Clone)]
pub struct QuantumBuilder {
    control: ControlBuilder,
    qstates: Vec<String>,
    qinitial: usize,
    ops: Vec<NamedOperation>,
    op_index: HashMap<String, usize>,
    entries: HashMap<(StateId, TapeSymbol), PendingEntry>,
}

pub const IDENTITY_OP: &str = "I";

impl QuantumBuilder {
    pub fn new(name: &str, tapes: usize, alphabet: &[char], qstates: &[&str]) -> Self {
        QuantumBuilder {
            control: ControlBuilder::new(name, tapes, alphabet),
            qstates: qstates.iter().map(|s| s.to_string()).collect(),
            qinitial: 0,
            ops: Vec::new(),
            op_index: HashMap::new(),
            entries: HashMap::new(),
        }
    }

    pub fn control(&mut self) -> &mut ControlBuilder {
        &mut self.control
    }

    pub fn states<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) -> &mut Self {
        for n in names {
            self.control.state(n);
        }
        self
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.control.initial(name);
        self
    }

    pub fn accept(&mut self, name: &str) -> &mut Self {
        self.control.accept(name);
        self
    }

    pub fn reject(&mut self, name: &str) -> &mut Self {
        self.control.reject(name);
        self
    }

    pub fn set_qstates(&mut self, names: &[&str]) -> &mut Self {
        self.qstates = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn qinitial(&mut self, name: &str) -> Result<&mut Self, BuildError> {
        self.qinitial = self
            .qstates
            .iter()
            .position(|q| q == name)
            .ok_or_else(|| BuildError::UnknownState(name.to_string()))?;
        Ok(self)
    }

    pub fn unitary(&mut self, name: &str, op: UnitaryOp) -> Result<&mut Self, BuildError> {
        self.add_op(name, Operation::Unitary(op))?;
        Ok(self)
    }

    pub fn measure(&mut self, name: &str, m: ProjectiveMeasurement) -> Result<&mut Self, BuildError> {
        self.add_op(name, Operation::Measure(m))?;
        Ok(self)
    }

    fn add_op(&mut self, name: &str, op: Operation) -> Result<usize, BuildError> {
        if self.op_index.contains_key(name) {
            return Err(BuildError::InvalidParameter(format!(
                "operation `{name}` declared twice"
            )));
        }
        if op.dim() != self.qstates.len() {
            return Err(crate::error::QuantumError::DimensionMismatch {
                expected: self.qstates.len(),
                found: op.dim(),
            }
            .into());
        }
        let idx = self.ops.len();
        self.ops.push(NamedOperation {
            name: name.to_string(),
            op,
        });
        self.op_index.insert(name.to_string(), idx);
        Ok(idx)
    }

    fn identity_op(&mut self) -> Result<usize, BuildError> {
        match self.op_index.get(IDENTITY_OP) {
            Some(&i) => Ok(i),
            None => self.add_op(IDENTITY_OP, Operation::Unitary(UnitaryOp::identity(self.qstates.len()))),
        }
    }

    /// Declares Θ(from, symbol) = the named operation.
    pub fn theta(&mut self, from: &str, symbol: &str, op: &str) -> Result<&mut Self, BuildError> {
        let sym = self.control.symbol(symbol)?;
        let from = self.control.state(from);
        self.theta_id(from, sym, op)?;
        Ok(self)
    }

    pub fn theta_id(&mut self, from: StateId, sym: TapeSymbol, op: &str) -> Result<(), BuildError> {
        let op = *self
            .op_index
            .get(op)
            .ok_or_else(|| BuildError::UnknownOperation(op.to_string()))?;
        self.control.check_symbol(sym)?;
        if self.entries.contains_key(&(from, sym)) {
            return Err(self.duplicate(from, sym));
        }
        let results = match &self.ops[op].op {
            Operation::Unitary(_) => 0,
            Operation::Measure(m) => m.outcomes(),
        };
        self.entries.insert(
            (from, sym),
            PendingEntry {
                op,
                next: None,
                branches: vec![None; results],
            },
        );
        Ok(())
    }

    /// Adds the δ entry for a pair whose Θ was declared. `result` must be
    /// given exactly when Θ is a measurement.
    pub fn delta_for(
        &mut self,
        from: StateId,
        sym: TapeSymbol,
        result: Option<&str>,
        to: StateId,
        moves: MoveVector,
    ) -> Result<(), BuildError> {
        let tapes = self.control.tapes();
        if moves.tapes() != tapes {
            return Err(BuildError::Arity {
                code: moves.code(),
                found: moves.tapes(),
                tapes,
            });
        }
        let state_name = |b: &Self| b.control_state_name(from);
        let Some(entry) = self.entries.get(&(from, sym)) else {
            return Err(BuildError::ThetaDeltaMismatch(format!(
                "delta for ({}, {sym}) has no theta",
                state_name(self)
            )));
        };
        let transition = Transition { target: to, moves };
        match (&self.ops[entry.op].op, result) {
            (Operation::Unitary(_), None) => {
                if entry.next.is_some() {
                    return Err(self.duplicate(from, sym));
                }
                self.entries.get_mut(&(from, sym)).expect("present").next = Some(transition);
            }
            (Operation::Measure(m), Some(label)) => {
                let i = m.label_index(label).ok_or_else(|| {
                    BuildError::ThetaDeltaMismatch(format!(
                        "measurement `{}` has no result `{label}`",
                        self.ops[entry.op].name
                    ))
                })?;
                if entry.branches[i].is_some() {
                    return Err(self.duplicate(from, sym));
                }
                self.entries.get_mut(&(from, sym)).expect("present").branches[i] = Some(transition);
            }
            (Operation::Unitary(_), Some(label)) => {
                return Err(BuildError::ThetaDeltaMismatch(format!(
                    "({}, {sym}) is unitary but delta names result `{label}`",
                    state_name(self)
                )))
            }
            (Operation::Measure(_), None) => {
                return Err(BuildError::ThetaDeltaMismatch(format!(
                    "({}, {sym}) is a measurement but delta names no result",
                    state_name(self)
                )))
            }
        }
        Ok(())
    }

    fn control_state_name(&self, id: StateId) -> String {
        self.control.state_names()[id.index()].clone()
    }

    fn duplicate(&self, from: StateId, sym: TapeSymbol) -> BuildError {
        BuildError::DuplicateTransition {
            state: self.control_state_name(from),
            symbol: sym.to_string(),
        }
    }

    /// Θ = named unitary together with its δ entry.
    pub fn theta_unitary(
        &mut self,
        from: &str,
        symbol: &str,
        op: &str,
        to: &str,
        moves: &str,
    ) -> Result<&mut Self, BuildError> {
        let sym = self.control.symbol(symbol)?;
        let moves = self.control.moves(moves)?;
        let from = self.control.state(from);
        let to = self.control.state(to);
        self.theta_id(from, sym, op)?;
        self.delta_for(from, sym, None, to, moves)?;
        Ok(self)
    }

    /// Θ = named measurement with one (result, target, moves) per result.
    pub fn theta_measure(
        &mut self,
        from: &str,
        symbol: &str,
        op: &str,
        branches: &[(&str, &str, &str)],
    ) -> Result<&mut Self, BuildError> {
        let sym = self.control.symbol(symbol)?;
        let from_id = self.control.state(from);
        self.theta_id(from_id, sym, op)?;
        for (label, to, moves) in branches {
            let moves = self.control.moves(moves)?;
            let to = self.control.state(to);
            self.delta_for(from_id, sym, Some(label), to, moves)?;
        }
        Ok(self)
    }

    /// A classical transition: Θ is the identity.
    pub fn delta(&mut self, from: &str, symbol: &str, to: &str, moves: &str) -> Result<&mut Self, BuildError> {
        self.identity_op()?;
        self.theta_unitary(from, symbol, IDENTITY_OP, to, moves)
    }

    pub fn build(self) -> Result<QuantumClassicalMachine, BuildError> {
        if self.qstates.is_empty() {
            return Err(BuildError::InvalidParameter("no quantum basis states".into()));
        }
        let names = self.control.state_names().to_vec();
        let control = self.control.build()?;
        let mut actions = vec![None; control.states().len() * control.symbol_count()];
        for ((state, sym), entry) in self.entries {
            let missing = || {
                BuildError::ThetaDeltaMismatch(format!(
                    "({}, {sym}) has theta `{}` but incomplete delta",
                    names[state.index()],
                    self.ops[entry.op].name
                ))
            };
            let action = match &self.ops[entry.op].op {
                Operation::Unitary(_) => QuantumAction::Unitary {
                    op: entry.op,
                    next: entry.next.clone().ok_or_else(missing)?,
                },
                Operation::Measure(_) => QuantumAction::Measure {
                    op: entry.op,
                    branches: entry
                        .branches
                        .iter()
                        .cloned()
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(missing)?,
                },
            };
            let idx = control
                .symbol_index(sym)
                .ok_or_else(|| BuildError::UnknownSymbol(sym.to_string()))?;
            actions[control.slot(state, idx)] = Some(action);
        }
        Ok(QuantumClassicalMachine {
            control,
            qstates: self.qstates,
            qinitial: self.qinitial,
            ops: self.ops,
            actions,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;

    fn coin() -> QuantumClassicalMachine {
        let mut b = QuantumBuilder::new("coin", 1, &['a'], &["q0", "q1"]);
        b.states(["s0", "s1", "acc", "rej"]).initial("s0").accept("acc").reject("rej");
        b.unitary("H", UnitaryOp::hadamard()).unwrap();
        b.measure("M", ProjectiveMeasurement::standard(2)).unwrap();
        b.theta_unitary("s0", "LM1", "H", "s1", "S").unwrap();
        b.theta_measure("s1", "LM1", "M", &[("0", "acc", "S"), ("1", "rej", "S")]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn measurement_branches() {
        let m = coin();
        assert!(m.validate().is_valid());
        let w = m.control().encode("").unwrap();
        let first = m.step(&m.initial_node(), &w).unwrap();
        assert_eq!(first.successors.len(), 1);
        let (node, status) = &first.successors[0];
        assert_eq!(*status, Status::Running);
        let second = m.step(node, &w).unwrap();
        assert_eq!(second.successors.len(), 2);
        assert_eq!(second.results, vec![0, 1]);
        for (n, s) in &second.successors {
            assert!((n.probability - 0.5).abs() < 1e-12);
            assert!(matches!(s, Status::Halted(_)));
            assert_eq!(n.config.steps, 2);
        }
    }

    #[test]
    fn zero_probability_branch_is_dropped() {
        let mut b = QuantumBuilder::new("det", 1, &['a'], &["q0", "q1"]);
        b.initial("s0").accept("acc").reject("rej");
        b.measure("M", ProjectiveMeasurement::standard(2)).unwrap();
        b.theta_measure("s0", "LM1", "M", &[("0", "acc", "S"), ("1", "rej", "S")]).unwrap();
        let m = b.build().unwrap();
        let w = m.control().encode("").unwrap();
        let out = m.step(&m.initial_node(), &w).unwrap();
        assert_eq!(out.successors.len(), 1);
        assert_eq!(out.successors[0].1, Status::Halted(Verdict::Accept));
    }

    #[test]
    fn theta_delta_consistency() {
        let mut b = QuantumBuilder::new("bad", 1, &['a'], &["q0", "q1"]);
        b.initial("s0");
        b.unitary("U", UnitaryOp::rotation(Angle::sqrt2_pi(1))).unwrap();
        b.measure("M", ProjectiveMeasurement::standard(2)).unwrap();
        let s0 = b.control().state("s0");
        let lm = TapeSymbol::LeftEnd(0);
        let err = b.delta_for(s0, lm, None, s0, MoveVector::stationary(1));
        assert!(matches!(err, Err(BuildError::ThetaDeltaMismatch(_))));
        b.theta("s0", "LM1", "M").unwrap();
        let err = b.delta_for(s0, lm, None, s0, MoveVector::stationary(1));
        assert!(matches!(err, Err(BuildError::ThetaDeltaMismatch(_))));
        let err = b.delta_for(s0, lm, Some("7"), s0, MoveVector::stationary(1));
        assert!(matches!(err, Err(BuildError::ThetaDeltaMismatch(_))));
        b.delta_for(s0, lm, Some("0"), s0, MoveVector::stationary(1)).unwrap();
        assert!(matches!(b.clone().build(), Err(BuildError::ThetaDeltaMismatch(_))));
        assert!(matches!(b.theta("s0", "a", "X"), Err(BuildError::UnknownOperation(_))));
    }
}
