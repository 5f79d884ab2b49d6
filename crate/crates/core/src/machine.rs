//! Classical multi-tape machines: control data, transition tables and
//! structural validation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{BuildError, InputError};
use crate::symbol::{MoveVector, TapeSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

/// The finite control shared by classical and quantum-classical machines:
/// states, alphabet, tape count, initial state and halting sets.
///
/// Symbols are indexed densely: letters first in alphabet order, then
/// `LM1, RM1, LM2, RM2, ...`. This is also the canonical export order.
#[derive(Debug, Clone, PartialEq)]
pub struct Control {
    name: String,
    tapes: usize,
    alphabet: Vec<char>,
    states: Vec<String>,
    initial: StateId,
    accepting: Vec<StateId>,
    rejecting: Vec<StateId>,
    halting: Vec<Option<Verdict>>,
}

impl Control {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tapes(&self) -> usize {
        self.tapes
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u32))
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accepting(&self) -> &[StateId] {
        &self.accepting
    }

    pub fn rejecting(&self) -> &[StateId] {
        &self.rejecting
    }

    /// Accepting membership wins if a state was (wrongly) placed in both sets.
    pub fn halting(&self, id: StateId) -> Option<Verdict> {
        self.halting[id.index()]
    }

    pub fn symbol_count(&self) -> usize {
        self.alphabet.len() + 2 * self.tapes
    }

    pub fn symbol_index(&self, symbol: TapeSymbol) -> Option<usize> {
        let letters = self.alphabet.len();
        match symbol {
            TapeSymbol::Letter(c) => self.alphabet.iter().position(|&x| x == c),
            TapeSymbol::LeftEnd(t) if t < self.tapes => Some(letters + 2 * t),
            TapeSymbol::RightEnd(t) if t < self.tapes => Some(letters + 2 * t + 1),
            _ => None,
        }
    }

    pub fn symbol_at(&self, index: usize) -> TapeSymbol {
        let letters = self.alphabet.len();
        if index < letters {
            TapeSymbol::Letter(self.alphabet[index])
        } else {
            let k = index - letters;
            if k % 2 == 0 {
                TapeSymbol::LeftEnd(k / 2)
            } else {
                TapeSymbol::RightEnd(k / 2)
            }
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = TapeSymbol> + '_ {
        (0..self.symbol_count()).map(|i| self.symbol_at(i))
    }

    pub(crate) fn slot(&self, state: StateId, symbol: usize) -> usize {
        state.index() * self.symbol_count() + symbol
    }

    pub fn encode(&self, input: &str) -> Result<Word, InputError> {
        input
            .chars()
            .map(|c| {
                self.alphabet
                    .iter()
                    .position(|&x| x == c)
                    .map(|i| i as u16)
                    .ok_or(InputError::LetterNotInAlphabet(c))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|letters| Word { letters })
    }
}

/// An input string encoded against a machine's alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u16>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, i: usize) -> usize {
        self.letters[i] as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub target: StateId,
    pub moves: MoveVector,
}

/// A deterministic m-tape two-way finite automaton.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalMachine {
    control: Control,
    delta: Vec<Option<Transition>>,
}

impl ClassicalMachine {
    pub fn control(&self) -> &Control {
        &self.control
    }

    pub fn name(&self) -> &str {
        self.control.name()
    }

    pub fn tapes(&self) -> usize {
        self.control.tapes
    }

    pub fn transition(&self, state: StateId, symbol: usize) -> Option<&Transition> {
        self.delta[self.control.slot(state, symbol)].as_ref()
    }

    pub fn lookup(&self, state: &str, symbol: &str) -> Option<&Transition> {
        let s = self.control.state_id(state)?;
        let sym = self.control.symbol_index(TapeSymbol::parse_token(symbol).ok()?)?;
        self.transition(s, sym)
    }

    /// All defined transitions in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, TapeSymbol, &Transition)> + '_ {
        let n = self.control.symbol_count();
        self.delta.iter().enumerate().filter_map(move |(slot, t)| {
            t.as_ref().map(|t| {
                (
                    StateId((slot / n) as u32),
                    self.control.symbol_at(slot % n),
                    t,
                )
            })
        })
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().filter(|t| t.is_some()).count()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = validate_control(&self.control);
        let entries = self.transitions().map(|(s, sym, t)| (s, sym, vec![t]));
        validate_entries(&self.control, entries, &mut report);
        report
    }
}

/// Builder for [`Control`]. States are declared in order of first mention.
#[derive(Debug, Clone)]
pub struct ControlBuilder {
    name: String,
    tapes: usize,
    alphabet: Vec<char>,
    states: Vec<String>,
    index: HashMap<String, StateId>,
    initial: Option<StateId>,
    accepting: BTreeSet<StateId>,
    rejecting: BTreeSet<StateId>,
}

impl ControlBuilder {
    pub fn new(name: &str, tapes: usize, alphabet: &[char]) -> Self {
        ControlBuilder {
            name: name.to_string(),
            tapes,
            alphabet: alphabet.to_vec(),
            states: Vec::new(),
            index: HashMap::new(),
            initial: None,
            accepting: BTreeSet::new(),
            rejecting: BTreeSet::new(),
        }
    }

    pub fn tapes(&self) -> usize {
        self.tapes
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = StateId(self.states.len() as u32);
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn existing_state(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.initial = Some(self.state(name));
        self
    }

    pub fn accept(&mut self, name: &str) -> &mut Self {
        let id = self.state(name);
        self.accepting.insert(id);
        self
    }

    pub fn reject(&mut self, name: &str) -> &mut Self {
        let id = self.state(name);
        self.rejecting.insert(id);
        self
    }

    pub fn symbol(&self, token: &str) -> Result<TapeSymbol, BuildError> {
        let sym = TapeSymbol::parse_token(token)?;
        self.check_symbol(sym)?;
        Ok(sym)
    }

    pub fn check_symbol(&self, sym: TapeSymbol) -> Result<(), BuildError> {
        let ok = match sym {
            TapeSymbol::Letter(c) => self.alphabet.contains(&c),
            TapeSymbol::LeftEnd(t) | TapeSymbol::RightEnd(t) => t < self.tapes,
        };
        if ok {
            Ok(())
        } else {
            Err(BuildError::UnknownSymbol(sym.to_string()))
        }
    }

    pub fn moves(&self, code: &str) -> Result<MoveVector, BuildError> {
        let mv = MoveVector::from_code(code)?;
        if mv.tapes() != self.tapes {
            return Err(BuildError::Arity {
                code: code.to_string(),
                found: mv.tapes(),
                tapes: self.tapes,
            });
        }
        Ok(mv)
    }

    pub fn build(self) -> Result<Control, BuildError> {
        if self.tapes == 0 {
            return Err(BuildError::InvalidParameter("a machine needs at least one tape".into()));
        }
        let initial = self
            .initial
            .ok_or_else(|| BuildError::InvalidParameter("no initial state".into()))?;
        let mut halting = vec![None; self.states.len()];
        for s in &self.rejecting {
            halting[s.index()] = Some(Verdict::Reject);
        }
        for s in &self.accepting {
            halting[s.index()] = Some(Verdict::Accept);
        }
        Ok(Control {
            name: self.name,
            tapes: self.tapes,
            alphabet: self.alphabet,
            states: self.states,
            initial,
            accepting: self.accepting.into_iter().collect(),
            rejecting: self.rejecting.into_iter().collect(),
            halting,
        })
    }
}

/// Builder for [`ClassicalMachine`] using the same tokens as the text
/// format: `b.delta("s0", "LM1", "s0", "RS")`.
#[derive(Debug, Clone)]
pub struct MachineBuilder {
    control: ControlBuilder,
    entries: HashMap<(StateId, TapeSymbol), Transition>,
}

impl MachineBuilder {
    pub fn new(name: &str, tapes: usize, alphabet: &[char]) -> Self {
        MachineBuilder {
            control: ControlBuilder::new(name, tapes, alphabet),
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

    pub fn delta(
        &mut self,
        from: &str,
        symbol: &str,
        to: &str,
        moves: &str,
    ) -> Result<&mut Self, BuildError> {
        let sym = self.control.symbol(symbol)?;
        let moves = self.control.moves(moves)?;
        let from = self.control.state(from);
        let target = self.control.state(to);
        self.insert(from, sym, Transition { target, moves })?;
        Ok(self)
    }

    pub fn insert(
        &mut self,
        from: StateId,
        symbol: TapeSymbol,
        transition: Transition,
    ) -> Result<(), BuildError> {
        self.control.check_symbol(symbol)?;
        if transition.moves.tapes() != self.control.tapes {
            return Err(BuildError::Arity {
                code: transition.moves.code(),
                found: transition.moves.tapes(),
                tapes: self.control.tapes,
            });
        }
        if self.entries.contains_key(&(from, symbol)) {
            return Err(BuildError::DuplicateTransition {
                state: self.control.states[from.index()].clone(),
                symbol: symbol.to_string(),
            });
        }
        self.entries.insert((from, symbol), transition);
        Ok(())
    }

    pub fn build(self) -> Result<ClassicalMachine, BuildError> {
        let control = self.control.build()?;
        let mut delta = vec![None; control.states.len() * control.symbol_count()];
        for ((state, sym), t) in self.entries {
            let idx = control
                .symbol_index(sym)
                .ok_or_else(|| BuildError::UnknownSymbol(sym.to_string()))?;
            delta[control.slot(state, idx)] = Some(t);
        }
        Ok(ClassicalMachine { control, delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Violation,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IssueKind {
    BothHeadsMove,
    TransitionFromHaltingState,
    HaltingSetsOverlap,
    EndMarkerEscape,
    MissingTransition,
    ThetaDeltaMismatch,
    InvalidOperator,
}

impl IssueKind {
    pub fn code(self) -> &'static str {
        match self {
            IssueKind::BothHeadsMove => "both-heads-move",
            IssueKind::TransitionFromHaltingState => "transition-from-halting-state",
            IssueKind::HaltingSetsOverlap => "halting-sets-overlap",
            IssueKind::EndMarkerEscape => "end-marker-escape",
            IssueKind::MissingTransition => "missing-transition",
            IssueKind::ThetaDeltaMismatch => "theta-delta-mismatch",
            IssueKind::InvalidOperator => "invalid-operator",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub kind: IssueKind,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn violations(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Violation)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }

    pub fn is_valid(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }

    pub(crate) fn push(&mut self, kind: IssueKind, severity: Severity, message: String) {
        self.issues.push(Issue { kind, severity, message });
    }
}

pub(crate) fn validate_control(control: &Control) -> ValidationReport {
    let mut report = ValidationReport::default();
    for s in control.accepting() {
        if control.rejecting().contains(s) {
            report.push(
                IssueKind::HaltingSetsOverlap,
                Severity::Violation,
                format!("state `{}` is both accepting and rejecting", control.state_name(*s)),
            );
        }
    }
    report
}

/// Checks the structural rules on every (state, symbol) entry. Each entry
/// carries one transition (classical or unitary) or one per measurement
/// result.
pub(crate) fn validate_entries<'a>(
    control: &Control,
    entries: impl Iterator<Item = (StateId, TapeSymbol, Vec<&'a Transition>)>,
    report: &mut ValidationReport,
) {
    let n = control.symbol_count();
    let mut defined = vec![false; control.states().len() * n];
    let mut successors: Vec<Vec<StateId>> = vec![Vec::new(); control.states().len()];
    for (state, sym, transitions) in entries {
        let name = control.state_name(state);
        if let Some(idx) = control.symbol_index(sym) {
            defined[control.slot(state, idx)] = true;
        }
        if control.halting(state).is_some() {
            report.push(
                IssueKind::TransitionFromHaltingState,
                Severity::Violation,
                format!("halting state `{name}` has a transition on {sym}"),
            );
        }
        for t in transitions {
            successors[state.index()].push(t.target);
            if !t.moves.obeys_move_rule() {
                report.push(
                    IssueKind::BothHeadsMove,
                    Severity::Violation,
                    format!("({name}, {sym}) moves {} heads", t.moves.moving_count()),
                );
            }
            let escapes = match (sym, t.moves.moving_tape()) {
                (TapeSymbol::LeftEnd(tape), Some((moving, crate::symbol::Direction::Left))) => {
                    tape == moving
                }
                (TapeSymbol::RightEnd(tape), Some((moving, crate::symbol::Direction::Right))) => {
                    tape == moving
                }
                _ => false,
            };
            if escapes && control.halting(t.target).is_none() {
                report.push(
                    IssueKind::EndMarkerEscape,
                    Severity::Violation,
                    format!("({name}, {sym}) moves the head past its end-marker"),
                );
            }
        }
    }

    // Missing entries are only worth a warning: published tables leave out
    // pairs that cannot occur.
    let mut reachable = vec![false; control.states().len()];
    let mut stack = vec![control.initial()];
    while let Some(s) = stack.pop() {
        if std::mem::replace(&mut reachable[s.index()], true) {
            continue;
        }
        stack.extend(successors[s.index()].iter().copied());
    }
    for (i, &r) in reachable.iter().enumerate() {
        let state = StateId(i as u32);
        if !r || control.halting(state).is_some() {
            continue;
        }
        let missing: Vec<String> = (0..n)
            .filter(|&sym| !defined[control.slot(state, sym)])
            .map(|sym| control.symbol_at(sym).to_string())
            .collect();
        if !missing.is_empty() {
            report.push(
                IssueKind::MissingTransition,
                Severity::Warning,
                format!("state `{}` has no transition on {}", control.states()[i], missing.join(", ")),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> MachineBuilder {
        let mut b = MachineBuilder::new("tiny", 2, &['a', 'b']);
        b.states(["s0", "acc", "rej"]).initial("s0").accept("acc").reject("rej");
        b
    }

    #[test]
    fn symbol_indexing_is_dense_and_invertible() {
        let mut b = tiny();
        b.delta("s0", "LM1", "acc", "SS").unwrap();
        let m = b.build().unwrap();
        let c = m.control();
        assert_eq!(c.symbol_count(), 6);
        for i in 0..c.symbol_count() {
            assert_eq!(c.symbol_index(c.symbol_at(i)), Some(i));
        }
        assert_eq!(c.symbol_at(3), TapeSymbol::RightEnd(0));
        assert_eq!(c.symbol_index(TapeSymbol::LeftEnd(2)), None);
    }

    #[test]
    fn builder_rejects_duplicates_and_bad_symbols() {
        let mut b = tiny();
        b.delta("s0", "a", "acc", "SS").unwrap();
        assert!(matches!(
            b.delta("s0", "a", "rej", "SS"),
            Err(BuildError::DuplicateTransition { .. })
        ));
        assert!(matches!(b.delta("s0", "c", "rej", "SS"), Err(BuildError::UnknownSymbol(_))));
        assert!(matches!(b.delta("s0", "LM3", "rej", "SS"), Err(BuildError::UnknownSymbol(_))));
        assert!(matches!(b.delta("s0", "b", "rej", "SSS"), Err(BuildError::Arity { .. })));
    }

    #[test]
    fn validation_flags_structural_violations() {
        let mut b = tiny();
        b.delta("s0", "a", "s0", "RR").unwrap();
        b.delta("acc", "a", "s0", "SS").unwrap();
        b.delta("s0", "LM1", "s0", "LS").unwrap();
        let report = b.build().unwrap().validate();
        assert!(report.has(IssueKind::BothHeadsMove));
        assert!(report.has(IssueKind::TransitionFromHaltingState));
        assert!(report.has(IssueKind::EndMarkerEscape));
        assert!(!report.is_valid());
    }

    #[test]
    fn missing_entries_are_warnings() {
        let mut b = tiny();
        b.delta("s0", "LM1", "s0", "RS").unwrap();
        let report = b.build().unwrap().validate();
        assert!(report.is_valid());
        assert!(report.has(IssueKind::MissingTransition));
    }

    #[test]
    fn encode_checks_alphabet() {
        let m = {
            let mut b = tiny();
            b.delta("s0", "LM1", "acc", "SS").unwrap();
            b.build().unwrap()
        };
        assert_eq!(m.control().encode("abba").unwrap().len(), 4);
        assert_eq!(
            m.control().encode("abc"),
            Err(InputError::LetterNotInAlphabet('c'))
        );
    }
}
