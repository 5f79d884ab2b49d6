//! Line-oriented text format for machines.
//!
//! ```text
//! machine coin
//! tapes 1
//! alphabet a
//! states s0 s1 acc rej
//! initial s0
//! accept acc
//! reject rej
//! qstates q0 q1
//! qinitial q0
//! unitary H matrix 1/sqrt2 1/sqrt2 1/sqrt2 -1/sqrt2
//! unitary Ua rot sqrt2*pi
//! measure M std
//! theta s0 LM1 H
//! delta s0 LM1 -> s1 S
//! theta s1 LM1 M
//! delta s1 LM1 @0 -> acc S
//! delta s1 LM1 @1 -> rej S
//! ```
//!
//! Header lines may come in any order. `#` starts a comment. In a
//! quantum file every `delta` follows its `theta`; a classical file has
//! no quantum lines. Move vectors are written one direction per tape,
//! with or without spaces (`R S` or `RS`).

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_complex::Complex64;

use crate::angle::Angle;
use crate::error::BuildError;
use crate::library::AnyMachine;
use crate::machine::{ControlBuilder, MachineBuilder, StateId, Transition};
use crate::qcfa::{Operation, QuantumAction, QuantumBuilder};
use crate::quantum::{CMatrix, ProjectiveMeasurement, UnitaryOp, UnitaryTag};
use crate::symbol::{MoveVector, TapeSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownState,
    UnknownSymbol,
    UnknownOperation,
    Duplicate,
    MoveRule,
    ThetaDeltaMismatch,
    Invalid,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownState => "unknown state",
            ParseErrorKind::UnknownSymbol => "unknown symbol",
            ParseErrorKind::UnknownOperation => "unknown operation",
            ParseErrorKind::Duplicate => "duplicate",
            ParseErrorKind::MoveRule => "move-rule violation",
            ParseErrorKind::ThetaDeltaMismatch => "theta/delta mismatch",
            ParseErrorKind::Invalid => "invalid machine",
        })
    }
}

/// A parse failure. `line` is one-based; 0 means the file as a whole.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        ParseError {
            line,
            kind,
            message: message.into(),
        }
    }

    fn build(line: usize, e: BuildError) -> Self {
        let kind = match &e {
            BuildError::UnknownState(_) => ParseErrorKind::UnknownState,
            BuildError::UnknownSymbol(_) | BuildError::Symbol(_) => ParseErrorKind::UnknownSymbol,
            BuildError::DuplicateTransition { .. } => ParseErrorKind::Duplicate,
            BuildError::Arity { .. } => ParseErrorKind::Syntax,
            BuildError::UnknownOperation(_) => ParseErrorKind::UnknownOperation,
            BuildError::ThetaDeltaMismatch(_) => ParseErrorKind::ThetaDeltaMismatch,
            _ => ParseErrorKind::Invalid,
        };
        ParseError::new(line, kind, e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot export `{machine}`: {reason}")]
pub struct ExportError {
    pub machine: String,
    pub reason: String,
}

struct Line<'a> {
    number: usize,
    words: Vec<&'a str>,
}

#[derive(Default)]
struct Header<'a> {
    fields: HashMap<&'a str, (usize, Vec<&'a str>)>,
    ops: Vec<Line<'a>>,
}

const HEADER_KEYS: &[&str] = &[
    "machine", "tapes", "alphabet", "states", "initial", "accept", "reject", "qstates", "qinitial",
];

impl<'a> Header<'a> {
    fn one(&self, key: &str) -> Result<(usize, &'a str), ParseError> {
        match self.fields.get(key) {
            Some((n, v)) if v.len() == 1 => Ok((*n, v[0])),
            Some((n, _)) => Err(ParseError::new(*n, ParseErrorKind::Syntax, format!("`{key}` takes one value"))),
            None => Err(ParseError::new(0, ParseErrorKind::Syntax, format!("missing `{key}` line"))),
        }
    }

    fn list(&self, key: &str) -> (usize, Vec<&'a str>) {
        self.fields.get(key).cloned().unwrap_or((0, Vec::new()))
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = content.split_whitespace().collect();
            (!words.is_empty()).then_some(Line { number: i + 1, words })
        })
        .collect()
}

/// Parses a machine file into a classical or quantum-classical machine.
pub fn parse_machine(text: &str) -> Result<AnyMachine, ParseError> {
    let all = lines(text);
    let mut header = Header::default();
    let mut body = Vec::new();
    for line in all {
        let key = line.words[0];
        if HEADER_KEYS.contains(&key) {
            if header.fields.contains_key(key) {
                return Err(ParseError::new(line.number, ParseErrorKind::Duplicate, format!("second `{key}` line")));
            }
            header.fields.insert(key, (line.number, line.words[1..].to_vec()));
        } else if key == "unitary" || key == "measure" {
            header.ops.push(line);
        } else if key == "theta" || key == "delta" {
            body.push(line);
        } else {
            return Err(ParseError::new(line.number, ParseErrorKind::Syntax, format!("unknown keyword `{key}`")));
        }
    }

    let (_, name) = header.one("machine")?;
    let (tapes_line, tapes) = header.one("tapes")?;
    let tapes: usize = tapes
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| ParseError::new(tapes_line, ParseErrorKind::Syntax, format!("bad tape count `{tapes}`")))?;
    let (alpha_line, letters) = header.list("alphabet");
    let mut alphabet = Vec::new();
    for l in letters {
        match TapeSymbol::parse_token(l) {
            Ok(TapeSymbol::Letter(c)) if !alphabet.contains(&c) => alphabet.push(c),
            _ => return Err(ParseError::new(alpha_line, ParseErrorKind::Syntax, format!("bad letter `{l}`"))),
        }
    }

    let quantum = header.fields.contains_key("qstates");
    if !quantum {
        if let Some(line) = header.ops.first().or(body.iter().find(|l| l.words[0] == "theta")) {
            return Err(ParseError::new(line.number, ParseErrorKind::Syntax, "quantum line without `qstates`"));
        }
        let mut b = MachineBuilder::new(name, tapes, &alphabet);
        declare_states(b.control(), &header)?;
        for line in &body {
            let d = parse_delta(line, b.control())?;
            if let Some(label) = d.label {
                return Err(ParseError::new(
                    line.number,
                    ParseErrorKind::ThetaDeltaMismatch,
                    format!("result `@{label}` in a classical machine"),
                ));
            }
            b.insert(d.from, d.symbol, Transition { target: d.to, moves: d.moves })
                .map_err(|e| ParseError::build(line.number, e))?;
        }
        return b.build().map(AnyMachine::Classical).map_err(|e| ParseError::build(0, e));
    }

    let (q_line, qstates) = header.list("qstates");
    if qstates.is_empty() {
        return Err(ParseError::new(q_line, ParseErrorKind::Syntax, "`qstates` needs at least one name"));
    }
    let mut b = QuantumBuilder::new(name, tapes, &alphabet, &qstates);
    declare_states(b.control(), &header)?;
    let (qi_line, qinitial) = header.one("qinitial")?;
    b.qinitial(qinitial).map_err(|e| ParseError::build(qi_line, e))?;
    for line in &header.ops {
        parse_op(line, &mut b, qstates.len())?;
    }

    // (pair, theta line, deltas still expected)
    let mut pending: Option<((StateId, TapeSymbol), usize, usize)> = None;
    let unfinished = |p: &Option<((StateId, TapeSymbol), usize, usize)>| match p {
        Some((_, n, left)) if *left > 0 => Err(ParseError::new(
            *n,
            ParseErrorKind::ThetaDeltaMismatch,
            format!("theta is missing {left} delta line(s)"),
        )),
        _ => Ok(()),
    };
    let mut op_results = HashMap::new();
    for line in &header.ops {
        let results = if line.words[0] == "measure" { qstates.len() } else { 1 };
        op_results.insert(line.words[1], results);
    }
    for line in &body {
        if line.words[0] == "theta" {
            unfinished(&pending)?;
            let [_, from, sym, op] = line.words[..] else {
                return Err(ParseError::new(line.number, ParseErrorKind::Syntax, "expected `theta <state> <symbol> <op>`"));
            };
            let from = known_state(b.control(), from, line.number)?;
            let sym = b.control().symbol(sym).map_err(|e| ParseError::build(line.number, e))?;
            b.theta_id(from, sym, op).map_err(|e| ParseError::build(line.number, e))?;
            pending = Some(((from, sym), line.number, op_results[op]));
            continue;
        }
        let d = parse_delta(line, b.control())?;
        match &mut pending {
            Some((pair, _, left)) if *pair == (d.from, d.symbol) && *left > 0 => *left -= 1,
            _ => {
                return Err(ParseError::new(
                    line.number,
                    ParseErrorKind::ThetaDeltaMismatch,
                    "delta does not follow a theta for the same pair",
                ))
            }
        }
        b.delta_for(d.from, d.symbol, d.label, d.to, d.moves)
            .map_err(|e| ParseError::build(line.number, e))?;
    }
    unfinished(&pending)?;
    b.build().map(AnyMachine::Quantum).map_err(|e| ParseError::build(0, e))
}

fn declare_states(c: &mut ControlBuilder, header: &Header) -> Result<(), ParseError> {
    let (states_line, states) = header.list("states");
    if states.is_empty() {
        return Err(ParseError::new(states_line, ParseErrorKind::Syntax, "missing `states` line"));
    }
    for s in states {
        if c.existing_state(s).is_some() {
            return Err(ParseError::new(states_line, ParseErrorKind::Duplicate, format!("state `{s}` listed twice")));
        }
        c.state(s);
    }
    let (n, initial) = header.one("initial")?;
    known_state(c, initial, n)?;
    c.initial(initial);
    for (key, accept) in [("accept", true), ("reject", false)] {
        let (n, names) = header.list(key);
        for s in names {
            known_state(c, s, n)?;
            if accept {
                c.accept(s);
            } else {
                c.reject(s);
            }
        }
    }
    Ok(())
}

fn known_state(c: &ControlBuilder, name: &str, line: usize) -> Result<StateId, ParseError> {
    c.existing_state(name)
        .ok_or_else(|| ParseError::new(line, ParseErrorKind::UnknownState, format!("`{name}`")))
}

struct Delta<'a> {
    from: StateId,
    symbol: TapeSymbol,
    label: Option<&'a str>,
    to: StateId,
    moves: MoveVector,
}

fn parse_delta<'a>(line: &Line<'a>, c: &ControlBuilder) -> Result<Delta<'a>, ParseError> {
    let n = line.number;
    let syntax = || ParseError::new(n, ParseErrorKind::Syntax, "expected `delta <state> <symbol> [@<result>] -> <state> <moves>`");
    let w = &line.words;
    let arrow = w.iter().position(|&t| t == "->").ok_or_else(syntax)?;
    let (label, ok) = match arrow {
        3 => (None, true),
        4 => (w[3].strip_prefix('@'), w[3].len() > 1 && w[3].starts_with('@')),
        _ => (None, false),
    };
    if !ok || w.len() < arrow + 3 {
        return Err(syntax());
    }
    let from = known_state(c, w[1], n)?;
    let symbol = c.symbol(w[2]).map_err(|e| ParseError::build(n, e))?;
    let to = known_state(c, w[arrow + 1], n)?;
    let code: String = w[arrow + 2..].concat();
    let moves = c.moves(&code).map_err(|e| ParseError::build(n, e))?;
    if !moves.obeys_move_rule() {
        return Err(ParseError::new(n, ParseErrorKind::MoveRule, format!("`{code}` moves more than one head")));
    }
    Ok(Delta { from, symbol, label, to, moves })
}

fn parse_op(line: &Line, b: &mut QuantumBuilder, dim: usize) -> Result<(), ParseError> {
    let n = line.number;
    let w = &line.words;
    let syntax = |msg: &str| ParseError::new(n, ParseErrorKind::Syntax, msg);
    if w.len() < 3 {
        return Err(syntax("expected `unitary <name> rot|matrix ...` or `measure <name> std`"));
    }
    let name = w[1];
    let result = match (w[0], w[2]) {
        ("measure", "std") if w.len() == 3 => b.measure(name, ProjectiveMeasurement::standard(dim)).map(|_| ()),
        ("measure", _) => return Err(syntax("only `std` measurements are supported")),
        ("unitary", "rot") => {
            let angle: Angle = w[3..].concat().parse().map_err(|e: crate::angle::AngleParseError| syntax(&e.to_string()))?;
            b.unitary(name, UnitaryOp::rotation(angle)).map(|_| ())
        }
        ("unitary", "matrix") => {
            let entries = w[3..]
                .iter()
                .map(|t| parse_complex(t).ok_or_else(|| syntax(&format!("bad matrix entry `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let op = CMatrix::new(dim, entries)
                .and_then(UnitaryOp::from_matrix)
                .map_err(|e| ParseError::new(n, ParseErrorKind::Invalid, e.to_string()))?;
            b.unitary(name, op).map(|_| ())
        }
        _ => return Err(syntax("expected `rot` or `matrix`")),
    };
    result.map_err(|e| ParseError::build(n, e))
}

/// `x` or `c(x,y)`, where each part is a real expression.
fn parse_complex(token: &str) -> Option<Complex64> {
    match token.strip_prefix("c(").and_then(|t| t.strip_suffix(')')) {
        Some(inner) => {
            let (re, im) = inner.split_once(',')?;
            Some(Complex64::new(parse_real(re)?, parse_real(im)?))
        }
        None => Some(Complex64::new(parse_real(token)?, 0.0)),
    }
}

/// A decimal number, `sqrt2`, or a quotient of two of those, with an
/// optional leading minus.
fn parse_real(token: &str) -> Option<f64> {
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let atom = |t: &str| match t {
        "sqrt2" => Some(2f64.sqrt()),
        _ if t.starts_with(|c: char| c.is_ascii_digit() || c == '.') => t.parse::<f64>().ok(),
        _ => None,
    };
    let value = match body.split_once('/') {
        Some((num, den)) => atom(num)? / atom(den)?,
        None => atom(body)?,
    };
    Some(if negative { -value } else { value })
}

fn format_real(x: f64) -> String {
    let h = 1.0 / 2f64.sqrt();
    if x == h {
        "1/sqrt2".into()
    } else if x == -h {
        "-1/sqrt2".into()
    } else {
        format!("{x}")
    }
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        format_real(z.re)
    } else {
        format!("c({},{})", format_real(z.re), format_real(z.im))
    }
}

/// Writes the canonical text of a machine: headers, then operations in
/// declaration order, then transitions ordered by state and symbol.
pub fn export_machine(machine: &AnyMachine) -> Result<String, ExportError> {
    let c = machine.control();
    let mut out = String::new();
    let names = |ids: &[StateId]| ids.iter().map(|&s| c.state_name(s)).collect::<Vec<_>>().join(" ");
    let letters: Vec<String> = c.alphabet().iter().map(|l| l.to_string()).collect();
    writeln!(out, "machine {}", c.name()).unwrap();
    writeln!(out, "tapes {}", c.tapes()).unwrap();
    writeln!(out, "alphabet {}", letters.join(" ")).unwrap();
    writeln!(out, "states {}", c.states().join(" ")).unwrap();
    writeln!(out, "initial {}", c.state_name(c.initial())).unwrap();
    writeln!(out, "accept {}", names(c.accepting())).unwrap();
    writeln!(out, "reject {}", names(c.rejecting())).unwrap();
    let moves = |t: &Transition| {
        let dirs: Vec<String> = t.moves.directions().iter().map(|d| d.code().to_string()).collect();
        format!("{} {}", c.state_name(t.target), dirs.join(" "))
    };

    match machine {
        AnyMachine::Classical(m) => {
            for (s, sym, t) in m.transitions() {
                writeln!(out, "delta {} {sym} -> {}", c.state_name(s), moves(t)).unwrap();
            }
        }
        AnyMachine::Quantum(m) => {
            writeln!(out, "qstates {}", m.qstates().join(" ")).unwrap();
            writeln!(out, "qinitial {}", m.qstates()[m.qinitial()]).unwrap();
            for op in m.operations() {
                match &op.op {
                    Operation::Unitary(u) => match u.tag() {
                        UnitaryTag::Rotation(a) => writeln!(out, "unitary {} rot {a}", op.name).unwrap(),
                        _ => {
                            let entries: Vec<String> = u.matrix().entries().iter().map(|&z| format_complex(z)).collect();
                            writeln!(out, "unitary {} matrix {}", op.name, entries.join(" ")).unwrap()
                        }
                    },
                    Operation::Measure(pm) if pm.is_standard() => writeln!(out, "measure {} std", op.name).unwrap(),
                    Operation::Measure(_) => {
                        return Err(ExportError {
                            machine: c.name().to_string(),
                            reason: format!("measurement `{}` is not in the standard basis", op.name),
                        })
                    }
                }
            }
            for (s, sym, action) in m.actions() {
                let s = c.state_name(s);
                writeln!(out, "theta {s} {sym} {}", m.operation(action.op()).name).unwrap();
                match action {
                    QuantumAction::Unitary { next, .. } => {
                        writeln!(out, "delta {s} {sym} -> {}", moves(next)).unwrap();
                    }
                    QuantumAction::Measure { op, branches } => {
                        let Operation::Measure(pm) = &m.operation(*op).op else {
                            unreachable!("measure action bound to a unitary")
                        };
                        for (label, t) in pm.labels().iter().zip(branches) {
                            writeln!(out, "delta {s} {sym} @{label} -> {}", moves(t)).unwrap();
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const COIN: &str = "\
machine coin
tapes 1
alphabet a
states s0 s1 acc rej
initial s0
accept acc
reject rej
qstates q0 q1
qinitial q0
unitary H matrix 1/sqrt2 1/sqrt2 1/sqrt2 -1/sqrt2
unitary Ua rot sqrt2*pi
measure M std
theta s0 LM1 H
delta s0 LM1 -> s1 S
theta s1 LM1 M
delta s1 LM1 @0 -> acc S
delta s1 LM1 @1 -> rej S
";

    fn err(text: &str) -> ParseError {
        parse_machine(text).unwrap_err()
    }

    const HEAD: &str = "machine x\ntapes 2\nalphabet a\nstates s t\ninitial s\naccept t\nreject\n";

    #[test]
    fn coin_round_trip() {
        let m = parse_machine(COIN).unwrap();
        assert!(m.is_quantum());
        let text = export_machine(&m).unwrap();
        assert_eq!(text, COIN);
        assert_eq!(parse_machine(&text).unwrap(), m);
        let AnyMachine::Quantum(q) = m else { unreachable!() };
        let Operation::Unitary(ua) = &q.operation(1).op else { panic!() };
        assert_eq!(ua.tag(), UnitaryTag::Rotation(Angle::sqrt2_pi(1)));
        let Operation::Unitary(h) = &q.operation(0).op else { panic!() };
        assert_eq!(h.tag(), UnitaryTag::Hadamard);
    }

    #[test]
    fn classical_errors() {
        let e = err(&format!("{HEAD}delta s a -> t R R\n"));
        assert_eq!((e.line, e.kind), (8, ParseErrorKind::MoveRule));
        assert!(e.to_string().contains("move-rule violation"));
        let e = err(&format!("{HEAD}delta s a -> t RS\n# note\ndelta s a -> s SR\n"));
        assert_eq!((e.line, e.kind), (10, ParseErrorKind::Duplicate));
        let e = err(&format!("{HEAD}delta s b -> t RS\n"));
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol);
        let e = err(&format!("{HEAD}delta s LM3 -> t RS\n"));
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol);
        let e = err(&format!("{HEAD}delta s a -> u RS\n"));
        assert_eq!((e.line, e.kind), (8, ParseErrorKind::UnknownState));
        let e = err(&format!("{HEAD}delta s a @0 -> t RS\n"));
        assert_eq!(e.kind, ParseErrorKind::ThetaDeltaMismatch);
        let e = err(&format!("{HEAD}delta s a -> t RSS\n"));
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        let e = err(&format!("{HEAD}jump s\n"));
        assert_eq!((e.line, e.kind), (8, ParseErrorKind::Syntax));
        assert_eq!(err("tapes 1\n").kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn quantum_errors() {
        let cut = |upto: usize, extra: &str| {
            let mut t: String = COIN.lines().take(upto).map(|l| format!("{l}\n")).collect();
            t.push_str(extra);
            t
        };
        // theta without its delta
        let e = err(&cut(13, "theta s1 LM1 M\n"));
        assert_eq!((e.line, e.kind), (13, ParseErrorKind::ThetaDeltaMismatch));
        // labelled delta after a unitary theta
        let e = err(&cut(13, "delta s0 LM1 @0 -> s1 S\n"));
        assert_eq!((e.line, e.kind), (14, ParseErrorKind::ThetaDeltaMismatch));
        // delta with no theta
        let e = err(&cut(12, "delta s0 LM1 -> s1 S\n"));
        assert_eq!((e.line, e.kind), (13, ParseErrorKind::ThetaDeltaMismatch));
        // unknown result label
        let e = err(&cut(15, "delta s1 LM1 @2 -> acc S\ndelta s1 LM1 @1 -> rej S\n"));
        assert_eq!((e.line, e.kind), (16, ParseErrorKind::ThetaDeltaMismatch));
        let e = err(&cut(12, "theta s0 LM1 Q\n"));
        assert_eq!(e.kind, ParseErrorKind::UnknownOperation);
        let e = err(&cut(12, "unitary B matrix 1 1 0 1\n"));
        assert_eq!((e.line, e.kind), (13, ParseErrorKind::Invalid));
        let e = err(&format!("{HEAD}theta s a I\n"));
        assert_eq!(e.kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn reals() {
        assert_eq!(parse_real("1/sqrt2"), Some(1.0 / 2f64.sqrt()));
        assert_eq!(parse_real("-0.5"), Some(-0.5));
        assert_eq!(parse_real("sqrt2/2"), Some(2f64.sqrt() / 2.0));
        assert_eq!(parse_real("x"), None);
        assert_eq!(parse_complex("c(0,-1)"), Some(Complex64::new(0.0, -1.0)));
        for x in [0.1, -3.25e-9, 1.0 / 3.0, -1.0 / 2f64.sqrt()] {
            assert_eq!(parse_real(&format_real(x)), Some(x));
        }
    }
}
