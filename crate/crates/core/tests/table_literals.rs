//! Library machines against checked-in copies of their reference tables.

use multitape::library::{self, lsquare_2tqcfa, AnyMachine};
use multitape::qcfa::QuantumAction;

const EPS: f64 = 0.125;

/// Rows where the library deliberately departs from the reference table:
/// (machine, state, symbol, target, moves).
const CORRECTIONS: &[(&str, &str, &str, &str, &str)] = &[
    ("lpal", "st", "LM1", "scrt", "SR"),
    ("lbalance-count", "s0", "b", "s0", "RS"),
    ("lbalance-count", "s0", "RM1", "scrt", "SR"),
];

fn rows(text: &str) -> Vec<Vec<&str>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().collect())
        .collect()
}

fn check_classical(id: &str, table: &str) {
    let AnyMachine::Classical(m) = library::build(id, EPS).unwrap().machine else {
        panic!("{id} is quantum")
    };
    let rows = rows(table);
    for r in &rows {
        let (state, symbol) = (r[0], r[1]);
        let expected = CORRECTIONS
            .iter()
            .find(|c| c.0 == id && c.1 == state && c.2 == symbol)
            .map(|c| (c.3, c.4))
            .unwrap_or((r[2], r[3]));
        let t = m
            .lookup(state, symbol)
            .unwrap_or_else(|| panic!("{id}: δ({state}, {symbol}) missing"));
        let got = (m.control().state_name(t.target), t.moves.code());
        assert_eq!(
            (got.0, got.1.as_str()),
            expected,
            "{id}: δ({state}, {symbol})"
        );
    }
    assert_eq!(m.transition_count(), rows.len(), "{id}: extra δ entries");
}

#[test]
fn leq_matches_reference() {
    check_classical("leq", include_str!("tables/leq.txt"));
}

#[test]
fn lpal_matches_reference_except_empty_input_row() {
    check_classical("lpal", include_str!("tables/lpal.txt"));
}

#[test]
fn leq_k3_matches_reference() {
    check_classical("leq-k3", include_str!("tables/leq-k3.txt"));
}

#[test]
fn lbalance_count_matches_reference_with_corrections() {
    check_classical("lbalance-count", include_str!("tables/lbalance-count.txt"));
}

#[test]
fn corrections_change_the_reference() {
    for (id, table) in [
        ("lpal", include_str!("tables/lpal.txt")),
        ("lbalance-count", include_str!("tables/lbalance-count.txt")),
    ] {
        for c in CORRECTIONS.iter().filter(|c| c.0 == id) {
            let row = rows(table)
                .into_iter()
                .find(|r| r[0] == c.1 && r[1] == c.2)
                .unwrap_or_else(|| panic!("{id}: no reference row for ({}, {})", c.1, c.2));
            assert_ne!((row[2], row[3]), (c.3, c.4), "{id}: correction for ({}, {}) is a no-op", c.1, c.2);
        }
    }
}

#[test]
fn lsquare_rotation_phase_matches_reference() {
    let m = lsquare_2tqcfa(EPS).unwrap();
    let name = |a: &QuantumAction| m.operation(a.op()).name.clone();
    for r in rows(include_str!("tables/lsquare-2tqcfa.txt")) {
        let a = m
            .lookup(r[1], r[2])
            .unwrap_or_else(|| panic!("no action for ({}, {})", r[1], r[2]));
        match r[0] {
            "theta" => assert_eq!(name(a), r[3], "Θ({}, {})", r[1], r[2]),
            "delta" => {
                let QuantumAction::Unitary { next, .. } = a else {
                    panic!("({}, {}) measures", r[1], r[2])
                };
                assert_eq!(m.control().state_name(next.target), r[3], "δ({}, {})", r[1], r[2]);
                assert_eq!(next.moves.code(), r[4], "δ({}, {})", r[1], r[2]);
            }
            other => panic!("bad row kind {other}"),
        }
    }
}

#[test]
fn lsquare_measurement_and_coin_flips() {
    let m = lsquare_2tqcfa(EPS).unwrap();
    for sigma in ["a", "b"] {
        let a = m.lookup("sm", sigma).unwrap();
        assert_eq!(m.operation(a.op()).name, "M");
        let QuantumAction::Measure { branches, .. } = a else { panic!("sm does not measure") };
        assert_eq!(m.control().state_name(branches[1].target), "rej");
    }
    for w in ["1", "2t", "2f"] {
        let (flip, measure) = (format!("s03_{w}"), format!("s03'_{w}"));
        for sigma in ["a", "b", "LM2"] {
            let a = m.lookup(&flip, sigma).unwrap();
            assert_eq!(m.operation(a.op()).name, "U", "Θ({flip}, {sigma})");
            let QuantumAction::Unitary { next, .. } = a else { panic!() };
            assert_eq!(m.control().state_name(next.target), measure);
            assert_eq!(next.moves.code(), "SS");
            let a = m.lookup(&measure, sigma).unwrap();
            assert_eq!(m.operation(a.op()).name, "M", "Θ({measure}, {sigma})");
            let QuantumAction::Measure { branches, .. } = a else { panic!() };
            // result 0 steps right, result 1 steps left
            assert_eq!(branches[0].moves.code(), "RS");
            assert_eq!(branches[1].moves.code(), "LS");
        }
    }
}
