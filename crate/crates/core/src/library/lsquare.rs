//! Two-tape quantum-classical machine for aⁿb^{n²}.
//!
//! Phases, each started with both heads rewound:
//!
//! 1. Deterministic shape check: the input must be aⁿb^{kn} with n, k > 0
//!    (or empty). T2 counts the b's modulo n.
//! 2. The register is reset to `|q0⟩`, rotated by √2π per a and by −√2π
//!    per block of n b's, and measured. Result 1 rejects; it can only
//!    occur when k ≠ n.
//! 3. Two random walks of T1 over the locations "left end-marker, each a,
//!    end of each b-block, right end-marker", stepping by coin flips.
//!    A walk ends at either end-marker.
//! 4. If both walks ended on the right, `l` further coin flips; all
//!    heads accepts. Anything else starts the next iteration.

use super::Table;
use crate::angle::Angle;
use crate::error::BuildError;
use crate::qcfa::{QuantumBuilder, QuantumClassicalMachine};
use crate::quantum::{ProjectiveMeasurement, UnitaryOp};

/// Number of final coin flips for error bound `epsilon`:
/// `1 + ⌈log₂(1/ε)⌉`.
pub fn coin_flips_for(epsilon: f64) -> Result<u32, BuildError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(BuildError::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(1 + (1.0 / epsilon).log2().ceil() as u32)
}

/// Declares `I`, `Ua`, `Uma`, `U`, `X` and `M` on a two-level register.
pub(crate) fn quantum_builder(name: &str, tapes: usize) -> Result<QuantumBuilder, BuildError> {
    let mut b = QuantumBuilder::new(name, tapes, &['a', 'b'], &["q0", "q1"]);
    b.qinitial("q0")?;
    b.unitary("I", UnitaryOp::identity(2))?;
    b.unitary("Ua", UnitaryOp::rotation(Angle::sqrt2_pi(1)))?;
    b.unitary("Uma", UnitaryOp::rotation(Angle::sqrt2_pi(-1)))?;
    b.unitary("U", UnitaryOp::hadamard())?;
    b.unitary("X", UnitaryOp::pauli_x())?;
    b.measure("M", ProjectiveMeasurement::standard(2))?;
    Ok(b)
}

/// Coin-flip state names of walk `w`.
pub(crate) fn coin(w: &str) -> (String, String) {
    (format!("s03_{w}"), format!("s03'_{w}"))
}

/// The reset measurement at `(r1, LM1)` followed by `X` on result 1, then
/// T1 steps onto square 1 in `s02`. Also the l final flips on `RM1` and
/// the failure exit `sfail` back to `r1`.
pub(crate) fn reset_and_final_flips(
    b: &mut QuantumBuilder,
    moves: &Moves,
    flips: u32,
) -> Result<(), BuildError> {
    b.theta_measure("r1", "LM1", "M", &[("0", "s02", &moves.r1), ("1", "sx", &moves.s)])?;
    b.theta_unitary("sx", "LM1", "X", "s02", &moves.r1)?;
    b.put("r1", "a", "r1", &moves.l1)?;
    b.put("r1", "b", "r1", &moves.l1)?;
    for i in 1..=flips {
        let heads = format!("scf0_{i}");
        let tails = format!("scf1_{i}");
        let next = format!("scf0_{}", i + 1);
        b.theta_unitary(&heads, "RM1", "U", &tails, &moves.s)?;
        b.theta_measure(&tails, "RM1", "M", &[("0", &next, &moves.s), ("1", "sfail", &moves.l1)])?;
    }
    b.put(&format!("scf0_{}", flips + 1), "RM1", "acc", &moves.s)?;
    b.put("sfail", "b", "r1", &moves.l1)?;
    Ok(())
}

/// A (target state, move code) pair.
pub(crate) type Exit = (String, String);

/// Where walk `w` goes when it ends on the right and on the left, in
/// [`WALKS`] order. Also adds the rewinding states between the walks.
pub(crate) fn walk_exits(b: &mut QuantumBuilder, moves: &Moves) -> Result<[(Exit, Exit); 3], BuildError> {
    let exit = |state: &str, mv: &str| (state.to_string(), mv.to_string());
    let (s, l1) = (moves.s.as_str(), moves.l1.as_str());
    for sigma in ["a", "b"] {
        b.put("w1", sigma, "w1", l1)?;
        b.put("w2t", sigma, "w2t", l1)?;
    }
    b.put("w1", "LM1", &coin("1").0, &moves.r1)?;
    b.put("w2t", "LM1", &coin("2t").0, &moves.r1)?;
    b.put("w2f", "LM1", &coin("2f").0, &moves.r1)?;
    Ok([
        // walk 1: remember where it ended
        (exit("w2t", l1), exit("w2f", s)),
        // walk 2 after a right end: final flips, or start over
        (exit("scf0_1", s), exit("r1", s)),
        // walk 2 after a left end: start over either way
        (exit("r1", l1), exit("r1", s)),
    ])
}

pub(crate) const WALKS: [&str; 3] = ["1", "2t", "2f"];

/// Move codes shared by the quantum machines.
pub(crate) struct Moves {
    pub s: String,
    pub r1: String,
    pub l1: String,
}

impl Moves {
    pub fn new(tapes: usize) -> Self {
        Moves {
            s: super::stay(tapes),
            r1: super::mv(tapes, 0, 'R'),
            l1: super::mv(tapes, 0, 'L'),
        }
    }
}

/// Builds the machine; `epsilon` fixes the number of final coin flips.
pub fn lsquare_2tqcfa(epsilon: f64) -> Result<QuantumClassicalMachine, BuildError> {
    let flips = coin_flips_for(epsilon)?;
    let mut b = quantum_builder("lsquare-2tqcfa", 2)?;
    b.initial("f0").accept("acc").reject("rej");
    let moves = Moves::new(2);

    // 1. shape aⁿb^{kn}; T2 walks the a-block once per n b's
    b.rows(&[
        ("f0", "LM1", "f1", "RS"),
        ("f1", "RM1", "acc", "SS"),
        ("f1", "a", "f2", "RS"),
        ("f1", "b", "rej", "SS"),
        ("f2", "a", "f2", "RS"),
        ("f2", "b", "g2", "SR"),
        ("f2", "RM1", "rej", "SS"),
        ("g1", "b", "g2", "SR"),
        ("g1", "a", "rej", "SS"),
        ("g1", "RM1", "gc", "SR"),
        ("g2", "a", "g1", "RS"),
        ("g2", "b", "gr", "SL"),
        ("gr", "a", "gr", "SL"),
        ("gr", "LM2", "g2", "SR"),
        ("gc", "b", "r2", "SL"),
        ("gc", "a", "rej", "SS"),
        ("r2", "a", "r2", "SL"),
        ("r2", "LM2", "r1", "LS"),
    ])?;
    reset_and_final_flips(&mut b, &moves, flips)?;

    // 2. rotate, then measure
    b.theta_unitary("s02", "a", "Ua", "s02", "RS")?;
    b.put("s02", "b", "sa2", "SR")?;
    b.put("sa2", "a", "sb1", "RS")?;
    b.theta_unitary("sa2", "b", "Uma", "sre3", "SL")?;
    b.put("sb1", "b", "sa2", "SR")?;
    b.put("sb1", "RM1", "scrt2", "SR")?;
    b.put("sre3", "a", "sre3", "SL")?;
    b.put("sre3", "LM2", "sa2", "SR")?;
    b.theta_unitary("scrt2", "b", "Uma", "sm", "SL")?;
    for sigma in ["a", "b"] {
        b.theta_measure("sm", sigma, "M", &[("0", "sre4", "SL"), ("1", "rej", "SS")])?;
    }
    b.put("sre4", "a", "sre4", "SL")?;
    b.put("sre4", "LM2", "w1", "LS")?;

    // 3. two walks. A step across a b-block runs T1 one square past the
    // block while T2 counts n, then steps back. Going left, T1 may land
    // on an a either after exactly n squares (T2 below n) or one square
    // too far when n = 1 (T2 at n); one more T2 step tells them apart.
    let exits = walk_exits(&mut b, &moves)?;
    for (w, (right, left)) in WALKS.iter().zip(exits) {
        let (flip, measure) = coin(w);
        let st = |s: &str| format!("{s}_{w}");
        for sigma in ["a", "b", "LM2"] {
            b.theta_unitary(&flip, sigma, "U", &measure, "SS")?;
            b.theta_measure(&measure, sigma, "M", &[("0", &st("rf"), "RS"), ("1", &st("lf"), "LS")])?;
        }
        b.rows(&[
            (&st("rf"), "a", &flip, "SS"),
            (&st("rf"), "b", &st("rl"), "SR"),
            (&st("rf"), "RM1", &right.0, &right.1),
            (&st("rl"), "a", &st("rt"), "RS"),
            (&st("rl"), "b", &st("rr"), "SL"),
            (&st("rt"), "b", &st("rl"), "SR"),
            (&st("rt"), "RM1", &st("rl"), "SR"),
            (&st("rr"), "a", &st("rr"), "SL"),
            (&st("rr"), "LM2", &flip, "LS"),
            (&st("lf"), "a", &flip, "SS"),
            (&st("lf"), "b", &st("ll"), "SR"),
            (&st("lf"), "LM1", &left.0, &left.1),
            (&st("ll"), "a", &st("lt"), "LS"),
            (&st("ll"), "b", &st("lr"), "SL"),
            (&st("lt"), "b", &st("ll"), "SR"),
            (&st("lt"), "a", &st("lc"), "SR"),
            (&st("lc"), "a", &st("la"), "SL"),
            (&st("lc"), "b", &st("lr"), "SL"),
            (&st("lr"), "a", &st("lr"), "SL"),
            (&st("lr"), "LM2", &flip, "RS"),
            (&st("la"), "a", &st("la"), "SL"),
            (&st("la"), "LM2", &flip, "SS"),
        ])?;
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_count() {
        assert_eq!(coin_flips_for(0.125).unwrap(), 4);
        assert_eq!(coin_flips_for(0.5).unwrap(), 2);
        assert_eq!(coin_flips_for(0.1).unwrap(), 5);
        assert!(coin_flips_for(0.0).is_err());
        assert!(coin_flips_for(1.0).is_err());
    }

    #[test]
    fn builds_and_validates() {
        let m = lsquare_2tqcfa(0.125).unwrap();
        let report = m.validate();
        assert!(report.is_valid(), "{:?}", report.violations().collect::<Vec<_>>());
    }
}
