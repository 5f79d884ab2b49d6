//! k-tape quantum-classical machine for aⁿb^{n^k}.
//!
//! Same plan as [`super::lsquare_2tqcfa`], with blocks of n^{k-1} b's in
//! place of blocks of n. The shape check accepts aⁿb^{r·n^{k-1}}, and
//! tapes T2 … Tk hold a base-n counter (see [`super::counter`]) that
//! wraps exactly at block boundaries. The counter is at zero whenever a
//! walk flips its coin, so a walk step across a block needs no
//! overshoot.

use super::counter::{check_zero, place_digits, shape_a_plus_b_plus, Counter};
use super::lsquare::{coin, coin_flips_for, quantum_builder, reset_and_final_flips, walk_exits, Moves, WALKS};
use super::Table;
use crate::error::BuildError;
use crate::qcfa::QuantumClassicalMachine;

pub fn kpow_tqcfa(k: u32, epsilon: f64) -> Result<QuantumClassicalMachine, BuildError> {
    if k < 2 {
        return Err(BuildError::InvalidParameter("k must be at least 2".into()));
    }
    let flips = coin_flips_for(epsilon)?;
    let tapes = k as usize;
    let digits: Vec<usize> = (1..tapes).collect();
    let mut b = quantum_builder(&format!("kpow-tqcfa{k}"), tapes)?;
    b.initial("f0").accept("acc").reject("rej");
    let moves = Moves::new(tapes);
    let (s, r1, l1) = (moves.s.clone(), moves.r1.clone(), moves.l1.clone());

    // 1. shape aⁿb^{r·n^{k-1}}, n, r > 0; afterwards the digits sit on
    // square 1 and T1 rewinds into the reset
    shape_a_plus_b_plus(&mut b, tapes, "acc", "rej")?;
    let (init, init_mv) = place_digits(&mut b, tapes, &digits, "init", ("floop", &r1))?;
    b.put("back", "a", &init, &init_mv)?;
    let form = Counter::new("fc", tapes, digits.clone());
    let (inc, inc_mv) = form.start();
    b.put("floop", "b", &inc, &inc_mv)?;
    form.emit(&mut b, ("floop", &r1), ("floop", &r1), None)?;
    let (place, place_mv) = place_digits(&mut b, tapes, &digits, "place", ("r1", &l1))?;
    let (zero, zero_mv) = check_zero(&mut b, tapes, &digits, "fend", (&place, &place_mv))?;
    b.put("floop", "RM1", &zero, &zero_mv)?;
    reset_and_final_flips(&mut b, &moves, flips)?;

    // 2. rotate by √2π per a and −√2π per counter wrap, then measure
    b.theta_unitary("s02", "a", "Ua", "s02", &r1)?;
    let rot = Counter::new("rc", tapes, digits.clone());
    let (inc, inc_mv) = rot.start();
    b.put("s02", "b", &inc, &inc_mv)?;
    rot.emit(&mut b, ("s02", &r1), ("s02", &r1), Some("Uma"))?;
    b.put("s02", "RM1", "sm", &s)?;
    b.theta_measure("sm", "RM1", "M", &[("0", "w1", &l1), ("1", "rej", &s)])?;

    // 3. two walks; a step into the b's counts one block
    let exits = walk_exits(&mut b, &moves)?;
    for (w, (right, left)) in WALKS.iter().zip(exits) {
        let (flip, measure) = coin(w);
        let st = |s: &str| format!("{s}_{w}");
        b.theta_unitary(&flip, "a", "U", &measure, &s)?;
        b.theta_measure(&measure, "a", "M", &[("0", &st("rf"), &r1), ("1", &st("lf"), &l1)])?;

        let right_count = Counter::new(&st("rc"), tapes, digits.clone());
        let (rinc, rinc_mv) = right_count.start();
        b.put(&st("rf"), "a", &flip, &s)?;
        b.put(&st("rf"), "b", &rinc, &rinc_mv)?;
        b.put(&st("rf"), "RM1", &right.0, &right.1)?;
        b.put(&st("rt"), "b", &rinc, &rinc_mv)?;
        right_count.emit(&mut b, (&st("rt"), &r1), (&flip, &s), None)?;

        let left_count = Counter::new(&st("lc"), tapes, digits.clone());
        let (linc, linc_mv) = left_count.start();
        b.put(&st("lf"), "a", &flip, &s)?;
        b.put(&st("lf"), "b", &linc, &linc_mv)?;
        b.put(&st("lf"), "LM1", &left.0, &left.1)?;
        b.put(&st("lt"), "a", &linc, &linc_mv)?;
        b.put(&st("lt"), "b", &linc, &linc_mv)?;
        left_count.emit(&mut b, (&st("lt"), &l1), (&flip, &s), None)?;
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_validates() {
        for k in 2..=3 {
            let m = kpow_tqcfa(k, 0.125).unwrap();
            assert!(m.validate().is_valid(), "k = {k}");
        }
        assert!(kpow_tqcfa(1, 0.125).is_err());
    }
}
