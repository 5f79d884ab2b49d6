//! Machines for aⁿb^{n^k} and aⁿb^{r·n^{k-1}} that count b's with a
//! base-n counter kept in head positions.
//!
//! Each digit lives on its own tape. Digit value v is the head standing
//! on square v+1, which lies inside the a-block, so values run 0..n-1.
//! Incrementing moves the head right; landing on the first b means the
//! digit overflowed, and the head walks back to the left end-marker and
//! steps onto square 1 before the carry goes to the next digit.

use super::{lm, mv, stay, Table};
use crate::error::BuildError;
use crate::machine::{ClassicalMachine, MachineBuilder};

/// State names and tables for one copy of the increment routine.
#[derive(Debug, Clone)]
pub(crate) struct Counter {
    pub prefix: String,
    pub tapes: usize,
    /// Tape index of each digit, least significant first.
    pub digits: Vec<usize>,
}

impl Counter {
    pub fn new(prefix: &str, tapes: usize, digits: Vec<usize>) -> Self {
        Counter {
            prefix: prefix.to_string(),
            tapes,
            digits,
        }
    }

    fn inc(&self, d: usize) -> String {
        format!("{}.inc{}", self.prefix, d + 1)
    }

    /// Target state and move of a transition that starts an increment.
    pub fn start(&self) -> (String, String) {
        (self.inc(0), mv(self.tapes, self.digits[0], 'R'))
    }

    /// Emits the routine. `carry_done` is taken when the increment stops
    /// below the top digit, `wrapped` when the top digit overflowed.
    /// `top_op` is applied on the step that sees the top digit overflow.
    pub fn emit(
        &self,
        t: &mut impl Table,
        carry_done: (&str, &str),
        wrapped: (&str, &str),
        top_op: Option<&str>,
    ) -> Result<(), BuildError> {
        let top = self.digits.len() - 1;
        for (d, &tape) in self.digits.iter().enumerate() {
            let inc = self.inc(d);
            let rew = format!("{}.rew{}", self.prefix, d + 1);
            let up = format!("{}.up{}", self.prefix, d + 1);
            t.put(&inc, "a", carry_done.0, carry_done.1)?;
            let op = if d == top { top_op } else { None };
            t.put_op(op, &inc, "b", &rew, &mv(self.tapes, tape, 'L'))?;
            t.put(&rew, "a", &rew, &mv(self.tapes, tape, 'L'))?;
            t.put(&rew, &lm(tape), &up, &mv(self.tapes, tape, 'R'))?;
            if d < top {
                t.put(&up, "a", &self.inc(d + 1), &mv(self.tapes, self.digits[d + 1], 'R'))?;
            } else {
                t.put(&up, "a", wrapped.0, wrapped.1)?;
            }
        }
        Ok(())
    }
}

/// Steps each digit head from its end-marker onto square 1, one tape at
/// a time, then continues with `then`. Returns the (state, move) that
/// starts the sequence.
pub(crate) fn place_digits(
    t: &mut impl Table,
    tapes: usize,
    digits: &[usize],
    prefix: &str,
    then: (&str, &str),
) -> Result<(String, String), BuildError> {
    let name = |d: usize| format!("{prefix}{}", d + 1);
    for d in 0..digits.len() {
        if d + 1 < digits.len() {
            t.put(&name(d), "a", &name(d + 1), &mv(tapes, digits[d + 1], 'R'))?;
        } else {
            t.put(&name(d), "a", then.0, then.1)?;
        }
    }
    Ok((name(0), mv(tapes, digits[0], 'R')))
}

/// Checks that every digit is zero by stepping each head left onto its
/// end-marker, then continues with `then`. Returns the (state, move)
/// that starts the check.
pub(crate) fn check_zero(
    t: &mut impl Table,
    tapes: usize,
    digits: &[usize],
    prefix: &str,
    then: (&str, &str),
) -> Result<(String, String), BuildError> {
    let name = |d: usize| format!("{prefix}{}", d + 1);
    for (d, &tape) in digits.iter().enumerate() {
        t.put(&name(d), "a", "rej", &stay(tapes))?;
        if d + 1 < digits.len() {
            t.put(&name(d), &lm(tape), &name(d + 1), &mv(tapes, digits[d + 1], 'L'))?;
        } else {
            t.put(&name(d), &lm(tape), then.0, then.1)?;
        }
    }
    Ok((name(0), mv(tapes, digits[0], 'L')))
}

/// Shape a⁺b⁺ on T1, leaving T1 on the last a in state `back`.
/// `empty` and `no_b` are the verdict states for ε and for aⁿ.
pub(crate) fn shape_a_plus_b_plus(
    t: &mut impl Table,
    tapes: usize,
    empty: &str,
    no_b: &str,
) -> Result<(), BuildError> {
    let r = mv(tapes, 0, 'R');
    let l = mv(tapes, 0, 'L');
    let s = stay(tapes);
    t.rows(&[
        ("f0", "LM1", "f1", r.as_str()),
        ("f1", "RM1", empty, s.as_str()),
        ("f1", "a", "f2", r.as_str()),
        ("f1", "b", "rej", s.as_str()),
        ("f2", "a", "f2", r.as_str()),
        ("f2", "b", "f3", r.as_str()),
        ("f2", "RM1", no_b, s.as_str()),
        ("f3", "b", "f3", r.as_str()),
        ("f3", "a", "rej", s.as_str()),
        ("f3", "RM1", "back", l.as_str()),
        ("back", "b", "back", l.as_str()),
    ])
}

/// aⁿb^{n^k} with k+1 tapes: T1 reads the b's, T2 … T(k+1) hold a k-digit
/// base-n count. The top digit overflows once after exactly n^k b's;
/// a flag in the control remembers that, and a second overflow rejects.
pub fn kpow_tfa(k: u32) -> Result<ClassicalMachine, BuildError> {
    if k == 0 {
        return Err(BuildError::InvalidParameter("k must be at least 1".into()));
    }
    let tapes = k as usize + 1;
    let digits: Vec<usize> = (1..tapes).collect();
    let mut b = MachineBuilder::new(&format!("kpow-tfa{k}"), tapes, &['a', 'b']);
    b.initial("f0").accept("acc").reject("rej");
    let r1 = mv(tapes, 0, 'R');
    let s = stay(tapes);

    shape_a_plus_b_plus(&mut b, tapes, "acc", "rej")?;
    let (init, init_mv) = place_digits(&mut b, tapes, &digits, "init", ("loop0", &r1))?;
    b.put("back", "a", &init, &init_mv)?;

    for flag in 0..2 {
        let lp = format!("loop{flag}");
        let counter = Counter::new(&format!("c{flag}"), tapes, digits.clone());
        let (inc, inc_mv) = counter.start();
        b.put(&lp, "b", &inc, &inc_mv)?;
        if flag == 0 {
            b.put(&lp, "RM1", "rej", &s)?;
            counter.emit(&mut b, (&lp, &r1), ("loop1", &r1), None)?;
        } else {
            let (end, end_mv) = check_zero(&mut b, tapes, &digits, "end", ("acc", &s))?;
            b.put(&lp, "RM1", &end, &end_mv)?;
            counter.emit(&mut b, (&lp, &r1), ("rej", &s), None)?;
        }
    }
    b.build()
}

/// aⁿb^{r·n^{k-1}} with k tapes: the same counter with k−1 digits, but
/// the top digit simply wraps. Accepts when the count ends at zero.
pub fn multiple_tfa(k: u32) -> Result<ClassicalMachine, BuildError> {
    if k == 0 {
        return Err(BuildError::InvalidParameter("k must be at least 1".into()));
    }
    let tapes = k as usize;
    let mut b = MachineBuilder::new(&format!("multiple-tfa{k}"), tapes, &['a', 'b']);
    b.initial("f0").accept("acc").reject("rej");
    let r1 = mv(tapes, 0, 'R');
    let s = stay(tapes);
    if k == 1 {
        b.rows(&[
            ("f0", "LM1", "f1", "R"),
            ("f1", "a", "f1", "R"),
            ("f1", "b", "f2", "R"),
            ("f1", "RM1", "acc", "S"),
            ("f2", "b", "f2", "R"),
            ("f2", "a", "rej", "S"),
            ("f2", "RM1", "acc", "S"),
        ])?;
        return b.build();
    }
    let digits: Vec<usize> = (1..tapes).collect();
    shape_a_plus_b_plus(&mut b, tapes, "acc", "acc")?;
    let (init, init_mv) = place_digits(&mut b, tapes, &digits, "init", ("loop", &r1))?;
    b.put("back", "a", &init, &init_mv)?;
    let counter = Counter::new("c", tapes, digits.clone());
    let (inc, inc_mv) = counter.start();
    b.put("loop", "b", &inc, &inc_mv)?;
    let (end, end_mv) = check_zero(&mut b, tapes, &digits, "end", ("acc", &s))?;
    b.put("loop", "RM1", &end, &end_mv)?;
    counter.emit(&mut b, ("loop", &r1), ("loop", &r1), None)?;
    b.build()
}

/// aⁿb^{n²} with three tapes, written out by hand: shape check, place
/// T2 and T3 on square 1, count the b's in base n with a flag for the
/// single allowed overflow of T3, then check both digits are zero.
pub fn lsquare_3tfa() -> Result<ClassicalMachine, BuildError> {
    let mut b = MachineBuilder::new("lsquare-3tfa", 3, &['a', 'b']);
    b.initial("c0").accept("acc").reject("rej");
    b.rows(&[
        // shape a⁺b⁺ or ε
        ("c0", "LM1", "c1", "RSS"),
        ("c1", "RM1", "acc", "SSS"),
        ("c1", "a", "c2", "RSS"),
        ("c1", "b", "rej", "SSS"),
        ("c2", "a", "c2", "RSS"),
        ("c2", "b", "c3", "RSS"),
        ("c2", "RM1", "rej", "SSS"),
        ("c3", "b", "c3", "RSS"),
        ("c3", "a", "rej", "SSS"),
        ("c3", "RM1", "back", "LSS"),
        ("back", "b", "back", "LSS"),
        // both digits to zero, T1 onto the first b
        ("back", "a", "init2", "SRS"),
        ("init2", "a", "init3", "SSR"),
        ("init3", "a", "loop", "RSS"),
        // count, T3 not yet overflowed
        ("loop", "b", "inc2", "SRS"),
        ("loop", "RM1", "rej", "SSS"),
        ("inc2", "a", "loop", "RSS"),
        ("inc2", "b", "rew2", "SLS"),
        ("rew2", "a", "rew2", "SLS"),
        ("rew2", "LM2", "up2", "SRS"),
        ("up2", "a", "inc3", "SSR"),
        ("inc3", "a", "loop", "RSS"),
        ("inc3", "b", "rew3", "SSL"),
        ("rew3", "a", "rew3", "SSL"),
        ("rew3", "LM3", "up3", "SSR"),
        ("up3", "a", "loopf", "RSS"),
        // count, T3 overflowed once
        ("loopf", "b", "inc2f", "SRS"),
        ("loopf", "RM1", "end2", "SLS"),
        ("inc2f", "a", "loopf", "RSS"),
        ("inc2f", "b", "rew2f", "SLS"),
        ("rew2f", "a", "rew2f", "SLS"),
        ("rew2f", "LM2", "up2f", "SRS"),
        ("up2f", "a", "inc3f", "SSR"),
        ("inc3f", "a", "loopf", "RSS"),
        ("inc3f", "b", "rej", "SSS"),
        // both digits back at zero
        ("end2", "LM2", "end3", "SSL"),
        ("end2", "a", "rej", "SSS"),
        ("end3", "LM3", "acc", "SSS"),
        ("end3", "a", "rej", "SSS"),
    ])?;
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        let hand = lsquare_3tfa().unwrap();
        let gen = kpow_tfa(2).unwrap();
        for (w, ok) in [
            ("", true),
            ("ab", true),
            ("aabbbb", true),
            ("aaabbbbbbbbb", true),
            ("abb", false),
            ("aabbb", false),
            ("aabbbbbbbb", false),
            ("a", false),
            ("b", false),
        ] {
            assert_eq!(hand.accepts(w).unwrap(), ok, "hand {w}");
            assert_eq!(gen.accepts(w).unwrap(), ok, "gen {w}");
        }
    }

    #[test]
    fn multiples() {
        let m = multiple_tfa(2).unwrap();
        for (w, ok) in [("", true), ("aa", true), ("aabbbb", true), ("aabbb", false), ("b", false)] {
            assert_eq!(m.accepts(w).unwrap(), ok, "{w}");
        }
    }
}
