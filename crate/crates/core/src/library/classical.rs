//! Two-tape machines given as explicit transition tables.
//!
//! Halting states have no outgoing transitions. Entries that lead to a
//! halting state keep every head still.

use super::Table;
use crate::error::BuildError;
use crate::machine::{ClassicalMachine, MachineBuilder};

fn machine(
    name: &str,
    alphabet: &[char],
    initial: &str,
    accept: &[&str],
    reject: &[&str],
    rows: &[(&str, &str, &str, &str)],
) -> Result<ClassicalMachine, BuildError> {
    let mut b = MachineBuilder::new(name, 2, alphabet);
    b.initial(initial);
    for s in accept {
        b.accept(s);
    }
    for s in reject {
        b.reject(s);
    }
    b.rows(rows)?;
    b.build()
}

/// aⁿbⁿ. T1 checks the shape and walks back over the b's while T2
/// consumes one a per b.
pub fn leq() -> Result<ClassicalMachine, BuildError> {
    machine(
        "leq",
        &['a', 'b'],
        "s0",
        &["acc"],
        &["rej"],
        &[
            ("s0", "LM1", "s0", "RS"),
            ("s0", "a", "s1", "RS"),
            ("s0", "b", "rej", "SS"),
            ("s0", "RM1", "acc", "SS"),
            ("s1", "a", "s1", "RS"),
            ("s1", "b", "s2", "RS"),
            ("s1", "RM1", "rej", "SS"),
            ("s2", "a", "rej", "SS"),
            ("s2", "b", "s2", "RS"),
            ("s2", "RM1", "sb", "LS"),
            ("sb", "a", "scrt", "SR"),
            ("sb", "b", "sa", "SR"),
            ("sa", "a", "sb", "LS"),
            ("sa", "b", "rej", "SS"),
            ("scrt", "a", "rej", "SS"),
            ("scrt", "b", "acc", "SS"),
        ],
    )
}

/// Palindromes over {a, b}: T1 runs to the right end and walks back
/// while T2 reads forward.
pub fn lpal() -> Result<ClassicalMachine, BuildError> {
    machine(
        "lpal",
        &['a', 'b'],
        "s0",
        &["acc"],
        &["rej"],
        &[
            ("s0", "LM1", "s0", "RS"),
            ("s0", "a", "s0", "RS"),
            ("s0", "b", "s0", "RS"),
            ("s0", "RM1", "st", "LS"),
            ("st", "a", "sa", "SR"),
            ("st", "b", "sb", "SR"),
            ("st", "LM1", "scrt", "SR"),
            ("sa", "a", "s", "LS"),
            ("sa", "b", "rej", "SS"),
            ("sb", "b", "s", "LS"),
            ("sb", "a", "rej", "SS"),
            ("s", "a", "sa", "SR"),
            ("s", "b", "sb", "SR"),
            ("s", "LM1", "scrt", "SR"),
            ("scrt", "a", "rej", "SS"),
            ("scrt", "b", "rej", "SS"),
            ("scrt", "RM2", "acc", "SS"),
        ],
    )
}

/// aⁿbⁿcⁿ. After the shape check, T1 walks left over the c's against
/// T2's a's, then right over the c's again against T2's b's.
pub fn ltrieq() -> Result<ClassicalMachine, BuildError> {
    machine(
        "ltrieq",
        &['a', 'b', 'c'],
        "f0",
        &["acc"],
        &["rej"],
        &[
            ("f0", "LM1", "f0", "RS"),
            ("f0", "RM1", "acc", "SS"),
            ("f0", "a", "f1", "RS"),
            ("f0", "b", "rej", "SS"),
            ("f0", "c", "rej", "SS"),
            ("f1", "a", "f1", "RS"),
            ("f1", "b", "f2", "RS"),
            ("f1", "c", "rej", "SS"),
            ("f1", "RM1", "rej", "SS"),
            ("f2", "b", "f2", "RS"),
            ("f2", "c", "f3", "RS"),
            ("f2", "a", "rej", "SS"),
            ("f2", "RM1", "rej", "SS"),
            ("f3", "c", "f3", "RS"),
            ("f3", "RM1", "b1", "LS"),
            ("f3", "a", "rej", "SS"),
            ("f3", "b", "rej", "SS"),
            // c's against a's
            ("b1", "c", "a1", "SR"),
            ("b1", "b", "crt1", "SR"),
            ("a1", "a", "b1", "LS"),
            ("a1", "b", "rej", "SS"),
            ("crt1", "b", "q2", "RS"),
            ("crt1", "a", "rej", "SS"),
            // b's against c's
            ("q2", "c", "p2", "SR"),
            ("q2", "RM1", "rej", "SS"),
            ("p2", "b", "q2", "RS"),
            ("p2", "c", "e2", "RS"),
            ("e2", "RM1", "acc", "SS"),
            ("e2", "c", "rej", "SS"),
        ],
    )
}

/// a^{kn}bⁿ: like [`leq`], but each b on T1 consumes a chain of k a's on
/// T2 (states `sa1` … `sak`).
pub fn leq_k(k: u32) -> Result<ClassicalMachine, BuildError> {
    if k == 0 {
        return Err(BuildError::InvalidParameter("k must be at least 1".into()));
    }
    let mut b = MachineBuilder::new(&format!("leq-k{k}"), 2, &['a', 'b']);
    b.initial("s0").accept("acc").reject("rej");
    b.rows(&[
        ("s0", "LM1", "s0", "RS"),
        ("s0", "a", "s1", "RS"),
        ("s0", "b", "rej", "SS"),
        ("s0", "RM1", "acc", "SS"),
        ("s1", "a", "s1", "RS"),
        ("s1", "b", "s2", "RS"),
        ("s1", "RM1", "rej", "SS"),
        ("s2", "a", "rej", "SS"),
        ("s2", "b", "s2", "RS"),
        ("s2", "RM1", "sb", "LS"),
        ("sb", "a", "scrt", "SR"),
        ("sb", "b", "sa1", "SR"),
        ("scrt", "a", "rej", "SS"),
        ("scrt", "b", "acc", "SS"),
    ])?;
    for i in 1..=k {
        let here = format!("sa{i}");
        let next = if i == k { "sb".to_string() } else { format!("sa{}", i + 1) };
        let moves = if i == k { "LS" } else { "SR" };
        b.put(&here, "a", &next, moves)?;
        b.put(&here, "b", "rej", "SS")?;
    }
    b.build()
}

/// aⁿbⁿaᵐcᵐ with n, m ≥ 0, where `c` plays the second kind of b.
///
/// Shape check first, then two comparisons: the first a-block against
/// whatever block follows it, and if that was a b-block, the second
/// a-block against the c-block.
pub fn meq() -> Result<ClassicalMachine, BuildError> {
    machine(
        "meq",
        &['a', 'b', 'c'],
        "g0",
        &["acc"],
        &["rej"],
        &[
            ("g0", "LM1", "g1", "RS"),
            ("g1", "RM1", "acc", "SS"),
            ("g1", "a", "g2", "RS"),
            ("g1", "b", "rej", "SS"),
            ("g1", "c", "rej", "SS"),
            ("g2", "a", "g2", "RS"),
            ("g2", "b", "g3", "RS"),
            ("g2", "c", "g5", "RS"),
            ("g2", "RM1", "rej", "SS"),
            ("g3", "b", "g3", "RS"),
            ("g3", "a", "g4", "RS"),
            ("g3", "RM1", "r1", "LS"),
            ("g3", "c", "rej", "SS"),
            ("g4", "a", "g4", "RS"),
            ("g4", "c", "g5", "RS"),
            ("g4", "b", "rej", "SS"),
            ("g4", "RM1", "rej", "SS"),
            ("g5", "c", "g5", "RS"),
            ("g5", "RM1", "r1", "LS"),
            ("g5", "a", "rej", "SS"),
            ("g5", "b", "rej", "SS"),
            ("r1", "a", "r1", "LS"),
            ("r1", "b", "r1", "LS"),
            ("r1", "c", "r1", "LS"),
            ("r1", "LM1", "k1", "SR"),
            // T2 skips the first a-block; then T1 over a's against T2
            // over the block after it.
            ("k1", "a", "k1", "SR"),
            ("k1", "b", "q1in", "RS"),
            ("k1", "c", "q1in", "RS"),
            ("q1in", "a", "e1", "SR"),
            ("q1in", "b", "rej", "SS"),
            ("q1in", "c", "rej", "SS"),
            ("e1", "b", "q1in", "RS"),
            ("e1", "c", "q1in", "RS"),
            ("e1", "a", "q1out", "RS"),
            ("e1", "RM2", "q1out", "RS"),
            ("q1out", "a", "rej", "SS"),
            ("q1out", "b", "s2", "RS"),
            ("q1out", "c", "acc", "SS"),
            // T1 runs to the c-block; T2 sits on the second a-block.
            ("s2", "a", "s2", "RS"),
            ("s2", "b", "s2", "RS"),
            ("s2", "c", "e2", "SR"),
            ("s2", "RM1", "acc", "SS"),
            ("e2", "a", "p2in", "RS"),
            ("e2", "c", "p2out", "RS"),
            ("p2in", "c", "e2", "SR"),
            ("p2in", "RM1", "rej", "SS"),
            ("p2out", "c", "rej", "SS"),
            ("p2out", "RM1", "acc", "SS"),
        ],
    )
}

/// Words over {a, b} with as many a's as b's. For every a on T1, T2
/// searches forward for an unused b.
pub fn lbalance_count() -> Result<ClassicalMachine, BuildError> {
    machine(
        "lbalance-count",
        &['a', 'b'],
        "s0",
        &["seq"],
        &["sg", "sl"],
        &[
            ("s0", "LM1", "s0", "RS"),
            ("s0", "RM1", "scrt", "SR"),
            ("s0", "a", "sb", "SR"),
            ("s0", "b", "s0", "RS"),
            ("sb", "a", "sb", "SR"),
            ("sb", "b", "sa", "RS"),
            ("sb", "RM2", "sg", "SS"),
            ("sa", "a", "sb", "SR"),
            ("sa", "b", "sa", "RS"),
            ("sa", "RM1", "scrt", "SR"),
            ("scrt", "a", "scrt", "SR"),
            ("scrt", "b", "sl", "SS"),
            ("scrt", "RM2", "seq", "SS"),
        ],
    )
}

/// ww over {a, b}. T1 moves two squares per square of T2 to find the
/// middle, then the halves are compared.
pub fn lcopy() -> Result<ClassicalMachine, BuildError> {
    machine(
        "lcopy",
        &['a', 'b'],
        "m0",
        &["acc"],
        &["rej"],
        &[
            ("m0", "LM1", "m1", "RS"),
            ("m1", "RM1", "rw", "LS"),
            ("m1", "a", "m2", "RS"),
            ("m1", "b", "m2", "RS"),
            ("m2", "RM1", "rej", "SS"),
            ("m2", "a", "m3", "SR"),
            ("m2", "b", "m3", "SR"),
            ("m3", "a", "m1", "RS"),
            ("m3", "b", "m1", "RS"),
            ("rw", "a", "rw", "LS"),
            ("rw", "b", "rw", "LS"),
            ("rw", "LM1", "k0", "SR"),
            ("k0", "a", "ka", "RS"),
            ("k0", "b", "kb", "RS"),
            ("k0", "RM2", "acc", "SS"),
            ("ka", "a", "k0", "SR"),
            ("ka", "b", "rej", "SS"),
            ("kb", "b", "k0", "SR"),
            ("kb", "a", "rej", "SS"),
        ],
    )
}

/// Odd-length words over {a, b} whose middle letter is `a`. T2 trails T1
/// at half speed and remembers the letter under it.
pub fn lmiddle() -> Result<ClassicalMachine, BuildError> {
    machine(
        "lmiddle",
        &['a', 'b'],
        "m0",
        &["acc"],
        &["rej"],
        &[
            ("m0", "LM1", "m1", "RS"),
            ("m1", "RM1", "rej", "SS"),
            ("m1", "a", "m2", "SR"),
            ("m1", "b", "m2", "SR"),
            ("m2", "a", "m3a", "RS"),
            ("m2", "b", "m3b", "RS"),
            ("m3a", "RM1", "acc", "SS"),
            ("m3a", "a", "m1", "RS"),
            ("m3a", "b", "m1", "RS"),
            ("m3b", "RM1", "rej", "SS"),
            ("m3b", "a", "m1", "RS"),
            ("m3b", "b", "m1", "RS"),
        ],
    )
}

/// Balanced parentheses. T2 is a unary counter of open parentheses;
/// `z` and `p` record whether the counter is zero.
pub fn lbalanced() -> Result<ClassicalMachine, BuildError> {
    machine(
        "lbalanced",
        &['(', ')'],
        "z",
        &["acc"],
        &["rej"],
        &[
            ("z", "LM1", "z", "RS"),
            ("z", "(", "inc", "SR"),
            ("z", ")", "rej", "SS"),
            ("z", "RM1", "acc", "SS"),
            ("p", "(", "inc", "SR"),
            ("p", ")", "dec", "SL"),
            ("p", "RM1", "rej", "SS"),
            ("inc", "(", "p", "RS"),
            ("inc", ")", "p", "RS"),
            ("dec", "LM2", "z", "RS"),
            ("dec", "(", "p", "RS"),
            ("dec", ")", "p", "RS"),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let m = leq().unwrap();
        for (w, ok) in [("", true), ("ab", true), ("aabb", true), ("aab", false), ("ba", false)] {
            assert_eq!(m.accepts(w).unwrap(), ok, "leq {w}");
        }
        let m = lbalance_count().unwrap();
        for (w, ok) in [("b", false), ("ba", true), ("abba", true), ("aab", false), ("", true)] {
            assert_eq!(m.accepts(w).unwrap(), ok, "lbalance-count {w}");
        }
        let m = meq().unwrap();
        for (w, ok) in [("abac", true), ("ac", true), ("aabbaacc", true), ("aabac", false)] {
            assert_eq!(m.accepts(w).unwrap(), ok, "meq {w}");
        }
    }

    #[test]
    fn palindrome_steps() {
        let m = lpal().unwrap();
        assert_eq!(m.run("", None).unwrap().steps, 4);
        for w in ["a", "aba", "abba", "babbab"] {
            assert_eq!(m.run(w, None).unwrap().steps, 3 * w.len() as u64 + 4, "{w}");
        }
    }
}
