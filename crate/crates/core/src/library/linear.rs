//! Generator for languages σ₁*σ₂*…σₘ* cut down by restrictions of the
//! form `coef·#(target) = Σ #(others)`.

use super::Table;
use crate::error::BuildError;
use crate::machine::{ClassicalMachine, MachineBuilder};
use crate::oracle::Restriction;

fn check(alphabet: &[char], restrictions: &[Restriction]) -> Result<(), BuildError> {
    let bad = |msg: String| Err(BuildError::InvalidParameter(msg));
    if alphabet.is_empty() {
        return bad("empty alphabet".into());
    }
    for (i, c) in alphabet.iter().enumerate() {
        if alphabet[..i].contains(c) {
            return bad(format!("letter `{c}` listed twice"));
        }
    }
    for (n, r) in restrictions.iter().enumerate() {
        let n = n + 1;
        if r.target >= alphabet.len() {
            return bad(format!("restriction {n}: target index {} out of range", r.target));
        }
        for (i, &j) in r.others.iter().enumerate() {
            if j >= alphabet.len() {
                return bad(format!("restriction {n}: letter index {j} out of range"));
            }
            if j == r.target {
                return bad(format!("restriction {n}: target also listed on the right"));
            }
            if r.others[..i].contains(&j) {
                return bad(format!("restriction {n}: letter index {j} listed twice"));
            }
        }
    }
    Ok(())
}

/// Builds the two-tape recognizer. Each restriction is one left-to-right
/// pass: every target letter on T1 makes T2 skip forward over `coef`
/// letters from `others`; at the right end T2 must find none left.
/// Both heads rewind between passes.
pub fn llinear(
    name: &str,
    alphabet: &[char],
    restrictions: &[Restriction],
) -> Result<ClassicalMachine, BuildError> {
    check(alphabet, restrictions)?;
    let mut b = MachineBuilder::new(name, 2, alphabet);
    b.initial("fs").accept("acc").reject("rej");
    let letters: Vec<String> = alphabet.iter().map(|c| c.to_string()).collect();

    // Shape σ₁*…σₘ*: state f{i} means the last letter read was σᵢ.
    b.put("fs", "LM1", "f1", "RS")?;
    for i in 0..letters.len() {
        let here = format!("f{}", i + 1);
        for (j, l) in letters.iter().enumerate() {
            if j >= i {
                b.put(&here, l, &format!("f{}", j + 1), "RS")?;
            } else {
                b.put(&here, l, "rej", "SS")?;
            }
        }
        if restrictions.is_empty() {
            b.put(&here, "RM1", "acc", "SS")?;
        } else {
            b.put(&here, "RM1", "fr", "LS")?;
        }
    }
    if !restrictions.is_empty() {
        for l in &letters {
            b.put("fr", l, "fr", "LS")?;
        }
        b.put("fr", "LM1", "p1", "RS")?;
    }

    for (n, r) in restrictions.iter().enumerate() {
        let n = n + 1;
        let p = format!("p{n}");
        let q = |j: u32| format!("q{n}_{j}");
        let z = format!("z{n}");
        for (i, l) in letters.iter().enumerate() {
            if i == r.target {
                if r.target_coef == 0 {
                    b.put(&p, l, &p, "RS")?;
                } else {
                    b.put(&p, l, &q(1), "SR")?;
                }
            } else {
                b.put(&p, l, &p, "RS")?;
            }
        }
        b.put(&p, "RM1", &z, "SR")?;
        for j in 1..=r.target_coef {
            for (i, l) in letters.iter().enumerate() {
                if r.others.contains(&i) {
                    if j < r.target_coef {
                        b.put(&q(j), l, &q(j + 1), "SR")?;
                    } else {
                        b.put(&q(j), l, &p, "RS")?;
                    }
                } else {
                    b.put(&q(j), l, &q(j), "SR")?;
                }
            }
            b.put(&q(j), "RM2", "rej", "SS")?;
        }
        let last = n == restrictions.len();
        let back2 = format!("w{n}b");
        let back1 = format!("w{n}a");
        for (i, l) in letters.iter().enumerate() {
            if r.others.contains(&i) {
                b.put(&z, l, "rej", "SS")?;
            } else {
                b.put(&z, l, &z, "SR")?;
            }
        }
        if last {
            b.put(&z, "RM2", "acc", "SS")?;
        } else {
            b.put(&z, "RM2", &back2, "SL")?;
            for l in &letters {
                b.put(&back2, l, &back2, "SL")?;
                b.put(&back1, l, &back1, "LS")?;
            }
            b.put(&back2, "LM2", &back1, "LS")?;
            b.put(&back1, "LM1", &format!("p{}", n + 1), "RS")?;
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_restrictions() {
        let ab = ['a', 'b'];
        assert!(llinear("x", &ab, &[Restriction::new(2, 1, &[0])]).is_err());
        assert!(llinear("x", &ab, &[Restriction::new(0, 1, &[0])]).is_err());
        assert!(llinear("x", &ab, &[Restriction::new(0, 1, &[1, 1])]).is_err());
        assert!(llinear("x", &[], &[]).is_err());
        assert!(llinear("x", &['a', 'a'], &[]).is_err());
    }

    #[test]
    fn no_restrictions_is_the_shape() {
        let m = llinear("x", &['a', 'b'], &[]).unwrap();
        assert!(m.accepts("aabbb").unwrap());
        assert!(!m.accepts("aba").unwrap());
    }
}
