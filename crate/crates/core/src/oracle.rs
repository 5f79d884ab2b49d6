//! Direct membership predicates for the languages recognized by the
//! library machines. Nothing here looks at a transition table.

use std::fmt;

/// One restriction `coef·#(target) = Σ #(others)` of a linear language,
/// with letters given as alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    pub target: usize,
    pub target_coef: u32,
    pub others: Vec<usize>,
}

impl Restriction {
    pub fn new(target: usize, target_coef: u32, others: &[usize]) -> Self {
        Restriction {
            target,
            target_coef,
            others: others.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Oracle {
    /// aⁿbⁿ
    Leq,
    /// palindromes over {a, b}
    Lpal,
    /// aⁿbⁿcⁿ
    Ltrieq,
    /// a^{kn}bⁿ
    LeqK(u32),
    /// aⁿbⁿaᵐcᵐ (c stands for the second b)
    Meq,
    /// #a = #b over {a, b}
    BalanceCount,
    /// σ₁*…σₘ* with linear count restrictions
    Linear {
        alphabet: Vec<char>,
        restrictions: Vec<Restriction>,
    },
    /// ww over {a, b}
    Copy,
    /// odd length with `a` in the middle, over {a, b}
    Middle,
    /// balanced parentheses, checked with a stack
    Balanced,
    /// balanced parentheses, checked by the two counting conditions
    BalancedByCounts,
    /// aⁿb^{n^k}
    Kpow(u32),
    /// aⁿb^{r·n^{k-1}}
    Multiple(u32),
    /// aⁿb^{r·n^{k-1}} with n, r > 0, or the empty string
    QuantumForm(u32),
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Oracle::Leq => f.write_str("leq"),
            Oracle::Lpal => f.write_str("lpal"),
            Oracle::Ltrieq => f.write_str("ltrieq"),
            Oracle::LeqK(k) => write!(f, "leq-k{k}"),
            Oracle::Meq => f.write_str("meq"),
            Oracle::BalanceCount => f.write_str("lbalance-count"),
            Oracle::Linear { alphabet, restrictions } => {
                let letters: String = alphabet.iter().collect();
                write!(f, "llinear[{letters}")?;
                for r in restrictions {
                    let others: String = r.others.iter().map(|&i| alphabet[i]).collect();
                    write!(f, ";{}{}={}", r.target_coef, alphabet[r.target], others)?;
                }
                f.write_str("]")
            }
            Oracle::Copy => f.write_str("lcopy"),
            Oracle::Middle => f.write_str("lmiddle"),
            Oracle::Balanced => f.write_str("lbalanced"),
            Oracle::BalancedByCounts => f.write_str("lbalanced-counts"),
            Oracle::Kpow(2) => f.write_str("lsquare"),
            Oracle::Kpow(k) => write!(f, "kpow{k}"),
            Oracle::Multiple(k) => write!(f, "multiple{k}"),
            Oracle::QuantumForm(k) => write!(f, "form{k}"),
        }
    }
}

impl Oracle {
    pub fn alphabet(&self) -> Vec<char> {
        match self {
            Oracle::Ltrieq | Oracle::Meq => vec!['a', 'b', 'c'],
            Oracle::Linear { alphabet, .. } => alphabet.clone(),
            Oracle::Balanced | Oracle::BalancedByCounts => vec!['(', ')'],
            _ => vec!['a', 'b'],
        }
    }

    pub fn member(&self, w: &str) -> bool {
        let s: Vec<char> = w.chars().collect();
        match self {
            Oracle::Leq => block_lengths(&s, &['a', 'b']).is_some_and(|c| c[0] == c[1]),
            Oracle::Lpal => s.iter().eq(s.iter().rev()) && s.iter().all(|c| "ab".contains(*c)),
            Oracle::Ltrieq => {
                block_lengths(&s, &['a', 'b', 'c']).is_some_and(|c| c[0] == c[1] && c[1] == c[2])
            }
            Oracle::LeqK(k) => block_lengths(&s, &['a', 'b'])
                .is_some_and(|c| c[0] == *k as usize * c[1]),
            Oracle::Meq => (0..=s.len() / 2).any(|n| {
                let (first, rest) = s.split_at(2 * n);
                block_lengths(first, &['a', 'b']).is_some_and(|c| c == [n, n])
                    && block_lengths(rest, &['a', 'c']).is_some_and(|c| c[0] == c[1])
            }),
            Oracle::BalanceCount => {
                s.iter().all(|c| "ab".contains(*c))
                    && count(&s, 'a') == count(&s, 'b')
            }
            Oracle::Linear { alphabet, restrictions } => match block_lengths(&s, alphabet) {
                Some(k) => restrictions.iter().all(|r| {
                    r.target_coef as usize * k[r.target] == r.others.iter().map(|&j| k[j]).sum::<usize>()
                }),
                None => false,
            },
            Oracle::Copy => {
                s.len() % 2 == 0
                    && s.iter().all(|c| "ab".contains(*c))
                    && s[..s.len() / 2] == s[s.len() / 2..]
            }
            Oracle::Middle => {
                s.len() % 2 == 1 && s.iter().all(|c| "ab".contains(*c)) && s[s.len() / 2] == 'a'
            }
            Oracle::Balanced => {
                let mut stack = Vec::new();
                for &c in &s {
                    match c {
                        '(' => stack.push(c),
                        ')' => {
                            if stack.pop().is_none() {
                                return false;
                            }
                        }
                        _ => return false,
                    }
                }
                stack.is_empty()
            }
            Oracle::BalancedByCounts => {
                if !s.iter().all(|c| "()".contains(*c)) {
                    return false;
                }
                // Condition (1) on the whole word, condition (2) on every
                // proper nonempty prefix.
                let whole = count(&s, '(') == count(&s, ')');
                let prefixes =
                    (1..s.len()).all(|i| count(&s[..i], '(') >= count(&s[..i], ')'));
                whole && prefixes
            }
            Oracle::Kpow(k) => match block_lengths(&s, &['a', 'b']) {
                Some(c) => checked_pow(c[0], *k) == Some(c[1]),
                None => false,
            },
            Oracle::Multiple(k) => match block_lengths(&s, &['a', 'b']) {
                Some(c) => match checked_pow(c[0], k - 1) {
                    Some(0) => c[1] == 0,
                    Some(unit) => c[1] % unit == 0,
                    None => c[1] == 0,
                },
                None => false,
            },
            Oracle::QuantumForm(k) => {
                if s.is_empty() {
                    return true;
                }
                match block_lengths(&s, &['a', 'b']) {
                    Some(c) if c[0] > 0 && c[1] > 0 => match checked_pow(c[0], k - 1) {
                        Some(unit) => c[1] % unit == 0,
                        None => false,
                    },
                    _ => false,
                }
            }
        }
    }
}

fn count(s: &[char], c: char) -> usize {
    s.iter().filter(|&&x| x == c).count()
}

fn checked_pow(base: usize, exp: u32) -> Option<usize> {
    base.checked_pow(exp)
}

/// If `s` is `l₀* l₁* … ` for the given letters in order, the length of
/// each block.
fn block_lengths(s: &[char], letters: &[char]) -> Option<Vec<usize>> {
    let mut counts = vec![0; letters.len()];
    let mut block = 0;
    for &c in s {
        let i = letters.iter().position(|&l| l == c)?;
        if i < block {
            return None;
        }
        block = i;
        counts[i] += 1;
    }
    Some(counts)
}

/// All strings over `alphabet` of length at most `max_len`, shortest
/// first, lexicographic within a length (by alphabet order).
pub fn enumerate(alphabet: &[char], max_len: usize) -> Enumerate {
    Enumerate {
        alphabet: alphabet.to_vec(),
        max_len,
        digits: Some(Vec::new()),
    }
}

#[derive(Debug, Clone)]
pub struct Enumerate {
    alphabet: Vec<char>,
    max_len: usize,
    digits: Option<Vec<usize>>,
}

impl Iterator for Enumerate {
    type Item = String;

    fn next(&mut self) -> Option<String> {
        let digits = self.digits.as_mut()?;
        let out: String = digits.iter().map(|&d| self.alphabet[d]).collect();
        // Odometer increment; roll over to the next length when exhausted.
        let mut i = digits.len();
        loop {
            if i == 0 {
                let len = digits.len() + 1;
                if len > self.max_len || self.alphabet.is_empty() {
                    self.digits = None;
                } else {
                    *digits = vec![0; len];
                }
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < self.alphabet.len() {
                break;
            }
            digits[i] = 0;
        }
        Some(out)
    }
}
