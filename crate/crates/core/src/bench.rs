//! Step counts on growing accepted inputs and their affine fit.

use std::fmt::Write as _;

use crate::machine::ClassicalMachine;
use crate::oracle::Oracle;
use crate::run::RunVerdict;

/// A member of the oracle's language of exactly `len` letters, or `None`
/// if the family used here has none at that length.
pub fn family_member(oracle: &Oracle, len: usize) -> Option<String> {
    let rep = |c: char, n: usize| c.to_string().repeat(n);
    // abab… of length n
    let alternating = |n: usize| (0..n).map(|i| if i % 2 == 0 { 'a' } else { 'b' }).collect::<String>();
    match oracle {
        Oracle::Leq => (len % 2 == 0).then(|| rep('a', len / 2) + &rep('b', len / 2)),
        Oracle::Lpal => Some(
            (0..len)
                .map(|i| if i.min(len - 1 - i) % 2 == 0 { 'a' } else { 'b' })
                .collect(),
        ),
        Oracle::Ltrieq => (len % 3 == 0).then(|| rep('a', len / 3) + &rep('b', len / 3) + &rep('c', len / 3)),
        Oracle::LeqK(k) => {
            let k = *k as usize;
            (len % (k + 1) == 0).then(|| rep('a', k * len / (k + 1)) + &rep('b', len / (k + 1)))
        }
        Oracle::Meq => (len % 2 == 0).then(|| {
            let n = len / 4;
            let m = len / 2 - n;
            rep('a', n) + &rep('b', n) + &rep('a', m) + &rep('c', m)
        }),
        Oracle::BalanceCount => (len % 2 == 0).then(|| "ab".repeat(len / 2)),
        Oracle::Linear { alphabet, .. } => {
            let mut counts = vec![0; alphabet.len()];
            linear_counts(oracle, alphabet, &mut counts, 0, len)
        }
        Oracle::Copy => (len % 2 == 0).then(|| alternating(len / 2).repeat(2)),
        Oracle::Middle => (len % 2 == 1).then(|| rep('b', len / 2) + "a" + &rep('b', len / 2)),
        Oracle::Balanced | Oracle::BalancedByCounts => (len % 2 == 0).then(|| rep('(', len / 2) + &rep(')', len / 2)),
        Oracle::Kpow(k) => (1..=len)
            .find(|&n| n + n.pow(*k) == len)
            .map(|n| rep('a', n) + &rep('b', n.pow(*k))),
        Oracle::Multiple(k) | Oracle::QuantumForm(k) => {
            if len == 0 {
                return oracle.member("").then(String::new);
            }
            // the largest a-block followed by at least one block of b's
            (1..len)
                .rev()
                .filter(|&n| len - n >= n.pow(k - 1) && (len - n) % n.pow(k - 1) == 0)
                .map(|n| rep('a', n) + &rep('b', len - n))
                .find(|w| oracle.member(w))
        }
    }
}

/// First block-count vector (in odometer order) summing to `left` that
/// satisfies the restrictions.
fn linear_counts(oracle: &Oracle, alphabet: &[char], counts: &mut Vec<usize>, i: usize, left: usize) -> Option<String> {
    if i + 1 == counts.len() {
        counts[i] = left;
        let w: String = alphabet.iter().zip(counts.iter()).map(|(c, &n)| c.to_string().repeat(n)).collect();
        return oracle.member(&w).then_some(w);
    }
    for n in 0..=left {
        counts[i] = n;
        if let Some(w) = linear_counts(oracle, alphabet, counts, i + 1, left - n) {
            return Some(w);
        }
    }
    None
}

/// Least-squares line `steps = slope·len + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_abs_residual: f64,
    /// All points lie on one line, checked in integer arithmetic.
    pub exact: bool,
}

pub fn affine_fit(points: &[(usize, u64)]) -> Option<AffineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1 as f64).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 as f64 - mx) * (p.1 as f64 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_abs_residual = points
        .iter()
        .map(|p| (p.1 as f64 - slope * p.0 as f64 - intercept).abs())
        .fold(0.0, f64::max);
    let (x0, y0) = (points[0].0 as i128, points[0].1 as i128);
    let (dx, dy) = points
        .iter()
        .map(|p| (p.0 as i128 - x0, p.1 as i128 - y0))
        .find(|d| d.0 != 0)?;
    let exact = points
        .iter()
        .all(|p| (p.1 as i128 - y0) * dx == dy * (p.0 as i128 - x0));
    Some(AffineFit {
        slope,
        intercept,
        max_abs_residual,
        exact,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPoint {
    pub len: usize,
    pub input: String,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub machine: String,
    pub points: Vec<BenchPoint>,
    /// Requested sizes with no member in the family.
    pub skipped: Vec<usize>,
    pub fit: Option<AffineFit>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error("`{machine}` did not accept {input:?} ({verdict})")]
    NotAccepted { machine: String, input: String, verdict: String },
    #[error(transparent)]
    Input(#[from] crate::error::InputError),
}

/// Sizes 0..=40 used when none are given.
pub fn default_sizes() -> Vec<usize> {
    (0..=40).collect()
}

/// Runs the family member of each size and fits the step counts.
pub fn bench(machine: &ClassicalMachine, oracle: &Oracle, sizes: &[usize]) -> Result<BenchReport, BenchError> {
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for &len in sizes {
        let Some(input) = family_member(oracle, len) else {
            skipped.push(len);
            continue;
        };
        let out = machine.run(&input, None)?;
        if out.verdict != RunVerdict::Accept {
            return Err(BenchError::NotAccepted {
                machine: machine.name().to_string(),
                input,
                verdict: format!("{:?}", out.verdict),
            });
        }
        points.push(BenchPoint { len, input, steps: out.steps });
    }
    let pairs: Vec<(usize, u64)> = points.iter().map(|p| (p.len, p.steps)).collect();
    Ok(BenchReport {
        machine: machine.name().to_string(),
        fit: affine_fit(&pairs),
        points,
        skipped,
    })
}

impl BenchReport {
    /// `length,steps,input` rows, then the fit as `#` comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,steps,input\n");
        for p in &self.points {
            writeln!(out, "{},{},{}", p.len, p.steps, p.input).unwrap();
        }
        match self.fit {
            Some(f) => {
                writeln!(out, "# slope {}", f.slope).unwrap();
                writeln!(out, "# intercept {}", f.intercept).unwrap();
                writeln!(out, "# max_abs_residual {}", f.max_abs_residual).unwrap();
                writeln!(out, "# exact_affine {}", f.exact).unwrap();
            }
            None => out.push_str("# fit needs two distinct lengths\n"),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_of_a_line() {
        let f = affine_fit(&[(0, 4), (2, 10), (4, 16)]).unwrap();
        assert_eq!((f.slope, f.intercept, f.exact), (3.0, 4.0, true));
        assert_eq!(f.max_abs_residual, 0.0);
        let f = affine_fit(&[(0, 4), (2, 10), (4, 17)]).unwrap();
        assert!(!f.exact && f.max_abs_residual > 0.0);
        assert!(affine_fit(&[(3, 1)]).is_none());
        assert!(affine_fit(&[(3, 1), (3, 2)]).is_none());
    }

    #[test]
    fn members_have_the_length() {
        let oracles = [
            Oracle::Leq,
            Oracle::Lpal,
            Oracle::Ltrieq,
            Oracle::LeqK(2),
            Oracle::Meq,
            Oracle::BalanceCount,
            Oracle::Copy,
            Oracle::Middle,
            Oracle::Balanced,
            Oracle::Kpow(2),
            Oracle::Multiple(1),
            Oracle::Multiple(3),
        ];
        for o in &oracles {
            for len in 0..=40 {
                if let Some(w) = family_member(o, len) {
                    assert_eq!(w.chars().count(), len, "{o} {len}");
                    assert!(o.member(&w), "{o} {w}");
                }
            }
        }
        assert_eq!(family_member(&Oracle::Kpow(2), 12).as_deref(), Some("aaabbbbbbbbb"));
        assert_eq!(family_member(&Oracle::Kpow(2), 13), None);
    }
}
