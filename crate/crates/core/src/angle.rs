//! Symbolic rotation angles of the form `a·√2·π + (p/q)·π`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;

/// An angle `sqrt2_pi·√2π + pi·π` with an integer and a rational
/// coefficient. Arithmetic is exact, so a net rotation of zero is
/// detected without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    pub sqrt2_pi: i64,
    pub pi: Ratio<i64>,
}

impl Angle {
    pub const ZERO: Angle = Angle {
        sqrt2_pi: 0,
        pi: Ratio::new_raw(0, 1),
    };

    /// `k·√2π`.
    pub fn sqrt2_pi(k: i64) -> Self {
        Angle {
            sqrt2_pi: k,
            pi: Ratio::from_integer(0),
        }
    }

    /// `(num/den)·π`.
    pub fn pi_frac(num: i64, den: i64) -> Self {
        Angle {
            sqrt2_pi: 0,
            pi: Ratio::new(num, den),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sqrt2_pi == 0 && *self.pi.numer() == 0
    }

    /// True when the angle is an exact multiple of 2π.
    pub fn is_full_turn(&self) -> bool {
        self.sqrt2_pi == 0 && self.pi.is_integer() && self.pi.to_integer() % 2 == 0
    }

    /// Value in radians, reduced into `[0, 2π)` before the final
    /// multiplication so that large counts keep their precision.
    pub fn radians(&self) -> f64 {
        let irrational = (self.sqrt2_pi as f64 * SQRT_2).rem_euclid(2.0);
        let rational = (*self.pi.numer() as f64 / *self.pi.denom() as f64).rem_euclid(2.0);
        (irrational + rational).rem_euclid(2.0) * PI
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::ZERO
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle {
            sqrt2_pi: self.sqrt2_pi + rhs.sqrt2_pi,
            pi: self.pi + rhs.pi,
        }
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle {
            sqrt2_pi: -self.sqrt2_pi,
            pi: -self.pi,
        }
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        self + (-rhs)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let sign = |f: &mut fmt::Formatter<'_>, negative: bool, first: &mut bool| {
            let s = match (negative, *first) {
                (true, _) => "-",
                (false, true) => "",
                (false, false) => "+",
            };
            *first = false;
            f.write_str(s)
        };
        if self.sqrt2_pi != 0 {
            sign(f, self.sqrt2_pi < 0, &mut first)?;
            let k = self.sqrt2_pi.unsigned_abs();
            if k != 1 {
                write!(f, "{k}*")?;
            }
            f.write_str("sqrt2*pi")?;
        }
        if *self.pi.numer() != 0 {
            sign(f, *self.pi.numer() < 0, &mut first)?;
            let num = self.pi.numer().unsigned_abs();
            if num != 1 {
                write!(f, "{num}*")?;
            }
            f.write_str("pi")?;
            if *self.pi.denom() != 1 {
                write!(f, "/{}", self.pi.denom())?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad angle expression `{0}`")]
pub struct AngleParseError(pub String);

impl FromStr for Angle {
    type Err = AngleParseError;

    /// Accepts sums of terms like `sqrt2*pi`, `-3*sqrt2*pi`, `pi/2`,
    /// `2*pi/3` and `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AngleParseError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in compact.char_indices() {
            if (c == '+' || c == '-') && i > 0 {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut total = Angle::ZERO;
        for term in terms {
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let (numerator, den) = match body.rsplit_once('/') {
                Some((n, d)) => (n, d.parse::<i64>().map_err(|_| err())?),
                None => (body, 1),
            };
            if den == 0 {
                return Err(err());
            }
            let mut coef: i64 = 1;
            let mut pis = 0;
            let mut roots = 0;
            for factor in numerator.split('*') {
                match factor {
                    "pi" => pis += 1,
                    "sqrt2" => roots += 1,
                    n => coef = coef.checked_mul(n.parse::<i64>().map_err(|_| err())?).ok_or_else(err)?,
                }
            }
            if negative {
                coef = -coef;
            }
            let term = match (pis, roots) {
                (0, 0) if coef == 0 => Angle::ZERO,
                (1, 0) => Angle::pi_frac(coef, den),
                (1, 1) if den == 1 => Angle::sqrt2_pi(coef),
                _ => return Err(err()),
            };
            total = total + term;
        }
        Ok(total)
    }
}
