//! Tape symbols, head directions and move vectors.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::SymbolError;

/// A symbol that can appear on a tape.
///
/// Tape indices are zero-based in the API; the textual form is one-based
/// (`LM1` is the left end-marker of the first tape).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TapeSymbol {
    Letter(char),
    LeftEnd(usize),
    RightEnd(usize),
}

impl TapeSymbol {
    pub fn is_end_marker(self) -> bool {
        !matches!(self, TapeSymbol::Letter(_))
    }

    /// Parses a token such as `a`, `LM1` or `RM2`.
    pub fn parse_token(token: &str) -> Result<Self, SymbolError> {
        let marker = |rest: &str, left: bool| -> Result<TapeSymbol, SymbolError> {
            let tape: usize = rest
                .parse()
                .map_err(|_| SymbolError::BadToken(token.to_string()))?;
            if tape == 0 {
                return Err(SymbolError::BadToken(token.to_string()));
            }
            Ok(if left {
                TapeSymbol::LeftEnd(tape - 1)
            } else {
                TapeSymbol::RightEnd(tape - 1)
            })
        };
        if let Some(rest) = token.strip_prefix("LM") {
            if !rest.is_empty() {
                return marker(rest, true);
            }
        }
        if let Some(rest) = token.strip_prefix("RM") {
            if !rest.is_empty() {
                return marker(rest, false);
            }
        }
        let mut chars = token.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if is_letter_char(c) => Ok(TapeSymbol::Letter(c)),
            _ => Err(SymbolError::BadToken(token.to_string())),
        }
    }
}

/// Characters that may serve as input letters in the text format.
pub fn is_letter_char(c: char) -> bool {
    !c.is_whitespace() && !c.is_control() && c != '#' && c != '@'
}

impl fmt::Display for TapeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeSymbol::Letter(c) => write!(f, "{c}"),
            TapeSymbol::LeftEnd(t) => write!(f, "LM{}", t + 1),
            TapeSymbol::RightEnd(t) => write!(f, "RM{}", t + 1),
        }
    }
}

impl FromStr for TapeSymbol {
    type Err = SymbolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TapeSymbol::parse_token(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Left,
    Stay,
    Right,
}

impl Direction {
    pub fn offset(self) -> isize {
        match self {
            Direction::Left => -1,
            Direction::Stay => 0,
            Direction::Right => 1,
        }
    }

    pub fn code(self) -> char {
        match self {
            Direction::Left => 'L',
            Direction::Stay => 'S',
            Direction::Right => 'R',
        }
    }

    /// `-` is accepted as a synonym for stationary; it is how halting
    /// transitions are usually written.
    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'L' => Some(Direction::Left),
            'S' | '-' => Some(Direction::Stay),
            'R' => Some(Direction::Right),
            _ => None,
        }
    }
}

/// Per-tape directions for one transition.
///
/// A well-formed move vector has at most one non-stationary entry. The type
/// does not enforce this so that ill-formed machines can be represented and
/// reported by validation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoveVector(SmallVec<[Direction; 4]>);

impl MoveVector {
    pub fn new(dirs: impl IntoIterator<Item = Direction>) -> Self {
        MoveVector(dirs.into_iter().collect())
    }

    pub fn stationary(tapes: usize) -> Self {
        MoveVector(SmallVec::from_elem(Direction::Stay, tapes))
    }

    /// Moves a single tape.
    pub fn single(tapes: usize, tape: usize, dir: Direction) -> Self {
        let mut v = Self::stationary(tapes);
        v.0[tape] = dir;
        v
    }

    /// Parses a compact code such as `RS` or `S-L`, one character per tape.
    pub fn from_code(code: &str) -> Result<Self, SymbolError> {
        code.chars()
            .map(|c| Direction::from_code(c).ok_or(SymbolError::BadDirection(c)))
            .collect::<Result<SmallVec<_>, _>>()
            .map(MoveVector)
    }

    pub fn code(&self) -> String {
        self.0.iter().map(|d| d.code()).collect()
    }

    pub fn tapes(&self) -> usize {
        self.0.len()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.0
    }

    /// Number of tapes whose head moves.
    pub fn moving_count(&self) -> usize {
        self.0.iter().filter(|d| **d != Direction::Stay).count()
    }

    /// The unique moving tape and its direction, if exactly one head moves.
    pub fn moving_tape(&self) -> Option<(usize, Direction)> {
        let mut found = None;
        for (t, d) in self.0.iter().enumerate() {
            if *d != Direction::Stay {
                if found.is_some() {
                    return None;
                }
                found = Some((t, *d));
            }
        }
        found
    }

    pub fn obeys_move_rule(&self) -> bool {
        self.moving_count() <= 1
    }
}
