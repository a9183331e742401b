//! Memory states: fixed-length vectors of q-ary cell levels.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("alphabet size must be at least 2 and at most 255, got {0}")]
    BadAlphabet(u32),
    #[error("a state needs at least one cell")]
    Empty,
    #[error("cell {index} holds level {level}, outside 0..={max}")]
    LevelOutOfRange { index: usize, level: u32, max: u32 },
    #[error("cannot compare a length-{left} q={left_q} state with a length-{right} q={right_q} state")]
    Mismatch {
        left: usize,
        left_q: u8,
        right: usize,
        right_q: u8,
    },
    #[error("cannot parse state {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// The content of `n` write-once cells over the alphabet `{0, .., q-1}`.
///
/// Cell 1 is the leftmost entry, matching the digit-string notation used in
/// code tables (`"1100"` has cells 1 and 2 set).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemoryState {
    cells: Vec<u8>,
    q: u8,
}

impl MemoryState {
    pub fn new(q: u8, cells: Vec<u8>) -> Result<Self, StateError> {
        if q < 2 {
            return Err(StateError::BadAlphabet(q as u32));
        }
        if cells.is_empty() {
            return Err(StateError::Empty);
        }
        if let Some((index, &level)) = cells.iter().enumerate().find(|(_, &c)| c >= q) {
            return Err(StateError::LevelOutOfRange {
                index,
                level: level as u32,
                max: q as u32 - 1,
            });
        }
        Ok(MemoryState { cells, q })
    }

    /// Builds a state without range checks. Callers guarantee `q >= 2`, a
    /// nonempty cell vector and every level below `q`.
    pub(crate) fn from_raw(q: u8, cells: Vec<u8>) -> Self {
        debug_assert!(q >= 2 && !cells.is_empty() && cells.iter().all(|&c| c < q));
        MemoryState { cells, q }
    }

    pub fn zeros(q: u8, n: usize) -> Self {
        MemoryState::from_raw(q, vec![0; n])
    }

    /// `e_j` scaled by `level`, with `j` 0-based.
    pub fn unit(q: u8, n: usize, j: usize, level: u8) -> Self {
        let mut cells = vec![0; n];
        cells[j] = level;
        MemoryState::from_raw(q, cells)
    }

    /// Parses either a digit string (`"0102"`, only for `q <= 10`) or a
    /// comma-separated list of levels (`"0,1,0,12"`).
    pub fn parse(q: u8, text: &str) -> Result<Self, StateError> {
        let text = text.trim();
        let bad = |reason: &str| StateError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let cells: Vec<u8> = if text.contains(',') {
            text.split(',')
                .map(|tok| tok.trim().parse::<u8>().map_err(|_| bad("non-numeric level")))
                .collect::<Result<_, _>>()?
        } else {
            if q > 10 {
                return Err(bad("digit strings need q <= 10; use comma-separated levels"));
            }
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| bad("non-digit character"))
                })
                .collect::<Result<_, _>>()?
        };
        MemoryState::new(q, cells)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// The l1-norm of the cell vector (Hamming weight when q = 2).
    pub fn weight(&self) -> u32 {
        self.cells.iter().map(|&c| c as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &MemoryState) -> Result<(), StateError> {
        if self.cells.len() != other.cells.len() || self.q != other.q {
            return Err(StateError::Mismatch {
                left: self.cells.len(),
                left_q: self.q,
                right: other.cells.len(),
                right_q: other.q,
            });
        }
        Ok(())
    }

    /// Componentwise `self <= other`: `other` can be written over `self`.
    pub fn precedes(&self, other: &MemoryState) -> Result<bool, StateError> {
        self.check_compatible(other)?;
        Ok(self.precedes_unchecked(other))
    }

    pub(crate) fn precedes_unchecked(&self, other: &MemoryState) -> bool {
        self.cells.iter().zip(&other.cells).all(|(a, b)| a <= b)
    }

    /// Splits into consecutive blocks of `block_len` cells.
    pub fn blocks(&self, block_len: usize) -> Vec<MemoryState> {
        self.cells
            .chunks(block_len)
            .map(|c| MemoryState::from_raw(self.q, c.to_vec()))
            .collect()
    }

    pub fn concat<'a, I>(parts: I) -> Option<MemoryState>
    where
        I: IntoIterator<Item = &'a MemoryState>,
    {
        let mut q = None;
        let mut cells = Vec::new();
        for part in parts {
            match q {
                None => q = Some(part.q),
                Some(q) if q != part.q => return None,
                _ => {}
            }
            cells.extend_from_slice(&part.cells);
        }
        q.map(|q| MemoryState::from_raw(q, cells))
    }

    /// Appends one cell holding `level`.
    pub fn with_suffix(&self, level: u8) -> MemoryState {
        let mut cells = self.cells.clone();
        cells.push(level);
        MemoryState::from_raw(self.q, cells)
    }

    /// Same cells reinterpreted over a larger alphabet.
    pub fn widen(&self, q: u8) -> MemoryState {
        assert!(q >= self.q);
        MemoryState::from_raw(q, self.cells.clone())
    }

    /// Digit string for `q <= 10`, comma-separated levels otherwise.
    pub fn to_text(&self) -> String {
        if self.q <= 10 {
            self.cells.iter().map(|&c| char::from(b'0' + c)).collect()
        } else {
            self.cells.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl serde::Serialize for MemoryState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl fmt::Display for MemoryState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for MemoryState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 2 {
            write!(f, "{}", self.to_text())
        } else {
            write!(f, "{}_q{}", self.to_text(), self.q)
        }
    }
}

/// Shorthand for tests and fixtures: `st(2, "1100")`.
pub fn st(q: u8, text: &str) -> MemoryState {
    MemoryState::parse(q, text).unwrap_or_else(|e| panic!("{e}"))
}
