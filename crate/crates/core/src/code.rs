//! Code parameters and extensional (table) codes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::state::MemoryState;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("a code needs at least one generation")]
    NoGenerations,
    #[error("generation {generation} has no codeword classes")]
    EmptyGeneration { generation: usize },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("generation {generation}, class {class}: state {state} does not have length {n} over q={q}")]
    StateShape {
        generation: usize,
        class: usize,
        state: String,
        n: usize,
        q: u8,
    },
    #[error("generation {generation}: state {state} appears in classes {first} and {second}")]
    OverlappingClasses {
        generation: usize,
        first: usize,
        second: usize,
        state: MemoryState,
    },
}

/// `[n, t : M_1, .., M_t]_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeParams {
    q: u8,
    n: usize,
    sizes: Vec<u64>,
}

impl CodeParams {
    pub fn new(q: u8, n: usize, sizes: Vec<u64>) -> Result<Self, CodeError> {
        if q < 2 {
            return Err(CodeError::BadParams(format!("q = {q} < 2")));
        }
        if n == 0 {
            return Err(CodeError::BadParams("n = 0".into()));
        }
        if sizes.is_empty() {
            return Err(CodeError::NoGenerations);
        }
        if let Some(i) = sizes.iter().position(|&m| m == 0) {
            return Err(CodeError::EmptyGeneration { generation: i + 1 });
        }
        Ok(CodeParams { q, n, sizes })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// `M_i` for a 1-based generation.
    pub fn size(&self, generation: usize) -> u64 {
        self.sizes[generation - 1]
    }

    /// `log2(M_i) / n` for every generation.
    pub fn generation_rates(&self) -> Vec<f64> {
        self.sizes.iter().map(|&m| (m as f64).log2() / self.n as f64).collect()
    }

    /// WOM-rate in bits per cell, summed per generation so composed codes
    /// with huge products never overflow.
    pub fn wom_rate(&self) -> f64 {
        self.sizes.iter().map(|&m| (m as f64).log2()).sum::<f64>() / self.n as f64
    }

    pub fn is_fixed_rate(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] == w[1])
    }

    /// Same parameters with a leading single-message generation.
    pub fn with_zero_generation(&self) -> CodeParams {
        let mut sizes = Vec::with_capacity(self.sizes.len() + 1);
        sizes.push(1);
        sizes.extend_from_slice(&self.sizes);
        CodeParams {
            q: self.q,
            n: self.n,
            sizes,
        }
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.sizes.iter().map(u64::to_string).collect();
        write!(f, "[{},{}:{}]_{}", self.n, self.t(), sizes.join(","), self.q)
    }
}

impl FromStr for CodeParams {
    type Err = CodeError;

    /// Accepts `[n,t:M1,..,Mt]` with an optional `_q` suffix (binary when absent).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CodeError::BadParams(format!("cannot parse {s:?}"));
        let s = s.trim().trim_end_matches("^sync");
        let (body, q) = match s.rsplit_once("]_") {
            Some((body, q)) => (body, q.parse::<u8>().map_err(|_| bad())?),
            None => (s.strip_suffix(']').ok_or_else(bad)?, 2),
        };
        let body = body.strip_prefix('[').ok_or_else(bad)?;
        let (head, tail) = body.split_once(':').ok_or_else(bad)?;
        let (n, t) = head.split_once(',').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let t: usize = t.trim().parse().map_err(|_| bad())?;
        let sizes: Vec<u64> = tail
            .split(',')
            .map(|m| m.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if sizes.len() != t {
            return Err(CodeError::BadParams(format!(
                "{s:?} declares t = {t} but lists {} sizes",
                sizes.len()
            )));
        }
        CodeParams::new(q, n, sizes)
    }
}

/// A WOM code given by its decoding tables: `generations[i-1][m-1]` is the
/// set of states that decode to message `m` at generation `i`.
#[derive(Clone)]
pub struct TableCode {
    params: CodeParams,
    generations: Vec<Vec<Vec<MemoryState>>>,
    /// Each class sorted by (weight, lexicographic) for the canonical encoder.
    encode_order: Vec<Vec<Vec<MemoryState>>>,
    /// state -> every (generation, message) pair holding it, both 1-based.
    index: HashMap<MemoryState, Vec<(usize, usize)>>,
}

impl TableCode {
    /// Validates shapes and within-generation disjointness. Empty classes are
    /// accepted here and reported by `verify_wom`.
    pub fn new(q: u8, n: usize, generations: Vec<Vec<Vec<MemoryState>>>) -> Result<Self, CodeError> {
        let sizes = generations.iter().map(|g| g.len() as u64).collect();
        let params = CodeParams::new(q, n, sizes)?;
        let mut index: HashMap<MemoryState, Vec<(usize, usize)>> = HashMap::new();
        for (gi, generation) in generations.iter().enumerate() {
            for (ci, class) in generation.iter().enumerate() {
                for state in class {
                    if state.len() != n || state.q() != q {
                        return Err(CodeError::StateShape {
                            generation: gi + 1,
                            class: ci + 1,
                            state: state.to_text(),
                            n,
                            q,
                        });
                    }
                    let slots = index.entry(state.clone()).or_default();
                    if let Some(&(_, first)) = slots.iter().find(|(g, _)| *g == gi + 1) {
                        return Err(CodeError::OverlappingClasses {
                            generation: gi + 1,
                            first,
                            second: ci + 1,
                            state: state.clone(),
                        });
                    }
                    slots.push((gi + 1, ci + 1));
                }
            }
        }
        let encode_order = generations
            .iter()
            .map(|g| {
                g.iter()
                    .map(|class| {
                        let mut sorted = class.clone();
                        sorted.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.cmp(b)));
                        sorted
                    })
                    .collect()
            })
            .collect();
        Ok(TableCode {
            params,
            generations,
            encode_order,
            index,
        })
    }

    /// Convenience constructor from digit strings: `gens[i][m]` lists the
    /// states of class `m+1` at generation `i+1`.
    pub fn from_digits(q: u8, gens: &[&[&[&str]]]) -> Result<Self, CodeError> {
        let n = gens
            .iter()
            .flat_map(|g| g.iter())
            .flat_map(|c| c.iter())
            .map(|s| s.len())
            .next()
            .ok_or(CodeError::NoGenerations)?;
        let generations = gens
            .iter()
            .map(|g| {
                g.iter()
                    .map(|c| {
                        c.iter()
                            .map(|s| {
                                MemoryState::parse(q, s).map_err(|e| CodeError::BadParams(format!("state {s:?}: {e}")))
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        TableCode::new(q, n, generations)
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn q(&self) -> u8 {
        self.params.q
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn t(&self) -> usize {
        self.params.t()
    }

    pub fn generations(&self) -> &[Vec<Vec<MemoryState>>] {
        &self.generations
    }

    /// Classes of a 1-based generation.
    pub fn generation(&self, generation: usize) -> &[Vec<MemoryState>] {
        &self.generations[generation - 1]
    }

    /// `D_i^{-1}(m)`, both 1-based.
    pub fn class(&self, generation: usize, message: usize) -> &[MemoryState] {
        &self.generations[generation - 1][message - 1]
    }

    pub(crate) fn encode_order(&self, generation: usize, message: usize) -> &[MemoryState] {
        &self.encode_order[generation - 1][message - 1]
    }

    /// `Image(E_i)`, taken as the union of all generation-`i` classes.
    pub fn image(&self, generation: usize) -> impl Iterator<Item = &MemoryState> {
        self.generations[generation - 1].iter().flatten()
    }

    /// Every (generation, message) holding `state`.
    pub fn occurrences(&self, state: &MemoryState) -> &[(usize, usize)] {
        self.index.get(state).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn zero_state(&self) -> MemoryState {
        MemoryState::zeros(self.q(), self.n())
    }

    /// Class lists compared as sets, generation by generation, in order.
    pub fn same_classes(&self, other: &TableCode) -> bool {
        self.params == other.params && self.encode_order.iter().zip(&other.encode_order).all(|(a, b)| a == b)
    }
}

impl PartialEq for TableCode {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.generations == other.generations
    }
}

impl Eq for TableCode {}

impl fmt::Debug for TableCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.params)?;
        for (gi, g) in self.generations.iter().enumerate() {
            let classes: Vec<String> = g
                .iter()
                .map(|c| {
                    let s: Vec<String> = c.iter().map(MemoryState::to_text).collect();
                    format!("{{{}}}", s.join(","))
                })
                .collect();
            writeln!(f, "  D_{}^-1: {}", gi + 1, classes.join(" "))?;
        }
        Ok(())
    }
}
