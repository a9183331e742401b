//! Property checkers: validity, decodability, synchrony, laminarity.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::code::{CodeParams, TableCode};
use crate::state::MemoryState;

/// Why a table fails to be a WOM code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WomViolation {
    #[error("generation {generation}, class {class} is empty")]
    EmptyClass { generation: usize, class: usize },
    #[error("generation {generation}, class {class}: no codeword covers prior state {prior}")]
    NotCovered {
        generation: usize,
        prior: MemoryState,
        class: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeProperties {
    pub is_valid: bool,
    pub is_decodable: bool,
    pub is_synchronous: bool,
    pub is_laminar: bool,
    pub is_fixed_rate: bool,
    pub contains_all_zero: bool,
}

/// A state that decodes differently at two generations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeConflict {
    pub state: MemoryState,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

/// A state present in two generation images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageOverlap {
    pub state: MemoryState,
    pub generations: (usize, usize),
}

/// Sorted, deduplicated `Image(E_i)`; generation 0 is the erased state.
fn sorted_image(code: &TableCode, generation: usize) -> BTreeSet<&MemoryState> {
    code.image(generation).collect()
}

/// Every covering failure, in (generation, prior state, class) order.
pub fn covering_violations(code: &TableCode) -> Vec<WomViolation> {
    let mut out = Vec::new();
    for (gi, generation) in code.generations().iter().enumerate() {
        for (ci, class) in generation.iter().enumerate() {
            if class.is_empty() {
                out.push(WomViolation::EmptyClass {
                    generation: gi + 1,
                    class: ci + 1,
                });
            }
        }
    }
    for i in 2..=code.t() {
        for prior in sorted_image(code, i - 1) {
            for (ci, class) in code.generation(i).iter().enumerate() {
                if class.is_empty() {
                    continue;
                }
                if !class.iter().any(|y| prior.precedes_unchecked(y)) {
                    out.push(WomViolation::NotCovered {
                        generation: i,
                        prior: prior.clone(),
                        class: ci + 1,
                    });
                }
            }
        }
    }
    out
}

/// Checks the covering condition: every class of generation `i` holds a
/// successor of every state in `Image(E_{i-1})`.
pub fn verify_wom(code: &TableCode) -> Result<CodeProperties, WomViolation> {
    match covering_violations(code).into_iter().next() {
        Some(v) => Err(v),
        None => Ok(properties(code)),
    }
}

pub fn check_decodable(code: &TableCode) -> Result<(), DecodeConflict> {
    for i in 1..=code.t() {
        for state in sorted_image(code, i) {
            let occ = code.occurrences(state);
            if let Some(w) = occ.windows(2).find(|w| w[0].1 != w[1].1) {
                return Err(DecodeConflict {
                    state: state.clone(),
                    first: w[0],
                    second: w[1],
                });
            }
        }
    }
    Ok(())
}

pub fn check_synchronous(code: &TableCode) -> Result<(), ImageOverlap> {
    for i in 1..=code.t() {
        for state in sorted_image(code, i) {
            let occ = code.occurrences(state);
            if occ.len() > 1 {
                return Err(ImageOverlap {
                    state: state.clone(),
                    generations: (occ[0].0, occ[1].0),
                });
            }
        }
    }
    Ok(())
}

pub fn check_laminar(code: &TableCode) -> bool {
    let mut owner: HashMap<u32, usize> = HashMap::new();
    for i in 1..=code.t() {
        for state in code.image(i) {
            if *owner.entry(state.weight()).or_insert(i) != i {
                return false;
            }
        }
    }
    true
}

pub fn check_fixed_rate(params: &CodeParams) -> bool {
    params.is_fixed_rate()
}

pub fn contains_all_zero(code: &TableCode) -> bool {
    !code.occurrences(&code.zero_state()).is_empty()
}

/// All flags at once, valid or not.
pub fn properties(code: &TableCode) -> CodeProperties {
    let props = CodeProperties {
        is_valid: covering_violations(code).is_empty(),
        is_decodable: check_decodable(code).is_ok(),
        is_synchronous: check_synchronous(code).is_ok(),
        is_laminar: check_laminar(code),
        is_fixed_rate: check_fixed_rate(code.params()),
        contains_all_zero: contains_all_zero(code),
    };
    assert!(!props.is_laminar || props.is_synchronous);
    assert!(!props.is_synchronous || props.is_decodable);
    props
}
