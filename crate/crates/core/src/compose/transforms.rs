//! Generation-level rewrites of table codes.

use thiserror::Error;

use crate::code::{CodeError, TableCode};
use crate::state::MemoryState;
use crate::verify::{self, WomViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("the code already contains the all-zero codeword")]
    AllZeroAlreadyPresent,
    #[error("generation range {from}..={to} is not inside 1..={t}")]
    BadRange { from: usize, to: usize, t: usize },
    #[error("the code is not synchronous")]
    NotSynchronous,
    #[error("merged code is invalid: {0}")]
    MergedCodeInvalid(WomViolation),
    #[error("split code is invalid: {0}")]
    SplitCodeInvalid(WomViolation),
    #[error("grouping must use every class index of generation {generation} exactly once, in nonempty groups")]
    BadGrouping { generation: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Adds a first generation holding only `0^n`; the rate is unchanged.
pub fn prepend_zero_generation(code: &TableCode) -> Result<TableCode, TransformError> {
    if verify::contains_all_zero(code) {
        return Err(TransformError::AllZeroAlreadyPresent);
    }
    let mut gens = Vec::with_capacity(code.t() + 1);
    gens.push(vec![vec![code.zero_state()]]);
    gens.extend(code.generations().iter().cloned());
    Ok(TableCode::new(code.q(), code.n(), gens)?)
}

/// Replaces generations `from..=to` by one generation listing all their
/// classes in order.
pub fn merge_generations(code: &TableCode, from: usize, to: usize) -> Result<TableCode, TransformError> {
    if from == 0 || from > to || to > code.t() {
        return Err(TransformError::BadRange { from, to, t: code.t() });
    }
    if verify::check_synchronous(code).is_err() {
        return Err(TransformError::NotSynchronous);
    }
    let g = code.generations();
    let mut gens: Vec<Vec<Vec<MemoryState>>> = g[..from - 1].to_vec();
    gens.push(g[from - 1..to].iter().flatten().cloned().collect());
    gens.extend_from_slice(&g[to..]);
    let merged = TableCode::new(code.q(), code.n(), gens)?;
    verify::verify_wom(&merged).map_err(TransformError::MergedCodeInvalid)?;
    Ok(merged)
}

/// Splits generation `generation` into consecutive generations, one per group
/// of 1-based class indices.
pub fn split_generation(
    code: &TableCode,
    generation: usize,
    groups: &[Vec<usize>],
) -> Result<TableCode, TransformError> {
    if generation == 0 || generation > code.t() {
        return Err(TransformError::BadRange {
            from: generation,
            to: generation,
            t: code.t(),
        });
    }
    let classes = code.generation(generation);
    let mut used: Vec<usize> = groups.iter().flatten().copied().collect();
    used.sort_unstable();
    if groups.iter().any(Vec::is_empty) || used != (1..=classes.len()).collect::<Vec<_>>() {
        return Err(TransformError::BadGrouping { generation });
    }
    let g = code.generations();
    let mut gens: Vec<Vec<Vec<MemoryState>>> = g[..generation - 1].to_vec();
    for group in groups {
        gens.push(group.iter().map(|&c| classes[c - 1].clone()).collect());
    }
    gens.extend_from_slice(&g[generation..]);
    let split = TableCode::new(code.q(), code.n(), gens)?;
    verify::verify_wom(&split).map_err(TransformError::SplitCodeInvalid)?;
    Ok(split)
}
