//! Making a nondecodable code decodable by writing a synchronous code (or a
//! bare counter) next to it.

use thiserror::Error;

use crate::code::{CodeParams, TableCode};
use crate::rates::{self, RateError, RateReport};
use crate::state::MemoryState;
use crate::verify;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AppendError {
    #[error("the nondecodable code has {nd} generations but the synchronous code has {sync}")]
    GenerationCountMismatch { nd: usize, sync: usize },
    #[error("alphabets differ: {nd} vs {sync}")]
    AlphabetMismatch { nd: u8, sync: u8 },
    #[error("the appended code is not synchronous")]
    NotSynchronous,
    #[error(transparent)]
    Rate(#[from] RateError),
}

/// Rate accounting for a `t_nd`-write code of rate `r_nd` extended to
/// `target_n` cells by `sync`.
pub fn append_sync(r_nd: f64, t_nd: usize, target_n: usize, sync: &CodeParams) -> Result<RateReport, AppendError> {
    if sync.t() != t_nd {
        return Err(AppendError::GenerationCountMismatch {
            nd: t_nd,
            sync: sync.t(),
        });
    }
    Ok(rates::rate_report(r_nd, target_n, sync)?)
}

/// Rate of a `t_nd`-write code of rate `r_nd` padded to `target_n` cells
/// with data-free counter cells.
pub fn append_counter(r_nd: f64, t_nd: usize, q: u8, target_n: usize) -> Result<rates::BasicLoss, AppendError> {
    Ok(rates::rate_loss_basic(r_nd, t_nd, q, target_n)?)
}

/// The explicit product code: each state is a nondecodable-code state
/// followed by a synchronous-code state, and message `(a, b)` is numbered
/// `(a - 1) M_sync + b`.
pub fn sync_product(nd: &TableCode, sync: &TableCode) -> Result<TableCode, AppendError> {
    if nd.t() != sync.t() {
        return Err(AppendError::GenerationCountMismatch {
            nd: nd.t(),
            sync: sync.t(),
        });
    }
    if nd.q() != sync.q() {
        return Err(AppendError::AlphabetMismatch {
            nd: nd.q(),
            sync: sync.q(),
        });
    }
    if verify::check_synchronous(sync).is_err() {
        return Err(AppendError::NotSynchronous);
    }
    let gens = nd
        .generations()
        .iter()
        .zip(sync.generations())
        .map(|(a_classes, b_classes)| {
            let mut out = Vec::with_capacity(a_classes.len() * b_classes.len());
            for a_class in a_classes {
                for b_class in b_classes {
                    let mut class = Vec::with_capacity(a_class.len() * b_class.len());
                    for a in a_class {
                        for b in b_class {
                            class.push(MemoryState::concat([a, b]).expect("same alphabet"));
                        }
                    }
                    out.push(class);
                }
            }
            out
        })
        .collect();
    Ok(TableCode::new(nd.q(), nd.n() + sync.n(), gens).expect("product classes are disjoint"))
}
