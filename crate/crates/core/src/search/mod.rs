//! Combinatorial searches for codeword-class partitions of constant-weight
//! state sets, the bounds on how many classes fit, and the explicit
//! constructions that realise them.

mod bounds;
mod builders;
mod cover;
mod greedy;
mod partition;
mod reorganize;
mod single_cell;
mod slice;

use thiserror::Error;

pub use bounds::{
    a_table, bound_b, bound_closed_form, bound_table, class_size_lower_bound, min_class_size, write_bound_csv,
    BoundOutcome, BoundRecord, BOUND_CSV_HEADER,
};
pub use builders::{
    build_prop_circular, build_prop_doubling, build_prop_qary_even, build_prop_recursive, build_singletons,
};
pub use cover::{cover_within, greedy_cover, local_search_cover, Budget, CoverInstance, Decision, RootOrbits};
pub use greedy::{greedy_laminar, GreedyLaminar};
pub use partition::{coverage_instance, find_classes, max_partition, Partition, PartitionDefect, PartitionSearch};
pub use reorganize::{reorganize_merged_generation, reorganize_with_extra};
pub use single_cell::{single_cell_assignment, SingleCellCode};
pub use slice::{binomial, enumerate_slice, slice_size, WeightSlice};

use crate::code::CodeError;

/// Node budget used when `WOMKIT_BUDGET` is unset.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Largest slice searched exhaustively by default.
pub const DEFAULT_EXACT_LIMIT: usize = 70;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Node expansions allowed per exact search.
    pub budget: u64,
    pub exact_limit: usize,
    pub seed: u64,
    /// Moves allowed per local-search run.
    pub local_steps: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let budget = std::env::var("WOMKIT_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        SearchConfig {
            budget,
            exact_limit: DEFAULT_EXACT_LIMIT,
            seed: 0x5eed,
            local_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("E_{q}({n},{i}) is empty")]
    EmptySlice { q: u8, n: usize, i: u32 },
    #[error("search budget exhausted")]
    BudgetExhausted { best: Option<Box<Partition>> },
    #[error("{t} writes do not fit in {n} cells with {q} levels (at most {max})")]
    TooManyWrites { q: u8, n: usize, t: usize, max: usize },
    #[error("no arrangement into {target} classes exists")]
    NoReorganization { target: usize },
    #[error("invalid search input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}
