//! Synchronous codes on a single q-level cell.

use serde::Serialize;

use super::SearchError;
use crate::code::{CodeParams, TableCode};
use crate::state::MemoryState;

/// Generation `i` owns a run of consecutive levels; each level is its own
/// class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleCellCode {
    pub q: u8,
    pub sizes: Vec<u64>,
    pub levels: Vec<Vec<u8>>,
}

impl SingleCellCode {
    pub fn params(&self) -> CodeParams {
        CodeParams::new(self.q, 1, self.sizes.clone()).expect("positive sizes")
    }

    pub fn rate(&self) -> f64 {
        self.params().wom_rate()
    }

    pub fn to_table(&self) -> TableCode {
        let gens = self
            .levels
            .iter()
            .map(|run| {
                run.iter()
                    .map(|&v| vec![MemoryState::from_raw(self.q, vec![v])])
                    .collect()
            })
            .collect();
        TableCode::new(self.q, 1, gens).expect("distinct levels")
    }
}

/// Rate-maximising split of the `q` levels into `t` consecutive runs:
/// sizes as equal as possible, larger runs first.
pub fn single_cell_assignment(q: u8, t: usize) -> Result<SingleCellCode, SearchError> {
    if t == 0 || t > q as usize {
        return Err(SearchError::TooManyWrites {
            q,
            n: 1,
            t,
            max: q as usize,
        });
    }
    let base = q as usize / t;
    let extra = q as usize % t;
    let sizes: Vec<u64> = (0..t).map(|k| (base + usize::from(k < extra)) as u64).collect();
    let mut next = 0u8;
    let levels = sizes
        .iter()
        .map(|&m| {
            let run: Vec<u8> = (next..next + m as u8).collect();
            next += m as u8;
            run
        })
        .collect();
    Ok(SingleCellCode { q, sizes, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify;

    /// Best product of `t` positive sizes summing to at most `q`.
    fn brute_best(q: u64, t: usize) -> f64 {
        fn go(left: u64, t: usize) -> f64 {
            if t == 0 {
                return 0.0;
            }
            (1..=left.saturating_sub(t as u64 - 1))
                .map(|m| (m as f64).log2() + go(left - m, t - 1))
                .fold(f64::MIN, f64::max)
        }
        go(q, t)
    }

    #[test]
    fn five_levels_three_writes() {
        let c = single_cell_assignment(5, 3).unwrap();
        assert_eq!(c.sizes, [2, 2, 1]);
        assert_eq!(c.levels, vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert!(verify::verify_wom(&c.to_table()).unwrap().is_synchronous);
    }

    #[test]
    fn rate_is_optimal_for_small_alphabets() {
        for q in 2..=9u8 {
            for t in 1..=q as usize {
                let c = single_cell_assignment(q, t).unwrap();
                assert!((c.rate() - brute_best(q as u64, t)).abs() < 1e-9, "q={q} t={t}");
                verify::verify_wom(&c.to_table()).unwrap();
            }
        }
        assert!(single_cell_assignment(3, 4).is_err());
    }
}
