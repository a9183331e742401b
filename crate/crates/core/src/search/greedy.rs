//! Laminar codes built one weight slice at a time.

use super::partition::max_partition;
use super::{SearchConfig, SearchError};
use crate::code::TableCode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyLaminar {
    pub code: TableCode,
    /// Per generation: was the class count proven maximal?
    pub exact: Vec<bool>,
}

/// Generation `i` is a largest suitable partition of `E_q(n, i)`.
pub fn greedy_laminar(q: u8, n: usize, t: usize, cfg: &SearchConfig) -> Result<GreedyLaminar, SearchError> {
    let max = n * (q as usize).saturating_sub(1);
    if t == 0 || t > max {
        return Err(SearchError::TooManyWrites { q, n, t, max });
    }
    let mut gens = Vec::with_capacity(t);
    let mut exact = Vec::with_capacity(t);
    for i in 1..=t as u32 {
        let r = max_partition(q, n, i, cfg)?;
        exact.push(r.exact);
        gens.push(r.partition.classes);
    }
    Ok(GreedyLaminar {
        code: TableCode::new(q, n, gens)?,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify;

    #[test]
    fn four_cells_four_writes() {
        let g = greedy_laminar(2, 4, 4, &SearchConfig::default()).unwrap();
        assert_eq!(g.code.params().to_string(), "[4,4:4,3,1,1]_2");
        assert!(g.exact.iter().all(|&e| e));
        let p = verify::verify_wom(&g.code).unwrap();
        assert!(p.is_laminar && p.is_synchronous);
    }

    #[test]
    fn quaternary_pair() {
        let g = greedy_laminar(4, 2, 6, &SearchConfig::default()).unwrap();
        assert_eq!(g.code.params().to_string(), "[2,6:2,2,2,1,1,1]_4");
        assert!(verify::verify_wom(&g.code).unwrap().is_laminar);
    }

    #[test]
    fn too_many_writes() {
        assert!(matches!(
            greedy_laminar(2, 3, 4, &SearchConfig::default()),
            Err(SearchError::TooManyWrites { max: 3, .. })
        ));
    }
}
