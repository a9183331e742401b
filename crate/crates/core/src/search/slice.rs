//! Constant-weight state sets `E_q(n, i)`.

use crate::state::MemoryState;

/// All q-ary length-`n` states of l1-weight `i`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSlice {
    pub q: u8,
    pub n: usize,
    pub i: u32,
    pub states: Vec<MemoryState>,
}

impl WeightSlice {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn position(&self, state: &MemoryState) -> Option<usize> {
        self.states.binary_search(state).ok()
    }
}

pub fn enumerate_slice(q: u8, n: usize, i: u32) -> WeightSlice {
    let mut states = Vec::new();
    let mut cells = vec![0u8; n];
    fill(q, i, 0, &mut cells, &mut states);
    WeightSlice { q, n, i, states }
}

fn fill(q: u8, left: u32, pos: usize, cells: &mut [u8], out: &mut Vec<MemoryState>) {
    let n = cells.len();
    if pos == n {
        if left == 0 {
            out.push(MemoryState::from_raw(q, cells.to_vec()));
        }
        return;
    }
    let room = (n - pos - 1) as u32 * (q as u32 - 1);
    let lo = left.saturating_sub(room);
    let hi = left.min(q as u32 - 1);
    for v in lo..=hi {
        cells[pos] = v as u8;
        fill(q, left - v, pos + 1, cells, out);
    }
    cells[pos] = 0;
}

/// `|E_q(n, i)|` by the convolution `N(n, i) = sum_{v < q} N(n-1, i-v)`.
pub fn slice_size(q: u8, n: usize, i: u32) -> u64 {
    let mut row = vec![0u64; i as usize + 1];
    row[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; row.len()];
        for (w, slot) in next.iter_mut().enumerate() {
            for v in 0..q as usize {
                if v <= w {
                    *slot += row[w - v];
                }
            }
        }
        row = next;
    }
    row[i as usize]
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::st;

    #[test]
    fn e_4_3_in_lex_order() {
        let s = enumerate_slice(2, 4, 3);
        let text: Vec<String> = s.states.iter().map(|x| x.to_text()).collect();
        assert_eq!(text, ["0111", "1011", "1101", "1110"]);
    }

    #[test]
    fn zero_weight_is_the_erased_state() {
        assert_eq!(enumerate_slice(3, 4, 0).states, vec![st(3, "0000")]);
    }

    #[test]
    fn quaternary_pair_of_weight_three() {
        let s = enumerate_slice(4, 2, 3);
        assert_eq!(s.len(), 4);
        assert_eq!(s.states[0], st(4, "03"));
    }

    #[test]
    fn sizes_agree_with_recurrence_and_binomials() {
        for q in 2..=4u8 {
            for n in 1..=6 {
                for i in 0..=(n as u32 * (q as u32 - 1)) {
                    assert_eq!(enumerate_slice(q, n, i).len() as u64, slice_size(q, n, i));
                }
            }
        }
        for n in 0..=12u64 {
            for k in 0..=n {
                assert_eq!(slice_size(2, n as usize, k as u32), binomial(n, k));
            }
        }
        assert!(enumerate_slice(2, 3, 4).is_empty());
    }
}
