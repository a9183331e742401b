//! Explicit partition constructions.

use super::partition::Partition;
use super::SearchError;
use crate::state::MemoryState;

/// `E_q(n, 1)` split into singletons: `A_q(n, 1) >= n`.
pub fn build_singletons(q: u8, n: usize) -> Partition {
    Partition {
        q,
        n,
        i: 1,
        classes: (0..n).map(|j| vec![MemoryState::unit(q, n, j, 1)]).collect(),
    }
}

/// Extends partitions of shorter slices by one cell. `parts[s]` must
/// partition `E_q(n-1, i-s)` for `s = 0..=min(q-1, i-1)`; class `k` of the
/// result is the union over `s` of `parts[s]`'s class `k` with `s`
/// appended. The class count is the smallest of the inputs.
pub fn build_prop_recursive(q: u8, n: usize, i: u32, parts: &[Partition]) -> Result<Partition, SearchError> {
    if n < 2 || i < 2 {
        return Err(SearchError::BadInput("the recursion needs n >= 2 and i >= 2".into()));
    }
    let top = (q as u32 - 1).min(i - 1);
    if parts.len() != top as usize + 1 {
        return Err(SearchError::BadInput(format!(
            "expected {} partitions, got {}",
            top + 1,
            parts.len()
        )));
    }
    for (s, p) in parts.iter().enumerate() {
        if p.q != q || p.n != n - 1 || p.i != i - s as u32 {
            return Err(SearchError::BadInput(format!(
                "partition {s} is over E_{}({},{}) instead of E_{q}({},{})",
                p.q,
                p.n,
                p.i,
                n - 1,
                i - s as u32
            )));
        }
    }
    let k = parts.iter().map(Partition::len).min().unwrap_or(0);
    let classes = (0..k)
        .map(|c| {
            let mut class: Vec<MemoryState> = parts
                .iter()
                .enumerate()
                .flat_map(|(s, p)| p.classes[c].iter().map(move |y| y.with_suffix(s as u8)))
                .collect();
            class.sort();
            class
        })
        .collect();
    Ok(Partition { q, n, i, classes })
}

fn pair(q: u8, n: usize, a: usize, b: usize) -> MemoryState {
    let mut cells = vec![0u8; n];
    cells[a] += 1;
    cells[b] += 1;
    MemoryState::new(q, cells).expect("weight two fits")
}

fn support_pair(s: &MemoryState) -> Option<(usize, usize)> {
    let ones: Vec<usize> = (0..s.len()).filter(|&j| s.cells()[j] == 1).collect();
    match ones.as_slice() {
        [a, b] if s.weight() == 2 => Some((*a, *b)),
        _ => None,
    }
}

/// Doubling for weight two: a binary partition of `E_2(n, 2)` with `k`
/// classes gives one of `E_2(2n, 2)` with `2k + 1` classes.
pub fn build_prop_doubling(p: &Partition) -> Result<Partition, SearchError> {
    if p.q != 2 || p.i != 2 {
        return Err(SearchError::BadInput(
            "doubling needs a binary weight-two partition".into(),
        ));
    }
    let n = p.n;
    let m = 2 * n;
    let mut classes: Vec<Vec<MemoryState>> = Vec::with_capacity(2 * p.len() + 1);
    let mut pairs = Vec::with_capacity(p.len());
    for class in &p.classes {
        let ps: Option<Vec<(usize, usize)>> = class.iter().map(support_pair).collect();
        pairs.push(ps.ok_or_else(|| SearchError::BadInput("class state is not a pair".into()))?);
    }
    for ps in &pairs {
        classes.push(
            ps.iter()
                .flat_map(|&(j, k)| [pair(2, m, j, k), pair(2, m, j + n, k + n)])
                .collect(),
        );
        classes.push(
            ps.iter()
                .flat_map(|&(j, k)| [pair(2, m, j, k + n), pair(2, m, j + n, k)])
                .collect(),
        );
    }
    classes.push((0..n).map(|j| pair(2, m, j, j + n)).collect());
    for c in &mut classes {
        c.sort();
    }
    Ok(Partition {
        q: 2,
        n: m,
        i: 2,
        classes,
    })
}

/// For `q >= 3`: the classes of a binary partition of `E_2(n, 2)` plus one
/// class holding every `2e_k`.
pub fn build_prop_qary_even(q: u8, p: &Partition) -> Result<Partition, SearchError> {
    if q < 3 || p.q != 2 || p.i != 2 {
        return Err(SearchError::BadInput(
            "needs q >= 3 and a binary weight-two partition".into(),
        ));
    }
    let n = p.n;
    let mut classes: Vec<Vec<MemoryState>> = p
        .classes
        .iter()
        .map(|c| c.iter().map(|s| s.widen(q)).collect())
        .collect();
    classes.push((0..n).map(|j| pair(q, n, j, j)).collect());
    Ok(Partition { q, n, i: 2, classes })
}

/// For `q >= 3` and length `2h + 1`: the class of pairs symmetric about
/// the centre cell together with twice the centre, and its cyclic shifts.
pub fn build_prop_circular(q: u8, half: usize) -> Result<Partition, SearchError> {
    if q < 3 || half == 0 {
        return Err(SearchError::BadInput("needs q >= 3 and half >= 1".into()));
    }
    let m = 2 * half + 1;
    let classes = (0..m)
        .map(|r| {
            let centre = (half + r) % m;
            let mut class: Vec<MemoryState> = (0..=half)
                .map(|k| pair(q, m, (centre + m - k) % m, (centre + k) % m))
                .collect();
            class.sort();
            class
        })
        .collect();
    Ok(Partition { q, n: m, i: 2, classes })
}
