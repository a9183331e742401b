//! Upper bounds on the number of classes: the closed form, the
//! minimum-class-size bound `B`, and tables of both next to the best
//! partition sizes found.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use super::cover::{cover_within, greedy_cover, local_search_cover, Budget, Decision};
use super::partition::{max_partition, slice_instance};
use super::slice::{binomial, slice_size};
use super::{SearchConfig, SearchError};
use crate::state::MemoryState;

/// `floor(C(n,i) / ceil(C(n,i-1) / i))`, the binary bound from counting
/// how many weight-`(i-1)` vectors one weight-`i` vector covers.
pub fn bound_closed_form(n: u64, i: u64) -> u64 {
    assert!(i >= 1 && i <= n, "weight out of range");
    binomial(n, i) / binomial(n, i - 1).div_ceil(i)
}

type CacheKey = (u8, usize, u32, u64, u64);

fn lower_cache() -> &'static Mutex<HashMap<CacheKey, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_slice(q: u8, n: usize, i: u32) -> Result<(), SearchError> {
    if q < 2 || n == 0 || i == 0 {
        return Err(SearchError::BadInput(format!(
            "no class-size problem for q={q}, n={n}, i={i}"
        )));
    }
    if i as usize > n * (q as usize - 1) {
        return Err(SearchError::EmptySlice { q, n, i });
    }
    Ok(())
}

/// A proven lower bound on the smallest class of weight-`i` states
/// covering every weight-`(i-1)` state. Combines counting and packing
/// bounds, the binary point-deletion recursion, and budgeted exact search.
pub fn class_size_lower_bound(q: u8, n: usize, i: u32, cfg: &SearchConfig) -> Result<u64, SearchError> {
    check_slice(q, n, i)?;
    let key = (q, n, i, cfg.budget, cfg.local_steps);
    if let Some(&v) = lower_cache().lock().expect("cache").get(&key) {
        return Ok(v);
    }
    let (_, inst) = slice_instance(q, n, i);
    let mut lb = inst.counting_bound().max(inst.packing_bound()) as u64;
    if q == 2 && i >= 2 {
        let sub = class_size_lower_bound(2, n - 1, i - 1, cfg)?;
        lb = lb.max((n as u64 * sub).div_ceil(i as u64));
    }
    let mut budget = Budget::new(cfg.budget);
    loop {
        if local_search_cover(&inst, lb as usize, cfg.seed, cfg.local_steps).is_some() {
            break;
        }
        match cover_within(&inst, lb as usize, &mut budget) {
            Decision::Impossible => lb += 1,
            Decision::Found(_) | Decision::Exhausted => break,
        }
    }
    lower_cache().lock().expect("cache").insert(key, lb);
    Ok(lb)
}

/// What is known about `B_q(n, i)` after a budgeted search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundOutcome {
    pub q: u8,
    pub n: usize,
    pub i: u32,
    /// `|E_q(n, i)|`.
    pub slice: u64,
    /// Proven bounds on the minimum covering class size.
    pub class_lower: u64,
    pub class_upper: u64,
    /// A class of size `class_upper`.
    pub witness: Vec<MemoryState>,
}

impl BoundOutcome {
    /// `(floor(N / class_upper), floor(N / class_lower))`.
    pub fn range(&self) -> (u64, u64) {
        (self.slice / self.class_upper, self.slice / self.class_lower)
    }

    /// `B` when the bounds pin it down.
    pub fn value(&self) -> Option<u64> {
        let (lo, hi) = self.range();
        (lo == hi).then_some(lo)
    }

    pub fn min_class_exact(&self) -> bool {
        self.class_lower == self.class_upper
    }
}

fn tighten(
    q: u8,
    n: usize,
    i: u32,
    cfg: &SearchConfig,
    probe: impl Fn(u64, u64) -> Option<u64>,
) -> Result<BoundOutcome, SearchError> {
    let lower = class_size_lower_bound(q, n, i, cfg)?;
    let (elems, inst) = slice_instance(q, n, i);
    let mut witness = greedy_cover(&inst, None).expect("full slices always cover");
    let mut out = BoundOutcome {
        q,
        n,
        i,
        slice: slice_size(q, n, i),
        class_lower: lower,
        class_upper: witness.len() as u64,
        witness: Vec::new(),
    };
    let mut budget = Budget::new(cfg.budget);
    while let Some(k) = probe(out.class_lower, out.class_upper) {
        if let Some(c) = local_search_cover(&inst, k as usize, cfg.seed, cfg.local_steps) {
            out.class_upper = c.len() as u64;
            witness = c;
            continue;
        }
        match cover_within(&inst, k as usize, &mut budget) {
            Decision::Found(c) => {
                out.class_upper = c.len() as u64;
                witness = c;
            }
            Decision::Impossible => out.class_lower = k + 1,
            Decision::Exhausted => break,
        }
    }
    witness.sort_unstable();
    debug_assert!(inst.is_cover(&witness));
    out.witness = witness.into_iter().map(|e| elems[e].clone()).collect();
    Ok(out)
}

/// Smallest covering class, with a witness, or `BudgetExhausted`.
pub fn min_class_size(q: u8, n: usize, i: u32, cfg: &SearchConfig) -> Result<BoundOutcome, SearchError> {
    let out = tighten(q, n, i, cfg, |lo, hi| (lo < hi).then(|| hi - 1))?;
    if out.min_class_exact() {
        Ok(out)
    } else {
        Err(SearchError::BudgetExhausted { best: None })
    }
}

/// `B_q(n, i) = floor(|E_q(n,i)| / min |Y|)`. Only the thresholds where the
/// quotient changes are decided, so `min |Y|` itself may stay open.
pub fn bound_b(q: u8, n: usize, i: u32, cfg: &SearchConfig) -> Result<BoundOutcome, SearchError> {
    let total = slice_size(q, n, i);
    tighten(q, n, i, cfg, |lo, hi| {
        let top = total / lo;
        (top != total / hi).then(|| total / top)
    })
}

/// One row of a bound table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub q: u8,
    pub n: usize,
    pub i: u32,
    pub closed_form: Option<u64>,
    pub b: Option<u64>,
    pub b_range: (u64, u64),
    /// Size of the best partition found.
    pub a: u64,
    pub a_exact: bool,
    pub witness_file: Option<String>,
    #[serde(skip)]
    pub b_witness: Vec<MemoryState>,
    #[serde(skip)]
    pub a_witness: Option<super::Partition>,
}

pub const BOUND_CSV_HEADER: [&str; 8] = ["q", "n", "i", "closed_form", "B", "A", "exact_flag", "witness_file"];

fn record(q: u8, n: usize, i: u32, cfg: &SearchConfig) -> Result<BoundRecord, SearchError> {
    let b = bound_b(q, n, i, cfg)?;
    let (a, a_exact, a_witness) = match max_partition(q, n, i, cfg) {
        Ok(r) => (r.partition.len() as u64, r.exact, Some(r.partition)),
        Err(SearchError::BudgetExhausted { best }) => {
            (best.as_ref().map_or(0, |p| p.len() as u64), false, best.map(|p| *p))
        }
        Err(e) => return Err(e),
    };
    Ok(BoundRecord {
        q,
        n,
        i,
        closed_form: (q == 2 && n <= 16).then(|| bound_closed_form(n as u64, i as u64)),
        b: b.value(),
        b_range: b.range(),
        a,
        a_exact,
        witness_file: None,
        b_witness: b.witness,
        a_witness,
    })
}

/// Records for `n = 1..=n_max` and `i = 1..=min(i_max, n(q-1))`, computed
/// in parallel and returned in `(n, i)` order.
pub fn bound_table(
    q: u8,
    n_max: usize,
    i_max: Option<u32>,
    cfg: &SearchConfig,
) -> Result<Vec<BoundRecord>, SearchError> {
    let cells: Vec<(usize, u32)> = (1..=n_max)
        .flat_map(|n| {
            let top = (n as u32) * (q as u32 - 1);
            (1..=i_max.map_or(top, |m| m.min(top))).map(move |i| (n, i))
        })
        .collect();
    cells.par_iter().map(|&(n, i)| record(q, n, i, cfg)).collect()
}

/// Partition sizes only, for the q-ary tables.
pub fn a_table(q: u8, n: usize, i_max: Option<u32>, cfg: &SearchConfig) -> Result<Vec<(u32, u64, bool)>, SearchError> {
    let top = (n as u32) * (q as u32 - 1);
    let is: Vec<u32> = (1..=i_max.map_or(top, |m| m.min(top))).collect();
    is.par_iter()
        .map(|&i| match max_partition(q, n, i, cfg) {
            Ok(r) => Ok((i, r.partition.len() as u64, r.exact)),
            Err(SearchError::BudgetExhausted { best }) => Ok((i, best.map_or(0, |p| p.len() as u64), false)),
            Err(e) => Err(e),
        })
        .collect()
}

pub fn write_bound_csv<W: Write>(records: &[BoundRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUND_CSV_HEADER)?;
    for r in records {
        let b = match r.b {
            Some(v) => v.to_string(),
            None => format!("{}..{}", r.b_range.0, r.b_range.1),
        };
        w.write_record([
            r.q.to_string(),
            r.n.to_string(),
            r.i.to_string(),
            r.closed_form.map(|v| v.to_string()).unwrap_or_default(),
            b,
            r.a.to_string(),
            r.a_exact.to_string(),
            r.witness_file.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
