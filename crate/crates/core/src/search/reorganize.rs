//! Re-splitting one generation of an existing code into a different
//! number of classes.

use super::cover::{Budget, Decision};
use super::partition::{absorb_leftovers, coverage_instance, find_classes};
use super::{SearchConfig, SearchError};
use crate::code::TableCode;
use crate::state::MemoryState;
use crate::verify;

const MAX_EXTRA_POOL: usize = 20;

type Attempt<'a> = dyn FnMut(&[usize]) -> Option<Result<TableCode, SearchError>> + 'a;

fn image(code: &TableCode, generation: usize) -> Vec<MemoryState> {
    let mut v: Vec<MemoryState> = if generation == 0 {
        vec![code.zero_state()]
    } else {
        code.image(generation).cloned().collect()
    };
    v.sort();
    v.dedup();
    v
}

/// Replace generation `i` by `target` classes over the same states, each
/// covering the image of generation `i - 1`.
pub fn reorganize_merged_generation(
    code: &TableCode,
    i: usize,
    target: usize,
    cfg: &SearchConfig,
) -> Result<TableCode, SearchError> {
    reorganize_with_extra(code, i, target, 0, cfg)
}

/// As [`reorganize_merged_generation`], but first move `extra` new classes
/// out of generation `i` into generation `i - 1`. Candidate classes are
/// tried smallest first, then in lexicographic order.
pub fn reorganize_with_extra(
    code: &TableCode,
    i: usize,
    target: usize,
    extra: usize,
    cfg: &SearchConfig,
) -> Result<TableCode, SearchError> {
    if i == 0 || i > code.t() || target == 0 {
        return Err(SearchError::BadInput(format!(
            "cannot reorganize generation {i} into {target} classes"
        )));
    }
    if extra > 0 && i < 2 {
        return Err(SearchError::BadInput("extra classes need a previous generation".into()));
    }
    let elems = image(code, i);
    let prev = image(code, i - 1);
    let mut budget = Budget::new(cfg.budget);

    if extra == 0 {
        return match split(&elems, &prev, target, &mut budget) {
            Decision::Found(classes) => assemble(code, i, classes, Vec::new()),
            Decision::Impossible => Err(SearchError::NoReorganization { target }),
            Decision::Exhausted => Err(SearchError::BudgetExhausted { best: None }),
        };
    }

    if elems.len() > MAX_EXTRA_POOL {
        return Err(SearchError::BadInput(format!(
            "generation {i} has {} states; at most {MAX_EXTRA_POOL} are supported with extra classes",
            elems.len()
        )));
    }
    let before = image(code, i - 2);
    let cov = coverage_instance(&elems, &before);
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for size in 1..=elems.len() {
        for combo in combinations(elems.len(), size) {
            if cov.is_cover(&combo) {
                candidates.push(combo);
            }
        }
    }
    let mut chosen = Vec::new();
    let mut exhausted = false;
    let found = pick(&candidates, 0, extra, &mut chosen, &mut |picked: &[usize]| {
        let taken: Vec<usize> = picked.iter().flat_map(|&c| candidates[c].clone()).collect();
        let rest: Vec<MemoryState> = (0..elems.len())
            .filter(|e| !taken.contains(e))
            .map(|e| elems[e].clone())
            .collect();
        let mut targets = prev.clone();
        targets.extend(taken.iter().map(|&e| elems[e].clone()));
        targets.sort();
        match split(&rest, &targets, target, &mut budget) {
            Decision::Found(classes) => {
                let extras = picked
                    .iter()
                    .map(|&c| candidates[c].iter().map(|&e| elems[e].clone()).collect())
                    .collect();
                Some(assemble(code, i, classes, extras))
            }
            Decision::Impossible => None,
            Decision::Exhausted => {
                exhausted = true;
                None
            }
        }
    });
    match found {
        Some(r) => r,
        None if exhausted => Err(SearchError::BudgetExhausted { best: None }),
        None => Err(SearchError::NoReorganization { target }),
    }
}

fn split(
    elems: &[MemoryState],
    targets: &[MemoryState],
    target: usize,
    budget: &mut Budget,
) -> Decision<Vec<Vec<MemoryState>>> {
    let inst = coverage_instance(elems, targets);
    match find_classes(&inst, target, budget) {
        Decision::Found(mut classes) => {
            absorb_leftovers(&mut classes, elems.len());
            Decision::Found(
                classes
                    .into_iter()
                    .map(|c| c.into_iter().map(|e| elems[e].clone()).collect())
                    .collect(),
            )
        }
        Decision::Impossible => Decision::Impossible,
        Decision::Exhausted => Decision::Exhausted,
    }
}

fn assemble(
    code: &TableCode,
    i: usize,
    classes: Vec<Vec<MemoryState>>,
    extras: Vec<Vec<MemoryState>>,
) -> Result<TableCode, SearchError> {
    let mut gens: Vec<Vec<Vec<MemoryState>>> = code.generations().to_vec();
    gens[i - 1] = classes;
    if !extras.is_empty() {
        gens[i - 2].extend(extras);
    }
    let out = TableCode::new(code.q(), code.n(), gens)?;
    verify::verify_wom(&out).map_err(|v| SearchError::BadInput(format!("reorganized code is invalid: {v}")))?;
    Ok(out)
}

fn pick(
    candidates: &[Vec<usize>],
    from: usize,
    left: usize,
    chosen: &mut Vec<usize>,
    attempt: &mut Attempt<'_>,
) -> Option<Result<TableCode, SearchError>> {
    if left == 0 {
        return attempt(chosen);
    }
    for c in from..candidates.len() {
        let clash = chosen
            .iter()
            .any(|&d| candidates[d].iter().any(|e| candidates[c].contains(e)));
        if clash {
            continue;
        }
        chosen.push(c);
        if let Some(r) = pick(candidates, c + 1, left - 1, chosen, attempt) {
            return Some(r);
        }
        chosen.pop();
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut p = k;
        while p > 0 && idx[p - 1] == n - k + p - 1 {
            p -= 1;
        }
        if p == 0 {
            return out;
        }
        idx[p - 1] += 1;
        for r in p..k {
            idx[r] = idx[r - 1] + 1;
        }
    }
}
