//! Families of disjoint classes that each cover a target set.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::cover::{greedy_cover, Budget, CoverInstance, Decision, RootOrbits};
use super::slice::enumerate_slice;
use super::{SearchConfig, SearchError};
use crate::state::MemoryState;

/// Disjoint classes of weight-`i` states; each class is meant to cover
/// every weight-`(i-1)` state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub q: u8,
    pub n: usize,
    pub i: u32,
    pub classes: Vec<Vec<MemoryState>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionDefect {
    WrongShape(MemoryState),
    Repeated(MemoryState),
    Uncovered { class: usize, target: Vec<u8> },
}

impl fmt::Display for PartitionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionDefect::WrongShape(s) => write!(f, "state {s} has the wrong length, alphabet or weight"),
            PartitionDefect::Repeated(s) => write!(f, "state {s} appears more than once"),
            PartitionDefect::Uncovered { class, target } => {
                let t: String = target.iter().map(|d| char::from(b'0' + d)).collect();
                write!(f, "class {class} has no state above {t}")
            }
        }
    }
}

impl Partition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Brute-force check: every state has the right shape and weight, no
    /// state repeats, and every class dominates every q-ary vector of
    /// weight `i - 1`, compared cell by cell.
    pub fn verify(&self) -> Result<(), PartitionDefect> {
        let mut seen = std::collections::HashSet::new();
        for s in self.classes.iter().flatten() {
            if s.q() != self.q || s.len() != self.n || s.weight() != self.i {
                return Err(PartitionDefect::WrongShape(s.clone()));
            }
            if !seen.insert(s.cells().to_vec()) {
                return Err(PartitionDefect::Repeated(s.clone()));
            }
        }
        if self.i == 0 {
            return Ok(());
        }
        let total = (self.q as u64).pow(self.n as u32);
        for code in 0..total {
            let mut x = vec![0u8; self.n];
            let mut c = code;
            for cell in x.iter_mut().rev() {
                *cell = (c % self.q as u64) as u8;
                c /= self.q as u64;
            }
            if x.iter().map(|&v| v as u32).sum::<u32>() != self.i - 1 {
                continue;
            }
            for (k, class) in self.classes.iter().enumerate() {
                let hit = class.iter().any(|y| y.cells().iter().zip(&x).all(|(a, b)| a >= b));
                if !hit {
                    return Err(PartitionDefect::Uncovered { class: k, target: x });
                }
            }
        }
        Ok(())
    }

    /// Classes with their states sorted, ordered by first state.
    pub fn normalized(mut self) -> Partition {
        for c in &mut self.classes {
            c.sort();
        }
        self.classes.sort();
        self
    }
}

/// Outcome of a maximum-partition search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSearch {
    pub partition: Partition,
    /// No larger family exists.
    pub exact: bool,
    /// A proven upper bound on the number of classes.
    pub upper_bound: usize,
}

/// Covering relation between `elements` and `targets` under the cell-wise
/// order.
pub fn coverage_instance(elements: &[MemoryState], targets: &[MemoryState]) -> CoverInstance {
    let sets = elements
        .iter()
        .map(|y| {
            let mut b = FixedBitSet::with_capacity(targets.len());
            for (x, t) in targets.iter().enumerate() {
                if t.precedes_unchecked(y) {
                    b.insert(x);
                }
            }
            b
        })
        .collect();
    CoverInstance::new(targets.len(), sets)
}

/// `E_q(n, i)` against `E_q(n, i-1)`, with root orbits under coordinate
/// permutations fixing the first target.
pub(crate) fn slice_instance(q: u8, n: usize, i: u32) -> (Vec<MemoryState>, CoverInstance) {
    let elems = enumerate_slice(q, n, i).states;
    let targets = enumerate_slice(q, n, i - 1).states;
    let mut inst = coverage_instance(&elems, &targets);
    if let Some(x0) = targets.first() {
        let mut orbits: Vec<(u8, Vec<usize>)> = Vec::new();
        for j in 0..n {
            let v = x0.cells()[j];
            if v + 1 >= q {
                continue;
            }
            let mut cells = x0.cells().to_vec();
            cells[j] += 1;
            let y = MemoryState::from_raw(q, cells);
            let idx = elems.binary_search(&y).expect("slice member");
            match orbits.iter_mut().find(|(w, _)| *w == v) {
                Some((_, o)) => o.push(idx),
                None => orbits.push((v, vec![idx])),
            }
        }
        inst = inst.with_root_orbits(RootOrbits {
            target: 0,
            orbits: orbits.into_iter().map(|(_, o)| o).collect(),
        });
    }
    (elems, inst)
}

/// Repeatedly take a greedy cover out of the unused elements.
pub(crate) fn greedy_classes(inst: &CoverInstance) -> Vec<Vec<usize>> {
    let mut allowed = FixedBitSet::with_capacity(inst.sets().len());
    allowed.insert_range(..);
    let mut classes = Vec::new();
    while let Some(c) = greedy_cover(inst, Some(&allowed)) {
        if inst.targets() == 0 && !classes.is_empty() {
            break;
        }
        for &s in &c {
            allowed.set(s, false);
        }
        classes.push(c);
        if inst.targets() == 0 {
            break;
        }
    }
    classes
}

/// Are there `k` disjoint classes each covering every target?
pub fn find_classes(inst: &CoverInstance, k: usize, budget: &mut Budget) -> Decision<Vec<Vec<usize>>> {
    let nel = inst.sets().len();
    let mut free = FixedBitSet::with_capacity(nel);
    free.insert_range(..);
    let mut s = ClassSearch {
        inst,
        budget,
        cov: vec![FixedBitSet::with_capacity(inst.targets()); k],
        members: vec![Vec::new(); k],
        forbid: vec![FixedBitSet::with_capacity(nel); k],
        free,
    };
    match s.node() {
        Step::Found => Decision::Found(s.members),
        Step::Fail => Decision::Impossible,
        Step::Exhausted => Decision::Exhausted,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Fail,
    Exhausted,
}

struct ClassSearch<'a> {
    inst: &'a CoverInstance,
    budget: &'a mut Budget,
    cov: Vec<FixedBitSet>,
    members: Vec<Vec<usize>>,
    forbid: Vec<FixedBitSet>,
    free: FixedBitSet,
}

impl ClassSearch<'_> {
    fn node(&mut self) -> Step {
        if !self.budget.tick() {
            return Step::Exhausted;
        }
        let inst = self.inst;
        let t = inst.targets();
        let k = self.cov.len();
        let incomplete: Vec<usize> = (0..k).filter(|&c| self.cov[c].count_ones(..) < t).collect();
        if incomplete.is_empty() {
            return Step::Found;
        }

        for x in 0..t {
            let need = incomplete.iter().filter(|&&c| !self.cov[c][x]).count();
            if need > 0 {
                let avail = inst.covering(x).iter().filter(|&&e| self.free[e]).count();
                if need > avail {
                    return Step::Fail;
                }
            }
        }

        let mut total = 0;
        for &c in &incomplete {
            let unc = t - self.cov[c].count_ones(..);
            let gain = self
                .free
                .ones()
                .filter(|&e| !self.forbid[c][e])
                .map(|e| inst.sets()[e].difference_count(&self.cov[c]))
                .max()
                .unwrap_or(0);
            if gain == 0 {
                return Step::Fail;
            }
            total += unc.div_ceil(gain);
        }
        if total > self.free.count_ones(..) {
            return Step::Fail;
        }

        let empties: Vec<usize> = (0..k).filter(|&c| self.members[c].is_empty()).collect();
        let all_empty = empties.len() == k;
        if all_empty {
            if let Some(root) = inst.root() {
                return self.root_branch(root.target, &root.orbits.clone(), &empties);
            }
        }

        let mut best: Option<(usize, usize)> = None;
        let mut fewest = usize::MAX;
        for &c in &incomplete {
            if self.members[c].is_empty() && Some(&c) != empties.first() {
                continue;
            }
            for x in (0..t).filter(|&x| !self.cov[c][x]) {
                let opts = inst
                    .covering(x)
                    .iter()
                    .filter(|&&e| self.free[e] && !self.forbid[c][e])
                    .count();
                if opts < fewest {
                    fewest = opts;
                    best = Some((c, x));
                }
            }
        }
        let Some((c, x)) = best else { return Step::Fail };
        if fewest == 0 {
            return Step::Fail;
        }
        let mut opts: Vec<(usize, usize)> = inst
            .covering(x)
            .iter()
            .filter(|&&e| self.free[e] && !self.forbid[c][e])
            .map(|&e| (inst.sets()[e].difference_count(&self.cov[c]), e))
            .collect();
        opts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let shared: Vec<usize> = if self.members[c].is_empty() { empties } else { vec![c] };

        let mut added = Vec::new();
        let mut result = Step::Fail;
        for (_, e) in opts {
            result = self.place(c, e);
            if result != Step::Fail {
                break;
            }
            for &d in &shared {
                if !self.forbid[d][e] {
                    self.forbid[d].insert(e);
                    added.push((d, e));
                }
            }
        }
        for (d, e) in added {
            self.forbid[d].set(e, false);
        }
        result
    }

    fn root_branch(&mut self, _target: usize, orbits: &[Vec<usize>], empties: &[usize]) -> Step {
        let mut added = Vec::new();
        let mut result = Step::Fail;
        for orbit in orbits {
            let rep = orbit[0];
            if !self.forbid[0][rep] {
                result = self.place(0, rep);
                if result != Step::Fail {
                    break;
                }
            }
            for &e in orbit {
                for &d in empties {
                    if !self.forbid[d][e] {
                        self.forbid[d].insert(e);
                        added.push((d, e));
                    }
                }
            }
        }
        for (d, e) in added {
            self.forbid[d].set(e, false);
        }
        result
    }

    fn place(&mut self, c: usize, e: usize) -> Step {
        let saved = self.cov[c].clone();
        self.cov[c].union_with(&self.inst.sets()[e]);
        self.members[c].push(e);
        self.free.set(e, false);
        let r = self.node();
        if r != Step::Found {
            self.free.insert(e);
            self.members[c].pop();
            self.cov[c] = saved;
        }
        r
    }
}

/// Put unused elements into the currently smallest class.
pub(crate) fn absorb_leftovers(classes: &mut [Vec<usize>], total: usize) {
    if classes.is_empty() {
        return;
    }
    let mut used = vec![false; total];
    for &e in classes.iter().flatten() {
        used[e] = true;
    }
    for e in (0..total).filter(|&e| !used[e]) {
        let k = (0..classes.len())
            .min_by_key(|&k| (classes[k].len(), k))
            .expect("nonempty");
        classes[k].push(e);
    }
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
}

/// Classes, whether they are proven maximal, and an upper bound.
pub(crate) type MaxClasses = (Vec<Vec<usize>>, bool, usize);

/// Largest family of disjoint classes in `elements`, each covering all of
/// `inst`'s targets. Exact search up to `cfg.exact_limit` elements.
pub(crate) fn max_classes(inst: &CoverInstance, cfg: &SearchConfig) -> Result<MaxClasses, Vec<Vec<usize>>> {
    let nel = inst.sets().len();
    let mut best = greedy_classes(inst);
    let per_class = inst.counting_bound().max(inst.packing_bound()).max(1);
    let ub = if inst.targets() == 0 { nel } else { nel / per_class };
    if nel > cfg.exact_limit {
        return Ok((best, false, ub));
    }
    let mut budget = Budget::new(cfg.budget);
    let mut k = best.len() + 1;
    while k <= ub {
        match find_classes(inst, k, &mut budget) {
            Decision::Found(c) => {
                best = c;
                k += 1;
            }
            Decision::Impossible => return Ok((best, true, k - 1)),
            Decision::Exhausted => return Err(best),
        }
    }
    Ok((best, true, ub))
}

/// Largest suitable partition of `E_q(n, i)` covering `E_q(n, i-1)`.
/// Unused states are folded into the smallest classes.
pub fn max_partition(q: u8, n: usize, i: u32, cfg: &SearchConfig) -> Result<PartitionSearch, SearchError> {
    if i == 0 || q < 2 || n == 0 {
        return Err(SearchError::BadInput(format!(
            "no partition problem for q={q}, n={n}, i={i}"
        )));
    }
    let (elems, inst) = slice_instance(q, n, i);
    if elems.is_empty() {
        return Err(SearchError::EmptySlice { q, n, i });
    }
    let to_partition = |mut classes: Vec<Vec<usize>>| {
        absorb_leftovers(&mut classes, elems.len());
        Partition {
            q,
            n,
            i,
            classes: classes
                .into_iter()
                .map(|c| c.into_iter().map(|e| elems[e].clone()).collect())
                .collect(),
        }
    };
    match max_classes(&inst, cfg) {
        Ok((classes, exact, upper_bound)) => Ok(PartitionSearch {
            partition: to_partition(classes),
            exact,
            upper_bound,
        }),
        Err(best) => Err(SearchError::BudgetExhausted {
            best: Some(Box::new(to_partition(best))),
        }),
    }
}
