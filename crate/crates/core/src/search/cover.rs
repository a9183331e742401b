//! Set-cover engine over bitsets: exact branch and bound with a node
//! budget, a greedy cover, and a seeded local search.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Covering relation between candidate sets and targets. Set `s` covers
/// exactly the targets in `sets[s]`.
#[derive(Debug, Clone)]
pub struct CoverInstance {
    targets: usize,
    sets: Vec<FixedBitSet>,
    covering: Vec<Vec<usize>>,
    root: Option<RootOrbits>,
}

/// Sets covering `target`, grouped into orbits of a symmetry group of the
/// instance that fixes `target`. Only the first member of each orbit needs
/// to be tried at the root.
#[derive(Debug, Clone)]
pub struct RootOrbits {
    pub target: usize,
    pub orbits: Vec<Vec<usize>>,
}

impl CoverInstance {
    pub fn new(targets: usize, sets: Vec<FixedBitSet>) -> Self {
        let mut covering = vec![Vec::new(); targets];
        for (s, set) in sets.iter().enumerate() {
            for x in set.ones() {
                covering[x].push(s);
            }
        }
        CoverInstance {
            targets,
            sets,
            covering,
            root: None,
        }
    }

    pub fn with_root_orbits(mut self, root: RootOrbits) -> Self {
        self.root = Some(root);
        self
    }

    pub fn targets(&self) -> usize {
        self.targets
    }

    pub fn sets(&self) -> &[FixedBitSet] {
        &self.sets
    }

    pub fn covering(&self, target: usize) -> &[usize] {
        &self.covering[target]
    }

    pub(crate) fn root(&self) -> Option<&RootOrbits> {
        self.root.as_ref()
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = FixedBitSet::with_capacity(self.targets);
        for &s in chosen {
            covered.union_with(&self.sets[s]);
        }
        covered.count_ones(..) == self.targets
    }

    /// `ceil(targets / largest set)`.
    pub fn counting_bound(&self) -> usize {
        let max = self.sets.iter().map(|s| s.count_ones(..)).max().unwrap_or(0);
        if self.targets == 0 {
            0
        } else if max == 0 {
            usize::MAX
        } else {
            self.targets.div_ceil(max)
        }
    }

    /// Size of a greedily built family of targets no two of which share a
    /// covering set.
    pub fn packing_bound(&self) -> usize {
        let all = FixedBitSet::with_capacity(self.sets.len());
        packing(self, &FixedBitSet::with_capacity(self.targets), &all, usize::MAX)
    }
}

/// Node budget shared by a search.
#[derive(Debug, Clone)]
pub struct Budget {
    left: u64,
    used: u64,
}

impl Budget {
    pub fn new(nodes: u64) -> Self {
        Budget { left: nodes, used: 0 }
    }

    pub(crate) fn tick(&mut self) -> bool {
        if self.left == 0 {
            return false;
        }
        self.left -= 1;
        self.used += 1;
        true
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exhausted(&self) -> bool {
        self.left == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision<T> {
    Found(T),
    Impossible,
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Fail,
    Exhausted,
}

/// Is there a cover using at most `k` sets?
pub fn cover_within(inst: &CoverInstance, k: usize, budget: &mut Budget) -> Decision<Vec<usize>> {
    let mut search = CoverSearch {
        inst,
        budget,
        chosen: Vec::new(),
        forbidden: FixedBitSet::with_capacity(inst.sets.len()),
    };
    let covered = FixedBitSet::with_capacity(inst.targets);
    match search.node(&covered, k) {
        Step::Found => Decision::Found(search.chosen),
        Step::Fail => Decision::Impossible,
        Step::Exhausted => Decision::Exhausted,
    }
}

struct CoverSearch<'a> {
    inst: &'a CoverInstance,
    budget: &'a mut Budget,
    chosen: Vec<usize>,
    forbidden: FixedBitSet,
}

impl CoverSearch<'_> {
    fn node(&mut self, covered: &FixedBitSet, left: usize) -> Step {
        if !self.budget.tick() {
            return Step::Exhausted;
        }
        let inst = self.inst;
        let uncovered = inst.targets - covered.count_ones(..);
        if uncovered == 0 {
            return Step::Found;
        }
        if left == 0 {
            return Step::Fail;
        }

        let mut max_gain = 0;
        let mut gain = vec![0usize; inst.sets.len()];
        for (s, set) in inst.sets.iter().enumerate() {
            if !self.forbidden[s] {
                gain[s] = set.difference_count(covered);
                max_gain = max_gain.max(gain[s]);
            }
        }
        if max_gain == 0 || uncovered.div_ceil(max_gain) > left {
            return Step::Fail;
        }

        let mut branch = usize::MAX;
        let mut fewest = usize::MAX;
        for x in (0..inst.targets).filter(|&x| !covered[x]) {
            let opts = inst.covering[x].iter().filter(|&&s| !self.forbidden[s]).count();
            if opts < fewest {
                fewest = opts;
                branch = x;
            }
        }
        if fewest == 0 {
            return Step::Fail;
        }
        if left < uncovered && packing(inst, covered, &self.forbidden, left) > left {
            return Step::Fail;
        }

        let mut added = Vec::new();
        let result = match inst.root.as_ref().filter(|_| self.chosen.is_empty()) {
            Some(root) => {
                let mut result = Step::Fail;
                for orbit in &root.orbits {
                    let rep = orbit[0];
                    if !self.forbidden[rep] {
                        result = self.descend(covered, left, rep);
                        if result != Step::Fail {
                            break;
                        }
                    }
                    for &s in orbit {
                        if !self.forbidden[s] {
                            self.forbidden.insert(s);
                            added.push(s);
                        }
                    }
                }
                result
            }
            None => {
                let mut opts: Vec<usize> = inst.covering[branch]
                    .iter()
                    .copied()
                    .filter(|&s| !self.forbidden[s])
                    .collect();
                opts.sort_by(|a, b| gain[*b].cmp(&gain[*a]).then(a.cmp(b)));
                let mut result = Step::Fail;
                for s in opts {
                    result = self.descend(covered, left, s);
                    if result != Step::Fail {
                        break;
                    }
                    self.forbidden.insert(s);
                    added.push(s);
                }
                result
            }
        };
        for s in added {
            self.forbidden.set(s, false);
        }
        result
    }

    fn descend(&mut self, covered: &FixedBitSet, left: usize, s: usize) -> Step {
        let mut next = covered.clone();
        next.union_with(&self.inst.sets[s]);
        self.chosen.push(s);
        let r = self.node(&next, left - 1);
        if r != Step::Found {
            self.chosen.pop();
        }
        r
    }
}

/// Greedy packing of uncovered targets; stops once the count exceeds `stop`.
fn packing(inst: &CoverInstance, covered: &FixedBitSet, forbidden: &FixedBitSet, stop: usize) -> usize {
    let mut order: Vec<(usize, usize)> = (0..inst.targets)
        .filter(|&x| !covered[x])
        .map(|x| {
            let opts = inst.covering[x].iter().filter(|&&s| !forbidden[s]).count();
            (opts, x)
        })
        .collect();
    order.sort_unstable();
    let mut blocked = FixedBitSet::with_capacity(inst.targets);
    let mut count = 0;
    for (_, x) in order {
        if blocked[x] {
            continue;
        }
        count += 1;
        if count > stop {
            break;
        }
        for &s in &inst.covering[x] {
            if !forbidden[s] {
                blocked.union_with(&inst.sets[s]);
            }
        }
    }
    count
}

/// Largest-gain-first cover restricted to the sets in `allowed` (all sets
/// when `None`). `None` if the allowed sets do not cover every target.
pub fn greedy_cover(inst: &CoverInstance, allowed: Option<&FixedBitSet>) -> Option<Vec<usize>> {
    let mut covered = FixedBitSet::with_capacity(inst.targets);
    let mut chosen = Vec::new();
    while covered.count_ones(..) < inst.targets {
        let mut best = None;
        let mut best_gain = 0;
        for (s, set) in inst.sets.iter().enumerate() {
            if allowed.is_some_and(|a| !a[s]) {
                continue;
            }
            let g = set.difference_count(&covered);
            if g > best_gain {
                best_gain = g;
                best = Some(s);
            }
        }
        let s = best?;
        covered.union_with(&inst.sets[s]);
        chosen.push(s);
    }
    Some(chosen)
}

/// Seeded swap-based local search for a cover of exactly `k` sets.
pub fn local_search_cover(inst: &CoverInstance, k: usize, seed: u64, steps: u64) -> Option<Vec<usize>> {
    let nsets = inst.sets.len();
    if k == 0 || k > nsets {
        return if inst.targets == 0 { Some(Vec::new()) } else { None };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sol: Vec<usize> = greedy_cover(inst, None).unwrap_or_default();
    sol.truncate(k);
    let mut in_sol = vec![false; nsets];
    for &s in &sol {
        in_sol[s] = true;
    }
    let mut s = 0;
    while sol.len() < k {
        if !in_sol[s] {
            in_sol[s] = true;
            sol.push(s);
        }
        s += 1;
    }

    let mut cnt = vec![0u32; inst.targets];
    for &s in &sol {
        for x in inst.sets[s].ones() {
            cnt[x] += 1;
        }
    }
    let mut tabu = vec![0u64; nsets];
    let tenure = 2 + (k as u64) / 4;

    for step in 1..=steps {
        let uncovered: Vec<usize> = (0..inst.targets).filter(|&x| cnt[x] == 0).collect();
        if uncovered.is_empty() {
            sol.sort_unstable();
            return Some(sol);
        }
        let x = uncovered[rng.random_range(0..uncovered.len())];

        let mut best_add = Vec::new();
        let mut best_gain = 0;
        for &s in &inst.covering[x] {
            if in_sol[s] {
                continue;
            }
            let g = inst.sets[s].ones().filter(|&y| cnt[y] == 0).count();
            if g > best_gain {
                best_gain = g;
                best_add.clear();
            }
            if g == best_gain {
                best_add.push(s);
            }
        }
        if best_add.is_empty() {
            return None;
        }
        let add = best_add[rng.random_range(0..best_add.len())];
        in_sol[add] = true;
        for y in inst.sets[add].ones() {
            cnt[y] += 1;
        }

        let mut best_rm = Vec::new();
        let mut best_loss = usize::MAX;
        for &r in &sol {
            if tabu[r] > step && rng.random_bool(0.9) {
                continue;
            }
            let loss = inst.sets[r].ones().filter(|&y| cnt[y] == 1).count();
            if loss < best_loss {
                best_loss = loss;
                best_rm.clear();
            }
            if loss == best_loss {
                best_rm.push(r);
            }
        }
        let pos = if best_rm.is_empty() {
            rng.random_range(0..sol.len())
        } else {
            let r = best_rm[rng.random_range(0..best_rm.len())];
            sol.iter().position(|&s| s == r).expect("member")
        };
        let rm = sol[pos];
        sol[pos] = add;
        in_sol[rm] = false;
        for y in inst.sets[rm].ones() {
            cnt[y] -= 1;
        }
        tabu[add] = step + tenure;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(n: usize, ones: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(n);
        for &x in ones {
            b.insert(x);
        }
        b
    }

    fn pairs_by_triples(n: usize) -> CoverInstance {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                pairs.push((a, b));
            }
        }
        let mut sets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let ones: Vec<usize> = pairs
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| [a, b, c].contains(&p.0) && [a, b, c].contains(&p.1))
                        .map(|(i, _)| i)
                        .collect();
                    sets.push(bits(pairs.len(), &ones));
                }
            }
        }
        CoverInstance::new(pairs.len(), sets)
    }

    #[test]
    fn fano_plane_is_the_smallest_triple_cover_of_seven_points() {
        let inst = pairs_by_triples(7);
        let mut b = Budget::new(1_000_000);
        let Decision::Found(c) = cover_within(&inst, 7, &mut b) else {
            panic!("no cover of size 7")
        };
        assert!(inst.is_cover(&c));
        assert_eq!(
            cover_within(&inst, 6, &mut Budget::new(1_000_000)),
            Decision::Impossible
        );
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let inst = pairs_by_triples(8);
        assert_eq!(cover_within(&inst, 10, &mut Budget::new(3)), Decision::Exhausted);
    }

    #[test]
    fn greedy_and_local_search_return_covers() {
        let inst = pairs_by_triples(7);
        let g = greedy_cover(&inst, None).unwrap();
        assert!(inst.is_cover(&g));
        let l = local_search_cover(&inst, 7, 1, 100_000).unwrap();
        assert_eq!(l.len(), 7);
        assert!(inst.is_cover(&l));
        assert!(local_search_cover(&inst, 6, 1, 2_000).is_none());
    }

    #[test]
    fn simple_bounds() {
        let inst = pairs_by_triples(7);
        assert_eq!(inst.counting_bound(), 7);
        assert!(inst.packing_bound() <= 7);
        let uncoverable = CoverInstance::new(2, vec![bits(2, &[0])]);
        assert_eq!(greedy_cover(&uncoverable, None), None);
    }
}
