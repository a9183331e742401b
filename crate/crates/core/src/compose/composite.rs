//! The concatenated code `F(C, C')`: `n'` blocks of an inner code `C`, with an
//! outer code `C'` choosing which blocks advance at every write.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::code::{CodeParams, TableCode};
use crate::codec::{check_shape, CodeBehavior, CodecError};
use crate::state::MemoryState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    Inner,
    Outer,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Inner => "inner",
            Role::Outer => "outer",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("{0} code contains the all-zero codeword")]
    AllZeroCodeword(Role),
    #[error("{0} code is not synchronous")]
    NotSynchronous(Role),
    #[error("unsupported nonbinary outer code: {0}")]
    UnsupportedOuter(String),
    #[error("generation size product overflows 64 bits")]
    SizeOverflow,
    #[error("the reachable state set exceeds {limit} states")]
    TooLarge { limit: usize },
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Position inside the construction: stage `p`, outer generation `l`,
/// overall generation `i = (p-1)t' + l`, and the outer state `b'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageView {
    pub p: usize,
    pub l: usize,
    pub i: usize,
    pub b_prime: MemoryState,
}

impl fmt::Display for StageView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} l={} i={} b'={}", self.p, self.l, self.i, self.b_prime)
    }
}

/// What the recovery step learns from a composite state. `read_view` is the
/// position of the last completed write; `write_view` is where the next write
/// lands, which differs only when a stage has just been completed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationView {
    pub read_view: StageView,
    pub write_view: StageView,
    pub rolled_over: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecodedMessage {
    pub m: u64,
    pub m_prime: u64,
    pub m1: u64,
}

/// `1 + ((x - 1) mod m)` with a nonnegative remainder.
pub fn wrap(x: i128, m: u64) -> u64 {
    let m = m as i128;
    (1 + (x - 1).rem_euclid(m)) as u64
}

#[derive(Clone)]
pub struct CompositeCode {
    inner: Arc<dyn CodeBehavior>,
    outer: Arc<dyn CodeBehavior>,
    params: CodeParams,
    /// Inner generations advanced per stage: `q' - 1`.
    span: usize,
    stages: usize,
}

impl fmt::Debug for CompositeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F({}, {}) = {}",
            self.inner.describe(),
            self.outer.describe(),
            self.params
        )
    }
}

/// Builds `F(inner, outer)` after checking that both codes are synchronous
/// and free of the all-zero codeword.
///
/// A nonbinary outer code over `q'` symbols lets each stage advance blocks by
/// up to `q' - 1` inner generations; this needs `(q' - 1) | t` and equal inner
/// generation sizes inside every such window (always true for a fixed-rate
/// inner code).
pub fn compose(inner: Arc<dyn CodeBehavior>, outer: Arc<dyn CodeBehavior>) -> Result<CompositeCode, ComposeError> {
    for (code, role) in [(&inner, Role::Inner), (&outer, Role::Outer)] {
        if code.contains_all_zero() {
            return Err(ComposeError::AllZeroCodeword(role));
        }
        if !code.is_synchronous() {
            return Err(ComposeError::NotSynchronous(role));
        }
    }
    let ip = inner.params();
    let op = outer.params();
    let span = op.q() as usize - 1;
    if !ip.t().is_multiple_of(span) {
        return Err(ComposeError::UnsupportedOuter(format!(
            "a {}-ary outer code advances {span} inner generations per stage, which does not divide t = {}",
            op.q(),
            ip.t()
        )));
    }
    let stages = ip.t() / span;
    for s in 0..stages {
        let window = &ip.sizes()[s * span..(s + 1) * span];
        if window.iter().any(|&m| m != window[0]) {
            return Err(ComposeError::UnsupportedOuter(format!(
                "inner generations {}..={} have sizes {:?}; a {}-ary outer code needs them equal",
                s * span + 1,
                (s + 1) * span,
                window,
                op.q()
            )));
        }
    }
    let mut sizes = Vec::with_capacity(stages * op.t());
    for s in 0..stages {
        let m = ip.sizes()[s * span];
        for &mo in op.sizes() {
            sizes.push(m.checked_mul(mo).ok_or(ComposeError::SizeOverflow)?);
        }
    }
    let params = CodeParams::new(ip.q(), ip.n() * op.n(), sizes).expect("component parameters are already valid");
    Ok(CompositeCode {
        inner,
        outer,
        params,
        span,
        stages,
    })
}

/// `C_0 = base`, `C_k = F(C_{k-1}, outer)`.
pub fn iterate_construction(
    base: Arc<dyn CodeBehavior>,
    outer: Arc<dyn CodeBehavior>,
    iterations: usize,
) -> Result<Arc<dyn CodeBehavior>, ComposeError> {
    let mut code = base;
    for _ in 0..iterations {
        code = Arc::new(compose(code, outer.clone())?);
    }
    Ok(code)
}

impl CompositeCode {
    pub fn inner(&self) -> &Arc<dyn CodeBehavior> {
        &self.inner
    }

    pub fn outer(&self) -> &Arc<dyn CodeBehavior> {
        &self.outer
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    /// `(t'/n') R + (t/n) R'` for a binary outer code.
    pub fn theorem_rate(&self) -> f64 {
        let ip = self.inner.params();
        let op = self.outer.params();
        op.t() as f64 / op.n() as f64 * ip.wom_rate() + ip.t() as f64 / ip.n() as f64 * op.wom_rate()
    }

    fn base(&self, stage: usize) -> usize {
        (stage - 1) * self.span
    }

    fn window_size(&self, stage: usize) -> u64 {
        self.inner.params().size(self.base(stage) + 1)
    }

    fn split(&self, state: &MemoryState) -> Result<Vec<MemoryState>, CodecError> {
        check_shape(&self.params, state)?;
        Ok(state.blocks(self.inner.params().n()))
    }

    fn check_blocks(&self, blocks: &[MemoryState]) -> Result<(), CodecError> {
        let ip = self.inner.params();
        if blocks.len() != self.outer.params().n() {
            return Err(CodecError::ShapeMismatch {
                state: format!("{} blocks", blocks.len()),
                n: self.outer.params().n(),
                q: ip.q(),
            });
        }
        blocks.iter().try_for_each(|b| check_shape(ip, b))
    }

    /// Generation recovery: the stage and outer generation of a block vector.
    pub fn recover(&self, blocks: &[MemoryState]) -> Result<GenerationView, CodecError> {
        self.check_blocks(blocks)?;
        let op = self.outer.params();
        let gens: Vec<usize> = blocks
            .iter()
            .map(|b| self.inner.generation_of(b))
            .collect::<Result<_, _>>()?;
        let top = gens.iter().copied().max().unwrap_or(0);
        let zero_outer = MemoryState::zeros(op.q(), op.n());
        if top == 0 {
            let fresh = StageView {
                p: 1,
                l: 0,
                i: 0,
                b_prime: zero_outer,
            };
            return Ok(GenerationView {
                read_view: fresh.clone(),
                write_view: fresh,
                rolled_over: true,
            });
        }
        let stage = top.div_ceil(self.span);
        let base = self.base(stage) as i64;
        let mut cells = Vec::with_capacity(gens.len());
        for (k, &g) in gens.iter().enumerate() {
            let offset = g as i64 - base;
            if !(0..=self.span as i64).contains(&offset) {
                return Err(CodecError::InconsistentBlocks { block: k + 1, offset });
            }
            cells.push(offset as u8);
        }
        let b_prime = MemoryState::new(op.q(), cells).expect("offsets lie in the outer alphabet");
        let l = self.outer.generation_of(&b_prime)?;
        let read_view = StageView {
            p: stage,
            l,
            i: (stage - 1) * op.t() + l,
            b_prime: b_prime.clone(),
        };
        let full = b_prime.cells().iter().all(|&c| c as usize == self.span);
        if full || l == op.t() {
            let write_view = StageView {
                p: stage + 1,
                l: 0,
                i: stage * op.t(),
                b_prime: zero_outer,
            };
            Ok(GenerationView {
                read_view,
                write_view,
                rolled_over: true,
            })
        } else {
            Ok(GenerationView {
                write_view: read_view.clone(),
                read_view,
                rolled_over: false,
            })
        }
    }

    /// Writes `m1` on top of `blocks`.
    ///
    /// At the first write of a stage, blocks still lagging behind the stage
    /// base are first raised to it one generation at a time.
    pub fn encode_blocks(&self, blocks: &[MemoryState], m1: u64) -> Result<Vec<MemoryState>, CodecError> {
        let view = self.recover(blocks)?;
        let w = view.write_view;
        if w.p > self.stages {
            return Err(CodecError::BeyondLastGeneration { t: self.params.t() });
        }
        let big_m = self.window_size(w.p);
        let mo = self.outer.params().size(w.l + 1);
        if m1 == 0 || m1 > big_m * mo {
            return Err(CodecError::MessageOutOfRange {
                generation: w.i + 1,
                message: m1,
                size: big_m * mo,
            });
        }
        let m = 1 + (m1 - 1) / mo;
        let m_prime = 1 + (m1 - 1) % mo;
        let next_outer = self.outer.encode(w.l + 1, m_prime, &w.b_prime)?;
        let base = self.base(w.p);
        let mut out = blocks.to_vec();
        if w.l == 0 {
            for b in out.iter_mut() {
                let g = self.inner.generation_of(b)?;
                for step in g + 1..=base {
                    *b = self.inner.encode(step, self.inner.params().size(step), b)?;
                }
            }
        }
        let old = w.b_prime.cells();
        let new = next_outer.cells();
        let mut acc = m as i128;
        let mut k0 = None;
        for k in 0..out.len() {
            if new[k] > old[k] {
                k0 = Some(k);
            } else if old[k] >= 1 {
                acc -= self.inner.decode(base + old[k] as usize, &out[k])? as i128;
            }
        }
        let k0 = k0.expect("a synchronous outer code changes its state on every write");
        let m = wrap(acc, big_m);
        for k in 0..out.len() {
            if new[k] <= old[k] {
                continue;
            }
            let last = base + new[k] as usize;
            for g in base + old[k] as usize + 1..=last {
                let msg = if g == last && k == k0 {
                    m
                } else {
                    self.inner.params().size(g)
                };
                out[k] = self.inner.encode(g, msg, &out[k])?;
            }
        }
        Ok(out)
    }

    /// Decoding: the message pair held by `blocks`.
    pub fn decode_blocks(&self, blocks: &[MemoryState]) -> Result<DecodedMessage, CodecError> {
        let view = self.recover(blocks)?;
        let r = view.read_view;
        if r.l == 0 {
            return Err(CodecError::NothingWritten);
        }
        let m_prime = self.outer.decode(r.l, &r.b_prime)?;
        let base = self.base(r.p);
        let mut sum: i128 = 0;
        for (k, &c) in r.b_prime.cells().iter().enumerate() {
            if c >= 1 {
                sum += self.inner.decode(base + c as usize, &blocks[k])? as i128;
            }
        }
        let m = wrap(sum, self.window_size(r.p));
        let m1 = (m - 1) * self.outer.params().size(r.l) + m_prime;
        Ok(DecodedMessage { m, m_prime, m1 })
    }

    /// Expands the reachable states into a table code, giving up once more
    /// than `limit` distinct states have been produced.
    pub fn to_table(&self, limit: usize) -> Result<TableCode, ComposeError> {
        let mut frontier: BTreeSet<MemoryState> =
            BTreeSet::from([MemoryState::zeros(self.params.q(), self.params.n())]);
        let mut seen = 0usize;
        let mut generations = Vec::with_capacity(self.params.t());
        for i in 1..=self.params.t() {
            let mut classes: BTreeMap<u64, BTreeSet<MemoryState>> = BTreeMap::new();
            for prior in &frontier {
                for m in 1..=self.params.size(i) {
                    let y = self.encode(i, m, prior)?;
                    classes.entry(m).or_default().insert(y);
                }
            }
            frontier = classes.values().flatten().cloned().collect();
            seen += frontier.len();
            if seen > limit {
                return Err(ComposeError::TooLarge { limit });
            }
            generations.push(classes.into_values().map(|c| c.into_iter().collect()).collect());
        }
        Ok(TableCode::new(self.params.q(), self.params.n(), generations)
            .expect("reachable classes are disjoint and well shaped"))
    }
}

/// `composite_recover` on a flat state.
pub fn composite_recover(code: &CompositeCode, state: &MemoryState) -> Result<GenerationView, CodecError> {
    code.recover(&code.split(state)?)
}

pub fn composite_encode(code: &CompositeCode, state: &MemoryState, m1: u64) -> Result<MemoryState, CodecError> {
    let blocks = code.encode_blocks(&code.split(state)?, m1)?;
    Ok(MemoryState::concat(&blocks).expect("blocks share one alphabet"))
}

pub fn composite_decode(code: &CompositeCode, state: &MemoryState) -> Result<DecodedMessage, CodecError> {
    code.decode_blocks(&code.split(state)?)
}

impl CodeBehavior for CompositeCode {
    fn params(&self) -> &CodeParams {
        &self.params
    }

    fn encode(&self, generation: usize, message: u64, prior: &MemoryState) -> Result<MemoryState, CodecError> {
        let blocks = self.split(prior)?;
        let view = self.recover(&blocks)?;
        if view.write_view.i + 1 != generation {
            return Err(CodecError::GenerationMismatch {
                requested: generation,
                completed: view.read_view.i,
            });
        }
        let out = self.encode_blocks(&blocks, message)?;
        Ok(MemoryState::concat(&out).expect("blocks share one alphabet"))
    }

    fn decode(&self, generation: usize, state: &MemoryState) -> Result<u64, CodecError> {
        let blocks = self.split(state)?;
        let view = self.recover(&blocks)?;
        if view.read_view.i != generation {
            return Err(CodecError::NotInImage {
                generation,
                state: state.clone(),
            });
        }
        Ok(self.decode_blocks(&blocks)?.m1)
    }

    fn generation_of(&self, state: &MemoryState) -> Result<usize, CodecError> {
        Ok(composite_recover(self, state)?.read_view.i)
    }

    fn is_synchronous(&self) -> bool {
        true
    }

    fn contains_all_zero(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        format!("F({}, {})", self.inner.describe(), self.outer.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{all_message_sequences, run_write_sequence};
    use crate::state::st;

    fn ex5_inner() -> Arc<dyn CodeBehavior> {
        Arc::new(
            TableCode::from_digits(
                2,
                &[
                    &[&["0001"], &["0010"], &["0100"], &["1000"]],
                    &[&["1100", "0011"], &["1010", "0101"], &["1001", "0110"]],
                    &[&["0111", "1011", "1101", "1110"], &["1111"]],
                ],
            )
            .unwrap(),
        )
    }

    fn c2() -> Arc<dyn CodeBehavior> {
        Arc::new(TableCode::from_digits(2, &[&[&["01"], &["10"]], &[&["11"]]]).unwrap())
    }

    #[test]
    fn wrap_handles_negatives() {
        assert_eq!(wrap(0, 3), 3);
        assert_eq!(wrap(-1, 3), 2);
        assert_eq!(wrap(4, 3), 1);
        assert_eq!(wrap(3, 3), 3);
    }

    #[test]
    fn example5_parameters() {
        let c = compose(ex5_inner(), c2()).unwrap();
        assert_eq!(c.params().to_string(), "[8,6:8,4,6,3,4,2]_2");
        assert!((c.params().wom_rate() - c.theorem_rate()).abs() < 1e-9);
    }

    #[test]
    fn example5_trace() {
        let c = compose(ex5_inner(), c2()).unwrap();
        let blocks = [st(2, "1100"), st(2, "0010")];
        let v = c.recover(&blocks).unwrap();
        assert_eq!((v.read_view.p, v.read_view.l, v.read_view.i), (2, 1, 3));
        assert!(!v.rolled_over);
        assert_eq!(v.read_view.b_prime, st(2, "10"));
        let d = c.decode_blocks(&blocks).unwrap();
        assert_eq!((d.m, d.m_prime, d.m1), (1, 2, 2));
        let out = c.encode_blocks(&blocks, 2).unwrap();
        assert_eq!(out, vec![st(2, "1100"), st(2, "0011")]);
        let v = c.recover(&out).unwrap();
        assert_eq!((v.read_view.p, v.read_view.l, v.read_view.i), (2, 2, 4));
        assert_eq!((v.write_view.p, v.write_view.l), (3, 0));
        assert!(v.rolled_over);
        let d = c.decode_blocks(&out).unwrap();
        assert_eq!((d.m, d.m_prime, d.m1), (2, 1, 2));
    }

    #[test]
    fn empty_memory_view() {
        let c = compose(ex5_inner(), c2()).unwrap();
        let v = c.recover(&[st(2, "0000"), st(2, "0000")]).unwrap();
        assert_eq!((v.write_view.p, v.write_view.l, v.write_view.i), (1, 0, 0));
        assert!(v.rolled_over);
        assert_eq!(
            c.decode_blocks(&[st(2, "0000"), st(2, "0000")]),
            Err(CodecError::NothingWritten)
        );
    }

    #[test]
    fn exhaustive_round_trip_of_example5() {
        let c = compose(ex5_inner(), c2()).unwrap();
        let mut count = 0;
        for seq in all_message_sequences(c.params()) {
            run_write_sequence(&c, &seq).unwrap();
            count += 1;
        }
        assert_eq!(count, 4608);
    }

    #[test]
    fn full_memory_rejects_more_writes() {
        let c = compose(c2(), c2()).unwrap();
        let trace = run_write_sequence(&c, &[1, 1, 1, 1]).unwrap();
        let last = trace.last().unwrap();
        assert_eq!(
            composite_encode(&c, last, 1),
            Err(CodecError::BeyondLastGeneration { t: 4 })
        );
        assert_eq!(composite_recover(&c, last).unwrap().read_view.i, 4);
    }

    #[test]
    fn rejects_zero_and_nonsynchronous_inputs() {
        let with_zero: Arc<dyn CodeBehavior> =
            Arc::new(TableCode::from_digits(2, &[&[&["00"]], &[&["01"], &["10"]]]).unwrap());
        assert_eq!(
            compose(with_zero, c2()).unwrap_err(),
            ComposeError::AllZeroCodeword(Role::Inner)
        );
        let nonsync: Arc<dyn CodeBehavior> =
            Arc::new(TableCode::from_digits(2, &[&[&["01"], &["10"]], &[&["11"], &["10", "01"]]]).unwrap());
        assert_eq!(
            compose(c2(), nonsync).unwrap_err(),
            ComposeError::NotSynchronous(Role::Outer)
        );
    }

    #[test]
    fn outer_ending_below_all_ones_lifts_lagging_blocks() {
        let outer: Arc<dyn CodeBehavior> =
            Arc::new(TableCode::from_digits(2, &[&[&["001"], &["010"]], &[&["110", "101"], &["011"]]]).unwrap());
        let c = compose(c2(), outer).unwrap();
        assert_eq!(c.params().to_string(), "[6,4:4,4,2,2]_2");
        for seq in all_message_sequences(c.params()) {
            run_write_sequence(&c, &seq).unwrap();
        }
    }

    #[test]
    fn table_expansion_is_valid_and_synchronous() {
        let c = compose(ex5_inner(), c2()).unwrap();
        let table = c.to_table(1_000_000).unwrap();
        let p = crate::verify::verify_wom(&table).unwrap();
        assert!(p.is_synchronous && !p.contains_all_zero);
        assert!(matches!(c.to_table(10), Err(ComposeError::TooLarge { .. })));
    }
}
