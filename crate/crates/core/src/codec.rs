//! Encoding, decoding and generation recovery shared by table and composite
//! codes.

use thiserror::Error;

use crate::code::{CodeParams, TableCode};
use crate::state::MemoryState;
use crate::verify;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("generation {generation} outside 1..={t}")]
    GenerationOutOfRange { generation: usize, t: usize },
    #[error("message {message} outside 1..={size} at generation {generation}")]
    MessageOutOfRange { generation: usize, message: u64, size: u64 },
    #[error("state {state} has the wrong shape for a length-{n} q={q} code")]
    ShapeMismatch { state: String, n: usize, q: u8 },
    #[error("no codeword of generation {generation}, message {message} covers {prior}")]
    NoCoveringCodeword {
        generation: usize,
        message: u64,
        prior: MemoryState,
    },
    #[error("state {state} is not in the image of generation {generation}")]
    NotInImage { generation: usize, state: MemoryState },
    #[error("state {state} is in no generation image")]
    NotInAnyImage { state: MemoryState },
    #[error("state {state} belongs to generations {first} and {second}; the code is not synchronous")]
    AmbiguousGeneration {
        state: MemoryState,
        first: usize,
        second: usize,
    },
    #[error("block {block} sits {offset} generations from the current stage base")]
    InconsistentBlocks { block: usize, offset: i64 },
    #[error("the memory is full: all {t} generations have been written")]
    BeyondLastGeneration { t: usize },
    #[error("nothing has been written yet")]
    NothingWritten,
    #[error("generation {requested} requested, but the state holds {completed} completed writes")]
    GenerationMismatch { requested: usize, completed: usize },
    #[error("write {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<CodecError>,
    },
    #[error("write {step}: {after} does not dominate {before}")]
    NotMonotone {
        step: usize,
        before: MemoryState,
        after: MemoryState,
    },
    #[error("write {step}: wrote message {written}, decoded {decoded}")]
    RoundTrip { step: usize, written: u64, decoded: u64 },
    #[error("write {step}: recovered generation {recovered}")]
    WrongGeneration { step: usize, recovered: usize },
}

/// Common behavior of every code the codec can drive.
pub trait CodeBehavior: Send + Sync {
    fn params(&self) -> &CodeParams;

    /// `E_i(m, b)`; generation 1 expects the erased state as `prior`.
    fn encode(&self, generation: usize, message: u64, prior: &MemoryState) -> Result<MemoryState, CodecError>;

    /// `D_i(b)`.
    fn decode(&self, generation: usize, state: &MemoryState) -> Result<u64, CodecError>;

    /// The generation whose image holds `state`, or 0 for erased memory.
    fn generation_of(&self, state: &MemoryState) -> Result<usize, CodecError>;

    fn is_synchronous(&self) -> bool;

    fn contains_all_zero(&self) -> bool;

    fn describe(&self) -> String {
        self.params().to_string()
    }
}

pub(crate) fn check_shape(params: &CodeParams, state: &MemoryState) -> Result<(), CodecError> {
    if state.len() != params.n() || state.q() != params.q() {
        return Err(CodecError::ShapeMismatch {
            state: state.to_text(),
            n: params.n(),
            q: params.q(),
        });
    }
    Ok(())
}

pub(crate) fn check_generation(params: &CodeParams, generation: usize) -> Result<(), CodecError> {
    if generation == 0 || generation > params.t() {
        return Err(CodecError::GenerationOutOfRange {
            generation,
            t: params.t(),
        });
    }
    Ok(())
}

pub(crate) fn check_message(params: &CodeParams, generation: usize, message: u64) -> Result<(), CodecError> {
    let size = params.size(generation);
    if message == 0 || message > size {
        return Err(CodecError::MessageOutOfRange {
            generation,
            message,
            size,
        });
    }
    Ok(())
}

/// Picks the lightest codeword of class `m` that dominates `prior`, breaking
/// weight ties lexicographically.
pub fn table_encode(
    code: &TableCode,
    generation: usize,
    message: u64,
    prior: &MemoryState,
) -> Result<MemoryState, CodecError> {
    check_generation(code.params(), generation)?;
    check_message(code.params(), generation, message)?;
    check_shape(code.params(), prior)?;
    code.encode_order(generation, message as usize)
        .iter()
        .find(|y| prior.precedes_unchecked(y))
        .cloned()
        .ok_or_else(|| CodecError::NoCoveringCodeword {
            generation,
            message,
            prior: prior.clone(),
        })
}

pub fn table_decode(code: &TableCode, generation: usize, state: &MemoryState) -> Result<u64, CodecError> {
    check_generation(code.params(), generation)?;
    check_shape(code.params(), state)?;
    code.occurrences(state)
        .iter()
        .find(|(g, _)| *g == generation)
        .map(|&(_, m)| m as u64)
        .ok_or_else(|| CodecError::NotInImage {
            generation,
            state: state.clone(),
        })
}

/// `g(b)` for a synchronous table code.
pub fn recover_generation_sync(code: &TableCode, state: &MemoryState) -> Result<usize, CodecError> {
    check_shape(code.params(), state)?;
    match code.occurrences(state) {
        [] if state.is_zero() => Ok(0),
        [] => Err(CodecError::NotInAnyImage { state: state.clone() }),
        [(g, _)] => Ok(*g),
        [(a, _), (b, _), ..] => Err(CodecError::AmbiguousGeneration {
            state: state.clone(),
            first: *a,
            second: *b,
        }),
    }
}

impl CodeBehavior for TableCode {
    fn params(&self) -> &CodeParams {
        TableCode::params(self)
    }

    fn encode(&self, generation: usize, message: u64, prior: &MemoryState) -> Result<MemoryState, CodecError> {
        table_encode(self, generation, message, prior)
    }

    fn decode(&self, generation: usize, state: &MemoryState) -> Result<u64, CodecError> {
        table_decode(self, generation, state)
    }

    fn generation_of(&self, state: &MemoryState) -> Result<usize, CodecError> {
        recover_generation_sync(self, state)
    }

    fn is_synchronous(&self) -> bool {
        verify::check_synchronous(self).is_ok()
    }

    fn contains_all_zero(&self) -> bool {
        verify::contains_all_zero(self)
    }
}

/// Writes `messages` one generation at a time starting from erased memory.
///
/// After each write the new state must dominate the old one and decode back
/// to the written message; for synchronous codes the recovered generation
/// must equal the number of writes so far. Returns every intermediate state.
pub fn run_write_sequence(code: &dyn CodeBehavior, messages: &[u64]) -> Result<Vec<MemoryState>, CodecError> {
    let params = code.params();
    let synchronous = code.is_synchronous();
    let mut state = MemoryState::zeros(params.q(), params.n());
    let mut trace = Vec::with_capacity(messages.len());
    for (idx, &message) in messages.iter().enumerate() {
        let step = idx + 1;
        let wrap = |e: CodecError| CodecError::Step {
            step,
            source: Box::new(e),
        };
        let next = code.encode(step, message, &state).map_err(wrap)?;
        if !state.precedes_unchecked(&next) {
            return Err(CodecError::NotMonotone {
                step,
                before: state,
                after: next,
            });
        }
        let decoded = code.decode(step, &next).map_err(wrap)?;
        if decoded != message {
            return Err(CodecError::RoundTrip {
                step,
                written: message,
                decoded,
            });
        }
        if synchronous {
            let recovered = code.generation_of(&next).map_err(wrap)?;
            if recovered != step {
                return Err(CodecError::WrongGeneration { step, recovered });
            }
        }
        trace.push(next.clone());
        state = next;
    }
    Ok(trace)
}

/// Every message tuple of a code, in lexicographic order. Only sensible for
/// small products of generation sizes.
pub fn all_message_sequences(params: &CodeParams) -> impl Iterator<Item = Vec<u64>> + '_ {
    let sizes = params.sizes();
    let total: u64 = sizes.iter().product();
    (0..total).map(move |mut k| {
        let mut seq = vec![0; sizes.len()];
        for (slot, &m) in seq.iter_mut().zip(sizes).rev() {
            *slot = k % m + 1;
            k /= m;
        }
        seq
    })
}
