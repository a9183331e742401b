//! Write-once memory codes: table codes and their verifiers, a generic
//! encoder/decoder, the concatenation construction for synchronous codes,
//! combinatorial searches for codeword-class partitions, and rate-loss
//! tables.
//!
//! ```
//! use womkit::{catalog, codec, verify};
//!
//! let entry = catalog::entry("ex5_inner").unwrap();
//! let props = verify::verify_wom(&entry.table).unwrap();
//! assert!(props.is_laminar);
//! let trace = codec::run_write_sequence(&entry.table, &[2, 1, 2]).unwrap();
//! assert_eq!(trace.len(), 3);
//! ```

pub mod catalog;
pub mod cli;
pub mod code;
pub mod codec;
pub mod compose;
pub mod rates;
pub mod search;
pub mod state;
pub mod verify;

pub use code::{CodeError, CodeParams, TableCode};
pub use codec::{CodeBehavior, CodecError};
pub use compose::{compose, CompositeCode};
pub use state::{MemoryState, StateError};
pub use verify::{verify_wom, CodeProperties, WomViolation};
