//! Building larger codes from smaller ones.

mod append;
mod composite;
mod transforms;

pub use append::{append_counter, append_sync, sync_product, AppendError};
pub use composite::{
    compose, composite_decode, composite_encode, composite_recover, iterate_construction, wrap, ComposeError,
    CompositeCode, DecodedMessage, GenerationView, Role, StageView,
};
pub use transforms::{merge_generations, prepend_zero_generation, split_generation, TransformError};
