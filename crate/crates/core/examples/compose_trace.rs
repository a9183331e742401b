//! Concatenate a 4-cell inner code with a 2-cell outer code and replay one
//! recovery, decode and encode step on a composite state.

use std::sync::Arc;

use womkit::compose::{compose, composite_decode, composite_encode, composite_recover};
use womkit::{catalog, MemoryState};

fn main() {
    let inner = Arc::new(catalog::entry("ex5_inner").unwrap().table);
    let outer = Arc::new(catalog::entry("c2_writes2").unwrap().table);
    let code = compose(inner, outer).unwrap();
    let params = womkit::CodeBehavior::params(&code);
    println!("{params} rate {:.4}", params.wom_rate());

    let state = MemoryState::parse(2, "11000010").unwrap();
    let view = composite_recover(&code, &state).unwrap();
    println!("read view:  {}", view.read_view);
    let msg = composite_decode(&code, &state).unwrap();
    println!("m={} m'={} m1={}", msg.m, msg.m_prime, msg.m1);
    let next = composite_encode(&code, &state, 2).unwrap();
    println!("write m1=2: {state} -> {next}");
}
