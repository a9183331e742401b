//! Drive a table code through a full write sequence and read each state back.

use womkit::catalog;
use womkit::codec::{run_write_sequence, CodeBehavior};

fn main() {
    let code = catalog::entry("fig1_laminar").unwrap().table;
    let messages = [3, 1, 2, 1];
    let trace = run_write_sequence(&code, &messages).unwrap();
    for (g, (state, m)) in trace.iter().zip(messages).enumerate() {
        let generation = code.generation_of(state).unwrap();
        let decoded = code.decode(generation, state).unwrap();
        println!(
            "write {} message {m}: state {state} generation {generation} decodes to {decoded}",
            g + 1
        );
    }
}
