//! Repeatedly concatenate with the two-write outer code and exercise each
//! result with random write sequences.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use womkit::catalog;
use womkit::codec::{run_write_sequence, CodeBehavior};
use womkit::compose::iterate_construction;

fn main() {
    let base: Arc<dyn CodeBehavior> = Arc::new(catalog::entry("c2_writes2").unwrap().table);
    let outer: Arc<dyn CodeBehavior> = base.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..4 {
        let code = iterate_construction(base.clone(), outer.clone(), k).unwrap();
        let p = code.params().clone();
        for _ in 0..200 {
            let msgs: Vec<u64> = p.sizes().iter().map(|&m| rng.random_range(1..=m)).collect();
            run_write_sequence(code.as_ref(), &msgs).unwrap();
        }
        println!("{k} iterations: {p} rate {:.4}", p.wom_rate());
    }
}
