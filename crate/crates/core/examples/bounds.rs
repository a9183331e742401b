//! Closed-form bound, min-cover bound B and the largest partition A for the
//! binary weight slices of length 6.

use womkit::search::{bound_b, bound_closed_form, max_partition, SearchConfig};

fn main() {
    let cfg = SearchConfig::default();
    let n = 6;
    for i in 1..=n as u32 {
        let b = bound_b(2, n, i, &cfg).unwrap();
        let a = max_partition(2, n, i, &cfg).unwrap();
        println!(
            "i={i} closed form {} B {} A {}{}",
            bound_closed_form(n as u64, i as u64),
            b.value().map_or_else(|| format!("{:?}", b.range()), |v| v.to_string()),
            a.partition.len(),
            if a.exact { "" } else { " (not proven)" }
        );
    }
}
