//! Greedy laminar codes with one wit written per generation.

use womkit::search::{greedy_laminar, SearchConfig};

fn main() {
    let cfg = SearchConfig::default();
    for n in 2..=6 {
        let g = greedy_laminar(2, n, n, &cfg).unwrap();
        let p = g.code.params();
        println!(
            "{p} rate {:.4}{}",
            p.wom_rate(),
            if g.exact.iter().all(|&e| e) { "" } else { " (heuristic)" }
        );
    }
    let q4 = greedy_laminar(4, 2, 6, &cfg).unwrap();
    println!("{}", q4.code.params());
}
