//! Generation transforms: merging, splitting, prepending the all-zero
//! generation and re-splitting a merged generation with an extra class.

use womkit::compose::{merge_generations, prepend_zero_generation, split_generation};
use womkit::search::{greedy_laminar, reorganize_with_extra, SearchConfig};
use womkit::verify_wom;

fn main() {
    let cfg = SearchConfig::default();
    let g = greedy_laminar(4, 2, 6, &cfg).unwrap().code;
    println!("greedy:      {}", g.params());
    let merged = merge_generations(&g, 4, 6).unwrap();
    println!("merged 4..6: {}", merged.params());
    let r = reorganize_with_extra(&merged, 4, 3, 1, &cfg).unwrap();
    println!("reorganized: {} rate {:.4}", r.params(), r.params().wom_rate());
    let z = prepend_zero_generation(&r).unwrap();
    println!("zero first:  {}", z.params());
    let last = z.generation(5);
    let full = last.iter().position(|c| c.iter().any(|s| s.to_text() == "33")).unwrap() + 1;
    let rest: Vec<usize> = (1..=last.len()).filter(|&c| c != full).collect();
    let s = split_generation(&z, 5, &[rest, vec![full]]).unwrap();
    println!(
        "split gen 5: {} synchronous={}",
        s.params(),
        verify_wom(&s).unwrap().is_synchronous
    );
}
