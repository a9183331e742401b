//! Explicit partition constructions checked by brute force.

use womkit::search::{
    build_prop_circular, build_prop_doubling, build_prop_qary_even, build_prop_recursive, build_singletons,
    max_partition, Partition, SearchConfig,
};

fn main() {
    let mut p = Partition {
        q: 2,
        n: 1,
        i: 2,
        classes: vec![],
    };
    for _ in 0..4 {
        p = build_prop_doubling(&p).unwrap();
        p.verify().unwrap();
        println!("doubling: E(n={},2) has {} classes", p.n, p.len());
    }

    let cfg = SearchConfig::default();
    let y = max_partition(2, 4, 2, &cfg).unwrap().partition;
    let z = build_singletons(2, 4);
    let r = build_prop_recursive(2, 5, 2, &[y, z]).unwrap();
    r.verify().unwrap();
    println!("recursion: E(5,2) has {} classes", r.len());

    let even = build_prop_qary_even(
        3,
        &build_prop_doubling(
            &build_prop_doubling(&Partition {
                q: 2,
                n: 1,
                i: 2,
                classes: vec![],
            })
            .unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    even.verify().unwrap();
    println!("q=3 doubling plus 2e_k: E_3(4,2) has {} classes", even.len());

    let circ = build_prop_circular(3, 3).unwrap();
    circ.verify().unwrap();
    println!("circular: E_3(7,2) has {} classes", circ.len());
}
