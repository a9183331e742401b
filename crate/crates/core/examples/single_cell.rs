//! Best single-cell synchronous codes for a few alphabet sizes.

use womkit::search::single_cell_assignment;

fn main() {
    for (q, t) in [(4, 2), (4, 3), (8, 3), (8, 5)] {
        let c = single_cell_assignment(q, t).unwrap();
        println!("q={q} t={t}: {} rate {:.4} levels {:?}", c.params(), c.rate(), c.levels);
    }
}
