//! Load every built-in code and print its properties and rate.

use womkit::catalog;

fn main() {
    for entry in catalog::load_catalog().expect("catalog is consistent") {
        let p = womkit::verify_wom(&entry.table).expect("catalog codes are valid");
        println!(
            "{:<18} {:<24} rate {:.4}  decodable={} synchronous={} laminar={} fixed-rate={}",
            entry.id,
            entry.params.to_string(),
            entry.params.wom_rate(),
            p.is_decodable,
            p.is_synchronous,
            p.is_laminar,
            p.is_fixed_rate
        );
    }
}
