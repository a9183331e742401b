//! Rate-loss comparison of counter cells against appended synchronous codes.

use womkit::rates::{preset_reports, write_csv};

fn main() {
    for name in ["tableV", "ternary"] {
        println!("# {name}");
        write_csv(&preset_reports(name).unwrap(), std::io::stdout()).unwrap();
    }
}
