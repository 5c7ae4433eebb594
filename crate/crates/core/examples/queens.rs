//! N-queens at the four levels of the library, timed.
//!
//! Run with `cargo run --release --example queens -- 24`.

use glassfd::cli::{queens_median, queens_run, Level};
use glassfd::ranges::RangeConfig;
use glassfd::search::LabelOptions;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let first = queens_run(n, LabelOptions::first_fail(), Level::Kernel, RangeConfig::bits(1024), false).unwrap();
    println!("{n}-queens, first-fail: {:?}", first.solutions.first());
    for label in [LabelOptions::step(), LabelOptions::first_fail()] {
        for level in Level::ALL {
            let t = queens_median(n, label, level, RangeConfig::closed(), 3).unwrap();
            println!("{:>5} {:>7}: {:8.2} ms", label.mode_name(), level.name(), t.as_secs_f64() * 1e3);
        }
    }
}
