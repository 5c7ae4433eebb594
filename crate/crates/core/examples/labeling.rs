//! Depth-first labeling with the step and first-fail strategies.

use glassfd::constraints::{post, ConstraintId};
use glassfd::fdvar::{FdTerm, VarStore};
use glassfd::ranges::RangeConfig;
use glassfd::search::{labeling, LabelOptions};

fn main() {
    for opts in [LabelOptions::step(), LabelOptions::first_fail()] {
        let mut store = VarStore::new(RangeConfig::bits(64));
        let x = store.new_var_in(1, 6).unwrap();
        let y = store.new_var_in(1, 3).unwrap();
        let z = store.new_var_in(1, 6).unwrap();
        post(&mut store, ConstraintId::PlusEq, &[x, y, z]).unwrap();
        post(&mut store, ConstraintId::NeqOffset, &[z, y, FdTerm::Int(1)]).unwrap();

        let mut search = labeling(&mut store, opts, &[x, y, z]);
        let solutions: Vec<String> = search.by_ref().map(|s| s.unwrap().to_string()).collect();
        println!("{}: {}", opts.mode_name(), solutions.join(" "));
        println!("  {:?}", search.stats());
    }
}
