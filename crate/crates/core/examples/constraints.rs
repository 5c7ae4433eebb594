//! The constraint library, in its indexical and kernel flavors.

use glassfd::constraints::{self, post_with, ConstraintId, Flavor};
use glassfd::fdvar::{FdTerm, VarStore};
use glassfd::ranges::RangeConfig;

fn main() {
    for id in ConstraintId::ALL {
        let kinds: Vec<&str> = [(id.has_indexical(), "indexical"), (id.has_kernel(), "kernel")]
            .iter()
            .filter(|(has, _)| *has)
            .map(|(_, name)| *name)
            .collect();
        println!("{id:<10} arity {} ({})", id.arity(), kinds.join(", "));
    }

    let mut store = VarStore::new(RangeConfig::closed());
    let a = store.new_var_in(0, 10).unwrap();
    let b = store.new_var_in(0, 10).unwrap();
    let c = store.new_var_in(3, 4).unwrap();
    constraints::post(&mut store, ConstraintId::PlusEq, &[a, b, c]).unwrap();
    constraints::post(&mut store, ConstraintId::LeT, &[a, FdTerm::Int(5)]).unwrap();
    println!("a = b + c, a <= 5: a = {}, b = {}", store.get_range(a), store.get_range(b));

    let x = store.new_var_in(0, 6).unwrap();
    post_with(&mut store, ConstraintId::TimesEq, &[x, FdTerm::Int(3), b], Flavor::Kernel).unwrap();
    println!("x = 3 * b: x = {}, b = {}", store.get_range(x), store.get_range(b));
}
