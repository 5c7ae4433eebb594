//! Defining, compiling and posting an indexical constraint.

use glassfd::fdvar::{FdTerm, VarStore};
use glassfd::indexicals::{parse_indexical, post_indexical, CompiledConstraint};
use glassfd::ranges::RangeConfig;

const SOURCE: &str = "
    'x=y+c'(X, Y, C) +:
        X in min(Y)+c(C) .. max(Y)+c(C),
        Y in min(X)-c(C) .. max(X)-c(C).
";

fn main() {
    let def = parse_indexical(SOURCE).unwrap();
    println!("parsed: {def}");
    let compiled = CompiledConstraint::compile(def);
    for rule in compiled.rules() {
        println!("rule for {:?}: {} ops, wakes on {:?}", rule.target, rule.program.len(), rule.subscriptions);
    }

    let mut store = VarStore::new(RangeConfig::closed());
    let x = store.new_var_in(0, 20).unwrap();
    let y = store.new_var_in(5, 8).unwrap();
    post_indexical(&compiled, &mut store, &[x, y, FdTerm::Int(10)]).unwrap();
    println!("x = {}, y = {}", store.get_range(x), store.get_range(y));
    store.tell_interval(x, glassfd::ranges::Bound::Finite(17), glassfd::ranges::Bound::PosInf).unwrap();
    println!("after x >= 17: x = {}, y = {}", store.get_range(x), store.get_range(y));
}
