//! Tell, prune, propagation chains and backtracking on the trail.

use glassfd::fdvar::VarStore;
use glassfd::propagation::ChainType;
use glassfd::ranges::RangeConfig;

fn main() {
    let mut store = VarStore::new(RangeConfig::closed());
    let x = store.new_var_in(1, 9).unwrap();
    let y = store.new_var_in(1, 9).unwrap();

    // x != y, written as two val-chain propagators.
    store.watch(x, ChainType::Val, move |s: &mut VarStore| {
        let v = s.integerize(x)?;
        s.prune(y, v)
    });
    store.watch(y, ChainType::Val, move |s: &mut VarStore| {
        let v = s.integerize(y)?;
        s.prune(x, v)
    });

    let m = store.mark();
    store.tell_value(x, 4).unwrap();
    println!("after x = 4: x = {}, y = {}", store.get_range(x), store.get_range(y));
    let r = store.tell_value(y, 4);
    println!("telling y = 4 now gives {r:?}");

    store.undo_to(m).unwrap();
    println!("after undo: x = {}, y = {}", store.get_range(x), store.get_range(y));

    let s = store.stats();
    println!(
        "tells {} (writes {}, no-ops {}, failures {}), prunes {}, val executions {}",
        s.tells,
        s.tell_writes,
        s.tell_noops,
        s.tell_failures,
        s.prunes,
        s.executions_on(ChainType::Val)
    );
}
