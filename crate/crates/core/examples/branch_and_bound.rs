//! Minimization by branch-and-bound with restart.

use glassfd::model::{Expr, Model};
use glassfd::ranges::RangeConfig;
use glassfd::search::{minimize_labeling, LabelOptions};

fn main() {
    let mut m = Model::new(RangeConfig::closed());
    let x = m.new_var_in("x", 0, 9).unwrap();
    let y = m.new_var_in("y", 0, 9).unwrap();
    let z = m.new_var_in("z", 0, 9).unwrap();
    m.post_rel(&(x + y + z).eq(15)).unwrap();
    m.post_rel(&Expr::from(x).ne(y)).unwrap();

    let cost = Expr::from(x) * 3 + Expr::from(y) * 2 - z;
    let (obj, offset) = m.objective_term(&cost).unwrap();
    let vars = m.terms(&[x, y, z]);
    let best = minimize_labeling(m.store_mut(), LabelOptions::step(), &vars, obj)
        .unwrap()
        .expect("feasible");
    println!(
        "minimum of 3x + 2y - z is {} at {} after {} improving solutions",
        best.objective - offset,
        best.solution,
        best.restarts
    );
}
