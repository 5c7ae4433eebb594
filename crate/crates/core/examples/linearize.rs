//! How relations are decomposed into ternary library constraints.

use glassfd::model::{linearize, Expr, Model};
use glassfd::ranges::RangeConfig;
use glassfd::search::{labeling, LabelOptions};

fn main() {
    let mut m = Model::new(RangeConfig::closed());
    let v: Vec<_> = ["a", "b", "c", "d", "e"]
        .iter()
        .map(|n| m.new_var_in(*n, 0, 4).unwrap())
        .collect();

    let rels = [
        Expr::from(v[0]).eq(Expr::sum(v[1..].iter().map(|&x| x.into()))),
        (v[0] + 2).ne(v[1]),
        (Expr::from(v[2]) * 3).le(v[3] - v[4] + 1),
    ];
    for r in &rels {
        let lin = linearize(r).unwrap();
        println!("{r}");
        for p in &lin.posts {
            println!("    {p}");
        }
        m.post_rel(r).unwrap();
    }

    let terms = m.terms(&v);
    let count = labeling(m.store_mut(), LabelOptions::first_fail(), &terms).count();
    println!("{count} solutions, {:?}", m.stats());
}
