//! The three range representations side by side.

use glassfd::ranges::{Bound, RangeConfig};

fn main() {
    for cfg in [RangeConfig::closed(), RangeConfig::open(), RangeConfig::bits(64)] {
        let a = cfg.parse("{1..5, 9}").unwrap();
        let b = cfg.int_interval(4, 12).unwrap();
        println!("{} ranges", cfg.kind());
        println!("  a = {a}, b = {b}");
        println!("  a | b = {}", a.union(&b).unwrap());
        println!("  a & b = {}", a.intersect(&b).unwrap());
        println!("  -a = {}", cfg.complement(&a).unwrap());
        println!("  a * 3 = {}", a.pointwise_mul(3).unwrap());
        println!("  a + 60 = {:?}", a.pointwise_add(60).map(|r| r.to_string()));
        println!("  size(a) = {:?}, min = {}, max = {}", a.size(), a.min(), a.max());
        println!("  sup = {}", cfg.bound_const(glassfd::ranges::BoundConst::Sup));
        let half = cfg.interval(Bound::Finite(10), Bound::PosInf).unwrap();
        println!("  10..sup = {half}, size {:?}", half.size());
    }
}
