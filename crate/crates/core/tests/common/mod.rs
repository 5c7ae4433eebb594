//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use glassfd::model::{Expr, ModelVar, Rel, RelOp};
use glassfd::ranges::{Bound, Cardinality, Range, RangeConfig};
use rand::Rng;

/// Values in `[-WINDOW, WINDOW]` are tracked explicitly by [`SetOracle`].
pub const WINDOW: i64 = 400;

/// The three representations, all with universe `[0, 63]`.
pub fn configs() -> [RangeConfig; 3] {
    [
        RangeConfig::closed().with_universe(0, 63).unwrap(),
        RangeConfig::open(),
        RangeConfig::bits(64),
    ]
}

/// A set of integers: explicit members inside the window, plus flags for
/// "every integer below the window" and "every integer above it".
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetOracle {
    pub values: BTreeSet<i64>,
    pub below: bool,
    pub above: bool,
}

impl SetOracle {
    pub fn of(values: impl IntoIterator<Item = i64>) -> Self {
        let values: BTreeSet<i64> = values.into_iter().collect();
        assert!(values.iter().all(|v| v.abs() <= WINDOW));
        SetOracle {
            values,
            below: false,
            above: false,
        }
    }

    pub fn from_mask(mask: u64) -> Self {
        Self::of((0..64).filter(|i| mask >> i & 1 == 1))
    }

    /// `lo..hi` with `None` meaning unbounded.
    pub fn interval(lo: Option<i64>, hi: Option<i64>) -> Self {
        let lo_w = lo.unwrap_or(-WINDOW).max(-WINDOW);
        let hi_w = hi.unwrap_or(WINDOW).min(WINDOW);
        SetOracle {
            values: (lo_w..=hi_w).collect(),
            below: lo.is_none() && hi.is_none_or(|h| h >= -WINDOW),
            above: hi.is_none() && lo.is_none_or(|l| l <= WINDOW),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty() && !self.below && !self.above
    }

    pub fn is_finite(&self) -> bool {
        !self.below && !self.above
    }

    pub fn contains(&self, v: i64) -> bool {
        if v < -WINDOW {
            self.below
        } else if v > WINDOW {
            self.above
        } else {
            self.values.contains(&v)
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        SetOracle {
            values: self.values.union(&o.values).copied().collect(),
            below: self.below || o.below,
            above: self.above || o.above,
        }
    }

    pub fn intersect(&self, o: &Self) -> Self {
        SetOracle {
            values: self.values.intersection(&o.values).copied().collect(),
            below: self.below && o.below,
            above: self.above && o.above,
        }
    }

    /// Complement relative to `lo..hi` (both inside the window).
    pub fn complement_within(&self, lo: i64, hi: i64) -> Self {
        Self::of((lo..=hi).filter(|v| !self.contains(*v)))
    }

    /// Complement over all integers.
    pub fn complement(&self) -> Self {
        SetOracle {
            values: (-WINDOW..=WINDOW).filter(|v| !self.values.contains(v)).collect(),
            below: !self.below,
            above: !self.above,
        }
    }

    pub fn remove(&self, v: i64) -> Self {
        let mut out = self.clone();
        out.values.remove(&v);
        out
    }

    pub fn map(&self, f: impl Fn(i64) -> i64) -> Self {
        assert!(self.is_finite());
        Self::of(self.values.iter().map(|&v| f(v)))
    }

    pub fn clip(&self, lo: i64, hi: i64) -> Self {
        Self::of((lo..=hi).filter(|v| self.contains(*v)))
    }

    pub fn min(&self) -> Bound {
        if self.below {
            Bound::NegInf
        } else if let Some(&v) = self.values.first() {
            Bound::Finite(v)
        } else {
            Bound::PosInf
        }
    }

    pub fn max(&self) -> Bound {
        if self.above {
            Bound::PosInf
        } else if let Some(&v) = self.values.last() {
            Bound::Finite(v)
        } else {
            Bound::NegInf
        }
    }

    pub fn size(&self) -> Cardinality {
        if self.is_finite() {
            Cardinality::Finite(self.values.len() as u64)
        } else {
            Cardinality::Infinite
        }
    }
}

/// Checks that `r` denotes the same set as `o` and is normalized.
pub fn same_set(r: &Range, o: &SetOracle) -> Result<(), String> {
    if !r.is_normalized() {
        return Err(format!("{r} is not normalized"));
    }
    if r.min() != o.min() || r.max() != o.max() {
        return Err(format!("{r}: bounds differ from oracle {:?}..{:?}", o.min(), o.max()));
    }
    for v in -WINDOW..=WINDOW {
        if r.contains(v) != o.contains(v) {
            return Err(format!("{r}: membership of {v} differs from oracle"));
        }
    }
    Ok(())
}

/// Compares an optional range result against an oracle that may be empty.
pub fn same_result(r: Option<&Range>, o: &SetOracle) -> Result<(), String> {
    match (r, o.is_empty()) {
        (None, true) => Ok(()),
        (None, false) => Err("failure where the oracle is non-empty".into()),
        (Some(r), true) => Err(format!("{r} where the oracle is empty")),
        (Some(r), false) => same_set(r, o),
    }
}

/// A random non-empty subset of `[0, 63]` with a random shape.
pub fn random_mask(rng: &mut impl Rng) -> u64 {
    loop {
        let mask = match rng.gen_range(0..6) {
            0 => 1u64 << rng.gen_range(0..64),
            1 => {
                let lo = rng.gen_range(0..64);
                let hi = rng.gen_range(lo..64);
                (lo..=hi).fold(0, |m, i| m | 1 << i)
            }
            2 => rng.gen::<u64>() & rng.gen::<u64>() & rng.gen::<u64>(),
            3 => rng.gen::<u64>() | rng.gen::<u64>(),
            4 => {
                let (a, b) = (rng.gen_range(0..64), rng.gen_range(0..64));
                1u64 << a | 1 << b
            }
            _ => rng.gen(),
        };
        if mask != 0 {
            return mask;
        }
    }
}

/// Builds the range of a finite oracle set.
pub fn range_of(cfg: &RangeConfig, o: &SetOracle) -> Range {
    assert!(o.is_finite());
    cfg.from_values(o.values.iter().copied()).expect("non-empty")
}

/// Ground relation of a library constraint, by name.
pub fn relation(name: &str, a: &[i64]) -> bool {
    match name {
        "a=b" | "a=t" => a[0] == a[1],
        "a<>b" | "a<>t" => a[0] != a[1],
        "a<>b+t" => a[0] != a[1] + a[2],
        "a=b+c" | "a=b+t" => a[0] == a[1] + a[2],
        "a+b<>c" => a[0] + a[1] != a[2],
        "a<b" | "a<t" => a[0] < a[1],
        "a<=b" | "a<=t" => a[0] <= a[1],
        "a>t" => a[0] > a[1],
        "a>=t" => a[0] >= a[1],
        "a=t*b" => a[0] == a[1] * a[2],
        other => panic!("no oracle for constraint {other}"),
    }
}

/// Every tuple of `doms`, in lexicographic order.
pub fn tuples(doms: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in doms {
        out = out
            .into_iter()
            .flat_map(|t| {
                (lo..=hi).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// All n-queens solutions (row of each column, 1-based) in lexicographic
/// order, by filtering every permutation.
pub fn queens_solutions(n: usize) -> Vec<Vec<i64>> {
    fn perms(prefix: &mut Vec<i64>, used: &mut Vec<bool>, n: usize, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            let ok = (0..n).all(|a| {
                (a + 1..n).all(|b| (prefix[a] - prefix[b]).abs() != (b - a) as i64)
            });
            if ok {
                out.push(prefix.clone());
            }
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                prefix.push(v as i64);
                perms(prefix, used, n, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    perms(&mut Vec::new(), &mut vec![false; n + 1], n, &mut out);
    out
}

/// Value of `e` with model variable `k` set to `vals[k]`.
pub fn eval(e: &Expr, vals: &[i64]) -> i64 {
    match e {
        Expr::Var(v) => vals[v.index()],
        Expr::Int(n) => *n,
        Expr::Add(a, b) => eval(a, vals) + eval(b, vals),
        Expr::Sub(a, b) => eval(a, vals) - eval(b, vals),
        Expr::Mul(a, b) => eval(a, vals) * eval(b, vals),
        Expr::Sum(items) => items.iter().map(|x| eval(x, vals)).sum(),
    }
}

pub fn holds(r: &Rel, vals: &[i64]) -> bool {
    let (a, b) = (eval(&r.lhs, vals), eval(&r.rhs, vals));
    match r.op {
        RelOp::Eq => a == b,
        RelOp::Ne => a != b,
        RelOp::Lt => a < b,
        RelOp::Le => a <= b,
        RelOp::Gt => a > b,
        RelOp::Ge => a >= b,
    }
}

/// A random linear expression over `vars`.
pub fn random_expr(rng: &mut impl Rng, vars: &[ModelVar], depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen_bool(0.75) {
            Expr::Var(vars[rng.gen_range(0..vars.len())])
        } else {
            Expr::Int(rng.gen_range(-5..=5))
        };
    }
    let sub = |rng: &mut _| random_expr(rng, vars, depth - 1);
    match rng.gen_range(0..4) {
        0 => Expr::Add(Box::new(sub(rng)), Box::new(sub(rng))),
        1 => Expr::Sub(Box::new(sub(rng)), Box::new(sub(rng))),
        2 => {
            let c = Expr::Int(rng.gen_range(-3..=3));
            let e = sub(rng);
            if rng.gen() {
                Expr::Mul(Box::new(c), Box::new(e))
            } else {
                Expr::Mul(Box::new(e), Box::new(c))
            }
        }
        _ => {
            let n = rng.gen_range(1..=3);
            Expr::Sum((0..n).map(|_| sub(rng)).collect())
        }
    }
}

pub fn random_rel(rng: &mut impl Rng, vars: &[ModelVar]) -> Rel {
    let op = RelOp::ALL[rng.gen_range(0..RelOp::ALL.len())];
    Rel::new(op, random_expr(rng, vars, 2), random_expr(rng, vars, 2))
}

/// Random sub-interval of `lo..hi`.
pub fn random_domain(rng: &mut impl Rng, lo: i64, hi: i64) -> (i64, i64) {
    let a = rng.gen_range(lo..=hi);
    let b = rng.gen_range(lo..=hi);
    (a.min(b), a.max(b))
}
