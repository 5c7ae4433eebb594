//! The built-in constraint library.
//!
//! Constraint names follow one convention: `a`, `b`, `c` are FD terms and
//! `t` is an integer fixed at post time, so `'a<>b+t'(X, Y, 2)` states
//! `X != Y + 2`. Most members are written as indexicals in
//! `library.idx`; a few also have a kernel variant that works directly on
//! the val chain with `prune`, and `'a=t*b'` exists only as kernel code
//! because the indexical language has no division.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{ContractError, Fail, FdResult};
use crate::fdvar::{FdTerm, VarStore};
use crate::indexicals::{parse_indexicals, post_indexical, CompiledConstraint};
use crate::propagation::ChainType;
use crate::ranges::Bound;

/// Indexical source of the library.
pub const LIBRARY_SOURCE: &str = include_str!("library.idx");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintId {
    /// `a = b`, domain consistent.
    Eq,
    /// `a = t`.
    EqT,
    /// `a != b`, woken when either side is fixed.
    Neq,
    /// `a != t`.
    NeqT,
    /// `a != b + t`.
    NeqOffset,
    /// `a = b + c`, bounds consistent.
    PlusEq,
    /// `a = b + t`, domain consistent.
    PlusEqT,
    /// `a + b != c`.
    PlusNeq,
    Lt,
    Le,
    LtT,
    LeT,
    GtT,
    GeT,
    /// `a = t * b`.
    TimesEq,
}

/// How a constraint is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Flavor {
    /// Compiled from the indexical library.
    #[default]
    Indexical,
    /// Hand-written propagators on the kernel chains.
    Kernel,
}

impl ConstraintId {
    pub const ALL: [ConstraintId; 15] = [
        ConstraintId::Eq,
        ConstraintId::EqT,
        ConstraintId::Neq,
        ConstraintId::NeqT,
        ConstraintId::NeqOffset,
        ConstraintId::PlusEq,
        ConstraintId::PlusEqT,
        ConstraintId::PlusNeq,
        ConstraintId::Lt,
        ConstraintId::Le,
        ConstraintId::LtT,
        ConstraintId::LeT,
        ConstraintId::GtT,
        ConstraintId::GeT,
        ConstraintId::TimesEq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstraintId::Eq => "a=b",
            ConstraintId::EqT => "a=t",
            ConstraintId::Neq => "a<>b",
            ConstraintId::NeqT => "a<>t",
            ConstraintId::NeqOffset => "a<>b+t",
            ConstraintId::PlusEq => "a=b+c",
            ConstraintId::PlusEqT => "a=b+t",
            ConstraintId::PlusNeq => "a+b<>c",
            ConstraintId::Lt => "a<b",
            ConstraintId::Le => "a<=b",
            ConstraintId::LtT => "a<t",
            ConstraintId::LeT => "a<=t",
            ConstraintId::GtT => "a>t",
            ConstraintId::GeT => "a>=t",
            ConstraintId::TimesEq => "a=t*b",
        }
    }

    pub fn from_name(name: &str) -> Option<ConstraintId> {
        ConstraintId::ALL.into_iter().find(|c| c.name() == name)
    }

    /// For each argument, whether it must be an integer.
    pub fn signature(self) -> &'static [bool] {
        match self {
            ConstraintId::Eq | ConstraintId::Neq | ConstraintId::Lt | ConstraintId::Le => &[false, false],
            ConstraintId::EqT
            | ConstraintId::NeqT
            | ConstraintId::LtT
            | ConstraintId::LeT
            | ConstraintId::GtT
            | ConstraintId::GeT => &[false, true],
            ConstraintId::NeqOffset | ConstraintId::PlusEqT => &[false, false, true],
            ConstraintId::PlusEq | ConstraintId::PlusNeq => &[false, false, false],
            ConstraintId::TimesEq => &[false, true, false],
        }
    }

    pub fn arity(self) -> usize {
        self.signature().len()
    }

    /// The ground relation the constraint stands for.
    pub fn holds(self, args: &[i64]) -> bool {
        let a = |i: usize| args[i] as i128;
        match self {
            ConstraintId::Eq | ConstraintId::EqT => a(0) == a(1),
            ConstraintId::Neq | ConstraintId::NeqT => a(0) != a(1),
            ConstraintId::NeqOffset => a(0) != a(1) + a(2),
            ConstraintId::PlusEq => a(0) == a(1) + a(2),
            ConstraintId::PlusEqT => a(0) == a(1) + a(2),
            ConstraintId::PlusNeq => a(0) + a(1) != a(2),
            ConstraintId::Lt | ConstraintId::LtT => a(0) < a(1),
            ConstraintId::Le | ConstraintId::LeT => a(0) <= a(1),
            ConstraintId::GtT => a(0) > a(1),
            ConstraintId::GeT => a(0) >= a(1),
            ConstraintId::TimesEq => a(0) == a(1) * a(2),
        }
    }

    pub fn has_indexical(self) -> bool {
        self != ConstraintId::TimesEq
    }

    pub fn has_kernel(self) -> bool {
        matches!(
            self,
            ConstraintId::Neq | ConstraintId::NeqT | ConstraintId::NeqOffset | ConstraintId::TimesEq
        )
    }

    /// The flavor used when none is requested.
    pub fn default_flavor(self) -> Flavor {
        if self.has_indexical() {
            Flavor::Indexical
        } else {
            Flavor::Kernel
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "'{}'", self.name())
    }
}

/// The library definitions, compiled on first use.
pub fn library() -> &'static [Arc<CompiledConstraint>] {
    static LIB: OnceLock<Vec<Arc<CompiledConstraint>>> = OnceLock::new();
    LIB.get_or_init(|| {
        parse_indexicals(LIBRARY_SOURCE)
            .expect("library source parses")
            .into_iter()
            .map(CompiledConstraint::compile)
            .collect()
    })
}

/// The compiled definition of `id`, if it has one.
pub fn compiled(id: ConstraintId) -> Option<&'static Arc<CompiledConstraint>> {
    library().iter().find(|c| c.name() == id.name())
}

fn check_args(id: ConstraintId, args: &[FdTerm]) -> Result<(), ContractError> {
    let sig = id.signature();
    if args.len() != sig.len() {
        return Err(ContractError::Arity {
            name: id.name().to_string(),
            expected: sig.len(),
            got: args.len(),
        });
    }
    for (index, (&int, arg)) in sig.iter().zip(args).enumerate() {
        if int && !matches!(arg, FdTerm::Int(_)) {
            return Err(ContractError::ExpectedInteger {
                name: id.name().to_string(),
                index,
            });
        }
    }
    Ok(())
}

/// Posts `id` with its default flavor.
pub fn post(store: &mut VarStore, id: ConstraintId, args: &[FdTerm]) -> FdResult {
    post_with(store, id, args, id.default_flavor())
}

/// Posts `id` with the requested implementation.
pub fn post_with(store: &mut VarStore, id: ConstraintId, args: &[FdTerm], flavor: Flavor) -> FdResult {
    check_args(id, args)?;
    let int = |i: usize| match args[i] {
        FdTerm::Int(n) => n,
        FdTerm::Var(_) => unreachable!("checked by signature"),
    };
    match flavor {
        Flavor::Indexical => match compiled(id) {
            Some(c) => post_indexical(c, store, args),
            None => Err(ContractError::Unsupported(format!("{id} has no indexical definition")).into()),
        },
        Flavor::Kernel => match id {
            ConstraintId::Neq => kernel::neq_offset(store, args[0], args[1], 0),
            ConstraintId::NeqOffset => kernel::neq_offset(store, args[0], args[1], int(2)),
            ConstraintId::NeqT => store.prune(args[0], int(1)),
            ConstraintId::TimesEq => kernel::times_eq(store, args[0], int(1), args[2]),
            _ => Err(ContractError::Unsupported(format!("{id} has no kernel variant")).into()),
        },
    }
}

/// Restricts every term to `lo..hi`.
pub fn post_domain(store: &mut VarStore, vars: &[FdTerm], lo: i64, hi: i64) -> FdResult {
    let r = store.config().int_interval(lo, hi).ok_or(Fail::Inconsistent)?;
    for &v in vars {
        store.tell_range(v, &r)?;
    }
    Ok(())
}

/// `a = b`.
pub fn post_eq_vv(store: &mut VarStore, a: FdTerm, b: FdTerm) -> FdResult {
    post(store, ConstraintId::Eq, &[a, b])
}

/// `a = n`.
pub fn post_eq_vt(store: &mut VarStore, a: FdTerm, n: i64) -> FdResult {
    post(store, ConstraintId::EqT, &[a, FdTerm::Int(n)])
}

/// `a != b`.
pub fn post_neq_vv(store: &mut VarStore, a: FdTerm, b: FdTerm) -> FdResult {
    post(store, ConstraintId::Neq, &[a, b])
}

/// `a != n`.
pub fn post_neq_vt(store: &mut VarStore, a: FdTerm, n: i64) -> FdResult {
    post(store, ConstraintId::NeqT, &[a, FdTerm::Int(n)])
}

/// `a != b + n`.
pub fn post_neq_v_vt(store: &mut VarStore, a: FdTerm, b: FdTerm, n: i64) -> FdResult {
    post(store, ConstraintId::NeqOffset, &[a, b, FdTerm::Int(n)])
}

/// `a = b + c`.
pub fn post_plus_eq(store: &mut VarStore, a: FdTerm, b: FdTerm, c: FdTerm) -> FdResult {
    post(store, ConstraintId::PlusEq, &[a, b, c])
}

/// `a = b + n`.
pub fn post_plus_eq_t(store: &mut VarStore, a: FdTerm, b: FdTerm, n: i64) -> FdResult {
    post(store, ConstraintId::PlusEqT, &[a, b, FdTerm::Int(n)])
}

/// `a + b != c`.
pub fn post_plus_neq(store: &mut VarStore, a: FdTerm, b: FdTerm, c: FdTerm) -> FdResult {
    post(store, ConstraintId::PlusNeq, &[a, b, c])
}

/// `a < b`.
pub fn post_lt(store: &mut VarStore, a: FdTerm, b: FdTerm) -> FdResult {
    post(store, ConstraintId::Lt, &[a, b])
}

/// `a <= b`.
pub fn post_le(store: &mut VarStore, a: FdTerm, b: FdTerm) -> FdResult {
    post(store, ConstraintId::Le, &[a, b])
}

/// `a < n`.
pub fn post_lt_t(store: &mut VarStore, a: FdTerm, n: i64) -> FdResult {
    post(store, ConstraintId::LtT, &[a, FdTerm::Int(n)])
}

/// `a <= n`.
pub fn post_le_t(store: &mut VarStore, a: FdTerm, n: i64) -> FdResult {
    post(store, ConstraintId::LeT, &[a, FdTerm::Int(n)])
}

/// `a > n`.
pub fn post_gt_t(store: &mut VarStore, a: FdTerm, n: i64) -> FdResult {
    post(store, ConstraintId::GtT, &[a, FdTerm::Int(n)])
}

/// `a >= n`.
pub fn post_ge_t(store: &mut VarStore, a: FdTerm, n: i64) -> FdResult {
    post(store, ConstraintId::GeT, &[a, FdTerm::Int(n)])
}

/// `a = n * b`.
pub fn post_times_eq(store: &mut VarStore, a: FdTerm, n: i64, b: FdTerm) -> FdResult {
    post(store, ConstraintId::TimesEq, &[a, FdTerm::Int(n), b])
}

/// Propagators written directly against the kernel.
pub mod kernel {
    use super::*;

    /// `a != b + n`: when one side is fixed, prune the matching value from
    /// the other.
    pub fn neq_offset(store: &mut VarStore, a: FdTerm, b: FdTerm, n: i64) -> FdResult {
        store.watch(b, ChainType::Val, move |s: &mut VarStore| {
            let vb = s.integerize(b)?;
            s.prune(a, vb + n)
        });
        store.watch(a, ChainType::Val, move |s: &mut VarStore| {
            let va = s.integerize(a)?;
            s.prune(b, va - n)
        });
        if let Some(vb) = store.value(b) {
            store.prune(a, vb + n)?;
        }
        if let Some(va) = store.value(a) {
            store.prune(b, va - n)?;
        }
        Ok(())
    }

    fn div_floor(a: i64, b: i64) -> i64 {
        let q = a / b;
        if a % b != 0 && (a < 0) != (b < 0) {
            q - 1
        } else {
            q
        }
    }

    fn div_ceil(a: i64, b: i64) -> i64 {
        let q = a / b;
        if a % b != 0 && (a < 0) == (b < 0) {
            q + 1
        } else {
            q
        }
    }

    /// Bound of `{x / n}` for the bound `x`, rounded with `round`.
    fn div_bound(x: Bound, n: i64, round: fn(i64, i64) -> i64) -> Bound {
        match x {
            Bound::Finite(v) => Bound::Finite(round(v, n)),
            Bound::NegInf if n > 0 => Bound::NegInf,
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf if n > 0 => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
        }
    }

    fn times_from_b(s: &mut VarStore, a: FdTerm, n: i64, b: FdTerm) -> FdResult {
        let r = s.get_range(b).pointwise_mul(n).ok_or(Fail::Inconsistent)?;
        s.tell_range(a, &r)
    }

    fn times_from_a(s: &mut VarStore, a: FdTerm, n: i64, b: FdTerm) -> FdResult {
        let (lo, hi) = (s.min(a), s.max(a));
        let (lo, hi) = if n > 0 {
            (div_bound(lo, n, div_ceil), div_bound(hi, n, div_floor))
        } else {
            (div_bound(hi, n, div_ceil), div_bound(lo, n, div_floor))
        };
        s.tell_interval(b, lo, hi)
    }

    /// `a = n * b`: the image of `dom(b)` bounds `a`, and the bounds of `a`
    /// divided by `n` bound `b`.
    pub fn times_eq(store: &mut VarStore, a: FdTerm, n: i64, b: FdTerm) -> FdResult {
        if n == 0 {
            return store.tell_value(a, 0);
        }
        store.watch(b, ChainType::Dom, move |s: &mut VarStore| times_from_b(s, a, n, b));
        store.watch(a, ChainType::Min, move |s: &mut VarStore| times_from_a(s, a, n, b));
        store.watch(a, ChainType::Max, move |s: &mut VarStore| times_from_a(s, a, n, b));
        times_from_b(store, a, n, b)?;
        times_from_a(store, a, n, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranges::RangeConfig;

    fn store() -> VarStore {
        VarStore::new(RangeConfig::closed())
    }

    #[test]
    fn every_indexical_member_is_in_the_library() {
        for id in ConstraintId::ALL {
            assert_eq!(compiled(id).is_some(), id.has_indexical(), "{id}");
            if let Some(c) = compiled(id) {
                assert_eq!(c.arity(), id.arity(), "{id}");
            }
        }
        assert_eq!(library().len(), ConstraintId::ALL.len() - 1);
    }

    #[test]
    fn domain_examples() {
        let mut s = store();
        let vs: Vec<_> = (0..4).map(|_| s.new_var()).collect();
        post_domain(&mut s, &vs, 1, 4).unwrap();
        assert!(vs.iter().all(|&v| s.get_range(v).to_string() == "{1..4}"));
        post_domain(&mut s, &[], 1, 4).unwrap();
        let v = s.new_var_in(10, 20).unwrap();
        assert_eq!(post_domain(&mut s, &[v], 1, 4), Err(Fail::Inconsistent));
    }

    #[test]
    fn eq_examples() {
        let mut s = store();
        let a = s.new_var_in(1, 5).unwrap();
        let b = s.new_var_in(3, 9).unwrap();
        post_eq_vv(&mut s, a, b).unwrap();
        assert_eq!(s.get_range(a).to_string(), "{3..5}");
        assert_eq!(s.get_range(b).to_string(), "{3..5}");

        let a = s.new_var_in(1, 2).unwrap();
        let b = s.new_var_in(5, 5).unwrap();
        assert_eq!(post_eq_vv(&mut s, a, b), Err(Fail::Inconsistent));

        let a = s.new_var_in(2, 2).unwrap();
        let b = s.new_var_in(2, 2).unwrap();
        post_eq_vv(&mut s, a, b).unwrap();
    }

    #[test]
    fn eq_t_examples() {
        let mut s = store();
        let a = s.new_var_in(1, 9).unwrap();
        let before = s.stats().executions_on(ChainType::Val);
        s.watch(a, ChainType::Val, |_| Ok(()));
        post_eq_vt(&mut s, a, 4).unwrap();
        assert_eq!(s.value(a), Some(4));
        assert_eq!(s.stats().executions_on(ChainType::Val), before + 1);

        let a = s.new_var_in(1, 3).unwrap();
        assert_eq!(post_eq_vt(&mut s, a, 7), Err(Fail::Inconsistent));
        post_eq_vt(&mut s, FdTerm::Int(7), 7).unwrap();
    }

    #[test]
    fn neq_examples() {
        for flavor in [Flavor::Indexical, Flavor::Kernel] {
            let mut s = store();
            let a = s.new_var_in(1, 2).unwrap();
            let b = s.new_var_in(1, 9).unwrap();
            post_with(&mut s, ConstraintId::Neq, &[a, b], flavor).unwrap();
            s.tell_value(b, 2).unwrap();
            assert_eq!(s.value(a), Some(1));

            let a = s.new_var_in(1, 9).unwrap();
            let b = s.new_var_in(1, 9).unwrap();
            post_with(&mut s, ConstraintId::NeqOffset, &[a, b, FdTerm::Int(1)], flavor).unwrap();
            s.tell_value(b, 4).unwrap();
            assert_eq!(s.get_range(a).to_string(), "{1..4, 6..9}");

            let a = s.new_var_in(3, 3).unwrap();
            let b = s.new_var_in(3, 3).unwrap();
            assert_eq!(
                post_with(&mut s, ConstraintId::Neq, &[a, b], flavor),
                Err(Fail::Inconsistent)
            );
        }
    }

    #[test]
    fn plus_eq_examples() {
        let mut s = store();
        let a = s.new_var_in(1, 100).unwrap();
        let b = s.new_var_in(1, 2).unwrap();
        let c = s.new_var_in(3, 4).unwrap();
        post_plus_eq(&mut s, a, b, c).unwrap();
        assert_eq!(s.get_range(a).to_string(), "{4..6}");

        let a = s.new_var_in(10, 10).unwrap();
        let b = s.new_var_in(1, 9).unwrap();
        let c = s.new_var_in(1, 9).unwrap();
        post_plus_eq(&mut s, a, b, c).unwrap();
        assert_eq!(s.get_range(b).to_string(), "{1..9}");
        assert_eq!(s.get_range(c).to_string(), "{1..9}");

        let a = s.new_var_in(2, 2).unwrap();
        let b = s.new_var_in(5, 9).unwrap();
        let c = s.new_var_in(5, 9).unwrap();
        assert_eq!(post_plus_eq(&mut s, a, b, c), Err(Fail::Inconsistent));
    }

    #[test]
    fn ordering_examples() {
        let mut s = store();
        let a = s.new_var_in(1, 9).unwrap();
        let b = s.new_var_in(1, 9).unwrap();
        post_lt(&mut s, a, b).unwrap();
        assert_eq!(s.get_range(a).to_string(), "{1..8}");
        assert_eq!(s.get_range(b).to_string(), "{2..9}");

        let a = s.new_var_in(1, 9).unwrap();
        post_lt_t(&mut s, a, 5).unwrap();
        assert_eq!(s.get_range(a).to_string(), "{1..4}");

        let a = s.new_var_in(7, 9).unwrap();
        let b = s.new_var_in(1, 3).unwrap();
        assert_eq!(post_lt(&mut s, a, b), Err(Fail::Inconsistent));
    }

    #[test]
    fn times_eq_narrows_both_sides() {
        let mut s = store();
        let a = s.new_var_in(0, 20).unwrap();
        let b = s.new_var_in(0, 9).unwrap();
        post_times_eq(&mut s, a, 3, b).unwrap();
        assert_eq!(s.get_range(a).to_string(), "{0, 3, 6, 9, 12, 15, 18}");
        assert_eq!(s.get_range(b).to_string(), "{0..6}");
        s.tell_interval(a, Bound::Finite(4), Bound::Finite(13)).unwrap();
        assert_eq!(s.get_range(b).to_string(), "{2..4}");
    }

    #[test]
    fn bad_arguments_are_contract_errors() {
        let mut s = store();
        let a = s.new_var();
        assert!(matches!(
            post(&mut s, ConstraintId::NeqOffset, &[a, a, a]),
            Err(Fail::Contract(ContractError::ExpectedInteger { index: 2, .. }))
        ));
        assert!(matches!(
            post(&mut s, ConstraintId::Eq, &[a]),
            Err(Fail::Contract(ContractError::Arity { .. }))
        ));
        assert!(matches!(
            post_with(&mut s, ConstraintId::Lt, &[a, a], Flavor::Kernel),
            Err(Fail::Contract(ContractError::Unsupported(_)))
        ));
    }

    #[test]
    fn names_round_trip() {
        for id in ConstraintId::ALL {
            assert_eq!(ConstraintId::from_name(id.name()), Some(id));
        }
    }
}
