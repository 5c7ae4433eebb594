//! Immutable, never-empty integer sets with three interchangeable
//! representations.
//!
//! * [`RangeKind::Closed`]: sorted lists of closed integer intervals, always
//!   bounded (the default universe stands in for `inf`/`sup`).
//! * [`RangeKind::Open`]: the same lists with infinite endpoints allowed.
//! * [`RangeKind::Bits`]: word-array bitsets over `[0, U-1]`.
//!
//! Every operation that would produce the empty set returns `None` (or
//! [`Fail::Inconsistent`](crate::error::Fail::Inconsistent)) instead. Set-level operations live on [`Range`];
//! operations that need the universe (construction, complement, the `inf`
//! and `sup` constants) live on [`RangeConfig`].

mod bits;
mod bound;
mod interval_list;
mod text;

use std::fmt;

pub use bits::{active_bits, highest_set_bit, lowest_set_bit, BitRange};
pub use bound::{bound_add, bound_mul, bound_sub, Bound, Cardinality};
pub use interval_list::{Endpoint, IntervalList};
pub use text::ParseRangeError;

use crate::error::{ContractError, FdResult, OrFail};
#[cfg(test)]
use crate::error::Fail;

/// Default universe of the closed representation: `[0, 2^24 - 1]`.
pub const DEFAULT_CLOSED_UNIVERSE: (i64, i64) = (0, (1 << 24) - 1);
/// Default bitset universe size.
pub const DEFAULT_BITS_UNIVERSE: u32 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RangeKind {
    Closed,
    Open,
    Bits(u32),
}

impl RangeKind {
    pub fn name(self) -> &'static str {
        match self {
            RangeKind::Closed => "closed",
            RangeKind::Open => "open",
            RangeKind::Bits(_) => "bits",
        }
    }
}

impl fmt::Display for RangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The indexical constants `inf` and `sup`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundConst {
    Inf,
    Sup,
}

/// A non-empty set of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Range {
    Closed(IntervalList<i64>),
    Open(IntervalList<Bound>),
    Bits(BitRange),
}

/// Representation plus universe: everything needed to build ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RangeConfig {
    kind: RangeKind,
    lo: i64,
    hi: i64,
}

impl Default for RangeConfig {
    fn default() -> Self {
        Self::closed()
    }
}

impl RangeConfig {
    pub fn closed() -> Self {
        let (lo, hi) = DEFAULT_CLOSED_UNIVERSE;
        RangeConfig {
            kind: RangeKind::Closed,
            lo,
            hi,
        }
    }

    pub fn open() -> Self {
        RangeConfig {
            kind: RangeKind::Open,
            lo: i64::MIN,
            hi: i64::MAX,
        }
    }

    /// Bitsets over `[0, universe - 1]`.
    pub fn bits(universe: u32) -> Self {
        assert!(universe > 0, "bitset universe must be non-empty");
        RangeConfig {
            kind: RangeKind::Bits(universe),
            lo: 0,
            hi: universe as i64 - 1,
        }
    }

    pub fn for_kind(kind: RangeKind) -> Self {
        match kind {
            RangeKind::Closed => Self::closed(),
            RangeKind::Open => Self::open(),
            RangeKind::Bits(u) => Self::bits(u),
        }
    }

    /// Overrides the default universe.
    ///
    /// For the open kind this only affects the initial range of new
    /// variables; complement still works over all integers. Bitsets require
    /// `lo == 0` and use `hi + 1` as universe size.
    pub fn with_universe(self, lo: i64, hi: i64) -> Result<Self, String> {
        if lo > hi {
            return Err(format!("empty universe {lo}..{hi}"));
        }
        match self.kind {
            RangeKind::Bits(_) => {
                if lo != 0 {
                    return Err("bitset universes start at 0".into());
                }
                let size = u32::try_from(hi + 1).map_err(|_| "bitset universe too large")?;
                Ok(Self::bits(size))
            }
            kind => Ok(RangeConfig { kind, lo, hi }),
        }
    }

    pub fn kind(&self) -> RangeKind {
        self.kind
    }

    /// Universe bounds of the closed and bits kinds; for the open kind the
    /// configured initial range (all of `i64` unless overridden).
    pub fn universe(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    fn is_open_unbounded(&self) -> bool {
        self.kind == RangeKind::Open && self.lo == i64::MIN && self.hi == i64::MAX
    }

    /// Range given to a fresh variable.
    pub fn full(&self) -> Range {
        if self.is_open_unbounded() {
            return self.interval(Bound::NegInf, Bound::PosInf).expect("non-empty");
        }
        self.interval(Bound::Finite(self.lo), Bound::Finite(self.hi))
            .expect("universe is non-empty")
    }

    pub fn bound_const(&self, c: BoundConst) -> Bound {
        match (self.kind, c) {
            (RangeKind::Open, BoundConst::Inf) => Bound::NegInf,
            (RangeKind::Open, BoundConst::Sup) => Bound::PosInf,
            (_, BoundConst::Inf) => Bound::Finite(self.lo),
            (_, BoundConst::Sup) => Bound::Finite(self.hi),
        }
    }

    /// `{x : lo <= x <= hi}`. Closed ranges read infinite bounds as the
    /// universe limits; bitsets clip to the universe.
    pub fn interval(&self, lo: Bound, hi: Bound) -> Option<Range> {
        match self.kind {
            RangeKind::Open => IntervalList::interval(lo, hi).map(Range::Open),
            RangeKind::Closed => {
                let (lo, hi) = (self.clamp(lo), self.clamp(hi));
                IntervalList::interval(lo, hi).map(Range::Closed)
            }
            RangeKind::Bits(u) => {
                BitRange::interval(self.clamp(lo), self.clamp(hi), u).map(Range::Bits)
            }
        }
    }

    fn clamp(&self, b: Bound) -> i64 {
        match b {
            Bound::NegInf => self.lo,
            Bound::PosInf => self.hi,
            Bound::Finite(n) => n,
        }
    }

    pub fn int_interval(&self, lo: i64, hi: i64) -> Option<Range> {
        self.interval(Bound::Finite(lo), Bound::Finite(hi))
    }

    /// `{v}`; `None` for a bitset value outside the universe.
    pub fn singleton(&self, v: i64) -> Option<Range> {
        self.int_interval(v, v)
    }

    /// The set of the given values (bitsets drop out-of-universe values).
    pub fn from_values(&self, values: impl IntoIterator<Item = i64>) -> Option<Range> {
        match self.kind {
            RangeKind::Bits(u) => BitRange::from_values(values, u).map(Range::Bits),
            RangeKind::Closed => {
                IntervalList::from_intervals(values.into_iter().map(|v| (v, v)).collect())
                    .map(Range::Closed)
            }
            RangeKind::Open => IntervalList::from_intervals(
                values
                    .into_iter()
                    .map(|v| (Bound::Finite(v), Bound::Finite(v)))
                    .collect(),
            )
            .map(Range::Open),
        }
    }

    /// Complement over the integers (open) or over the universe.
    pub fn complement(&self, r: &Range) -> Option<Range> {
        match r {
            Range::Open(l) => l.complement_within(Bound::NegInf, Bound::PosInf).map(Range::Open),
            Range::Closed(l) => l.complement_within(self.lo, self.hi).map(Range::Closed),
            Range::Bits(b) => b.complement().map(Range::Bits),
        }
    }

    /// Parses the textual form, e.g. `{1..3, 5, 9..sup}`.
    pub fn parse(&self, text: &str) -> Result<Range, ParseRangeError> {
        text::parse(self, text)
    }
}

impl Range {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Range::Closed(_) => "closed",
            Range::Open(_) => "open",
            Range::Bits(_) => "bits",
        }
    }

    pub fn min(&self) -> Bound {
        match self {
            Range::Closed(l) => Bound::Finite(l.min()),
            Range::Open(l) => l.min(),
            Range::Bits(b) => Bound::Finite(b.min()),
        }
    }

    pub fn max(&self) -> Bound {
        match self {
            Range::Closed(l) => Bound::Finite(l.max()),
            Range::Open(l) => l.max(),
            Range::Bits(b) => Bound::Finite(b.max()),
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        match self {
            Range::Closed(l) => l.contains(v),
            Range::Open(l) => l.contains(Bound::Finite(v)),
            Range::Bits(b) => b.contains(v),
        }
    }

    pub fn is_singleton(&self) -> bool {
        match self {
            Range::Closed(l) => l.is_singleton(),
            Range::Open(l) => l.is_singleton(),
            Range::Bits(b) => b.is_singleton(),
        }
    }

    /// The value of a singleton range, if it is one.
    #[inline]
    pub fn singleton_value(&self) -> Option<i64> {
        match self {
            Range::Closed(l) => l.is_singleton().then(|| l.min()),
            Range::Open(l) => l.is_singleton().then(|| l.min()).and_then(Bound::finite),
            Range::Bits(b) => b.is_singleton().then(|| b.min()),
        }
    }

    pub fn singleton_to_bound(&self) -> Result<i64, ContractError> {
        self.singleton_value()
            .ok_or_else(|| ContractError::NotSingleton(self.to_string()))
    }

    pub fn size(&self) -> Cardinality {
        match self {
            Range::Closed(l) => l.size(),
            Range::Open(l) => l.size(),
            Range::Bits(b) => b.size(),
        }
    }

    pub fn union(&self, other: &Range) -> Result<Range, ContractError> {
        match (self, other) {
            (Range::Closed(a), Range::Closed(b)) => Ok(Range::Closed(a.union(b))),
            (Range::Open(a), Range::Open(b)) => Ok(Range::Open(a.union(b))),
            (Range::Bits(a), Range::Bits(b)) if a.universe() == b.universe() => {
                Ok(Range::Bits(a.union(b)))
            }
            _ => Err(ContractError::KindMismatch),
        }
    }

    pub fn intersect(&self, other: &Range) -> FdResult<Range> {
        match (self, other) {
            (Range::Closed(a), Range::Closed(b)) => a.intersect(b).map(Range::Closed).or_fail(),
            (Range::Open(a), Range::Open(b)) => a.intersect(b).map(Range::Open).or_fail(),
            (Range::Bits(a), Range::Bits(b)) if a.universe() == b.universe() => {
                a.intersect(b).map(Range::Bits).or_fail()
            }
            _ => Err(ContractError::KindMismatch.into()),
        }
    }

    /// `self \ {v}`.
    pub fn remove(&self, v: i64) -> Option<Range> {
        match self {
            Range::Closed(l) => l.remove(v).map(Range::Closed),
            Range::Open(l) => l.remove(Bound::Finite(v)).map(Range::Open),
            Range::Bits(b) => b.remove(v).map(Range::Bits),
        }
    }

    /// `{x + n}`. Bitsets drop elements leaving the universe.
    pub fn pointwise_add(&self, n: i64) -> Option<Range> {
        match self {
            Range::Closed(l) => Some(Range::Closed(l.add(n))),
            Range::Open(l) => Some(Range::Open(l.add(n))),
            Range::Bits(b) => b.add(n).map(Range::Bits),
        }
    }

    pub fn pointwise_sub(&self, n: i64) -> Option<Range> {
        self.pointwise_add(n.checked_neg()?)
    }

    /// `{x * n}`. Interval lists fall back to the interval hull for infinite
    /// or very wide intervals when `|n| > 1`.
    pub fn pointwise_mul(&self, n: i64) -> Option<Range> {
        match self {
            Range::Closed(l) => Some(Range::Closed(l.mul(n))),
            Range::Open(l) => Some(Range::Open(l.mul(n))),
            Range::Bits(b) => b.mul(n).map(Range::Bits),
        }
    }

    /// Smallest element `>= v`; `None` if there is none or it is `-inf`.
    pub fn first_at_least(&self, v: i64) -> Option<i64> {
        match self {
            Range::Closed(l) => l.first_at_least(v),
            Range::Open(l) => l.first_at_least(v).and_then(Bound::finite),
            Range::Bits(b) => b.first_at_least(v),
        }
    }

    /// Ascending enumeration of the elements.
    pub fn values(&self) -> Result<RangeValues<'_>, ContractError> {
        if self.size() == Cardinality::Infinite {
            return Err(ContractError::InfiniteRange(self.to_string()));
        }
        Ok(match self {
            Range::Closed(l) => RangeValues::List(ListValues::new(l.intervals())),
            Range::Open(l) => RangeValues::Open(ListValues::new(l.intervals())),
            Range::Bits(b) => RangeValues::Bits(b.iter()),
        })
    }

    pub fn get_domain(&self) -> Result<Vec<i64>, ContractError> {
        Ok(self.values()?.collect())
    }

    /// Checks the representation invariants.
    pub fn is_normalized(&self) -> bool {
        match self {
            Range::Closed(l) => l.is_normalized(),
            Range::Open(l) => l.is_normalized(),
            Range::Bits(b) => b.iter().next().is_some(),
        }
    }
}

pub struct ListValues<'a, E: Endpoint> {
    ivs: &'a [(E, E)],
    next: Option<i64>,
}

impl<'a, E: Endpoint> ListValues<'a, E> {
    fn new(ivs: &'a [(E, E)]) -> Self {
        ListValues {
            next: ivs.first().and_then(|iv| iv.0.to_bound().finite()),
            ivs,
        }
    }
}

impl<E: Endpoint> Iterator for ListValues<'_, E> {
    type Item = i64;

    fn next(&mut self) -> Option<i64> {
        let v = self.next?;
        let hi = self.ivs[0].1.to_bound().finite().expect("finite range");
        if v < hi {
            self.next = Some(v + 1);
        } else {
            self.ivs = &self.ivs[1..];
            self.next = self.ivs.first().and_then(|iv| iv.0.to_bound().finite());
        }
        Some(v)
    }
}

/// Iterator over the elements of a finite range, ascending.
pub enum RangeValues<'a> {
    List(ListValues<'a, i64>),
    Open(ListValues<'a, Bound>),
    Bits(bits::BitIter<'a>),
}

impl Iterator for RangeValues<'_> {
    type Item = i64;

    fn next(&mut self) -> Option<i64> {
        match self {
            RangeValues::List(it) => it.next(),
            RangeValues::Open(it) => it.next(),
            RangeValues::Bits(it) => it.next(),
        }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_ivs<E: Endpoint>(f: &mut fmt::Formatter<'_>, ivs: &[(E, E)]) -> fmt::Result {
            for (i, &(lo, hi)) in ivs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                if lo == hi {
                    write!(f, "{}", lo.to_bound())?;
                } else {
                    write!(f, "{}..{}", lo.to_bound(), hi.to_bound())?;
                }
            }
            Ok(())
        }
        f.write_str("{")?;
        match self {
            Range::Closed(l) => write_ivs(f, l.intervals())?,
            Range::Open(l) => write_ivs(f, l.intervals())?,
            Range::Bits(b) => {
                let mut runs: Vec<(i64, i64)> = Vec::new();
                for v in b.iter() {
                    match runs.last_mut() {
                        Some(last) if last.1 + 1 == v => last.1 = v,
                        _ => runs.push((v, v)),
                    }
                }
                write_ivs(f, &runs)?;
            }
        }
        f.write_str("}")
    }
}
