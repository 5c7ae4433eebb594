//! Sorted lists of disjoint, non-adjacent intervals.
//!
//! The same code backs the closed representation (`i64` endpoints) and the
//! open one (`Bound` endpoints, which may be infinite).

use std::fmt::Debug;

use super::bound::{Bound, Cardinality};

/// Finite intervals wider than this are not expanded by pointwise
/// multiplication; their hull is used instead.
pub(crate) const MUL_EXPANSION_LIMIT: u64 = 1 << 16;

pub trait Endpoint: Copy + Ord + Debug {
    fn succ(self) -> Self;
    fn pred(self) -> Self;
    fn to_bound(self) -> Bound;
    fn from_finite(n: i64) -> Self;
    fn add(self, n: i64) -> Self;
    /// Multiplication by a non-zero integer.
    fn mul(self, n: i64) -> Self;
}

impl Endpoint for i64 {
    #[inline]
    fn succ(self) -> Self {
        self.saturating_add(1)
    }
    #[inline]
    fn pred(self) -> Self {
        self.saturating_sub(1)
    }
    #[inline]
    fn to_bound(self) -> Bound {
        Bound::Finite(self)
    }
    #[inline]
    fn from_finite(n: i64) -> Self {
        n
    }
    #[inline]
    fn add(self, n: i64) -> Self {
        self.saturating_add(n)
    }
    #[inline]
    fn mul(self, n: i64) -> Self {
        self.saturating_mul(n)
    }
}

impl Endpoint for Bound {
    #[inline]
    fn succ(self) -> Self {
        Bound::succ(self)
    }
    #[inline]
    fn pred(self) -> Self {
        Bound::pred(self)
    }
    #[inline]
    fn to_bound(self) -> Bound {
        self
    }
    #[inline]
    fn from_finite(n: i64) -> Self {
        Bound::Finite(n)
    }
    #[inline]
    fn add(self, n: i64) -> Self {
        match self {
            Bound::Finite(x) => x.checked_add(n).map_or(
                if n > 0 { Bound::PosInf } else { Bound::NegInf },
                Bound::Finite,
            ),
            b => b,
        }
    }
    #[inline]
    fn mul(self, n: i64) -> Self {
        match self {
            Bound::Finite(x) => x.checked_mul(n).map_or(
                if (x > 0) == (n > 0) { Bound::PosInf } else { Bound::NegInf },
                Bound::Finite,
            ),
            Bound::PosInf if n < 0 => Bound::NegInf,
            Bound::NegInf if n < 0 => Bound::PosInf,
            b => b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalList<E: Endpoint> {
    ivs: Vec<(E, E)>,
}

impl<E: Endpoint> IntervalList<E> {
    pub fn interval(lo: E, hi: E) -> Option<Self> {
        (lo <= hi).then(|| IntervalList { ivs: vec![(lo, hi)] })
    }

    /// Builds a list from arbitrary (possibly overlapping, unsorted) intervals.
    pub fn from_intervals(mut raw: Vec<(E, E)>) -> Option<Self> {
        raw.retain(|(lo, hi)| lo <= hi);
        raw.sort_unstable();
        let mut ivs: Vec<(E, E)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match ivs.last_mut() {
                Some(last) if lo <= last.1.succ() => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => ivs.push((lo, hi)),
            }
        }
        (!ivs.is_empty()).then_some(IntervalList { ivs })
    }

    pub fn intervals(&self) -> &[(E, E)] {
        &self.ivs
    }

    pub fn min(&self) -> E {
        self.ivs[0].0
    }

    pub fn max(&self) -> E {
        self.ivs[self.ivs.len() - 1].1
    }

    pub fn contains(&self, v: E) -> bool {
        // first interval whose hi >= v
        let i = self.ivs.partition_point(|&(_, hi)| hi < v);
        i < self.ivs.len() && self.ivs[i].0 <= v
    }

    /// Smallest element `>= v`.
    pub fn first_at_least(&self, v: i64) -> Option<E> {
        let v = E::from_finite(v);
        let i = self.ivs.partition_point(|iv| iv.1 < v);
        self.ivs.get(i).map(|iv| iv.0.max(v))
    }

    pub fn is_singleton(&self) -> bool {
        self.ivs.len() == 1 && self.ivs[0].0 == self.ivs[0].1
    }

    pub fn size(&self) -> Cardinality {
        let mut total: u64 = 0;
        for &(lo, hi) in &self.ivs {
            match (lo.to_bound(), hi.to_bound()) {
                (Bound::Finite(a), Bound::Finite(b)) => {
                    total = total.saturating_add(b.abs_diff(a) + 1);
                }
                _ => return Cardinality::Infinite,
            }
        }
        Cardinality::Finite(total)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out: Vec<(E, E)> = Vec::with_capacity(self.ivs.len() + other.ivs.len());
        let (mut i, mut j) = (0, 0);
        loop {
            let next = match (self.ivs.get(i), other.ivs.get(j)) {
                (Some(&a), Some(&b)) => {
                    if a.0 <= b.0 {
                        i += 1;
                        a
                    } else {
                        j += 1;
                        b
                    }
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => break,
            };
            match out.last_mut() {
                Some(last) if next.0 <= last.1.succ() => {
                    if next.1 > last.1 {
                        last.1 = next.1;
                    }
                }
                _ => out.push(next),
            }
        }
        IntervalList { ivs: out }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ivs.len() && j < other.ivs.len() {
            let (a_lo, a_hi) = self.ivs[i];
            let (b_lo, b_hi) = other.ivs[j];
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a_hi < b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        (!out.is_empty()).then_some(IntervalList { ivs: out })
    }

    /// Complement relative to `[lo, hi]`.
    pub fn complement_within(&self, lo: E, hi: E) -> Option<Self> {
        let mut out = Vec::new();
        let mut cursor = lo;
        let mut exhausted = false;
        for &(a, b) in &self.ivs {
            if b < cursor {
                continue;
            }
            if a > hi {
                break;
            }
            if a > cursor {
                out.push((cursor, a.pred()));
            }
            if b >= hi {
                exhausted = true;
                break;
            }
            cursor = b.succ();
        }
        if !exhausted && cursor <= hi {
            out.push((cursor, hi));
        }
        (!out.is_empty()).then_some(IntervalList { ivs: out })
    }

    /// Removes one value. `None` when the result would be empty.
    pub fn remove(&self, v: E) -> Option<Self> {
        let i = self.ivs.partition_point(|&(_, hi)| hi < v);
        if i >= self.ivs.len() || self.ivs[i].0 > v {
            return Some(self.clone());
        }
        let (lo, hi) = self.ivs[i];
        let mut ivs = Vec::with_capacity(self.ivs.len() + 1);
        ivs.extend_from_slice(&self.ivs[..i]);
        if lo < v {
            ivs.push((lo, v.pred()));
        }
        if v < hi {
            ivs.push((v.succ(), hi));
        }
        ivs.extend_from_slice(&self.ivs[i + 1..]);
        (!ivs.is_empty()).then_some(IntervalList { ivs })
    }

    pub fn add(&self, n: i64) -> Self {
        IntervalList {
            ivs: self.ivs.iter().map(|&(lo, hi)| (lo.add(n), hi.add(n))).collect(),
        }
    }

    /// Pointwise multiplication. Exact except for intervals that are
    /// infinite or wider than 2^16 values, which map to their
    /// hull.
    pub fn mul(&self, n: i64) -> Self {
        if n == 0 {
            return IntervalList {
                ivs: vec![(E::from_finite(0), E::from_finite(0))],
            };
        }
        let mut raw = Vec::new();
        for &(lo, hi) in &self.ivs {
            let width = match (lo.to_bound(), hi.to_bound()) {
                (Bound::Finite(a), Bound::Finite(b)) => Some(b.abs_diff(a) + 1),
                _ => None,
            };
            match width {
                Some(w) if n.abs() == 1 || w <= MUL_EXPANSION_LIMIT => {
                    if n.abs() == 1 {
                        let (a, b) = (lo.mul(n), hi.mul(n));
                        raw.push((a.min(b), a.max(b)));
                    } else {
                        let a = lo.to_bound().finite().unwrap_or(0);
                        for k in 0..w as i64 {
                            let v = E::from_finite(a + k).mul(n);
                            raw.push((v, v));
                        }
                    }
                }
                _ => {
                    let (a, b) = (lo.mul(n), hi.mul(n));
                    raw.push((a.min(b), a.max(b)));
                }
            }
        }
        Self::from_intervals(raw).expect("image of a non-empty set is non-empty")
    }

    pub fn is_normalized(&self) -> bool {
        !self.ivs.is_empty()
            && self.ivs.iter().all(|(lo, hi)| lo <= hi)
            && self.ivs.windows(2).all(|w| w[1].0 > w[0].1.succ())
    }
}
