use std::fmt;

use crate::error::ContractError;

/// Endpoint of a range: an integer or one of the two infinities.
///
/// The derived ordering gives `NegInf < Finite(n) < PosInf` for every `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Bound {
    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    /// Next integer up; infinities are fixed points.
    pub(crate) fn succ(self) -> Bound {
        match self {
            Bound::Finite(n) => n.checked_add(1).map_or(Bound::PosInf, Bound::Finite),
            b => b,
        }
    }

    /// Next integer down; infinities are fixed points.
    pub(crate) fn pred(self) -> Bound {
        match self {
            Bound::Finite(n) => n.checked_sub(1).map_or(Bound::NegInf, Bound::Finite),
            b => b,
        }
    }

    fn negate(self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Finite(n) => Bound::Finite(-n),
        }
    }
}

impl From<i64> for Bound {
    fn from(n: i64) -> Self {
        Bound::Finite(n)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("inf"),
            Bound::PosInf => f.write_str("sup"),
            Bound::Finite(n) => write!(f, "{n}"),
        }
    }
}

fn overflow(op: &str, a: Bound, b: Bound) -> ContractError {
    ContractError::IndeterminateBound(format!("{a} {op} {b} overflows"))
}

/// Extended-integer addition. `inf + sup` has no value and is reported as a
/// contract error.
pub fn bound_add(a: Bound, b: Bound) -> Result<Bound, ContractError> {
    use Bound::*;
    match (a, b) {
        (Finite(x), Finite(y)) => x.checked_add(y).map(Finite).ok_or_else(|| overflow("+", a, b)),
        (NegInf, PosInf) | (PosInf, NegInf) => Err(ContractError::IndeterminateBound(format!(
            "{a} + {b}"
        ))),
        (NegInf, _) | (_, NegInf) => Ok(NegInf),
        (PosInf, _) | (_, PosInf) => Ok(PosInf),
    }
}

pub fn bound_sub(a: Bound, b: Bound) -> Result<Bound, ContractError> {
    bound_add(a, b.negate()).map_err(|_| match (a, b) {
        (Bound::Finite(_), Bound::Finite(_)) => overflow("-", a, b),
        _ => ContractError::IndeterminateBound(format!("{a} - {b}")),
    })
}

/// Extended-integer multiplication. Zero times an infinity is indeterminate.
pub fn bound_mul(a: Bound, b: Bound) -> Result<Bound, ContractError> {
    use Bound::*;
    fn sign(b: Bound) -> i8 {
        match b {
            NegInf => -1,
            PosInf => 1,
            Finite(n) => n.signum() as i8,
        }
    }
    match (a, b) {
        (Finite(x), Finite(y)) => x.checked_mul(y).map(Finite).ok_or_else(|| overflow("*", a, b)),
        _ => match sign(a) * sign(b) {
            0 => Err(ContractError::IndeterminateBound(format!("{a} * {b}"))),
            1 => Ok(PosInf),
            _ => Ok(NegInf),
        },
    }
}

/// Number of elements of a range. `Infinite` sorts after every finite count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

impl Cardinality {
    pub fn finite(self) -> Option<u64> {
        match self {
            Cardinality::Finite(n) => Some(n),
            Cardinality::Infinite => None,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => f.write_str("infinite"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Bound::*;

    #[test]
    fn ordering_puts_infinities_outside() {
        assert!(NegInf < Finite(i64::MIN));
        assert!(Finite(i64::MAX) < PosInf);
        assert!(Finite(-3) < Finite(2));
    }

    #[test]
    fn addition() {
        assert_eq!(bound_add(Finite(2), Finite(3)), Ok(Finite(5)));
        assert_eq!(bound_add(PosInf, Finite(-7)), Ok(PosInf));
        assert_eq!(bound_add(NegInf, NegInf), Ok(NegInf));
        assert!(bound_add(NegInf, PosInf).is_err());
    }

    #[test]
    fn subtraction() {
        assert_eq!(bound_sub(Finite(2), Finite(3)), Ok(Finite(-1)));
        assert_eq!(bound_sub(PosInf, NegInf), Ok(PosInf));
        assert!(bound_sub(PosInf, PosInf).is_err());
    }

    #[test]
    fn multiplication() {
        assert!(matches!(
            bound_mul(Finite(0), PosInf),
            Err(ContractError::IndeterminateBound(_))
        ));
        assert_eq!(bound_mul(Finite(-2), PosInf), Ok(NegInf));
        assert_eq!(bound_mul(NegInf, NegInf), Ok(PosInf));
        assert_eq!(bound_mul(Finite(-4), Finite(5)), Ok(Finite(-20)));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(bound_add(Finite(i64::MAX), Finite(1)).is_err());
    }

    #[test]
    fn cardinality_orders_infinite_last() {
        assert!(Cardinality::Finite(u64::MAX) < Cardinality::Infinite);
    }
}
