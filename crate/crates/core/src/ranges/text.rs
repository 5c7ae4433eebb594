//! Textual form of ranges: `{1..3, 5, 9..sup}`.

use thiserror::Error;

use super::{Bound, Range, RangeConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRangeError {
    #[error("range text must be enclosed in braces")]
    MissingBraces,
    #[error("invalid bound `{0}`")]
    InvalidBound(String),
    #[error("interval `{0}` is empty")]
    EmptyInterval(String),
    #[error("range is empty")]
    Empty,
}

fn parse_bound(s: &str) -> Result<Bound, ParseRangeError> {
    match s.trim() {
        "inf" => Ok(Bound::NegInf),
        "sup" => Ok(Bound::PosInf),
        t => t
            .parse::<i64>()
            .map(Bound::Finite)
            .map_err(|_| ParseRangeError::InvalidBound(t.to_string())),
    }
}

pub(super) fn parse(cfg: &RangeConfig, text: &str) -> Result<Range, ParseRangeError> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or(ParseRangeError::MissingBraces)?;
    let mut acc: Option<Range> = None;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lo, hi) = match part.split_once("..") {
            Some((lo, hi)) => (parse_bound(lo)?, parse_bound(hi)?),
            None => {
                let b = parse_bound(part)?;
                (b, b)
            }
        };
        let r = cfg
            .interval(lo, hi)
            .ok_or_else(|| ParseRangeError::EmptyInterval(part.to_string()))?;
        acc = Some(match acc {
            None => r,
            Some(a) => a.union(&r).expect("same configuration"),
        });
    }
    acc.ok_or(ParseRangeError::Empty)
}
