//! Fixed-universe bitset ranges over `[0, U-1]`.

use super::bound::Cardinality;

const WORD: usize = 64;

/// Index of the least significant set bit.
#[inline]
pub fn lowest_set_bit(w: u64) -> Option<u32> {
    (w != 0).then(|| w.trailing_zeros())
}

/// Index of the most significant set bit.
#[inline]
pub fn highest_set_bit(w: u64) -> Option<u32> {
    (w != 0).then(|| 63 - w.leading_zeros())
}

#[inline]
pub fn active_bits(w: u64) -> u32 {
    w.count_ones()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRange {
    words: Vec<u64>,
    universe: u32,
}

impl BitRange {
    fn empty(universe: u32) -> Self {
        BitRange {
            words: vec![0; (universe as usize).div_ceil(WORD)],
            universe,
        }
    }

    fn non_empty(self) -> Option<Self> {
        self.words.iter().any(|&w| w != 0).then_some(self)
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    #[inline]
    fn set(&mut self, v: usize) {
        self.words[v / WORD] |= 1 << (v % WORD);
    }

    /// `[lo, hi]` clipped to the universe; `None` if nothing remains.
    pub fn interval(lo: i64, hi: i64, universe: u32) -> Option<Self> {
        let lo = lo.max(0);
        let hi = hi.min(universe as i64 - 1);
        if lo > hi {
            return None;
        }
        let mut r = Self::empty(universe);
        let (lo, hi) = (lo as usize, hi as usize);
        let (lw, hw) = (lo / WORD, hi / WORD);
        for w in lw..=hw {
            let mut mask = u64::MAX;
            if w == lw {
                mask &= u64::MAX << (lo % WORD);
            }
            if w == hw {
                mask &= u64::MAX >> (WORD - 1 - hi % WORD);
            }
            r.words[w] = mask;
        }
        Some(r)
    }

    pub fn from_values(values: impl IntoIterator<Item = i64>, universe: u32) -> Option<Self> {
        let mut r = Self::empty(universe);
        for v in values {
            if (0..universe as i64).contains(&v) {
                r.set(v as usize);
            }
        }
        r.non_empty()
    }

    pub fn contains(&self, v: i64) -> bool {
        (0..self.universe as i64).contains(&v) && {
            let v = v as usize;
            self.words[v / WORD] >> (v % WORD) & 1 == 1
        }
    }

    pub fn min(&self) -> i64 {
        self.words
            .iter()
            .enumerate()
            .find_map(|(i, &w)| lowest_set_bit(w).map(|b| (i * WORD) as i64 + b as i64))
            .expect("bit range is never empty")
    }

    /// Smallest element `>= v`.
    pub fn first_at_least(&self, v: i64) -> Option<i64> {
        let v = v.max(0);
        if v >= self.universe as i64 {
            return None;
        }
        let v = v as usize;
        let (w0, b0) = (v / WORD, v % WORD);
        let head = self.words[w0] & (!0u64 << b0);
        if let Some(b) = lowest_set_bit(head) {
            return Some((w0 * WORD) as i64 + b as i64);
        }
        self.words[w0 + 1..]
            .iter()
            .enumerate()
            .find_map(|(i, &w)| lowest_set_bit(w).map(|b| ((w0 + 1 + i) * WORD) as i64 + b as i64))
    }

    pub fn max(&self) -> i64 {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find_map(|(i, &w)| highest_set_bit(w).map(|b| (i * WORD) as i64 + b as i64))
            .expect("bit range is never empty")
    }

    pub fn size(&self) -> Cardinality {
        Cardinality::Finite(self.words.iter().map(|&w| active_bits(w) as u64).sum())
    }

    pub fn is_singleton(&self) -> bool {
        let mut seen = false;
        for &w in &self.words {
            if w != 0 {
                if seen || w & (w - 1) != 0 {
                    return false;
                }
                seen = true;
            }
        }
        seen
    }

    pub fn union(&self, other: &Self) -> Self {
        BitRange {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            universe: self.universe,
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        BitRange {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            universe: self.universe,
        }
        .non_empty()
    }

    pub fn complement(&self) -> Option<Self> {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.universe as usize % WORD;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        BitRange {
            words,
            universe: self.universe,
        }
        .non_empty()
    }

    pub fn remove(&self, v: i64) -> Option<Self> {
        if !self.contains(v) {
            return Some(self.clone());
        }
        let mut r = self.clone();
        let v = v as usize;
        r.words[v / WORD] &= !(1 << (v % WORD));
        r.non_empty()
    }

    /// Shift by `n`; bits leaving the universe are dropped.
    pub fn add(&self, n: i64) -> Option<Self> {
        if n == 0 {
            return Some(self.clone());
        }
        let u = self.universe as i64;
        if n.abs() >= u {
            return None;
        }
        let mut r = Self::empty(self.universe);
        let shift = n.unsigned_abs() as usize;
        let (ws, bs) = (shift / WORD, shift % WORD);
        let len = self.words.len();
        if n > 0 {
            for i in (ws..len).rev() {
                let mut w = self.words[i - ws] << bs;
                if bs != 0 && i > ws {
                    w |= self.words[i - ws - 1] >> (WORD - bs);
                }
                r.words[i] = w;
            }
            let tail = self.universe as usize % WORD;
            if tail != 0 {
                r.words[len - 1] &= (1u64 << tail) - 1;
            }
        } else {
            for i in 0..len - ws {
                let mut w = self.words[i + ws] >> bs;
                if bs != 0 && i + ws + 1 < len {
                    w |= self.words[i + ws + 1] << (WORD - bs);
                }
                r.words[i] = w;
            }
        }
        r.non_empty()
    }

    pub fn mul(&self, n: i64) -> Option<Self> {
        match n {
            0 => Self::interval(0, 0, self.universe),
            1 => Some(self.clone()),
            _ => Self::from_values(self.iter().filter_map(|v| v.checked_mul(n)), self.universe),
        }
    }

    pub fn iter(&self) -> BitIter<'_> {
        BitIter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

pub struct BitIter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for BitIter<'_> {
    type Item = i64;

    fn next(&mut self) -> Option<i64> {
        loop {
            if let Some(b) = lowest_set_bit(self.current) {
                self.current &= self.current - 1;
                return Some((self.index * WORD) as i64 + b as i64);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}
