//! Translation of arithmetic relations into library constraints over at
//! most three terms.
//!
//! A relation is first folded into `sum(c_i * x_i) + k op 0`. Terms with
//! negative coefficients move to the right-hand side, so every temporary
//! holds a sum of non-negative multiples. Sides with more than two terms are
//! split in half recursively, each half summed into a fresh temporary, the
//! right half first:
//!
//! ```text
//! A #= B + C + D + E   ==>   T0 = D + E, T1 = B + C, A = T0 + T1
//! ```

use std::fmt;

use super::expr::{Expr, ModelVar, Rel, RelOp};
use crate::constraints::ConstraintId;
use crate::error::ContractError;

/// An argument of a linearized constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinTerm {
    Var(ModelVar),
    /// The n-th temporary of this relation.
    Temp(usize),
    Int(i64),
}

impl fmt::Display for LinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinTerm::Var(v) => write!(f, "{v}"),
            LinTerm::Temp(t) => write!(f, "T{t}"),
            LinTerm::Int(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Primitive {
    pub id: ConstraintId,
    pub args: Vec<LinTerm>,
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.id)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Output of [`linearize`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Linearized {
    /// Constraints to post, in order.
    pub posts: Vec<Primitive>,
    /// Number of temporaries the posts refer to.
    pub temps: usize,
    /// The relation folded to a constant truth value (no posts are needed
    /// when it is `Some(true)`).
    pub folded: Option<bool>,
}

/// `sum(coef * var) + constant`, variables in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Lin {
    terms: Vec<(ModelVar, i64)>,
    k: i64,
}

fn overflow() -> ContractError {
    ContractError::Unsupported("integer overflow in constant folding".into())
}

impl Lin {
    fn constant(k: i64) -> Lin {
        Lin { terms: Vec::new(), k }
    }

    fn add_term(&mut self, v: ModelVar, c: i64) -> Result<(), ContractError> {
        match self.terms.iter_mut().find(|(u, _)| *u == v) {
            Some((_, d)) => *d = d.checked_add(c).ok_or_else(overflow)?,
            None => self.terms.push((v, c)),
        }
        Ok(())
    }

    fn add(mut self, other: Lin, sign: i64) -> Result<Lin, ContractError> {
        for (v, c) in other.terms {
            self.add_term(v, c.checked_mul(sign).ok_or_else(overflow)?)?;
        }
        self.k = other
            .k
            .checked_mul(sign)
            .and_then(|k| self.k.checked_add(k))
            .ok_or_else(overflow)?;
        Ok(self)
    }

    fn scale(mut self, n: i64) -> Result<Lin, ContractError> {
        for (_, c) in &mut self.terms {
            *c = c.checked_mul(n).ok_or_else(overflow)?;
        }
        self.k = self.k.checked_mul(n).ok_or_else(overflow)?;
        Ok(self)
    }

    fn is_constant(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c == 0)
    }

    fn of(e: &Expr) -> Result<Lin, ContractError> {
        Ok(match e {
            Expr::Var(v) => Lin {
                terms: vec![(*v, 1)],
                k: 0,
            },
            Expr::Int(n) => Lin::constant(*n),
            Expr::Add(a, b) => Lin::of(a)?.add(Lin::of(b)?, 1)?,
            Expr::Sub(a, b) => Lin::of(a)?.add(Lin::of(b)?, -1)?,
            Expr::Sum(items) => items
                .iter()
                .try_fold(Lin::constant(0), |acc, e| acc.add(Lin::of(e)?, 1))?,
            Expr::Mul(a, b) => {
                let (a, b) = (Lin::of(a)?, Lin::of(b)?);
                if a.is_constant() {
                    b.scale(a.k)?
                } else if b.is_constant() {
                    a.scale(b.k)?
                } else {
                    return Err(ContractError::Unsupported(format!("non-linear product {e}")));
                }
            }
        })
    }
}

struct Builder {
    posts: Vec<Primitive>,
    temps: usize,
}

impl Builder {
    fn emit(&mut self, id: ConstraintId, args: Vec<LinTerm>) {
        self.posts.push(Primitive { id, args });
    }

    fn temp(&mut self) -> LinTerm {
        self.temps += 1;
        LinTerm::Temp(self.temps - 1)
    }

    /// `c * v` as a single term.
    fn scaled(&mut self, v: ModelVar, c: i64) -> LinTerm {
        if c == 1 {
            return LinTerm::Var(v);
        }
        let t = self.temp();
        self.emit(ConstraintId::TimesEq, vec![t, LinTerm::Int(c), LinTerm::Var(v)]);
        t
    }

    /// Reduces a sum to at most two terms.
    fn halve(&mut self, terms: &[LinTerm]) -> Vec<LinTerm> {
        if terms.len() <= 2 {
            return terms.to_vec();
        }
        let (left, right) = terms.split_at(terms.len() / 2);
        let r = self.collapse(right);
        let l = self.collapse(left);
        vec![r, l]
    }

    /// Reduces a sum to one term.
    fn collapse(&mut self, terms: &[LinTerm]) -> LinTerm {
        let parts = self.halve(terms);
        match parts[..] {
            [t] => t,
            [a, b] => {
                let t = self.temp();
                self.emit(ConstraintId::PlusEq, vec![t, a, b]);
                t
            }
            _ => unreachable!("sums are non-empty here"),
        }
    }
}

/// Translates `r` into library constraints.
pub fn linearize(r: &Rel) -> Result<Linearized, ContractError> {
    // a > b is b < a
    let (op, lhs, rhs) = match r.op {
        RelOp::Gt => (RelOp::Lt, &r.rhs, &r.lhs),
        RelOp::Ge => (RelOp::Le, &r.rhs, &r.lhs),
        op => (op, &r.lhs, &r.rhs),
    };
    let diff = Lin::of(lhs)?.add(Lin::of(rhs)?, -1)?;
    let mut b = Builder {
        posts: Vec::new(),
        temps: 0,
    };
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &(v, c) in &diff.terms {
        if c > 0 {
            left.push(b.scaled(v, c));
        } else if c < 0 {
            right.push(b.scaled(v, c.checked_neg().ok_or_else(overflow)?));
        }
    }
    // left + kl  op  right + kr, with kl, kr >= 0
    let (kl, kr) = if diff.k >= 0 {
        (diff.k, 0)
    } else {
        (0, diff.k.checked_neg().ok_or_else(overflow)?)
    };
    let left = b.halve(&left);
    let right = b.halve(&right);
    let folded = relate(&mut b, op, left, kl, right, kr);
    Ok(Linearized {
        posts: b.posts,
        temps: b.temps,
        folded,
    })
}

fn relate(b: &mut Builder, op: RelOp, mut l: Vec<LinTerm>, mut kl: i64, mut r: Vec<LinTerm>, mut kr: i64) -> Option<bool> {
    use ConstraintId as C;
    let int = LinTerm::Int;
    // direct ternary forms
    if kl == 0 && kr == 0 {
        if l.len() == 1 && r.len() == 2 || l.len() == 2 && r.len() == 1 {
            let (one, two) = if l.len() == 1 { (&l, &r) } else { (&r, &l) };
            match op {
                RelOp::Eq => {
                    b.emit(C::PlusEq, vec![one[0], two[0], two[1]]);
                    return None;
                }
                RelOp::Ne => {
                    b.emit(C::PlusNeq, vec![two[0], two[1], one[0]]);
                    return None;
                }
                _ => {}
            }
        }
        if op == RelOp::Eq && l.len() == 2 && r.len() == 2 {
            let t = b.collapse(&r);
            b.emit(C::PlusEq, vec![t, l[0], l[1]]);
            return None;
        }
    }
    if l.len() == 2 {
        l = vec![b.collapse(&l)];
    }
    if r.len() == 2 {
        r = vec![b.collapse(&r)];
    }
    // orderings have no offset form: fold the constant into a temporary
    if matches!(op, RelOp::Lt | RelOp::Le) && l.len() == 1 && r.len() == 1 {
        if kl > 0 {
            let t = b.temp();
            b.emit(C::PlusEqT, vec![t, l[0], int(kl)]);
            l = vec![t];
            kl = 0;
        } else if kr > 0 {
            let t = b.temp();
            b.emit(C::PlusEqT, vec![t, r[0], int(kr)]);
            r = vec![t];
            kr = 0;
        }
    }
    match (l.first().copied(), r.first().copied()) {
        (None, None) => Some(op.holds(kl, kr)),
        (Some(x), None) => {
            // x op kr - kl
            let n = kr - kl;
            let id = match op {
                RelOp::Eq => C::EqT,
                RelOp::Ne => C::NeqT,
                RelOp::Lt => C::LtT,
                _ => C::LeT,
            };
            b.emit(id, vec![x, int(n)]);
            None
        }
        (None, Some(y)) => {
            // kl - kr op y
            let n = kl - kr;
            let id = match op {
                RelOp::Eq => C::EqT,
                RelOp::Ne => C::NeqT,
                RelOp::Lt => C::GtT,
                _ => C::GeT,
            };
            b.emit(id, vec![y, int(n)]);
            None
        }
        (Some(x), Some(y)) => {
            match op {
                RelOp::Eq | RelOp::Ne => {
                    let (plain, offset) = if op == RelOp::Eq {
                        (C::Eq, C::PlusEqT)
                    } else {
                        (C::Neq, C::NeqOffset)
                    };
                    if kr > 0 {
                        b.emit(offset, vec![x, y, int(kr)]);
                    } else if kl > 0 {
                        b.emit(offset, vec![y, x, int(kl)]);
                    } else {
                        b.emit(plain, vec![x, y]);
                    }
                }
                RelOp::Lt => b.emit(C::Lt, vec![x, y]),
                _ => b.emit(C::Le, vec![x, y]),
            }
            None
        }
    }
}
