//! N-queens at four levels of the library.
//!
//! Every level states the same model: one variable per column with domain
//! `1..n`, and for every pair of columns at distance `i` the constraint
//! `diff(X, Y, i)`: different rows and different diagonals. The levels
//! differ only in how `diff` is written:
//!
//! - `clpfd`: three relations through the model compiler. The distance is
//!   a model variable bound to an integer, so the compiler sees a variable
//!   and emits the general `'a+b<>c'` form.
//! - `fd`: `'a<>b'` and two `'a<>b+t'` from the constraint library.
//! - `idx`: a single two-rule indexical.
//! - `kernel`: two val-chain propagators using `prune`.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::constraints::{self, ConstraintId};
use crate::error::FdResult;
use crate::fdvar::{FdTerm, VarStore};
use crate::indexicals::{parse_indexical, post_indexical, CompiledConstraint};
use crate::model::{Expr, Model, ModelVar};
use crate::propagation::ChainType;
use crate::ranges::RangeConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Clpfd,
    Fd,
    Idx,
    Kernel,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Clpfd, Level::Fd, Level::Idx, Level::Kernel];

    pub fn name(self) -> &'static str {
        match self {
            Level::Clpfd => "clpfd",
            Level::Fd => "fd",
            Level::Idx => "idx",
            Level::Kernel => "kernel",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Level::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown level {s:?} (expected clpfd, fd, idx or kernel)"))
    }
}

/// The indexical form of `diff`.
pub const IDX_DIFF: &str = "idx_diff(X, Y, I) +:
    X in -{val(Y), val(Y)+c(I), val(Y)-c(I)},
    Y in -{val(X), val(X)-c(I), val(X)+c(I)}.";

fn idx_diff() -> &'static Arc<CompiledConstraint> {
    static C: OnceLock<Arc<CompiledConstraint>> = OnceLock::new();
    C.get_or_init(|| CompiledConstraint::compile(parse_indexical(IDX_DIFF).expect("valid definition")))
}

/// Removes the value of `y` and its two diagonals from `x`.
fn cstr(s: &mut VarStore, x: FdTerm, y: FdTerm, i: i64) -> FdResult {
    let y0 = s.integerize(y)?;
    s.prune(x, y0)?;
    s.prune(x, y0 + i)?;
    s.prune(x, y0 - i)
}

/// `diff` written directly against the kernel.
pub fn kernel_diff(store: &mut VarStore, x: FdTerm, y: FdTerm, i: i64) {
    store.watch(y, ChainType::Val, move |s: &mut VarStore| cstr(s, x, y, i));
    store.watch(x, ChainType::Val, move |s: &mut VarStore| cstr(s, y, x, i));
}

/// `diff` from library constraints.
pub fn fd_diff(store: &mut VarStore, x: FdTerm, y: FdTerm, i: i64) -> FdResult {
    constraints::post(store, ConstraintId::Neq, &[x, y])?;
    constraints::post(store, ConstraintId::NeqOffset, &[x, y, FdTerm::Int(i)])?;
    constraints::post(store, ConstraintId::NeqOffset, &[y, x, FdTerm::Int(i)])
}

/// `diff` through the model compiler.
pub fn clpfd_diff(model: &mut Model, x: ModelVar, y: ModelVar, i: i64) -> FdResult {
    let iv = model.new_var("I");
    model.unify(iv, i)?;
    model.post_rel(&Expr::from(x).ne(y))?;
    model.post_rel(&Expr::from(x).ne(y + iv))?;
    model.post_rel(&(x + iv).ne(y))
}

/// A posted queens model.
pub struct Queens {
    pub model: Model,
    pub vars: Vec<ModelVar>,
    pub terms: Vec<FdTerm>,
}

/// Builds the n-queens model at `level`.
pub fn build_queens(n: usize, level: Level, config: RangeConfig) -> FdResult<Queens> {
    let mut model = Model::new(config);
    let vars: Vec<ModelVar> = (0..n).map(|k| model.new_var(format!("q{}", k + 1))).collect();
    let terms = model.terms(&vars);
    constraints::post_domain(model.store_mut(), &terms, 1, n as i64)?;
    for a in 0..n {
        for b in a + 1..n {
            let i = (b - a) as i64;
            let (x, y) = (terms[a], terms[b]);
            match level {
                Level::Clpfd => clpfd_diff(&mut model, vars[a], vars[b], i)?,
                Level::Fd => fd_diff(model.store_mut(), x, y, i)?,
                Level::Idx => post_indexical(idx_diff(), model.store_mut(), &[x, y, FdTerm::Int(i)])?,
                Level::Kernel => kernel_diff(model.store_mut(), x, y, i),
            }
        }
    }
    Ok(Queens { model, vars, terms })
}
