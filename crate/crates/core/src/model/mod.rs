//! Modeling front end: model variables bound to FD variables on demand,
//! unification of model variables, and relations compiled through
//! [`linearize`].

mod expr;
mod linearize;

pub use expr::{Expr, ModelVar, Rel, RelOp};
pub use linearize::{linearize, LinTerm, Linearized, Primitive};

use std::fmt;

use crate::constraints::{self, ConstraintId};
use crate::error::{ContractError, Fail, FdResult};
use crate::fdvar::{CellId, ChoiceMark, FdTerm, VarStore};
use crate::propagation::ChainType;
use crate::ranges::{RangeConfig, RangeKind};

/// Something a model variable can be unified with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(ModelVar),
    Int(i64),
    /// Any other constant; unifying with it is a type error.
    Atom(String),
}

impl From<ModelVar> for Term {
    fn from(v: ModelVar) -> Term {
        Term::Var(v)
    }
}

impl From<i64> for Term {
    fn from(n: i64) -> Term {
        Term::Int(n)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Int(n) => write!(f, "{n}"),
            Term::Atom(a) => f.write_str(a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Binding {
    Unbound,
    /// Bound to an FD term; `cell` receives its value once it is fixed.
    Bound { term: FdTerm, cell: Option<CellId> },
    AliasOf(ModelVar),
}

#[derive(Debug, Clone)]
struct Entry {
    name: String,
    binding: Binding,
}

/// Choice point covering both the store and the model bindings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelMark {
    store: ChoiceMark,
    bindings: usize,
}

/// Counters of what relation posting produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModelStats {
    /// Library constraints posted.
    pub kernel_posts: u64,
    pub temps: u64,
}

/// A store together with model variables.
pub struct Model {
    store: VarStore,
    vars: Vec<Entry>,
    /// Undo log of binding changes: (variable, previous binding).
    log: Vec<(ModelVar, Binding)>,
    stats: ModelStats,
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model")
            .field("vars", &self.vars.len())
            .field("store", &self.store)
            .finish()
    }
}

impl Default for Model {
    fn default() -> Self {
        Model::new(RangeConfig::default())
    }
}

impl Model {
    pub fn new(config: RangeConfig) -> Self {
        Model {
            store: VarStore::new(config),
            vars: Vec::new(),
            log: Vec::new(),
            stats: ModelStats::default(),
        }
    }

    pub fn store(&self) -> &VarStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut VarStore {
        &mut self.store
    }

    pub fn stats(&self) -> ModelStats {
        self.stats
    }

    /// A fresh, unbound model variable.
    pub fn new_var(&mut self, name: impl Into<String>) -> ModelVar {
        let v = ModelVar(u32::try_from(self.vars.len()).expect("too many model variables"));
        self.vars.push(Entry {
            name: name.into(),
            binding: Binding::Unbound,
        });
        v
    }

    /// A fresh model variable restricted to `lo..hi`.
    pub fn new_var_in(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> FdResult<ModelVar> {
        let v = self.new_var(name);
        let t = self.wrapper(v);
        constraints::post_domain(&mut self.store, &[t], lo, hi)?;
        Ok(v)
    }

    pub fn name(&self, v: ModelVar) -> &str {
        &self.vars[v.index()].name
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn set_binding(&mut self, v: ModelVar, b: Binding) {
        let old = std::mem::replace(&mut self.vars[v.index()].binding, b);
        self.log.push((v, old));
    }

    /// Follows aliases to the representative variable.
    fn resolve(&self, mut v: ModelVar) -> ModelVar {
        while let Binding::AliasOf(u) = self.vars[v.index()].binding {
            v = u;
        }
        v
    }

    /// The FD term of `v`, if it has been wrapped.
    pub fn term_of(&self, v: ModelVar) -> Option<FdTerm> {
        match self.vars[self.resolve(v).index()].binding {
            Binding::Bound { term, .. } => Some(term),
            _ => None,
        }
    }

    /// The FD term standing for `v`, created on first use. A fresh FD
    /// variable gets a val-chain hook that records its value for
    /// [`Model::value`].
    pub fn wrapper(&mut self, v: impl Into<Operand>) -> FdTerm {
        let v = match v.into() {
            Operand::Int(n) => return FdTerm::Int(n),
            Operand::Var(v) => self.resolve(v),
        };
        if let Binding::Bound { term, .. } = self.vars[v.index()].binding {
            return term;
        }
        let term = self.store.new_var();
        let cell = self.store.new_cell();
        self.store.watch(term, ChainType::Val, move |s: &mut VarStore| {
            let value = s.integerize(term)?;
            s.set_cell(cell, Some(value));
            Ok(())
        });
        if let Some(value) = self.store.value(term) {
            self.store.set_cell(cell, Some(value));
        }
        self.set_binding(v, Binding::Bound { term, cell: Some(cell) });
        term
    }

    /// Value recorded for `v` once its FD variable is fixed.
    pub fn value(&self, v: ModelVar) -> Option<i64> {
        match self.vars[self.resolve(v).index()].binding {
            Binding::Bound { term: FdTerm::Int(n), .. } => Some(n),
            Binding::Bound { cell: Some(c), .. } => self.store.cell(c),
            _ => None,
        }
    }

    /// Equates `a` and `b`: an integer is told to `a`, two wrapped
    /// variables get `'a=b'`, and an unwrapped `b` becomes an alias of `a`.
    ///
    /// An unwrapped `a` unified with an integer is simply bound to it, like
    /// a logical variable: it wraps to an integer term from then on.
    pub fn unify(&mut self, a: ModelVar, b: impl Into<Term>) -> FdResult {
        let b = b.into();
        let ra = self.resolve(a);
        if let (Term::Int(n), Binding::Unbound) = (&b, self.vars[ra.index()].binding) {
            self.set_binding(
                ra,
                Binding::Bound {
                    term: FdTerm::Int(*n),
                    cell: None,
                },
            );
            return Ok(());
        }
        let ta = self.wrapper(a);
        match b {
            Term::Int(n) => self.post(ConstraintId::EqT, &[ta, FdTerm::Int(n)]),
            Term::Atom(s) => Err(ContractError::TypeError(s).into()),
            Term::Var(b) => {
                let (ra, rb) = (self.resolve(a), self.resolve(b));
                if ra == rb {
                    return Ok(());
                }
                match self.vars[rb.index()].binding {
                    Binding::Bound { term, .. } => self.post(ConstraintId::Eq, &[ta, term]),
                    _ => {
                        self.set_binding(rb, Binding::AliasOf(ra));
                        Ok(())
                    }
                }
            }
        }
    }

    fn post(&mut self, id: ConstraintId, args: &[FdTerm]) -> FdResult {
        self.stats.kernel_posts += 1;
        constraints::post(&mut self.store, id, args)
    }

    /// Wraps the variables of `r`, linearizes it and posts the result.
    pub fn post_rel(&mut self, r: &Rel) -> FdResult {
        let lin = linearize(r)?;
        if lin.folded == Some(false) {
            return Err(Fail::Inconsistent);
        }
        let temps: Vec<FdTerm> = (0..lin.temps).map(|_| self.store.new_var()).collect();
        self.stats.temps += lin.temps as u64;
        let mut args = Vec::with_capacity(3);
        for p in &lin.posts {
            args.clear();
            for a in &p.args {
                args.push(match *a {
                    LinTerm::Var(v) => self.wrapper(v),
                    LinTerm::Temp(i) => temps[i],
                    LinTerm::Int(n) => FdTerm::Int(n),
                });
            }
            self.post(p.id, &args)?;
        }
        Ok(())
    }

    /// An FD term tracking the objective `e`, and the offset added to it:
    /// the value of `e` is the value of the term minus the offset. The
    /// offset is non-zero only when `e` can go below the universe of a
    /// bounded representation.
    pub fn objective_term(&mut self, e: &Expr) -> FdResult<(FdTerm, i64)> {
        match e {
            Expr::Var(v) => Ok((self.wrapper(*v), 0)),
            Expr::Int(n) => Ok((FdTerm::Int(*n), 0)),
            _ => {
                let offset = match self.store.config().kind() {
                    RangeKind::Open => 0,
                    _ => {
                        let (ulo, _) = self.store.config().universe();
                        let (lo, _) = self.expr_bounds(e);
                        ulo.saturating_sub(lo).max(0)
                    }
                };
                let z = self.new_var("_objective");
                let shifted = if offset == 0 { e.clone() } else { e.clone() + offset };
                self.post_rel(&Expr::Var(z).eq(shifted))?;
                Ok((self.wrapper(z), offset))
            }
        }
    }

    /// Interval bounds of `e` under the current domains.
    fn expr_bounds(&mut self, e: &Expr) -> (i64, i64) {
        match e {
            Expr::Var(v) => {
                let t = self.wrapper(*v);
                let (ulo, uhi) = self.store.config().universe();
                (
                    self.store.min(t).finite().unwrap_or(ulo),
                    self.store.max(t).finite().unwrap_or(uhi),
                )
            }
            Expr::Int(n) => (*n, *n),
            Expr::Add(a, b) => {
                let ((al, ah), (bl, bh)) = (self.expr_bounds(a), self.expr_bounds(b));
                (al.saturating_add(bl), ah.saturating_add(bh))
            }
            Expr::Sub(a, b) => {
                let ((al, ah), (bl, bh)) = (self.expr_bounds(a), self.expr_bounds(b));
                (al.saturating_sub(bh), ah.saturating_sub(bl))
            }
            Expr::Mul(a, b) => {
                let ((al, ah), (bl, bh)) = (self.expr_bounds(a), self.expr_bounds(b));
                let corners = [
                    al.saturating_mul(bl),
                    al.saturating_mul(bh),
                    ah.saturating_mul(bl),
                    ah.saturating_mul(bh),
                ];
                (*corners.iter().min().unwrap(), *corners.iter().max().unwrap())
            }
            Expr::Sum(items) => items.iter().fold((0, 0), |(l, h), x| {
                let (xl, xh) = self.expr_bounds(x);
                (l.saturating_add(xl), h.saturating_add(xh))
            }),
        }
    }

    /// FD terms of `vars`, wrapping as needed.
    pub fn terms(&mut self, vars: &[ModelVar]) -> Vec<FdTerm> {
        vars.iter().map(|&v| self.wrapper(v)).collect()
    }

    pub fn mark(&mut self) -> ModelMark {
        ModelMark {
            store: self.store.mark(),
            bindings: self.log.len(),
        }
    }

    pub fn undo_to(&mut self, m: ModelMark) -> Result<(), ContractError> {
        self.store.undo_to(m.store)?;
        while self.log.len() > m.bindings {
            let (v, old) = self.log.pop().expect("non-empty log");
            self.vars[v.index()].binding = old;
        }
        Ok(())
    }
}

/// Argument of [`Model::wrapper`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operand {
    Var(ModelVar),
    Int(i64),
}

impl From<ModelVar> for Operand {
    fn from(v: ModelVar) -> Operand {
        Operand::Var(v)
    }
}

impl From<i64> for Operand {
    fn from(n: i64) -> Operand {
        Operand::Int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{labeling, LabelOptions};

    #[test]
    fn wrapper_examples() {
        let mut m = Model::default();
        assert_eq!(m.wrapper(5), FdTerm::Int(5));
        let v = m.new_var("v");
        let t = m.wrapper(v);
        assert_eq!(m.wrapper(v), t);
        assert_eq!(m.value(v), None);
        m.store_mut().tell_value(t, 3).unwrap();
        assert_eq!(m.value(v), Some(3));
    }

    #[test]
    fn unify_examples() {
        let mut m = Model::default();
        let a = m.new_var_in("a", 1, 5).unwrap();
        m.unify(a, 3).unwrap();
        assert_eq!(m.value(a), Some(3));

        let a = m.new_var_in("a", 1, 5).unwrap();
        let b = m.new_var_in("b", 4, 9).unwrap();
        m.unify(a, b).unwrap();
        let (ta, tb) = (m.wrapper(a), m.wrapper(b));
        assert_eq!(m.store().get_range(ta).to_string(), "{4..5}");
        assert_eq!(m.store().get_range(tb).to_string(), "{4..5}");

        assert!(matches!(
            m.unify(a, Term::Atom("foo".into())),
            Err(Fail::Contract(ContractError::TypeError(_)))
        ));

        let i = m.new_var("i");
        m.unify(i, 2).unwrap();
        assert_eq!(m.wrapper(i), FdTerm::Int(2));
        assert_eq!(m.value(i), Some(2));
        assert_eq!(m.unify(i, 3), Err(Fail::Inconsistent));
    }

    #[test]
    fn unify_with_unwrapped_variable_aliases() {
        let mut m = Model::default();
        let a = m.new_var_in("a", 1, 5).unwrap();
        let b = m.new_var("b");
        let mk = m.mark();
        m.unify(a, b).unwrap();
        assert_eq!(m.wrapper(b), m.wrapper(a));
        m.undo_to(mk).unwrap();
        assert_eq!(m.term_of(b), None);
    }

    #[test]
    fn post_rel_examples() {
        let mut m = Model::default();
        let x = m.new_var_in("x", 0, 9).unwrap();
        assert_eq!(m.post_rel(&Expr::from(x).lt(x)), Err(Fail::Inconsistent));
        let before = m.stats().kernel_posts;
        m.post_rel(&Expr::Int(3).eq(3)).unwrap();
        assert_eq!(m.stats().kernel_posts, before);
    }

    #[test]
    fn temporaries_stay_out_of_solutions() {
        let mut m = Model::default();
        let vs: Vec<_> = (0..4).map(|i| m.new_var_in(format!("v{i}"), 0, 3).unwrap()).collect();
        m.post_rel(&Expr::from(vs[0]).eq(vs[1] + vs[2] + vs[3])).unwrap();
        let terms = m.terms(&vs);
        let sols: Vec<_> = labeling(m.store_mut(), LabelOptions::step(), &terms)
            .map(|s| s.unwrap())
            .collect();
        assert!(sols.iter().all(|s| s.assignment.len() == 4));
        let brute = (0..4i64.pow(4))
            .map(|n| [n % 4, n / 4 % 4, n / 16 % 4, n / 64])
            .filter(|v| v[0] == v[1] + v[2] + v[3])
            .count();
        assert_eq!(sols.len(), brute);
    }
}
