//! Compilation of indexical rules into kernel programs.
//!
//! Each rule `X in r` becomes a postfix [`Program`] run on two small stacks
//! (bounds and ranges) plus the set of `(parameter, chain)` pairs it must be
//! woken on. Posting a compiled definition installs one propagator per rule
//! on those chains and runs every rule once.

use std::rc::Rc;
use std::sync::Arc;

use super::ast::{IndexicalDef, ParamIndex, ParamKind, RangeExpr, TermExpr};
use crate::error::{ContractError, Fail, FdResult};
use crate::fdvar::{FdTerm, VarStore};
use crate::propagation::ChainType;
use crate::ranges::{bound_add, bound_mul, bound_sub, Bound, BoundConst, Range};

/// Result of evaluating an expression that may wait on `val(Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eval<T> {
    Value(T),
    /// Some `val(Y)` was not yet a singleton.
    Suspended,
}

impl<T> Eval<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Eval::Value(v) => Some(v),
            Eval::Suspended => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Instr {
    Min(ParamIndex),
    Max(ParamIndex),
    Val(ParamIndex),
    Const(ParamIndex),
    Int(i64),
    Named(BoundConst),
    Add,
    Sub,
    Mul,
    Interval,
    Singleton,
    Dom(ParamIndex),
    Union,
    Intersect,
    Complement,
    PointwiseAdd,
    PointwiseSub,
    PointwiseMul,
}

/// Postfix form of a range or term expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    code: Vec<Instr>,
}

impl Program {
    pub fn for_range(expr: &RangeExpr) -> Program {
        let mut code = Vec::new();
        emit_range(expr, &mut code);
        Program { code }
    }

    pub fn for_term(expr: &TermExpr) -> Program {
        let mut code = Vec::new();
        emit_term(expr, &mut code);
        Program { code }
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    fn run(&self, store: &VarStore, env: &[FdTerm]) -> Result<Eval<Stacks>, ContractError> {
        let cfg = store.config();
        let mut st = Stacks::default();
        for &ins in &self.code {
            match ins {
                Instr::Min(p) => st.bounds.push(store.min(env[p])),
                Instr::Max(p) => st.bounds.push(store.max(env[p])),
                Instr::Val(p) => match store.value(env[p]) {
                    Some(v) => st.bounds.push(Bound::Finite(v)),
                    None => return Ok(Eval::Suspended),
                },
                Instr::Const(p) => match env[p] {
                    FdTerm::Int(n) => st.bounds.push(Bound::Finite(n)),
                    FdTerm::Var(_) => {
                        return Err(ContractError::ExpectedInteger {
                            name: "c(..)".into(),
                            index: p,
                        })
                    }
                },
                Instr::Int(n) => st.bounds.push(Bound::Finite(n)),
                Instr::Named(c) => st.bounds.push(cfg.bound_const(c)),
                Instr::Add | Instr::Sub | Instr::Mul => {
                    let b = st.bounds.pop().expect("well-formed program");
                    let a = st.bounds.pop().expect("well-formed program");
                    st.bounds.push(match ins {
                        Instr::Add => bound_add(a, b)?,
                        Instr::Sub => bound_sub(a, b)?,
                        _ => bound_mul(a, b)?,
                    });
                }
                Instr::Interval => {
                    let hi = st.bounds.pop().expect("well-formed program");
                    let lo = st.bounds.pop().expect("well-formed program");
                    st.ranges.push(cfg.interval(lo, hi));
                }
                Instr::Singleton => {
                    let v = st.bounds.pop().expect("well-formed program");
                    st.ranges.push(v.finite().and_then(|v| cfg.singleton(v)));
                }
                Instr::Dom(p) => st.ranges.push(match env[p] {
                    FdTerm::Var(v) => Some(store.range(v).clone()),
                    FdTerm::Int(n) => cfg.singleton(n),
                }),
                Instr::Union => {
                    let b = st.ranges.pop().expect("well-formed program");
                    let a = st.ranges.pop().expect("well-formed program");
                    st.ranges.push(match (a, b) {
                        (Some(a), Some(b)) => Some(a.union(&b)?),
                        (a, None) => a,
                        (None, b) => b,
                    });
                }
                Instr::Intersect => {
                    let b = st.ranges.pop().expect("well-formed program");
                    let a = st.ranges.pop().expect("well-formed program");
                    st.ranges.push(match (a, b) {
                        (Some(a), Some(b)) => match a.intersect(&b) {
                            Ok(r) => Some(r),
                            Err(Fail::Inconsistent) => None,
                            Err(Fail::Contract(e)) => return Err(e),
                        },
                        _ => None,
                    });
                }
                Instr::Complement => {
                    let a = st.ranges.pop().expect("well-formed program");
                    st.ranges.push(match a {
                        Some(a) => cfg.complement(&a),
                        None => cfg.interval(Bound::NegInf, Bound::PosInf),
                    });
                }
                Instr::PointwiseAdd | Instr::PointwiseSub | Instr::PointwiseMul => {
                    let n = st.bounds.pop().expect("well-formed program");
                    let a = st.ranges.pop().expect("well-formed program");
                    let n = n.finite().ok_or_else(|| {
                        ContractError::IndeterminateBound(format!("pointwise operation by {n}"))
                    })?;
                    st.ranges.push(a.and_then(|a| match ins {
                        Instr::PointwiseAdd => a.pointwise_add(n),
                        Instr::PointwiseSub => a.pointwise_sub(n),
                        _ => a.pointwise_mul(n),
                    }));
                }
            }
        }
        Ok(Eval::Value(st))
    }
}

#[derive(Default)]
struct Stacks {
    bounds: Vec<Bound>,
    /// `None` stands for the empty set, which may appear mid-expression.
    ranges: Vec<Option<Range>>,
}

fn emit_term(t: &TermExpr, code: &mut Vec<Instr>) {
    match t {
        TermExpr::Min(p) => code.push(Instr::Min(*p)),
        TermExpr::Max(p) => code.push(Instr::Max(*p)),
        TermExpr::Val(p) => code.push(Instr::Val(*p)),
        TermExpr::Const(p) => code.push(Instr::Const(*p)),
        TermExpr::Int(n) => code.push(Instr::Int(*n)),
        TermExpr::Named(c) => code.push(Instr::Named(*c)),
        TermExpr::Add(a, b) | TermExpr::Sub(a, b) | TermExpr::Mul(a, b) => {
            emit_term(a, code);
            emit_term(b, code);
            code.push(match t {
                TermExpr::Add(..) => Instr::Add,
                TermExpr::Sub(..) => Instr::Sub,
                _ => Instr::Mul,
            });
        }
    }
}

fn emit_range(r: &RangeExpr, code: &mut Vec<Instr>) {
    match r {
        RangeExpr::Interval(lo, hi) => {
            emit_term(lo, code);
            emit_term(hi, code);
            code.push(Instr::Interval);
        }
        RangeExpr::Singleton(t) => {
            emit_term(t, code);
            code.push(Instr::Singleton);
        }
        RangeExpr::Dom(p) => code.push(Instr::Dom(*p)),
        RangeExpr::Union(a, b) | RangeExpr::Intersect(a, b) => {
            emit_range(a, code);
            emit_range(b, code);
            code.push(if matches!(r, RangeExpr::Union(..)) {
                Instr::Union
            } else {
                Instr::Intersect
            });
        }
        RangeExpr::Complement(a) => {
            emit_range(a, code);
            code.push(Instr::Complement);
        }
        RangeExpr::PointwiseAdd(a, n) | RangeExpr::PointwiseSub(a, n) | RangeExpr::PointwiseMul(a, n) => {
            emit_range(a, code);
            emit_term(n, code);
            code.push(match r {
                RangeExpr::PointwiseAdd(..) => Instr::PointwiseAdd,
                RangeExpr::PointwiseSub(..) => Instr::PointwiseSub,
                _ => Instr::PointwiseMul,
            });
        }
    }
}

/// Evaluates a term against the current store.
pub fn eval_term(t: &TermExpr, store: &VarStore, env: &[FdTerm]) -> Result<Eval<Bound>, ContractError> {
    Ok(match Program::for_term(t).run(store, env)? {
        Eval::Value(mut st) => Eval::Value(st.bounds.pop().expect("one term")),
        Eval::Suspended => Eval::Suspended,
    })
}

/// Evaluates a range expression; an empty result is a failure.
pub fn eval_range(r: &RangeExpr, store: &VarStore, env: &[FdTerm]) -> FdResult<Eval<Range>> {
    eval_program(&Program::for_range(r), store, env)
}

fn eval_program(p: &Program, store: &VarStore, env: &[FdTerm]) -> FdResult<Eval<Range>> {
    match p.run(store, env)? {
        Eval::Value(mut st) => match st.ranges.pop().expect("one range") {
            Some(r) => Ok(Eval::Value(r)),
            None => Err(Fail::Inconsistent),
        },
        Eval::Suspended => Ok(Eval::Suspended),
    }
}

fn collect_deps(r: &RangeExpr, target: ParamIndex, out: &mut Vec<(ParamIndex, ChainType)>) {
    fn add(p: ParamIndex, c: ChainType, target: ParamIndex, out: &mut Vec<(ParamIndex, ChainType)>) {
        if p != target && !out.contains(&(p, c)) {
            out.push((p, c));
        }
    }
    fn term(t: &TermExpr, target: ParamIndex, out: &mut Vec<(ParamIndex, ChainType)>) {
        match t {
            TermExpr::Min(p) => add(*p, ChainType::Min, target, out),
            TermExpr::Max(p) => add(*p, ChainType::Max, target, out),
            TermExpr::Val(p) => add(*p, ChainType::Val, target, out),
            TermExpr::Const(_) | TermExpr::Int(_) | TermExpr::Named(_) => {}
            TermExpr::Add(a, b) | TermExpr::Sub(a, b) | TermExpr::Mul(a, b) => {
                term(a, target, out);
                term(b, target, out);
            }
        }
    }
    match r {
        RangeExpr::Interval(a, b) => {
            term(a, target, out);
            term(b, target, out);
        }
        RangeExpr::Singleton(t) => term(t, target, out),
        RangeExpr::Dom(p) => add(*p, ChainType::Dom, target, out),
        RangeExpr::Union(a, b) | RangeExpr::Intersect(a, b) => {
            collect_deps(a, target, out);
            collect_deps(b, target, out);
        }
        RangeExpr::Complement(a) => collect_deps(a, target, out),
        RangeExpr::PointwiseAdd(a, n) | RangeExpr::PointwiseSub(a, n) | RangeExpr::PointwiseMul(a, n) => {
            collect_deps(a, target, out);
            term(n, target, out);
        }
    }
}

/// Chains each rule must be woken on, in order of first occurrence:
/// `min(Y)` → `(Y, Min)`, `max(Y)` → `(Y, Max)`, `dom(Y)` → `(Y, Dom)`,
/// `val(Y)` → `(Y, Val)`. The rule's own target and `c(..)` parameters
/// subscribe nothing.
pub fn analyze_dependencies(def: &IndexicalDef) -> Vec<Vec<(ParamIndex, ChainType)>> {
    def.rules
        .iter()
        .map(|rule| {
            let mut deps = Vec::new();
            collect_deps(&rule.expr, rule.target, &mut deps);
            deps
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledRule {
    pub target: ParamIndex,
    pub program: Program,
    pub subscriptions: Vec<(ParamIndex, ChainType)>,
}

/// A definition ready to be posted any number of times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledConstraint {
    def: IndexicalDef,
    rules: Vec<CompiledRule>,
}

impl CompiledConstraint {
    pub fn compile(def: IndexicalDef) -> Arc<CompiledConstraint> {
        let deps = analyze_dependencies(&def);
        let rules = def
            .rules
            .iter()
            .zip(deps)
            .map(|(rule, subscriptions)| CompiledRule {
                target: rule.target,
                program: Program::for_range(&rule.expr),
                subscriptions,
            })
            .collect();
        Arc::new(CompiledConstraint { def, rules })
    }

    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn definition(&self) -> &IndexicalDef {
        &self.def
    }

    pub fn rules(&self) -> &[CompiledRule] {
        &self.rules
    }

    pub fn arity(&self) -> usize {
        self.def.arity()
    }

    fn run_rule(&self, i: usize, store: &mut VarStore, env: &[FdTerm]) -> FdResult {
        let rule = &self.rules[i];
        match eval_program(&rule.program, store, env)? {
            Eval::Suspended => Ok(()),
            Eval::Value(r) => store.tell_range(env[rule.target], &r),
        }
    }
}

/// Installs the propagators of `c` on `args` and runs each rule once.
pub fn post_indexical(c: &Arc<CompiledConstraint>, store: &mut VarStore, args: &[FdTerm]) -> FdResult {
    if args.len() != c.arity() {
        return Err(ContractError::Arity {
            name: c.name().to_string(),
            expected: c.arity(),
            got: args.len(),
        }
        .into());
    }
    for (i, p) in c.def.params.iter().enumerate() {
        if p.kind == ParamKind::Const && !matches!(args[i], FdTerm::Int(_)) {
            return Err(ContractError::ExpectedInteger {
                name: c.name().to_string(),
                index: i,
            }
            .into());
        }
    }
    let env: Rc<[FdTerm]> = args.into();
    for (i, rule) in c.rules.iter().enumerate() {
        if rule.subscriptions.is_empty() {
            continue;
        }
        let (cc, env2) = (c.clone(), env.clone());
        let p = store.new_propagator(Rc::new(move |st: &mut VarStore| cc.run_rule(i, st, &env2)));
        for &(param, chain) in &rule.subscriptions {
            store.add_propag(env[param], chain, &p)?;
        }
    }
    for i in 0..c.rules.len() {
        c.run_rule(i, store, &env)?;
    }
    Ok(())
}
