//! Finite-domain variables, the `tell`/`prune` kernel operations and the
//! trail that undoes them.
//!
//! Every in-place write to the store (a new range, a propagator appended to a
//! chain, a fresh variable, an observer cell) pushes an undo entry. A
//! [`ChoiceMark`] is a position in that log; [`VarStore::undo_to`] pops back
//! to it and leaves every record exactly as it was when the mark was taken.

use std::fmt;
use std::mem;
use std::rc::Rc;

use crate::error::{ContractError, Fail, FdResult};
use crate::propagation::{events_from, ChainType, Goal, PChains, PropId, Propagator};
use crate::ranges::{Bound, Cardinality, Range, RangeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A variable handle or a bare integer. Integers behave as immutable
/// singleton variables that never carry propagators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FdTerm {
    Var(VarId),
    Int(i64),
}

impl From<i64> for FdTerm {
    fn from(n: i64) -> Self {
        FdTerm::Int(n)
    }
}

impl From<VarId> for FdTerm {
    fn from(v: VarId) -> Self {
        FdTerm::Var(v)
    }
}

impl fmt::Display for FdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FdTerm::Var(v) => write!(f, "_V{}", v.0),
            FdTerm::Int(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VarRecord {
    range: Range,
    chains: PChains,
}

impl VarRecord {
    pub fn range(&self) -> &Range {
        &self.range
    }

    pub fn chains(&self) -> &PChains {
        &self.chains
    }
}

/// Trailed integer slot, used by observers that record ground values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellId(u32);

#[derive(Debug)]
enum TrailEntry {
    Range { var: VarId, old: Range },
    Chain { var: VarId, chain: ChainType },
    NewVar,
    Cell { cell: CellId, old: Option<i64> },
    NewCell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChoiceMark {
    serial: u64,
    trail_len: usize,
}

impl ChoiceMark {
    pub fn trail_len(&self) -> usize {
        self.trail_len
    }
}

/// Kernel counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub tells: u64,
    /// Tells that narrowed a range (and were trailed).
    pub tell_writes: u64,
    /// Tells that left the range unchanged.
    pub tell_noops: u64,
    /// Tells whose intersection was empty.
    pub tell_failures: u64,
    pub prunes: u64,
    pub prune_writes: u64,
    /// Kernel operations that emptied a range.
    pub failures: u64,
    /// Propagator executions, indexed by [`ChainType::index`].
    pub executions: [u64; 4],
    pub trail_peak: usize,
    pub vars_created: u64,
}

impl Stats {
    pub fn executions_on(&self, c: ChainType) -> u64 {
        self.executions[c.index()]
    }

    pub fn total_executions(&self) -> u64 {
        self.executions.iter().sum()
    }
}

/// Deep copy of everything the trail restores. Used to check undo.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoreSnapshot {
    pub ranges: Vec<Range>,
    pub chains: Vec<[Vec<PropId>; 4]>,
    pub cells: Vec<Option<i64>>,
}

/// Arena of FD variables with an undo trail. Single-threaded.
pub struct VarStore {
    config: RangeConfig,
    vars: Vec<VarRecord>,
    cells: Vec<Option<i64>>,
    trail: Vec<TrailEntry>,
    marks: Vec<ChoiceMark>,
    next_serial: u64,
    next_prop: u64,
    stats: Stats,
}

impl fmt::Debug for VarStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VarStore")
            .field("kind", &self.config.kind())
            .field("vars", &self.vars.len())
            .field("trail", &self.trail.len())
            .finish()
    }
}

impl Default for VarStore {
    fn default() -> Self {
        Self::new(RangeConfig::default())
    }
}

impl VarStore {
    pub fn new(config: RangeConfig) -> Self {
        VarStore {
            config,
            vars: Vec::new(),
            cells: Vec::new(),
            trail: Vec::new(),
            marks: Vec::new(),
            next_serial: 0,
            next_prop: 0,
            stats: Stats::default(),
        }
    }

    pub fn config(&self) -> &RangeConfig {
        &self.config
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn record(&self, v: VarId) -> &VarRecord {
        &self.vars[v.index()]
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    fn push_trail(&mut self, e: TrailEntry) {
        self.trail.push(e);
        if self.trail.len() > self.stats.trail_peak {
            self.stats.trail_peak = self.trail.len();
        }
    }

    /// A fresh variable ranging over the default universe.
    pub fn new_var(&mut self) -> FdTerm {
        let id = VarId(u32::try_from(self.vars.len()).expect("too many variables"));
        self.vars.push(VarRecord {
            range: self.config.full(),
            chains: PChains::empty(),
        });
        self.push_trail(TrailEntry::NewVar);
        self.stats.vars_created += 1;
        FdTerm::Var(id)
    }

    /// A fresh variable told into `lo..hi`.
    pub fn new_var_in(&mut self, lo: i64, hi: i64) -> FdResult<FdTerm> {
        let v = self.new_var();
        let r = self.config.int_interval(lo, hi).ok_or(Fail::Inconsistent)?;
        self.tell_range(v, &r)?;
        Ok(v)
    }

    pub fn get_range(&self, t: FdTerm) -> Range {
        match t {
            FdTerm::Var(v) => self.vars[v.index()].range.clone(),
            FdTerm::Int(n) => self
                .config
                .from_values([n])
                .unwrap_or_else(|| RangeConfig::open().singleton(n).expect("open singleton")),
        }
    }

    /// Borrowed range of a variable.
    #[inline]
    pub fn range(&self, v: VarId) -> &Range {
        &self.vars[v.index()].range
    }

    #[inline]
    pub fn min(&self, t: FdTerm) -> Bound {
        match t {
            FdTerm::Var(v) => self.range(v).min(),
            FdTerm::Int(n) => Bound::Finite(n),
        }
    }

    #[inline]
    pub fn max(&self, t: FdTerm) -> Bound {
        match t {
            FdTerm::Var(v) => self.range(v).max(),
            FdTerm::Int(n) => Bound::Finite(n),
        }
    }

    /// The value of `t` if its range is a singleton.
    #[inline]
    pub fn value(&self, t: FdTerm) -> Option<i64> {
        match t {
            FdTerm::Var(v) => self.range(v).singleton_value(),
            FdTerm::Int(n) => Some(n),
        }
    }

    pub fn is_fixed(&self, t: FdTerm) -> bool {
        self.value(t).is_some()
    }

    pub fn size(&self, t: FdTerm) -> Cardinality {
        match t {
            FdTerm::Var(v) => self.range(v).size(),
            FdTerm::Int(_) => Cardinality::Finite(1),
        }
    }

    pub fn contains(&self, t: FdTerm, value: i64) -> bool {
        match t {
            FdTerm::Var(v) => self.range(v).contains(value),
            FdTerm::Int(n) => n == value,
        }
    }

    /// Narrows `t` to `range ∩ r` and wakes the chains of every event the
    /// change produces. Nested propagation runs to completion before return.
    pub fn tell_range(&mut self, t: FdTerm, r: &Range) -> FdResult {
        self.stats.tells += 1;
        let v = match t {
            FdTerm::Int(n) => {
                if r.contains(n) {
                    self.stats.tell_noops += 1;
                    return Ok(());
                }
                self.stats.tell_failures += 1;
                self.stats.failures += 1;
                return Err(Fail::Inconsistent);
            }
            FdTerm::Var(v) => v,
        };
        let old = &self.vars[v.index()].range;
        let new = match old.intersect(r) {
            Ok(new) => new,
            Err(e) => {
                if e.is_inconsistent() {
                    self.stats.tell_failures += 1;
                    self.stats.failures += 1;
                }
                return Err(e);
            }
        };
        if new == *old {
            self.stats.tell_noops += 1;
            return Ok(());
        }
        self.stats.tell_writes += 1;
        self.set_range_and_propagate(v, new)
    }

    /// Tells `t` into `lo..hi`.
    pub fn tell_interval(&mut self, t: FdTerm, lo: Bound, hi: Bound) -> FdResult {
        match self.config.interval(lo, hi) {
            Some(r) => self.tell_range(t, &r),
            None => {
                self.stats.tells += 1;
                self.stats.tell_failures += 1;
                self.stats.failures += 1;
                Err(Fail::Inconsistent)
            }
        }
    }

    /// Binds `t` to `value`.
    pub fn tell_value(&mut self, t: FdTerm, value: i64) -> FdResult {
        self.tell_interval(t, Bound::Finite(value), Bound::Finite(value))
    }

    /// Removes `value` from the range of `t`.
    pub fn prune(&mut self, t: FdTerm, value: i64) -> FdResult {
        self.stats.prunes += 1;
        let v = match t {
            FdTerm::Int(n) if n == value => {
                self.stats.failures += 1;
                return Err(Fail::Inconsistent);
            }
            FdTerm::Int(_) => return Ok(()),
            FdTerm::Var(v) => v,
        };
        let old = &self.vars[v.index()].range;
        if !old.contains(value) {
            return Ok(());
        }
        match old.remove(value) {
            Some(new) => {
                self.stats.prune_writes += 1;
                self.set_range_and_propagate(v, new)
            }
            None => {
                self.stats.failures += 1;
                Err(Fail::Inconsistent)
            }
        }
    }

    fn set_range_and_propagate(&mut self, v: VarId, new: Range) -> FdResult {
        let events = events_from(&self.vars[v.index()].range, &new);
        let old = mem::replace(&mut self.vars[v.index()].range, new);
        self.push_trail(TrailEntry::Range { var: v, old });
        for c in ChainType::WAKE_ORDER {
            if events.contains(c) {
                self.execute_chain(v, c)?;
            }
        }
        Ok(())
    }

    /// Runs the propagators present in chain `c` of `v` when the call starts,
    /// in insertion order; stops at the first failure.
    pub fn execute_chain(&mut self, v: VarId, c: ChainType) -> FdResult {
        let n = self.vars[v.index()].chains.len(c);
        for i in 0..n {
            let Some(goal) = self.vars[v.index()].chains.goal_at(c, i) else {
                break;
            };
            self.stats.executions[c.index()] += 1;
            goal(self)?;
        }
        Ok(())
    }

    /// Wraps a goal into a propagator with a fresh identity.
    pub fn new_propagator(&mut self, goal: Goal) -> Propagator {
        self.next_prop += 1;
        Propagator::new(PropId(self.next_prop), goal)
    }

    /// Appends `p` to chain `c` of `t`. Integers never change, so adding to
    /// an `Int` term is a no-op.
    pub fn add_propag(&mut self, t: FdTerm, c: ChainType, p: &Propagator) -> Result<(), ContractError> {
        let FdTerm::Var(v) = t else {
            return Ok(());
        };
        self.vars[v.index()].chains.add(c, p.clone())?;
        self.push_trail(TrailEntry::Chain { var: v, chain: c });
        Ok(())
    }

    /// Convenience: wraps `f` and subscribes it to chain `c` of `t`.
    pub fn watch<F>(&mut self, t: FdTerm, c: ChainType, f: F) -> Propagator
    where
        F: Fn(&mut VarStore) -> FdResult + 'static,
    {
        let p = self.new_propagator(Rc::new(f));
        self.add_propag(t, c, &p).expect("fresh propagator id");
        p
    }

    /// The value of a term whose range is a singleton.
    pub fn integerize(&self, t: FdTerm) -> Result<i64, ContractError> {
        match t {
            FdTerm::Int(n) => Ok(n),
            FdTerm::Var(v) => self.range(v).singleton_to_bound(),
        }
    }

    pub fn new_cell(&mut self) -> CellId {
        let id = CellId(u32::try_from(self.cells.len()).expect("too many cells"));
        self.cells.push(None);
        self.push_trail(TrailEntry::NewCell);
        id
    }

    pub fn cell(&self, c: CellId) -> Option<i64> {
        self.cells[c.0 as usize]
    }

    pub fn set_cell(&mut self, c: CellId, value: Option<i64>) {
        let old = mem::replace(&mut self.cells[c.0 as usize], value);
        self.push_trail(TrailEntry::Cell { cell: c, old });
    }

    /// Records a choice point.
    pub fn mark(&mut self) -> ChoiceMark {
        self.next_serial += 1;
        let m = ChoiceMark {
            serial: self.next_serial,
            trail_len: self.trail.len(),
        };
        self.marks.push(m);
        m
    }

    fn mark_position(&self, m: ChoiceMark) -> Result<usize, ContractError> {
        self.marks
            .iter()
            .rposition(|x| *x == m)
            .filter(|_| m.trail_len <= self.trail.len())
            .ok_or(ContractError::StaleMark)
    }

    /// Restores the state at `m`. `m` stays valid; marks taken after it
    /// become stale.
    pub fn undo_to(&mut self, m: ChoiceMark) -> Result<(), ContractError> {
        let pos = self.mark_position(m)?;
        self.marks.truncate(pos + 1);
        while self.trail.len() > m.trail_len {
            match self.trail.pop().expect("non-empty trail") {
                TrailEntry::Range { var, old } => self.vars[var.index()].range = old,
                TrailEntry::Chain { var, chain } => self.vars[var.index()].chains.pop(chain),
                TrailEntry::NewVar => {
                    self.vars.pop();
                }
                TrailEntry::Cell { cell, old } => self.cells[cell.0 as usize] = old,
                TrailEntry::NewCell => {
                    self.cells.pop();
                }
            }
        }
        Ok(())
    }

    /// Forgets `m` (and every later mark) without undoing anything.
    pub fn release(&mut self, m: ChoiceMark) -> Result<(), ContractError> {
        let pos = self.mark_position(m)?;
        self.marks.truncate(pos);
        Ok(())
    }

    pub fn snapshot(&self) -> StoreSnapshot {
        StoreSnapshot {
            ranges: self.vars.iter().map(|r| r.range.clone()).collect(),
            chains: self
                .vars
                .iter()
                .map(|r| ChainType::ALL.map(|c| r.chains.ids(c)))
                .collect(),
            cells: self.cells.clone(),
        }
    }
}
