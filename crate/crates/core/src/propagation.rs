//! Propagation chains: per-variable lists of suspended goals, one list per
//! kind of domain event.

use std::fmt;
use std::rc::Rc;

use crate::error::{ContractError, FdResult};
use crate::fdvar::VarStore;
use crate::ranges::Range;

/// The four domain events a goal can wait on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainType {
    /// The range changed.
    Dom,
    /// The minimum changed.
    Min,
    /// The maximum changed.
    Max,
    /// The range just became a singleton.
    Val,
}

impl ChainType {
    pub const ALL: [ChainType; 4] = [ChainType::Dom, ChainType::Min, ChainType::Max, ChainType::Val];

    /// Order in which the chains of one range change are woken.
    pub const WAKE_ORDER: [ChainType; 4] =
        [ChainType::Val, ChainType::Min, ChainType::Max, ChainType::Dom];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ChainType::Dom => "dom",
            ChainType::Min => "min",
            ChainType::Max => "max",
            ChainType::Val => "val",
        }
    }
}

impl fmt::Display for ChainType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of [`ChainType`]s.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Events(u8);

impl Events {
    pub const NONE: Events = Events(0);

    pub fn of(chains: &[ChainType]) -> Events {
        chains.iter().fold(Events::NONE, |e, &c| e.with(c))
    }

    #[inline]
    pub fn with(self, c: ChainType) -> Events {
        Events(self.0 | 1 << c.index())
    }

    #[inline]
    pub fn contains(self, c: ChainType) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = ChainType> {
        ChainType::ALL.into_iter().filter(move |&c| self.contains(c))
    }
}

/// Classifies the change from `old` to `new` (where `new ⊆ old`).
pub fn events_from(old: &Range, new: &Range) -> Events {
    if old == new {
        return Events::NONE;
    }
    let mut ev = Events::NONE.with(ChainType::Dom);
    if old.min() != new.min() {
        ev = ev.with(ChainType::Min);
    }
    if old.max() != new.max() {
        ev = ev.with(ChainType::Max);
    }
    if new.is_singleton() && !old.is_singleton() {
        ev = ev.with(ChainType::Val);
    }
    ev
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropId(pub(crate) u64);

impl PropId {
    pub fn get(self) -> u64 {
        self.0
    }
}

/// Deferred operation run when a chain wakes up.
pub type Goal = Rc<dyn Fn(&mut VarStore) -> FdResult>;

/// A goal with a store-unique identity.
#[derive(Clone)]
pub struct Propagator {
    id: PropId,
    goal: Goal,
}

impl Propagator {
    pub(crate) fn new(id: PropId, goal: Goal) -> Self {
        Propagator { id, goal }
    }

    pub fn id(&self) -> PropId {
        self.id
    }

    pub fn goal(&self) -> &Goal {
        &self.goal
    }

    pub fn run(&self, store: &mut VarStore) -> FdResult {
        (self.goal)(store)
    }
}

impl fmt::Debug for Propagator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Propagator#{}", self.id.0)
    }
}

/// One chain of propagators per [`ChainType`], each in insertion order.
#[derive(Debug, Clone, Default)]
pub struct PChains {
    chains: [Vec<Propagator>; 4],
}

impl PChains {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn add(&mut self, c: ChainType, p: Propagator) -> Result<(), ContractError> {
        let chain = &mut self.chains[c.index()];
        if chain.iter().any(|q| q.id == p.id) {
            return Err(ContractError::DuplicatePropagator(p.id.0));
        }
        chain.push(p);
        Ok(())
    }

    pub fn chain(&self, c: ChainType) -> &[Propagator] {
        &self.chains[c.index()]
    }

    #[inline]
    pub fn len(&self, c: ChainType) -> usize {
        self.chains[c.index()].len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.iter().all(Vec::is_empty)
    }

    /// Goal at `i` in chain `c`, if any.
    #[inline]
    pub(crate) fn goal_at(&self, c: ChainType, i: usize) -> Option<Goal> {
        self.chains[c.index()].get(i).map(|p| p.goal.clone())
    }

    pub(crate) fn pop(&mut self, c: ChainType) {
        self.chains[c.index()].pop();
    }

    pub fn ids(&self, c: ChainType) -> Vec<PropId> {
        self.chain(c).iter().map(|p| p.id).collect()
    }
}
