//! Labeling and branch-and-bound.

use std::fmt;

use crate::constraints::{post_gt_t, post_lt_t};
use crate::error::{ContractError, Fail, FdResult};
use crate::fdvar::{ChoiceMark, FdTerm, VarStore};
use crate::ranges::Cardinality;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VarSelect {
    /// First unfixed variable in list order.
    #[default]
    Leftmost,
    /// Unfixed variable with the fewest values, ties to the lowest position.
    FirstFail,
}

/// Values are always tried in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ValSelect {
    #[default]
    Ascending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelOptions {
    pub var_select: VarSelect,
    pub val_select: ValSelect,
    /// Abort with [`ContractError::NodeLimit`] after this many value tries.
    pub node_limit: Option<u64>,
}

impl LabelOptions {
    pub fn step() -> Self {
        LabelOptions::default()
    }

    pub fn first_fail() -> Self {
        LabelOptions {
            var_select: VarSelect::FirstFail,
            ..Default::default()
        }
    }

    pub fn with_node_limit(self, limit: u64) -> Self {
        LabelOptions {
            node_limit: Some(limit),
            ..self
        }
    }

    /// `"step"` or `"ff"`.
    pub fn mode_name(&self) -> &'static str {
        match self.var_select {
            VarSelect::Leftmost => "step",
            VarSelect::FirstFail => "ff",
        }
    }

    pub fn from_mode_name(name: &str) -> Option<Self> {
        match name {
            "step" => Some(Self::step()),
            "ff" => Some(Self::first_fail()),
            _ => None,
        }
    }
}

/// A full assignment of the labeled variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    pub assignment: Vec<(FdTerm, i64)>,
}

impl Solution {
    pub fn values(&self) -> Vec<i64> {
        self.assignment.iter().map(|&(_, v)| v).collect()
    }

    pub fn value_of(&self, t: FdTerm) -> Option<i64> {
        self.assignment.iter().find(|&&(u, _)| u == t).map(|&(_, v)| v)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (_, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Values tried.
    pub nodes: u64,
    /// Tries that failed.
    pub backtracks: u64,
    pub solutions: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.backtracks += other.backtracks;
        self.solutions += other.solutions;
    }
}

struct Frame {
    var: FdTerm,
    mark: ChoiceMark,
    /// Lower bound for the next value to try.
    next: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Descend,
    Backtrack,
    Done,
}

/// Depth-first labeling, yielding solutions one at a time.
///
/// The store is left at the state of the last yielded solution while the
/// sequence is being consumed, and restored to its initial state once the
/// sequence is exhausted.
pub struct Labeling<'s> {
    store: &'s mut VarStore,
    vars: Vec<FdTerm>,
    opts: LabelOptions,
    root: ChoiceMark,
    stack: Vec<Frame>,
    state: State,
    stats: SearchStats,
}

/// Starts labeling `vars`.
pub fn labeling<'s>(store: &'s mut VarStore, opts: LabelOptions, vars: &[FdTerm]) -> Labeling<'s> {
    let root = store.mark();
    Labeling {
        store,
        vars: vars.to_vec(),
        opts,
        root,
        stack: Vec::new(),
        state: State::Descend,
        stats: SearchStats::default(),
    }
}

impl<'s> Labeling<'s> {
    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn store(&self) -> &VarStore {
        self.store
    }

    fn select(&self) -> Option<FdTerm> {
        let mut unfixed = self.vars.iter().copied().filter(|&v| !self.store.is_fixed(v));
        match self.opts.var_select {
            VarSelect::Leftmost => unfixed.next(),
            VarSelect::FirstFail => {
                let key = |v: FdTerm| match self.store.size(v) {
                    Cardinality::Finite(n) => n,
                    Cardinality::Infinite => u64::MAX,
                };
                // min_by_key keeps the first of equal keys
                unfixed.min_by_key(|&v| key(v))
            }
        }
    }

    fn capture(&self) -> Solution {
        Solution {
            assignment: self
                .vars
                .iter()
                .map(|&v| (v, self.store.value(v).expect("all labeled variables fixed")))
                .collect(),
        }
    }

    /// Tries the next value of the top frame. `Ok(true)` if a value was
    /// told successfully, `Ok(false)` if the frame is exhausted.
    fn advance_top(&mut self) -> Result<bool, ContractError> {
        loop {
            let top = self.stack.last_mut().expect("non-empty stack");
            self.store.undo_to(top.mark)?;
            let var = top.var;
            let Some(value) = self.store.get_range(var).first_at_least(top.next) else {
                return Ok(false);
            };
            top.next = value + 1;
            if let Some(limit) = self.opts.node_limit {
                if self.stats.nodes >= limit {
                    return Err(ContractError::NodeLimit(limit));
                }
            }
            self.stats.nodes += 1;
            match self.store.tell_value(var, value) {
                Ok(()) => return Ok(true),
                Err(Fail::Inconsistent) => self.stats.backtracks += 1,
                Err(Fail::Contract(e)) => return Err(e),
            }
        }
    }

    fn step(&mut self) -> Result<Option<Solution>, ContractError> {
        loop {
            match self.state {
                State::Done => return Ok(None),
                State::Descend => match self.select() {
                    None => {
                        self.state = State::Backtrack;
                        self.stats.solutions += 1;
                        return Ok(Some(self.capture()));
                    }
                    Some(var) => {
                        let mark = self.store.mark();
                        let next = match self.store.min(var).finite() {
                            Some(lo) => lo,
                            None => {
                                return Err(ContractError::InfiniteRange(self.store.get_range(var).to_string()))
                            }
                        };
                        self.stack.push(Frame { var, mark, next });
                        self.state = State::Backtrack;
                    }
                },
                State::Backtrack => {
                    if self.stack.is_empty() {
                        self.store.undo_to(self.root)?;
                        self.store.release(self.root)?;
                        self.state = State::Done;
                        return Ok(None);
                    }
                    if self.advance_top()? {
                        self.state = State::Descend;
                    } else {
                        self.stack.pop();
                    }
                }
            }
        }
    }
}

impl Iterator for Labeling<'_> {
    type Item = Result<Solution, ContractError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.step() {
            Ok(s) => s.map(Ok),
            Err(e) => {
                self.state = State::Done;
                Some(Err(e))
            }
        }
    }
}

/// The first solution, leaving the store in that state. `None` restores the
/// store and means there is no solution.
pub fn first_solution(
    store: &mut VarStore,
    opts: LabelOptions,
    vars: &[FdTerm],
) -> Result<(Option<Solution>, SearchStats), ContractError> {
    let mut l = labeling(store, opts, vars);
    let sol = l.next().transpose()?;
    Ok((sol, l.stats()))
}

/// Result of an optimization run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub solution: Solution,
    pub objective: i64,
    /// Number of improving solutions, each followed by a restart.
    pub restarts: u64,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sense {
    Min,
    Max,
}

fn optimize<G>(store: &mut VarStore, objective: FdTerm, sense: Sense, mut goal: G) -> Result<Option<Optimum>, ContractError>
where
    G: FnMut(&mut VarStore) -> Result<(Option<Solution>, SearchStats), ContractError>,
{
    let root = store.mark();
    let mut best: Option<(Solution, i64)> = None;
    let mut restarts = 0;
    let mut stats = SearchStats::default();
    loop {
        let (sol, s) = goal(store)?;
        stats.absorb(s);
        let Some(sol) = sol else { break };
        let v = store.integerize(objective)?;
        best = Some((sol, v));
        store.undo_to(root)?;
        restarts += 1;
        let bound: FdResult = match sense {
            Sense::Min => post_lt_t(store, objective, v),
            Sense::Max => post_gt_t(store, objective, v),
        };
        match bound {
            Ok(()) => {}
            Err(Fail::Inconsistent) => break,
            Err(Fail::Contract(e)) => return Err(e),
        }
    }
    store.undo_to(root)?;
    store.release(root)?;
    Ok(best.map(|(solution, objective)| Optimum {
        solution,
        objective,
        restarts,
        stats,
    }))
}

/// Branch-and-bound with restart: finds a solution with `goal`, then
/// restarts from the initial state with `objective < best` until no
/// solution remains. The store is restored on return.
pub fn minimize<G>(store: &mut VarStore, objective: FdTerm, goal: G) -> Result<Option<Optimum>, ContractError>
where
    G: FnMut(&mut VarStore) -> Result<(Option<Solution>, SearchStats), ContractError>,
{
    optimize(store, objective, Sense::Min, goal)
}

/// Like [`minimize`], with `objective > best`.
pub fn maximize<G>(store: &mut VarStore, objective: FdTerm, goal: G) -> Result<Option<Optimum>, ContractError>
where
    G: FnMut(&mut VarStore) -> Result<(Option<Solution>, SearchStats), ContractError>,
{
    optimize(store, objective, Sense::Max, goal)
}

/// [`minimize`] with labeling of `vars` as the search goal.
pub fn minimize_labeling(
    store: &mut VarStore,
    opts: LabelOptions,
    vars: &[FdTerm],
    objective: FdTerm,
) -> Result<Option<Optimum>, ContractError> {
    minimize(store, objective, |s| first_solution(s, opts, vars))
}

/// [`maximize`] with labeling of `vars` as the search goal.
pub fn maximize_labeling(
    store: &mut VarStore,
    opts: LabelOptions,
    vars: &[FdTerm],
    objective: FdTerm,
) -> Result<Option<Optimum>, ContractError> {
    maximize(store, objective, |s| first_solution(s, opts, vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{post_neq_vv, post_plus_eq};
    use crate::ranges::RangeConfig;

    fn all(store: &mut VarStore, opts: LabelOptions, vars: &[FdTerm]) -> Vec<Vec<i64>> {
        labeling(store, opts, vars).map(|s| s.unwrap().values()).collect()
    }

    #[test]
    fn step_order_with_disequality() {
        let mut s = VarStore::default();
        let a = s.new_var_in(1, 2).unwrap();
        let b = s.new_var_in(1, 2).unwrap();
        post_neq_vv(&mut s, a, b).unwrap();
        assert_eq!(all(&mut s, LabelOptions::step(), &[a, b]), vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn single_fixed_variable() {
        let mut s = VarStore::default();
        let a = s.new_var_in(3, 3).unwrap();
        assert_eq!(all(&mut s, LabelOptions::step(), &[a]), vec![vec![3]]);
    }

    #[test]
    fn exhaustion_restores_the_store() {
        let mut s = VarStore::default();
        let a = s.new_var_in(1, 3).unwrap();
        let b = s.new_var_in(1, 3).unwrap();
        let before = s.snapshot();
        assert_eq!(all(&mut s, LabelOptions::first_fail(), &[a, b]).len(), 9);
        assert_eq!(s.snapshot(), before);
    }

    #[test]
    fn first_fail_prefers_small_domains_then_position() {
        let mut s = VarStore::default();
        let a = s.new_var_in(1, 3).unwrap();
        let b = s.new_var_in(1, 2).unwrap();
        let c = s.new_var_in(5, 6).unwrap();
        let sols = all(&mut s, LabelOptions::first_fail(), &[a, b, c]);
        // b is labeled first, then c (tie with a after b, a has 3 values)
        assert_eq!(sols[..3], [vec![1, 1, 5], vec![2, 1, 5], vec![3, 1, 5]]);
    }

    #[test]
    fn node_limit_stops_search() {
        let mut s = VarStore::default();
        let vs: Vec<_> = (0..4).map(|_| s.new_var_in(0, 9).unwrap()).collect();
        let r: Result<Vec<_>, _> = labeling(&mut s, LabelOptions::step().with_node_limit(10), &vs).collect();
        assert_eq!(r, Err(ContractError::NodeLimit(10)));
    }

    #[test]
    fn optimization_examples() {
        let mut s = VarStore::default();
        let x = s.new_var_in(3, 9).unwrap();
        let best = minimize_labeling(&mut s, LabelOptions::step(), &[x], x).unwrap().unwrap();
        assert_eq!(best.objective, 3);
        assert_eq!(best.restarts, 1);
        let best = maximize_labeling(&mut s, LabelOptions::step(), &[x], x).unwrap().unwrap();
        assert_eq!(best.objective, 9);
        assert_eq!(best.restarts, 7);

        let mut s = VarStore::new(RangeConfig::bits(64));
        let x = s.new_var_in(1, 5).unwrap();
        let y = s.new_var_in(1, 5).unwrap();
        post_plus_eq(&mut s, FdTerm::Int(6), x, y).unwrap();
        let best = minimize_labeling(&mut s, LabelOptions::step(), &[x, y], x).unwrap().unwrap();
        assert_eq!(best.solution.values(), vec![1, 5]);
    }

    #[test]
    fn optimizing_an_unsatisfiable_model() {
        let mut s = VarStore::default();
        let x = s.new_var_in(1, 1).unwrap();
        let y = s.new_var_in(1, 1).unwrap();
        let before = s.snapshot();
        assert_eq!(
            minimize(&mut s, x, |s| {
                let m = s.mark();
                let r = post_neq_vv(s, x, y);
                s.undo_to(m)?;
                s.release(m)?;
                assert!(r.is_err());
                Ok((None, SearchStats::default()))
            }),
            Ok(None)
        );
        assert_eq!(s.snapshot(), before);
    }
}
