//! Backward breadth-first conformant planning over symbolic state–plan tables.
//!
//! Level `i` is one function over the state variables and the plan blocks
//! `π[i], …, π[1]`: an assignment to the plan blocks selects a plan of length
//! `i`, and the remaining function over `x` is the largest belief state from
//! which that plan is guaranteed to reach the goal.

use std::fmt;
use std::time::{Duration, Instant};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dd::{Assignment, Bdd, DdError, NodeStore, VarId};
use crate::lang::{ExplicitModel, State};
use crate::oracle::{self, OracleError};
use crate::symdomain::{SymError, SymbolicDomain};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("the initial belief state is empty")]
    EmptyInitial,
    #[error("the goal is unsatisfiable")]
    EmptyGoal,
    #[error("level {level}: {source}")]
    Resource { level: usize, source: DdError },
    #[error("plan block {block} does not select exactly one action")]
    NotOneHot { block: usize },
    #[error(transparent)]
    Symbolic(#[from] SymError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<DdError> for PlanError {
    fn from(source: DdError) -> Self {
        PlanError::Symbolic(SymError::Dd(source))
    }
}

fn at_level(level: usize) -> impl Fn(SymError) -> PlanError {
    move |e| match e {
        SymError::Dd(source) => PlanError::Resource { level, source },
        other => PlanError::Symbolic(other),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlannerOptions {
    /// Stop after this many levels; 0 means no limit.
    pub max_depth: usize,
    pub prune: bool,
    /// Number of plans decoded from the final solution relation.
    pub all_plans: usize,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        PlannerOptions {
            max_depth: 0,
            prune: true,
            all_plans: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Plan,
    Fail,
    /// The depth limit was reached before a plan or a fixpoint.
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plan => "PLAN",
            Outcome::Fail => "FAIL",
            Outcome::Unknown => "UNKNOWN",
        })
    }
}

/// An action sequence, first executed action first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Plan(pub Vec<String>);

impl Plan {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn actions(&self) -> &[String] {
        &self.0
    }

    /// Parses `a;b;c`. Blank input is the empty plan.
    pub fn parse(text: &str) -> Plan {
        Plan(
            text.split(';')
                .map(str::trim)
                .filter(|a| !a.is_empty())
                .map(String::from)
                .collect(),
        )
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(";"))
    }
}

/// One search level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BsPTable {
    pub level: usize,
    pub relation: Bdd,
}

impl BsPTable {
    pub fn is_empty(&self) -> bool {
        self.relation.is_false()
    }
}

/// Belief states retained so far, compared by handle.
#[derive(Debug, Clone, Default)]
pub struct BeliefCache {
    seen: FxHashSet<Bdd>,
    inserted: u64,
    hits: u64,
}

impl BeliefCache {
    pub fn new() -> Self {
        BeliefCache::default()
    }

    /// Inserts `belief`, returning false when it was already present.
    pub fn insert(&mut self, belief: Bdd) -> bool {
        let fresh = self.seen.insert(belief);
        if fresh {
            self.inserted += 1;
        }
        fresh
    }

    pub fn contains(&self, belief: Bdd) -> bool {
        self.seen.contains(&belief)
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    pub fn inserted(&self) -> u64 {
        self.inserted
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: usize,
    pub relation_nodes: usize,
    /// Plans indexing a nonempty belief state after pruning.
    pub plans_kept: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: Outcome,
    pub plans: Vec<Plan>,
    /// Last level built.
    pub level: usize,
    pub bs_inserted: u64,
    pub bs_hits: u64,
    pub levels: Vec<LevelStats>,
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn plan(&self) -> Option<&Plan> {
        self.plans.first()
    }

    pub fn length(&self) -> Option<usize> {
        (self.outcome == Outcome::Plan).then_some(self.level)
    }
}

/// All plan variables of levels `1..=level`.
fn plan_vars(dom: &SymbolicDomain, level: usize) -> Vec<VarId> {
    dom.vars.plan_blocks[..level].iter().flatten().copied().collect()
}

fn level_stats(store: &mut NodeStore, dom: &SymbolicDomain, table: &BsPTable) -> Result<LevelStats, PlanError> {
    let index = store.exists_cube(dom.x_cube, table.relation)?;
    Ok(LevelStats {
        level: table.level,
        relation_nodes: store.node_count(table.relation)?,
        plans_kept: store.sat_count(index, &plan_vars(dom, table.level))?,
    })
}

/// Runs the search until a plan is found, the table empties, or the depth
/// limit is reached.
pub fn conformant_plan(
    store: &mut NodeStore,
    dom: &mut SymbolicDomain,
    opts: &PlannerOptions,
) -> Result<SearchReport, PlanError> {
    let start = Instant::now();
    if dom.init.is_false() {
        return Err(PlanError::EmptyInitial);
    }
    if dom.goal.is_false() {
        return Err(PlanError::EmptyGoal);
    }
    let mut cache = BeliefCache::new();
    let mut table = BsPTable {
        level: 0,
        relation: dom.goal,
    };
    if opts.prune {
        cache.insert(dom.goal);
    }
    let mut levels = vec![level_stats(store, dom, &table)?];
    let mut solutions = extract(store, dom, &table)?;
    while !table.is_empty() && solutions.is_false() {
        if opts.max_depth > 0 && table.level >= opts.max_depth {
            return Ok(SearchReport {
                outcome: Outcome::Unknown,
                plans: Vec::new(),
                level: table.level,
                bs_inserted: cache.inserted(),
                bs_hits: cache.hits(),
                levels,
                elapsed: start.elapsed(),
            });
        }
        table = expand(store, dom, &table)?;
        if opts.prune {
            table = prune(store, dom, &table, &mut cache)?;
        }
        levels.push(level_stats(store, dom, &table)?);
        solutions = extract(store, dom, &table)?;
    }
    let (outcome, plans) = if solutions.is_false() {
        (Outcome::Fail, Vec::new())
    } else {
        let plans = decode_solutions(store, dom, solutions, table.level, opts.all_plans.max(1))?;
        (Outcome::Plan, plans)
    };
    Ok(SearchReport {
        outcome,
        plans,
        level: table.level,
        bs_inserted: cache.inserted(),
        bs_hits: cache.hits(),
        levels,
        elapsed: start.elapsed(),
    })
}

/// Strong pre-image of the whole table, with `α` renamed to a fresh block.
pub fn expand(store: &mut NodeStore, dom: &mut SymbolicDomain, table: &BsPTable) -> Result<BsPTable, PlanError> {
    let level = table.level + 1;
    while dom.vars.plan_blocks.len() < level {
        dom.new_plan_block(store).map_err(at_level(level))?;
    }
    let pre = dom.strong_preimage_all(store, table.relation).map_err(at_level(level))?;
    let block = dom.plan_block(level).to_vec();
    let relation = store
        .rename(pre, &dom.vars.alpha, &block)
        .map_err(|source| PlanError::Resource { level, source })?;
    Ok(BsPTable { level, relation })
}

struct Pruner<'a> {
    store: &'a mut NodeStore,
    cache: &'a mut BeliefCache,
    is_state: Vec<bool>,
    visited: FxHashSet<Bdd>,
    paths: FxHashMap<Bdd, u64>,
}

impl Pruner<'_> {
    /// `Some((var, low, high))` for a node testing a plan variable.
    fn plan_node(&self, f: Bdd) -> Result<Option<(VarId, Bdd, Bdd)>, DdError> {
        Ok(self.store.node(f)?.filter(|(v, _, _)| !self.is_state[v.index()]))
    }

    fn walk(&mut self, f: Bdd) -> Result<Bdd, DdError> {
        if f.is_false() {
            return Ok(f);
        }
        let Some((var, low, high)) = self.plan_node(f)? else {
            if self.cache.insert(f) {
                return Ok(f);
            }
            self.cache.hits += 1;
            return Ok(self.store.ff());
        };
        if !self.visited.insert(f) {
            // Every belief below was met on the first visit.
            let n = self.count_paths(f)?;
            self.cache.hits += n;
            return Ok(self.store.ff());
        }
        let high = self.walk(high)?;
        let low = self.walk(low)?;
        self.store.make_node(var, low, high)
    }

    fn count_paths(&mut self, f: Bdd) -> Result<u64, DdError> {
        if f.is_false() {
            return Ok(0);
        }
        if let Some(&n) = self.paths.get(&f) {
            return Ok(n);
        }
        let n = match self.plan_node(f)? {
            None => 1,
            Some((_, low, high)) => self.count_paths(low)?.saturating_add(self.count_paths(high)?),
        };
        self.paths.insert(f, n);
        Ok(n)
    }
}

/// Removes every plan whose belief state is already cached, and all but one
/// plan among those sharing a new belief state. The traversal takes high
/// branches first, so the plan kept is the one choosing the earliest
/// declared action at its first step, then at its second, and so on.
pub fn prune(
    store: &mut NodeStore,
    dom: &SymbolicDomain,
    table: &BsPTable,
    cache: &mut BeliefCache,
) -> Result<BsPTable, PlanError> {
    let mut is_state = vec![false; store.var_count()];
    for &v in dom.vars.x.iter().chain(&dom.vars.x_next) {
        is_state[v.index()] = true;
    }
    let mut pruner = Pruner {
        store,
        cache,
        is_state,
        visited: FxHashSet::default(),
        paths: FxHashMap::default(),
    };
    let relation = pruner.walk(table.relation).map_err(|source| PlanError::Resource {
        level: table.level,
        source,
    })?;
    Ok(BsPTable {
        level: table.level,
        relation,
    })
}

/// Plans of the table whose belief state contains every initial state, as a
/// function over the plan blocks.
pub fn extract(store: &mut NodeStore, dom: &SymbolicDomain, table: &BsPTable) -> Result<Bdd, PlanError> {
    let missing = store.not(table.relation)?;
    let uncovered = store.and_exists(dom.init, missing, dom.x_cube)?;
    Ok(store.not(uncovered)?)
}

/// Reads blocks `π[level]` down to `π[1]` into an execution-ordered plan.
pub fn decode_plan(dom: &SymbolicDomain, assignment: &Assignment, level: usize) -> Result<Plan, PlanError> {
    let mut plan = Vec::with_capacity(level);
    for i in (1..=level).rev() {
        let chosen: Vec<usize> = dom
            .plan_block(i)
            .iter()
            .enumerate()
            .filter(|(_, v)| assignment.get(v).copied().unwrap_or(false))
            .map(|(a, _)| a)
            .collect();
        match chosen.as_slice() {
            [a] => plan.push(dom.action_names[*a].clone()),
            _ => return Err(PlanError::NotOneHot { block: i }),
        }
    }
    Ok(Plan(plan))
}

/// Up to `limit` plans of the solution relation, in enumeration order.
pub fn decode_solutions(
    store: &mut NodeStore,
    dom: &SymbolicDomain,
    solutions: Bdd,
    level: usize,
    limit: usize,
) -> Result<Vec<Plan>, PlanError> {
    let vars = plan_vars(dom, level);
    store
        .enumerate_sats(solutions, &vars, limit)?
        .iter()
        .map(|a| decode_plan(dom, a, level))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Symbolic,
    Explicit,
}

/// Outcome of executing a plan from the initial belief state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub conformant: bool,
    /// The initial belief state followed by the belief after each executed step.
    pub trace: Vec<Vec<State>>,
    /// Index of the first action that is not applicable, if any.
    pub failed_step: Option<usize>,
}

/// Fluent limit for explicit verification.
pub const VERIFY_MAX_FLUENTS: usize = 24;

pub fn verify_plan<S: AsRef<str>>(
    store: &mut NodeStore,
    dom: &SymbolicDomain,
    model: &ExplicitModel,
    plan: &[S],
    mode: VerifyMode,
) -> Result<Verification, PlanError> {
    match mode {
        VerifyMode::Explicit => Ok(oracle::simulate(model, plan, VERIFY_MAX_FLUENTS)?),
        VerifyMode::Symbolic => verify_symbolic(store, dom, plan),
    }
}

pub fn verify_symbolic<S: AsRef<str>>(
    store: &mut NodeStore,
    dom: &SymbolicDomain,
    plan: &[S],
) -> Result<Verification, PlanError> {
    let actions = plan
        .iter()
        .map(|a| dom.action_index(a.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut belief = dom.init;
    let mut trace = vec![dom.decode_belief(store, belief)?];
    for (step, &a) in actions.iter().enumerate() {
        if !dom.applicable_in(store, a, belief)? {
            return Ok(Verification {
                conformant: false,
                trace,
                failed_step: Some(step),
            });
        }
        belief = dom.action_image(store, a, belief)?;
        trace.push(dom.decode_belief(store, belief)?);
    }
    Ok(Verification {
        conformant: dom.entails(store, belief, dom.goal)?,
        trace,
        failed_step: None,
    })
}

#[cfg(test)]
mod tests;
