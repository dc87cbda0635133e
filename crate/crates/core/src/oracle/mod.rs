//! Explicit-state reference search: forward breadth-first search over sets
//! of explicit states, built only on [`ExplicitModel::step`].

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::lang::{ExplicitModel, LangError, State};
use crate::par::{self, Execution};
use crate::planner::Verification;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("inconclusive: more than {bound} belief states expanded")]
    BoundExceeded { bound: usize },
    #[error(transparent)]
    Lang(#[from] LangError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of belief states expanded before giving up.
    pub bound: usize,
    /// Maximum number of fluents of an enumerable state space.
    pub max_fluents: usize,
    pub exec: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            bound: 1 << 14,
            max_fluents: 20,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOutcome {
    Plan,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub outcome: OracleOutcome,
    /// Minimal plan length when a plan exists.
    pub length: Option<usize>,
    pub plan: Option<Vec<String>>,
    pub expanded: usize,
}

/// The explicit automaton: legal states and every transition between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    pub states: Vec<State>,
    pub transitions: Vec<(State, usize, State)>,
}

/// Default fluent limit of [`enumerate_automaton`].
pub const AUTOMATON_MAX_FLUENTS: usize = 16;

pub fn enumerate_automaton(model: &ExplicitModel, max_fluents: usize) -> Result<Automaton, OracleError> {
    let table = SuccessorTable::build(model, max_fluents, Execution::default())?;
    let mut transitions = Vec::new();
    for (i, &s) in table.states.iter().enumerate() {
        for (a, next) in table.succ[i].iter().enumerate() {
            transitions.extend(next.iter().map(|&j| (s, a, table.states[j as usize])));
        }
    }
    Ok(Automaton {
        states: table.states,
        transitions,
    })
}

/// Successor lists indexed by position in the sorted legal-state vector.
struct SuccessorTable {
    states: Vec<State>,
    succ: Vec<Vec<Vec<u32>>>,
}

impl SuccessorTable {
    fn build(model: &ExplicitModel, max_fluents: usize, exec: Execution) -> Result<Self, OracleError> {
        let states = model.legal_states(max_fluents)?;
        let index: FxHashMap<State, u32> = states.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
        let rows = par::map(exec, &states, |&s| -> Result<Vec<Vec<u32>>, LangError> {
            (0..model.action_count())
                .map(|a| Ok(model.step(s, a)?.iter().map(|t| index[t]).collect()))
                .collect()
        });
        let succ = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
        Ok(SuccessorTable { states, succ })
    }

    /// Image of a belief under `a`, or `None` if `a` is inapplicable somewhere in it.
    fn image(&self, belief: &[u32], a: usize) -> Option<Vec<u32>> {
        let mut out = Vec::new();
        for &s in belief {
            let next = &self.succ[s as usize][a];
            if next.is_empty() {
                return None;
            }
            out.extend_from_slice(next);
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }
}

/// Breadth-first search from the initial belief state. The first belief
/// found inside the goal gives a plan of minimal length; an exhausted
/// frontier proves that no plan exists.
pub fn oracle_search(model: &ExplicitModel, config: &OracleConfig) -> Result<OracleResult, OracleError> {
    let table = SuccessorTable::build(model, config.max_fluents, config.exec)?;
    let is_goal: Vec<bool> = table.states.iter().map(|&s| model.is_goal(s)).collect();
    let in_goal = |b: &[u32]| b.iter().all(|&s| is_goal[s as usize]);
    let init: Vec<u32> = (0..table.states.len() as u32)
        .filter(|&i| model.is_initial(table.states[i as usize]))
        .collect();

    // Each node records its belief, parent node and the action leading to it.
    let mut nodes: Vec<(Vec<u32>, usize, usize)> = vec![(init.clone(), usize::MAX, usize::MAX)];
    let mut seen: FxHashMap<Vec<u32>, usize> = FxHashMap::default();
    seen.insert(init.clone(), 0);
    let witness = |nodes: &[(Vec<u32>, usize, usize)], mut n: usize| {
        let mut plan = Vec::new();
        while nodes[n].1 != usize::MAX {
            plan.push(model.action_names()[nodes[n].2].clone());
            n = nodes[n].1;
        }
        plan.reverse();
        plan
    };
    if in_goal(&init) {
        return Ok(OracleResult {
            outcome: OracleOutcome::Plan,
            length: Some(0),
            plan: Some(Vec::new()),
            expanded: 0,
        });
    }

    let actions: Vec<usize> = (0..model.action_count()).collect();
    let mut frontier = vec![0usize];
    let mut expanded = 0usize;
    while !frontier.is_empty() {
        if expanded + frontier.len() > config.bound {
            return Err(OracleError::BoundExceeded { bound: config.bound });
        }
        expanded += frontier.len();
        let beliefs: Vec<&[u32]> = frontier.iter().map(|&n| nodes[n].0.as_slice()).collect();
        let children = par::map(config.exec, &beliefs, |b| {
            actions.iter().map(|&a| table.image(b, a)).collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for (&parent, kids) in frontier.iter().zip(children) {
            for (a, kid) in kids.into_iter().enumerate() {
                let Some(kid) = kid else { continue };
                if seen.contains_key(&kid) {
                    continue;
                }
                let id = nodes.len();
                seen.insert(kid.clone(), id);
                let done = in_goal(&kid);
                nodes.push((kid, parent, a));
                if done {
                    let plan = witness(&nodes, id);
                    return Ok(OracleResult {
                        outcome: OracleOutcome::Plan,
                        length: Some(plan.len()),
                        plan: Some(plan),
                        expanded,
                    });
                }
                next.push(id);
            }
        }
        frontier = next;
    }
    Ok(OracleResult {
        outcome: OracleOutcome::Fail,
        length: None,
        plan: None,
        expanded,
    })
}

/// Executes `plan` from the initial belief state, recording every belief.
pub fn simulate<S: AsRef<str>>(
    model: &ExplicitModel,
    plan: &[S],
    max_fluents: usize,
) -> Result<Verification, OracleError> {
    let actions = plan
        .iter()
        .map(|a| model.action_index(a.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut belief = model.initial_states(max_fluents)?;
    let mut trace = vec![belief.clone()];
    for (step, &a) in actions.iter().enumerate() {
        let mut next = Vec::new();
        for &s in &belief {
            let succ = model.step(s, a)?;
            if succ.is_empty() {
                return Ok(Verification {
                    conformant: false,
                    trace,
                    failed_step: Some(step),
                });
            }
            next.extend(succ);
        }
        next.sort_unstable();
        next.dedup();
        belief = next;
        trace.push(belief.clone());
    }
    Ok(Verification {
        conformant: belief.iter().all(|&s| model.is_goal(s)),
        trace,
        failed_step: None,
    })
}

/// Whether `plan` is a conformant solution, by explicit simulation.
pub fn oracle_verify<S: AsRef<str>>(model: &ExplicitModel, plan: &[S]) -> Result<bool, OracleError> {
    Ok(simulate(model, plan, OracleConfig::default().max_fluents)?.conformant)
}
