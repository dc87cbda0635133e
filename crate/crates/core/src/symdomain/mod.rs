//! A planning domain as boolean functions: the state space `S(x)`, the
//! transition relation `R(x, α, x')`, initial and goal sets, `SEQ(α)` and
//! `APPLICABLE(x, α)`, with image and strong pre-image over belief states.

use thiserror::Error;

use crate::dd::{Assignment, Bdd, DdError, NodeStore, VarId};
use crate::lang::State;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("unknown fluent `{0}`")]
    UnknownFluent(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("function depends on `{0}`, which is not a current-state variable")]
    SupportLeak(String),
    #[error("applicability is undefined for the empty belief state")]
    EmptyBelief,
    #[error("a domain needs at least one action")]
    NoActions,
    #[error(transparent)]
    Dd(#[from] DdError),
}

pub type SymResult<T> = Result<T, SymError>;

/// The variable vectors of a domain. `x[k]` and `x_next[k]` encode the same
/// fluent; `alpha[a]` and every plan block `plan_blocks[i][a]` encode action `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableVectors {
    pub x: Vec<VarId>,
    pub x_next: Vec<VarId>,
    pub alpha: Vec<VarId>,
    pub plan_blocks: Vec<Vec<VarId>>,
}

#[derive(Debug, Clone)]
pub struct SymbolicDomain {
    pub vars: VariableVectors,
    pub states: Bdd,
    pub trans: Bdd,
    pub init: Bdd,
    pub goal: Bdd,
    pub applicable: Bdd,
    pub seq: Bdd,
    pub action_names: Vec<String>,
    pub fluent_names: Vec<String>,
    pub(crate) x_cube: Bdd,
    pub(crate) x_next_cube: Bdd,
    pub(crate) alpha_cube: Bdd,
}

/// One-hot constraint over `alpha`: exactly one action variable is true.
pub fn build_seq(store: &mut NodeStore, alpha: &[VarId]) -> SymResult<Bdd> {
    if alpha.is_empty() {
        return Err(SymError::NoActions);
    }
    // Scan from the bottom of the order: `none` holds when no variable below
    // is set, `one` when exactly one is.
    let mut sorted = alpha.to_vec();
    sorted.sort_by_key(|&v| store.level(v).unwrap_or(u32::MAX));
    let (mut none, mut one) = (store.tt(), store.ff());
    for &v in sorted.iter().rev() {
        let lit = store.var(v)?;
        let nlit = store.nvar(v)?;
        let new_one_a = store.and(lit, none)?;
        let new_one_b = store.and(nlit, one)?;
        one = store.or(new_one_a, new_one_b)?;
        none = store.and(nlit, none)?;
    }
    Ok(one)
}

impl SymbolicDomain {
    pub(crate) fn assemble(
        store: &mut NodeStore,
        vars: VariableVectors,
        parts: DomainParts,
        action_names: Vec<String>,
        fluent_names: Vec<String>,
    ) -> SymResult<Self> {
        let x_cube = store.cube(&vars.x)?;
        let x_next_cube = store.cube(&vars.x_next)?;
        let alpha_cube = store.cube(&vars.alpha)?;
        let applicable = store.exists_cube(x_next_cube, parts.trans)?;
        Ok(SymbolicDomain {
            vars,
            states: parts.states,
            trans: parts.trans,
            init: parts.init,
            goal: parts.goal,
            applicable,
            seq: parts.seq,
            action_names,
            fluent_names,
            x_cube,
            x_next_cube,
            alpha_cube,
        })
    }

    pub fn fluent_index(&self, name: &str) -> SymResult<usize> {
        self.fluent_names
            .iter()
            .position(|f| f == name)
            .ok_or_else(|| SymError::UnknownFluent(name.to_string()))
    }

    pub fn action_index(&self, name: &str) -> SymResult<usize> {
        self.action_names
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| SymError::UnknownAction(name.to_string()))
    }

    fn check_action(&self, a: usize) -> SymResult<()> {
        if a < self.action_names.len() {
            Ok(())
        } else {
            Err(SymError::UnknownAction(format!("#{a}")))
        }
    }

    /// The state in which exactly `true_fluents` hold, as one literal per fluent.
    pub fn encode_state(&self, store: &mut NodeStore, true_fluents: &[&str]) -> SymResult<Bdd> {
        let mut s = State(0);
        for name in true_fluents {
            s = s.with(self.fluent_index(name)?, true);
        }
        self.encode_bits(store, s)
    }

    pub fn encode_bits(&self, store: &mut NodeStore, s: State) -> SymResult<Bdd> {
        let mut f = store.tt();
        for (k, &v) in self.vars.x.iter().enumerate().rev() {
            let lit = store.literal(v, s.holds(k))?;
            f = store.and(lit, f)?;
        }
        Ok(f)
    }

    pub fn encode_belief(&self, store: &mut NodeStore, states: &[State]) -> SymResult<Bdd> {
        let mut f = store.ff();
        for &s in states {
            let e = self.encode_bits(store, s)?;
            f = store.or(f, e)?;
        }
        Ok(f)
    }

    /// The legal states satisfying `f`, sorted.
    pub fn decode_belief(&self, store: &mut NodeStore, f: Bdd) -> SymResult<Vec<State>> {
        self.check_support(store, f, &self.vars.x)?;
        let legal = store.and(f, self.states)?;
        let sats = store.enumerate_sats(legal, &self.vars.x, usize::MAX)?;
        let mut out: Vec<State> = sats.iter().map(|a| self.state_from(a, &self.vars.x)).collect();
        out.sort_unstable();
        Ok(out)
    }

    fn state_from(&self, a: &Assignment, vars: &[VarId]) -> State {
        vars.iter()
            .enumerate()
            .fold(State(0), |s, (k, v)| s.with(k, a.get(v).copied().unwrap_or(false)))
    }

    fn check_support(&self, store: &NodeStore, f: Bdd, allowed: &[VarId]) -> SymResult<()> {
        for v in store.support(f)? {
            if !allowed.contains(&v) {
                return Err(SymError::SupportLeak(store.var_name(v).to_string()));
            }
        }
        Ok(())
    }

    /// All `(s, a, s')` triples of the transition relation.
    pub fn decode_trans(&self, store: &mut NodeStore) -> SymResult<Vec<(State, usize, State)>> {
        let mut over = self.vars.x.clone();
        over.extend(&self.vars.alpha);
        over.extend(&self.vars.x_next);
        let sats = store.enumerate_sats(self.trans, &over, usize::MAX)?;
        let mut out: Vec<_> = sats
            .iter()
            .map(|a| {
                let action = self
                    .vars
                    .alpha
                    .iter()
                    .position(|v| a[v])
                    .expect("transitions satisfy SEQ");
                (self.state_from(a, &self.vars.x), action, self.state_from(a, &self.vars.x_next))
            })
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Assignment to `alpha` selecting exactly action `a`.
    fn one_hot(&self, vars: &[VarId], a: usize) -> Vec<(VarId, bool)> {
        vars.iter().enumerate().map(|(k, &v)| (v, k == a)).collect()
    }

    /// Restricts a relation over `(x, α)` to action `a`.
    pub fn project_action(&self, store: &mut NodeStore, rel: Bdd, a: usize) -> SymResult<Bdd> {
        self.check_action(a)?;
        let fixed = self.one_hot(&self.vars.alpha, a);
        Ok(store.restrict_all(rel, &fixed)?)
    }

    /// Moves a function over `x` (and any other variables) onto `x'`.
    pub fn shift_forward(&self, store: &mut NodeStore, f: Bdd) -> SymResult<Bdd> {
        Ok(store.rename(f, &self.vars.x, &self.vars.x_next)?)
    }

    pub fn shift_backward(&self, store: &mut NodeStore, f: Bdd) -> SymResult<Bdd> {
        Ok(store.rename(f, &self.vars.x_next, &self.vars.x)?)
    }

    /// States reachable from `q` in one step of any action.
    pub fn forward_image(&self, store: &mut NodeStore, q: Bdd) -> SymResult<Bdd> {
        self.check_support(store, q, &self.vars.x)?;
        let cube = store.and(self.x_cube, self.alpha_cube)?;
        let next = store.and_exists(self.trans, q, cube)?;
        self.shift_backward(store, next)
    }

    /// Image of `bs` under action `a`.
    pub fn action_image(&self, store: &mut NodeStore, a: usize, bs: Bdd) -> SymResult<Bdd> {
        self.check_support(store, bs, &self.vars.x)?;
        let r = self.project_action(store, self.trans, a)?;
        let next = store.and_exists(r, bs, self.x_cube)?;
        self.shift_backward(store, next)
    }

    /// Pairs `(s, a)` such that `a` is applicable in `s` and every outcome
    /// lies in `q`. Variables of `q` outside `x` are carried through.
    pub fn strong_preimage_all(&self, store: &mut NodeStore, q: Bdd) -> SymResult<Bdd> {
        let shifted = self.shift_forward(store, q)?;
        let outside = store.not(shifted)?;
        let escapes = store.and_exists(self.trans, outside, self.x_next_cube)?;
        let stays = store.not(escapes)?;
        Ok(store.and(stays, self.applicable)?)
    }

    /// Whether `a` is applicable in every state of the nonempty belief `bs`.
    pub fn applicable_in(&self, store: &mut NodeStore, a: usize, bs: Bdd) -> SymResult<bool> {
        self.check_support(store, bs, &self.vars.x)?;
        let legal = store.and(bs, self.states)?;
        if legal.is_false() {
            return Err(SymError::EmptyBelief);
        }
        let app = self.project_action(store, self.applicable, a)?;
        let missing = store.not(app)?;
        Ok(store.and(legal, missing)?.is_false())
    }

    /// Whether every state of `bs` satisfies `goal`.
    pub fn entails(&self, store: &mut NodeStore, bs: Bdd, goal: Bdd) -> SymResult<bool> {
        let outside = store.not(goal)?;
        Ok(store.and(bs, outside)?.is_false())
    }

    /// Allocates the next plan block `π[i]`, placed right below the action
    /// variables and above `π[i-1]`. Returns `i` (1-based).
    pub fn new_plan_block(&mut self, store: &mut NodeStore) -> SymResult<usize> {
        let i = self.vars.plan_blocks.len() + 1;
        let anchor = match self.vars.plan_blocks.last() {
            Some(prev) => prev.first().copied(),
            None => self.vars.x.first().copied(),
        };
        let mut block = Vec::with_capacity(self.vars.alpha.len());
        for name in &self.action_names {
            let label = format!("{name}@{i}");
            let v = match anchor {
                Some(anchor) => store.new_var_before(label, anchor)?,
                None => store.new_var(label),
            };
            block.push(v);
        }
        self.vars.plan_blocks.push(block);
        Ok(i)
    }

    /// Block `π[i]`, 1-based.
    pub fn plan_block(&self, i: usize) -> &[VarId] {
        &self.vars.plan_blocks[i - 1]
    }
}

pub(crate) struct DomainParts {
    pub states: Bdd,
    pub trans: Bdd,
    pub init: Bdd,
    pub goal: Bdd,
    pub seq: Bdd,
}
