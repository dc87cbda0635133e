use std::collections::HashMap;
use std::fmt;

use super::ast::Formula;
use super::validate::CheckedDomain;
use super::LangError;

/// Widest state the explicit side can represent.
pub const MAX_EXPLICIT_FLUENTS: usize = 64;

/// An explicit state: bit `k` holds the value of the `k`-th declared fluent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct State(pub u64);

impl State {
    pub fn holds(self, fluent: usize) -> bool {
        self.0 >> fluent & 1 == 1
    }

    pub fn with(self, fluent: usize, value: bool) -> State {
        if value {
            State(self.0 | 1 << fluent)
        } else {
            State(self.0 & !(1 << fluent))
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

#[derive(Debug, Clone)]
enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn lower(f: &Formula, index: &HashMap<&str, usize>) -> Expr {
        let b = |g: &Formula| Box::new(Expr::lower(g, index));
        match f {
            Formula::True => Expr::Const(true),
            Formula::False => Expr::Const(false),
            Formula::Fluent(id) => Expr::Var(index[id.name.as_str()]),
            Formula::Not(a) => Expr::Not(b(a)),
            Formula::And(l, r) => Expr::And(b(l), b(r)),
            Formula::Or(l, r) => Expr::Or(b(l), b(r)),
            Formula::Implies(l, r) => Expr::Implies(b(l), b(r)),
            Formula::Iff(l, r) => Expr::Iff(b(l), b(r)),
        }
    }

    fn eval(&self, s: State) -> bool {
        match self {
            Expr::Const(v) => *v,
            Expr::Var(k) => s.holds(*k),
            Expr::Not(a) => !a.eval(s),
            Expr::And(l, r) => l.eval(s) && r.eval(s),
            Expr::Or(l, r) => l.eval(s) || r.eval(s),
            Expr::Implies(l, r) => !l.eval(s) || r.eval(s),
            Expr::Iff(l, r) => l.eval(s) == r.eval(s),
        }
    }
}

#[derive(Debug, Clone)]
struct ActionRules {
    pre: Vec<Expr>,
    effects: Vec<(usize, bool, Option<Expr>)>,
    possibly: u64,
}

/// Direct interpretation of a checked description over explicit states.
///
/// A transition `(s, a, s')` exists iff `s` satisfies the preconditions of
/// `a`, both `s` and `s'` satisfy every ALWAYS formula, every causal rule
/// whose condition holds in `s` fixes its literal in `s'`, and every inertial
/// fluent that is neither caused nor listed under POSSIBLY CHANGES keeps its
/// value. All remaining fluents are free.
#[derive(Debug, Clone)]
pub struct ExplicitModel {
    fluents: Vec<String>,
    actions: Vec<String>,
    always: Vec<Expr>,
    init: Expr,
    goal: Expr,
    inertial: u64,
    rules: Vec<ActionRules>,
}

impl ExplicitModel {
    pub fn new(domain: &CheckedDomain) -> Result<Self, LangError> {
        let n = domain.fluents.len();
        if n > MAX_EXPLICIT_FLUENTS {
            return Err(LangError::TooManyFluents {
                count: n,
                limit: MAX_EXPLICIT_FLUENTS,
            });
        }
        let index: HashMap<&str, usize> = domain
            .fluents
            .iter()
            .enumerate()
            .map(|(k, f)| (f.name.as_str(), k))
            .collect();
        let mask = |ids: &[super::ast::Ident]| ids.iter().fold(0u64, |m, id| m | 1 << index[id.name.as_str()]);
        let rules = domain
            .actions
            .iter()
            .map(|a| ActionRules {
                pre: a.preconditions.iter().map(|p| Expr::lower(p, &index)).collect(),
                effects: a
                    .causes
                    .iter()
                    .map(|r| {
                        (
                            index[r.effect.fluent.name.as_str()],
                            r.effect.positive,
                            r.condition.as_ref().map(|c| Expr::lower(c, &index)),
                        )
                    })
                    .collect(),
                possibly: mask(&a.possibly_changes),
            })
            .collect();
        Ok(ExplicitModel {
            fluents: domain.fluent_names(),
            actions: domain.action_names(),
            always: domain.always.iter().map(|c| Expr::lower(c, &index)).collect(),
            init: Expr::lower(&domain.initially, &index),
            goal: Expr::lower(&domain.goal, &index),
            inertial: mask(&domain.inertial),
            rules,
        })
    }

    pub fn fluent_names(&self) -> &[String] {
        &self.fluents
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn fluent_count(&self) -> usize {
        self.fluents.len()
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn action_index(&self, name: &str) -> Result<usize, LangError> {
        self.actions
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| LangError::UnknownAction(name.to_string()))
    }

    /// The state in which exactly the named fluents hold.
    pub fn state_of(&self, true_fluents: &[&str]) -> Result<State, LangError> {
        let mut s = State(0);
        for name in true_fluents {
            let k = self
                .fluents
                .iter()
                .position(|f| f == name)
                .ok_or_else(|| LangError::UnknownFluent(name.to_string()))?;
            s = s.with(k, true);
        }
        Ok(s)
    }

    /// Names of the fluents that hold in `s`.
    pub fn true_fluents(&self, s: State) -> Vec<&str> {
        (0..self.fluents.len())
            .filter(|&k| s.holds(k))
            .map(|k| self.fluents[k].as_str())
            .collect()
    }

    fn all_mask(&self) -> u64 {
        match self.fluents.len() {
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    pub fn is_legal(&self, s: State) -> bool {
        s.0 & !self.all_mask() == 0 && self.always.iter().all(|c| c.eval(s))
    }

    pub fn is_initial(&self, s: State) -> bool {
        self.is_legal(s) && self.init.eval(s)
    }

    pub fn is_goal(&self, s: State) -> bool {
        self.is_legal(s) && self.goal.eval(s)
    }

    /// Every legal state, in increasing bit order.
    pub fn legal_states(&self, max_fluents: usize) -> Result<Vec<State>, LangError> {
        let n = self.fluents.len();
        if n > max_fluents || n >= 63 {
            return Err(LangError::TooManyFluents {
                count: n,
                limit: max_fluents.min(62),
            });
        }
        Ok((0..1u64 << n).map(State).filter(|&s| self.is_legal(s)).collect())
    }

    pub fn initial_states(&self, max_fluents: usize) -> Result<Vec<State>, LangError> {
        Ok(self
            .legal_states(max_fluents)?
            .into_iter()
            .filter(|&s| self.init.eval(s))
            .collect())
    }

    pub fn goal_states(&self, max_fluents: usize) -> Result<Vec<State>, LangError> {
        Ok(self
            .legal_states(max_fluents)?
            .into_iter()
            .filter(|&s| self.goal.eval(s))
            .collect())
    }

    /// Successors of `s` under action number `a`, sorted. Empty iff the
    /// action is not applicable in `s`.
    pub fn step(&self, s: State, a: usize) -> Result<Vec<State>, LangError> {
        if !self.is_legal(s) {
            return Err(LangError::IllegalState(s.0));
        }
        let Some(rules) = self.rules.get(a) else {
            return Err(LangError::UnknownAction(format!("#{a}")));
        };
        if !rules.pre.iter().all(|p| p.eval(s)) {
            return Ok(Vec::new());
        }
        let (mut pos, mut neg) = (0u64, 0u64);
        for (f, positive, cond) in &rules.effects {
            if cond.as_ref().is_none_or(|c| c.eval(s)) {
                if *positive {
                    pos |= 1 << f;
                } else {
                    neg |= 1 << f;
                }
            }
        }
        if pos & neg != 0 {
            return Ok(Vec::new());
        }
        let caused = pos | neg;
        let free = !caused & (!self.inertial | rules.possibly) & self.all_mask();
        let base = (s.0 & !caused & !free) | pos;
        let mut out = Vec::new();
        let mut sub = free;
        loop {
            let next = State(base | sub);
            if self.always.iter().all(|c| c.eval(next)) {
                out.push(next);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn is_applicable(&self, s: State, a: usize) -> Result<bool, LangError> {
        Ok(!self.step(s, a)?.is_empty())
    }
}

/// Successors of `s` under the named action.
pub fn explicit_step(model: &ExplicitModel, s: State, action: &str) -> Result<Vec<State>, LangError> {
    let a = model.action_index(action)?;
    model.step(s, a)
}
