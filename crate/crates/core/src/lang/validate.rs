use std::ops::Deref;

use super::ast::DomainAst;
use super::compile::formula_to_bdd;
use super::LangError;
use crate::dd::{NodeStore, StoreConfig, VarId};

/// A description that passed [`validate`]: it declares at least one action,
/// its initial and goal sets are nonempty, and no action can cause a literal
/// together with its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedDomain(DomainAst);

impl CheckedDomain {
    pub fn ast(&self) -> &DomainAst {
        &self.0
    }

    pub fn into_inner(self) -> DomainAst {
        self.0
    }
}

impl Deref for CheckedDomain {
    type Target = DomainAst;

    fn deref(&self) -> &DomainAst {
        &self.0
    }
}

/// Runs the static checks. Satisfiability is decided with a scratch store.
pub fn validate(ast: DomainAst) -> Result<CheckedDomain, LangError> {
    if ast.actions.is_empty() {
        return Err(LangError::NoActions);
    }
    let mut store = NodeStore::with_config(StoreConfig::small());
    let vars: Vec<VarId> = ast.fluents.iter().map(|f| store.new_var(f.name.clone())).collect();
    let lookup = |name: &str| ast.fluent_index(name).map(|k| vars[k]);

    let mut states = store.tt();
    for c in &ast.always {
        let c = formula_to_bdd(&mut store, c, &lookup)?;
        states = store.and(states, c)?;
    }
    if states.is_false() {
        return Err(LangError::EmptyStateSpace);
    }
    let init = formula_to_bdd(&mut store, &ast.initially, &lookup)?;
    if store.and(init, states)?.is_false() {
        return Err(LangError::EmptyInitial);
    }
    let goal = formula_to_bdd(&mut store, &ast.goal, &lookup)?;
    if store.and(goal, states)?.is_false() {
        return Err(LangError::EmptyGoal);
    }

    for action in &ast.actions {
        let mut pre = states;
        for p in &action.preconditions {
            let p = formula_to_bdd(&mut store, p, &lookup)?;
            pre = store.and(pre, p)?;
        }
        for fluent in &ast.fluents {
            let (mut pos, mut neg) = (store.ff(), store.ff());
            for rule in action.causes.iter().filter(|r| r.effect.fluent == *fluent) {
                let cond = match &rule.condition {
                    Some(c) => formula_to_bdd(&mut store, c, &lookup)?,
                    None => store.tt(),
                };
                let side = if rule.effect.positive { &mut pos } else { &mut neg };
                *side = store.or(*side, cond)?;
            }
            let both = store.and(pos, neg)?;
            if !store.and(both, pre)?.is_false() {
                return Err(LangError::ConflictingEffects {
                    action: action.name.name.clone(),
                    fluent: fluent.name.clone(),
                    span: action.name.span,
                });
            }
        }
    }
    Ok(CheckedDomain(ast))
}
