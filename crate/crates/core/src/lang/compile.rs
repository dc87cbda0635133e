use super::ast::Formula;
use super::validate::CheckedDomain;
use super::LangError;
use crate::dd::{Bdd, NodeStore, VarId};
use crate::symdomain::{build_seq, DomainParts, SymError, SymbolicDomain, VariableVectors};

/// Builds the function of `f`, mapping each fluent through `lookup`.
pub fn formula_to_bdd(
    store: &mut NodeStore,
    f: &Formula,
    lookup: &impl Fn(&str) -> Option<VarId>,
) -> Result<Bdd, LangError> {
    Ok(match f {
        Formula::True => store.tt(),
        Formula::False => store.ff(),
        Formula::Fluent(id) => {
            let v = lookup(&id.name).ok_or_else(|| LangError::Undeclared {
                kind: "fluent",
                name: id.name.clone(),
                span: id.span,
            })?;
            store.var(v)?
        }
        Formula::Not(a) => {
            let a = formula_to_bdd(store, a, lookup)?;
            store.not(a)?
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            let l2 = formula_to_bdd(store, l, lookup)?;
            let r2 = formula_to_bdd(store, r, lookup)?;
            match f {
                Formula::And(..) => store.and(l2, r2)?,
                Formula::Or(..) => store.or(l2, r2)?,
                Formula::Implies(..) => store.implies(l2, r2)?,
                _ => store.iff(l2, r2)?,
            }
        }
    })
}

fn lift(e: SymError) -> LangError {
    match e {
        SymError::Dd(d) => LangError::Dd(d),
        SymError::NoActions => LangError::NoActions,
        SymError::UnknownFluent(f) => LangError::UnknownFluent(f),
        SymError::UnknownAction(a) => LangError::UnknownAction(a),
        other => unreachable!("compilation cannot produce {other}"),
    }
}

/// Compiles a checked description into its automaton.
///
/// Variables are created as `α` followed by one `x, x'` pair per fluent.
pub fn compile(domain: &CheckedDomain, store: &mut NodeStore) -> Result<SymbolicDomain, LangError> {
    let alpha: Vec<VarId> = domain
        .actions
        .iter()
        .map(|a| store.new_var(a.name.name.clone()))
        .collect();
    let mut x = Vec::with_capacity(domain.fluents.len());
    let mut x_next = Vec::with_capacity(domain.fluents.len());
    for f in &domain.fluents {
        x.push(store.new_var(f.name.clone()));
        x_next.push(store.new_var(format!("{}'", f.name)));
    }
    let lookup = |name: &str| domain.fluent_index(name).map(|k| x[k]);

    let mut states = store.tt();
    for c in &domain.always {
        let c = formula_to_bdd(store, c, &lookup)?;
        states = store.and(states, c)?;
    }
    let states_next = store.rename(states, &x, &x_next)?;
    let seq = build_seq(store, &alpha).map_err(lift)?;

    let mut disjuncts = store.ff();
    for (ai, action) in domain.actions.iter().enumerate() {
        let mut t = store.tt();
        for p in &action.preconditions {
            let p = formula_to_bdd(store, p, &lookup)?;
            t = store.and(t, p)?;
        }
        for (k, fluent) in domain.fluents.iter().enumerate().rev() {
            let (mut pos, mut neg) = (store.ff(), store.ff());
            for rule in action.causes.iter().filter(|r| r.effect.fluent == *fluent) {
                let cond = match &rule.condition {
                    Some(c) => formula_to_bdd(store, c, &lookup)?,
                    None => store.tt(),
                };
                let side = if rule.effect.positive { &mut pos } else { &mut neg };
                *side = store.or(*side, cond)?;
            }
            let now = store.var(x[k])?;
            let next = store.var(x_next[k])?;
            let not_next = store.not(next)?;
            let up = store.implies(pos, next)?;
            let down = store.implies(neg, not_next)?;
            let mut frame = store.and(up, down)?;
            let inertial = domain.is_inertial(&fluent.name) && !action.possibly_changes.contains(fluent);
            if inertial {
                let fired = store.or(pos, neg)?;
                let keep = store.iff(next, now)?;
                let kept = store.or(fired, keep)?;
                frame = store.and(frame, kept)?;
            }
            t = store.and(t, frame)?;
        }
        let mut selector = store.tt();
        for (bi, &b) in alpha.iter().enumerate().rev() {
            let lit = store.literal(b, bi == ai)?;
            selector = store.and(lit, selector)?;
        }
        t = store.and(selector, t)?;
        disjuncts = store.or(disjuncts, t)?;
    }
    let both_ends = store.and(states, states_next)?;
    let legal = store.and(seq, both_ends)?;
    let trans = store.and(legal, disjuncts)?;

    let init = formula_to_bdd(store, &domain.initially, &lookup)?;
    let init = store.and(init, states)?;
    let goal = formula_to_bdd(store, &domain.goal, &lookup)?;
    let goal = store.and(goal, states)?;
    if init.is_false() {
        return Err(LangError::EmptyInitial);
    }
    if goal.is_false() {
        return Err(LangError::EmptyGoal);
    }

    let vars = VariableVectors {
        x,
        x_next,
        alpha,
        plan_blocks: Vec::new(),
    };
    let parts = DomainParts {
        states,
        trans,
        init,
        goal,
        seq,
    };
    SymbolicDomain::assemble(store, vars, parts, domain.action_names(), domain.fluent_names()).map_err(lift)
}
