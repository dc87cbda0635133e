use proptest::prelude::*;

use super::*;
use crate::dd::NodeStore;
use crate::testutil::{fig1, fig1_set, symbolic, BTUC};

#[test]
fn btuc_fixture_shape() {
    let ast = parse(BTUC).unwrap();
    let count = |f: fn(&ActionDecl) -> usize| ast.actions.iter().map(f).sum::<usize>();
    assert_eq!(ast.name.name, "BTUC");
    assert_eq!(ast.actions.len(), 3);
    assert_eq!(ast.fluents.len(), 4);
    assert_eq!(ast.inertial.len(), 4);
    assert_eq!(ast.always.len(), 1);
    assert_eq!(count(|a| a.preconditions.len()), 2);
    assert_eq!(count(|a| a.causes.iter().filter(|c| c.condition.is_some()).count()), 2);
    assert_eq!(count(|a| a.causes.iter().filter(|c| c.condition.is_none()).count()), 1);
    assert_eq!(count(|a| a.possibly_changes.len()), 2);
    assert!(validate(ast).is_ok());
}

#[test]
fn minimal_description() {
    let ast = parse("DOMAIN d ACTIONS a; FLUENTS f: boolean; INITIALLY f; CONFORMANT f;").unwrap();
    assert_eq!(ast.action_names(), vec!["a"]);
    assert_eq!(ast.fluent_names(), vec!["f"]);
    assert!(ast.inertial.is_empty() && ast.always.is_empty());
    assert_eq!(ast.initially, Formula::fluent("f"));
    assert_eq!(ast.goal, Formula::fluent("f"));
}

fn with_rule(rule: &str) -> String {
    format!(
        "DOMAIN d ACTIONS Dunk_1, Flush; FLUENTS In_1, Clogged : boolean;\n{rule}\nINITIALLY In_1; CONFORMANT In_1;"
    )
}

#[test]
fn undeclared_identifiers() {
    let err = parse(&with_rule("Dunk_1 CAUSES Clogged IF In_3;")).unwrap_err();
    assert!(matches!(&err, LangError::Undeclared { kind: "fluent", name, span } if name == "In_3" && span.line == 2));
    let err = parse(&with_rule("Dunk_9 CAUSES Clogged;")).unwrap_err();
    assert!(matches!(&err, LangError::Undeclared { kind: "action", name, .. } if name == "Dunk_9"));
    let err = parse(&with_rule("INERTIAL Flush;")).unwrap_err();
    assert!(matches!(&err, LangError::Undeclared { kind: "fluent", .. }));
}

#[test]
fn duplicates_and_clauses() {
    let err = parse("DOMAIN d ACTIONS a, b, a; FLUENTS f : boolean; INITIALLY f; CONFORMANT f;").unwrap_err();
    assert!(matches!(&err, LangError::Duplicate { name, first, span } if name == "a" && first.column < span.column));
    let err = parse("DOMAIN d ACTIONS a; FLUENTS a : boolean; INITIALLY a; CONFORMANT a;").unwrap_err();
    assert!(matches!(err, LangError::Duplicate { .. }));
    let err = parse("DOMAIN d ACTIONS a; FLUENTS f : boolean; CONFORMANT f;").unwrap_err();
    assert_eq!(err, LangError::MissingClause { clause: "INITIALLY" });
    let err = parse("DOMAIN d ACTIONS a; FLUENTS f : boolean; INITIALLY f; CONFORMANT f;\nCONFORMANT !f;").unwrap_err();
    assert!(matches!(err, LangError::RepeatedClause { clause: "CONFORMANT", span } if span.line == 2));
}

#[test]
fn syntax_errors_carry_spans() {
    let err = parse("DOMAIN d\nACTIONS a\nFLUENTS f : boolean;").unwrap_err();
    match err {
        LangError::Syntax { expected, found, span } => {
            assert_eq!(expected, "`;`");
            assert_eq!(found, "`FLUENTS`");
            assert_eq!((span.line, span.column), (3, 1));
        }
        other => panic!("unexpected {other:?}"),
    }
    let err = parse("DOMAIN d ACTIONS a; FLUENTS f : boolean; a CAUSES f IF (f & ; INITIALLY f; CONFORMANT f;")
        .unwrap_err();
    assert!(matches!(err, LangError::Syntax { .. }));
    assert!(err.to_string().starts_with("1:"));
}

#[test]
fn operator_precedence() {
    let ast = parse("DOMAIN d ACTIONS a; FLUENTS p, q, r : boolean; INITIALLY !p & q | r -> p <-> q; CONFORMANT p -> q -> r;")
        .unwrap();
    let (p, q, r) = (Formula::fluent("p"), Formula::fluent("q"), Formula::fluent("r"));
    let init = p.clone().not().and(q.clone()).or(r.clone()).implies(p.clone()).iff(q.clone());
    assert_eq!(ast.initially, init);
    assert_eq!(ast.goal, p.implies(q.implies(r)));
}

#[test]
fn validation_rejects() {
    let text = with_rule("Dunk_1 CAUSES Clogged IF In_1; Dunk_1 CAUSES !Clogged IF In_1;");
    let err = validate(parse(&text).unwrap()).unwrap_err();
    assert!(matches!(&err, LangError::ConflictingEffects { action, fluent, .. } if action == "Dunk_1" && fluent == "Clogged"));

    // Conditions that cannot hold together inside S are fine.
    let text = with_rule("ALWAYS !(In_1 & Clogged); Dunk_1 CAUSES Clogged IF In_1; Dunk_1 CAUSES !Clogged IF Clogged;");
    assert!(validate(parse(&text).unwrap()).is_ok());
    // So are conditions excluded by the precondition.
    let text = with_rule("Dunk_1 HAS PRECONDITIONS !In_1; Dunk_1 CAUSES Clogged IF In_1; Dunk_1 CAUSES !Clogged;");
    assert!(validate(parse(&text).unwrap()).is_ok());

    let err = validate(parse("DOMAIN d ACTIONS a; FLUENTS f : boolean; INITIALLY f & !f; CONFORMANT f;").unwrap());
    assert_eq!(err.unwrap_err(), LangError::EmptyInitial);
    let err = validate(parse("DOMAIN d ACTIONS a; FLUENTS f : boolean; ALWAYS f; INITIALLY TRUE; CONFORMANT !f;").unwrap());
    assert_eq!(err.unwrap_err(), LangError::EmptyGoal);
    let err = validate(parse("DOMAIN d ACTIONS a; FLUENTS f : boolean; ALWAYS FALSE; INITIALLY f; CONFORMANT f;").unwrap());
    assert_eq!(err.unwrap_err(), LangError::EmptyStateSpace);
    let err = validate(parse("DOMAIN d FLUENTS f : boolean; INITIALLY f; CONFORMANT f;").unwrap());
    assert_eq!(err.unwrap_err(), LangError::NoActions);
}

#[test]
fn btuc_explicit_semantics() {
    let (_, _, model) = symbolic(BTUC);
    assert_eq!(explicit_step(&model, fig1(1), "Dunk_1").unwrap(), fig1_set(&[5, 6]));
    assert_eq!(explicit_step(&model, fig1(2), "Dunk_1").unwrap(), vec![]);
    assert_eq!(explicit_step(&model, fig1(2), "Flush").unwrap(), fig1_set(&[1]));
    assert_eq!(explicit_step(&model, fig1(3), "Dunk_1").unwrap(), fig1_set(&[3, 4]));
    assert_eq!(model.legal_states(16).unwrap(), fig1_set(&[1, 2, 3, 4, 5, 6, 7, 8]));
    assert_eq!(model.initial_states(16).unwrap(), fig1_set(&[1, 2, 3, 4]));
    assert_eq!(model.goal_states(16).unwrap(), fig1_set(&[5, 7]));
    assert!(matches!(model.step(State(0), 0), Err(LangError::IllegalState(0))));
    assert!(matches!(explicit_step(&model, fig1(1), "Jump"), Err(LangError::UnknownAction(_))));
}

fn explicit_triples(model: &ExplicitModel) -> Vec<(State, usize, State)> {
    let mut out = Vec::new();
    for s in model.legal_states(16).unwrap() {
        for a in 0..model.action_count() {
            for t in model.step(s, a).unwrap() {
                out.push((s, a, t));
            }
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn btuc_compiles_to_the_automaton() {
    let (mut store, dom, model) = symbolic(BTUC);
    let all = dom.decode_belief(&mut store, dom.states).unwrap();
    assert_eq!(all.len(), 8);
    let trans = dom.decode_trans(&mut store).unwrap();
    let flush = dom.action_index("Flush").unwrap();
    let dunk1 = dom.action_index("Dunk_1").unwrap();
    assert!(trans.contains(&(fig1(2), flush, fig1(1))));
    let from1: Vec<State> = trans
        .iter()
        .filter(|(s, a, _)| *s == fig1(1) && *a == dunk1)
        .map(|t| t.2)
        .collect();
    assert_eq!(from1, fig1_set(&[5, 6]));
    assert_eq!(trans, explicit_triples(&model));
}

const NOISY: &str = "
DOMAIN noisy
ACTIONS toggle, set, wait;
FLUENTS a, b, c, n : boolean;
INERTIAL a, b, c;
ALWAYS !(a & b & c);
toggle CAUSES a IF !a;
toggle CAUSES !a IF a;
set HAS PRECONDITIONS !c;
set CAUSES c;
set POSSIBLY CHANGES a, b;
wait CAUSES b IF n;
INITIALLY !a;
CONFORMANT c;
";

#[test]
fn compiler_agrees_with_semantics() {
    let (mut store, dom, model) = symbolic(NOISY);
    assert_eq!(dom.decode_trans(&mut store).unwrap(), explicit_triples(&model));
    assert_eq!(dom.decode_belief(&mut store, dom.states).unwrap().len(), 14);
}

#[test]
fn unconstrained_state_space() {
    for k in 1..=5 {
        let names: Vec<String> = (0..k).map(|i| format!("f{i}")).collect();
        let text = format!(
            "DOMAIN d ACTIONS a; FLUENTS {} : boolean; INITIALLY TRUE; CONFORMANT TRUE;",
            names.join(", ")
        );
        let (mut store, dom, _) = symbolic(&text);
        assert!(dom.states.is_true());
        assert_eq!(store.sat_count(dom.states, &dom.vars.x).unwrap(), 1 << k);
    }
}

#[test]
fn deterministic_action_has_one_outcome() {
    let (_, _, model) = symbolic(&with_rule("INERTIAL In_1, Clogged; Dunk_1 CAUSES Clogged IF In_1; Dunk_1 CAUSES !Clogged IF !In_1;"));
    for s in model.legal_states(16).unwrap() {
        assert_eq!(model.step(s, 0).unwrap().len(), 1);
    }
}

#[test]
fn compile_uses_the_store_order() {
    let domain = crate::testutil::checked(BTUC);
    let mut store = NodeStore::new();
    let dom = compile(&domain, &mut store).unwrap();
    let order = store.order();
    let pos = |v| order.iter().position(|w| *w == v).unwrap();
    assert!(dom.vars.alpha.iter().all(|&a| pos(a) < pos(dom.vars.x[0])));
    for k in 0..dom.vars.x.len() {
        assert_eq!(pos(dom.vars.x_next[k]), pos(dom.vars.x[k]) + 1);
    }
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (0..4usize).prop_map(|k| Formula::fluent(format!("f{k}"))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.iff(b)),
        ]
    })
}

fn ast_strategy() -> impl Strategy<Value = DomainAst> {
    let fluents: Vec<Ident> = (0..4).map(|k| Ident::new(format!("f{k}"))).collect();
    let rule = (0..4usize, any::<bool>(), proptest::option::of(formula_strategy()));
    let action = (
        proptest::collection::vec(formula_strategy(), 0..2),
        proptest::collection::vec(rule, 0..3),
        proptest::collection::btree_set(0..4usize, 0..3),
    );
    (
        proptest::collection::vec(action, 1..4),
        proptest::collection::btree_set(0..4usize, 0..4),
        proptest::collection::vec(formula_strategy(), 0..3),
        formula_strategy(),
        formula_strategy(),
    )
        .prop_map(move |(actions, inertial, always, initially, goal)| DomainAst {
            name: Ident::new("d"),
            actions: actions
                .into_iter()
                .enumerate()
                .map(|(i, (pre, causes, pc))| ActionDecl {
                    name: Ident::new(format!("a{i}")),
                    preconditions: pre,
                    causes: causes
                        .into_iter()
                        .map(|(f, positive, condition)| CausalRule {
                            effect: Literal {
                                fluent: Ident::new(format!("f{f}")),
                                positive,
                            },
                            condition,
                        })
                        .collect(),
                    possibly_changes: pc.into_iter().map(|k| Ident::new(format!("f{k}"))).collect(),
                })
                .collect(),
            fluents: fluents.clone(),
            inertial: inertial.into_iter().map(|k| Ident::new(format!("f{k}"))).collect(),
            always,
            initially,
            goal,
        })
}

proptest! {
    #[test]
    fn pretty_print_round_trip(ast in ast_strategy()) {
        let text = ast.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(back, ast);
    }
}
