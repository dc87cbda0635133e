use super::*;
use crate::oracle::oracle_verify;
use crate::testutil::{fig1_set, symbolic, BTUC};

const WORKED_PLAN: [&str; 5] = ["Flush", "Dunk_1", "Flush", "Dunk_2", "Flush"];

fn table_plans(store: &mut NodeStore, dom: &SymbolicDomain, table: &BsPTable) -> Vec<(Plan, Vec<State>)> {
    let index = store.exists_cube(dom.x_cube, table.relation).unwrap();
    let sats = store
        .enumerate_sats(index, &plan_vars(dom, table.level), usize::MAX)
        .unwrap();
    sats.iter()
        .map(|a| {
            let plan = decode_plan(dom, a, table.level).unwrap();
            let fixed: Vec<(VarId, bool)> = a.iter().map(|(&v, &b)| (v, b)).collect();
            let belief = store.restrict_all(table.relation, &fixed).unwrap();
            (plan, dom.decode_belief(store, belief).unwrap())
        })
        .collect()
}

#[test]
fn btuc_plan_of_length_five() {
    let (mut store, mut dom, model) = symbolic(BTUC);
    let report = conformant_plan(&mut store, &mut dom, &PlannerOptions::default()).unwrap();
    assert_eq!(report.outcome, Outcome::Plan);
    assert_eq!(report.length(), Some(5));
    let plan = report.plan().unwrap();
    assert!(oracle_verify(&model, plan.actions()).unwrap());
    assert_eq!(plan.actions(), WORKED_PLAN);
    assert_eq!(report.levels.len(), 6);
    assert!(report.bs_inserted >= 1);
}

#[test]
fn btuc_early_levels() {
    let (mut store, mut dom, _) = symbolic(BTUC);
    let mut cache = BeliefCache::new();
    let t0 = BsPTable {
        level: 0,
        relation: dom.goal,
    };
    cache.insert(dom.goal);
    let t1 = expand(&mut store, &mut dom, &t0).unwrap();
    let t1 = prune(&mut store, &dom, &t1, &mut cache).unwrap();
    let plans = table_plans(&mut store, &dom, &t1);
    assert_eq!(plans, vec![(Plan::parse("Flush"), fig1_set(&[5, 6, 7, 8]))]);

    let t2 = expand(&mut store, &mut dom, &t1).unwrap();
    let built = table_plans(&mut store, &dom, &t2);
    let mut names: Vec<String> = built.iter().map(|(p, _)| p.to_string()).collect();
    names.sort();
    assert_eq!(names, ["Dunk_1;Flush", "Dunk_2;Flush", "Flush;Flush"].map(String::from));

    // The pair repeating the level-1 belief is dropped.
    let t2 = prune(&mut store, &dom, &t2, &mut cache).unwrap();
    let kept = table_plans(&mut store, &dom, &t2);
    let expected: Vec<_> = built.into_iter().filter(|(p, _)| p.to_string() != "Flush;Flush").collect();
    assert_eq!(kept, expected);
    assert_eq!(level_stats(&mut store, &dom, &t2).unwrap().plans_kept, 2);
    assert_eq!((cache.inserted(), cache.hits()), (4, 1));
}

#[test]
fn extract_is_empty_below_five() {
    let (mut store, mut dom, _) = symbolic(BTUC);
    let mut table = BsPTable {
        level: 0,
        relation: dom.goal,
    };
    for level in 0..=5 {
        let sol = extract(&mut store, &dom, &table).unwrap();
        assert_eq!(sol.is_false(), level < 5, "level {level}");
        if level == 5 {
            let plans = decode_solutions(&mut store, &dom, sol, 5, 16).unwrap();
            assert!(plans.contains(&Plan(WORKED_PLAN.iter().map(|s| s.to_string()).collect())));
        }
        table = expand(&mut store, &mut dom, &table).unwrap();
    }
    let empty = BsPTable {
        level: 0,
        relation: store.ff(),
    };
    assert!(extract(&mut store, &dom, &empty).unwrap().is_false());
}

/// Without pruning, level 0 is the goal and level 1 is the strong pre-image
/// of the goal under every action.
#[test]
fn table_laws_without_pruning() {
    let (mut store, mut dom, _) = symbolic(BTUC);
    let t0 = BsPTable {
        level: 0,
        relation: dom.goal,
    };
    let t1 = expand(&mut store, &mut dom, &t0).unwrap();
    let plans = table_plans(&mut store, &dom, &t1);
    assert_eq!(plans, vec![(Plan::parse("Flush"), fig1_set(&[5, 6, 7, 8]))]);
    let t2 = expand(&mut store, &mut dom, &t1).unwrap();
    let unpruned = table_plans(&mut store, &dom, &t2);
    let mut cache = BeliefCache::new();
    cache.insert(dom.goal);
    let mut cache1 = cache.clone();
    let p1 = prune(&mut store, &dom, &t1, &mut cache1).unwrap();
    assert_eq!(p1, t1);
    let p2 = prune(&mut store, &dom, &t2, &mut cache1).unwrap();
    let pruned = table_plans(&mut store, &dom, &p2);
    assert!(pruned.len() <= unpruned.len());
    assert!(pruned.iter().all(|x| unpruned.contains(x)));
}

#[test]
fn pruning_does_not_change_the_length() {
    let (mut store, mut dom, _) = symbolic(BTUC);
    let opts = PlannerOptions {
        prune: false,
        ..PlannerOptions::default()
    };
    let report = conformant_plan(&mut store, &mut dom, &opts).unwrap();
    assert_eq!(report.length(), Some(5));
    assert_eq!((report.bs_inserted, report.bs_hits), (0, 0));
}

#[test]
fn all_plans_are_conformant() {
    let (mut store, mut dom, model) = symbolic(BTUC);
    let opts = PlannerOptions {
        all_plans: 50,
        ..PlannerOptions::default()
    };
    let report = conformant_plan(&mut store, &mut dom, &opts).unwrap();
    assert!(!report.plans.is_empty());
    for p in &report.plans {
        assert_eq!(p.len(), 5);
        assert!(oracle_verify(&model, p.actions()).unwrap(), "{p}");
    }
}

#[test]
fn depth_limit_is_unknown() {
    let (mut store, mut dom, _) = symbolic(BTUC);
    let opts = PlannerOptions {
        max_depth: 3,
        ..PlannerOptions::default()
    };
    let report = conformant_plan(&mut store, &mut dom, &opts).unwrap();
    assert_eq!(report.outcome, Outcome::Unknown);
    assert_eq!(report.level, 3);
    assert!(report.plans.is_empty());
}

#[test]
fn unsolvable_reaches_a_fixpoint() {
    let (mut store, mut dom, _) = symbolic(
        "DOMAIN d ACTIONS a; FLUENTS f, g : boolean; INERTIAL f; a CAUSES g; INITIALLY TRUE; CONFORMANT f;",
    );
    let report = conformant_plan(&mut store, &mut dom, &PlannerOptions::default()).unwrap();
    assert_eq!(report.outcome, Outcome::Fail);
    assert!(report.plans.is_empty());
    assert_eq!(report.length(), None);
}

#[test]
fn trivially_solved_at_level_zero() {
    let (mut store, mut dom, _) =
        symbolic("DOMAIN d ACTIONS a; FLUENTS f, g : boolean; INITIALLY f & g; CONFORMANT f;");
    let report = conformant_plan(&mut store, &mut dom, &PlannerOptions::default()).unwrap();
    assert_eq!((report.outcome, report.level), (Outcome::Plan, 0));
    assert_eq!(report.plans, vec![Plan::default()]);
}

#[test]
fn decoding_requires_one_hot_blocks() {
    let (mut store, mut dom, _) = symbolic(BTUC);
    dom.new_plan_block(&mut store).unwrap();
    dom.new_plan_block(&mut store).unwrap();
    let flush = dom.action_index("Flush").unwrap();
    let dunk1 = dom.action_index("Dunk_1").unwrap();
    let mut a = Assignment::new();
    for (i, act) in [(1, flush), (2, dunk1)] {
        for (k, &v) in dom.plan_block(i).iter().enumerate() {
            a.insert(v, k == act);
        }
    }
    assert_eq!(decode_plan(&dom, &a, 2).unwrap(), Plan::parse("Dunk_1;Flush"));
    a.insert(dom.plan_block(1)[dunk1], true);
    assert_eq!(decode_plan(&dom, &a, 2), Err(PlanError::NotOneHot { block: 1 }));
    a.insert(dom.plan_block(1)[dunk1], false);
    a.insert(dom.plan_block(1)[flush], false);
    assert_eq!(decode_plan(&dom, &a, 2), Err(PlanError::NotOneHot { block: 1 }));
}

#[test]
fn symbolic_and_explicit_verification_agree() {
    let (mut store, dom, model) = symbolic(BTUC);
    let plans = [
        WORKED_PLAN.to_vec(),
        vec!["Dunk_1"],
        vec!["Flush", "Dunk_1", "Dunk_2", "Flush", "Flush"],
        vec!["Flush", "Dunk_2", "Flush", "Dunk_1", "Flush"],
        vec![],
    ];
    for plan in &plans {
        let s = verify_plan(&mut store, &dom, &model, plan, VerifyMode::Symbolic).unwrap();
        let e = verify_plan(&mut store, &dom, &model, plan, VerifyMode::Explicit).unwrap();
        assert_eq!(s, e, "{plan:?}");
    }
    let v = verify_symbolic(&mut store, &dom, &WORKED_PLAN).unwrap();
    assert!(v.conformant);
    assert_eq!(v.trace.len(), 6);
    assert_eq!(v.trace[5], fig1_set(&[5, 7]));
    assert!(verify_symbolic(&mut store, &dom, &["Jump"]).is_err());
}

#[test]
fn plan_text_round_trip() {
    let p = Plan::parse(" Flush ; Dunk_1;Flush ");
    assert_eq!(p.to_string(), "Flush;Dunk_1;Flush");
    assert!(Plan::parse("").is_empty());
    assert_eq!(serde_json::to_string(&Outcome::Unknown).unwrap(), "\"UNKNOWN\"");
}
