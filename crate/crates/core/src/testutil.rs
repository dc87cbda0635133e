use crate::dd::NodeStore;
use crate::lang::{compile, parse, validate, CheckedDomain, ExplicitModel, State};
use crate::symdomain::SymbolicDomain;

pub const BTUC: &str = include_str!("../fixtures/btuc.ar");

pub fn checked(text: &str) -> CheckedDomain {
    validate(parse(text).unwrap()).unwrap()
}

pub fn symbolic(text: &str) -> (NodeStore, SymbolicDomain, ExplicitModel) {
    let domain = checked(text);
    let mut store = NodeStore::new();
    let sym = compile(&domain, &mut store).unwrap();
    let model = ExplicitModel::new(&domain).unwrap();
    (store, sym, model)
}

/// The numbering of the eight states of the bomb-and-clogged-toilet automaton:
/// states 1 to 4 are not defused, odd states are unclogged, and states 1, 2,
/// 5 and 6 have the bomb in package 1.
pub fn fig1(n: u32) -> State {
    assert!((1..=8).contains(&n));
    let k = n - 1;
    let clogged = k & 1 == 1;
    let in2 = k >> 1 & 1 == 1;
    let defused = k >> 2 & 1 == 1;
    State(0)
        .with(0, !in2)
        .with(1, in2)
        .with(2, defused)
        .with(3, clogged)
}

pub fn fig1_set(ns: &[u32]) -> Vec<State> {
    let mut v: Vec<State> = ns.iter().map(|&n| fig1(n)).collect();
    v.sort_unstable();
    v
}
