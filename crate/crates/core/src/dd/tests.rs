use proptest::prelude::*;
use rustc_hash::FxHashSet;

use super::*;

/// Small formula language evaluated directly on truth tables.
#[derive(Debug, Clone)]
pub(crate) enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub(crate) fn eval(&self, bits: u32) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => bits >> i & 1 == 1,
            Expr::Not(e) => !e.eval(bits),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(bits), b.eval(bits));
                match op {
                    BinOp::And => x && y,
                    BinOp::Or => x || y,
                    BinOp::Xor => x != y,
                    BinOp::Implies => !x || y,
                    BinOp::Iff => x == y,
                }
            }
        }
    }

    pub(crate) fn build(&self, store: &mut NodeStore, vars: &[VarId]) -> Bdd {
        match self {
            Expr::Const(b) => store.constant(*b),
            Expr::Var(i) => store.var(vars[*i]).unwrap(),
            Expr::Not(e) => {
                let f = e.build(store, vars);
                store.not(f).unwrap()
            }
            Expr::Bin(op, a, b) => {
                let f = a.build(store, vars);
                let g = b.build(store, vars);
                store.apply(*op, f, g).unwrap()
            }
        }
    }
}

pub(crate) fn expr_strategy(nvars: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Expr::Const),
        6 => (0..nvars).prop_map(Expr::Var),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::And),
            Just(BinOp::Or),
            Just(BinOp::Xor),
            Just(BinOp::Implies),
            Just(BinOp::Iff)
        ];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Not(Box::new(e))),
            (op, inner.clone(), inner).prop_map(|(o, a, b)| Expr::Bin(o, Box::new(a), Box::new(b))),
        ]
    })
}

fn store_with_vars(n: usize) -> (NodeStore, Vec<VarId>) {
    let mut store = NodeStore::with_config(StoreConfig::small());
    let vars = (0..n).map(|i| store.new_var(format!("v{i}"))).collect();
    (store, vars)
}

fn assignment(vars: &[VarId], bits: u32) -> Assignment {
    vars.iter()
        .enumerate()
        .map(|(i, &v)| (v, bits >> i & 1 == 1))
        .collect()
}

/// Builds the function with the given truth table as a disjunction of minterms.
fn from_truth_table(store: &mut NodeStore, vars: &[VarId], table: &[bool]) -> Bdd {
    let mut acc = store.ff();
    for (bits, &on) in table.iter().enumerate() {
        if !on {
            continue;
        }
        let mut term = store.tt();
        for (i, &v) in vars.iter().enumerate() {
            let lit = store.literal(v, bits >> i & 1 == 1).unwrap();
            term = store.and(term, lit).unwrap();
        }
        acc = store.or(acc, term).unwrap();
    }
    acc
}

/// Size of the reduced ordered diagram of `table` under `order`, computed by
/// enumerating distinct restricted subtables. `table` is indexed by a bit
/// vector whose bit `i` is variable `i`; `order` lists variable indices from
/// the top.
fn canonical_node_count(table: &[bool], order: &[usize]) -> usize {
    let n = order.len();
    // Re-index the table so position bit k is order[k] (top = bit n-1).
    let reindexed: Vec<bool> = (0..1usize << n)
        .map(|pos| {
            let mut bits = 0usize;
            for (k, &var) in order.iter().enumerate() {
                if pos >> (n - 1 - k) & 1 == 1 {
                    bits |= 1 << var;
                }
            }
            table[bits]
        })
        .collect();
    let mut nodes: FxHashSet<(usize, Vec<bool>)> = FxHashSet::default();
    let mut leaves: FxHashSet<bool> = FxHashSet::default();
    fn walk(
        level: usize,
        sub: &[bool],
        nodes: &mut FxHashSet<(usize, Vec<bool>)>,
        leaves: &mut FxHashSet<bool>,
    ) {
        if sub.len() == 1 {
            leaves.insert(sub[0]);
            return;
        }
        let (lo, hi) = sub.split_at(sub.len() / 2);
        if lo == hi {
            walk(level + 1, lo, nodes, leaves);
        } else if nodes.insert((level, sub.to_vec())) {
            walk(level + 1, lo, nodes, leaves);
            walk(level + 1, hi, nodes, leaves);
        }
    }
    walk(0, &reindexed, &mut nodes, &mut leaves);
    nodes.len() + leaves.len()
}

fn check_structure(store: &NodeStore, f: Bdd) {
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if let Some((v, lo, hi)) = store.node(g).unwrap() {
            assert_ne!(lo, hi, "redundant node");
            let level = store.level(v).unwrap();
            for child in [lo, hi] {
                if let Some((cv, _, _)) = store.node(child).unwrap() {
                    assert!(level < store.level(cv).unwrap(), "order violated");
                }
                stack.push(child);
            }
        }
    }
}

#[test]
fn var_evaluates_and_is_canonical() {
    let (mut s, v) = store_with_vars(1);
    let a = s.var(v[0]).unwrap();
    assert!(s.eval(a, &assignment(&v, 1)).unwrap());
    assert!(!s.eval(a, &assignment(&v, 0)).unwrap());
    assert_eq!(a, s.var(v[0]).unwrap());
    assert_eq!(s.var(VarId(7)), Err(DdError::UnknownVariable(7)));
}

#[test]
fn apply_identities() {
    let (mut s, v) = store_with_vars(2);
    let x = s.var(v[0]).unwrap();
    let nx = s.not(x).unwrap();
    assert!(s.and(x, nx).unwrap().is_false());
    let ff = s.ff();
    assert_eq!(s.or(x, ff).unwrap(), x);
    assert!(s.not(s.tt()).unwrap().is_false());
}

#[test]
fn handles_from_other_stores_are_rejected() {
    let (mut s1, v1) = store_with_vars(1);
    let (s2, _) = store_with_vars(1);
    let a = s1.var(v1[0]).unwrap();
    let t = s2.tt();
    assert_eq!(s1.and(a, t), Err(DdError::ForeignHandle));
    assert_eq!(s2.node_count(a), Err(DdError::ForeignHandle));
}

#[test]
fn compose_examples() {
    let (mut s, v) = store_with_vars(3);
    let (a, b, c) = (
        s.var(v[0]).unwrap(),
        s.var(v[1]).unwrap(),
        s.var(v[2]).unwrap(),
    );
    let g = s.xor(a, c).unwrap();
    assert_eq!(s.compose(b, v[1], g).unwrap(), g);
    let ab = s.and(a, b).unwrap();
    assert_eq!(s.compose(ab, v[1], a).unwrap(), a);
    let f = s.or(ab, c).unwrap();
    let t = s.tt();
    let pos = s.restrict(f, v[1], true).unwrap();
    assert_eq!(s.compose(f, v[1], t).unwrap(), pos);
}

#[test]
fn rename_examples_and_errors() {
    let (mut s, v) = store_with_vars(4);
    let (x, xn) = (vec![v[0], v[2]], vec![v[1], v[3]]);
    let a = s.var(v[0]).unwrap();
    let c = s.var(v[2]).unwrap();
    let f = s.xor(a, c).unwrap();
    assert_eq!(s.rename(f, &[], &[]).unwrap(), f);
    let shifted = s.rename(f, &x, &xn).unwrap();
    let b = s.var(v[1]).unwrap();
    let d = s.var(v[3]).unwrap();
    assert_eq!(shifted, s.xor(b, d).unwrap());
    assert_eq!(s.rename(shifted, &xn, &x).unwrap(), f);
    assert!(matches!(
        s.rename(f, &x, &xn[..1]),
        Err(DdError::LengthMismatch { .. })
    ));
    assert!(matches!(
        s.rename(f, &[v[0]], &[v[2]]),
        Err(DdError::OverlappingSupport(_))
    ));
    assert!(matches!(
        s.rename(f, &[v[0], v[0]], &[v[1], v[3]]),
        Err(DdError::DuplicateVariable(_))
    ));
}

#[test]
fn rename_across_the_order() {
    // Moving the top variable below others goes through ite.
    let (mut s, v) = store_with_vars(4);
    let (a, b, c) = (
        s.var(v[0]).unwrap(),
        s.var(v[1]).unwrap(),
        s.var(v[2]).unwrap(),
    );
    let ab = s.and(a, b).unwrap();
    let f = s.or(ab, c).unwrap();
    let r = s.rename(f, &[v[0]], &[v[3]]).unwrap();
    check_structure(&s, r);
    for bits in 0..16u32 {
        let asg = assignment(&v, bits);
        let expect = (bits >> 3 & 1 == 1 && bits >> 1 & 1 == 1) || bits >> 2 & 1 == 1;
        assert_eq!(s.eval(r, &asg).unwrap(), expect);
    }
}

#[test]
fn quantifier_examples() {
    let (mut s, v) = store_with_vars(2);
    let (a, b) = (s.var(v[0]).unwrap(), s.var(v[1]).unwrap());
    let ab = s.and(a, b).unwrap();
    assert_eq!(s.exists(&[v[1]], ab).unwrap(), a);
    let na = s.not(a).unwrap();
    let taut = s.or(a, na).unwrap();
    assert!(s.exists(&[v[0]], taut).unwrap().is_true());
    assert!(s.forall(&[v[0]], a).unwrap().is_false());
    assert_eq!(s.forall(&[], ab).unwrap(), ab);
}

fn fig6_formula(s: &mut NodeStore, a: &[VarId], b: &[VarId]) -> Bdd {
    let mut acc = s.tt();
    for (&x, &y) in a.iter().zip(b) {
        let (fx, fy) = (s.var(x).unwrap(), s.var(y).unwrap());
        let eq = s.iff(fx, fy).unwrap();
        acc = s.and(acc, eq).unwrap();
    }
    acc
}

#[test]
fn eval_pairwise_equivalence() {
    let mut s = NodeStore::with_config(StoreConfig::small());
    let names = ["a1", "b1", "a2", "b2", "a3", "b3"];
    let v: Vec<VarId> = names.iter().map(|n| s.new_var(*n)).collect();
    let a = [v[0], v[2], v[4]];
    let b = [v[1], v[3], v[5]];
    let f = fig6_formula(&mut s, &a, &b);
    let all_true: Assignment = v.iter().map(|&x| (x, true)).collect();
    assert!(s.eval(f, &all_true).unwrap());
    let mut broken = all_true.clone();
    broken.insert(v[1], false);
    assert!(!s.eval(f, &broken).unwrap());
    let partial: Assignment = [(v[0], true)].into_iter().collect();
    assert!(matches!(
        s.eval(f, &partial),
        Err(DdError::MissingAssignment(_))
    ));
}

#[test]
fn node_count_depends_on_order() {
    // Truth table of (a1<->b1)&(a2<->b2)&(a3<->b3) with variable index
    // a1=0,a2=1,a3=2,b1=3,b2=4,b3=5.
    let table: Vec<bool> = (0..64u32)
        .map(|bits| (0..3).all(|k| (bits >> k & 1) == (bits >> (k + 3) & 1)))
        .collect();
    let interleaved = [0, 3, 1, 4, 2, 5];
    let grouped = [0, 1, 2, 3, 4, 5];
    let expect_interleaved = canonical_node_count(&table, &interleaved);
    let expect_grouped = canonical_node_count(&table, &grouped);
    assert_eq!(expect_interleaved, 11);
    assert_eq!(expect_grouped, 23);

    for order in [interleaved, grouped] {
        let mut s = NodeStore::with_config(StoreConfig::small());
        let names = ["a1", "a2", "a3", "b1", "b2", "b3"];
        let vars: Vec<VarId> = names.iter().map(|n| s.new_var(*n)).collect();
        s.set_order(&[order.iter().map(|&i| vars[i]).collect()])
            .unwrap();
        let f = fig6_formula(&mut s, &vars[..3], &vars[3..]);
        assert_eq!(
            s.node_count(f).unwrap(),
            canonical_node_count(&table, &order)
        );
    }
    let s = NodeStore::with_config(StoreConfig::small());
    assert_eq!(s.node_count(s.tt()).unwrap(), 1);
}

#[test]
fn order_is_fixed_once_nodes_exist() {
    let (mut s, v) = store_with_vars(3);
    s.set_order(&[vec![v[2]], vec![v[0], v[1]]]).unwrap();
    assert_eq!(s.order(), vec![v[2], v[0], v[1]]);
    assert!(matches!(
        s.set_order(&[vec![v[0]]]),
        Err(DdError::InvalidOrder(_))
    ));
    s.var(v[0]).unwrap();
    assert_eq!(
        s.set_order(std::slice::from_ref(&v)),
        Err(DdError::ReorderAfterCreation)
    );
    // Fresh variables may still be slotted in.
    let w = s.new_var_before("w", v[1]).unwrap();
    assert_eq!(s.order(), vec![v[2], v[0], w, v[1]]);
    s.reorder_hook().unwrap();
}

#[test]
fn make_node_checks_order() {
    let (mut s, v) = store_with_vars(2);
    let b = s.var(v[1]).unwrap();
    let ff = s.ff();
    assert!(s.make_node(v[0], ff, b).is_ok());
    let a = s.var(v[0]).unwrap();
    assert!(matches!(
        s.make_node(v[1], ff, a),
        Err(DdError::OrderViolation { .. })
    ));
}

#[test]
fn enumerate_examples() {
    let (mut s, v) = store_with_vars(3);
    assert!(s.enumerate_sats(s.ff(), &v, 10).unwrap().is_empty());
    let a = s.var(v[0]).unwrap();
    let sats = s.enumerate_sats(a, &v[..1], 10).unwrap();
    assert_eq!(sats, vec![[(v[0], true)].into_iter().collect::<Assignment>()]);
    // Don't-cares expand low first.
    let sats = s.enumerate_sats(a, &v[..2], 10).unwrap();
    assert_eq!(sats.len(), 2);
    assert!(!sats[0][&v[1]]);
    assert!(sats[1][&v[1]]);
    assert_eq!(s.enumerate_sats(a, &v, 3).unwrap().len(), 3);
}

#[test]
fn node_limit_is_reported() {
    let mut s = NodeStore::with_config(StoreConfig {
        max_nodes: 4,
        ..StoreConfig::small()
    });
    let v: Vec<VarId> = (0..4).map(|i| s.new_var(format!("v{i}"))).collect();
    let mut acc = s.tt();
    let mut err = None;
    for &x in &v {
        match s.var(x).and_then(|f| s.xor(acc, f)) {
            Ok(f) => acc = f,
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    assert_eq!(err, Some(DdError::NodeLimit { limit: 4 }));
}

#[test]
fn dot_export_marks_edges() {
    let (mut s, v) = store_with_vars(2);
    let a = s.var(v[0]).unwrap();
    let b = s.var(v[1]).unwrap();
    let f = s.and(a, b).unwrap();
    let dot = s.to_dot(f).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("label=\"v0\""));
    assert!(dot.contains("style=dashed"));
    assert!(dot.contains("style=solid"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eval_matches_truth_table(e in expr_strategy(10)) {
        let (mut s, v) = store_with_vars(10);
        let f = e.build(&mut s, &v);
        check_structure(&s, f);
        for bits in (0..1024u32).step_by(7) {
            prop_assert_eq!(s.eval(f, &assignment(&v, bits)).unwrap(), e.eval(bits));
        }
    }

    #[test]
    fn canonical_by_truth_table(e in expr_strategy(6)) {
        let (mut s, v) = store_with_vars(6);
        let f = e.build(&mut s, &v);
        let table: Vec<bool> = (0..64).map(|b| e.eval(b)).collect();
        prop_assert_eq!(from_truth_table(&mut s, &v, &table), f);
        let order: Vec<usize> = (0..6).collect();
        prop_assert_eq!(s.node_count(f).unwrap(), canonical_node_count(&table, &order));
    }

    #[test]
    fn model_count_matches_enumeration(e in expr_strategy(8)) {
        let (mut s, v) = store_with_vars(8);
        let f = e.build(&mut s, &v);
        let brute = (0..256u32).filter(|&b| e.eval(b)).count();
        let sats = s.enumerate_sats(f, &v, usize::MAX).unwrap();
        prop_assert_eq!(sats.len(), brute);
        prop_assert_eq!(s.sat_count(f, &v).unwrap(), brute as u128);
        for a in &sats {
            prop_assert!(s.eval(f, a).unwrap());
        }
        // lexicographic, low branch first
        let keys: Vec<Vec<bool>> = sats.iter().map(|a| a.values().copied().collect()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        prop_assert_eq!(keys, sorted);
    }

    #[test]
    fn quantifier_expansion_and_duality(e in expr_strategy(8), i in 0usize..8, mask in 0u32..256) {
        let (mut s, v) = store_with_vars(8);
        let f = e.build(&mut s, &v);
        let ff = s.ff();
        let tt = s.tt();
        let f0 = s.compose(f, v[i], ff).unwrap();
        let f1 = s.compose(f, v[i], tt).unwrap();
        let ex = s.exists(&[v[i]], f).unwrap();
        prop_assert_eq!(ex, s.or(f0, f1).unwrap());
        let fa = s.forall(&[v[i]], f).unwrap();
        prop_assert_eq!(fa, s.and(f0, f1).unwrap());

        let set: Vec<VarId> = (0..8).filter(|k| mask >> k & 1 == 1).map(|k| v[k]).collect();
        let nf = s.not(f).unwrap();
        let ex_not = s.exists(&set, nf).unwrap();
        prop_assert_eq!(s.forall(&set, f).unwrap(), s.not(ex_not).unwrap());
    }

    #[test]
    fn and_exists_is_conjunction_then_exists(a in expr_strategy(6), b in expr_strategy(6), mask in 0u32..64) {
        let (mut s, v) = store_with_vars(6);
        let f = a.build(&mut s, &v);
        let g = b.build(&mut s, &v);
        let set: Vec<VarId> = (0..6).filter(|k| mask >> k & 1 == 1).map(|k| v[k]).collect();
        let cube = s.cube(&set).unwrap();
        let fg = s.and(f, g).unwrap();
        let expect = s.exists(&set, fg).unwrap();
        prop_assert_eq!(s.and_exists(f, g, cube).unwrap(), expect);
    }

    #[test]
    fn negation_laws(a in expr_strategy(8), b in expr_strategy(8)) {
        let (mut s, v) = store_with_vars(8);
        let f = a.build(&mut s, &v);
        let g = b.build(&mut s, &v);
        let nf = s.not(f).unwrap();
        prop_assert_eq!(s.not(nf).unwrap(), f);
        let fg = s.and(f, g).unwrap();
        let ng = s.not(g).unwrap();
        prop_assert_eq!(s.not(fg).unwrap(), s.or(nf, ng).unwrap());
    }

    #[test]
    fn shifting_round_trip(e in expr_strategy(5)) {
        // x_k at even positions, x'_k interleaved after it.
        let (mut s, v) = store_with_vars(10);
        let x: Vec<VarId> = (0..5).map(|k| v[2 * k]).collect();
        let xn: Vec<VarId> = (0..5).map(|k| v[2 * k + 1]).collect();
        let f = e.build(&mut s, &x);
        let fwd = s.rename(f, &x, &xn).unwrap();
        prop_assert_eq!(fwd, e.build(&mut s, &xn));
        prop_assert_eq!(s.rename(fwd, &xn, &x).unwrap(), f);
    }

    #[test]
    fn memo_is_observationally_invisible(ops in proptest::collection::vec((0u8..6, 0usize..8, 0usize..8, 0usize..10), 1..40)) {
        fn run(memoize: bool, ops: &[(u8, usize, usize, usize)]) -> Vec<Vec<bool>> {
            let mut s = NodeStore::with_config(StoreConfig { memoize, ..StoreConfig::small() });
            let v: Vec<VarId> = (0..10).map(|i| s.new_var(format!("v{i}"))).collect();
            let mut pool: Vec<Bdd> = v.iter().take(8).map(|&x| s.var(x).unwrap()).collect();
            for &(op, i, j, k) in ops {
                let (f, g) = (pool[i % pool.len()], pool[j % pool.len()]);
                let r = match op {
                    0 => s.and(f, g).unwrap(),
                    1 => s.xor(f, g).unwrap(),
                    2 => s.not(f).unwrap(),
                    3 => s.exists(&[v[k]], f).unwrap(),
                    4 => s.forall(&[v[k]], g).unwrap(),
                    _ => s.ite(f, g, pool[k % pool.len()]).unwrap(),
                };
                pool.push(r);
            }
            pool.iter()
                .map(|&f| (0..1024u32).map(|b| s.eval(f, &assignment(&v, b)).unwrap()).collect())
                .collect()
        }
        prop_assert_eq!(run(true, &ops), run(false, &ops));
    }
}
