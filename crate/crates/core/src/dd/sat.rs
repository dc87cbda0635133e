use std::collections::BTreeMap;

use rustc_hash::{FxHashMap, FxHashSet};

use super::store::{NodeStore, FALSE, TRUE};
use super::{Bdd, DdError, DdResult, VarId};

/// Truth values for a set of variables.
pub type Assignment = BTreeMap<VarId, bool>;

impl NodeStore {
    /// Truth value of `f` under `a`. Only the variables met on the evaluated
    /// path need a value.
    pub fn eval(&self, f: Bdd, a: &Assignment) -> DdResult<bool> {
        let mut n = self.open(f)?;
        while n > TRUE {
            let node = self.raw(n);
            let value = a
                .get(&VarId(node.var))
                .ok_or_else(|| DdError::MissingAssignment(self.var_names[node.var as usize].clone()))?;
            n = if *value { node.high } else { node.low };
        }
        Ok(n == TRUE)
    }

    /// Up to `limit` total assignments over `over` that satisfy `f`, in
    /// lexicographic variable order with the low branch first.
    ///
    /// Variables of `f` outside `over` are projected away existentially.
    pub fn enumerate_sats(&mut self, f: Bdd, over: &[VarId], limit: usize) -> DdResult<Vec<Assignment>> {
        let f = self.project(f, over)?;
        let mut vars: Vec<(u32, VarId)> = Vec::with_capacity(over.len());
        for &v in over {
            vars.push((self.level(v)?, v));
        }
        vars.sort_unstable();
        vars.dedup();
        let vars: Vec<VarId> = vars.into_iter().map(|(_, v)| v).collect();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(vars.len());
        let root = self.open(f)?;
        self.enum_rec(root, &vars, 0, &mut current, &mut out, limit);
        Ok(out)
    }

    fn enum_rec(
        &self,
        n: u32,
        vars: &[VarId],
        depth: usize,
        current: &mut Vec<bool>,
        out: &mut Vec<Assignment>,
        limit: usize,
    ) {
        if n == FALSE || out.len() >= limit {
            return;
        }
        if depth == vars.len() {
            debug_assert_eq!(n, TRUE);
            out.push(vars.iter().copied().zip(current.iter().copied()).collect());
            return;
        }
        let v = vars[depth];
        let (lo, hi) = if n > TRUE && self.raw(n).var == v.0 {
            let node = self.raw(n);
            (node.low, node.high)
        } else {
            (n, n)
        };
        for (value, child) in [(false, lo), (true, hi)] {
            current.push(value);
            self.enum_rec(child, vars, depth + 1, current, out, limit);
            current.pop();
        }
    }

    /// Number of assignments over `over` satisfying `f` (projected onto `over`).
    pub fn sat_count(&mut self, f: Bdd, over: &[VarId]) -> DdResult<u128> {
        let f = self.project(f, over)?;
        let mut levels: Vec<u32> = Vec::with_capacity(over.len());
        for &v in over {
            levels.push(self.level(v)?);
        }
        levels.sort_unstable();
        levels.dedup();
        let position: FxHashMap<u32, usize> =
            levels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let root = self.open(f)?;
        let mut memo = FxHashMap::default();
        let pos_of = |n: u32, store: &NodeStore| -> usize {
            if n <= TRUE {
                levels.len()
            } else {
                position[&store.node_level(n)]
            }
        };
        fn rec(
            store: &NodeStore,
            n: u32,
            pos_of: &dyn Fn(u32, &NodeStore) -> usize,
            memo: &mut FxHashMap<u32, u128>,
        ) -> u128 {
            if n == FALSE {
                return 0;
            }
            if n == TRUE {
                return 1;
            }
            if let Some(&c) = memo.get(&n) {
                return c;
            }
            let node = store.raw(n);
            let here = pos_of(n, store);
            let mut total = 0u128;
            for child in [node.low, node.high] {
                let gap = pos_of(child, store) - here - 1;
                let sub = rec(store, child, pos_of, memo);
                total = total.saturating_add(sub.saturating_mul(1u128 << gap.min(127)));
            }
            memo.insert(n, total);
            total
        }
        let top = pos_of(root, self);
        let c = rec(self, root, &pos_of, &mut memo);
        Ok(c.saturating_mul(1u128 << top.min(127)))
    }

    /// Quantifies away every variable of `f` that is not in `keep`.
    fn project(&mut self, f: Bdd, keep: &[VarId]) -> DdResult<Bdd> {
        let keep: FxHashSet<VarId> = keep.iter().copied().collect();
        let drop: Vec<VarId> = self
            .support(f)?
            .into_iter()
            .filter(|v| !keep.contains(v))
            .collect();
        if drop.is_empty() {
            Ok(f)
        } else {
            self.exists(&drop, f)
        }
    }

    /// Distinct nodes reachable from `f`, counting the leaves reached.
    pub fn node_count(&self, f: Bdd) -> DdResult<usize> {
        let root = self.open(f)?;
        let mut seen = FxHashSet::default();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if n > TRUE {
                let node = self.raw(n);
                stack.push(node.low);
                stack.push(node.high);
            }
        }
        Ok(seen.len())
    }

    /// Sum of node counts, sharing nodes between the roots.
    pub fn shared_node_count(&self, fs: &[Bdd]) -> DdResult<usize> {
        let mut seen = FxHashSet::default();
        let mut stack = Vec::new();
        for &f in fs {
            stack.push(self.open(f)?);
        }
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if n > TRUE {
                let node = self.raw(n);
                stack.push(node.low);
                stack.push(node.high);
            }
        }
        Ok(seen.len())
    }
}
