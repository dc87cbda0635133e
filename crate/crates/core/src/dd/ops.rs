use rustc_hash::{FxHashMap, FxHashSet};

use super::store::{NodeStore, FALSE, TRUE};
use super::{BinOp, Bdd, DdError, DdResult, VarId};

pub(crate) const OP_AND: u32 = 1;
pub(crate) const OP_OR: u32 = 2;
pub(crate) const OP_XOR: u32 = 3;
pub(crate) const OP_IMP: u32 = 4;
pub(crate) const OP_IFF: u32 = 5;
pub(crate) const OP_NOT: u32 = 6;
pub(crate) const OP_ITE: u32 = 7;
pub(crate) const OP_RESTRICT: u32 = 8;

fn op_code(op: BinOp) -> u32 {
    match op {
        BinOp::And => OP_AND,
        BinOp::Or => OP_OR,
        BinOp::Xor => OP_XOR,
        BinOp::Implies => OP_IMP,
        BinOp::Iff => OP_IFF,
    }
}

impl NodeStore {
    pub fn apply(&mut self, op: BinOp, f: Bdd, g: Bdd) -> DdResult<Bdd> {
        let (a, b) = (self.open(f)?, self.open(g)?);
        let r = self.apply_rec(op_code(op), a, b)?;
        Ok(self.handle(r))
    }

    pub fn and(&mut self, f: Bdd, g: Bdd) -> DdResult<Bdd> {
        self.apply(BinOp::And, f, g)
    }

    pub fn or(&mut self, f: Bdd, g: Bdd) -> DdResult<Bdd> {
        self.apply(BinOp::Or, f, g)
    }

    pub fn xor(&mut self, f: Bdd, g: Bdd) -> DdResult<Bdd> {
        self.apply(BinOp::Xor, f, g)
    }

    pub fn implies(&mut self, f: Bdd, g: Bdd) -> DdResult<Bdd> {
        self.apply(BinOp::Implies, f, g)
    }

    pub fn iff(&mut self, f: Bdd, g: Bdd) -> DdResult<Bdd> {
        self.apply(BinOp::Iff, f, g)
    }

    pub fn not(&mut self, f: Bdd) -> DdResult<Bdd> {
        let a = self.open(f)?;
        let r = self.not_rec(a)?;
        Ok(self.handle(r))
    }

    /// Conjunction of all `fs`; `TRUE` when empty.
    pub fn and_all(&mut self, fs: impl IntoIterator<Item = Bdd>) -> DdResult<Bdd> {
        let mut acc = self.tt();
        for f in fs {
            acc = self.and(acc, f)?;
            if acc.is_false() {
                break;
            }
        }
        Ok(acc)
    }

    /// Disjunction of all `fs`; `FALSE` when empty.
    pub fn or_all(&mut self, fs: impl IntoIterator<Item = Bdd>) -> DdResult<Bdd> {
        let mut acc = self.ff();
        for f in fs {
            acc = self.or(acc, f)?;
            if acc.is_true() {
                break;
            }
        }
        Ok(acc)
    }

    /// If-then-else: `(f ∧ g) ∨ (¬f ∧ h)`.
    pub fn ite(&mut self, f: Bdd, g: Bdd, h: Bdd) -> DdResult<Bdd> {
        let (a, b, c) = (self.open(f)?, self.open(g)?, self.open(h)?);
        let r = self.ite_rec(a, b, c)?;
        Ok(self.handle(r))
    }

    /// Cofactor of `f` with `v` fixed to `value`.
    pub fn restrict(&mut self, f: Bdd, v: VarId, value: bool) -> DdResult<Bdd> {
        let a = self.open(f)?;
        self.check_var(v)?;
        let r = self.restrict_rec(a, v.0, value)?;
        Ok(self.handle(r))
    }

    /// Cofactor with respect to several fixed variables.
    pub fn restrict_all(&mut self, f: Bdd, fixed: &[(VarId, bool)]) -> DdResult<Bdd> {
        let mut acc = f;
        for &(v, value) in fixed {
            acc = self.restrict(acc, v, value)?;
        }
        Ok(acc)
    }

    /// Substitution `f[v/g]`.
    pub fn compose(&mut self, f: Bdd, v: VarId, g: Bdd) -> DdResult<Bdd> {
        self.open(g)?;
        let hi = self.restrict(f, v, true)?;
        let lo = self.restrict(f, v, false)?;
        self.ite(g, hi, lo)
    }

    /// Parallel substitution of `from[k]` by `to[k]`.
    ///
    /// All variables in `from` and `to` must be distinct and no `to` variable
    /// may occur in `f`. Orders need not agree: a renaming that moves a
    /// variable past others is rebuilt through `ite`.
    pub fn rename(&mut self, f: Bdd, from: &[VarId], to: &[VarId]) -> DdResult<Bdd> {
        let root = self.open(f)?;
        if from.len() != to.len() {
            return Err(DdError::LengthMismatch {
                from: from.len(),
                to: to.len(),
            });
        }
        let mut map: Vec<Option<u32>> = vec![None; self.var_count()];
        let mut used = FxHashSet::default();
        for (&a, &b) in from.iter().zip(to) {
            self.check_var(a)?;
            self.check_var(b)?;
            for v in [a, b] {
                if !used.insert(v) {
                    return Err(DdError::DuplicateVariable(self.var_name(v).to_string()));
                }
            }
            map[a.index()] = Some(b.0);
        }
        if from.is_empty() || root <= TRUE {
            return Ok(f);
        }
        let targets: FxHashSet<u32> = to.iter().map(|v| v.0).collect();
        for v in self.support(f)? {
            if targets.contains(&v.0) {
                return Err(DdError::OverlappingSupport(self.var_name(v).to_string()));
            }
        }
        let mut memo = FxHashMap::default();
        let r = self.rename_rec(root, &map, &mut memo)?;
        Ok(self.handle(r))
    }

    /// Variables `f` depends on, in order.
    pub fn support(&self, f: Bdd) -> DdResult<Vec<VarId>> {
        let root = self.open(f)?;
        let mut seen = FxHashSet::default();
        let mut vars = FxHashSet::default();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if n <= TRUE || !seen.insert(n) {
                continue;
            }
            let node = self.raw(n);
            vars.insert(node.var);
            stack.push(node.low);
            stack.push(node.high);
        }
        let mut out: Vec<VarId> = vars.into_iter().map(VarId).collect();
        out.sort_by_key(|v| self.var_level_of(v.0));
        Ok(out)
    }

    // ---- recursive kernels -------------------------------------------------

    pub(crate) fn not_rec(&mut self, f: u32) -> DdResult<u32> {
        match f {
            FALSE => return Ok(TRUE),
            TRUE => return Ok(FALSE),
            _ => {}
        }
        if let Some(r) = self.memo_get(OP_NOT, f, 0, 0) {
            return Ok(r);
        }
        let node = self.raw(f);
        let lo = self.not_rec(node.low)?;
        let hi = self.not_rec(node.high)?;
        let r = self.mk(node.var, lo, hi)?;
        self.memo_put(OP_NOT, f, 0, 0, r);
        Ok(r)
    }

    pub(crate) fn apply_rec(&mut self, op: u32, mut f: u32, mut g: u32) -> DdResult<u32> {
        match op {
            OP_AND => {
                if f == FALSE || g == FALSE {
                    return Ok(FALSE);
                }
                if f == TRUE || f == g {
                    return Ok(g);
                }
                if g == TRUE {
                    return Ok(f);
                }
            }
            OP_OR => {
                if f == TRUE || g == TRUE {
                    return Ok(TRUE);
                }
                if f == FALSE || f == g {
                    return Ok(g);
                }
                if g == FALSE {
                    return Ok(f);
                }
            }
            OP_XOR => {
                if f == g {
                    return Ok(FALSE);
                }
                if f == FALSE {
                    return Ok(g);
                }
                if g == FALSE {
                    return Ok(f);
                }
                if f == TRUE {
                    return self.not_rec(g);
                }
                if g == TRUE {
                    return self.not_rec(f);
                }
            }
            OP_IMP => {
                if f == FALSE || g == TRUE || f == g {
                    return Ok(TRUE);
                }
                if f == TRUE {
                    return Ok(g);
                }
                if g == FALSE {
                    return self.not_rec(f);
                }
            }
            OP_IFF => {
                if f == g {
                    return Ok(TRUE);
                }
                if f == TRUE {
                    return Ok(g);
                }
                if g == TRUE {
                    return Ok(f);
                }
                if f == FALSE {
                    return self.not_rec(g);
                }
                if g == FALSE {
                    return self.not_rec(f);
                }
            }
            _ => unreachable!("unknown binary op {op}"),
        }
        if op != OP_IMP && f > g {
            std::mem::swap(&mut f, &mut g);
        }
        if let Some(r) = self.memo_get(op, f, g, 0) {
            return Ok(r);
        }
        let (lf, lg) = (self.node_level(f), self.node_level(g));
        let level = lf.min(lg);
        let var = if lf <= lg { self.raw(f).var } else { self.raw(g).var };
        let (f0, f1) = self.cofactors(f, level);
        let (g0, g1) = self.cofactors(g, level);
        let lo = self.apply_rec(op, f0, g0)?;
        let hi = self.apply_rec(op, f1, g1)?;
        let r = self.mk(var, lo, hi)?;
        self.memo_put(op, f, g, 0, r);
        Ok(r)
    }

    pub(crate) fn ite_rec(&mut self, f: u32, g: u32, h: u32) -> DdResult<u32> {
        if f == TRUE {
            return Ok(g);
        }
        if f == FALSE {
            return Ok(h);
        }
        if g == h {
            return Ok(g);
        }
        if g == TRUE && h == FALSE {
            return Ok(f);
        }
        if g == FALSE && h == TRUE {
            return self.not_rec(f);
        }
        if h == FALSE {
            return self.apply_rec(OP_AND, f, g);
        }
        if g == TRUE {
            return self.apply_rec(OP_OR, f, h);
        }
        if let Some(r) = self.memo_get(OP_ITE, f, g, h) {
            return Ok(r);
        }
        let level = self
            .node_level(f)
            .min(self.node_level(g))
            .min(self.node_level(h));
        let var = [f, g, h]
            .into_iter()
            .find(|&n| self.node_level(n) == level)
            .map(|n| self.raw(n).var)
            .expect("some operand is at the top level");
        let (f0, f1) = self.cofactors(f, level);
        let (g0, g1) = self.cofactors(g, level);
        let (h0, h1) = self.cofactors(h, level);
        let lo = self.ite_rec(f0, g0, h0)?;
        let hi = self.ite_rec(f1, g1, h1)?;
        let r = self.mk(var, lo, hi)?;
        self.memo_put(OP_ITE, f, g, h, r);
        Ok(r)
    }

    fn restrict_rec(&mut self, f: u32, var: u32, value: bool) -> DdResult<u32> {
        let target = self.var_level_of(var);
        let level = self.node_level(f);
        if level > target {
            return Ok(f);
        }
        let node = self.raw(f);
        if level == target {
            return Ok(if value { node.high } else { node.low });
        }
        if let Some(r) = self.memo_get(OP_RESTRICT, f, var, value as u32) {
            return Ok(r);
        }
        let lo = self.restrict_rec(node.low, var, value)?;
        let hi = self.restrict_rec(node.high, var, value)?;
        let r = self.mk(node.var, lo, hi)?;
        self.memo_put(OP_RESTRICT, f, var, value as u32, r);
        Ok(r)
    }

    fn rename_rec(
        &mut self,
        f: u32,
        map: &[Option<u32>],
        memo: &mut FxHashMap<u32, u32>,
    ) -> DdResult<u32> {
        if f <= TRUE {
            return Ok(f);
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let node = self.raw(f);
        let lo = self.rename_rec(node.low, map, memo)?;
        let hi = self.rename_rec(node.high, map, memo)?;
        let var = map[node.var as usize].unwrap_or(node.var);
        let level = self.var_level_of(var);
        let r = if level < self.node_level(lo) && level < self.node_level(hi) {
            self.mk(var, lo, hi)?
        } else {
            let v = self.mk(var, FALSE, TRUE)?;
            self.ite_rec(v, hi, lo)?
        };
        memo.insert(f, r);
        Ok(r)
    }
}
