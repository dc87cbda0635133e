use super::ops::{OP_AND, OP_OR};
use super::store::{NodeStore, FALSE, TRUE};
use super::{Bdd, DdResult, VarId};

const OP_EXISTS: u32 = 9;
const OP_FORALL: u32 = 10;
const OP_AND_EXISTS: u32 = 11;

impl NodeStore {
    /// Positive conjunction of `vars`, used as a quantification set.
    pub fn cube(&mut self, vars: &[VarId]) -> DdResult<Bdd> {
        let mut sorted = Vec::with_capacity(vars.len());
        for &v in vars {
            sorted.push((self.level(v)?, v.0));
        }
        sorted.sort_unstable();
        sorted.dedup();
        let mut acc = TRUE;
        for &(_, v) in sorted.iter().rev() {
            acc = self.mk(v, FALSE, acc)?;
        }
        Ok(self.handle(acc))
    }

    /// `∃vars. f`
    pub fn exists(&mut self, vars: &[VarId], f: Bdd) -> DdResult<Bdd> {
        let cube = self.cube(vars)?;
        self.exists_cube(cube, f)
    }

    /// `∀vars. f`
    pub fn forall(&mut self, vars: &[VarId], f: Bdd) -> DdResult<Bdd> {
        let cube = self.cube(vars)?;
        self.forall_cube(cube, f)
    }

    /// Existential quantification over the variables of a [`cube`](Self::cube).
    pub fn exists_cube(&mut self, cube: Bdd, f: Bdd) -> DdResult<Bdd> {
        let (c, a) = (self.open(cube)?, self.open(f)?);
        let r = self.quant_rec(OP_EXISTS, a, c)?;
        Ok(self.handle(r))
    }

    pub fn forall_cube(&mut self, cube: Bdd, f: Bdd) -> DdResult<Bdd> {
        let (c, a) = (self.open(cube)?, self.open(f)?);
        let r = self.quant_rec(OP_FORALL, a, c)?;
        Ok(self.handle(r))
    }

    /// Relational product `∃cube. (f ∧ g)` without building the conjunction.
    pub fn and_exists(&mut self, f: Bdd, g: Bdd, cube: Bdd) -> DdResult<Bdd> {
        let (a, b, c) = (self.open(f)?, self.open(g)?, self.open(cube)?);
        let r = self.and_exists_rec(a, b, c)?;
        Ok(self.handle(r))
    }

    /// Drops cube variables that sit above `level`.
    #[inline]
    fn skip_cube(&self, mut cube: u32, level: u32) -> u32 {
        while cube > TRUE && self.node_level(cube) < level {
            cube = self.raw(cube).high;
        }
        cube
    }

    fn quant_rec(&mut self, op: u32, f: u32, cube: u32) -> DdResult<u32> {
        if f <= TRUE {
            return Ok(f);
        }
        let level = self.node_level(f);
        let cube = self.skip_cube(cube, level);
        if cube == TRUE {
            return Ok(f);
        }
        if let Some(r) = self.memo_get(op, f, cube, 0) {
            return Ok(r);
        }
        let node = self.raw(f);
        let r = if self.node_level(cube) == level {
            let rest = self.raw(cube).high;
            let lo = self.quant_rec(op, node.low, rest)?;
            let absorbing = if op == OP_EXISTS { TRUE } else { FALSE };
            if lo == absorbing {
                lo
            } else {
                let hi = self.quant_rec(op, node.high, rest)?;
                let join = if op == OP_EXISTS { OP_OR } else { OP_AND };
                self.apply_rec(join, lo, hi)?
            }
        } else {
            let lo = self.quant_rec(op, node.low, cube)?;
            let hi = self.quant_rec(op, node.high, cube)?;
            self.mk(node.var, lo, hi)?
        };
        self.memo_put(op, f, cube, 0, r);
        Ok(r)
    }

    fn and_exists_rec(&mut self, mut f: u32, mut g: u32, cube: u32) -> DdResult<u32> {
        if f == FALSE || g == FALSE {
            return Ok(FALSE);
        }
        if f == TRUE && g == TRUE {
            return Ok(TRUE);
        }
        if f == TRUE || f == g {
            return self.quant_rec(OP_EXISTS, g, cube);
        }
        if g == TRUE {
            return self.quant_rec(OP_EXISTS, f, cube);
        }
        if f > g {
            std::mem::swap(&mut f, &mut g);
        }
        let (lf, lg) = (self.node_level(f), self.node_level(g));
        let level = lf.min(lg);
        let cube = self.skip_cube(cube, level);
        if cube == TRUE {
            return self.apply_rec(OP_AND, f, g);
        }
        if let Some(r) = self.memo_get(OP_AND_EXISTS, f, g, cube) {
            return Ok(r);
        }
        let var = if lf <= lg { self.raw(f).var } else { self.raw(g).var };
        let (f0, f1) = self.cofactors(f, level);
        let (g0, g1) = self.cofactors(g, level);
        let r = if self.node_level(cube) == level {
            let rest = self.raw(cube).high;
            let lo = self.and_exists_rec(f0, g0, rest)?;
            if lo == TRUE {
                TRUE
            } else {
                let hi = self.and_exists_rec(f1, g1, rest)?;
                self.apply_rec(OP_OR, lo, hi)?
            }
        } else {
            let lo = self.and_exists_rec(f0, g0, cube)?;
            let hi = self.and_exists_rec(f1, g1, cube)?;
            self.mk(var, lo, hi)?
        };
        self.memo_put(OP_AND_EXISTS, f, g, cube, r);
        Ok(r)
    }
}
