use std::sync::atomic::{AtomicU32, Ordering};

use rustc_hash::FxHashMap;

use super::{Bdd, DdError, DdResult, VarId};

pub(crate) const FALSE: u32 = 0;
pub(crate) const TRUE: u32 = 1;
/// Level of the two leaves: below every variable.
pub(crate) const LEAF_LEVEL: u32 = u32::MAX;

/// Environment variable overriding the initial unique-table capacity (log2).
pub const UNIQUE_TABLE_BITS_ENV: &str = "CMBP_UNIQUE_TABLE_BITS";

static NEXT_STORE_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Node {
    pub var: u32,
    pub low: u32,
    pub high: u32,
}

#[derive(Debug, Clone)]
pub struct StoreConfig {
    /// log2 of the initial unique-table capacity; the table doubles as needed.
    pub unique_table_bits: u8,
    /// log2 of the number of computed-table slots.
    pub computed_table_bits: u8,
    /// Disable to run every operation without memoization.
    pub memoize: bool,
    pub max_nodes: usize,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            unique_table_bits: 20,
            computed_table_bits: 18,
            memoize: true,
            max_nodes: 1 << 26,
        }
    }
}

impl StoreConfig {
    /// Default configuration with the unique-table size taken from
    /// `CMBP_UNIQUE_TABLE_BITS` when it is set to a usable integer.
    pub fn from_env() -> Self {
        let mut config = StoreConfig::default();
        if let Some(bits) = std::env::var(UNIQUE_TABLE_BITS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u8>().ok())
        {
            config.unique_table_bits = bits.min(30);
        }
        config
    }

    /// Tables sized for tiny throwaway stores (tests, scratch checks).
    pub fn small() -> Self {
        StoreConfig {
            unique_table_bits: 10,
            computed_table_bits: 12,
            ..StoreConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct CacheEntry {
    op: u32,
    a: u32,
    b: u32,
    c: u32,
    result: u32,
}

const EMPTY_ENTRY: CacheEntry = CacheEntry {
    op: 0,
    a: 0,
    b: 0,
    c: 0,
    result: 0,
};

/// Direct-mapped memo of recent results; a colliding insert overwrites.
#[derive(Debug)]
struct ComputedTable {
    slots: Vec<CacheEntry>,
    mask: usize,
    enabled: bool,
}

impl ComputedTable {
    fn new(bits: u8, enabled: bool) -> Self {
        let size = if enabled { 1usize << bits } else { 1 };
        ComputedTable {
            slots: vec![EMPTY_ENTRY; size],
            mask: size - 1,
            enabled,
        }
    }

    #[inline]
    fn slot(&self, op: u32, a: u32, b: u32, c: u32) -> usize {
        let mut h = (op as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        h ^= (a as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
        h = h.rotate_left(23) ^ (b as u64).wrapping_mul(0x1656_67B1_9E37_79F9);
        h = h.rotate_left(29) ^ (c as u64).wrapping_mul(0x85EB_CA77_C2B2_AE63);
        h ^= h >> 31;
        (h as usize) & self.mask
    }

    #[inline]
    fn get(&self, op: u32, a: u32, b: u32, c: u32) -> Option<u32> {
        if !self.enabled {
            return None;
        }
        let e = &self.slots[self.slot(op, a, b, c)];
        (e.op == op && e.a == a && e.b == b && e.c == c).then_some(e.result)
    }

    #[inline]
    fn put(&mut self, op: u32, a: u32, b: u32, c: u32, result: u32) {
        if !self.enabled {
            return;
        }
        let i = self.slot(op, a, b, c);
        self.slots[i] = CacheEntry { op, a, b, c, result };
    }
}

/// Shared multi-rooted DAG holding every node of every function built in it.
///
/// A store is a single-threaded unit; independent stores may be used from
/// different threads.
#[derive(Debug)]
pub struct NodeStore {
    pub(crate) id: u32,
    pub(crate) nodes: Vec<Node>,
    unique: FxHashMap<Node, u32>,
    computed: ComputedTable,
    max_nodes: usize,
    /// VarId -> position in the order.
    pub(crate) var_level: Vec<u32>,
    /// Position -> VarId.
    pub(crate) level_var: Vec<u32>,
    pub(crate) var_names: Vec<String>,
}

impl Default for NodeStore {
    fn default() -> Self {
        NodeStore::new()
    }
}

impl NodeStore {
    /// Store configured from the environment (see [`StoreConfig::from_env`]).
    pub fn new() -> Self {
        NodeStore::with_config(StoreConfig::from_env())
    }

    pub fn with_config(config: StoreConfig) -> Self {
        let leaf = |v| Node {
            var: u32::MAX,
            low: v,
            high: v,
        };
        NodeStore {
            id: NEXT_STORE_ID.fetch_add(1, Ordering::Relaxed),
            nodes: vec![leaf(FALSE), leaf(TRUE)],
            unique: FxHashMap::with_capacity_and_hasher(
                1usize << config.unique_table_bits.min(30),
                Default::default(),
            ),
            computed: ComputedTable::new(config.computed_table_bits.min(28), config.memoize),
            max_nodes: config.max_nodes,
            var_level: Vec::new(),
            level_var: Vec::new(),
            var_names: Vec::new(),
        }
    }

    pub fn ff(&self) -> Bdd {
        self.handle(FALSE)
    }

    pub fn tt(&self) -> Bdd {
        self.handle(TRUE)
    }

    pub fn constant(&self, value: bool) -> Bdd {
        if value {
            self.tt()
        } else {
            self.ff()
        }
    }

    /// Number of internal nodes currently allocated (leaves excluded).
    pub fn allocated_nodes(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn var_count(&self) -> usize {
        self.var_level.len()
    }

    // ---- variables and order -------------------------------------------

    /// Declares a fresh variable at the bottom of the order.
    pub fn new_var(&mut self, name: impl Into<String>) -> VarId {
        let level = self.level_var.len();
        self.insert_var_at(name.into(), level)
    }

    /// Declares a fresh variable placed immediately above `anchor`.
    pub fn new_var_before(&mut self, name: impl Into<String>, anchor: VarId) -> DdResult<VarId> {
        let level = self.level(anchor)? as usize;
        Ok(self.insert_var_at(name.into(), level))
    }

    /// Declares a fresh variable placed immediately below `anchor`.
    pub fn new_var_after(&mut self, name: impl Into<String>, anchor: VarId) -> DdResult<VarId> {
        let level = self.level(anchor)? as usize + 1;
        Ok(self.insert_var_at(name.into(), level))
    }

    fn insert_var_at(&mut self, name: String, level: usize) -> VarId {
        // A fresh variable labels no node yet, so inserting it anywhere keeps
        // every existing node correctly ordered.
        let id = self.var_level.len() as u32;
        self.level_var.insert(level, id);
        self.var_level.push(0);
        self.var_names.push(name);
        for (pos, &v) in self.level_var.iter().enumerate().skip(level) {
            self.var_level[v as usize] = pos as u32;
        }
        VarId(id)
    }

    /// Fixes the order of all declared variables to the concatenation of
    /// `groups`. Only allowed before any node has been created.
    pub fn set_order(&mut self, groups: &[Vec<VarId>]) -> DdResult<()> {
        if self.allocated_nodes() > 0 {
            return Err(DdError::ReorderAfterCreation);
        }
        let order: Vec<u32> = groups.iter().flatten().map(|v| v.0).collect();
        let mut seen = vec![false; self.var_count()];
        for &v in &order {
            let slot = seen
                .get_mut(v as usize)
                .ok_or(DdError::UnknownVariable(v))?;
            if *slot {
                return Err(DdError::InvalidOrder(format!(
                    "`{}` listed twice",
                    self.var_names[v as usize]
                )));
            }
            *slot = true;
        }
        if order.len() != self.var_count() {
            return Err(DdError::InvalidOrder(format!(
                "{} of {} variables placed",
                order.len(),
                self.var_count()
            )));
        }
        for (pos, &v) in order.iter().enumerate() {
            self.var_level[v as usize] = pos as u32;
        }
        self.level_var = order;
        Ok(())
    }

    /// Hook for dynamic variable reordering. The order is static; this only
    /// reports whether a reordering pass could run.
    pub fn reorder_hook(&mut self) -> DdResult<()> {
        Ok(())
    }

    pub fn order(&self) -> Vec<VarId> {
        self.level_var.iter().map(|&v| VarId(v)).collect()
    }

    pub fn level(&self, v: VarId) -> DdResult<u32> {
        self.var_level
            .get(v.index())
            .copied()
            .ok_or(DdError::UnknownVariable(v.0))
    }

    pub fn var_name(&self, v: VarId) -> &str {
        self.var_names
            .get(v.index())
            .map(String::as_str)
            .unwrap_or("?")
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.var_names
            .iter()
            .position(|n| n == name)
            .map(|i| VarId(i as u32))
    }

    pub(crate) fn check_var(&self, v: VarId) -> DdResult<()> {
        self.level(v).map(|_| ())
    }

    // ---- handles ---------------------------------------------------------

    #[inline]
    pub(crate) fn handle(&self, node: u32) -> Bdd {
        Bdd {
            store: self.id,
            node,
        }
    }

    #[inline]
    pub(crate) fn open(&self, f: Bdd) -> DdResult<u32> {
        if f.store != self.id {
            return Err(DdError::ForeignHandle);
        }
        Ok(f.node)
    }

    /// Function that is true exactly when `v` is true.
    pub fn var(&mut self, v: VarId) -> DdResult<Bdd> {
        self.check_var(v)?;
        let n = self.mk(v.0, FALSE, TRUE)?;
        Ok(self.handle(n))
    }

    /// Function that is true exactly when `v` is false.
    pub fn nvar(&mut self, v: VarId) -> DdResult<Bdd> {
        self.check_var(v)?;
        let n = self.mk(v.0, TRUE, FALSE)?;
        Ok(self.handle(n))
    }

    pub fn literal(&mut self, v: VarId, positive: bool) -> DdResult<Bdd> {
        if positive {
            self.var(v)
        } else {
            self.nvar(v)
        }
    }

    /// Decision node of `f`: `(variable, low, high)`, or `None` for a leaf.
    pub fn node(&self, f: Bdd) -> DdResult<Option<(VarId, Bdd, Bdd)>> {
        let n = self.open(f)?;
        if n <= TRUE {
            return Ok(None);
        }
        let node = self.nodes[n as usize];
        Ok(Some((
            VarId(node.var),
            self.handle(node.low),
            self.handle(node.high),
        )))
    }

    /// Builds the node `if var then high else low`, checking that `var` sits
    /// strictly above the top variables of both children.
    pub fn make_node(&mut self, var: VarId, low: Bdd, high: Bdd) -> DdResult<Bdd> {
        let level = self.level(var)?;
        let (lo, hi) = (self.open(low)?, self.open(high)?);
        if level >= self.node_level(lo) || level >= self.node_level(hi) {
            return Err(DdError::OrderViolation {
                var: self.var_name(var).to_string(),
            });
        }
        let n = self.mk(var.0, lo, hi)?;
        Ok(self.handle(n))
    }

    // ---- internals -------------------------------------------------------

    #[inline]
    pub(crate) fn node_level(&self, n: u32) -> u32 {
        if n <= TRUE {
            LEAF_LEVEL
        } else {
            self.var_level[self.nodes[n as usize].var as usize]
        }
    }

    #[inline]
    pub(crate) fn raw(&self, n: u32) -> Node {
        self.nodes[n as usize]
    }

    /// Cofactors of `n` with respect to the variable at `level`.
    #[inline]
    pub(crate) fn cofactors(&self, n: u32, level: u32) -> (u32, u32) {
        if self.node_level(n) == level {
            let node = self.nodes[n as usize];
            (node.low, node.high)
        } else {
            (n, n)
        }
    }

    /// Find-or-create through the unique table; never creates redundant nodes.
    pub(crate) fn mk(&mut self, var: u32, low: u32, high: u32) -> DdResult<u32> {
        if low == high {
            return Ok(low);
        }
        let key = Node { var, low, high };
        if let Some(&n) = self.unique.get(&key) {
            return Ok(n);
        }
        if self.nodes.len() >= self.max_nodes {
            return Err(DdError::NodeLimit {
                limit: self.max_nodes,
            });
        }
        debug_assert!(self.var_level[var as usize] < self.node_level(low));
        debug_assert!(self.var_level[var as usize] < self.node_level(high));
        let n = self.nodes.len() as u32;
        self.nodes.push(key);
        self.unique.insert(key, n);
        Ok(n)
    }

    #[inline]
    pub(crate) fn memo_get(&self, op: u32, a: u32, b: u32, c: u32) -> Option<u32> {
        self.computed.get(op, a, b, c)
    }

    #[inline]
    pub(crate) fn memo_put(&mut self, op: u32, a: u32, b: u32, c: u32, r: u32) {
        self.computed.put(op, a, b, c, r)
    }

    pub(crate) fn var_level_of(&self, var: u32) -> u32 {
        self.var_level[var as usize]
    }
}
