use std::fmt::Write;

use rustc_hash::FxHashSet;

use super::store::{NodeStore, FALSE, TRUE};
use super::{Bdd, DdResult};

impl NodeStore {
    /// Graphviz rendering of `f`: solid edges are high branches, dashed edges
    /// low branches.
    pub fn to_dot(&self, f: Bdd) -> DdResult<String> {
        let root = self.open(f)?;
        let mut out = String::from("digraph bdd {\n  node [shape=circle];\n");
        let mut seen = FxHashSet::default();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            match n {
                FALSE => out.push_str("  n0 [shape=box,label=\"False\"];\n"),
                TRUE => out.push_str("  n1 [shape=box,label=\"True\"];\n"),
                _ => {
                    let node = self.raw(n);
                    let name = &self.var_names[node.var as usize];
                    let _ = writeln!(out, "  n{n} [label=\"{name}\"];");
                    let _ = writeln!(out, "  n{n} -> n{} [style=solid];", node.high);
                    let _ = writeln!(out, "  n{n} -> n{} [style=dashed];", node.low);
                    stack.push(node.high);
                    stack.push(node.low);
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}
