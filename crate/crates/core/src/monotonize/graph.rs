use std::fmt::Write as _;

use crate::game::options_from;
use crate::hypergraph::{Hypergraph, NodeSet};

/// A component-graph node `(h, C)`; an empty `comp` is a capture node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgNode {
    pub squad: Option<usize>,
    pub comp: NodeSet,
    pub children: Vec<usize>,
}

impl CgNode {
    pub fn is_capture(&self) -> bool {
        self.comp.is_empty()
    }
}

/// Compact encoding of a nice strategy. Nodes are addressed by id; removed
/// nodes stay in the arena but are skipped by every query. Two live nodes
/// may carry the same label when rewriting gives one of them a different
/// move.
#[derive(Clone, Debug)]
pub struct ComponentGraph {
    nodes: Vec<CgNode>,
    alive: Vec<bool>,
    roots: Vec<usize>,
}

impl ComponentGraph {
    pub fn new(nodes: Vec<CgNode>, roots: Vec<usize>) -> Self {
        let alive = vec![true; nodes.len()];
        ComponentGraph {
            nodes,
            alive,
            roots,
        }
    }

    pub fn node(&self, v: usize) -> &CgNode {
        &self.nodes[v]
    }

    pub(crate) fn node_mut(&mut self, v: usize) -> &mut CgNode {
        &mut self.nodes[v]
    }

    pub(crate) fn push(&mut self, node: CgNode) -> usize {
        self.nodes.push(node);
        self.alive.push(true);
        self.nodes.len() - 1
    }

    pub(crate) fn kill(&mut self, v: usize) {
        self.alive[v] = false;
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.roots.contains(&v)
    }

    /// Live node ids in ascending order.
    pub fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&v| self.alive[v])
    }

    /// Number of live nodes.
    pub fn len(&self) -> usize {
        self.live().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Live parents of every node, in ascending id order.
    pub fn parents(&self) -> Vec<Vec<usize>> {
        let mut ps = vec![Vec::new(); self.nodes.len()];
        for v in self.live() {
            for &c in &self.nodes[v].children {
                ps[c].push(v);
            }
        }
        ps
    }

    pub fn max_in_degree(&self) -> usize {
        self.parents()
            .iter()
            .enumerate()
            .filter(|(v, _)| self.alive[*v])
            .map(|(_, p)| p.len())
            .max()
            .unwrap_or(0)
    }

    /// The move the node encodes: the children's squad and the cop set
    /// `Fr(C) \ ∪ children`. A capture child contributes nothing, so the
    /// Captain then occupies the whole frontier.
    pub fn move_of(&self, h1: &Hypergraph, v: usize) -> Option<(usize, NodeSet)> {
        let n = &self.nodes[v];
        if n.is_capture() {
            return None;
        }
        let first = *n.children.first()?;
        let squad = self.nodes[first].squad?;
        let mut cops = h1.frontier(&n.comp);
        for &c in &n.children {
            cops.difference_with(&self.nodes[c].comp);
        }
        Some((squad, cops))
    }

    /// Live nodes in a topological order with leaves first and roots last,
    /// by post-order depth-first search from the roots.
    pub fn sequence(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut seen = vec![false; self.nodes.len()];
        for &r in &self.roots {
            let mut stack = vec![(r, 0usize)];
            seen[r] = true;
            while let Some((v, i)) = stack.pop() {
                if let Some(&c) = self.nodes[v].children.get(i) {
                    stack.push((v, i + 1));
                    if !seen[c] {
                        seen[c] = true;
                        stack.push((c, 0));
                    }
                } else {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Every node's children lie inside its component.
    pub fn is_monotone(&self) -> bool {
        self.live().all(|v| {
            let n = &self.nodes[v];
            n.children
                .iter()
                .all(|&c| self.nodes[c].comp.is_subset(&n.comp))
        })
    }

    pub fn is_acyclic(&self) -> bool {
        let children: Vec<Vec<usize>> = (0..self.nodes.len())
            .map(|v| {
                if self.alive[v] {
                    self.nodes[v].children.clone()
                } else {
                    Vec::new()
                }
            })
            .collect();
        crate::game::strategy_topo(&children).is_some()
    }

    /// Checks the component-graph conditions: roots are the connected parts
    /// of `h1` and the only parentless nodes; every node's children share one
    /// squad `h_r`, the encoded move lies in `h_r`, and its Robber options are
    /// exactly the children (a capture child demands `Fr(C) ⊆ h_r`); the graph
    /// is acyclic.
    pub fn validate(&self, h1: &Hypergraph, h2: &Hypergraph) -> Result<(), String> {
        let parts: Vec<NodeSet> = h1.connected_parts().into_iter().map(|c| c.members).collect();
        if self.roots.len() != parts.len() {
            return Err("one root per connected part expected".into());
        }
        for (&r, part) in self.roots.iter().zip(&parts) {
            let n = &self.nodes[r];
            if !self.alive[r] || n.squad.is_some() || &n.comp != part {
                return Err(format!("root {r} is not (∅, {})", h1.fmt_set(part)));
            }
        }
        let parents = self.parents();
        for v in self.live() {
            let n = &self.nodes[v];
            let is_root = self.is_root(v);
            if is_root != parents[v].is_empty() {
                return Err(format!("node {v}: only roots may lack incoming arcs"));
            }
            if n.children.iter().any(|&c| !self.alive[c]) {
                return Err(format!("node {v} points at a removed node"));
            }
            if n.is_capture() {
                if n.squad.is_none() || !n.children.is_empty() {
                    return Err(format!("capture node {v} is malformed"));
                }
                continue;
            }
            let border = h1.border(&n.comp);
            if let Some(h) = n.squad {
                if !border.is_subset(&h2.edge(h).nodes) {
                    return Err(format!("node {v}: ∂C ⊄ h"));
                }
            }
            if h1.reach(&n.comp, &border) != n.comp {
                return Err(format!("node {v}: C is not a [∂C]-component"));
            }
            if n.children.is_empty() {
                return Err(format!("node {v} has no move"));
            }
            let squads: Vec<Option<usize>> =
                n.children.iter().map(|&c| self.nodes[c].squad).collect();
            if squads.iter().any(|s| s.is_none() || *s != squads[0]) {
                return Err(format!("node {v}: children disagree on the squad"));
            }
            let (hr, cops) = self.move_of(h1, v).expect("non-capture with children");
            let squad = &h2.edge(hr).nodes;
            let captures = n.children.iter().filter(|&&c| self.nodes[c].is_capture()).count();
            if captures > 0 {
                if n.children.len() != 1 {
                    return Err(format!("node {v}: capture child next to other children"));
                }
                if !h1.frontier(&n.comp).is_subset(squad) {
                    return Err(format!("node {v}: capture child but Fr(C) ⊄ h_r"));
                }
                continue;
            }
            if !cops.is_subset(squad) {
                return Err(format!("node {v}: encoded move is not inside h_r"));
            }
            let mut want: Vec<NodeSet> = options_from(h1, &n.comp, &cops)
                .into_iter()
                .map(|c| c.members)
                .collect();
            let mut got: Vec<NodeSet> = n.children.iter().map(|&c| self.nodes[c].comp.clone()).collect();
            want.sort();
            got.sort();
            if want != got {
                return Err(format!("node {v}: children are not the Robber's options"));
            }
        }
        if !self.is_acyclic() {
            return Err("component graph has a cycle".into());
        }
        Ok(())
    }

    /// Copy without removed nodes, ids renumbered in ascending order.
    pub fn compact(&self) -> ComponentGraph {
        let mut map = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for v in self.live() {
            map[v] = nodes.len();
            nodes.push(self.nodes[v].clone());
        }
        for n in &mut nodes {
            for c in &mut n.children {
                *c = map[*c];
            }
        }
        let roots = self.roots.iter().map(|&r| map[r]).collect();
        ComponentGraph::new(nodes, roots)
    }

    /// One line per live node with its encoded move, then one per arc.
    pub fn to_trace(&self, h1: &Hypergraph, h2: &Hypergraph) -> String {
        let mut s = String::new();
        for v in self.live() {
            let n = &self.nodes[v];
            let squad = crate::game::squad_label(h2, n.squad);
            if n.is_capture() {
                let _ = writeln!(s, "node {v} squad={squad} capture");
                continue;
            }
            let rep = n.comp.first().expect("non-empty");
            let _ = write!(s, "node {v} squad={squad} comp={}:{}", h1.name(rep), h1.fmt_set(&n.comp));
            if let Some((hr, cops)) = self.move_of(h1, v) {
                let _ = write!(s, " move=({},{})", h2.edge(hr).name, h1.fmt_set(&cops));
            }
            s.push('\n');
        }
        for v in self.live() {
            for c in &self.nodes[v].children {
                let _ = writeln!(s, "arc {v} {c}");
            }
        }
        s
    }

    pub fn to_dot(&self, h1: &Hypergraph, h2: &Hypergraph) -> String {
        let mut s = String::from("digraph components {\n  node [shape=box];\n");
        for v in self.live() {
            let n = &self.nodes[v];
            let comp = if n.is_capture() {
                "capture".to_string()
            } else {
                h1.fmt_set(&n.comp)
            };
            let squad = crate::game::squad_label(h2, n.squad);
            let _ = writeln!(s, "  n{v} [label=\"{squad} {comp}\"];");
        }
        for v in self.live() {
            for c in &self.nodes[v].children {
                let _ = writeln!(s, "  n{v} -> n{c};");
            }
        }
        s.push_str("}\n");
        s
    }
}
