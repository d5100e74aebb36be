use std::fmt::Write as _;

use super::ComponentGraph;
use crate::error::{Error, Result};
use crate::hypergraph::{gyo_reduce, join_tree, leq, Edge, Hypergraph, JoinTree, NodeSet};

/// An acyclic `Ha` with `H1 ≤ Ha ≤ H2`, plus the evidence.
#[derive(Clone, Debug)]
pub struct TreeProjection {
    pub ha: Hypergraph,
    pub join_tree: JoinTree,
    /// `lower[i]`: an edge of `Ha` containing edge `i` of `H1`.
    pub lower: Vec<usize>,
    /// `upper[i]`: an edge of `H2` containing edge `i` of `Ha`.
    pub upper: Vec<usize>,
}

impl TreeProjection {
    /// `(H, H, H)` for an acyclic `H`.
    pub fn of_acyclic(h: &Hypergraph) -> Option<TreeProjection> {
        let jt = join_tree(h)?;
        let id: Vec<usize> = (0..h.edge_count()).collect();
        Some(TreeProjection {
            ha: h.clone(),
            join_tree: jt,
            lower: id.clone(),
            upper: id,
        })
    }

    /// Largest edge of `Ha`.
    pub fn max_edge(&self) -> usize {
        self.ha.max_arity()
    }

    /// `Ha` in the hypergraph text format, followed by comment lines giving
    /// the join tree (`% join parent child`) and the covering `H2` edges
    /// (`% cover edge squad`).
    pub fn to_text(&self, h2: &Hypergraph) -> String {
        let mut s = self.ha.to_text();
        let name = |i: usize| self.ha.edge(i).name.as_str();
        let _ = writeln!(s, "% root {}", name(self.join_tree.root));
        for v in self.join_tree.preorder() {
            if let Some(p) = self.join_tree.parent[v] {
                let _ = writeln!(s, "% join {} {}", name(p), name(v));
            }
        }
        for (i, &u) in self.upper.iter().enumerate() {
            let _ = writeln!(s, "% cover {} {}", name(i), h2.edge(u).name);
        }
        s
    }
}

/// Reads `Ha` off a monotone component graph: one edge per distinct
/// non-empty cop set of an attack move, listed from the roots down.
pub fn extract_tree_projection(
    g: &ComponentGraph,
    h1: &Hypergraph,
    h2: &Hypergraph,
) -> Result<TreeProjection> {
    let h2a = h2.aligned_to(h1)?;
    if !g.is_monotone() {
        return Err(Error::Validation("component graph is not monotone".into()));
    }
    let mut moves: Vec<(NodeSet, usize)> = Vec::new();
    for v in g.sequence().into_iter().rev() {
        if let Some((squad, cops)) = g.move_of(h1, v) {
            if !cops.is_empty() && !moves.iter().any(|(c, _)| *c == cops) {
                moves.push((cops, squad));
            }
        }
    }
    let edges: Vec<Edge> = moves
        .iter()
        .enumerate()
        .map(|(i, (cops, _))| Edge {
            name: format!("a{}", i + 1),
            nodes: cops.clone(),
        })
        .collect();
    let ha = Hypergraph::with_universe(h1.names().to_vec(), edges)
        .map_err(|e| Error::Validation(format!("cop sets do not span H1: {e}")))?;
    let lower = leq(h1, &ha).ok_or_else(|| Error::Validation("H1 ≰ Ha".into()))?;
    let upper: Vec<usize> = moves.iter().map(|(_, s)| *s).collect();
    let jt = join_tree(&ha).ok_or_else(|| Error::Validation("Ha is cyclic".into()))?;
    let tp = TreeProjection {
        ha,
        join_tree: jt,
        lower,
        upper,
    };
    validate_tree_projection(&tp, h1, &h2a).map_err(Error::Validation)?;
    Ok(tp)
}

/// Checks acyclicity of `Ha`, the join tree, and both coverage witnesses.
/// The error names the first violated condition.
pub fn validate_tree_projection(
    tp: &TreeProjection,
    h1: &Hypergraph,
    h2: &Hypergraph,
) -> Result<(), String> {
    let mut a: Vec<&String> = tp.ha.names().iter().collect();
    let mut b: Vec<&String> = h1.names().iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return Err("Ha and H1 have different node sets".into());
    }
    if !gyo_reduce(&tp.ha).acyclic {
        return Err("Ha is not acyclic".into());
    }
    tp.join_tree
        .check(&tp.ha)
        .map_err(|e| format!("join tree: {e}"))?;
    if tp.lower.len() != h1.edge_count() {
        return Err("lower witness has the wrong length".into());
    }
    for (i, &w) in tp.lower.iter().enumerate() {
        let e = h1.edge(i);
        let covered = w < tp.ha.edge_count()
            && h1
                .translate(&e.nodes, &tp.ha)
                .is_some_and(|t| t.is_subset(&tp.ha.edge(w).nodes));
        if !covered {
            return Err(format!("H1 edge `{}` is not covered by its witness", e.name));
        }
    }
    if tp.upper.len() != tp.ha.edge_count() {
        return Err("upper witness has the wrong length".into());
    }
    for (i, &w) in tp.upper.iter().enumerate() {
        let e = tp.ha.edge(i);
        let covered = w < h2.edge_count()
            && tp
                .ha
                .translate(&e.nodes, h2)
                .is_some_and(|t| t.is_subset(&h2.edge(w).nodes));
        if !covered {
            return Err(format!(
                "Ha edge `{}` {} is not inside an H2 edge",
                e.name,
                tp.ha.fmt_set(&e.nodes)
            ));
        }
    }
    Ok(())
}
