//! Rewriting nice greedy strategies into monotone ones via escape doors, and
//! reading tree projections off the result.

mod graph;
mod projection;

pub use graph::{CgNode, ComponentGraph};
pub use projection::{extract_tree_projection, validate_tree_projection, TreeProjection};

use crate::error::{Error, Result};
use crate::game::{
    component_graph, extract_strategy, make_nice, options_from, robber_options, GameGraph,
    StrategyGraph,
};
use crate::hypergraph::{Hypergraph, NodeSet};

/// `ED((M_r, C_r), M_s) = M_r ∩ Fr(C_r) \ M_s`: the cops the Robber gets
/// back when the Captain moves from `M_r` to `M_s`.
pub fn escape_door(h1: &Hypergraph, m_r: &NodeSet, c_r: &NodeSet, m_s: &NodeSet) -> Result<NodeSet> {
    if c_r.is_empty() || c_r.intersects(m_r) || h1.reach(c_r, m_r) != *c_r {
        return Err(Error::Precondition(format!(
            "{} is not an [{}]-component",
            h1.fmt_set(c_r),
            h1.fmt_set(m_r)
        )));
    }
    Ok(m_r.intersection(&h1.frontier(c_r)).difference(m_s))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonotonizeStats {
    pub rewrites: usize,
    pub input_nodes: usize,
    pub output_nodes: usize,
    pub max_in_degree: usize,
    /// `input_nodes × max_in_degree`, the ceiling on `rewrites`.
    pub bound: usize,
}

/// One application of the escape-door rewrite.
#[derive(Clone, Debug)]
pub struct Rewrite {
    /// The node `v_j` whose move was non-monotone.
    pub node: usize,
    /// The parent `v_p` whose move got replaced.
    pub parent: usize,
    /// The child `v_s` witnessing non-monotonicity.
    pub offending_child: usize,
    pub escape_door: NodeSet,
    /// The parent's new cop set `M_j \ ED`.
    pub new_cops: NodeSet,
    /// The inserted node `v_j'`.
    pub new_node: usize,
    /// Nodes garbage-collected after re-wiring.
    pub removed: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Monotonized {
    pub graph: ComponentGraph,
    pub stats: MonotonizeStats,
    pub log: Vec<Rewrite>,
}

fn broken(what: String) -> Error {
    Error::Validation(what)
}

/// Processes the nodes leaves-first; whenever a node's move lets the Robber
/// leave its component, the move of one parent is replaced by the same squad
/// minus the escape door, the enlarged component gets a fresh node with the
/// old node's children, and nodes left without parents are dropped. Every
/// step is checked against the properties the construction guarantees.
pub fn monotonize(g: &ComponentGraph, h1: &Hypergraph, h2: &Hypergraph) -> Result<Monotonized> {
    let h2 = h2.aligned_to(h1)?;
    g.validate(h1, &h2).map_err(Error::InvalidComponentGraph)?;
    let mut g = g.clone();
    let mut stats = MonotonizeStats {
        input_nodes: g.len(),
        max_in_degree: g.max_in_degree(),
        ..Default::default()
    };
    stats.bound = stats.input_nodes * stats.max_in_degree;
    let mut log = Vec::new();
    let mut seq = g.sequence();
    let mut j = 0;
    while j < seq.len() {
        let v = seq[j];
        if !g.is_alive(v) || g.node(v).is_capture() || g.is_root(v) {
            j += 1;
            continue;
        }
        let Some(s) = offending_child(&g, v) else {
            check_monotone_below(&g, v)?;
            j += 1;
            continue;
        };
        if log.len() >= stats.bound {
            return Err(broken(format!(
                "more than {} rewrites (nodes × max in-degree)",
                stats.bound
            )));
        }
        let step = rewrite(&mut g, h1, v, s, &mut seq)?;
        // v_j' sits at position j now; stay on v_j
        j += 1;
        g.validate(h1, &h2)
            .map_err(|e| broken(format!("rewrite at node {v} broke the strategy: {e}")))?;
        log.push(step);
    }
    stats.rewrites = log.len();
    stats.output_nodes = g.len();
    if !g.is_monotone() {
        return Err(broken("rewriting finished with a non-monotone move".into()));
    }
    Ok(Monotonized { graph: g, stats, log })
}

fn offending_child(g: &ComponentGraph, v: usize) -> Option<usize> {
    let c = &g.node(v).comp;
    let mut kids = g.node(v).children.clone();
    kids.sort_by_key(|&k| g.node(k).comp.first());
    kids.into_iter().find(|&k| !g.node(k).comp.is_subset(c))
}

fn check_monotone_below(g: &ComponentGraph, v: usize) -> Result<()> {
    let mut stack = vec![v];
    let mut seen = vec![v];
    while let Some(x) = stack.pop() {
        let n = g.node(x);
        for &c in &n.children {
            if !g.node(c).comp.is_subset(&n.comp) {
                return Err(broken(format!(
                    "node {x} below processed node {v} is still non-monotone"
                )));
            }
            if !seen.contains(&c) {
                seen.push(c);
                stack.push(c);
            }
        }
    }
    Ok(())
}

fn rewrite(
    g: &mut ComponentGraph,
    h1: &Hypergraph,
    v: usize,
    s: usize,
    seq: &mut Vec<usize>,
) -> Result<Rewrite> {
    let c_j = g.node(v).comp.clone();
    let (_, m_s) = g.move_of(h1, v).expect("non-capture nodes have a move");
    let parents = g.parents();
    let position = |x: usize| seq.iter().position(|&y| y == x).unwrap_or(usize::MAX);
    let p = *parents[v]
        .iter()
        .min_by_key(|&&x| position(x))
        .expect("non-root live nodes have a parent");
    let c_p = g.node(p).comp.clone();
    let (h_j, m_j) = g.move_of(h1, p).expect("parents have a move");
    let ed = escape_door(h1, &m_j, &c_j, &m_s)?;
    let m_j2 = m_j.difference(&ed);
    let c_j2 = h1.reach(&c_j, &m_j2);

    let old: Vec<NodeSet> = g.node(p).children.iter().map(|&c| g.node(c).comp.clone()).collect();
    let new: Vec<NodeSet> = options_from(h1, &c_p, &m_j2)
        .into_iter()
        .map(|c| c.members)
        .collect();
    let fail = |k: u8, what: &str| broken(format!("rewrite at node {v}, property ({k}): {what}"));
    // (1) the new move leaves no escape door
    if !m_j2.intersection(&h1.frontier(&c_j2)).difference(&m_s).is_empty() {
        return Err(fail(1, "escape door not closed"));
    }
    // (2) old options are swallowed by C_j' or survive
    if old.iter().any(|c| !c.is_subset(&c_j2) && !new.contains(c)) {
        return Err(fail(2, "an old option vanished"));
    }
    // (3) new options other than C_j' are old ones
    if !new.contains(&c_j2) || new.iter().any(|c| *c != c_j2 && !old.contains(c)) {
        return Err(fail(3, "unexpected new option"));
    }
    // (4) the attack M_s offers the same options from C_j and from C_j'
    let before = robber_options(h1, &c_j, &m_j.intersection(&m_s), &m_s);
    let after = robber_options(h1, &c_j2, &m_j2.intersection(&m_s), &m_s);
    if before != after {
        return Err(fail(4, "options of the next move changed"));
    }

    // (i) new node before v_j with v_j's children
    let kids = g.node(v).children.clone();
    let nv = g.push(CgNode {
        squad: Some(h_j),
        comp: c_j2,
        children: kids,
    });
    let at = seq.iter().position(|&y| y == v).expect("v is sequenced");
    seq.insert(at, nv);
    // (ii) drop arcs to non-options, (iii) point the parent at v_j'
    let keep: Vec<usize> = g
        .node(p)
        .children
        .iter()
        .copied()
        .filter(|&c| new.contains(&g.node(c).comp))
        .chain(std::iter::once(nv))
        .collect();
    g.node_mut(p).children = keep;
    // (iv) garbage-collect
    let removed = collect_orphans(g);
    Ok(Rewrite {
        node: v,
        parent: p,
        offending_child: s,
        escape_door: ed,
        new_cops: m_j2,
        new_node: nv,
        removed,
    })
}

fn collect_orphans(g: &mut ComponentGraph) -> Vec<usize> {
    let mut removed = Vec::new();
    loop {
        let parents = g.parents();
        let orphans: Vec<usize> = g
            .live()
            .filter(|&x| !g.is_root(x) && parents[x].is_empty())
            .collect();
        if orphans.is_empty() {
            return removed;
        }
        for x in orphans {
            g.kill(x);
            removed.push(x);
        }
    }
}

/// Every intermediate object of the strategy-to-projection pipeline.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub strategy: StrategyGraph,
    pub nice: StrategyGraph,
    pub components: ComponentGraph,
    pub monotone: Monotonized,
    pub projection: TreeProjection,
}

/// Runs extraction, the nice transformation, the component-graph quotient,
/// monotonization and projection extraction on a solved game. `None` when
/// the game is lost.
pub fn project(game: &GameGraph) -> Result<Option<Pipeline>> {
    let Some(strategy) = extract_strategy(game) else {
        return Ok(None);
    };
    let (h1, h2) = (game.h1(), game.h2());
    let nice = make_nice(h1, &strategy);
    let components = component_graph(h1, &nice)?;
    let monotone = monotonize(&components, h1, h2)?;
    let projection = extract_tree_projection(&monotone.graph, h1, h2)?;
    Ok(Some(Pipeline {
        strategy,
        nice,
        components,
        monotone,
        projection,
    }))
}

#[cfg(test)]
mod tests;
