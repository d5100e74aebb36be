//! Hypergraphs over interned node names, and the connectivity toolkit the
//! game is played with: `[M]`-components, frontiers, borders, the Gaifman
//! graph, GYO reduction, join trees and the edge-covering relation `≤`.

mod acyclic;
mod nodeset;
mod parse;

use std::collections::HashMap;
use std::fmt::Write as _;

pub use acyclic::{gyo_reduce, join_tree, GyoReduct, JoinTree};
pub use nodeset::{NodeId, NodeSet};
pub use parse::parse_hypergraph;

use crate::error::{Error, Result};

/// A named hyperedge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub nodes: NodeSet,
}

/// A maximal `[M]`-connected set of nodes, keyed by its smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub members: NodeSet,
    pub representative: NodeId,
}

impl Component {
    pub fn new(members: NodeSet) -> Self {
        let representative = members.first().expect("components are non-empty");
        Component {
            members,
            representative,
        }
    }
}

/// Node universe plus an ordered list of named hyperedges.
///
/// Immutable once built. Every node occurs in at least one hyperedge and no
/// hyperedge is empty.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Builds a hypergraph from named edges over node names, interning nodes
    /// in first-appearance order.
    pub fn from_named_edges<E, S, N>(edges: E) -> Result<Hypergraph>
    where
        E: IntoIterator<Item = (S, Vec<N>)>,
        S: Into<String>,
        N: AsRef<str>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, NodeId> = HashMap::new();
        let mut out = Vec::new();
        for (name, members) in edges {
            let name = name.into();
            if members.is_empty() {
                return Err(Error::EmptyEdge { name, line: None });
            }
            let mut set = NodeSet::new();
            for m in members {
                let m = m.as_ref();
                let id = *index.entry(m.to_string()).or_insert_with(|| {
                    names.push(m.to_string());
                    NodeId::from(names.len() - 1)
                });
                set.insert(id);
            }
            out.push(Edge { name, nodes: set });
        }
        if out.is_empty() {
            return Err(Error::EmptyDocument);
        }
        Ok(Self::from_parts(names, out))
    }

    /// Builds a hypergraph over an explicit node universe. Edges must be
    /// non-empty and must jointly cover the universe.
    pub fn with_universe(names: Vec<String>, edges: Vec<Edge>) -> Result<Hypergraph> {
        if let Some(e) = edges.iter().find(|e| e.nodes.is_empty()) {
            return Err(Error::EmptyEdge {
                name: e.name.clone(),
                line: None,
            });
        }
        let mut covered = NodeSet::new();
        for e in &edges {
            covered.union_with(&e.nodes);
        }
        if covered != NodeSet::full(names.len()) {
            return Err(Error::UniverseMismatch(
                "edges do not cover exactly the node universe".into(),
            ));
        }
        Ok(Self::from_parts(names, edges))
    }

    pub(crate) fn from_parts(names: Vec<String>, edges: Vec<Edge>) -> Hypergraph {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), NodeId::from(i)))
            .collect();
        let mut incidence = vec![Vec::new(); names.len()];
        for (i, e) in edges.iter().enumerate() {
            for n in &e.nodes {
                incidence[n.index()].push(i);
            }
        }
        Hypergraph {
            names,
            index,
            edges,
            incidence,
        }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, n: NodeId) -> &str {
        &self.names[n.index()]
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.names.len())
    }

    /// Edges incident to `n`, by index.
    pub fn incident(&self, n: NodeId) -> &[usize] {
        &self.incidence[n.index()]
    }

    pub fn max_arity(&self) -> usize {
        self.edges.iter().map(|e| e.nodes.len()).max().unwrap_or(0)
    }

    /// Node set from names; unknown names are an error.
    pub fn set_of(&self, names: &[&str]) -> Result<NodeSet> {
        names
            .iter()
            .map(|n| self.node(n).ok_or_else(|| Error::UnknownNode(n.to_string())))
            .collect()
    }

    /// Node names of a set in ascending index order.
    pub fn names_of(&self, set: &NodeSet) -> Vec<&str> {
        set.iter().map(|n| self.name(n)).collect()
    }

    /// `{A,B,C}` rendering used in traces and diagnostics.
    pub fn fmt_set(&self, set: &NodeSet) -> String {
        format!("{{{}}}", self.names_of(set).join(","))
    }

    pub fn same_universe(&self, other: &Hypergraph) -> bool {
        self.names == other.names
    }

    /// Re-expresses `set`, given over `self`'s universe, in `target`'s
    /// universe. `None` if some node has no counterpart.
    pub fn translate(&self, set: &NodeSet, target: &Hypergraph) -> Option<NodeSet> {
        if self.same_universe(target) {
            return Some(set.clone());
        }
        set.iter().map(|n| target.node(self.name(n))).collect()
    }

    /// Copy of `self` re-indexed onto `target`'s node ordering. The two node
    /// universes must coincide as sets of names.
    pub fn aligned_to(&self, target: &Hypergraph) -> Result<Hypergraph> {
        if self.same_universe(target) {
            return Ok(self.clone());
        }
        if self.node_count() != target.node_count() {
            return Err(Error::UniverseMismatch(format!(
                "{} nodes vs {} nodes",
                self.node_count(),
                target.node_count()
            )));
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let nodes = self.translate(&e.nodes, target).ok_or_else(|| {
                let missing = e
                    .nodes
                    .iter()
                    .map(|n| self.name(n))
                    .find(|n| target.node(n).is_none())
                    .unwrap_or_default();
                Error::UniverseMismatch(format!("node `{missing}` missing from the other hypergraph"))
            })?;
            edges.push(Edge {
                name: e.name.clone(),
                nodes,
            });
        }
        Ok(Self::from_parts(target.names.clone(), edges))
    }

    /// Nodes reachable from `seed` along paths that avoid `blocked`. Two nodes
    /// are adjacent when some hyperedge contains both and neither is blocked.
    pub fn reach(&self, seed: &NodeSet, blocked: &NodeSet) -> NodeSet {
        let mut reached = seed.difference(blocked);
        let mut stack: Vec<NodeId> = reached.iter().collect();
        let mut used = vec![false; self.edges.len()];
        while let Some(n) = stack.pop() {
            for &ei in &self.incidence[n.index()] {
                if used[ei] {
                    continue;
                }
                used[ei] = true;
                for m in &self.edges[ei].nodes {
                    if !blocked.contains(m) && reached.insert(m) {
                        stack.push(m);
                    }
                }
            }
        }
        reached
    }

    /// `[M]`-components of the nodes in `region \ M`, sorted by representative.
    pub fn components_within(&self, region: &NodeSet, m: &NodeSet) -> Vec<Component> {
        let mut rest = region.difference(m);
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let comp = self.reach(&NodeSet::singleton(start), m);
            rest.difference_with(&comp);
            out.push(Component::new(comp));
        }
        out
    }

    /// Partition of `nodes(H) \ M` into `[M]`-components.
    pub fn components(&self, m: &NodeSet) -> Vec<Component> {
        self.components_within(&self.nodes(), m)
    }

    /// Connected components of the hypergraph (`M = ∅`).
    pub fn connected_parts(&self) -> Vec<Component> {
        self.components(&NodeSet::new())
    }

    /// Union of all hyperedges meeting `c`.
    pub fn frontier(&self, c: &NodeSet) -> NodeSet {
        let mut out = NodeSet::new();
        let mut seen = vec![false; self.edges.len()];
        for n in c {
            for &ei in &self.incidence[n.index()] {
                if !seen[ei] {
                    seen[ei] = true;
                    out.union_with(&self.edges[ei].nodes);
                }
            }
        }
        out
    }

    /// Frontier minus `c` itself.
    pub fn border(&self, c: &NodeSet) -> NodeSet {
        self.frontier(c).difference(c)
    }

    /// The primal graph: one two-node edge per co-occurring pair, plus a
    /// one-node edge for every node that has no neighbour.
    pub fn gaifman(&self) -> Hypergraph {
        let n = self.node_count();
        let mut adj = vec![NodeSet::new(); n];
        for e in &self.edges {
            for x in &e.nodes {
                let mut others = e.nodes.clone();
                others.remove(x);
                adj[x.index()].union_with(&others);
            }
        }
        let mut edges = Vec::new();
        for (x, nbrs) in adj.iter().enumerate() {
            let xid = NodeId::from(x);
            if nbrs.is_empty() {
                edges.push(Edge {
                    name: format!("g_{}", self.names[x]),
                    nodes: NodeSet::singleton(xid),
                });
                continue;
            }
            for y in nbrs.iter().filter(|y| y.index() > x) {
                let mut nodes = NodeSet::singleton(xid);
                nodes.insert(y);
                edges.push(Edge {
                    name: format!("g_{}_{}", self.names[x], self.names[y.index()]),
                    nodes,
                });
            }
        }
        Self::from_parts(self.names.clone(), edges)
    }

    /// Same universe, edges deduplicated by member set keeping the first.
    pub fn dedup(&self) -> Hypergraph {
        let mut seen = std::collections::HashSet::new();
        let edges = self
            .edges
            .iter()
            .filter(|e| seen.insert(e.nodes.clone()))
            .cloned()
            .collect();
        Self::from_parts(self.names.clone(), edges)
    }

    /// Serializes to the line-oriented text format accepted by
    /// [`parse_hypergraph`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            let _ = writeln!(s, "{}({})", e.name, self.names_of(&e.nodes).join(","));
        }
        s
    }
}

/// Witness of `h1 ≤ h2`: for every edge of `h1`, the first edge of `h2`
/// containing it. Node identity is by name.
pub fn leq(h1: &Hypergraph, h2: &Hypergraph) -> Option<Vec<usize>> {
    h1.edges
        .iter()
        .map(|e| {
            let t = h1.translate(&e.nodes, h2)?;
            h2.edges.iter().position(|f| t.is_subset(&f.nodes))
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn names(h: &Hypergraph, s: &NodeSet) -> Vec<String> {
        let mut v: Vec<String> = h.names_of(s).into_iter().map(String::from).collect();
        v.sort();
        v
    }

    #[test]
    fn components_of_hq0() {
        let h = hq0();
        let all = h.components(&NodeSet::new());
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].members.len(), 11);

        let m = h.set_of(&["E", "F", "G"]).unwrap();
        let comps = h.components(&m);
        assert_eq!(comps.len(), 2);
        assert_eq!(names(&h, &comps[0].members), ["A", "B", "C", "D"]);
        assert_eq!(names(&h, &comps[1].members), ["H", "I", "J", "K"]);
        assert!(comps[0].representative < comps[1].representative);

        assert!(h.components(&h.nodes()).is_empty());
    }

    #[test]
    fn frontier_and_border() {
        let h = hq0();
        let c = h.set_of(&["H", "I", "J", "K"]).unwrap();
        assert_eq!(names(&h, &h.frontier(&c)), ["G", "H", "I", "J", "K"]);
        assert_eq!(names(&h, &h.border(&c)), ["G"]);
        assert!(h.frontier(&NodeSet::new()).is_empty());
    }

    #[test]
    fn gaifman_graphs() {
        let single = parse_hypergraph("e(A,D,E,F,J,K)").unwrap();
        let g = single.gaifman();
        assert_eq!(g.edge_count(), 15);
        assert!(g.edges().iter().all(|e| e.nodes.len() == 2));

        let tri = triangle();
        let gg = tri.gaifman();
        let mut a: Vec<_> = tri.edges().iter().map(|e| e.nodes.clone()).collect();
        let mut b: Vec<_> = gg.edges().iter().map(|e| e.nodes.clone()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);

        let lone = parse_hypergraph("s(X)\nt(Y,Z)").unwrap().gaifman();
        assert_eq!(lone.edge_count(), 2);
        assert_eq!(lone.edge(0).nodes.len(), 1);
    }

    #[test]
    fn leq_examples() {
        let h = hq0();
        let ha = ha();
        let id = leq(&h, &h).unwrap();
        assert_eq!(id, (0..8).collect::<Vec<_>>());
        let w = leq(&h, &ha).unwrap();
        // r3 = {C,D} lands in {A,B,C,D}
        assert_eq!(ha.edge(w[2]).name, "a1");
        assert!(leq(&ha, &h).is_none());
    }

    #[test]
    fn aligned_universes() {
        let a = parse_hypergraph("e(X,Y)\nf(Y,Z)").unwrap();
        let b = parse_hypergraph("g(Z,Y,X)").unwrap();
        let b2 = b.aligned_to(&a).unwrap();
        assert!(b2.same_universe(&a));
        assert_eq!(b2.edge(0).nodes, a.nodes());
        let c = parse_hypergraph("g(Z,Y,W)").unwrap();
        assert!(c.aligned_to(&a).is_err());
    }

    fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
        proptest::collection::vec(proptest::collection::btree_set(0u8..9, 1..4), 1..7).prop_map(|edges| {
            Hypergraph::from_named_edges(edges.into_iter().enumerate().map(|(i, e)| {
                (format!("e{i}"), e.into_iter().map(|x| format!("v{x}")).collect::<Vec<_>>())
            }))
            .unwrap()
        })
    }

    /// Brute-force `[M]`-connectivity via Floyd–Warshall style closure.
    fn brute_connected(h: &Hypergraph, m: &NodeSet) -> Vec<Vec<bool>> {
        let n = h.node_count();
        let mut r = vec![vec![false; n]; n];
        for e in h.edges() {
            let free: Vec<_> = e.nodes.difference(m).iter().collect();
            for &x in &free {
                for &y in &free {
                    r[x.index()][y.index()] = true;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    proptest! {
        #[test]
        fn components_partition_and_are_maximal(h in arb_hypergraph(), mask in any::<u16>()) {
            let m: NodeSet = (0..h.node_count()).filter(|i| mask & (1 << i) != 0).map(NodeId::from).collect();
            let comps = h.components(&m);
            let conn = brute_connected(&h, &m);
            let mut union = NodeSet::new();
            for c in &comps {
                prop_assert!(!c.members.intersects(&union));
                union.union_with(&c.members);
                prop_assert_eq!(Some(c.representative), c.members.first());
                let v: Vec<_> = c.members.iter().collect();
                for &x in &v { for &y in &v {
                    prop_assert!(x == y || conn[x.index()][y.index()]);
                }}
                for z in h.nodes().difference(&m).difference(&c.members).iter() {
                    prop_assert!(!conn[v[0].index()][z.index()]);
                }
                prop_assert!(h.border(&c.members).is_subset(&m));
            }
            prop_assert_eq!(union, h.nodes().difference(&m));
        }

        #[test]
        fn frontier_is_monotone(h in arb_hypergraph(), a in any::<u16>(), b in any::<u16>()) {
            let n = h.node_count();
            let c1: NodeSet = (0..n).filter(|i| a & b & (1 << i) != 0).map(NodeId::from).collect();
            let c2: NodeSet = (0..n).filter(|i| a & (1 << i) != 0).map(NodeId::from).collect();
            prop_assert!(h.frontier(&c1).is_subset(&h.frontier(&c2)));
        }

        #[test]
        fn leq_reflexive_transitive(h in arb_hypergraph()) {
            let d = h.dedup();
            prop_assert!(leq(&d, &d).is_some());
            let g = d.gaifman();
            // gaifman(H) ≤ H whenever H has no singleton-only nodes; H ≤ H^full
            let top = Hypergraph::from_parts(d.names().to_vec(), vec![Edge { name: "all".into(), nodes: d.nodes() }]);
            prop_assert!(leq(&d, &top).is_some());
            if leq(&g, &d).is_some() {
                prop_assert!(leq(&g, &top).is_some());
            }
        }
    }
}
