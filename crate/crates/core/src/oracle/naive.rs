//! Connectivity straight from the definitions, using a union-find over whole
//! hyperedges. Shares nothing with the incidence-list search in
//! [`Hypergraph`], so validators built on it can catch bugs there.

use crate::hypergraph::{Hypergraph, NodeId, NodeSet};

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Union-find where `X ~ Y` iff they are joined by a `[v]`-path.
fn avoiding(h: &Hypergraph, v: &NodeSet) -> Dsu {
    let mut d = Dsu::new(h.node_count());
    for e in h.edges() {
        let free: Vec<NodeId> = e.nodes.iter().filter(|x| !v.contains(*x)).collect();
        for w in free.windows(2) {
            d.union(w[0].index(), w[1].index());
        }
    }
    d
}

/// Whether every two nodes of `w` are linked by a `[v]`-path. Nodes of `w`
/// inside `v` make the answer false, since `[v]`-paths cannot touch them.
pub fn connected(h: &Hypergraph, w: &NodeSet, v: &NodeSet) -> bool {
    if w.intersects(v) {
        return false;
    }
    let mut d = avoiding(h, v);
    let mut roots = w.iter().map(|x| d.find(x.index()));
    match roots.next() {
        None => true,
        Some(r) => roots.all(|s| s == r),
    }
}

/// All `[v]`-components, ordered by smallest member.
pub fn components(h: &Hypergraph, v: &NodeSet) -> Vec<NodeSet> {
    let mut d = avoiding(h, v);
    let mut groups: Vec<(usize, NodeSet)> = Vec::new();
    for x in 0..h.node_count() {
        let id = NodeId::from(x);
        if v.contains(id) {
            continue;
        }
        let r = d.find(x);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, s)) => {
                s.insert(id);
            }
            None => groups.push((r, NodeSet::singleton(id))),
        }
    }
    groups.into_iter().map(|(_, s)| s).collect()
}

/// Union of the hyperedges meeting `c`, by scanning every edge.
pub fn frontier(h: &Hypergraph, c: &NodeSet) -> NodeSet {
    let mut out = NodeSet::new();
    for e in h.edges() {
        if e.nodes.intersects(c) {
            out.union_with(&e.nodes);
        }
    }
    out
}

/// Robber options straight from the game rules: the `[m_new]`-components
/// `C` such that `comp ∪ C` is `[m_prev ∩ m_new]`-connected.
pub fn options(h: &Hypergraph, comp: &NodeSet, m_prev: &NodeSet, m_new: &NodeSet) -> Vec<NodeSet> {
    let blockers = m_prev.intersection(m_new);
    components(h, m_new)
        .into_iter()
        .filter(|c| connected(h, &comp.union(c), &blockers))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::hq0;
    use proptest::prelude::*;

    #[test]
    fn hq0_components() {
        let h = hq0();
        let m = h.set_of(&["E", "F", "G"]).unwrap();
        let cs = components(&h, &m);
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0], h.set_of(&["A", "B", "C", "D"]).unwrap());
        assert!(connected(&h, &h.set_of(&["A", "D"]).unwrap(), &m));
        assert!(!connected(&h, &h.set_of(&["A", "K"]).unwrap(), &m));
    }

    proptest! {
        #[test]
        fn agrees_with_incidence_search(
            edges in proptest::collection::vec(proptest::collection::btree_set(0u8..8, 1..4), 1..7),
            mask in 0u32..256,
        ) {
            let h = Hypergraph::from_named_edges(edges.into_iter().enumerate().map(|(i, e)| {
                (format!("e{i}"), e.into_iter().map(|x| format!("v{x}")).collect::<Vec<_>>())
            })).unwrap();
            let m: NodeSet = (0..h.node_count()).filter(|i| mask >> i & 1 == 1).map(NodeId::from).collect();
            let fast: Vec<NodeSet> = h.components(&m).into_iter().map(|c| c.members).collect();
            prop_assert_eq!(fast, components(&h, &m));
            prop_assert_eq!(h.frontier(&m), frontier(&h, &m));
        }
    }
}
