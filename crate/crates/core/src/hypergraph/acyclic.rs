use super::{Edge, Hypergraph, NodeSet};

/// Fixpoint of the two GYO rules, with the absorption links recorded on the
/// way.
#[derive(Clone, Debug)]
pub struct GyoReduct {
    /// Surviving edges as `(original index, reduced node set)`.
    pub remaining: Vec<(usize, NodeSet)>,
    pub acyclic: bool,
    /// `absorbed_into[e] = Some(f)` when edge `e` was absorbed by edge `f`.
    absorbed_into: Vec<Option<usize>>,
}

impl GyoReduct {
    /// The reduct as a hypergraph (empty reduced edges dropped). `None` when
    /// nothing non-empty is left.
    pub fn to_hypergraph(&self, h: &Hypergraph) -> Option<Hypergraph> {
        let edges: Vec<Edge> = self
            .remaining
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(i, s)| Edge {
                name: h.edge(*i).name.clone(),
                nodes: s.clone(),
            })
            .collect();
        if edges.is_empty() {
            return None;
        }
        let mut used = NodeSet::new();
        for e in &edges {
            used.union_with(&e.nodes);
        }
        // re-intern only the surviving nodes
        let keep: Vec<_> = used.iter().collect();
        let names = keep.iter().map(|&n| h.name(n).to_string()).collect();
        let remap = |s: &NodeSet| -> NodeSet {
            s.iter()
                .map(|n| keep.binary_search(&n).unwrap().into())
                .collect()
        };
        let edges = edges
            .into_iter()
            .map(|e| Edge {
                name: e.name,
                nodes: remap(&e.nodes),
            })
            .collect();
        Some(Hypergraph::from_parts(names, edges))
    }
}

/// GYO reduction. Repeatedly drops every node occurring in exactly one
/// remaining edge, then the lowest-indexed edge contained in another
/// remaining edge (absorbed into the lowest-indexed container).
pub fn gyo_reduce(h: &Hypergraph) -> GyoReduct {
    let n = h.node_count();
    let mut sets: Vec<NodeSet> = h.edges().iter().map(|e| e.nodes.clone()).collect();
    let mut alive: Vec<bool> = vec![true; sets.len()];
    let mut absorbed_into = vec![None; sets.len()];
    loop {
        // node rule
        let mut count = vec![0usize; n];
        for (i, s) in sets.iter().enumerate() {
            if alive[i] {
                for x in s {
                    count[x.index()] += 1;
                }
            }
        }
        let lonely: NodeSet = (0..n).filter(|&x| count[x] == 1).map(Into::into).collect();
        if !lonely.is_empty() {
            for (i, s) in sets.iter_mut().enumerate() {
                if alive[i] {
                    s.difference_with(&lonely);
                }
            }
        }
        // edge rule
        let live: Vec<usize> = (0..sets.len()).filter(|&i| alive[i]).collect();
        let absorbed = live.iter().find_map(|&e| {
            live.iter()
                .find(|&&f| f != e && sets[e].is_subset(&sets[f]))
                .map(|&f| (e, f))
        });
        match absorbed {
            Some((e, f)) => {
                alive[e] = false;
                absorbed_into[e] = Some(f);
            }
            None if lonely.is_empty() => break,
            None => {}
        }
    }
    let remaining: Vec<(usize, NodeSet)> = (0..sets.len())
        .filter(|&i| alive[i])
        .map(|i| (i, sets[i].clone()))
        .collect();
    GyoReduct {
        acyclic: remaining.len() <= 1,
        remaining,
        absorbed_into,
    }
}

/// A join tree over the edges of a hypergraph, indexed by edge position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinTree {
    pub root: usize,
    /// `parent[e]` is `None` exactly for the root.
    pub parent: Vec<Option<usize>>,
}

impl JoinTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Unordered tree edges as `(parent, child)` pairs, by child index.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (p, c)))
            .collect()
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.parent.len()];
        for (p, c) in self.tree_edges() {
            ch[p].push(c);
        }
        ch
    }

    /// Vertices in an order where every parent precedes its children.
    pub fn preorder(&self) -> Vec<usize> {
        let ch = self.children();
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(ch[v].iter().rev());
        }
        out
    }

    /// Checks that the parent links form a single tree over all edges of `h`
    /// and that every node's occurrences induce a connected subtree.
    pub fn check(&self, h: &Hypergraph) -> Result<(), String> {
        let n = self.parent.len();
        if n != h.edge_count() {
            return Err(format!("join tree has {n} vertices, hypergraph has {} edges", h.edge_count()));
        }
        if self.root >= n || self.parent[self.root].is_some() {
            return Err("root is missing or has a parent".into());
        }
        // every vertex must reach the root without revisiting
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(p) = self.parent[cur] {
                if p >= n {
                    return Err(format!("vertex {cur} has out-of-range parent {p}"));
                }
                cur = p;
                steps += 1;
                if steps > n {
                    return Err("parent links contain a cycle".into());
                }
            }
            if cur != self.root {
                return Err(format!("vertex {v} is not connected to the root"));
            }
        }
        // connectedness: in a rooted tree, the vertices containing X are
        // connected iff exactly one of them has a parent not containing X
        for x in h.nodes().iter() {
            let tops = (0..n)
                .filter(|&v| h.edge(v).nodes.contains(x))
                .filter(|&v| self.parent[v].is_none_or(|p| !h.edge(p).nodes.contains(x)))
                .count();
            if tops > 1 {
                return Err(format!(
                    "occurrences of node `{}` do not form a connected subtree",
                    h.name(x)
                ));
            }
        }
        Ok(())
    }
}

/// A join tree built from the GYO absorption links, or `None` if `h` is
/// cyclic. The last surviving edge is the root.
pub fn join_tree(h: &Hypergraph) -> Option<JoinTree> {
    let red = gyo_reduce(h);
    if !red.acyclic {
        return None;
    }
    let root = red.remaining.first().map(|(i, _)| *i)?;
    Some(JoinTree {
        root,
        parent: red.absorbed_into,
    })
}
