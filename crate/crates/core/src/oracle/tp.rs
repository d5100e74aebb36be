//! Two independent ways of deciding whether a tree projection exists, and
//! exact widths by elimination orderings.

use std::collections::{HashMap, VecDeque};

use super::naive;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeSet};

/// Size limits for the exhaustive game search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_h2_edges: usize,
    pub max_arity: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 10,
            max_h2_edges: 64,
            max_arity: 8,
        }
    }
}

fn ceiling(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::Ceiling {
            what,
            actual: actual as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

fn subsets(s: &NodeSet) -> Vec<NodeSet> {
    let members = s.to_vec();
    (0u32..1 << members.len())
        .map(|m| {
            (0..members.len())
                .filter(|b| m >> b & 1 == 1)
                .map(|b| members[b])
                .collect()
        })
        .collect()
}

/// Exhaustive search of the unrestricted Captain game with default limits.
pub fn tp_exists_bruteforce(h1: &Hypergraph, h2: &Hypergraph) -> Result<bool> {
    tp_exists_bruteforce_with(h1, h2, Limits::default())
}

/// Positions are `(M, C)`; from there the Captain may place any
/// `M' ⊆ h ∩ Fr(C)` for any squad `h`, and the Robber answers with an
/// option computed straight from the rules. The Captain's winning positions
/// are the least fixpoint of "some move whose options are all winning".
pub fn tp_exists_bruteforce_with(h1: &Hypergraph, h2: &Hypergraph, limits: Limits) -> Result<bool> {
    let h2 = h2.aligned_to(h1)?;
    ceiling("node count", h1.node_count(), limits.max_nodes)?;
    ceiling("H2 edge count", h2.edge_count(), limits.max_h2_edges)?;
    ceiling("H2 arity", h2.max_arity(), limits.max_arity)?;

    let mut index: HashMap<(NodeSet, NodeSet), usize> = HashMap::new();
    let mut states: Vec<(NodeSet, NodeSet)> = Vec::new();
    let mut moves: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |key: (NodeSet, NodeSet), states: &mut Vec<_>, queue: &mut VecDeque<usize>| {
        *index.entry(key.clone()).or_insert_with(|| {
            states.push(key);
            queue.push_back(states.len() - 1);
            states.len() - 1
        })
    };
    let roots: Vec<usize> = naive::components(h1, &NodeSet::new())
        .into_iter()
        .map(|c| intern((NodeSet::new(), c), &mut states, &mut queue))
        .collect();
    while let Some(s) = queue.pop_front() {
        let (m, c) = states[s].clone();
        let fr = naive::frontier(h1, &c);
        let mut candidates: Vec<NodeSet> = Vec::new();
        for e in h2.edges() {
            candidates.extend(subsets(&e.nodes.intersection(&fr)));
        }
        candidates.sort();
        candidates.dedup();
        let mut out = Vec::with_capacity(candidates.len());
        for m2 in candidates {
            let succ: Vec<usize> = naive::options(h1, &c, &m, &m2)
                .into_iter()
                .map(|c2| intern((m2.clone(), c2), &mut states, &mut queue))
                .collect();
            out.push(succ);
        }
        if moves.len() <= s {
            moves.resize(s + 1, Vec::new());
        }
        moves[s] = out;
    }
    let mut won = vec![false; states.len()];
    loop {
        let mut changed = false;
        for s in 0..states.len() {
            if !won[s] && moves[s].iter().any(|succ| succ.iter().all(|&t| won[t])) {
                won[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(roots.iter().all(|&r| won[r]))
}

/// Largest node count accepted by the elimination-ordering routines.
pub const MAX_DP_NODES: usize = 20;

/// Gaifman adjacency as bitmasks.
fn adjacency(h: &Hypergraph) -> Result<Vec<u32>> {
    let n = h.node_count();
    ceiling("node count", n, MAX_DP_NODES)?;
    let mut adj = vec![0u32; n];
    for e in h.edges() {
        let mask = to_mask(&e.nodes);
        for x in &e.nodes {
            adj[x.index()] |= mask & !(1 << x.index());
        }
    }
    Ok(adj)
}

fn to_mask(s: &NodeSet) -> u32 {
    s.iter().fold(0, |m, x| m | 1 << x.index())
}

/// Neighbours of `v` outside `eliminated ∪ {v}` reachable through
/// eliminated nodes: the bag `v` gets when eliminated after `eliminated`.
fn later_neighbours(adj: &[u32], eliminated: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut stack = vec![v];
    let mut out = 0u32;
    while let Some(x) = stack.pop() {
        let mut nb = adj[x] & !seen;
        while nb != 0 {
            let y = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            seen |= 1 << y;
            if eliminated >> y & 1 == 1 {
                stack.push(y);
            } else {
                out |= 1 << y;
            }
        }
    }
    out
}

/// `best[S]`: the minimum over orderings of `S` (eliminated first) of the
/// maximum bag cost.
fn elimination_dp(adj: &[u32], cost: &mut dyn FnMut(u32) -> usize) -> usize {
    let n = adj.len();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let mut b = usize::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            if best[prev as usize] >= b {
                continue;
            }
            let bag = later_neighbours(adj, prev, v) | 1 << v;
            b = b.min(best[prev as usize].max(cost(bag)));
        }
        best[s as usize] = b;
    }
    best[full as usize]
}

/// Independent decision of tree-projection existence: a projection exists
/// iff some elimination ordering of the Gaifman graph of `h1` produces only
/// bags inside edges of `h2`.
pub fn tp_exists_elimination(h1: &Hypergraph, h2: &Hypergraph) -> Result<bool> {
    let h2 = h2.aligned_to(h1)?;
    let adj = adjacency(h1)?;
    let squads: Vec<u32> = h2.edges().iter().map(|e| to_mask(&e.nodes)).collect();
    let mut cost = |bag: u32| usize::from(!squads.iter().any(|&q| bag & !q == 0));
    Ok(elimination_dp(&adj, &mut cost) == 0)
}

/// Exact treewidth of the Gaifman graph, by elimination orderings.
pub fn tw_bruteforce(h: &Hypergraph) -> Result<usize> {
    let adj = adjacency(h)?;
    let mut cost = |bag: u32| bag.count_ones() as usize - 1;
    Ok(elimination_dp(&adj, &mut cost))
}

/// Minimum number of edges of `h` whose union contains `bag`, or `cap` if
/// more than `cap - 1` are needed.
fn cover_number(edges: &[u32], bag: u32, cap: usize) -> usize {
    fn go(edges: &[u32], left: u32, budget: usize) -> bool {
        if left == 0 {
            return true;
        }
        if budget == 0 {
            return false;
        }
        // some edge must cover the lowest uncovered node
        let low = left & left.wrapping_neg();
        edges
            .iter()
            .filter(|&&e| e & low != 0)
            .any(|&e| go(edges, left & !e, budget - 1))
    }
    (0..cap).find(|&k| go(edges, bag, k)).unwrap_or(cap)
}

/// Exact generalized hypertree width when at most `kmax`: the minimum over
/// elimination orderings of the largest edge-cover number of a bag.
pub fn ghw_bruteforce(h: &Hypergraph, kmax: usize) -> Result<Option<usize>> {
    let adj = adjacency(h)?;
    let edges: Vec<u32> = h.edges().iter().map(|e| to_mask(&e.nodes)).collect();
    let mut memo: HashMap<u32, usize> = HashMap::new();
    let cap = kmax + 1;
    let mut cost = |bag: u32| *memo.entry(bag).or_insert_with(|| cover_number(&edges, bag, cap));
    let w = elimination_dp(&adj, &mut cost);
    Ok((w <= kmax).then_some(w))
}

