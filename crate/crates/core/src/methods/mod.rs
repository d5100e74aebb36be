//! Width measures as tree projections against derived view hypergraphs:
//! `H^k` (unions of up to `k` edges), `H^tk` (node sets of size up to
//! `k+1`) and the simplicial closure (all non-empty subedges).

mod report;

use std::collections::HashMap;
use std::time::Instant;

pub use report::{Bag, Certificate, Method, WidthReport, WidthSummary};

use crate::error::{Error, Result};
use crate::game::{greedy_wins, marshal_monotone_game, GameGraph};
use crate::hypergraph::{Edge, Hypergraph, NodeId, NodeSet};
use crate::monotonize::{project, TreeProjection};

/// Default ceiling on the number of edges a derived construction may
/// enumerate.
pub const DEFAULT_CEILING: u128 = 1_000_000;

/// A derived hypergraph that remembers, for each edge, which edges of the
/// base hypergraph it came from.
#[derive(Clone, Debug)]
pub struct Derived {
    pub hypergraph: Hypergraph,
    /// Base edge indices per derived edge, ascending.
    pub provenance: Vec<Vec<usize>>,
}

fn binomial_sum(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for i in 1..=k.min(n) {
        c = c * (n - i + 1) as u128 / i as u128;
        total += c;
    }
    total
}

/// Calls `f` on every strictly increasing index tuple over `0..n` of length
/// `1..=k`, shorter tuples first, each length in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    for len in 1..=k.min(n) {
        let mut idx: Vec<usize> = (0..len).collect();
        loop {
            f(&idx);
            // advance to the next combination
            let mut i = len;
            while i > 0 && idx[i - 1] == n - len + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..len {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

/// `H^k` with the default ceiling.
pub fn power_hypergraph(h: &Hypergraph, k: usize) -> Result<Derived> {
    power_hypergraph_with(h, k, DEFAULT_CEILING)
}

/// `H^k`: deduplicated unions of every non-empty set of at most `k` edges.
/// Enumeration runs over the distinct edges of `h`; each union keeps the
/// first (smallest) subset producing it.
pub fn power_hypergraph_with(h: &Hypergraph, k: usize, ceiling: u128) -> Result<Derived> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let mut base: Vec<usize> = Vec::new();
    let mut seen_base: HashMap<&NodeSet, ()> = HashMap::new();
    for (i, e) in h.edges().iter().enumerate() {
        if seen_base.insert(&e.nodes, ()).is_none() {
            base.push(i);
        }
    }
    let count = binomial_sum(base.len(), k);
    if count > ceiling {
        return Err(Error::Ceiling {
            what: "H^k subset enumeration",
            actual: count,
            limit: ceiling,
        });
    }
    let mut edges = Vec::new();
    let mut provenance = Vec::new();
    let mut seen: HashMap<NodeSet, ()> = HashMap::new();
    for_each_subset(base.len(), k, |tuple| {
        let ids: Vec<usize> = tuple.iter().map(|&t| base[t]).collect();
        let mut u = NodeSet::new();
        for &i in &ids {
            u.union_with(&h.edge(i).nodes);
        }
        if seen.insert(u.clone(), ()).is_none() {
            let name = ids
                .iter()
                .map(|&i| h.edge(i).name.as_str())
                .collect::<Vec<_>>()
                .join("_");
            edges.push(Edge { name, nodes: u });
            provenance.push(ids);
        }
    });
    Ok(Derived {
        hypergraph: Hypergraph::from_parts(h.names().to_vec(), edges),
        provenance,
    })
}

/// `H^tk` with the default ceiling.
pub fn tk_hypergraph(h: &Hypergraph, k: usize) -> Result<Hypergraph> {
    tk_hypergraph_with(h, k, DEFAULT_CEILING)
}

/// `H^tk`: every non-empty node set of size at most `k + 1`.
pub fn tk_hypergraph_with(h: &Hypergraph, k: usize, ceiling: u128) -> Result<Hypergraph> {
    let n = h.node_count();
    let count = binomial_sum(n, k + 1);
    if count > ceiling {
        return Err(Error::Ceiling {
            what: "H^tk cluster enumeration",
            actual: count,
            limit: ceiling,
        });
    }
    let mut edges = Vec::new();
    for_each_subset(n, k + 1, |tuple| {
        let nodes: NodeSet = tuple.iter().map(|&x| NodeId::from(x)).collect();
        let name = format!("b_{}", h.names_of(&nodes).join("_"));
        edges.push(Edge { name, nodes });
    });
    Ok(Hypergraph::from_parts(h.names().to_vec(), edges))
}

/// Simplicial closure with the default budget.
pub fn simplicial(h: &Hypergraph) -> Result<Derived> {
    simplicial_with(h, DEFAULT_CEILING)
}

/// All non-empty subsets of every edge, deduplicated. Provenance records the
/// first edge a subset was taken from. `budget` caps `Σ 2^|h|`.
pub fn simplicial_with(h: &Hypergraph, budget: u128) -> Result<Derived> {
    let total: u128 = h
        .edges()
        .iter()
        .map(|e| 1u128.checked_shl(e.nodes.len() as u32).unwrap_or(u128::MAX))
        .fold(0u128, |a, b| a.saturating_add(b));
    if total > budget {
        return Err(Error::Ceiling {
            what: "simplicial closure",
            actual: total,
            limit: budget,
        });
    }
    let mut edges = Vec::new();
    let mut provenance = Vec::new();
    let mut seen: HashMap<NodeSet, ()> = HashMap::new();
    for (i, e) in h.edges().iter().enumerate() {
        let members = e.nodes.to_vec();
        for mask in 1u64..(1u64 << members.len()) {
            let sub: NodeSet = (0..members.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| members[b])
                .collect();
            if seen.insert(sub.clone(), ()).is_none() {
                edges.push(Edge {
                    name: format!("s{}", edges.len() + 1),
                    nodes: sub,
                });
                provenance.push(vec![i]);
            }
        }
    }
    Ok(Derived {
        hypergraph: Hypergraph::from_parts(h.names().to_vec(), edges),
        provenance,
    })
}

/// Extends `views` with the subedges `f` proposes for each view, the shape of
/// subedge-based decomposition methods. `f` returning nothing leaves the
/// views as they are; returning every non-empty subset gives the simplicial
/// closure.
pub fn with_subedges<F>(views: &Derived, mut f: F) -> Derived
where
    F: FnMut(&NodeSet) -> Vec<NodeSet>,
{
    let mut edges: Vec<Edge> = views.hypergraph.edges().to_vec();
    let mut provenance = views.provenance.clone();
    let mut seen: HashMap<NodeSet, ()> = edges.iter().map(|e| (e.nodes.clone(), ())).collect();
    for (i, e) in views.hypergraph.edges().iter().enumerate() {
        for sub in f(&e.nodes) {
            if sub.is_empty() || !sub.is_subset(&e.nodes) {
                continue;
            }
            if seen.insert(sub.clone(), ()).is_none() {
                edges.push(Edge {
                    name: format!("{}_sub{}", e.name, edges.len()),
                    nodes: sub,
                });
                provenance.push(views.provenance[i].clone());
            }
        }
    }
    Derived {
        hypergraph: Hypergraph::from_parts(views.hypergraph.names().to_vec(), edges),
        provenance,
    }
}

/// Outcome of one width-`k` decision.
#[derive(Clone, Debug)]
pub struct Decision {
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

fn certify(
    game: &GameGraph,
    h: &Hypergraph,
    lambda_of: impl Fn(usize) -> Vec<usize>,
) -> Result<Option<Certificate>> {
    let Some(p) = project(game)? else {
        return Ok(None);
    };
    let tp: TreeProjection = p.projection;
    let lambda = tp.upper.iter().map(|&u| lambda_of(u)).collect();
    let _ = h;
    Ok(Some(Certificate {
        projection: tp,
        lambda,
        rewrites: p.monotone.stats.rewrites,
    }))
}

/// Greedy game on `(H, H^k)`; the certificate is a width-`k` greedy
/// hypertree decomposition.
pub fn greedy_hw_decide(h: &Hypergraph, k: usize) -> Result<Decision> {
    decide(h, Method::GrHw, k, DEFAULT_CEILING)
}

/// Monotone Marshal game on `(H, H^k)`: `hw(H) ≤ k`.
pub fn hw_decide(h: &Hypergraph, k: usize) -> Result<Decision> {
    decide(h, Method::Hw, k, DEFAULT_CEILING)
}

/// Greedy game on `(H, simplicial(H^k))`, which decides `ghw(H) ≤ k`
/// exactly. The simplicial budget bounds `Σ 2^|h|` over the edges of `H^k`.
pub fn ghw_decide_fpt(h: &Hypergraph, k: usize) -> Result<Decision> {
    ghw_decide_fpt_with(h, k, DEFAULT_CEILING)
}

pub fn ghw_decide_fpt_with(h: &Hypergraph, k: usize, budget: u128) -> Result<Decision> {
    decide(h, Method::Ghw, k, budget)
}

/// Greedy game on `(H, H^tk)`: `tw(H) ≤ k`. `H^tk` is closed under subsets,
/// so greedy strategies are as strong as arbitrary ones here.
pub fn tw_decide(h: &Hypergraph, k: usize) -> Result<Decision> {
    decide(h, Method::Tw, k, DEFAULT_CEILING)
}

/// `ceiling` caps every derived edge enumeration.
fn decide(h: &Hypergraph, method: Method, k: usize, ceiling: u128) -> Result<Decision> {
    let (holds, certificate) = match method {
        Method::GrHw | Method::Hw => {
            let hk = power_hypergraph_with(h, k, ceiling)?;
            let (holds, game) = if method == Method::Hw {
                marshal_monotone_game(h, &hk.hypergraph)?
            } else {
                greedy_wins(h, &hk.hypergraph)?
            };
            (holds, certify(&game, h, |u| hk.provenance[u].clone())?)
        }
        Method::Ghw => {
            let hk = power_hypergraph_with(h, k, ceiling)?;
            let hs = simplicial_with(&hk.hypergraph, ceiling)?;
            let (holds, game) = greedy_wins(h, &hs.hypergraph)?;
            (holds, certify(&game, h, |u| hk.provenance[hs.provenance[u][0]].clone())?)
        }
        Method::Tw => {
            let tk = tk_hypergraph_with(h, k, ceiling)?;
            let (holds, game) = greedy_wins(h, &tk)?;
            (holds, certify(&game, h, |_| Vec::new())?)
        }
    };
    Ok(Decision { holds, certificate })
}

/// Smallest `k ≤ kmax` for which `method` succeeds.
pub fn width(h: &Hypergraph, method: Method, kmax: usize) -> Result<WidthReport> {
    width_with(h, method, kmax, DEFAULT_CEILING)
}

pub fn width_with(h: &Hypergraph, method: Method, kmax: usize, ceiling: u128) -> Result<WidthReport> {
    let start_k = if method == Method::Tw { 0 } else { 1 };
    let mut timings = Vec::new();
    for k in start_k..=kmax {
        let t = Instant::now();
        let d = decide(h, method, k, ceiling)?;
        timings.push((k, t.elapsed()));
        if d.holds {
            return Ok(WidthReport {
                method,
                kmax,
                width: Some(k),
                certificate: d.certificate,
                timings,
            });
        }
    }
    Ok(WidthReport {
        method,
        kmax,
        width: None,
        certificate: None,
        timings,
    })
}

/// Greedy hypertree width, searched up to `kmax`.
pub fn greedy_hw(h: &Hypergraph, kmax: usize) -> Result<WidthReport> {
    width(h, Method::GrHw, kmax)
}
