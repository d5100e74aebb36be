//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{greedy_wins, marshal_monotone_wins};
use crate::hypergraph::{Hypergraph, NodeId, NodeSet};
use crate::methods::power_hypergraph;
use crate::query::{Atom, ConjunctiveQuery, Database, Term};

/// How `H2` is derived from `H1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    /// `H2 = H1^k`.
    Power(usize),
    /// One `H2` edge per `H1` edge: the edge, sometimes joined with another
    /// random edge, plus at most one random node.
    Cover,
    /// This many random node sets of two to `n - 1` nodes, plus every edge
    /// of `H1` none of them covers.
    Augment(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub nodes: usize,
    pub edges: usize,
    pub min_arity: usize,
    pub max_arity: usize,
    pub seed: u64,
    pub mode: PairMode,
}

impl InstanceSpec {
    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Unsatisfiable(m.to_string()));
        if self.nodes == 0 || self.edges == 0 {
            return bad("need at least one node and one edge");
        }
        if self.min_arity == 0 || self.min_arity > self.max_arity {
            return bad("arity bounds must satisfy 1 ≤ min ≤ max");
        }
        if self.max_arity > self.nodes {
            return bad("max arity exceeds the node count");
        }
        if self.nodes > self.edges * self.max_arity {
            return bad("edges cannot cover every node");
        }
        if self.mode == PairMode::Power(0) {
            return bad("power must be at least 1");
        }
        Ok(())
    }
}

/// A random hypergraph over nodes `v0..` with edges `e0..` covering every
/// node.
pub fn random_hypergraph(
    rng: &mut impl Rng,
    nodes: usize,
    edges: usize,
    min_arity: usize,
    max_arity: usize,
) -> Hypergraph {
    let mut arity: Vec<usize> = (0..edges).map(|_| rng.gen_range(min_arity..=max_arity)).collect();
    while arity.iter().sum::<usize>() < nodes {
        let open: Vec<usize> = (0..edges).filter(|&i| arity[i] < max_arity).collect();
        arity[*open.choose(rng).expect("capacity checked")] += 1;
    }
    let mut sets = vec![NodeSet::new(); edges];
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(rng);
    // every node lands somewhere first
    let mut slot = 0;
    for v in order {
        while sets[slot % edges].len() >= arity[slot % edges] {
            slot += 1;
        }
        sets[slot % edges].insert(NodeId::from(v));
        slot += 1;
    }
    for (s, &a) in sets.iter_mut().zip(&arity) {
        while s.len() < a {
            s.insert(NodeId::from(rng.gen_range(0..nodes)));
        }
    }
    let named: Vec<(String, Vec<String>)> = sets
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("e{i}"), s.iter().map(|x| format!("v{}", x.index())).collect()))
        .collect();
    Hypergraph::from_named_edges(named).expect("non-empty edges")
}

/// A pair `(H1, H2)` with equal node sets and `H1 ≤ H2`, determined by the
/// instance parameters and their seed.
pub fn generate(spec: &InstanceSpec) -> Result<(Hypergraph, Hypergraph)> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let h1 = random_hypergraph(&mut rng, spec.nodes, spec.edges, spec.min_arity, spec.max_arity);
    let h2 = match spec.mode {
        PairMode::Power(k) => power_hypergraph(&h1, k)?.hypergraph,
        PairMode::Cover => {
            let m = h1.edge_count();
            let n = h1.node_count();
            let mut edges = Vec::new();
            for (i, e) in h1.edges().iter().enumerate() {
                let mut s = e.nodes.clone();
                if rng.gen_bool(0.5) {
                    s.union_with(&h1.edge(rng.gen_range(0..m)).nodes);
                }
                if rng.gen_bool(0.5) {
                    s.insert(NodeId::from(rng.gen_range(0..n)));
                }
                edges.push((format!("s{i}"), h1.names_of(&s)));
            }
            Hypergraph::from_named_edges(edges)?.aligned_to(&h1)?
        }
        PairMode::Augment(extra) => {
            let n = h1.node_count();
            let all: Vec<NodeId> = h1.nodes().iter().collect();
            let mut sets: Vec<(String, NodeSet)> = Vec::new();
            for j in 0..extra {
                let size = rng.gen_range(2.min(n)..=(n - 1).max(2.min(n)));
                let s: NodeSet = all.choose_multiple(&mut rng, size).copied().collect();
                sets.push((format!("x{j}"), s));
            }
            for e in h1.edges() {
                if !sets.iter().any(|(_, s)| e.nodes.is_subset(s)) {
                    sets.push((e.name.clone(), e.nodes.clone()));
                }
            }
            let edges: Vec<(String, Vec<&str>)> =
                sets.iter().map(|(name, s)| (name.clone(), h1.names_of(s))).collect();
            Hypergraph::from_named_edges(edges)?.aligned_to(&h1)?
        }
    };
    Ok((h1, h2))
}

/// Parameters of pair `i` in the seeded differential corpus: at most 8 nodes,
/// 6 `H1` edges and arity 4; `H2` cycles through covers, `H1^2` and
/// augmentations.
pub fn corpus_spec(seed: u64, i: u64) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i);
    let max_arity = rng.gen_range(2..=4);
    let edges = rng.gen_range(2..=6);
    let nodes = rng.gen_range(max_arity..=8usize.min(edges * max_arity));
    let mode = match i % 3 {
        0 => PairMode::Cover,
        1 => PairMode::Power(2),
        _ => PairMode::Augment(rng.gen_range(1..=3)),
    };
    InstanceSpec {
        nodes,
        edges,
        min_arity: rng.gen_range(1..=2),
        max_arity,
        seed: rng.gen(),
        mode,
    }
}

/// Scans `count` seeded pairs for one where greedy play wins but the
/// monotone Marshal does not. Pairs have 5 to 8 nodes, mostly binary edges
/// forming cycles, and `H2` made of one or two large random sets plus the
/// `H1` edges they miss.
pub fn find_strict_witness(seed: u64, count: u64) -> Result<Option<(InstanceSpec, Hypergraph, Hypergraph)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let nodes = rng.gen_range(5..=8);
        let spec = InstanceSpec {
            nodes,
            edges: rng.gen_range(nodes..=nodes + 2),
            min_arity: 2,
            max_arity: rng.gen_range(2..=3),
            seed: rng.gen(),
            mode: PairMode::Augment(rng.gen_range(1..=2)),
        };
        let (h1, h2) = generate(&spec)?;
        if greedy_wins(&h1, &h2)?.0 && !marshal_monotone_wins(&h1, &h2)? {
            return Ok(Some((spec, h1, h2)));
        }
    }
    Ok(None)
}

/// A random query: atoms from a random hypergraph over `vars` variables,
/// relation `r<i>` per atom, and a head of up to two variables.
pub fn random_query(seed: u64, vars: usize, atoms: usize, max_arity: usize) -> Result<ConjunctiveQuery> {
    let spec = InstanceSpec {
        nodes: vars,
        edges: atoms,
        min_arity: 1,
        max_arity,
        seed,
        mode: PairMode::Cover,
    };
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_hypergraph(&mut rng, vars, atoms, 1, max_arity);
    let name = |x: NodeId| h.name(x).to_uppercase();
    let body = h
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut terms: Vec<Term> = e.nodes.iter().map(|x| Term::Var(name(x))).collect();
            terms.shuffle(&mut rng);
            Atom {
                relation: format!("r{}", i + 1),
                terms,
            }
        })
        .collect();
    let mut all: Vec<NodeId> = h.nodes().iter().collect();
    all.shuffle(&mut rng);
    let head = all[..rng.gen_range(0..=2.min(all.len()))]
        .iter()
        .map(|&x| name(x))
        .collect();
    Ok(ConjunctiveQuery {
        name: "ans".into(),
        head,
        body,
    })
}

/// Up to `tuples` random tuples per relation of `q`, values drawn from
/// `0..domain`.
pub fn random_database(q: &ConjunctiveQuery, tuples: usize, domain: usize, seed: u64) -> Database {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::new();
    for a in &q.body {
        if db.relations.contains_key(&a.relation) {
            continue;
        }
        let rows: Vec<Vec<String>> = (0..tuples)
            .map(|_| (0..a.terms.len()).map(|_| rng.gen_range(0..domain).to_string()).collect())
            .collect();
        db.insert(&a.relation, rows).expect("uniform arity");
    }
    db
}
