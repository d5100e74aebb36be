use std::time::{Duration, Instant};

use super::{query_hypergraph, Atom, ConjunctiveQuery, Database, Relation, Term};
use crate::error::{Error, Result};
use crate::game::{greedy_wins, marshal_monotone_game};
use crate::hypergraph::{Hypergraph, JoinTree};
use crate::methods::{power_hypergraph, power_hypergraph_with, DEFAULT_CEILING};
use crate::monotonize::{project, validate_tree_projection, TreeProjection};

/// Default cap on the tuples of any materialized view.
pub const DEFAULT_TUPLE_BUDGET: usize = 10_000_000;

/// The atom's stored relation, filtered by its constants and repeated
/// variables, over its distinct variables.
pub fn atom_relation(atom: &Atom, db: &Database) -> Result<Relation> {
    let table = db.table(&atom.relation)?;
    if let Some(a) = table.arity {
        if a != atom.terms.len() {
            return Err(Error::Arity {
                relation: atom.relation.clone(),
                expected: atom.terms.len(),
                found: a,
            });
        }
    }
    let vars = atom.variables();
    let first: Vec<usize> = vars
        .iter()
        .map(|v| {
            atom.terms
                .iter()
                .position(|t| matches!(t, Term::Var(w) if w == v))
                .expect("variable occurs")
        })
        .collect();
    let mut out = Relation::new(vars.clone());
    'rows: for t in &table.tuples {
        for (i, term) in atom.terms.iter().enumerate() {
            match term {
                Term::Const(c) if t[i] != *c => continue 'rows,
                Term::Var(v) => {
                    let j = first[vars.iter().position(|w| w == v).expect("listed")];
                    if t[i] != t[j] {
                        continue 'rows;
                    }
                }
                _ => {}
            }
        }
        out.tuples.insert(first.iter().map(|&j| t[j].clone()).collect());
    }
    Ok(out)
}

/// Materialized views over the query variables, one per edge of `H_Q^k`.
#[derive(Clone, Debug)]
pub struct ViewSet {
    pub hypergraph: Hypergraph,
    pub views: Vec<Relation>,
    /// Body atoms joined for each view.
    pub atoms: Vec<Vec<usize>>,
}

/// For every deduplicated union of at most `k` atoms, the join of those
/// atoms' relations. Fails when the query has no variables.
pub fn materialize_views(q: &ConjunctiveQuery, db: &Database, k: usize) -> Result<ViewSet> {
    materialize_views_with(q, db, k, DEFAULT_TUPLE_BUDGET)
}

pub fn materialize_views_with(
    q: &ConjunctiveQuery,
    db: &Database,
    k: usize,
    budget: usize,
) -> Result<ViewSet> {
    let qh = query_hypergraph(q);
    let h = qh
        .hypergraph
        .as_ref()
        .ok_or_else(|| Error::Precondition("query has no variables".into()))?;
    let hk = power_hypergraph(h, k)?;
    let base: Vec<Relation> = qh
        .edge_atom
        .iter()
        .map(|&a| atom_relation(&q.body[a], db))
        .collect::<Result<_>>()?;
    let mut views = Vec::new();
    let mut atoms = Vec::new();
    for (e, prov) in hk.hypergraph.edges().iter().zip(&hk.provenance) {
        let mut rel = base[prov[0]].clone();
        for &i in &prov[1..] {
            rel = rel.join(&base[i]);
            if rel.len() > budget {
                return Err(Error::Ceiling {
                    what: "view materialization",
                    actual: rel.len() as u128,
                    limit: budget as u128,
                });
            }
        }
        let vars: Vec<String> = h.names_of(&e.nodes).iter().map(|s| s.to_string()).collect();
        views.push(rel.project(&vars));
        atoms.push(prov.iter().map(|&i| qh.edge_atom[i]).collect());
    }
    Ok(ViewSet {
        hypergraph: hk.hypergraph,
        views,
        atoms,
    })
}

/// An acyclic query together with its rewritten database: one relation per
/// atom, arranged along a join tree.
#[derive(Clone, Debug)]
pub struct AcyclicQuery {
    pub names: Vec<String>,
    pub relations: Vec<Relation>,
    pub join_tree: JoinTree,
}

impl AcyclicQuery {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// The rewritten query as a rule, for display.
    pub fn to_rule(&self, name: &str, head: &[String]) -> String {
        let atoms: Vec<String> = self
            .names
            .iter()
            .zip(&self.relations)
            .map(|(n, r)| format!("{n}({})", r.attrs.join(",")))
            .collect();
        format!("{name}({}) :- {}.", head.join(","), atoms.join(", "))
    }
}

/// One fresh atom per `Ha` edge `h`: the covering view (from the upper
/// witness) projected on `h`, then semijoin-filtered by every query atom
/// whose variables lie in `h`.
pub fn acyclic_rewrite(
    q: &ConjunctiveQuery,
    db: &Database,
    vs: &ViewSet,
    tp: &TreeProjection,
) -> Result<AcyclicQuery> {
    let qh = query_hypergraph(q);
    let h = qh
        .hypergraph
        .as_ref()
        .ok_or_else(|| Error::Precondition("query has no variables".into()))?;
    validate_tree_projection(tp, h, &vs.hypergraph).map_err(Error::Validation)?;
    let atom_rels: Vec<(Vec<String>, Relation)> = qh
        .edge_atom
        .iter()
        .map(|&a| {
            let at = &q.body[a];
            Ok((at.variables(), atom_relation(at, db)?))
        })
        .collect::<Result<_>>()?;
    let mut names = Vec::new();
    let mut relations = Vec::new();
    for (i, e) in tp.ha.edges().iter().enumerate() {
        let vars: Vec<String> = tp.ha.names_of(&e.nodes).iter().map(|s| s.to_string()).collect();
        let mut rel = vs.views[tp.upper[i]].project(&vars);
        for (avars, arel) in &atom_rels {
            if avars.iter().all(|v| vars.contains(v)) {
                rel = rel.semijoin(arel);
            }
        }
        names.push(e.name.clone());
        relations.push(rel);
    }
    Ok(AcyclicQuery {
        names,
        relations,
        join_tree: tp.join_tree.clone(),
    })
}

/// Sizes reported by an evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Atoms of the acyclic rewriting.
    pub m: usize,
    /// Largest materialized view.
    pub r: usize,
    /// Largest rewritten relation.
    pub r_prime: usize,
    /// Answer size.
    pub s: usize,
    /// Width at which the projection was found.
    pub k: usize,
    pub timings: Vec<(&'static str, Duration)>,
}

/// Full reducer (semijoins leaves-to-root, then root-to-leaves) followed by
/// bottom-up joins that keep only head variables and those shared with the
/// parent.
pub fn yannakakis(aq: &AcyclicQuery, head: &[String]) -> (Relation, EvalStats) {
    let jt = &aq.join_tree;
    let mut rels = aq.relations.clone();
    let pre = jt.preorder();
    let mut stats = EvalStats {
        m: rels.len(),
        r_prime: rels.iter().map(Relation::len).max().unwrap_or(0),
        ..Default::default()
    };
    for &v in pre.iter().rev() {
        if let Some(p) = jt.parent[v] {
            let reduced = rels[p].semijoin(&rels[v]);
            debug_assert!(reduced.len() <= rels[p].len());
            rels[p] = reduced;
        }
    }
    for &v in &pre {
        if let Some(p) = jt.parent[v] {
            rels[v] = rels[v].semijoin(&rels[p]);
        }
    }
    let children = jt.children();
    let mut acc: Vec<Option<Relation>> = vec![None; rels.len()];
    for &v in pre.iter().rev() {
        let mut r = rels[v].clone();
        for &c in &children[v] {
            r = r.join(acc[c].as_ref().expect("children first"));
        }
        let parent_vars: &[String] = match jt.parent[v] {
            Some(p) => &aq.relations[p].attrs,
            None => &[],
        };
        let keep: Vec<String> = r
            .attrs
            .iter()
            .filter(|a| head.contains(a) || parent_vars.contains(a))
            .cloned()
            .collect();
        acc[v] = Some(r.project(&keep));
    }
    let out = acc[jt.root].take().expect("root evaluated").project(head);
    stats.s = out.len();
    (out, stats)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnswerConfig {
    pub kmax: usize,
    /// Restrict the Captain to monotone Marshal strategies (hw instead of
    /// greedy hw).
    pub monotone_only: bool,
    /// Ceiling on the edges of `H_Q^k`.
    pub budget_edges: u128,
}

impl Default for AnswerConfig {
    fn default() -> Self {
        AnswerConfig {
            kmax: 3,
            monotone_only: false,
            budget_edges: DEFAULT_CEILING,
        }
    }
}

/// Query hypergraph, smallest `k` with a greedy projection against `H_Q^k`,
/// views, rewriting, Yannakakis.
pub fn answer(q: &ConjunctiveQuery, db: &Database, cfg: AnswerConfig) -> Result<(Relation, EvalStats)> {
    let qh = query_hypergraph(q);
    for &g in &qh.ground_atoms {
        if atom_relation(&q.body[g], db)?.is_empty() {
            return Ok((Relation::new(q.head.clone()), EvalStats::default()));
        }
    }
    let Some(h) = qh.hypergraph.as_ref() else {
        return Ok((Relation::unit(), EvalStats { s: 1, ..Default::default() }));
    };
    let t = Instant::now();
    let mut found = None;
    for k in 1..=cfg.kmax {
        let hk = power_hypergraph_with(h, k, cfg.budget_edges)?;
        let (won, game) = if cfg.monotone_only {
            marshal_monotone_game(h, &hk.hypergraph)?
        } else {
            greedy_wins(h, &hk.hypergraph)?
        };
        if won {
            let p = project(&game)?.expect("won games project");
            found = Some((k, p.projection));
            break;
        }
    }
    let Some((k, tp)) = found else {
        return Err(Error::NoProjection(cfg.kmax));
    };
    let decide = t.elapsed();
    let t = Instant::now();
    let vs = materialize_views(q, db, k)?;
    let views = t.elapsed();
    let t = Instant::now();
    let aq = acyclic_rewrite(q, db, &vs, &tp)?;
    let rewrite = t.elapsed();
    let t = Instant::now();
    let (out, mut stats) = yannakakis(&aq, &q.head);
    stats.timings = vec![
        ("decide", decide),
        ("views", views),
        ("rewrite", rewrite),
        ("evaluate", t.elapsed()),
    ];
    stats.r = vs.views.iter().map(Relation::len).max().unwrap_or(0);
    stats.k = k;
    Ok((out, stats))
}
