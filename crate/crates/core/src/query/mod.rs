//! Conjunctive queries: parsing, hypergraphs, view materialization, acyclic
//! rewriting along a tree projection, and Yannakakis evaluation.

mod eval;
mod parse;
mod relation;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{
    acyclic_rewrite, answer, atom_relation, materialize_views, yannakakis, AcyclicQuery,
    AnswerConfig, EvalStats, ViewSet,
};
pub use parse::parse_query;
pub use relation::{Database, Relation, Table, Tuple};

use crate::hypergraph::Hypergraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub relation: String,
    pub terms: Vec<Term>,
}

impl Atom {
    /// Distinct variables in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in &self.terms {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjunctiveQuery {
    pub name: String,
    pub head: Vec<String>,
    pub body: Vec<Atom>,
}

impl ConjunctiveQuery {
    pub fn variables(&self) -> BTreeSet<String> {
        self.body.iter().flat_map(Atom::variables).collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.head.is_empty()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "'{c}'"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        write!(f, "{}({})", self.relation, terms.join(","))
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(ToString::to_string).collect();
        write!(f, "{}({}) :- {}.", self.name, self.head.join(","), body.join(", "))
    }
}

/// The hypergraph of a query: one edge per atom with variables.
#[derive(Clone, Debug)]
pub struct QueryHypergraph {
    /// `None` when no atom has a variable.
    pub hypergraph: Option<Hypergraph>,
    /// Body atom behind each edge.
    pub edge_atom: Vec<usize>,
    /// Atoms without variables; they only filter.
    pub ground_atoms: Vec<usize>,
    pub connected: bool,
}

/// Edge names are the relation names, suffixed with the atom position when
/// a relation occurs more than once.
pub fn query_hypergraph(q: &ConjunctiveQuery) -> QueryHypergraph {
    let mut edges = Vec::new();
    let mut edge_atom = Vec::new();
    let mut ground_atoms = Vec::new();
    for (i, a) in q.body.iter().enumerate() {
        let vars = a.variables();
        if vars.is_empty() {
            ground_atoms.push(i);
            continue;
        }
        let repeated = q.body.iter().filter(|b| b.relation == a.relation).count() > 1;
        let name = if repeated {
            format!("{}_{}", a.relation, i + 1)
        } else {
            a.relation.clone()
        };
        edges.push((name, vars));
        edge_atom.push(i);
    }
    let hypergraph = if edges.is_empty() {
        None
    } else {
        Some(Hypergraph::from_named_edges(edges).expect("atoms with variables give non-empty edges"))
    };
    let connected = hypergraph
        .as_ref()
        .is_none_or(|h| h.connected_parts().len() == 1);
    QueryHypergraph {
        hypergraph,
        edge_atom,
        ground_atoms,
        connected,
    }
}

#[cfg(test)]
mod tests;
