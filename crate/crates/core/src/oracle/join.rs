use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::query::{ConjunctiveQuery, Database, Relation, Term};

/// Default cap on intermediate bindings.
pub const DEFAULT_BINDING_BUDGET: usize = 5_000_000;

pub fn naive_join(q: &ConjunctiveQuery, db: &Database) -> Result<Relation> {
    naive_join_with(q, db, DEFAULT_BINDING_BUDGET)
}

/// Extends variable bindings atom by atom, left to right, against every
/// stored tuple, then projects to the head.
pub fn naive_join_with(q: &ConjunctiveQuery, db: &Database, budget: usize) -> Result<Relation> {
    let mut bindings: Vec<BTreeMap<&str, &str>> = vec![BTreeMap::new()];
    for atom in &q.body {
        let table = db.table(&atom.relation)?;
        let mut next = Vec::new();
        for b in &bindings {
            'tuples: for t in &table.tuples {
                if t.len() != atom.terms.len() {
                    return Err(Error::Arity {
                        relation: atom.relation.clone(),
                        expected: atom.terms.len(),
                        found: t.len(),
                    });
                }
                let mut nb = b.clone();
                for (term, value) in atom.terms.iter().zip(t) {
                    match term {
                        Term::Const(c) => {
                            if c != value {
                                continue 'tuples;
                            }
                        }
                        Term::Var(v) => match nb.get(v.as_str()) {
                            Some(&old) if old != value => continue 'tuples,
                            Some(_) => {}
                            None => {
                                nb.insert(v, value);
                            }
                        },
                    }
                }
                next.push(nb);
                if next.len() > budget {
                    return Err(Error::Ceiling {
                        what: "naive join bindings",
                        actual: next.len() as u128,
                        limit: budget as u128,
                    });
                }
            }
        }
        bindings = next;
    }
    let mut out = Relation::new(q.head.clone());
    for b in bindings {
        out.tuples
            .insert(q.head.iter().map(|v| b[v.as_str()].to_string()).collect());
    }
    Ok(out)
}
