//! Brute-force ground truth for small instances.

pub mod diff;
pub mod gen;
mod join;
pub mod naive;
mod tp;

pub use diff::{differential, run_pair, run_widths, DiffReport};
pub use gen::{
    corpus_spec, find_strict_witness, generate, random_database, random_hypergraph, random_query,
    InstanceSpec, PairMode,
};
pub use join::{naive_join, naive_join_with};
pub use tp::{
    ghw_bruteforce, tp_exists_bruteforce, tp_exists_bruteforce_with, tp_exists_elimination,
    tw_bruteforce, Limits,
};
