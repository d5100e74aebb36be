//! Greedy tree projections.
//!
//! Decides greedy winning strategies in the Robber & Captain game played on a
//! pair of hypergraphs, turns them into validated tree projections, derives
//! width measures from them and evaluates conjunctive queries over the
//! resulting acyclic rewritings.

pub mod error;
pub mod game;
pub mod hypergraph;
pub mod methods;
pub mod monotonize;
pub mod oracle;
pub mod query;

pub use error::{Error, Result};
