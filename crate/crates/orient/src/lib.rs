//! Hypergraph orientation under stochastic explorable uncertainty.
//!
//! Every vertex carries an open uncertainty interval, a piecewise-uniform
//! weight distribution and a query cost. The goal is to identify the
//! minimum-weight vertex of every hyperedge while paying as little as
//! possible for queries. This crate provides the model, the mandatory-vertex
//! machinery, vertex-cover solvers, the query algorithms, and a Monte-Carlo
//! harness for estimating competitive ratios.

pub mod algorithms;
pub mod bitset;
pub mod checks;
pub mod error;
pub mod harness;
pub mod mandatory;
pub mod model;
pub mod vcover;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use model::{Instance, Interval, Pmf, Realization, UncertainVertex};
