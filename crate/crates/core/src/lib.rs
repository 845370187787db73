//! Spectral Turán toolkit for k-uniform hypergraphs.
//!
//! The crate is organised around a single immutable [`Hypergraph`] type:
//!
//! * [`hypergraph`] builds the named extremal constructions and decides
//!   pattern colorability,
//! * [`spectral`] evaluates the Lagrangian polynomial and computes
//!   α-spectral radii with residual certificates,
//! * [`containment`] decides (non-induced) subhypergraph containment,
//! * [`search`] brute-forces Turán and spectral Turán numbers at small scale,
//! * [`stability`] runs the minimum-entry vertex peeling procedure and checks
//!   the finite-n inequalities that drive it.

// `!(x > a)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod containment;
pub mod error;
pub mod hypergraph;
pub mod search;
pub mod spectral;
pub mod stability;

pub use error::{Error, Result};
pub use hypergraph::{Coloring, Hypergraph, Pattern};
pub use spectral::{SolverOptions, SpectralResult, WeightVector};
