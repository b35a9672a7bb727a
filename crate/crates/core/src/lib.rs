//! Potts and Ising models on weighted graphs at desk scale: exact
//! brute-force oracles, naive mean-field variational solvers, spectral
//! diagnostics for the coupling matrices, and the closed-form limiting
//! formulas for asymptotically regular and bi-regular bipartite ensembles,
//! together with the step-graphon functional that ties them together.

pub mod error;
pub mod exact;
pub mod graphon;
pub mod limits;
pub mod matrix;
pub mod meanfield;
pub mod numeric;
pub mod rng;

pub use error::{Error, Result};
