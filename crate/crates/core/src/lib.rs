//! Exact decompositions of U(d) representations as dimension-weighted probability
//! measures on highest weights, together with the Monte Carlo machinery for the
//! invariant random-matrix laws those measures converge to after rescaling.
//!
//! The library has two halves that are meant to be compared against each other:
//!
//! * an exact half ([`weights`], [`decompose`], [`ncmoments`]) working in
//!   arbitrary-precision integer/rational arithmetic: Weyl dimensions, Casimir
//!   values, Littlewood–Richardson tensor products, Gelfand–Tsetlin branching,
//!   tensor powers, and the set-partition expansion of normalized trace moments
//!   of tensor-power operators;
//! * a stochastic half ([`rmt`], [`compare`]): seeded Haar unitaries, invariant
//!   random matrices with prescribed eigenvalues, corners, sums, GUE-type
//!   ensembles, a complex-Hermitian Jacobi eigensolver, and the moment/W1
//!   statistics that bridge the two sides.
//!
//! Everything stochastic is driven by [`rmt::RngStream`] so that runs are
//! bit-reproducible from a (seed, stream) pair.

pub mod compare;
pub mod decompose;
mod error;
pub mod linalg;
pub mod ncmoments;
pub mod rmt;
pub mod weights;

pub use error::{Error, Result};
