//! Unfolding-free spectral statistics of random-matrix β-ensembles.
//!
//! The crate samples eigenvalue spectra from tridiagonal β-Hermite and
//! β-Laguerre matrix models and from Poisson-family level sequences, computes
//! ratio observables that need no unfolding (consecutive spacing ratios r_n,
//! r̃_n = min(r_n, 1/r_n), kth overlapping ratios, relative disjoint spacings),
//! and compares them against exact finite-N reference laws: closed-form
//! surmises, joint RDS densities evaluated by adaptive quadrature, and exact
//! rational moments obtained from nested-sum reductions.
//!
//! Physical test spectra (rectangular billiard, quantum Ising chain momentum
//! sectors, plain-text level files) run through the same statistics pipeline.

pub mod densities;
pub mod eigen;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod gof;
pub mod histogram;
pub mod joint;
pub mod models;
pub mod quad;
pub mod rng;
pub mod special;
pub mod spectrum;
pub mod stats;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use spectrum::Spectrum;
