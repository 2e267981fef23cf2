//! Greedy sparse recovery from compressed measurements.
//!
//! A signal s = Ψc with few significant coefficients is observed through
//! an underdetermined linear map y = Φs. This crate assembles such
//! problems ([`problem::SparseProblem`]), generates test instances
//! (sparse and power-law coefficient signals, Gaussian measurement
//! matrices, optional additive noise at an exact SNR), and recovers the
//! coefficients with greedy pursuits:
//!
//! * [`emp`] — entropy-minimization matching pursuit, which selects
//!   atoms by the conditional entropy they leave behind rather than by
//!   raw correlation, with a gated variant for noisy measurements;
//! * [`greedy`] — the classical comparison set: matching pursuit,
//!   orthogonal matching pursuit, CoSaMP, and regularized OMP.
//!
//! Supporting modules: [`la`] (dense vectors/matrices and a pivoted QR
//! least-squares solver), [`entropy`] (representation entropy and
//! information power), [`problem`] (bases, measurement ensembles,
//! signal generators, coherence and RIP diagnostics), and [`recovery`]
//! (shared stop rules and the result type every solver returns).
//!
//! All randomness flows through explicit seeds and results carry full
//! iteration traces, so every run is reproducible and auditable.

pub mod emp;
pub mod entropy;
pub mod error;
pub mod greedy;
pub mod la;
pub mod problem;
pub mod recovery;

pub use error::{Error, Result};
