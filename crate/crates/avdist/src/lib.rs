//! Average-case distance measures for quantum states, measurements and
//! channels, with the worst-case counterparts, exact Haar-moment formulas,
//! Monte Carlo estimators over random-circuit ensembles, and a property /
//! reproduction harness.
//!
//! Layout:
//! * [`linalg`] — dense complex matrices, Hermitian eigen, partial trace,
//!   tensor and permutation operators
//! * [`objects`] — states, POVMs, Choi matrices, stochastic maps
//! * [`moments`] — symmetric-subspace projectors and exact Haar moments
//! * [`avg`] / [`worst`] — the distance measures themselves
//! * [`ensembles`] — Haar and brickwork circuit sampling, seeded deterministically
//! * [`montecarlo`] — TV estimators, bound checks, discrimination simulator
//! * [`suites`] — reproduction registry and property sweeps

pub mod avg;
pub mod ensembles;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod montecarlo;
pub mod objects;
pub mod suites;
pub mod worst;

pub use error::{Error, Result};
