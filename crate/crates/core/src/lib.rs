//! Simulation and analysis toolkit for linear additive noise models (ANMs).
//!
//! The crate covers the full loop used to study how much causal-order
//! information leaks into synthetic benchmark data:
//!
//! * [`graphs`]: DAGs, random Erdős–Rényi / scale-free sampling, path
//!   counting, d-separation.
//! * [`anm`]: parameter sampling, data generation, standardization and
//!   closed-form population quantities.
//! * [`regression`]: OLS with intercept, coefficient of determination,
//!   L1-penalized least squares with BIC selection.
//! * [`sortability`]: the τ-sortability family for variance, R² and
//!   cause-explained variance under three path weightings.
//! * [`discovery`]: R²-SortnRegress, Var-SortnRegress and RandomRegress.
//! * [`evaluation`]: structural Hamming and structural intervention distance.
//! * [`bench`]: experiment drivers behind the `r2sort` CLI.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anm;
pub mod bench;
pub mod discovery;
pub mod error;
pub mod evaluation;
pub mod graphs;
pub mod regression;
pub mod seeding;
pub mod sortability;

pub use anm::{AnmInstance, Dataset, NoiseFamily, NoiseSpec, SigmaDist, WeightDist};
pub use discovery::WeightEstimate;
pub use error::{Error, Result};
pub use graphs::{Dag, PathLengthIndex};
pub use regression::LinearFit;
pub use sortability::{Criterion, SortabilityReport, Weighting};
