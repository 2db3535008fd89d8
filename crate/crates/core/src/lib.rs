//! Inversive point sets over finite fields and the machinery to test them.
//!
//! The crate builds explicit quasi-Monte Carlo node sets from inversions in
//! GF(p^k), evaluates the additive character sums that control their quality,
//! computes exact star discrepancies and the closed-form bounds they must
//! satisfy, and runs integration experiments on product cosine / finite
//! Fourier test functions.
//!
//! Modules, bottom-up:
//!
//! * [`arith`] — integer number theory helpers (primality, prime powers).
//! * [`field`] — GF(p^k) arithmetic, traces, dual bases, element orders.
//! * [`pointset`] — the size-q and period-T inversive constructions and the
//!   digital (radix-p) coordinate map.
//! * [`charsum`] — additive character sums over the vector sets and the
//!   explicit bounds they satisfy.
//! * [`discrepancy`] — exact and weighted star discrepancy, the
//!   Erdős–Turán–Koksma style bound, and derived asymptotic checks.
//! * [`integration`] — quasi-Monte Carlo quadrature, the tent transform, and
//!   convergence sweeps with computable norm bounds.

pub mod arith;
pub mod charsum;
pub mod discrepancy;
mod error;
pub mod field;
pub mod integration;
pub mod pointset;

/// Default cap on the size of exhaustive enumerations (character-sum
/// coefficient vectors, discrepancy corner grids). Every oracle takes the
/// budget as an explicit argument; this is the conventional default.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 24;

pub use charsum::CharSumReport;
pub use discrepancy::{DiscrepancyResult, ExperimentRecord, WeightSpec};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use integration::ClassParams;
pub use pointset::{
    Construction, DigitalPointSet, InversiveVectors, PeriodTConfig, RationalPointSet, SizeQConfig,
};
