//! Score-driven and rank-driven ranking dynamics.
//!
//! * [`scoring`]: the generic offset / power / gain transform chain and
//!   combined-event totals.
//! * [`arwu`]: ARWU indicator scoring in annual and fixed-gain modes,
//!   per-capita performance, K estimation and inversion of published scores.
//! * [`rank`]: KAM and remodeled-KAM normalization, rank-driven aggregation
//!   and rank-shift statistics.
//! * [`analysis`]: correlation, one-component PCA, KMO, Bartlett and the
//!   regressiveness difference function.
//! * [`io`]: CSV / JSON file formats.

pub mod analysis;
pub mod arwu;
mod error;
pub mod io;
pub mod rank;
pub mod scoring;

pub use error::{Error, Result};
