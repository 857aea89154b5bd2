//! ARWU scoring engine: annual best-performer mode, fixed-gain mode, PCP,
//! dummy-FTE recovery, K estimation and inversion of published scores.

mod engine;
mod gains;
mod indicator;
mod record;
pub(crate) mod table;

pub use engine::{
    arwu_total, compute_pcp_raw, compute_ws, estimate_k, indicator_score_fixed, invert_published,
    invert_with_error, k_observations, pcp_score_annual, recover_dummy_fte, scale_to_best,
    score_annual, score_fixed_gain, score_from_raw, weighted_squares, weights, InversionScale,
    InvertedScore, KObservation, PUBLISHED_HALF_WIDTH, SCALED_PEAK, SOCSCI_WEIGHTS, SQRT_POWER,
    STANDARD_WEIGHTS,
};
pub use gains::{GainProvenance, GainSet, DEFAULT_DUMMY_FTE, DEFAULT_FIXED_GAINS};
pub use indicator::{Indicator, IndicatorScores, RawMarks};
pub use record::{InstitutionClass, InstitutionRecord, PublishedScores};
pub use table::{band_label, ScoreMode, ScoreRow, ScoreTable, DEFAULT_BAND_WIDTH};
