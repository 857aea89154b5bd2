//! Statistical validation of indicators: correlation, one-component PCA,
//! KMO and Bartlett tests, and difference-function diagnostics.

mod correlation;
mod difference;
pub mod linalg;
mod pca;
pub mod special;

pub use correlation::{correlation_matrix, CorrelationMatrix};
pub use difference::{
    difference_series, regressiveness_report, DifferencePoint, DifferenceSeries, ReportOptions,
};
pub use pca::{bartlett, kmo, pca_from_correlation, BartlettTest, PcaReport, LOADING_SE_FACTOR, Z_95};
