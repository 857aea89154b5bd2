use std::path::Path;

use serde::{Deserialize, Serialize};

use super::engine::{compute_pcp_raw, recover_dummy_fte, SQRT_POWER};
use super::indicator::Indicator;
use super::record::InstitutionRecord;
use crate::error::{Error, Result};
use crate::scoring::calibrate_gain;

/// Gains averaged over two consecutive editions, ALUMNI..PUB then PCP.
pub const DEFAULT_FIXED_GAINS: [f64; 6] = [17.875, 16.975, 7.225, 4.775, 0.850, 9.325];

/// FTE assumed for institutions whose faculty count is unknown.
pub const DEFAULT_DUMMY_FTE: f64 = 890.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainProvenance {
    /// Calibrated on the current dataset's best performers.
    AnnualBestPerformer,
    /// Frozen reference gains reused across years.
    Fixed,
}

/// Gains `a_1..a_6` for the six indicators plus the FTE fallbacks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainSet {
    pub provenance: GainProvenance,
    pub gains: [f64; 6],
    #[serde(default = "default_dummy_fte")]
    pub dummy_fte: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_param: Option<f64>,
}

fn default_dummy_fte() -> f64 {
    DEFAULT_DUMMY_FTE
}

impl Default for GainSet {
    fn default() -> Self {
        Self {
            provenance: GainProvenance::Fixed,
            gains: DEFAULT_FIXED_GAINS,
            dummy_fte: DEFAULT_DUMMY_FTE,
            k_param: None,
        }
    }
}

impl GainSet {
    pub fn gain(&self, indicator: Indicator) -> f64 {
        self.gains[indicator.index()]
    }

    pub fn validate(&self) -> Result<()> {
        for (ind, &g) in Indicator::ALL.iter().zip(&self.gains) {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::Input(format!("gain for {ind} must be positive, got {g}")));
            }
        }
        if !self.dummy_fte.is_finite() || self.dummy_fte <= 0.0 {
            return Err(Error::Input(format!(
                "dummy_fte must be positive, got {}",
                self.dummy_fte
            )));
        }
        if let Some(k) = self.k_param {
            if !k.is_finite() || k <= 0.0 {
                return Err(Error::Input(format!("k_param must be positive, got {k}")));
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let gains: GainSet = serde_json::from_str(text)?;
        gains.validate()?;
        Ok(gains)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Calibrates every gain so that this dataset's best performer on each
    /// indicator scores exactly 100.
    ///
    /// The PCP gain is anchored on the best per-capita performer among
    /// institutions with a known FTE. When `k` is given, the dummy FTE is the
    /// value that makes the known- and unknown-FTE PCP formulas agree;
    /// otherwise [`DEFAULT_DUMMY_FTE`] is kept.
    pub fn from_best_performers(records: &[InstitutionRecord], k: Option<f64>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Input("dataset is empty".into()));
        }
        let mut gains = [1.0; 6];
        for ind in Indicator::RAW {
            let best = records
                .iter()
                .map(|r| r.effective_raw(ind))
                .fold(0.0_f64, f64::max);
            if best <= 0.0 {
                return Err(Error::DegenerateIndicator(ind.label().into()));
            }
            gains[ind.index()] = calibrate_gain(best, SQRT_POWER, 100.0)?;
        }

        let partial = GainSet {
            provenance: GainProvenance::AnnualBestPerformer,
            gains,
            dummy_fte: DEFAULT_DUMMY_FTE,
            k_param: k,
        };
        let mut best_pcp: Option<f64> = None;
        for record in records.iter().filter(|r| r.fte.is_some()) {
            let m6 = compute_pcp_raw(record, &partial)?;
            best_pcp = Some(best_pcp.map_or(m6, |b| b.max(m6)));
        }
        let best_pcp = best_pcp.ok_or_else(|| {
            Error::MissingParameter("an FTE value for at least one institution".into())
        })?;
        if best_pcp <= 0.0 {
            return Err(Error::DegenerateIndicator(Indicator::Pcp.label().into()));
        }
        gains[Indicator::Pcp.index()] = calibrate_gain(best_pcp, SQRT_POWER, 100.0)?;

        // Raw PCP is ten times WS/FTE, so the best per-capita quotient is a tenth of it.
        let cal = best_pcp / 10.0;
        let dummy_fte = match k {
            Some(k) if k.is_finite() && k > 0.0 => recover_dummy_fte(k, cal),
            Some(k) => return Err(Error::Input(format!("k must be positive, got {k}"))),
            None => DEFAULT_DUMMY_FTE,
        };
        Ok(GainSet {
            gains,
            dummy_fte,
            ..partial
        })
    }
}
