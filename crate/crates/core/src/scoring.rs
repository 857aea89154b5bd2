//! Generic score-driven transform chain.
//!
//! A mark is shifted by an offset, compressed or expanded by a power law and
//! amplified by a gain:
//!
//! ```text
//! score = gain * |mark - offset| ^ power
//! ```
//!
//! The offset doubles as the zero-point threshold: marks on the wrong side of
//! it score nothing. Combined-events tables sum the per-event scores of an
//! [`EventSet`], optionally rounding each one first.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Which side of the offset earns points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Larger marks are better (jumps, throws, publication counts).
    #[serde(rename = "asc")]
    Ascending,
    /// Smaller marks are better (running times).
    #[serde(rename = "desc")]
    Descending,
}

/// Transform parameters for one event or indicator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringElement {
    pub direction: Direction,
    /// Zero-point threshold, in mark units.
    pub offset: f64,
    /// Power-law exponent.
    pub power: f64,
    /// Points per (mark unit)^power.
    pub gain: f64,
}

impl ScoringElement {
    pub fn new(direction: Direction, offset: f64, power: f64, gain: f64) -> Result<Self> {
        let element = Self {
            direction,
            offset,
            power,
            gain,
        };
        element.validate()?;
        Ok(element)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("offset", self.offset)?;
        ensure_finite("power", self.power)?;
        ensure_finite("gain", self.gain)?;
        if self.gain <= 0.0 {
            return Err(Error::Input(format!("gain must be positive, got {}", self.gain)));
        }
        if self.power <= 0.0 {
            return Err(Error::Input(format!("power must be positive, got {}", self.power)));
        }
        Ok(())
    }

    /// Distance from the threshold on the scoring side, or `None` when the
    /// mark falls outside it.
    fn excess(&self, mark: f64) -> Option<f64> {
        let excess = match self.direction {
            Direction::Ascending => mark - self.offset,
            Direction::Descending => self.offset - mark,
        };
        (excess >= 0.0).then_some(excess)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    #[default]
    None,
    /// Round each element's score half away from zero before summing.
    #[serde(rename = "nearest")]
    NearestInteger,
}

impl Rounding {
    fn apply(self, score: f64) -> f64 {
        match self {
            Rounding::None => score,
            // f64::round rounds half-way cases away from zero.
            Rounding::NearestInteger => score.round(),
        }
    }
}

/// An ordered list of scoring elements summed into one total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSet {
    #[serde(default)]
    pub rounding: Rounding,
    pub elements: Vec<ScoringElement>,
}

impl EventSet {
    pub fn new(elements: Vec<ScoringElement>, rounding: Rounding) -> Result<Self> {
        let set = Self { rounding, elements };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(Error::Input("event set has no elements".into()));
        }
        for (i, element) in self.elements.iter().enumerate() {
            element
                .validate()
                .map_err(|e| Error::Input(format!("element {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let set: EventSet = serde_json::from_str(text)?;
        set.validate()?;
        Ok(set)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Per-element scores after the rounding policy has been applied.
    pub fn element_scores(&self, marks: &[f64]) -> Result<Vec<f64>> {
        if marks.len() != self.elements.len() {
            return Err(Error::Input(format!(
                "expected {} marks, got {}",
                self.elements.len(),
                marks.len()
            )));
        }
        self.elements
            .iter()
            .zip(marks)
            .map(|(element, &mark)| transform_mark(element, mark).map(|s| self.rounding.apply(s)))
            .collect()
    }
}

/// Maps a mark to points: `gain * |mark - offset|^power` on the scoring side
/// of the threshold, zero otherwise.
pub fn transform_mark(element: &ScoringElement, mark: f64) -> Result<f64> {
    ensure_finite("mark", mark)?;
    Ok(match element.excess(mark) {
        Some(excess) => element.gain * excess.powf(element.power),
        None => 0.0,
    })
}

/// Gain that maps the best performer's mark to `target` points with a zero
/// offset.
pub fn calibrate_gain(best_performer_mark: f64, power: f64, target: f64) -> Result<f64> {
    ensure_finite("best performer mark", best_performer_mark)?;
    ensure_finite("power", power)?;
    ensure_finite("target", target)?;
    if best_performer_mark <= 0.0 {
        return Err(Error::Calibration(format!(
            "best performer mark must be positive, got {best_performer_mark}"
        )));
    }
    if power <= 0.0 || target <= 0.0 {
        return Err(Error::Calibration(format!(
            "power and target must be positive, got power={power}, target={target}"
        )));
    }
    Ok(target / best_performer_mark.powf(power))
}

/// Sum of per-element scores, each rounded per the set's policy first.
pub fn score_event_set(event_set: &EventSet, marks: &[f64]) -> Result<f64> {
    Ok(event_set.element_scores(marks)?.iter().sum())
}
