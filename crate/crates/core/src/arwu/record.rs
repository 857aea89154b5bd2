use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::indicator::{Indicator, RawMarks};
use crate::error::{Error, Result};

/// Weighting class of an institution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstitutionClass {
    #[default]
    Standard,
    /// Humanities and social-science institutions: S&N is excluded and the
    /// remaining weights are scaled up.
    #[serde(rename = "socsci")]
    SocialScience,
}

impl fmt::Display for InstitutionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstitutionClass::Standard => "standard",
            InstitutionClass::SocialScience => "socsci",
        })
    }
}

impl FromStr for InstitutionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Ok(InstitutionClass::Standard),
            "socsci" => Ok(InstitutionClass::SocialScience),
            other => Err(Error::Input(format!(
                "unknown class `{other}` (expected standard or socsci)"
            ))),
        }
    }
}

/// Scores published for an institution, 0-100 scale. Missing cells are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PublishedScores {
    pub indicators: BTreeMap<Indicator, f64>,
    pub total: Option<f64>,
}

impl PublishedScores {
    pub fn get(&self, indicator: Indicator) -> Option<f64> {
        self.indicators.get(&indicator).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstitutionRecord {
    pub id: String,
    pub name: String,
    pub class: InstitutionClass,
    pub raw: RawMarks,
    /// Full-time-equivalent faculty, when known.
    pub fte: Option<f64>,
    pub published: Option<PublishedScores>,
}

impl InstitutionRecord {
    pub fn new(id: impl Into<String>, class: InstitutionClass, raw: [f64; 5], fte: Option<f64>) -> Self {
        let id = id.into();
        Self {
            name: id.clone(),
            id,
            class,
            raw: RawMarks(raw),
            fte,
            published: None,
        }
    }

    /// Raw mark as it enters scoring: S&N is forced to zero for the
    /// social-science class.
    pub fn effective_raw(&self, indicator: Indicator) -> f64 {
        if indicator == Indicator::Sn && self.class == InstitutionClass::SocialScience {
            0.0
        } else {
            self.raw[indicator]
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Input("institution id is empty".into()));
        }
        for ind in Indicator::RAW {
            let v = self.raw[ind];
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Input(format!(
                    "{}: raw {} must be finite and non-negative, got {v}",
                    self.id,
                    ind.column()
                )));
            }
        }
        if let Some(fte) = self.fte {
            if !fte.is_finite() || fte <= 0.0 {
                return Err(Error::Input(format!("{}: fte must be positive, got {fte}", self.id)));
            }
        }
        Ok(())
    }
}
