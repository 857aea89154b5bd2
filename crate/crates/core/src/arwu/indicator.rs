use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The six ARWU indicators, in publication order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indicator {
    Alumni,
    Award,
    Hici,
    /// Nature & Science papers (S&N).
    #[serde(rename = "ns")]
    Sn,
    Pub,
    /// Per-capita performance, derived from the other five.
    Pcp,
}

impl Indicator {
    /// The five indicators backed by raw marks.
    pub const RAW: [Indicator; 5] = [
        Indicator::Alumni,
        Indicator::Award,
        Indicator::Hici,
        Indicator::Sn,
        Indicator::Pub,
    ];

    pub const ALL: [Indicator; 6] = [
        Indicator::Alumni,
        Indicator::Award,
        Indicator::Hici,
        Indicator::Sn,
        Indicator::Pub,
        Indicator::Pcp,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Lower-case name used as a CSV column.
    pub fn column(self) -> &'static str {
        match self {
            Indicator::Alumni => "alumni",
            Indicator::Award => "award",
            Indicator::Hici => "hici",
            Indicator::Sn => "ns",
            Indicator::Pub => "pub",
            Indicator::Pcp => "pcp",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Indicator::Alumni => "ALUMNI",
            Indicator::Award => "AWARD",
            Indicator::Hici => "HICI",
            Indicator::Sn => "SN",
            Indicator::Pub => "PUB",
            Indicator::Pcp => "PCP",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "alumni" => Ok(Indicator::Alumni),
            "award" => Ok(Indicator::Award),
            "hici" => Ok(Indicator::Hici),
            "ns" | "sn" | "s&n" | "n&s" => Ok(Indicator::Sn),
            "pub" => Ok(Indicator::Pub),
            "pcp" => Ok(Indicator::Pcp),
            other => Err(Error::Input(format!("unknown indicator `{other}`"))),
        }
    }
}

/// Five raw marks indexed by [`Indicator`] (PCP excluded).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RawMarks(pub [f64; 5]);

impl Index<Indicator> for RawMarks {
    type Output = f64;

    fn index(&self, indicator: Indicator) -> &f64 {
        assert!(indicator != Indicator::Pcp, "PCP has no raw mark");
        &self.0[indicator.index()]
    }
}

impl IndexMut<Indicator> for RawMarks {
    fn index_mut(&mut self, indicator: Indicator) -> &mut f64 {
        assert!(indicator != Indicator::Pcp, "PCP has no raw mark");
        &mut self.0[indicator.index()]
    }
}

/// Six indicator scores on the 0-100 scale, indexed by [`Indicator`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IndicatorScores(pub [f64; 6]);

impl IndicatorScores {
    /// The five non-composed scores.
    pub fn raw_five(&self) -> [f64; 5] {
        [self.0[0], self.0[1], self.0[2], self.0[3], self.0[4]]
    }
}

impl Index<Indicator> for IndicatorScores {
    type Output = f64;

    fn index(&self, indicator: Indicator) -> &f64 {
        &self.0[indicator.index()]
    }
}

impl IndexMut<Indicator> for IndicatorScores {
    fn index_mut(&mut self, indicator: Indicator) -> &mut f64 {
        &mut self.0[indicator.index()]
    }
}
