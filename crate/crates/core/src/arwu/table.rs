use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::indicator::IndicatorScores;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreMode {
    Annual,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub id: String,
    pub indicator_scores: IndicatorScores,
    pub total: f64,
    pub rank: usize,
}

/// Output of a scoring run, sorted by descending total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub mode: ScoreMode,
    pub rows: Vec<ScoreRow>,
}

impl ScoreTable {
    /// Sorts rows by total (descending, ties by ascending id) and numbers them 1..n.
    pub(crate) fn ranked(mode: ScoreMode, mut rows: Vec<ScoreRow>) -> Self {
        rows.sort_by(|a, b| by_score_then_id((a.total, &a.id), (b.total, &b.id)));
        for (i, row) in rows.iter_mut().enumerate() {
            row.rank = i + 1;
        }
        Self { mode, rows }
    }

    pub fn row(&self, id: &str) -> Option<&ScoreRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    /// Rank order as `(id, rank)` pairs.
    pub fn ranking(&self) -> Vec<(String, usize)> {
        self.rows.iter().map(|r| (r.id.clone(), r.rank)).collect()
    }
}

/// Descending score, then ascending id.
pub(crate) fn by_score_then_id(a: (f64, &str), b: (f64, &str)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

pub const DEFAULT_BAND_WIDTH: usize = 50;
const FIRST_BANDED_RANK: usize = 101;
const LAST_BANDED_RANK: usize = 500;

/// Presentation band for ranks 101-500, e.g. `"101-150"` for width 50.
/// Ranks in the top 100 are published individually and get no band.
pub fn band_label(rank: usize, width: usize) -> Option<String> {
    if width == 0 || !(FIRST_BANDED_RANK..=LAST_BANDED_RANK).contains(&rank) {
        return None;
    }
    let start = FIRST_BANDED_RANK + (rank - FIRST_BANDED_RANK) / width * width;
    let end = (start + width - 1).min(LAST_BANDED_RANK);
    Some(format!("{start}-{end}"))
}
