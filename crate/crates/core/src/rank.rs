//! Rank-driven aggregation: KAM normalization, remodeled KAM, weighted
//! aggregation of per-indicator score tables, and ranking comparison.
//!
//! KAM scores an institution by how many others beat it on an indicator:
//! `I = 10 (1 - N_higher / population)`. Only the order of the values
//! matters, never their magnitude.

use std::collections::{BTreeMap, HashSet};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::arwu::table::by_score_then_id;
use crate::error::{ensure_finite, Error, Result};

/// Aggregates closer than one part in this many of the top score count as tied.
const TIE_RESOLUTION: f64 = 1e12;

/// Population used by the original KAM rule.
pub const DEFAULT_KAM_POPULATION: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KamEntry {
    pub id: String,
    /// Institutions with a strictly greater value.
    pub n_higher: usize,
    /// Score on the 0-10 scale.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KamResult {
    /// In input order.
    pub entries: Vec<KamEntry>,
    pub population: usize,
}

impl KamResult {
    /// The scores as a generic per-indicator column for [`aggregate_rank_driven`].
    pub fn to_column(&self) -> ScoreColumn {
        self.entries.iter().map(|e| (e.id.clone(), e.score)).collect()
    }
}

/// Per-institution scores for one indicator, keyed by id.
pub type ScoreColumn = BTreeMap<String, f64>;

/// For each value, the number of values strictly greater.
fn count_strictly_higher(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut n_higher = vec![0; values.len()];
    let mut block_start = 0;
    for (pos, &idx) in order.iter().enumerate() {
        if values[idx] != values[order[block_start]] {
            block_start = pos;
        }
        n_higher[idx] = block_start;
    }
    n_higher
}

fn check_items(items: &[(&str, f64)]) -> Result<()> {
    if items.is_empty() {
        return Err(Error::Input("no values to score".into()));
    }
    let mut seen = HashSet::new();
    for (id, v) in items {
        ensure_finite("indicator value", *v)?;
        if !seen.insert(*id) {
            return Err(Error::Input(format!("duplicate institution id `{id}`")));
        }
    }
    Ok(())
}

fn kam_score(n_higher: usize, population: usize) -> f64 {
    // (pop - N) * 10 / pop keeps block scores like 2950 / 500 = 5.9 exact.
    (population - n_higher) as f64 * 10.0 / population as f64
}

/// KAM normalization over a fixed population.
pub fn kam_scores(items: &[(&str, f64)], population: usize) -> Result<KamResult> {
    check_items(items)?;
    if population < items.len() {
        return Err(Error::Input(format!(
            "population {population} is smaller than the {} institutions supplied",
            items.len()
        )));
    }
    let values: Vec<f64> = items.iter().map(|(_, v)| *v).collect();
    let entries = items
        .iter()
        .zip(count_strictly_higher(&values))
        .map(|((id, _), n_higher)| KamEntry {
            id: id.to_string(),
            n_higher,
            score: kam_score(n_higher, population),
        })
        .collect();
    Ok(KamResult { entries, population })
}

/// Remodeled KAM: the population is the number of non-zero values, and true
/// zeros keep a score of zero.
pub fn kam_remodeled(items: &[(&str, f64)]) -> Result<KamResult> {
    check_items(items)?;
    let values: Vec<f64> = items.iter().map(|(_, v)| *v).collect();
    let population = values.iter().filter(|&&v| v != 0.0).count();
    let entries = items
        .iter()
        .zip(count_strictly_higher(&values))
        .map(|((id, v), n_higher)| KamEntry {
            id: id.to_string(),
            n_higher,
            score: if *v == 0.0 { 0.0 } else { kam_score(n_higher, population) },
        })
        .collect();
    Ok(KamResult { entries, population })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub id: String,
    pub score: f64,
    pub rank: usize,
}

/// Weighted sum of per-indicator scores, ranked by descending aggregate with
/// ties broken by ascending id.
pub fn aggregate_rank_driven(columns: &[ScoreColumn], weights: &[f64]) -> Result<Vec<RankedEntry>> {
    if columns.is_empty() {
        return Err(Error::Input("no indicator tables to aggregate".into()));
    }
    if columns.len() != weights.len() {
        return Err(Error::Input(format!(
            "{} tables but {} weights",
            columns.len(),
            weights.len()
        )));
    }
    for &w in weights {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Input(format!("weights must be non-negative, got {w}")));
        }
    }
    if weights.iter().all(|&w| w == 0.0) {
        return Err(Error::Input("at least one weight must be positive".into()));
    }
    let reference = &columns[0];
    for (i, column) in columns.iter().enumerate().skip(1) {
        if column.len() != reference.len() || !column.keys().eq(reference.keys()) {
            return Err(Error::SetMismatch(format!(
                "table {} covers different institutions than table 1",
                i + 1
            )));
        }
    }

    let mut ranked: Vec<RankedEntry> = reference
        .keys()
        .map(|id| RankedEntry {
            id: id.clone(),
            score: columns.iter().zip(weights).map(|(c, w)| w * c[id]).sum(),
            rank: 0,
        })
        .collect();
    // Sums of equal rank scores taken in a different order can differ in the
    // last bits; compare on a snapped key so such ties fall back to the id.
    let scale = ranked.iter().map(|e| e.score.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let key = |score: f64| (score / scale * TIE_RESOLUTION).round();
    ranked.sort_by(|a, b| by_score_then_id((key(a.score), &a.id), (key(b.score), &b.id)));
    for (i, e) in ranked.iter_mut().enumerate() {
        e.rank = i + 1;
    }
    Ok(ranked)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankShift {
    pub id: String,
    pub rank_a: usize,
    pub rank_b: usize,
    /// `rank_a - rank_b`; positive means the institution moved up in `b`.
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankComparison {
    /// Ordered by `rank_a`, restricted to the scope.
    pub shifts: Vec<RankShift>,
    pub mean_abs_shift: f64,
    pub max_abs_shift: u64,
    pub scope: Option<(usize, usize)>,
}

/// Per-institution rank changes between two rankings of the same set.
/// `scope` filters on ranks in `a`.
pub fn compare_rankings(
    a: &[(String, usize)],
    b: &[(String, usize)],
    scope: Option<RangeInclusive<usize>>,
) -> Result<RankComparison> {
    let b_ranks: BTreeMap<&str, usize> = b.iter().map(|(id, r)| (id.as_str(), *r)).collect();
    if b_ranks.len() != b.len() {
        return Err(Error::Input("ranking b contains duplicate ids".into()));
    }
    let a_ids: HashSet<&str> = a.iter().map(|(id, _)| id.as_str()).collect();
    if a_ids.len() != a.len() {
        return Err(Error::Input("ranking a contains duplicate ids".into()));
    }
    if a_ids.len() != b_ranks.len() || !a_ids.iter().all(|id| b_ranks.contains_key(id)) {
        return Err(Error::SetMismatch("the two rankings cover different institutions".into()));
    }

    let mut shifts: Vec<RankShift> = a
        .iter()
        .filter(|(_, r)| scope.as_ref().is_none_or(|s| s.contains(r)))
        .map(|(id, rank_a)| {
            let rank_b = b_ranks[id.as_str()];
            RankShift {
                id: id.clone(),
                rank_a: *rank_a,
                rank_b,
                shift: *rank_a as i64 - rank_b as i64,
            }
        })
        .collect();
    shifts.sort_by(|x, y| x.rank_a.cmp(&y.rank_a).then_with(|| x.id.cmp(&y.id)));

    let max_abs_shift = shifts.iter().map(|s| s.shift.unsigned_abs()).max().unwrap_or(0);
    let mean_abs_shift = if shifts.is_empty() {
        0.0
    } else {
        shifts.iter().map(|s| s.shift.unsigned_abs() as f64).sum::<f64>() / shifts.len() as f64
    };
    Ok(RankComparison {
        shifts,
        mean_abs_shift,
        max_abs_shift,
        scope: scope.map(|s| (*s.start(), *s.end())),
    })
}
