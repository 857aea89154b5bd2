//! Adjacent-rank difference functions and the regressiveness index.
//!
//! Sorting an indicator's raw scores in descending order and differencing
//! neighbours gives `ds(n) = s(n) - s(n+1)`. An indicator is regressive when
//! the gaps shrink down the ranking, i.e. `ds(n) >= ds(m)` for most `n < m`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceSeries {
    /// Descending.
    pub sorted_scores: Vec<f64>,
    /// `ds[n] = sorted_scores[n] - sorted_scores[n + 1]`.
    pub ds: Vec<f64>,
    /// Fraction of pairs `n < m` with `ds[n] >= ds[m]`; `None` below three values.
    pub regressiveness_index: Option<f64>,
}

pub fn difference_series(raw_scores: &[f64]) -> Result<DifferenceSeries> {
    if raw_scores.len() < 2 {
        return Err(Error::Input(format!(
            "at least 2 values are required, got {}",
            raw_scores.len()
        )));
    }
    for &v in raw_scores {
        ensure_finite("raw score", v)?;
    }
    let mut sorted_scores = raw_scores.to_vec();
    // stable, so equal scores keep input order
    sorted_scores.sort_by(|a, b| b.total_cmp(a));
    let ds: Vec<f64> = sorted_scores.windows(2).map(|w| w[0] - w[1]).collect();
    let regressiveness_index = regressiveness_index(&ds);
    Ok(DifferenceSeries {
        sorted_scores,
        ds,
        regressiveness_index,
    })
}

/// Exact O(L²) pair count.
fn regressiveness_index(ds: &[f64]) -> Option<f64> {
    let l = ds.len();
    if l < 2 {
        return None;
    }
    let mut holding = 0u64;
    for n in 0..l {
        for m in (n + 1)..l {
            if ds[n] >= ds[m] {
                holding += 1;
            }
        }
    }
    let pairs = (l * (l - 1) / 2) as u64;
    Some(holding as f64 / pairs as f64)
}

/// One point of a difference-function plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferencePoint {
    /// 1-based rank of the upper institution of the pair.
    pub n: usize,
    pub ds: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// Omit the gap below the top-ranked institution, which tends to dwarf the rest.
    pub drop_top: bool,
    /// Divide by the largest emitted gap so every series peaks at 1.
    pub rescale: bool,
}

/// Plot-ready `(n, ds)` series for one indicator.
pub fn regressiveness_report(raw_scores: &[f64], options: ReportOptions) -> Result<Vec<DifferencePoint>> {
    let series = difference_series(raw_scores)?;
    let skip = usize::from(options.drop_top);
    let mut points: Vec<DifferencePoint> = series
        .ds
        .iter()
        .enumerate()
        .skip(skip)
        .map(|(i, &ds)| DifferencePoint { n: i + 1, ds })
        .collect();
    if options.rescale {
        let max = points.iter().map(|p| p.ds).fold(0.0_f64, f64::max);
        if max > 0.0 {
            points.iter_mut().for_each(|p| p.ds /= max);
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn geometric_series_is_fully_regressive() {
        let s = difference_series(&[35.0, 100.0, 25.0, 70.0, 50.0]).unwrap();
        assert_eq!(s.sorted_scores, [100.0, 70.0, 50.0, 35.0, 25.0]);
        assert_eq!(s.ds, [30.0, 20.0, 15.0, 10.0]);
        assert_eq!(s.regressiveness_index, Some(1.0));
    }

    #[test]
    fn equal_gaps_count_as_regressive() {
        let s = difference_series(&[10.0, 8.0, 6.0, 4.0, 2.0]).unwrap();
        assert!(s.ds.iter().all(|&d| d == 2.0));
        assert_eq!(s.regressiveness_index, Some(1.0));
    }

    #[test]
    fn widening_gaps_are_progressive() {
        // gaps 1, 2, 3, 4: no pair satisfies ds[n] >= ds[m]
        let s = difference_series(&[100.0, 99.0, 97.0, 94.0, 90.0]).unwrap();
        assert_eq!(s.regressiveness_index, Some(0.0));
    }

    #[test]
    fn mixed_gaps_hand_count() {
        // ds = 3, 1, 2: pairs (3,1) yes, (3,2) yes, (1,2) no
        let s = difference_series(&[6.0, 3.0, 2.0, 0.0]).unwrap();
        assert_eq!(s.ds, [3.0, 1.0, 2.0]);
        assert_eq!(s.regressiveness_index, Some(2.0 / 3.0));
    }

    #[test]
    fn index_undefined_for_two_values() {
        let s = difference_series(&[3.0, 1.0]).unwrap();
        assert_eq!(s.ds, [2.0]);
        assert_eq!(s.regressiveness_index, None);
        assert!(difference_series(&[1.0]).is_err());
        assert!(difference_series(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn report_drops_top_and_rescales() {
        let values = [1000.0, 100.0, 60.0, 40.0, 30.0];
        let all = regressiveness_report(&values, ReportOptions::default()).unwrap();
        assert_eq!(all[0], DifferencePoint { n: 1, ds: 900.0 });
        let trimmed = regressiveness_report(&values, ReportOptions { drop_top: true, rescale: true }).unwrap();
        assert_eq!(trimmed.len(), 3);
        assert_eq!(trimmed[0], DifferencePoint { n: 2, ds: 1.0 });
        assert_eq!(trimmed.iter().map(|p| p.ds).fold(0.0, f64::max), 1.0);
        assert_eq!(trimmed[2].ds, 0.25);
    }

    #[test]
    fn monotone_input_gives_non_negative_gaps() {
        let values: Vec<f64> = (0..50).map(|i| (i as f64).powi(2)).collect();
        let pts = regressiveness_report(&values, ReportOptions::default()).unwrap();
        assert!(pts.iter().all(|p| p.ds >= 0.0));
        // gaps between squares shrink toward the bottom of the ranking
        assert!(pts.windows(2).all(|w| w[0].ds >= w[1].ds));
    }

    proptest! {
        #[test]
        fn permutation_invariant(mut values in prop::collection::vec(0.0..1e3f64, 2..80), seed in any::<u64>()) {
            let before = difference_series(&values).unwrap();
            // deterministic shuffle
            let mut state = seed | 1;
            for i in (1..values.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                values.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let after = difference_series(&values).unwrap();
            prop_assert_eq!(before, after);
        }

        #[test]
        fn gaps_non_negative(values in prop::collection::vec(-1e3..1e3f64, 2..80)) {
            let s = difference_series(&values).unwrap();
            prop_assert_eq!(s.ds.len(), values.len() - 1);
            prop_assert!(s.ds.iter().all(|&d| d >= 0.0));
            if let Some(i) = s.regressiveness_index {
                prop_assert!((0.0..=1.0).contains(&i));
            }
        }
    }
}
