//! ARWU scoring in annual (best-performer) and fixed-gain modes.
//!
//! Every non-composed indicator uses the same chain: zero offset, square-root
//! compression and a gain. In annual mode the gain is implied by scaling the
//! best performer to 10000 before the square root; in fixed mode the gains
//! are frozen in a [`GainSet`] and scores are comparable across years.

use std::collections::HashSet;

use super::gains::GainSet;
use super::indicator::{Indicator, IndicatorScores};
use super::record::{InstitutionClass, InstitutionRecord};
use super::table::{ScoreMode, ScoreRow, ScoreTable};
use crate::error::{ensure_finite, Error, Result};

/// Scaled raw score given to the best performer on each indicator.
pub const SCALED_PEAK: f64 = 10_000.0;

/// Every ARWU indicator is compressed by a square root.
pub const SQRT_POWER: f64 = 0.5;

/// Total-score weights for ALUMNI, AWARD, HICI, S&N, PUB, PCP.
pub const STANDARD_WEIGHTS: [f64; 6] = [0.1, 0.2, 0.2, 0.2, 0.2, 0.1];

/// Social-science weights; the S&N slot is ignored.
pub const SOCSCI_WEIGHTS: [f64; 6] = [0.125, 0.25, 0.25, 0.0, 0.25, 0.125];

pub fn weights(class: InstitutionClass) -> [f64; 6] {
    match class {
        InstitutionClass::Standard => STANDARD_WEIGHTS,
        InstitutionClass::SocialScience => SOCSCI_WEIGHTS,
    }
}

/// Multiplies every value by `10000 / max(values)`.
pub fn scale_to_best(values: &[f64]) -> Result<Vec<f64>> {
    scale_indicator("input", values)
}

fn scale_indicator(name: &str, values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Input(format!("{name}: no values to scale")));
    }
    for &v in values {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Input(format!(
                "{name}: values must be finite and non-negative, got {v}"
            )));
        }
    }
    let best = values.iter().copied().fold(0.0_f64, f64::max);
    if best <= 0.0 {
        return Err(Error::DegenerateIndicator(name.to_string()));
    }
    // Divide first so the best performer lands on exactly 10000.
    Ok(values.iter().map(|v| v / best * SCALED_PEAK).collect())
}

/// Score of a scaled raw value: `100 * sqrt(scaled / 10000)`.
fn compress_scaled(scaled: f64) -> f64 {
    100.0 * (scaled / SCALED_PEAK).sqrt()
}

/// Fixed-gain indicator score `a_i * sqrt(m_i)`, uncapped.
pub fn indicator_score_fixed(record: &InstitutionRecord, gains: &GainSet, indicator: Indicator) -> Result<f64> {
    if indicator == Indicator::Pcp {
        return Err(Error::Input(
            "PCP is derived from the other indicators; use compute_pcp_raw".into(),
        ));
    }
    let m = record.effective_raw(indicator);
    if !m.is_finite() || m < 0.0 {
        return Err(Error::Input(format!(
            "{}: raw {} must be finite and non-negative, got {m}",
            record.id,
            indicator.column()
        )));
    }
    Ok(gains.gain(indicator) * m.sqrt())
}

/// Raw PCP signal `m_6` from the five raw marks and the FTE (or the dummy FTE
/// when the record has none).
///
/// Standard: `(a1² m1 + 2 Σ_{i=2..5} ai² mi) / FTE`.
/// Social science: `(9 a1² m1 + 14 Σ_{i=2..5} ai² mi) / (7 FTE)` with S&N forced to zero.
pub fn compute_pcp_raw(record: &InstitutionRecord, gains: &GainSet) -> Result<f64> {
    let fte = record.fte.unwrap_or(gains.dummy_fte);
    if !fte.is_finite() || fte <= 0.0 {
        return Err(Error::Input(format!("{}: FTE must be positive, got {fte}", record.id)));
    }
    let mut squares = [0.0; 5];
    for ind in Indicator::RAW {
        let m = record.effective_raw(ind);
        if !m.is_finite() || m < 0.0 {
            return Err(Error::Input(format!(
                "{}: raw {} must be finite and non-negative, got {m}",
                record.id,
                ind.column()
            )));
        }
        squares[ind.index()] = gains.gain(ind).powi(2) * m;
    }
    let rest: f64 = squares[1..].iter().sum();
    Ok(match record.class {
        InstitutionClass::Standard => (squares[0] + 2.0 * rest) / fte,
        InstitutionClass::SocialScience => (9.0 * squares[0] + 14.0 * rest) / (7.0 * fte),
    })
}

/// Weighted sum of squared scores: `0.1 ALUMNI² + 0.2 (AWARD² + HICI² + S&N² + PUB²)`.
pub fn compute_ws(indicator_scores: [f64; 5]) -> Result<f64> {
    for s in indicator_scores {
        ensure_finite("indicator score", s)?;
    }
    let [alumni, award, hici, sn, publ] = indicator_scores;
    Ok(0.1 * alumni * alumni + 0.2 * (award * award + hici * hici + sn * sn + publ * publ))
}

/// Class-aware weighted squares: the standard form for standard institutions,
/// and the social-science PCP weighting `(9 s1² + 14 Σ si²) / 70` otherwise.
///
/// In both cases the raw PCP signal equals `10 * WS / FTE`.
pub fn weighted_squares(indicator_scores: [f64; 5], class: InstitutionClass) -> Result<f64> {
    match class {
        InstitutionClass::Standard => compute_ws(indicator_scores),
        InstitutionClass::SocialScience => {
            let mut s = indicator_scores;
            s[Indicator::Sn.index()] = 0.0;
            for v in s {
                ensure_finite("indicator score", v)?;
            }
            let rest: f64 = s[1..].iter().map(|v| v * v).sum();
            Ok((9.0 * s[0] * s[0] + 14.0 * rest) / 70.0)
        }
    }
}

/// Annual PCP score. With a known FTE: `100 sqrt((ws / fte) / cal)`, where
/// `cal` is the best per-capita performer's `WS / FTE`. Without one:
/// `sqrt(ws / k)`.
pub fn pcp_score_annual(ws: f64, fte: Option<f64>, cal: f64, k: f64) -> Result<f64> {
    ensure_finite("ws", ws)?;
    if ws < 0.0 {
        return Err(Error::Input(format!("ws must be non-negative, got {ws}")));
    }
    match fte {
        Some(fte) => {
            if !fte.is_finite() || fte <= 0.0 {
                return Err(Error::Input(format!("FTE must be positive, got {fte}")));
            }
            if !cal.is_finite() || cal <= 0.0 {
                return Err(Error::Input(format!("cal must be positive, got {cal}")));
            }
            Ok(100.0 * ((ws / fte) / cal).sqrt())
        }
        None => {
            if !k.is_finite() || k <= 0.0 {
                return Err(Error::Input(format!("k must be positive, got {k}")));
            }
            Ok((ws / k).sqrt())
        }
    }
}

/// The FTE that makes both PCP branches agree: `10^4 k / cal`.
pub fn recover_dummy_fte(k: f64, cal: f64) -> f64 {
    1e4 * k / cal
}

/// One institution's published PCP with the WS computed from its published
/// indicator scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KObservation {
    pub ws: f64,
    pub pcp: f64,
}

/// Least-squares fit of `PCP² = WS / K` through the origin:
/// `K = Σ WS² / Σ (WS · PCP²)`.
pub fn estimate_k(observations: &[KObservation]) -> Result<f64> {
    if observations.is_empty() {
        return Err(Error::Estimation("no observations to regress K on".into()));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for obs in observations {
        if !obs.ws.is_finite() || !obs.pcp.is_finite() || obs.ws < 0.0 || obs.pcp < 0.0 {
            return Err(Error::Estimation(format!(
                "observations must be finite and non-negative, got ws={}, pcp={}",
                obs.ws, obs.pcp
            )));
        }
        num += obs.ws * obs.ws;
        den += obs.ws * obs.pcp * obs.pcp;
    }
    if den <= 0.0 || num <= 0.0 {
        return Err(Error::Estimation(
            "every observation has zero PCP or zero WS; K is unidentifiable".into(),
        ));
    }
    Ok(num / den)
}

/// Builds K observations from institutions without an FTE that carry
/// published ALUMNI..PUB and PCP scores.
pub fn k_observations(records: &[InstitutionRecord]) -> Result<Vec<KObservation>> {
    let mut out = Vec::new();
    for record in records.iter().filter(|r| r.fte.is_none()) {
        let Some(published) = &record.published else {
            continue;
        };
        let Some(pcp) = published.get(Indicator::Pcp) else {
            continue;
        };
        let mut scores = [0.0; 5];
        let mut complete = true;
        for ind in Indicator::RAW {
            match published.get(ind) {
                Some(v) => scores[ind.index()] = v,
                None if ind == Indicator::Sn && record.class == InstitutionClass::SocialScience => {}
                None => complete = false,
            }
        }
        if complete {
            out.push(KObservation {
                ws: weighted_squares(scores, record.class)?,
                pcp,
            });
        }
    }
    Ok(out)
}

/// Weighted total score. Standard: `(s1 + s6 + 2 Σ_{i=2..5} si) / 10`;
/// social science: `(1.25 s1 + 1.25 s6 + 2.5 Σ si) / 10` with S&N ignored.
pub fn arwu_total(indicator_scores: &IndicatorScores, class: InstitutionClass) -> Result<f64> {
    for s in indicator_scores.0 {
        ensure_finite("indicator score", s)?;
    }
    let w = weights(class);
    Ok(indicator_scores.0.iter().zip(w).map(|(s, w)| s * w).sum())
}

fn check_dataset(records: &[InstitutionRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Input("dataset is empty".into()));
    }
    let mut seen = HashSet::new();
    for record in records {
        record.validate()?;
        if !seen.insert(record.id.as_str()) {
            return Err(Error::Input(format!("duplicate institution id `{}`", record.id)));
        }
    }
    Ok(())
}

/// Annual ARWU scoring: each indicator is scaled to its best performer,
/// square-root compressed, PCP is computed from weighted squares per FTE,
/// and totals are rescaled so the top institution scores 100.
///
/// `k` is required only when some institution has no FTE.
pub fn score_annual(records: &[InstitutionRecord], k: Option<f64>) -> Result<ScoreTable> {
    check_dataset(records)?;
    let mut scores = vec![IndicatorScores::default(); records.len()];
    for ind in Indicator::RAW {
        let raw: Vec<f64> = records.iter().map(|r| r.effective_raw(ind)).collect();
        let scaled = scale_indicator(ind.label(), &raw)?;
        for (row, s) in scores.iter_mut().zip(scaled) {
            row[ind] = compress_scaled(s);
        }
    }

    let ws: Vec<f64> = records
        .iter()
        .zip(&scores)
        .map(|(r, s)| weighted_squares(s.raw_five(), r.class))
        .collect::<Result<_>>()?;

    // Best per-capita performer among institutions with a known FTE.
    let cal = records
        .iter()
        .zip(&ws)
        .filter_map(|(r, ws)| r.fte.map(|fte| ws / fte))
        .reduce(f64::max);
    if cal.is_some_and(|c| c <= 0.0) {
        return Err(Error::DegenerateIndicator(Indicator::Pcp.label().into()));
    }
    if records.iter().any(|r| r.fte.is_none()) && k.is_none() {
        return Err(Error::MissingParameter(
            "k is required to score PCP for institutions without an FTE".into(),
        ));
    }
    let (cal, k) = (cal.unwrap_or(f64::NAN), k.unwrap_or(f64::NAN));
    for ((record, ws), row) in records.iter().zip(&ws).zip(scores.iter_mut()) {
        row[Indicator::Pcp] = pcp_score_annual(*ws, record.fte, cal, k)?;
    }

    let totals: Vec<f64> = records
        .iter()
        .zip(&scores)
        .map(|(r, s)| arwu_total(s, r.class))
        .collect::<Result<_>>()?;
    let top = totals.iter().copied().fold(0.0_f64, f64::max);
    if top <= 0.0 {
        return Err(Error::DegenerateIndicator("TOTAL".into()));
    }

    let rows = records
        .iter()
        .zip(scores)
        .zip(totals)
        .map(|((r, indicator_scores), total)| ScoreRow {
            id: r.id.clone(),
            indicator_scores,
            total: total / top * 100.0,
            rank: 0,
        })
        .collect();
    Ok(ScoreTable::ranked(ScoreMode::Annual, rows))
}

/// Fixed-gain scoring: `s_i = a_i sqrt(m_i)`, PCP `a_6 sqrt(m_6)`, weighted
/// totals without rescaling. Scores above 100 are allowed.
pub fn score_fixed_gain(records: &[InstitutionRecord], gains: &GainSet) -> Result<ScoreTable> {
    check_dataset(records)?;
    gains.validate()?;
    let mut rows = Vec::with_capacity(records.len());
    for record in records {
        let mut s = IndicatorScores::default();
        for ind in Indicator::RAW {
            s[ind] = indicator_score_fixed(record, gains, ind)?;
        }
        s[Indicator::Pcp] = gains.gain(Indicator::Pcp) * compute_pcp_raw(record, gains)?.sqrt();
        rows.push(ScoreRow {
            id: record.id.clone(),
            total: arwu_total(&s, record.class)?,
            indicator_scores: s,
            rank: 0,
        });
    }
    Ok(ScoreTable::ranked(ScoreMode::Fixed, rows))
}

/// Half-width of the rounding interval of a score published to one decimal.
pub const PUBLISHED_HALF_WIDTH: f64 = 0.05;

/// How a published score relates to its raw value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InversionScale {
    /// Annual mode: score `100 sqrt(scaled / 10000)`; inverse gives the scaled raw.
    Scaled10000,
    /// Fixed gain `a`: score `a sqrt(m)`; inverse gives the raw mark.
    RawWithGain(f64),
}

impl InversionScale {
    fn validate(self) -> Result<()> {
        if let InversionScale::RawWithGain(a) = self {
            if !a.is_finite() || a <= 0.0 {
                return Err(Error::Input(format!("gain must be positive, got {a}")));
            }
        }
        Ok(())
    }

    fn inverse(self, score: f64) -> f64 {
        match self {
            InversionScale::Scaled10000 => SCALED_PEAK * (score / 100.0).powi(2),
            InversionScale::RawWithGain(a) => (score / a).powi(2),
        }
    }
}

/// Recovers the raw value behind a published score.
pub fn invert_published(published_score: f64, scale: InversionScale) -> Result<f64> {
    ensure_finite("published score", published_score)?;
    scale.validate()?;
    if published_score < 0.0 {
        return Err(Error::Input(format!(
            "published score must be non-negative, got {published_score}"
        )));
    }
    if scale == InversionScale::Scaled10000 && published_score > 100.0 {
        return Err(Error::Input(format!(
            "scaled scores cannot exceed 100, got {published_score}"
        )));
    }
    Ok(scale.inverse(published_score))
}

/// Forward direction of [`invert_published`].
pub fn score_from_raw(raw: f64, scale: InversionScale) -> Result<f64> {
    ensure_finite("raw value", raw)?;
    scale.validate()?;
    if raw < 0.0 {
        return Err(Error::Input(format!("raw value must be non-negative, got {raw}")));
    }
    Ok(match scale {
        InversionScale::Scaled10000 => compress_scaled(raw),
        InversionScale::RawWithGain(a) => a * raw.sqrt(),
    })
}

/// An inverted raw value with the interval implied by one-decimal rounding
/// of the published score.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct InvertedScore {
    pub raw: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn invert_with_error(published_score: f64, scale: InversionScale) -> Result<InvertedScore> {
    let raw = invert_published(published_score, scale)?;
    Ok(InvertedScore {
        raw,
        lower: scale.inverse((published_score - PUBLISHED_HALF_WIDTH).max(0.0)),
        upper: scale.inverse(published_score + PUBLISHED_HALF_WIDTH),
    })
}
