//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankdyn::analysis::{difference_series, pca_from_correlation};
use rankdyn::arwu::{
    estimate_k, invert_published, pcp_score_annual, recover_dummy_fte, score_annual, score_fixed_gain,
    score_from_raw, GainSet, Indicator, InstitutionClass, InstitutionRecord, InversionScale, KObservation,
};
use rankdyn::io;
use rankdyn::rank::{aggregate_rank_driven, kam_scores, ScoreColumn};
use rankdyn::scoring::{calibrate_gain, transform_mark, Direction, ScoringElement};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(what: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    check((got - want).abs() <= tol, || format!("{what}: got {got}, want {want} ± {tol}"))
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

const PAPER_EIGENVALUES: [f64; 5] = [3.93, 0.64, 0.25, 0.12, 0.06];
const PAPER_LOADINGS: [f64; 5] = [0.892, 0.885, 0.936, 0.957, 0.750];
const PAPER_COMMUNALITIES: [f64; 5] = [0.796, 0.783, 0.876, 0.915, 0.563];
const PAPER_SCORE_COEFFICIENTS: [f64; 5] = [0.23, 0.23, 0.24, 0.24, 0.19];
const PAPER_CI_LOWER: [f64; 5] = [0.19, 0.19, 0.20, 0.21, 0.16];
const PAPER_CI_UPPER: [f64; 5] = [0.26, 0.26, 0.27, 0.28, 0.22];

fn pca_reproduction() -> Outcome {
    let start = Instant::now();
    let matrix = io::read_correlation_matrix(fixture("table1_correlation.csv"), 500).map_err(|e| e.to_string())?;
    let r = pca_from_correlation(&matrix).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for i in 0..5 {
        within(&format!("eigenvalue {}", i + 1), r.eigenvalues[i], PAPER_EIGENVALUES[i], 0.01)?;
        within(&format!("loading {}", r.names[i]), r.loadings[i], PAPER_LOADINGS[i], 0.005)?;
        within(&format!("communality {}", r.names[i]), r.communalities[i], PAPER_COMMUNALITIES[i], 0.005)?;
        within(
            &format!("score coefficient {}", r.names[i]),
            r.score_coefficients[i],
            PAPER_SCORE_COEFFICIENTS[i],
            0.005,
        )?;
        check(round2(r.ci_lower[i]) == PAPER_CI_LOWER[i], || {
            format!("ci lower {}: {} rounds to {}", r.names[i], r.ci_lower[i], round2(r.ci_lower[i]))
        })?;
        check(round2(r.ci_upper[i]) == PAPER_CI_UPPER[i], || {
            format!("ci upper {}: {} rounds to {}", r.names[i], r.ci_upper[i], round2(r.ci_upper[i]))
        })?;
    }
    within("first component %", r.pct_variance[0], 78.65, 0.1)?;
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "λ1 = {:.5}, {:.3}% explained, 10/10 CI bounds, {elapsed:?}",
        r.eigenvalues[0], r.pct_variance[0]
    ))
}

fn kmo_bartlett() -> Outcome {
    let start = Instant::now();
    let matrix = io::read_correlation_matrix(fixture("table1_correlation.csv"), 500).map_err(|e| e.to_string())?;
    let r = pca_from_correlation(&matrix).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let kmo = r.kmo.ok_or("KMO undefined")?;
    let b = r.bartlett.ok_or("Bartlett undefined")?;
    within("KMO", kmo, 0.80, 0.05)?;
    check(b.p < 0.001, || format!("Bartlett p = {}", b.p))?;
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("KMO = {kmo:.4}, chi2 = {:.2} on {} df, p = {:e}", b.chi2, b.df, b.p))
}

fn kam_ties() -> Outcome {
    // zero counts on ALUMNI, AWARD, HICI, SN and the printed scores of the zero block
    let cases = [(295, 5.90), (362, 7.24), (82, 1.64), (10, 0.20)];
    let ids: Vec<String> = (0..500).map(|i| format!("u{i:03}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut got = Vec::new();
    for (zeros, expected) in cases {
        let mut values: Vec<f64> = (0..500).map(|i| if i < zeros { 0.0 } else { rng.random_range(0.1..100.0) }).collect();
        values.shuffle(&mut rng);
        let items: Vec<(&str, f64)> = ids.iter().map(String::as_str).zip(values.iter().copied()).collect();
        let result = kam_scores(&items, 500).map_err(|e| e.to_string())?;
        for (entry, v) in result.entries.iter().zip(&values) {
            if *v == 0.0 {
                check(entry.score == expected, || {
                    format!("{zeros} zeros: zero block scored {}, want exactly {expected}", entry.score)
                })?;
            }
        }
        got.push(format!("{expected:.2}"));
    }
    Ok(format!("zero blocks score {}", got.join("/")))
}

fn inversion_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    for _ in 0..10_000 {
        let s: f64 = rng.random_range(0.0..=100.0);
        let gain: f64 = rng.random_range(0.5..20.0);
        for scale in [InversionScale::Scaled10000, InversionScale::RawWithGain(gain)] {
            let raw = invert_published(s, scale).map_err(|e| e.to_string())?;
            let back = score_from_raw(raw, scale).map_err(|e| e.to_string())?;
            worst = worst.max((back - s).abs());
        }
    }
    check(worst <= 1e-9, || format!("max round-trip error {worst:e}"))?;
    Ok(format!("10^4 scores x 2 scales, max error {worst:e}"))
}

fn pcp_branch_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    for _ in 0..1_000 {
        let ws: f64 = rng.random_range(1e-3..1e4);
        let k: f64 = rng.random_range(0.5..2.0);
        let cal: f64 = rng.random_range(1e-2..1e2);
        let fte = recover_dummy_fte(k, cal);
        let known = pcp_score_annual(ws, Some(fte), cal, k).map_err(|e| e.to_string())?;
        let unknown = pcp_score_annual(ws, None, cal, k).map_err(|e| e.to_string())?;
        worst = worst.max((known - unknown).abs());
    }
    check(worst <= 1e-9, || format!("max branch difference {worst:e}"))?;
    Ok(format!("10^3 triples, max difference {worst:e}"))
}

fn synthetic_dataset(rng: &mut ChaCha8Rng, n: usize) -> Vec<InstitutionRecord> {
    (0..n)
        .map(|i| {
            let class = if rng.random_bool(0.15) {
                InstitutionClass::SocialScience
            } else {
                InstitutionClass::Standard
            };
            let mut raw = [0.0; 5];
            for v in raw.iter_mut() {
                *v = if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..500.0) };
            }
            let fte = rng.random_bool(0.7).then(|| rng.random_range(100.0..5000.0));
            InstitutionRecord::new(format!("i{i:03}"), class, raw, fte)
        })
        .collect()
}

fn mode_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0_f64;
    let datasets = 50;
    for _ in 0..datasets {
        let n = rng.random_range(5..120);
        let records = synthetic_dataset(&mut rng, n);
        // every indicator needs a positive best performer and CAL needs an FTE
        if Indicator::RAW
            .iter()
            .any(|&ind| records.iter().all(|r| r.effective_raw(ind) == 0.0))
            || records.iter().all(|r| r.fte.is_none())
        {
            continue;
        }
        let k = rng.random_range(0.8..1.3);
        let annual = score_annual(&records, Some(k)).map_err(|e| e.to_string())?;
        let gains = GainSet::from_best_performers(&records, Some(k)).map_err(|e| e.to_string())?;
        let fixed = score_fixed_gain(&records, &gains).map_err(|e| e.to_string())?;
        for row in &annual.rows {
            let other = fixed.row(&row.id).ok_or("missing id")?;
            for ind in Indicator::ALL {
                worst = worst.max((row.indicator_scores[ind] - other.indicator_scores[ind]).abs());
            }
        }
        check(annual.ranking() == fixed.ranking(), || "rankings differ".to_string())?;
    }
    check(worst <= 1e-9, || format!("max indicator difference {worst:e}"))?;
    Ok(format!("{datasets} datasets, identical rankings, max difference {worst:e}"))
}

fn k_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut notes = Vec::new();
    for k in [0.94, 1.075] {
        let ws: Vec<f64> = (0..100).map(|_| rng.random_range(10.0..8000.0)).collect();
        let clean: Vec<KObservation> = ws.iter().map(|&ws| KObservation { ws, pcp: (ws / k).sqrt() }).collect();
        let exact = estimate_k(&clean).map_err(|e| e.to_string())?;
        within(&format!("noiseless K={k}"), exact, k, 1e-9)?;
        let noisy: Vec<KObservation> = clean
            .iter()
            .map(|o| KObservation {
                ws: o.ws,
                pcp: o.pcp * (1.0 + rng.random_range(-0.05..0.05)),
            })
            .collect();
        let est = estimate_k(&noisy).map_err(|e| e.to_string())?;
        within(&format!("noisy K={k}"), est, k, 0.02)?;
        notes.push(format!("K={k}: {est:.4}"));
    }
    Ok(format!("noisy estimates {}", notes.join(", ")))
}

fn regressiveness() -> Outcome {
    let geometric: Vec<f64> = (0..30).map(|n| 100.0 * 0.8_f64.powi(n)).collect();
    let gaps: Vec<f64> = geometric.windows(2).map(|w| w[0] - w[1]).collect();
    // same gaps in reverse order, accumulated from the bottom
    let mut reversed = vec![0.0];
    for g in &gaps {
        reversed.push(reversed.last().unwrap() + g);
    }
    let g = difference_series(&geometric).map_err(|e| e.to_string())?;
    let r = difference_series(&reversed).map_err(|e| e.to_string())?;
    let gi = g.regressiveness_index.ok_or("geometric index undefined")?;
    let ri = r.regressiveness_index.ok_or("reversed index undefined")?;
    check(gi == 1.0, || format!("geometric index {gi}"))?;
    check(ri <= 0.5, || format!("reversed index {ri}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let mut shuffled = geometric.clone();
        shuffled.shuffle(&mut rng);
        let s = difference_series(&shuffled).map_err(|e| e.to_string())?;
        check(s == g, || "permutation changed the series".to_string())?;
    }
    Ok(format!("geometric {gi}, reversed {ri}, 100 permutations invariant"))
}

fn scoring_contracts() -> Outcome {
    let sprint = ScoringElement::new(Direction::Descending, 18.0, 1.81, 25.4347).map_err(|e| e.to_string())?;
    let slow = transform_mark(&sprint, 19.0).map_err(|e| e.to_string())?;
    check(slow == 0.0, || format!("19 s scored {slow}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0_f64;
    for bp in [31.2915, 1.0, 10_000.0, 0.37, 4821.5] {
        for power in [0.5, 1.4, 1.81] {
            let gain = calibrate_gain(bp, power, 100.0).map_err(|e| e.to_string())?;
            let el = ScoringElement::new(Direction::Ascending, 0.0, power, gain).map_err(|e| e.to_string())?;
            worst = worst.max((transform_mark(&el, bp).map_err(|e| e.to_string())? - 100.0).abs());
        }
    }
    check(worst <= 1e-12, || format!("calibrated BP off by {worst:e}"))?;

    let elements = [
        sprint,
        ScoringElement::new(Direction::Ascending, 220.0, 1.4, 0.14354).unwrap(),
        ScoringElement::new(Direction::Ascending, 1.5, 1.05, 51.39).unwrap(),
        ScoringElement::new(Direction::Ascending, 0.0, 0.5, 17.875).unwrap(),
    ];
    for el in &elements {
        let (lo, hi) = match el.direction {
            Direction::Descending => (el.offset - 10.0, el.offset + 5.0),
            Direction::Ascending => (0.0, el.offset + 1000.0),
        };
        for _ in 0..10_000 {
            let a: f64 = rng.random_range(lo..hi);
            let b: f64 = rng.random_range(lo..hi);
            let (better, worse) = match (el.direction, a >= b) {
                (Direction::Ascending, true) | (Direction::Descending, false) => (a, b),
                _ => (b, a),
            };
            let sb = transform_mark(el, better).map_err(|e| e.to_string())?;
            let sw = transform_mark(el, worse).map_err(|e| e.to_string())?;
            check(sb >= sw, || format!("{better} scored {sb} < {worse} scored {sw}"))?;
        }
    }
    Ok(format!("BP maps to 100 within {worst:e}; 4 elements x 10^4 pairs monotone"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_rankdyn");
    let f = |name: &str| fixture(name).display().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["score".into(), "--mode".into(), "fixed".into(), "--data".into(), f("institutions.csv"), "--gains".into(), f("gains.json"), "--bands".into()],
        vec!["score".into(), "--mode".into(), "annual".into(), "--data".into(), f("institutions.csv"), "--published".into(), f("published.csv")],
        vec!["invert".into(), "--published".into(), f("published.csv")],
        vec!["rank-driven".into(), "--data".into(), f("institutions.csv"), "--method".into(), "kam".into(), "--pcp".into(), "kam".into(), "--k".into(), "1.075".into()],
        vec!["rank-driven".into(), "--data".into(), f("institutions.csv"), "--method".into(), "kam-remodeled".into(), "--pcp".into(), "none".into()],
        vec!["compare".into(), "--a".into(), f("ranking_a.csv"), "--b".into(), f("ranking_b.csv"), "--scope".into(), "2-4".into()],
        vec!["analyze-pca".into(), "--matrix".into(), f("table1_correlation.csv"), "--n".into(), "500".into()],
        vec!["analyze-pca".into(), "--data".into(), f("institutions.csv")],
        vec!["analyze-regressiveness".into(), "--data".into(), f("institutions.csv"), "--indicator".into(), "pub".into(), "--drop-top".into()],
        vec!["event-set".into(), "--config".into(), f("event_set.json"), "--marks".into(), f("event_marks.csv")],
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = 0;
    for args in &commands {
        for format in ["csv", "json"] {
            let mut outputs = Vec::new();
            for i in 0..3 {
                let out_path = dir.path().join(format!("out{i}"));
                let status = Command::new(bin)
                    .args(args)
                    .args(["--format", format, "--out"])
                    .arg(&out_path)
                    .output()
                    .map_err(|e| e.to_string())?;
                check(status.status.success(), || {
                    format!("`{}` failed: {}", args[0], String::from_utf8_lossy(&status.stderr))
                })?;
                outputs.push(std::fs::read(&out_path).map_err(|e| e.to_string())?);
                runs += 1;
            }
            check(outputs.windows(2).all(|w| w[0] == w[1]), || {
                format!("`{} --format {format}` output differs between runs", args.join(" "))
            })?;
        }
    }
    Ok(format!("{} invocations x 2 formats x 3 runs ({runs} total) byte-identical", commands.len()))
}

fn arrow_witness() -> Outcome {
    let weights = [0.6, 0.4];
    let order = |rows: &[(String, Vec<f64>)]| -> Result<Vec<String>, String> {
        let columns: Vec<ScoreColumn> = (0..2)
            .map(|j| {
                let items: Vec<(&str, f64)> = rows.iter().map(|(id, v)| (id.as_str(), v[j])).collect();
                kam_scores(&items, rows.len()).map(|r| r.to_column())
            })
            .collect::<rankdyn::Result<_>>()
            .map_err(|e| e.to_string())?;
        let ranked = aggregate_rank_driven(&columns, &weights).map_err(|e| e.to_string())?;
        Ok(ranked.into_iter().map(|e| e.id).collect())
    };
    let mut rows = io::read_marks(fixture("arrow_witness.csv")).map_err(|e| e.to_string())?;
    let before = order(&rows)?;
    rows.extend(io::read_marks(fixture("arrow_witness_insert.csv")).map_err(|e| e.to_string())?);
    let after = order(&rows)?;
    let pos = |v: &[String], id: &str| v.iter().position(|x| x == id).unwrap();
    let flipped = (pos(&before, "A") < pos(&before, "B")) != (pos(&after, "A") < pos(&after, "B"));
    check(flipped, || format!("no reversal: before {before:?}, after {after:?}"))?;
    Ok(format!("{} -> {} after inserting D", before.join(">"), after.join(">")))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("PCA reproduction", pca_reproduction),
        ("KMO/Bartlett", kmo_bartlett),
        ("KAM tie semantics", kam_ties),
        ("Inversion round trip", inversion_round_trip),
        ("PCP branch consistency", pcp_branch_consistency),
        ("Mode equivalence", mode_equivalence),
        ("K recovery", k_recovery),
        ("Regressiveness diagnostics", regressiveness),
        ("Scoring-element contracts", scoring_contracts),
        ("Determinism", determinism),
        ("Arrow sensitivity witness", arrow_witness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
