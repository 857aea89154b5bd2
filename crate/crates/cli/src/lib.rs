//! Command-line front end for `rankdyn`. [`run`] dispatches a parsed
//! [`Cli`] to the library and writes the result.

pub mod args;
mod output;

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use rankdyn::analysis::{self, ReportOptions};
use rankdyn::arwu::{
    self, band_label, GainSet, Indicator, InstitutionRecord, InversionScale, STANDARD_WEIGHTS,
};
use rankdyn::io;
use rankdyn::rank::{self, ScoreColumn, DEFAULT_KAM_POPULATION};
use rankdyn::scoring::EventSet;

pub use args::Cli;
use args::{
    Command, CompareArgs, EventSetArgs, InvertArgs, Method, Mode, PcaArgs, PcpHandling,
    RankDrivenArgs, RawIndicator, RegressivenessArgs, ScoreArgs,
};
use output::Emit;

#[derive(Debug, Error)]
pub enum CliError {
    /// Flags that cannot be used together or are missing a companion.
    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Core {
        context: &'static str,
        #[source]
        source: rankdyn::Error,
    },

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// 1 for invalid input, 2 for a computation that could not proceed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core { source, .. } if source.is_validation() => 1,
            CliError::Core { .. } => 2,
            CliError::Output(_) => 2,
        }
    }
}

trait Context<T> {
    fn ctx(self, context: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for rankdyn::Result<T> {
    fn ctx(self, context: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { context, source })
    }
}

/// Runs one subcommand. Diagnostics meant for a human (estimated K,
/// comparison summaries) go to stderr; results go to `--out` or stdout.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Score(a) => score(a),
        Command::Invert(a) => invert(a),
        Command::RankDriven(a) => rank_driven(a),
        Command::Compare(a) => compare(a),
        Command::AnalyzePca(a) => analyze_pca(a),
        Command::AnalyzeRegressiveness(a) => analyze_regressiveness(a),
        Command::EventSet(a) => event_set(a),
    }
}

fn ingest(path: &std::path::Path) -> Result<Vec<InstitutionRecord>, CliError> {
    io::ingest_dataset(path).ctx("cli-io::ingest_dataset")
}

fn load_gains(path: &std::path::Path) -> Result<GainSet, CliError> {
    GainSet::from_json_file(path).ctx("arwu-engine::load_gains")
}

fn score(a: ScoreArgs) -> Result<(), CliError> {
    let mut records = ingest(&a.data)?;
    let mut k_used = None;
    let table = match a.mode {
        Mode::Annual => {
            if a.gains.is_some() {
                return Err(CliError::Usage(
                    "--gains cannot be combined with --mode annual; annual gains come from the best performers".into(),
                ));
            }
            let mut k = a.k;
            if let Some(path) = &a.published {
                let published = io::read_published(path).ctx("cli-io::read_published")?;
                io::attach_published(&mut records, &published);
                if k.is_none() && records.iter().any(|r| r.fte.is_none()) {
                    let obs = arwu::k_observations(&records).ctx("arwu-engine::k_observations")?;
                    let estimate = arwu::estimate_k(&obs).ctx("arwu-engine::estimate_k")?;
                    eprintln!("estimated K = {estimate} from {} institutions", obs.len());
                    k = Some(estimate);
                }
            }
            k_used = k;
            arwu::score_annual(&records, k).ctx("arwu-engine::score_annual")?
        }
        Mode::Fixed => {
            if a.k.is_some() || a.published.is_some() {
                return Err(CliError::Usage(
                    "--k and --published apply only to --mode annual, not --mode fixed; set dummy_fte in the --gains file instead".into(),
                ));
            }
            let gains = match &a.gains {
                Some(path) => load_gains(path)?,
                None => GainSet::default(),
            };
            arwu::score_fixed_gain(&records, &gains).ctx("arwu-engine::score_fixed_gain")?
        }
    };
    let bands = a.bands.map(|b| b as usize);
    Emit::new(&a.output)
        .csv(|| io::score_table_csv(&table, bands))
        .json(|| {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut m = Map::new();
                    m.insert("id".into(), json!(row.id));
                    for ind in Indicator::ALL {
                        m.insert(ind.column().into(), json!(row.indicator_scores[ind]));
                    }
                    m.insert("total".into(), json!(row.total));
                    m.insert("rank".into(), json!(row.rank));
                    if let Some(width) = bands {
                        m.insert("band".into(), json!(band_label(row.rank, width)));
                    }
                    Value::Object(m)
                })
                .collect();
            json!({ "mode": table.mode, "k": k_used, "rows": rows })
        })
        .write()
}

fn invert(a: InvertArgs) -> Result<(), CliError> {
    let published = io::read_published(&a.published).ctx("cli-io::read_published")?;
    let gains = a.gains.as_deref().map(load_gains).transpose()?;
    let scale = |ind: Indicator| match &gains {
        Some(g) => InversionScale::RawWithGain(g.gain(ind)),
        None => InversionScale::Scaled10000,
    };
    let mut rows: Vec<io::InvertedRow> = Vec::with_capacity(published.len());
    for (id, scores) in &published {
        let cells = Indicator::ALL
            .into_iter()
            .map(|ind| {
                scores
                    .get(ind)
                    .map(|s| arwu::invert_with_error(s, scale(ind)))
                    .transpose()
                    .map(|inv| (ind, inv))
            })
            .collect::<rankdyn::Result<Vec<_>>>()
            .ctx("arwu-engine::invert_published")?;
        rows.push((id.clone(), cells));
    }
    Emit::new(&a.output)
        .csv(|| io::inverted_csv(&rows))
        .json(|| {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(id, cells)| {
                    let mut m = Map::new();
                    m.insert("id".into(), json!(id));
                    for (ind, inv) in cells {
                        m.insert(ind.column().into(), json!(inv));
                    }
                    Value::Object(m)
                })
                .collect();
            json!({ "scale": if gains.is_some() { "raw_with_gain" } else { "scaled_10000" }, "rows": rows })
        })
        .write()
}

fn rank_driven(a: RankDrivenArgs) -> Result<(), CliError> {
    let population = match (a.method, a.population) {
        (Method::KamRemodeled, Some(_)) => {
            return Err(CliError::Usage(
                "--population cannot be combined with --method kam-remodeled, which uses the nonzero count".into(),
            ))
        }
        (Method::Kam, p) => Some(p.unwrap_or(DEFAULT_KAM_POPULATION)),
        (Method::KamRemodeled, None) => None,
    };
    if a.pcp == PcpHandling::None && a.k.is_some() {
        return Err(CliError::Usage("--k has no effect with --pcp none".into()));
    }
    let records = ingest(&a.data)?;
    let normalize = |items: &[(&str, f64)]| match population {
        Some(p) => rank::kam_scores(items, p),
        None => rank::kam_remodeled(items),
    };

    let mut columns: Vec<ScoreColumn> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for ind in Indicator::RAW {
        let items: Vec<(&str, f64)> = records.iter().map(|r| (r.id.as_str(), r.effective_raw(ind))).collect();
        columns.push(normalize(&items).ctx("rank-aggregation::kam_scores")?.to_column());
        weights.push(STANDARD_WEIGHTS[ind.index()]);
    }
    if a.pcp != PcpHandling::None {
        let table = arwu::score_annual(&records, a.k).ctx("arwu-engine::score_annual")?;
        let items: Vec<(&str, f64)> = table
            .rows
            .iter()
            .map(|r| (r.id.as_str(), r.indicator_scores[Indicator::Pcp]))
            .collect();
        let column = match a.pcp {
            PcpHandling::Kam => normalize(&items).ctx("rank-aggregation::kam_scores")?.to_column(),
            _ => items.iter().map(|(id, s)| (id.to_string(), s / 10.0)).collect(),
        };
        columns.push(column);
        weights.push(STANDARD_WEIGHTS[Indicator::Pcp.index()]);
    }
    let ranked = rank::aggregate_rank_driven(&columns, &weights).ctx("rank-aggregation::aggregate_rank_driven")?;
    let method = match a.method {
        Method::Kam => "kam",
        Method::KamRemodeled => "kam-remodeled",
    };
    Emit::new(&a.output)
        .csv(|| io::ranked_csv(&ranked))
        .json(|| json!({ "method": method, "population": population, "entries": ranked }))
        .write()
}

fn compare(a: CompareArgs) -> Result<(), CliError> {
    let ra = io::read_ranking(&a.a).ctx("cli-io::read_ranking")?;
    let rb = io::read_ranking(&a.b).ctx("cli-io::read_ranking")?;
    let cmp = rank::compare_rankings(&ra, &rb, a.scope).ctx("rank-aggregation::compare_rankings")?;
    eprintln!(
        "{} institutions compared, mean |shift| = {}, max |shift| = {}",
        cmp.shifts.len(),
        io::fmt_sig6(cmp.mean_abs_shift),
        cmp.max_abs_shift
    );
    Emit::new(&a.output)
        .csv(|| io::comparison_csv(&cmp))
        .json(|| json!(cmp))
        .write()
}

fn analyze_pca(a: PcaArgs) -> Result<(), CliError> {
    let matrix = match (&a.matrix, a.n, &a.data) {
        (Some(path), Some(n), None) => io::read_correlation_matrix(path, n).ctx("cli-io::read_correlation_matrix")?,
        (None, None, Some(path)) => {
            let records = ingest(path)?;
            let columns: Vec<(String, Vec<f64>)> = Indicator::RAW
                .into_iter()
                .map(|ind| (ind.label().to_string(), records.iter().map(|r| r.effective_raw(ind)).collect()))
                .collect();
            analysis::correlation_matrix(&columns).ctx("indicator-analysis::correlation_matrix")?
        }
        _ => return Err(CliError::Usage("give either --matrix with --n, or --data".into())),
    };
    let report = analysis::pca_from_correlation(&matrix).ctx("indicator-analysis::pca_from_correlation")?;
    Emit::new(&a.output)
        .csv(|| io::pca_csv(&report))
        .json(|| json!(report))
        .write()
}

fn raw_indicator(r: RawIndicator) -> Indicator {
    match r {
        RawIndicator::Alumni => Indicator::Alumni,
        RawIndicator::Award => Indicator::Award,
        RawIndicator::Hici => Indicator::Hici,
        RawIndicator::Ns => Indicator::Sn,
        RawIndicator::Pub => Indicator::Pub,
    }
}

fn analyze_regressiveness(a: RegressivenessArgs) -> Result<(), CliError> {
    let records = ingest(&a.data)?;
    let ind = raw_indicator(a.indicator);
    let values: Vec<f64> = records.iter().map(|r| r.effective_raw(ind)).collect();
    let series = analysis::difference_series(&values).ctx("indicator-analysis::difference_series")?;
    let options = ReportOptions {
        drop_top: a.drop_top,
        rescale: a.rescale,
    };
    let points =
        analysis::regressiveness_report(&values, options).ctx("indicator-analysis::regressiveness_report")?;
    Emit::new(&a.output)
        .csv(|| io::difference_csv(&points))
        .json(|| {
            json!({
                "indicator": ind.column(),
                "regressiveness_index": series.regressiveness_index,
                "points": points,
            })
        })
        .write()
}

#[derive(Serialize)]
struct EventRow<'a> {
    id: &'a str,
    scores: &'a [f64],
    total: f64,
}

fn event_set(a: EventSetArgs) -> Result<(), CliError> {
    let set = EventSet::from_json_file(&a.config).ctx("scoring-pipeline::load_event_set")?;
    let marks = io::read_marks(&a.marks).ctx("cli-io::read_marks")?;
    let mut rows = Vec::with_capacity(marks.len());
    for (id, m) in marks {
        let scores = set.element_scores(&m).ctx("scoring-pipeline::score_event_set")?;
        let total = scores.iter().sum();
        rows.push((id, scores, total));
    }
    Emit::new(&a.output)
        .csv(|| io::event_totals_csv(&rows))
        .json(|| {
            let out: Vec<EventRow> = rows
                .iter()
                .map(|(id, scores, total)| EventRow { id, scores, total: *total })
                .collect();
            json!(out)
        })
        .write()
}
