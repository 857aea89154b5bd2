use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rankdyn", version, about = "Score-driven and rank-driven ranking tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score institutions in annual (best-performer) or fixed-gain mode.
    Score(ScoreArgs),
    /// Recover raw values, with error bars, from published one-decimal scores.
    Invert(InvertArgs),
    /// Rank institutions with KAM or remodeled-KAM normalization.
    RankDriven(RankDrivenArgs),
    /// Rank shifts between two rankings.
    Compare(CompareArgs),
    /// One-component PCA with KMO and Bartlett diagnostics.
    AnalyzePca(PcaArgs),
    /// Adjacent-rank difference function of one indicator.
    AnalyzeRegressiveness(RegressivenessArgs),
    /// Totals for a combined event defined by scoring elements.
    EventSet(EventSetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; written atomically. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Annual,
    Fixed,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Institution CSV: id,name,class,alumni,award,hici,ns,pub,fte
    #[arg(long)]
    pub data: PathBuf,
    /// Gain set JSON (fixed mode); the published default gains are used when omitted.
    #[arg(long)]
    pub gains: Option<PathBuf>,
    /// PCP parameter K for institutions without an FTE (annual mode).
    #[arg(long)]
    pub k: Option<f64>,
    /// Published scores used to estimate K when --k is not given (annual mode).
    #[arg(long)]
    pub published: Option<PathBuf>,
    /// Add band labels for ranks 101-500, optionally with a band width.
    #[arg(long, num_args = 0..=1, default_missing_value = "50", value_parser = clap::value_parser!(u64).range(1..))]
    pub bands: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Published-score CSV: id,alumni,award,hici,ns,pub,pcp,total
    #[arg(long)]
    pub published: PathBuf,
    /// Invert against fixed gains instead of the 0-100 best-performer scale.
    #[arg(long)]
    pub gains: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Kam,
    KamRemodeled,
}

/// How the per-capita indicator enters a rank-driven table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PcpHandling {
    /// KAM-normalize the per-capita score like the other indicators.
    Kam,
    /// Use the annual PCP score divided by 10, unnormalized.
    Score,
    /// Leave PCP out.
    None,
}

#[derive(Debug, Args)]
pub struct RankDrivenArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// KAM population; defaults to 500. Not valid with kam-remodeled.
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long, value_enum)]
    pub pcp: PcpHandling,
    /// PCP parameter K for institutions without an FTE.
    #[arg(long)]
    pub k: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Ranking CSV with id and rank columns.
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Restrict statistics to ranks LO-HI in ranking a.
    #[arg(long, value_parser = parse_scope)]
    pub scope: Option<RangeInclusive<usize>>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PcaArgs {
    /// Correlation matrix CSV.
    #[arg(long, conflicts_with = "data", requires = "n")]
    pub matrix: Option<PathBuf>,
    /// Sample size behind the matrix.
    #[arg(long, conflicts_with = "data")]
    pub n: Option<usize>,
    /// Institution CSV; correlations are computed from the five raw indicators.
    #[arg(long, required_unless_present = "matrix")]
    pub data: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RawIndicator {
    Alumni,
    Award,
    Hici,
    Ns,
    Pub,
}

#[derive(Debug, Args)]
pub struct RegressivenessArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub indicator: RawIndicator,
    /// Drop the gap below the top institution.
    #[arg(long)]
    pub drop_top: bool,
    /// Divide the gaps by the largest one.
    #[arg(long)]
    pub rescale: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EventSetArgs {
    /// Event-set JSON: {"rounding": "none"|"nearest", "elements": [...]}
    #[arg(long)]
    pub config: PathBuf,
    /// Marks CSV: id followed by one column per element.
    #[arg(long)]
    pub marks: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

fn parse_scope(text: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = text
        .split_once('-')
        .ok_or_else(|| format!("expected LO-HI, got `{text}`"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad lower rank `{lo}`"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad upper rank `{hi}`"))?;
    if lo == 0 || lo > hi {
        return Err(format!("scope {lo}-{hi} is empty or starts below rank 1"));
    }
    Ok(lo..=hi)
}
