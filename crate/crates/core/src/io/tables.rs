//! Readers and writers for the smaller tabular formats: correlation
//! matrices, rankings and event marks, plus CSV emitters for every result type.

use std::io::Read;
use std::path::Path;

use super::dataset::{line_of, Columns};
use super::format::fmt_sig6;
use crate::analysis::{CorrelationMatrix, DifferencePoint, PcaReport};
use crate::arwu::{band_label, Indicator, InvertedScore, ScoreTable};
use crate::error::{Error, Result};
use crate::rank::{RankComparison, RankedEntry};

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Square correlation matrix whose header names the variables. A leading
/// label column (empty header or one that is not a variable name) is skipped.
pub fn read_correlation_matrix(path: impl AsRef<Path>, n_samples: usize) -> Result<CorrelationMatrix> {
    let path = path.as_ref();
    parse_correlation_matrix(&path.display().to_string(), std::fs::File::open(path)?, n_samples)
}

pub fn parse_correlation_matrix<R: Read>(source: &str, input: R, n_samples: usize) -> Result<CorrelationMatrix> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    let mut names: Vec<String> = headers.iter().map(|h| h.trim().to_string()).collect();
    let rows: Vec<csv::StringRecord> = rdr.records().collect::<std::result::Result<_, _>>()?;
    // a label column makes the header one wider than the number of rows
    let skip = usize::from(names.len() == rows.len() + 1);
    names.drain(..skip);
    let cols = Columns::new(source, &headers, &[])?;
    let mut entries = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = line_of(row, i + 2);
        if row.len() != names.len() + skip {
            return Err(cols.error(line, "", format!("expected {} cells, got {}", names.len() + skip, row.len())));
        }
        let values = row
            .iter()
            .skip(skip)
            .zip(&names)
            .map(|(cell, name)| {
                cell.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| cols.error(line, name, format!("`{cell}` is not a finite number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        entries.push(values);
    }
    CorrelationMatrix::new(names, entries, n_samples)
}

pub fn correlation_matrix_csv(matrix: &CorrelationMatrix) -> Result<String> {
    let mut w = writer();
    w.write_record(&matrix.names)?;
    for row in &matrix.entries {
        w.write_record(row.iter().map(|v| fmt_sig6(*v)))?;
    }
    finish(w)
}

/// `(id, rank)` pairs from any CSV with `id` and `rank` columns.
pub fn read_ranking(path: impl AsRef<Path>) -> Result<Vec<(String, usize)>> {
    let path = path.as_ref();
    parse_ranking(&path.display().to_string(), std::fs::File::open(path)?)
}

pub fn parse_ranking<R: Read>(source: &str, input: R) -> Result<Vec<(String, usize)>> {
    let mut rdr = reader(input);
    let cols = Columns::new(source, rdr.headers()?, &["id", "rank"])?;
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = line_of(&row, i + 2);
        let id = cols.cell(&row, "id");
        if id.is_empty() {
            return Err(cols.error(line, "id", "id is empty"));
        }
        let rank_text = cols.cell(&row, "rank");
        let rank = rank_text
            .parse::<usize>()
            .ok()
            .filter(|&r| r >= 1)
            .ok_or_else(|| cols.error(line, "rank", format!("`{rank_text}` is not a rank >= 1")))?;
        out.push((id.to_string(), rank));
    }
    Ok(out)
}

/// Marks for an event set: an `id` column followed by one column per element.
pub fn read_marks(path: impl AsRef<Path>) -> Result<Vec<(String, Vec<f64>)>> {
    let path = path.as_ref();
    parse_marks(&path.display().to_string(), std::fs::File::open(path)?)
}

pub fn parse_marks<R: Read>(source: &str, input: R) -> Result<Vec<(String, Vec<f64>)>> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    let cols = Columns::new(source, &headers, &["id"])?;
    let mark_columns: Vec<String> = headers
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .filter(|h| h != "id")
        .collect();
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = line_of(&row, i + 2);
        let id = cols.cell(&row, "id");
        if id.is_empty() {
            return Err(cols.error(line, "id", "id is empty"));
        }
        let marks = mark_columns
            .iter()
            .map(|c| cols.number(&row, line, c))
            .collect::<Result<Vec<f64>>>()?;
        out.push((id.to_string(), marks));
    }
    Ok(out)
}

/// `id,alumni,...,pcp,total,rank[,band]`.
pub fn score_table_csv(table: &ScoreTable, band_width: Option<usize>) -> Result<String> {
    let mut w = writer();
    let mut header: Vec<&str> = vec!["id"];
    header.extend(Indicator::ALL.iter().map(|i| i.column()));
    header.extend(["total", "rank"]);
    if band_width.is_some() {
        header.push("band");
    }
    w.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![row.id.clone()];
        rec.extend(row.indicator_scores.0.iter().map(|v| fmt_sig6(*v)));
        rec.push(fmt_sig6(row.total));
        rec.push(row.rank.to_string());
        if let Some(width) = band_width {
            rec.push(band_label(row.rank, width).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    finish(w)
}

pub fn ranked_csv(entries: &[RankedEntry]) -> Result<String> {
    let mut w = writer();
    w.write_record(["id", "score", "rank"])?;
    for e in entries {
        w.write_record([e.id.clone(), fmt_sig6(e.score), e.rank.to_string()])?;
    }
    finish(w)
}

pub fn comparison_csv(comparison: &RankComparison) -> Result<String> {
    let mut w = writer();
    w.write_record(["id", "rank_a", "rank_b", "shift"])?;
    for s in &comparison.shifts {
        w.write_record([s.id.clone(), s.rank_a.to_string(), s.rank_b.to_string(), s.shift.to_string()])?;
    }
    finish(w)
}

/// `component,eigenvalue,pct,cum_pct`.
pub fn variance_csv(report: &PcaReport) -> Result<String> {
    let mut w = writer();
    w.write_record(["component", "eigenvalue", "pct", "cum_pct"])?;
    for (k, ((l, p), c)) in report
        .eigenvalues
        .iter()
        .zip(&report.pct_variance)
        .zip(&report.cumulative_pct)
        .enumerate()
    {
        w.write_record([(k + 1).to_string(), fmt_sig6(*l), fmt_sig6(*p), fmt_sig6(*c)])?;
    }
    finish(w)
}

/// Three blank-line separated blocks: per-variable loadings, the variance
/// table, and `statistic,value` rows for KMO and Bartlett.
pub fn pca_csv(report: &PcaReport) -> Result<String> {
    let mut w = writer();
    w.write_record([
        "variable",
        "loading",
        "communality",
        "score_coefficient",
        "ci_lower",
        "ci_upper",
    ])?;
    for (i, name) in report.names.iter().enumerate() {
        w.write_record([
            name.clone(),
            fmt_sig6(report.loadings[i]),
            fmt_sig6(report.communalities[i]),
            fmt_sig6(report.score_coefficients[i]),
            fmt_sig6(report.ci_lower[i]),
            fmt_sig6(report.ci_upper[i]),
        ])?;
    }
    let mut out = finish(w)?;
    out.push('\n');
    out.push_str(&variance_csv(report)?);
    out.push('\n');
    let mut w = writer();
    w.write_record(["statistic", "value"])?;
    let opt = |v: Option<f64>| v.map(fmt_sig6).unwrap_or_default();
    w.write_record(["n".to_string(), report.n_samples.to_string()])?;
    w.write_record(["kmo".to_string(), opt(report.kmo)])?;
    w.write_record(["bartlett_chi2".to_string(), opt(report.bartlett.map(|b| b.chi2))])?;
    w.write_record(["bartlett_df".to_string(), report.bartlett.map(|b| b.df.to_string()).unwrap_or_default()])?;
    w.write_record(["bartlett_p".to_string(), opt(report.bartlett.map(|b| b.p))])?;
    out.push_str(&finish(w)?);
    Ok(out)
}

/// `n,ds`.
pub fn difference_csv(points: &[DifferencePoint]) -> Result<String> {
    let mut w = writer();
    w.write_record(["n", "ds"])?;
    for p in points {
        w.write_record([p.n.to_string(), fmt_sig6(p.ds)])?;
    }
    finish(w)
}

/// One inverted row: id plus optional inversions for each indicator.
pub type InvertedRow = (String, Vec<(Indicator, Option<InvertedScore>)>);

/// `id,<ind>_raw,<ind>_lo,<ind>_hi,...`; missing published cells stay empty.
pub fn inverted_csv(rows: &[InvertedRow]) -> Result<String> {
    let mut w = writer();
    let indicators: Vec<Indicator> = rows
        .first()
        .map(|(_, cells)| cells.iter().map(|(i, _)| *i).collect())
        .unwrap_or_default();
    let mut header = vec!["id".to_string()];
    for ind in &indicators {
        for suffix in ["raw", "lo", "hi"] {
            header.push(format!("{}_{suffix}", ind.column()));
        }
    }
    w.write_record(&header)?;
    for (id, cells) in rows {
        let mut rec = vec![id.clone()];
        for (_, inv) in cells {
            match inv {
                Some(v) => rec.extend([fmt_sig6(v.raw), fmt_sig6(v.lower), fmt_sig6(v.upper)]),
                None => rec.extend([String::new(), String::new(), String::new()]),
            }
        }
        w.write_record(&rec)?;
    }
    finish(w)
}

/// `id,s1..sk,total` for an event set.
pub fn event_totals_csv(rows: &[(String, Vec<f64>, f64)]) -> Result<String> {
    let mut w = writer();
    let k = rows.first().map_or(0, |(_, s, _)| s.len());
    let mut header = vec!["id".to_string()];
    header.extend((1..=k).map(|i| format!("s{i}")));
    header.push("total".into());
    w.write_record(&header)?;
    for (id, scores, total) in rows {
        let mut rec = vec![id.clone()];
        rec.extend(scores.iter().map(|v| fmt_sig6(*v)));
        rec.push(fmt_sig6(*total));
        w.write_record(&rec)?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_with_and_without_label_column() {
        let plain = "a,b\n1,0.5\n0.5,1\n";
        let labelled = ",a,b\na,1,0.5\nb,0.5,1\n";
        let m1 = parse_correlation_matrix("m", plain.as_bytes(), 40).unwrap();
        let m2 = parse_correlation_matrix("m", labelled.as_bytes(), 40).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1.names, ["a", "b"]);
        let text = correlation_matrix_csv(&m1).unwrap();
        assert_eq!(parse_correlation_matrix("m", text.as_bytes(), 40).unwrap(), m1);
    }

    #[test]
    fn matrix_rejects_bad_cell() {
        let err = parse_correlation_matrix("m", "a,b\n1,x\n0.5,1\n".as_bytes(), 10).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn ranking_requires_positive_ranks() {
        assert_eq!(
            parse_ranking("r", "id,score,rank\na,3,1\nb,2,2\n".as_bytes()).unwrap(),
            [("a".to_string(), 1), ("b".to_string(), 2)]
        );
        assert!(parse_ranking("r", "id,rank\na,0\n".as_bytes()).is_err());
        assert!(parse_ranking("r", "id\na\n".as_bytes()).is_err());
    }

    #[test]
    fn marks_follow_header_order() {
        let m = parse_marks("m", "id,m100,lj\nx,10.5,7.2\n".as_bytes()).unwrap();
        assert_eq!(m, [("x".to_string(), vec![10.5, 7.2])]);
    }
}
