use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use csv::StringRecord;

use crate::arwu::{Indicator, InstitutionClass, InstitutionRecord, PublishedScores, RawMarks};
use crate::error::{Error, Result};

pub const DATASET_COLUMNS: [&str; 9] = ["id", "name", "class", "alumni", "award", "hici", "ns", "pub", "fte"];
pub const PUBLISHED_COLUMNS: [&str; 8] = ["id", "alumni", "award", "hici", "ns", "pub", "pcp", "total"];

/// Column lookup for a CSV with a header row.
pub(crate) struct Columns {
    source: String,
    index: HashMap<String, usize>,
}

impl Columns {
    pub(crate) fn new(source: &str, headers: &StringRecord, required: &[&str]) -> Result<Self> {
        let index: HashMap<String, usize> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim().to_ascii_lowercase(), i))
            .collect();
        for &col in required {
            if !index.contains_key(col) {
                return Err(Error::Parse {
                    source_name: source.to_string(),
                    line: 1,
                    column: col.to_string(),
                    message: "required column is missing from the header".into(),
                });
            }
        }
        Ok(Self {
            source: source.to_string(),
            index,
        })
    }

    pub(crate) fn has(&self, column: &str) -> bool {
        self.index.contains_key(column)
    }

    pub(crate) fn cell<'r>(&self, record: &'r StringRecord, column: &str) -> &'r str {
        self.index
            .get(column)
            .and_then(|&i| record.get(i))
            .map(str::trim)
            .unwrap_or("")
    }

    pub(crate) fn error(&self, line: usize, column: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            source_name: self.source.clone(),
            line,
            column: column.to_string(),
            message: message.into(),
        }
    }

    /// A finite number, or `None` for an empty cell.
    pub(crate) fn optional_number(&self, record: &StringRecord, line: usize, column: &str) -> Result<Option<f64>> {
        let text = self.cell(record, column);
        if text.is_empty() {
            return Ok(None);
        }
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(self.error(line, column, format!("`{text}` is not a finite number"))),
        }
    }

    pub(crate) fn number(&self, record: &StringRecord, line: usize, column: &str) -> Result<f64> {
        self.optional_number(record, line, column)?
            .ok_or_else(|| self.error(line, column, "value is missing"))
    }
}

pub(crate) fn line_of(record: &StringRecord, fallback: usize) -> usize {
    record.position().map_or(fallback, |p| p.line() as usize)
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

/// Reads and validates an institution CSV
/// (`id,name,class,alumni,award,hici,ns,pub,fte`).
pub fn ingest_dataset(path: impl AsRef<Path>) -> Result<Vec<InstitutionRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    parse_dataset(&path.display().to_string(), file)
}

pub fn parse_dataset<R: Read>(source: &str, input: R) -> Result<Vec<InstitutionRecord>> {
    let mut rdr = reader(input);
    let cols = Columns::new(source, rdr.headers()?, &DATASET_COLUMNS)?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = line_of(&row, i + 2);
        let id = cols.cell(&row, "id").to_string();
        if id.is_empty() {
            return Err(cols.error(line, "id", "id is empty"));
        }
        if !seen.insert(id.clone()) {
            return Err(cols.error(line, "id", format!("duplicate id `{id}`")));
        }
        let class: InstitutionClass = cols
            .cell(&row, "class")
            .parse()
            .map_err(|e: Error| cols.error(line, "class", e.to_string()))?;
        let mut raw = RawMarks::default();
        for ind in Indicator::RAW {
            let v = cols.number(&row, line, ind.column())?;
            if v < 0.0 {
                return Err(cols.error(line, ind.column(), format!("raw value {v} is negative")));
            }
            raw[ind] = v;
        }
        let fte = cols.optional_number(&row, line, "fte")?;
        if let Some(f) = fte {
            if f <= 0.0 {
                return Err(cols.error(line, "fte", format!("FTE {f} must be positive")));
            }
        }
        let name = cols.cell(&row, "name");
        records.push(InstitutionRecord {
            name: if name.is_empty() { id.clone() } else { name.to_string() },
            id,
            class,
            raw,
            fte,
            published: None,
        });
    }
    Ok(records)
}

/// Published scores keyed by id (`id,alumni,award,hici,ns,pub,pcp,total`;
/// empty cells are missing values).
pub fn read_published(path: impl AsRef<Path>) -> Result<BTreeMap<String, PublishedScores>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    parse_published(&path.display().to_string(), file)
}

pub fn parse_published<R: Read>(source: &str, input: R) -> Result<BTreeMap<String, PublishedScores>> {
    let mut rdr = reader(input);
    let cols = Columns::new(source, rdr.headers()?, &["id"])?;
    let mut out = BTreeMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = line_of(&row, i + 2);
        let id = cols.cell(&row, "id").to_string();
        if id.is_empty() {
            return Err(cols.error(line, "id", "id is empty"));
        }
        let mut published = PublishedScores::default();
        for ind in Indicator::ALL {
            if !cols.has(ind.column()) {
                continue;
            }
            if let Some(v) = cols.optional_number(&row, line, ind.column())? {
                if v < 0.0 {
                    return Err(cols.error(line, ind.column(), format!("score {v} is negative")));
                }
                published.indicators.insert(ind, v);
            }
        }
        if cols.has("total") {
            published.total = cols.optional_number(&row, line, "total")?;
        }
        if out.insert(id.clone(), published).is_some() {
            return Err(cols.error(line, "id", format!("duplicate id `{id}`")));
        }
    }
    Ok(out)
}

/// Attaches published scores to the records with matching ids.
pub fn attach_published(records: &mut [InstitutionRecord], published: &BTreeMap<String, PublishedScores>) {
    for record in records {
        if let Some(p) = published.get(&record.id) {
            record.published = Some(p.clone());
        }
    }
}
