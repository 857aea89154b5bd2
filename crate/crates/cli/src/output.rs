use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::args::{Format, Output};
use crate::{CliError, Context};

type Render<'a, T> = Option<Box<dyn FnOnce() -> T + 'a>>;

/// Renders a result in the requested format and writes it to `--out`
/// (atomically) or stdout. Only the requested renderer is evaluated.
pub(crate) struct Emit<'a> {
    output: &'a Output,
    csv: Render<'a, rankdyn::Result<String>>,
    json: Render<'a, Value>,
}

impl<'a> Emit<'a> {
    pub(crate) fn new(output: &'a Output) -> Self {
        Self { output, csv: None, json: None }
    }

    pub(crate) fn csv(mut self, f: impl FnOnce() -> rankdyn::Result<String> + 'a) -> Self {
        self.csv = Some(Box::new(f));
        self
    }

    pub(crate) fn json(mut self, f: impl FnOnce() -> Value + 'a) -> Self {
        self.json = Some(Box::new(f));
        self
    }

    pub(crate) fn write(self) -> Result<(), CliError> {
        let text = match self.output.format {
            Format::Csv => (self.csv.expect("csv renderer"))().ctx("cli-io::write_csv")?,
            Format::Json => {
                let value = (self.json.expect("json renderer"))();
                let mut s = serde_json::to_string_pretty(&value)
                    .map_err(rankdyn::Error::from)
                    .ctx("cli-io::write_json")?;
                s.push('\n');
                s
            }
        };
        match &self.output.out {
            Some(path) => write_atomic(path, text.as_bytes())?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
            }
        }
        Ok(())
    }
}

/// Writes to a temporary file in the target directory, then renames it over
/// the destination so readers never see a partial file.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
