use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::Serialize;

use super::{CliError, Format};

/// Where and how results are written.
pub struct Sink {
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl Sink {
    fn writer(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.path {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout().lock()),
        })
    }

    pub fn json<T: Serialize>(&self, value: &T) -> Result<(), CliError> {
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, value).map_err(crate::Error::from)?;
        writeln!(w)?;
        Ok(())
    }

    pub fn csv<T: Serialize>(&self, rows: &[T]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(self.writer()?);
        for r in rows {
            w.serialize(r).map_err(crate::Error::from)?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON document or CSV rows, per the chosen format.
    pub fn emit<J: Serialize, R: Serialize>(&self, doc: &J, rows: &[R]) -> Result<(), CliError> {
        match self.format {
            Format::Json => self.json(doc),
            Format::Csv => self.csv(rows),
        }
    }
}
