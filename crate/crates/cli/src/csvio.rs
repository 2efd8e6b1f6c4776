//! Single-writer CSV emission with the schema version pinned in a leading
//! comment line, so external plotting scripts can assert what they read.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::errors::{CliError, CliResult};

pub struct CsvFile {
    path: PathBuf,
    writer: BufWriter<File>,
}

/// Creates `dir/name`, writes the schema comment and the header row.
pub fn create(dir: &Path, name: &str, schema: &str, header: &str) -> CliResult<CsvFile> {
    let path = dir.join(name);
    let file = File::create(&path)
        .map_err(|e| CliError::usage(format!("cannot create `{}`: {e}", path.display())))?;
    let mut csv = CsvFile {
        path,
        writer: BufWriter::new(file),
    };
    csv.row(&format!("# splangevin csv schema: {schema}"))?;
    csv.row(header)?;
    Ok(csv)
}

impl CsvFile {
    pub fn row(&mut self, line: &str) -> CliResult<()> {
        writeln!(self.writer, "{line}")
            .map_err(|e| CliError::usage(format!("cannot write `{}`: {e}", self.path.display())))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.writer
            .flush()
            .map_err(|e| CliError::usage(format!("cannot write `{}`: {e}", self.path.display())))
    }
}
