use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::error::{CliError, CliResult};

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let fail = |e: std::io::Error| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.flush().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("serialising report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Sends the JSON and/or CSV rendering wherever `--out`/`--format` say.
pub fn emit(output: &OutputArgs, json: &str, csv: &str) -> CliResult<()> {
    match (&output.out, output.format) {
        (None, Format::Json) => print!("{json}"),
        (None, Format::Csv) => print!("{csv}"),
        (None, Format::Both) => print!("{json}\n{csv}"),
        (Some(path), Format::Json) => write_atomic(path, json)?,
        (Some(path), Format::Csv) => write_atomic(path, csv)?,
        (Some(path), Format::Both) => {
            write_atomic(&path.with_extension("json"), json)?;
            write_atomic(&path.with_extension("csv"), csv)?;
        }
    }
    Ok(())
}
