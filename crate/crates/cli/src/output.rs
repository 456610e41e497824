use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::Provenance;
use crate::error::CliError;

/// CSV writer into memory: header rows, LF line endings.
pub fn csv_buffer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

pub fn finish(writer: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    writer.into_inner().map_err(|e| CliError::Csv(e.to_string()))
}

/// Shortest text that parses back to the same value.
pub fn float(x: f64) -> String {
    format!("{x}")
}

/// Writes `bytes` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn provenance_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".config.toml");
    out.with_file_name(name)
}

/// Records the resolved configuration next to `out`.
pub fn write_provenance(out: Option<&Path>, provenance: &Provenance) -> Result<(), CliError> {
    let Some(out) = out else {
        return Ok(());
    };
    let text = toml::to_string(provenance).map_err(|e| CliError::Config(e.to_string()))?;
    let path = provenance_path(out);
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))
}

pub fn read_csv(path: &Path) -> Result<csv::Reader<std::fs::File>, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Reader::from_reader(file))
}
