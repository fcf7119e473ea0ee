use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::CliError;

/// Writes to `path` through a temporary file in the same directory and a
/// rename, or to standard output.
pub fn emit(
    path: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(tmp);
            body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))?;
            let tmp = w.into_inner().map_err(|e| CliError::io(path, e.into_error()))?;
            tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            match body(&mut lock).and_then(|_| lock.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    Err(CliError::io(Path::new("<stdout>"), e))
                }
                _ => Ok(()),
            }
        }
    }
}

pub fn emit_json<T: Serialize + ?Sized>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    emit(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

pub fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}
