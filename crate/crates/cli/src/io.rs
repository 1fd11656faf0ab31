use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use mvop_core::exact::MatrixR;

use crate::report::InputsHash;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] mvop_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn variant(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.variant(),
            CliError::Io { .. } => "Io",
            CliError::Parse { .. } => "Parse",
            CliError::Usage(_) => "Usage",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Reads and parses a JSON file, feeding its bytes to `hash`.
pub fn read_json<T: DeserializeOwned>(path: &Path, hash: &mut InputsHash) -> CliResult<T> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    hash.file(&bytes);
    log::debug!("read {} ({} bytes)", path.display(), bytes.len());
    serde_json::from_slice(&bytes).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// A bare matrix or an object with an `alpha0` field.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(MatrixR),
    Wrapped { alpha0: MatrixR },
}

pub fn read_alpha0(path: &Path, hash: &mut InputsHash) -> CliResult<MatrixR> {
    Ok(match read_json::<MatrixFile>(path, hash)? {
        MatrixFile::Bare(m) | MatrixFile::Wrapped { alpha0: m } => m,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("domain values serialize");
    s.push('\n');
    s
}

/// Writes `value` to `path`, or to stdout when `path` is `None`.
pub fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult<()> {
    let text = to_json(value);
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            log::info!("wrote {}", p.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
        }
    }
    Ok(())
}
