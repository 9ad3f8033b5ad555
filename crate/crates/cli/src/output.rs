use std::io::Write;
use std::path::Path;

use kruskal_cert::Error;

pub const EXIT_INPUT: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_GENERATION: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn generation(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_GENERATION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::GenerationFailed(_) => EXIT_GENERATION,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Replaces `path` in one rename so readers never see a partial file.
pub fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let fail = |e: std::io::Error| Failure::input(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

/// Writes to `out` when given, else to stdout.
pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| Failure::input(e.to_string()))
        }
    }
}

pub fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}
