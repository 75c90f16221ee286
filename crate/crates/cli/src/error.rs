use serde::Serialize;
use thiserror::Error;

/// Exit codes of the `uqcm` binary.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error(transparent)]
    Library(#[from] uqcm::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        EXIT_USAGE
    }

    /// `{ "error": ..., "code": ... }`
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            error: &'a str,
            code: i32,
        }
        let msg = self.to_string();
        serde_json::to_string(&Doc {
            error: &msg,
            code: self.code(),
        })
        .expect("error document serializes")
    }
}
