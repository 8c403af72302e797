use std::fmt;
use std::path::PathBuf;

use sbs_core::{EnvId, Error as CoreError};

/// Malformed scenario text or a matrix of the wrong shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    /// Dotted path such as `model.observed[1].generators[0]`.
    pub field: Option<String>,
    pub message: String,
}

impl ParseError {
    pub fn at(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            line: None,
            column: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        Self {
            line: Some(e.line()),
            column: Some(e.column()),
            field: None,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // serde_json messages already carry the line and column
        match &self.field {
            Some(field) => write!(f, "parse error in {field}: {}", self.message),
            None => write!(f, "parse error: {}", self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(ParseError),
    #[error("validation error in {field}: {message}")]
    Validation { field: String, message: String },
    #[error("{0}")]
    DimensionCap(CoreError),
    #[error("{0}")]
    Core(CoreError),
    #[error("{count} oracle counterexample(s)")]
    Counterexample { count: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Core(_) => 1,
            CliError::Parse(_) | CliError::Validation { .. } => 2,
            CliError::DimensionCap(_) => 3,
            CliError::Counterexample { .. } => 4,
        }
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Errors raised while validating or building a scenario, with the field
    /// they belong to.
    pub fn from_validation(e: CoreError) -> Self {
        let field = match &e {
            CoreError::DimensionTooLarge { .. } => return CliError::DimensionCap(e),
            CoreError::BadNormalization { .. } => "system.amplitudes".to_string(),
            CoreError::BadDensityMatrix { env, .. } => format!("{}.initial", env_path(*env)),
            CoreError::NonHermitianGenerator { env, index, .. } => {
                format!("{}.generators[{index}]", env_path(*env))
            }
            CoreError::BadThreshold { name, .. } => format!("thresholds.{name}"),
            CoreError::BadPurityTarget { .. } => "model.purities".to_string(),
            _ => "model".to_string(),
        };
        CliError::Validation {
            field,
            message: e.to_string(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DimensionTooLarge { .. } => CliError::DimensionCap(e),
            other => CliError::Core(other),
        }
    }
}

pub fn env_path(id: EnvId) -> String {
    match id {
        EnvId::Unobserved => "model.unobserved".to_string(),
        EnvId::Observed(k) => format!("model.observed[{k}]"),
    }
}
