//! CLI-level errors carrying the process exit code.
//!
//! Exit-code contract: 2 = input/spec parse failure (message names the
//! offending row/column or field), 3 = even smoothing span, 4 = degenerate
//! market series, 1 = anything else.

use specshrink_core::CoreError;

#[derive(Debug)]
pub struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn even_span(span: usize) -> Self {
        Self {
            code: 3,
            message: format!("smoothing span must be odd, got {span}"),
        }
    }

    pub fn other(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn code(&self) -> i32 {
        self.code
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let code = match &err {
            CoreError::EvenSpan { .. } => 3,
            CoreError::DegenerateMarket => 4,
            CoreError::NonFinite { .. }
            | CoreError::EmptyPanel
            | CoreError::RaggedPanel { .. }
            | CoreError::LengthMismatch { .. }
            | CoreError::FrequencyOutOfRange { .. }
            | CoreError::RowOutOfRange { .. }
            | CoreError::MarketLength { .. }
            | CoreError::SpanTooLarge { .. }
            | CoreError::RunSpecField { .. } => 2,
            _ => 1,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::other(err.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}
