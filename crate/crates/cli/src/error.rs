use std::fmt;

/// CLI failure classes mapped to exit codes: usage 2, data 3, numerical 4.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Data(msg) => write!(f, "{msg}"),
            CliError::Numerical(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<rlda_core::Error> for CliError {
    fn from(e: rlda_core::Error) -> Self {
        use rlda_core::Error::*;
        match &e {
            InvalidInput(_) | Parse(_) | Io(_) => CliError::Data(e.to_string()),
            NumericalFailure(_) | RankDeficient(_) | DegenerateWeight(_)
            | DenominatorNonPositive(_) | InsufficientTrace(_) | DegenerateProjection(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(format!("io error: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_class() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::from(rlda_core::Error::Parse("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(rlda_core::Error::InvalidInput("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(rlda_core::Error::NumericalFailure("x".into())).exit_code(),
            4
        );
        assert_eq!(
            CliError::from(rlda_core::Error::DegenerateProjection("x".into())).exit_code(),
            4
        );
    }
}
