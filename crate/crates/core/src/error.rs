use std::fmt;

/// Library-wide error type. The CLI maps variants onto process exit codes:
/// Config -> 1, Numerical/Io -> 2, Assertion -> 3.
#[derive(Debug)]
pub enum Error {
    /// Invalid sizes, mismatched orders, unparsable specs.
    Config(String),
    /// Eigensolver non-convergence or other numeric failure; carries provenance.
    Numerical(String),
    /// A checked mathematical identity failed.
    Assertion(String),
    Io(std::io::Error),
}

impl Error {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) => 1,
            Error::Numerical(_) | Error::Io(_) => 2,
            Error::Assertion(_) => 3,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(m) => write!(f, "config error: {m}"),
            Error::Numerical(m) => write!(f, "numerical failure: {m}"),
            Error::Assertion(m) => write!(f, "assertion failure: {m}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
