use l2fractal::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// An axiom, identity or margin contract failed.
    #[error("{0}")]
    Contract(String),
    #[error("{0}")]
    Indeterminate(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Contract(_) => 2,
            CliError::Indeterminate(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Margin(m) => CliError::Contract(format!(
                "window margin violated: {m} (try a larger --ambient or a smaller --window)"
            )),
            Error::EmptyWindow(m) => CliError::Indeterminate(format!(
                "no admissible fit window: {m} (try a wider time grid or --fit-lo/--fit-hi)"
            )),
            Error::Io(e) => CliError::Io(e.to_string()),
            Error::Construction(m) => CliError::Contract(format!("construction failed: {m}")),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        let code = |e: Error| CliError::from(e).exit_code();
        assert_eq!(code(Error::Margin("ball".into())), 2);
        assert_eq!(code(Error::Construction("gluing".into())), 2);
        assert_eq!(code(Error::EmptyWindow("flat".into())), 3);
        assert_eq!(code(Error::InvalidArgument("j".into())), 1);
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        assert_eq!(code(Error::Io(io)), 4);
    }
}
