use thiserror::Error;

/// A single problem found while validating a configuration document.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration:\n{}", format_issues(.0))]
    Config(Vec<ConfigIssue>),

    #[error("invalid argument `{name}`: {message}")]
    InvalidArgument { name: &'static str, message: String },

    #[error("pole of the optical response: {0}")]
    Pole(String),

    #[error("outside the domain of validity: {0}")]
    Domain(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("series did not converge within {cap} terms ({context})")]
    SeriesCap { cap: usize, context: String },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("unphysical dispersion: group-velocity denominator {0:e} is not positive")]
    UnphysicalDispersion(f64),

    #[error("at T = {temperature:e} K: {source}")]
    AtTemperature {
        temperature: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            message: message.into(),
        }
    }

    /// True for errors caused by bad input rather than by the physics.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Config(_) | Error::InvalidArgument { .. } | Error::Io(_) => true,
            Error::AtTemperature { source, .. } => source.is_validation(),
            _ => false,
        }
    }

    pub(crate) fn at_temperature(self, temperature: f64) -> Self {
        Error::AtTemperature {
            temperature,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
