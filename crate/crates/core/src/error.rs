use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input fell outside the domain of a model or type invariant.
    #[error("{field} = {value}: {reason}")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The parts of a scenario do not fit together.
    #[error("invalid scenario: {0}")]
    Scenario(String),

    /// A sweep or table was asked for with an unusable shape.
    #[error("invalid sweep: {0}")]
    Sweep(String),

    /// A core error raised while evaluating one point of a sweep.
    #[error("at {coordinate}: {source}")]
    AtCoordinate {
        coordinate: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            field,
            value,
            reason,
        }
    }

    pub(crate) fn at(self, coordinate: impl Into<String>) -> Self {
        Error::AtCoordinate {
            coordinate: coordinate.into(),
            source: Box::new(self),
        }
    }

    /// Name of the offending field, looking through coordinate wrappers.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            Error::Domain { field, .. } => Some(field),
            Error::AtCoordinate { source, .. } => source.field(),
            Error::Scenario(_) | Error::Sweep(_) => None,
        }
    }
}
