use std::fmt;

use thiserror::Error;

/// Pipeline stage that produced an identification error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    BuildSystem,
    SolveMinors,
    Projection,
    Reconstruction,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::BuildSystem => "build-system",
            Stage::SolveMinors => "solve-minors",
            Stage::Projection => "projection",
            Stage::Reconstruction => "reconstruction",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spectral parameter must be finite and nonnegative, got {0}")]
    InvalidSpectralParameter(f64),

    #[error("Bessel series did not converge within {terms} terms at sqrt(s) = {sqrt_s}")]
    PrecisionLoss { sqrt_s: f64, terms: usize },

    #[error("invalid boundary conditions: {0}")]
    InvalidBoundaryConditions(String),

    #[error("minor vector must be finite and not identically zero")]
    DegenerateMinors,

    #[error("found only {found} of {requested} roots below sqrt(s) = {ceiling}")]
    InsufficientRoots {
        found: usize,
        requested: usize,
        ceiling: f64,
    },

    #[error("invalid frequency input: {0}")]
    InvalidFrequencies(String),

    #[error("rank-deficient system: numerical rank {rank} < 3 (condition {condition:.3e})")]
    RankDeficient { rank: usize, condition: f64 },

    #[error("orthogonal pairing degenerate: Lagrange multiplier |p| = 1")]
    DegenerateProjection,

    #[error("unreconstructable minors: P12, P13, P24 and P34 all vanish")]
    Unreconstructable,

    #[error("unknown fastening label `{0}`")]
    UnknownPreset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(stage: Stage) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// Innermost error, with stage wrappers removed.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
