use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dispersive margin {margin:.3} is not above 1 (rerun with --force to continue)")]
    DispersiveMargin { margin: f64 },

    #[error("{0}")]
    Physics(molqudit::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed table: {0}")]
    Table(String),
}

impl CliError {
    /// 2 for input problems, 3 for physics-validity failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) | Self::Table(_) => 2,
            Self::DispersiveMargin { .. } | Self::Physics(_) => 3,
        }
    }
}

impl From<molqudit::Error> for CliError {
    fn from(e: molqudit::Error) -> Self {
        use molqudit::Error as E;
        match e {
            E::InvalidSpin(_)
            | E::UnsupportedStevens { .. }
            | E::DuplicateStevens { .. }
            | E::NonFinite(_)
            | E::InvalidZeemanSign(_)
            | E::InvalidCavity(_)
            | E::InvalidPhotonState { .. }
            | E::UnknownLabel(_)
            | E::InvalidTolerance(_)
            | E::MoleculeCount { .. }
            | E::DimensionOverflow { .. } => Self::Config(e.to_string()),
            other => Self::Physics(other),
        }
    }
}
