use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{0}")]
    Physics(#[from] ferrotorque::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for configuration and validation problems, 3 for numerical or
    /// physical failures.
    pub fn exit_code(&self) -> u8 {
        use ferrotorque::Error as E;
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Physics(e) => match e {
                E::UnknownMaterial { .. }
                | E::InvalidParameter { .. }
                | E::Geometry(_)
                | E::Parse { .. }
                | E::UnknownStrategy { .. }
                | E::MissingImageField => 2,
                E::NonFinite { .. }
                | E::StepSize { .. }
                | E::Instability { .. }
                | E::QuaternionDrift { .. }
                | E::GimbalLock { .. }
                | E::NoCrossing { .. } => 3,
            },
        }
    }
}
