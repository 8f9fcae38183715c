//! Job description, configuration and dispatch behind the `tyclass` binary.

pub mod config;
pub mod job;
pub mod run;

pub use config::Config;
pub use job::{JobSpec, ModelKind, OutputFormat, Task};
pub use run::{run, ErrorObject, ResultDocument, Settings, Term};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] tyclass::Error),
}

impl CliError {
    /// 2 for bad input, 3 for a non-vexillary involution, 4 for failures
    /// inside a computation.
    pub fn exit_code(&self) -> i32 {
        use tyclass::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                E::InvalidSpec(_)
                | E::Parse(_)
                | E::MissingTruncation(_)
                | E::InvalidInvolution(_)
                | E::InvalidRho { .. }
                | E::InsufficientChernData { .. } => 2,
                E::NotVexillary(_) => 3,
                _ => 4,
            },
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "Usage".into(),
            CliError::Config(_) => "Config".into(),
            CliError::Io(_) => "Io".into(),
            CliError::Core(e) => {
                let d = format!("{e:?}");
                d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Core").to_string()
            }
        }
    }
}
