use std::fmt;

/// Failure of a subcommand, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, missing or invalid input files, invalid geometry: exit 2.
    Usage(anyhow::Error),
    /// Anything that went wrong while running: exit 1.
    Runtime(anyhow::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

impl CliError {
    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError::Usage(anyhow::anyhow!("{msg}"))
    }

    pub fn runtime(msg: impl fmt::Display) -> Self {
        CliError::Runtime(anyhow::anyhow!("{msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(e) | CliError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

/// Attach context and an exit class to any error.
pub trait ResultExt<T> {
    fn or_usage(self, ctx: impl fmt::Display) -> CliResult<T>;
    fn or_runtime(self, ctx: impl fmt::Display) -> CliResult<T>;
}

impl<T, E: Into<anyhow::Error>> ResultExt<T> for Result<T, E> {
    fn or_usage(self, ctx: impl fmt::Display) -> CliResult<T> {
        self.map_err(|e| CliError::Usage(e.into().context(ctx.to_string())))
    }

    fn or_runtime(self, ctx: impl fmt::Display) -> CliResult<T> {
        self.map_err(|e| CliError::Runtime(e.into().context(ctx.to_string())))
    }
}
