use std::fmt;

/// A command failure, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration; nothing was processed. Exit code 2.
    Usage(String),
    /// Processing failed on the data. Exit code 1.
    Failed(String),
}

impl CliError {
    pub fn usage(e: impl fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn failed(e: impl fmt::Display) -> Self {
        CliError::Failed(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<aquasim::Error> for CliError {
    fn from(e: aquasim::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

/// Prints the normalized run configuration as one JSON line.
pub fn print_config(config: &serde_json::Value) {
    println!("config {config}");
}

/// Builds a worker pool; 0 picks the number of available cores.
pub fn pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(CliError::failed)
}
