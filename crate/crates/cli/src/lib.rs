//! Command-line front end: a small command language over the `nilrad` library.

pub mod error;
pub mod examples;
pub mod session;

pub use error::CliError;
pub use session::{Format, Reply, Session, Value};

/// Seed for example reports, from `NILRAD_SEED` (default 42).
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var("NILRAD_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("NILRAD_SEED must be a non-negative integer, found `{text}`"))),
        Err(_) => Ok(42),
    }
}
