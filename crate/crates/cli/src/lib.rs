//! File formats, bound-check campaigns, convergence runs, benchmarks and the
//! command-line front end for `cbcdbd-core`.

pub mod bench;
pub mod campaign;
pub mod commands;
pub mod convergence;
pub mod error;
pub mod formats;
pub mod manifest;

pub use error::{CliError, Result};

/// Environment variable holding the number of campaign worker threads.
pub const WORKERS_ENV: &str = "CBCDBD_WORKERS";

/// Sizes the global worker pool from [`WORKERS_ENV`], falling back to the
/// available parallelism. Only the first call has an effect.
pub fn configure_workers() -> Result<()> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{value}`")))?;
    // a second initialization attempt keeps the existing pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}
