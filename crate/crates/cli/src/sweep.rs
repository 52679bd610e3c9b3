//! Parameter sweeps. Points run concurrently and are reassembled in grid
//! order; a failing point records its error and the sweep carries on.

use rayon::prelude::*;

use crate::config::{RunConfig, SweepConfig};
use crate::error::AppError;
use crate::run::{run_simulation, RunReport};

pub const THREADS_VAR: &str = "COSMOFLUX_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: RunConfig,
    pub result: Result<RunReport, String>,
}

pub fn run_sweep(sweep: &SweepConfig) -> Result<Vec<SweepRow>, AppError> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| AppError::Config(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AppError::Config(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        (0..sweep.grid.len())
            .into_par_iter()
            .map(|i| {
                let config = sweep.point(i);
                let result = run_simulation(&config).map_err(|e| e.to_string());
                SweepRow { config, result }
            })
            .collect()
    });
    Ok(rows)
}
