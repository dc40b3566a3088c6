//! The seeded experiment driver: the concentration experiment, the
//! oracle-equivalence battery, and the summary-table formats.

mod concentration;
mod config;
mod equivalence;
mod table;

pub use concentration::{
    bootstrap_var_ci, check_trial, decay_verdict, run_concentration, run_trial, trial_output,
    trial_stream, ConcentrationOutcome, DecayVerdict, TrialFailure, TrialOutput, TrialRecord,
};
pub use config::{ExperimentConfig, Probe, TableFormat};
pub use equivalence::{
    run_equivalence_suite, CheckOutcome, EquivalenceOptions, EquivalenceReport,
    MAX_EQUIVALENCE_N,
};
pub use table::{emit, parse_csv, parse_json, parse_table, render, SummaryRow, COLUMNS};

use crate::error::{Error, Result};
use crate::hive_gt::GtPattern;
use crate::rmt::RngStream;

pub const WORKERS_ENV: &str = "HIVELAB_WORKERS";

/// A rayon pool capped at `requested` threads, else at `HIVELAB_WORKERS`,
/// else rayon's default.
pub fn worker_pool(requested: Option<usize>) -> Result<rayon::ThreadPool> {
    let cap = match requested {
        Some(w) => Some(w),
        None => match std::env::var(WORKERS_ENV) {
            Ok(s) => Some(s.trim().parse::<usize>().ok().filter(|&w| w > 0).ok_or_else(|| {
                Error::Precondition(format!("{WORKERS_ENV} must be a positive integer (got {s:?})"))
            })?),
            Err(_) => None,
        },
    };
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cap {
        b = b.num_threads(w);
    }
    b.build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))
}

/// A GT pattern drawn top-down: the top row uniform on `[-scale, scale]`
/// and sorted, then each entry uniform between its two neighbours above.
pub fn random_gt_pattern(n: usize, scale: f64, rng: &mut RngStream) -> Result<GtPattern> {
    if n == 0 {
        return Err(Error::Precondition("pattern size must be positive".into()));
    }
    let mut top: Vec<f64> = (0..n)
        .map(|_| scale * (2.0 * rng.uniform() - 1.0))
        .collect();
    top.sort_by(|a, b| b.total_cmp(a));
    let mut rows = vec![top];
    for k in (1..n).rev() {
        let above = rows.last().expect("non-empty");
        let row = (0..k)
            .map(|j| above[j + 1] + (above[j] - above[j + 1]) * rng.uniform())
            .collect();
        rows.push(row);
    }
    rows.reverse();
    GtPattern::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_patterns_interlace() {
        let mut rng = RngStream::new(1, 0);
        for n in 1..10 {
            let g = random_gt_pattern(n, 3.0, &mut rng).unwrap();
            assert_eq!(g.n(), n);
            assert!(g.is_interlacing(0.0));
            assert!(g.max_abs() <= 3.0);
        }
    }

    #[test]
    fn explicit_worker_count() {
        assert_eq!(worker_pool(Some(3)).unwrap().current_num_threads(), 3);
    }
}
