use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, Probe};
use super::table::SummaryRow;
use super::worker_pool;
use crate::error::{Error, Result};
use crate::hive_gt::{
    check_rhombus_concave, gt_boundary, hive_boundary, AugmentedHive, GtPattern,
};
use crate::octahedron::oct;
use crate::rmt::{minor_process, sample_gue, HermitianMatrix, RngStream};
use crate::spectra::weyl_trace_check;

/// The stream of trial `t` at size `n`. Distinct `(n, t)` never share a
/// stream, so adding sizes to a config leaves existing trials unchanged.
pub fn trial_stream(seed: u64, n: usize, t: usize) -> RngStream {
    RngStream::new(seed, ((n as u64) << 32) | t as u64)
}

fn bootstrap_stream(seed: u64, n: usize, probe: usize) -> RngStream {
    RngStream::new(seed, (1 << 63) | ((n as u64) << 16) | probe as u64)
}

/// Everything one trial produces.
#[derive(Clone, Debug)]
pub struct TrialOutput {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub g1: GtPattern,
    pub g2: GtPattern,
    pub augmented: AugmentedHive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// The stream index the trial drew from.
    pub stream: u64,
    /// `h(v)` at each configured probe.
    pub values: Vec<f64>,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialFailure {
    pub n: usize,
    pub trial: usize,
    pub message: String,
}

/// Samples `A` and `B`, takes their minor processes and pushes the pair
/// through the octahedron map.
pub fn trial_output(cfg: &ExperimentConfig, n: usize, t: usize) -> Result<TrialOutput> {
    let mut rng = trial_stream(cfg.seed, n, t);
    let a = sample_gue(n, cfg.sigma_lambda, &mut rng)?;
    let b = sample_gue(n, cfg.sigma_mu, &mut rng)?;
    let g1 = minor_process(&a)?;
    let g2 = minor_process(&b)?;
    let augmented = oct(&g1, &g2, None)?;
    Ok(TrialOutput {
        a,
        b,
        g1,
        g2,
        augmented,
    })
}

/// Boundary bookkeeping on one trial: `Σν = Σλ + Σμ`, and the output
/// pattern's diagonal tuple equals `diag(A) + diag(B)`, both to
/// `boundary_tol · n · scale`; then concavity, interlacing and Weyl.
pub fn check_trial(cfg: &ExperimentConfig, out: &TrialOutput) -> Result<()> {
    let n = out.g1.n();
    let h = &out.augmented.hive;
    let scale = 1.0 + out.g1.max_abs().max(out.g2.max_abs());
    let tol = cfg.boundary_tol * n as f64 * scale;
    let hb = hive_boundary(h, tol)?;
    let trace = hb.nu.sum() - hb.lambda.sum() - hb.mu.sum();
    if trace.abs() > tol {
        return Err(Error::Inconsistent(format!("Σν − Σλ − Σμ = {trace:e}")));
    }
    let a_out = gt_boundary(&out.augmented.pattern)?.a;
    for (k, ((x, da), db)) in a_out.iter().zip(out.a.diag()).zip(out.b.diag()).enumerate() {
        if (x - da - db).abs() > tol {
            return Err(Error::Inconsistent(format!(
                "diagonal entry {} is {x}, expected {}",
                k + 1,
                da + db
            )));
        }
    }
    let shape_tol = h.default_tolerance();
    if let Some(v) = check_rhombus_concave(h, shape_tol).first() {
        return Err(Error::InvalidHive(format!("rhombus violation {v:?}")));
    }
    if !out.augmented.pattern.is_interlacing(out.augmented.pattern.default_tolerance()) {
        return Err(Error::InvalidPattern("output pattern does not interlace".into()));
    }
    let w = weyl_trace_check(hb.lambda.as_slice(), hb.mu.as_slice(), hb.nu.as_slice())?;
    if !w.passes() {
        return Err(Error::Inconsistent(format!("Weyl or trace check failed: {w:?}")));
    }
    Ok(())
}

pub fn run_trial(cfg: &ExperimentConfig, n: usize, t: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let out = trial_output(cfg, n, t)?;
    check_trial(cfg, &out)?;
    let values = cfg
        .probes
        .iter()
        .map(|p| {
            let (i, j) = p.resolve(n);
            out.augmented.hive.get(i, j)
        })
        .collect();
    Ok(TrialRecord {
        trial: t,
        stream: trial_stream(cfg.seed, n, t).index(),
        values,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug)]
pub struct ConcentrationOutcome {
    pub rows: Vec<SummaryRow>,
    /// Successful trials per `n`, in config order.
    pub records: Vec<(usize, Vec<TrialRecord>)>,
    pub failures: Vec<TrialFailure>,
    pub passed: bool,
}

fn unbiased_var(x: &[f64]) -> f64 {
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)
}

/// Linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile bootstrap 95% interval for the variance of `x`.
pub fn bootstrap_var_ci(x: &[f64], resamples: usize, rng: &mut RngStream) -> (f64, f64) {
    let m = x.len();
    let mut buf = vec![0.0; m];
    let mut stats: Vec<f64> = (0..resamples)
        .map(|_| {
            for b in buf.iter_mut() {
                *b = x[rng.index_below(m)];
            }
            unbiased_var(&buf)
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    (quantile(&stats, 0.025), quantile(&stats, 0.975))
}

/// The end-to-end concentration experiment.
pub fn run_concentration(cfg: &ExperimentConfig) -> Result<ConcentrationOutcome> {
    cfg.validate()?;
    let pool = worker_pool(cfg.workers)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut passed = true;
    for &n in &cfg.ns {
        let results: Vec<Result<TrialRecord>> =
            pool.install(|| (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, n, t)).collect());
        let mut ok = Vec::with_capacity(cfg.trials);
        let mut failed = 0;
        for (t, r) in results.into_iter().enumerate() {
            match r {
                Ok(rec) => ok.push(rec),
                Err(e) => {
                    failed += 1;
                    failures.push(TrialFailure {
                        n,
                        trial: t,
                        message: e.to_string(),
                    });
                }
            }
        }
        if failed as f64 > cfg.max_failure_fraction * cfg.trials as f64 {
            passed = false;
        }
        let n4 = (n as f64).powi(4);
        for (p, probe) in cfg.probes.iter().enumerate() {
            let (v_i, v_j) = probe.resolve(n);
            let xs: Vec<f64> = ok.iter().map(|r| r.values[p]).collect();
            let (mean, var, ci) = if xs.len() >= 2 {
                let mut rng = bootstrap_stream(cfg.seed, n, p);
                let (lo, hi) = bootstrap_var_ci(&xs, cfg.bootstrap, &mut rng);
                let mean = xs.iter().sum::<f64>() / xs.len() as f64;
                (mean, unbiased_var(&xs), (lo / n4, hi / n4))
            } else {
                (f64::NAN, f64::NAN, (f64::NAN, f64::NAN))
            };
            rows.push(SummaryRow {
                n,
                v_i,
                v_j,
                trials: xs.len(),
                mean,
                var,
                var_over_n4: var / n4,
                ci_lo: ci.0,
                ci_hi: ci.1,
                seed: cfg.seed,
            });
        }
        records.push((n, ok));
    }
    Ok(ConcentrationOutcome {
        rows,
        records,
        failures,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayVerdict {
    pub probe: Probe,
    pub n_small: usize,
    pub n_large: usize,
    /// `(var/n⁴ at n_large) / (var/n⁴ at n_small)`.
    pub ratio: f64,
    pub intervals_disjoint: bool,
    pub passed: bool,
}

/// Whether `var h(v)/n⁴` at `n_large` is below `threshold` times its value
/// at `n_small`, with disjoint bootstrap intervals.
pub fn decay_verdict(
    rows: &[SummaryRow],
    probe: Probe,
    n_small: usize,
    n_large: usize,
    threshold: f64,
) -> Result<DecayVerdict> {
    let find = |n: usize| {
        let v = probe.resolve(n);
        rows.iter()
            .find(|r| r.n == n && (r.v_i, r.v_j) == v)
            .ok_or_else(|| Error::Precondition(format!("no row for probe {probe} at n = {n}")))
    };
    let s = find(n_small)?;
    let l = find(n_large)?;
    let ratio = l.var_over_n4 / s.var_over_n4;
    let intervals_disjoint = l.ci_hi < s.ci_lo;
    Ok(DecayVerdict {
        probe,
        n_small,
        n_large,
        ratio,
        intervals_disjoint,
        passed: ratio < threshold && intervals_disjoint,
    })
}
