use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{semicircle_quantile, SpecTuple};

pub const DEFAULT_RIGIDITY_CONSTANT: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityRow {
    /// Position in non-increasing order.
    pub i: usize,
    /// Classical location of the `i`-th largest eigenvalue of a GUE matrix
    /// at unit scale, in `[-2, 2]`.
    pub gamma_i: f64,
    pub max_norm_dev: f64,
    pub flag: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub n: usize,
    pub sigma: f64,
    pub constant: f64,
    pub rows: Vec<RigidityRow>,
}

impl RigidityReport {
    pub fn flagged(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.flag).map(|r| r.i).collect()
    }

    pub fn worst(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.max_norm_dev))
    }
}

/// For each `i`, the largest over `samples` of
/// `|λ_i − σ√n γ_i| · min(i, n−i+1)^{1/3} / (n^{1/3} ln² n)`, where `λ_i` is
/// the `i`-th largest entry and `γ_i` its semicircle classical location.
///
/// Samples are spectra of `σ M` with `M` a unit-variance GUE matrix, i.e. of
/// `A/√n` for `A` from [`crate::rmt::sample_gue`].
pub fn rigidity_report(samples: &[SpecTuple], sigma: f64, constant: f64) -> Result<RigidityReport> {
    let n = samples.first().map_or(0, |s| s.len());
    if let Some(bad) = samples.iter().find(|s| s.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    let nf = n as f64;
    let ln = nf.ln();
    // ln² n vanishes at n = 1; the report is then identically zero
    let denom = nf.cbrt() * (ln * ln).max(f64::MIN_POSITIVE);
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let gamma_i = if n == 0 { 0.0 } else { semicircle_quantile(n, n + 1 - i)? };
        let target = sigma * nf.sqrt() * gamma_i;
        let weight = (i.min(n - i + 1) as f64).cbrt();
        let max_norm_dev = samples
            .iter()
            .map(|s| (s[i - 1] - target).abs() * weight / denom)
            .fold(0.0, f64::max);
        let max_norm_dev = if n == 1 { 0.0 } else { max_norm_dev };
        rows.push(RigidityRow {
            i,
            gamma_i,
            max_norm_dev,
            flag: max_norm_dev > constant,
        });
    }
    Ok(RigidityReport {
        n,
        sigma,
        constant,
        rows,
    })
}

/// Classical locations scaled by `σ√n`, in non-increasing order.
pub fn classical_spectrum(n: usize, sigma: f64) -> Result<SpecTuple> {
    let s = sigma * (n as f64).sqrt();
    let v: Result<Vec<f64>> = (1..=n)
        .map(|i| semicircle_quantile(n, n + 1 - i).map(|g| s * g))
        .collect();
    SpecTuple::new(v?)
}
