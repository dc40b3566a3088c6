use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::SpecTuple;

/// A triangular array `λ_{j,k}`, `1 ≤ j ≤ k ≤ n`; row `k` holds the `k`
/// entries `λ_{1,k}, …, λ_{k,k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GtPattern {
    n: usize,
    entries: Vec<f64>,
}

#[inline]
fn gt_index(j: usize, k: usize) -> usize {
    (k - 1) * k / 2 + (j - 1)
}

impl GtPattern {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(n * (n + 1) / 2);
        for k in 1..=n {
            for j in 1..=k {
                entries.push(f(j, k));
            }
        }
        GtPattern { n, entries }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidPattern("no rows".into()));
        }
        let mut entries = Vec::new();
        for (k0, row) in rows.iter().enumerate() {
            if row.len() != k0 + 1 {
                return Err(Error::InvalidPattern(format!(
                    "row {} has {} values, expected {}",
                    k0 + 1,
                    row.len(),
                    k0 + 1
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(GtPattern {
            n: rows.len(),
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `λ_{j,k}`, 1-based.
    #[inline]
    pub fn get(&self, j: usize, k: usize) -> f64 {
        debug_assert!(1 <= j && j <= k && k <= self.n);
        self.entries[gt_index(j, k)]
    }

    #[inline]
    pub fn set(&mut self, j: usize, k: usize, v: f64) {
        self.entries[gt_index(j, k)] = v;
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.entries[gt_index(1, k)..gt_index(1, k) + k]
    }

    pub fn top_row(&self) -> &[f64] {
        self.row(self.n)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn default_tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.max_abs())
    }

    pub fn spread(&self) -> f64 {
        let top = self.top_row();
        top[0] - top[top.len() - 1]
    }

    pub fn scaled(&self, t: f64) -> Self {
        GtPattern {
            n: self.n,
            entries: self.entries.iter().map(|x| x * t).collect(),
        }
    }

    /// Every failure of `λ_{j,k+1} ≥ λ_{j,k} ≥ λ_{j+1,k+1}` by more than `tol`.
    pub fn interlacing_violations(&self, tol: f64) -> Vec<InterlacingViolation> {
        let mut out = Vec::new();
        for k in 1..self.n {
            for j in 1..=k {
                let x = self.get(j, k);
                let upper = self.get(j, k + 1) - x;
                if upper < -tol {
                    out.push(InterlacingViolation {
                        j,
                        k,
                        excess: -upper,
                    });
                }
                let lower = x - self.get(j + 1, k + 1);
                if lower < -tol {
                    out.push(InterlacingViolation {
                        j,
                        k,
                        excess: -lower,
                    });
                }
            }
        }
        out
    }

    pub fn is_interlacing(&self, tol: f64) -> bool {
        self.interlacing_violations(tol).is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterlacingViolation {
    pub j: usize,
    pub k: usize,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GtBoundary {
    pub lambda: SpecTuple,
    pub a: Vec<f64>,
}

/// `diag(λ) → a`: `λ` is the top row, `a_k` the difference of consecutive row sums.
pub fn gt_boundary(g: &GtPattern) -> Result<GtBoundary> {
    let lambda = SpecTuple::with_tolerance(g.top_row().to_vec(), g.default_tolerance())
        .map_err(|e| Error::InvalidPattern(format!("top row: {e}")))?;
    let mut prev = 0.0;
    let a = (1..=g.n())
        .map(|k| {
            let s: f64 = g.row(k).iter().sum();
            let ak = s - prev;
            prev = s;
            ak
        })
        .collect();
    Ok(GtBoundary { lambda, a })
}
