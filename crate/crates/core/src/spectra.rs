//! Ordered spectra (`Spec` / `Spec°`) and the scalar identities used throughout:
//! Vandermonde products, the staircase `τ`, semicircle classical locations,
//! the trace + Weyl necessary conditions, and Schur–Horn majorization.

use std::f64::consts::PI;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative slack for trace identities (multiplied by `n · scale`).
pub const TRACE_REL_TOL: f64 = 1e-8;
/// Default absolute slack for the Weyl and majorization inequalities.
pub const INEQ_TOL: f64 = 1e-9;

/// A non-increasing real tuple `x_1 ≥ … ≥ x_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpecTuple(Vec<f64>);

impl SpecTuple {
    /// Builds a tuple, requiring exact non-increasing order.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(entries, 0.0)
    }

    /// Builds a tuple, allowing `x_{i+1} - x_i` to be positive by at most `tol`.
    pub fn with_tolerance(entries: Vec<f64>, tol: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSpectrum("empty tuple".into()));
        }
        if let Some(bad) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum(format!(
                "entry {} is not finite",
                bad + 1
            )));
        }
        for (k, w) in entries.windows(2).enumerate() {
            if w[1] - w[0] > tol {
                return Err(Error::InvalidSpectrum(format!(
                    "entries {} and {} increase ({} < {})",
                    k + 1,
                    k + 2,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(SpecTuple(entries))
    }

    /// Sorts arbitrary finite values into non-increasing order.
    pub fn from_unsorted(mut entries: Vec<f64>) -> Result<Self> {
        entries.sort_by(|a, b| b.total_cmp(a));
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Membership in `Spec°`: every inequality strict.
    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    /// `x_1 - x_n`.
    pub fn spread(&self) -> f64 {
        self.0[0] - self.0[self.0.len() - 1]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Smallest consecutive gap `min_i x_i - x_{i+1}` (infinite for `n = 1`).
    pub fn min_gap(&self) -> f64 {
        self.0
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        if t < 0.0 {
            return Err(Error::Precondition("negative scale reverses order".into()));
        }
        Self::new(self.0.iter().map(|x| x * t).collect())
    }

    pub fn shifted(&self, c: f64) -> Self {
        SpecTuple(self.0.iter().map(|x| x + c).collect())
    }
}

impl Deref for SpecTuple {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// The staircase `τ = (n, n-1, …, 1)`.
pub fn staircase(n: usize) -> SpecTuple {
    SpecTuple((1..=n).rev().map(|k| k as f64).collect())
}

/// Sign and natural log of `|∏_{i<j} (x_i - x_j)|`. The sign is `0.0` when
/// two entries coincide.
pub fn log_vandermonde(x: &[f64]) -> (f64, f64) {
    let mut sign = 1.0;
    let mut log = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let d = x[i] - x[j];
            if d == 0.0 {
                return (0.0, f64::NEG_INFINITY);
            }
            if d < 0.0 {
                sign = -sign;
            }
            log += d.abs().ln();
        }
    }
    (sign, log)
}

/// `V(x) = ∏_{i<j} (x_i - x_j)`.
///
/// Uses the direct product for `n ≤ 30` and the log-magnitude form above
/// that, so moderately large `n` does not overflow in intermediate products.
pub fn vandermonde(x: &SpecTuple) -> f64 {
    vandermonde_raw(x.as_slice())
}

pub(crate) fn vandermonde_raw(x: &[f64]) -> f64 {
    if x.len() <= 30 {
        let mut p = 1.0;
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                p *= x[i] - x[j];
            }
        }
        p
    } else {
        let (sign, log) = log_vandermonde(x);
        if sign == 0.0 {
            0.0
        } else {
            sign * log.exp()
        }
    }
}

/// CDF of the semicircle law on `[-2, 2]` with density `√(4-x²)/(2π)`.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    0.5 + (x * (4.0 - x * x).sqrt() + 4.0 * (x / 2.0).asin()) / (4.0 * PI)
}

/// Classical location `γ_i`: the point where the semicircle CDF equals `i/n`.
///
/// Bisection rather than Newton: the density vanishes at `±2`.
pub fn semicircle_quantile(n: usize, i: usize) -> Result<f64> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::Precondition(format!(
            "quantile index {i} outside 1..={n}"
        )));
    }
    if i == n {
        return Ok(2.0);
    }
    let target = i as f64 / n as f64;
    let (mut lo, mut hi) = (-2.0_f64, 2.0_f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if semicircle_cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All classical locations `γ_1 < … < γ_n` for size `n`.
pub fn semicircle_quantiles(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| semicircle_quantile(n, i).expect("index in range"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckTolerances {
    /// Trace slack is `trace_rel · n · max(1, max |entry|)`.
    pub trace_rel: f64,
    /// Absolute slack on each inequality.
    pub ineq_abs: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        CheckTolerances {
            trace_rel: TRACE_REL_TOL,
            ineq_abs: INEQ_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylViolation {
    /// 1-based indices; the violated inequality is `ν_{i+j-1} ≤ λ_i + μ_j`.
    pub i: usize,
    pub j: usize,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylTraceReport {
    /// `Σν - Σλ - Σμ`.
    pub trace_residual: f64,
    pub trace_tolerance: f64,
    pub trace_ok: bool,
    pub weyl_violations: Vec<WeylViolation>,
}

impl WeylTraceReport {
    pub fn passes(&self) -> bool {
        self.trace_ok && self.weyl_violations.is_empty()
    }
}

/// Necessary conditions for `λ ⊞ μ → ν`: the trace identity and the Weyl
/// inequalities. The full Horn system is not checked.
pub fn weyl_trace_check(lambda: &[f64], mu: &[f64], nu: &[f64]) -> Result<WeylTraceReport> {
    weyl_trace_check_with(lambda, mu, nu, CheckTolerances::default())
}

pub fn weyl_trace_check_with(
    lambda: &[f64],
    mu: &[f64],
    nu: &[f64],
    tol: CheckTolerances,
) -> Result<WeylTraceReport> {
    let n = lambda.len();
    for other in [mu.len(), nu.len()] {
        if other != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: other,
            });
        }
    }
    let scale = lambda
        .iter()
        .chain(mu)
        .chain(nu)
        .fold(1.0_f64, |m, x| m.max(x.abs()));
    let trace_residual =
        nu.iter().sum::<f64>() - lambda.iter().sum::<f64>() - mu.iter().sum::<f64>();
    let trace_tolerance = tol.trace_rel * n as f64 * scale;
    let mut weyl_violations = Vec::new();
    for i in 1..=n {
        for j in 1..=n + 1 - i {
            let excess = nu[i + j - 2] - lambda[i - 1] - mu[j - 1];
            if excess > tol.ineq_abs {
                weyl_violations.push(WeylViolation { i, j, excess });
            }
        }
    }
    Ok(WeylTraceReport {
        trace_residual,
        trace_tolerance,
        trace_ok: trace_residual.abs() <= trace_tolerance,
        weyl_violations,
    })
}

/// Schur–Horn: is `a` majorized by `λ`?
///
/// Sorting `a` decreasingly turns the check over all index subsets into a
/// check over prefixes.
pub fn majorization_check(lambda: &SpecTuple, a: &[f64]) -> Result<bool> {
    majorization_check_with(lambda, a, CheckTolerances::default())
}

pub fn majorization_check_with(
    lambda: &SpecTuple,
    a: &[f64],
    tol: CheckTolerances,
) -> Result<bool> {
    if a.len() != lambda.len() {
        return Err(Error::LengthMismatch {
            expected: lambda.len(),
            got: a.len(),
        });
    }
    let mut sorted = a.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let trace_gap = (sorted.iter().sum::<f64>() - lambda.sum()).abs();
    if trace_gap > tol.trace_rel.max(1e-8) * (1.0 + lambda.max_abs()) {
        return Ok(false);
    }
    let (mut pa, mut pl) = (0.0, 0.0);
    for (x, l) in sorted.iter().zip(lambda.iter()) {
        pa += x;
        pl += l;
        if pa > pl + tol.ineq_abs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(v: &[f64]) -> SpecTuple {
        SpecTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde(&st(&[5.0])), 1.0);
        assert_eq!(vandermonde(&st(&[2.0, 1.0, 0.0])), 2.0);
        assert_eq!(vandermonde(&st(&[3.5, 3.5])), 0.0);
    }

    #[test]
    fn vandermonde_of_staircase_is_superfactorial() {
        for n in 1..=8u32 {
            let superfactorial: u128 = (1..n)
                .map(|k| (1..=k as u128).product::<u128>())
                .product();
            assert_eq!(vandermonde(&staircase(n as usize)), superfactorial as f64, "n={n}");
        }
    }

    #[test]
    fn vandermonde_log_branch_matches_product() {
        let x: Vec<f64> = (0..34).map(|k| 1.0 - 0.1 * k as f64).collect();
        let direct: f64 = {
            let mut p = 1.0;
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    p *= x[i] - x[j];
                }
            }
            p
        };
        let v = vandermonde(&st(&x));
        assert!(((v - direct) / direct).abs() < 1e-10);
    }

    #[test]
    fn strictness_flag() {
        assert!(st(&[3.0, 2.0, 1.0]).is_strict());
        assert!(!st(&[3.0, 2.0, 2.0]).is_strict());
        assert!(SpecTuple::new(vec![1.0, 2.0]).is_err());
        assert!(SpecTuple::with_tolerance(vec![1.0, 1.0 + 1e-12], 1e-9).is_ok());
    }

    // Independent CDF: substitute x = 2 sin θ, density becomes (2/π) cos²θ dθ,
    // integrate with composite Simpson.
    fn cdf_by_quadrature(x: f64) -> f64 {
        let top = (x / 2.0).asin();
        let lo = -PI / 2.0;
        let m = 20_000;
        let h = (top - lo) / m as f64;
        let f = |t: f64| 2.0 / PI * t.cos() * t.cos();
        let mut s = f(lo) + f(top);
        for k in 1..m {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(lo + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn semicircle_quantile_examples() {
        assert_eq!(semicircle_quantile(2, 2).unwrap(), 2.0);
        assert!(semicircle_quantile(4, 2).unwrap().abs() < 1e-12);
        let g = semicircle_quantile(4, 1).unwrap();
        assert!(g > -2.0 && g < 0.0);
        assert!((cdf_by_quadrature(g) - 0.25).abs() < 1e-10);
        assert!(semicircle_quantile(4, 0).is_err());
        assert!(semicircle_quantile(4, 5).is_err());
    }

    #[test]
    fn semicircle_quantiles_monotone_and_odd() {
        for n in [3usize, 10, 64, 129] {
            let q = semicircle_quantiles(n);
            assert!(q.windows(2).all(|w| w[0] < w[1]));
            for i in 1..n {
                assert!((q[i - 1] + q[n - i - 1]).abs() < 1e-10, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn weyl_trace_examples() {
        let l = [5.0, 3.0];
        let m = [3.0, 0.0];
        assert!(weyl_trace_check(&l, &m, &[6.0, 5.0]).unwrap().passes());
        assert!(weyl_trace_check(&l, &m, &[8.0, 3.0]).unwrap().passes());
        let bad = weyl_trace_check(&l, &m, &[9.0, 2.0]).unwrap();
        assert!(bad.trace_ok);
        assert!(!bad.passes());
        assert_eq!(bad.weyl_violations[0].i, 1);
        assert_eq!(bad.weyl_violations[0].j, 1);
        assert!(matches!(
            weyl_trace_check(&l, &m, &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn majorization_examples() {
        let l = st(&[1.0, 0.0]);
        assert!(majorization_check(&l, &[0.0, 1.0]).unwrap());
        assert!(majorization_check(&l, &[0.5, 0.5]).unwrap());
        assert!(!majorization_check(&l, &[2.0, -1.0]).unwrap());
        assert!(majorization_check(&l, &[1.0]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn majorization_permutation_invariant(
            raw in proptest::collection::vec(-5.0f64..5.0, 2..7),
            mix in proptest::collection::vec(0.0f64..1.0, 2..7),
            rot in 0usize..7,
        ) {
            let lambda = SpecTuple::from_unsorted(raw.clone()).unwrap();
            let n = lambda.len();
            // a = convex combination of λ and its reversal, plus noise that may break it
            let a: Vec<f64> = (0..n)
                .map(|k| {
                    let t = mix[k % mix.len()];
                    t * lambda[k] + (1.0 - t) * lambda[n - 1 - k]
                })
                .collect();
            let mut b = a.clone();
            b.rotate_left(rot % n);
            proptest::prop_assert_eq!(
                majorization_check(&lambda, &a).unwrap(),
                majorization_check(&lambda, &b).unwrap()
            );
        }
    }
}
