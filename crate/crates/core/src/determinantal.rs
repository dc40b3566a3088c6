//! Exact first and second moments of the gaps `λ_i − x_i`, where `x` is the
//! spectrum of the top-left `(n−1) × (n−1)` minor of a Haar-isospectral
//! matrix with spectrum `λ`.
//!
//! Everything runs through the interpolants `Q_j`, the degree `n−1`
//! polynomials with `Q_j(λ_i) = 1` for `i ≤ j` and `0` otherwise, kept in
//! barycentric form. That form stays accurate for `n` up to about 64; past
//! that the node weights span too many orders of magnitude to trust.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::rmt::{eigvalsh, haar_isospectral, RngStream};
use crate::spectra::SpecTuple;

/// Largest `n` for which the barycentric weights are considered reliable.
pub const RELIABLE_N: usize = 64;

/// `I_j = [λ_{j+1}, λ_j]`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapInterval {
    pub j: usize,
    pub lo: f64,
    pub hi: f64,
}

impl GapInterval {
    pub fn new(lambda: &SpecTuple, j: usize) -> Result<Self> {
        if j == 0 || j >= lambda.len() {
            return Err(Error::Precondition(format!(
                "gap interval index {j} outside 1..{}",
                lambda.len()
            )));
        }
        Ok(GapInterval {
            j,
            lo: lambda[j],
            hi: lambda[j - 1],
        })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn require_strict(lambda: &SpecTuple) -> Result<()> {
    if lambda.len() < 2 {
        return Err(Error::Precondition(
            "gap moments need at least two eigenvalues".into(),
        ));
    }
    if !lambda.is_strict() {
        return Err(Error::InvalidSpectrum(
            "interpolation nodes must be distinct".into(),
        ));
    }
    Ok(())
}

/// Barycentric weights `w_i = 1/∏_{ℓ≠i}(λ_i − λ_ℓ)`, rescaled by a common
/// factor (which cancels in the second barycentric form).
fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let scale = 4.0 / (nodes[0] - nodes[nodes.len() - 1]);
    nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let p: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != i)
                .map(|(_, &xl)| scale * (xi - xl))
                .product();
            1.0 / p
        })
        .collect()
}

fn barycentric_eval(nodes: &[f64], weights: &[f64], values: &[f64], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&xi, &wi), &fi) in nodes.iter().zip(weights).zip(values) {
        let d = x - xi;
        if d == 0.0 {
            return fi;
        }
        let t = wi / d;
        num += t * fi;
        den += t;
    }
    num / den
}

/// The interpolant `Q_j` for a strict spectrum, with its derivative.
#[derive(Clone, Debug)]
pub struct InterpolantQ {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    j: usize,
    values: Vec<f64>,
    /// `Q_j′(λ_k)`; a degree `n−2` polynomial is recovered exactly from its
    /// values at the `n` nodes.
    slopes: Vec<f64>,
}

impl InterpolantQ {
    pub fn new(lambda: &SpecTuple, j: usize) -> Result<Self> {
        require_strict(lambda)?;
        let n = lambda.len();
        if j == 0 || j > n {
            return Err(Error::Precondition(format!("Q index {j} outside 1..={n}")));
        }
        let nodes = lambda.as_slice().to_vec();
        let weights = barycentric_weights(&nodes);
        let values: Vec<f64> = (0..n).map(|i| if i < j { 1.0 } else { 0.0 }).collect();
        // differentiation-matrix rows: p′(x_k) = Σ_{i≠k} (w_i/w_k)(f_i − f_k)/(x_k − x_i)
        let slopes = (0..n)
            .map(|k| {
                (0..n)
                    .filter(|&i| i != k)
                    .map(|i| weights[i] / weights[k] * (values[i] - values[k]) / (nodes[k] - nodes[i]))
                    .sum()
            })
            .collect();
        Ok(InterpolantQ {
            nodes,
            weights,
            j,
            values,
            slopes,
        })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn eval(&self, x: f64) -> f64 {
        barycentric_eval(&self.nodes, &self.weights, &self.values, x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        barycentric_eval(&self.nodes, &self.weights, &self.slopes, x)
    }

    /// `∫_a^b f(Q_j(x)) dx` for `f` affine, exact for the polynomial degree.
    fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let m = self.nodes.len().div_ceil(2) + 1;
        let (x, w) = gauss_legendre(m);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * f(self.eval(mid + half * xi)))
            .sum::<f64>()
    }
}

/// `Q_j(x)` for 1-based `j`.
pub fn q_eval(lambda: &SpecTuple, j: usize, x: f64) -> Result<f64> {
    Ok(InterpolantQ::new(lambda, j)?.eval(x))
}

/// `E(λ_i − x_i) = ∫_{I_i} Q_i`.
pub fn expected_gap(lambda: &SpecTuple, i: usize) -> Result<f64> {
    let q = InterpolantQ::new(lambda, i)?;
    let iv = GapInterval::new(lambda, i)?;
    Ok(q.integrate(iv.lo, iv.hi, |y| y))
}

/// `cov(λ_i − x_i, λ_j − x_j) = (∫_{I_i}(1 − Q_j)) (∫_{I_j} Q_i)` for `i < j`.
pub fn gap_covariance(lambda: &SpecTuple, i: usize, j: usize) -> Result<f64> {
    if i >= j {
        return Err(Error::Precondition(format!(
            "gap covariance needs i < j (got {i}, {j})"
        )));
    }
    let qi = InterpolantQ::new(lambda, i)?;
    let qj = InterpolantQ::new(lambda, j)?;
    let ii = GapInterval::new(lambda, i)?;
    let ij = GapInterval::new(lambda, j)?;
    let left = qj.integrate(ii.lo, ii.hi, |y| 1.0 - y);
    let right = qi.integrate(ij.lo, ij.hi, |y| y);
    Ok(left * right)
}

/// `Var(λ_i − x_i)`, the diagonal counterpart of [`gap_covariance`],
/// computed as `∫_{I_i} 2(λ_i − x) Q_i(x) dx − (∫_{I_i} Q_i)²`.
pub fn gap_variance(lambda: &SpecTuple, i: usize) -> Result<f64> {
    let q = InterpolantQ::new(lambda, i)?;
    let iv = GapInterval::new(lambda, i)?;
    // integrand degree n, one more node than the first moment needs
    let m = lambda.len().div_ceil(2) + 1;
    let (x, w) = gauss_legendre(m);
    let half = 0.5 * iv.width();
    let mid = 0.5 * (iv.lo + iv.hi);
    let second = half
        * x.iter()
            .zip(&w)
            .map(|(xi, wi)| {
                let y = mid + half * xi;
                wi * 2.0 * (iv.hi - y) * q.eval(y)
            })
            .sum::<f64>();
    let first = q.integrate(iv.lo, iv.hi, |y| y);
    Ok(second - first * first)
}

/// The projection kernel `K(x, y) = Σ_j 1_{I_j}(x) Q_j′(y)`.
///
/// Intervals are taken half-open on the left, `[λ_{j+1}, λ_j)`, with `I_1`
/// closed; the choice only matters on a null set.
pub fn kernel_eval(lambda: &SpecTuple, x: f64, y: f64) -> Result<f64> {
    Ok(Kernel::new(lambda)?.eval(x, y))
}

/// [`kernel_eval`] with the interpolants built once.
#[derive(Clone, Debug)]
pub struct Kernel {
    nodes: Vec<f64>,
    qs: Vec<InterpolantQ>,
}

impl Kernel {
    pub fn new(lambda: &SpecTuple) -> Result<Self> {
        require_strict(lambda)?;
        let qs = (1..lambda.len())
            .map(|j| InterpolantQ::new(lambda, j))
            .collect::<Result<_>>()?;
        Ok(Kernel {
            nodes: lambda.as_slice().to_vec(),
            qs,
        })
    }

    /// The `j` with `x ∈ I_j`, if any.
    pub fn interval_of(&self, x: f64) -> Option<usize> {
        let n = self.nodes.len();
        if x == self.nodes[0] {
            return Some(1);
        }
        (1..n).find(|&j| self.nodes[j] <= x && x < self.nodes[j - 1])
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.interval_of(x)
            .map_or(0.0, |j| self.qs[j - 1].derivative(y))
    }
}

/// `(n−1)! V_{n−1}(x) / V_n(λ)` on the interlacing region, zero off it: the
/// density of the minor spectrum `x` given `λ`.
pub fn minor_density(lambda: &SpecTuple, x: &[f64]) -> Result<f64> {
    require_strict(lambda)?;
    let n = lambda.len();
    if x.len() + 1 != n {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            got: x.len(),
        });
    }
    if (0..n - 1).any(|k| x[k] < lambda[k + 1] || x[k] > lambda[k]) {
        return Ok(0.0);
    }
    let mut v = 1.0;
    for a in 0..x.len() {
        for b in a + 1..x.len() {
            v *= x[a] - x[b];
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            v /= lambda[a] - lambda[b];
        }
    }
    let fact: f64 = (1..n).map(|k| k as f64).product();
    Ok(fact * v)
}

/// Monte Carlo gap moments with jackknife standard errors. Indices in the
/// vectors and matrices are 0-based: entry `k` refers to the gap `λ_{k+1} − x_{k+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McGapMoments {
    pub trials: usize,
    pub seed: u64,
    pub means: Vec<f64>,
    pub mean_se: Vec<f64>,
    /// Sample covariance matrix, row-major `(n−1) × (n−1)`.
    pub cov: Vec<Vec<f64>>,
    pub cov_se: Vec<Vec<f64>>,
}

/// Samples `U diag(λ) U*` on stream `(seed, t)` for trial `t`, takes the
/// spectrum of the top-left `(n−1)`-minor, and accumulates moments of the
/// gaps.
pub fn mc_gap_moments(lambda: &SpecTuple, trials: usize, seed: u64) -> Result<McGapMoments> {
    let n = lambda.len();
    if n < 2 {
        return Err(Error::Precondition(
            "gap moments need at least two eigenvalues".into(),
        ));
    }
    if trials < 2 {
        return Err(Error::Precondition(format!(
            "need at least two trials (got {trials})"
        )));
    }
    let gaps: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t as u64);
            let a = haar_isospectral(lambda, &mut rng);
            let x = eigvalsh(&a.leading_minor(n - 1))?;
            Ok((0..n - 1).map(|k| lambda[k] - x[k]).collect())
        })
        .collect::<Result<_>>()?;
    let d = n - 1;
    let columns: Vec<Vec<f64>> = (0..d)
        .map(|k| gaps.iter().map(|g| g[k]).collect())
        .collect();
    let mut means = vec![0.0; d];
    let mut mean_se = vec![0.0; d];
    let mut cov = vec![vec![0.0; d]; d];
    let mut cov_se = vec![vec![0.0; d]; d];
    for a in 0..d {
        let (m, se) = jackknife_mean(&columns[a]);
        means[a] = m;
        mean_se[a] = se;
        for b in a..d {
            let (c, se) = jackknife_cov(&columns[a], &columns[b]);
            cov[a][b] = c;
            cov[b][a] = c;
            cov_se[a][b] = se;
            cov_se[b][a] = se;
        }
    }
    Ok(McGapMoments {
        trials,
        seed,
        means,
        mean_se,
        cov,
        cov_se,
    })
}

fn jackknife_mean(x: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let s: f64 = x.iter().sum();
    let mean = s / m;
    let loo = x.iter().map(|xi| (s - xi) / (m - 1.0));
    let var = loo.map(|v| (v - mean).powi(2)).sum::<f64>() * (m - 1.0) / m;
    (mean, var.sqrt())
}

/// Unbiased sample covariance and its jackknife standard error, from
/// closed-form leave-one-out estimates.
fn jackknife_cov(x: &[f64], y: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    // centre first; covariance is shift-invariant and the sums stay small
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let xc: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let yc: Vec<f64> = y.iter().map(|v| v - my).collect();
    let sx: f64 = xc.iter().sum();
    let sy: f64 = yc.iter().sum();
    let sxy: f64 = xc.iter().zip(&yc).map(|(a, b)| a * b).sum();
    let c = (sxy - sx * sy / m) / (m - 1.0);
    if x.len() < 3 {
        // leave-one-out covariances of a single point are undefined; fall
        // back to the normal-theory error
        let sxx: f64 = xc.iter().map(|a| a * a).sum::<f64>() / (m - 1.0);
        let syy: f64 = yc.iter().map(|b| b * b).sum::<f64>() / (m - 1.0);
        return (c, ((sxx * syy + c * c) / (m - 1.0)).sqrt());
    }
    let loo: Vec<f64> = xc
        .iter()
        .zip(&yc)
        .map(|(a, b)| ((sxy - a * b) - (sx - a) * (sy - b) / (m - 1.0)) / (m - 2.0))
        .collect();
    let mean_loo = loo.iter().sum::<f64>() / m;
    let var = loo.iter().map(|v| (v - mean_loo).powi(2)).sum::<f64>() * (m - 1.0) / m;
    (c, var.sqrt())
}
