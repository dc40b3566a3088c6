use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectra::SpecTuple;

const MAX_SWEEPS: usize = 40;
const ROTATION_THRESHOLD: f64 = 1e-14;

/// A dense Hermitian matrix. Every write goes through [`HermitianMatrix::set`],
/// which mirrors the entry, so `M_ji = conj(M_ij)` holds exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = HermitianMatrix::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    /// Builds from the upper triangle `f(i, j)`, `i ≤ j`; the imaginary part
    /// of diagonal values is discarded.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = HermitianMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Checks Hermitian symmetry of a full row-major array within `tol`.
    pub fn from_full(n: usize, data: Vec<Complex64>, tol: f64) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        for i in 0..n {
            for j in i..n {
                let d = (data[i * n + j] - data[j * n + i].conj()).norm();
                if d > tol {
                    return Err(Error::Precondition(format!(
                        "matrix is not Hermitian at ({i},{j}): defect {d:e}"
                    )));
                }
            }
        }
        Ok(HermitianMatrix::from_upper(n, |i, j| data[i * n + j]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let n = self.n;
        if i == j {
            self.data[i * n + i] = Complex64::new(v.re, 0.0);
        } else {
            self.data[i * n + j] = v;
            self.data[j * n + i] = v.conj();
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    /// `tr M² = Σ |M_ij|²`.
    pub fn trace_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.trace_sq().sqrt()
    }

    /// The leading `k × k` principal submatrix.
    pub fn leading_minor(&self, k: usize) -> HermitianMatrix {
        HermitianMatrix::from_upper(k, |i, j| self.get(i, j))
    }

    pub fn scaled(&self, t: f64) -> HermitianMatrix {
        HermitianMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * t).collect(),
        }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(HermitianMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }
}

/// Eigenvalues in non-increasing order and the matching orthonormal
/// eigenvectors, stored as columns of a row-major `n × n` array.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: SpecTuple,
    pub vectors: Vec<Complex64>,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.values.len();
        (0..n).map(|i| self.vectors[i * n + k]).collect()
    }
}

fn off_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi. Each rotation zeroes `a_pq` exactly; a pair is
/// rotated while `|a_pq| > 1e-14 · max(√|a_pp a_qq|, ε‖A‖_F)`.
fn jacobi(m: &HermitianMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<Complex64>>)> {
    let n = m.n;
    let mut a = m.data.clone();
    let mut v = want_vectors.then(|| {
        let mut v = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * n + i] = Complex64::new(1.0, 0.0);
        }
        v
    });
    let floor = f64::EPSILON * m.frobenius();
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                if r <= ROTATION_THRESHOLD * (app * aqq).abs().sqrt().max(floor) {
                    continue;
                }
                rotated = true;
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let pc = phase.conj();
                // columns p, q
                for i in 0..n {
                    let xp = a[i * n + p];
                    let xq = a[i * n + q] * pc;
                    a[i * n + p] = xp * c - xq * s;
                    a[i * n + q] = xp * s + xq * c;
                }
                // rows p, q
                for j in 0..n {
                    let xp = a[p * n + j];
                    let xq = a[q * n + j] * phase;
                    a[p * n + j] = xp * c - xq * s;
                    a[q * n + j] = xp * s + xq * c;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
                if let Some(v) = v.as_mut() {
                    for i in 0..n {
                        let xp = v[i * n + p];
                        let xq = v[i * n + q] * pc;
                        v[i * n + p] = xp * c - xq * s;
                        v[i * n + q] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off_norm(&a, n),
        });
    }
    Ok(((0..n).map(|i| a[i * n + i].re).collect(), v))
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    idx
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
pub fn eigh(m: &HermitianMatrix) -> Result<Eigen> {
    let n = m.n;
    let (vals, vecs) = jacobi(m, true)?;
    let vecs = vecs.expect("vectors requested");
    let order = descending_order(&vals);
    let values = SpecTuple::new(order.iter().map(|&k| vals[k]).collect())?;
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + dst] = vecs[i * n + src];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Eigenvalues only, in non-increasing order.
pub fn eigvalsh(m: &HermitianMatrix) -> Result<SpecTuple> {
    let (vals, _) = jacobi(m, false)?;
    let order = descending_order(&vals);
    SpecTuple::new(order.iter().map(|&k| vals[k]).collect())
}
