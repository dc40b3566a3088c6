//! GUE sampling, Hermitian eigensolving, the minor process and Haar
//! conjugation.

mod hermitian;
mod rigidity;
mod rng;

pub use hermitian::{eigh, eigvalsh, Eigen, HermitianMatrix};
pub use rigidity::{
    classical_spectrum, rigidity_report, RigidityReport, RigidityRow, DEFAULT_RIGIDITY_CONSTANT,
};
pub use rng::RngStream;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hive_gt::GtPattern;
use crate::spectra::SpecTuple;

/// `A = σ√n · M` where `M` has standard real Gaussian diagonal entries and
/// off-diagonal entries `(X + iY)/√2`.
pub fn sample_gue(n: usize, sigma: f64, rng: &mut RngStream) -> Result<HermitianMatrix> {
    if n == 0 || sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::Precondition(format!(
            "GUE needs n ≥ 1 and σ > 0 (got n = {n}, σ = {sigma})"
        )));
    }
    let s = sigma * (n as f64).sqrt();
    Ok(HermitianMatrix::from_upper(n, |i, j| {
        if i == j {
            Complex64::new(s * rng.normal(), 0.0)
        } else {
            rng.complex_normal() * s
        }
    }))
}

/// A Haar-distributed unitary, as the `Q` factor of a complex Ginibre matrix
/// with `R` normalized to a positive diagonal. Row-major.
pub fn haar_unitary(n: usize, rng: &mut RngStream) -> Vec<Complex64> {
    // columns of the Ginibre matrix, orthonormalized by modified Gram-Schmidt
    // with one reorthogonalization pass; r_kk = ‖q_k‖ > 0 a.s.
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.complex_normal()).collect())
        .collect();
    for k in 0..n {
        for _ in 0..2 {
            for j in 0..k {
                let (done, rest) = cols.split_at_mut(k);
                let qj = &done[j];
                let proj: Complex64 = qj.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                for (x, q) in rest[0].iter_mut().zip(qj) {
                    *x -= proj * q;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[k].iter_mut() {
            *x /= norm;
        }
    }
    let mut u = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, col) in cols.iter().enumerate() {
        for i in 0..n {
            u[i * n + k] = col[i];
        }
    }
    u
}

/// `U diag(λ) U*` with `U` Haar-distributed.
pub fn haar_isospectral(lambda: &SpecTuple, rng: &mut RngStream) -> HermitianMatrix {
    let n = lambda.len();
    let u = haar_unitary(n, rng);
    HermitianMatrix::from_upper(n, |i, j| {
        (0..n)
            .map(|k| u[i * n + k] * u[j * n + k].conj() * lambda[k])
            .sum()
    })
}

/// Row `k` of the pattern is the spectrum of the leading `k × k` minor.
pub fn minor_process(a: &HermitianMatrix) -> Result<GtPattern> {
    let rows: Result<Vec<Vec<f64>>> = (1..=a.n())
        .map(|k| eigvalsh(&a.leading_minor(k)).map(SpecTuple::into_vec))
        .collect();
    GtPattern::from_rows(&rows?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hive_gt::gt_boundary;
    use crate::spectra::semicircle_cdf;

    fn mean_se(xs: &[f64]) -> (f64, f64) {
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (mean, (var / m).sqrt())
    }

    #[test]
    fn gue_trace_moments() {
        let n = 4;
        let trials = 10_000;
        let mut tr = Vec::with_capacity(trials);
        let mut tr2 = Vec::with_capacity(trials);
        for t in 0..trials {
            let mut rng = RngStream::new(100, t as u64);
            // σ√n = 1 gives M itself
            let m = sample_gue(n, 1.0 / (n as f64).sqrt(), &mut rng).unwrap();
            tr.push(m.trace());
            tr2.push(m.trace_sq());
        }
        let (m1, se1) = mean_se(&tr);
        assert!(m1.abs() < 4.0 * se1);
        let (m2, se2) = mean_se(&tr2);
        assert!((m2 - (n * n) as f64).abs() < 4.0 * se2, "{m2} ± {se2}");
    }

    #[test]
    fn gue_spectral_distribution_is_semicircular() {
        let n = 256;
        let sigma = 1.3;
        let mut rng = RngStream::new(101, 0);
        let a = sample_gue(n, sigma, &mut rng).unwrap();
        let e = eigvalsh(&a).unwrap();
        let mut x: Vec<f64> = e.iter().map(|l| l / (sigma * n as f64)).collect();
        x.sort_by(f64::total_cmp);
        let mut ks: f64 = 0.0;
        for (k, &xk) in x.iter().enumerate() {
            let f = semicircle_cdf(xk);
            ks = ks.max((f - k as f64 / n as f64).abs()).max((f - (k + 1) as f64 / n as f64).abs());
        }
        assert!(ks < 0.05, "Kolmogorov distance {ks}");
    }

    #[test]
    fn gue_is_reproducible() {
        let a = sample_gue(7, 1.0, &mut RngStream::new(3, 9)).unwrap();
        let b = sample_gue(7, 1.0, &mut RngStream::new(3, 9)).unwrap();
        assert_eq!(a, b);
        let c = sample_gue(7, 1.0, &mut RngStream::new(3, 10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = RngStream::new(5, 0);
        for n in [1, 3, 8, 20] {
            let u = haar_unitary(n, &mut rng);
            for i in 0..n {
                for j in 0..n {
                    let ip: Complex64 = (0..n).map(|k| u[k * n + i].conj() * u[k * n + j]).sum();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - Complex64::new(e, 0.0)).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn haar_isospectral_keeps_spectrum() {
        let mut rng = RngStream::new(6, 0);
        for lam in [vec![3.0, 1.0, -2.0], vec![1.0, 1.0, 0.0, 0.0], vec![5.0, 2.0, 2.0, 2.0, -1.0]] {
            let l = SpecTuple::new(lam).unwrap();
            let a = haar_isospectral(&l, &mut rng);
            let e = eigvalsh(&a).unwrap();
            for k in 0..l.len() {
                assert!((e[k] - l[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn haar_isospectral_mean_is_scalar() {
        let l = SpecTuple::new(vec![2.0, 0.5, -1.0]).unwrap();
        let n = 3;
        let c = l.sum() / n as f64;
        let trials = 10_000;
        let mut entries = vec![Vec::with_capacity(trials); 2 * n * n];
        for t in 0..trials {
            let a = haar_isospectral(&l, &mut RngStream::new(7, t as u64));
            for i in 0..n {
                for j in 0..n {
                    let z = a.get(i, j);
                    entries[2 * (i * n + j)].push(z.re);
                    entries[2 * (i * n + j) + 1].push(z.im);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (mre, sre) = mean_se(&entries[2 * (i * n + j)]);
                let target = if i == j { c } else { 0.0 };
                assert!((mre - target).abs() < 4.0 * sre, "({i},{j}) {mre}");
                if i != j {
                    let (mim, sim) = mean_se(&entries[2 * (i * n + j) + 1]);
                    assert!(mim.abs() < 4.0 * sim);
                }
            }
        }
    }

    #[test]
    fn one_by_one_minor_gap_mean() {
        let l = SpecTuple::new(vec![1.0, 0.0]).unwrap();
        let trials = 100_000;
        let gaps: Vec<f64> = (0..trials)
            .map(|t| {
                let a = haar_isospectral(&l, &mut RngStream::new(8, t as u64));
                1.0 - a.get(0, 0).re
            })
            .collect();
        let (m, se) = mean_se(&gaps);
        assert!((m - 0.5).abs() < 4.0 * se);
    }

    #[test]
    fn minor_process_examples() {
        let d = [3.0, 1.0, 0.5, -2.0];
        let g = minor_process(&HermitianMatrix::diagonal(&d)).unwrap();
        for k in 1..=4 {
            for j in 1..=k {
                assert_eq!(g.get(j, k), d[j - 1]);
            }
        }
        let mut rng = RngStream::new(9, 0);
        let a = sample_gue(2, 1.0, &mut rng).unwrap();
        let g = minor_process(&a).unwrap();
        assert_eq!(g.get(1, 1), a.get(0, 0).re);
    }

    #[test]
    fn minor_process_interlaces_and_tracks_diagonal() {
        for t in 0..20 {
            let mut rng = RngStream::new(10, t);
            let a = sample_gue(12, 0.7, &mut rng).unwrap();
            let g = minor_process(&a).unwrap();
            assert!(g.is_interlacing(g.default_tolerance()));
            let b = gt_boundary(&g).unwrap();
            for (x, y) in b.a.iter().zip(a.diag()) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gue_rigidity_at_64() {
        let n = 64;
        let sigma = 1.0;
        let samples: Vec<SpecTuple> = (0..50)
            .map(|t| {
                let a = sample_gue(n, sigma, &mut RngStream::new(11, t)).unwrap();
                eigvalsh(&a.scaled(1.0 / (n as f64).sqrt())).unwrap()
            })
            .collect();
        let r = rigidity_report(&samples, sigma, DEFAULT_RIGIDITY_CONSTANT).unwrap();
        assert!(r.flagged().is_empty(), "worst {}", r.worst());
    }
}
