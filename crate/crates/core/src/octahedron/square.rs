use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hive_gt::{gt_to_hive, hive_to_gt, AugmentedHive, GapTuple, GtPattern, Hive};

/// A real function on the grid `{0,…,n}²`, stored row-major in `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareFunction {
    n: usize,
    values: Vec<f64>,
}

impl SquareFunction {
    pub fn zeros(n: usize) -> Self {
        SquareFunction {
            n,
            values: vec![0.0; (n + 1) * (n + 1)],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut s = SquareFunction::zeros(n);
        for i in 0..=n {
            for j in 0..=n {
                s.set(i, j, f(i, j));
            }
        }
        s
    }

    /// `rows[i][j]` is the value at `(i, j)`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidPattern("square function needs at least one row".into()));
        }
        let n = rows.len() - 1;
        let mut values = Vec::with_capacity(rows.len() * rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n + 1 {
                return Err(Error::InvalidPattern(format!(
                    "row {i} has {} values, expected {}",
                    r.len(),
                    n + 1
                )));
            }
            values.extend_from_slice(r);
        }
        Ok(SquareFunction { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.n + 1) + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * (self.n + 1) + j] = v;
    }

    pub fn at(&self, p: (usize, usize)) -> f64 {
        self.get(p.0, p.1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * (self.n + 1)..(i + 1) * (self.n + 1)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &SquareFunction) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn check_same_n(a: &Hive, b: &Hive) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    Ok(())
}

/// `h̃ = h` on `T` and `h̃(i,j) = h′(j, n−i+j) − Σγ` on `T′`.
pub fn pack_upper(h: &Hive, h_prime: &Hive, sum_gamma: f64, tol: f64) -> Result<SquareFunction> {
    check_same_n(h, h_prime)?;
    let n = h.n();
    for i in 0..=n {
        let off = h.get(i, i) - (h_prime.get(i, n) - sum_gamma);
        if off.abs() > tol {
            return Err(Error::Inconsistent(format!(
                "upper packing disagrees on the diagonal at ({i},{i}) by {off:e}"
            )));
        }
    }
    Ok(SquareFunction::from_fn(n, |i, j| {
        if i <= j {
            h.get(i, j)
        } else {
            h_prime.get(j, n - i + j) - sum_gamma
        }
    }))
}

/// Inverse of [`pack_upper`]: returns `(h, h′)`.
pub fn unpack_upper(sq: &SquareFunction, sum_gamma: f64) -> (Hive, Hive) {
    let n = sq.n();
    let h = Hive::from_fn(n, |i, j| sq.get(i, j));
    let hp = Hive::from_fn(n, |p, q| sq.get(n - q + p, p) + sum_gamma);
    (h, hp)
}

/// `k̃(i,j) = k(i+j−n, j) − Σγ` on `U` and `k̃(i,j) = k′(j, n−i) − Σγ` on `U′`.
pub fn pack_lower(k: &Hive, k_prime: &Hive, sum_gamma: f64, tol: f64) -> Result<SquareFunction> {
    check_same_n(k, k_prime)?;
    let n = k.n();
    for i in 0..=n {
        let j = n - i;
        let off = k.get(0, j) - k_prime.get(j, j);
        if off.abs() > tol {
            return Err(Error::Inconsistent(format!(
                "lower packing disagrees on the anti-diagonal at ({i},{j}) by {off:e}"
            )));
        }
    }
    Ok(SquareFunction::from_fn(n, |i, j| {
        if i + j >= n {
            k.get(i + j - n, j) - sum_gamma
        } else {
            k_prime.get(j, n - i) - sum_gamma
        }
    }))
}

/// Inverse of [`pack_lower`]: returns `(k, k′)`.
pub fn unpack_lower(sq: &SquareFunction, sum_gamma: f64) -> (Hive, Hive) {
    let n = sq.n();
    let k = Hive::from_fn(n, |p, q| sq.get(n + p - q, q) + sum_gamma);
    let kp = Hive::from_fn(n, |p, q| sq.get(n - q, p) + sum_gamma);
    (k, kp)
}

/// A packed GT pair together with the gaps tuple used to embed it.
#[derive(Clone, Debug)]
pub struct PackedPair {
    pub square: SquareFunction,
    pub gamma: GapTuple,
}

/// Smallest simple gap constant accepted by [`gt_pair_to_square`].
pub fn default_gap(g1: &GtPattern, g2: &GtPattern) -> f64 {
    g1.spread() + g2.spread() + 1.0
}

/// Embeds `g₁ ↦ k′ ∈ HIVE(γ ⊞ λ → σ)` and `g₂ ↦ k ∈ HIVE(σ ⊞ μ → π)` with
/// `γ_i = G·(n−i)` and `σ = γ + b`, then packs `(k, k′)` into `k̃`.
pub fn gt_pair_to_square(g1: &GtPattern, g2: &GtPattern, gap: Option<f64>) -> Result<PackedPair> {
    let n = g1.n();
    if g2.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: g2.n(),
        });
    }
    let gap = gap.unwrap_or_else(|| default_gap(g1, g2));
    let bound = g1.spread() + g2.spread();
    if n > 1 && gap <= bound {
        return Err(Error::Precondition(format!(
            "gap constant {gap} does not exceed the combined spread {bound}"
        )));
    }
    let gamma = GapTuple::arithmetic(n, gap)?;
    let k_prime = gt_to_hive(g1, &gamma)?;
    // σ_j = γ_j + b_j is the ν-edge of k′
    let sigma_entries: Vec<f64> = (1..=n)
        .map(|j| k_prime.get(j, j) - k_prime.get(j - 1, j - 1))
        .collect();
    let sigma = GapTuple::new(
        crate::spectra::SpecTuple::with_tolerance(sigma_entries, 1e-9 * (1.0 + gap * n as f64))?,
        g2.spread(),
    )?;
    let k = gt_to_hive(g2, &sigma)?;
    let tol = 1e-9 * (1.0 + k.max_abs());
    let square = pack_lower(&k, &k_prime, gamma.total(), tol)?;
    Ok(PackedPair { square, gamma })
}

/// Splits `h̃` into the hive on `T` and, through the `T′` half, a GT pattern
/// for `diag(ν) → a`.
pub fn unpack_to_augmented(sq: &SquareFunction, gamma: &GapTuple, tol: f64) -> Result<AugmentedHive> {
    if gamma.len() != sq.n() {
        return Err(Error::LengthMismatch {
            expected: sq.n(),
            got: gamma.len(),
        });
    }
    let (h, h_prime) = unpack_upper(sq, gamma.total());
    let pattern = hive_to_gt(&h_prime, gamma, tol)?;
    AugmentedHive::new(h, pattern, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine(n: usize, a: f64, b: f64, c: f64) -> Hive {
        Hive::from_fn(n, |i, j| a * i as f64 + b * j as f64 + c)
    }

    #[test]
    fn affine_upper_pack_is_continuous() {
        // h′(i,n) − Σγ = h(i,i)
        let n = 5;
        let sg = 7.0;
        let h = Hive::from_fn(n, |i, j| (i + j) as f64);
        let hp = Hive::from_fn(n, |p, _| (2 * p) as f64 + sg);
        let sq = pack_upper(&h, &hp, sg, 1e-12).unwrap();
        for i in 0..=n {
            assert_eq!(sq.get(i, i), (2 * i) as f64);
        }
        let (h2, hp2) = unpack_upper(&sq, sg);
        assert_eq!(h2, h);
        assert_eq!(hp2, hp);
    }

    #[test]
    fn pack_upper_rejects_mismatch() {
        let h = affine(3, 1.0, 1.0, 0.0);
        let hp = affine(3, 1.0, 0.0, 0.0);
        assert!(matches!(pack_upper(&h, &hp, 0.0, 1e-12), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn pack_lower_round_trip() {
        let n = 4;
        let sg = 3.5;
        // k(0,q) must equal k′(q,q)
        let k = Hive::from_fn(n, |p, q| (q * q) as f64 + 0.5 * p as f64);
        let kp = Hive::from_fn(n, |p, q| (p * p) as f64 + 0.25 * (q - p) as f64 * p as f64);
        let sq = pack_lower(&k, &kp, sg, 1e-12).unwrap();
        let (k2, kp2) = unpack_lower(&sq, sg);
        assert_eq!(k2, k);
        assert_eq!(kp2, kp);
        for i in 0..=n {
            assert_eq!(sq.get(i, n - i), k.get(0, n - i) - sg);
        }
    }

    #[test]
    fn constant_patterns_give_piecewise_affine_square() {
        // Up to the γ offset φ(m) = −(γ_{m+1} + … + γ_n), applied as φ(j) on U
        // and φ(n−i) on U′, k̃ is affine on each of U and U′.
        let n = 5;
        let (c1, c2) = (1.5, -0.75);
        let g1 = GtPattern::from_fn(n, |_, _| c1);
        let g2 = GtPattern::from_fn(n, |_, _| c2);
        let p = gt_pair_to_square(&g1, &g2, None).unwrap();
        let phi = |m: usize| p.gamma.partial_sum(m) - p.gamma.total();
        let flat = SquareFunction::from_fn(n, |i, j| {
            p.square.get(i, j) - if i + j >= n { phi(j) } else { phi(n - i) }
        });
        for i in 0..=n {
            for j in 0..=n {
                let expected = if i + j >= n {
                    c1 * j as f64 + c2 * (i + j - n) as f64
                } else {
                    c1 * j as f64
                };
                assert!((flat.get(i, j) - expected).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn gap_condition_enforced() {
        let g1 = GtPattern::from_rows(&[vec![0.5], vec![1.0, 0.0]]).unwrap();
        let g2 = GtPattern::from_rows(&[vec![0.0], vec![2.0, -1.0]]).unwrap();
        assert!(matches!(
            gt_pair_to_square(&g1, &g2, Some(4.0)),
            Err(Error::Precondition(_))
        ));
        assert!(gt_pair_to_square(&g1, &g2, Some(4.5)).is_ok());
    }
}
