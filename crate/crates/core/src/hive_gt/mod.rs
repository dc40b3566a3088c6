//! Hives, Gelfand–Tsetlin patterns, and the linear embedding of a GT pattern
//! into a hive whose `λ`-edge carries a tuple with large gaps.

mod gt;
mod hive;

pub use gt::{gt_boundary, GtBoundary, GtPattern, InterlacingViolation};
pub use hive::{
    check_rhombus_concave, hive_boundary, rhombi, HiveBoundary, Hive, Rhombus, RhombusKind,
    RhombusViolation,
};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::spectra::{vandermonde, SpecTuple};

/// A tuple `Λ ∈ Spec` whose consecutive gaps all exceed some spread bound.
#[derive(Clone, Debug, PartialEq)]
pub struct GapTuple {
    entries: SpecTuple,
    partial: Vec<f64>,
}

impl GapTuple {
    /// Requires `min_i Λ_i - Λ_{i+1} > spread_bound`.
    pub fn new(entries: SpecTuple, spread_bound: f64) -> Result<Self> {
        if entries.len() > 1 && entries.min_gap() <= spread_bound {
            return Err(Error::Precondition(format!(
                "gap tuple has minimum gap {} which does not exceed {}",
                entries.min_gap(),
                spread_bound
            )));
        }
        let mut partial = Vec::with_capacity(entries.len() + 1);
        partial.push(0.0);
        let mut s = 0.0;
        for x in entries.iter() {
            s += x;
            partial.push(s);
        }
        Ok(GapTuple { entries, partial })
    }

    /// `Λ_i = gap · (n - i)`, so every gap equals `gap`.
    pub fn arithmetic(n: usize, gap: f64) -> Result<Self> {
        if gap.is_nan() || gap <= 0.0 || !gap.is_finite() {
            return Err(Error::Precondition(format!("gap constant {gap} must be positive")));
        }
        let entries = SpecTuple::new((1..=n).map(|i| gap * (n - i) as f64).collect())?;
        GapTuple::new(entries, 0.0)
    }

    pub fn tuple(&self) -> &SpecTuple {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Λ_1 + … + Λ_k`.
    pub fn partial_sum(&self, k: usize) -> f64 {
        self.partial[k]
    }

    pub fn total(&self) -> f64 {
        self.partial[self.entries.len()]
    }

    pub fn min_gap(&self) -> f64 {
        self.entries.min_gap()
    }
}

/// A hive together with a GT pattern whose top row is the hive's `ν`-edge.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedHive {
    pub hive: Hive,
    pub pattern: GtPattern,
}

impl AugmentedHive {
    pub fn new(hive: Hive, pattern: GtPattern, tol: f64) -> Result<Self> {
        let aug = AugmentedHive { hive, pattern };
        let mismatch = aug.nu_mismatch();
        if mismatch > tol {
            return Err(Error::Inconsistent(format!(
                "pattern top row differs from hive nu-edge by {mismatch:e}"
            )));
        }
        Ok(aug)
    }

    /// `max_j |λ_{j,n} - (h(j,j) - h(j-1,j-1))|`.
    pub fn nu_mismatch(&self) -> f64 {
        let n = self.hive.n();
        if self.pattern.n() != n {
            return f64::INFINITY;
        }
        (1..=n)
            .map(|j| {
                let nu = self.hive.get(j, j) - self.hive.get(j - 1, j - 1);
                (self.pattern.get(j, n) - nu).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `h(i,j) = Λ_1 + … + Λ_j + λ_{1,j} + … + λ_{i,j}`.
///
/// The result has boundary `Λ ⊞ λ → Λ + a` where `diag(λ) → a` is the
/// boundary of `g`.
pub fn gt_to_hive(g: &GtPattern, big: &GapTuple) -> Result<Hive> {
    let n = g.n();
    if big.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: big.len(),
        });
    }
    if n > 1 && big.min_gap() <= g.spread() {
        return Err(Error::Precondition(format!(
            "gap tuple minimum gap {} does not exceed pattern spread {}",
            big.min_gap(),
            g.spread()
        )));
    }
    let mut h = Hive::zeros(n);
    for j in 0..=n {
        let mut acc = big.partial_sum(j);
        h.set(0, j, acc);
        for i in 1..=j {
            acc += g.get(i, j);
            h.set(i, j, acc);
        }
    }
    Ok(h)
}

/// Left inverse of [`gt_to_hive`]: `λ_{i,j} = h(i,j) - h(i-1,j)`, after
/// checking that the `λ`-edge of `h` carries the partial sums of `Λ`.
pub fn hive_to_gt(h: &Hive, big: &GapTuple, tol: f64) -> Result<GtPattern> {
    let n = h.n();
    if big.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: big.len(),
        });
    }
    for j in 0..=n {
        let off = h.get(0, j) - big.partial_sum(j);
        if off.abs() > tol {
            return Err(Error::Inconsistent(format!(
                "hive edge value h(0,{j}) is off the gap-tuple partial sum by {off:e}"
            )));
        }
    }
    Ok(GtPattern::from_fn(n, |i, j| h.get(i, j) - h.get(i - 1, j)))
}

/// Volume of the GT polytope over a strict `λ` of length 2 or 3, by nested
/// integration over the interlacing bounds. Serves as an oracle for
/// `V(λ) / V(τ)`.
pub fn gt_volume_exact(lambda: &SpecTuple) -> Result<f64> {
    if !lambda.is_strict() {
        return Err(Error::Precondition("volume requires a strict spectrum".into()));
    }
    match lambda.len() {
        2 => Ok(quadrature::integrate(|_| 1.0, lambda[1], lambda[0], 2)),
        3 => {
            // λ_{1,2} ∈ [λ2, λ1], λ_{2,2} ∈ [λ3, λ2], λ_{1,1} ∈ [λ_{2,2}, λ_{1,2}]
            let inner = |a: f64| quadrature::integrate(|b| a - b, lambda[2], lambda[1], 3);
            Ok(quadrature::integrate(inner, lambda[1], lambda[0], 3))
        }
        n => Err(Error::Unsupported(format!(
            "exact GT volume only for n in {{2, 3}}, got {n}"
        ))),
    }
}

/// `V(λ) / V(τ)`.
pub fn gt_volume_formula(lambda: &SpecTuple) -> f64 {
    vandermonde(lambda) / vandermonde(&crate::spectra::staircase(lambda.len()))
}
