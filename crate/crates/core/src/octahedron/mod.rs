//! The octahedron recurrence, as tetrahedron excavation and as a maximum of
//! linear forms indexed by lozenge tilings, together with the packing maps
//! between GT pairs, hive pairs and functions on the square `{0,…,n}²`.
//!
//! The square is split two ways. `T = {i ≤ j}` and `T′ = {i ≥ j}` carry the
//! output `h̃`; `U = {i + j ≥ n}` and `U′ = {i + j ≤ n}` carry the input `k̃`.

mod excavation;
mod hexagon;
mod square;
mod tiling;
mod weight;

pub use excavation::{excavate, inverse_excavate, TetrahedronField};
pub use hexagon::{build_hexagon, Hexagon, Point};
pub use square::{
    default_gap, gt_pair_to_square, pack_lower, pack_upper, unpack_lower, unpack_to_augmented,
    unpack_upper, PackedPair, SquareFunction,
};
pub use tiling::{
    enumerate_tilings, for_each_tiling, standard_tiling, BorderTriangle, Color, Lozenge,
    LozengeKind, LozengeTiling, Orientation, Region, DEFAULT_TILING_BUDGET,
};
pub use weight::{
    border_weight, hexagon_form, hexagon_form_alt, hexagon_weight, hexagon_weight_alt,
    lozenge_weight, red_blue_residual_form, red_minus_blue_form, speyer_value, tiling_form,
    tiling_form_alt, tiling_weight, tiling_weight_alt, tiling_weight_alt_with, tiling_weight_with,
    BorderSign, LinearForm, SpeyerForms, SpeyerTable,
};

use crate::error::Result;
use crate::hive_gt::{AugmentedHive, GtPattern};

/// `oct(g₁, g₂)`: the augmented hive obtained by packing the GT pair,
/// excavating, and unpacking. `gap` overrides the default gap constant.
pub fn oct(g1: &GtPattern, g2: &GtPattern, gap: Option<f64>) -> Result<AugmentedHive> {
    let packed = gt_pair_to_square(g1, g2, gap)?;
    let h = excavate(&packed.square);
    let tol = 1e-9 * (1.0 + packed.square.max_abs());
    unpack_to_augmented(&h, &packed.gamma, tol)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::hive_gt::{check_rhombus_concave, gt_boundary, hive_boundary};
    use crate::spectra::{weyl_trace_check, SpecTuple};

    /// A GT pattern built top-down by choosing each row uniformly inside the
    /// interlacing bounds of the row above.
    fn random_pattern(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> GtPattern {
        let mut top: Vec<f64> = (0..n).map(|_| rng.random_range(-scale..scale)).collect();
        top.sort_by(|a, b| b.total_cmp(a));
        let mut rows = vec![top];
        for k in (1..n).rev() {
            let above = rows.last().unwrap();
            let row: Vec<f64> = (0..k)
                .map(|j| rng.random_range(above[j + 1]..=above[j]))
                .collect();
            rows.push(row);
        }
        rows.reverse();
        GtPattern::from_rows(&rows).unwrap()
    }

    #[test]
    fn two_by_two_boundary_formula() {
        // ν₁ = max(Σλ + μ₁ + γ₁ − σ₁, λ₁ + π₁ − σ₁)
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let g1 = random_pattern(2, 3.0, &mut rng);
            let g2 = random_pattern(2, 3.0, &mut rng);
            let packed = gt_pair_to_square(&g1, &g2, None).unwrap();
            let gamma = packed.gamma.tuple().as_slice().to_vec();
            let lam = g1.top_row().to_vec();
            let mu = g2.top_row().to_vec();
            let b = gt_boundary(&g1).unwrap().a;
            let sigma: Vec<f64> = (0..2).map(|k| gamma[k] + b[k]).collect();
            let pi1 = sigma[0] + g2.get(1, 1);
            let nu1 = (lam[0] + lam[1] + mu[0] + gamma[0] - sigma[0]).max(lam[0] + pi1 - sigma[0]);
            let aug = oct(&g1, &g2, None).unwrap();
            let got = aug.hive.get(1, 1) - aug.hive.get(0, 0);
            assert!((got - nu1).abs() < 1e-9, "{got} vs {nu1}");
        }
    }

    #[test]
    fn outputs_are_augmented_hives() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=6 {
            for _ in 0..10 {
                let g1 = random_pattern(n, 5.0, &mut rng);
                let g2 = random_pattern(n, 5.0, &mut rng);
                let aug = oct(&g1, &g2, None).unwrap();
                let tol = 1e-9 * (1.0 + aug.hive.max_abs());
                assert!(check_rhombus_concave(&aug.hive, tol).is_empty());
                assert!(aug.pattern.is_interlacing(tol));
                let hb = hive_boundary(&aug.hive, tol).unwrap();
                assert_eq!(hb.lambda.len(), n);
                let lam = SpecTuple::new(g1.top_row().to_vec()).unwrap();
                let mu = SpecTuple::new(g2.top_row().to_vec()).unwrap();
                for k in 0..n {
                    assert!((hb.lambda[k] - lam[k]).abs() < tol);
                    assert!((hb.mu[k] - mu[k]).abs() < tol);
                }
                let r = weyl_trace_check(&hb.lambda, &hb.mu, &hb.nu).unwrap();
                assert!(r.passes(), "{r:?}");
                // a-boundary of the output is the sum of the input ones
                let a_out = gt_boundary(&aug.pattern).unwrap().a;
                let a1 = gt_boundary(&g1).unwrap().a;
                let a2 = gt_boundary(&g2).unwrap().a;
                for k in 0..n {
                    assert!((a_out[k] - a1[k] - a2[k]).abs() < tol);
                }
            }
        }
    }

    #[test]
    fn gap_constant_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 2..=6 {
            for _ in 0..5 {
                let g1 = random_pattern(n, 2.0, &mut rng);
                let g2 = random_pattern(n, 2.0, &mut rng);
                let g = default_gap(&g1, &g2);
                let x = oct(&g1, &g2, Some(g)).unwrap();
                let y = oct(&g1, &g2, Some(2.0 * g)).unwrap();
                let dh = x.hive.values().iter().zip(y.hive.values());
                assert!(dh.fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) < 1e-8);
                let dp = x.pattern.entries().iter().zip(y.pattern.entries());
                assert!(dp.fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) < 1e-8);
            }
        }
    }

    #[test]
    fn scaling_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in 2..=5 {
            let g1 = random_pattern(n, 2.0, &mut rng);
            let g2 = random_pattern(n, 2.0, &mut rng);
            let base = oct(&g1, &g2, None).unwrap();
            for t in [0.5, 2.0] {
                let s = oct(&g1.scaled(t), &g2.scaled(t), None).unwrap();
                for (a, b) in s.hive.values().iter().zip(base.hive.values()) {
                    assert!((a - t * b).abs() < 1e-9 * (1.0 + b.abs()));
                }
            }
        }
    }

    #[test]
    fn speyer_matches_excavation_on_gt_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for n in 2..=5 {
            let table = SpeyerTable::build(n, BorderSign::default(), DEFAULT_TILING_BUDGET).unwrap();
            for _ in 0..10 {
                let g1 = random_pattern(n, 4.0, &mut rng);
                let g2 = random_pattern(n, 4.0, &mut rng);
                let k = gt_pair_to_square(&g1, &g2, None).unwrap().square;
                assert!(table.apply(&k).max_abs_diff(&excavate(&k)) < 1e-9);
            }
        }
    }
}
