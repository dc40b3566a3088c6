use std::fmt::Write as _;

use super::random_gt_pattern;
use crate::error::{Error, Result};
use crate::hive_gt::{check_rhombus_concave, hive_boundary};
use crate::octahedron::{
    default_gap, excavate, gt_pair_to_square, inverse_excavate, oct, BorderSign, SpeyerTable,
    SquareFunction, DEFAULT_TILING_BUDGET,
};
use crate::rmt::RngStream;
use crate::spectra::weyl_trace_check;

pub const MAX_EQUIVALENCE_N: usize = 8;

/// Spread of the random GT patterns fed to the battery.
const PATTERN_SCALE: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceOptions {
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Sign convention for border triangles in the tiling forms. Only the
    /// default agrees with excavation; the other exists to prove the suite
    /// notices.
    pub border_sign: BorderSign,
}

impl EquivalenceOptions {
    pub fn new(max_n: usize, trials: usize, seed: u64) -> Self {
        EquivalenceOptions {
            max_n,
            trials,
            seed,
            border_sign: BorderSign::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub n: usize,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub options: EquivalenceOptions,
    pub checks: Vec<CheckOutcome>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst(&self, name: &str) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.name == name)
            .fold(0.0, |m, c| m.max(c.worst))
    }

    /// Fixed-width text; identical options give identical bytes.
    pub fn render(&self) -> String {
        let o = &self.options;
        let mut out = format!(
            "equivalence max_n={} trials={} seed={} border_sign={:?}\n",
            o.max_n, o.trials, o.seed, o.border_sign
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<10} n={:<2} cases={:<5} worst={:.3e} tol={:.0e} {}",
                c.name,
                c.n,
                c.cases,
                c.worst,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "{}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn stream(seed: u64, battery: u64, n: usize, t: usize) -> RngStream {
    RngStream::new(seed, (battery << 40) | ((n as u64) << 32) | t as u64)
}

fn outcome(name: &'static str, n: usize, cases: usize, worst: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        n,
        cases,
        worst,
        tolerance,
        // NaN fails
        passed: worst <= tolerance,
    }
}

fn speyer_check(o: &EquivalenceOptions, n: usize) -> Result<CheckOutcome> {
    let table = SpeyerTable::build(n, o.border_sign, DEFAULT_TILING_BUDGET)?;
    let mut worst: f64 = 0.0;
    for t in 0..o.trials {
        let mut rng = stream(o.seed, 1, n, t);
        let g1 = random_gt_pattern(n, PATTERN_SCALE, &mut rng)?;
        let g2 = random_gt_pattern(n, PATTERN_SCALE, &mut rng)?;
        let k = gt_pair_to_square(&g1, &g2, None)?.square;
        worst = worst.max(table.apply(&k).max_abs_diff(&excavate(&k)));
    }
    Ok(outcome("speyer", n, o.trials, worst, 1e-9))
}

fn round_trip_check(o: &EquivalenceOptions, n: usize) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for t in 0..o.trials {
        let mut rng = stream(o.seed, 2, n, t);
        // alternate between generic squares and packed GT pairs
        let k = if t % 2 == 0 {
            SquareFunction::from_fn(n, |_, _| PATTERN_SCALE * (2.0 * rng.uniform() - 1.0))
        } else {
            let g1 = random_gt_pattern(n, PATTERN_SCALE, &mut rng)?;
            let g2 = random_gt_pattern(n, PATTERN_SCALE, &mut rng)?;
            gt_pair_to_square(&g1, &g2, None)?.square
        };
        worst = worst.max(inverse_excavate(&excavate(&k)).max_abs_diff(&k));
    }
    Ok(outcome("round_trip", n, o.trials, worst, 1e-9))
}

fn gamma_check(o: &EquivalenceOptions, n: usize) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for t in 0..o.trials {
        let mut rng = stream(o.seed, 3, n, t);
        let g1 = random_gt_pattern(n, PATTERN_SCALE, &mut rng)?;
        let g2 = random_gt_pattern(n, PATTERN_SCALE, &mut rng)?;
        let g = default_gap(&g1, &g2);
        let x = oct(&g1, &g2, Some(g))?;
        let y = oct(&g1, &g2, Some(2.0 * g))?;
        let pairs = x
            .hive
            .values()
            .iter()
            .zip(y.hive.values())
            .chain(x.pattern.entries().iter().zip(y.pattern.entries()));
        worst = pairs.fold(worst, |m, (a, b)| m.max((a - b).abs()));
    }
    Ok(outcome("gamma", n, o.trials, worst, 1e-8))
}

/// Largest violation among concavity, interlacing, Weyl and trace; zero
/// when the output is valid.
fn validity_check(o: &EquivalenceOptions, n: usize) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for t in 0..o.trials {
        let mut rng = stream(o.seed, 4, n, t);
        let g1 = random_gt_pattern(n, PATTERN_SCALE, &mut rng)?;
        let g2 = random_gt_pattern(n, PATTERN_SCALE, &mut rng)?;
        let aug = oct(&g1, &g2, None)?;
        let tol = aug.hive.default_tolerance();
        for v in check_rhombus_concave(&aug.hive, 0.0) {
            worst = worst.max(v.excess);
        }
        for v in aug.pattern.interlacing_violations(0.0) {
            worst = worst.max(v.excess);
        }
        let hb = hive_boundary(&aug.hive, tol)?;
        let w = weyl_trace_check(hb.lambda.as_slice(), hb.mu.as_slice(), hb.nu.as_slice())?;
        worst = worst.max(w.trace_residual.abs());
        for v in &w.weyl_violations {
            worst = worst.max(v.excess);
        }
    }
    Ok(outcome("validity", n, o.trials, worst, 1e-9))
}

/// Oracle equivalence of the tiling maximum and excavation, the round trip
/// through the inverse recurrence, independence of the gap constant, and
/// validity of the outputs, for every `2 ≤ n ≤ max_n`.
pub fn run_equivalence_suite(o: &EquivalenceOptions) -> Result<EquivalenceReport> {
    if o.max_n < 2 || o.max_n > MAX_EQUIVALENCE_N {
        return Err(Error::Precondition(format!(
            "max n must lie in 2..={MAX_EQUIVALENCE_N} (got {})",
            o.max_n
        )));
    }
    if o.trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let mut checks = Vec::new();
    for n in 2..=o.max_n {
        checks.push(speyer_check(o, n)?);
        checks.push(round_trip_check(o, n)?);
        checks.push(gamma_check(o, n)?);
        checks.push(validity_check(o, n)?);
    }
    Ok(EquivalenceReport { options: *o, checks })
}
