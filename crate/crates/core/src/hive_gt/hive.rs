use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::SpecTuple;

/// A real function on the triangle `T = {(i, j) : 0 ≤ i ≤ j ≤ n}`.
///
/// Stored densely row by row: `(i, j) ↦ j(j+1)/2 + i`.
/// Rhombus concavity is not enforced on construction; use
/// [`check_rhombus_concave`] to validate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hive {
    n: usize,
    values: Vec<f64>,
}

#[inline]
pub(crate) fn tri_index(i: usize, j: usize) -> usize {
    j * (j + 1) / 2 + i
}

impl Hive {
    pub fn zeros(n: usize) -> Self {
        Hive {
            n,
            values: vec![0.0; tri_index(0, n + 1)],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(tri_index(0, n + 1));
        for j in 0..=n {
            for i in 0..=j {
                values.push(f(i, j));
            }
        }
        Hive { n, values }
    }

    /// Rows `j = 0..=n`, row `j` holding `h(0,j), …, h(j,j)`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidHive("no rows".into()));
        }
        let n = rows.len() - 1;
        let mut values = Vec::with_capacity(tri_index(0, n + 1));
        for (j, row) in rows.iter().enumerate() {
            if row.len() != j + 1 {
                return Err(Error::InvalidHive(format!(
                    "row {j} has {} values, expected {}",
                    row.len(),
                    j + 1
                )));
            }
            values.extend_from_slice(row);
        }
        Ok(Hive { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i <= j && j <= self.n);
        self.values[tri_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i <= j && j <= self.n);
        self.values[tri_index(i, j)] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[tri_index(0, j)..tri_index(0, j + 1)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `1e-9 · (1 + max |h|)`; hive entries grow like `n²`.
    pub fn default_tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.max_abs())
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        0 <= i && i <= j && j <= self.n as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RhombusKind {
    /// `((i,j), (i+1,j), (i+2,j+1), (i+1,j+1))`
    I,
    /// `((i,j), (i+1,j+1), (i+1,j+2), (i,j+1))`
    II,
    /// `((i,j), (i,j-1), (i+1,j-1), (i+1,j))`
    III,
}

/// A unit rhombus `ABCD` with long diagonal `AC` and short diagonal `BD`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rhombus {
    pub kind: RhombusKind,
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub c: (usize, usize),
    pub d: (usize, usize),
}

impl Rhombus {
    fn at(kind: RhombusKind, i: i64, j: i64) -> [(i64, i64); 4] {
        match kind {
            RhombusKind::I => [(i, j), (i + 1, j), (i + 2, j + 1), (i + 1, j + 1)],
            RhombusKind::II => [(i, j), (i + 1, j + 1), (i + 1, j + 2), (i, j + 1)],
            RhombusKind::III => [(i, j), (i, j - 1), (i + 1, j - 1), (i + 1, j)],
        }
    }

    /// `h(B) + h(D) - h(A) - h(C)`; non-negative iff concave across this rhombus.
    pub fn slack(&self, h: &Hive) -> f64 {
        h.get(self.b.0, self.b.1) + h.get(self.d.0, self.d.1)
            - h.get(self.a.0, self.a.1)
            - h.get(self.c.0, self.c.1)
    }
}

/// Every rhombus of the three kinds lying inside `T` for side `n`.
pub fn rhombi(n: usize) -> Vec<Rhombus> {
    let n = n as i64;
    let inside = |(i, j): (i64, i64)| 0 <= i && i <= j && j <= n;
    let mut out = Vec::new();
    for kind in [RhombusKind::I, RhombusKind::II, RhombusKind::III] {
        for j in 0..=n + 1 {
            for i in 0..=n {
                let pts = Rhombus::at(kind, i, j);
                if pts.iter().all(|&p| inside(p)) {
                    let u = |p: (i64, i64)| (p.0 as usize, p.1 as usize);
                    out.push(Rhombus {
                        kind,
                        a: u(pts[0]),
                        b: u(pts[1]),
                        c: u(pts[2]),
                        d: u(pts[3]),
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhombusViolation {
    pub rhombus: Rhombus,
    /// `h(A) + h(C) - h(B) - h(D)`, positive.
    pub excess: f64,
}

/// Empty iff `h(A) + h(C) ≤ h(B) + h(D) + tol` for every rhombus in `T`.
pub fn check_rhombus_concave(h: &Hive, tol: f64) -> Vec<RhombusViolation> {
    rhombi(h.n())
        .into_iter()
        .filter_map(|r| {
            let excess = -r.slack(h);
            (excess > tol).then_some(RhombusViolation { rhombus: r, excess })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HiveBoundary {
    pub lambda: SpecTuple,
    pub mu: SpecTuple,
    pub nu: SpecTuple,
}

/// Reads `λ ⊞ μ → ν` off the three edges of `h`.
///
/// `λ_i = h(0,i) - h(0,i-1)`, `μ_i = h(i,n) - h(i-1,n)`,
/// `ν_i = h(i,i) - h(i-1,i-1)`.
pub fn hive_boundary(h: &Hive, tol: f64) -> Result<HiveBoundary> {
    let n = h.n();
    if n == 0 {
        return Err(Error::InvalidHive("side length 0 has no boundary".into()));
    }
    let lambda: Vec<f64> = (1..=n).map(|i| h.get(0, i) - h.get(0, i - 1)).collect();
    let mu: Vec<f64> = (1..=n).map(|i| h.get(i, n) - h.get(i - 1, n)).collect();
    let nu: Vec<f64> = (1..=n)
        .map(|i| h.get(i, i) - h.get(i - 1, i - 1))
        .collect();
    let wrap = |name: &str, v: Vec<f64>| {
        SpecTuple::with_tolerance(v, tol)
            .map_err(|e| Error::InvalidHive(format!("{name} boundary: {e}")))
    };
    Ok(HiveBoundary {
        lambda: wrap("lambda", lambda)?,
        mu: wrap("mu", mu)?,
        nu: wrap("nu", nu)?,
    })
}
