use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = (usize, usize);

/// The excavation hexagon `ABCDEF` centred at an interior point `v`.
///
/// The equator `AD` lies on the anti-diagonal `x + y = n`. The hexagon is the
/// set of points with `A.x ≤ x ≤ D.x`, `D.y ≤ y ≤ A.y` and
/// `B.x + B.y ≤ x + y ≤ E.x + E.y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hexagon {
    pub n: usize,
    pub center: Point,
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
    pub e: Point,
    pub f: Point,
}

pub fn build_hexagon(n: usize, v: Point) -> Result<Hexagon> {
    let (i, j) = v;
    if i == 0 || j == 0 || i >= n || j >= n {
        return Err(Error::Precondition(format!(
            "hexagon centre ({i},{j}) is not interior to the {n}-square"
        )));
    }
    let [a, b, c, d, e, f] = if i <= j {
        [
            (0, n),
            (0, j),
            (i, j - i),
            (n + i - j, j - i),
            (n + i - j, j),
            (i, n),
        ]
    } else {
        [
            (i - j, n + j - i),
            (i - j, j),
            (i, 0),
            (n, 0),
            (n, j),
            (i, n + j - i),
        ]
    };
    Ok(Hexagon {
        n,
        center: v,
        a,
        b,
        c,
        d,
        e,
        f,
    })
}

impl Hexagon {
    pub fn vertices(&self) -> [Point; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    /// `O = BE ∩ AD`.
    pub fn equator_center(&self) -> Point {
        let y = self.b.1;
        (self.n - y, y)
    }

    pub fn contains(&self, p: Point) -> bool {
        let s = p.0 + p.1;
        p.0 >= self.a.0
            && p.0 <= self.d.0
            && p.1 >= self.d.1
            && p.1 <= self.a.1
            && s >= self.b.0 + self.b.1
            && s <= self.e.0 + self.e.1
    }

    /// Cells `(a, n−1−a)` whose anti-diagonal is a border edge on the equator.
    pub fn equator_cells(&self) -> std::ops::Range<usize> {
        self.a.0..self.d.0
    }

    /// Row range `b` of unit cells meeting the hexagon.
    pub fn rows(&self) -> std::ops::Range<usize> {
        self.d.1..self.a.1
    }

    pub fn columns(&self) -> std::ops::Range<usize> {
        self.a.0..self.d.0
    }
}
