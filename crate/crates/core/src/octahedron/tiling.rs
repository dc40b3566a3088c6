use serde::{Deserialize, Serialize};

use super::hexagon::{Hexagon, Point};
use crate::error::{Error, Result};

pub const DEFAULT_TILING_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LozengeKind {
    /// `((i,j), (i+1,j−1), (i+2,j−1), (i+1,j))`
    I,
    /// `((i,j), (i,j+1), (i−1,j+2), (i−1,j+1))`
    II,
    /// `((i,j), (i+1,j), (i+1,j+1), (i,j+1))`
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `x + y ≥ n`
    U,
    /// `x + y ≤ n`
    UPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Blue,
    Red,
    Green,
}

/// Half of a unit cell `[a,a+1]×[b,b+1]` cut along its anti-diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct UnitTriangle {
    pub b: usize,
    pub a: usize,
    /// The half containing `(a+1, b+1)`.
    pub upper: bool,
}

impl UnitTriangle {
    pub fn vertices(&self) -> [Point; 3] {
        let (a, b) = (self.a, self.b);
        if self.upper {
            [(a, b + 1), (a + 1, b + 1), (a + 1, b)]
        } else {
            [(a, b + 1), (a, b), (a + 1, b)]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lozenge {
    pub kind: LozengeKind,
    /// The vertex `A`.
    pub anchor: Point,
    pub region: Region,
    pub color: Color,
}

impl Lozenge {
    pub fn new(kind: LozengeKind, anchor: Point, n: usize) -> Result<Self> {
        let (i, j) = anchor;
        let ok = match kind {
            LozengeKind::I => j >= 1 && i + 2 <= n && j <= n,
            LozengeKind::II => i >= 1 && i <= n && j + 2 <= n,
            LozengeKind::III => i < n && j < n,
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "{kind:?} lozenge at ({i},{j}) leaves the {n}-square"
            )));
        }
        let sums = Self::raw_vertices(kind, anchor).map(|p| p.0 + p.1);
        let region = if sums.iter().all(|&s| s >= n) {
            Region::U
        } else if sums.iter().all(|&s| s <= n) {
            Region::UPrime
        } else {
            return Err(Error::Precondition(format!(
                "{kind:?} quadruple at ({i},{j}) crosses the equator"
            )));
        };
        let color = match (kind, region) {
            (LozengeKind::I, Region::U) | (LozengeKind::II, Region::UPrime) => Color::Blue,
            (LozengeKind::I, Region::UPrime) | (LozengeKind::II, Region::U) => Color::Red,
            (LozengeKind::III, _) => Color::Green,
        };
        Ok(Lozenge {
            kind,
            anchor,
            region,
            color,
        })
    }

    fn raw_vertices(kind: LozengeKind, (i, j): Point) -> [Point; 4] {
        match kind {
            LozengeKind::I => [(i, j), (i + 1, j - 1), (i + 2, j - 1), (i + 1, j)],
            LozengeKind::II => [(i, j), (i, j + 1), (i - 1, j + 2), (i - 1, j + 1)],
            LozengeKind::III => [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)],
        }
    }

    /// `[A, B, C, D]`; the short diagonal is `BD`.
    pub fn vertices(&self) -> [Point; 4] {
        Self::raw_vertices(self.kind, self.anchor)
    }

    pub(crate) fn triangles(&self) -> [UnitTriangle; 2] {
        let (i, j) = self.anchor;
        let t = |a, b, upper| UnitTriangle { a, b, upper };
        match self.kind {
            LozengeKind::I => [t(i, j - 1, true), t(i + 1, j - 1, false)],
            LozengeKind::II => [t(i - 1, j, true), t(i - 1, j + 1, false)],
            LozengeKind::III => [t(i, j, false), t(i, j, true)],
        }
    }

    /// The lozenge formed by two edge-adjacent unit triangles, if any.
    pub(crate) fn from_pair(s: UnitTriangle, t: UnitTriangle, n: usize) -> Option<Self> {
        let (up, down) = match (s.upper, t.upper) {
            (true, false) => (s, t),
            (false, true) => (t, s),
            _ => return None,
        };
        let (kind, anchor) = if down.a == up.a + 1 && down.b == up.b {
            (LozengeKind::I, (up.a, up.b + 1))
        } else if down.a == up.a && down.b == up.b + 1 {
            (LozengeKind::II, (up.a + 1, up.b))
        } else if down.a == up.a && down.b == up.b {
            (LozengeKind::III, (up.a, up.b))
        } else {
            return None;
        };
        Lozenge::new(kind, anchor, n).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Upward,
    Downward,
}

/// One of the two triangles on the border edge `((i, n−i), (i+1, n−i−1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BorderTriangle {
    pub edge: usize,
    pub orientation: Orientation,
}

impl BorderTriangle {
    /// `[A, B, C]` with `AC` the border edge.
    pub fn vertices(&self, n: usize) -> [Point; 3] {
        let i = self.edge;
        match self.orientation {
            Orientation::Upward => [(i, n - i), (i + 1, n - i), (i + 1, n - i - 1)],
            Orientation::Downward => [(i, n - i), (i, n - i - 1), (i + 1, n - i - 1)],
        }
    }

    pub fn region(&self) -> Region {
        match self.orientation {
            Orientation::Upward => Region::U,
            Orientation::Downward => Region::UPrime,
        }
    }

    pub(crate) fn triangle(&self, n: usize) -> UnitTriangle {
        UnitTriangle {
            a: self.edge,
            b: n - 1 - self.edge,
            upper: self.orientation == Orientation::Upward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LozengeTiling {
    pub hexagon: Hexagon,
    pub lozenges: Vec<Lozenge>,
    pub triangles: Vec<BorderTriangle>,
}

impl LozengeTiling {
    /// Checks that the pieces partition the hexagon with exactly one border
    /// triangle per equatorial border edge.
    pub fn validate(&self) -> Result<()> {
        let hex = &self.hexagon;
        let n = hex.n;
        let cells = hex_triangles(hex);
        let mut seen = std::collections::HashSet::new();
        let mut cover = |t: UnitTriangle| -> Result<()> {
            if !t.vertices().iter().all(|&p| hex.contains(p)) {
                return Err(Error::Inconsistent(format!("{t:?} lies outside the hexagon")));
            }
            if !seen.insert(t) {
                return Err(Error::Inconsistent(format!("{t:?} covered twice")));
            }
            Ok(())
        };
        for l in &self.lozenges {
            for t in l.triangles() {
                cover(t)?;
            }
        }
        let mut edges = std::collections::HashSet::new();
        for bt in &self.triangles {
            if !hex.equator_cells().contains(&bt.edge) {
                return Err(Error::Inconsistent(format!("{bt:?} is off the equator")));
            }
            if !edges.insert(bt.edge) {
                return Err(Error::Inconsistent(format!(
                    "border edge {} has two border triangles",
                    bt.edge
                )));
            }
            cover(bt.triangle(n))?;
        }
        if edges.len() != hex.equator_cells().len() {
            return Err(Error::Inconsistent("some border edge has no border triangle".into()));
        }
        if seen.len() != cells.len() {
            return Err(Error::Inconsistent(format!(
                "{} of {} unit triangles covered",
                seen.len(),
                cells.len()
            )));
        }
        Ok(())
    }
}

/// Unit triangles inside the hexagon, in scan order (`b`, then `a`, lower
/// half first).
pub(crate) fn hex_triangles(hex: &Hexagon) -> Vec<UnitTriangle> {
    let mut out = Vec::new();
    for b in hex.rows() {
        for a in hex.columns() {
            for upper in [false, true] {
                let t = UnitTriangle { a, b, upper };
                if t.vertices().iter().all(|&p| hex.contains(p)) {
                    out.push(t);
                }
            }
        }
    }
    out
}

struct Search<'a> {
    tris: Vec<UnitTriangle>,
    /// Index of the other half of an equatorial cell.
    mate: Vec<Option<usize>>,
    adj: Vec<Vec<(usize, Lozenge)>>,
    covered: Vec<bool>,
    stack: Vec<Lozenge>,
    budget: usize,
    count: usize,
    hexagon: Hexagon,
    visit: &'a mut dyn FnMut(&LozengeTiling),
}

impl Search<'_> {
    fn free(&self, t: usize) -> bool {
        !self.covered[t] && self.mate[t].is_none_or(|m| !self.covered[m])
    }

    fn run(&mut self, start: usize) -> Result<()> {
        let Some(first) = (start..self.tris.len()).find(|&t| self.free(t)) else {
            return self.emit();
        };
        let mut options: Vec<(usize, usize, Lozenge)> = self.adj[first]
            .iter()
            .map(|&(p, l)| (first, p, l))
            .collect();
        if let Some(m) = self.mate[first] {
            options.extend(self.adj[m].iter().map(|&(p, l)| (m, p, l)));
        }
        for (s, p, l) in options {
            if !self.free(p) {
                continue;
            }
            self.covered[s] = true;
            self.covered[p] = true;
            self.stack.push(l);
            let r = self.run(first + 1);
            self.stack.pop();
            self.covered[s] = false;
            self.covered[p] = false;
            r?;
        }
        Ok(())
    }

    fn emit(&mut self) -> Result<()> {
        if self.count >= self.budget {
            return Err(Error::EnumerationOverflow {
                budget: self.budget,
                count: self.count,
            });
        }
        self.count += 1;
        let mut triangles = Vec::new();
        for (t, tri) in self.tris.iter().enumerate() {
            if self.mate[t].is_some() && !self.covered[t] {
                triangles.push(BorderTriangle {
                    edge: tri.a,
                    orientation: if tri.upper {
                        Orientation::Upward
                    } else {
                        Orientation::Downward
                    },
                });
            }
        }
        let tiling = LozengeTiling {
            hexagon: self.hexagon,
            lozenges: self.stack.clone(),
            triangles,
        };
        (self.visit)(&tiling);
        Ok(())
    }
}

/// Calls `visit` on every lozenge tiling of `hex`, in a deterministic order.
/// Returns the number of tilings, or an overflow error once more than
/// `budget` have been produced.
pub fn for_each_tiling(
    hex: &Hexagon,
    budget: usize,
    mut visit: impl FnMut(&LozengeTiling),
) -> Result<usize> {
    let n = hex.n;
    let tris = hex_triangles(hex);
    let index: std::collections::HashMap<UnitTriangle, usize> =
        tris.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let equatorial = |t: &UnitTriangle| t.a + t.b + 1 == n;
    let mate: Vec<Option<usize>> = tris
        .iter()
        .map(|t| {
            if equatorial(t) {
                index
                    .get(&UnitTriangle {
                        upper: !t.upper,
                        ..*t
                    })
                    .copied()
            } else {
                None
            }
        })
        .collect();
    let mut adj = vec![Vec::new(); tris.len()];
    for (k, t) in tris.iter().enumerate() {
        let neighbours: Vec<UnitTriangle> = if t.upper {
            vec![
                UnitTriangle { a: t.a + 1, b: t.b, upper: false },
                UnitTriangle { a: t.a, b: t.b + 1, upper: false },
                UnitTriangle { a: t.a, b: t.b, upper: false },
            ]
        } else {
            let mut v = vec![UnitTriangle { a: t.a, b: t.b, upper: true }];
            if t.a > 0 {
                v.push(UnitTriangle { a: t.a - 1, b: t.b, upper: true });
            }
            if t.b > 0 {
                v.push(UnitTriangle { a: t.a, b: t.b - 1, upper: true });
            }
            v
        };
        for s in neighbours {
            if let (Some(&p), Some(l)) = (index.get(&s), Lozenge::from_pair(*t, s, n)) {
                adj[k].push((p, l));
            }
        }
        adj[k].sort_by_key(|&(p, _)| p);
    }
    let covered = vec![false; tris.len()];
    let mut search = Search {
        tris,
        mate,
        adj,
        covered,
        stack: Vec::new(),
        budget,
        count: 0,
        hexagon: *hex,
        visit: &mut visit,
    };
    search.run(0)?;
    Ok(search.count)
}

pub fn enumerate_tilings(hex: &Hexagon, budget: usize) -> Result<Vec<LozengeTiling>> {
    let mut out = Vec::new();
    for_each_tiling(hex, budget, |t| out.push(t.clone()))?;
    Ok(out)
}

/// The standard tiling `Ξ₀`. Rows at or above `BE` carry green lozenges, a
/// downward border triangle and blue lozenges from left to right; rows
/// below carry red lozenges, an upward border triangle and green lozenges.
pub fn standard_tiling(hex: &Hexagon) -> Result<LozengeTiling> {
    let n = hex.n;
    let tris = hex_triangles(hex);
    let mut lozenges = Vec::new();
    let mut triangles = Vec::new();
    let broken = |b: usize| Error::Inconsistent(format!("standard tiling breaks down in row {b}"));
    for b in hex.rows() {
        let row: Vec<UnitTriangle> = tris.iter().copied().filter(|t| t.b == b).collect();
        let e = n - 1 - b;
        let pos = row
            .iter()
            .position(|t| t.a == e && t.upper == (b < hex.b.1))
            .ok_or_else(|| broken(b))?;
        let (left, rest) = row.split_at(pos);
        let (border, right) = rest.split_first().ok_or_else(|| broken(b))?;
        for part in [left, right] {
            if part.len() % 2 != 0 {
                return Err(broken(b));
            }
            for pair in part.chunks(2) {
                lozenges.push(Lozenge::from_pair(pair[0], pair[1], n).ok_or_else(|| broken(b))?);
            }
        }
        triangles.push(BorderTriangle {
            edge: e,
            orientation: if border.upper {
                Orientation::Upward
            } else {
                Orientation::Downward
            },
        });
    }
    let tiling = LozengeTiling {
        hexagon: *hex,
        lozenges,
        triangles,
    };
    tiling.validate()?;
    Ok(tiling)
}

#[cfg(test)]
mod tests {
    use super::super::hexagon::build_hexagon;
    use super::*;

    #[test]
    fn colors() {
        let n = 4;
        let l = Lozenge::new(LozengeKind::I, (2, 3), n).unwrap();
        assert_eq!((l.region, l.color), (Region::U, Color::Blue));
        let l = Lozenge::new(LozengeKind::I, (0, 2), n).unwrap();
        assert_eq!((l.region, l.color), (Region::UPrime, Color::Red));
        let l = Lozenge::new(LozengeKind::II, (2, 2), n).unwrap();
        assert_eq!((l.region, l.color), (Region::U, Color::Red));
        let l = Lozenge::new(LozengeKind::II, (1, 0), n).unwrap();
        assert_eq!((l.region, l.color), (Region::UPrime, Color::Blue));
        let l = Lozenge::new(LozengeKind::III, (2, 2), n).unwrap();
        assert_eq!(l.color, Color::Green);
        assert!(Lozenge::new(LozengeKind::III, (1, 2), n).is_err());
    }

    #[test]
    fn lozenge_triangles_match_vertices() {
        let n = 6;
        for kind in [LozengeKind::I, LozengeKind::II, LozengeKind::III] {
            for i in 0..=n {
                for j in 0..=n {
                    let Ok(l) = Lozenge::new(kind, (i, j), n) else { continue };
                    let [t0, t1] = l.triangles();
                    let mut pts: Vec<Point> =
                        t0.vertices().into_iter().chain(t1.vertices()).collect();
                    pts.sort();
                    pts.dedup();
                    let mut vs = l.vertices().to_vec();
                    vs.sort();
                    assert_eq!(pts, vs);
                    assert_eq!(Lozenge::from_pair(t0, t1, n), Some(l));
                }
            }
        }
    }

    #[test]
    fn unit_hexagon_has_two_tilings() {
        for n in 2..8 {
            let hex = build_hexagon(n, (1, n - 1)).unwrap();
            let all = enumerate_tilings(&hex, DEFAULT_TILING_BUDGET).unwrap();
            assert_eq!(all.len(), 2, "n={n}");
            for t in &all {
                t.validate().unwrap();
                assert_eq!(t.triangles.len(), 2);
            }
        }
    }

    #[test]
    fn standard_tiling_is_enumerated() {
        for n in 2..7 {
            for i in 1..n {
                for j in 1..n {
                    let hex = build_hexagon(n, (i, j)).unwrap();
                    let std = standard_tiling(&hex).unwrap();
                    let all = enumerate_tilings(&hex, DEFAULT_TILING_BUDGET).unwrap();
                    let key = |t: &LozengeTiling| {
                        let mut l: Vec<_> = t
                            .lozenges
                            .iter()
                            .map(|z| (z.kind, z.anchor))
                            .collect();
                        l.sort();
                        let mut b: Vec<_> = t
                            .triangles
                            .iter()
                            .map(|z| (z.edge, z.orientation == Orientation::Upward))
                            .collect();
                        b.sort();
                        (l, b)
                    };
                    assert!(all.iter().any(|t| key(t) == key(&std)), "n={n} v=({i},{j})");
                    let mut keys: Vec<_> = all.iter().map(key).collect();
                    keys.sort();
                    keys.dedup();
                    assert_eq!(keys.len(), all.len());
                    for t in &all {
                        t.validate().unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn standard_tiling_colors() {
        let hex = build_hexagon(6, (2, 3)).unwrap();
        let t = standard_tiling(&hex).unwrap();
        for l in &t.lozenges {
            let above = l.vertices().iter().all(|p| p.1 >= hex.b.1);
            match (l.region, above) {
                (Region::U, true) => assert_eq!(l.color, Color::Blue),
                (Region::UPrime, true) => assert_eq!(l.color, Color::Green),
                (Region::U, false) => assert_eq!(l.color, Color::Green),
                (Region::UPrime, false) => assert_eq!(l.color, Color::Red),
            }
        }
    }

    #[test]
    fn budget_overflow_reports_partial_count() {
        let hex = build_hexagon(6, (3, 3)).unwrap();
        match for_each_tiling(&hex, 5, |_| {}) {
            Err(Error::EnumerationOverflow { budget, count }) => {
                assert_eq!((budget, count), (5, 5));
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_missing_piece() {
        let hex = build_hexagon(4, (2, 2)).unwrap();
        let mut t = standard_tiling(&hex).unwrap();
        t.lozenges.pop();
        assert!(t.validate().is_err());
        let mut t = standard_tiling(&hex).unwrap();
        t.triangles.pop();
        assert!(t.validate().is_err());
    }
}
