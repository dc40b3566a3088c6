use super::square::SquareFunction;

/// Values on `{(x,y,z,w) ∈ ℤ⁴_{≥0} : x+y+z+w = n}`, indexed by `(x,y,z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TetrahedronField {
    n: usize,
    values: Vec<f64>,
}

impl TetrahedronField {
    pub fn new(n: usize) -> Self {
        let m = n + 1;
        TetrahedronField {
            n,
            values: vec![f64::NAN; m * m * m],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, x: usize, y: usize, z: usize, w: usize) -> usize {
        debug_assert_eq!(x + y + z + w, self.n);
        let m = self.n + 1;
        (x * m + y) * m + z
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize, w: usize) -> f64 {
        self.values[self.index(x, y, z, w)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, w: usize, v: f64) {
        let k = self.index(x, y, z, w);
        self.values[k] = v;
    }

    /// Seeds the faces `w = 0` and `z = 0` from `k̃`: `[x,y,z,0] ↔ U′ ∋ (x,y)`,
    /// `[x,y,0,w] ↔ U ∋ (n−y, n−x)`.
    pub fn seed_lower(k: &SquareFunction) -> Self {
        let n = k.n();
        let mut t = TetrahedronField::new(n);
        for x in 0..=n {
            for y in 0..=n - x {
                t.set(x, y, n - x - y, 0, k.get(x, y));
                t.set(x, y, 0, n - x - y, k.get(n - y, n - x));
            }
        }
        t
    }

    /// Seeds the faces `x = 0` and `y = 0` from `h̃`: `[0,y,z,w] ↔ T ∋ (w, n−z)`,
    /// `[x,0,z,w] ↔ T′ ∋ (n−z, w)`.
    pub fn seed_upper(h: &SquareFunction) -> Self {
        let n = h.n();
        let mut t = TetrahedronField::new(n);
        for z in 0..=n {
            for w in 0..=n - z {
                t.set(0, n - z - w, z, w, h.get(w, n - z));
                t.set(n - z - w, 0, z, w, h.get(n - z, w));
            }
        }
        t
    }

    /// Fills every point with `z, w ≥ 1`, in increasing `z + w`.
    pub fn excavate_down(&mut self) {
        let n = self.n;
        for s in 2..=n {
            for z in 1..s {
                let w = s - z;
                for x in 0..=n - s {
                    let y = n - s - x;
                    let v = octahedron_rule(
                        self.get(x + 1, y, z, w - 1),
                        self.get(x, y + 1, z - 1, w),
                        self.get(x + 1, y, z - 1, w),
                        self.get(x, y + 1, z, w - 1),
                        self.get(x + 1, y + 1, z - 1, w - 1),
                    );
                    self.set(x, y, z, w, v);
                }
            }
        }
    }

    /// Fills every point with `x, y ≥ 1`, in increasing `x + y`.
    pub fn excavate_up(&mut self) {
        let n = self.n;
        for s in 2..=n {
            for x in 1..s {
                let y = s - x;
                for z in 0..=n - s {
                    let w = n - s - z;
                    let v = octahedron_rule(
                        self.get(x, y - 1, z + 1, w),
                        self.get(x - 1, y, z, w + 1),
                        self.get(x, y - 1, z, w + 1),
                        self.get(x - 1, y, z + 1, w),
                        self.get(x - 1, y - 1, z + 1, w + 1),
                    );
                    self.set(x, y, z, w, v);
                }
            }
        }
    }

    /// Reads `h̃` off the faces `x = 0` and `y = 0`.
    pub fn upper_faces(&self) -> SquareFunction {
        let n = self.n;
        SquareFunction::from_fn(n, |i, j| {
            if i <= j {
                self.get(0, j - i, n - j, i)
            } else {
                self.get(i - j, 0, n - i, j)
            }
        })
    }

    /// Reads `k̃` off the faces `z = 0` and `w = 0`.
    pub fn lower_faces(&self) -> SquareFunction {
        let n = self.n;
        SquareFunction::from_fn(n, |i, j| {
            if i + j <= n {
                self.get(i, j, n - i - j, 0)
            } else {
                self.get(n - j, n - i, 0, i + j - n)
            }
        })
    }
}

/// `max(p1 + p2, q1 + q2) − opposite`.
#[inline]
fn octahedron_rule(p1: f64, p2: f64, q1: f64, q2: f64, opposite: f64) -> f64 {
    (p1 + p2).max(q1 + q2) - opposite
}

/// Runs the tropical octahedron recurrence from `k̃` (lower faces) to `h̃`
/// (upper faces).
pub fn excavate(k: &SquareFunction) -> SquareFunction {
    let mut t = TetrahedronField::seed_lower(k);
    t.excavate_down();
    t.upper_faces()
}

/// Runs the recurrence backwards from `h̃` to `k̃`.
pub fn inverse_excavate(h: &SquareFunction) -> SquareFunction {
    let mut t = TetrahedronField::seed_upper(h);
    t.excavate_up();
    t.lower_faces()
}
