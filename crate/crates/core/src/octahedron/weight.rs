use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::hexagon::{build_hexagon, Hexagon, Point};
use super::square::SquareFunction;
use super::tiling::{for_each_tiling, BorderTriangle, Color, Lozenge, LozengeTiling, DEFAULT_TILING_BUDGET};
use crate::error::Result;

/// Sign convention for border-triangle weights `±(1/3)(k̃(A) − k̃(B))`.
///
/// Only [`BorderSign::BMinusA`] makes the tiling maximum agree with the
/// octahedron recurrence; the other value is kept for mutation testing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BorderSign {
    AMinusB,
    #[default]
    BMinusA,
}

/// A linear functional on `{0,…,n}²` with coefficients in units of `1/3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    n: usize,
    thirds: Vec<i32>,
}

impl LinearForm {
    pub fn zero(n: usize) -> Self {
        LinearForm {
            n,
            thirds: vec![0; (n + 1) * (n + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, p: Point, thirds: i32) {
        self.thirds[p.0 * (self.n + 1) + p.1] += thirds;
    }

    /// Coefficient at `p`, in units of `1/3`.
    pub fn thirds(&self, p: Point) -> i32 {
        self.thirds[p.0 * (self.n + 1) + p.1]
    }

    /// Non-zero coefficients in units of `1/3`, in row-major order.
    pub fn terms(&self) -> Vec<(Point, i32)> {
        let m = self.n + 1;
        self.thirds
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| ((k / m, k % m), c))
            .collect()
    }

    pub fn evaluate(&self, k: &SquareFunction) -> f64 {
        debug_assert_eq!(k.n(), self.n);
        let s: f64 = self
            .thirds
            .iter()
            .zip(k.values())
            .filter(|(&c, _)| c != 0)
            .map(|(&c, &x)| c as f64 * x)
            .sum();
        s / 3.0
    }

    fn sparse(&self) -> Vec<(u32, f64)> {
        self.thirds
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k as u32, c as f64))
            .collect()
    }
}

fn lozenge_form_into(f: &mut LinearForm, l: &Lozenge, scale: i32) {
    let [a, b, c, d] = l.vertices();
    f.add(a, scale);
    f.add(c, scale);
    f.add(b, -scale);
    f.add(d, -scale);
}

fn border_form_into(f: &mut LinearForm, t: &BorderTriangle, sign: BorderSign) {
    let [a, b, _] = t.vertices(f.n);
    let s = match sign {
        BorderSign::AMinusB => 1,
        BorderSign::BMinusA => -1,
    };
    f.add(a, s);
    f.add(b, -s);
}

/// `(1/3)(k̃(B) + k̃(C) − k̃(D) + k̃(E) + k̃(F))`.
pub fn hexagon_form(hex: &Hexagon) -> LinearForm {
    let mut f = LinearForm::zero(hex.n);
    for p in [hex.b, hex.c, hex.e, hex.f] {
        f.add(p, 1);
    }
    f.add(hex.d, -1);
    f
}

/// `(1/3)(−k̃(A) + 2k̃(B) + 2k̃(F))`.
pub fn hexagon_form_alt(hex: &Hexagon) -> LinearForm {
    let mut f = LinearForm::zero(hex.n);
    f.add(hex.a, -1);
    f.add(hex.b, 2);
    f.add(hex.f, 2);
    f
}

/// `(1/3)(−k̃(A) + k̃(B) − k̃(C) + k̃(D) − k̃(E) + k̃(F))`, the excess of the
/// red lozenge weights over the blue ones in any tiling of `hex`.
pub fn red_blue_residual_form(hex: &Hexagon) -> LinearForm {
    let mut f = LinearForm::zero(hex.n);
    for (p, c) in [
        (hex.a, -1),
        (hex.b, 1),
        (hex.c, -1),
        (hex.d, 1),
        (hex.e, -1),
        (hex.f, 1),
    ] {
        f.add(p, c);
    }
    f
}

pub fn tiling_form(t: &LozengeTiling, sign: BorderSign) -> LinearForm {
    let mut f = hexagon_form(&t.hexagon);
    for l in &t.lozenges {
        lozenge_form_into(&mut f, l, 1);
    }
    for b in &t.triangles {
        border_form_into(&mut f, b, sign);
    }
    f
}

/// Twice the blue lozenges, no red lozenges, and the modified hexagon term.
pub fn tiling_form_alt(t: &LozengeTiling, sign: BorderSign) -> LinearForm {
    let mut f = hexagon_form_alt(&t.hexagon);
    for l in &t.lozenges {
        match l.color {
            Color::Blue => lozenge_form_into(&mut f, l, 2),
            Color::Green => lozenge_form_into(&mut f, l, 1),
            Color::Red => {}
        }
    }
    for b in &t.triangles {
        border_form_into(&mut f, b, sign);
    }
    f
}

/// `Σ_red wt − Σ_blue wt` of a tiling.
pub fn red_minus_blue_form(t: &LozengeTiling) -> LinearForm {
    let mut f = LinearForm::zero(t.hexagon.n);
    for l in &t.lozenges {
        match l.color {
            Color::Red => lozenge_form_into(&mut f, l, 1),
            Color::Blue => lozenge_form_into(&mut f, l, -1),
            Color::Green => {}
        }
    }
    f
}

pub fn lozenge_weight(l: &Lozenge, k: &SquareFunction) -> f64 {
    let [a, b, c, d] = l.vertices();
    (k.at(a) + k.at(c) - k.at(b) - k.at(d)) / 3.0
}

pub fn border_weight(t: &BorderTriangle, k: &SquareFunction, sign: BorderSign) -> f64 {
    let [a, b, _] = t.vertices(k.n());
    match sign {
        BorderSign::AMinusB => (k.at(a) - k.at(b)) / 3.0,
        BorderSign::BMinusA => (k.at(b) - k.at(a)) / 3.0,
    }
}

pub fn hexagon_weight(hex: &Hexagon, k: &SquareFunction) -> f64 {
    (k.at(hex.b) + k.at(hex.c) - k.at(hex.d) + k.at(hex.e) + k.at(hex.f)) / 3.0
}

pub fn hexagon_weight_alt(hex: &Hexagon, k: &SquareFunction) -> f64 {
    (-k.at(hex.a) + 2.0 * k.at(hex.b) + 2.0 * k.at(hex.f)) / 3.0
}

/// `w_Ξ` with the calibrated border sign.
pub fn tiling_weight(t: &LozengeTiling, k: &SquareFunction) -> f64 {
    tiling_weight_with(t, k, BorderSign::default())
}

pub fn tiling_weight_with(t: &LozengeTiling, k: &SquareFunction, sign: BorderSign) -> f64 {
    let lozenges: f64 = t.lozenges.iter().map(|l| lozenge_weight(l, k)).sum();
    let borders: f64 = t.triangles.iter().map(|b| border_weight(b, k, sign)).sum();
    lozenges + borders + hexagon_weight(&t.hexagon, k)
}

pub fn tiling_weight_alt(t: &LozengeTiling, k: &SquareFunction) -> f64 {
    tiling_weight_alt_with(t, k, BorderSign::default())
}

pub fn tiling_weight_alt_with(t: &LozengeTiling, k: &SquareFunction, sign: BorderSign) -> f64 {
    let mut s = hexagon_weight_alt(&t.hexagon, k);
    for l in &t.lozenges {
        match l.color {
            Color::Blue => s += 2.0 * lozenge_weight(l, k),
            Color::Green => s += lozenge_weight(l, k),
            Color::Red => {}
        }
    }
    s + t.triangles.iter().map(|b| border_weight(b, k, sign)).sum::<f64>()
}

/// The distinct tiling forms of one hexagon, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct SpeyerForms {
    pub hexagon: Hexagon,
    /// Number of tilings enumerated.
    pub tilings: usize,
    forms: Vec<LinearForm>,
    sparse: Vec<Vec<(u32, f64)>>,
}

impl SpeyerForms {
    pub fn build(n: usize, v: Point, sign: BorderSign, budget: usize) -> Result<Self> {
        let hexagon = build_hexagon(n, v)?;
        let mut seen: HashSet<LinearForm> = HashSet::new();
        let mut forms = Vec::new();
        let tilings = for_each_tiling(&hexagon, budget, |t| {
            let f = tiling_form(t, sign);
            if seen.insert(f.clone()) {
                forms.push(f);
            }
        })?;
        let sparse = forms.iter().map(LinearForm::sparse).collect();
        Ok(SpeyerForms {
            hexagon,
            tilings,
            forms,
            sparse,
        })
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    /// `max_Ξ w_Ξ(k̃)`.
    pub fn evaluate(&self, k: &SquareFunction) -> f64 {
        let vals = k.values();
        let best = self
            .sparse
            .iter()
            .map(|f| f.iter().map(|&(i, c)| c * vals[i as usize]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        best / 3.0
    }
}

/// Precomputed forms for every interior point of an `n`-square.
#[derive(Clone, Debug)]
pub struct SpeyerTable {
    n: usize,
    entries: Vec<SpeyerForms>,
}

impl SpeyerTable {
    pub fn build(n: usize, sign: BorderSign, budget: usize) -> Result<Self> {
        let mut entries = Vec::new();
        for i in 1..n {
            for j in 1..n {
                entries.push(SpeyerForms::build(n, (i, j), sign, budget)?);
            }
        }
        Ok(SpeyerTable { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, v: Point) -> &SpeyerForms {
        &self.entries[(v.0 - 1) * (self.n - 1) + (v.1 - 1)]
    }

    /// `h̃` with the square's boundary copied from `k̃` and every interior
    /// value given by the tiling maximum.
    pub fn apply(&self, k: &SquareFunction) -> SquareFunction {
        let n = self.n;
        let mut h = k.clone();
        for i in 1..n {
            for j in 1..n {
                h.set(i, j, self.get((i, j)).evaluate(k));
            }
        }
        h
    }
}

/// `max_Ξ w_Ξ(k̃)` over all tilings of the hexagon centred at `v`.
pub fn speyer_value(v: Point, k: &SquareFunction) -> Result<f64> {
    Ok(SpeyerForms::build(k.n(), v, BorderSign::default(), DEFAULT_TILING_BUDGET)?.evaluate(k))
}
