//! The truncated q-lattice `{s q^n : s = ±1, n_lo <= n <= n_hi}`, complex
//! functions sampled on it, Jackson integration and the weighted inner
//! product `<f, g> = ∫ f conj(g) |x|^(2 alpha + 1) d_q x`.

use std::io::{Read, Write};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::qcore::{neumaier_sum, QContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_i8(s: i8) -> Result<Sign> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(QError::Shape(format!("sign must be +1 or -1, got {other}"))),
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Exponent window `[n_lo, n_hi]` of the lattice, with `margin` exponents at
/// each end reserved for operator stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGrid {
    ctx: QContext,
    n_lo: i64,
    n_hi: i64,
    margin: usize,
}

pub const DEFAULT_GRID_LO: i64 = -40;
pub const DEFAULT_GRID_HI: i64 = 80;
pub const DEFAULT_MARGIN: usize = 2;

impl LatticeGrid {
    pub fn new(ctx: QContext, n_lo: i64, n_hi: i64, margin: usize) -> Result<Self> {
        if n_lo > n_hi {
            return Err(QError::InvalidParameter(format!(
                "grid needs n_lo <= n_hi, got [{n_lo}, {n_hi}]"
            )));
        }
        if (n_hi - n_lo) < 2 * margin as i64 {
            return Err(QError::InvalidParameter(format!(
                "grid [{n_lo}, {n_hi}] too narrow for margin {margin}"
            )));
        }
        Ok(LatticeGrid {
            ctx,
            n_lo,
            n_hi,
            margin,
        })
    }

    /// `[-40, 80]` with margin 2.
    pub fn default_for(ctx: QContext) -> Self {
        LatticeGrid {
            ctx,
            n_lo: DEFAULT_GRID_LO,
            n_hi: DEFAULT_GRID_HI,
            margin: DEFAULT_MARGIN,
        }
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn n_lo(&self) -> i64 {
        self.n_lo
    }

    pub fn n_hi(&self) -> i64 {
        self.n_hi
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Number of exponents (points per sign).
    pub fn n_exponents(&self) -> usize {
        (self.n_hi - self.n_lo + 1) as usize
    }

    /// Total number of lattice points.
    pub fn len(&self) -> usize {
        2 * self.n_exponents()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, sign: Sign, n: i64) -> f64 {
        sign.as_f64() * self.ctx.q().powi(n as i32)
    }

    pub fn index(&self, sign: Sign, n: i64) -> Option<usize> {
        if n < self.n_lo || n > self.n_hi {
            return None;
        }
        let off = (n - self.n_lo) as usize;
        Some(match sign {
            Sign::Plus => off,
            Sign::Minus => self.n_exponents() + off,
        })
    }

    /// `(sign, exponent)` of storage index `i`.
    pub fn point(&self, i: usize) -> (Sign, i64) {
        let m = self.n_exponents();
        if i < m {
            (Sign::Plus, self.n_lo + i as i64)
        } else {
            (Sign::Minus, self.n_lo + (i - m) as i64)
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (Sign, i64)> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Jackson measure of the point `±q^n`: `(1 - q) q^n`.
    pub fn jackson_weight(&self, n: i64) -> f64 {
        (1.0 - self.ctx.q()) * self.ctx.q().powi(n as i32)
    }

    /// `(1 - q) q^n |q^n|^(2 alpha + 1)`.
    pub fn alpha_weight(&self, n: i64) -> f64 {
        let q = self.ctx.q();
        (1.0 - q) * (n as f64 * (2.0 * self.ctx.alpha() + 2.0) * q.ln()).exp()
    }

    /// Drops `width` exponents from both ends; the margin shrinks with it.
    pub fn shrink(&self, width: usize) -> Result<LatticeGrid> {
        if width > self.margin {
            return Err(QError::Shape(format!(
                "stencil width {width} exceeds grid margin {}",
                self.margin
            )));
        }
        Ok(LatticeGrid {
            ctx: self.ctx,
            n_lo: self.n_lo + width as i64,
            n_hi: self.n_hi - width as i64,
            margin: self.margin - width,
        })
    }

    pub fn with_margin(&self, margin: usize) -> Result<LatticeGrid> {
        LatticeGrid::new(self.ctx, self.n_lo, self.n_hi, margin)
    }

    /// Same lattice parameters and exponent window (margins may differ).
    pub fn same_points(&self, other: &LatticeGrid) -> bool {
        self.ctx.q() == other.ctx.q()
            && self.ctx.alpha() == other.ctx.alpha()
            && self.n_lo == other.n_lo
            && self.n_hi == other.n_hi
    }

    pub fn contains(&self, other: &LatticeGrid) -> bool {
        self.ctx.q() == other.ctx.q()
            && self.ctx.alpha() == other.ctx.alpha()
            && self.n_lo <= other.n_lo
            && other.n_hi <= self.n_hi
    }
}

/// Complex samples on a [`LatticeGrid`], stored as the `+` block followed by
/// the `-` block, each ordered by increasing exponent.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: LatticeGrid,
    values: Vec<Complex64>,
    parts: OnceLock<(Vec<Complex64>, Vec<Complex64>)>,
}

impl PartialEq for GridFunction {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values == other.values
    }
}

impl GridFunction {
    pub fn from_values(grid: LatticeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(QError::Shape(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(GridFunction {
            grid,
            values,
            parts: OnceLock::new(),
        })
    }

    pub fn zeros(grid: LatticeGrid) -> Self {
        GridFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            parts: OnceLock::new(),
        }
    }

    pub fn from_fn<F: FnMut(f64) -> Complex64>(grid: LatticeGrid, mut f: F) -> Self {
        let values = grid.points().map(|(s, n)| f(grid.x(s, n))).collect();
        GridFunction {
            grid,
            values,
            parts: OnceLock::new(),
        }
    }

    pub fn from_real_fn<F: FnMut(f64) -> f64>(grid: LatticeGrid, mut f: F) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// Builds values from `(sign, exponent)` directly.
    pub fn from_points<F: FnMut(Sign, i64) -> Complex64>(grid: LatticeGrid, mut f: F) -> Self {
        let values = grid.points().map(|(s, n)| f(s, n)).collect();
        GridFunction {
            grid,
            values,
            parts: OnceLock::new(),
        }
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, sign: Sign, n: i64) -> Option<Complex64> {
        self.grid.index(sign, n).map(|i| self.values[i])
    }

    fn parts(&self) -> &(Vec<Complex64>, Vec<Complex64>) {
        self.parts.get_or_init(|| {
            let m = self.grid.n_exponents();
            let mut even = vec![Complex64::new(0.0, 0.0); 2 * m];
            let mut odd = even.clone();
            for i in 0..m {
                let p = self.values[i];
                let r = self.values[m + i];
                even[i] = (p + r) * 0.5;
                even[m + i] = even[i];
                odd[i] = (p - r) * 0.5;
                odd[m + i] = -odd[i];
            }
            (even, odd)
        })
    }

    pub fn even_values(&self) -> &[Complex64] {
        &self.parts().0
    }

    pub fn odd_values(&self) -> &[Complex64] {
        &self.parts().1
    }

    pub fn even_at(&self, sign: Sign, n: i64) -> Option<Complex64> {
        self.grid.index(sign, n).map(|i| self.parts().0[i])
    }

    pub fn odd_at(&self, sign: Sign, n: i64) -> Option<Complex64> {
        self.grid.index(sign, n).map(|i| self.parts().1[i])
    }

    /// `(f_e, f_o)` with `f = f_e + f_o`.
    pub fn parity_split(&self) -> (GridFunction, GridFunction) {
        let (e, o) = self.parts();
        (
            GridFunction {
                grid: self.grid,
                values: e.clone(),
                parts: OnceLock::new(),
            },
            GridFunction {
                grid: self.grid,
                values: o.clone(),
                parts: OnceLock::new(),
            },
        )
    }

    /// Restriction to a sub-window of the same lattice.
    pub fn restrict(&self, grid: &LatticeGrid) -> Result<GridFunction> {
        if !self.grid.contains(grid) {
            return Err(QError::Shape(format!(
                "[{}, {}] is not a sub-window of [{}, {}]",
                grid.n_lo(),
                grid.n_hi(),
                self.grid.n_lo,
                self.grid.n_hi
            )));
        }
        Ok(GridFunction::from_points(*grid, |s, n| {
            self.get(s, n).expect("sub-window point")
        }))
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            parts: OnceLock::new(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> GridFunction {
        self.map(|v| v * c)
    }

    fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(
        &self,
        other: &GridFunction,
        f: F,
    ) -> Result<GridFunction> {
        check_same_grid(&self.grid, &other.grid)?;
        Ok(GridFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            parts: OnceLock::new(),
        })
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `a * self + b * other`
    pub fn lin_comb(
        &self,
        a: Complex64,
        other: &GridFunction,
        b: Complex64,
    ) -> Result<GridFunction> {
        self.zip_with(other, |u, v| a * u + b * v)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn check_same_grid(a: &LatticeGrid, b: &LatticeGrid) -> Result<()> {
    if a.same_points(b) {
        Ok(())
    } else {
        Err(QError::Shape(format!(
            "grid mismatch: [{}, {}] (q={}, alpha={}) vs [{}, {}] (q={}, alpha={})",
            a.n_lo,
            a.n_hi,
            a.ctx.q(),
            a.ctx.alpha(),
            b.n_lo,
            b.n_hi,
            b.ctx.q(),
            b.ctx.alpha()
        )))
    }
}

/// Evaluates a stencil at every point of `f`'s grid shrunk by `width`.
/// The closure receives the output point and a sampler
/// `sample(shift, reflect) = f(±x q^shift)` (sign flipped when `reflect`).
pub(crate) fn map_stencil<F>(f: &GridFunction, width: usize, op: F) -> Result<GridFunction>
where
    F: Fn(Sign, i64, &dyn Fn(i64, bool) -> Complex64) -> Complex64,
{
    let out = f.grid.shrink(width)?;
    Ok(GridFunction::from_points(out, |s, n| {
        let sample = |k: i64, reflect: bool| {
            let sign = if reflect { s.flip() } else { s };
            f.get(sign, n + k).expect("stencil stays inside the grid")
        };
        op(s, n, &sample)
    }))
}

/// `(1 - q) sum_n q^n [f(q^n) + f(-q^n)]` over the grid.
pub fn jackson_integral(f: &GridFunction) -> Complex64 {
    let g = &f.grid;
    let terms = || {
        g.points()
            .zip(&f.values)
            .map(|((_, n), &v)| v * g.jackson_weight(n))
    };
    Complex64::new(
        neumaier_sum(terms().map(|t| t.re)),
        neumaier_sum(terms().map(|t| t.im)),
    )
}

/// `∫ f conj(g) |x|^(2 alpha + 1) d_q x`.
pub fn inner_product_alpha(f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
    check_same_grid(&f.grid, &g.grid)?;
    let grid = &f.grid;
    let terms = || {
        grid.points()
            .zip(f.values.iter().zip(&g.values))
            .map(|((_, n), (&a, &b))| a * b.conj() * grid.alpha_weight(n))
    };
    Ok(Complex64::new(
        neumaier_sum(terms().map(|t| t.re)),
        neumaier_sum(terms().map(|t| t.im)),
    ))
}

pub fn norm_alpha(f: &GridFunction) -> f64 {
    norm_p_alpha(f, 2.0)
}

/// `(∫ |f|^p |x|^(2 alpha + 1) d_q x)^(1/p)`.
pub fn norm_p_alpha(f: &GridFunction, p: f64) -> f64 {
    let grid = &f.grid;
    let s = neumaier_sum(
        grid.points()
            .zip(&f.values)
            .map(|((_, n), v)| v.norm().powf(p) * grid.alpha_weight(n)),
    );
    s.powf(1.0 / p)
}

/// One lattice sample in the CSV/JSON exchange format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub sign: i8,
    pub exponent: i64,
    pub x: f64,
    pub re: f64,
    pub im: f64,
}

impl GridFunction {
    pub fn records(&self) -> Vec<GridRecord> {
        self.grid
            .points()
            .zip(&self.values)
            .map(|((s, n), v)| GridRecord {
                sign: s.as_i8(),
                exponent: n,
                x: self.grid.x(s, n),
                re: v.re,
                im: v.im,
            })
            .collect()
    }

    /// Rebuilds a function from records; the exponent window is inferred and
    /// must be complete, and each `x` must equal `sign * q^exponent`.
    pub fn from_records(ctx: QContext, records: &[GridRecord], margin: usize) -> Result<Self> {
        if records.is_empty() {
            return Err(QError::Shape("no grid records".into()));
        }
        let n_lo = records.iter().map(|r| r.exponent).min().unwrap();
        let n_hi = records.iter().map(|r| r.exponent).max().unwrap();
        let grid = LatticeGrid::new(ctx, n_lo, n_hi, margin.min(((n_hi - n_lo) / 2) as usize))?;
        let mut values = vec![None; grid.len()];
        for r in records {
            let sign = Sign::from_i8(r.sign)?;
            let expect = grid.x(sign, r.exponent);
            if (r.x - expect).abs() > 1e-9 * expect.abs() {
                return Err(QError::Shape(format!(
                    "x = {} does not match sign * q^exponent = {expect}",
                    r.x
                )));
            }
            let i = grid
                .index(sign, r.exponent)
                .expect("inside inferred window");
            if values[i].replace(Complex64::new(r.re, r.im)).is_some() {
                return Err(QError::Shape(format!(
                    "duplicate point (sign {}, exponent {})",
                    r.sign, r.exponent
                )));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    let (s, n) = grid.point(i);
                    QError::Shape(format!("missing point (sign {}, exponent {n})", s.as_i8()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GridFunction::from_values(grid, values)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for r in self.records() {
            wtr.serialize(r)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(ctx: QContext, r: R, margin: usize) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let records = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<GridRecord>, _>>()?;
        Self::from_records(ctx, &records, margin)
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, &self.records())?;
        Ok(())
    }

    pub fn read_json<R: Read>(ctx: QContext, r: R, margin: usize) -> Result<Self> {
        let records: Vec<GridRecord> = serde_json::from_reader(r)?;
        Self::from_records(ctx, &records, margin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ctx() -> QContext {
        QContext::new(0.5, 0.3).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grid_validation() {
        assert!(LatticeGrid::new(ctx(), 5, 4, 0).is_err());
        assert!(LatticeGrid::new(ctx(), 0, 3, 2).is_err());
        let g = LatticeGrid::new(ctx(), 0, 4, 2).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g.shrink(2).unwrap().n_exponents(), 1);
        assert!(matches!(g.shrink(3), Err(QError::Shape(_))));
    }

    #[test]
    fn indexing_round_trips() {
        let g = LatticeGrid::default_for(ctx());
        for i in 0..g.len() {
            let (s, n) = g.point(i);
            assert_eq!(g.index(s, n), Some(i));
            assert_ne!(g.x(s, n), 0.0);
        }
        assert_eq!(g.index(Sign::Plus, 81), None);
    }

    #[test]
    fn jackson_of_indicator_is_two() {
        let g = LatticeGrid::new(ctx(), 0, 60, 0).unwrap();
        let f = GridFunction::from_real_fn(g, |x| if x.abs() <= 1.0 { 1.0 } else { 0.0 });
        assert!((jackson_integral(&f).re - 2.0).abs() < 1e-12);
        assert_eq!(jackson_integral(&GridFunction::zeros(g)), c(0.0));
    }

    #[test]
    fn parity_examples() {
        let g = LatticeGrid::new(ctx(), -3, 5, 0).unwrap();
        let (e, o) = GridFunction::from_real_fn(g, |x| x).parity_split();
        assert!(e.max_abs() == 0.0);
        assert_eq!(o, GridFunction::from_real_fn(g, |x| x));
        let (e, o) = GridFunction::from_real_fn(g, |x| x * x).parity_split();
        assert!(o.max_abs() == 0.0);
        assert_eq!(e, GridFunction::from_real_fn(g, |x| x * x));
        let (e, o) = GridFunction::from_real_fn(g, |x| 1.0 + x).parity_split();
        assert!(
            e.sub(&GridFunction::from_real_fn(g, |_| 1.0))
                .unwrap()
                .max_abs()
                < 1e-15
        );
        assert!(
            o.sub(&GridFunction::from_real_fn(g, |x| x))
                .unwrap()
                .max_abs()
                < 1e-15
        );
    }

    #[test]
    fn inner_product_rejects_mismatch() {
        let a = GridFunction::zeros(LatticeGrid::new(ctx(), 0, 10, 0).unwrap());
        let b = GridFunction::zeros(LatticeGrid::new(ctx(), 0, 11, 0).unwrap());
        assert!(matches!(inner_product_alpha(&a, &b), Err(QError::Shape(_))));
        assert_eq!(norm_alpha(&a), 0.0);
    }

    #[test]
    fn inner_product_matches_manual_sum() {
        let g = LatticeGrid::new(ctx(), 0, 30, 0).unwrap();
        let f = GridFunction::from_real_fn(g, |x| x);
        let v = inner_product_alpha(&f, &f).unwrap().re;
        // ∫ x^2 |x|^{1.6} on [-1,1] with q = 1/2: 2 (1-q) sum q^{n (3.6) + n}
        let q: f64 = 0.5;
        let manual: f64 = (0..=30)
            .map(|n| 2.0 * (1.0 - q) * q.powf(4.6 * n as f64))
            .sum();
        assert_relative_eq!(v, manual, max_relative = 1e-14);
    }

    #[test]
    fn restrict_and_shrink_agree() {
        let g = LatticeGrid::default_for(ctx());
        let f = GridFunction::from_real_fn(g, |x| x.sin());
        let r = f.restrict(&g.shrink(1).unwrap()).unwrap();
        assert_eq!(r.grid().n_lo(), -39);
        assert_eq!(r.get(Sign::Minus, 10), f.get(Sign::Minus, 10));
        let other = LatticeGrid::new(ctx(), -50, 0, 0).unwrap();
        assert!(f.restrict(&other).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let g = LatticeGrid::new(ctx(), -4, 6, 1).unwrap();
        let f = GridFunction::from_fn(g, |x| Complex64::new(x.cos(), x * x));
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("sign,exponent,x,re,im"));
        let back = GridFunction::read_csv(ctx(), buf.as_slice(), 1).unwrap();
        assert_eq!(back, f);

        let mut buf = Vec::new();
        f.write_json(&mut buf).unwrap();
        let back = GridFunction::read_json(ctx(), buf.as_slice(), 1).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn reading_rejects_holes_and_wrong_q() {
        let g = LatticeGrid::new(ctx(), 0, 3, 0).unwrap();
        let f = GridFunction::from_real_fn(g, |x| x);
        let mut recs = f.records();
        recs.remove(2);
        assert!(GridFunction::from_records(ctx(), &recs, 0).is_err());
        let other = QContext::new(0.6, 0.3).unwrap();
        assert!(GridFunction::from_records(other, &f.records(), 0).is_err());
    }

    #[test]
    fn phi0_tail_truncation_is_negligible() {
        // weight ω|x|^{2α+1} with φ0 = c sqrt(ω): compare n_hi = 80 and 160
        let fam = crate::hermite::HermiteFamily::new(ctx(), 2).unwrap();
        let short = LatticeGrid::default_for(ctx());
        let long = LatticeGrid::new(ctx(), -40, 160, 2).unwrap();
        let a = norm_alpha(&fam.wavefunction_grid(0, &short).unwrap());
        let b = norm_alpha(&fam.wavefunction_grid(0, &long).unwrap());
        assert!((a * a - b * b).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn jackson_is_linear(seed_a in proptest::collection::vec(-5.0f64..5.0, 42),
                             seed_b in proptest::collection::vec(-5.0f64..5.0, 42),
                             s in -3.0f64..3.0, t in -3.0f64..3.0) {
            let g = LatticeGrid::new(ctx(), -5, 15, 0).unwrap();
            let fa = GridFunction::from_values(g, seed_a.iter().map(|&v| c(v)).collect()).unwrap();
            let fb = GridFunction::from_values(g, seed_b.iter().map(|&v| c(v)).collect()).unwrap();
            let comb = fa.lin_comb(c(s), &fb, c(t)).unwrap();
            let lhs = jackson_integral(&comb);
            let rhs = jackson_integral(&fa) * s + jackson_integral(&fb) * t;
            let scale = 1.0 + jackson_integral(&fa.map(|v| c(v.norm()))).re * s.abs()
                + jackson_integral(&fb.map(|v| c(v.norm()))).re * t.abs();
            prop_assert!((lhs - rhs).norm() < 1e-13 * scale);
        }

        #[test]
        fn parity_split_is_a_projection(vals in proptest::collection::vec(-5.0f64..5.0, 22)) {
            let g = LatticeGrid::new(ctx(), 0, 10, 0).unwrap();
            let f = GridFunction::from_values(g, vals.iter().map(|&v| c(v)).collect()).unwrap();
            let (e, o) = f.parity_split();
            prop_assert!(e.add(&o).unwrap().sub(&f).unwrap().max_abs() < 1e-15);
            let (ee, eo) = e.parity_split();
            prop_assert_eq!(ee, e);
            prop_assert!(eo.max_abs() == 0.0);
        }
    }
}
