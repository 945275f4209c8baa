//! The q-Dunkl transform on the lattice and its inverse.
//!
//! The kernel `psi_lambda(x)` depends only on `lambda x`, which on the
//! lattice is `±q^m`; a [`KernelTable`] holds `psi_1(q^m)` for every needed
//! `m` and `psi_1(-t) = conj(psi_1(t))` supplies the negative half.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QError, Result};
use crate::lattice::{GridFunction, LatticeGrid, Sign};
use crate::qcore::{dunkl_kernel, ln_q_pochhammer, q_gamma, Length, QContext};

/// Extra recurrence steps taken above the largest tabulated argument.
const RECURRENCE_LEAD: i64 = 4;

/// `psi_1(q^m)` for `m_lo <= m <= m_hi`.
///
/// For `|z| <= 1` the power series is well conditioned. Above that the
/// series cancels catastrophically, so values come from the eigen-equation
/// `Lambda psi = i psi` written as a two-term recurrence on the even and
/// odd parts, run from large `|z|` towards `z = 1` (the direction in which
/// the kernel is the dominant solution) and matched to the series at `z = 1`.
#[derive(Debug, Clone)]
pub struct KernelTable {
    m_lo: i64,
    m_hi: i64,
    values: Vec<Complex64>,
}

impl KernelTable {
    pub fn new(ctx: &QContext, m_lo: i64, m_hi: i64) -> Result<Self> {
        if m_lo > m_hi {
            return Err(QError::InvalidParameter(format!(
                "kernel table needs m_lo <= m_hi, got [{m_lo}, {m_hi}]"
            )));
        }
        let q = ctx.q();
        let one = Complex64::new(1.0, 0.0);
        let mut values = vec![Complex64::new(0.0, 0.0); (m_hi - m_lo + 1) as usize];
        for m in m_lo.max(0)..=m_hi {
            values[(m - m_lo) as usize] =
                dunkl_kernel(ctx, one, Complex64::new(q.powi(m as i32), 0.0))?;
        }
        if m_lo < 0 {
            let anchor = dunkl_kernel(ctx, one, one)?;
            let (es, os) = (
                Complex64::new(anchor.re, 0.0),
                Complex64::new(0.0, anchor.im),
            );
            let qa = ctx.q_two_alpha_one();
            let i = Complex64::new(0.0, 1.0);
            let start = m_lo - RECURRENCE_LEAD;
            let (mut e, mut o) = (one, Complex64::new(0.0, 0.0));
            let mut ln_s = 0.0;
            let mut track: Vec<(Complex64, Complex64, f64)> =
                Vec::with_capacity((-m_lo + 1) as usize);
            for m in (start + 1)..=0 {
                let x = q.powi(m as i32);
                let o_new = (o - i * (1.0 - q) * (x / q) * e) / qa;
                let e_new = e - i * (1.0 - q) * x * o_new;
                let r = e_new.norm().max(o_new.norm());
                e = e_new / r;
                o = o_new / r;
                ln_s += r.ln();
                if m >= m_lo {
                    track.push((e, o, ln_s));
                }
            }
            let (e0, o0, ln0) = *track.last().expect("m = 0 is tracked");
            let c = (e0.conj() * es + o0.conj() * os) / (e0.norm_sqr() + o0.norm_sqr());
            for (j, &(e, o, l)) in track.iter().enumerate() {
                let m = m_lo + j as i64;
                if m < 0 {
                    values[(m - m_lo) as usize] = c * (e + o) * (l - ln0).exp();
                }
            }
        }
        Ok(KernelTable { m_lo, m_hi, values })
    }

    /// `psi_1(sign * q^m)`.
    pub fn get(&self, sign: Sign, m: i64) -> Option<Complex64> {
        if m < self.m_lo || m > self.m_hi {
            return None;
        }
        let v = self.values[(m - self.m_lo) as usize];
        Some(match sign {
            Sign::Plus => v,
            Sign::Minus => v.conj(),
        })
    }
}

/// `K_alpha = (1-q)^alpha (q^(2alpha+2); q^2)_inf / (2 (q^2; q^2)_inf)`.
pub fn k_alpha(ctx: &QContext) -> Result<f64> {
    let q = ctx.q();
    let q2 = q * q;
    let m = ctx.max_terms();
    let a = ln_q_pochhammer(q.powf(2.0 * ctx.alpha() + 2.0), q2, Length::Infinite, m)?.0;
    let b = ln_q_pochhammer(q2, q2, Length::Infinite, m)?.0;
    Ok((ctx.alpha() * (1.0 - q).ln() + a - b).exp() / 2.0)
}

/// `K_alpha = (1+q)^(-alpha) / (2 Gamma_{q^2}(alpha + 1))`.
pub fn k_alpha_via_gamma(ctx: &QContext) -> Result<f64> {
    let q = ctx.q();
    let g = q_gamma(&ctx.with_base(q * q)?, ctx.alpha() + 1.0)?;
    Ok((1.0 + q).powf(-ctx.alpha()) / (2.0 * g))
}

/// Forward and inverse q-Dunkl transform on a fixed grid; the spectral grid
/// equals the spatial one.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    grid: LatticeGrid,
    k_alpha: f64,
    table: KernelTable,
}

impl TransformPlan {
    pub fn new(grid: LatticeGrid) -> Result<Self> {
        let ctx = *grid.ctx();
        Ok(TransformPlan {
            grid,
            k_alpha: k_alpha(&ctx)?,
            table: KernelTable::new(&ctx, 2 * grid.n_lo(), 2 * grid.n_hi())?,
        })
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn k_alpha(&self) -> f64 {
        self.k_alpha
    }

    pub fn kernel(&self) -> &KernelTable {
        &self.table
    }

    /// `K sum_y w(y) g(y) psi_1(sigma * x * y)` for every output point `x`.
    fn apply(&self, g: &GridFunction, sigma: Sign) -> Result<GridFunction> {
        if !g.grid().same_points(&self.grid) {
            return Err(QError::Shape(format!(
                "transform plan grid [{}, {}] does not match input grid [{}, {}]",
                self.grid.n_lo(),
                self.grid.n_hi(),
                g.grid().n_lo(),
                g.grid().n_hi()
            )));
        }
        let grid = self.grid;
        let weighted: Vec<(Sign, i64, Complex64)> = grid
            .points()
            .zip(g.values())
            .map(|((s, n), &v)| (s, n, v * grid.alpha_weight(n)))
            .collect();
        let values: Vec<Complex64> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let (sx, nx) = grid.point(i);
                let mut acc = Complex64::new(0.0, 0.0);
                for &(sy, ny, wv) in &weighted {
                    let k = self
                        .table
                        .get(sigma.product(sx.product(sy)), nx + ny)
                        .expect("table covers all exponent sums");
                    acc += wv * k;
                }
                acc * self.k_alpha
            })
            .collect();
        GridFunction::from_values(*g.grid(), values)
    }

    /// `(F f)(lambda) = K ∫ f(x) psi_{-lambda}(x) |x|^(2alpha+1) d_q x`.
    pub fn forward(&self, f: &GridFunction) -> Result<GridFunction> {
        self.apply(f, Sign::Minus)
    }

    /// `f(x) = K ∫ g(lambda) psi_x(lambda) |lambda|^(2alpha+1) d_q lambda`.
    pub fn inverse(&self, g: &GridFunction) -> Result<GridFunction> {
        self.apply(g, Sign::Plus)
    }
}

pub fn dunkl_transform(plan: &TransformPlan, f: &GridFunction) -> Result<GridFunction> {
    plan.forward(f)
}

pub fn inverse_transform(plan: &TransformPlan, g: &GridFunction) -> Result<GridFunction> {
    plan.inverse(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::HermiteFamily;
    use crate::lattice::norm_alpha;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    fn ctx() -> QContext {
        QContext::new(0.5, 0.3).unwrap()
    }

    #[test]
    fn k_alpha_two_ways() {
        for &(q, a) in &[(0.5, 0.3), (0.3, -0.7), (0.8, 2.0)] {
            let c = QContext::new(q, a).unwrap();
            let x = k_alpha(&c).unwrap();
            let y = k_alpha_via_gamma(&c).unwrap();
            assert!(((x - y) / x).abs() < 1e-12);
            assert!(x > 0.0);
        }
    }

    #[test]
    fn table_matches_series_for_moderate_arguments() {
        let c = ctx();
        let t = KernelTable::new(&c, -8, 4).unwrap();
        for m in -4i64..=4 {
            let z = 0.5f64.powi(m as i32);
            let s = dunkl_kernel(&c, Complex64::new(1.0, 0.0), Complex64::new(z, 0.0)).unwrap();
            let v = t.get(Sign::Plus, m).unwrap();
            assert!(
                (s - v).norm() < 1e-11 * s.norm().max(1.0),
                "m={m}: {s} vs {v}"
            );
            assert_eq!(t.get(Sign::Minus, m).unwrap(), v.conj());
        }
        assert!(t.get(Sign::Plus, 5).is_none());
    }

    /// `psi_1(z)` at `alpha = 0`, `q = 1/2` summed exactly in rationals:
    /// the real part is `sum_k (-1)^k q^{k(k+1)} z^{2k} / (2k)!_{q,0}` and the
    /// imaginary part the analogous odd sum.
    fn exact_kernel(z: i64, terms: usize) -> (f64, f64) {
        let q = BigRational::new(BigInt::one(), BigInt::from(2));
        let qpow = |e: usize| {
            let mut r = BigRational::one();
            for _ in 0..e {
                r *= &q;
            }
            r
        };
        // [[k]]_{q,0} = (1 - q^{e_k})/(1 - q), e_k = k (even) or k+1 (odd)
        let gen_int = |k: usize| {
            let e = if k % 2 == 0 { k } else { k + 1 };
            (BigRational::one() - qpow(e)) / (BigRational::one() - q.clone())
        };
        let zr = BigRational::from_integer(BigInt::from(z));
        let (mut re, mut im) = (BigRational::zero(), BigRational::zero());
        let mut fact = BigRational::one();
        let mut zp = BigRational::one();
        for n in 0..terms {
            if n > 0 {
                fact *= gen_int(n);
                zp *= &zr;
            }
            let h = n / 2;
            let term = qpow(h * (h + 1)) * &zp / &fact;
            // i^n
            match n % 4 {
                0 => re += term,
                1 => im += term,
                2 => re -= term,
                _ => im -= term,
            }
        }
        let _ = re.is_negative();
        (re.to_f64().unwrap(), im.to_f64().unwrap())
    }

    #[test]
    fn kernel_series_against_exact_oracle() {
        let c = QContext::new(0.5, 0.0).unwrap();
        let v = dunkl_kernel(&c, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let (re, im) = exact_kernel(1, 50);
        assert!((v.re - re).abs() < 1e-14 && (v.im - im).abs() < 1e-14);
    }

    #[test]
    fn kernel_table_against_exact_oracle_at_large_arguments() {
        let c = QContext::new(0.5, 0.0).unwrap();
        let t = KernelTable::new(&c, -12, 0).unwrap();
        for &m in &[-3i64, -6, -10] {
            let (re, im) = exact_kernel(1i64 << (-m), 400);
            let v = t.get(Sign::Plus, m).unwrap();
            let scale = re.abs().max(im.abs()).max(1e-300);
            assert!(
                (v.re - re).abs() < 1e-10 * scale.max(v.norm())
                    && (v.im - im).abs() < 1e-10 * scale.max(v.norm()),
                "m={m}: {v} vs ({re}, {im})"
            );
        }
    }

    #[test]
    fn transform_of_zero_is_zero() {
        let plan = TransformPlan::new(LatticeGrid::new(ctx(), -10, 20, 0).unwrap()).unwrap();
        let z = GridFunction::zeros(*plan.grid());
        assert_eq!(plan.forward(&z).unwrap().max_abs(), 0.0);
        assert_eq!(plan.inverse(&z).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn transform_rejects_other_grid() {
        let plan = TransformPlan::new(LatticeGrid::new(ctx(), -10, 20, 0).unwrap()).unwrap();
        let f = GridFunction::zeros(LatticeGrid::new(ctx(), -10, 21, 0).unwrap());
        assert!(matches!(plan.forward(&f), Err(QError::Shape(_))));
    }

    #[test]
    fn plancherel_and_inversion_on_wavefunctions() {
        let c = ctx();
        let grid = LatticeGrid::default_for(c);
        let fam = HermiteFamily::new(c, 5).unwrap();
        let plan = TransformPlan::new(grid).unwrap();
        for n in 0..=5 {
            let phi = fam.wavefunction_grid(n, &grid).unwrap();
            let ft = plan.forward(&phi).unwrap();
            assert!(
                (norm_alpha(&ft) - 1.0).abs() < 1e-4,
                "n={n}: {}",
                norm_alpha(&ft)
            );
            let back = plan.inverse(&ft).unwrap();
            assert!(norm_alpha(&back.sub(&phi).unwrap()) < 1e-4, "n={n}");
        }
    }

    #[test]
    fn transform_parity_structure() {
        let c = ctx();
        let grid = LatticeGrid::default_for(c);
        let fam = HermiteFamily::new(c, 1).unwrap();
        let plan = TransformPlan::new(grid).unwrap();
        let ft0 = plan
            .forward(&fam.wavefunction_grid(0, &grid).unwrap())
            .unwrap();
        // even real input: transform even and real
        assert!(ft0.odd_values().iter().all(|v| v.norm() < 1e-14));
        assert!(ft0
            .values()
            .iter()
            .all(|v| v.im.abs() <= 1e-14 * (1.0 + v.re.abs())));
        let ft1 = plan
            .forward(&fam.wavefunction_grid(1, &grid).unwrap())
            .unwrap();
        // odd real input: transform odd and purely imaginary
        assert!(ft1.even_values().iter().all(|v| v.norm() < 1e-14));
        assert!(ft1
            .values()
            .iter()
            .all(|v| v.re.abs() <= 1e-14 * (1.0 + v.im.abs())));
    }

    #[test]
    fn transform_is_linear() {
        let c = ctx();
        let grid = LatticeGrid::new(c, -12, 30, 0).unwrap();
        let plan = TransformPlan::new(grid).unwrap();
        let f = GridFunction::from_real_fn(grid, |x| (-x * x).exp());
        let g = GridFunction::from_fn(grid, |x| Complex64::new(x / (1.0 + x * x * x * x), 0.3));
        let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.1, 0.4));
        let lhs = plan.forward(&f.lin_comb(a, &g, b).unwrap()).unwrap();
        let rhs = plan
            .forward(&f)
            .unwrap()
            .lin_comb(a, &plan.forward(&g).unwrap(), b)
            .unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12 * (1.0 + lhs.max_abs()));
    }
}
