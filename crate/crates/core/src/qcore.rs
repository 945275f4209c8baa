//! Scalar q-arithmetic: shifted factorials, q-numbers, generalized
//! q-factorials, q-Gamma, the q-exponentials and the q-Dunkl kernel.
//!
//! Everything here is a pure function of a [`QContext`] and its arguments.
//! Series that can produce huge intermediate terms are summed in log-scaled
//! form and returned as [`Scaled`] values; the plain variants simply unscale.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{QError, Result};

/// Infinite products stop at the first factor with `|a q^k|` below this.
pub const PRODUCT_CUTOFF: f64 = 1e-17;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Deformation parameter `q`, Dunkl parameter `alpha` and the numeric
/// controls shared by every series and product in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QContext {
    q: f64,
    alpha: f64,
    tol: f64,
    max_terms: usize,
}

impl QContext {
    pub fn new(q: f64, alpha: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QError::InvalidParameter(format!(
                "q must lie in (0, 1), got {q}"
            )));
        }
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(QError::InvalidParameter(format!(
                "alpha must be finite and > -1, got {alpha}"
            )));
        }
        Ok(QContext {
            q,
            alpha,
            tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(QError::InvalidParameter(format!(
                "tol must be > 0, got {tol}"
            )));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(QError::InvalidParameter("max_terms must be >= 1".into()));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    /// Same alpha and numeric controls, different base (e.g. `q^2`).
    pub fn with_base(self, q: f64) -> Result<Self> {
        Ok(QContext {
            q,
            ..QContext::new(q, self.alpha)?
        }
        .with_tol(self.tol)?
        .with_max_terms(self.max_terms)?)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `nu = alpha + 1/2`, the Calogero-Vasiliev parameter.
    pub fn nu(&self) -> f64 {
        self.alpha + 0.5
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// `q^(2 alpha + 1)`, the factor attached to odd parts throughout.
    pub fn q_two_alpha_one(&self) -> f64 {
        self.q.powf(2.0 * self.alpha + 1.0)
    }

    /// Exponent of the `n`-th generalized q-integer:
    /// `n` for even `n`, `n + 2 alpha + 1` for odd `n`.
    pub fn gen_exponent(&self, n: usize) -> f64 {
        if n % 2 == 0 {
            n as f64
        } else {
            n as f64 + 2.0 * self.alpha + 1.0
        }
    }
}

/// A value stored as `mantissa * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled<T> {
    pub mantissa: T,
    pub ln_scale: f64,
}

impl Scaled<Complex64> {
    pub fn value(&self) -> Complex64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return self.mantissa;
        }
        self.mantissa * self.ln_scale.exp()
    }
}

impl Scaled<f64> {
    pub fn value(&self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        self.mantissa * self.ln_scale.exp()
    }
}

/// Number of factors in a q-shifted factorial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QNumberKind {
    /// `(1 - q^x) / (1 - q)`
    Basic,
    /// `(q^x - q^-x) / (q - q^-1)`
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenQKind {
    /// Parity rule applied to basic q-numbers in base `q`.
    Basic,
    /// Parity rule applied to symmetric q-numbers in base `q^(1/2)`.
    SymmetricSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QExpKind {
    /// `E_q(z) = sum q^(k(k-1)/2) z^k / (q;q)_k = (-z;q)_inf`
    BigE,
    /// `e_q(z) = sum z^k / (q;q)_k`, `|z| < 1`
    SmallE,
    /// `E_{q,alpha}` with generalized shifted factorials
    BigEAlpha,
    /// `e_{q,alpha}`, `|z| < 1`
    SmallEAlpha,
}

pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `(a; base)_n` for complex `a`.
pub fn q_pochhammer(a: Complex64, base: f64, len: Length, max_terms: usize) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match len {
        Length::Finite(n) => {
            let mut prod = one;
            let mut bk = 1.0;
            for _ in 0..n {
                prod *= one - a * bk;
                bk *= base;
            }
            Ok(prod)
        }
        Length::Infinite => {
            let mut prod = one;
            let mut bk = 1.0;
            for _ in 0..max_terms {
                let t = a * bk;
                if t.norm() < PRODUCT_CUTOFF {
                    return Ok(prod);
                }
                prod *= one - t;
                bk *= base;
            }
            Err(QError::TruncationFailure {
                what: "infinite q-product",
                terms: max_terms,
                partial: prod,
            })
        }
    }
}

/// `(a; q)_n` in the context's base.
pub fn q_shifted_factorial(ctx: &QContext, a: Complex64, len: Length) -> Result<Complex64> {
    q_pochhammer(a, ctx.q, len, ctx.max_terms)
}

fn ln_abs_one_minus(t: f64) -> (f64, f64) {
    let f = 1.0 - t;
    let ln = if t.abs() < 0.5 {
        (-t).ln_1p()
    } else {
        f.abs().ln()
    };
    (ln, f.signum())
}

/// `(ln |(a; base)_n|, sign)` for real `a`, robust to products that
/// over- or underflow (e.g. `base` close to one).
pub fn ln_q_pochhammer(a: f64, base: f64, len: Length, max_terms: usize) -> Result<(f64, f64)> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    let mut bk = 1.0;
    match len {
        Length::Finite(n) => {
            for _ in 0..n {
                let (l, s) = ln_abs_one_minus(a * bk);
                ln += l;
                sign *= s;
                bk *= base;
            }
            Ok((ln, sign))
        }
        Length::Infinite => {
            for _ in 0..max_terms {
                let t = a * bk;
                if t.abs() < PRODUCT_CUTOFF {
                    return Ok((ln, sign));
                }
                let (l, s) = ln_abs_one_minus(t);
                ln += l;
                sign *= s;
                bk *= base;
            }
            Err(QError::TruncationFailure {
                what: "infinite q-product (log form)",
                terms: max_terms,
                partial: Complex64::new(sign * ln.exp(), 0.0),
            })
        }
    }
}

/// Basic q-number `(1 - base^x) / (1 - base)`.
pub fn basic_q_number(base: f64, x: f64) -> f64 {
    -(x * base.ln()).exp_m1() / (1.0 - base)
}

/// Symmetric q-number `(base^x - base^-x) / (base - base^-1)`.
pub fn symmetric_q_number(base: f64, x: f64) -> f64 {
    let l = base.ln();
    (x * l).sinh() / l.sinh()
}

pub fn q_number(ctx: &QContext, x: f64, kind: QNumberKind) -> f64 {
    match kind {
        QNumberKind::Basic => basic_q_number(ctx.q, x),
        QNumberKind::Symmetric => symmetric_q_number(ctx.q, x),
    }
}

/// Generalized q-integer: `[[2n]] = [[2n]]`, `[[2n+1]] = [[2n + 2 alpha + 2]]`.
pub fn gen_q_integer(ctx: &QContext, n: usize, kind: GenQKind) -> f64 {
    let e = ctx.gen_exponent(n);
    match kind {
        GenQKind::Basic => basic_q_number(ctx.q, e),
        GenQKind::SymmetricSqrt => symmetric_q_number(ctx.q.sqrt(), e),
    }
}

/// `n!_{q,alpha}`
pub fn gen_q_factorial(ctx: &QContext, n: usize) -> f64 {
    (1..=n)
        .map(|k| gen_q_integer(ctx, k, GenQKind::Basic))
        .product()
}

/// `[n]!_{q^(1/2),alpha}`, the factorial built from symmetric q-integers.
pub fn gen_q_factorial_symmetric(ctx: &QContext, n: usize) -> f64 {
    (1..=n)
        .map(|k| gen_q_integer(ctx, k, GenQKind::SymmetricSqrt))
        .product()
}

/// `(q;q)_{n,alpha} = (1-q)^n n!_{q,alpha}`, evaluated factor by factor as
/// `prod (1 - q^{e_k})`.
pub fn gen_q_shifted(ctx: &QContext, n: usize) -> f64 {
    ln_gen_q_shifted(ctx, n).exp()
}

pub fn ln_gen_q_shifted(ctx: &QContext, n: usize) -> f64 {
    let lq = ctx.q.ln();
    (1..=n)
        .map(|k| (-(ctx.gen_exponent(k) * lq).exp_m1()).ln())
        .sum()
}

/// `(q;q)_{n,alpha}` from the even/odd split
/// `(q^2;q^2)_m (q^{2alpha+2};q^2)_m` or `(q^2;q^2)_m (q^{2alpha+2};q^2)_{m+1}`.
pub fn gen_q_shifted_split(ctx: &QContext, n: usize) -> f64 {
    let q2 = ctx.q * ctx.q;
    let m = n / 2;
    let tail = if n % 2 == 0 { m } else { m + 1 };
    let a = ctx.q.powf(2.0 * ctx.alpha + 2.0);
    let first = q_pochhammer(
        Complex64::new(q2, 0.0),
        q2,
        Length::Finite(m),
        ctx.max_terms,
    )
    .expect("finite products cannot fail");
    let second = q_pochhammer(
        Complex64::new(a, 0.0),
        q2,
        Length::Finite(tail),
        ctx.max_terms,
    )
    .expect("finite products cannot fail");
    (first * second).re
}

/// `Gamma_q(z) = (q;q)_inf / (q^z;q)_inf * (1-q)^(1-z)`.
pub fn q_gamma(ctx: &QContext, z: f64) -> Result<f64> {
    if z <= 0.0 && z.fract() == 0.0 {
        return Err(QError::Domain(format!("q-Gamma has a pole at {z}")));
    }
    let (ln_num, s_num) = ln_q_pochhammer(ctx.q, ctx.q, Length::Infinite, ctx.max_terms)?;
    let (ln_den, s_den) = ln_q_pochhammer(ctx.q.powf(z), ctx.q, Length::Infinite, ctx.max_terms)?;
    Ok(s_num * s_den * (ln_num - ln_den + (1.0 - z) * (1.0 - ctx.q).ln()).exp())
}

/// Accumulates series terms given as `(ln |t_k|, unit phase)` and sums them
/// relative to the largest one.
struct LogSeries {
    terms: Vec<(f64, Complex64)>,
    ln_max: f64,
    ln_cut: f64,
}

impl LogSeries {
    fn new(tol: f64) -> Self {
        LogSeries {
            terms: Vec::new(),
            ln_max: f64::NEG_INFINITY,
            ln_cut: (tol * 1e-5).max(1e-300).ln(),
        }
    }

    /// Pushes a term, returns true once the tail is negligible.
    fn push(&mut self, ln_t: f64, phase: Complex64) -> bool {
        let prev = self.terms.last().map(|t| t.0);
        self.terms.push((ln_t, phase));
        if ln_t > self.ln_max {
            self.ln_max = ln_t;
        }
        match prev {
            Some(p) => ln_t == f64::NEG_INFINITY || (ln_t < self.ln_max + self.ln_cut && ln_t < p),
            None => false,
        }
    }

    fn finish(&self) -> Scaled<Complex64> {
        let shift = self.ln_max;
        let re = neumaier_sum(self.terms.iter().map(|(l, p)| p.re * (l - shift).exp()));
        let im = neumaier_sum(self.terms.iter().map(|(l, p)| p.im * (l - shift).exp()));
        Scaled {
            mantissa: Complex64::new(re, im),
            ln_scale: shift,
        }
    }

    fn partial(&self) -> Complex64 {
        self.finish().value()
    }
}

fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / r
    }
}

/// One of the four q-exponentials in log-scaled form.
pub fn q_exponential_scaled(
    ctx: &QContext,
    z: Complex64,
    kind: QExpKind,
) -> Result<Scaled<Complex64>> {
    let small = matches!(kind, QExpKind::SmallE | QExpKind::SmallEAlpha);
    if small && z.norm() >= 1.0 {
        return Err(QError::Domain(format!(
            "e-type q-exponential needs |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    if z.norm() == 0.0 {
        return Ok(Scaled {
            mantissa: Complex64::new(1.0, 0.0),
            ln_scale: 0.0,
        });
    }
    let generalized = matches!(kind, QExpKind::BigEAlpha | QExpKind::SmallEAlpha);
    let lq = ctx.q.ln();
    let lz = z.norm().ln();
    let u = unit_phase(z);
    let mut series = LogSeries::new(ctx.tol);
    let mut ln_t = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    series.push(ln_t, phase);
    for k in 1..ctx.max_terms {
        let e = if generalized {
            ctx.gen_exponent(k)
        } else {
            k as f64
        };
        ln_t += lz - (-(e * lq).exp_m1()).ln();
        if !small {
            ln_t += (k - 1) as f64 * lq;
        }
        phase *= u;
        if series.push(ln_t, phase) {
            return Ok(series.finish());
        }
    }
    Err(QError::TruncationFailure {
        what: "q-exponential series",
        terms: ctx.max_terms,
        partial: series.partial(),
    })
}

pub fn q_exponential(ctx: &QContext, z: Complex64, kind: QExpKind) -> Result<Complex64> {
    Ok(q_exponential_scaled(ctx, z, kind)?.value())
}

/// `E_q(z)` through its product form `(-z; q)_inf`.
pub fn big_e_product(ctx: &QContext, z: Complex64) -> Result<Complex64> {
    q_shifted_factorial(ctx, -z, Length::Infinite)
}

/// q-Dunkl kernel `psi_lambda(z) = sum_n q^{[n/2]([n/2]+1)} (i lambda z)^n / n!_{q,alpha}`
/// in log-scaled form. The sum is exact up to rounding of the largest term,
/// so for `|lambda z|` well above one the result carries cancellation error;
/// lattice tables should use [`crate::transform::KernelTable`].
pub fn dunkl_kernel_scaled(
    ctx: &QContext,
    lambda: Complex64,
    z: Complex64,
) -> Result<Scaled<Complex64>> {
    let w = Complex64::new(0.0, 1.0) * lambda * z;
    if w.norm() == 0.0 {
        return Ok(Scaled {
            mantissa: Complex64::new(1.0, 0.0),
            ln_scale: 0.0,
        });
    }
    let lq = ctx.q.ln();
    let lw = w.norm().ln();
    let u = unit_phase(w);
    let damp = |n: usize| {
        let h = (n / 2) as f64;
        h * (h + 1.0)
    };
    let mut series = LogSeries::new(ctx.tol);
    let mut ln_t = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    series.push(ln_t, phase);
    for n in 1..ctx.max_terms {
        ln_t += (damp(n) - damp(n - 1)) * lq + lw - gen_q_integer(ctx, n, GenQKind::Basic).ln();
        phase *= u;
        if series.push(ln_t, phase) {
            return Ok(series.finish());
        }
    }
    Err(QError::TruncationFailure {
        what: "q-Dunkl kernel series",
        terms: ctx.max_terms,
        partial: series.partial(),
    })
}

pub fn dunkl_kernel(ctx: &QContext, lambda: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(dunkl_kernel_scaled(ctx, lambda, z)?.value())
}

/// `ln gamma_nu(n)` for Rosenblum's generalized factorial.
pub fn ln_rosenblum_gamma(nu: f64, n: usize) -> f64 {
    let half = (n / 2) as f64;
    let up = ((n + 1) / 2) as f64;
    n as f64 * std::f64::consts::LN_2 + ln_gamma(half + 1.0) + ln_gamma(nu + up + 0.5)
        - ln_gamma(nu + 0.5)
}

/// `gamma_nu(n) = 2^n [n/2]! Gamma(nu + [(n+1)/2] + 1/2) / Gamma(nu + 1/2)`, `nu > -1/2`.
pub fn rosenblum_gamma(nu: f64, n: usize) -> f64 {
    ln_rosenblum_gamma(nu, n).exp()
}
