//! The q-deformed Calogero-Vasiliev oscillator.
//!
//! `a` and `a+` act on lattice functions through their 2x2 even/odd matrix
//! form. `N`, `K`, `b`, `b+`, the su(1,1) generators, the Casimir and the
//! Hamiltonian act on coefficient vectors in the basis `{phi_n}`
//! ([`SpectralVector`]); `project`/`synthesize` connect the two pictures.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QError, Result};
use crate::hermite::HermiteFamily;
use crate::lattice::{inner_product_alpha, map_stencil, GridFunction, LatticeGrid};
use crate::qcore::{
    gen_q_factorial, gen_q_integer, q_exponential, q_exponential_scaled, symmetric_q_number,
    GenQKind, QContext, QExpKind,
};
use crate::report::{ReportParams, VerificationReport};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Annihilation,
    Creation,
}

/// `sqrt(1 + q^(-2alpha-1) y^2)`
fn multiplier(ctx: &QContext, y: f64) -> f64 {
    (1.0 + y * y / ctx.q_two_alpha_one()).sqrt()
}

/// Ladder operator at `x` from `sample(k, reflect) = f(±q^k x)`.
pub fn ladder_stencil(
    ctx: &QContext,
    which: Ladder,
    x: f64,
    sample: &dyn Fn(i64, bool) -> Complex64,
) -> Complex64 {
    let q = ctx.q();
    let qa = ctx.q_two_alpha_one();
    let fe = (sample(0, false) + sample(0, true)) * 0.5;
    let fo = (sample(0, false) - sample(0, true)) * 0.5;
    match which {
        Ladder::Annihilation => {
            let pre = q.sqrt() / ((1.0 - q).sqrt() * x);
            (sample(-1, false) * multiplier(ctx, x / q) - fe - fo * qa) * pre
        }
        Ladder::Creation => {
            let pre = qa * q.sqrt() / ((1.0 - q).sqrt() * x);
            (sample(1, false) * multiplier(ctx, x) - fe - fo / qa) * pre
        }
    }
}

/// Ladder operator applied to a function of a real variable at `x`.
pub fn ladder_at<F: Fn(f64) -> Complex64>(
    ctx: &QContext,
    which: Ladder,
    x: f64,
    f: F,
) -> Complex64 {
    let q = ctx.q();
    ladder_stencil(ctx, which, x, &|k, reflect| {
        let y = x * q.powi(k as i32);
        f(if reflect { -y } else { y })
    })
}

fn ladder_grid(ctx: &QContext, which: Ladder, f: &GridFunction) -> Result<GridFunction> {
    let g = *f.grid();
    if g.ctx().q() != ctx.q() || g.ctx().alpha() != ctx.alpha() {
        return Err(QError::Shape(
            "ladder context differs from grid context".into(),
        ));
    }
    map_stencil(f, 1, |s, n, sample| {
        ladder_stencil(ctx, which, g.x(s, n), sample)
    })
}

/// `a f` on the grid shrunk by one exponent.
pub fn apply_a_grid(ctx: &QContext, f: &GridFunction) -> Result<GridFunction> {
    ladder_grid(ctx, Ladder::Annihilation, f)
}

/// `a+ f` on the grid shrunk by one exponent.
pub fn apply_a_plus_grid(ctx: &QContext, f: &GridFunction) -> Result<GridFunction> {
    ladder_grid(ctx, Ladder::Creation, f)
}

/// `a+` on the polynomial factor: `a+ (p sqrt(omega)) = p' sqrt(omega)`, using
/// `sqrt(omega(q x)) = M(x) sqrt(omega(x))`. Coefficients are in ascending powers.
pub fn creation_on_polynomial(ctx: &QContext, p: &[f64]) -> Vec<f64> {
    let q = ctx.q();
    let qa = ctx.q_two_alpha_one();
    let c = 1.0 / qa;
    // p(qx)(1 + c x^2) - p_e(x) - p_o(x)/qa, then divide by x
    let mut num = vec![0.0; p.len() + 2];
    for (j, &a) in p.iter().enumerate() {
        let qj = q.powi(j as i32);
        num[j] += a * (qj - if j % 2 == 0 { 1.0 } else { 1.0 / qa });
        num[j + 2] += a * c * qj;
    }
    let pre = qa * q.sqrt() / (1.0 - q).sqrt();
    num[1..].iter().map(|v| pre * v).collect()
}

/// `ln |p(x)|` and the sign, safe for large `|x|`.
fn ln_poly(p: &[f64], x: f64) -> (f64, f64) {
    if x.abs() > 1.0 {
        let deg = p.len().saturating_sub(1) as i32;
        let s = p.iter().fold(0.0, |acc, &a| acc / x + a);
        (
            s.abs().ln() + deg as f64 * x.abs().ln(),
            s.signum() * x.signum().powi(deg),
        )
    } else {
        let v = p.iter().rev().fold(0.0, |acc, &a| acc * x + a);
        (v.abs().ln(), v.signum())
    }
}

/// `(n!_{q,alpha})^(-1/2) (a+)^n phi_0` on `grid`, applying `a+` to the
/// polynomial factor of `phi_0 = d_0 sqrt(omega)`.
pub fn creation_tower(fam: &HermiteFamily, n: usize, grid: &LatticeGrid) -> Result<GridFunction> {
    let ctx = *fam.ctx();
    let mut p = vec![1.0];
    for _ in 0..n {
        p = creation_on_polynomial(&ctx, &p);
    }
    let ln_pre = fam.ln_norm_constant(0)? - 0.5 * gen_q_factorial(&ctx, n).ln();
    let mut err = None;
    let f = GridFunction::from_fn(*grid, |x| match fam.ln_weight(x) {
        Ok(lw) => {
            let (lp, s) = ln_poly(&p, x);
            re(if s == 0.0 {
                0.0
            } else {
                s * (ln_pre + 0.5 * lw + lp).exp()
            })
        }
        Err(e) => {
            err.get_or_insert(e);
            ZERO
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(f),
    }
}

/// `[n]_{q^(1/2), alpha}`
fn sym_gen(ctx: &QContext, n: usize) -> f64 {
    gen_q_integer(ctx, n, GenQKind::SymmetricSqrt)
}

/// `[x]_{q^(1/2)}`
fn sym_sqrt(ctx: &QContext, x: f64) -> f64 {
    symmetric_q_number(ctx.q().sqrt(), x)
}

/// `[x]_q`
fn sym_q(ctx: &QContext, x: f64) -> f64 {
    symmetric_q_number(ctx.q(), x)
}

fn parity(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BGenerator {
    B0,
    BPlus,
    BMinus,
}

/// Finitely supported coefficients `c_n` of `sum_n c_n phi_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    ctx: QContext,
    coeffs: Vec<Complex64>,
}

impl SpectralVector {
    pub fn new(ctx: QContext, coeffs: Vec<Complex64>) -> Self {
        SpectralVector { ctx, coeffs }
    }

    pub fn zeros(ctx: QContext, len: usize) -> Self {
        SpectralVector {
            ctx,
            coeffs: vec![ZERO; len],
        }
    }

    /// Unit vector `e_n`.
    pub fn basis(ctx: QContext, n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = re(1.0);
        SpectralVector { ctx, coeffs }
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_n |self_n - other_n|` with implicit zero padding.
    pub fn distance(&self, other: &SpectralVector) -> f64 {
        let len = self.len().max(other.len());
        (0..len)
            .map(|n| (self.get(n) - other.get(n)).norm())
            .fold(0.0, f64::max)
    }

    pub fn lin_comb(&self, a: Complex64, other: &SpectralVector, b: Complex64) -> SpectralVector {
        let len = self.len().max(other.len());
        SpectralVector {
            ctx: self.ctx,
            coeffs: (0..len)
                .map(|n| a * self.get(n) + b * other.get(n))
                .collect(),
        }
    }

    pub fn add(&self, other: &SpectralVector) -> SpectralVector {
        self.lin_comb(re(1.0), other, re(1.0))
    }

    pub fn sub(&self, other: &SpectralVector) -> SpectralVector {
        self.lin_comb(re(1.0), other, re(-1.0))
    }

    pub fn scaled(&self, c: Complex64) -> SpectralVector {
        self.map_diag(|_| c)
    }

    fn map_diag<F: Fn(usize) -> Complex64>(&self, f: F) -> SpectralVector {
        SpectralVector {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| f(n) * c)
                .collect(),
        }
    }

    /// `e_n -> f(n) e_{n-1}`
    fn lower<F: Fn(usize) -> f64>(&self, f: F) -> SpectralVector {
        let len = self.len().saturating_sub(1).max(1);
        let mut out = vec![ZERO; len];
        for n in 1..self.len() {
            out[n - 1] = self.coeffs[n] * f(n);
        }
        SpectralVector {
            ctx: self.ctx,
            coeffs: out,
        }
    }

    /// `e_n -> f(n) e_{n+1}`
    fn raise<F: Fn(usize) -> f64>(&self, f: F) -> SpectralVector {
        let mut out = vec![ZERO; self.len() + 1];
        for n in 0..self.len() {
            out[n + 1] = self.coeffs[n] * f(n);
        }
        SpectralVector {
            ctx: self.ctx,
            coeffs: out,
        }
    }

    /// `c_n = <f, phi_n>` for `n <= n_basis`.
    pub fn project(
        f: &GridFunction,
        fam: &HermiteFamily,
        n_basis: usize,
    ) -> Result<SpectralVector> {
        if n_basis > fam.n_max() {
            return Err(QError::Range {
                index: n_basis,
                max: fam.n_max(),
            });
        }
        let ns: Vec<usize> = (0..=n_basis).collect();
        let phis = fam.wavefunctions_grid(&ns, f.grid())?;
        let coeffs = phis
            .iter()
            .map(|phi| inner_product_alpha(f, phi))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralVector {
            ctx: *fam.ctx(),
            coeffs,
        })
    }

    /// `sum_n c_n phi_n` on `grid`.
    pub fn synthesize(&self, fam: &HermiteFamily, grid: &LatticeGrid) -> Result<GridFunction> {
        if self.len() > fam.n_max() + 1 {
            return Err(QError::Range {
                index: self.len() - 1,
                max: fam.n_max(),
            });
        }
        let ns: Vec<usize> = (0..self.len()).collect();
        let phis = fam.wavefunctions_grid(&ns, grid)?;
        let mut out = GridFunction::zeros(*grid);
        for (phi, &c) in phis.iter().zip(&self.coeffs) {
            if c != ZERO {
                out = out.lin_comb(re(1.0), phi, c)?;
            }
        }
        Ok(out)
    }

    /// `a e_n = sqrt([[n]]_{q,alpha}) e_{n-1}`
    pub fn apply_a(&self) -> SpectralVector {
        let ctx = self.ctx;
        self.lower(|n| gen_q_integer(&ctx, n, GenQKind::Basic).sqrt())
    }

    /// `a+ e_n = sqrt([[n+1]]_{q,alpha}) e_{n+1}`
    pub fn apply_a_plus(&self) -> SpectralVector {
        let ctx = self.ctx;
        self.raise(|n| gen_q_integer(&ctx, n + 1, GenQKind::Basic).sqrt())
    }

    pub fn apply_number(&self) -> SpectralVector {
        self.map_diag(|n| re(n as f64))
    }

    /// `N` recovered from the eigenvalues of `a a+` and `a+ a`:
    /// `(ln(1-(1-q)[[n+1]]) + ln(1-(1-q)[[n]])) / (2 ln q) - alpha - 1`.
    pub fn number_from_ladder(&self) -> Result<SpectralVector> {
        let ctx = self.ctx;
        let q = ctx.q();
        let eig = |n: usize| -> Result<f64> {
            let arg = |k: usize| {
                let v = 1.0 - (1.0 - q) * gen_q_integer(&ctx, k, GenQKind::Basic);
                if v <= 0.0 {
                    Err(QError::Domain(format!(
                        "log of non-positive value {v} for index {k}"
                    )))
                } else {
                    Ok(v.ln())
                }
            };
            Ok((arg(n + 1)? + arg(n)?) / (2.0 * q.ln()) - ctx.alpha() - 1.0)
        };
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| eig(n).map(|e| c * e))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralVector { ctx, coeffs })
    }

    /// `K = (-1)^N`
    pub fn apply_parity(&self) -> SpectralVector {
        self.map_diag(|n| re(parity(n)))
    }

    /// `b e_n = sqrt([n]_{q^(1/2),alpha}) e_{n-1}`
    pub fn apply_b(&self) -> SpectralVector {
        let ctx = self.ctx;
        self.lower(|n| sym_gen(&ctx, n).sqrt())
    }

    /// `b+ e_n = sqrt([n+1]_{q^(1/2),alpha}) e_{n+1}`
    pub fn apply_b_plus(&self) -> SpectralVector {
        let ctx = self.ctx;
        self.raise(|n| sym_gen(&ctx, n + 1).sqrt())
    }

    /// `q^(-(N + (K+1) nu) / 4)`
    pub fn apply_b_scaling(&self) -> SpectralVector {
        let ctx = self.ctx;
        self.map_diag(|n| {
            re(ctx
                .q()
                .powf(-(n as f64 + (parity(n) + 1.0) * ctx.nu()) / 4.0))
        })
    }

    /// `b = q^(-(N + (K+1) nu)/4) a`
    pub fn apply_b_via_a(&self) -> SpectralVector {
        self.apply_a().apply_b_scaling()
    }

    /// `b+ = a+ q^(-(N + (K+1) nu)/4)`
    pub fn apply_b_plus_via_a(&self) -> SpectralVector {
        self.apply_b_scaling().apply_a_plus()
    }

    /// `H = (b b+ + b+ b) / 2`
    pub fn apply_hamiltonian(&self) -> SpectralVector {
        let bbp = self.apply_b_plus().apply_b();
        let bpb = self.apply_b().apply_b_plus();
        bbp.lin_comb(re(0.5), &bpb, re(0.5))
    }

    /// `B0 = (N + alpha + 1)/2`, `B+ = gamma (b+)^2`, `B- = gamma b^2`,
    /// `gamma = 1/[2]_{q^(1/2)}`.
    pub fn apply_generator(&self, which: BGenerator) -> SpectralVector {
        let ctx = self.ctx;
        let gamma = re(1.0 / sym_sqrt(&ctx, 2.0));
        match which {
            BGenerator::B0 => self.map_diag(|n| re(0.5 * (n as f64 + ctx.alpha() + 1.0))),
            BGenerator::BPlus => self.apply_b_plus().apply_b_plus().scaled(gamma),
            BGenerator::BMinus => self.apply_b().apply_b().scaled(gamma),
        }
    }

    /// `C = [B0 - 1/2]_q^2 - B+ B-`, evaluated by composing the generators.
    pub fn casimir_apply(&self) -> SpectralVector {
        let ctx = self.ctx;
        // [B0 - 1/2]_q acts diagonally through the B0 eigenvalue
        let shifted = |v: &SpectralVector| SpectralVector {
            ctx,
            coeffs: v
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| {
                    let b0n = 0.5 * (n as f64 + ctx.alpha() + 1.0);
                    c * sym_q(&ctx, b0n - 0.5)
                })
                .collect(),
        };
        let first = shifted(&shifted(self));
        let second = self
            .apply_generator(BGenerator::BMinus)
            .apply_generator(BGenerator::BPlus);
        first.sub(&second)
    }
}

/// `E(n) = ([n]_{q^(1/2),alpha} + [n+1]_{q^(1/2),alpha}) / 2`
pub fn hamiltonian_energy(ctx: &QContext, n: usize) -> f64 {
    0.5 * (sym_gen(ctx, n) + sym_gen(ctx, n + 1))
}

/// Casimir eigenvalue on the sector of `n`.
pub fn casimir_eigenvalue(ctx: &QContext, n: usize) -> f64 {
    let a = ctx.alpha();
    let v = if n % 2 == 0 {
        sym_q(ctx, a / 2.0)
    } else {
        sym_q(ctx, (a + 1.0) / 2.0)
    };
    v * v
}

/// Deviations of the deformed commutation relations on `e_n`:
/// `b b+ - q^(±(1+2nu K)/2) b+ b = [1+2nu K]_{q^(1/2)} q^(∓(N+nu-nu K)/2)` for
/// both signs, plus `b b+ = [N+1+nu(1+K)]` and `b+ b = [N+nu(1-K)]`.
pub fn commutator_deviation(ctx: &QContext, n: usize) -> f64 {
    let e = SpectralVector::basis(*ctx, n);
    let bbp = e.apply_b_plus().apply_b();
    let bpb = e.apply_b().apply_b_plus();
    let q = ctx.q();
    let nu = ctx.nu();
    let k = parity(n);
    let nf = n as f64;
    let mut dev: f64 = 0.0;
    for s in [1.0, -1.0] {
        let lhs = bbp.lin_comb(re(1.0), &bpb, re(-q.powf(s * (1.0 + 2.0 * nu * k) / 2.0)));
        let rhs = e.scaled(re(
            sym_sqrt(ctx, 1.0 + 2.0 * nu * k) * q.powf(-s * (nf + nu - nu * k) / 2.0)
        ));
        dev = dev.max(lhs.distance(&rhs));
    }
    dev = dev.max(bbp.distance(&e.scaled(re(sym_sqrt(ctx, nf + 1.0 + nu * (1.0 + k))))));
    dev = dev.max(bpb.distance(&e.scaled(re(sym_sqrt(ctx, nf + nu * (1.0 - k))))));
    dev
}

pub fn commutator_check(ctx: &QContext, n: usize) -> VerificationReport {
    VerificationReport::new(
        format!("commutation_n{n}"),
        ReportParams::new(ctx, n),
        commutator_deviation(ctx, n),
        1e-12,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherentForm {
    Closed,
    Series(usize),
}

/// Argument convention of `e_{q,alpha}` in the normalization `C0(zeta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoherentNormalization {
    /// `C0 = e_{q,alpha}((1-q)|zeta|^2)^(-1/2)`, the value the series itself sums to.
    SeriesSign,
    /// `C0 = e_{q,alpha}(-(1-q) zeta^2)^(-1/2)`, the literal display.
    PrintedSign,
}

pub const DEFAULT_COHERENT_TERMS: usize = 40;

/// Eigenfunction of `a` with eigenvalue `zeta`.
#[derive(Debug, Clone)]
pub struct CoherentState {
    zeta: Complex64,
    form: CoherentForm,
    normalization: CoherentNormalization,
    fam: HermiteFamily,
}

impl CoherentState {
    pub fn new(ctx: QContext, zeta: Complex64, form: CoherentForm) -> Result<Self> {
        let r = (1.0 - ctx.q()) * zeta.norm_sqr();
        if !(r < 1.0) {
            return Err(QError::Domain(format!(
                "coherent state needs (1-q)|zeta|^2 < 1, got {r}"
            )));
        }
        let n_max = match form {
            CoherentForm::Closed => 0,
            CoherentForm::Series(n) => n,
        };
        Ok(CoherentState {
            zeta,
            form,
            normalization: CoherentNormalization::SeriesSign,
            fam: HermiteFamily::new(ctx, n_max)?,
        })
    }

    pub fn with_normalization(mut self, normalization: CoherentNormalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn ctx(&self) -> &QContext {
        self.fam.ctx()
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn form(&self) -> CoherentForm {
        self.form
    }

    pub fn c0(&self) -> Result<Complex64> {
        coherent_c0(self.ctx(), self.zeta, self.normalization)
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        let ctx = *self.ctx();
        let q = ctx.q();
        let c0 = self.c0()?;
        match self.form {
            CoherentForm::Closed => {
                let ln_w = self.fam.ln_weight(x)?;
                let q2 = ctx.with_base(q * q)?;
                let damp = q_exponential(
                    &q2,
                    -self.zeta * self.zeta * (q * (1.0 - q)),
                    QExpKind::SmallE,
                )?;
                let big = q_exponential_scaled(
                    &ctx,
                    self.zeta * ((q * (1.0 - q)).sqrt() * x),
                    QExpKind::BigEAlpha,
                )?;
                let ln = self.fam.ln_c_alpha() + 0.5 * ln_w + big.ln_scale;
                Ok(c0 * damp * big.mantissa * ln.exp())
            }
            CoherentForm::Series(n_terms) => {
                let mut sum = ZERO;
                let mut zp = re(1.0);
                for n in 0..=n_terms {
                    let w = gen_q_factorial(&ctx, n).sqrt();
                    sum += zp / w * self.fam.eval_wavefunction(n, x)?;
                    zp *= self.zeta;
                }
                Ok(c0 * sum)
            }
        }
    }

    pub fn grid(&self, grid: &LatticeGrid) -> Result<GridFunction> {
        let vals = grid
            .points()
            .map(|(s, n)| self.eval(grid.x(s, n)))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::from_values(*grid, vals)
    }
}

pub fn coherent_c0(
    ctx: &QContext,
    zeta: Complex64,
    normalization: CoherentNormalization,
) -> Result<Complex64> {
    let q = ctx.q();
    let arg = match normalization {
        CoherentNormalization::SeriesSign => re((1.0 - q) * zeta.norm_sqr()),
        CoherentNormalization::PrintedSign => -zeta * zeta * (1.0 - q),
    };
    Ok(q_exponential(ctx, arg, QExpKind::SmallEAlpha)?.sqrt().inv())
}

/// `<phi_zeta, phi_zeta'>` from the closed formula under either convention:
/// `C0(zeta) conj(C0(zeta')) e_{q,alpha}(±(1-q) zeta conj(zeta'))`.
pub fn coherent_overlap(
    ctx: &QContext,
    zeta: Complex64,
    zeta_p: Complex64,
    normalization: CoherentNormalization,
) -> Result<Complex64> {
    let q = ctx.q();
    let c =
        coherent_c0(ctx, zeta, normalization)? * coherent_c0(ctx, zeta_p, normalization)?.conj();
    let arg = match normalization {
        CoherentNormalization::SeriesSign => zeta * zeta_p.conj() * (1.0 - q),
        CoherentNormalization::PrintedSign => -zeta * zeta_p.conj() * (1.0 - q),
    };
    Ok(c * q_exponential(ctx, arg, QExpKind::SmallEAlpha)?)
}
