//! q-difference operators and the q-Dunkl operator.
//!
//! Every operator is a short stencil in the exponent: its value at `x`
//! reads `f(q^k x)` for `|k| <= stencil_width` and possibly `f(-q^k x)`.
//! Applied to a [`GridFunction`] the output lives on the input grid shrunk
//! by the stencil width; nothing is padded or extrapolated.

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::lattice::{map_stencil, GridFunction};
use crate::qcore::QContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QOperatorKind {
    /// `(f(x) - f(qx)) / ((1-q) x)`
    Dq,
    /// `(f(x/q) - f(x)) / ((1-q) x)`
    DqPlus,
    /// `(f(x) - q^(2a+1) f(qx)) / ((1-q) x)`
    DqAlpha,
    /// `(f(x/q) - q^(2a+1) f(x)) / ((1-q) x)`
    DqAlphaPlus,
    /// `D_q f_e + D_{q,alpha} f_o`
    DeltaAlpha,
    /// `D_q^+ f_e + D_{q,alpha}^+ f_o`
    DeltaAlphaPlus,
    /// q-Dunkl operator `Delta^+ f_e + Delta f_o`
    QDunkl,
    /// `f(x) -> f(q^p x)`
    Dilate(i32),
    /// `f_e + q^(2a+1) f_o`
    HAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QOperator {
    pub kind: QOperatorKind,
    pub ctx: QContext,
}

impl QOperator {
    pub fn new(kind: QOperatorKind, ctx: QContext) -> Self {
        QOperator { kind, ctx }
    }

    pub fn stencil_width(&self) -> usize {
        match self.kind {
            QOperatorKind::Dilate(p) => p.unsigned_abs() as usize,
            QOperatorKind::HAlpha => 0,
            _ => 1,
        }
    }

    /// The operator at `x` given `sample(k, reflect) = f(±q^k x)`.
    pub fn eval_stencil(&self, x: f64, sample: &dyn Fn(i64, bool) -> Complex64) -> Complex64 {
        let q = self.ctx.q();
        let qa = self.ctx.q_two_alpha_one();
        let den = (1.0 - q) * x;
        let even = |k: i64| (sample(k, false) + sample(k, true)) * 0.5;
        let odd = |k: i64| (sample(k, false) - sample(k, true)) * 0.5;
        let d = |g: &dyn Fn(i64) -> Complex64| (g(0) - g(1)) / den;
        let d_plus = |g: &dyn Fn(i64) -> Complex64| (g(-1) - g(0)) / den;
        let d_alpha = |g: &dyn Fn(i64) -> Complex64| (g(0) - g(1) * qa) / den;
        let d_alpha_plus = |g: &dyn Fn(i64) -> Complex64| (g(-1) - g(0) * qa) / den;
        let full = |k: i64| sample(k, false);
        match self.kind {
            QOperatorKind::Dq => d(&full),
            QOperatorKind::DqPlus => d_plus(&full),
            QOperatorKind::DqAlpha => d_alpha(&full),
            QOperatorKind::DqAlphaPlus => d_alpha_plus(&full),
            QOperatorKind::DeltaAlpha => d(&even) + d_alpha(&odd),
            QOperatorKind::DeltaAlphaPlus => d_plus(&even) + d_alpha_plus(&odd),
            // Delta^+ of an even function is D_q^+, Delta of an odd one is D_{q,alpha}.
            QOperatorKind::QDunkl => d_plus(&even) + d_alpha(&odd),
            QOperatorKind::Dilate(p) => sample(p as i64, false),
            QOperatorKind::HAlpha => even(0) + odd(0) * qa,
        }
    }

    /// Pointwise application to a function of a real variable.
    pub fn apply_fn<F: Fn(f64) -> Complex64>(&self, x: f64, f: F) -> Complex64 {
        let q = self.ctx.q();
        self.eval_stencil(x, &|k, reflect| {
            let y = x * q.powi(k as i32);
            f(if reflect { -y } else { y })
        })
    }

    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        let g = f.grid();
        if g.ctx().q() != self.ctx.q() || g.ctx().alpha() != self.ctx.alpha() {
            return Err(QError::Shape(format!(
                "operator context (q={}, alpha={}) differs from grid (q={}, alpha={})",
                self.ctx.q(),
                self.ctx.alpha(),
                g.ctx().q(),
                g.ctx().alpha()
            )));
        }
        let grid = *g;
        map_stencil(f, self.stencil_width(), |s, n, sample| {
            self.eval_stencil(grid.x(s, n), sample)
        })
    }

    /// Applies `ops` right to left: `chain(&[A, B], f) = A(B(f))`.
    pub fn chain(ops: &[QOperator], f: &GridFunction) -> Result<GridFunction> {
        let mut cur = f.clone();
        for op in ops.iter().rev() {
            cur = op.apply(&cur)?;
        }
        Ok(cur)
    }
}
