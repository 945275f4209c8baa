//! Classical (`q = 1`) objects: Rosenblum's generalized Hermite polynomials
//! and functions, the Dunkl operator and the Calogero-Vasiliev ladder
//! coefficients. They are the oracles for the `q -> 1` limit checks.

use std::cell::RefCell;

use num_complex::Complex64;
use serde_json::json;
use statrs::function::gamma::ln_gamma;

use crate::error::{QError, Result};
use crate::hermite::HermiteFamily;
use crate::oscillator::{ladder_at, Ladder};
use crate::qcore::{gen_q_factorial, ln_rosenblum_gamma, rosenblum_gamma, QContext};
use crate::report::{ReportParams, VerificationReport};

/// Step of the central difference used for `f'`.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalFamily {
    nu: f64,
    n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderCoefficient {
    pub target: usize,
    pub coefficient: f64,
}

impl ClassicalFamily {
    pub fn new(nu: f64, n_max: usize) -> Result<Self> {
        if !(nu > -0.5) {
            return Err(QError::InvalidParameter(format!(
                "nu must be > -1/2, got {nu}"
            )));
        }
        Ok(ClassicalFamily { nu, n_max })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            Err(QError::Range {
                index: n,
                max: self.n_max,
            })
        } else {
            Ok(())
        }
    }

    /// `H_n^nu(x) = n! sum_k (-1)^k (2x)^(n-2k) / (k! gamma_nu(n-2k))`
    pub fn eval_rosenblum_hermite(&self, n: usize, x: f64) -> Result<f64> {
        self.check(n)?;
        let ln_nfact = ln_gamma(n as f64 + 1.0);
        let terms = (0..=n / 2).map(|k| {
            let p = n - 2 * k;
            let mag = (ln_nfact - ln_gamma(k as f64 + 1.0) - ln_rosenblum_gamma(self.nu, p)).exp();
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s * mag * (2.0 * x).powi(p as i32)
        });
        Ok(crate::qcore::neumaier_sum(terms))
    }

    /// `phi_n(x) = sqrt(gamma_nu(n)/Gamma(nu+1/2)) e^(-x^2/2) H_n(x) / (2^(n/2) n!)`
    pub fn eval_wavefunction(&self, n: usize, x: f64) -> Result<f64> {
        let h = self.eval_rosenblum_hermite(n, x)?;
        let ln_pre = 0.5 * (ln_rosenblum_gamma(self.nu, n) - ln_gamma(self.nu + 0.5))
            - 0.5 * n as f64 * std::f64::consts::LN_2
            - ln_gamma(n as f64 + 1.0);
        Ok((ln_pre - 0.5 * x * x).exp() * h)
    }

    /// `A+ phi_n = c phi_{n+1}`: `sqrt(n + 2nu + 1)` for even `n`, `sqrt(n + 1)` for odd.
    pub fn creation_coefficient(&self, n: usize) -> LadderCoefficient {
        let c = if n % 2 == 0 {
            (n as f64 + 2.0 * self.nu + 1.0).sqrt()
        } else {
            (n as f64 + 1.0).sqrt()
        };
        LadderCoefficient {
            target: n + 1,
            coefficient: c,
        }
    }

    /// `A phi_n = c phi_{n-1}`; `A phi_0 = 0`.
    pub fn annihilation_coefficient(&self, n: usize) -> LadderCoefficient {
        if n == 0 {
            return LadderCoefficient {
                target: 0,
                coefficient: 0.0,
            };
        }
        let mut c = self.creation_coefficient(n - 1);
        c.target = n - 1;
        c
    }

    pub fn apply_classical_ladder(&self, n: usize, which: Ladder) -> LadderCoefficient {
        match which {
            Ladder::Annihilation => self.annihilation_coefficient(n),
            Ladder::Creation => self.creation_coefficient(n),
        }
    }

    /// `(A A+ - A+ A)` on `phi_n` from the ladder coefficients.
    pub fn commutator_coefficient(&self, n: usize) -> f64 {
        let up = self.creation_coefficient(n).coefficient;
        let down = self.annihilation_coefficient(n).coefficient;
        up * up - down * down
    }
}

/// `Lambda_nu f(x) = f'(x) + nu (f(x) - f(-x)) / x`, with `(1 + 2nu) f'(0)` at 0.
pub fn classical_dunkl_at<F: Fn(f64) -> f64>(nu: f64, f: F, x: f64) -> f64 {
    let d = |y: f64| (f(y + FD_STEP) - f(y - FD_STEP)) / (2.0 * FD_STEP);
    if x == 0.0 {
        (1.0 + 2.0 * nu) * d(0.0)
    } else {
        d(x) + nu * (f(x) - f(-x)) / x
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Quadrature for `∫_{-L}^{L} g(x) |x|^(2nu) dx`: composite Gauss-Legendre
/// on `[1, L]`, geometrically graded panels on `(a, 1]`, and on `(0, a]`
/// the substitution `x = a u^(1/(2nu+1))` which absorbs the power.
#[derive(Debug, Clone)]
pub struct ClassicalQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ClassicalQuadrature {
    pub fn new(nu: f64, half_width: f64) -> Self {
        const ORDER: usize = 12;
        const UNIFORM_PANELS: usize = 70;
        const GRADED_PANELS: usize = 28;
        const RATIO: f64 = 0.35;
        let (gx, gw) = gauss_legendre(ORDER);
        let beta = 2.0 * nu;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let panel = |a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>| {
            let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
            for (x, w) in gx.iter().zip(&gw) {
                let t = mid + half * x;
                nodes.push(t);
                weights.push(w * half * t.powf(beta));
            }
        };
        let h = (half_width - 1.0) / UNIFORM_PANELS as f64;
        for j in 0..UNIFORM_PANELS {
            panel(
                1.0 + j as f64 * h,
                1.0 + (j + 1) as f64 * h,
                &mut nodes,
                &mut weights,
            );
        }
        let mut hi = 1.0;
        for _ in 0..GRADED_PANELS {
            let lo = hi * RATIO;
            panel(lo, hi, &mut nodes, &mut weights);
            hi = lo;
        }
        // ∫_0^a g(x) x^beta dx = a^(beta+1)/(beta+1) ∫_0^1 g(a u^(1/(beta+1))) du
        let a = hi;
        let p = 1.0 / (beta + 1.0);
        for (x, w) in gx.iter().zip(&gw) {
            let u = 0.5 * (x + 1.0);
            nodes.push(a * u.powf(p));
            weights.push(0.5 * w * a.powf(beta + 1.0) / (beta + 1.0));
        }
        let mut all_nodes: Vec<f64> = nodes.iter().map(|x| -x).collect();
        let mut all_weights = weights.clone();
        all_nodes.extend(nodes);
        all_weights.extend(weights);
        ClassicalQuadrature {
            nodes: all_nodes,
            weights: all_weights,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        crate::qcore::neumaier_sum(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(x)),
        )
    }
}

/// Gram matrix `∫ phi_n phi_m |x|^(2nu) dx` on `[-12, 12]` for `n, m <= n_max`.
pub fn classical_gram(fam: &ClassicalFamily, n_max: usize) -> Result<Vec<Vec<f64>>> {
    let quad = ClassicalQuadrature::new(fam.nu(), 12.0);
    let vals = (0..=n_max)
        .map(|n| {
            quad.nodes
                .iter()
                .map(|&x| fam.eval_wavefunction(n, x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=n_max)
        .map(|i| {
            (0..=n_max)
                .map(|j| {
                    crate::qcore::neumaier_sum(
                        quad.weights
                            .iter()
                            .enumerate()
                            .map(|(k, w)| w * vals[i][k] * vals[j][k]),
                    )
                })
                .collect()
        })
        .collect())
}

/// Continuum sample points for the limit checks: 24 midpoints in `[-3, 3]`.
pub fn limit_samples() -> Vec<f64> {
    (0..24)
        .map(|j| -3.0 + 6.0 * (j as f64 + 0.5) / 24.0)
        .collect()
}

/// Nearest lattice point to `s x` (`s = sqrt(1-q^2)`) and the exact
/// continuum preimage of that lattice point.
fn snap(q: f64, s: f64, x: f64) -> (f64, f64) {
    let target = s * x;
    let n = (target.abs().ln() / q.ln()).round();
    let y = target.signum() * q.powf(n);
    (y, y / s)
}

/// Contexts for `q` near one need many product terms.
pub fn limit_context(q: f64, alpha: f64) -> Result<QContext> {
    let terms = ((60.0 / (1.0 - q * q)) as usize).max(10_000);
    QContext::new(q, alpha)?.with_max_terms(terms)
}

/// Error sequence of one limit check along `qs`.
#[derive(Debug, Clone)]
pub struct LimitSequence {
    pub name: String,
    pub errors: Vec<f64>,
}

impl LimitSequence {
    pub fn strictly_decreasing(&self) -> bool {
        self.errors.windows(2).all(|w| w[1] < w[0])
    }
}

/// `max_x |(1-q^2)^((alpha+1)/2) phi_n^alpha(y; q) - phi_n^nu(y / s)|`.
pub fn wavefunction_limit_error(q: f64, alpha: f64, n: usize) -> Result<f64> {
    let ctx = limit_context(q, alpha)?;
    let fam = HermiteFamily::new(ctx, n)?;
    let cl = ClassicalFamily::new(alpha + 0.5, n)?;
    let s = (1.0 - q * q).sqrt();
    let pre = (1.0 - q * q).powf((alpha + 1.0) / 2.0);
    let mut err: f64 = 0.0;
    for x in limit_samples() {
        let (y, xs) = snap(q, s, x);
        let got = pre * fam.eval_wavefunction(n, y)?;
        err = err.max((got - cl.eval_wavefunction(n, xs)?).abs());
    }
    Ok(err)
}

/// Same as [`wavefunction_limit_error`] for `a` (`(Lambda + x)/sqrt 2`) or
/// `a+` (`(-Lambda + x)/sqrt 2`).
pub fn ladder_limit_error(q: f64, alpha: f64, n: usize, which: Ladder) -> Result<f64> {
    let ctx = limit_context(q, alpha)?;
    let fam = HermiteFamily::new(ctx, n)?;
    let nu = alpha + 0.5;
    let cl = ClassicalFamily::new(nu, n)?;
    let s = (1.0 - q * q).sqrt();
    let pre = (1.0 - q * q).powf((alpha + 1.0) / 2.0);
    let mut err: f64 = 0.0;
    for x in limit_samples() {
        let (y, xs) = snap(q, s, x);
        let failure = RefCell::new(None);
        let got = pre
            * ladder_at(&ctx, which, y, |t| match fam.eval_wavefunction(n, t) {
                Ok(v) => Complex64::new(v, 0.0),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            })
            .re;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let phi = |t: f64| cl.eval_wavefunction(n, t).unwrap_or(f64::NAN);
        let lam = classical_dunkl_at(nu, phi, xs);
        let sign = match which {
            Ladder::Annihilation => 1.0,
            Ladder::Creation => -1.0,
        };
        let want = (sign * lam + xs * phi(xs)) / std::f64::consts::SQRT_2;
        err = err.max((got - want).abs());
    }
    Ok(err)
}

/// Relative error of `(2n)!_{q,alpha}` against `gamma_{alpha+1/2}(2n)`.
pub fn factorial_limit_error(q: f64, alpha: f64, n: usize) -> Result<f64> {
    let ctx = limit_context(q, alpha)?;
    let want = rosenblum_gamma(alpha + 0.5, 2 * n);
    Ok(((gen_q_factorial(&ctx, 2 * n) - want) / want).abs())
}

pub const WAVEFUNCTION_LIMIT_TOL: f64 = 5e-3;
pub const OPERATOR_LIMIT_TOL: f64 = 1e-2;

/// Default `q` sequence for the limit checks.
pub const LIMIT_QS: [f64; 3] = [0.9, 0.99, 0.999];

fn sequence_report(
    name: String,
    qs: &[f64],
    alpha: f64,
    n_max: usize,
    errors: Vec<f64>,
    tol: f64,
) -> VerificationReport {
    let seq = LimitSequence { name, errors };
    let last = *seq.errors.last().unwrap_or(&f64::NAN);
    let mut params = ReportParams::new(
        &QContext::new(*qs.last().unwrap_or(&0.5), alpha).expect("valid q"),
        n_max,
    );
    params.grid = None;
    VerificationReport::new(seq.name.clone(), params, last, tol)
        .require(seq.strictly_decreasing())
        .with_details(json!({ "q": qs, "errors": seq.errors, "strictly_decreasing": seq.strictly_decreasing() }))
}

/// Limit reports along `qs` (increasing towards one):
/// wave functions for every `n` in `ns`, `a+` for every `n`, `a` for `n >= 1`
/// (for `n = 0` both sides vanish identically), and the factorial limit at `2n = 6`.
pub fn limit_suite(qs: &[f64], alpha: f64, ns: &[usize]) -> Result<Vec<VerificationReport>> {
    if qs.is_empty()
        || qs.windows(2).any(|w| w[1] <= w[0])
        || qs.iter().any(|&q| !(q > 0.0 && q < 1.0))
    {
        return Err(QError::InvalidParameter(
            "q sequence must increase inside (0, 1)".into(),
        ));
    }
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for &n in ns {
        let errs = qs
            .iter()
            .map(|&q| wavefunction_limit_error(q, alpha, n))
            .collect::<Result<Vec<_>>>()?;
        out.push(sequence_report(
            format!("limit_wavefunction_n{n}"),
            qs,
            alpha,
            n_max,
            errs,
            WAVEFUNCTION_LIMIT_TOL,
        ));
    }
    for &n in ns {
        if n >= 1 {
            let errs = qs
                .iter()
                .map(|&q| ladder_limit_error(q, alpha, n, Ladder::Annihilation))
                .collect::<Result<Vec<_>>>()?;
            out.push(sequence_report(
                format!("limit_a_n{n}"),
                qs,
                alpha,
                n_max,
                errs,
                OPERATOR_LIMIT_TOL,
            ));
        }
        let errs = qs
            .iter()
            .map(|&q| ladder_limit_error(q, alpha, n, Ladder::Creation))
            .collect::<Result<Vec<_>>>()?;
        out.push(sequence_report(
            format!("limit_a_plus_n{n}"),
            qs,
            alpha,
            n_max,
            errs,
            OPERATOR_LIMIT_TOL,
        ));
    }
    let errs = qs
        .iter()
        .map(|&q| factorial_limit_error(q, alpha, 3))
        .collect::<Result<Vec<_>>>()?;
    out.push(sequence_report(
        "limit_factorial_2n6".into(),
        qs,
        alpha,
        n_max,
        errs,
        OPERATOR_LIMIT_TOL,
    ));
    Ok(out)
}
