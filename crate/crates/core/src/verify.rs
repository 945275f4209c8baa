//! Named verification suites. Each produces [`VerificationReport`]s; a suite
//! passes when every report does.

use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::classical::{limit_context, limit_suite, LIMIT_QS};
use crate::error::{QError, Result};
use crate::exact::{rational, relative_error, to_f64, ExactHermite};
use crate::hermite::{ln_c_alpha, HermiteFamily, ShiftDirection};
use crate::lattice::{inner_product_alpha, norm_alpha, GridFunction, LatticeGrid};
use crate::oscillator::{
    apply_a_grid, apply_a_plus_grid, casimir_eigenvalue, coherent_overlap, commutator_deviation,
    creation_tower, hamiltonian_energy, BGenerator, CoherentForm, CoherentNormalization,
    CoherentState, SpectralVector,
};
use crate::qcore::{
    gen_q_factorial, gen_q_integer, gen_q_shifted, q_exponential, q_pochhammer, symmetric_q_number,
    GenQKind, Length, QContext, QExpKind,
};
use crate::report::{ReportParams, VerificationReport};
use crate::transform::{k_alpha_via_gamma, TransformPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Orthogonality,
    Shifts,
    Generating,
    Ladder,
    Commutation,
    Casimir,
    Coherent,
    Plancherel,
    Limits,
    Degeneration,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 11] = [
        "orthogonality",
        "shifts",
        "generating",
        "ladder",
        "commutation",
        "casimir",
        "coherent",
        "plancherel",
        "limits",
        "degeneration",
        "all",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Shifts => "shifts",
            Suite::Generating => "generating",
            Suite::Ladder => "ladder",
            Suite::Commutation => "commutation",
            Suite::Casimir => "casimir",
            Suite::Coherent => "coherent",
            Suite::Plancherel => "plancherel",
            Suite::Limits => "limits",
            Suite::Degeneration => "degeneration",
            Suite::All => "all",
        }
    }

    fn members() -> [Suite; 10] {
        [
            Suite::Orthogonality,
            Suite::Shifts,
            Suite::Generating,
            Suite::Ladder,
            Suite::Commutation,
            Suite::Casimir,
            Suite::Coherent,
            Suite::Plancherel,
            Suite::Limits,
            Suite::Degeneration,
        ]
    }
}

impl FromStr for Suite {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::members()
            .into_iter()
            .chain([Suite::All])
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                QError::InvalidParameter(format!(
                    "unknown suite '{s}', expected one of {}",
                    Suite::NAMES.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub ctx: QContext,
    pub n_max: usize,
    pub grid: LatticeGrid,
    pub seed: u64,
}

pub const DEFAULT_Q: f64 = 0.5;
pub const DEFAULT_ALPHA: f64 = 0.3;
pub const DEFAULT_VERIFY_N_MAX: usize = 12;
pub const DEFAULT_SEED: u64 = 20240917;

impl SuiteConfig {
    pub fn new(ctx: QContext, n_max: usize, grid: LatticeGrid, seed: u64) -> Self {
        SuiteConfig {
            ctx,
            n_max,
            grid,
            seed,
        }
    }

    pub fn defaults() -> Self {
        let ctx = QContext::new(DEFAULT_Q, DEFAULT_ALPHA).expect("valid defaults");
        SuiteConfig::new(
            ctx,
            DEFAULT_VERIFY_N_MAX,
            LatticeGrid::default_for(ctx),
            DEFAULT_SEED,
        )
    }

    fn params(&self) -> ReportParams {
        ReportParams::new(&self.ctx, self.n_max)
            .with_grid(&self.grid)
            .with_seed(self.seed)
    }

    fn scalar_params(&self) -> ReportParams {
        ReportParams::new(&self.ctx, self.n_max).with_seed(self.seed)
    }
}

/// Runs `suite`; every report carries the configured seed.
pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut reports = run_inner(suite, cfg)?;
    for r in &mut reports {
        r.params.seed.get_or_insert(cfg.seed);
    }
    Ok(reports)
}

fn run_inner(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Orthogonality => orthogonality(cfg),
        Suite::Shifts => shifts(cfg),
        Suite::Generating => generating(cfg),
        Suite::Ladder => ladder(cfg),
        Suite::Commutation => commutation(cfg),
        Suite::Casimir => casimir(cfg),
        Suite::Coherent => coherent(cfg),
        Suite::Plancherel => plancherel(cfg),
        Suite::Limits => limits(cfg),
        Suite::Degeneration => degeneration(cfg),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::members() {
                out.extend(run_inner(s, cfg)?);
            }
            Ok(out)
        }
    }
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Max `|<phi_n, phi_m> - delta_nm|` over `n, m <= n_max`.
pub fn orthonormality_deviation(
    fam: &HermiteFamily,
    grid: &LatticeGrid,
    n_max: usize,
) -> Result<f64> {
    let ns: Vec<usize> = (0..=n_max).collect();
    let phis = fam.wavefunctions_grid(&ns, grid)?;
    let mut dev: f64 = 0.0;
    for i in 0..=n_max {
        for j in i..=n_max {
            let d = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((inner_product_alpha(&phis[i], &phis[j])? - re(d)).norm());
        }
    }
    Ok(dev)
}

pub fn orthogonality(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let fam = HermiteFamily::new(cfg.ctx, cfg.n_max)?;
    let dev = orthonormality_deviation(&fam, &cfg.grid, cfg.n_max)?;
    let q = cfg.ctx.q();
    let mut rec: f64 = 0.0;
    for n in 1..=cfg.n_max {
        let ratio = fam.norm_constant(n)? / fam.norm_constant(n - 1)?;
        let want = q.powf(n as f64 - 0.5) * gen_q_integer(&cfg.ctx, n, GenQKind::Basic).sqrt()
            / ((1.0 - q).sqrt() * crate::qcore::basic_q_number(q, n as f64));
        rec = rec.max((ratio / want - 1.0).abs());
    }
    Ok(vec![
        VerificationReport::new("orthonormality", cfg.params(), dev, 1e-8),
        VerificationReport::new("norm_constant_recurrence", cfg.scalar_params(), rec, 1e-12),
    ])
}

/// 50 lattice points `±q^e`, `-12 <= e <= 12`.
pub fn shift_points(q: f64) -> Vec<f64> {
    (-12..=12).flat_map(|e| [q.powi(e), -q.powi(e)]).collect()
}

pub fn shift_deviation(fam: &HermiteFamily, n_max: usize, dir: ShiftDirection) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for n in 0..=n_max {
        for x in shift_points(fam.ctx().q()) {
            dev = dev.max(fam.shift_check(n, x, dir)?.relative_error());
        }
    }
    Ok(dev)
}

pub fn shifts(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let fam = HermiteFamily::new(cfg.ctx, cfg.n_max + 1)?;
    Ok(vec![
        VerificationReport::new(
            "forward_shift",
            cfg.scalar_params(),
            shift_deviation(&fam, cfg.n_max, ShiftDirection::Forward)?,
            1e-10,
        ),
        VerificationReport::new(
            "backward_shift",
            cfg.scalar_params(),
            shift_deviation(&fam, cfg.n_max, ShiftDirection::Backward)?,
            1e-10,
        ),
    ])
}

pub const GENERATING_TERMS: usize = 40;
pub const GENERATING_ZS: [f64; 4] = [0.5, 0.25, -0.5, -0.1];

/// Max absolute error of the order-40 generating-function partial sum on
/// grid points with `|x| <= 4`.
pub fn generating_deviation(ctx: &QContext, grid: &LatticeGrid) -> Result<f64> {
    let fam = HermiteFamily::new(*ctx, GENERATING_TERMS)?;
    let q = ctx.q();
    let q2 = ctx.with_base(q * q)?;
    let mut dev: f64 = 0.0;
    for (s, e) in grid.points() {
        let x = grid.x(s, e);
        if x.abs() > 4.0 {
            continue;
        }
        for &z in &GENERATING_ZS {
            let mut sum = 0.0;
            for n in 0..=GENERATING_TERMS {
                let w = q.powf((n * n.saturating_sub(1)) as f64 / 2.0)
                    / q_pochhammer(re(q), q, Length::Finite(n), ctx.max_terms())?.re;
                sum += w * fam.eval_htilde(n, x)? * z.powi(n as i32);
            }
            let rhs = q_exponential(&q2, re(-z * z), QExpKind::SmallE)?
                * q_exponential(ctx, re(x * z), QExpKind::BigEAlpha)?;
            dev = dev.max((sum - rhs.re).abs());
        }
    }
    Ok(dev)
}

/// `±q^e`, `-1 <= e <= 8`.
pub fn inversion_points(q: f64) -> Vec<f64> {
    (-1..=8).flat_map(|e| [q.powi(e), -q.powi(e)]).collect()
}

pub const INVERSION_N_MAX: usize = 10;

/// Reconstruction of `x^n`, `n <= 10`, from the inversion formula at
/// [`inversion_points`].
#[derive(Debug, Clone, Copy)]
pub struct InversionDeviations {
    /// Max `|sum_k c_k h_(n-2k)(x) - x^n|` in exact rational arithmetic.
    pub exact: f64,
    /// Max relative error of the `f64` coefficients against the exact ones.
    pub coefficients: f64,
    /// Max `f64` reconstruction error divided by the sum of term magnitudes.
    pub scaled_float: f64,
    /// Max `f64` reconstruction error; dominated by cancellation.
    pub direct_float: f64,
}

pub fn inversion_deviations(ctx: &QContext) -> Result<InversionDeviations> {
    let fam = HermiteFamily::new(*ctx, INVERSION_N_MAX)?;
    let ex = ExactHermite::new(ctx)?;
    let mut d = InversionDeviations {
        exact: 0.0,
        coefficients: 0.0,
        scaled_float: 0.0,
        direct_float: 0.0,
    };
    for n in 0..=INVERSION_N_MAX {
        let c = fam.monomial_expand(n)?;
        for (a, b) in c.iter().zip(ex.monomial_coefficients(n)) {
            d.coefficients = d.coefficients.max(relative_error(*a, &b)?);
        }
        for x in inversion_points(ctx.q()) {
            d.exact = d
                .exact
                .max(to_f64(&ex.inversion_residual(n, &rational(x)?)).abs());
            let (mut sum, mut scale) = (0.0, 0.0);
            for (k, ck) in c.iter().enumerate() {
                sum += ck * fam.eval_htilde(n - 2 * k, x)?;
                scale += ck.abs() * fam.eval_htilde_magnitude(n - 2 * k, x)?;
            }
            let err = (sum - x.powi(n as i32)).abs();
            d.direct_float = d.direct_float.max(err);
            d.scaled_float = d.scaled_float.max(err / scale.max(1.0));
        }
    }
    Ok(d)
}

pub fn generating(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let inv = inversion_deviations(&cfg.ctx)?;
    Ok(vec![
        VerificationReport::new(
            "generating_function",
            cfg.params(),
            generating_deviation(&cfg.ctx, &cfg.grid)?,
            1e-9,
        ),
        VerificationReport::new("inversion_formula", cfg.scalar_params(), inv.exact, 1e-9)
            .with_details(json!({ "float_residual": inv.direct_float })),
        VerificationReport::new(
            "inversion_coefficients",
            cfg.scalar_params(),
            inv.coefficients,
            1e-12,
        ),
        VerificationReport::new(
            "inversion_float_conditioned",
            cfg.scalar_params(),
            inv.scaled_float,
            1e-12,
        ),
    ])
}

/// Grid residuals `(max_n ||a phi_n - sqrt[[n]] phi_{n-1}||, max_n ||a+ phi_n - sqrt[[n+1]] phi_{n+1}||)`.
pub fn ladder_residuals(ctx: &QContext, grid: &LatticeGrid, n_max: usize) -> Result<(f64, f64)> {
    let fam = HermiteFamily::new(*ctx, n_max + 1)?;
    let inner = grid.shrink(1)?;
    let ns: Vec<usize> = (0..=n_max + 1).collect();
    let phis = fam.wavefunctions_grid(&ns, grid)?;
    let phis_inner = fam.wavefunctions_grid(&ns, &inner)?;
    let (mut da, mut dap): (f64, f64) = (0.0, 0.0);
    for n in 0..=n_max {
        let a = apply_a_grid(ctx, &phis[n])?;
        let want = if n == 0 {
            GridFunction::zeros(inner)
        } else {
            phis_inner[n - 1].scaled(re(gen_q_integer(ctx, n, GenQKind::Basic).sqrt()))
        };
        da = da.max(norm_alpha(&a.sub(&want)?));
        let ap = apply_a_plus_grid(ctx, &phis[n])?;
        let want = phis_inner[n + 1].scaled(re(gen_q_integer(ctx, n + 1, GenQKind::Basic).sqrt()));
        dap = dap.max(norm_alpha(&ap.sub(&want)?));
    }
    Ok((da, dap))
}

pub fn ladder(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let ctx = cfg.ctx;
    let (da, dap) = ladder_residuals(&ctx, &cfg.grid, cfg.n_max)?;
    let fam = HermiteFamily::new(ctx, cfg.n_max + 1)?;

    let phi0 = fam.wavefunction_grid(0, &cfg.grid)?;
    let ground = norm_alpha(&apply_a_grid(&ctx, &phi0)?);

    let mut consistency: f64 = 0.0;
    for n in 0..=cfg.n_max {
        let f = SpectralVector::basis(ctx, n).synthesize(&fam, &cfg.grid)?;
        let v = SpectralVector::project(&apply_a_grid(&ctx, &f)?, &fam, cfg.n_max + 1)?;
        consistency = consistency.max(v.distance(&SpectralVector::basis(ctx, n).apply_a()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g = cfg.grid;
    let inner = g.shrink(1)?;
    let mut adj: f64 = 0.0;
    for _ in 0..10 {
        let mut rand_fn = || {
            GridFunction::from_points(g, |_, n| {
                // supported away from the boundary and from the region where
                // the weight underflows
                if n <= g.n_lo().max(-12) + 2 || n >= g.n_hi() - 2 {
                    re(0.0)
                } else {
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                }
            })
        };
        let f = rand_fn();
        let h = rand_fn();
        let lhs = inner_product_alpha(&apply_a_grid(&ctx, &f)?, &h.restrict(&inner)?)?;
        let rhs = inner_product_alpha(&f.restrict(&inner)?, &apply_a_plus_grid(&ctx, &h)?)?;
        adj = adj.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()));
    }

    let tower_n = cfg.n_max.min(8);
    let mut tower: f64 = 0.0;
    for n in 0..=tower_n {
        let got = creation_tower(&fam, n, &cfg.grid)?;
        let want = fam.wavefunction_grid(n, &cfg.grid)?;
        tower = tower.max(norm_alpha(&got.sub(&want)?));
    }

    Ok(vec![
        VerificationReport::new("ladder_a", cfg.params(), da, 1e-8),
        VerificationReport::new("ladder_a_plus", cfg.params(), dap, 1e-8),
        VerificationReport::new("ladder_a_ground_state", cfg.params(), ground, 1e-9),
        VerificationReport::new(
            "ladder_grid_spectral_consistency",
            cfg.params(),
            consistency,
            1e-8,
        ),
        VerificationReport::new("ladder_adjointness", cfg.params(), adj, 1e-8),
        VerificationReport::new("ladder_creation_tower", cfg.params(), tower, 1e-7)
            .with_details(json!({ "n_max": tower_n })),
    ])
}

/// `max_{n <= n_max} |E(n) - (n + nu + 1/2)|`
pub fn hamiltonian_limit_deviation(ctx: &QContext, n_max: usize) -> f64 {
    (0..=n_max)
        .map(|n| (hamiltonian_energy(ctx, n) - (n as f64 + ctx.nu() + 0.5)).abs())
        .fold(0.0, f64::max)
}

/// Degree range of the commutation, su(1,1) and Casimir checks; their
/// absolute tolerances assume operator norms of this size.
pub const ALGEBRA_N_MAX: usize = 10;

pub fn commutation(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let ctx = cfg.ctx;
    let mut comm: f64 = 0.0;
    let mut b_routes: f64 = 0.0;
    let mut number: f64 = 0.0;
    let mut ham: f64 = 0.0;
    for n in 0..=cfg.n_max {
        if n <= ALGEBRA_N_MAX {
            comm = comm.max(commutator_deviation(&ctx, n));
        }
        let e = SpectralVector::basis(ctx, n);
        b_routes = b_routes
            .max(e.apply_b().distance(&e.apply_b_via_a()))
            .max(e.apply_b_plus().distance(&e.apply_b_plus_via_a()));
        number = number.max(e.apply_number().distance(&e.number_from_ladder()?));
        ham = ham.max(
            e.apply_hamiltonian()
                .distance(&e.scaled(re(hamiltonian_energy(&ctx, n)))),
        );
    }
    let near = QContext::new(0.9999, ctx.alpha())?;
    let limit = hamiltonian_limit_deviation(&near, cfg.n_max);
    Ok(vec![
        VerificationReport::new("commutation_relations", cfg.scalar_params(), comm, 1e-12),
        VerificationReport::new("b_two_routes", cfg.scalar_params(), b_routes, 1e-12),
        VerificationReport::new("number_from_ladder", cfg.scalar_params(), number, 1e-10),
        VerificationReport::new("hamiltonian_spectrum", cfg.scalar_params(), ham, 1e-12),
        VerificationReport::new(
            "hamiltonian_q_to_one",
            ReportParams::new(&near, cfg.n_max),
            limit,
            1e-2,
        ),
    ])
}

pub fn casimir(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let ctx = cfg.ctx;
    let mut cas: f64 = 0.0;
    let mut comm: f64 = 0.0;
    let mut b0: f64 = 0.0;
    for n in 0..=cfg.n_max.min(ALGEBRA_N_MAX) {
        let e = SpectralVector::basis(ctx, n);
        cas = cas.max(
            e.casimir_apply()
                .distance(&e.scaled(re(casimir_eigenvalue(&ctx, n)))),
        );
        let c = e
            .apply_generator(BGenerator::BPlus)
            .apply_generator(BGenerator::BMinus)
            .sub(
                &e.apply_generator(BGenerator::BMinus)
                    .apply_generator(BGenerator::BPlus),
            );
        let want = e.scaled(re(symmetric_q_number(
            ctx.q(),
            n as f64 + ctx.alpha() + 1.0,
        )));
        comm = comm.max(c.distance(&want));
        for (which, sign) in [(BGenerator::BPlus, 1.0), (BGenerator::BMinus, -1.0)] {
            let lhs = e
                .apply_generator(which)
                .apply_generator(BGenerator::B0)
                .sub(&e.apply_generator(BGenerator::B0).apply_generator(which));
            b0 = b0.max(lhs.distance(&e.apply_generator(which).scaled(re(sign))));
        }
    }
    let details = json!({
        "even_eigenvalue": casimir_eigenvalue(&ctx, 0),
        "odd_eigenvalue": casimir_eigenvalue(&ctx, 1),
    });
    Ok(vec![
        VerificationReport::new("casimir_eigenvalues", cfg.scalar_params(), cas, 1e-11)
            .with_details(details),
        VerificationReport::new("su11_b_minus_b_plus", cfg.scalar_params(), comm, 1e-11),
        VerificationReport::new("su11_b0_b_pm", cfg.scalar_params(), b0, 1e-12),
    ])
}

pub const COHERENT_ZETA: f64 = 0.7;

#[derive(Debug, Clone, Copy)]
pub struct CoherentDeviations {
    pub closed_vs_series: f64,
    pub eigen_residual: f64,
    pub norm_error: f64,
    pub overlap_series_sign: f64,
    pub overlap_printed_sign: f64,
}

pub fn coherent_deviations(
    ctx: &QContext,
    grid: &LatticeGrid,
    zeta: Complex64,
) -> Result<CoherentDeviations> {
    let closed = CoherentState::new(*ctx, zeta, CoherentForm::Closed)?.grid(grid)?;
    let series = CoherentState::new(
        *ctx,
        zeta,
        CoherentForm::Series(crate::oscillator::DEFAULT_COHERENT_TERMS),
    )?
    .grid(grid)?;
    let a = apply_a_grid(ctx, &closed)?;
    let resid = a.sub(&closed.restrict(a.grid())?.scaled(zeta))?;
    let norm = norm_alpha(&closed);
    let other = -zeta * 0.5;
    let g = CoherentState::new(*ctx, other, CoherentForm::Closed)?.grid(grid)?;
    let direct = inner_product_alpha(&closed, &g)?;
    Ok(CoherentDeviations {
        closed_vs_series: closed.sub(&series)?.max_abs(),
        eigen_residual: norm_alpha(&resid) / norm,
        norm_error: (norm - 1.0).abs(),
        overlap_series_sign: (direct
            - coherent_overlap(ctx, zeta, other, CoherentNormalization::SeriesSign)?)
        .norm(),
        overlap_printed_sign: (direct
            - coherent_overlap(ctx, zeta, other, CoherentNormalization::PrintedSign)?)
        .norm(),
    })
}

pub fn coherent(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let d = coherent_deviations(&cfg.ctx, &cfg.grid, re(COHERENT_ZETA))?;
    let matching = if d.overlap_series_sign < 1e-7 {
        "series_sign"
    } else if d.overlap_printed_sign < 1e-7 {
        "printed_sign"
    } else {
        "neither"
    };
    Ok(vec![
        VerificationReport::new(
            "coherent_closed_vs_series",
            cfg.params(),
            d.closed_vs_series,
            1e-8,
        ),
        VerificationReport::new(
            "coherent_eigenproperty",
            cfg.params(),
            d.eigen_residual,
            1e-7,
        ),
        VerificationReport::new("coherent_norm", cfg.params(), d.norm_error, 1e-7),
        VerificationReport::new(
            "coherent_overlap",
            cfg.params(),
            d.overlap_series_sign,
            1e-7,
        )
        .with_details(json!({
            "series_sign_deviation": d.overlap_series_sign,
            "printed_sign_deviation": d.overlap_printed_sign,
            "matches": matching,
        })),
    ])
}

pub const PLANCHEREL_N_MAX: usize = 5;

/// `(max_n |‖F phi_n‖ - 1|, max_n ‖F^-1 F phi_n - phi_n‖)` for `n <= 5`.
pub fn plancherel_deviations(ctx: &QContext, grid: &LatticeGrid) -> Result<(f64, f64)> {
    let fam = HermiteFamily::new(*ctx, PLANCHEREL_N_MAX)?;
    let plan = TransformPlan::new(*grid)?;
    let mut iso: f64 = 0.0;
    let mut round: f64 = 0.0;
    for n in 0..=PLANCHEREL_N_MAX {
        let phi = fam.wavefunction_grid(n, grid)?;
        let ft = plan.forward(&phi)?;
        iso = iso.max((norm_alpha(&ft) - norm_alpha(&phi)).abs() / norm_alpha(&phi));
        round = round.max(norm_alpha(&plan.inverse(&ft)?.sub(&phi)?));
    }
    Ok((iso, round))
}

pub fn plancherel(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let (iso, round) = plancherel_deviations(&cfg.ctx, &cfg.grid)?;
    let k1 = crate::transform::k_alpha(&cfg.ctx)?;
    let k2 = k_alpha_via_gamma(&cfg.ctx)?;
    Ok(vec![
        VerificationReport::new("plancherel_isometry", cfg.params(), iso, 1e-4),
        VerificationReport::new("inversion_round_trip", cfg.params(), round, 1e-4),
        VerificationReport::new(
            "k_alpha_two_ways",
            cfg.scalar_params(),
            ((k1 - k2) / k1).abs(),
            1e-12,
        ),
    ])
}

pub fn limits(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let alpha = cfg.ctx.alpha();
    let mut out = limit_suite(&LIMIT_QS, alpha, &[0, 1, 2])?;
    let ctx = limit_context(0.999, alpha)?;
    let lhs = (1.0 - 0.999f64 * 0.999).powf((alpha + 1.0) / 2.0) * ln_c_alpha(&ctx)?.exp();
    let rhs = 1.0 / statrs::function::gamma::gamma(alpha + 1.0).sqrt();
    out.push(VerificationReport::new(
        "limit_c_alpha",
        ReportParams::new(&ctx, 0),
        ((lhs - rhs) / rhs).abs(),
        1e-2,
    ));
    Ok(out)
}

/// Standard discrete q-Hermite II polynomial by its three-term recurrence.
pub fn standard_htilde(n: usize, x: f64, q: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = x * b - q.powi(1 - 2 * k as i32) * (1.0 - q.powi(k as i32)) * a;
        a = b;
        b = c;
    }
    b
}

/// Largest relative deviation between the `alpha = -1/2` generalized objects
/// and their standard counterparts.
pub fn degeneration_deviation(q: f64) -> Result<f64> {
    let ctx = QContext::new(q, -0.5)?;
    let mut dev: f64 = 0.0;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
    for n in 0..=20 {
        let std_shifted = q_pochhammer(re(q), q, Length::Finite(n), ctx.max_terms())?.re;
        dev = dev.max(rel(gen_q_shifted(&ctx, n), std_shifted));
        let fact: f64 = (1..=n)
            .map(|k| crate::qcore::basic_q_number(q, k as f64))
            .product();
        dev = dev.max(rel(gen_q_factorial(&ctx, n), fact));
    }
    for &z in &[0.3, -1.7, 4.0] {
        let a = q_exponential(&ctx, re(z), QExpKind::BigEAlpha)?;
        let b = q_exponential(&ctx, re(z), QExpKind::BigE)?;
        dev = dev.max((a - b).norm() / b.norm());
    }
    for &z in &[0.3, -0.7] {
        let a = q_exponential(&ctx, re(z), QExpKind::SmallEAlpha)?;
        let b = q_exponential(&ctx, re(z), QExpKind::SmallE)?;
        dev = dev.max((a - b).norm() / b.norm());
    }
    let fam = HermiteFamily::new(ctx, 10)?;
    for n in 0..=10 {
        for &x in &[0.25, -0.8, 1.5, 3.0] {
            let want = standard_htilde(n, x, q);
            let got = fam.eval_htilde(n, x)?;
            // relative to the size of the leading term, which bounds rounding
            dev = dev.max((got - want).abs() / want.abs().max(x.abs().powi(n as i32)).max(1.0));
        }
        for &x in &[0.5, 2.0] {
            let mut p = 1.0;
            for k in 0..400 {
                let t = x * x * (q * q).powi(k);
                if t < 1e-18 {
                    break;
                }
                p *= 1.0 + t;
            }
            dev = dev.max(rel(fam.eval_weight(x)?, 1.0 / p));
        }
    }
    let ops = [
        (
            crate::qops::QOperatorKind::DqAlpha,
            crate::qops::QOperatorKind::Dq,
        ),
        (
            crate::qops::QOperatorKind::DqAlphaPlus,
            crate::qops::QOperatorKind::DqPlus,
        ),
        (
            crate::qops::QOperatorKind::DeltaAlpha,
            crate::qops::QOperatorKind::Dq,
        ),
        (
            crate::qops::QOperatorKind::DeltaAlphaPlus,
            crate::qops::QOperatorKind::DqPlus,
        ),
    ];
    let f = |y: f64| Complex64::new(y.exp() + y * y * y, y.sin());
    for (a, b) in ops {
        for &x in &[0.3, -1.1, 2.4] {
            let u = crate::qops::QOperator::new(a, ctx).apply_fn(x, f);
            let v = crate::qops::QOperator::new(b, ctx).apply_fn(x, f);
            dev = dev.max((u - v).norm() / v.norm());
        }
    }
    Ok(dev)
}

pub fn degeneration(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let q = cfg.ctx.q();
    let ctx = QContext::new(q, -0.5)?;
    Ok(vec![VerificationReport::new(
        "alpha_minus_half_degeneration",
        ReportParams::new(&ctx, 20),
        degeneration_deviation(q)?,
        1e-12,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn casimir_alpha_zero_even_eigenvalue_is_zero() {
        let ctx = QContext::new(0.5, 0.0).unwrap();
        let cfg = SuiteConfig::new(ctx, 12, LatticeGrid::default_for(ctx), 1);
        let r = casimir(&cfg).unwrap();
        assert!(r.iter().all(|r| r.pass));
        assert_eq!(r[0].details.as_ref().unwrap()["even_eigenvalue"], 0.0);
    }

    #[test]
    fn standard_recurrence_low_degree() {
        assert_eq!(standard_htilde(2, 1.5, 0.5), 2.25 - 1.0);
    }
}
