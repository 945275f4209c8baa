//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if
//! any criterion fails.

use std::time::{Duration, Instant};

use qcal_core::classical::{limit_suite, LIMIT_QS};
use qcal_core::hermite::{HermiteFamily, ShiftDirection};
use qcal_core::oscillator::{
    casimir_eigenvalue, commutator_deviation, hamiltonian_energy, BGenerator,
};
use qcal_core::qcore::symmetric_q_number;
use qcal_core::verify::{
    coherent_deviations, degeneration_deviation, generating_deviation, hamiltonian_limit_deviation,
    inversion_deviations, ladder_residuals, orthonormality_deviation, plancherel_deviations,
    shift_deviation, COHERENT_ZETA,
};
use qcal_core::{Complex64, LatticeGrid, QContext, SpectralVector};

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(
    id: usize,
    name: &'static str,
    items: &[(&str, f64, f64)],
    extra: &[(&str, bool)],
) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(label, dev, tol) in items {
        let ok = dev < tol;
        pass &= ok;
        parts.push(format!("{label}={dev:.3e} (tol {tol:.0e})"));
    }
    for &(label, ok) in extra {
        pass &= ok;
        parts.push(format!("{label}={ok}"));
    }
    Outcome {
        id,
        name,
        pass,
        detail: parts.join(", "),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn ctx() -> QContext {
    QContext::new(0.5, 0.3).unwrap()
}

fn c1_orthonormality() -> Outcome {
    let c = ctx();
    let (dev, dt) = timed(|| {
        let fam = HermiteFamily::new(c, 12).unwrap();
        orthonormality_deviation(&fam, &LatticeGrid::default_for(c), 12).unwrap()
    });
    check(
        1,
        "orthonormality",
        &[("max_dev", dev, 1e-8)],
        &[(
            &format!("runtime {:.2}s < 5s", dt.as_secs_f64()),
            dt < Duration::from_secs(5),
        )],
    )
}

fn c2_ladder() -> Outcome {
    let c = ctx();
    let (da, dap) = ladder_residuals(&c, &LatticeGrid::default_for(c), 12).unwrap();
    check(
        2,
        "ladder actions",
        &[("a", da, 1e-8), ("a_plus", dap, 1e-8)],
        &[],
    )
}

fn c3_shifts() -> Outcome {
    let fam = HermiteFamily::new(ctx(), 13).unwrap();
    let fwd = shift_deviation(&fam, 12, ShiftDirection::Forward).unwrap();
    let bwd = shift_deviation(&fam, 12, ShiftDirection::Backward).unwrap();
    check(
        3,
        "shift relations",
        &[("forward", fwd, 1e-10), ("backward", bwd, 1e-10)],
        &[],
    )
}

fn c4_generating() -> Outcome {
    let c = ctx();
    let gf = generating_deviation(&c, &LatticeGrid::default_for(c)).unwrap();
    let inv = inversion_deviations(&c).unwrap();
    check(
        4,
        "generating function and inversion",
        &[
            ("generating", gf, 1e-9),
            ("inversion_exact", inv.exact, 1e-9),
            ("inversion_coefficients", inv.coefficients, 1e-12),
            ("inversion_float_conditioned", inv.scaled_float, 1e-12),
        ],
        &[],
    )
}

fn c5_commutation() -> Outcome {
    let c = ctx();
    let dev = (0..=10)
        .map(|n| commutator_deviation(&c, n))
        .fold(0.0, f64::max);
    check(
        5,
        "deformed commutation relation",
        &[("max_dev", dev, 1e-12)],
        &[],
    )
}

fn c6_casimir() -> Outcome {
    let c = ctx();
    let re = |v: f64| Complex64::new(v, 0.0);
    let (mut cas, mut comm, mut eig): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let even = symmetric_q_number(c.q(), c.alpha() / 2.0).powi(2);
    let odd = symmetric_q_number(c.q(), (c.alpha() + 1.0) / 2.0).powi(2);
    for n in 0..=10 {
        let e = SpectralVector::basis(c, n);
        let want = if n % 2 == 0 { even } else { odd };
        eig = eig.max((casimir_eigenvalue(&c, n) - want).abs());
        cas = cas.max(e.casimir_apply().distance(&e.scaled(re(want))));
        let lhs = e
            .apply_generator(BGenerator::BPlus)
            .apply_generator(BGenerator::BMinus)
            .sub(
                &e.apply_generator(BGenerator::BMinus)
                    .apply_generator(BGenerator::BPlus),
            );
        // [2 B0]_q with B0 e_n = (n + alpha + 1)/2 e_n
        let two_b0 = symmetric_q_number(c.q(), n as f64 + c.alpha() + 1.0);
        comm = comm.max(lhs.distance(&e.scaled(re(two_b0))));
    }
    check(
        6,
        "su(1,1) relations and Casimir",
        &[
            ("casimir", cas, 1e-11),
            ("eigenvalue_formula", eig, 1e-11),
            ("b_minus_b_plus", comm, 1e-11),
        ],
        &[],
    )
}

fn c7_hamiltonian() -> Outcome {
    let c = ctx();
    let mut exact: f64 = 0.0;
    for n in 0..=12 {
        let e = SpectralVector::basis(c, n);
        let got = e.apply_hamiltonian();
        exact = exact.max(got.distance(&e.scaled(Complex64::new(hamiltonian_energy(&c, n), 0.0))));
    }
    let near = QContext::new(0.9999, c.alpha()).unwrap();
    let limit = hamiltonian_limit_deviation(&near, 12);
    check(
        7,
        "Hamiltonian spectrum",
        &[("diagonal", exact, 1e-12), ("q_to_one", limit, 1e-2)],
        &[],
    )
}

fn c8_coherent() -> Outcome {
    let c = ctx();
    let d = coherent_deviations(
        &c,
        &LatticeGrid::default_for(c),
        Complex64::new(COHERENT_ZETA, 0.0),
    )
    .unwrap();
    check(
        8,
        "coherent state",
        &[
            ("closed_vs_series", d.closed_vs_series, 1e-8),
            ("eigenproperty", d.eigen_residual, 1e-7),
            ("norm", d.norm_error, 1e-7),
        ],
        &[],
    )
}

fn c9_plancherel() -> Outcome {
    let c = ctx();
    let ((iso, round), dt) =
        timed(|| plancherel_deviations(&c, &LatticeGrid::default_for(c)).unwrap());
    check(
        9,
        "Plancherel",
        &[("isometry", iso, 1e-4), ("round_trip", round, 1e-4)],
        &[(
            &format!("runtime {:.2}s < 60s", dt.as_secs_f64()),
            dt < Duration::from_secs(60),
        )],
    )
}

fn c10_limits() -> Outcome {
    let reports = limit_suite(&LIMIT_QS, 0.3, &[0, 1, 2]).unwrap();
    let items: Vec<(&str, f64, f64)> = reports
        .iter()
        .map(|r| (r.check.as_str(), r.max_deviation, r.tolerance))
        .collect();
    let flags: Vec<(String, bool)> = reports
        .iter()
        .map(|r| {
            let dec = r
                .details
                .as_ref()
                .and_then(|d| d["strictly_decreasing"].as_bool())
                == Some(true);
            (format!("{}_decreasing", r.check), dec)
        })
        .collect();
    let flag_refs: Vec<(&str, bool)> = flags.iter().map(|(s, b)| (s.as_str(), *b)).collect();
    check(10, "q -> 1 limits", &items, &flag_refs)
}

fn c11_degeneration() -> Outcome {
    let items: Vec<(String, f64)> = [0.3, 0.5, 0.8]
        .iter()
        .map(|&q| (format!("q={q}"), degeneration_deviation(q).unwrap()))
        .collect();
    let refs: Vec<(&str, f64, f64)> = items.iter().map(|(s, d)| (s.as_str(), *d, 1e-12)).collect();
    check(11, "alpha = -1/2 degeneration", &refs, &[])
}

fn main() {
    let criteria: [fn() -> Outcome; 11] = [
        c1_orthonormality,
        c2_ladder,
        c3_shifts,
        c4_generating,
        c5_commutation,
        c6_casimir,
        c7_hamiltonian,
        c8_coherent,
        c9_plancherel,
        c10_limits,
        c11_degeneration,
    ];
    let mut failed = Vec::new();
    for f in criteria {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{:>2}] {}: {}", o.id, o.name, o.detail);
        if !o.pass {
            failed.push(o.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all {} criteria passed", criteria.len());
}
