"""Smoke test for the qcal Python module.

Build and install first:
    cd crates/python && maturin build --release -o dist && pip install dist/qcal-*.whl
"""

import math

import qcal

Q, ALPHA = 0.5, 0.3


def close(a, b, tol):
    assert abs(a - b) < tol, f"{a} != {b} (tol {tol})"


def main():
    close(qcal.hamiltonian_energy(0.25, -0.5, 0), 0.5, 1e-15)
    close(qcal.gen_q_factorial(Q, ALPHA, 0), 1.0, 1e-15)
    close(qcal.q_number(Q, 1.0), 1.0, 1e-15)
    close(abs(qcal.q_pochhammer(0.0, Q)), 1.0, 1e-15)
    close(abs(qcal.dunkl_kernel(Q, ALPHA, 0.0, 1.0)), 1.0, 1e-14)
    qcal.casimir_eigenvalue(Q, ALPHA, 1)

    fam = qcal.HermiteFamily(Q, ALPHA, n_max=6)
    close(fam.htilde(0, 0.7), 1.0, 1e-15)
    assert fam.weight(0.25) > 0.0

    grid = qcal.LatticeGrid(Q, ALPHA)
    assert len(grid) == len(grid.points())
    psi = [fam.wavefunction_grid(n, grid) for n in range(4)]
    for m in range(4):
        for n in range(4):
            ip = psi[m].inner_product(psi[n])
            close(ip.real, 1.0 if m == n else 0.0, 1e-8)

    cs = qcal.CoherentState(Q, ALPHA, 0.4)
    close(cs.grid(grid).norm(), 1.0, 1e-7)
    assert math.isfinite(abs(cs.eval(0.5)))

    plan = qcal.TransformPlan(grid)
    f = psi[1]
    back = plan.inverse(plan.forward(f))
    assert (back - f).norm() < 1e-4

    try:
        qcal.HermiteFamily(1.5, ALPHA)
    except ValueError:
        pass
    else:
        raise AssertionError("q >= 1 accepted")

    reports = qcal.run_suite("casimir")
    assert reports and all(r.passed for r in reports), reports

    print("smoke test passed")


if __name__ == "__main__":
    main()
