"""Smoke test for the kicktop_py extension.

Build and install first:

    pip install --no-build-isolation ./crates/python
"""

import cmath
import math

import kicktop_py as kt


def main():
    u = kt.Floquet(1.5, kappa_class="pj")
    period, phase, errors = u.detect_period(200)
    assert period == 12, period
    assert abs(phase + math.pi / 2) < 1e-8
    assert len(errors) == 12 and errors[-1] < 1e-10
    assert u.dim == 4

    m = u.matrix()
    for r in range(4):
        for c in range(4):
            dot = sum(m[r][k] * m[c][k].conjugate() for k in range(4))
            assert abs(dot - (1 if r == c else 0)) < 1e-12

    assert kt.Floquet(2.0, kappa=0.0).detect_period(10)[0] == 4
    assert kt.Floquet(2.5, kappa_class="pj/2").detect_period(300)[0] is None

    psi = kt.coherent_state(1.5, math.pi / 2, math.pi / 2)
    series = u.entropy_series(psi, 9, "linear")
    for k, s in enumerate(series, start=1):
        assert (s < 1e-12) == (k % 3 == 0), (k, s)
    assert abs(kt.dogra_linear_entropy(1, 1.5 * math.pi) - series[0]) < 1e-12
    assert kt.entropy(psi) < 1e-12

    big = kt.Floquet(50.0, kappa_class="pj")
    start = kt.coherent_state(50.0, 2.25, 2.0)
    traj = big.evolve(start, 8)
    overlap = sum(a.conjugate() * b for a, b in zip(start, traj[8]))
    assert abs(abs(overlap) - 1) < 1e-10
    thetas, phis, q, norm = kt.husimi(traj[2], 140, 280)
    assert len(q) == len(thetas) * len(phis)
    assert abs(norm - 1) < 1e-10

    x, y, z = kt.classical_step((0.6, 0.64, 0.48), 0.0)
    assert (x, y, z) == (0.48, 0.64, -0.6)
    paths = kt.stroboscopic_map([(1.0, 0.5), (2.0, 3.0)], 2.5, 150)
    assert [len(p) for p in paths] == [150, 150]

    rows = kt.period_table(1.0, 2.0)
    assert all(period == expected for _, _, period, expected in rows)
    checks = kt.verify_identities(4.0)
    assert checks and all(ok for *_, ok in checks)

    try:
        kt.Floquet(2.3, kappa=1.0)
    except ValueError as e:
        assert "2.3" in str(e)
    else:
        raise AssertionError("invalid spin accepted")

    assert cmath.isclose(psi[0], kt.coherent_state(1.5, math.pi / 2, math.pi / 2)[0])
    print("kicktop_py smoke test passed")


if __name__ == "__main__":
    main()
