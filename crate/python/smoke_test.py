"""Quick check that the extension imports and agrees with known values."""

import math

import pseudospec as ps


def main():
    m = ps.Model.table1_row1()
    d = m.derived()
    assert m.family == "rm1-trig"
    assert abs(d["cap_a"] - 4.0) < 1e-12 and abs(d["cap_b"] - 1.0) < 1e-12
    assert all(m.constraints().values())

    eps = [level[1] for level in m.levels(5)]
    for n, e in enumerate(eps):
        k = 4 + n
        assert abs(e - (k * k - k ** -2 - 323 / 18)) < 1e-12

    numeric = m.numeric_spectrum(3999, 5)
    assert max(abs(a - b) for a, b in zip(numeric, eps)) < 1e-3

    x, psi = m.wavefunction(0, 999)
    h = x[1] - x[0]
    assert abs(h * sum(v * v for v in psi) - 1.0) < 1e-12

    report = m.verify(2000, levels=3)
    assert report["all_pass"], report["pass"]

    osc = ps.Model(0.0, 0.0, ps.Superpotential.harmonic())
    assert osc.verify(1000, levels=2)["hermitian_limit"]

    bad = [c for c in ps.table_audit() if not c[5]]
    assert len(bad) == 5, bad

    try:
        ps.Superpotential.rm2(1.0, 2.0)
    except ValueError:
        pass
    else:
        raise AssertionError("B2 >= A2^2 accepted")

    assert ps.hermite(3, 0.5) == 8 * 0.125 - 12 * 0.5
    assert math.isclose(ps.Superpotential.rm2(1.5, 0.25).w(0.0), 0.25 / 1.5)
    print("smoke test passed")


if __name__ == "__main__":
    main()
