import numpy as np
import pytest

import trisk


def test_version():
    assert isinstance(trisk.__version__, str) and trisk.__version__


def test_mesh_counts_and_validation():
    m = trisk.build_periodic_quad(2, 1.0)
    assert (m.nv, m.ne, m.nc) == (4, 8, 4)
    assert m.validate() == []
    t = trisk.build_periodic_trihex(4, 0.5)
    assert np.isclose(t.cell_area.sum(), t.dual_cell_area.sum())


def test_operators_annihilate():
    ops = trisk.Operators(trisk.mesh_from_spec("trihex:4"))
    assert abs(ops.D2 @ ops.D1).max() == 0
    assert abs(ops.Dt2 @ ops.Dt1).max() == 0


def test_w_identities():
    m = trisk.mesh_from_spec("trihex:4")
    ops = trisk.Operators(m)
    W = trisk.build_W(m)
    R = trisk.build_R(m)
    assert abs(W + W.T).max() < 1e-13
    assert abs(R @ ops.Dt2 - ops.D2 @ W).max() < 1e-13


def test_rest_state_and_rates():
    sim = trisk.Simulation("quad:2", "trsk2010-te", g=10.0, f0=0.0, H0=2.0)
    assert np.isclose(sim.diagnostics()["energy"], 80.0)
    assert np.isclose(sim.diagnostics()["mass"], 8.0)
    dh, du = sim.tendencies()
    assert np.abs(dh).max() == 0 and np.abs(du).max() == 0

    sim = trisk.Simulation("quad:6", "eldred-dbl", g=1.0, f0=0.5)
    rng = np.random.default_rng(0)
    sim.u = rng.uniform(-0.2, 0.2, sim.mesh.ne)
    sim.h = sim.h * rng.uniform(0.9, 1.1, sim.mesh.nv)
    d = sim.diagnostics()
    r = sim.rates()
    assert abs(r["dH"]) <= 1e-12 * abs(d["energy"])
    assert abs(r["dPE"]) <= 1e-12 * abs(d["potential_enstrophy"])
    m0 = d["mass"]
    sim.advance(5, 0.05)
    assert np.isclose(sim.time, 0.25)
    assert abs(sim.diagnostics()["mass"] - m0) <= 1e-14 * m0


def test_errors_carry_kind():
    with pytest.raises(trisk.TriskError) as e:
        trisk.build_periodic_trihex(3)
    assert "invalid-mesh-size" in str(e.value)
    sim = trisk.Simulation("quad:3")
    with pytest.raises(trisk.TriskError):
        sim.u = np.zeros(5)


def test_verify_and_convergence():
    checks = trisk.verify("quad:8", samples=5, time_tests=False)
    assert checks and all(c["pass"] for c in checks if not c["diagnostic"])
    rows = trisk.convergence("div", "quad", [8, 16])
    assert 1.8 <= rows[-1]["order_l2"] <= 2.2
