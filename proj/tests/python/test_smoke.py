import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import descriptor_pencil as dp

DATA = Path(os.environ.get("DESCRIPTOR_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))

MIXED_F = np.array([[1.0, 0.0], [0.0, 0.0]])
MIXED_G = np.array([[-1.0, 0.0], [0.0, 1.0]])


def test_pencil_analysis():
    assert dp.classify_pencil(MIXED_F, MIXED_G) == "regular"
    assert dp.classify_pencil(MIXED_F, MIXED_F) == "singular"
    spec = dp.spectral_structure(MIXED_F, MIXED_G)
    assert (spec["p"], spec["q"]) == (1, 1)
    assert spec["eigenvalues"][0]["value"] == pytest.approx(-1.0)

    dec = dp.weierstrass_decompose(MIXED_F, MIXED_G)
    fw = np.diag([1.0, 0.0])
    assert np.abs(dec["P"] @ MIXED_F @ dec["Q"] - fw).max() < 1e-12

    div = dp.elementary_divisors([[1, 1, 1], [0, 1, 1], [0, 1, 1]], [[-1, 1, 0], [1, 1, 0], [1, 2, 1]])
    assert div["infinite"] == [2]
    assert div["finite"][0]["exact"] == "-2"
    assert div["q_star"] == 2


def test_scalar_ode_closed_form():
    sys = dp.build_system(np.eye(1), -np.eye(1), np.eye(1))
    v = dp.InputSignal.constant(np.array([2.0]))
    times = dp.uniform_grid(0.0, 1.0, 11)
    traj = dp.solve_continuous(sys, np.array([0.5]), v, times)
    expected = [math.exp(-t) * 0.5 + (1 - math.exp(-t)) * 2.0 for t in times]
    assert np.allclose(traj["states"][:, 0], expected, atol=1e-13)


def test_consistency_and_projection():
    sys = dp.build_system(MIXED_F, MIXED_G, np.eye(2))
    v = dp.InputSignal.constant(np.array([0.0, 1.0]))
    assert dp.consistency_check(sys, np.array([3.0, -1.0]), v)["consistent"]
    bad = dp.consistency_check(sys, np.array([3.0, 0.0]), v)
    assert not bad["consistent"]
    assert bad["defect"] == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(bad["projected_Y0"], [3.0, -1.0], atol=1e-12)
    with pytest.raises(dp.DescriptorError) as info:
        dp.solve_continuous(sys, np.array([3.0, 0.0]), v, [0.0, 1.0])
    assert info.value.code == "InconsistentInitialCondition"


def test_two_routes_agree():
    sys = dp.build_system(MIXED_F, MIXED_G, np.eye(2))
    v = dp.InputSignal.sinusoid(np.array([1.0, 0.5]), np.array([0.0, 0.0]), 2.0)
    y0 = dp.consistency_check(sys, np.array([1.0, 1.0]), v)["projected_Y0"]
    times = dp.uniform_grid(0.0, 1.0, 50)
    a = dp.solve_continuous(sys, y0, v, times)["states"]
    b = dp.solve_via_fundamental(sys, y0, v, times)["states"]
    assert np.abs(a - b).max() < 1e-8


def test_discretize_scalar():
    sys = dp.build_system(np.eye(1), -np.eye(1), np.eye(1))
    d = dp.discretize(sys, 0.25)
    assert d.A[0, 0] == pytest.approx(math.exp(-0.25), abs=1e-15)
    assert d.Phi_int[0, 0] == pytest.approx(1 - math.exp(-0.25), abs=1e-15)
    sim = dp.discrete_simulate(d, np.array([1.0]), np.zeros((5, 1)))
    assert np.allclose(sim["states"][:, 0], [math.exp(-0.25 * k) for k in range(6)], atol=1e-14)


def test_fractional():
    c = dp.nabla_coefficients(0.5, 2)
    assert c == pytest.approx([1.0, -0.5, -0.125], abs=1e-12)
    assert dp.rising_factorial(2.0, 3.0) == pytest.approx(24.0)
    y = dp.solve_fractional(np.eye(1), np.zeros((1, 1)), 0.5, np.zeros((3, 1)), np.array([1.0]), 2)
    assert y[:, 0] == pytest.approx([1.0, 0.5, 0.375], abs=1e-12)
    with pytest.raises(dp.DescriptorError):
        dp.nabla_coefficients(1.0, 3)

    a = np.array([[0.5, 0.1], [0.0, 0.3]])
    u = np.ones((4, 2))
    tel = dp.telescope_recursion(a, u, np.zeros(2), 4)
    y = np.zeros(2)
    for k in range(4):
        y = a @ y + u[k]
    assert np.allclose(tel[4], y, atol=1e-14)


def test_correspondence():
    sys = dp.build_system(MIXED_F, MIXED_G, np.eye(2))
    d = dp.discretize(sys, 0.1)
    report = dp.correspondence_diagnostic(d, d.A - np.eye(2), 0.5, 3)
    assert report["lags"][0]["delta"] <= 1e-12
    generic = dp.correspondence_diagnostic(d, MIXED_F, 0.5, 3)
    assert generic["verdict"] == "fails"


def test_run_command_is_deterministic():
    text = (DATA / "systems" / "mixed_2x2.json").read_text()
    code1, bundle1 = dp.run_command("compare", text)
    code2, bundle2 = dp.run_command("compare", text)
    assert code1 == 0 and bundle1 == bundle2
    parsed = json.loads(bundle1)
    assert parsed["command"] == "compare"
    assert parsed["status"] == "ok"
    code, bundle = dp.run_command("solve", text, steps=4, crosscheck=True)
    assert code == 0
    assert json.loads(bundle)["crosscheck"]["max_deviation"] <= 1e-8
