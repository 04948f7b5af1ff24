import math
import os

import numpy as np
import pytest

import gmap4

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def example1():
    return gmap4.make_surface("x^2 - y^2", "a*x + b*y - 2*x*y", {"a": 1.0, "b": 2.0})


def test_surface_round_trip():
    s = gmap4.parse_surface("param a = 1\nphi = x^2 - y^2\npsi = a*x\ndomain = [0, 1] x [-2, 2]\n")
    assert s.domain == (0.0, 1.0, -2.0, 2.0)
    assert s.params == {"a": 1.0}
    again = gmap4.parse_surface(s.text())
    assert again.phi == s.phi and again.psi == s.psi


def test_parse_error_has_position():
    with pytest.raises(gmap4.ParseError, match="line 1"):
        gmap4.parse_surface("phi = x +\npsi = y\n")
    assert issubclass(gmap4.ParseError, ValueError)


def test_curvature_example1():
    r = gmap4.curvature_report(example1(), 0.1, -0.2)
    assert abs(r["K"] - r["kappa"]) < 1e-12
    assert r["pointClass"] in {"elliptic", "hyperbolic", "parabolic"}
    assert any(d["branch"] == 1 for d in r["isoclinicDirs"])


def test_gauss_map_is_unit_and_on_quadric():
    g = gmap4.gauss_map(example1(), 0.3, 0.4)
    p = g["plucker"]
    assert p.shape == (6,)
    assert abs(np.dot(p, p) - 1) < 1e-12
    assert abs(p[0] * p[3] + p[1] * p[4] + p[2] * p[5]) < 1e-12
    assert abs(np.linalg.norm(g["gamma1"]) - 1) < 1e-12
    assert abs(np.linalg.norm(g["gamma2"]) - 1) < 1e-12


def test_great_circle_and_congruence():
    s = example1()
    pts = np.array([gmap4.gauss_map(s, x, y)["gamma2"] for x in np.linspace(-0.8, 0.8, 7) for y in np.linspace(-0.8, 0.8, 7)])
    fit = gmap4.great_circle_fit(pts)
    axis = np.array([0.0, 2.0, 1.0]) / math.sqrt(5)
    assert min(np.linalg.norm(fit["alpha"] - axis), np.linalg.norm(fit["alpha"] + axis)) < 1e-10
    c = gmap4.congruence(s)
    assert c["circleFactor"] == "gamma2"
    assert c["symplecticResidual"] < 1e-9
    R = c["rotation"]
    assert np.allclose(R @ R.T, np.eye(4), atol=1e-12)


def test_blaschke():
    b = gmap4.blaschke_check(gmap4.make_surface("x^2 - y^2", "2*x*y"), 0.0, 0.0)
    assert abs(abs(b["t2"]) - 16) < 1e-5


def test_reconstruct_small_sampling():
    r = gmap4.reconstruct(0.7071067811865476, curves=11, t_max=0.2, dt=2e-3)
    assert r["samples"].shape == (11 * 201, 5)
    assert r["maxB1Deviation"] < 1e-6
    assert abs(r["phi_xy"] - 2) < 1e-3
    with pytest.raises(gmap4.InputError):
        gmap4.reconstruct(1.5)


def test_suites_and_cli():
    assert "lift" in gmap4.suite_names()
    assert gmap4.run_suite("plucker")["passed"]
    code, out, _ = gmap4.cli(["congruence", "--surface", os.path.join(DATA, "example1.surf")])
    assert code == 0 and '"gamma2"' in out
    code, _, _ = gmap4.cli(["analyze", "--surface", "missing.surf"])
    assert code == 2
