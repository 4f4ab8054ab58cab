import json
import math

import numpy as np
import pytest

import membrane_lab as ml


def test_residual_of_flat_surface_is_zero():
    assert ml.membrane_residual(ml.PointJet(d_t=0.2, d_x1=0.1)) == 0.0
    jet = ml.PointJet(d_t=0.3, d_x1=-0.2, d_x2=0.1, d_x1x1=0.5)
    jet.d_tt = ml.solve_vtt(jet)
    assert abs(ml.membrane_residual(jet)) < 1e-13


def test_degenerate_jet_raises():
    with pytest.raises(ml.DegenerateSurfaceError):
        ml.membrane_residual(ml.PointJet(d_t=1.5))


def test_null_form_vanishes_on_null_plane_waves():
    a = ml.PointJet(d_t=0.7, d_x1=0.7)
    b = ml.PointJet(d_t=-1.3, d_x1=-1.3)
    assert ml.null_form(a, b) == 0.0


def test_exact_solutions():
    sech = ml.WaveProfile.by_name("sech", {"amplitude": 0.5})
    sol = ml.lightspeed_solution(0.3, 1.0, sech)
    assert sol.self_check() < 1e-12
    study = ml.residual_convergence(sol, 2.0, [33, 65, 129], 0.25)
    assert study["passes"]
    assert study["rows"][-1]["order"] > 3.5
    sup = ml.superluminal_solution(sech, 2.0)
    assert abs(sup.residual(0.1, 0.2, -0.3)) < 1e-12


def test_commutator_scaling_field():
    fit = ml.commutator_lambda("Gamma5", count=4, degree=3)
    assert abs(fit["lambda"] - 2.0) < 1e-8
    assert abs(ml.commutator_lambda("Gamma1", count=4, degree=3)["lambda"]) < 1e-8


def test_hardy_family_bounded():
    r = ml.hardy_family(10, 42, 1000)
    assert r.max_ratio <= 2.0
    assert "sobolev" in ml.estimate_names()


def test_scalar_field_round_trip():
    g = ml.Grid2D.square(2.0, 17)
    f = ml.ScalarField.sample(g, lambda x, y: x + 2 * y)
    v = f.values()
    assert v.shape == (17, 17)
    back = ml.ScalarField(g, v)
    assert math.isclose(back.interpolate(0.3, -0.4), 0.3 - 0.8, abs_tol=1e-12)
    with pytest.raises(ValueError):
        ml.ScalarField(g, np.zeros((3, 3)))


def test_short_evolution():
    c = ml.SimConfig()
    c.grid = ml.Grid2D.square(4.0, 65)
    c.t_end = 1.0
    c.output_every = 0.5
    c.epsilon = 1e-3
    r = ml.run(c)
    assert len(r.emissions) == 3
    assert r.support_ok
    assert r.u.shape == (65, 65)
    assert r.max_sup_u < 1e-2


def test_cli_commutators(tmp_path):
    code, out, err = ml.run_cli(["commutators", "--out", str(tmp_path)])
    assert code == 0, err
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest
    code, _, _ = ml.run_cli(["no-such-command"])
    assert code != 0
