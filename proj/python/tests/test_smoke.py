import math

import pytest

import vcslab


def test_special_functions():
    assert vcslab.log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-13)
    assert vcslab.pochhammer(2.5, 3) == pytest.approx(39.375, rel=1e-13)
    assert vcslab.upper_incomplete_gamma(2.0, 1.0) == pytest.approx(2 / math.e, rel=1e-12)
    assert vcslab.hyp1f1_one(2.0, 1.0) == pytest.approx(math.e - 1, rel=1e-12)
    with pytest.raises(ValueError):
        vcslab.log_gamma(-1.0)


def test_registry():
    ids = vcslab.class_ids()
    assert len(ids) == len(set(ids)) == 56
    d = vcslab.describe("3d.3dof.min")
    assert d["id"] == "3d.3dof.min"
    assert vcslab.kappa([2.0, 1.0], 0, 1) == 0.5
    with pytest.raises(IndexError):
        vcslab.describe("nope")


def test_moments_and_norm():
    r = vcslab.verify_moments("2d.1dof.plain1.A", [1.0, 2.0], [0], nmax=20)
    assert r["verdict"] == "pass"
    n = vcslab.norm("2d.1dof.plain1.A", [2.0, 1.0], [complex(math.sqrt(2.0), 0.0)], [0])
    assert n["log_norm"] == pytest.approx(1.0, rel=1e-13)
    coeffs, tail = vcslab.state("2d.1dof.plain1.A", [1.0, 1.0], [1j], [0], 30)
    assert sum(abs(c) ** 2 for c in coeffs.values()) == pytest.approx(1.0, abs=2 * tail + 1e-14)


def test_resolution_and_convergence():
    g = vcslab.resolution_residual("2d.1dof.plain1.A", [1.0, math.sqrt(2.0)], [0], 15)
    assert g["verdict"] == "pass"
    cid = "3d.2dof.c13-gamma13-gamma32"
    assert vcslab.class_verdict(cid, [1.0, 2.0, 3.0], [1], {(2, 1): 0.0}) == "divergent"
    assert vcslab.class_verdict(cid, [1.0, 2.0, 3.0], [1], {(2, 1): 0.5}) == "convergent"


def test_taxonomy():
    assert vcslab.class_count(3, 2) == 22
    assert vcslab.class_count(3, 3) == 40
    g = vcslab.deformation_graph(3, 2)
    assert g["acyclic"] is True
    assert vcslab.deformation_dot(2, 1).startswith("digraph")
    assert vcslab.landau_map(3.0, 4.0) == pytest.approx((8.0, 2.0, False))


def test_surface_and_run_verify():
    pts = vcslab.gamma_ratio_surface(0.0, 1.0, 0, 3, 0, 3)
    assert len(pts) == 16 and all(p[3] == 0.0 for p in pts)
    report, code = vcslab.run_verify({"classes": ["2d.1dof.gamma1.A"], "checks": ["moment", "norm"]}, threads=1)
    assert code == 0
    assert report["summary"]["fail"] == 0
    with pytest.raises(ValueError):
        vcslab.run_verify({"classes": ["2d.1dof.gamma1.A"], "unknown": 1})
