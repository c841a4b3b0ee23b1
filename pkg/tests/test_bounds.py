from fractions import Fraction

import numpy as np
import pytest

from sea_passivity import bounds as bnd
from sea_passivity.exceptions import InvalidTarget
from sea_passivity.model import ClosedFormCoefficients, ControllerGains, PlantParams, RenderTarget


def test_unbounded_sentinel():
    u = bnd.UNBOUNDED
    assert u > 1e308 and u >= 5 and not u < 3 and not u <= 3
    assert str(u) == "unbounded"
    assert bnd.is_unbounded(u) and not bnd.is_unbounded(1.0)


class TestBMax:
    def test_reference(self, null_gains):
        assert bnd.b_max(null_gains) == 10.0

    def test_high_it(self):
        assert bnd.b_max(ControllerGains(20, 10, 5, 80)) == 0.625

    def test_it_zero(self):
        assert bnd.b_max(ControllerGains(20, 10, 5, 0)) is bnd.UNBOUNDED


class TestJMaxNull:
    def test_reference(self, null_gains):
        assert bnd.j_max_null(3.0, null_gains) == pytest.approx(float(Fraction(23 * 101, 150)), rel=1e-15)

    def test_undamped(self, null_gains):
        assert bnd.j_max_null(0.0, null_gains) == pytest.approx(20 * 101 / 150, rel=1e-15)
        assert bnd.j_max_undamped(null_gains) == pytest.approx(20 * 101 / 150, rel=1e-15)

    def test_no_integrators(self):
        assert bnd.j_max_null(3.0, ControllerGains(20, 0, 5, 0)) is bnd.UNBOUNDED


class TestKdMax:
    def test_reference(self, ref_plant, spring_gains):
        assert bnd.kd_max(ref_plant, spring_gains) == pytest.approx(250 * 298500 / (298500 + 775000), rel=1e-14)

    def test_im_zero(self, ref_plant):
        assert bnd.kd_max(ref_plant, ControllerGains(20, 0, 30, 5)) is None

    def test_large_im_approaches_k(self, ref_plant):
        vals = [bnd.kd_max(ref_plant, ControllerGains(20, im, 30, 5)) for im in (1e2, 1e4, 1e6, 1e8)]
        assert all(v < 250 for v in vals)
        assert np.all(np.diff(vals) > 0)
        assert vals[-1] == pytest.approx(250, rel=1e-4)

    def test_no_integrator_limit(self, ref_plant):
        g = ControllerGains(20, 0, 30, 0)
        assert bnd.kd_limit_without_integrators(ref_plant, g) == pytest.approx(250 * 601 / 600)


class TestJMaxSpring:
    def test_reference(self, spring_gains):
        want = 23 * (200 * 600 + 250) / (3100 * 200)
        assert bnd.j_max_spring(3.0, spring_gains, 250.0, 50.0) == pytest.approx(want, rel=1e-14)

    def test_kd_zero_matches_null(self, spring_gains):
        assert bnd.j_max_spring(3.0, spring_gains, 250.0, 0.0) == pytest.approx(bnd.j_max_null(3.0, spring_gains), rel=1e-15)

    def test_xi_vanishes_at_kd_max(self, ref_plant, spring_gains):
        # the inertia bound taken at Kd_max puts the characteristic polynomial on the stability boundary
        jm = bnd.j_max_spring_at_kd_max(ref_plant.b, spring_gains, ref_plant.K)
        c = ClosedFormCoefficients(PlantParams(jm, ref_plant.b, ref_plant.K), spring_gains)
        pmb = spring_gains.Pm + ref_plant.b
        scale = c.alpha * ref_plant.K * pmb * (ref_plant.K + c.gamma)
        assert abs(c.xi) <= 1e-6 * scale

    def test_kd_at_or_above_k(self, spring_gains):
        with pytest.raises(InvalidTarget):
            bnd.j_max_spring(3.0, spring_gains, 250.0, 250.0)

    def test_at_kd_max_helper(self, ref_plant, spring_gains):
        kdm = bnd.kd_max(ref_plant, spring_gains)
        assert bnd.j_max_spring_at_kd_max(3.0, spring_gains, 250.0) == pytest.approx(
            bnd.j_max_spring(3.0, spring_gains, 250.0, kdm), rel=1e-12
        )


class TestMargins:
    def test_relative_margin(self):
        assert bnd.relative_margin(10.0, 3.0) == pytest.approx(0.7)
        assert bnd.relative_margin(bnd.UNBOUNDED, 3.0) == 1.0
        assert bnd.relative_margin(None, 3.0) is None

    def test_binding(self):
        assert bnd.binding_constraint({"damping": 0.7, "inertia": 0.987}) == "damping"
        assert bnd.binding_constraint({"damping": 0.5, "inertia": 0.5}) == "damping"
        assert bnd.binding_constraint({"damping": 0.9, "inertia": 0.2, "stiffness": None}) == "stiffness"
        assert bnd.binding_constraint({}) is None

    def test_report_null(self, ref_plant, null_gains):
        rep = bnd.bounds_report(ref_plant, null_gains, RenderTarget.null())
        assert rep.b_max == 10 and rep.Kd_max is None
        assert rep.binding == "damping"
        d = rep.as_dict()
        assert d["b_max"] == 10.0 and d["binding"] == "damping"

    def test_report_it_zero(self, ref_plant):
        rep = bnd.bounds_report(ref_plant, ControllerGains(20, 10, 5, 0), RenderTarget.null())
        assert rep.as_dict()["b_max"] == "unbounded"

    def test_report_spring(self, ref_plant, spring_gains, spring50):
        rep = bnd.bounds_report(ref_plant, spring_gains, spring50)
        assert rep.Kd_max == pytest.approx(69.5156, rel=1e-5)
        assert rep.J_max == pytest.approx(4.4609, rel=1e-4)
        assert rep.binding == "stiffness"

    def test_report_kd_above_k(self, ref_plant, spring_gains):
        rep = bnd.bounds_report(ref_plant, spring_gains, RenderTarget.spring(300.0))
        assert rep.J_max is None
        assert rep.margins["inertia"] is None
