import numpy as np
import pytest

from conftest import random_config
from sea_passivity.model import (
    ClosedFormCoefficients,
    ControllerGains,
    PlantParams,
    RenderTarget,
    TargetKind,
    assemble_block_diagram,
    build_impedance,
    build_null_impedance,
    build_spring_impedance,
    characteristic_polynomial,
)
from sea_passivity.polyalg import Polynomial, coefficients_close, residue_simple_pole


class TestParams:
    @pytest.mark.parametrize("kw, field", [({"J": 0}, "J"), ({"b": -1}, "b"), ({"K": -1}, "K"), ({"J": float("nan")}, "J")])
    def test_plant_invariants(self, kw, field):
        base = {"J": 1.0, "b": 1.0, "K": 1.0, **kw}
        with pytest.raises(ValueError, match=f"^{field}:"):
            PlantParams(**base)

    def test_zero_damping_allowed(self):
        assert PlantParams(1.0, 0.0, 1.0).b == 0.0

    @pytest.mark.parametrize("kw", [{"Pm": 0}, {"Pt": -1}, {"Im": -0.1}, {"It": -2}])
    def test_gain_invariants(self, kw):
        base = {"Pm": 1.0, "Im": 1.0, "Pt": 1.0, "It": 1.0, **kw}
        with pytest.raises(ValueError):
            ControllerGains(**base)

    def test_targets(self):
        assert RenderTarget.null().is_null_equivalent
        assert RenderTarget.spring(0).is_null_equivalent
        t = RenderTarget.spring(5)
        assert t.variant is TargetKind.SPRING and t.stiffness == 5
        with pytest.raises(ValueError):
            RenderTarget.spring(-1)
        with pytest.raises(ValueError):
            RenderTarget(TargetKind.NULL, 3.0)


class TestClosedFormCoefficients:
    def test_reference_values(self, ref_plant, spring_gains):
        c = ClosedFormCoefficients(ref_plant, spring_gains, 50.0)
        assert c.alpha == 20 * 5 + 30 * 100 == 3100
        assert c.gamma == 250 * 600 + 100 == 150100
        assert c.beta == 30 * 100**2 - 3 * 100 * 5 == 298500
        assert c.deltaK == 200

    def test_characteristic(self, ref_plant, null_gains):
        assert characteristic_polynomial(ref_plant, null_gains) == Polynomial.from_descending(
            [0.2, 23, 25260, 37500, 12500]
        )


class TestBuilders:
    def test_null_reference(self, ref_plant, null_gains):
        tf = build_null_impedance(ref_plant, null_gains)
        want_num = Polynomial.from_descending([0.2, 23, 10, 0]) * 250.0
        assert tf.num == want_num
        assert tf.den == Polynomial.from_descending([0.2, 23, 25260, 37500, 12500])

    def test_null_zero_at_origin(self, null_gains):
        for K in (0.1, 7.0, 1e4):
            tf = build_null_impedance(PlantParams(0.2, 3.0, K), null_gains)
            assert tf(0.0) == 0

    def test_no_integrators_reduces_to_second_order(self, ref_plant):
        tf = build_null_impedance(ref_plant, ControllerGains(20, 0, 5, 0))
        assert tf.den.degree() == 2

    def test_spring_reference(self, ref_plant, spring_gains):
        tf = build_spring_impedance(ref_plant, spring_gains, 50.0)
        want_den = Polynomial.from_descending([0.2, 23, 250 + 150100, 3100 * 250, 250 * 100 * 5, 0])
        # delta = Pm Pt Kd + Im = 30100
        want_num = Polynomial.from_descending([0.2, 23, 30100, 3100 * 50, 50 * 100 * 5]) * 250.0
        np.testing.assert_allclose(tf.den.coeffs, want_den.coeffs, rtol=1e-14)
        np.testing.assert_allclose(tf.num.coeffs, want_num.coeffs, rtol=1e-14)

    def test_spring_origin_residue_is_kd(self, ref_plant, spring_gains):
        # independent oracle: s Z(s) as s -> 0+
        tf = build_spring_impedance(ref_plant, spring_gains, 50.0)
        eps = 1e-9
        limit = (eps * tf(eps)).real
        res = residue_simple_pole(tf, 0.0)
        assert res.real == pytest.approx(limit, rel=1e-6)
        assert res.real == pytest.approx(50.0, rel=1e-9)

    def test_spring_low_frequency_asymptote(self, ref_plant, spring_gains):
        tf = build_spring_impedance(ref_plant, spring_gains, 50.0)
        w = 1e-3
        assert abs(tf(1j * w)) == pytest.approx(50.0 / w, rel=1e-3)

    def test_spring_high_frequency_is_physical_spring(self, ref_plant, spring_gains):
        tf = build_spring_impedance(ref_plant, spring_gains, 50.0)
        w = 1e6
        z = tf(1j * w)
        assert abs(z) == pytest.approx(250.0 / w, rel=1e-3)
        assert np.degrees(np.angle(z)) == pytest.approx(-90.0, abs=0.1)

    def test_spring_zero_equals_null(self, ref_plant, null_gains):
        a = build_spring_impedance(ref_plant, null_gains, 0.0)
        b = build_null_impedance(ref_plant, null_gains)
        assert a.num == b.num and a.den == b.den

    def test_dispatch(self, ref_plant, null_gains):
        assert build_impedance(ref_plant, null_gains, RenderTarget.null()) == build_null_impedance(ref_plant, null_gains)


class TestBlockDiagram:
    def test_reference_null(self, ref_plant, null_gains):
        t = RenderTarget.null()
        assert coefficients_close(assemble_block_diagram(ref_plant, null_gains, t), build_impedance(ref_plant, null_gains, t))

    def test_reference_spring(self, ref_plant, spring_gains, spring50):
        assert coefficients_close(
            assemble_block_diagram(ref_plant, spring_gains, spring50), build_impedance(ref_plant, spring_gains, spring50)
        )

    def test_spring_zero_vs_null(self, ref_plant, null_gains):
        a = assemble_block_diagram(ref_plant, null_gains, RenderTarget.spring(0.0))
        b = assemble_block_diagram(ref_plant, null_gains, RenderTarget.null())
        assert coefficients_close(a, b)

    @pytest.mark.parametrize("Im, It", [(0, 0), (0, 3), (3, 0)])
    def test_degenerate_gains(self, ref_plant, Im, It):
        g = ControllerGains(20, Im, 5, It)
        for t in (RenderTarget.null(), RenderTarget.spring(40.0)):
            assert coefficients_close(assemble_block_diagram(ref_plant, g, t), build_impedance(ref_plant, g, t))

    def test_random(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            plant, gains = random_config(rng)
            t = RenderTarget.spring(float(rng.uniform(0, 2 * plant.K)))
            assert coefficients_close(assemble_block_diagram(plant, gains, t), build_impedance(plant, gains, t))
