import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from signbound import radial
from signbound.bounds import a_lower
from signbound.radial import EigenExpansion, radial_fourier
from witnesses import admissible_minus

from signbound.sign import (
    SignReport,
    ZeroFunctionError,
    a_product,
    dilate,
    last_sign_change,
    make_minus_eigenfunction,
    plus_normalize,
)


def r_squared_minus_one(d):
    # (r^2 - 1) e^{-pi r^2} with r^2 = t / 2pi and t = 1 + alpha - L_1
    alpha = d / 2 - 1
    return EigenExpansion(d, [(1 + alpha) / (2 * math.pi) - 1, -1 / (2 * math.pi)])


class TestLastSignChange:
    @pytest.mark.parametrize("d", [1, 4, 11])
    def test_gaussian(self, d):
        rep = last_sign_change(EigenExpansion.gaussian(d))
        assert rep.a_radius == 0.0 and rep.eventually_nonneg and rep.sign_changes == []

    @pytest.mark.parametrize("d", [1, 2, 3, 8])
    def test_r_squared_minus_one(self, d):
        rep = last_sign_change(r_squared_minus_one(d))
        assert rep.a_radius == pytest.approx(1.0, abs=1e-12)
        assert rep.eventually_nonneg

    def test_psi1_d2(self):
        rep = last_sign_change(EigenExpansion(2, [0.0, 1.0]))
        assert not rep.eventually_nonneg and math.isinf(rep.a_radius)
        assert rep.sign_changes == pytest.approx([1 / math.sqrt(2 * math.pi)], abs=1e-12)
        assert rep.sign_changes[0] == pytest.approx(0.398942, abs=1e-6)

    def test_zero_function(self):
        with pytest.raises(ZeroFunctionError, match="zero function"):
            last_sign_change(EigenExpansion(3, [0.0, 0.0]))

    def test_leading_zero_coefficients_trimmed(self):
        a = last_sign_change(EigenExpansion(3, [0.5, -1.0, 0.0, 0.0])).a_radius
        assert a == last_sign_change(EigenExpansion(3, [0.5, -1.0])).a_radius

    def test_profile_input(self):
        f = r_squared_minus_one(3)
        rep = last_sign_change(radial.eigen_to_profile(f))
        assert rep.a_radius == pytest.approx(1.0, abs=1e-10)

    def test_report_json_round_trip(self):
        for f in (EigenExpansion(2, [0.0, 1.0]), r_squared_minus_one(2)):
            rep = last_sign_change(f)
            back = SignReport.from_dict(json.loads(json.dumps(rep.to_dict())))
            assert back == rep

    @given(st.integers(1, 12), st.lists(st.floats(-2, 2), min_size=2, max_size=10), st.floats(1e-3, 1e3))
    def test_positive_scaling(self, d, c, s):
        f = EigenExpansion(d, c)
        if f.trimmed(1e-6).degree < 1:
            return
        f = f.trimmed(1e-6)
        a1, a2 = last_sign_change(f).a_radius, last_sign_change(s * f).a_radius
        assert a1 == a2 or abs(a1 - a2) <= 1e-9 * max(1.0, a1)

    @given(st.integers(1, 12), st.lists(st.floats(-2, 2), min_size=2, max_size=10))
    def test_report_invariants(self, d, c):
        f = EigenExpansion(d, c).trimmed(1e-6)
        if f.is_zero():
            return
        rep = last_sign_change(f)
        assert rep.sign_changes == sorted(rep.sign_changes)
        if rep.eventually_nonneg:
            r = np.linspace(rep.a_radius, rep.a_radius + 6, 400)[1:]
            assert np.all(f.evaluate(r) >= -1e-12 * np.max(np.abs(f.evaluate(np.linspace(0, 6, 400)))))
            assert rep.a_radius == 0.0 or rep.a_radius in rep.sign_changes


class TestDilation:
    def test_identity(self):
        f = EigenExpansion(3, [1.0, -0.4, 0.2])
        p = dilate(f, 1.0)
        assert np.allclose(p.values, radial.eigen_to_profile(f).values, rtol=1e-13, atol=1e-15)

    @pytest.mark.parametrize("lam", [0.5, 2.0, 3.0])
    def test_a_scales(self, lam):
        f = r_squared_minus_one(2)
        assert last_sign_change(dilate(f, lam)).a_radius == pytest.approx(1.0 / lam, rel=1e-9)

    def test_bad_lambda(self):
        with pytest.raises(ValueError):
            dilate(EigenExpansion.gaussian(2), 0.0)

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_product_invariance_minus_eigenfunction(self, lam):
        g = EigenExpansion(3, [0.0, 0.3, 0.0, -1.0])
        a = last_sign_change(g).a_radius
        gl = dilate(g, lam, order=512)
        fh = radial_fourier(gl)
        prod = last_sign_change(gl).a_radius * last_sign_change(-1.0 * fh).a_radius
        assert prod == pytest.approx(a * a, rel=1e-8)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_a_product_invariance(self, sign):
        # even top index with positive coefficient: both f and F f eventually positive
        f = EigenExpansion(4, [0.2, -0.7, 0.1, 0.5, 1.0] if sign == 1 else [0.2, -0.7, 0.1, -1.0])
        base = a_product(f, sign)
        assert 0 < base < math.inf
        for lam in (0.5, 2.0):
            assert a_product(dilate(f, lam, order=512), sign) == pytest.approx(base, rel=1e-8)


class TestMinusConstruction:
    def test_minus_psi1(self):
        f = -1.0 * EigenExpansion(3, [0.0, 1.0])
        g = make_minus_eigenfunction(f)
        assert g.coeffs[:2] == pytest.approx([0.0, -2.0], abs=1e-9)
        assert np.all(np.abs(g.coeffs[2:]) < 1e-9)
        assert last_sign_change(g, 1e-9).a_radius == pytest.approx(last_sign_change(f).a_radius, abs=1e-9)

    def test_minus_psi0_psi1_d4(self):
        f = EigenExpansion(4, [-1.0, -1.0])
        a_f = math.sqrt(3 / (2 * math.pi))    # root of t - 3
        a_mf = math.sqrt(1 / (2 * math.pi))   # root of t - 1
        lam = math.sqrt(a_f / a_mf)
        g = make_minus_eigenfunction(f)
        # oracle: direct evaluation of f(lam x) - lam^{-d} F f(x / lam)
        r = np.linspace(0.0, 3.0, 61)
        direct = f.evaluate(lam * r) - lam**-4 * f.fourier().evaluate(r / lam)
        assert g.evaluate(r) == pytest.approx(direct, abs=1e-9)
        assert np.all(g.coeffs[0::2] == 0.0)
        assert np.max(np.abs((g.fourier() + g).coeffs)) == 0.0
        a_g = last_sign_change(g, 1e-9).a_radius
        assert a_g <= math.sqrt(a_f * a_mf) + 1e-9
        assert a_g == pytest.approx(0.5250375679, abs=1e-8)

    def test_gaussian_is_annihilated(self):
        with pytest.raises(ZeroFunctionError):
            make_minus_eigenfunction(EigenExpansion.gaussian(3))

    def test_infinite_a_rejected(self):
        with pytest.raises(ValueError):
            make_minus_eigenfunction(EigenExpansion(2, [0.0, 1.0]))

    def test_zero_rejected(self):
        with pytest.raises(ZeroFunctionError):
            make_minus_eigenfunction(EigenExpansion(2, [0.0]))


class TestPlusNormalize:
    def test_zero_at_origin_unchanged(self):
        g = EigenExpansion(2, [-1.0, 0.0, 1.0])   # L_2^{(0)}(0) = 1
        assert g.value_at_zero() == pytest.approx(0.0, abs=1e-14)
        out = plus_normalize(g)
        assert np.allclose(out.coeffs, g.coeffs, atol=1e-14)

    @pytest.mark.parametrize("d", [1, 3, 6])
    def test_negative_origin(self, d):
        g = EigenExpansion(d, [-1.0, 0.0, 0.05])
        assert g.value_at_zero() < 0
        out = plus_normalize(g)
        assert out.value_at_zero() == pytest.approx(0.0, abs=1e-12)
        assert np.all(out.coeffs[1::2] == 0.0)
        # adding the positive multiple -g(0) psi_0 can only pull the last sign change inward
        before = last_sign_change(g).a_radius
        assert last_sign_change(out).a_radius <= before + 1e-9

    def test_positive_origin_rejected(self):
        with pytest.raises(ValueError):
            plus_normalize(EigenExpansion.gaussian(2))

    def test_odd_part_rejected(self):
        with pytest.raises(ValueError):
            plus_normalize(EigenExpansion(2, [-1.0, 0.5]))


class TestAProduct:
    def test_minus_eigenfunction(self):
        g = EigenExpansion(5, [0.0, 0.4, 0.0, -1.0])
        assert a_product(g, -1) == pytest.approx(last_sign_change(g).a_radius, rel=1e-14)

    def test_gaussian_zero(self):
        assert a_product(EigenExpansion.gaussian(3), 1) == 0.0

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            a_product(EigenExpansion.gaussian(3), 0)


@pytest.mark.parametrize("d", range(1, 13))
def test_witness_soundness(d):
    rng = np.random.default_rng([7, d])
    floor = a_lower(d)
    for _ in range(200):
        g = admissible_minus(rng, d)
        rep = last_sign_change(g)
        assert abs(g.value_at_zero()) <= 1e-12 * np.max(np.abs(g.coeffs)) * 1e3
        assert rep.eventually_nonneg
        assert rep.a_radius >= floor - 1e-9, g.to_json()


@given(st.integers(1, 12), st.lists(st.floats(-2, 2), min_size=3, max_size=6))
def test_plus_normalize_never_increases_a(d, c):
    a = np.zeros(2 * len(c) - 1)
    a[0::2] = c
    g = EigenExpansion(d, a).trimmed()
    if g.is_zero() or g.value_at_zero() > 0:
        return
    out = plus_normalize(g)
    if out.is_zero():
        return
    before = last_sign_change(g).a_radius
    after = last_sign_change(out).a_radius
    assert after <= before + 1e-9 or (math.isinf(before) and math.isinf(after))
