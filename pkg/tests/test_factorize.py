"""Closed-form means, iterated integrals and factorization certificates."""

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from ladderlab.errors import BadU, TransportViolation
from ladderlab.factorize import (
    F1,
    F2,
    F3,
    UNIT,
    FunctionFamily,
    certificate,
    closed_form_mean,
    factorize,
    iterated_integrals,
    verify_certificate,
)
from ladderlab.ladder import LadderModel, disconnected_set, phi1

ALL = (F1, F2, F3, FunctionFamily.power(0.5), FunctionFamily.power(2.0), UNIT)


def _quad_mean(family, L, U):
    a = math.pi * L
    val = integrate.quad(lambda t: family(t, L), a, a + U, epsabs=0, epsrel=1e-13, limit=200)[0]
    return val / U


@pytest.mark.parametrize("family", ALL, ids=lambda f: f.label)
@pytest.mark.parametrize("L, U", [(100, 0.5), (200, 0.1), (5000, 0.78)])
def test_closed_form_against_quadrature(family, L, U):
    assert closed_form_mean(family, L, U) == pytest.approx(_quad_mean(family, L, U), rel=1e-9)


def test_closed_form_reference_values():
    assert closed_form_mean(F1, 100, 0.5) == pytest.approx(24.931236152747918, rel=1e-14)
    assert closed_form_mean(F3, 100, 0.5) == pytest.approx(264.54679305348367, rel=1e-14)
    assert closed_form_mean(FunctionFamily.power(2.0), 100, 0.5) == pytest.approx(0.25 / 3, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.integers(64, 10**4), st.floats(1e-3, math.pi / 4 - 1e-3))
def test_trigonometric_closure(L, U):
    m1, m2, m3 = (closed_form_mean(f, L, U) for f in (F1, F2, F3))
    assert m1 + m2 == pytest.approx(math.pi * L + U / 2, rel=1e-12)
    assert abs((m2 - m1) - m3) <= 1e-12 * (1 + math.pi * L)


@settings(max_examples=60, deadline=None)
@given(st.integers(64, 10**4), st.floats(1e-3, math.pi / 4 - 1e-3), st.floats(0.0, 1.0))
def test_weights_nonnegative_on_segment(L, U, frac):
    t = math.pi * L + frac * U
    for family in (F1, F2, F3, FunctionFamily.power(0.5)):
        assert family(t, L) >= 0


@pytest.mark.parametrize("U", (0.0, math.pi / 4, 2.0))
def test_closed_form_bad_u(U):
    with pytest.raises(BadU):
        closed_form_mean(F1, 100, U)


@pytest.mark.parametrize("args", (("f4",), ("power",), ("power", -1.0), ("f1", 2.0)))
def test_family_validation(args):
    with pytest.raises(ValueError):
        FunctionFamily(*args)


def test_zero_order_integrals():
    J, K = iterated_integrals(F2, 100, 0.5, 0, None)
    assert K == (0.5,)
    assert J == (0.5 * closed_form_mean(F2, 100, 0.5),)


def test_unit_integrals_are_lengths(model):
    J, K = iterated_integrals(UNIT, 100, 0.5, 3, model)
    assert J == K
    comps = disconnected_set(100, 0.5, 3, model).components
    assert K[1:] == tuple(c.length for c in comps[1:])


def test_first_integral_two_ways(model):
    cert = certificate(F1, 100, 0.5, 1, model)
    comp = disconnected_set(100, 0.5, 1, model).components[1]
    direct = integrate.quad(lambda t: F1(phi1(t, model), 100), comp.left_r, comp.right_r,
                            epsabs=0, epsrel=1e-11, limit=200)[0]
    assert cert.J[1] == pytest.approx(direct, rel=1e-7)


def _with_jump(model, at: float, size: float) -> LadderModel:
    phi = model.phi_cum.copy()
    phi[np.searchsorted(model.grid, at):] += size
    return LadderModel(t0=model.t0, t_max=model.t_max, anchor_offset=model.anchor_offset, grid=model.grid.copy(),
                       phi_cum=phi, eval_config=model.eval_config, spacing=model.spacing)


def test_corrupt_table_breaks_transport(small_model):
    comp = disconnected_set(100, 0.5, 1, small_model).components[1]
    inside = math.ceil(comp.left_r)
    assert inside < comp.right_r
    with pytest.raises(TransportViolation):
        iterated_integrals(F1, 100, 0.5, 1, _with_jump(small_model, inside, 0.01))


@pytest.mark.parametrize("family", ALL[:5], ids=lambda f: f.label)
@pytest.mark.parametrize("k", (1, 2, 3))
def test_certificate_residual(model, family, k):
    cert = certificate(family, 100, 0.5, k, model)
    assert cert.residual <= 1e-7
    assert verify_certificate(cert, model) <= 1e-7


def test_certificate_points_inside_components(model):
    cert = certificate(F3, 200, 0.2, 3, model)
    comps = disconnected_set(200, 0.2, 3, model).components
    for order, x in cert.points():
        assert comps[order].contains(x)


def test_alphas_attain_weighted_means(model):
    cert = certificate(F2, 100, 0.5, 2, model)
    for r in (1, 2):
        assert cert.z_alpha[r - 1] == pytest.approx(cert.J[r - 1] / cert.J[r], rel=1e-9)
        assert cert.z_beta[r - 1] == pytest.approx(cert.K[r - 1] / cert.K[r], rel=1e-9)
    assert F2(cert.alpha0, 100) == pytest.approx(cert.J[2] / cert.K[2], rel=1e-9)


def test_betas_do_not_depend_on_the_weight(model):
    betas = {certificate(f, 100, 0.5, 3, model).betas for f in ALL[:5]}
    assert len(betas) == 1


def test_unit_certificate(model):
    cert = certificate(UNIT, 100, 0.5, 2, model)
    assert cert.alphas == cert.betas
    assert cert.product == 1.0
    assert cert.residual <= 1e-12
    assert cert.alpha0 == pytest.approx(100 * math.pi + 0.25, abs=1e-12)


def test_tampered_alpha_detected(model):
    cert = certificate(F1, 100, 0.5, 1, model)
    bad = dataclasses.replace(cert, alphas=(cert.alphas[0] + 0.05,))
    assert verify_certificate(bad, model) > 1e-3


def test_record_layout(model):
    rec = certificate(F1, 100, 0.5, 2, model).to_record()
    assert list(rec) == ["family", "L", "U", "k", "alpha0", "alpha1", "alpha2", "beta1", "beta2", "residual"]
    assert rec["family"] == "f1"


def test_factorize_deterministic(model):
    a = factorize(F1, 200, 0.5, 2, model)
    b = factorize(F1, 200, 0.5, 2, model)
    assert a.to_record() == b.to_record()


def test_certificate_memoised(model):
    assert certificate(F1, 100, 0.5, 1, model) is certificate(F1, 100, 0.5, 1, model)


def test_order_limits(model):
    with pytest.raises(ValueError):
        factorize(F1, 100, 0.5, 4, model)
    with pytest.raises(ValueError):
        factorize(F1, 100, 0.5, 0, model)
    with pytest.raises(ValueError):
        factorize(F1, 10, 0.5, 1, model)
    assert factorize(F1, 100, 0.5, 4, model, k0=4).residual <= 1e-7


@pytest.mark.parametrize("L", (100, 200, 1000))
def test_residual_grid_at_wide_segments(model, L):
    for family in ALL[:5]:
        for k in (1, 2, 3):
            assert certificate(family, L, 0.7, k, model).residual <= 1e-7


@pytest.mark.parametrize("delta", (0.5, 1.0, 2.0))
@pytest.mark.parametrize("k", (1, 3))
def test_power_self_check(model, delta, k):
    cert = certificate(FunctionFamily.power(delta), 200, 0.5, k, model)
    side = (1 + delta) ** (1 / delta) * (cert.alpha0 - 200 * math.pi) * cert.product ** (1 / delta)
    assert side == pytest.approx(0.5, rel=1e-6)


def test_reference_certificate(model):
    cert = certificate(F1, 100, 0.5, 1, model)
    assert cert.residual <= 1e-7
    assert 314.159 < cert.alpha0 < 314.659
    assert cert.K[0] == 0.5 and cert.J[0] == 0.5 * cert.mean
    assert min(cert.z_alpha + cert.z_beta) > 0
