import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from umbilic.spaceform import sphere_invariants, xi
from umbilic.variation import (
    EQUATIONS,
    DeformationSpec,
    RicciPositivityError,
    deformed_report,
    evolution_residuals,
    functional_value,
    numeric_second_variation,
    optimal_constant,
    predicted_ratio_limits,
    predicted_second_variation,
    radial_surface,
    ricci_threshold,
    sharpness_extrapolate,
    sr_rate_forms,
)
from umbilic.zonal import ZonalFunction, gegenbauer_normalized, make_grid, sphere_area, zonal_harmonic


def ratio_oracle(n, r, k):
    """Limit re-derived from the spectral quotient with exact fractions.

    Numerator ``(xi - n w)^2`` over ``(n-1)/n xi^2 - (n-1) w xi`` for r = 1; the
    Newton-tensor case rescales by ``C(n-1,r-1)^2 / C(n-2,r-1)^2``.
    """
    w = Fraction(1)
    x = Fraction(k * (k + n - 1)) * w
    num = (x - n * w) ** 2
    den = Fraction(n - 1, n) * x * x - (n - 1) * w * x
    scale = Fraction(math.comb(n - 1, r - 1) ** 2, math.comb(n - 2, r - 1) ** 2)
    return num / den * scale


# -- closed forms ---------------------------------------------------------------


def test_ratio_limit_examples():
    assert predicted_ratio_limits(2, 1, 1) == 0
    assert predicted_ratio_limits(2, 1, 2) == pytest.approx(4 / 3, rel=1e-15)
    assert predicted_ratio_limits(2, 1, 12) == pytest.approx(154 / 78, rel=1e-15)
    assert predicted_ratio_limits(3, 2, 10**7) == pytest.approx(6, rel=1e-6)
    assert predicted_ratio_limits(5, 1, 10**7) == pytest.approx(5 / 4, rel=1e-6)
    with pytest.raises(ValueError):
        predicted_ratio_limits(3, 1, 0)
    with pytest.raises(ValueError):
        predicted_ratio_limits(3, 3, 2)


@pytest.mark.parametrize("n", range(2, 8))
def test_ratio_limit_matches_spectral_quotient(n):
    for r in range(1, n):
        for k in range(2, 41):
            assert predicted_ratio_limits(n, r, k) == pytest.approx(float(ratio_oracle(n, r, k)), rel=1e-14)


@given(st.integers(2, 10), st.data())
def test_ratio_limit_monotone_and_below_optimum(n, data):
    r = data.draw(st.integers(1, n - 1))
    vals = [predicted_ratio_limits(n, r, k) for k in range(1, 200)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < optimal_constant(n, r) ** 2


def test_optimal_constant():
    assert optimal_constant(2) == pytest.approx(math.sqrt(2))
    assert optimal_constant(3, 2) == pytest.approx(math.sqrt(6))
    with pytest.raises(ValueError):
        optimal_constant(3, 0)


def test_second_variation_F_example():
    S = sphere_invariants(2, 0, 1.0)
    assert xi(S, 6) == 42
    assert predicted_second_variation("F", 1.2, S, 6) == pytest.approx(-390.4, rel=1e-13)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_second_variation_F_at_optimal_constant_loses_leading_term(n):
    S = sphere_invariants(n, 1, 0.8)
    C = optimal_constant(n)
    for k in (3, 10, 50):
        x = xi(S, k)
        expected = (2 * n - C * C * (n - 1)) * S.omega * x - n * n * S.omega**2
        assert predicted_second_variation("F", C, S, k) == pytest.approx(expected, rel=1e-10)
    assert predicted_second_variation("F", C, S, 200) > 0


@pytest.mark.parametrize("n,c,a", [(2, 0, 1.0), (4, -1, 0.7), (5, 1, 1.2)])
def test_second_variation_vanishes_on_first_harmonic(n, c, a):
    S = sphere_invariants(n, c, a)
    for C in (0.3, 1.0, 2.0):
        assert predicted_second_variation("F", C, S, 1) == pytest.approx(0, abs=1e-12 * S.omega**2 * n * n)


def test_G_reduces_to_F_at_r1():
    S = sphere_invariants(4, -1, 1.0)
    for k in (2, 5):
        assert predicted_second_variation("G", 1.1, S, k, 1) == pytest.approx(
            predicted_second_variation("F", 1.1, S, k), rel=1e-14
        )


@given(st.integers(2, 8), st.data(), st.floats(0.05, 3.0))
def test_alpha_sign_matches_optimal_constant(n, data, C):
    r = data.draw(st.integers(1, n - 1))
    alpha = C * C * (n - r) ** 2 / (n * (n - 1)) - 1
    gap = C * C - n * (n - 1) / (n - r) ** 2
    assert np.sign(alpha) == np.sign(gap)
    # alpha is the k^4 coefficient once omega is factored out
    S = sphere_invariants(n, 0, 1.0)
    big = predicted_second_variation("G", C, S, 10**4, r)
    if abs(gap) > 1e-3:
        assert np.sign(big) == np.sign(gap)


def test_predicted_rejects_bad_kind():
    S = sphere_invariants(2, 0, 1.0)
    with pytest.raises(ValueError):
        predicted_second_variation("X", 1.0, S, 2)
    with pytest.raises(ValueError):
        predicted_second_variation("G", 1.0, S, 2, r=2)


# -- deformation spec ---------------------------------------------------------------


def test_spec_defaults_and_validation():
    S = sphere_invariants(3, 0, 1.0)
    spec = DeformationSpec(S, k=2)
    assert spec.t0 == pytest.approx(1e-2)
    assert len(spec.amplitudes) == 7
    assert spec.amplitudes[-1] == pytest.approx(1e-2 / 64)
    assert DeformationSpec(S, k=20).t0 == pytest.approx(1e-2 / 40)
    assert spec.profile.sup() <= 1.0
    assert gegenbauer_normalized(2, 3, 1.0) == pytest.approx(1.0, abs=1e-15)
    for bad in (dict(k=0), dict(k=2, t0=0.2), dict(k=2, t0=-1e-3), dict(k=2, r_list=(3,)), dict(k=2, J=1)):
        with pytest.raises(ValueError):
            DeformationSpec(S, **bad)
    with pytest.raises(ValueError):
        DeformationSpec(sphere_invariants(2, 1, 3.0), k=2, t0=0.3)


def test_radial_surface_at_zero_is_sphere():
    S = sphere_invariants(3, -1, 0.8)
    spec = DeformationSpec(S, k=2, r_list=(1, 2), N=64)
    rep = deformed_report(S, spec.profile, 0.0, (1, 2))
    assert rep.dev_H == 0 or rep.dev_H <= 1e-28
    assert rep.norm_Aring <= 1e-28
    np.testing.assert_array_equal(radial_surface(spec, 0.0).rho.values, np.full(64, 0.8))
    with pytest.raises(ValueError):
        radial_surface(spec, 2 * spec.t0)


def test_traceless_norm_is_quadratic_in_t():
    S = sphere_invariants(2, 0, 1.0)
    f = zonal_harmonic(make_grid(2, 128), 2)
    ts = np.array([1e-3, 5e-4, 2.5e-4])
    vals = [
        0.5 * (deformed_report(S, f, t).norm_Aring + deformed_report(S, f, -t).norm_Aring) for t in ts
    ]
    slope = np.polyfit(np.log(ts), np.log(vals), 1)[0]
    assert slope == pytest.approx(2, abs=1e-3)


@pytest.mark.parametrize("kind,r", [("F", 1), ("G", 1), ("G", 2)])
def test_first_variation_vanishes(kind, r):
    S = sphere_invariants(3, 1, 0.9)
    f = zonal_harmonic(make_grid(3, 128), 4)
    rl = (r,) if kind == "G" else ()
    C = 0.9 * optimal_constant(3, r)
    res = []
    for h in (1e-3, 5e-4):
        q = [functional_value(deformed_report(S, f, s, rl), kind, C, r) for s in (h, -h)]
        res.append(abs(q[0] - q[1]) / (2 * h))
    scale = xi(S, 4) ** 2 * S.sn**3 * f.grid.integrate(f.values**2)
    # the odd part of a functional starting at second order is O(h^2)
    assert res[1] <= 1e-5 * scale
    assert res[1] <= res[0] / 3.5 or res[1] <= 1e-12 * scale


# -- numeric second variation -----------------------------------------------------------


def test_numeric_second_variation_example_F():
    S = sphere_invariants(2, 0, 1.0)
    sv = numeric_second_variation(DeformationSpec(S, k=6), "F", 1.2)
    l2 = S.sn**2 * make_grid(2, 256).integrate(zonal_harmonic(make_grid(2, 256), 6).values ** 2)
    assert sv.l2 == pytest.approx(l2, rel=1e-14)
    assert sv.extrapolated == pytest.approx(-390.4 * l2, rel=1e-3)
    assert sv.rel_err <= 1e-6
    assert sv.order >= 1.9


def test_numeric_second_variation_example_G():
    S = sphere_invariants(4, -1, 1.0)
    sv = numeric_second_variation(DeformationSpec(S, k=5, r_list=(2,)), "G", 1.0, r=2)
    n, r, w = 4, 2, S.omega
    x = xi(S, 5)
    alpha = (n - r) ** 2 / (n * (n - 1)) - 1
    beta = (n - r) ** 2 * w / (n - 1) - 2 * n * w
    gamma = -n * n * w * w
    expected = S.lam ** 2 * math.comb(3, 1) ** 2 * (alpha * x * x - beta * x + gamma)
    assert sv.coefficient == pytest.approx(expected, rel=1e-3)
    assert sv.predicted == pytest.approx(expected, rel=1e-14)


def test_numeric_second_variation_first_harmonic_is_zero():
    S = sphere_invariants(3, 0, 1.0)
    spec = DeformationSpec(S, k=1, N=64)
    sv = numeric_second_variation(spec, "F", 1.0)
    scale = xi(S, 1) ** 2 * sv.l2
    assert abs(sv.extrapolated) <= 1e-8 * scale


@pytest.mark.parametrize("n,c,a", [(2, -1, 0.5), (3, 1, 1.25), (5, 0, 1.0)])
@pytest.mark.parametrize("k", [2, 8])
def test_numeric_matches_predicted_on_grid_samples(n, c, a, k):
    S = sphere_invariants(n, c, a)
    spec = DeformationSpec(S, k=k, r_list=(1, 2) if n > 2 else (1,), N=128)
    for frac in (0.5, 0.9):
        sv = numeric_second_variation(spec, "F", frac * optimal_constant(n))
        assert sv.rel_err <= 1e-3
        if n > 2:
            sv = numeric_second_variation(spec, "G", frac * optimal_constant(n, 2), r=2)
            assert sv.rel_err <= 1e-3


# -- sharpness ----------------------------------------------------------------------


def test_sharpness_example_n2_k12():
    res = sharpness_extrapolate(DeformationSpec(sphere_invariants(2, 0, 1.0), k=12, r_list=(1,)))
    assert res.predicted["H"] == pytest.approx(154 / 78, rel=1e-15)
    assert res.extrapolated["H"] == pytest.approx(1.974359, abs=1e-6)
    assert res.rel_err["H"] <= 1e-4
    assert res.rel_err[1] <= 1e-4
    assert all(m > 0 for m in res.min_ricci)
    assert len(res.ratios["H"]) == 7


def test_sharpness_residuals_decrease():
    res = sharpness_extrapolate(DeformationSpec(sphere_invariants(3, 1, 1.0), k=5, r_list=(2,), N=128))
    for key, ratios in res.ratios.items():
        lim = res.extrapolated[key]
        # raw ratios approach the limit like t^2
        err = np.abs(np.array(ratios) - lim)
        assert np.all(err[1:] < err[:-1]), key
        np.testing.assert_allclose(err[:-1] / err[1:], 4, rtol=1e-2)
        # after extrapolation only roundoff amplified by 1/t^2 is left
        assert max(res.residuals[key]) <= 1e-11 * lim, key


def test_sharpness_independent_of_c_and_a():
    lims = []
    for c in (-1.0, 0.0, 1.0):
        for a in (0.5, 1.25):
            res = sharpness_extrapolate(DeformationSpec(sphere_invariants(3, c, a), k=4, r_list=(2,), N=64))
            lims.append((res.extrapolated["H"], res.extrapolated[2]))
    lims = np.array(lims)
    spread = (lims.max(axis=0) - lims.min(axis=0)) / np.abs(lims.mean(axis=0))
    assert np.all(spread <= 1e-4)
    assert lims[0, 1] == pytest.approx(predicted_ratio_limits(3, 2, 4), rel=1e-4)


def test_sharpness_monotone_in_k():
    S = sphere_invariants(2, 0, 1.0)
    lims = [sharpness_extrapolate(DeformationSpec(S, k=k, N=64)).extrapolated["H"] for k in (2, 3, 5, 8)]
    assert all(b > a for a, b in zip(lims, lims[1:]))
    assert lims[-1] < 2.0


def test_sharpness_reports_ricci_failure():
    # n = 2, a = 1: t0 = 0.1 with k = 12 bends the curve far past convexity
    spec = DeformationSpec(sphere_invariants(2, 0, 1.0), k=12, t0=0.1, N=64)
    with pytest.raises(RicciPositivityError):
        sharpness_extrapolate(spec)


def test_ricci_threshold_brackets_sign_change():
    S = sphere_invariants(2, 0, 1.0)
    f = zonal_harmonic(make_grid(2, 64), 6)
    T = ricci_threshold(S, f)
    assert 0 < T < 0.1
    assert deformed_report(S, f, 0.99 * T).min_ricci > 0
    assert deformed_report(S, f, -0.99 * T).min_ricci > 0
    assert min(deformed_report(S, f, s).min_ricci for s in (1.02 * T, -1.02 * T)) <= 0
    assert ricci_threshold(S, ZonalFunction(f.grid, np.zeros(64))) == math.inf


# -- evolution equations ----------------------------------------------------------------


@pytest.mark.parametrize("n,c,a", [(2, 0, 1.0), (3, -1, 0.5), (4, 1, 1.25), (5, 0, 1.0)])
@pytest.mark.parametrize("k", [1, 2, 5])
def test_evolution_lines_converge(n, c, a, k):
    S = sphere_invariants(n, c, a)
    f = zonal_harmonic(make_grid(n, 128), k)
    lines = evolution_residuals(S, f, [r for r in (1, 2, 3) if r < n])
    ids = {ln.equation_id for ln in lines}
    assert ids <= set(EQUATIONS)
    assert {"volume-evolution", "mean-curvature-evolution", "traceless-second-fundamental-form"} <= ids
    for ln in lines:
        assert ln.order >= 1.9, ln
        assert ln.extrapolated_residual <= 1e-6, ln


def test_evolution_constant_speed_volume():
    S = sphere_invariants(2, 0, 1.0)
    f = ZonalFunction(make_grid(2, 32), np.ones(32))
    lines = {ln.equation_id: ln for ln in evolution_residuals(S, f, [1])}
    for eq in ("volume-evolution", "mean-curvature-evolution", "sr-evolution"):
        assert lines[eq].extrapolated_residual <= 1e-9, eq
    # parallel spheres: d/dt 4 pi (1 + t)^2 = 8 pi = int 2 * 1
    rep = [deformed_report(S, f, s) for s in (1e-4, -1e-4)]
    assert (rep[0].volume - rep[1].volume) / 2e-4 == pytest.approx(8 * math.pi, rel=1e-8)


def test_evolution_first_harmonic_quadratic_lines_vanish():
    S = sphere_invariants(3, 0, 1.0)
    f = zonal_harmonic(make_grid(3, 64), 1)
    lines = evolution_residuals(S, f, [1, 2])
    for ln in lines:
        if ln.equation_id in ("traceless-second-fundamental-form", "traceless-newton-tensor"):
            assert ln.extrapolated_residual <= 1e-8


def test_mean_curvature_rate_is_spectral():
    S = sphere_invariants(3, -1, 0.8)
    f = zonal_harmonic(make_grid(3, 128), 4)
    _, closed = sr_rate_forms(S, f, 1)
    np.testing.assert_allclose(closed, (xi(S, 4) - 3 * S.omega) * f.values, atol=1e-9 * xi(S, 4))


@pytest.mark.parametrize("n,c,a", [(3, 1, 1.0), (5, -1, 0.7), (6, 0, 2.0)])
def test_sr_rate_trace_form_matches_closed_form(n, c, a):
    S = sphere_invariants(n, c, a)
    g = make_grid(n, 64)
    f = zonal_harmonic(g, 3) + 0.5 * zonal_harmonic(g, 5) + 0.2
    for r in range(1, n):
        trace_form, closed = sr_rate_forms(S, f, r)
        scale = np.max(np.abs(closed)) + math.comb(n, r) * max(abs(S.lam), 1) ** r * S.omega
        assert np.max(np.abs(trace_form - closed)) <= 1e-11 * scale
    with pytest.raises(ValueError):
        sr_rate_forms(S, f, n)


def test_evolution_rejects_large_step():
    S = sphere_invariants(2, 0, 1.0)
    with pytest.raises(ValueError):
        evolution_residuals(S, zonal_harmonic(make_grid(2, 32), 2), h=0.6)


def test_functional_value_kinds():
    S = sphere_invariants(3, 0, 1.0)
    rep = deformed_report(S, zonal_harmonic(make_grid(3, 64), 3), 1e-2, (2,))
    assert functional_value(rep, "F", 1.0) == pytest.approx(rep.norm_Aring - rep.dev_H)
    d = rep.per_r[2]
    assert functional_value(rep, "G", 2.0, 2) == pytest.approx(4 * d["norm_Pring"] - d["dev_sr"])
    with pytest.raises(ValueError):
        functional_value(rep, "Q", 1.0)
    assert sphere_area(3) == pytest.approx(2 * math.pi**2)
