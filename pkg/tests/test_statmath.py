"""Tests for the Gaussian tail primitives and the adaptive integrator."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orderfuse.statmath import (
    QuadratureConvergenceError,
    QuadratureSpec,
    integrate,
    q_function,
    q_inverse,
)

SQRT2 = math.sqrt(2.0)
SQRT_2PI = math.sqrt(2.0 * math.pi)


# ── Independent oracles ─────────────────────────────────────────────
#
# Gaussian tail evaluated two ways that share no code with the package:
# a power series for the error function on |x| <= 2 and the classical
# Gaussian-tail continued fraction beyond.


def q_oracle(x: float) -> float:
    if x < 0.0:
        return 1.0 - q_oracle(-x)
    if x <= 2.0:
        return _q_series(x)
    return _q_continued_fraction(x)


def _q_series(x: float) -> float:
    u = x / SQRT2
    term = u
    total = u
    k = 0
    while abs(term) > 1e-22 * abs(total):
        k += 1
        term *= -u * u / k
        total += term / (2 * k + 1)
    erf = 2.0 / math.sqrt(math.pi) * total
    return 0.5 * (1.0 - erf)


def _q_continued_fraction(x: float) -> float:
    cf = 0.0
    for k in range(300, 0, -1):
        cf = k / (x + cf)
    return math.exp(-0.5 * x * x) / SQRT_2PI / (x + cf)


def q_inverse_bisect(p: float) -> float:
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if q_oracle(mid) > p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_oracle_methods_agree_on_overlap():
    # The two oracle branches are independent; they must agree where both apply.
    for x in (1.5, 2.0, 2.5, 3.0):
        assert _q_series(x) == pytest.approx(_q_continued_fraction(x), rel=1e-12)


# ── q_function ──────────────────────────────────────────────────────


def test_q_at_zero_is_half():
    assert q_function(0.0) == 0.5


def test_q_matches_tail_oracle():
    # Oracle-computed tail at the (rounded) 1e-3 quantile, frozen:
    # q_oracle(3.090232) = 1.0000010308950954e-3, i.e. 1.000e-3 to 4 digits.
    assert q_function(3.090232) == pytest.approx(1.0000010308950954e-3, rel=1e-6)
    for x in (0.1, 0.7, 1.3, 2.2, 3.090232, 4.5, 6.0, 8.0, -1.1, -3.3):
        assert q_function(x) == pytest.approx(q_oracle(x), rel=1e-12)


def test_q_reflection_identity():
    assert q_function(-1.7) == pytest.approx(1.0 - q_function(1.7), abs=1e-15)


@given(st.floats(min_value=-8.0, max_value=8.0), st.floats(min_value=-8.0, max_value=8.0))
def test_q_monotone_non_increasing(x1, x2):
    lo, hi = min(x1, x2), max(x1, x2)
    assert q_function(lo) >= q_function(hi)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_q_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        q_function(bad)


# ── q_inverse ───────────────────────────────────────────────────────


def test_q_inverse_median():
    assert q_inverse(0.5) == 0.0


def test_q_inverse_against_bisection_oracle():
    assert q_inverse(1e-3) == pytest.approx(3.090232, abs=1e-6)
    assert q_inverse(0.05) == pytest.approx(1.644854, abs=1e-6)
    for p in (1e-4, 1e-3, 0.05, 0.3, 0.9, 0.999):
        assert q_inverse(p) == pytest.approx(q_inverse_bisect(p), abs=1e-9)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.4, math.nan])
def test_q_inverse_domain(bad):
    with pytest.raises(ValueError):
        q_inverse(bad)


@given(st.floats(min_value=1e-6, max_value=1.0 - 1e-6))
@settings(max_examples=200)
def test_q_round_trip(p):
    assert q_function(q_inverse(p)) == pytest.approx(p, rel=1e-9)


@given(
    st.floats(min_value=1e-6, max_value=1.0 - 1e-6),
    st.floats(min_value=1e-6, max_value=1.0 - 1e-6),
)
def test_q_inverse_strictly_decreasing(p1, p2):
    if p1 == p2:
        return
    lo, hi = min(p1, p2), max(p1, p2)
    assert q_inverse(lo) > q_inverse(hi)


# ── integrate ───────────────────────────────────────────────────────


def test_integrate_linear_exact():
    assert integrate(lambda t: t, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)


def test_integrate_gaussian_density():
    got = integrate(lambda t: math.exp(-0.5 * t * t) / SQRT_2PI, 0.0, 8.0)
    assert got == pytest.approx(0.5 - q_function(8.0), abs=1e-10)


def test_integrate_ramp():
    assert integrate(lambda r: r, 0.0, 50.0) == pytest.approx(1250.0, rel=1e-9)


@given(
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=-3.0, max_value=3.0),
)
@settings(max_examples=50)
def test_integrate_is_linear(c1, c2):
    f = lambda t: math.sin(t) + 1.5  # noqa: E731
    g = lambda t: t * t  # noqa: E731
    combo = integrate(lambda t: c1 * f(t) + c2 * g(t), 0.0, 2.0)
    parts = c1 * integrate(f, 0.0, 2.0) + c2 * integrate(g, 0.0, 2.0)
    tol = 10 * QuadratureSpec().relative_tolerance
    assert combo == pytest.approx(parts, rel=tol, abs=tol)


def test_integrate_empty_interval():
    assert integrate(lambda t: t * t, 2.0, 2.0) == 0.0


def test_integrate_rejects_reversed_bounds():
    with pytest.raises(ValueError):
        integrate(lambda t: t, 1.0, 0.0)


def test_integrate_rejects_non_finite_integrand():
    with pytest.raises(ValueError):
        integrate(lambda t: math.inf, 0.0, 1.0)


def test_integrate_depth_exhaustion_carries_best_estimate():
    # A kink needs more refinement than a depth-1 budget allows.
    spec = QuadratureSpec(relative_tolerance=1e-10, max_refinement_depth=1)
    with pytest.raises(QuadratureConvergenceError) as excinfo:
        integrate(lambda t: abs(t - 0.3141592653589793), 0.0, 1.0, spec)
    exact = 0.3141592653589793**2 / 2 + (1 - 0.3141592653589793) ** 2 / 2
    assert excinfo.value.best_estimate == pytest.approx(exact, rel=1e-2)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(relative_tolerance=1e-16)
    with pytest.raises(ValueError):
        QuadratureSpec(max_refinement_depth=61)
    with pytest.raises(ValueError):
        QuadratureSpec(max_refinement_depth=0)
