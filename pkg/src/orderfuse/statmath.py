"""Gaussian tail math and one-dimensional adaptive quadrature.

Everything downstream (detector thresholds, operating-characteristic
curves) rests on three primitives: the standard-normal upper tail Q(x),
its inverse, and an adaptive Simpson integrator with a refinement-depth
budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_EPS = math.ulp(1.0)

# Q(x) saturates to 0 / 1 in double precision outside +-40, so this
# bracket pins down q_inverse for every probability a double can hold.
_BRACKET = 40.0


class QuadratureConvergenceError(RuntimeError):
    """Refinement depth exhausted before the tolerance was met.

    The best available estimate is kept on ``best_estimate`` so callers
    can still inspect or log it.
    """

    def __init__(self, message: str, best_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and refinement budget for :func:`integrate`."""

    relative_tolerance: float = 1e-10
    max_refinement_depth: int = 40

    def __post_init__(self) -> None:
        if not (self.relative_tolerance >= 100.0 * _EPS):
            raise ValueError(
                f"relative_tolerance must be at least {100.0 * _EPS:.3g}, "
                f"got {self.relative_tolerance!r}"
            )
        if not 1 <= self.max_refinement_depth <= 60:
            raise ValueError(
                f"max_refinement_depth must be in [1, 60], got {self.max_refinement_depth!r}"
            )


def q_function(x: float) -> float:
    """Upper-tail probability of the standard Gaussian at ``x``.

    Evaluated through the complementary error function,
    Q(x) = erfc(x / sqrt(2)) / 2, which keeps full relative accuracy deep
    into the tail.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"q_function requires a finite argument, got {x!r}")
    return 0.5 * math.erfc(x / _SQRT2)


def _phi(x: float) -> float:
    """Standard Gaussian density."""
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def q_inverse(p: float) -> float:
    """Solve q_function(x) = p for ``p`` in (0, 1).

    Safeguarded Newton iteration: each step is accepted only if it stays
    inside the current bisection bracket, otherwise the bracket midpoint
    is used. Converges to an absolute tolerance of 1e-12 in x.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"q_inverse requires p in (0, 1), got {p!r}")
    lo, hi = -_BRACKET, _BRACKET  # q(lo) > p > q(hi)
    x = 0.0
    for _ in range(200):
        qx = q_function(x)
        if qx > p:
            lo = x
        elif qx < p:
            hi = x
        else:
            return x
        dens = _phi(x)
        x_new = x + (qx - p) / dens if dens > 0.0 else math.inf
        if not math.isfinite(x_new) or not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-12:
            return x_new
        x = x_new
    return x


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Adaptive Simpson quadrature of ``f`` over ``[a, b]``.

    Each subinterval is accepted when doubling its refinement changes the
    Simpson estimate by no more than 15x its share of the error budget
    (the factor 15 comes from the Richardson error model, and the
    correction term ``delta / 15`` is folded into the result). The budget
    is ``spec.relative_tolerance`` scaled by the first whole-interval
    estimate, so the tolerance is relative to the integral's magnitude;
    integrals that cancel to ~0 may exhaust the depth instead.

    Raises :class:`QuadratureConvergenceError` when some subinterval
    still fails its test at ``spec.max_refinement_depth``.
    """
    if spec is None:
        spec = QuadratureSpec()
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integration bounds must be finite")
    if a > b:
        raise ValueError(f"requires a <= b, got a={a!r}, b={b!r}")
    if a == b:
        return 0.0

    def eval_f(t: float) -> float:
        v = float(f(t))
        if not math.isfinite(v):
            raise ValueError(f"integrand is not finite at t={t!r}")
        return v

    fa, fb = eval_f(a), eval_f(b)
    m = 0.5 * (a + b)
    fm = eval_f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    eps = spec.relative_tolerance * abs(whole)

    # Explicit stack instead of recursion: depth exhaustion in one
    # subinterval must still yield a best estimate for the whole integral.
    stack = [(a, fa, m, fm, b, fb, whole, eps, 0)]
    total = 0.0
    exhausted = False
    while stack:
        a0, fa0, m0, fm0, b0, fb0, s0, eps0, depth = stack.pop()
        lm = 0.5 * (a0 + m0)
        rm = 0.5 * (m0 + b0)
        flm, frm = eval_f(lm), eval_f(rm)
        left = (m0 - a0) / 6.0 * (fa0 + 4.0 * flm + fm0)
        right = (b0 - m0) / 6.0 * (fm0 + 4.0 * frm + fb0)
        delta = left + right - s0
        if abs(delta) <= 15.0 * eps0:
            total += left + right + delta / 15.0
        elif depth >= spec.max_refinement_depth:
            total += left + right + delta / 15.0
            exhausted = True
        else:
            stack.append((a0, fa0, lm, flm, m0, fm0, left, 0.5 * eps0, depth + 1))
            stack.append((m0, fm0, rm, frm, b0, fb0, right, 0.5 * eps0, depth + 1))
    if exhausted:
        raise QuadratureConvergenceError(
            f"quadrature did not converge within depth {spec.max_refinement_depth} "
            f"(best estimate {total!r})",
            best_estimate=total,
        )
    return total
