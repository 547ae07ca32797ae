"""One-bit local detectors and counting-rule fusion.

The fusion center counts positive local decisions and compares the count
to a threshold T. For a large sensor count N the count is approximately
Gaussian under either hypothesis, which gives closed-form operating
characteristics:

    system false alarm ~ Q((T - N*pfa) / sqrt(N*pfa*(1 - pfa)))

and, with the target at the ROI center, a detection probability built
from the mean detection rate of a uniformly placed sensor. That mean is
computed as a radial integral over the disc inscribed in the ROI square
plus a corner correction that evaluates the detection rate at the worst
corner distance sqrt(2)*b/2 and weights it by the leftover area fraction
(1 - pi/4).

Also provided: the classical weighted log-likelihood fusion statistic,
usable only as a known-geometry oracle baseline since its weights need
each sensor's true detection probability.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .field import Hypothesis, RoiConfig, SignalModel, signal_amplitude
from .statmath import QuadratureSpec, integrate, q_function, q_inverse

_CORNER_WEIGHT = 1.0 - math.pi / 4.0


class OffCenterTargetError(ValueError):
    """The operating-characteristic formulas assume the target at the ROI center."""


@dataclass(frozen=True)
class LocalDetector:
    """Per-sensor one-bit detector: report 1 iff the observation exceeds tau."""

    tau: float
    local_pfa: float

    def __post_init__(self) -> None:
        if not 0.0 < self.local_pfa < 1.0:
            raise ValueError(f"local_pfa must be in (0, 1), got {self.local_pfa!r}")
        if abs(q_function(self.tau) - self.local_pfa) > 1e-9:
            raise ValueError(
                f"tau={self.tau!r} is inconsistent with local_pfa={self.local_pfa!r}"
            )


@dataclass(frozen=True)
class FusionConfig:
    """Resolved fusion-center configuration for ``n_sensors`` one-bit inputs."""

    n_sensors: int
    detector: LocalDetector
    system_pfa: float
    system_threshold_t: float

    def __post_init__(self) -> None:
        if self.n_sensors < 1:
            raise ValueError(f"n_sensors must be positive, got {self.n_sensors!r}")
        if not 0.0 < self.system_pfa < 1.0:
            raise ValueError(f"system_pfa must be in (0, 1), got {self.system_pfa!r}")
        p = self.detector.local_pfa
        t_ref = (
            q_inverse(self.system_pfa) * math.sqrt(self.n_sensors * p * (1.0 - p))
            + self.n_sensors * p
        )
        if abs(self.system_threshold_t - t_ref) > 1e-9:
            raise ValueError(
                f"system_threshold_t={self.system_threshold_t!r} is inconsistent "
                f"with (n_sensors, local_pfa, system_pfa)"
            )

    @classmethod
    def from_rates(cls, n_sensors: int, local_pfa: float, system_pfa: float) -> FusionConfig:
        det = threshold_from_local_pfa(local_pfa)
        t = system_threshold(n_sensors, local_pfa, system_pfa)
        return cls(
            n_sensors=int(n_sensors),
            detector=det,
            system_pfa=float(system_pfa),
            system_threshold_t=t,
        )


@dataclass(frozen=True)
class TheoryCurves:
    """Closed-form operating characteristics of the counting rule."""

    gamma: float
    pd_bar: float
    sigma_bar_sq: float
    system_pd: float

    def __post_init__(self) -> None:
        for name in ("gamma", "pd_bar", "system_pd"):
            v = getattr(self, name)
            if not -1e-12 <= v <= 1.0 + 1e-12:
                raise ValueError(f"{name}={v!r} is not a probability")
        # Variance of a {0,1}-valued mixture is capped at 1/4.
        if not -1e-12 <= self.sigma_bar_sq <= 0.25 + 1e-12:
            raise ValueError(f"sigma_bar_sq={self.sigma_bar_sq!r} out of [0, 0.25]")
        if self.pd_bar + 1e-12 < _CORNER_WEIGHT * self.gamma:
            raise ValueError("pd_bar fell below its corner-term floor")


def threshold_from_local_pfa(local_pfa: float) -> LocalDetector:
    """Local threshold achieving a given per-sensor false-alarm rate."""
    local_pfa = float(local_pfa)
    if not 0.0 < local_pfa < 1.0:
        raise ValueError(f"local_pfa must be in (0, 1), got {local_pfa!r}")
    return LocalDetector(tau=q_inverse(local_pfa), local_pfa=local_pfa)


def local_pd(det: LocalDetector, model: SignalModel, d: float) -> float:
    """Detection probability of one sensor at distance ``d`` from the target."""
    return q_function(det.tau - signal_amplitude(model, float(d)))


def local_decide(z: float, det: LocalDetector) -> int:
    """One-bit local decision; the tie z == tau decides 0 (open upper tail)."""
    z = float(z)
    if not math.isfinite(z):
        raise ValueError(f"observation must be finite, got {z!r}")
    return 1 if z > det.tau else 0


def local_decisions(z, det: LocalDetector) -> np.ndarray:
    """Vectorized local decisions for a whole observation vector."""
    return (np.asarray(z, dtype=float) > det.tau).astype(np.int64)


def counting_rule(decisions, t: float) -> Hypothesis:
    """Declare H1 iff the number of positive decisions strictly exceeds ``t``."""
    d = np.asarray(decisions)
    if d.size == 0:
        raise ValueError("decisions must be nonempty")
    return Hypothesis.H1 if int(d.sum()) > t else Hypothesis.H0


def system_threshold(n: int, local_pfa: float, system_pfa: float) -> float:
    """Count threshold hitting a target system false-alarm rate.

    Inverts the Gaussian approximation of the H0 count:
    T = Qinv(system_pfa) * sqrt(N*pfa*(1-pfa)) + N*pfa. T is real-valued;
    extreme inputs can push it outside (0, N), which is surfaced as a
    warning because the detector degenerates there (every nonzero count
    fires, or no count can ever fire).
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    local_pfa = float(local_pfa)
    system_pfa = float(system_pfa)
    if not 0.0 < local_pfa < 1.0:
        raise ValueError(f"local_pfa must be in (0, 1), got {local_pfa!r}")
    if not 0.0 < system_pfa < 1.0:
        raise ValueError(f"system_pfa must be in (0, 1), got {system_pfa!r}")
    t = q_inverse(system_pfa) * math.sqrt(n * local_pfa * (1.0 - local_pfa)) + n * local_pfa
    if t <= 0.0:
        warnings.warn(
            f"count threshold T={t:.6g} is non-positive; every nonzero count "
            "will be declared a detection",
            RuntimeWarning,
            stacklevel=2,
        )
    elif t >= n:
        warnings.warn(
            f"count threshold T={t:.6g} is at or above the sensor count {n}; "
            "a detection can never be declared",
            RuntimeWarning,
            stacklevel=2,
        )
    return t


def system_pfa_approx(n: int, local_pfa: float, t: float) -> float:
    """System false-alarm rate of the counting rule, Gaussian approximation."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    local_pfa = float(local_pfa)
    if not 0.0 < local_pfa < 1.0:
        raise ValueError(f"local_pfa must be in (0, 1), got {local_pfa!r}")
    sd = math.sqrt(n * local_pfa * (1.0 - local_pfa))
    return q_function((float(t) - n * local_pfa) / sd)


def theory_curves(
    det: LocalDetector,
    model: SignalModel,
    roi: RoiConfig,
    n: int,
    t: float,
    spec: QuadratureSpec | None = None,
) -> TheoryCurves:
    """Operating characteristics of the counting rule at threshold ``t``.

    Only supports the target at the ROI center: the radial reduction of
    the mean per-sensor detection rate is derived for that geometry.
    The simulation path has no such restriction.
    """
    if roi.target_x != 0.0 or roi.target_y != 0.0:
        raise OffCenterTargetError(
            f"theory curves require the target at (0, 0); "
            f"got ({roi.target_x!r}, {roi.target_y!r})"
        )
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    half = roi.half_side
    corner_distance = math.sqrt(2.0) * half
    gamma = local_pd(det, model, corner_distance)

    def hit_prob(r: float) -> float:
        return q_function(det.tau - signal_amplitude(model, r))

    disc_weight = 2.0 * math.pi / roi.side_b**2
    i_pd = integrate(lambda r: hit_prob(r) * r, 0.0, half, spec)
    pd_bar = disc_weight * i_pd + _CORNER_WEIGHT * gamma
    i_var = integrate(lambda r: hit_prob(r) * (1.0 - hit_prob(r)) * r, 0.0, half, spec)
    sigma_bar_sq = disc_weight * i_var + _CORNER_WEIGHT * gamma * (1.0 - gamma)

    denom = math.sqrt(n * sigma_bar_sq)
    if denom > 0.0:
        system_pd = q_function((float(t) - n * pd_bar) / denom)
    else:
        # Degenerate zero-variance count: the count equals N*pd_bar surely.
        system_pd = 1.0 if n * pd_bar > t else 0.0
    return TheoryCurves(
        gamma=gamma, pd_bar=pd_bar, sigma_bar_sq=sigma_bar_sq, system_pd=system_pd
    )


def chair_varshney(decisions, pd_list, local_pfa: float) -> float:
    """Weighted log-likelihood fusion statistic over one-bit decisions.

    Oracle baseline: the per-sensor detection probabilities require the
    true target-sensor distances (see ``field.oracle_distances``).
    """
    d = np.asarray(decisions, dtype=float)
    pd = np.asarray(pd_list, dtype=float)
    if d.shape != pd.shape or d.ndim != 1 or d.size == 0:
        raise ValueError("decisions and pd_list must be nonempty vectors of equal length")
    local_pfa = float(local_pfa)
    if not 0.0 < local_pfa < 1.0:
        raise ValueError(f"local_pfa must be in (0, 1), got {local_pfa!r}")
    if np.any((pd <= 0.0) | (pd >= 1.0)):
        raise ValueError("every pd must be in the open interval (0, 1)")
    pos = d * np.log(pd / local_pfa)
    neg = (1.0 - d) * np.log((1.0 - pd) / (1.0 - local_pfa))
    return float(np.sum(pos + neg))
