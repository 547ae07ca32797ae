"""Sensor deployment geometry, signal attenuation, and observations.

A trial consists of sensors dropped uniformly at random in a square
region of interest (ROI), a target that may or may not be emitting, and
one observation per sensor: unit-variance Gaussian noise, plus the
distance-attenuated signal amplitude when the target is present.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Hypothesis(Enum):
    """Target absent (H0) or present (H1)."""

    H0 = "H0"
    H1 = "H1"


@dataclass(frozen=True)
class RoiConfig:
    """Square ROI of side ``side_b`` centered at the origin, target inside."""

    side_b: float
    target_x: float = 0.0
    target_y: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.side_b) and self.side_b > 0):
            raise ValueError(f"side_b must be a positive real, got {self.side_b!r}")
        half = 0.5 * self.side_b
        if not (-half <= self.target_x <= half and -half <= self.target_y <= half):
            raise ValueError(
                f"target ({self.target_x!r}, {self.target_y!r}) lies outside the "
                f"ROI square of side {self.side_b!r}"
            )

    @property
    def half_side(self) -> float:
        return 0.5 * self.side_b


@dataclass(frozen=True)
class SignalModel:
    """Isotropic attenuation: received power is p0 / (1 + alpha * d**n_exp)."""

    p0: float
    alpha: float
    n_exp: float = 2.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p0) and self.p0 >= 0):
            raise ValueError(f"p0 must be a nonnegative real, got {self.p0!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be a positive real, got {self.alpha!r}")
        if not 2.0 <= self.n_exp <= 3.0:
            raise ValueError(f"n_exp must lie in [2, 3], got {self.n_exp!r}")


@dataclass(frozen=True, eq=False)
class SensorField:
    """Sensor positions for one trial, array of shape (n, 2)."""

    positions: np.ndarray

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise ValueError(f"positions must have shape (n >= 1, 2), got {pos.shape}")
        object.__setattr__(self, "positions", pos)

    @property
    def size(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True, eq=False)
class ObservationVector:
    """One observation per sensor plus the hypothesis it was drawn under."""

    z: np.ndarray
    hypothesis: Hypothesis

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=float)
        if z.ndim != 1 or z.shape[0] < 1:
            raise ValueError(f"z must be a nonempty vector, got shape {z.shape}")
        if not np.all(np.isfinite(z)):
            raise ValueError("observations must be finite")
        object.__setattr__(self, "z", z)

    @property
    def size(self) -> int:
        return self.z.shape[0]


def sample_field(n: int, roi: RoiConfig, rng: np.random.Generator) -> SensorField:
    """Drop ``n`` sensors i.i.d. uniform over the ROI square."""
    n = int(n)
    if n < 1:
        raise ValueError(f"field size must be a positive integer, got {n!r}")
    half = roi.half_side
    return SensorField(positions=rng.uniform(-half, half, size=(n, 2)))


def distance(sensor: tuple[float, float], roi: RoiConfig) -> float:
    """Euclidean distance from one sensor position to the target."""
    x, y = sensor
    return math.hypot(float(x) - roi.target_x, float(y) - roi.target_y)


def signal_amplitude(model: SignalModel, d):
    """Signal amplitude at distance ``d``: sqrt(p0 / (1 + alpha * d**n_exp)).

    Accepts a scalar or an array of distances.
    """
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr < 0):
        raise ValueError("distance must be nonnegative")
    amp = np.sqrt(model.p0 / (1.0 + model.alpha * d_arr**model.n_exp))
    if d_arr.ndim == 0:
        return float(amp)
    return amp


def oracle_distances(field: SensorField, roi: RoiConfig) -> np.ndarray:
    """True target-sensor distances, for known-geometry baselines only.

    The deployed detectors treat distances as unknown; only the weighted
    log-likelihood fusion baseline and the raw likelihood-ratio ordering
    baseline are allowed to consume this.
    """
    dx = field.positions[:, 0] - roi.target_x
    dy = field.positions[:, 1] - roi.target_y
    return np.hypot(dx, dy)


def oracle_amplitudes(field: SensorField, roi: RoiConfig, model: SignalModel) -> np.ndarray:
    """True per-sensor signal amplitudes (known-geometry baselines only)."""
    return signal_amplitude(model, oracle_distances(field, roi))


def generate_observations(
    field: SensorField,
    roi: RoiConfig,
    model: SignalModel,
    hypothesis: Hypothesis,
    rng: np.random.Generator,
) -> ObservationVector:
    """Draw one observation per sensor under the given hypothesis.

    Under H0 each entry is standard Gaussian noise; under H1 the
    attenuated signal amplitude is added. The noise vector is drawn
    first in both branches, so a fixed stream yields the same noise
    whichever hypothesis is requested.
    """
    noise = rng.standard_normal(field.size)
    if hypothesis is Hypothesis.H1:
        z = oracle_amplitudes(field, roi, model) + noise
    else:
        z = noise
    return ObservationVector(z=z, hypothesis=hypothesis)
