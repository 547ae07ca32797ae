"""Monte Carlo harness for the ordered fusion protocol.

Every trial owns a counter-mode random substream keyed by
(master_seed, trial_index), so trials are replayable individually and
may execute in any order or on any number of threads without changing a
single bit of the aggregate results. Aggregation uses exact integer
accumulators (saved transmissions are integers), which makes the
reduction order-independent by construction.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .field import Hypothesis, RoiConfig, SignalModel, generate_observations, sample_field
from .fusion import FusionConfig, counting_rule, local_decisions
from .ordering import Crossing, StoppedRun, run_ordered_counting, schedule

SWEEP_AXES = ("n_sensors", "p0", "local_pfa", "likelihood_r")

_U64 = 1 << 64
# Golden-ratio stride decorrelates per-cell seeds in sweeps; cell 0
# keeps the base seed so a single-value sweep equals a direct run.
_SEED_STRIDE = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class ExperimentConfig:
    """Full parameter set for one Monte Carlo run."""

    n_sensors: int
    roi: RoiConfig
    model: SignalModel
    local_pfa: float
    system_pfa: float
    likelihood_r: float
    n_trials: int
    master_seed: int

    def __post_init__(self) -> None:
        if self.n_sensors < 1:
            raise ValueError(f"n_sensors must be positive, got {self.n_sensors!r}")
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be positive, got {self.n_trials!r}")
        if not 0.0 < self.local_pfa < 1.0:
            raise ValueError(f"local_pfa must be in (0, 1), got {self.local_pfa!r}")
        if not 0.0 < self.system_pfa < 1.0:
            raise ValueError(f"system_pfa must be in (0, 1), got {self.system_pfa!r}")
        if not 0.0 <= self.likelihood_r <= 1.0:
            raise ValueError(f"likelihood_r must be in [0, 1], got {self.likelihood_r!r}")
        if not 0 <= self.master_seed < _U64:
            raise ValueError(f"master_seed must be a 64-bit unsigned int, got {self.master_seed!r}")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial, with the full-count decision for auditing."""

    trial_index: int
    hypothesis: Hypothesis
    stopped: StoppedRun
    full_count_decision: Hypothesis
    transmissions_saved: int


@dataclass(frozen=True)
class AntsSummary:
    """Aggregates of one Monte Carlo run.

    ``empirical_pd`` / ``empirical_pfa`` are NaN when the run contained
    no H1 / H0 trials.
    """

    ants_mean: float
    ants_stderr: float
    empirical_pd: float
    empirical_pfa: float
    upper_count: int
    lower_count: int
    exhausted_count: int


@dataclass(frozen=True)
class SweepCell:
    """One sweep cell: the axis value, the resolved config, and its summary."""

    axis_value: float
    config: ExperimentConfig
    summary: AntsSummary


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Counter-mode substream keyed by (master seed, trial index)."""
    key = np.array([master_seed, trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class _TrialStream:
    """Reusable bit generator re-keyed per trial.

    Produces streams bit-identical to :func:`trial_rng` while skipping
    the per-trial bit-generator construction (which pulls OS entropy it
    never uses). One instance per worker; not thread-safe.
    """

    def __init__(self) -> None:
        self._bitgen = np.random.Philox(key=np.zeros(2, dtype=np.uint64))
        self._gen = np.random.Generator(self._bitgen)

    def generator(self, master_seed: int, trial_index: int) -> np.random.Generator:
        self._bitgen.state = {
            "bit_generator": "Philox",
            "state": {
                "counter": np.zeros(4, dtype=np.uint64),
                "key": np.array([master_seed, trial_index], dtype=np.uint64),
            },
            "buffer": np.zeros(4, dtype=np.uint64),
            "buffer_pos": 4,
            "has_uint32": 0,
            "uinteger": 0,
        }
        return self._gen


@lru_cache(maxsize=128)
def _fusion_for(n_sensors: int, local_pfa: float, system_pfa: float) -> FusionConfig:
    return FusionConfig.from_rates(n_sensors, local_pfa, system_pfa)


def _trial_record(
    config: ExperimentConfig,
    trial_index: int,
    rng: np.random.Generator,
    fusion: FusionConfig,
) -> TrialRecord:
    hyp = Hypothesis.H1 if rng.random() < config.likelihood_r else Hypothesis.H0
    field = sample_field(config.n_sensors, config.roi, rng)
    obs = generate_observations(field, config.roi, config.model, hyp, rng)

    sched = schedule(obs, fusion.detector)
    bits = local_decisions(obs.z, fusion.detector)
    stopped = run_ordered_counting(
        bits[sched.order], config.n_sensors, fusion.system_threshold_t
    )
    full = counting_rule(bits, fusion.system_threshold_t)
    if stopped.decision is not full:
        raise RuntimeError(
            f"early-stop decision diverged from the full count at trial {trial_index}"
        )
    return TrialRecord(
        trial_index=trial_index,
        hypothesis=hyp,
        stopped=stopped,
        full_count_decision=full,
        transmissions_saved=config.n_sensors - stopped.k_transmitted,
    )


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialRecord:
    """Run one fully deterministic trial.

    Stream layout (fixed so records are replayable individually): the
    hypothesis draw comes first, then sensor positions, then noise. H0
    trials sample a field too, keeping stream offsets identical across
    hypotheses.
    """
    if not 0 <= trial_index < config.n_trials:
        raise ValueError(f"trial_index {trial_index!r} outside [0, {config.n_trials})")
    fusion = _fusion_for(config.n_sensors, config.local_pfa, config.system_pfa)
    rng = trial_rng(config.master_seed, trial_index)
    return _trial_record(config, trial_index, rng, fusion)


def _accumulate(config: ExperimentConfig, start: int, stop: int) -> tuple[int, ...]:
    fusion = _fusion_for(config.n_sensors, config.local_pfa, config.system_pfa)
    stream = _TrialStream()
    saved_sum = saved_sq = 0
    h1_n = h1_hits = h0_n = h0_hits = 0
    upper = lower = exhausted = 0
    for i in range(start, stop):
        rec = _trial_record(config, i, stream.generator(config.master_seed, i), fusion)
        saved = rec.transmissions_saved
        saved_sum += saved
        saved_sq += saved * saved
        detected = rec.stopped.decision is Hypothesis.H1
        if rec.hypothesis is Hypothesis.H1:
            h1_n += 1
            h1_hits += detected
        else:
            h0_n += 1
            h0_hits += detected
        if rec.stopped.crossing is Crossing.UPPER:
            upper += 1
        elif rec.stopped.crossing is Crossing.LOWER:
            lower += 1
        else:
            exhausted += 1
    return saved_sum, saved_sq, h1_n, h1_hits, h0_n, h0_hits, upper, lower, exhausted


def monte_carlo(config: ExperimentConfig, threads: int = 1) -> AntsSummary:
    """Run all trials and aggregate; bit-identical for any thread count."""
    threads = max(1, int(threads))
    n = config.n_trials
    if threads == 1 or n < 2 * threads:
        parts = [_accumulate(config, 0, n)]
    else:
        chunk = max(1, math.ceil(n / (threads * 8)))
        ranges = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda r: _accumulate(config, *r), ranges))
    sums = [sum(p[i] for p in parts) for i in range(9)]
    saved_sum, saved_sq, h1_n, h1_hits, h0_n, h0_hits, upper, lower, exhausted = sums

    mean = saved_sum / n
    if n > 1:
        # Exact integer arithmetic keeps the reduction order-independent.
        var = (n * saved_sq - saved_sum * saved_sum) / (n * (n - 1))
        stderr = math.sqrt(var / n)
    else:
        stderr = 0.0
    return AntsSummary(
        ants_mean=mean,
        ants_stderr=stderr,
        empirical_pd=h1_hits / h1_n if h1_n else math.nan,
        empirical_pfa=h0_hits / h0_n if h0_n else math.nan,
        upper_count=upper,
        lower_count=lower,
        exhausted_count=exhausted,
    )


def cell_seed(master_seed: int, cell_index: int) -> int:
    """Derived master seed for sweep cell ``cell_index`` (cell 0 = base)."""
    return (master_seed + cell_index * _SEED_STRIDE) % _U64


def _with_axis_value(base: ExperimentConfig, axis: str, value, seed: int) -> ExperimentConfig:
    if axis == "n_sensors":
        return replace(base, n_sensors=int(value), master_seed=seed)
    if axis == "p0":
        return replace(base, model=replace(base.model, p0=float(value)), master_seed=seed)
    if axis == "local_pfa":
        return replace(base, local_pfa=float(value), master_seed=seed)
    if axis == "likelihood_r":
        return replace(base, likelihood_r=float(value), master_seed=seed)
    raise ValueError(f"unknown sweep axis {axis!r}; valid axes: {', '.join(SWEEP_AXES)}")


def sweep(base: ExperimentConfig, axis: str, values, threads: int = 1) -> list[SweepCell]:
    """One Monte Carlo run per axis value, with per-cell derived seeds."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; valid axes: {', '.join(SWEEP_AXES)}")
    values = list(values)
    if not values:
        raise ValueError("sweep values must be nonempty")
    cells = []
    for i, value in enumerate(values):
        cfg = _with_axis_value(base, axis, value, cell_seed(base.master_seed, i))
        cells.append(SweepCell(axis_value=value, config=cfg, summary=monte_carlo(cfg, threads)))
    return cells
