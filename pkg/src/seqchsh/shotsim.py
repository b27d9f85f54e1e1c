"""Photon-counting emulation: Poissonian coincidence counts, correlator and
mixing-probability estimators, and first-order error propagation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chsh import MixedStrategy
from .linalg import ID2, PAULI_Z, NumericalError, kron
from .states import StateSpec, TwoQubitState, prepare
from .strategies import build_operators, luders_relay

MIN_MEAN_COUNTS = 100.0
_OUTCOME_SIGNS = ((+1, +1), (+1, -1), (-1, +1), (-1, -1))


@dataclass(frozen=True)
class ShotConfig:
    """Expected coincidences per basis setting, RNG seed, and repeat count.

    Below ~100 counts per setting the Gaussian error propagation used here
    is invalid, so such configs are rejected outright.
    """

    mean_counts_per_setting: float
    seed: int = 0
    n_repeats: int = 1

    def __post_init__(self):
        if self.mean_counts_per_setting < MIN_MEAN_COUNTS:
            raise ValueError(
                f"mean_counts_per_setting must be >= {MIN_MEAN_COUNTS}, "
                f"got {self.mean_counts_per_setting}"
            )
        if self.n_repeats < 1:
            raise ValueError("n_repeats must be at least 1")


@dataclass(frozen=True)
class CountRecord:
    """Coincidence counts per joint outcome (++, +-, -+, --)."""

    n_pp: int
    n_pm: int
    n_mp: int
    n_mm: int

    def __post_init__(self):
        for n in self.as_tuple():
            if n < 0:
                raise ValueError("counts must be non-negative")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n_pp, self.n_pm, self.n_mp, self.n_mm)

    @property
    def total(self) -> int:
        return sum(self.as_tuple())


@dataclass(frozen=True)
class Estimate:
    value: float
    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")


def outcome_probabilities(rho: TwoQubitState, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Joint outcome probabilities q_ij = Tr((P_i x P_j) rho) in ++,+-,-+,-- order."""
    probs = np.empty(4)
    for k, (i, j) in enumerate(_OUTCOME_SIGNS):
        pi = (ID2 + i * a) / 2.0
        pj = (ID2 + j * b) / 2.0
        q = np.trace(kron(pi, pj) @ rho.rho).real
        if q < -1e-9:
            raise NumericalError(f"outcome probability {q:.3e} below tolerance")
        probs[k] = max(q, 0.0)
    return probs


def sample_counts(
    rho: TwoQubitState,
    a: np.ndarray,
    b: np.ndarray,
    cfg: ShotConfig,
    stream: np.random.Generator,
    mean_scale: float = 1.0,
) -> CountRecord:
    """Independent Poisson draws per joint outcome at mean q_ij * mean counts.

    mean_scale models the path attenuators of a stochastic mixture.
    """
    mean = cfg.mean_counts_per_setting * mean_scale
    probs = outcome_probabilities(rho, a, b)
    draws = stream.poisson(mean * probs)
    return CountRecord(*(int(n) for n in draws))


def estimate_correlator(counts: CountRecord) -> Estimate:
    """Coincidence correlator with first-order Poisson error propagation."""
    total = counts.total
    if total <= 0:
        raise ValueError("cannot estimate a correlator from zero total counts")
    signs = (+1.0, -1.0, -1.0, +1.0)
    value = sum(s * n for s, n in zip(signs, counts.as_tuple())) / total
    var = sum((s - value) ** 2 * n for s, n in zip(signs, counts.as_tuple())) / total**2
    return Estimate(value, math.sqrt(var))


def estimate_p(path1_counts: CountRecord, path2_counts: CountRecord) -> Estimate:
    """Mixing probability from blocked-path totals, P1/(P1+P2)."""
    p1 = path1_counts.total
    p2 = path2_counts.total
    total = p1 + p2
    if total <= 0:
        raise ValueError("cannot estimate p from zero combined counts")
    var = p1 * p2 / total**3
    return Estimate(p1 / total, math.sqrt(var))


@dataclass(frozen=True)
class ExperimentResult:
    s_ab: Estimate
    s_ac: Estimate
    p_hat: Estimate


def _stream(cfg: ShotConfig, repeat: int, component: int, setting: int) -> np.random.Generator:
    # one child stream per (repeat, component, setting): parallel-safe and
    # independent of execution order
    return np.random.default_rng(
        np.random.SeedSequence(cfg.seed, spawn_key=(repeat, component, setting))
    )


def _chsh_estimate(estimates: list[Estimate]) -> Estimate:
    e00, e01, e10, e11 = estimates
    value = e00.value + e01.value + e10.value - e11.value
    sigma = math.sqrt(sum(e.sigma**2 for e in estimates))
    return Estimate(value, sigma)


def run_experiment(
    state: StateSpec,
    strategy: MixedStrategy,
    cfg: ShotConfig,
    repeat: int = 0,
) -> ExperimentResult:
    """Simulate every setting of every mixture component and assemble the
    two CHSH estimates plus the measured mixing probability.

    Per-component means are scaled by the component probabilities, matching
    variable attenuators on the two paths.  The per-case CHSH estimates are
    combined with the configured probabilities; the blocked-path estimate of
    p is reported alongside as its own measurement.
    """
    rho = prepare(state)
    s_ab_parts: list[tuple[Estimate, float]] = []
    s_ac_parts: list[tuple[Estimate, float]] = []
    path_totals: list[CountRecord] = []

    for comp_idx, (case, prob) in enumerate(strategy.components):
        if prob == 0.0:
            continue
        ops = build_operators(case)
        rho_ac = luders_relay(rho, ops)
        ab = [
            estimate_correlator(
                sample_counts(
                    rho, ops.alice[x], ops.bob[y], cfg,
                    _stream(cfg, repeat, comp_idx, 2 * x + y), mean_scale=prob,
                )
            )
            for x in range(2)
            for y in range(2)
        ]
        ac = [
            estimate_correlator(
                sample_counts(
                    rho_ac, ops.alice[x], ops.charlie[z], cfg,
                    _stream(cfg, repeat, comp_idx, 4 + 2 * x + z), mean_scale=prob,
                )
            )
            for x in range(2)
            for z in range(2)
        ]
        s_ab_parts.append((_chsh_estimate(ab), prob))
        s_ac_parts.append((_chsh_estimate(ac), prob))
        path_totals.append(
            sample_counts(rho, np.array(PAULI_Z), np.array(PAULI_Z), cfg,
                          _stream(cfg, repeat, comp_idx, 8), mean_scale=prob)
        )

    def combine(parts: list[tuple[Estimate, float]]) -> Estimate:
        value = sum(e.value * p for e, p in parts)
        sigma = math.sqrt(sum((e.sigma * p) ** 2 for e, p in parts))
        return Estimate(value, sigma)

    if len(path_totals) == 1:
        p_hat = Estimate(1.0, 0.0)
    else:
        rest = sum(c.total for c in path_totals[1:])
        p_hat = estimate_p(path_totals[0], CountRecord(rest, 0, 0, 0))
    return ExperimentResult(combine(s_ab_parts), combine(s_ac_parts), p_hat)
