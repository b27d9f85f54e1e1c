"""CHSH parameters: numeric evaluation, closed forms, mixing, trade-off curves."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import NumericalError, kron
from .states import TwoQubitState
from .strategies import StrategyCase, build_operators, luders_relay, optimal_chi

TSIRELSON = 2.0 * math.sqrt(2.0)
IMAG_TOL = 1e-10
PROB_TOL = 1e-12


def correlator(rho: TwoQubitState, a: np.ndarray, b: np.ndarray) -> float:
    """Re Tr((a (x) b) rho); the imaginary part must be numerical noise."""
    val = np.trace(kron(a, b) @ rho.rho)
    if abs(val.imag) > IMAG_TOL:
        raise NumericalError(f"correlator has imaginary residue {val.imag:.3e}")
    return float(val.real)


def chsh_numeric(
    rho: TwoQubitState,
    first: tuple[np.ndarray, np.ndarray],
    second: tuple[np.ndarray, np.ndarray],
) -> float:
    """E(0,0) + E(0,1) + E(1,0) - E(1,1) for a pair of dichotomic settings."""
    e = [[correlator(rho, first[x], second[y]) for y in range(2)] for x in range(2)]
    return e[0][0] + e[0][1] + e[1][0] - e[1][1]


def closed_form(lam: int, role: str, phi_state: float, setting: float = 0.0) -> float:
    """Closed-form CHSH value of one deterministic case.

    role is "AB" (first link) or "AC" (relay link).  setting is the case's
    own angle; the identity case (lam=2) takes none, its AC value already
    assumes the optimal receiver angle.
    """
    if lam not in (1, 2, 3):
        raise ValueError(f"lam must be 1, 2 or 3, got {lam}")
    if role not in ("AB", "AC"):
        raise ValueError(f"role must be 'AB' or 'AC', got {role!r}")
    s2 = math.sin(2.0 * phi_state)
    if lam == 1:
        if role == "AB":
            return 2.0 * math.cos(setting) * s2 + 2.0 * math.sin(setting)
        return 2.0 * math.sin(setting)
    if lam == 2:
        if role == "AB":
            return 2.0 * math.cos(2.0 * phi_state)
        return 2.0 * math.sqrt(1.0 + s2 * s2)
    if role == "AB":
        return 2.0 * math.sin(setting + 2.0 * phi_state)
    return math.sin(setting) + 2.0 * math.cos(setting) * s2


def mix(values: list[tuple[float, float]]) -> float:
    """Convex combination of (value, probability) pairs."""
    probs = [p for _, p in values]
    if any(p < -PROB_TOL for p in probs):
        raise ValueError("probabilities must be non-negative")
    if abs(sum(probs) - 1.0) > PROB_TOL:
        raise ValueError(f"probabilities must sum to 1, got {sum(probs)}")
    return sum(v * p for v, p in values)


def _safe_sqrt(x: float) -> float:
    # tolerate tiny negative arguments from cancellation at range endpoints
    if x < -1e-9:
        raise NumericalError(f"negative sqrt argument {x:.3e}")
    return math.sqrt(max(x, 0.0))


def achievable_ab_range(lam: int, phi_state: float) -> tuple[float, float]:
    """First-link range over which the trade-off expression of a case is defined."""
    s2 = math.sin(2.0 * phi_state)
    if lam == 1:
        return 0.0, 2.0 * math.sqrt(1.0 + s2 * s2)
    if lam == 2:
        return 0.0, TSIRELSON
    if lam == 3:
        return -2.0, 2.0
    raise ValueError(f"lam must be 1, 2 or 3, got {lam}")


def tradeoff_closed_form(lam: int, phi_state: float, s_ab: float) -> float:
    """Best relay-link value as a function of the first-link value.

    For the basis-projection and mixed cases this is the projection of the
    parametric setting sweep onto its single-valued upper branch; for the
    identity case it is the circle s_ab^2 + s_ac^2 = 8.
    """
    lo, hi = achievable_ab_range(lam, phi_state)
    if not (lo - 1e-9 <= s_ab <= hi + 1e-9):
        raise ValueError(f"s_ab={s_ab} outside achievable range [{lo}, {hi}] for lam={lam}")
    s2 = math.sin(2.0 * phi_state)
    if lam == 1:
        root = _safe_sqrt(4.0 + 4.0 * s2 * s2 - s_ab * s_ab)
        return (s_ab + s2 * root) / (1.0 + s2 * s2)
    if lam == 2:
        return _safe_sqrt(8.0 - s_ab * s_ab)
    c2 = math.cos(2.0 * phi_state)
    root = _safe_sqrt(1.0 - s_ab * s_ab / 4.0)
    return s2 * root * (1.0 - 2.0 * c2) + (s_ab / 2.0) * (2.0 * s2 * s2 + c2)


def single_valued_branch(lam: int, phi_state: float) -> tuple[float, float]:
    """Setting interval on which the parametric pair obeys tradeoff_closed_form.

    Both sweeping cases fold back in s_ab; the implicit expression matches
    the branch past the fold (towards larger relay values).
    """
    if lam == 1:
        return optimal_chi(phi_state).value, math.pi / 2
    if lam == 2:
        return 0.0, math.pi / 2
    if lam == 3:
        return max(0.0, math.pi / 2 - 2.0 * phi_state), math.pi / 2
    raise ValueError(f"lam must be 1, 2 or 3, got {lam}")


@dataclass(frozen=True)
class ChshPair:
    """A pair of sequential CHSH values; both bounded by Tsirelson."""

    s_ab: float
    s_ac: float

    def __post_init__(self):
        for v in (self.s_ab, self.s_ac):
            if abs(v) > TSIRELSON + 1e-9:
                raise ValueError(f"CHSH value {v} exceeds the Tsirelson bound")


@dataclass(frozen=True)
class MixedStrategy:
    """Shared-randomness distribution over at most three distinct cases."""

    components: tuple[tuple[StrategyCase, float], ...]

    def __post_init__(self):
        comps = tuple((case, float(p)) for case, p in self.components)
        if not 1 <= len(comps) <= 3:
            raise ValueError("a mixed strategy has 1 to 3 components")
        lams = [case.lam for case, _ in comps]
        if len(set(lams)) != len(lams):
            raise ValueError("component lambdas must be distinct")
        probs = [p for _, p in comps]
        if any(p < -PROB_TOL for p in probs):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(probs) - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities must sum to 1, got {sum(probs)}")
        object.__setattr__(self, "components", comps)


def evaluate_case(rho: TwoQubitState, case: StrategyCase) -> ChshPair:
    """Both CHSH values of one deterministic case, fully numeric.

    The relay value always goes through the measure-and-forward channel so
    the closed forms stay an independent check.
    """
    ops = build_operators(case)
    s_ab = chsh_numeric(rho, ops.alice, ops.bob)
    s_ac = chsh_numeric(luders_relay(rho, ops), ops.alice, ops.charlie)
    return ChshPair(s_ab, s_ac)


def evaluate_mixed(rho: TwoQubitState, strategy: MixedStrategy) -> ChshPair:
    """Shared-randomness combination of the per-case numeric values."""
    pairs = [(evaluate_case(rho, case), p) for case, p in strategy.components]
    return ChshPair(
        mix([(pair.s_ab, p) for pair, p in pairs]),
        mix([(pair.s_ac, p) for pair, p in pairs]),
    )
