"""The three deterministic projective strategies and the measure-and-relay channel.

Case 1: both of Bob's settings are basis projections; only the first link
violates CHSH.  Case 2: Bob measures nothing (identity effects) and forwards
the state untouched.  Case 3: one basis projection, one identity.  After
Bob's measurement the state update is the Lueders rule averaged uniformly
over his inputs, with a correction unitary applied before the relay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import (
    ID2,
    PAULI_X,
    PAULI_Z,
    dagger,
    is_hermitian,
    is_unitary,
    kron,
    rot_sigma2,
    sqrt_psd,
    xz_observable,
)
from .states import TwoQubitState

VALID_LAMBDAS = (1, 2, 3)


@dataclass(frozen=True)
class StrategyCase:
    """One deterministic strategy: lam in {1, 2, 3} plus its setting angles.

    Only the angle relevant to lam is read: phi_meas for lam=1, chi for
    lam=2, theta for lam=3.
    """

    lam: int
    phi_meas: float = 0.0
    chi: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.lam not in VALID_LAMBDAS:
            raise ValueError(f"lam must be one of {VALID_LAMBDAS}, got {self.lam}")
        for name in ("phi_meas", "chi", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def setting(self) -> float:
        """The angle this case actually uses."""
        return {1: self.phi_meas, 2: self.chi, 3: self.theta}[self.lam]


def _check_observable(m: np.ndarray, who: str) -> None:
    if not is_hermitian(m):
        raise ValueError(f"{who} observable is not Hermitian")
    if np.max(np.abs(m @ m - ID2)) > 1e-12:
        raise ValueError(f"{who} observable does not square to the identity")


@dataclass(frozen=True)
class OperatorSet:
    """Measurement operators of all three parties plus Bob's relay unitaries."""

    alice: tuple[np.ndarray, np.ndarray]
    bob: tuple[np.ndarray, np.ndarray]
    bob_unitaries: tuple[np.ndarray, np.ndarray]
    charlie: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        for who, pair in ("alice", self.alice), ("bob", self.bob), ("charlie", self.charlie):
            for m in pair:
                _check_observable(m, who)
        for u in self.bob_unitaries:
            if not is_unitary(u):
                raise ValueError("bob unitary is not unitary")


def build_operators(case: StrategyCase) -> OperatorSet:
    """Operator assignments of the given strategy case."""
    if case.lam == 1:
        phi = case.phi_meas
        c0 = xz_observable(phi)
        return OperatorSet(
            alice=(np.array(PAULI_X), np.array(PAULI_Z)),
            bob=(xz_observable(phi), np.cos(phi) * PAULI_X - np.sin(phi) * PAULI_Z),
            bob_unitaries=(np.array(ID2), rot_sigma2(phi - math.pi / 2)),
            charlie=(c0, -c0),
        )
    if case.lam == 2:
        chi = case.chi
        return OperatorSet(
            alice=(np.array(PAULI_Z), np.array(PAULI_X)),
            bob=(np.array(ID2), np.array(ID2)),
            bob_unitaries=(np.array(ID2), np.array(ID2)),
            charlie=(xz_observable(chi), -np.cos(chi) * PAULI_X + np.sin(chi) * PAULI_Z),
        )
    theta = case.theta
    return OperatorSet(
        alice=(xz_observable(theta), -np.cos(theta) * PAULI_X + np.sin(theta) * PAULI_Z),
        bob=(np.array(ID2), np.array(PAULI_X)),
        bob_unitaries=(np.array(ID2), np.array(ID2)),
        charlie=(np.array(PAULI_Z), np.array(PAULI_X)),
    )


class ChiResult(NamedTuple):
    value: float
    degenerate: bool


def optimal_chi(phi_state: float) -> ChiResult:
    """Best second-receiver angle arctan(csc(2*phi_state)) for the identity strategy.

    At phi_state = 0 the cosecant diverges; the limit pi/2 is returned with
    the degenerate flag set.
    """
    s = math.sin(2.0 * phi_state)
    if s <= 0.0:
        return ChiResult(math.pi / 2, True)
    return ChiResult(math.atan(1.0 / s), False)


def luders_relay(rho: TwoQubitState, ops: OperatorSet) -> TwoQubitState:
    """State Charlie receives: Lueders update for Bob's measurement, averaged
    uniformly over his two inputs, with the correction unitary applied.

    Effects are (I + b*B_y)/2 for outcomes b = +/-1; the identity setting
    yields effects I and 0, so the map reduces to the identity there.
    """
    out = np.zeros((4, 4), dtype=complex)
    for y in range(2):
        u = ops.bob_unitaries[y]
        for b in (+1, -1):
            effect = (ID2 + b * ops.bob[y]) / 2.0
            k = kron(ID2, u @ sqrt_psd(effect))
            out += k @ rho.rho @ dagger(k) / 2.0
    try:
        return TwoQubitState(out)
    except ValueError as exc:
        from .linalg import NumericalError

        raise NumericalError(f"relay output is not a valid state: {exc}") from exc
