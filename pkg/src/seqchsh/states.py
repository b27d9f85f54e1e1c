"""Two-qubit state preparation: the cos(phi)|00> + sin(phi)|11> family plus white noise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ID4, is_hermitian

TRACE_TOL = 1e-9
EIG_FLOOR = -1e-9


@dataclass(frozen=True)
class StateSpec:
    """State angle in radians (0..pi/4) and white-noise weight v in [0, 1]."""

    phi_state: float
    noise_v: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.phi_state <= math.pi / 4 + 1e-15):
            raise ValueError(f"phi_state must be in [0, pi/4], got {self.phi_state}")
        if not (0.0 <= self.noise_v <= 1.0):
            raise ValueError(f"noise_v must be in [0, 1], got {self.noise_v}")


@dataclass(frozen=True)
class TwoQubitState:
    """Validated 4x4 density matrix."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got {rho.shape}")
        if not is_hermitian(rho):
            raise ValueError("density matrix is not Hermitian")
        tr = rho.trace().real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1 beyond {TRACE_TOL}")
        w = np.linalg.eigvalsh(rho)
        if w[0] < EIG_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {w[0]:.3e}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)


def pure_ket(phi_state: float) -> np.ndarray:
    """State vector cos(phi)|00> + sin(phi)|11>."""
    ket = np.zeros(4, dtype=complex)
    ket[0] = math.cos(phi_state)
    ket[3] = math.sin(phi_state)
    return ket


def prepare(spec: StateSpec) -> TwoQubitState:
    """Density matrix (1-v)|psi_phi><psi_phi| + v*I/4."""
    ket = pure_ket(spec.phi_state)
    rho = (1.0 - spec.noise_v) * np.outer(ket, ket.conj()) + spec.noise_v * np.asarray(ID4) / 4.0
    return TwoQubitState(rho)


def fidelity_to_pure(state: TwoQubitState, phi_target: float) -> float:
    """<psi_target| rho |psi_target>."""
    ket = pure_ket(phi_target)
    return float((ket.conj() @ state.rho @ ket).real)
