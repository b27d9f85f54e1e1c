"""Closed-form-versus-numeric oracle suite.

Every check compares an independent analytic expression against the fully
numeric channel path, or asserts a channel law.  The CLI `verify`
subcommand and the acceptance tests both run these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chsh import (
    TSIRELSON,
    chsh_numeric,
    closed_form,
    evaluate_case,
    single_valued_branch,
    tradeoff_closed_form,
)
from .frontier import deterministic_pair, make_case
from .linalg import xz_observable
from .states import StateSpec, TwoQubitState, prepare
from .strategies import build_operators, luders_relay, optimal_chi


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}: worst={self.worst:.3e} tol={self.tol:.1e}{extra}"


def _random_case(rng: np.random.Generator, phi_state: float):
    lam = int(rng.integers(1, 4))
    if lam == 2:
        setting = optimal_chi(phi_state).value
    else:
        setting = float(rng.uniform(0.0, math.pi / 2))
    return make_case(lam, setting), lam, setting


def _random_density(rng: np.random.Generator) -> TwoQubitState:
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return TwoQubitState(rho / rho.trace().real)


def check_closed_form_oracle(n: int = 1000, seed: int = 1234, tol: float = 1e-10) -> CheckResult:
    """Numeric CHSH values (relay included) against all six closed forms."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        phi_state = float(rng.uniform(1e-4, math.pi / 4))
        case, lam, setting = _random_case(rng, phi_state)
        rho = prepare(StateSpec(phi_state))
        pair = evaluate_case(rho, case)
        worst = max(
            worst,
            abs(pair.s_ab - closed_form(lam, "AB", phi_state, setting)),
            abs(pair.s_ac - closed_form(lam, "AC", phi_state, setting)),
        )
    return CheckResult("closed_form_vs_numeric", worst <= tol, worst, tol, f"{n} random tuples")


def check_parametric_implicit(n: int = 200, seed: int = 4321, tol: float = 1e-9) -> CheckResult:
    """Parametric (s_ab, s_ac) pairs satisfy the implicit trade-off forms.

    Each sweeping case folds back in s_ab, so settings are drawn from the
    single-valued branch where the implicit expression is defined.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for lam in (1, 2, 3):
        for _ in range(n):
            phi_state = float(rng.uniform(math.radians(1.0), math.pi / 4))
            lo, hi = single_valued_branch(lam, phi_state)
            setting = float(rng.uniform(lo, hi))
            if lam == 2:
                setting = optimal_chi(phi_state).value
            s_ab, s_ac = deterministic_pair(lam, phi_state, setting)
            worst = max(worst, abs(tradeoff_closed_form(lam, phi_state, float(s_ab)) - float(s_ac)))
    return CheckResult("parametric_implicit_consistency", worst <= tol, worst, tol, f"{n} per case")


def check_case2_circle(n: int = 100, tol: float = 1e-10) -> CheckResult:
    """Identity-case values sit on the circle s_ab^2 + s_ac^2 = 8."""
    worst = 0.0
    for phi_state in np.linspace(0.0, math.pi / 4, n):
        ab = closed_form(2, "AB", float(phi_state))
        ac = closed_form(2, "AC", float(phi_state))
        worst = max(worst, abs(ab * ab + ac * ac - 8.0))
    return CheckResult("identity_case_circle", worst <= tol, worst, tol, f"{n} state angles")


def check_relay_channel_laws(
    n: int = 10000, seed: int = 777, trace_tol: float = 1e-10, psd_floor: float = -1e-9
) -> CheckResult:
    """Trace preservation and positivity of the relay on random inputs."""
    rng = np.random.default_rng(seed)
    worst_trace = 0.0
    worst_eig = 0.0
    for _ in range(n):
        rho = _random_density(rng)
        case, _, _ = _random_case(rng, float(rng.uniform(1e-3, math.pi / 4)))
        out = luders_relay(rho, build_operators(case))
        worst_trace = max(worst_trace, abs(out.rho.trace().real - 1.0))
        worst_eig = min(worst_eig, float(np.linalg.eigvalsh(out.rho)[0]))
    passed = worst_trace <= trace_tol and worst_eig >= psd_floor
    return CheckResult(
        "relay_channel_laws",
        passed,
        worst_trace,
        trace_tol,
        f"{n} random inputs, min eigenvalue {worst_eig:.2e}",
    )


def check_identity_case_is_identity(n: int = 500, seed: int = 99, tol: float = 1e-12) -> CheckResult:
    """With identity effects the relay must be the identity map."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        rho = prepare(StateSpec(float(rng.uniform(0, math.pi / 4)), float(rng.uniform(0, 1))))
        case = make_case(2, float(rng.uniform(0, math.pi / 2)))
        out = luders_relay(rho, build_operators(case))
        worst = max(worst, float(np.max(np.abs(out.rho - rho.rho))))
    return CheckResult("identity_case_relay_is_identity", worst <= tol, worst, tol, f"{n} states")


def check_tsirelson(n: int = 10000, seed: int = 2718, slack: float = 1e-9) -> CheckResult:
    """No numeric CHSH value may exceed 2*sqrt(2), relay path included."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        rho = prepare(StateSpec(float(rng.uniform(0, math.pi / 4)), float(rng.uniform(0, 1))))
        first = (xz_observable(rng.uniform(0, math.pi)), xz_observable(rng.uniform(0, math.pi)))
        second = (xz_observable(rng.uniform(0, math.pi)), xz_observable(rng.uniform(0, math.pi)))
        worst = max(worst, abs(chsh_numeric(rho, first, second)))
        phi_state = float(rng.uniform(1e-3, math.pi / 4))
        case, _, _ = _random_case(rng, phi_state)
        ops = build_operators(case)
        relay_rho = luders_relay(prepare(StateSpec(phi_state)), ops)
        worst = max(worst, abs(chsh_numeric(relay_rho, ops.alice, ops.charlie)))
    return CheckResult("tsirelson_bound", worst <= TSIRELSON + slack, worst, TSIRELSON + slack, f"{2 * n} values")


def run_all(fast: bool = True) -> list[CheckResult]:
    """The whole suite; fast mode trims the heavyweight sweeps for the CLI."""
    n_relay = 2000 if fast else 10000
    n_tsirelson = 2000 if fast else 10000
    return [
        check_closed_form_oracle(),
        check_parametric_implicit(),
        check_case2_circle(),
        check_relay_channel_laws(n=n_relay),
        check_identity_case_is_identity(),
        check_tsirelson(n=n_tsirelson),
    ]
