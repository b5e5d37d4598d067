"""Symmetric Pareto-optimal strategy search, fulcrum location and payoff sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from mbell.game import PayoffSpec, SymmetricProfile, expected_payoff
from mbell.quantum import StateVector

StateFamily = Callable[[float], StateVector]


@dataclass
class OptimizationResult:
    best_parameters: np.ndarray
    best_value: float
    evaluations: int
    candidates: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def profile(self) -> SymmetricProfile:
        theta, beta = self.best_parameters
        return SymmetricProfile(float(theta), float(beta))


@dataclass
class FulcrumResult:
    alpha_star: float
    payoff_at_fulcrum: float
    strategy_below: SymmetricProfile
    strategy_above: SymmetricProfile
    payoff_gap: float = 0.0


def _wrap_beta(beta: float) -> float:
    """Map into [-pi, pi)."""
    return float((beta + np.pi) % (2 * np.pi) - np.pi)


def optimize_symmetric_strategy(
    state: StateVector,
    spec: PayoffSpec,
    grid: int = 64,
    restarts: int = 5,
    xatol: float = 1e-10,
    tie_tol: float = 1e-10,
) -> OptimizationResult:
    """Maximize the symmetric-profile payoff over (theta, beta) in [0, pi] x [-pi, pi].

    Grid search followed by bounded Nelder-Mead from the ``restarts`` best
    grid points. Among refined candidates whose payoff is within
    ``tie_tol`` of the best, the one with smallest (theta, beta) wins.
    """
    if state.n_qubits != spec.n_qubits:
        raise ValueError(f"state has {state.n_qubits} qubits, payoff spec {spec.n_qubits}")
    count = 0

    def payoff(x) -> float:
        nonlocal count
        count += 1
        return expected_payoff(state, SymmetricProfile(x[0], x[1]), spec)

    thetas = np.linspace(0, np.pi, grid)
    betas = np.linspace(-np.pi, np.pi, grid)
    scored = sorted(
        ((payoff((t, b)), t, b) for t in thetas for b in betas),
        key=lambda r: (-r[0], r[1], r[2]),
    )
    candidates = []
    for _, t, b in scored[:restarts]:
        res = minimize(
            lambda x: -payoff(x),
            np.array([t, b]),
            method="Nelder-Mead",
            bounds=[(0, np.pi), (-np.pi, np.pi)],
            options={"xatol": xatol, "fatol": 1e-15, "maxiter": 4000},
        )
        theta, beta = float(res.x[0]), _wrap_beta(res.x[1])
        candidates.append((payoff((theta, beta)), theta, beta))
    top = max(v for v, _, _ in candidates)
    _, theta, beta = min((c for c in candidates if c[0] >= top - tie_tol), key=lambda c: (c[1], c[2]))
    best = np.array([theta, beta])
    value = expected_payoff(state, SymmetricProfile(theta, beta), spec)
    return OptimizationResult(best, value, count, sorted(candidates, reverse=True))


def same_class(found: SymmetricProfile, reference: SymmetricProfile, tol: float = 1e-6) -> bool:
    """True if theta agrees and beta agrees up to beta -> +-beta + k*pi/2."""
    if abs(found.theta - reference.theta) > tol:
        return False
    period = np.pi / 2
    for ref in (reference.beta, -reference.beta):
        d = (found.beta - ref) % period
        if min(d, period - d) < tol:
            return True
    return False


def find_fulcrum(
    state_family: StateFamily,
    spec: PayoffSpec,
    s_low: SymmetricProfile,
    s_high: SymmetricProfile,
    lo: float = 0.0,
    hi: float = 1.0,
    tol: float = 1e-13,
) -> FulcrumResult:
    """Bisect g(alpha) = payoff(s_high) - payoff(s_low) for its sign change on [lo, hi]."""

    def g(alpha: float) -> float:
        state = state_family(alpha)
        return expected_payoff(state, s_high, spec) - expected_payoff(state, s_low, spec)

    g_lo, g_hi = g(lo), g(hi)
    if abs(g_lo) < 1e-15 and abs(g_hi) < 1e-15:
        raise ValueError("payoff difference vanishes at both ends; strategies are indistinguishable")
    if g_lo == 0.0:
        hi = lo
    elif g_hi == 0.0:
        lo = hi
    elif np.sign(g_lo) == np.sign(g_hi):
        raise ValueError(
            f"payoff difference does not change sign on [{lo}, {hi}] "
            f"(g = {g_lo:.3e}, {g_hi:.3e}); wrong candidate strategies?"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        g_mid = g(mid)
        if g_mid == 0.0:
            lo = hi = mid
        elif np.sign(g_mid) == np.sign(g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    alpha = 0.5 * (lo + hi)
    state = state_family(alpha)
    p_low = expected_payoff(state, s_low, spec)
    p_high = expected_payoff(state, s_high, spec)
    return FulcrumResult(alpha, 0.5 * (p_low + p_high), s_low, s_high, abs(p_high - p_low))


@dataclass
class SweepTable:
    alphas: np.ndarray
    payoffs: np.ndarray  # (len(alphas), len(profiles))
    envelope: np.ndarray
    best_index: np.ndarray


def payoff_sweep(
    state_family: StateFamily,
    spec: PayoffSpec,
    profiles: Sequence[SymmetricProfile],
    alphas: Sequence[float],
) -> SweepTable:
    alphas = np.asarray(alphas, dtype=float)
    if np.any((alphas < 0) | (alphas > 1)):
        raise ValueError("alpha grid must lie in [0, 1]")
    payoffs = np.array(
        [[expected_payoff(state_family(a), p, spec) for p in profiles] for a in alphas]
    ).reshape(len(alphas), len(profiles))
    return SweepTable(alphas, payoffs, payoffs.max(axis=1), payoffs.argmax(axis=1))


def alpha_grid(steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("need at least two alpha steps")
    return np.linspace(0.0, 1.0, steps)
