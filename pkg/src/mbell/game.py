"""Strategies, Minority-game payoff observables and expected payoffs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mbell.quantum import (
    PAULI,
    PAULI_ORDER,
    SUPPORTED_N,
    Observable,
    StateVector,
    apply_local_operators,
)


@dataclass(frozen=True)
class Strategy:
    theta: float
    beta1: float
    beta2: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        for name in ("beta1", "beta2"):
            if not -np.pi <= getattr(self, name) <= np.pi:
                raise ValueError(f"{name} must lie in [-pi, pi], got {getattr(self, name)!r}")

    @property
    def matrix(self) -> np.ndarray:
        return strategy_matrix(self)


@dataclass(frozen=True)
class SymmetricProfile:
    """Every player uses M(theta, beta, -beta)."""

    theta: float
    beta: float

    def strategy(self) -> Strategy:
        return Strategy(self.theta, self.beta, -self.beta)

    def matrix(self) -> np.ndarray:
        return _unitary(self.theta, self.beta, -self.beta)

    def expand(self, n: int) -> list[Strategy]:
        return [self.strategy()] * n


# Optimal four-player strategies; the six-player pair crosses at alpha^2 = 6/19.
M_HIGH = SymmetricProfile(np.pi / 2, np.pi / 8)
M_LOW = SymmetricProfile(np.pi / 4, 0.0)
SIX_HIGH = SymmetricProfile(np.pi / 2, np.pi / 12)
SIX_LOW = SymmetricProfile(np.pi / 4, 0.0)


def _unitary(theta: float, beta1: float, beta2: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [np.exp(1j * beta1) * c, 1j * np.exp(1j * beta2) * s],
            [1j * np.exp(-1j * beta2) * s, np.exp(-1j * beta1) * c],
        ]
    )


def strategy_matrix(s: Strategy) -> np.ndarray:
    return _unitary(s.theta, s.beta1, s.beta2)


@dataclass(frozen=True)
class PayoffSpec:
    """Per-outcome payoff coefficients c_b, b indexing the computational basis."""

    n_qubits: int
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).reshape(-1)
        if c.size != 2**self.n_qubits:
            raise ValueError(f"need {2**self.n_qubits} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def coefficient(self, bits: str) -> float:
        return float(self.coefficients[int(bits, 2)])


def _weights(n: int) -> np.ndarray:
    return np.array([bin(b).count("1") for b in range(2**n)])


def _check_n(n: int):
    if n not in SUPPORTED_N:
        raise ValueError(f"unsupported player count {n}; expected one of {SUPPORTED_N}")


def minority_payoff_spec(n: int) -> PayoffSpec:
    """Player-averaged Minority payoff: (number of strict-minority winners) / n.

    Each winner scores one unit, so an outcome with m < n/2 players on
    the minority side is worth m/n to a player chosen at random.
    """
    _check_n(n)
    w = _weights(n)
    m = np.minimum(w, n - w)
    return PayoffSpec(n, np.where(2 * m < n, m / n, 0.0))


def player_minority_payoff_spec(n: int, player: int) -> PayoffSpec:
    """Payoff of a single player (0-based): 1 when they are in the strict minority."""
    _check_n(n)
    c = np.zeros(2**n)
    for b in range(2**n):
        bit = (b >> (n - 1 - player)) & 1
        same = bin(b).count("1") if bit else n - bin(b).count("1")
        c[b] = 1.0 if 2 * same < n else 0.0
    return PayoffSpec(n, c)


def anti_minority_payoff_spec(n: int) -> PayoffSpec:
    """1/n on every outcome with no strict minority (all equal, or an even split)."""
    _check_n(n)
    w = _weights(n)
    m = np.minimum(w, n - w)
    no_minority = (m == 0) | (2 * m == n)
    return PayoffSpec(n, np.where(no_minority, 1.0 / n, 0.0))


def diagonal_to_pauli(coefficients: np.ndarray) -> dict[str, float]:
    """Exact {I, Z}^n expansion of diag(c) by a Walsh-Hadamard sign sum."""
    c = np.asarray(coefficients, dtype=float)
    n = int(round(np.log2(c.size)))
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / 2  # rows: I, Z; cols: bit 0, bit 1
    t = c.reshape((2,) * n)
    for k in range(n):
        t = np.moveaxis(np.tensordot(h, t, axes=([1], [k])), 0, k)
    out = {}
    for idx in np.ndindex(*t.shape):
        if t[idx] != 0.0:
            out["".join("IZ"[i] for i in idx)] = float(t[idx])
    return out


def payoff_observable(spec: PayoffSpec) -> Observable:
    terms = diagonal_to_pauli(spec.coefficients)
    if not terms:
        return Observable((), spec.n_qubits)
    return Observable.from_dict(terms, spec.n_qubits)


def expected_payoff(state: StateVector, profile: SymmetricProfile, spec: PayoffSpec) -> float:
    if state.n_qubits != spec.n_qubits:
        raise ValueError(f"state has {state.n_qubits} qubits, payoff spec {spec.n_qubits}")
    u = profile.matrix()
    final = apply_local_operators(state.amplitudes, [u] * state.n_qubits)
    return float(np.dot(spec.coefficients, np.abs(final) ** 2))


def closed_form_payoff(alpha: float, theta: float, beta: float) -> float:
    """Four-player Minority payoff on psi_in(alpha) for the profile M(theta, beta, -beta)."""
    r = alpha * np.sqrt(2 - 2 * alpha**2)
    c2t, c4b, c8b = np.cos(2 * theta), np.cos(4 * beta), np.cos(8 * beta)
    bracket = (
        8
        - 2 * alpha**2
        + 8 * r * c4b
        - 2 * alpha**2 * c8b
        + 2 * (4 - 3 * alpha**2) * c2t
        + 8 * r * c4b * c2t
        + 2 * alpha**2 * c8b * c2t
    )
    return float(np.sin(theta) ** 2 / 32 * bracket)


def payoff_high(alpha: float) -> float:
    return alpha**2 / 4


def payoff_low(alpha: float) -> float:
    return 1 / 16 + (1 - alpha**2 + 2 * np.sqrt(2) * alpha * np.sqrt(1 - alpha**2)) / 16


def phi_payoff_low(alpha: float) -> float:
    return 1 / 16 + 3 / 16 * (2 / 3) * (np.sqrt(3) * alpha * np.sqrt(1 - alpha**2) + 1 - alpha**2)


def six_payoff_high(alpha: float) -> float:
    return (2 + 3 * alpha**2) / 16


def six_payoff_low(alpha: float) -> float:
    return 7 * (2 - alpha**2) / 64


def pauli_coordinates(m: np.ndarray) -> np.ndarray:
    """(I, X, Y, Z) coordinates of a 2x2 matrix."""
    return np.array([np.trace(PAULI[p] @ m) / 2 for p in PAULI_ORDER])


def projector_transform(theta: float, beta: float, j: int) -> np.ndarray:
    """M^dag P_j M for M = M(theta, beta, -beta), from its Pauli expansion.

    (-1)^j multiplies both the Z and the in-plane part, and the Y term
    carries a real coefficient: the operator is a Hermitian projector.
    """
    if j not in (0, 1):
        raise ValueError(f"j must be 0 or 1, got {j!r}")
    sign = 1 - 2 * j
    half_sin = 0.5 * np.sin(theta)
    return (
        0.5 * PAULI["I"]
        + sign * (np.cos(theta / 2) ** 2 - 0.5) * PAULI["Z"]
        + sign * half_sin * (np.sin(2 * beta) * PAULI["X"] - np.cos(2 * beta) * PAULI["Y"])
    )


def transformed_payoff_observable(s: Strategy, spec: PayoffSpec, tol: float = 1e-14) -> Observable:
    """(M^dag)^(x)n S M^(x)n expanded into Pauli strings."""
    return conjugated_payoff_observable(strategy_matrix(s), spec, tol)


def conjugated_payoff_observable(m: np.ndarray, spec: PayoffSpec, tol: float = 1e-14) -> Observable:
    """Same as :func:`transformed_payoff_observable` for any single-qubit unitary ``m``."""
    p = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    coords = np.array([pauli_coordinates(m.conj().T @ pj @ m) for pj in p])  # (bit, pauli)
    n = spec.n_qubits
    t = spec.coefficients.astype(complex).reshape((2,) * n)
    for k in range(n):
        t = np.moveaxis(np.tensordot(coords.T, t, axes=([1], [k])), 0, k)
    if np.max(np.abs(t.imag)) > 1e-12:
        raise ValueError("transformed payoff observable is not Hermitian")
    terms = {}
    for idx in np.ndindex(*t.shape):
        v = t[idx].real
        if abs(v) > tol:
            terms["".join(PAULI_ORDER[i] for i in idx)] = float(v)
    return Observable.from_dict(terms, n) if terms else Observable((), n)

