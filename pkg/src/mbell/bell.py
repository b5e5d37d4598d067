"""Correlation functions, Bell polynomials, LHV bounds and violation search.

Setting indices follow the k = 1 / k = 2 convention: E(k1, ..., kn) uses
observer i's first observable when k_i = 1 and the second when k_i = 2.
Internally tensors are indexed by k - 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from mbell.quantum import PAULI, StateVector

PLANES = {"xy": "XY", "zy": "ZY", "xz": "XZ"}


@dataclass(frozen=True)
class PlaneObservable:
    """cos(angle) * P1 + sin(angle) * P2 for the ordered Pauli pair ``axes = P1 P2``."""

    axes: str
    angle: float

    def __post_init__(self):
        axes = self.axes.upper()
        if len(axes) != 2 or axes[0] == axes[1] or any(a not in "XYZ" for a in axes):
            raise ValueError(f"axes must be two distinct letters from XYZ, got {self.axes!r}")
        object.__setattr__(self, "axes", axes)

    @property
    def plane(self) -> frozenset[str]:
        return frozenset(self.axes)

    @property
    def matrix(self) -> np.ndarray:
        p1, p2 = PAULI[self.axes[0]], PAULI[self.axes[1]]
        return np.cos(self.angle) * p1 + np.sin(self.angle) * p2


@dataclass(frozen=True)
class MeasurementScheme:
    settings: tuple[tuple[PlaneObservable, PlaneObservable], ...]

    def __post_init__(self):
        settings = tuple(tuple(pair) for pair in self.settings)
        for i, (a1, a2) in enumerate(settings):
            if a1.plane != a2.plane:
                raise ValueError(f"observer {i + 1} mixes planes {a1.axes} and {a2.axes}")
        object.__setattr__(self, "settings", settings)

    @classmethod
    def symmetric(cls, n: int, axes: str, angle1: float, angle2: float) -> "MeasurementScheme":
        pair = (PlaneObservable(axes, angle1), PlaneObservable(axes, angle2))
        return cls((pair,) * n)

    @classmethod
    def from_angles(cls, axes: Sequence[str], angles: Sequence[float]) -> "MeasurementScheme":
        """One axes string per observer, angles flattened as (a1, a2) per observer."""
        return cls(
            tuple(
                (PlaneObservable(ax, angles[2 * i]), PlaneObservable(ax, angles[2 * i + 1]))
                for i, ax in enumerate(axes)
            )
        )

    @property
    def n(self) -> int:
        return len(self.settings)

    def angles(self) -> np.ndarray:
        return np.array([a.angle for pair in self.settings for a in pair])


@dataclass(frozen=True)
class BellPolynomial:
    """constant + sum over k of signs[k1-1, ..., kn-1] * E(k1, ..., kn)."""

    n: int
    constant: float
    signs: np.ndarray

    def __post_init__(self):
        s = np.array(self.signs, dtype=float)
        if s.shape != (2,) * self.n:
            s = s.reshape((2,) * self.n)
        s.setflags(write=False)
        object.__setattr__(self, "signs", s)

    @classmethod
    def from_terms(cls, n: int, terms: dict[str, float], constant: float = 0.0) -> "BellPolynomial":
        """Build from {'1112': +1, ...} style keys."""
        signs = np.zeros((2,) * n)
        for key, value in terms.items():
            signs[tuple(int(k) - 1 for k in key)] += value
        return cls(n, constant, signs)

    def sign(self, k: Sequence[int]) -> float:
        return float(self.signs[tuple(int(x) - 1 for x in k)])

    def terms(self) -> dict[str, float]:
        return {
            "".join(str(i + 1) for i in idx): float(self.signs[idx])
            for idx in np.ndindex(*self.signs.shape)
            if self.signs[idx] != 0
        }


def _apply_settings(psi: np.ndarray, ops: np.ndarray, n: int) -> np.ndarray:
    """ops has shape (n, 2, 2, 2): per observer, per setting, a 2x2 matrix.

    Returns a tensor with n setting axes followed by n qubit axes.
    """
    phi = psi.reshape((2,) * n)
    for k in range(n):
        # setting axes accumulate at the front; qubit k sits at axis k + k_settings
        phi = np.tensordot(ops[k], phi, axes=([2], [k + k]))  # (s, out, ...)
        phi = np.moveaxis(phi, 1, k + 1 + k)
        phi = np.moveaxis(phi, 0, k)
    return phi


def correlation_table(state: StateVector, scheme: MeasurementScheme) -> np.ndarray:
    """All 2^n correlation functions E(k), as a tensor indexed by k - 1."""
    n = state.n_qubits
    if scheme.n != n:
        raise ValueError(f"scheme has {scheme.n} observers, state has {n} qubits")
    ops = np.array([[a.matrix for a in pair] for pair in scheme.settings])
    return _table_from_ops(state.amplitudes, ops, n)


def _table_from_ops(psi: np.ndarray, ops: np.ndarray, n: int) -> np.ndarray:
    phi = _apply_settings(psi, ops, n).reshape((2,) * n + (2**n,))
    return np.real(phi @ psi.conj())


def correlation(state: StateVector, obs: Sequence[PlaneObservable | np.ndarray]) -> float:
    """<state| A_1 (x) ... (x) A_n |state>."""
    if len(obs) != state.n_qubits:
        raise ValueError(f"need {state.n_qubits} observables, got {len(obs)}")
    mats = [o.matrix if isinstance(o, PlaneObservable) else np.asarray(o) for o in obs]
    psi = state.tensor()
    for k, m in enumerate(mats):
        psi = np.moveaxis(np.tensordot(m, psi, axes=([1], [k])), 0, k)
    return float(np.real(np.vdot(state.amplitudes, psi.reshape(-1))))


def evaluate(poly: BellPolynomial, state: StateVector, scheme: MeasurementScheme) -> float:
    if poly.n != state.n_qubits or poly.n != scheme.n:
        raise ValueError(
            f"size mismatch: polynomial {poly.n}, state {state.n_qubits}, scheme {scheme.n}"
        )
    return float(poly.constant + np.sum(poly.signs * correlation_table(state, scheme)))


_PAYOFF_TERMS = {
    "1111": -1, "1112": +1, "1121": +1, "1122": -1,
    "1211": +1, "1212": -1, "1221": -1, "1222": +1,
    "2111": +1, "2112": -1, "2121": -1, "2122": +1,
    "2211": -1, "2212": +1, "2221": +1, "2222": -1,
}  # fmt: skip

_MABK4_TERMS = {
    "1111": -1, "1112": -1, "1121": -1, "1122": +1,
    "1211": -1, "1212": +1, "1221": +1, "1222": +1,
    "2111": -1, "2112": +1, "2121": +1, "2122": +1,
    "2211": +1, "2212": +1, "2221": +1, "2222": -1,
}  # fmt: skip


def payoff_polynomial(n: int = 4) -> BellPolynomial:
    """32 x the four-player Minority payoff written as a Bell polynomial."""
    if n != 4:
        raise ValueError("the payoff polynomial is defined for four players only")
    return BellPolynomial.from_terms(4, _PAYOFF_TERMS, constant=4.0)


def mermin_klyshko(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Recursion B_n = (B_{n-1}(A1 + A2) + B'_{n-1}(A1 - A2)) / 2 and its primed partner.

    B' is B with A1 and A2 exchanged on every site. Returns the coefficient
    tensors of (B_n, B'_n), each with LHV bound 1.
    """
    b = np.array([1.0, 0.0])
    bp = np.array([0.0, 1.0])
    plus = np.array([1.0, 1.0]) / 2
    minus = np.array([1.0, -1.0]) / 2
    for _ in range(2, n + 1):
        b, bp = (
            np.multiply.outer(b, plus) + np.multiply.outer(bp, minus),
            np.multiply.outer(bp, plus) - np.multiply.outer(b, minus),
        )
    return b, bp


def mabk_polynomial(n: int) -> BellPolynomial:
    if n == 4:
        return BellPolynomial.from_terms(4, _MABK4_TERMS)
    if n == 6:
        _, bp = mermin_klyshko(6)
        return BellPolynomial(6, 0.0, bp * 2 ** (n // 2))
    raise ValueError(f"MABK polynomial available for n = 4 or 6, not {n}")


def lhv_bound(poly: BellPolynomial) -> float:
    """max |poly| over all 4^n deterministic local +-1 assignments."""
    if poly.n > 6:
        raise ValueError("exhaustive enumeration limited to n <= 6")
    options = np.array(list(itertools.product((1.0, -1.0), repeat=2)))  # (4 choices, 2 settings)
    t = poly.signs
    for k in range(poly.n):
        t = np.moveaxis(np.tensordot(options, t, axes=([1], [k])), 0, k)
    return float(np.max(np.abs(poly.constant + t)))


_WERNER_ANGLES = {4: (-np.pi / 16, 7 * np.pi / 16), 6: (np.pi / 24, 13 * np.pi / 24)}


def _axes(plane: str) -> str:
    key = plane.lower()
    if key not in PLANES:
        raise ValueError(f"unknown plane {plane!r}; expected one of {sorted(PLANES)}")
    return PLANES[key]


def werner_scheme(n: int, plane: str = "xy") -> MeasurementScheme:
    if n not in _WERNER_ANGLES:
        raise ValueError(f"Werner scheme available for n = 4 or 6, not {n}")
    return MeasurementScheme.symmetric(n, _axes(plane), *_WERNER_ANGLES[n])


def axis_scheme(n: int, plane: str = "xy") -> MeasurementScheme:
    """Every observer measures the two plane axes themselves, e.g. {X, Y}."""
    return MeasurementScheme.symmetric(n, _axes(plane), 0.0, np.pi / 2)


def asymmetric_ghz_scheme() -> MeasurementScheme:
    xy = (PlaneObservable("XY", 0.0), PlaneObservable("XY", np.pi / 2))
    last = (PlaneObservable("XY", -np.pi / 4), PlaneObservable("XY", np.pi / 4))
    return MeasurementScheme((xy, xy, xy, last))


def plane_correlation_tensor(state: StateVector, axes: str) -> np.ndarray:
    """<P_p1 (x) ... (x) P_pn> for every choice p_i in the two plane axes."""
    n = state.n_qubits
    ops = np.array([[PAULI[axes[0]], PAULI[axes[1]]]] * n)
    return _table_from_ops(state.amplitudes, ops, n)


def _contract(poly: BellPolynomial, tensor: np.ndarray, u: np.ndarray) -> np.ndarray:
    """poly value from a plane correlation tensor.

    ``u`` has shape (..., n, 2 settings, 2 axes) holding (cos, sin) of each
    angle; leading axes are batch axes.
    """
    n = poly.n
    batch = u.shape[:-3]
    r = np.broadcast_to(poly.signs, batch + poly.signs.shape)
    nb = len(batch)
    for i in range(n):
        r = _contract_axis(r, u[..., i, :, :], nb + i)
    return poly.constant + np.sum(r * tensor, axis=tuple(range(nb, nb + n)))


def _contract_axis(r: np.ndarray, u: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(r, axis, -1)  # (..., rest, k)
    extra = moved.ndim - u.ndim + 1  # axes between batch and k
    uu = u.reshape(u.shape[:-2] + (1,) * extra + u.shape[-2:])  # (..., 1.., k, a)
    out = np.sum(moved[..., :, None] * uu, axis=-2)  # (..., rest, a)
    return np.moveaxis(out, -1, axis)


def _unit(angles: np.ndarray) -> np.ndarray:
    a = np.asarray(angles)
    return np.stack([np.cos(a), np.sin(a)], axis=-1)


def maximize_violation(
    poly: BellPolynomial,
    state: StateVector,
    plane: str = "xy",
    symmetric: bool = True,
    grid: int = 32,
    restarts: int = 5,
    xatol: float = 1e-10,
) -> tuple[MeasurementScheme, float]:
    """Largest |poly| over single-plane schemes in ``plane``.

    A deterministic grid over one shared angle pair seeds Nelder-Mead
    refinement from the ``restarts`` best points; with ``symmetric=False``
    the refinement runs over all 2n angles. Returns the best scheme and
    the magnitude of the polynomial there.
    """
    n = state.n_qubits
    if poly.n != n:
        raise ValueError(f"polynomial has {poly.n} parties, state has {n} qubits")
    axes = _axes(plane)
    tensor = plane_correlation_tensor(state, axes)

    def value(angles: np.ndarray) -> float:
        u = _unit(np.resize(angles, 2 * n).reshape(n, 2))
        return abs(float(_contract(poly, tensor, u)))

    ticks = np.linspace(-np.pi, np.pi, grid, endpoint=False)
    a, b = np.meshgrid(ticks, ticks, indexing="ij")
    pairs = np.stack([a.ravel(), b.ravel()], axis=-1)  # (G, 2)
    u = np.broadcast_to(_unit(pairs)[:, None, :, :], (len(pairs), n, 2, 2))
    scores = np.abs(_contract(poly, tensor, u))
    order = np.lexsort((pairs[:, 1], pairs[:, 0], -np.round(scores, 12)))
    best_x, best_v = None, -np.inf
    for idx in order[:restarts]:
        x0 = pairs[idx] if symmetric else np.tile(pairs[idx], n)
        res = minimize(
            lambda x: -value(x),
            x0,
            method="Nelder-Mead",
            options={"xatol": xatol, "fatol": 1e-14, "maxiter": 4000 * len(x0)},
        )
        v = value(res.x)
        if v > best_v + 1e-13:
            best_x, best_v = res.x, v
    angles = np.resize(best_x, 2 * n)
    return MeasurementScheme.from_angles([axes] * n, angles), float(best_v)
