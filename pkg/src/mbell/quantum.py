"""Dense N-qubit pure states, Pauli strings and expectation values.

Basis convention: qubit 1 is the most significant bit, so the ket
|j1 j2 j3 j4> sits at index j1*8 + j2*4 + j3*2 + j4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
IMAG_TOL = 1e-10
SUPPORTED_N = (4, 6)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_ORDER = "IXYZ"


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.n_qubits:
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, got {amps.size}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def amplitude(self, bits: str | int) -> complex:
        """Amplitude of a basis ket given as an index or a bit string like '0101'."""
        index = int(bits, 2) if isinstance(bits, str) else int(bits)
        return complex(self.amplitudes[index])

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def permute_qubits(self, order: Sequence[int]) -> "StateVector":
        """Relabel qubits: new qubit i is old qubit order[i] (0-based)."""
        return StateVector(self.n_qubits, np.transpose(self.tensor(), order).reshape(-1))


@dataclass(frozen=True)
class PauliString:
    letters: str
    coefficient: complex = 1.0

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or any(c not in PAULI for c in letters):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def matrix(self) -> np.ndarray:
        return self.coefficient * reduce(np.kron, (PAULI[c] for c in self.letters))


@dataclass(frozen=True)
class Observable:
    """Hermitian operator stored as a real-weighted sum of Pauli strings."""

    terms: tuple[PauliString, ...]
    n_qubits: int = field(default=0)

    def __post_init__(self):
        terms = tuple(self.terms)
        sizes = {t.n_qubits for t in terms}
        if len(sizes) > 1:
            raise ValueError(f"mixed qubit counts in observable terms: {sorted(sizes)}")
        n = sizes.pop() if sizes else self.n_qubits
        if n <= 0:
            raise ValueError("an empty observable needs an explicit n_qubits")
        for t in terms:
            if abs(complex(t.coefficient).imag) > NORM_TOL:
                raise ValueError(f"non-Hermitian term {t.letters} with coefficient {t.coefficient}")
        clean = tuple(PauliString(t.letters, float(complex(t.coefficient).real)) for t in terms)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def from_dict(cls, coefficients: dict[str, float], n_qubits: int | None = None) -> "Observable":
        terms = tuple(PauliString(k, v) for k, v in coefficients.items())
        return cls(terms, n_qubits or (len(next(iter(coefficients))) if coefficients else 0))

    @cached_property
    def matrix(self) -> np.ndarray:
        dim = 2**self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            out += t.matrix()
        return out

    def as_dict(self, tol: float = 0.0) -> dict[str, float]:
        """Coefficients keyed by letter string, summed over repeats, dropping |c| <= tol."""
        acc: dict[str, float] = {}
        for t in self.terms:
            acc[t.letters] = acc.get(t.letters, 0.0) + float(np.real(t.coefficient))
        return {k: v for k, v in acc.items() if abs(v) > tol}

    def coefficient(self, letters: str) -> float:
        return self.as_dict().get(letters.upper(), 0.0)


def pauli_decompose(matrix: np.ndarray, tol: float = 1e-14) -> Observable:
    """Pauli-basis coordinates of a Hermitian matrix via Tr(P M) / 2^n."""
    matrix = np.asarray(matrix, dtype=complex)
    n = int(round(np.log2(matrix.shape[0])))
    coeffs = {}
    for letters in itertools.product(PAULI_ORDER, repeat=n):
        word = "".join(letters)
        c = np.trace(PauliString(word).matrix() @ matrix) / 2**n
        if abs(c.imag) > IMAG_TOL:
            raise ValueError("matrix is not Hermitian")
        if abs(c.real) > tol:
            coeffs[word] = c.real
    return Observable.from_dict(coeffs, n) if coeffs else Observable((), n)


def _check_n(n: int):
    if n not in SUPPORTED_N:
        raise ValueError(f"unsupported qubit count {n}; expected one of {SUPPORTED_N}")


def _check_alpha(alpha: float):
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")


def basis_index(bits: Iterable[int]) -> int:
    return int("".join(str(int(b)) for b in bits), 2)


def make_ghz(n: int) -> StateVector:
    _check_n(n)
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return StateVector(n, amps)


def epr_product(pairs: Sequence[tuple[int, int]], n: int) -> np.ndarray:
    """Normalized product of (|01> + |10>)/sqrt(2) over disjoint qubit pairs (0-based)."""
    amps = np.zeros(2**n, dtype=complex)
    for choice in itertools.product((0, 1), repeat=len(pairs)):
        bits = [0] * n
        for (a, b), x in zip(pairs, choice):
            bits[a], bits[b] = x, 1 - x
        amps[basis_index(bits)] += 1.0
    return amps / np.sqrt(2) ** len(pairs)


def perfect_matchings(items: Sequence[int]):
    """Yield every perfect matching of ``items`` as a list of pairs."""
    if not items:
        yield []
        return
    first, rest = items[0], list(items[1:])
    for i, partner in enumerate(rest):
        for m in perfect_matchings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + m


def make_psi_in(alpha: float) -> StateVector:
    """alpha |GHZ> + sqrt(1 - alpha^2) |EPR>_AB |EPR>_CD."""
    _check_alpha(alpha)
    ghz = make_ghz(4).amplitudes
    epr = epr_product([(0, 1), (2, 3)], 4)
    return StateVector(4, alpha * ghz + np.sqrt(1 - alpha**2) * epr)


def matching_sum(n: int) -> np.ndarray:
    """Unnormalized sum of EPR products over all perfect matchings of n qubits."""
    return sum(epr_product(m, n) for m in perfect_matchings(list(range(n))))


def phi_in_unnormalized(alpha: float) -> np.ndarray:
    """The four-qubit symmetric state with the prefactor sqrt((1 - alpha^2)/3) taken literally.

    Its squared norm is 2 - alpha^2, since the three pairing products
    overlap pairwise with inner product 1/2.
    """
    _check_alpha(alpha)
    return alpha * make_ghz(4).amplitudes + np.sqrt((1 - alpha**2) / 3) * matching_sum(4)


def _symmetric_state(n: int, alpha: float) -> StateVector:
    branch = matching_sum(n)
    branch = branch / np.linalg.norm(branch)
    amps = alpha * make_ghz(n).amplitudes + np.sqrt(1 - alpha**2) * branch
    return StateVector(n, amps / np.linalg.norm(amps))


def make_phi_in(alpha: float, convention: str = "weighted") -> StateVector:
    """Permutation-symmetric four-qubit state: GHZ plus all three EPR pairings.

    ``convention="weighted"`` (default) gives the EPR branch total weight
    1 - alpha^2, which is the normalization under which the closed-form
    payoffs for this family hold. ``convention="literal"`` renormalizes
    :func:`phi_in_unnormalized` instead, shifting weight toward the EPR
    branch for 0 < alpha < 1.
    """
    _check_alpha(alpha)
    if convention == "weighted":
        return _symmetric_state(4, alpha)
    if convention == "literal":
        amps = phi_in_unnormalized(alpha)
        return StateVector(4, amps / np.linalg.norm(amps))
    raise ValueError(f"unknown convention {convention!r}")


def make_six_in(alpha: float) -> StateVector:
    """alpha |GHZ_6> + sqrt(1 - alpha^2) * (normalized sum over the 15 EPR matchings)."""
    _check_alpha(alpha)
    return _symmetric_state(6, alpha)


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    return u.shape == (2, 2) and np.linalg.norm(u.conj().T @ u - np.eye(2)) < tol


def apply_local(state: StateVector, unitaries: Sequence[np.ndarray]) -> StateVector:
    """Apply U_1 (x) ... (x) U_n one qubit at a time."""
    if len(unitaries) != state.n_qubits:
        raise ValueError(f"need {state.n_qubits} unitaries, got {len(unitaries)}")
    psi = state.tensor()
    for k, u in enumerate(unitaries):
        u = np.asarray(u, dtype=complex)
        if not is_unitary(u):
            raise ValueError(f"operator on qubit {k + 1} is not unitary")
        psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [k])), 0, k)
    return StateVector(state.n_qubits, psi.reshape(-1))


def apply_local_operators(amplitudes: np.ndarray, ops: Sequence[np.ndarray]) -> np.ndarray:
    """Unchecked (op_1 (x) ... (x) op_n) |amplitudes> for arbitrary 2x2 operators."""
    n = len(ops)
    psi = np.asarray(amplitudes).reshape((2,) * n)
    for k, op in enumerate(ops):
        psi = np.moveaxis(np.tensordot(op, psi, axes=([1], [k])), 0, k)
    return psi.reshape(-1)


def expectation(state: StateVector, obs: Observable) -> float:
    if obs.n_qubits != state.n_qubits:
        raise ValueError(f"observable acts on {obs.n_qubits} qubits, state has {state.n_qubits}")
    psi = state.amplitudes
    value = np.vdot(psi, obs.matrix @ psi)
    if abs(value.imag) > IMAG_TOL:
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}; observable not Hermitian")
    return float(value.real)
