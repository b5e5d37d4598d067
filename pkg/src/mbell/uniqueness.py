"""Which four-player symmetric binary-choice games map onto single-plane Bell polynomials.

For a payoff observable sum_j c_j P_j1 (x) ... (x) P_j4 and a common strategy
M(theta, beta, -beta), each transformed projector M^dag P_j M is I/2 plus a
Pauli vector. Once the strategy kills one Pauli axis, the remaining
observable is a single-plane Bell polynomial exactly when every Pauli string
mixing identities with non-identities cancels. Each such string gives one
homogeneous linear equation in the 16 coefficients c_j; the solutions are
the nullspace of that system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from mbell.game import _unitary, pauli_coordinates

AXES = "ZXY"
N_PLAYERS = 4
ELIM_TOL = 1e-12

# Coordinates of M^dag P_j M are ordered (I, X, Y, Z).
_COORD = {"I": 0, "X": 1, "Y": 2, "Z": 3}


@dataclass(frozen=True)
class EliminationChoice:
    eliminated_axis: str
    theta: float
    beta: float

    def __post_init__(self):
        axis = self.eliminated_axis.upper()
        object.__setattr__(self, "eliminated_axis", axis)
        if axis == "Z":
            residual = np.cos(self.theta)
            rule = "theta in {pi/2, 3pi/2}"
        elif axis == "X":
            residual = np.sin(2 * self.beta)
            rule = "beta in {0, pi/2, pi, 3pi/2}"
        elif axis == "Y":
            residual = np.cos(2 * self.beta)
            rule = "beta in {pi/4, 3pi/4, 5pi/4, 7pi/4}"
        else:
            raise ValueError(f"eliminated axis must be one of Z, X, Y, got {self.eliminated_axis!r}")
        if abs(residual) > ELIM_TOL:
            raise ValueError(
                f"({self.theta!r}, {self.beta!r}) does not eliminate {axis}; need {rule}"
            )

    @property
    def plane(self) -> str:
        return "".join(a for a in "XYZ" if a != self.eliminated_axis)

    def unitary(self) -> np.ndarray:
        return _unitary(self.theta, self.beta, -self.beta)

    def transformed_projectors(self) -> np.ndarray:
        """(I, X, Y, Z) coordinates of M^dag P_j M, shape (2 outcomes, 4)."""
        m = self.unitary()
        out = np.array(
            [np.real(pauli_coordinates(m.conj().T @ np.diag(p) @ m)) for p in ([1, 0], [0, 1])]
        )
        return out


def admissible_choices(thetas=(np.pi / 3, 0.9, 2.2), betas=(np.pi / 8, -0.7, 1.3)) -> list[EliminationChoice]:
    """Every listed eliminating parameter paired with a few free-parameter samples."""
    choices = [EliminationChoice("Z", t, b) for t in (np.pi / 2, 3 * np.pi / 2) for b in betas]
    choices += [EliminationChoice("X", t, b) for b in (0, np.pi / 2, np.pi, 3 * np.pi / 2) for t in thetas]
    choices += [
        EliminationChoice("Y", t, b)
        for b in (np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4, 7 * np.pi / 4)
        for t in thetas
    ]
    return choices


@dataclass
class ConstraintSystem:
    matrix: np.ndarray  # rows x 16, column b <-> c_{j1 j2 j3 j4} with b = int('j1j2j3j4', 2)
    labels: list[str]
    choice: EliminationChoice

    @property
    def cancellation_rows(self) -> np.ndarray:
        return self.matrix[[i for i, l in enumerate(self.labels) if l != "sum"]]

    @property
    def has_sum_condition(self) -> bool:
        return "sum" in self.labels

    def rank(self, with_sum_condition: bool = False, tol: float = 1e-10) -> int:
        rows = self.matrix if with_sum_condition else self.cancellation_rows
        return int(np.linalg.matrix_rank(rows, tol=tol))


def build_constraints(choice: EliminationChoice, tol: float = 1e-14) -> ConstraintSystem:
    """One row per Pauli string over {I} + plane with 1 to 3 identity factors.

    Row entry for c_j is the coefficient of that string in
    (x)_k M^dag P_{j_k} M. Strings whose coefficient vanishes identically
    (a plane axis with zero weight at these parameters) are skipped. X- and
    Y-eliminations also carry the supplementary row sum_j c_j = 0, labelled
    ``"sum"``.
    """
    coords = choice.transformed_projectors()
    leftover = np.abs(coords[:, _COORD[choice.eliminated_axis]]).max()
    if leftover > 1e-12:
        raise ValueError(f"{choice.eliminated_axis} coefficient {leftover:.3e} was not eliminated")
    outcomes = list(itertools.product((0, 1), repeat=N_PLAYERS))
    rows, labels = [], []
    for word in itertools.product("I" + choice.plane, repeat=N_PLAYERS):
        n_id = word.count("I")
        if n_id == 0 or n_id == N_PLAYERS:
            continue
        row = np.array([np.prod([coords[j, _COORD[p]] for j, p in zip(js, word)]) for js in outcomes])
        if np.max(np.abs(row)) > tol:
            rows.append(row)
            labels.append("".join(word))
    if choice.eliminated_axis in "XY":
        rows.append(np.ones(2**N_PLAYERS))
        labels.append("sum")
    return ConstraintSystem(np.array(rows), labels, choice)


def solve_family(sys: ConstraintSystem, with_sum_condition: bool = False) -> np.ndarray:
    """Orthonormal nullspace basis (columns are 16-vectors) via SVD."""
    rows = sys.matrix if with_sum_condition else sys.cancellation_rows
    return null_space(rows, rcond=1e-10)


def parity_patterns() -> tuple[np.ndarray, np.ndarray]:
    """Indicators of odd-weight (the a-outcomes) and even-weight (the b-outcomes) strings."""
    w = np.array([bin(b).count("1") for b in range(2**N_PLAYERS)])
    return (w % 2 == 1).astype(float), (w % 2 == 0).astype(float)


def family_residual(basis: np.ndarray) -> float:
    """Largest component of the basis outside span{odd, even}; zero when they coincide."""
    odd, even = parity_patterns()
    q = np.column_stack([odd / np.linalg.norm(odd), even / np.linalg.norm(even)])
    return float(np.max(np.abs(basis - q @ (q.T @ basis)))) if basis.size else 0.0


def family_parameters(c: np.ndarray) -> tuple[float, float, float]:
    """Least-squares (a, b) for c = a * odd + b * even, and the residual norm."""
    odd, even = parity_patterns()
    c = np.asarray(c, dtype=float)
    a = float(c @ odd / odd.sum())
    b = float(c @ even / even.sum())
    return a, b, float(np.linalg.norm(c - a * odd - b * even))


def classify_game(c: np.ndarray, tol: float = 1e-10) -> str:
    """Label a 16-coefficient payoff table.

    Outside the two-parameter family -> Other. Inside it, both a and b
    strictly positive (negative) -> TrivialAllWin (TrivialAllLose).
    Otherwise a > b is Minority-type and a < b anti-Minority-type, so the
    boundary cases a > 0 = b and a = 0 < b count as Minority and
    anti-Minority respectively.
    """
    a, b, residual = family_parameters(c)
    if residual > tol:
        return "Other"
    if a > tol and b > tol:
        return "TrivialAllWin"
    if a < -tol and b < -tol:
        return "TrivialAllLose"
    if a - b > tol:
        return "Minority"
    if b - a > tol:
        return "AntiMinority"
    return "Other"
