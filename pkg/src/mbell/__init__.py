"""Quantum Minority game payoffs and MABK Bell violations at desk scale."""

from mbell.quantum import (
    Observable,
    PauliString,
    StateVector,
    apply_local,
    expectation,
    make_ghz,
    make_phi_in,
    make_psi_in,
    make_six_in,
)
from mbell.game import (
    M_HIGH,
    M_LOW,
    SIX_HIGH,
    SIX_LOW,
    PayoffSpec,
    Strategy,
    SymmetricProfile,
    anti_minority_payoff_spec,
    closed_form_payoff,
    expected_payoff,
    minority_payoff_spec,
    payoff_observable,
    projector_transform,
    strategy_matrix,
    transformed_payoff_observable,
)
from mbell.bell import (
    BellPolynomial,
    MeasurementScheme,
    PlaneObservable,
    asymmetric_ghz_scheme,
    correlation,
    evaluate,
    lhv_bound,
    mabk_polynomial,
    maximize_violation,
    payoff_polynomial,
    werner_scheme,
)
from mbell.optimize import (
    FulcrumResult,
    OptimizationResult,
    find_fulcrum,
    optimize_symmetric_strategy,
    payoff_sweep,
)
from mbell.uniqueness import (
    ConstraintSystem,
    EliminationChoice,
    build_constraints,
    classify_game,
    solve_family,
)

__version__ = "0.1.0"
