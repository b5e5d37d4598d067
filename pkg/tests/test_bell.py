import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pytest import approx

from mbell.bell import (
    BellPolynomial,
    MeasurementScheme,
    PlaneObservable,
    asymmetric_ghz_scheme,
    axis_scheme,
    correlation,
    correlation_table,
    evaluate,
    lhv_bound,
    mabk_polynomial,
    maximize_violation,
    mermin_klyshko,
    payoff_polynomial,
    werner_scheme,
)
from mbell.quantum import PAULI, StateVector, make_ghz, make_psi_in, make_six_in

from conftest import dense_kron

ZERO4 = StateVector(4, np.eye(16)[0])


def brute_evaluate(poly, state, scheme):
    """Oracle: build every tensor-product operator densely."""
    total = poly.constant
    for k in itertools.product((0, 1), repeat=poly.n):
        op = dense_kron([scheme.settings[i][k[i]].matrix for i in range(poly.n)])
        total += poly.signs[k] * np.vdot(state.amplitudes, op @ state.amplitudes).real
    return total


def brute_lhv(poly):
    """Oracle: loop over every deterministic +-1 assignment."""
    best = 0.0
    for a in itertools.product((1, -1), repeat=2 * poly.n):
        value = poly.constant
        for k in itertools.product((0, 1), repeat=poly.n):
            value += poly.signs[k] * np.prod([a[2 * i + k[i]] for i in range(poly.n)])
        best = max(best, abs(value))
    return best


@settings(max_examples=100, deadline=None)
@given(axes=st.sampled_from(["XY", "ZY", "XZ", "YZ", "ZX", "YX"]), angle=st.floats(-10, 10))
def test_plane_observable_is_dichotomic(axes, angle):
    m = PlaneObservable(axes, angle).matrix
    assert np.allclose(m, m.conj().T, atol=1e-12)
    assert abs(np.trace(m)) < 1e-12
    assert np.allclose(m @ m, np.eye(2), atol=1e-12)


def test_plane_observable_axis_order():
    assert np.allclose(PlaneObservable("ZY", 0).matrix, PAULI["Z"])
    assert np.allclose(PlaneObservable("ZY", np.pi / 2).matrix, PAULI["Y"])
    with pytest.raises(ValueError):
        PlaneObservable("XX", 0)


def test_scheme_rejects_mixed_planes():
    with pytest.raises(ValueError):
        MeasurementScheme(((PlaneObservable("XY", 0), PlaneObservable("ZY", 0)),))


@pytest.mark.parametrize(
    "state,letters,expected",
    [(make_ghz(4), "XXXX", 1.0), (make_psi_in(0.0), "YYZZ", -1.0), (ZERO4, "XXXX", 0.0)],
)
def test_correlation_examples(state, letters, expected):
    assert correlation(state, [PAULI[c] for c in letters]) == approx(expected, abs=1e-12)


def test_correlation_table_matches_dense():
    rng = np.random.default_rng(1)
    state = make_six_in(0.41)
    scheme = MeasurementScheme.from_angles(["XZ"] * 6, rng.uniform(-np.pi, np.pi, 12))
    table = correlation_table(state, scheme)
    for k in [(0,) * 6, (1,) * 6, (0, 1, 1, 0, 1, 0)]:
        ops = [scheme.settings[i][k[i]] for i in range(6)]
        assert table[k] == approx(correlation(state, ops), abs=1e-12)


def test_payoff_polynomial_coefficients():
    p = payoff_polynomial()
    assert p.constant == 4
    assert p.sign((1, 1, 1, 1)) == -1
    assert p.sign((2, 2, 2, 2)) == -1
    assert p.sign((1, 1, 1, 2)) == +1
    # the signs are those of -(A1 - A2)^(x)4
    for k in itertools.product((1, 2), repeat=4):
        assert p.sign(k) == -((-1) ** k.count(2))


def test_mabk4_coefficients():
    m = mabk_polynomial(4)
    assert m.sign((1, 1, 1, 1)) == -1
    assert m.sign((2, 2, 1, 1)) == +1
    assert len(m.terms()) == 16
    assert set(m.terms().values()) == {-1.0, 1.0}
    assert m.constant == 0


def test_mabk4_is_the_recursion():
    _, primed = mermin_klyshko(4)
    assert np.array_equal(4 * primed, mabk_polynomial(4).signs)


def test_mabk6_from_recursion():
    m = mabk_polynomial(6)
    assert m.constant == 0
    assert set(np.unique(m.signs)) == {-1.0, 1.0}
    with pytest.raises(ValueError):
        mabk_polynomial(5)


def test_lhv_bounds():
    assert lhv_bound(mabk_polynomial(4)) == 4.0
    assert lhv_bound(mabk_polynomial(6)) == 8.0
    single = BellPolynomial.from_terms(4, {"1111": 1.0})
    assert lhv_bound(single) == 1.0


def test_lhv_bound_payoff_polynomial_is_twenty():
    # 4 - prod(a1 - a2): each factor is 0 or +-2, so the extremum is 4 + 16
    assert lhv_bound(payoff_polynomial()) == 20.0


@pytest.mark.parametrize("poly", [mabk_polynomial(4), payoff_polynomial()])
def test_lhv_bound_against_loop(poly):
    assert lhv_bound(poly) == brute_lhv(poly)


def test_lhv_bound_random_polynomial_against_loop():
    rng = np.random.default_rng(2)
    poly = BellPolynomial(3, 0.5, rng.integers(-2, 3, size=(2, 2, 2)))
    assert lhv_bound(poly) == approx(brute_lhv(poly))


@pytest.mark.parametrize(
    "poly,state,scheme,expected",
    [
        (payoff_polynomial(), make_psi_in(1.0), axis_scheme(4, "xy"), 8.0),
        (payoff_polynomial(), make_psi_in(0.0), axis_scheme(4, "zy"), 4.0),
        (mabk_polynomial(4), make_ghz(4), werner_scheme(4, "xy"), -8 * np.sqrt(2)),
        (mabk_polynomial(4), make_ghz(4), asymmetric_ghz_scheme(), -8 * np.sqrt(2)),
        (mabk_polynomial(4), ZERO4, asymmetric_ghz_scheme(), 0.0),
    ],
)
def test_evaluate_examples(poly, state, scheme, expected):
    assert evaluate(poly, state, scheme) == approx(expected, abs=1e-9)
    assert brute_evaluate(poly, state, scheme) == approx(expected, abs=1e-9)


def test_evaluate_matches_dense_oracle_random():
    rng = np.random.default_rng(9)
    for _ in range(5):
        state = make_psi_in(rng.uniform())
        scheme = MeasurementScheme.from_angles(["ZY"] * 4, rng.uniform(-np.pi, np.pi, 8))
        for poly in (payoff_polynomial(), mabk_polynomial(4)):
            assert evaluate(poly, state, scheme) == approx(brute_evaluate(poly, state, scheme), abs=1e-12)


def test_evaluate_mismatch():
    with pytest.raises(ValueError):
        evaluate(mabk_polynomial(4), make_ghz(6), werner_scheme(4))


def test_werner_angles():
    s4 = werner_scheme(4, "xy")
    assert s4.angles()[:2] == approx([-0.19635, 1.37445], abs=1e-5)
    assert all(a.axes == "XY" for pair in s4.settings for a in pair)
    s6 = werner_scheme(6, "xy")
    assert s6.n == 6
    assert s6.angles()[:2] == approx([0.13090, 1.70170], abs=1e-5)
    zy = werner_scheme(4, "zy")
    assert zy.settings[0][0].axes == "ZY"
    assert np.allclose(zy.angles(), s4.angles())
    with pytest.raises(ValueError):
        werner_scheme(5)
    with pytest.raises(ValueError):
        werner_scheme(4, "ab")


def test_asymmetric_scheme_observer_four_is_dichotomic():
    for obs in asymmetric_ghz_scheme().settings[3]:
        assert np.allclose(obs.matrix @ obs.matrix, np.eye(2))
    a1, a2 = asymmetric_ghz_scheme().settings[3]
    assert np.allclose(a1.matrix, (PAULI["X"] - PAULI["Y"]) / np.sqrt(2))
    assert np.allclose(a2.matrix, (PAULI["X"] + PAULI["Y"]) / np.sqrt(2))


def test_maximize_violation_ghz():
    scheme, value = maximize_violation(mabk_polynomial(4), make_ghz(4), "xy")
    assert value == approx(8 * np.sqrt(2), abs=1e-6)
    assert abs(evaluate(mabk_polynomial(4), make_ghz(4), scheme)) == approx(value, abs=1e-12)


def test_maximize_violation_epr_matches_werner_zy():
    state = make_psi_in(0.0)
    _, value = maximize_violation(mabk_polynomial(4), state, "zy")
    direct = abs(evaluate(mabk_polynomial(4), state, werner_scheme(4, "zy")))
    assert value == approx(direct, abs=1e-6)


def test_payoff_polynomial_quantum_max_equals_lhv_bound():
    # the correlation part factorizes as (A1 - A2)^(x)4, so no state beats 4 + 16
    _, value = maximize_violation(payoff_polynomial(), make_psi_in(1.0), "xy")
    assert value == approx(lhv_bound(payoff_polynomial()), abs=1e-6)


def test_maximize_violation_deterministic():
    a = maximize_violation(mabk_polynomial(4), make_psi_in(0.6), "zy")
    b = maximize_violation(mabk_polynomial(4), make_psi_in(0.6), "zy")
    assert a[1] == b[1]
    assert np.array_equal(a[0].angles(), b[0].angles())


@pytest.mark.parametrize("plane", ["xy", "zy"])
@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.7, 0.9, 1.0])
def test_maximize_never_below_werner(plane, alpha):
    state = make_psi_in(alpha)
    _, value = maximize_violation(mabk_polynomial(4), state, plane)
    werner = abs(evaluate(mabk_polynomial(4), state, werner_scheme(4, plane)))
    assert value >= werner - 1e-9


def test_general_schemes_do_not_beat_symmetric_on_ghz():
    _, sym = maximize_violation(mabk_polynomial(4), make_ghz(4), "xy")
    scheme, full = maximize_violation(mabk_polynomial(4), make_ghz(4), "xy", symmetric=False)
    assert full == approx(sym, abs=1e-8)
    assert abs(evaluate(mabk_polynomial(4), make_ghz(4), scheme)) == approx(full, abs=1e-12)


def test_six_party_ghz_violation():
    poly = mabk_polynomial(6)
    werner = abs(evaluate(poly, make_ghz(6), werner_scheme(6, "xy")))
    assert werner == approx(8 * 2**2.5, abs=1e-9)
    _, best = maximize_violation(poly, make_ghz(6), "xy")
    assert best == approx(werner, abs=1e-6)
    assert best / lhv_bound(poly) == approx(4 * np.sqrt(2), abs=1e-6)


def test_payoff_equals_minus_mabk_on_axis_schemes():
    for alpha in np.linspace(0, 1, 11):
        state = make_psi_in(alpha)
        for plane in ("xy", "zy"):
            scheme = axis_scheme(4, plane)
            assert evaluate(payoff_polynomial(), state, scheme) == approx(
                -evaluate(mabk_polynomial(4), state, scheme), abs=1e-12
            )
