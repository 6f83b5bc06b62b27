import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isentropes import kernels, maps, oracles
from isentropes.lap_entropy import (
    Address,
    InternalConsistencyError,
    MinMaxState,
    MinMaxSymbol,
    Polarity,
    SymbolTable,
    Termination,
    bad_symbols,
    entropy,
    lap_numbers,
    log_lap_numbers,
    minmax_sequences,
    recursion_step,
)

M, m = Polarity.MAX, Polarity.MIN


def sym(pol, text):
    return MinMaxSymbol(pol, Address(text[0], int(text[1:])))


# --- min-max sequences --------------------------------------------------------

def test_full_tent_symbols():
    (omega,) = minmax_sequences(maps.tent(2), 5)
    assert omega == [sym(M, "I2")] + [sym(m, "I1")] * 4


def test_contracting_tent_symbols():
    (omega,) = minmax_sequences(maps.tent(0.8), 6)
    assert omega == [sym(M, "I1")] * 6


def test_second_critical_point_starts_as_minimum():
    for f in (maps.cubic(3.0, 0.2), maps.quartic(3.5, 3.0)):
        seqs = minmax_sequences(f, 1)
        assert seqs[0][0].polarity is M
        assert seqs[1][0].polarity is m


def test_negative_shape_swaps_first_polarities():
    seqs = minmax_sequences(maps.cubic(-3.0, 0.2), 1)
    assert [s[0].polarity for s in seqs] == [m, M]


def test_chebyshev_symbols_land_on_boundary_laps():
    # 4x^3 - 3x: c1 = -1/2 -> 1 (max in I3), c2 = 1/2 -> -1 (min in I1)
    seqs = minmax_sequences(maps.cubic(4, 0), 2)
    assert seqs[0][0] == sym(M, "I3")
    assert seqs[1][0] == sym(m, "I1")


def test_address_rank_round_trip():
    for r in range(9):
        assert Address.from_rank(r).rank == r
    assert str(Address.from_rank(3)) == "C2"


# --- bad symbols ----------------------------------------------------------------

def test_bad_symbols_unimodal():
    assert bad_symbols(1, 1) == {sym(M, "I1"), sym(M, "C1"), sym(m, "C1"), sym(m, "I2")}
    assert sym(M, "I2") not in bad_symbols(1, 1)


def test_bad_symbols_bimodal_first_line():
    assert bad_symbols(1, 2) == {
        sym(M, "I1"), sym(M, "C1"), sym(m, "C1"), sym(m, "I2"), sym(m, "C2"), sym(m, "I3"),
    }


def test_bad_symbols_index_checked():
    with pytest.raises(ValueError):
        bad_symbols(0, 2)
    with pytest.raises(ValueError):
        bad_symbols(3, 2)


# --- the exact recursion --------------------------------------------------------

def _state(f, n):
    state = MinMaxState.start(minmax_sequences(f, n))
    for step in range(1, n + 1):
        recursion_step(state, step)
    return state


def test_full_tent_first_step():
    state = _state(maps.tent(2), 1)
    assert state.bad_steps == [[[]]]
    assert state.big_s == [0]
    assert state.s_history == [[1, 2]]
    assert state.lap_numbers == [2]


def test_full_tent_third_step():
    state = _state(maps.tent(2), 3)
    assert state.s_totals == [1, 2, 4, 8]
    assert state.lap_numbers == [2, 4, 8]


def test_contracting_tent_second_step():
    state = _state(maps.tent(0.8), 2)
    assert state.bad_steps == [[[0], [0]]]
    assert state.big_s == [2]
    assert state.s_history == [[1, 0, 0]]
    assert state.lap_numbers == [2, 2]


def test_recursion_step_order_enforced():
    state = MinMaxState.start(minmax_sequences(maps.tent(2), 3))
    with pytest.raises(ValueError):
        recursion_step(state, 2)


def test_inconsistent_symbols_raise():
    # no bimodal map has c_2 pinned on c_1 while c_1 sits at a minimum in I1
    bogus = MinMaxState.start([[sym(m, "I1")] * 2, [sym(m, "C1")] * 2])
    recursion_step(bogus, 1)
    with pytest.raises(InternalConsistencyError):
        recursion_step(bogus, 2)


# lap counts of f^1..f^10 from the brute-force oracle, frozen
FROZEN_LAPS = {
    ("quartic", (3.9, 3.2)): [4, 12, 32, 78, 180, 400, 884, 1940, 4238, 9238],
    ("cubic", (3.0, 0.3)): [3, 7, 13, 23, 39, 65, 105, 167, 263, 411],
    ("cubic", (-3.0, 0.2)): [3, 7, 15, 29, 53, 93, 159, 265, 433, 695],
    ("cubic", (2.0, -0.5)): [3, 7, 11, 15, 19, 23, 27, 31, 35, 39],
    ("quartic", (1.5, 3.9)): [2, 4, 8, 14, 22, 32, 44, 58, 74, 92],
}


@pytest.mark.parametrize("key", sorted(FROZEN_LAPS))
def test_frozen_lap_counts(key):
    family, params = key
    assert lap_numbers(maps.make_map(family, *params), 10) == FROZEN_LAPS[key]


def test_known_lap_growth():
    assert lap_numbers(maps.tent(2), 6) == [2 ** n for n in range(1, 7)]
    assert lap_numbers(maps.tent(0.8), 6) == [2] * 6
    assert lap_numbers(maps.cubic(4, 0), 6) == [3 ** n for n in range(1, 7)]
    assert lap_numbers(maps.cubic(-4, 0), 6) == [3 ** n for n in range(1, 7)]
    assert lap_numbers(maps.quartic(4, 4), 5) == [4 ** n for n in range(1, 6)]
    assert lap_numbers(maps.quartic(0, 3), 4) == [1] * 4


# --- kernels -------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(kernels.backends()))
def test_float_kernel_matches_exact(name):
    impl = kernels.backends()[name]
    for f in (maps.quartic(3.9, 3.2), maps.cubic(-3.0, 0.2), maps.tent(1.7)):
        exact = lap_numbers(f, 40)
        logs = log_lap_numbers(f, 40, backend=impl)
        assert np.allclose(logs[1:], np.log(exact), rtol=0, atol=1e-12)


def test_backends_agree_on_long_runs():
    found = kernels.backends()
    if len(found) < 2:
        pytest.skip("compiled backend not built")
    for f in (maps.quartic(4, 4), maps.cubic(3.3, 0.2), maps.logistic(3.7)):
        a = log_lap_numbers(f, 1500, backend=found["python"])
        b = log_lap_numbers(f, 1500, backend=found["cython"])
        assert np.allclose(a, b, rtol=1e-12, atol=1e-9)


def test_rescaling_keeps_huge_lap_numbers_finite():
    logs = log_lap_numbers(maps.quartic(4, 4), 1200)
    assert logs[-1] == pytest.approx(1200 * math.log(4), rel=1e-12)


# --- entropy ---------------------------------------------------------------------

def test_full_tent_plain_procedure_stops_at_two():
    est = entropy(maps.tent(2), estimator="mean", n_min=2)
    assert est.iterations == 2
    assert est.value == pytest.approx(math.log(2), abs=1e-15)
    assert est.termination is Termination.CONVERGED


def test_contracting_tent_plain_procedure():
    # with l = 2 for every n the stop test reads log 2 / (n (n-1)) < 1e-4
    est = entropy(maps.tent(0.8), estimator="mean", n_min=2)
    n = math.ceil(0.5 + math.sqrt(0.25 + math.log(2) / 1e-4))
    assert est.iterations == n == 84
    assert est.value == pytest.approx(math.log(2) / 84, rel=1e-12)


def test_default_estimator_removes_prefactor_bias():
    for a in (1.1, 1.3, 1.7, 2.0):
        est = entropy(maps.tent(a), epsilon=1e-5, n_max=5000)
        assert est.converged
        assert est.value == pytest.approx(math.log(a), abs=1e-4)


def test_full_quartic_and_chebyshev():
    assert entropy(maps.quartic(4, 4)).value == pytest.approx(math.log(4), abs=1e-3)
    assert entropy(maps.cubic(4, 0)).value == pytest.approx(math.log(3), abs=1e-3)
    assert entropy(maps.cubic(-4, 0)).value == pytest.approx(math.log(3), abs=1e-3)


def test_max_iterations_reported():
    est = entropy(maps.logistic(3.8), epsilon=1e-12, n_max=20)
    assert est.termination is Termination.MAX_ITERATIONS
    assert est.iterations == 20
    assert est.last_delta >= 1e-12


def test_monotone_map_has_zero_entropy():
    est = entropy(maps.quartic(0, 2))
    assert est.value == 0.0 and est.converged


@pytest.mark.parametrize("kw", [{"epsilon": 0}, {"n_max": 1}, {"estimator": "median"}])
def test_entropy_argument_checks(kw):
    with pytest.raises(ValueError):
        entropy(maps.tent(2), **kw)


def test_symbol_table_extends_incrementally():
    table = SymbolTable(maps.quartic(3.9, 3.2))
    first = table.bad_table(10)
    more = table.bad_table(30)
    assert np.array_equal(more[:10], first)


# --- properties ---------------------------------------------------------------------

cubic_args = st.tuples(st.floats(1.0 + 1e-3, 4.0), st.floats(-1, 1), st.booleans())


def _cubic(alpha, frac, negative):
    if negative:
        alpha = -alpha
    return maps.cubic(alpha, frac * maps.cubic_bound(alpha) * (1 - 1e-9))


@settings(max_examples=60, deadline=None)
@given(cubic_args)
def test_recursion_invariants_cubic(args):
    state = _state(_cubic(*args), 25)
    for n, laps in enumerate(state.lap_numbers, start=1):
        assert laps >= 1
        if n > 1:
            assert laps >= state.lap_numbers[n - 2]
    assert all(s >= 0 for h in state.s_history for s in h)
    assert all(v % 2 == 0 and v >= 0 for v in state.big_s)


@settings(max_examples=40, deadline=None)
@given(cubic_args)
def test_recursion_matches_brute_force_cubic(args):
    f = _cubic(*args)
    assert lap_numbers(f, 8) == [d.lap_count for d in oracles.lap_decompositions(f, 8)]


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 4), st.floats(0, 4))
def test_recursion_matches_brute_force_quartic(lam, mu):
    f = maps.quartic(lam, mu)
    assert lap_numbers(f, 8) == [d.lap_count for d in oracles.lap_decompositions(f, 8)]


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 4), st.floats(0, 4))
def test_entropy_bounded_by_modality(lam, mu):
    f = maps.quartic(lam, mu)
    est = entropy(f)
    assert -1e-9 <= est.value <= math.log(f.modality + 1) + 1e-9


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 4), st.floats(0, 4))
def test_entropy_symmetric_in_quartic_factors(lam, mu):
    h1 = entropy(maps.quartic(lam, mu)).value
    h2 = entropy(maps.quartic(mu, lam)).value
    assert abs(h1 - h2) <= 2e-3
