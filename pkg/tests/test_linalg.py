from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from infrared import linalg

small = st.integers(-3, 3)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(st.integers(1, 4).flatmap(lambda c: st.tuples(st.just(c), matrices(3, c))))
def test_nullspace_vectors_are_killed(case):
    n, A = case
    basis = linalg.nullspace(A, n)
    assert len(basis) == n - linalg.rank(A, n)
    for v in basis:
        assert all(x == 0 for x in linalg.apply(A, v))


def test_simplex_small_lp():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    opt, x = linalg.simplex_max([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert opt == Fraction(14, 5)
    assert x == [Fraction(8, 5), Fraction(6, 5)]


def test_simplex_unbounded():
    with pytest.raises(linalg.Unbounded):
        linalg.simplex_max([1, 0], [[0, 1]], [1])


def test_strict_solution_examples():
    assert linalg.strict_solution([[1, 0], [0, 1]], 2) is not None
    assert linalg.strict_solution([[1, 0], [-1, 0]], 2) is None
    implicit, _ = linalg.implicit_equalities([[1, 0], [-1, 0], [0, 1]], 2)
    assert implicit == {0, 1}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda c: st.tuples(st.just(c), matrices(4, c))))
def test_strict_solution_against_float_lp(case):
    scipy_opt = pytest.importorskip("scipy.optimize")
    n, G = case
    z = linalg.strict_solution(G, n)
    # float oracle: max t subject to G z >= t, t <= 1, z free
    res = scipy_opt.linprog(
        c=[0] * n + [-1],
        A_ub=[[-g for g in row] + [1] for row in G],
        b_ub=[0] * len(G),
        bounds=[(None, None)] * n + [(None, 1)],
    )
    positive = res.status == 0 and -res.fun > 1e-9
    assert (z is not None) == positive
    if z is not None:
        assert all(v > 0 for v in linalg.apply(G, z))
