import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfinf.exact_linalg import (
    IntMatrix,
    LaurentMatrixF2,
    congruence_transform,
    rank_f2,
    rank_laurent,
    rank_z,
    smith_normal_form,
)

from oracles import f2_rank_by_span, invariant_factors, laurent_rank, leibniz_det


def matrices(max_dim=6, bound=20, square=False):
    @st.composite
    def build(draw):
        m = draw(st.integers(1, max_dim))
        n = m if square else draw(st.integers(1, max_dim))
        rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                             min_size=m, max_size=m))
        return IntMatrix.from_rows(rows, n)
    return build()


def random_unimodular(rng, n, steps=12):
    p = IntMatrix.identity(n).tolist()
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        for r in range(n):
            p[r][i] += c * p[r][j]
    if rng.random() < 0.5:
        p = [[-x for x in row] if k == 0 else row for k, row in enumerate(p)]
    return IntMatrix.from_rows(p, n)


def check_snf_contract(m):
    res = smith_normal_form(m)
    assert res.u @ m @ res.v == res.d
    assert res.u.is_unimodular() and res.v.is_unimodular()
    diag = [res.d[i, i] for i in range(min(m.rows, m.cols))]
    off = [res.d[i, j] for i in range(m.rows) for j in range(m.cols) if i != j]
    assert all(x == 0 for x in off)
    nonzero = [x for x in diag if x]
    assert all(x > 0 for x in nonzero)
    assert diag[:len(nonzero)] == nonzero
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    assert res.rank == len(nonzero)
    assert list(res.torsion_factors) == [x for x in nonzero if x > 1]
    return res


def test_basic_construction():
    m = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert m.shape == (2, 2)
    assert m[1, 0] == 3
    assert m.T.tolist() == [[1, 3], [2, 4]]
    assert (m @ IntMatrix.identity(2)) == m
    assert (m + m - m) == m
    assert IntMatrix.diag([2, 3]).is_diagonal()
    assert m.direct_sum(IntMatrix.diag([5])).tolist() == [[1, 2, 0], [3, 4, 0], [0, 0, 5]]
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_det_examples():
    assert IntMatrix.from_rows([[1, 2], [3, 4]]).det() == -2
    assert IntMatrix.from_rows([[0, 2], [2, 0]]).det() == -4
    assert IntMatrix.identity(5).det() == 1
    assert IntMatrix.from_rows([[2, 4], [1, 2]]).det() == 0


@settings(max_examples=150, deadline=None)
@given(matrices(max_dim=5, bound=9, square=True))
def test_det_matches_leibniz(m):
    assert m.det() == leibniz_det(m.tolist())


def test_snf_examples():
    res = smith_normal_form(IntMatrix.from_rows([[0, 2], [2, 0]]))
    assert res.d == IntMatrix.diag([2, 2])
    res = smith_normal_form(IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    assert res.d.diagonal() == [2, 6, 12]
    res = smith_normal_form(IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]]))
    assert res.rank == 1 and res.torsion_factors == ()
    res = smith_normal_form(IntMatrix.zeros(2, 3))
    assert res.rank == 0 and res.d.is_zero()


@settings(max_examples=120, deadline=None)
@given(matrices(max_dim=4, bound=12))
def test_snf_matches_determinantal_divisors(m):
    res = check_snf_contract(m)
    assert [x for x in res.d.diagonal() if x] == invariant_factors(m.tolist())


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_snf_contract_property(m):
    check_snf_contract(m)


@settings(max_examples=80, deadline=None)
@given(matrices(max_dim=5), st.integers(0, 10 ** 6))
def test_torsion_invariant_under_equivalence(m, seed):
    rng = random.Random(seed)
    p = random_unimodular(rng, m.rows)
    q = random_unimodular(rng, m.cols)
    a, b = smith_normal_form(m), smith_normal_form(p @ m @ q)
    assert a.d == b.d


def test_snf_is_deterministic():
    m = IntMatrix.from_rows([[4, 6, 0], [2, -2, 8], [0, 10, 14]])
    assert smith_normal_form(m) == smith_normal_form(m)


@settings(max_examples=150, deadline=None)
@given(matrices(max_dim=6, bound=3))
def test_rank_f2_matches_span(m):
    assert rank_f2(m) == f2_rank_by_span(m.tolist())


def test_rank_examples():
    m = IntMatrix.from_rows([[2, 0], [0, 2]])
    assert rank_z(m) == 2 and rank_f2(m) == 0
    assert rank_f2(IntMatrix.from_rows([[1, 1], [1, 1]])) == 1


def test_congruence_transform():
    h = IntMatrix.from_rows([[0, 1], [1, 0]])
    p = IntMatrix.from_rows([[1, 1], [1, 0]])
    assert congruence_transform(h, p) == IntMatrix.from_rows([[2, 1], [1, 0]])
    with pytest.raises(ValueError):
        congruence_transform(h, IntMatrix.diag([2, 1]))
    with pytest.raises(ValueError):
        congruence_transform(h, IntMatrix.identity(3))


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=4, bound=6, square=True), st.integers(0, 10 ** 6))
def test_congruence_preserves_determinant(m, seed):
    sym = m + m.T
    p = random_unimodular(random.Random(seed), m.rows)
    assert congruence_transform(sym, p).det() == sym.det()
    assert congruence_transform(sym, p).is_symmetric()


def test_int_matrix_round_trip():
    m = IntMatrix.from_rows([[1, -2, 3], [0, 5, 2 ** 70]])
    assert IntMatrix.from_dict(m.to_dict()) == m


def test_laurent_basics():
    u = LaurentMatrixF2.identity(2, 1)
    assert u[0, 0] == (1,)
    assert (u @ LaurentMatrixF2.identity(2, -1)) == LaurentMatrixF2.identity(2)
    assert (u + u) == LaurentMatrixF2.zeros(2, 2)
    assert LaurentMatrixF2.constant([[3, 2], [1, 0]]) == LaurentMatrixF2.from_sets([[[0], []], [[0], []]])
    with pytest.raises(ValueError):
        LaurentMatrixF2(1, 1, (((1, 1),),))


def test_rank_laurent_examples():
    assert rank_laurent(LaurentMatrixF2.identity(4)) == 4
    assert rank_laurent(LaurentMatrixF2.zeros(3, 3)) == 0
    # [[1, U], [U^-1, 1]] has determinant 1 + 1 = 0
    m = LaurentMatrixF2.from_sets([[[0], [1]], [[-1], [0]]])
    assert rank_laurent(m) == 1
    # [[1, U], [1, 1]] has determinant 1 + U != 0
    m = LaurentMatrixF2.from_sets([[[0], [1]], [[0], [0]]])
    assert rank_laurent(m) == 2
    # 1 + U is not a unit, but it is nonzero: rank over the fraction field
    m = LaurentMatrixF2.from_sets([[[0, 1]]])
    assert rank_laurent(m) == 1


def laurent_matrices():
    entry = st.sets(st.integers(-3, 3), max_size=3)

    @st.composite
    def build(draw):
        m, n = draw(st.integers(1, 4)), draw(st.integers(1, 4))
        return [[draw(entry) for _ in range(n)] for _ in range(m)]
    return build()


@settings(max_examples=120, deadline=None)
@given(laurent_matrices())
def test_rank_laurent_matches_minors(rows):
    assert rank_laurent(LaurentMatrixF2.from_sets(rows)) == laurent_rank(rows)


@settings(max_examples=60, deadline=None)
@given(laurent_matrices(), st.integers(-5, 5), st.integers(-5, 5))
def test_rank_laurent_invariant_under_unit_scaling(rows, k, l):
    m = LaurentMatrixF2.from_sets(rows)
    assert rank_laurent(m.scale_row(0, k).scale_col(0, l)) == rank_laurent(m)


def test_laurent_round_trip():
    m = LaurentMatrixF2.from_sets([[[0, -2], []], [[5], [1, 2, 3]]])
    assert LaurentMatrixF2.from_dict(m.to_dict()) == m
