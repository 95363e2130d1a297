import random
import warnings
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfinf.cup_complex import (
    HomologyReport,
    ParityWarning,
    TripleCupForm,
    change_basis,
    d3,
    d3_matrix,
    direct_sum,
    homology,
)
from hfinf.exact_linalg import IntMatrix
from hfinf.exterior import ExteriorElement, basis, indices_of

from oracles import d3_permutation_sum


def random_form(rng, b, bound=9, density=1.0):
    return TripleCupForm.from_dict(b, {t: rng.randint(-bound, bound)
                                       for t in combinations(range(1, b + 1), 3)
                                       if rng.random() < density})


def forms(max_b=7, bound=9):
    @st.composite
    def build(draw):
        b = draw(st.integers(0, max_b))
        triples = list(combinations(range(1, b + 1), 3))
        vals = draw(st.lists(st.integers(-bound, bound), min_size=len(triples),
                             max_size=len(triples)))
        return TripleCupForm.from_dict(b, dict(zip(triples, vals)))
    return build()


def test_form_validation():
    with pytest.raises(ValueError):
        TripleCupForm(3, (((2, 1, 3), 1),))
    with pytest.raises(ValueError):
        TripleCupForm(3, (((1, 2, 4), 1),))
    with pytest.raises(ValueError):
        TripleCupForm(3, (((1, 2, 3), 1), ((1, 2, 3), 2)))


def test_form_is_alternating():
    mu = TripleCupForm.from_dict(3, {(1, 2, 3): 5})
    for p in product(range(1, 4), repeat=3):
        if len(set(p)) < 3:
            assert mu(*p) == 0
    assert mu(2, 1, 3) == -5
    assert mu(2, 3, 1) == 5
    assert mu.evaluate([1, 0, 0], [0, 1, 0], [0, 0, 1]) == 5
    assert mu.evaluate([1, 1, 0], [1, 1, 0], [0, 0, 1]) == 0


def test_json_round_trip():
    mu = TripleCupForm.from_dict(5, {(1, 2, 3): 2, (2, 4, 5): -7})
    assert TripleCupForm.from_json(mu.to_json()) == mu
    rep = homology(mu)
    assert HomologyReport.from_json(rep.to_json()) == rep


def test_d3_on_torus_class():
    mu = TripleCupForm.from_dict(3, {(1, 2, 3): 1})
    top = ExteriorElement.monomial(3, [1, 2, 3])
    assert d3(mu, top) == ExteriorElement.one(3)
    assert d3_matrix(mu, 3).tolist() == [[1]]
    with pytest.raises(ValueError):
        d3_matrix(mu, 2)


def test_d3_matches_permutation_sum_for_small_b():
    rng = random.Random(7)
    for b in range(3, 6):
        for _ in range(4):
            mu = random_form(rng, b)
            for deg in range(3, b + 1):
                for s in basis(b, deg):
                    idx = indices_of(s)
                    got = d3(mu, ExteriorElement(b, ((s, 1),))).coefficients()
                    want = d3_permutation_sum(mu, idx)
                    assert {indices_of(k): v for k, v in got.items()} == want


@settings(max_examples=60, deadline=None)
@given(forms(max_b=7))
def test_d3_squares_to_zero(mu):
    for deg in range(6, mu.b + 1):
        assert (d3_matrix(mu, deg - 3) @ d3_matrix(mu, deg)).is_zero()


def test_torus():
    rep = homology(TripleCupForm.from_dict(3, {(1, 2, 3): 1}))
    assert rep.f2_total == 6
    assert [h.f2_rank for h in rep.degrees] == [0, 3, 3, 0]


def test_zero_form_gives_full_exterior_algebra():
    for b in range(0, 7):
        rep = homology(TripleCupForm.zero(b))
        assert rep.f2_total == 2 ** b
        assert rep.z_total == 2 ** b


def test_even_form_has_torsion():
    rep = homology(TripleCupForm.from_dict(3, {(1, 2, 3): 2}))
    assert rep.f2_total == 8
    assert rep.z_total == 6
    assert rep.degrees[0].torsion == (2,)
    assert all(h.torsion == () for h in rep.degrees[1:])


def test_parity_warning_not_raised_on_examples():
    with warnings.catch_warnings():
        warnings.simplefilter("error", ParityWarning)
        for n in range(5):
            homology(TripleCupForm.from_dict(4, {(1, 2, 3): n, (2, 3, 4): 1}))


def change_basis_oracle(mu, p):
    b = mu.b
    out = {}
    for i, j, k in combinations(range(b), 3):
        total = 0
        for a, c, e in product(range(b), repeat=3):
            total += p[a, i] * p[c, j] * p[e, k] * mu(a + 1, c + 1, e + 1)
        out[(i + 1, j + 1, k + 1)] = total
    return TripleCupForm.from_dict(b, out)


def random_unimodular(rng, n, steps=10):
    p = IntMatrix.identity(n).tolist()
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1, 2))
        for r in range(n):
            p[r][i] += c * p[r][j]
    return IntMatrix.from_rows(p, n)


def test_change_basis_matches_multilinear_expansion():
    rng = random.Random(3)
    for b in (3, 4, 5):
        for _ in range(5):
            mu = random_form(rng, b, bound=4)
            p = random_unimodular(rng, b)
            assert change_basis(mu, p) == change_basis_oracle(mu, p)


def test_change_basis_preserves_homology_rank():
    rng = random.Random(11)
    for b in (3, 4, 5):
        for _ in range(4):
            mu = random_form(rng, b, bound=5)
            p = random_unimodular(rng, b)
            assert homology(change_basis(mu, p)).f2_total == homology(mu).f2_total


def test_change_basis_rejects_non_unimodular():
    mu = TripleCupForm.from_dict(3, {(1, 2, 3): 1})
    with pytest.raises(ValueError):
        change_basis(mu, IntMatrix.diag([2, 1, 1]))


@settings(max_examples=40, deadline=None)
@given(forms(max_b=3), forms(max_b=3))
def test_kunneth(a, c):
    s = direct_sum(a, c)
    assert s.b == a.b + c.b
    assert homology(s).f2_total == homology(a).f2_total * homology(c).f2_total
