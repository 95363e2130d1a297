import importlib
import random
from itertools import combinations

import pytest

from hfinf.classify import CrossCheckError, SurgeryClass, classify, pipeline, predicted_rank
from hfinf.cup_complex import TripleCupForm, change_basis, homology
from hfinf.exact_linalg import IntMatrix
from hfinf.surgery_cone import mn_rank


def random_form(rng, b, bound):
    return TripleCupForm.from_dict(
        b, {t: rng.randint(-bound, bound) for t in combinations(range(1, b + 1), 3)})


def random_unimodular(rng, n, steps=10):
    p = IntMatrix.identity(n).tolist()
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        for r in range(n):
            p[r][i] += c * p[r][j]
    return IntMatrix.from_rows(p, n)


def test_b3_examples():
    assert classify(TripleCupForm.from_dict(3, {(1, 2, 3): -5})) == SurgeryClass(3, 5)
    assert classify(TripleCupForm.zero(3)).model_name == "M_0"
    assert SurgeryClass(3, 5).model_name == "M_5"


def test_b4_example():
    cls = classify(TripleCupForm.from_dict(4, {(1, 2, 3): 2, (1, 2, 4): 3}))
    assert cls == SurgeryClass(4, 1)
    assert cls.model_name == "M_1 # S^2xS^1"
    assert predicted_rank(cls) == 12
    assert homology(TripleCupForm.from_dict(4, {(1, 2, 3): 2, (1, 2, 4): 3})).f2_total == 12


def test_predicted_rank_table():
    assert predicted_rank(SurgeryClass(3, 1)) == 6
    assert predicted_rank(SurgeryClass(3, 0)) == 8
    assert predicted_rank(SurgeryClass(4, 3)) == 12
    assert predicted_rank(SurgeryClass(4, 0)) == 16


def test_classify_rejects_other_b():
    for b in (0, 2, 5):
        with pytest.raises(ValueError):
            classify(TripleCupForm.zero(b))
    with pytest.raises(ValueError):
        SurgeryClass(3, -1)
    with pytest.raises(ValueError):
        SurgeryClass(5, 0)


def test_b3_three_way_agreement():
    for n in range(-12, 13):
        mu = TripleCupForm.from_dict(3, {(1, 2, 3): n})
        assert predicted_rank(classify(mu)) == homology(mu).f2_total == mn_rank(abs(n))


def test_b4_random_forms_agree_with_homology():
    rng = random.Random(17)
    for _ in range(100):
        mu = random_form(rng, 4, 9)
        assert predicted_rank(classify(mu)) == homology(mu).f2_total


def test_classify_is_invariant_under_change_of_basis():
    rng = random.Random(23)
    for b in (3, 4):
        for _ in range(25):
            mu = random_form(rng, b, 6)
            p = random_unimodular(rng, b)
            assert classify(change_basis(mu, p)).n == classify(mu).n


def test_pipeline_reports():
    rep = pipeline(TripleCupForm.from_dict(3, {(1, 2, 3): 1}))
    assert rep["rank_classify"] == rep["rank_homology"] == rep["rank_cone"] == 6
    rep = pipeline(TripleCupForm.zero(3))
    assert rep["rank_homology"] == 8 and rep["model"] == "M_0"
    rep = pipeline(TripleCupForm.from_dict(4, {(2, 3, 4): 4}))
    assert rep["rank_cone"] is None and rep["rank_classify"] == 16


def test_pipeline_raises_on_disagreement(monkeypatch):
    mod = importlib.import_module("hfinf.classify")
    monkeypatch.setattr(mod, "predicted_rank", lambda cls: 7)
    with pytest.raises(CrossCheckError):
        mod.pipeline(TripleCupForm.zero(3))
