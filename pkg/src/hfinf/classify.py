"""Surgery-equivalence classes for b1 = 3, 4 and the end-to-end rank pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .cup_complex import TripleCupForm, homology
from .surgery_cone import mn_rank


class CrossCheckError(RuntimeError):
    """Independent rank computations disagree."""


@dataclass(frozen=True)
class SurgeryClass:
    b1: int
    n: int

    def __post_init__(self):
        if self.b1 not in (3, 4):
            raise ValueError("surgery classes are only modeled for b1 = 3 or 4")
        if self.n < 0:
            raise ValueError("class index must be nonnegative")

    @property
    def model_name(self) -> str:
        return f"M_{self.n}" if self.b1 == 3 else f"M_{self.n} # S^2xS^1"


def classify(mu: TripleCupForm) -> SurgeryClass:
    """Model manifold surgery equivalent to any Y with this cup form.

    b1 = 3: n = |mu_123|. b1 = 4: an alternating 3-form on Z^4 is dual to a
    vector in Z^4 on which GL_4(Z) acts, so n is the gcd of the four values.
    """
    if mu.b == 3:
        return SurgeryClass(3, abs(mu(1, 2, 3)))
    if mu.b == 4:
        n = 0
        for _, v in mu.values:
            n = gcd(n, v)
        return SurgeryClass(4, n)
    raise ValueError(f"classification is only available for b1 in (3, 4), got {mu.b}")


def predicted_rank(cls: SurgeryClass) -> int:
    if cls.b1 == 3:
        return 8 if cls.n % 2 == 0 else 6
    return 16 if cls.n % 2 == 0 else 12


def pipeline(mu: TripleCupForm) -> dict:
    """Classify, then compute the rank three ways and insist they agree."""
    cls = classify(mu)
    rank_classify = predicted_rank(cls)
    rank_homology = homology(mu).f2_total
    rank_cone = mn_rank(cls.n) if cls.b1 == 3 else None

    report = {"b1": cls.b1, "n": cls.n, "model": cls.model_name,
              "rank_classify": rank_classify, "rank_homology": rank_homology,
              "rank_cone": rank_cone}
    ranks = {rank_classify, rank_homology} | ({rank_cone} if rank_cone is not None else set())
    if len(ranks) != 1:
        raise CrossCheckError(f"rank computations disagree: {report}")
    return report
