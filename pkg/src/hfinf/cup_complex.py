"""The d3 complex on Λ(Z^b) built from an integral triple cup product form,
and its homology over Z and F2.

With all higher differentials vanishing, the F2 homology of this complex is
the predicted rank of HF^∞ in a torsion Spin^c structure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Mapping

from .exact_linalg import IntMatrix, rank_f2, smith_normal_form
from .exterior import (
    ExteriorElement,
    basis,
    mask_of,
    monomial_shuffle_sign,
)

Triple = tuple[int, int, int]


class ParityWarning(UserWarning):
    """Total F2 rank came out odd for b >= 1 (never observed so far)."""


@dataclass(frozen=True)
class TripleCupForm:
    """Alternating integral trilinear form on Z^b.

    ``values`` holds mu_{ijk} for i < j < k (1-based); unset triples are 0.
    """

    b: int
    values: tuple[tuple[Triple, int], ...] = ()

    def __post_init__(self):
        if self.b < 0:
            raise ValueError("negative rank")
        seen: dict[Triple, int] = {}
        for ijk, v in self.values:
            ijk = tuple(int(x) for x in ijk)
            if len(ijk) != 3 or not (1 <= ijk[0] < ijk[1] < ijk[2] <= self.b):
                raise ValueError(f"triple {ijk} must be strictly increasing within 1..{self.b}")
            if ijk in seen:
                raise ValueError(f"triple {ijk} given twice")
            seen[ijk] = int(v)
        object.__setattr__(
            self, "values", tuple(sorted((k, v) for k, v in seen.items() if v)))

    @classmethod
    def from_dict(cls, b: int, values: Mapping[Triple, int]) -> TripleCupForm:
        return cls(b, tuple(values.items()))

    @classmethod
    def zero(cls, b: int) -> TripleCupForm:
        return cls(b)

    def as_dict(self) -> dict[Triple, int]:
        return dict(self.values)

    def __call__(self, i: int, j: int, k: int) -> int:
        """mu(e_i, e_j, e_k) for any ordering of the indices."""
        if len({i, j, k}) < 3:
            return 0
        seq = [i, j, k]
        inv = sum(1 for x in range(3) for y in range(x + 1, 3) if seq[x] > seq[y])
        v = self.as_dict().get(tuple(sorted(seq)), 0)
        return -v if inv & 1 else v

    def evaluate(self, u: list[int], v: list[int], w: list[int]) -> int:
        """mu(u, v, w) on integer coordinate vectors."""
        total = 0
        for (i, j, k), m in self.values:
            i, j, k = i - 1, j - 1, k - 1
            det = (u[i] * (v[j] * w[k] - v[k] * w[j])
                   - u[j] * (v[i] * w[k] - v[k] * w[i])
                   + u[k] * (v[i] * w[j] - v[j] * w[i]))
            total += m * det
        return total

    def to_json(self) -> dict:
        return {"b": self.b,
                "mu": [{"ijk": list(k), "value": v} for k, v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> TripleCupForm:
        return cls(int(data["b"]),
                   tuple((tuple(int(x) for x in t["ijk"]), int(t["value"]))
                         for t in data.get("mu", [])))


def d3(mu: TripleCupForm, x: ExteriorElement) -> ExteriorElement:
    """Contract ``x`` against the 3-form: e_S maps to the sum over 3-subsets
    T of S of sign(T, S) * mu_T * e_{S - T}."""
    if x.b != mu.b:
        raise ValueError(f"ambient rank mismatch: form has b={mu.b}, element has b={x.b}")
    triples = [(mask_of(t), v) for t, v in mu.values]
    acc: dict[int, int] = {}
    for s, c in x.terms:
        for t, v in triples:
            if t & ~s:
                continue
            r = s & ~t
            acc[r] = acc.get(r, 0) + monomial_shuffle_sign(t, s) * v * c
    return ExteriorElement.from_mapping(mu.b, acc)


def d3_matrix(mu: TripleCupForm, deg: int) -> IntMatrix:
    """Matrix of d3 from basis(b, deg) (columns) to basis(b, deg - 3) (rows)."""
    if not 3 <= deg <= mu.b:
        raise ValueError(f"d3 is defined for degrees 3..{mu.b}, got {deg}")
    src = basis(mu.b, deg)
    dst = basis(mu.b, deg - 3)
    row_of = {m: i for i, m in enumerate(dst)}
    rows = [[0] * len(src) for _ in dst]
    for j, s in enumerate(src):
        image = d3(mu, ExteriorElement(mu.b, ((s, 1),)))
        for r, c in image.terms:
            rows[row_of[r]][j] = c
    return IntMatrix.from_rows(rows, len(src))


@dataclass(frozen=True)
class DegreeHomology:
    deg: int
    z_rank: int
    torsion: tuple[int, ...]
    f2_rank: int


@dataclass(frozen=True)
class HomologyReport:
    degrees: tuple[DegreeHomology, ...]

    @property
    def f2_total(self) -> int:
        return sum(d.f2_rank for d in self.degrees)

    @property
    def z_total(self) -> int:
        return sum(d.z_rank for d in self.degrees)

    def to_json(self) -> dict:
        return {"degrees": [{"deg": d.deg, "z_rank": d.z_rank, "torsion": list(d.torsion),
                             "f2_rank": d.f2_rank} for d in self.degrees],
                "f2_total": self.f2_total}

    @classmethod
    def from_json(cls, data: dict) -> HomologyReport:
        report = cls(tuple(DegreeHomology(int(d["deg"]), int(d["z_rank"]),
                                          tuple(int(t) for t in d["torsion"]),
                                          int(d["f2_rank"]))
                           for d in data["degrees"]))
        if "f2_total" in data and int(data["f2_total"]) != report.f2_total:
            raise ValueError("f2_total disagrees with the per-degree ranks")
        return report


def homology(mu: TripleCupForm) -> HomologyReport:
    """Per-degree homology ker(d3 out of Λ^d) / im(d3 into Λ^d)."""
    b = mu.b
    mats = {d: d3_matrix(mu, d) for d in range(3, b + 1)}
    for d in range(6, b + 1):
        if not (mats[d - 3] @ mats[d]).is_zero():
            raise ArithmeticError(f"d3 o d3 != 0 starting in degree {d}")

    snfs = {d: smith_normal_form(m) for d, m in mats.items()}
    f2 = {d: rank_f2(m) for d, m in mats.items()}
    out = []
    for d in range(b + 1):
        dim = comb(b, d)
        z_out = snfs[d].rank if d in snfs else 0
        z_in = snfs[d + 3].rank if d + 3 in snfs else 0
        torsion = snfs[d + 3].torsion_factors if d + 3 in snfs else ()
        f_out = f2.get(d, 0)
        f_in = f2.get(d + 3, 0)
        out.append(DegreeHomology(d, dim - z_out - z_in, tuple(torsion), dim - f_out - f_in))

    report = HomologyReport(tuple(out))
    if b >= 1 and report.f2_total % 2:
        warnings.warn(f"odd total F2 rank {report.f2_total} for b={b}", ParityWarning)
    return report


def direct_sum(a: TripleCupForm, c: TripleCupForm) -> TripleCupForm:
    """Cup form of a connected sum: orthogonal sum, c's indices shifted by a.b."""
    shifted = tuple(((i + a.b, j + a.b, k + a.b), v) for (i, j, k), v in c.values)
    return TripleCupForm(a.b + c.b, a.values + shifted)


def change_basis(mu: TripleCupForm, p: IntMatrix) -> TripleCupForm:
    """Pullback mu'(u, v, w) = mu(p u, p v, p w) for unimodular ``p``."""
    if p.shape != (mu.b, mu.b):
        raise ValueError(f"change of basis must be {mu.b}x{mu.b}, got {p.shape}")
    if abs(p.det()) != 1:
        raise ValueError("change of basis is not unimodular")
    cols = [p.column(j) for j in range(mu.b)]
    values = {}
    for i, j, k in combinations(range(mu.b), 3):
        v = mu.evaluate(cols[i], cols[j], cols[k])
        if v:
            values[(i + 1, j + 1, k + 1)] = v
    return TripleCupForm.from_dict(mu.b, values)


def f2_total_rank(mu: TripleCupForm) -> int:
    return homology(mu).f2_total
