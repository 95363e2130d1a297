"""Exterior algebra on Z^b with wedge monomials stored as bitmasks.

Basis index ``i`` (1-based) is bit ``i - 1``. A monomial e_{i1} ^ ... ^ e_{ik}
with i1 < ... < ik is the mask with those bits set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

MultiIndex = int


def mask_of(indices: Iterable[int]) -> MultiIndex:
    mask = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"basis index {i} out of range (indices start at 1)")
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError(f"repeated index {i} in monomial")
        mask |= bit
    return mask


def indices_of(mask: MultiIndex) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def degree(mask: MultiIndex) -> int:
    return bin(mask).count("1")


def basis(b: int, deg: int) -> list[MultiIndex]:
    """All degree-``deg`` monomials in Λ(Z^b), in colex (increasing mask) order."""
    if not 0 <= deg <= b:
        raise ValueError(f"degree {deg} outside 0..{b}")
    masks = [sum(1 << i for i in c) for c in combinations(range(b), deg)]
    return sorted(masks)


def wedge_sign(s: MultiIndex, t: MultiIndex) -> int:
    """Sign of e_s ^ e_t relative to e_{s|t}; 0 if they overlap."""
    if s & t:
        return 0
    # count pairs (i in s, j in t) with i > j
    inv = 0
    for j in indices_of(t):
        inv += degree(s >> j)
    return -1 if inv & 1 else 1


def monomial_shuffle_sign(t: MultiIndex, s: MultiIndex) -> int:
    """Sign of the permutation listing t ascending, then s minus t ascending,
    relative to s ascending."""
    if t & ~s:
        raise ValueError("t is not a subset of s")
    if degree(t) != 3:
        raise ValueError("t must have exactly three indices")
    rest = s & ~t
    # inversions: an element of t exceeding an element of the remainder
    inv = sum(degree(rest & ((1 << (i - 1)) - 1)) for i in indices_of(t))
    return -1 if inv & 1 else 1


@dataclass(frozen=True)
class ExteriorElement:
    """Integer combination of wedge monomials in Λ(Z^b)."""

    b: int
    terms: tuple[tuple[MultiIndex, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for mask, c in self.terms:
            if mask < 0 or mask >> self.b:
                raise ValueError(f"monomial {indices_of(mask)} outside rank {self.b}")
            merged[mask] = merged.get(mask, 0) + int(c)
        object.__setattr__(
            self, "terms", tuple(sorted((m, c) for m, c in merged.items() if c)))

    @classmethod
    def zero(cls, b: int) -> ExteriorElement:
        return cls(b)

    @classmethod
    def one(cls, b: int) -> ExteriorElement:
        return cls(b, ((0, 1),))

    @classmethod
    def monomial(cls, b: int, indices: Iterable[int], coeff: int = 1) -> ExteriorElement:
        """e_{i1} ^ ... ^ e_{ik} in the given order (sign applied if unsorted).
        A repeated index gives zero."""
        indices = list(indices)
        if len(set(indices)) < len(indices):
            if any(i < 1 or i > b for i in indices):
                raise ValueError(f"basis index out of range 1..{b}: {indices}")
            return cls.zero(b)
        mask = mask_of(indices)
        inv = sum(1 for x in range(len(indices)) for y in range(x + 1, len(indices))
                  if indices[x] > indices[y])
        return cls(b, ((mask, -coeff if inv & 1 else coeff),))

    @classmethod
    def from_mapping(cls, b: int, coeffs: Mapping[MultiIndex, int]) -> ExteriorElement:
        return cls(b, tuple(coeffs.items()))

    def coefficients(self) -> dict[MultiIndex, int]:
        return dict(self.terms)

    def coefficient(self, indices: Iterable[int]) -> int:
        return self.coefficients().get(mask_of(indices), 0)

    def degrees(self) -> set[int]:
        return {degree(m) for m, _ in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: ExteriorElement):
        if self.b != other.b:
            raise ValueError(f"ambient rank mismatch: {self.b} vs {other.b}")

    def __add__(self, other: ExteriorElement) -> ExteriorElement:
        self._check(other)
        return ExteriorElement(self.b, self.terms + other.terms)

    def __neg__(self) -> ExteriorElement:
        return ExteriorElement(self.b, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: ExteriorElement) -> ExteriorElement:
        return self + (-other)

    def __mul__(self, k: int) -> ExteriorElement:
        return ExteriorElement(self.b, tuple((m, k * c) for m, c in self.terms))

    __rmul__ = __mul__

    def __xor__(self, other: ExteriorElement) -> ExteriorElement:
        return wedge(self, other)

    def to_dict(self) -> dict:
        return {"b": self.b,
                "terms": [{"indices": list(indices_of(m)), "coeff": c}
                          for m, c in self.terms]}

    @classmethod
    def from_dict(cls, data: dict) -> ExteriorElement:
        b = int(data["b"])
        out = cls.zero(b)
        for t in data["terms"]:
            out = out + cls.monomial(b, [int(i) for i in t["indices"]], int(t["coeff"]))
        return out


def wedge(a: ExteriorElement, c: ExteriorElement) -> ExteriorElement:
    a._check(c)
    acc: dict[int, int] = {}
    for s, x in a.terms:
        for t, y in c.terms:
            sign = wedge_sign(s, t)
            if sign:
                acc[s | t] = acc.get(s | t, 0) + sign * x * y
    return ExteriorElement.from_mapping(a.b, acc)
