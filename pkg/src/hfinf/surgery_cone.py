"""Mapping-cone rank calculus over F2[U, U^-1] for 0-surgery.

In canonical bases the projection from the knot complex to CF_z is the
identity, the projection to CF_w is U^k times the identity (k = 0 is forced),
and the destabilization map D is a constant block-diagonal 4x4 matrix. The
cone of Psi = P_plus + D P_minus has rank rk K_w + rk K_zw - 2 rk(Psi).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import product

from .exact_linalg import LaurentMatrixF2, rank_laurent


class ThetaShiftWarning(UserWarning):
    """P_plus is U^k times the identity with k != 0, which the rank bounds rule out."""


@dataclass(frozen=True)
class ConeModel:
    rank_kw: int
    rank_kzw: int
    d_map: LaurentMatrixF2
    p_minus: LaurentMatrixF2 | None = None
    p_plus: LaurentMatrixF2 | None = None

    def __post_init__(self):
        if self.p_minus is None:
            object.__setattr__(self, "p_minus", LaurentMatrixF2.identity(self.rank_kzw))
        if self.p_plus is None:
            object.__setattr__(self, "p_plus", LaurentMatrixF2.identity(self.rank_kzw))
        if self.p_minus != LaurentMatrixF2.identity(self.rank_kzw):
            raise ValueError("p_minus must be the identity in canonical bases")
        if self.d_map.shape != (self.rank_kw, self.rank_kzw):
            raise ValueError(
                f"d_map must be {self.rank_kw}x{self.rank_kzw}, got {self.d_map.shape}")
        if self.p_plus.shape != (self.rank_kw, self.rank_kzw):
            raise ValueError(
                f"p_plus must be {self.rank_kw}x{self.rank_kzw}, got {self.p_plus.shape}")

    def theta_shift(self) -> int | None:
        """k if p_plus == U^k * I, else None."""
        if self.rank_kw != self.rank_kzw or self.rank_kw == 0:
            return None
        first = self.p_plus[0, 0]
        if len(first) != 1:
            return None
        k = first[0]
        return k if self.p_plus == LaurentMatrixF2.identity(self.rank_kw, k) else None

    def psi(self) -> LaurentMatrixF2:
        return self.p_plus + self.d_map @ self.p_minus

    def to_json(self) -> dict:
        return {"rank_kw": self.rank_kw, "rank_kzw": self.rank_kzw,
                "d_map": self.d_map.to_dict(), "p_minus": self.p_minus.to_dict(),
                "p_plus": self.p_plus.to_dict()}

    @classmethod
    def from_json(cls, data: dict) -> ConeModel:
        def opt(key):
            return LaurentMatrixF2.from_dict(data[key]) if key in data else None
        return cls(int(data["rank_kw"]), int(data["rank_kzw"]),
                   LaurentMatrixF2.from_dict(data["d_map"]), opt("p_minus"), opt("p_plus"))


def cone_rank(model: ConeModel) -> int:
    k = model.theta_shift()
    if k:
        warnings.warn(f"p_plus = U^{k} I with k != 0 contradicts the spectral-sequence rank bound",
                      ThetaShiftWarning)
    return model.rank_kw + model.rank_kzw - 2 * rank_laurent(model.psi())


@dataclass(frozen=True)
class XMatrix:
    index: int
    matrix: LaurentMatrixF2


# Blocks are written top-left / bottom-right; all entries are constants.
_I2 = ((1, 0), (0, 1))
_UPPER = ((1, 1), (0, 1))
_LOWER = ((1, 0), (1, 1))
_SWAP = ((0, 1), (1, 0))

_X_BLOCKS = [
    (_UPPER, _I2),
    (_LOWER, _I2),
    (_SWAP, _I2),
    (_I2, _UPPER),
    (_I2, _LOWER),
    (_I2, _SWAP),
]


def _block_diag(top, bottom) -> LaurentMatrixF2:
    rows = [list(top[0]) + [0, 0], list(top[1]) + [0, 0],
            [0, 0] + list(bottom[0]), [0, 0] + list(bottom[1])]
    return LaurentMatrixF2.constant(rows)


def x_set() -> list[XMatrix]:
    """The six possible destabilization matrices for a T^3-type 0-surgery."""
    return [XMatrix(i + 1, _block_diag(t, b)) for i, (t, b) in enumerate(_X_BLOCKS)]


def compose_d(d1: LaurentMatrixF2, d2: LaurentMatrixF2) -> LaurentMatrixF2:
    """D^{-K} = D^{-K2} o D^{-K1}, i.e. the product d2 @ d1."""
    if d2.cols != d1.rows:
        raise ValueError(f"cannot compose {d1.shape} followed by {d2.shape}")
    return d2 @ d1


def mn_d_map(n: int, step: LaurentMatrixF2 | None = None) -> LaurentMatrixF2:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if step is None:
        step = x_set()[0].matrix
    eye = LaurentMatrixF2.identity(step.rows)
    d = eye
    m = 0
    while m < n:
        d = compose_d(d, step)
        m += 1
        if d == eye:
            # the sequence is periodic from here on
            for _ in range((n - m) % m):
                d = compose_d(d, step)
            break
    return d


def mn_rank(n: int, step: LaurentMatrixF2 | None = None) -> int:
    """F2[U,U^-1]-rank of HF^∞(M_n) from the induction D^{-Z_m} = D^{-Z_1} D^{-Z_{m-1}}.

    ``step`` is D^{-Z_1}; defaults to the first element of the X set.
    """
    return cone_rank(ConeModel(4, 4, mn_d_map(n, step)))


def _gl2_f2() -> list[tuple[tuple[int, int], tuple[int, int]]]:
    out = []
    for a, b, c, d in product((0, 1), repeat=4):
        if (a * d - b * c) % 2:
            out.append(((a, b), (c, d)))
    return out


def enumerate_consistent_d(rank_constraint: int) -> list[LaurentMatrixF2]:
    """Constant block-diagonal M (two invertible 2x2 blocks over F2) with
    rank(M + I) == rank_constraint."""
    if rank_constraint not in (0, 1):
        raise ValueError("rank constraint must be 0 or 1")
    eye = LaurentMatrixF2.identity(4)
    out = []
    for top in _gl2_f2():
        for bottom in _gl2_f2():
            m = _block_diag(top, bottom)
            if rank_laurent(m + eye) == rank_constraint:
                out.append(m)
    return out
