"""Exact linear algebra: integer matrices, Smith normal form, ranks over F2
and over the Laurent polynomial ring F2[U, U^-1].

Everything here works on Python ints; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix of arbitrary-precision integers (row-major)."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(
                f"entries do not match declared shape {self.rows}x{self.cols}")
        object.__setattr__(
            self, "entries", tuple(tuple(int(x) for x in r) for r in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, values: Iterable[int]) -> IntMatrix:
        values = list(values)
        n = len(values)
        return cls(n, n, tuple(tuple(values[i] if i == j else 0 for j in range(n))
                               for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(x for r in self.entries for x in r)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ot = other.T.entries
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ot)
                               for r in self.entries))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.entries))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows) for j in range(i))

    def is_diagonal(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == 0
            for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(rows), len(cols),
                         tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.entries]

    def direct_sum(self, other: IntMatrix) -> IntMatrix:
        rows = [list(r) + [0] * other.cols for r in self.entries]
        rows += [[0] * self.cols + list(r) for r in other.entries]
        return IntMatrix.from_rows(rows, self.cols + other.cols)

    def det(self) -> int:
        """Determinant by Bareiss fraction-free elimination."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolist()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.is_square() and abs(self.det()) == 1

    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> IntMatrix:
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = [[int(x) for x in r] for r in data["entries"]]
        return cls(rows, cols, tuple(tuple(r) for r in entries))


@dataclass(frozen=True)
class SnfResult:
    """``u @ m @ v == d`` with ``u``, ``v`` unimodular and ``d`` in Smith form."""

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix
    rank: int
    torsion_factors: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"d": self.d.to_dict(), "u": self.u.to_dict(), "v": self.v.to_dict(),
                "rank": self.rank, "torsion_factors": list(self.torsion_factors)}


def _pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    # smallest |entry|, ties to the lowest (row, col)
    best = None
    best_val = 0
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best_val):
                best, best_val = (i, j), abs(x)
    return best


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """Smith normal form of an integer matrix, with transforms.

    Pivot rule: smallest nonzero absolute value in the active block, ties
    broken by lowest (row, col). Diagonal entries are made nonnegative by
    scaling rows of ``u``.
    """
    R, C = m.rows, m.cols
    a = m.tolist()
    u = [[int(i == j) for j in range(R)] for i in range(R)]
    # v is stored transposed so column operations are row operations on vt
    vt = [[int(i == j) for j in range(C)] for i in range(C)]

    for t in range(min(R, C)):
        while True:
            piv = _pivot(a, t)
            if piv is None:
                break
            i, j = piv
            if i != t:
                a[t], a[i] = a[i], a[t]
                u[t], u[i] = u[i], u[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
                vt[t], vt[j] = vt[j], vt[t]
            p = a[t][t]
            clean = True
            for r in range(t + 1, R):
                if a[r][t]:
                    q = a[r][t] // p
                    ar, at_ = a[r], a[t]
                    for c in range(t, C):
                        ar[c] -= q * at_[c]
                    ur, ut = u[r], u[t]
                    for c in range(R):
                        ur[c] -= q * ut[c]
                    if ar[t]:
                        clean = False
            for c in range(t + 1, C):
                if a[t][c]:
                    q = a[t][c] // p
                    for r in range(R):
                        a[r][c] -= q * a[r][t]
                    vc, vtt = vt[c], vt[t]
                    for k in range(C):
                        vc[k] -= q * vtt[k]
                    if a[t][c]:
                        clean = False
            if not clean:
                continue
            bad = next(((r, c) for r in range(t + 1, R) for c in range(t + 1, C)
                        if a[r][c] % p), None)
            if bad is None:
                break
            r = bad[0]
            for c in range(t, C):
                a[t][c] += a[r][c]
            for c in range(R):
                u[t][c] += u[r][c]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        if a[t][t] == 0:
            break

    d = IntMatrix.from_rows(a, C)
    diag = d.diagonal()
    rank = sum(1 for x in diag if x)
    return SnfResult(
        d=d,
        u=IntMatrix.from_rows(u, R),
        v=IntMatrix.from_rows(vt, C).T,
        rank=rank,
        torsion_factors=tuple(x for x in diag if x > 1),
    )


def rank_z(m: IntMatrix) -> int:
    return smith_normal_form(m).rank


def rank_f2(m: IntMatrix) -> int:
    """Rank of the mod-2 reduction."""
    rows = [sum(1 << j for j, x in enumerate(r) if x & 1) for r in m.entries]
    return _rank_bitrows(rows)


def _rank_bitrows(rows: list[int]) -> int:
    rank = 0
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = r
                rank += 1
                break
            r ^= pivots[top]
    return rank


def congruence_transform(m: IntMatrix, p: IntMatrix) -> IntMatrix:
    """Return ``p.T @ m @ p`` for unimodular ``p``."""
    if not p.is_square() or p.rows != m.rows or not m.is_square():
        raise ValueError(f"congruence needs square matrices of equal size, got {m.shape} and {p.shape}")
    if abs(p.det()) != 1:
        raise ValueError("change of basis is not unimodular")
    return p.T @ m @ p


# --- F2[U, U^-1] -----------------------------------------------------------
#
# A Laurent polynomial over F2 is a finite set of exponents. For rank
# computations rows are shifted into F2[U] and encoded as Python ints
# (bit k = coefficient of U^k).

def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _pdivmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = b.bit_length()
    while a and a.bit_length() >= db:
        s = a.bit_length() - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return a


def _laurent_mul(x: frozenset[int], y: frozenset[int]) -> frozenset[int]:
    out: set[int] = set()
    for i in x:
        for j in y:
            out ^= {i + j}
    return frozenset(out)


@dataclass(frozen=True)
class LaurentMatrixF2:
    """Matrix over F2[U, U^-1]; each entry is a sorted tuple of exponents."""

    rows: int
    cols: int
    entries: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(
                f"entries do not match declared shape {self.rows}x{self.cols}")
        norm = []
        for r in self.entries:
            row = []
            for e in r:
                exps = [int(k) for k in e]
                if len(set(exps)) != len(exps):
                    raise ValueError(f"repeated exponent in Laurent entry {list(e)}")
                row.append(tuple(sorted(exps)))
            norm.append(tuple(row))
        object.__setattr__(self, "entries", tuple(norm))

    @classmethod
    def from_sets(cls, rows: Sequence[Sequence[Iterable[int]]], cols: int | None = None) -> LaurentMatrixF2:
        rows = [[tuple(sorted(set(e))) for e in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def constant(cls, m: IntMatrix | Sequence[Sequence[int]]) -> LaurentMatrixF2:
        """Embed a 0/1 (or integer, read mod 2) matrix with exponent-0 entries."""
        if isinstance(m, IntMatrix):
            rows, cols = m.tolist(), m.cols
        else:
            rows = [list(r) for r in m]
            cols = len(rows[0]) if rows else 0
        return cls.from_sets([[(0,) if x % 2 else () for x in r] for r in rows], cols)

    @classmethod
    def identity(cls, n: int, power: int = 0) -> LaurentMatrixF2:
        return cls.from_sets([[(power,) if i == j else () for j in range(n)]
                              for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> LaurentMatrixF2:
        return cls.from_sets([[() for _ in range(cols)] for _ in range(rows)], cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> tuple[int, ...]:
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: LaurentMatrixF2) -> LaurentMatrixF2:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return LaurentMatrixF2.from_sets(
            [[set(a) ^ set(b) for a, b in zip(r, s)]
             for r, s in zip(self.entries, other.entries)], self.cols)

    def __matmul__(self, other: LaurentMatrixF2) -> LaurentMatrixF2:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc: frozenset[int] = frozenset()
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc ^ _laurent_mul(frozenset(a), frozenset(b))
                row.append(acc)
            out.append(row)
        return LaurentMatrixF2.from_sets(out, other.cols)

    def scale_row(self, i: int, k: int) -> LaurentMatrixF2:
        """Multiply row ``i`` by U^k."""
        rows = [list(r) for r in self.entries]
        rows[i] = [tuple(e + k for e in entry) for entry in rows[i]]
        return LaurentMatrixF2.from_sets(rows, self.cols)

    def scale_col(self, j: int, k: int) -> LaurentMatrixF2:
        """Multiply column ``j`` by U^k."""
        rows = [[tuple(e + k for e in entry) if c == j else entry
                 for c, entry in enumerate(r)] for r in self.entries]
        return LaurentMatrixF2.from_sets(rows, self.cols)

    def is_constant(self) -> bool:
        return all(e in ((), (0,)) for r in self.entries for e in r)

    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[list(e) for e in r] for r in self.entries]}

    @classmethod
    def from_dict(cls, data: dict) -> LaurentMatrixF2:
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = tuple(tuple(tuple(int(k) for k in e) for e in r) for r in data["entries"])
        return cls(rows, cols, entries)


def rank_laurent(m: LaurentMatrixF2) -> int:
    """Rank over the fraction field F2(U)."""
    rows: list[list[int]] = []
    for r in m.entries:
        exps = [k for e in r for k in e]
        if not exps:
            continue
        shift = min(exps)
        rows.append([sum(1 << (k - shift) for k in e) for e in r])

    rank = 0
    col = 0
    while rows and col < m.cols:
        piv = None
        for idx, r in enumerate(rows):
            if r[col] and (piv is None or r[col].bit_length() < rows[piv][col].bit_length()):
                piv = idx
        if piv is None:
            col += 1
            continue
        prow = rows.pop(piv)
        p = prow[col]
        rank += 1
        new_rows = []
        for r in rows:
            if r[col]:
                c = r[col]
                r = [_clmul(p, x) ^ _clmul(c, y) for x, y in zip(r, prow)]
                g = 0
                for x in r:
                    if x:
                        g = _pgcd(g, x) if g else x
                if g > 1:
                    r = [_pdivmod(x, g)[0] for x in r]
            if any(r):
                new_rows.append(r)
        rows = new_rows
        col += 1
    return rank
