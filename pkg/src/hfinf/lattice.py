"""Integral lattices: discriminant-bilinear forms, stable equivalence, and a
certificate-producing search for stable diagonalization.

The diagonalization search is the constructive side of "S + L is
diagonalizable for some diagonal L". Existence carries no bound, so the search
is budgeted and raises :class:`SearchBudgetExhausted` instead of answering no.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement, product
from math import gcd, lcm, prod
from typing import Iterator, NamedTuple, Sequence

from .exact_linalg import IntMatrix, congruence_transform, smith_normal_form

DEFAULT_BUDGET = 10_000


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"


class SearchBudgetExhausted(Exception):
    """A bounded search ran out of budget before finding a certificate."""

    def __init__(self, message: str, partial: dict | None = None):
        super().__init__(message)
        self.partial = partial or {}


@dataclass(frozen=True)
class Lattice:
    """Z^n with the symmetric bilinear form given by ``gram`` (degenerate allowed)."""

    gram: IntMatrix

    def __post_init__(self):
        if not self.gram.is_symmetric():
            raise ValueError("Gram matrix must be square and symmetric")

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> Lattice:
        return cls(IntMatrix.diag(values))

    @property
    def rank(self) -> int:
        return self.gram.rows

    def is_degenerate(self) -> bool:
        return self.gram.det() == 0

    def __add__(self, other: Lattice) -> Lattice:
        return Lattice(self.gram.direct_sum(other.gram))


def _as_gram(x: Lattice | IntMatrix) -> IntMatrix:
    gram = x.gram if isinstance(x, Lattice) else x
    if not gram.is_symmetric():
        raise ValueError("Gram matrix must be square and symmetric")
    return gram


def split_degenerate(gram: IntMatrix) -> tuple[IntMatrix, int]:
    """Unimodular Q with Q^T G Q = G' + 0, G' nondegenerate of size r.

    Returns (Q, r). The last n - r columns of Q span the radical.
    """
    snf = smith_normal_form(gram)
    q = snf.v
    r = snf.rank
    g = congruence_transform(gram, q)
    n = gram.rows
    assert all(g[i, j] == 0 for i in range(n) for j in range(n) if i >= r or j >= r)
    return q, r


def nondegenerate_part(gram: IntMatrix) -> IntMatrix:
    q, r = split_degenerate(gram)
    return congruence_transform(gram, q).submatrix(range(r), range(r))


# --- discriminant forms ------------------------------------------------------

def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class DiscriminantForm:
    """Finite group Z/d1 + ... + Z/dr with a Q/Z-valued symmetric pairing on
    the standard generators. Values are kept in [0, 1)."""

    cyclic_orders: tuple[int, ...]
    gram_qz: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        r = len(self.cyclic_orders)
        if any(d <= 1 for d in self.cyclic_orders):
            raise ValueError("cyclic orders must exceed 1")
        if len(self.gram_qz) != r or any(len(row) != r for row in self.gram_qz):
            raise ValueError("pairing matrix does not match the number of generators")
        g = tuple(tuple(_mod1(Fraction(x)) for x in row) for row in self.gram_qz)
        for i in range(r):
            for j in range(r):
                if g[i][j] != g[j][i]:
                    raise ValueError("pairing is not symmetric mod 1")
                if (g[i][j] * self.cyclic_orders[i]).denominator != 1:
                    raise ValueError("pairing value incompatible with generator order")
        object.__setattr__(self, "gram_qz", g)

    @property
    def order(self) -> int:
        return prod(self.cyclic_orders)

    @property
    def exponent(self) -> int:
        return lcm(*self.cyclic_orders)

    @cached_property
    def scaled_gram(self) -> tuple[tuple[int, ...], ...]:
        """Pairing values times the exponent, as integers mod the exponent."""
        n = self.exponent
        return tuple(tuple(int(v * n) % n for v in row) for row in self.gram_qz)

    def pair_scaled(self, x: Sequence[int], y: Sequence[int]) -> int:
        g = self.scaled_gram
        r = len(self.cyclic_orders)
        return sum(x[i] * y[j] * g[i][j] for i in range(r) for j in range(r)) % self.exponent

    def pair(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        return Fraction(self.pair_scaled(x, y), self.exponent)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(d) for d in self.cyclic_orders))

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.cyclic_orders))

    def to_json(self) -> dict:
        return {"cyclic_orders": list(self.cyclic_orders),
                "gram_qz": [[str(x) for x in row] for row in self.gram_qz]}

    @classmethod
    def from_json(cls, data: dict) -> DiscriminantForm:
        return cls(tuple(int(d) for d in data["cyclic_orders"]),
                   tuple(tuple(Fraction(x) for x in row) for row in data["gram_qz"]))


def discriminant(l: Lattice | IntMatrix) -> DiscriminantForm:
    """Discriminant-bilinear form on S*/S of the nondegenerate part.

    With U G V = D, the dual lattice is V D^{-1} Z^n, so the columns of V
    divided by the invariant factors d_i > 1 generate S*/S.
    """
    gram = nondegenerate_part(_as_gram(l))
    snf = smith_normal_form(gram)
    n = gram.rows
    gens = []
    orders = []
    for i, d in enumerate(snf.d.diagonal()):
        if d > 1:
            gens.append([Fraction(x, d) for x in snf.v.column(i)])
            orders.append(d)
    g = gram.entries

    def dot(x, y):
        return sum(x[i] * g[i][j] * y[j] for i in range(n) for j in range(n) if g[i][j])

    pairing = tuple(tuple(_mod1(dot(x, y)) for y in gens) for x in gens)
    return DiscriminantForm(tuple(orders), pairing)


def disc_isomorphic(a: DiscriminantForm, c: DiscriminantForm,
                    budget: int = DEFAULT_BUDGET) -> Verdict:
    """Decide isomorphism of discriminant forms by exhaustive search.

    Groups with more than ``budget`` elements are left undecided. Otherwise
    cheap invariants are compared first, then generator images are assigned
    one at a time subject to the order and pairing constraints.
    """
    if a.cyclic_orders != c.cyclic_orders:
        return Verdict.NO
    if a.order > budget:
        return Verdict.UNDECIDED
    if _self_pair_profile(a) != _self_pair_profile(c):
        return Verdict.NO
    return Verdict.YES if find_isometry(a, c) is not None else Verdict.NO


def _element_order(x: Sequence[int], orders: Sequence[int]) -> int:
    return lcm(*(d // gcd(xi, d) for xi, d in zip(x, orders)))


@lru_cache(maxsize=512)
def _self_pair_profile(f: DiscriminantForm) -> tuple:
    """Multiset of (order of x, b(x, x)) over all x: an isometry invariant."""
    orders = f.cyclic_orders
    g, n, r = f.scaled_gram, f.exponent, len(orders)
    counts = Counter()
    for x in f.elements():
        q = sum(x[i] * x[j] * g[i][j] for i in range(r) for j in range(r)) % n
        counts[_element_order(x, orders), q] += 1
    return tuple(sorted(counts.items()))


def find_isometry(a: DiscriminantForm, c: DiscriminantForm,
                  budget: int | None = None) -> list[tuple[int, ...]] | None:
    """Images of a's generators under some isometry a -> c, or None.

    Raises SearchBudgetExhausted when more than ``budget`` partial
    assignments are visited.
    """
    if a.cyclic_orders != c.cyclic_orders:
        return None
    orders = c.cyclic_orders
    r = len(orders)
    n = c.exponent
    ga, gc = a.scaled_gram, c.scaled_gram

    def pair_c(x, y):
        return sum(x[i] * y[j] * gc[i][j] for i in range(r) for j in range(r)) % n

    candidates = [[x for x in c.elements()
                   if _element_order(x, orders) == d and pair_c(x, x) == ga[i][i]]
                  for i, d in enumerate(orders)]
    # a preserved nondegenerate pairing forces injectivity, hence bijectivity
    need_span = not _nondegenerate(a)
    images: list[tuple[int, ...]] = []
    nodes = 0

    def extend(i):
        nonlocal nodes
        if i == r:
            return not need_span or _spans(c, images)
        for x in candidates[i]:
            nodes += 1
            if budget is not None and nodes > budget:
                raise SearchBudgetExhausted(f"isometry search exceeded {budget} nodes")
            if all(pair_c(images[j], x) == ga[j][i] for j in range(i)):
                images.append(x)
                if extend(i + 1):
                    return True
                images.pop()
        return False

    if not extend(0):
        return None
    if not _spans(c, images):
        raise ArithmeticError("isometry certificate is not surjective")
    return list(images)


def _nondegenerate(f: DiscriminantForm) -> bool:
    gens = [tuple(int(i == j) for j in range(len(f.cyclic_orders)))
            for i in range(len(f.cyclic_orders))]
    zero = tuple(0 for _ in f.cyclic_orders)
    return all(x == zero or any(f.pair(x, g) for g in gens) for x in f.elements())


def _spans(c: DiscriminantForm, gens: list[tuple[int, ...]]) -> bool:
    zero = tuple(0 for _ in c.cyclic_orders)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = c.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen) == c.order


def stably_equivalent(a: Lattice | IntMatrix, c: Lattice | IntMatrix,
                      budget: int = DEFAULT_BUDGET) -> Verdict:
    """Stable equivalence (up to adding <1>, <-1> summands) via discriminant forms."""
    ga, gc = _as_gram(a), _as_gram(c)
    if ga.det() == 0 or gc.det() == 0:
        raise ValueError("stable equivalence needs nondegenerate lattices; split off zeros first")
    return disc_isomorphic(discriminant(ga), discriminant(gc), budget)


# --- stable diagonalization ---------------------------------------------------

class Diagonalization(NamedTuple):
    stabilizer: list[int]
    change_of_basis: IntMatrix
    diagonal: list[int]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def stabilizer_pool(det: int) -> Iterator[int]:
    """Candidate stabilizer entries: divisors of det by absolute value (+ then -),
    then every other integer by absolute value."""
    seen = set()
    for d in _divisors(det):
        for x in (d, -d):
            seen.add(x)
            yield x
    m = 1
    while True:
        for x in (m, -m):
            if x not in seen:
                seen.add(x)
                yield x
        m += 1


class _Search:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        self.dead: set[tuple] = set()
        self._shells: dict[tuple[int, int], list[tuple[int, ...]]] = {}

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExhausted(f"diagonalization search exceeded {self.budget} nodes")

    def shell(self, n: int, s: int) -> Iterator[tuple[int, ...]]:
        """Primitive vectors with max |coordinate| == s whose first nonzero
        coordinate is positive. Each vector produced costs one node."""
        for i in range(n):
            for rest in product(range(-s, s + 1), repeat=n - i - 1):
                for head in product(range(-s + 1, s), repeat=i):
                    # i is the first index reaching s; fix the sign afterwards
                    v = head + (s,) + rest
                    if next(x for x in v if x) < 0:
                        v = tuple(-x for x in v)
                    self.tick()
                    if gcd(*v) == 1:
                        yield v

    def diagonalize(self, m: IntMatrix, bound: int) -> IntMatrix | None:
        """Unimodular P with P^T m P diagonal, or None.

        Splits off one vector v at a time: v spans an orthogonal summand
        exactly when a = v.v is nonzero and divides every entry of m v.
        Coordinates of v are bounded by ``bound`` at every level.
        """
        if m.is_diagonal():
            return IntMatrix.identity(m.rows)
        red = reduce_gram(m)
        if red != IntMatrix.identity(m.rows):
            sub = self.diagonalize(congruence_transform(m, red), bound)
            return None if sub is None else red @ sub
        key = (m.entries, bound)
        if key in self.dead:
            return None
        n = m.rows
        g = m.entries
        for s in range(1, bound + 1):
            options = []
            for v in self.shell(n, s):
                mv = [sum(g[i][j] * v[j] for j in range(n)) for i in range(n)]
                a = sum(v[i] * mv[i] for i in range(n))
                if a == 0 or any(x % a for x in mv):
                    continue
                options.append((abs(a), v, mv, a))
            options.sort(key=lambda o: (o[0], sum(map(abs, o[1])), o[1]))
            for _, v, mv, a in options:
                split = _orthogonal_split(v, [x // a for x in mv])
                rest = congruence_transform(m, split).submatrix(range(1, n), range(1, n))
                sub = self.diagonalize(rest, bound)
                if sub is not None:
                    return split @ IntMatrix.identity(1).direct_sum(sub)
        self.dead.add(key)
        return None


def primary_part(f: DiscriminantForm, p: int) -> DiscriminantForm:
    """The p-primary orthogonal summand, generators sorted by order."""
    gens = []
    for i, d in enumerate(f.cyclic_orders):
        q = 1
        while d % p == 0:
            d //= p
            q *= p
        if q > 1:
            gens.append((q, i, d))
    gens.sort()
    gram = tuple(tuple(f.gram_qz[i][j] * mi * mj for _, j, mj in gens) for _, i, mi in gens)
    return DiscriminantForm(tuple(q for q, _, _ in gens), gram)


def _odd_unit_classes(q: int) -> tuple[int, ...]:
    """Representatives of odd units mod q = 2^a up to squares."""
    return {2: (1,), 4: (1, 3)}.get(q, (1, 3, 5, 7))


def could_be_diagonal(gram: IntMatrix, budget: int = DEFAULT_BUDGET) -> bool:
    """Necessary condition for ``gram`` to be congruent to a diagonal matrix.

    Odd primary parts of a discriminant form always split into cyclic
    summands, so the test only asks whether the 2-primary part is
    isomorphic to some sum of <u/2^a> with u odd. True when the question
    cannot be settled within ``budget``.
    """
    if gram.det() == 0:
        raise ValueError("expected a nondegenerate Gram matrix")
    two = primary_part(discriminant(gram), 2)
    if not two.cyclic_orders:
        return True
    if two.order > budget:
        return True
    for units in product(*(_odd_unit_classes(q) for q in two.cyclic_orders)):
        r = len(units)
        target = DiscriminantForm(two.cyclic_orders, tuple(
            tuple(Fraction(u, q) if i == j else Fraction(0) for j in range(r))
            for i, (u, q) in enumerate(zip(units, two.cyclic_orders))))
        if _self_pair_profile(two) != _self_pair_profile(target):
            continue
        try:
            if find_isometry(two, target, budget) is not None:
                return True
        except SearchBudgetExhausted:
            return True
    return False


def _size(g: list[list[int]]) -> tuple[int, int]:
    n = len(g)
    return (sum(abs(g[i][i]) for i in range(n)),
            sum(abs(g[i][j]) for i in range(n) for j in range(n) if i != j))


def reduce_gram(m: IntMatrix) -> IntMatrix:
    """Greedy congruence reduction by moves e_i -> e_i + c e_j (c = +-1).

    Returns the accumulated unimodular change of basis; a move is kept only
    if it strictly lowers (sum |diagonal|, sum |off-diagonal|).
    """
    n = m.rows
    g = m.tolist()
    p = IntMatrix.identity(n).tolist()
    improved = True
    while improved:
        improved = False
        for i in range(n):
            for j in range(n):
                if i == j or g[i][j] == 0:
                    continue
                for c in (1, -1):
                    h = [row[:] for row in g]
                    # column then row operation: e_i += c e_j
                    for r in range(n):
                        h[r][i] += c * h[r][j]
                    for k in range(n):
                        h[i][k] += c * h[j][k]
                    if _size(h) < _size(g):
                        g = h
                        for r in range(n):
                            p[r][i] += c * p[r][j]
                        improved = True
                        break
    return IntMatrix.from_rows(p, n)


def _orthogonal_split(v: Sequence[int], u: Sequence[int]) -> IntMatrix:
    """Unimodular basis whose first vector is v and whose others span ker(u^T).

    Requires u . v == 1, which makes Z^n = Zv + ker(u^T).
    """
    n = len(v)
    snf = smith_normal_form(IntMatrix.from_rows([list(u)], n))
    w = snf.v
    cols = [list(v)] + [w.column(j) for j in range(1, n)]
    return IntMatrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)], n)


def _sort_descending(gram: IntMatrix, p: IntMatrix) -> IntMatrix:
    d = congruence_transform(gram, p).diagonal()
    order = sorted(range(len(d)), key=lambda i: (-d[i], i))
    perm = IntMatrix.from_rows([[int(order[j] == i) for j in range(len(d))]
                                for i in range(len(d))], len(d))
    return p @ perm


def diagonalize_stably(l: Lattice | IntMatrix,
                       search_budget: int = DEFAULT_BUDGET) -> Diagonalization:
    """Find a diagonal L and unimodular P with P^T (S + L) P diagonal.

    Zeros of a degenerate S are split off first and kept as trailing zero
    entries. Candidate stabilizers L grow by iterative deepening over
    (number of summands, pool prefix, coordinate bound); the returned
    certificate is re-verified exactly.
    """
    gram = _as_gram(l)
    n = gram.rows
    if gram.is_diagonal():
        return Diagonalization([], IntMatrix.identity(n), gram.diagonal())

    q, r = split_degenerate(gram)
    core = congruence_transform(gram, q).submatrix(range(r), range(r))
    search = _Search(search_budget)
    pool = stabilizer_pool(core.det())
    pool_prefix: list[int] = []
    tried: set[tuple[tuple[int, ...], int]] = set()
    viable: dict[tuple[int, ...], bool] = {}
    stage = 0
    try:
        while True:
            stage += 1
            pool_prefix.append(next(pool))
            for k in range(stage):
                for combo in combinations_with_replacement(pool_prefix, k):
                    bound = stage - k
                    if (combo, bound) in tried:
                        continue
                    tried.add((combo, bound))
                    big = core.direct_sum(IntMatrix.diag(combo))
                    if combo not in viable:
                        search.tick()
                        viable[combo] = could_be_diagonal(big, search_budget)
                    if not viable[combo]:
                        continue
                    p_core = search.diagonalize(big, bound)
                    if p_core is not None:
                        p_core = _sort_descending(big, p_core)
                        return _assemble(gram, q, r, list(combo), p_core)
    except SearchBudgetExhausted as exc:
        exc.partial = {"stages": stage, "nodes": search.nodes,
                       "pool": pool_prefix, "nondegenerate_rank": r}
        raise


def _assemble(gram: IntMatrix, q: IntMatrix, r: int, stab: list[int],
              p_core: IntMatrix) -> Diagonalization:
    n, k = gram.rows, len(stab)
    full = gram.direct_sum(IntMatrix.diag(stab))
    q_big = q.direct_sum(IntMatrix.identity(k))
    # reorder the split basis as (core, stabilizers, radical)
    order = list(range(r)) + list(range(n, n + k)) + list(range(r, n))
    perm = IntMatrix.from_rows([[int(order[j] == i) for j in range(n + k)]
                                for i in range(n + k)], n + k)
    p = q_big @ perm @ p_core.direct_sum(IntMatrix.identity(n - r))
    result = congruence_transform(full, p)
    if not result.is_diagonal():
        raise ArithmeticError("diagonalization certificate failed verification")
    return Diagonalization(stab, p, result.diagonal())


# --- surgery presentations -----------------------------------------------------

@dataclass(frozen=True)
class SplitPresentation:
    """A homologically split surgery presentation.

    ``diagonal_entries`` are the nonzero framings, ``zero_count`` the number of
    0-framed components (= b1), ``added_lens_spaces`` the m_i of the
    L(m_i, 1) summands needed to reach it. ``change_of_basis`` certifies the
    congruence from (input + diag(lens spaces)) when available.
    """

    diagonal_entries: tuple[int, ...]
    added_lens_spaces: tuple[int, ...] = ()
    zero_count: int = 0
    change_of_basis: IntMatrix | None = None

    @property
    def framings(self) -> tuple[int, ...]:
        return self.diagonal_entries + (0,) * self.zero_count

    def linking_matrix(self) -> IntMatrix:
        return IntMatrix.diag(self.framings)

    def to_json(self) -> dict:
        out = {"framings": list(self.diagonal_entries),
               "lens_spaces": list(self.added_lens_spaces),
               "b1": self.zero_count}
        if self.change_of_basis is not None:
            out["change_of_basis"] = self.change_of_basis.to_dict()
        return out

    @classmethod
    def from_json(cls, data: dict) -> SplitPresentation:
        framings = [int(x) for x in data["framings"]]
        zeros = sum(1 for x in framings if x == 0)
        cob = data.get("change_of_basis")
        return cls(tuple(x for x in framings if x),
                   tuple(int(x) for x in data.get("lens_spaces", [])),
                   int(data.get("b1", 0)) + zeros,
                   IntMatrix.from_dict(cob) if cob else None)


def split_presentation(linking: IntMatrix, budget: int = DEFAULT_BUDGET) -> SplitPresentation:
    """Homologically split presentation of the manifold given by ``linking``,
    after connected sum with the lens spaces L(m, 1) listed in the result."""
    gram = _as_gram(linking)
    d = diagonalize_stably(gram, budget)
    entries = tuple(x for x in d.diagonal if x)
    zeros = len(d.diagonal) - len(entries)
    return SplitPresentation(entries, tuple(d.stabilizer), zeros, d.change_of_basis)


def reduce_torsion(p: SplitPresentation) -> int:
    """b1 of the torsion-free model: 0-surgery on the 0-framed components only.

    Nonzero framings are nullhomologous surgeries in a split presentation and
    change neither the triple cup product form nor HF^∞.
    """
    return p.zero_count
