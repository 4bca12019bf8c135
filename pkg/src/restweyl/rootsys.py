"""Complex simple root systems: roots, lattices, Weyl words, dimensions.

Conventions (fixed package-wide):

* Simple roots carry Bourbaki labels, 1-based.
* ``cartan[i][j] = <alpha_j, alpha_i^vee>``, so for a vector ``x`` in
  root-basis coordinates the fundamental-weight coordinates are
  ``A @ x`` and the simple reflection acts by
  ``s_i(x) = x - (A @ x)_i * alpha_i``.
* The invariant form is ``<alpha_i, alpha_j> = B[i][j] = d_i * A[i][j]``
  with integer symmetrizers ``d_i`` chosen minimal positive.
* A Weyl word ``(i_1, ..., i_k)`` denotes the composition
  ``s_{i_1} o ... o s_{i_k}`` (the rightmost reflection acts first).

Everything is exact: integer root coordinates for roots, Fractions for
weights.  All values are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, cached_property

from . import linalg
from .errors import CapabilityError, IntegrityError

_VALID = {"A": (1, None), "B": (2, None), "C": (2, None), "D": (3, None),
          "E": (6, 8), "F": (4, 4), "G": (2, 2)}


def positive_root_count(letter: str, rank: int) -> int:
    """Classical count of positive roots for a simple type."""
    if letter == "A":
        return rank * (rank + 1) // 2
    if letter in ("B", "C"):
        return rank * rank
    if letter == "D":
        return rank * (rank - 1)
    if letter == "E":
        return {6: 36, 7: 63, 8: 120}[rank]
    return {"F": 24, "G": 6}[letter]


def weyl_order_closed_form(letter: str, rank: int) -> int:
    """Classical order of the Weyl group for a simple type."""
    if letter == "A":
        return math.factorial(rank + 1)
    if letter in ("B", "C"):
        return 2 ** rank * math.factorial(rank)
    if letter == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    if letter == "E":
        return {6: 51840, 7: 2903040, 8: 696729600}[rank]
    return {"F": 1152, "G": 12}[letter]


def _cartan_matrix(letter: str, rank: int) -> list[list[int]]:
    n = rank
    a = [[2 * int(i == j) for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        a[i - 1][j - 1] = aij
        a[j - 1][i - 1] = aji

    if letter in ("A", "B", "C"):
        for i in range(1, n):
            bond(i, i + 1)
        if letter == "B" and n >= 2:
            a[n - 1][n - 2] = -2          # alpha_n short
        if letter == "C" and n >= 2:
            a[n - 2][n - 1] = -2          # alpha_n long
    elif letter == "D":
        for i in range(1, n - 1):
            bond(i, i + 1)
        a[n - 2][n - 3], a[n - 3][n - 2] = -1, -1
        a[n - 1][n - 3], a[n - 3][n - 1] = -1, -1
        a[n - 1][n - 2] = a[n - 2][n - 1] = 0
    elif letter == "E":
        for i, j in [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]:
            bond(i, j)
        if n >= 7:
            bond(6, 7)
        if n == 8:
            bond(7, 8)
    elif letter == "F":
        bond(1, 2)
        bond(2, 3, aij=-1, aji=-2)        # alpha_3, alpha_4 short
        bond(3, 4)
    elif letter == "G":
        bond(1, 2, aij=-3, aji=-1)        # alpha_1 short
    return a


def _symmetrizers(letter: str, rank: int) -> list[int]:
    n = rank
    if letter == "B":
        return [2] * (n - 1) + [1]
    if letter == "C":
        return [1] * (n - 1) + [2]
    if letter == "F":
        return [2, 2, 1, 1]
    if letter == "G":
        return [1, 3]
    return [1] * n


def _enumerate_positive_roots(cartan, rank):
    """All positive roots in root-basis coordinates, by closure under root
    addition starting from the simple roots (string criterion)."""
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    found = set(simple)
    level = list(simple)
    while level:
        nxt = []
        for beta in level:
            pairing = [sum(cartan[i][j] * beta[j] for j in range(rank))
                       for i in range(rank)]
            for i in range(rank):
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if down[i] < 0 or tuple(down) not in found:
                        break
                    p += 1
                if p - pairing[i] > 0:
                    up = list(beta)
                    up[i] += 1
                    gamma = tuple(up)
                    if gamma not in found:
                        found.add(gamma)
                        nxt.append(gamma)
        level = nxt
    return sorted(found, key=lambda v: (sum(v), v))


class RootSystem:
    """Immutable root-system data for a simple complex type.

    Construct through :func:`build_root_system`, which caches a singleton
    per ``(letter, rank)``.
    """

    def __init__(self, letter: str, rank: int):
        letter = letter.upper()
        if letter not in _VALID:
            raise ValueError(f"unknown type letter {letter!r}; expected A-G")
        lo, hi = _VALID[letter]
        if rank < lo or (hi is not None and rank > hi):
            hint = ""
            if (letter, rank) in (("B", 1), ("C", 1), ("D", 1)):
                hint = "; rank-1 types coincide with A1, use ('A', 1)"
            elif (letter, rank) == ("D", 2):
                hint = "; D2 = A1 x A1 is not simple"
            raise ValueError(f"invalid rank {rank} for type {letter}{hint}")
        self.letter = letter
        self.rank = rank
        self.cartan = tuple(tuple(r) for r in _cartan_matrix(letter, rank))
        self.sym = tuple(_symmetrizers(letter, rank))
        self.bilinear = tuple(tuple(self.sym[i] * self.cartan[i][j]
                                    for j in range(rank)) for i in range(rank))
        self._check_bilinear()
        self.positive_roots = tuple(_enumerate_positive_roots(self.cartan, rank))
        if len(self.positive_roots) != positive_root_count(letter, rank):
            raise IntegrityError(
                f"{self}: enumerated {len(self.positive_roots)} positive roots, "
                f"expected {positive_root_count(letter, rank)}")
        inv = linalg.solve([list(r) for r in self.cartan],
                           linalg.identity(rank))
        self.inv_cartan = tuple(tuple(row) for row in inv)
        self.cartan_det = int(linalg.det([list(r) for r in self.cartan]))
        self.inv_cartan_scaled = tuple(
            tuple(int(x * self.cartan_det) for x in row) for row in inv)
        # fundamental weight i in root coordinates = column i of inv_cartan
        self.fundamental_weights = tuple(
            tuple(inv[j][i] for j in range(rank)) for i in range(rank))
        self.rho_root = tuple(sum(self.fundamental_weights[i][j]
                                  for i in range(rank)) for j in range(rank))
        half = [Fraction(sum(a[j] for a in self.positive_roots), 2)
                for j in range(rank)]
        if list(self.rho_root) != half:
            raise IntegrityError(f"{self}: rho != half-sum of positive roots")
        self._refl_root = tuple(self._reflection_root(i) for i in range(rank))
        self._refl_fw = tuple(self._reflection_fw(i) for i in range(rank))

    def _check_bilinear(self):
        b = self.bilinear
        n = self.rank
        for i in range(n):
            for j in range(n):
                if b[i][j] != b[j][i]:
                    raise IntegrityError(f"{self}: symmetrized Cartan not symmetric")
        for k in range(1, n + 1):
            minor = [[b[i][j] for j in range(k)] for i in range(k)]
            if linalg.det(minor) <= 0:
                raise IntegrityError(f"{self}: bilinear form not positive definite")

    def _reflection_root(self, i):
        n = self.rank
        rows = []
        for k in range(n):
            row = [int(k == j) for j in range(n)]
            if k == i:
                row = [row[j] - self.cartan[i][j] for j in range(n)]
            rows.append(tuple(row))
        return tuple(rows)

    def _reflection_fw(self, i):
        # fw coords of alpha_i are column i of the Cartan matrix
        n = self.rank
        return tuple(tuple(int(k == j) - (self.cartan[k][i] if j == i else 0)
                           for j in range(n)) for k in range(n))

    # -- basic linear data ------------------------------------------------

    def inner(self, x, y) -> Fraction:
        """Invariant form of two vectors in root coordinates."""
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = self.bilinear[i]
                total += xi * sum(row[j] * y[j] for j in range(self.rank) if y[j])
        return total

    def fw_of_root_coords(self, x):
        """Fundamental-weight coordinates of a root-coordinate vector."""
        return tuple(sum(self.cartan[i][j] * x[j] for j in range(self.rank))
                     for i in range(self.rank))

    def root_of_fw_coords(self, c):
        det = self.cartan_det
        return tuple(Fraction(sum(self.inv_cartan_scaled[i][j] * c[j]
                                  for j in range(self.rank)), det)
                     for i in range(self.rank))

    def all_roots(self):
        for a in self.positive_roots:
            yield a
        for a in self.positive_roots:
            yield tuple(-x for x in a)

    @cached_property
    def root_set(self):
        return frozenset(self.all_roots())

    @cached_property
    def highest_root(self):
        return self.positive_roots[-1]

    def positive_roots_of_subset(self, subset):
        """Positive roots supported on a set of simple indices (1-based)."""
        idx = {i - 1 for i in subset}
        return [a for a in self.positive_roots
                if all(j in idx for j, x in enumerate(a) if x)]

    # -- identity ---------------------------------------------------------

    def __repr__(self):
        return f"{self.letter}{self.rank}"

    def __eq__(self, other):
        return (isinstance(other, RootSystem)
                and (self.letter, self.rank) == (other.letter, other.rank))

    def __hash__(self):
        return hash((self.letter, self.rank))


@lru_cache(maxsize=None)
def build_root_system(letter: str, rank: int) -> RootSystem:
    """Singleton RootSystem for a valid simple type; raises ValueError on
    an invalid (letter, rank) pair."""
    return RootSystem(letter, rank)


@dataclass(frozen=True)
class Weight:
    """A vector of the weight space in exact root-basis coordinates."""

    rs: RootSystem
    root: tuple

    @staticmethod
    def from_root(rs: RootSystem, coords) -> "Weight":
        return Weight(rs, tuple(Fraction(x) for x in coords))

    @staticmethod
    def from_fw(rs: RootSystem, coords) -> "Weight":
        return Weight(rs, rs.root_of_fw_coords([Fraction(x) for x in coords]))

    @staticmethod
    def zero(rs: RootSystem) -> "Weight":
        return Weight(rs, tuple(Fraction(0) for _ in range(rs.rank)))

    @staticmethod
    def fundamental(rs: RootSystem, i: int) -> "Weight":
        return Weight(rs, tuple(rs.fundamental_weights[i - 1]))

    @cached_property
    def fw(self) -> tuple:
        return self.rs.fw_of_root_coords(self.root)

    @property
    def in_Q(self) -> bool:
        return all(x.denominator == 1 for x in self.root)

    @property
    def in_P(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.fw)

    @property
    def is_dominant(self) -> bool:
        return all(x >= 0 for x in self.fw)

    @property
    def is_dominant_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 and x >= 0 for x in self.fw)

    def __add__(self, other: "Weight") -> "Weight":
        assert self.rs == other.rs
        return Weight(self.rs, tuple(a + b for a, b in zip(self.root, other.root)))

    def __sub__(self, other: "Weight") -> "Weight":
        assert self.rs == other.rs
        return Weight(self.rs, tuple(a - b for a, b in zip(self.root, other.root)))

    def __neg__(self) -> "Weight":
        return Weight(self.rs, tuple(-a for a in self.root))

    def __mul__(self, k) -> "Weight":
        return Weight(self.rs, tuple(a * k for a in self.root))

    __rmul__ = __mul__

    def inner(self, other: "Weight") -> Fraction:
        return self.rs.inner(self.root, other.root)

    def __repr__(self):
        return f"Weight({self.rs}, fw={tuple(map(str, self.fw))})"


def weight_convert(rs: RootSystem, *, fw=None, root=None) -> Weight:
    """Build a Weight from either coordinate system; both become available
    on the result, along with the lattice membership flags."""
    if (fw is None) == (root is None):
        raise ValueError("give exactly one of fw= or root=")
    return Weight.from_fw(rs, fw) if fw is not None else Weight.from_root(rs, root)


@dataclass(frozen=True)
class WeylWord:
    """Sequence of simple-reflection indices (1-based, rightmost first)."""

    indices: tuple

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __repr__(self):
        return "WeylWord(" + ",".join(map(str, self.indices)) + ")"


def _check_indices(rs, indices):
    for i in indices:
        if not 1 <= i <= rs.rank:
            raise ValueError(f"reflection index {i} out of range 1..{rs.rank}")


def weyl_apply(rs: RootSystem, word: WeylWord, w: Weight) -> Weight:
    """Apply a Weyl word to a weight (rightmost reflection first)."""
    indices = tuple(word)
    _check_indices(rs, indices)
    y = list(w.root)
    for i in reversed(indices):
        c = sum(rs.cartan[i - 1][j] * y[j] for j in range(rs.rank))
        y[i - 1] -= c
    return Weight(rs, tuple(y))


def word_root_matrix(rs: RootSystem, word) -> tuple:
    """Integer matrix of the word's action on root coordinates."""
    indices = tuple(word)
    _check_indices(rs, indices)
    m = tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank))
    for i in indices:
        m = _mat_mul_int(m, rs._refl_root[i - 1])
    return m


def _mat_mul_int(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n))
                       for j in range(n)) for i in range(n))


def _mat_identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _column(m, j):
    return tuple(row[j] for row in m)


def _is_negative_root_vec(v):
    return all(x <= 0 for x in v) and any(x < 0 for x in v)


def reduced_word_of_matrix(rs: RootSystem, m) -> WeylWord:
    """Canonical reduced word of a Weyl element given by its root-coordinate
    matrix (greedy descent, smallest simple index first)."""
    ident = _mat_identity(rs.rank)
    word_rev = []
    guard = 4 * positive_root_count(rs.letter, rs.rank) + 4
    cur = m
    while cur != ident:
        if len(word_rev) > guard:
            raise IntegrityError("matrix is not a Weyl element")
        for i in range(1, rs.rank + 1):
            if _is_negative_root_vec(_column(cur, i - 1)):
                cur = _mat_mul_int(cur, rs._refl_root[i - 1])
                word_rev.append(i)
                break
        else:
            raise IntegrityError("matrix is not a Weyl element")
    return WeylWord(tuple(reversed(word_rev)))


def reduced_words(rs: RootSystem, m, limit: int):
    """Yield up to ``limit`` distinct reduced words for a Weyl element."""
    ident = _mat_identity(rs.rank)
    count = 0

    def rec(cur):
        nonlocal count
        if cur == ident:
            yield ()
            return
        for i in range(1, rs.rank + 1):
            if count >= limit:
                return
            if _is_negative_root_vec(_column(cur, i - 1)):
                for tail in rec(_mat_mul_int(cur, rs._refl_root[i - 1])):
                    yield tail + (i,)
                    if count >= limit:
                        return

    for w in rec(m):
        count += 1
        yield WeylWord(w)
        if count >= limit:
            return


def longest_word(rs: RootSystem, subset=None) -> WeylWord:
    """Reduced word of the longest element of the parabolic subgroup
    generated by a set of simple indices (full group by default).

    Deterministic: greedy descent with smallest-index tie-break.
    """
    if subset is None:
        subset = range(1, rs.rank + 1)
    subset = sorted(set(subset))
    _check_indices(rs, subset)
    if not subset:
        return WeylWord(())
    x = [int(i in subset) for i in range(1, rs.rank + 1)]  # fw coords
    word_rev = []
    while True:
        for i in subset:
            if x[i - 1] > 0:
                ci = x[i - 1]
                for k in range(rs.rank):
                    x[k] -= ci * rs.cartan[k][i - 1]
                word_rev.append(i)
                break
        else:
            break
    expected = len(rs.positive_roots_of_subset(subset))
    if len(word_rev) != expected:
        raise IntegrityError(
            f"longest word of {subset} in {rs} has length {len(word_rev)}, "
            f"expected {expected}")
    return WeylWord(tuple(reversed(word_rev)))


@lru_cache(maxsize=None)
def _weyl_order_subset(rs: RootSystem, subset: frozenset) -> int:
    if not subset:
        return 1
    i = min(subset)
    # orbit of fundamental weight i under the parabolic, in fw coordinates
    start = tuple(int(j == i) for j in range(1, rs.rank + 1))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for j in subset:
                c = v[j - 1]
                if c == 0:
                    continue
                w = tuple(v[k] - c * rs.cartan[k][j - 1] for k in range(rs.rank))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen) * _weyl_order_subset(rs, subset - {i})


def weyl_order(rs: RootSystem, subset=None) -> int:
    """Order of the (parabolic) Weyl group by orbit-stabilizer recursion."""
    if subset is None:
        subset = range(1, rs.rank + 1)
    subset = frozenset(subset)
    _check_indices(rs, sorted(subset))
    return _weyl_order_subset(rs, subset)


@lru_cache(maxsize=None)
def weyl_elements(rs: RootSystem, max_order: int = 60000):
    """All Weyl elements as (root-coordinate matrix, sign) pairs.

    Intended for small groups (multiplicity oracle, lift searches); refuses
    groups larger than ``max_order``.
    """
    order = weyl_order(rs)
    if order > max_order:
        raise CapabilityError(
            f"Weyl group of {rs} has order {order} > {max_order}")
    ident = _mat_identity(rs.rank)
    elems = {ident: 1}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            s = elems[m]
            for i in range(rs.rank):
                m2 = _mat_mul_int(m, rs._refl_root[i])
                if m2 not in elems:
                    elems[m2] = -s
                    nxt.append(m2)
        frontier = nxt
    if len(elems) != order:
        raise IntegrityError(f"enumerated {len(elems)} elements, expected {order}")
    return tuple(elems.items())


def weyl_dimension(rs: RootSystem, lam: Weight) -> int:
    """Dimension of the irreducible module of highest weight ``lam`` by the
    Weyl dimension formula, as an exact integer."""
    if not lam.is_dominant_integral:
        raise ValueError(f"weight {lam.fw} is not dominant integral")
    rho = rs.rho_root
    top = [a + b for a, b in zip(lam.root, rho)]
    num = Fraction(1)
    for alpha in rs.positive_roots:
        num *= Fraction(rs.inner(top, alpha), rs.inner(rho, alpha))
    assert num.denominator == 1 and num >= 1
    return int(num)
