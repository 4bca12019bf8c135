"""Catalog of real simple Lie algebras with restricted root data.

Every entry is reconstructed from its restriction projection and validated
at load time: the projection must be an orthogonal idempotent, the
anisotropic system must match the black-span rule, and the restricted
system must reproduce the cataloged type and multiplicities exactly.  A
failure raises IntegrityError, signalling wrong catalog data rather than a
recoverable condition.

The catalog itself ships as a versioned JSON file
(``data/catalog_v1.json``); users add real forms by extending the file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from . import linalg
from .errors import CatalogError, IntegrityError, SignTableGapError
from .rootsys import (RootSystem, Weight, WeylWord, build_root_system,
                      longest_word, reduced_word_of_matrix, weyl_elements,
                      word_root_matrix, _mat_mul_int)

_DATA_DIR = Path(__file__).parent / "data"
CATALOG_SCHEMA = "restweyl-catalog"
CATALOG_VERSION = 1
TABLE_SCHEMA = "restweyl-split-sign-table"
TABLE_VERSION = 1


# -- cone / sublattice predictions ---------------------------------------------

@dataclass(frozen=True)
class ConeSpec:
    """Nonvanishing prediction record: which dominant weights lambda are
    predicted to have a nonzero L-invariant subspace."""

    form: str                      # full_chamber | zero_only | subspace |
                                   # sublattice | unknown
    zero_fw: tuple = ()            # fw indices forced to zero (cone part)
    lattice_generators: tuple = () # rows spanning the index-2 sublattice
    parity: tuple = ()             # mod-2 functional cutting out the lattice

    @staticmethod
    def from_dict(rank: int, data: dict) -> "ConeSpec":
        form = data["form"]
        if form not in ("full_chamber", "zero_only", "subspace",
                        "sublattice", "unknown"):
            raise CatalogError(f"unknown cone form {form!r}")
        zero_fw = tuple(data.get("zero_fw") or ())
        for i in zero_fw:
            if not 1 <= i <= rank:
                raise CatalogError(f"cone zero_fw index {i} out of range")
        gens = data.get("lattice_generators")
        parity = ()
        if form == "sublattice":
            if not gens:
                raise CatalogError("sublattice cone needs lattice_generators")
            gens = tuple(tuple(int(x) for x in row) for row in gens)
            if len(gens) != rank or any(len(r) != rank for r in gens):
                raise CatalogError("lattice generators must be rank x rank")
            d = linalg.det([list(r) for r in gens])
            if abs(d) != 2:
                raise IntegrityError(
                    f"sublattice index is {abs(d)}, expected exactly 2")
            parity = _mod2_functional(gens)
        else:
            gens = ()
        return ConeSpec(form, zero_fw, gens, parity)

    def to_dict(self) -> dict:
        return {"form": self.form, "zero_fw": list(self.zero_fw),
                "lattice_generators":
                    [list(r) for r in self.lattice_generators] or None}

    def lattice_contains(self, w: Weight) -> bool:
        if not w.in_Q:
            return False
        return sum(p * int(y) for p, y in zip(self.parity, w.root)) % 2 == 0


def _mod2_functional(gens) -> tuple:
    """The nonzero functional phi over F_2 with G phi = 0; its kernel in Q
    is the index-2 sublattice spanned by the generator rows."""
    rank = len(gens)
    rows = [[x & 1 for x in row] for row in gens]
    piv_of_col = {}
    pr = 0
    for pc in range(rank):
        sel = next((i for i in range(pr, len(rows)) if rows[i][pc]), None)
        if sel is None:
            continue
        rows[pr], rows[sel] = rows[sel], rows[pr]
        for i in range(len(rows)):
            if i != pr and rows[i][pc]:
                rows[i] = [(a + b) & 1 for a, b in zip(rows[i], rows[pr])]
        piv_of_col[pc] = pr
        pr += 1
    free = [c for c in range(rank) if c not in piv_of_col]
    if len(free) != 1:
        raise IntegrityError("sublattice generators do not have 2-quotient Z/2")
    f = free[0]
    phi = [0] * rank
    phi[f] = 1
    for pc, t in piv_of_col.items():
        phi[pc] = rows[t][f]
    return tuple(phi)


# -- catalog entries -------------------------------------------------------------

class RealFormEntry:
    """One real simple Lie algebra with validated restricted-root data."""

    def __init__(self, record: dict):
        self.label = record["label"]
        self.family = record.get("family", "")
        self.params = tuple(record.get("params", ()))
        letter, rank = record["ambient"]
        self.rs = build_root_system(letter, int(rank))
        r = self.rs.rank
        proj = record["projection"]
        if len(proj) != r or any(len(row) != r for row in proj):
            raise CatalogError(f"{self.label}: projection must be {r}x{r}")
        self.projection = tuple(tuple(Fraction(str(x)) for x in row)
                                for row in proj)
        self.black = tuple(int(i) for i in record["black"])
        self.restricted_rank = int(record["restricted_rank"])
        sig = record["sigma"]
        self.sigma_type = sig["type"]
        self.sigma_rank = int(sig["rank"])
        self.sigma_class_mults = tuple(int(x) for x in sig["class_mults"])
        self.delta0_count = int(record["delta0_count"])
        self.cone = ConeSpec.from_dict(r, record["cone"])
        self._lift_word = None
        self._validate()

    # -- basic maps ----------------------------------------------------------

    def project(self, coords):
        """Apply the restriction projection to root coordinates."""
        r = self.rs.rank
        return tuple(sum(self.projection[i][j] * coords[j]
                         for j in range(r) if coords[j])
                     for i in range(r))

    def restricts_to_zero(self, coords) -> bool:
        return all(x == 0 for x in self.project(coords))

    @property
    def is_split(self) -> bool:
        return self._split

    @property
    def is_compact(self) -> bool:
        return self._compact

    # -- validation ------------------------------------------------------------

    def _validate(self):
        rs, P = self.rs, self.projection
        r = rs.rank
        ident = linalg.identity(r)
        if not linalg.mat_eq(linalg.mat_mul(P, P), P):
            raise IntegrityError(f"{self.label}: projection is not idempotent")
        B = [[Fraction(x) for x in row] for row in rs.bilinear]
        if not linalg.mat_eq(linalg.mat_mul(B, P),
                             linalg.mat_mul(_transpose(P), B)):
            raise IntegrityError(f"{self.label}: projection is not self-adjoint")
        if linalg.rank(P) != self.restricted_rank:
            raise IntegrityError(f"{self.label}: projection rank differs from "
                                 "the declared restricted rank")
        black = tuple(j + 1 for j in range(r)
                      if all(P[i][j] == 0 for i in range(r)))
        if black != self.black:
            raise IntegrityError(
                f"{self.label}: black set from projection {black} differs "
                f"from catalog {self.black}")
        black0 = {i - 1 for i in self.black}
        delta0 = []
        sigma = {}
        for alpha in rs.all_roots():
            img = self.project(alpha)
            if all(x == 0 for x in img):
                delta0.append(alpha)
                if not all(j in black0 for j, x in enumerate(alpha) if x):
                    raise IntegrityError(
                        f"{self.label}: anisotropic root {alpha} is not "
                        "supported on the black simple roots")
            else:
                sigma[img] = sigma.get(img, 0) + 1
        for alpha in rs.all_roots():
            if all(j in black0 for j, x in enumerate(alpha) if x):
                if not self.restricts_to_zero(alpha):
                    raise IntegrityError(
                        f"{self.label}: black-span root {alpha} does not "
                        "restrict to zero")
        if len(delta0) != self.delta0_count:
            raise IntegrityError(
                f"{self.label}: |Delta_0| = {len(delta0)}, catalog says "
                f"{self.delta0_count}")
        if len(delta0) + sum(sigma.values()) != 2 * len(rs.positive_roots):
            raise IntegrityError(f"{self.label}: root count mismatch")
        self.delta0 = tuple(sorted(delta0))
        self.delta0_basis = self.black
        # positivity: images of positive roots give Sigma+, and Sigma is
        # the disjoint union of Sigma+ and -Sigma+
        plus = {}
        for alpha in rs.positive_roots:
            img = self.project(alpha)
            if any(x != 0 for x in img):
                plus[img] = plus.get(img, 0) + 1
        minus = {tuple(-x for x in s): m for s, m in plus.items()}
        if set(plus) & set(minus) or {**plus, **minus} != sigma or \
                any(sigma[s] != m for s, m in plus.items()):
            raise IntegrityError(
                f"{self.label}: restricted system is not split into "
                "positive/negative halves")
        self.sigma_mults = dict(sorted(sigma.items()))
        self.sigma_plus = dict(sorted(plus.items()))
        self._split = not self.black and linalg.mat_eq(
            [list(row) for row in P], ident)
        self._compact = all(x == 0 for row in P for x in row)
        self._validate_sigma_structure()
        self._validate_reflection_closure()

    def _validate_sigma_structure(self):
        rs = self.rs
        if self.sigma_type is None:
            if self.sigma_mults:
                raise IntegrityError(f"{self.label}: compact entry with "
                                     "nonempty restricted system")
            if self.restricted_rank != 0:
                raise IntegrityError(f"{self.label}: compact entry with "
                                     "positive restricted rank")
            return
        classes = {}
        for s, mult in self.sigma_mults.items():
            classes.setdefault(rs.inner(s, s), {}).setdefault(mult, 0)
            classes[rs.inner(s, s)][mult] += 1
        lens = sorted(classes)
        layout = _class_layout(self.sigma_type, self.sigma_rank)
        if len(lens) != len(layout):
            raise IntegrityError(
                f"{self.label}: restricted system has {len(lens)} length "
                f"classes, type {self.sigma_type}{self.sigma_rank} needs "
                f"{len(layout)}")
        base = lens[0]
        for (ratio, count), ln, mult in zip(layout, lens,
                                            self.sigma_class_mults):
            if ln != base * ratio:
                raise IntegrityError(f"{self.label}: restricted length ratios "
                                     f"do not match {self.sigma_type}")
            got = classes[ln]
            if got != {mult: count}:
                raise IntegrityError(
                    f"{self.label}: length class {ln} has (mult: count) "
                    f"{got}, expected {{{mult}: {count}}}")
        span = linalg.rank([list(s) for s in self.sigma_mults])
        if span != self.restricted_rank:
            raise IntegrityError(f"{self.label}: restricted system spans "
                                 f"rank {span} != {self.restricted_rank}")

    def _validate_reflection_closure(self):
        rs = self.rs
        roots = list(self.sigma_mults)
        rootset = set(roots)
        for tau in roots:
            tt = rs.inner(tau, tau)
            for s in roots:
                c = 2 * rs.inner(s, tau) / tt
                refl = tuple(a - c * b for a, b in zip(s, tau))
                if refl not in rootset:
                    raise IntegrityError(
                        f"{self.label}: restricted system is not closed "
                        f"under the reflection along {tau}")


def _transpose(m):
    return [list(col) for col in zip(*m)]


def _class_layout(typ: str, rank: int):
    """Abstract (length-ratio, root-count) classes of a restricted type,
    ascending by length."""
    if typ == "A":
        return [(1, rank * (rank + 1))]
    if typ == "B":
        return [(1, 2 * rank)] if rank == 1 else \
            [(1, 2 * rank), (2, 2 * rank * (rank - 1))]
    if typ == "C":
        return [(1, 2 * rank)] if rank == 1 else \
            [(1, 2 * rank * (rank - 1)), (2, 2 * rank)]
    if typ == "D":
        return [(1, 2 * rank * (rank - 1))]
    if typ == "BC":
        return [(1, 2), (4, 2)] if rank == 1 else \
            [(1, 2 * rank), (2, 2 * rank * (rank - 1)), (4, 2 * rank)]
    if typ == "G":
        return [(1, 6), (3, 6)]
    if typ == "F":
        return [(1, 24), (2, 24)]
    if typ == "E":
        return [(1, {6: 72, 7: 126, 8: 240}[rank])]
    raise CatalogError(f"unknown restricted type {typ!r}")


def identify_subsystem_label(rs: RootSystem, indices) -> str:
    """Human-readable type of the subsystem generated by a set of simple
    roots, e.g. "B3", "A1+A1+C2".  Components are identified from the
    Cartan submatrix (bond multiplicities, branch arms, symmetrizers)."""
    nodes = sorted(i - 1 for i in indices)
    if not nodes:
        return "0"
    adj = {a: [] for a in nodes}
    for a in nodes:
        for b in nodes:
            if a != b and rs.cartan[a][b] != 0:
                adj[a].append(b)
    seen = set()
    labels = []
    for start in nodes:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = [start]
        while queue:
            x = queue.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        labels.append(_component_label(rs, sorted(comp), adj))
    return "+".join(sorted(labels))


def _component_label(rs, comp, adj) -> str:
    k = len(comp)
    if k == 1:
        return "A1"
    bonds = {}
    for a in comp:
        for b in adj[a]:
            if a < b:
                bonds[(a, b)] = rs.cartan[a][b] * rs.cartan[b][a]
    if any(m == 3 for m in bonds.values()):
        return "G2"
    degrees = {a: len([b for b in adj[a] if b in comp]) for a in comp}
    if any(m == 2 for m in bonds.values()):
        if k == 2:
            return "B2"
        (a, b), = [e for e, m in bonds.items() if m == 2]
        if degrees[a] == 2 and degrees[b] == 2:
            return "F4"
        end = a if degrees[a] == 1 else b
        other = b if end == a else a
        # short end node => B, long end node => C
        return (f"B{k}" if rs.sym[end] < rs.sym[other] else f"C{k}")
    branch = [a for a in comp if degrees[a] == 3]
    if branch:
        arms = sorted(_arm_lengths(branch[0], comp, adj))
        if arms[:2] == [1, 1]:
            return f"D{k}"
        return f"E{k}"
    return f"A{k}"


def _arm_lengths(center, comp, adj):
    out = []
    for first in adj[center]:
        if first not in comp:
            continue
        length = 1
        prev, cur = center, first
        while True:
            nxt = [x for x in adj[cur] if x != prev and x in comp]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        out.append(length)
    return out


# -- catalog loading ---------------------------------------------------------------

@lru_cache(maxsize=1)
def _catalog_raw() -> dict:
    path = _DATA_DIR / "catalog_v1.json"
    data = json.loads(path.read_text())
    if data.get("schema") != CATALOG_SCHEMA or data.get("version") != CATALOG_VERSION:
        raise CatalogError(f"catalog file {path} has unsupported schema/version")
    return {rec["label"]: rec for rec in data["entries"]}


def _normalize_label(label: str) -> str:
    return label.lower().replace(" ", "")


@lru_cache(maxsize=1)
def _alias_map() -> dict:
    aliases = {}
    for label in _catalog_raw():
        aliases[_normalize_label(label)] = label
        short = (label.replace("(", "").replace(")", "").replace(",", "")
                 .replace("-compact", "c").replace("*", "star").lower())
        aliases.setdefault(short, label)
    aliases.setdefault("g2s", "g2(2)")
    aliases.setdefault("f4s", "f4(4)")
    aliases.setdefault("e6s", "e6(6)")
    return aliases


def catalog_labels() -> list:
    return list(_catalog_raw())


@lru_cache(maxsize=None)
def catalog_entry(label: str) -> RealFormEntry:
    """Look up (and validate) a catalog entry by label or alias."""
    raw = _catalog_raw()
    if label not in raw:
        key = _alias_map().get(_normalize_label(label))
        if key is None:
            raise CatalogError(
                f"unknown real form {label!r}; see `restweyl describe --list` "
                "for the available labels")
        label = key
    return RealFormEntry(raw[label])


def restricted_system(entry: RealFormEntry):
    """(restricted roots with multiplicities, anisotropic roots, basis of
    the anisotropic subsystem as simple-root indices)."""
    return entry.sigma_mults, entry.delta0, entry.delta0_basis


# -- the lift of the longest restricted Weyl element ---------------------------------

def _lift_valid(entry: RealFormEntry, m) -> bool:
    rs = entry.rs
    r = rs.rank
    mf = [[Fraction(m[i][j]) for j in range(r)] for i in range(r)]
    pf = [list(row) for row in entry.projection]
    if not linalg.mat_eq(linalg.mat_mul(mf, pf), linalg.mat_mul(pf, mf)):
        return False
    plus = set(entry.sigma_plus)
    for s in plus:
        img = tuple(sum(m[i][j] * s[j] for j in range(r)) for i in range(r))
        if tuple(-x for x in img) not in plus:
            return False
    return True


def _search_lift(entry: RealFormEntry):
    """Exhaustive fallback: minimal-length valid element, words tie-broken
    lexicographically."""
    best = None
    for m, _sign in weyl_elements(entry.rs):
        if _lift_valid(entry, m):
            word = reduced_word_of_matrix(entry.rs, m)
            key = (len(word), word.indices)
            if best is None or key < best[0]:
                best = (key, m)
    if best is None:
        raise IntegrityError(
            f"{entry.label}: no valid lift of the restricted longest element")
    return best[1]


def restricted_w0_lift(entry: RealFormEntry) -> WeylWord:
    """Reduced word (in the ambient Weyl group) of the canonical lift of the
    longest restricted Weyl element.

    The closed-form candidate w0(Delta_0) . w0(Delta) is tried first and
    verified; on failure an exhaustive minimal-length search runs.  Compact
    entries get the identity word (the restricted group is trivial).
    """
    if entry._lift_word is not None:
        return entry._lift_word
    rs = entry.rs
    if entry.is_compact:
        entry._lift_word = WeylWord(())
        return entry._lift_word
    mb = word_root_matrix(rs, longest_word(rs, entry.black))
    mf = word_root_matrix(rs, longest_word(rs))
    cand = _mat_mul_int(mb, mf)
    if not _lift_valid(entry, cand):
        cand = _search_lift(entry)
    word = reduced_word_of_matrix(rs, cand)
    # postconditions: involution on a*, stabilizes the anisotropic system
    r = rs.rank
    sq = _mat_mul_int(cand, cand)
    sqf = [[Fraction(sq[i][j]) for j in range(r)] for i in range(r)]
    pf = [list(row) for row in entry.projection]
    if not linalg.mat_eq(linalg.mat_mul(sqf, pf), pf):
        raise IntegrityError(f"{entry.label}: lift squared is not the "
                             "identity on the restricted space")
    d0 = set(entry.delta0)
    for alpha in entry.delta0:
        img = tuple(sum(cand[i][j] * alpha[j] for j in range(r))
                    for i in range(r))
        if img not in d0:
            raise IntegrityError(f"{entry.label}: lift does not permute the "
                                 "anisotropic roots")
    entry._lift_word = word
    return word


# -- predictions ----------------------------------------------------------------------

def predict_nonvanishing(entry: RealFormEntry, lam: Weight) -> str:
    """Catalog prediction for V_lambda^L != 0: "Nonzero", "Zero" or
    "Unknown" (entries without paper-stated cone data)."""
    if not lam.is_dominant_integral:
        raise ValueError(f"weight {lam.fw} is not dominant integral")
    cone = entry.cone
    if cone.form == "unknown":
        return "Unknown"
    if cone.form == "zero_only":
        return "Nonzero" if all(c == 0 for c in lam.fw) else "Zero"
    if not lam.in_Q:
        return "Zero"
    if cone.form == "full_chamber":
        return "Nonzero"
    in_cone = all(lam.fw[i - 1] == 0 for i in cone.zero_fw)
    if cone.form == "subspace":
        return "Nonzero" if in_cone else "Zero"
    # sublattice form: X = Lambda intersect C
    return "Nonzero" if in_cone and cone.lattice_contains(lam) else "Zero"


# -- split sign table -------------------------------------------------------------------

@dataclass(frozen=True)
class SignRow:
    """Generated classification data for lambda = k p_i varpi_i on a split
    algebra: smallest p_i with p_i varpi_i in Q, the scalar range m_i
    (0, 1, 2, "inf", or None when the regeneration could not decide), the
    sign sigma_i, and how far k was actually verified."""

    letter: str
    rank: int
    i: int
    p: int
    m: object
    sigma: object
    verified_k: int


class SplitSignTable:
    def __init__(self, rows):
        self.rows = {(r.letter, r.rank, r.i): r for r in rows}

    def get(self, letter: str, rank: int, i: int):
        return self.rows.get((letter, rank, i))

    def to_json(self) -> dict:
        return {"schema": TABLE_SCHEMA, "version": TABLE_VERSION,
                "rows": [{"type": r.letter, "rank": r.rank, "i": r.i,
                          "p": r.p, "m": r.m, "sigma": r.sigma,
                          "verified_k": r.verified_k}
                         for _, r in sorted(self.rows.items())]}

    @staticmethod
    def from_json(data: dict) -> "SplitSignTable":
        if data.get("schema") != TABLE_SCHEMA or data.get("version") != TABLE_VERSION:
            raise CatalogError("split sign table has unsupported schema/version")
        rows = [SignRow(d["type"], int(d["rank"]), int(d["i"]), int(d["p"]),
                        d["m"], d["sigma"], int(d["verified_k"]))
                for d in data["rows"]]
        return SplitSignTable(rows)


@lru_cache(maxsize=1)
def load_default_sign_table() -> SplitSignTable:
    path = _DATA_DIR / "split_sign_table_v1.json"
    return SplitSignTable.from_json(json.loads(path.read_text()))


def smallest_multiple_in_q(rs: RootSystem, i: int) -> int:
    """Smallest positive p with p varpi_i in the root lattice."""
    import math as _math
    return _math.lcm(*[f.denominator for f in rs.fundamental_weights[i - 1]])


def predict_split_sign(entry: RealFormEntry, lam: Weight,
                       table: SplitSignTable | None = None) -> str:
    """Theorem-3-style decision for split entries: "PlusId"/"MinusId" when
    lambda = k p_i varpi_i with k within the scalar range, "NonScalar" for
    every other root-lattice weight, "Empty" outside the root lattice.

    Raises SignTableGapError when the generated table has no verified row
    covering the requested k.
    """
    if not entry.is_split:
        raise ValueError(f"{entry.label} is not split")
    if not lam.is_dominant_integral:
        raise ValueError(f"weight {lam.fw} is not dominant integral")
    if not lam.in_Q:
        return "Empty"
    if table is None:
        table = load_default_sign_table()
    support = [i + 1 for i, c in enumerate(lam.fw) if c != 0]
    if not support:
        return "PlusId"
    if len(support) > 1:
        return "NonScalar"
    i = support[0]
    row = table.get(entry.rs.letter, entry.rs.rank, i)
    if row is None:
        raise SignTableGapError(
            f"no sign-table row for {entry.rs} fundamental weight {i}; "
            "run `restweyl regen-table`")
    c = int(lam.fw[i - 1])
    if c % row.p:
        raise IntegrityError("root-lattice weight with coordinate not "
                             "divisible by p_i")
    k = c // row.p
    if row.m == "inf":
        scalar = True
    elif row.m is None:
        if k <= row.verified_k:
            scalar = True
        else:
            raise SignTableGapError(
                f"sign table row for {entry.rs} varpi_{i} is only verified "
                f"through k = {row.verified_k}, requested k = {k}")
    else:
        scalar = k <= int(row.m)
    if not scalar:
        return "NonScalar"
    if row.sigma is None:
        raise SignTableGapError(f"sign table row for {entry.rs} varpi_{i} "
                                "has no sign recorded")
    return "PlusId" if int(row.sigma) ** k == 1 else "MinusId"
