"""Explicit construction of irreducible highest-weight modules over Q.

The module is realized as the irreducible quotient of a truncated Verma
module: basis vectors are selected lowering-operator images of the highest
vector, independence is decided by the contravariant (Shapovalov) form per
weight space, and the raising action is recovered by the commutation
recursion ``E_j F_i = F_i E_j + delta_ij H_j``.  All matrices are exact
rational, stored as small dense blocks per weight space (generators shift
weights by one simple root, so nothing global is ever materialized).

Blocks are kept in scaled-integer form ("qblocks"): a pair
``(rows, den)`` of an integer matrix and a positive denominator, so the
hot paths run through the integer kernels of :mod:`restweyl.linalg`.

Weight bookkeeping uses "depth keys": the integer coordinate vector of
``lambda - mu`` in the root basis.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .errors import CapabilityError, CapacityError, IntegrityError
from .rootsys import RootSystem, Weight, weyl_dimension, weyl_elements

_QZERO = Fraction(0)


def _key_sub(key, i):
    return key[:i] + (key[i] - 1,) + key[i + 1:]


def _key_add(key, i):
    return key[:i] + (key[i] + 1,) + key[i + 1:]


# -- scaled-integer blocks --------------------------------------------------

def qb_new(rows, den=1):
    """Normalize a (rows, den) pair: positive den, content gcd divided out."""
    g = abs(den)
    for row in rows:
        for x in row:
            if x:
                g = math.gcd(g, x)
                if g == 1:
                    break
        if g == 1:
            break
    if den < 0:
        g = -g
    if g not in (0, 1):
        rows = [[x // g for x in row] for row in rows]
        den //= g
    return rows, den


def qb_from_fractions(mat):
    rows, den = linalg.to_int_rows(mat)
    return rows, den


def qb_entry(qb, a, b) -> Fraction:
    rows, den = qb
    return Fraction(rows[a][b], den)


def qb_to_fractions(qb):
    rows, den = qb
    return [[Fraction(x, den) for x in row] for row in rows]


def qb_matmul(a, b):
    ra, da = a
    rb, db = b
    return qb_new(linalg.kernel().matmul(ra, rb), da * db)


def qb_is_zero(qb):
    return all(not any(row) for row in qb[0])


def qb_sub(a, b):
    ra, da = a
    rb, db = b
    rows = [[x * db - y * da for x, y in zip(rowa, rowb)]
            for rowa, rowb in zip(ra, rb)]
    return qb_new(rows, da * db)


def qb_zero(nrows, ncols):
    return [[0] * ncols for _ in range(nrows)], 1


# -- weight multiplicities ---------------------------------------------------

@lru_cache(maxsize=64)
def _weight_diagram(rs: RootSystem, lam_fw: tuple) -> dict:
    """All weight multiplicities of V_lambda by the Freudenthal recursion,
    keyed by depth vector.  Exact integer arithmetic throughout (weights
    are scaled to clear denominators)."""
    r = rs.rank
    lam = Weight.from_fw(rs, lam_fw)
    s = math.lcm(*[x.denominator for x in lam.root],
                 *[x.denominator for x in rs.rho_root])
    lam_s = [int(x * s) for x in lam.root]
    rho_s = [int(x * s) for x in rs.rho_root]
    top_s = [a + b for a, b in zip(lam_s, rho_s)]  # s*(lambda+rho)
    bil = rs.bilinear

    def ip(u, v):
        return sum(u[i] * sum(bil[i][j] * v[j] for j in range(r) if v[j])
                   for i in range(r) if u[i])

    c0 = ip(top_s, top_s)
    pos_s = [tuple(s * a for a in alpha) for alpha in rs.positive_roots]
    mults = {tuple(0 for _ in range(r)): 1}
    frontier = [tuple(0 for _ in range(r))]
    while frontier:
        candidates = set()
        for key in frontier:
            for i in range(r):
                candidates.add(_key_add(key, i))
        frontier = []
        for key in sorted(candidates):
            mu_rho_s = [t - s * k for t, k in zip(top_s, key)]  # s*(mu+rho)
            denom = c0 - ip(mu_rho_s, mu_rho_s)
            if denom <= 0:
                continue
            mu_s = [a - b for a, b in zip(mu_rho_s, rho_s)]
            acc = 0
            for alpha, alpha_s in zip(rs.positive_roots, pos_s):
                k = 1
                while True:
                    key2 = tuple(a - k * b for a, b in zip(key, alpha))
                    if any(x < 0 for x in key2):
                        break
                    m2 = mults.get(key2, 0)
                    if m2:
                        vec = [a + k * b for a, b in zip(mu_s, alpha_s)]
                        acc += m2 * ip(vec, alpha_s)
                    k += 1
            if acc == 0:
                continue
            num = 2 * acc
            if num % denom:
                raise IntegrityError("Freudenthal recursion: inexact division")
            m = num // denom
            if m > 0:
                mults[key] = m
                frontier.append(key)
    return mults


def multiplicity_freudenthal(rs: RootSystem, lam: Weight, mu: Weight) -> int:
    """Multiplicity of weight ``mu`` in V_lambda (0 outside the diagram)."""
    if not lam.is_dominant_integral:
        raise ValueError(f"highest weight {lam.fw} is not dominant integral")
    diff = lam - mu
    if not diff.in_Q:
        return 0
    key = tuple(int(x) for x in diff.root)
    if any(x < 0 for x in key):
        return 0
    return _weight_diagram(rs, tuple(lam.fw)).get(key, 0)


@lru_cache(maxsize=8)
def _kostant_table(rs: RootSystem, box: tuple) -> dict:
    """Kostant partition function on the integer box [0, box]: number of
    ways to write each depth vector as a nonnegative-integer combination
    of positive roots (unbounded knapsack over the lattice box)."""
    import itertools
    grid = sorted(itertools.product(*(range(b + 1) for b in box)),
                  key=lambda v: (sum(v), v))
    counts = {v: 0 for v in grid}
    counts[grid[0]] = 1
    for alpha in rs.positive_roots:
        for v in grid:
            prev = tuple(a - b for a, b in zip(v, alpha))
            if all(x >= 0 for x in prev):
                counts[v] += counts[prev]
    return counts


def multiplicity_oracle(rs: RootSystem, lam: Weight, mu: Weight) -> int:
    """Weight multiplicity by the Weyl-Kostant alternating sum; independent
    cross-check of the Freudenthal path.  Rank <= 3 only."""
    if rs.rank > 3:
        raise CapabilityError("multiplicity oracle supports rank <= 3 only")
    if not lam.is_dominant_integral:
        raise ValueError(f"highest weight {lam.fw} is not dominant integral")
    if not (lam - mu).in_Q:
        return 0
    r = rs.rank
    elements = weyl_elements(rs)
    # box bound: componentwise depth of the lowest orbit point of lambda
    depth_bound = [Fraction(0)] * r
    for w_mat, _ in elements:
        img = [sum(w_mat[i][j] * lam.root[j] for j in range(r)) for i in range(r)]
        for i in range(r):
            d = lam.root[i] - img[i]
            if d > depth_bound[i]:
                depth_bound[i] = d
    depth = [a - b for a, b in zip(lam.root, mu.root)]
    if any(d < 0 or d > bound for d, bound in zip(depth, depth_bound)):
        return 0  # outside the convex hull of the orbit of lambda
    table = _kostant_table(rs, tuple(int(d) for d in depth_bound))
    lam_rho = [a + b for a, b in zip(lam.root, rs.rho_root)]
    mu_rho = [a + b for a, b in zip(mu.root, rs.rho_root)]
    total = 0
    for w_mat, sign in elements:
        img = [sum(w_mat[i][j] * lam_rho[j] for j in range(r)) for i in range(r)]
        v = []
        ok = True
        for i in range(r):
            x = img[i] - mu_rho[i]
            if Fraction(x).denominator != 1 or x < 0:
                ok = False
                break
            v.append(int(x))
        if ok:
            total += sign * table.get(tuple(v), 0)
    if total < 0:
        raise IntegrityError("negative multiplicity from the alternating sum")
    return total


# -- the module ---------------------------------------------------------------

class IrreducibleModule:
    """Explicit weight-basis model of the irreducible module V_lambda.

    Attributes:
        rs, highest: ambient system and highest weight.
        keys: depth keys in construction order (level, then lex).
        dims: dict key -> weight-space dimension.
        e_blocks[i][key], f_blocks[i][key]: generator qblocks; the E block
            at ``key`` maps that weight space to the one at ``key - e_i``
            and the F block to ``key + e_i``.  Columns are images of basis
            vectors.
        gram: dict key -> contravariant-form Gram qblock on the basis.
    """

    def __init__(self, rs, highest, keys, dims, e_blocks, f_blocks, gram):
        self.rs = rs
        self.highest = highest
        self.keys = keys
        self.dims = dims
        self.e_blocks = e_blocks
        self.f_blocks = f_blocks
        self.gram = gram
        self.dim = sum(dims.values())

    # -- structure --------------------------------------------------------

    def weight_of_key(self, key) -> Weight:
        return Weight(self.rs, tuple(a - b for a, b in zip(self.highest.root, key)))

    def h_eigenvalue(self, i: int, key) -> int:
        """Eigenvalue of H_i on the weight space at ``key`` (integer)."""
        col = sum(self.rs.cartan[i][j] * key[j] for j in range(self.rs.rank))
        return int(self.highest.fw[i]) - col

    @property
    def zero_key(self):
        """Depth key of the zero weight space, or None when 0 is not a
        weight (lambda outside the root lattice)."""
        if not self.highest.in_Q:
            return None
        key = tuple(int(x) for x in self.highest.root)
        return key if key in self.dims else None

    def character(self) -> dict:
        return dict(self.dims)

    def highest_vector(self) -> dict:
        top = tuple(0 for _ in range(self.rs.rank))
        return {top: [Fraction(1)]}

    # -- vector operations (sparse dict key -> list of Fractions) ----------

    def _apply_blocks(self, blocks, step, vec):
        out = {}
        for key, coeffs in vec.items():
            qb = blocks.get(key)
            if qb is None:
                continue
            rows, den = qb
            tkey = step(key)
            acc = out.setdefault(tkey, [_QZERO] * self.dims[tkey])
            for row in range(len(rows)):
                rr = rows[row]
                s = sum(c * v for c, v in zip(coeffs, rr) if v)
                if s:
                    acc[row] += Fraction(s, den) if den != 1 else s
        return {k: v for k, v in out.items() if any(v)}

    def apply_e(self, i: int, vec: dict) -> dict:
        return self._apply_blocks(self.e_blocks[i], lambda k: _key_sub(k, i), vec)

    def apply_f(self, i: int, vec: dict) -> dict:
        return self._apply_blocks(self.f_blocks[i], lambda k: _key_add(k, i), vec)

    def apply_h(self, i: int, vec: dict) -> dict:
        out = {}
        for key, coeffs in vec.items():
            h = self.h_eigenvalue(i, key)
            if h:
                out[key] = [h * c for c in coeffs]
        return out

    def gram_pair(self, u: dict, v: dict) -> Fraction:
        """Contravariant form of two sparse vectors."""
        total = _QZERO
        for key, cu in u.items():
            cv = v.get(key)
            if cv is None:
                continue
            rows, den = self.gram[key]
            s = _QZERO
            for a, xa in enumerate(cu):
                if xa:
                    ra = rows[a]
                    s += xa * sum(ra[b] * cv[b] for b in range(len(cv)) if cv[b])
            total += s / den
        return total

    # -- verification -------------------------------------------------------

    def verify_relations(self, serre: bool = True) -> None:
        """Check the Chevalley relations as exact matrix identities; raises
        IntegrityError on any failure."""
        r = self.rs.rank
        for key in self.keys:
            n = self.dims[key]
            for i in range(r):
                for j in range(r):
                    # E_i F_j - F_j E_i maps this space to key + e_j - e_i
                    tk = _key_add(_key_sub(key, i), j)
                    rows = self.dims.get(tk)
                    ef = None
                    b1 = self.f_blocks[j].get(key)
                    if b1 is not None:
                        b2 = self.e_blocks[i].get(_key_add(key, j))
                        if b2 is not None:
                            ef = qb_matmul(b2, b1)
                    fe = None
                    b1 = self.e_blocks[i].get(key)
                    if b1 is not None:
                        b2 = self.f_blocks[j].get(_key_sub(key, i))
                        if b2 is not None:
                            fe = qb_matmul(b2, b1)
                    if rows is None:
                        if ef is not None or fe is not None:
                            raise IntegrityError(
                                f"generator block escapes the diagram at {key}")
                        continue
                    if ef is None and fe is None:
                        diff = qb_zero(rows, n)
                    elif ef is None:
                        fr, fd = fe
                        diff = [[-x for x in row] for row in fr], fd
                    elif fe is None:
                        diff = ef
                    else:
                        diff = qb_sub(ef, fe)
                    if i == j:
                        h = self.h_eigenvalue(i, key)
                        ident = ([[h * int(a == b) for b in range(n)]
                                  for a in range(n)], 1)
                        diff = qb_sub(diff, ident)
                    if not qb_is_zero(diff):
                        raise IntegrityError(
                            f"[E_{i+1}, F_{j+1}] relation fails at key {key}")
        for i in range(r):
            for j in range(r):
                cij = self.rs.cartan[i][j]
                for key in self.keys:
                    if self.e_blocks[j].get(key) is None:
                        continue
                    hi_src = self.h_eigenvalue(i, key)
                    hi_dst = self.h_eigenvalue(i, _key_sub(key, j))
                    if hi_dst - hi_src != cij:
                        raise IntegrityError("[H_i, E_j] relation fails")
        if serre:
            for i in range(r):
                for j in range(r):
                    if i == j:
                        continue
                    m = 1 - self.rs.cartan[i][j]
                    if not self._serre_vanishes(self.e_blocks, i, j, m, -1):
                        raise IntegrityError(
                            f"Serre relation ad(E_{i+1})^{m}(E_{j+1}) != 0")
                    if not self._serre_vanishes(self.f_blocks, i, j, m, +1):
                        raise IntegrityError(
                            f"Serre relation ad(F_{i+1})^{m}(F_{j+1}) != 0")

    def _serre_vanishes(self, blocks, i, j, m, shift_sign):
        op = _BlockOp.from_blocks(self, blocks[j], j, shift_sign)
        gen = _BlockOp.from_blocks(self, blocks[i], i, shift_sign)
        for _ in range(m):
            op = gen.commutator(op)
        return op.is_zero()


class _BlockOp:
    """Weight-graded operator: depth-shift vector plus per-key qblocks."""

    def __init__(self, module, shift, blocks):
        self.module = module
        self.shift = shift
        self.blocks = blocks

    @staticmethod
    def from_blocks(module, blocks, idx, sign):
        r = module.rs.rank
        shift = tuple(sign * int(idx == t) for t in range(r))
        return _BlockOp(module, shift, dict(blocks))

    def compose(self, other):
        # self o other
        shift = tuple(a + b for a, b in zip(self.shift, other.shift))
        blocks = {}
        for key, b1 in other.blocks.items():
            mid = tuple(a + b for a, b in zip(key, other.shift))
            b2 = self.blocks.get(mid)
            if b2 is None:
                continue
            prod = qb_matmul(b2, b1)
            if not qb_is_zero(prod):
                blocks[key] = prod
        return _BlockOp(self.module, shift, blocks)

    def sub(self, other):
        assert self.shift == other.shift
        blocks = dict(self.blocks)
        for key, b in other.blocks.items():
            if key in blocks:
                diff = qb_sub(blocks[key], b)
                if qb_is_zero(diff):
                    del blocks[key]
                else:
                    blocks[key] = diff
            else:
                blocks[key] = ([[-x for x in row] for row in b[0]], b[1])
        return _BlockOp(self.module, self.shift, blocks)

    def commutator(self, other):
        return self.compose(other).sub(other.compose(self))

    def is_zero(self):
        return all(qb_is_zero(b) for b in self.blocks.values())


def build_module(rs: RootSystem, lam: Weight, dim_cap: int = 5000,
                 check: str = "full") -> IrreducibleModule:
    """Construct V_lambda explicitly.

    ``check`` is one of "none", "commutators", "full" (adds the Serre
    relations).  Construction always verifies weight-space dimensions
    against the Freudenthal recursion and the total dimension against the
    Weyl dimension formula.
    """
    if not lam.is_dominant_integral:
        raise ValueError(f"highest weight {lam.fw} is not dominant integral")
    dim = weyl_dimension(rs, lam)
    if dim > dim_cap:
        raise CapacityError(
            f"module dimension {dim} exceeds cap {dim_cap}", dim, dim_cap)
    r = rs.rank
    kern = linalg.kernel()
    mults = _weight_diagram(rs, tuple(lam.fw))
    if sum(mults.values()) != dim:
        raise IntegrityError("Freudenthal total differs from Weyl dimension")
    keys = sorted(mults, key=lambda k: (sum(k), k))
    dims = {}
    e_blocks = [dict() for _ in range(r)]
    f_blocks = [dict() for _ in range(r)]
    gram = {}
    top = keys[0]
    dims[top] = 1
    gram[top] = ([[1]], 1)
    lam_fw = [int(c) for c in lam.fw]

    for key in keys[1:]:
        groups = []  # (i, parent key, parent dim, candidate offset)
        m = 0
        for i in range(r):
            if key[i] == 0:
                continue
            pk = _key_sub(key, i)
            if pk in dims:
                groups.append((i, pk, dims[pk], m))
                m += dims[pk]
        n_target = mults[key]
        # raising action on the candidates, one qblock column-slab per group
        evecs = [None] * r  # per j: (int rows dims[tk] x m, den)
        for j in range(r):
            tk = _key_sub(key, j)
            if tk not in dims:
                continue
            dt = dims[tk]
            slabs = []
            for (i, pk, dp, off) in groups:
                mk = _key_sub(pk, j)
                prod = None
                if mk in dims:
                    eblk = e_blocks[j].get(pk)
                    fblk = f_blocks[i].get(mk)
                    if eblk is not None and fblk is not None:
                        prod = qb_matmul(fblk, eblk)  # dims[tk] x dims[pk]
                if i == j:
                    hval = lam_fw[j] - sum(rs.cartan[j][t] * pk[t]
                                           for t in range(r))
                    if prod is None:
                        prod = qb_zero(dt, dp)
                    if hval:
                        rows, den = prod
                        rows = [row[:] for row in rows]
                        hd = hval * den
                        for p in range(dp):
                            rows[p][p] += hd
                        prod = qb_new(rows, den)
                if prod is None:
                    prod = qb_zero(dt, dp)
                slabs.append(prod)
            den = math.lcm(*[s[1] for s in slabs])
            rows = [[0] * m for _ in range(dt)]
            for (i, pk, dp, off), (snum, sden) in zip(groups, slabs):
                f = den // sden
                for a in range(dt):
                    ra = rows[a]
                    sa = snum[a]
                    for p in range(dp):
                        v = sa[p]
                        if v:
                            ra[off + p] = v * f
            evecs[j] = (rows, den)
        # Gram of candidates: rows for group (i, pk) are gram[pk] @ evecs[i]
        slabs = []
        for (i, pk, dp, off) in groups:
            slabs.append(qb_matmul(gram[pk], evecs[i]))
        gden = math.lcm(*[s[1] for s in slabs])
        gnum = []
        for (i, pk, dp, off), (snum, sden) in zip(groups, slabs):
            f = gden // sden
            for a in range(dp):
                gnum.append([x * f for x in snum[a]] if f != 1 else snum[a])
        _ech, piv = kern.echelon(gnum)
        if len(piv) != n_target:
            raise IntegrityError(
                f"weight space at {key}: form rank {len(piv)} differs from "
                f"Freudenthal multiplicity {n_target}")
        sel = piv
        aug = [[gnum[s][t] for t in sel] + gnum[s] for s in sel]
        red, pcols, den = kern.gauss_jordan(aug)
        if pcols != list(range(n_target)):
            raise IntegrityError(f"weight space at {key}: Gram solve failed")
        for t, s in enumerate(sel):
            for tt in range(n_target):
                expect = den if tt == t else 0
                if red[tt][n_target + s] != expect:
                    raise IntegrityError("basis expansion is not the identity")
        dims[key] = n_target
        gram[key] = qb_new([[gnum[a][b] for b in sel] for a in sel], gden)
        # F blocks: columns of the expansion matrix, grouped by parent
        for (i, pk, dp, off) in groups:
            fnum = [[red[t][n_target + off + p] for p in range(dp)]
                    for t in range(n_target)]
            f_blocks[i][pk] = qb_new(fnum, den)
        # E blocks at this key: selected candidate columns
        for j in range(r):
            if evecs[j] is None:
                continue
            rows, eden = evecs[j]
            blk = [[row[s] for s in sel] for row in rows]
            if any(any(row) for row in blk):
                e_blocks[j][key] = qb_new(blk, eden)

    module = IrreducibleModule(rs, lam, keys, dims, e_blocks, f_blocks, gram)
    if module.dim != dim:
        raise IntegrityError("constructed dimension differs from Weyl formula")
    if check == "commutators":
        module.verify_relations(serre=False)
    elif check == "full":
        module.verify_relations(serre=True)
    elif check != "none":
        raise ValueError(f"unknown check mode {check!r}")
    return module


# -- tensor products and the Cartan projection ---------------------------------

class TensorModule:
    """Tensor product of two modules over the same ambient system.

    Vectors are dicts mapping a factor key pair ``(k1, k2)`` to the dense
    coefficient matrix (rows indexed by the first factor's basis, columns
    by the second).  Generators act by the Leibniz rule; the contravariant
    form is the product form, block-diagonal over key pairs.
    """

    def __init__(self, m1: IrreducibleModule, m2: IrreducibleModule,
                 dim_cap: int = 5000):
        if m1.rs != m2.rs:
            raise ValueError("tensor factors live over different systems")
        dim = m1.dim * m2.dim
        if dim > dim_cap:
            raise CapacityError(
                f"tensor dimension {dim} exceeds cap {dim_cap}", dim, dim_cap)
        self.m1 = m1
        self.m2 = m2
        self.rs = m1.rs
        self.dim = dim
        self.highest = m1.highest + m2.highest
        self._cartan_levels = {}
        self._cartan_built = -1

    def tensor_vec(self, v1: dict, v2: dict) -> dict:
        out = {}
        for k1, c1 in v1.items():
            for k2, c2 in v2.items():
                blk = out.setdefault(
                    (k1, k2), [[_QZERO] * len(c2) for _ in range(len(c1))])
                for a, xa in enumerate(c1):
                    if xa:
                        row = blk[a]
                        for b, xb in enumerate(c2):
                            if xb:
                                row[b] += xa * xb
        return {k: b for k, b in out.items() if any(any(r) for r in b)}

    def total_key(self, pair):
        return tuple(a + b for a, b in zip(pair[0], pair[1]))

    def weight_of_pair(self, pair) -> Weight:
        return (self.m1.weight_of_key(pair[0])
                + self.m2.weight_of_key(pair[1]))

    def _apply(self, which: str, i: int, vec: dict) -> dict:
        """Leibniz action of E_i (which="e") or F_i (which="f")."""
        blocks1 = self.m1.e_blocks[i] if which == "e" else self.m1.f_blocks[i]
        blocks2 = self.m2.e_blocks[i] if which == "e" else self.m2.f_blocks[i]
        step = (lambda k: _key_sub(k, i)) if which == "e" else \
            (lambda k: _key_add(k, i))
        out = {}

        def add_block(pair, rows):
            blk = out.get(pair)
            if blk is None:
                out[pair] = [row[:] for row in rows]
            else:
                for a, row in enumerate(rows):
                    ba = blk[a]
                    for b, x in enumerate(row):
                        if x:
                            ba[b] += x

        for (k1, k2), mat in vec.items():
            qb1 = blocks1.get(k1)
            if qb1 is not None:
                rows1, den1 = qb1
                prod = [[sum(Fraction(rows1[a][t], den1) * mat[t][b]
                             for t in range(len(mat)) if mat[t][b])
                         for b in range(len(mat[0]))]
                        for a in range(len(rows1))]
                add_block((step(k1), k2), prod)
            qb2 = blocks2.get(k2)
            if qb2 is not None:
                rows2, den2 = qb2
                prod = [[sum(mat[a][t] * Fraction(rows2[b][t], den2)
                             for t in range(len(mat[0])) if mat[a][t])
                         for b in range(len(rows2))]
                        for a in range(len(mat))]
                add_block((k1, step(k2)), prod)
        return {k: b for k, b in out.items() if any(any(r) for r in b)}

    def apply_e(self, i: int, vec: dict) -> dict:
        return self._apply("e", i, vec)

    def apply_f(self, i: int, vec: dict) -> dict:
        return self._apply("f", i, vec)

    def form_pair(self, u: dict, v: dict) -> Fraction:
        """Product contravariant form <u, v>."""
        total = _QZERO
        for pair, mu in u.items():
            mv = v.get(pair)
            if mv is None:
                continue
            g1r, g1d = self.m1.gram[pair[0]]
            g2r, g2d = self.m2.gram[pair[1]]
            acc = _QZERO
            for a, row_u in enumerate(mu):
                for b, x in enumerate(row_u):
                    if not x:
                        continue
                    # x * (g1 V g2)[a][b]
                    s = _QZERO
                    for ap, vrow in enumerate(mv):
                        g1v = g1r[a][ap]
                        if not g1v:
                            continue
                        t = sum(vrow[bp] * g2r[bp][b]
                                for bp in range(len(vrow)) if vrow[bp])
                        if t:
                            s += g1v * t
                    if s:
                        acc += x * s
            total += acc / (g1d * g2d)
        return total

    # -- highest (Cartan) component ------------------------------------------

    def _ensure_cartan_levels(self, level: int) -> None:
        if self._cartan_built >= level:
            return
        rs = self.rs
        lam = self.highest
        if not lam.is_dominant_integral:
            raise IntegrityError("tensor highest weight not dominant integral")
        diagram = _weight_diagram(rs, tuple(lam.fw))
        if self._cartan_built < 0:
            top = tuple(0 for _ in range(rs.rank))
            top_vec = self.tensor_vec(self.m1.highest_vector(),
                                      self.m2.highest_vector())
            self._cartan_levels[top] = ([top_vec], [[Fraction(1)]])
            self._cartan_built = 0
        for lev in range(self._cartan_built + 1, level + 1):
            for key, mult in diagram.items():
                if sum(key) != lev:
                    continue
                cands = []
                for i in range(rs.rank):
                    if key[i] == 0:
                        continue
                    prev = self._cartan_levels.get(_key_sub(key, i))
                    if prev is None:
                        continue
                    for u in prev[0]:
                        cands.append(self.apply_f(i, u))
                gram = [[_QZERO] * len(cands) for _ in cands]
                for a in range(len(cands)):
                    for b in range(a, len(cands)):
                        val = self.form_pair(cands[a], cands[b])
                        gram[a][b] = val
                        gram[b][a] = val
                sel = linalg.independent_columns(gram)
                if len(sel) != mult:
                    raise IntegrityError(
                        f"Cartan component at {key}: rank {len(sel)} differs "
                        f"from multiplicity {mult}")
                vecs = [cands[s] for s in sel]
                gsel = [[gram[a][b] for b in sel] for a in sel]
                self._cartan_levels[key] = (vecs, gsel)
            self._cartan_built = lev

    def cartan_project(self, vec: dict) -> dict:
        """Orthogonal projection onto the highest isotypic component
        V_{lambda+mu}, w.r.t. the product contravariant form."""
        by_key = {}
        for pair, mat in vec.items():
            by_key.setdefault(self.total_key(pair), {})[pair] = mat
        if not by_key:
            return {}
        self._ensure_cartan_levels(max(sum(k) for k in by_key))
        out = {}
        for key, part in by_key.items():
            basis = self._cartan_levels.get(key)
            if basis is None:
                continue  # weight absent from the highest component
            vecs, gram = basis
            rhs = [[self.form_pair(u, part)] for u in vecs]
            coeffs = [row[0] for row in linalg.solve(gram, rhs)]
            for c, u in zip(coeffs, vecs):
                if not c:
                    continue
                for pair, mat in u.items():
                    blk = out.get(pair)
                    if blk is None:
                        out[pair] = [[c * x for x in row] for row in mat]
                    else:
                        for a, row in enumerate(mat):
                            ba = blk[a]
                            for b, x in enumerate(row):
                                if x:
                                    ba[b] += c * x
        return {k: b for k, b in out.items() if any(any(r) for r in b)}


def tensor_module(m1: IrreducibleModule, m2: IrreducibleModule,
                  dim_cap: int = 5000) -> TensorModule:
    """Tensor product with Leibniz generator action and product form."""
    return TensorModule(m1, m2, dim_cap)


def cartan_project(t: TensorModule, vec: dict) -> dict:
    """Component of a tensor vector in the Cartan (highest) summand."""
    return t.cartan_project(vec)


def tensor_vec_is_zero(vec: dict) -> bool:
    return not vec or all(not any(any(r) for r in b) for b in vec.values())
