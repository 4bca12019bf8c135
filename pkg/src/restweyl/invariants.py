"""L-invariant subspaces and the action of the lifted longest element.

The action is realized through Tits representatives
``n_i = exp(E_i) exp(-F_i) exp(E_i)``: products over reduced words depend
only on the Weyl element, map weight spaces to weight spaces, and preserve
the contravariant form, so the w0 matrix on V^L is exact and involutive.

States during operator application are kept as scaled-integer column
blocks per weight key, so a whole basis is pushed through each exponential
with kernel matrix products.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import CapacityError, IntegrityError
from .realform import RealFormEntry, restricted_w0_lift
from .repbuild import (IrreducibleModule, TensorModule, _key_add, _key_sub,
                       build_module, cartan_project, multiplicity_freudenthal,
                       qb_matmul, qb_new, qb_to_fractions, tensor_module,
                       tensor_vec_is_zero)
from .rootsys import Weight, WeylWord, weyl_dimension

EMPTY = "Empty"
PLUS_ID = "PlusId"
MINUS_ID = "MinusId"
NON_SCALAR = "NonScalar"


def l_invariant_basis(entry: RealFormEntry, module: IrreducibleModule):
    """(dim V^0, basis of V^L in zero-weight coordinates).

    V^L is the joint kernel, inside the zero weight space, of the raising
    and lowering operators of the black simple roots (they generate the
    semisimple part of the centralizer; the Cartan part acts by the weight,
    which is already zero).  The basis is the canonical nullspace basis,
    hence deterministic.
    """
    zk = module.zero_key
    if zk is None:
        return 0, []
    n0 = module.dims[zk]
    rows = []
    for b in entry.black:
        i = b - 1
        for blocks in (module.e_blocks[i], module.f_blocks[i]):
            qb = blocks.get(zk)
            if qb is not None:
                rows.extend(qb[0])
    if not rows:
        return n0, [tuple(Fraction(int(a == t)) for t in range(n0))
                    for a in range(n0)]
    return n0, [tuple(v) for v in linalg.nullspace(rows, ncols=n0)]


# -- Tits operators -----------------------------------------------------------

def _exp_apply(module, i, which, sign, state):
    """exp(sign * X_i) applied to a block state {key: qblock of columns}."""
    blocks = module.e_blocks[i] if which == "e" else module.f_blocks[i]
    step = (lambda k: _key_sub(k, i)) if which == "e" else \
        (lambda k: _key_add(k, i))
    out = {}
    for key, qb in state.items():
        _accumulate(out, key, qb)
        cur_key, cur = key, qb
        k = 1
        guard = module.dim + 2
        while True:
            blk = blocks.get(cur_key)
            if blk is None:
                break
            nxt = qb_matmul(blk, cur)
            if all(not any(row) for row in nxt[0]):
                break
            num, den = nxt
            if sign < 0 and k % 2:
                num = [[-x for x in row] for row in num]
            cur = qb_new(num, den * k)
            cur_key = step(cur_key)
            _accumulate(out, cur_key, cur)
            k += 1
            if k > guard:
                raise IntegrityError("non-nilpotent generator action")
    return out


def _accumulate(out, key, qb):
    old = out.get(key)
    if old is None:
        out[key] = qb
        return
    ra, da = old
    rb, db = qb
    rows = [[x * db + y * da for x, y in zip(rowa, rowb)]
            for rowa, rowb in zip(ra, rb)]
    out[key] = qb_new(rows, da * db)


def tits_apply_block(module: IrreducibleModule, word, src_key, columns_qb):
    """Apply the Tits representative of a Weyl word to a block of column
    vectors supported on one weight space.  Returns (target key, qblock)."""
    state = {src_key: columns_qb}
    for idx in reversed(tuple(word)):
        i = idx - 1
        state = _exp_apply(module, i, "e", +1, state)
        state = _exp_apply(module, i, "f", -1, state)
        state = _exp_apply(module, i, "e", +1, state)
        state = {k: qb for k, qb in state.items()
                 if any(any(row) for row in qb[0])}
    if len(state) != 1:
        raise IntegrityError(
            f"Tits operator image spreads over {len(state)} weight spaces")
    (key, qb), = state.items()
    return key, qb


def tits_on_block(module: IrreducibleModule, word, key):
    """Matrix of the word's Tits operator restricted to one weight space,
    as a (target key, qblock) pair; columns are images of basis vectors."""
    n = module.dims[key]
    ident = ([[int(a == b) for b in range(n)] for a in range(n)], 1)
    return tits_apply_block(module, word, key, ident)


@dataclass(frozen=True)
class TitsOperator:
    """Tits representative restricted to one weight space."""

    word: WeylWord
    src_key: tuple
    dst_key: tuple
    matrix: tuple  # rows of Fractions

    @staticmethod
    def build(module, word, key) -> "TitsOperator":
        dst, qb = tits_on_block(module, word, key)
        mat = tuple(tuple(row) for row in qb_to_fractions(qb))
        return TitsOperator(WeylWord(tuple(word)), key, dst, mat)


def w0_operator(entry: RealFormEntry, module: IrreducibleModule, vl_basis):
    """Matrix of the lifted longest restricted Weyl element on V^L.

    Raises IntegrityError if the operator fails to preserve V^L or fails
    to square to the identity (either would mean bad catalog data).
    """
    k = len(vl_basis)
    if k == 0:
        return []
    zk = module.zero_key
    cols, den = linalg.to_int_rows(
        [[vl_basis[t][a] for t in range(k)] for a in range(module.dims[zk])])
    word = restricted_w0_lift(entry)
    dst, img = tits_apply_block(module, word, zk, (cols, den))
    if dst != zk:
        raise IntegrityError("lift does not fix the zero weight space")
    basis_cols = [[vl_basis[t][a] for t in range(k)]
                  for a in range(module.dims[zk])]
    m = linalg.solve(basis_cols, qb_to_fractions(img))
    sq = linalg.mat_mul(m, m)
    if not linalg.mat_eq(sq, linalg.identity(k)):
        raise IntegrityError("w0 matrix on V^L is not an involution")
    return [tuple(row) for row in m]


def classify_action(matrix):
    """(classification, nontrivial flag) of a w0 matrix on V^L."""
    k = len(matrix)
    if k == 0:
        return EMPTY, False
    is_plus = all(matrix[a][b] == (1 if a == b else 0)
                  for a in range(k) for b in range(k))
    if is_plus:
        return PLUS_ID, False
    is_minus = all(matrix[a][b] == (-1 if a == b else 0)
                   for a in range(k) for b in range(k))
    return (MINUS_ID, True) if is_minus else (NON_SCALAR, True)


# -- reports -------------------------------------------------------------------

@dataclass
class InvariantReport:
    """Everything computed for one (real form, highest weight) pair."""

    label: str
    fw: tuple
    in_q: bool
    module_dim: int
    dim_v0: int
    dim_vl: int
    vl_basis: tuple      # tuples of Fractions, zero-weight coordinates
    w0_matrix: tuple     # rows of Fractions; empty when dim_vl = 0
    classification: str
    nontrivial: bool
    millis: int

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "fw": list(self.fw),
            "in_q": self.in_q,
            "module_dim": self.module_dim,
            "dim_v0": self.dim_v0,
            "dim_vl": self.dim_vl,
            "vl_basis": [[linalg.frac_str(x) for x in v] for v in self.vl_basis],
            "w0_matrix": [[linalg.frac_str(x) for x in row]
                          for row in self.w0_matrix],
            "classification": self.classification,
            "nontrivial": self.nontrivial,
            "millis": self.millis,
        }

    @staticmethod
    def from_dict(d: dict) -> "InvariantReport":
        return InvariantReport(
            d["label"], tuple(d["fw"]), d["in_q"], d["module_dim"],
            d["dim_v0"], d["dim_vl"],
            tuple(tuple(linalg.parse_frac(x) for x in v)
                  for v in d["vl_basis"]),
            tuple(tuple(linalg.parse_frac(x) for x in row)
                  for row in d["w0_matrix"]),
            d["classification"], d["nontrivial"], d["millis"])


def compute_report(entry: RealFormEntry, lam: Weight, dim_cap: int = 5000,
                   check: str = "full", keep_module: bool = False):
    """Full pipeline for one weight; returns (report, module or None).

    Weights outside the root lattice short-circuit to an Empty report
    (their zero weight space is empty); everything else builds the module
    and computes V^L and the w0 action explicitly.
    """
    if not lam.is_dominant_integral:
        raise ValueError(f"weight {lam.fw} is not dominant integral")
    t0 = time.perf_counter()
    fw = tuple(int(c) for c in lam.fw)
    if not lam.in_Q:
        report = InvariantReport(entry.label, fw, False,
                                 weyl_dimension(entry.rs, lam), 0, 0, (), (),
                                 EMPTY, False,
                                 int((time.perf_counter() - t0) * 1000))
        return report, None
    module = build_module(entry.rs, lam, dim_cap=dim_cap, check=check)
    dim_v0, basis = l_invariant_basis(entry, module)
    if not basis:
        cls, nontrivial, matrix = EMPTY, False, []
    elif entry.is_compact:
        # the restricted Weyl group is trivial; w0 acts as the identity
        matrix = linalg.identity(len(basis))
        cls, nontrivial = classify_action(matrix)
    else:
        matrix = w0_operator(entry, module, basis)
        cls, nontrivial = classify_action(matrix)
    report = InvariantReport(
        entry.label, fw, True, module.dim, dim_v0, len(basis),
        tuple(basis), tuple(tuple(row) for row in matrix), cls, nontrivial,
        int((time.perf_counter() - t0) * 1000))
    return report, (module if keep_module else None)


# -- additivity ----------------------------------------------------------------

@dataclass
class AdditivityVerdict:
    submonoid: str       # pass | fail | vacuous
    ideal: str           # pass | fail | vacuous
    witness: dict | None # constructive Cartan-product witness data


def _eigenvector_in_module_coords(report, module, sign):
    """A w0 eigenvector of V^L for the given sign, as a module vector, or
    None.  Uses the projector (1 + sign*M)/2 on the first basis vector it
    does not annihilate."""
    k = report.dim_vl
    m = report.w0_matrix
    zk = module.zero_key
    for t in range(k):
        coeffs = [(m[s][t] + (1 if s == t else 0)) if sign > 0
                  else ((1 if s == t else 0) - m[s][t]) for s in range(k)]
        if any(coeffs):
            n0 = module.dims[zk]
            vec = [sum(Fraction(c) * report.vl_basis[s][a]
                       for s, c in enumerate(coeffs)) for a in range(n0)]
            return {zk: vec}
    return None


def _tensor_tits_apply(t: TensorModule, word, tvec):
    """Apply the factor-wise Tits operator N (x) N to a tensor vector."""
    out = {}
    cache1, cache2 = {}, {}

    def columns(module, cache, key):
        if key not in cache:
            n = module.dims[key]
            dst, qb = tits_apply_block(
                module, word, key,
                ([[int(a == b) for b in range(n)] for a in range(n)], 1))
            cache[key] = (dst, qb_to_fractions(qb))
        return cache[key]

    for (k1, k2), mat in tvec.items():
        d1, c1 = columns(t.m1, cache1, k1)
        d2, c2 = columns(t.m2, cache2, k2)
        # new block = C1 @ mat @ C2^T
        mid = [[sum(c1[a][x] * mat[x][b] for x in range(len(mat))
                    if mat[x][b]) for b in range(len(mat[0]))]
               for a in range(len(c1))]
        new = [[sum(mid[a][y] * c2[b][y] for y in range(len(mat[0]))
                    if mid[a][y]) for b in range(len(c2))]
               for a in range(len(c1))]
        blk = out.get((d1, d2))
        if blk is None:
            out[(d1, d2)] = new
        else:
            for a, row in enumerate(new):
                ba = blk[a]
                for b, x in enumerate(row):
                    if x:
                        ba[b] += x
    return {k: b for k, b in out.items() if any(any(r) for r in b)}


def _tensor_scale(tvec, c):
    return {k: [[c * x for x in row] for row in b] for k, b in tvec.items()}


def _tensor_eq(u, v):
    keys = set(u) | set(v)
    for k in keys:
        bu, bv = u.get(k), v.get(k)
        if bu is None:
            bu = [[Fraction(0)] * len(bv[0]) for _ in bv]
        if bv is None:
            bv = [[Fraction(0)] * len(bu[0]) for _ in bu]
        if bu != bv:
            return False
    return True


def additivity_check(entry: RealFormEntry, rep_l: InvariantReport,
                     rep_m: InvariantReport, rep_lm: InvariantReport,
                     modules=None, dim_cap: int = 5000) -> AdditivityVerdict:
    """Check the submonoid and ideal statements on three computed reports,
    and optionally produce a constructive Cartan-product witness.

    ``modules`` is an optional pair (module_lambda, module_mu); when given
    and the tensor fits under ``dim_cap``, a nonzero product of invariant
    w0 eigenvectors is built, its invariance re-checked, and the
    eigenvalue multiplicativity verified exactly.
    """
    if rep_l.dim_vl > 0 and rep_m.dim_vl > 0:
        submonoid = "pass" if rep_lm.dim_vl > 0 else "fail"
    else:
        submonoid = "vacuous"
    if rep_l.classification == NON_SCALAR and rep_m.dim_vl > 0:
        ideal = "pass" if rep_lm.classification == NON_SCALAR else "fail"
    else:
        ideal = "vacuous"
    witness = None
    if modules is not None and rep_l.dim_vl > 0 and rep_m.dim_vl > 0:
        mod_l, mod_m = modules
        if mod_l.dim * mod_m.dim > dim_cap:
            witness = {"skipped": "capacity"}
        else:
            witness = _build_witness(entry, rep_l, rep_m, mod_l, mod_m,
                                     dim_cap)
    return AdditivityVerdict(submonoid, ideal, witness)


def _build_witness(entry, rep_l, rep_m, mod_l, mod_m, dim_cap):
    t = tensor_module(mod_l, mod_m, dim_cap=dim_cap)
    picks = []
    for rep, mod in ((rep_l, mod_l), (rep_m, mod_m)):
        if entry.is_compact:
            vec = None
        else:
            for sign in (+1, -1):
                vec = _eigenvector_in_module_coords(rep, mod, sign)
                if vec is not None:
                    picks.append((sign, vec))
                    break
            else:
                raise IntegrityError("involution with no eigenvectors")
    (su, u), (sv, v) = picks
    uv = t.tensor_vec(u, v)
    proj = cartan_project(t, uv)
    nonzero = not tensor_vec_is_zero(proj)
    invariant = True
    for b in entry.black:
        i = b - 1
        if not tensor_vec_is_zero(t.apply_e(i, proj)) or \
                not tensor_vec_is_zero(t.apply_f(i, proj)):
            invariant = False
    mult_ok = None
    if nonzero:
        word = restricted_w0_lift(entry)
        image = _tensor_tits_apply(t, word, proj)
        mult_ok = _tensor_eq(image, _tensor_scale(proj, Fraction(su * sv)))
    return {"eig_u": su, "eig_v": sv, "nonzero": nonzero,
            "invariant": invariant, "eigenvalue_multiplicative": mult_ok}


# -- adjoint-module witness -----------------------------------------------------

def adjoint_cartan_witness(entry: RealFormEntry, module: IrreducibleModule,
                           vl_basis, w0_matrix) -> None:
    """For the adjoint module: check that V^L contains the image of the
    split Cartan part and that the w0 matrix restricted to it matches the
    restricted Weyl action, coroot by coroot.  Raises IntegrityError on
    mismatch."""
    rs = entry.rs
    r = rs.rank
    zk = module.zero_key
    n0 = module.dims[zk]
    if len(vl_basis) < entry.restricted_rank:
        raise IntegrityError("V^L smaller than the restricted rank")
    # t_i = F_i applied to the alpha_i weight vector, in V^0 coordinates
    tvecs = []
    for i in range(r):
        key_alpha = tuple(int(x) - int(i == j)
                          for j, x in enumerate(module.highest.root))
        if module.dims.get(key_alpha) != 1:
            raise IntegrityError("adjoint module has non-simple root space")
        qb = module.f_blocks[i].get(key_alpha)
        col = [qb_entry_col(qb, a, 0) for a in range(n0)]
        tvecs.append(col)
    word = restricted_w0_lift(entry)
    m_root = _word_matrix(rs, word)
    basis_cols = [[vl_basis[t][a] for t in range(len(vl_basis))]
                  for a in range(n0)]
    d = [Fraction(rs.sym[i]) for i in range(r)]
    for i in range(r):
        # u_i = image of pi(alpha_i^vee) under h -> V^0
        pi_col = [entry.projection[j][i] for j in range(r)]
        u = [sum(pi_col[j] * d[j] / d[i] * tvecs[j][a] for j in range(r))
             for a in range(n0)]
        if not any(u):
            continue
        coords = linalg.solve_vec(basis_cols, u)   # u in V^L: must solve
        # w0(pi(alpha_i^vee)) via the restricted action on coroots
        img_root = [sum(m_root[a][j] * pi_col[j] for j in range(r))
                    for a in range(r)]
        target = [sum(img_root[j] * d[j] / d[i] * tvecs[j][a]
                      for j in range(r)) for a in range(n0)]
        via_matrix = [sum(w0_matrix[s][t] * coords[t]
                          for t in range(len(coords)))
                      for s in range(len(coords))]
        recon = [sum(via_matrix[s] * vl_basis[s][a]
                     for s in range(len(via_matrix))) for a in range(n0)]
        if recon != target:
            raise IntegrityError(
                "w0 on the Cartan part of the adjoint module disagrees with "
                "the restricted Weyl action")


def qb_entry_col(qb, a, b) -> Fraction:
    rows, den = qb
    return Fraction(rows[a][b], den)


def _word_matrix(rs, word):
    from .rootsys import word_root_matrix
    return word_root_matrix(rs, word)


# -- split sign table regeneration ------------------------------------------------

def regenerate_split_sign_table(dim_cap: int = 4000, max_rank: int = 4,
                                kmax: int = 3, progress=None):
    """Rebuild the split sign table by running the classification pipeline
    on lambda = k p_i varpi_i for k <= kmax over every split catalog entry
    of ambient rank <= max_rank.

    m_i is pinned exactly whenever the k-range suffices: a non-scalar at
    k means m_i = k-1; all-scalar through k = 3 means m_i is unbounded
    (the scalar range is known to be one of 0, 1, 2, infinity).  Rows the
    dimension cap cuts short keep m_i = None with the verified range.
    """
    from .realform import SignRow, SplitSignTable, catalog_entry, \
        catalog_labels, smallest_multiple_in_q
    reps = {}
    for label in catalog_labels():
        entry = catalog_entry(label)
        if entry.is_split and entry.rs.rank <= max_rank:
            reps.setdefault((entry.rs.letter, entry.rs.rank), entry)
    rows = []
    for (letter, rank), entry in sorted(reps.items()):
        rs = entry.rs
        for i in range(1, rank + 1):
            p = smallest_multiple_in_q(rs, i)
            sigma = None
            m = None
            verified = 0
            for k in range(1, kmax + 1):
                lam = Weight.from_fw(
                    rs, tuple(k * p * int(j == i) for j in range(1, rank + 1)))
                if weyl_dimension(rs, lam) > dim_cap:
                    break
                report, _ = compute_report(entry, lam, dim_cap=dim_cap,
                                           check="commutators")
                if progress:
                    progress(f"{rs} varpi_{i} k={k}: {report.classification}")
                verified = k
                if report.classification == PLUS_ID:
                    if k == 1:
                        sigma = 1
                elif report.classification == MINUS_ID:
                    if k == 1:
                        sigma = -1
                else:
                    m = k - 1
                    break
            else:
                if verified == kmax:
                    m = "inf"
            if verified == 0:
                continue
            if m == 0:
                sigma = None
            rows.append(SignRow(letter, rank, i, p, m, sigma, verified))
    return SplitSignTable(rows)
