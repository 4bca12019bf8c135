"""Exact rational linear algebra over the integer kernels.

The hot elimination loops live in a kernel module with two interchangeable
implementations: the compiled extension ``restweyl._exactkern`` and the
pure-Python fallback ``restweyl.kernels_py``.  Selection happens once at
import: the extension is used when importable unless the environment
variable ``RESTWEYL_PURE_PYTHON=1`` forces the fallback.

Everything here is exact; no floats ever appear.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from . import kernels_py
from .errors import IntegrityError

if os.environ.get("RESTWEYL_PURE_PYTHON") == "1":
    _KERNEL = kernels_py
else:
    try:
        from . import _exactkern as _KERNEL  # type: ignore[attr-defined]
    except ImportError:
        _KERNEL = kernels_py

KERNEL_NAME = _KERNEL.KERNEL_NAME


def kernel():
    """Return the active kernel module (compiled or pure Python)."""
    return _KERNEL


def to_int_rows(rows):
    """Scale a rational matrix by a single positive integer to make it
    integral.  Returns ``(int_rows, den)`` with ``int_rows / den`` equal to
    the input."""
    den = 1
    for row in rows:
        for x in row:
            d = x.denominator if isinstance(x, Fraction) else 1
            if d != 1:
                den = den * d // math.gcd(den, d)
    out = []
    for row in rows:
        out.append([int(x * den) if den != 1 or isinstance(x, Fraction) else x
                    for x in row])
    return out, den


def rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    m, _ = to_int_rows(rows)
    _, piv = _KERNEL.echelon(m)
    return len(piv)


def independent_columns(rows) -> list[int]:
    """Greedy-earliest maximal linearly independent column set."""
    if not rows or not rows[0]:
        return []
    m, _ = to_int_rows(rows)
    _, piv = _KERNEL.echelon(m)
    return piv


def nullspace(rows, ncols=None) -> list[tuple[Fraction, ...]]:
    """Basis of the right nullspace, as primitive integer vectors.

    ``ncols`` must be given for a matrix with no rows (the nullspace is
    then the full space, returned as unit vectors).  The basis is the
    canonical RREF one and therefore deterministic.
    """
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for empty matrix")
        return [tuple(Fraction(int(i == j)) for j in range(ncols))
                for i in range(ncols)]
    nc = len(rows[0])
    m, _ = to_int_rows(rows)
    red, piv, den = _KERNEL.gauss_jordan(m)
    piv_set = set(piv)
    basis = []
    for f in range(nc):
        if f in piv_set:
            continue
        vec = [0] * nc
        vec[f] = den
        for t, pc in enumerate(piv):
            vec[pc] = -red[t][f]
        g = 0
        for x in vec:
            g = math.gcd(g, x)
        if g > 1:
            vec = [x // g for x in vec]
        if den < 0:
            vec = [-x for x in vec]
        basis.append(tuple(Fraction(x) for x in vec))
    return basis


def solve(a_rows, b_rows):
    """Solve ``A X = B`` exactly for A of full column rank.

    Raises IntegrityError when the system is inconsistent or A is column
    deficient.  Returns X as lists of Fractions.
    """
    n = len(a_rows[0]) if a_rows else 0
    k = len(b_rows[0]) if b_rows else 0
    aug = [list(ra) + list(rb) for ra, rb in zip(a_rows, b_rows)]
    m, _ = to_int_rows(aug)
    red, piv, den = _KERNEL.gauss_jordan(m)
    if piv != list(range(n)):
        raise IntegrityError("linear system is inconsistent or rank deficient")
    return [[Fraction(red[t][n + j], den) for j in range(k)] for t in range(n)]


def solve_vec(a_rows, b_vec):
    """Solve ``A x = b`` for a single right-hand side."""
    x = solve(a_rows, [[v] for v in b_vec])
    return [row[0] for row in x]


def det(rows) -> Fraction:
    """Exact determinant (Bareiss with swap parity)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m, den = to_int_rows(rows)
    sign = 1
    prev = 1
    for pc in range(n):
        sel = -1
        for i in range(pc, n):
            if m[i][pc] != 0:
                sel = i
                break
        if sel < 0:
            return Fraction(0)
        if sel != pc:
            m[pc], m[sel] = m[sel], m[pc]
            sign = -sign
        piv = m[pc][pc]
        for i in range(pc + 1, n):
            t = m[i][pc]
            for c in range(pc + 1, n):
                m[i][c] = (piv * m[i][c] - t * m[pc][c]) // prev
            m[i][pc] = 0
        prev = piv
    return Fraction(sign * prev, den ** n)


def mat_mul(a_rows, b_rows):
    """Exact product of two rational matrices (kernel-backed)."""
    if not a_rows or not b_rows:
        return [[] for _ in a_rows]
    ai, ad = to_int_rows(a_rows)
    bi, bd = to_int_rows(b_rows)
    ci = _KERNEL.matmul(ai, bi)
    d = ad * bd
    return [[Fraction(x, d) for x in row] for row in ci]


def mat_vec(m_rows, vec):
    return [sum((r[j] * vec[j] for j in range(len(vec))), Fraction(0))
            for r in m_rows]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_eq(a_rows, b_rows) -> bool:
    if len(a_rows) != len(b_rows):
        return False
    for ra, rb in zip(a_rows, b_rows):
        if len(ra) != len(rb) or any(x != y for x, y in zip(ra, rb)):
            return False
    return True


def rref_fraction(rows):
    """Reference reduced row echelon form over Fraction (test oracle only;
    the kernels are validated against this)."""
    m = [[Fraction(x) for x in row] for row in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    piv_cols = []
    pr = 0
    for pc in range(nc):
        sel = next((i for i in range(pr, nr) if m[i][pc] != 0), -1)
        if sel < 0:
            continue
        m[pr], m[sel] = m[sel], m[pr]
        inv = 1 / m[pr][pc]
        m[pr] = [x * inv for x in m[pr]]
        for i in range(nr):
            if i != pr and m[i][pc] != 0:
                f = m[i][pc]
                m[i] = [x - f * y for x, y in zip(m[i], m[pr])]
        piv_cols.append(pc)
        pr += 1
        if pr == nr:
            break
    return m, piv_cols


def frac_str(x) -> str:
    """Serialize an exact rational as ``p`` or ``p/q``."""
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)
