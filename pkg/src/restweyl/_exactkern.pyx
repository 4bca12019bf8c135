# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact integer linear-algebra kernels.

Mirrors restweyl.kernels_py exactly (fraction-free Bareiss/Montante
elimination on arbitrary-precision Python ints); the compiled version only
removes interpreter overhead from the inner loops.
"""

KERNEL_NAME = "cython"

cdef object _ZERO = 0


def echelon(rows):
    """Fraction-free row echelon form; see kernels_py.echelon."""
    cdef list m = [list(r) for r in rows]
    cdef Py_ssize_t nr = len(m)
    cdef Py_ssize_t nc = len(<list>m[0]) if nr else 0
    cdef list piv_cols = []
    cdef object prev = 1
    cdef object piv, t, v
    cdef Py_ssize_t pr = 0, pc, i, c, sel
    cdef list row, piv_row
    for pc in range(nc):
        sel = -1
        for i in range(pr, nr):
            if (<list>m[i])[pc] != _ZERO:
                sel = i
                break
        if sel < 0:
            continue
        if sel != pr:
            m[pr], m[sel] = m[sel], m[pr]
        piv_row = <list>m[pr]
        piv = piv_row[pc]
        for i in range(pr + 1, nr):
            row = <list>m[i]
            t = row[pc]
            if t == _ZERO:
                if piv != prev:
                    for c in range(pc + 1, nc):
                        row[c] = (piv * <object>row[c]) // prev
            else:
                for c in range(pc + 1, nc):
                    v = piv * <object>row[c] - t * <object>piv_row[c]
                    row[c] = v // prev
            row[pc] = _ZERO
        prev = piv
        piv_cols.append(pc)
        pr += 1
        if pr == nr:
            break
    return m[:pr], piv_cols


def gauss_jordan(rows):
    """Fraction-free Gauss-Jordan (Montante); see kernels_py.gauss_jordan."""
    cdef list m = [list(r) for r in rows]
    cdef Py_ssize_t nr = len(m)
    cdef Py_ssize_t nc = len(<list>m[0]) if nr else 0
    cdef list piv_cols = []
    cdef object prev = 1
    cdef object piv, t, v
    cdef Py_ssize_t pr = 0, pc, i, c, sel
    cdef list row, piv_row
    for pc in range(nc):
        sel = -1
        for i in range(pr, nr):
            if (<list>m[i])[pc] != _ZERO:
                sel = i
                break
        if sel < 0:
            continue
        if sel != pr:
            m[pr], m[sel] = m[sel], m[pr]
        piv_row = <list>m[pr]
        piv = piv_row[pc]
        for i in range(nr):
            if i == pr:
                continue
            row = <list>m[i]
            t = row[pc]
            if t == _ZERO:
                if piv != prev:
                    for c in range(nc):
                        if c != pc:
                            row[c] = (piv * <object>row[c]) // prev
            else:
                for c in range(nc):
                    if c != pc:
                        v = piv * <object>row[c] - t * <object>piv_row[c]
                        row[c] = v // prev
            row[pc] = _ZERO
        prev = piv
        piv_cols.append(pc)
        pr += 1
        if pr == nr:
            break
    return m, piv_cols, prev


def matmul(a, b):
    """Exact integer matrix product; see kernels_py.matmul."""
    cdef list la = list(a)
    cdef list lb = list(b)
    cdef Py_ssize_t n = len(la)
    cdef Py_ssize_t k = len(lb)
    if n == 0 or k == 0:
        return [[] for _ in range(n)]
    assert len(<list>la[0]) == k, "shape mismatch"
    cdef Py_ssize_t p = len(<list>lb[0])
    cdef list out = []
    cdef list arow, brow, orow
    cdef object av, bv
    cdef Py_ssize_t i, t, j
    for i in range(n):
        arow = <list>la[i]
        orow = [_ZERO] * p
        for t in range(k):
            av = arow[t]
            if av == _ZERO:
                continue
            brow = <list>lb[t]
            for j in range(p):
                bv = brow[j]
                if bv != _ZERO:
                    orow[j] = <object>orow[j] + av * bv
        out.append(orow)
    return out
