"""Pure-Python exact integer linear-algebra kernels.

Same contract as the compiled extension ``restweyl._exactkern``; which one
is active is decided in :mod:`restweyl.linalg`.  All functions take dense
matrices as lists of lists of Python ints and never overflow (arbitrary
precision), using fraction-free (Bareiss/Montante) elimination so every
division is exact.
"""

KERNEL_NAME = "python"


def echelon(rows):
    """Fraction-free row echelon form (one-step Bareiss).

    Returns ``(ech, pivot_cols)`` where ``ech`` holds the nonzero rows of
    an integer row-echelon form and ``pivot_cols`` its pivot columns.
    Pivot columns are exactly the greedy-earliest linearly independent
    column set of the input.
    """
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    piv_cols = []
    prev = 1
    pr = 0
    for pc in range(nc):
        sel = -1
        for i in range(pr, nr):
            if m[i][pc] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != pr:
            m[pr], m[sel] = m[sel], m[pr]
        piv_row = m[pr]
        piv = piv_row[pc]
        for i in range(pr + 1, nr):
            row = m[i]
            t = row[pc]
            if t == 0:
                if piv != prev:
                    for c in range(pc + 1, nc):
                        row[c] = (piv * row[c]) // prev
            else:
                for c in range(pc + 1, nc):
                    row[c] = (piv * row[c] - t * piv_row[c]) // prev
            row[pc] = 0
        prev = piv
        piv_cols.append(pc)
        pr += 1
        if pr == nr:
            break
    return m[:pr], piv_cols


def gauss_jordan(rows):
    """Fraction-free Gauss-Jordan (Montante) reduction.

    Returns ``(red, pivot_cols, den)`` where ``red`` has the same row count
    as the input: the first ``len(pivot_cols)`` rows are the reduced pivot
    rows, later rows are the eliminated residue (nonzero entries there mean
    the corresponding original rows were dependent with an inconsistent
    tail, which callers use for consistency checks).  Every pivot entry of
    a pivot row equals ``den`` and ``red / den`` is the exact rational
    reduced row echelon form.
    """
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    piv_cols = []
    prev = 1
    pr = 0
    for pc in range(nc):
        sel = -1
        for i in range(pr, nr):
            if m[i][pc] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != pr:
            m[pr], m[sel] = m[sel], m[pr]
        piv_row = m[pr]
        piv = piv_row[pc]
        for i in range(nr):
            if i == pr:
                continue
            row = m[i]
            t = row[pc]
            if t == 0:
                if piv != prev:
                    for c in range(nc):
                        if c != pc:
                            row[c] = (piv * row[c]) // prev
            else:
                for c in range(nc):
                    if c != pc:
                        row[c] = (piv * row[c] - t * piv_row[c]) // prev
            row[pc] = 0
        prev = piv
        piv_cols.append(pc)
        pr += 1
        if pr == nr:
            break
    return m, piv_cols, prev


def matmul(a, b):
    """Exact integer matrix product."""
    n = len(a)
    k = len(b)
    if n == 0 or k == 0:
        return [[] for _ in range(n)]
    assert len(a[0]) == k, "shape mismatch"
    p = len(b[0])
    out = []
    for i in range(n):
        arow = a[i]
        orow = [0] * p
        for t in range(k):
            av = arow[t]
            if av == 0:
                continue
            brow = b[t]
            for j in range(p):
                bv = brow[j]
                if bv != 0:
                    orow[j] += av * bv
        out.append(orow)
    return out
