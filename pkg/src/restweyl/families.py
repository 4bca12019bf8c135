"""Catalog generators for the real simple Lie algebra families.

Each function produces the raw entry record for one real form: ambient
type, the restriction projection onto the split part a* (an exact-rational
matrix in root-basis coordinates), the black simple roots, the expected
restricted system with multiplicities, the anisotropic subsystem size, and
the nonvanishing-prediction record.

Restriction maps for the classical families come from explicit coordinate
realizations (an involution theta on the ambient weight space with
pi = (1 + theta)/2), not from diagram combinatorics; the black sets are
recorded for cross-checking only.  The entry loader re-derives everything
from pi and fails loudly on any mismatch.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .errors import CatalogError
from .rootsys import build_root_system

HALF = Fraction(1, 2)


def _e_simple_roots(letter: str, m: int):
    """Standard e-coordinate realization of the simple roots."""
    if letter == "A":
        n = m + 1
        return [[Fraction(int(j == i) - int(j == i + 1)) for j in range(n)]
                for i in range(m)]
    rows = [[Fraction(int(j == i) - int(j == i + 1)) for j in range(m)]
            for i in range(m - 1)]
    last = [Fraction(0)] * m
    if letter == "B":
        last[m - 1] = Fraction(1)
    elif letter == "C":
        last[m - 1] = Fraction(2)
    elif letter == "D":
        last[m - 2] = Fraction(1)
        last[m - 1] = Fraction(1)
    else:
        raise ValueError(letter)
    rows.append(last)
    return rows


def _pi_root_coords(letter: str, rank: int, theta_diag_action):
    """Convert pi = (1+theta)/2 from e-coordinates to root coordinates.

    ``theta_diag_action(vec)`` applies theta to an e-coordinate vector.
    Returns the rank x rank Fraction matrix of pi on root coordinates.
    """
    simples = _e_simple_roots(letter, rank)
    ncoord = len(simples[0])
    s_cols = [[simples[i][k] for i in range(rank)] for k in range(ncoord)]
    images = []
    for i in range(rank):
        th = theta_diag_action(simples[i])
        images.append([(a + b) * HALF for a, b in zip(simples[i], th)])
    rhs = [[images[i][k] for i in range(rank)] for k in range(ncoord)]
    sol = linalg.solve(s_cols, rhs)  # columns: pi(alpha_i) in root coords
    return [tuple(sol[i][j] for j in range(rank)) for i in range(rank)]


def _identity(rank):
    return [tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank)]


def _zero(rank):
    return [tuple(Fraction(0) for _ in range(rank)) for _ in range(rank)]


def _black_from_projection(proj):
    rank = len(proj)
    return [j + 1 for j in range(rank)
            if all(proj[i][j] == 0 for i in range(rank))]


def _cone(form, zero_fw=(), generators=None):
    return {"form": form, "zero_fw": list(zero_fw),
            "lattice_generators": generators}


def _entry(label, family, params, ambient, proj, sigma, delta0_count, cone,
           restricted_rank):
    return {
        "label": label,
        "family": family,
        "params": list(params),
        "ambient": list(ambient),
        "projection": [[x for x in row] for row in proj],
        "black": _black_from_projection(proj),
        "restricted_rank": restricted_rank,
        "sigma": sigma,
        "delta0_count": delta0_count,
        "cone": cone,
    }


def _sigma(typ, rank, class_mults):
    return {"type": typ, "rank": rank, "class_mults": list(class_mults)}


# -- families -----------------------------------------------------------------

def sl_n_r(n: int):
    """sl(n,R): split ambient A_{n-1}."""
    if n < 2:
        raise CatalogError("sl(n,R) needs n >= 2")
    r = n - 1
    return _entry(f"sl({n},R)", "sl", [n], ("A", r), _identity(r),
                  _sigma("A", r, [1]), 0, _cone("full_chamber"), r)


def su_p_q(p: int, q: int):
    """su(p,q), p <= q: ambient A_{p+q-1}, restricted BC_p (C_p if p=q)."""
    if not 1 <= p <= q:
        raise CatalogError("su(p,q) needs 1 <= p <= q (swap to normalize)")
    n = p + q
    if n < 2:
        raise CatalogError("su(p,q) needs p+q >= 2")
    r = n - 1

    def theta(vec):
        out = [-x for x in vec]
        for i in range(p):
            out[i], out[n - 1 - i] = -vec[n - 1 - i], -vec[i]
        return out

    proj = _pi_root_coords("A", r, theta)
    if p == q:
        sigma = _sigma("C", p, [2, 1] if p >= 2 else [1])
    else:
        sigma = _sigma("BC", p,
                       [2 * (q - p), 2, 1] if p >= 2 else [2 * (q - p), 1])
    d0 = (q - p - 1) * (q - p) if q - p >= 2 else 0
    cone = _cone("full_chamber") if q - p <= 1 else _cone("unknown")
    if p == q == 1:
        # su(1,1) is split (isomorphic to sl(2,R))
        sigma = _sigma("C", 1, [1])
        cone = _cone("full_chamber")
    return _entry(f"su({p},{q})", "su", [p, q], ("A", r), proj, sigma, d0,
                  cone, p)


def so_p_q(p: int, q: int):
    """so(p,q), p <= q: ambient B_m (p+q odd) or D_m (p+q even)."""
    if not 1 <= p <= q:
        raise CatalogError("so(p,q) needs 1 <= p <= q (swap to normalize)")
    n = p + q
    if n < 3 or n == 4:
        raise CatalogError(f"so({p},{q}) is not a simple type "
                           "(need p+q = 3 or p+q >= 5)")
    if n % 2:
        letter, m = "B", (n - 1) // 2
    else:
        letter, m = "D", n // 2
    if letter == "B" and m == 1:
        # so(1,2): ambient B1 = A1, split
        return _entry("so(1,2)", "so", [1, 2], ("A", 1), _identity(1),
                      _sigma("B", 1, [1]), 0, _cone("full_chamber"), 1)

    def theta(vec):
        return [x if i < p else -x for i, x in enumerate(vec)]

    proj = _pi_root_coords(letter, m, theta)
    if p == m:  # split: so(m,m+1) or so(m,m)
        sigma = _sigma(letter, m, [1, 1] if letter == "B" else [1])
        d0 = 0
        cone = _cone("full_chamber")
    else:
        sigma = _sigma("B", p, [q - p, 1] if p >= 2 else [q - p])
        k = m - p
        d0 = 2 * k * k if letter == "B" else 2 * k * (k - 1)
        if letter == "D" and k == 1:
            cone = _cone("full_chamber")  # quasi-split so(m-1, m+1)
        elif letter == "B" and p == 2 and (q == 7 or q >= 9):
            # sublattice hypothesis: even e-coordinate sum, i.e. the last
            # root coordinate even; generators alpha_1..alpha_{m-1}, 2 alpha_m
            gens = [[int(i == j) * (2 if i == m - 1 else 1) for j in range(m)]
                    for i in range(m)]
            cone = _cone("sublattice",
                         zero_fw=[i for i in range(5, m + 1)],
                         generators=gens)
        else:
            cone = _cone("unknown")
    return _entry(f"so({p},{q})", "so", [p, q], (letter, m), proj, sigma, d0,
                  cone, p)


def sp_2n_r(n: int):
    """sp(2n,R): split ambient C_n."""
    if n < 1:
        raise CatalogError("sp(2n,R) needs n >= 1")
    if n == 1:
        return _entry("sp(2,R)", "spr", [1], ("A", 1), _identity(1),
                      _sigma("C", 1, [1]), 0, _cone("full_chamber"), 1)
    return _entry(f"sp({2*n},R)", "spr", [n], ("C", n), _identity(n),
                  _sigma("C", n, [1, 1]), 0, _cone("full_chamber"), n)


def sp_p_q(p: int, q: int):
    """sp(p,q), p <= q: ambient C_{p+q}, restricted BC_p (C_p if p=q)."""
    if not 1 <= p <= q:
        raise CatalogError("sp(p,q) needs 1 <= p <= q (swap to normalize)")
    n = p + q

    def theta(vec):
        out = list(vec)
        for i in range(p):
            out[2 * i], out[2 * i + 1] = vec[2 * i + 1], vec[2 * i]
        for j in range(2 * p, n):
            out[j] = -vec[j]
        return out

    proj = _pi_root_coords("C", n, theta)
    if p == q:
        sigma = _sigma("C", p, [4, 3] if p >= 2 else [3])
    else:
        sigma = _sigma("BC", p,
                       [4 * (q - p), 4, 3] if p >= 2 else [4 * (q - p), 3])
    d0 = 2 * p + 2 * (q - p) * (q - p)
    cone = _cone("full_chamber") if (p, q) == (2, 6) else _cone("unknown")
    return _entry(f"sp({p},{q})", "sp", [p, q], ("C", n), proj, sigma, d0,
                  cone, p)


def su_star_2n(n: int):
    """su*(2n) = sl(n,H): ambient A_{2n-1}, restricted A_{n-1} with
    multiplicity 4."""
    if n < 2:
        raise CatalogError("su*(2n) needs n >= 2")
    r = 2 * n - 1

    def theta(vec):
        out = list(vec)
        for i in range(n):
            out[2 * i], out[2 * i + 1] = vec[2 * i + 1], vec[2 * i]
        return out

    proj = _pi_root_coords("A", r, theta)
    return _entry(f"su*({2*n})", "sustar", [n], ("A", r), proj,
                  _sigma("A", n - 1, [4]), 2 * n, _cone("unknown"), n - 1)


def so_star_2n(n: int):
    """so*(2n): ambient D_n, restricted C_{n/2} or BC_{(n-1)/2}."""
    if n < 3:
        raise CatalogError("so*(2n) needs n >= 3")
    m = n // 2

    def theta(vec):
        out = list(vec)
        for i in range(m):
            out[2 * i], out[2 * i + 1] = vec[2 * i + 1], vec[2 * i]
        if n % 2:
            out[n - 1] = -vec[n - 1]
        return out

    proj = _pi_root_coords("D", n, theta)
    if n % 2 == 0:
        sigma = _sigma("C", m, [4, 1] if m >= 2 else [1])
    else:
        sigma = _sigma("BC", m, [4, 4, 1] if m >= 2 else [4, 1])
    return _entry(f"so*({2*n})", "sostar", [n], ("D", n), proj, sigma,
                  2 * m, _cone("unknown"), m)


def eiv():
    """EIV = E6(-26), the real form of E6 with maximal compact subalgebra
    F4: black D4 core, restricted A2 with multiplicity 8."""
    rs = build_root_system("E", 6)
    black = [2, 3, 4, 5]
    proj = projector_black_complement(rs, black)
    return _entry("EIV", "eiv", [], ("E", 6), proj, _sigma("A", 2, [8]),
                  24, _cone("full_chamber"), 2)


def split_exceptional(letter: str):
    label = {"G": "g2(2)", "F": "f4(4)", "E": "e6(6)"}[letter]
    rank = {"G": 2, "F": 4, "E": 6}[letter]
    mults = [1] if letter == "E" else [1, 1]
    return _entry(label, "splitexc", [], (letter, rank), _identity(rank),
                  _sigma(letter, rank, mults), 0, _cone("full_chamber"), rank)


def compact_form(letter: str, rank: int, name: str):
    rs = build_root_system(letter, rank)
    return _entry(f"{name}-compact", "compact", [letter, rank],
                  (letter, rank), _zero(rank),
                  _sigma(None, 0, []), 2 * len(rs.positive_roots),
                  _cone("zero_only"), 0)


def projector_black_complement(rs, black):
    """Orthogonal projection onto the complement of the span of the black
    simple roots (valid for arrow-free restriction data such as EIV)."""
    r = rs.rank
    b = [i - 1 for i in black]
    gram = [[Fraction(rs.bilinear[x][y]) for y in b] for x in b]
    rows = []
    for j in range(r):
        rhs = [[Fraction(rs.bilinear[x][j])] for x in b]
        coeffs = [row[0] for row in linalg.solve(gram, rhs)]
        col = [Fraction(int(i == j)) for i in range(r)]
        for c, x in zip(coeffs, b):
            col[x] -= c
        rows.append(col)
    return [tuple(rows[j][i] for j in range(r)) for i in range(r)]


# -- the shipped catalog -------------------------------------------------------

def default_catalog_entries():
    """All shipped entries: classical families with restricted rank <= 5
    and ambient rank <= 6 (plus sp(2,6), the paper's conjecture case), EIV,
    the split exceptionals G2/F4/E6, and compact forms of rank <= 3."""
    entries = []
    for n in range(2, 7):
        entries.append(sl_n_r(n))
    for p in range(1, 4):
        for q in range(p, 8 - p):
            entries.append(su_p_q(p, q))
    for p in range(1, 6):
        for q in range(p, 14 - p):
            n = p + q
            if n == 4 or n < 3:
                continue
            m = (n - 1) // 2 if n % 2 else n // 2
            if m > 6:
                continue
            entries.append(so_p_q(p, q))
    for n in range(1, 6):
        entries.append(sp_2n_r(n))
    for p in range(1, 4):
        for q in range(p, 7 - p):
            entries.append(sp_p_q(p, q))
    entries.append(sp_p_q(2, 6))
    entries.append(su_star_2n(2))
    entries.append(su_star_2n(3))
    for n in range(3, 7):
        entries.append(so_star_2n(n))
    entries.append(eiv())
    for letter in ("G", "F", "E"):
        entries.append(split_exceptional(letter))
    for letter, rank, name in [("A", 1, "su(2)"), ("A", 2, "su(3)"),
                               ("A", 3, "su(4)"), ("B", 2, "so(5)"),
                               ("B", 3, "so(7)"), ("C", 3, "sp(3)"),
                               ("G", 2, "g2")]:
        entries.append(compact_form(letter, rank, name))
    return entries
