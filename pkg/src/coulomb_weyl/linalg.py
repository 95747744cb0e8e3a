"""Exact linear algebra over Z and F2.

Integer matrices are plain lists of lists of Python ints so that entries
never overflow; F2 rows are packed into Python ints used as bitsets.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

IntMatrix = List[List[int]]


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def column_echelon(A: Sequence[Sequence[int]], ncols: Optional[int] = None):
    """Column-style echelon form ``H = A V`` with ``V`` unimodular.

    Returns ``(H, V, pivots)`` where ``pivots`` lists ``(row, col)`` pairs;
    the pivot columns are ``0..rank-1`` and every later column of ``H`` is
    zero, so the matching columns of ``V`` span the integer kernel of ``A``.
    """
    H = [list(map(int, row)) for row in A]
    n = ncols if ncols is not None else (len(H[0]) if H else 0)
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = []
    p = 0
    for i, row in enumerate(H):
        if p == n:
            break
        for j in range(p + 1, n):
            b = row[j]
            if b == 0:
                continue
            a = row[p]
            g, s, t = _egcd(a, b)
            ag, bg = a // g, b // g
            for M in (H, V):
                for r in M:
                    cp, cj = r[p], r[j]
                    r[p] = s * cp + t * cj
                    r[j] = -bg * cp + ag * cj
        if row[p] != 0:
            if row[p] < 0:
                for M in (H, V):
                    for r in M:
                        r[p] = -r[p]
            pivots.append((i, p))
            p += 1
    return H, V, pivots


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Basis (as rows) of ``{x in Z^n : A x = 0}``."""
    _, V, pivots = column_echelon(A, ncols)
    rank = len(pivots)
    return [[V[i][c] for i in range(ncols)] for c in range(rank, ncols)]


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int):
    """Find ``x in Z^n`` with ``A x = b``; ``None`` when no integral solution.

    Returns ``(x, kernel_rows)`` so callers get the full affine solution set.
    """
    H, V, pivots = column_echelon(A, ncols)
    pivot_of_row = {r: c for r, c in pivots}
    resid = [int(v) for v in b]
    y = [0] * ncols
    for i in range(len(H)):
        c = pivot_of_row.get(i)
        if c is None:
            if resid[i] != 0:
                return None
            continue
        q, rem = divmod(resid[i], H[i][c])
        if rem:
            return None
        y[c] = q
        if q:
            for r in range(len(H)):
                if H[r][c]:
                    resid[r] -= q * H[r][c]
    x = [sum(V[i][c] * y[c] for c in range(ncols)) for i in range(ncols)]
    rank = len(pivots)
    kernel = [[V[i][c] for i in range(ncols)] for c in range(rank, ncols)]
    return x, kernel


def row_hnf(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Hermite normal form of the row lattice; zero rows dropped."""
    A = [list(map(int, r)) for r in rows]
    out: IntMatrix = []
    col = 0
    r0 = 0
    while r0 < len(A) and col < ncols:
        nz = [i for i in range(r0, len(A)) if A[i][col]]
        if not nz:
            col += 1
            continue
        while True:
            nz = [i for i in range(r0, len(A)) if A[i][col]]
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[r0], A[piv] = A[piv], A[r0]
            done = True
            for i in range(r0 + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // A[r0][col]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r0])]
                    if A[i][col]:
                        done = False
            if done:
                break
        if A[r0][col] < 0:
            A[r0] = [-x for x in A[r0]]
        for i in range(r0):
            q = A[i][col] // A[r0][col]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r0])]
        r0 += 1
        col += 1
    out = [r for r in A[:r0] if any(r)]
    return out


def smith_diagonal(rows: Sequence[Sequence[int]], ncols: int) -> List[int]:
    """Nonzero invariant factors of an integer matrix (ascending)."""
    A = [list(map(int, r)) for r in rows if any(r)]
    diag: List[int] = []
    while A and ncols:
        entries = [(abs(A[i][j]), i, j) for i in range(len(A)) for j in range(ncols) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[0], A[pi] = A[pi], A[0]
        for r in A:
            r[0], r[pj] = r[pj], r[0]
        while True:
            p = A[0][0]
            changed = False
            for i in range(1, len(A)):
                q = A[i][0] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[0])]
                if A[i][0]:
                    changed = True
            for j in range(1, ncols):
                q = A[0][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[0]
                if A[0][j]:
                    changed = True
            if not changed:
                bad = [(i, j) for i in range(1, len(A)) for j in range(1, ncols) if A[i][j] % p]
                if not bad:
                    break
                i, _ = bad[0]
                A[0] = [x + y for x, y in zip(A[0], A[i])]
                changed = True
            if changed:
                entries = [(abs(A[i][j]), i, j) for i in range(len(A)) for j in range(ncols)
                           if A[i][j] and (i == 0 or j == 0)]
                _, pi, pj = min(entries)
                A[0], A[pi] = A[pi], A[0]
                for r in A:
                    r[0], r[pj] = r[pj], r[0]
        diag.append(abs(A[0][0]))
        A = [r[1:] for r in A[1:] if any(r[1:])]
        ncols -= 1
    return sorted(diag)


def integral_sublattice(pairings: Sequence[Sequence[Fraction]]) -> IntMatrix:
    """Basis of ``{x in Z^r : x . P in Z^k}`` for a rational ``r x k`` matrix P."""
    r = len(pairings)
    k = len(pairings[0]) if r else 0
    if k == 0:
        return [[int(i == j) for j in range(r)] for i in range(r)]
    D = 1
    for row in pairings:
        for v in row:
            D = D * Fraction(v).denominator // gcd(D, Fraction(v).denominator)
    P = [[int(Fraction(v) * D) for v in row] for row in pairings]
    # x P + D y = 0  <=>  M (x; y) = 0 with M = [P^T | D I]
    M = [[P[i][j] for i in range(r)] + [D * int(j == l) for l in range(k)] for j in range(k)]
    ker = integer_kernel(M, r + k)
    return row_hnf([v[:r] for v in ker], r)


def mat_inverse_fraction(M: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Gauss-Jordan inverse over Q."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


# ---------------------------------------------------------------- F2 ----

def gf2_solve(rows: Sequence[int], rhs: Sequence[int], nvars: int):
    """Solve ``rows . x = rhs`` over F2 with bitset rows.

    Reduced echelon form with pivots in increasing column order, so the
    particular solution is the one with all free variables zero.  Returns
    ``(x, kernel)`` as bitsets, or ``None`` if the system is inconsistent.
    """
    mask = (1 << nvars) - 1
    piv: dict = {}
    for row, b in zip(rows, rhs):
        row &= mask
        b &= 1
        for c, (prow, pb) in piv.items():
            if (row >> c) & 1:
                row ^= prow
                b ^= pb
        if not row:
            if b:
                return None
            continue
        c = (row & -row).bit_length() - 1
        for k, (prow, pb) in list(piv.items()):
            if (prow >> c) & 1:
                piv[k] = (prow ^ row, pb ^ b)
        piv[c] = (row, b)
    x = 0
    for c, (_, b) in piv.items():
        if b:
            x |= 1 << c
    kernel = []
    for f in range(nvars):
        if f in piv:
            continue
        v = 1 << f
        for c, (row, _) in piv.items():
            if (row >> f) & 1:
                v |= 1 << c
        kernel.append(v)
    return x, kernel


def gf2_rank(rows: Sequence[int]) -> int:
    basis: dict = {}
    for row in rows:
        while row:
            low = (row & -row).bit_length() - 1
            if low in basis:
                row ^= basis[low]
            else:
                basis[low] = row
                break
    return len(basis)


def gf2_in_span(vec: int, rows: Sequence[int]) -> bool:
    return gf2_rank(list(rows)) == gf2_rank(list(rows) + [vec])
