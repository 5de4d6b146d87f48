"""Exact integer/rational linear algebra for small matrices.

Matrices are lists of lists of Python ints (or Fractions where noted).
Sizes here are tiny (Cech complexes on at most 2^(d+1) charts), so plain
fraction-free Gaussian elimination and textbook Smith reduction are the
right tools.
"""

from __future__ import annotations

from fractions import Fraction


def rank(matrix) -> int:
    """Rank over Q by Gaussian elimination on Fractions."""
    if not matrix or not matrix[0]:
        return 0
    m = [[Fraction(x) for x in row] for row in matrix]
    rows, cols = len(m), len(m[0])
    rk = 0
    for col in range(cols):
        piv = next((i for i in range(rk, rows) if m[i][col]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = 1 / m[rk][col]
        m[rk] = [x * inv for x in m[rk]]
        for i in range(rows):
            if i != rk and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
        if rk == rows:
            break
    return rk


def nullspace(matrix):
    """Basis of the rational kernel (list of Fraction vectors)."""
    if not matrix or not matrix[0]:
        cols = len(matrix[0]) if matrix else 0
        return [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    m = [[Fraction(x) for x in row] for row in matrix]
    rows, cols = len(m), len(m[0])
    pivots = []
    rk = 0
    for col in range(cols):
        piv = next((i for i in range(rk, rows) if m[i][col]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = 1 / m[rk][col]
        m[rk] = [x * inv for x in m[rk]]
        for i in range(rows):
            if i != rk and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        pivots.append(col)
        rk += 1
        if rk == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -m[ri][fc]
        basis.append(v)
    return basis


def column_space_rank(blocks) -> int:
    """Rank of the matrix whose columns are the given vectors."""
    if not blocks:
        return 0
    cols = [list(v) for v in blocks]
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]
    return rank(matrix)


def smith_normal_form(matrix):
    """Elementary divisors of an integer matrix (nonzero diagonal of the SNF).

    Textbook reduction with exact integers; returns the list d_1 | d_2 | ...
    of positive elementary divisors.
    """
    if not matrix or not matrix[0]:
        return []
    m = [list(map(int, row)) for row in matrix]
    rows, cols = len(m), len(m[0])
    divisors = []
    top = 0
    while top < min(rows, cols):
        # find a nonzero pivot below/right of (top, top)
        piv = None
        for i in range(top, rows):
            for j in range(top, cols):
                if m[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        m[top], m[i] = m[i], m[top]
        for row in m:
            row[top], row[j] = row[j], row[top]
        while True:
            # clear column by division, restarting if remainders appear
            reduced = True
            for i in range(top + 1, rows):
                if m[i][top] % m[top][top]:
                    q = m[i][top] // m[top][top]
                    m[i] = [a - q * b for a, b in zip(m[i], m[top])]
                    m[top], m[i] = m[i], m[top]
                    reduced = False
            if not reduced:
                continue
            for i in range(top + 1, rows):
                if m[i][top]:
                    q = m[i][top] // m[top][top]
                    m[i] = [a - q * b for a, b in zip(m[i], m[top])]
            # clear row
            done_row = True
            for j in range(top + 1, cols):
                if m[top][j] % m[top][top]:
                    q = m[top][j] // m[top][top]
                    for row in m:
                        row[j] -= q * row[top]
                    for row in m:
                        row[top], row[j] = row[j], row[top]
                    done_row = False
                    break
            if not done_row:
                continue
            for j in range(top + 1, cols):
                if m[top][j]:
                    q = m[top][j] // m[top][top]
                    for row in m:
                        row[j] -= q * row[top]
            # ensure the pivot divides the remaining block
            offender = None
            for i in range(top + 1, rows):
                for j in range(top + 1, cols):
                    if m[i][j] % m[top][top]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            m[top] = [a + b for a, b in zip(m[top], m[offender])]
        divisors.append(abs(m[top][top]))
        top += 1
    return divisors


def max_p_valuation(divisors, p) -> int:
    """Largest v_p among the elementary divisors (0 for an empty list)."""
    vmax = 0
    for d in divisors:
        v = 0
        while d % p == 0:
            d //= p
            v += 1
        vmax = max(vmax, v)
    return vmax
