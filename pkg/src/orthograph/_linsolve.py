"""Small exact linear solvers over Fraction.

Systems here are usually tiny (tens of unknowns), so plain Gaussian
elimination with exact rational arithmetic is both simple and fast enough.
Internally the arithmetic runs on gmpy2.mpq when available (same exact
semantics, much faster); results always come back as Fraction.  Two entry
points:

* solve_square: unique solution of a square system, or None when singular;
* solve_consistent: minimal-support solution of a possibly rank-deficient but
  consistent system (free variables pinned to zero), with the pivot columns
  reported so callers can see what was pruned.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _rat
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    _rat = Fraction

_ZERO = _rat(0)


def _to_matrix(rows):
    return [[_rat(x.numerator, x.denominator) for x in map(Fraction, row)] for row in rows]


def _to_vector(xs):
    return [_rat(x.numerator, x.denominator) for x in map(Fraction, xs)]


def _back(x):
    return Fraction(int(x.numerator), int(x.denominator))


def solve_square(a, b):
    """Solve a x = b for square a; return None when a is singular."""
    n = len(a)
    m = _to_matrix(a)
    rhs = _to_vector(b)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return None
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if not m[r][col]:
                continue
            f = m[r][col] / inv
            row_r, row_c = m[r], m[col]
            for c in range(col, n):
                row_r[c] -= f * row_c[c]
            rhs[r] -= f * rhs[col]
    x = [_ZERO] * n
    for r in range(n - 1, -1, -1):
        acc = rhs[r]
        row = m[r]
        for c in range(r + 1, n):
            acc -= row[c] * x[c]
        x[r] = acc / row[r]
    return [_back(v) for v in x]


def invert(a):
    """Exact inverse of a square matrix, or None when singular."""
    n = len(a)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        x = solve_square(a, e)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def solve_consistent(a, b):
    """Solve a possibly singular but consistent system a x = b.

    Returns (x, pivot_columns).  Free variables are set to zero, so the
    solution is supported on the pivot columns.  Raises ArithmeticError if
    the system is inconsistent (b outside the column span).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = _to_matrix(a)
    rhs = _to_vector(b)
    pivots = []
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][col]), None)
        if pivot is None:
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
            rhs[r], rhs[pivot] = rhs[pivot], rhs[r]
        inv = m[r][col]
        row_r = m[r]
        for i in range(rows):
            if i == r or not m[i][col]:
                continue
            f = m[i][col] / inv
            row_i = m[i]
            for c in range(col, cols):
                row_i[c] -= f * row_r[c]
            rhs[i] -= f * rhs[r]
        pivots.append((r, col))
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if rhs[i]:
            raise ArithmeticError("inconsistent linear system")
    x = [_ZERO] * cols
    for row, col in pivots:
        acc = rhs[row]
        for c in range(cols):
            if c != col and m[row][c]:
                acc -= m[row][c] * x[c]
        x[col] = acc / m[row][col]
    return [_back(v) for v in x], [col for _, col in pivots]
