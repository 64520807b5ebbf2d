"""Exact linear solves over the rationals.

Rows are scaled to integers, eliminated with Bareiss one-step fraction-free
pivoting, then back-substituted with exact rational division.  Intermediate
entries stay integers (they are minors of the scaled matrix), so the only
divisions are the provably exact Bareiss ones plus the final substitution.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import SingularSystem


def solve_columns(matrix, rhs_rows):
    """Solve A x = b for every right-hand-side column at once.

    ``matrix`` is an n x n sequence of Fraction rows, ``rhs_rows`` an n x m
    sequence whose row i holds the i-th entry of each of the m right-hand
    sides.  Returns an n x m list of Fractions.  Raises SingularSystem.
    """
    n = len(matrix)
    if n == 0:
        return []
    m = len(rhs_rows[0])
    aug = []
    for i in range(n):
        row = [Fraction(x) for x in matrix[i]] + [Fraction(x) for x in rhs_rows[i]]
        scale = lcm(*(f.denominator for f in row))
        aug.append([int(f * scale) for f in row])

    prev = 1
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            raise SingularSystem(f"singular {n}x{n} system at column {col}", size=n)
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        for r in range(col + 1, n):
            factor = aug[r][col]
            row = aug[r]
            top = aug[col]
            for c in range(col + 1, n + m):
                num = pivot * row[c] - factor * top[c]
                q, rem = divmod(num, prev)
                assert rem == 0, "Bareiss exact-division invariant broken"
                row[c] = q
            row[col] = 0
        prev = pivot

    solution = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n - 1, -1, -1):
        for k in range(m):
            acc = Fraction(aug[i][n + k])
            for j in range(i + 1, n):
                if aug[i][j]:
                    acc -= aug[i][j] * solution[j][k]
            solution[i][k] = acc / aug[i][i]
    return solution


def solve(matrix, rhs):
    """Solve A x = b for a single right-hand side; returns a list of Fractions."""
    cols = solve_columns(matrix, [[b] for b in rhs])
    return [row[0] for row in cols]
