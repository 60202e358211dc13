"""Integer row echelon form with a unimodular transform.

Used to test membership in, and write coordinates for, the subgroup generated
by a commuting set of group elements.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Echelon:
    rows: list[list[int]]  # nonzero echelon rows
    transforms: list[list[int]]  # transforms[i] . generators == rows[i]
    relations: list[list[int]]  # integer relations among the generators
    pivots: list[int]

    def solve(self, target) -> list[int] | None:
        """Integer coefficients ``k`` with ``k . generators == target``, or None."""
        rest = list(target)
        coeffs = [0] * (len(self.transforms[0]) if self.transforms else 0)
        for row, tr, col in zip(self.rows, self.transforms, self.pivots):
            q, r = divmod(rest[col], row[col])
            if r:
                return None
            if q:
                rest = [a - q * b for a, b in zip(rest, row)]
                coeffs = [a + q * b for a, b in zip(coeffs, tr)]
        if any(rest):
            return None
        return coeffs


def echelon(vectors: list[list[int]]) -> Echelon:
    n = len(vectors)
    width = len(vectors[0]) if vectors else 0
    rows = [list(v) for v in vectors]
    tr = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = []
    top = 0
    for col in range(width):
        while True:
            live = [i for i in range(top, n) if rows[i][col]]
            if not live:
                break
            best = min(live, key=lambda i: abs(rows[i][col]))
            for i in live:
                if i != best:
                    q = rows[i][col] // rows[best][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[best])]
                    tr[i] = [a - q * b for a, b in zip(tr[i], tr[best])]
            if len(live) == 1 or all(rows[i][col] == 0 for i in live if i != best):
                rows[top], rows[best] = rows[best], rows[top]
                tr[top], tr[best] = tr[best], tr[top]
                if rows[top][col] < 0:
                    rows[top] = [-a for a in rows[top]]
                    tr[top] = [-a for a in tr[top]]
                pivots.append(col)
                top += 1
                break
    return Echelon(rows[:top], tr[:top], tr[top:], pivots)
