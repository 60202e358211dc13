"""Exact counts of partitions fitting in a rectangle.

``count(x, y, z)`` is the number of partitions of ``z`` whose Young diagram
fits in an ``x`` by ``y`` box (at most ``y`` rows, each of length at most
``x``).  The workhorse is a memoized table of whole rows ``z -> count``
filled by the two-term recurrence

    p(x, y, z) = p(x - 1, y, z - y) + p(x, y - 1, z)

Two independent oracles are kept alongside it: brute-force enumeration of the
diagrams and the coefficient list of the Gaussian binomial ``[x+y, y]_q``.
"""

from __future__ import annotations

import threading
from typing import Iterator

from .errors import BudgetExceeded, DomainError

Partition = tuple  # weakly decreasing positive row lengths

DEFAULT_ENUMERATION_CELLS = 64
DEFAULT_MEMO_CAPACITY = 20_000_000


def area(rows: Partition) -> int:
    return sum(rows)


def fits(rows: Partition, x: int, y: int) -> bool:
    return len(rows) <= y and (not rows or rows[0] <= x)


def distinct_row_lengths(rows: Partition) -> int:
    """Number of inner corners of the diagram."""
    return len(set(rows))


class CountTable:
    """Row vectors ``count_row(x, y)`` keyed by ``(x, y)``.

    ``capacity`` bounds the total number of stored integers.  When a fill
    pushes the table past it, the longest rows are dropped first; anything
    dropped is recomputed on demand.
    """

    def __init__(self, capacity: int = DEFAULT_MEMO_CAPACITY):
        self.capacity = capacity
        self._rows: dict[tuple[int, int], list[int]] = {}
        self._size = 0
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def size(self) -> int:
        return self._size

    def clear(self) -> None:
        with self._lock:
            self._rows.clear()
            self._size = 0

    def row(self, x: int, y: int) -> list[int]:
        if x < 0 or y < 0:
            raise DomainError(f"row needs x, y >= 0, got ({x}, {y})")
        key = (x, y)
        got = self._rows.get(key)
        if got is not None:
            return got
        with self._lock:
            got = self._rows.get(key)
            if got is None:
                got = self._fill(x, y)
                self._evict(keep=key)
        return got

    def value(self, x: int, y: int, z: int) -> int:
        if x < 0 or y < 0 or z < 0 or z > x * y:
            return 0
        # a partition of z never has more than z rows nor rows longer than z
        x, y = min(x, z), min(y, z)
        return self.row(x, y)[z]

    def _fill(self, x: int, y: int) -> list[int]:
        rows = self._rows
        # prev[j] = row(i - 1, j) for the column being built; fetched lazily
        prev: list[list[int] | None] = [None] * (y + 1)
        for i in range(x + 1):
            cur: list[list[int] | None] = [None] * (y + 1)
            for j in range(y + 1):
                r = rows.get((i, j))
                if r is None:
                    if i == 0 or j == 0:
                        r = [1]
                    else:
                        left = prev[j] if prev[j] is not None else rows[(i - 1, j)]
                        down = cur[j - 1]
                        # left shifted by j, plus down padded with zeros
                        r = [0] * (i * j + 1)
                        r[j:j + len(left)] = left
                        for z, v in enumerate(down):
                            r[z] += v
                    rows[(i, j)] = r
                    self._size += len(r)
                cur[j] = r
            prev = cur
        return prev[y]

    def _evict(self, keep: tuple[int, int]) -> None:
        if self._size <= self.capacity:
            return
        for key in sorted(self._rows, key=lambda k: -len(self._rows[k])):
            if self._size <= self.capacity:
                break
            if key == keep:
                continue
            self._size -= len(self._rows.pop(key))


class RowBoundTable:
    """``p_y(n)``, the partitions of ``n`` with at most ``y`` rows.

    Counted by conjugation as partitions of ``n`` into parts at most ``y``:
    ``P[y][n] = P[y-1][n] + P[y][n-y]``.
    """

    def __init__(self):
        self._table: list[list[int]] = [[1]]
        self._lock = threading.Lock()

    def value(self, y: int, n: int) -> int:
        if y < 0 or n < 0:
            return 0
        t = self._table
        if y >= len(t) or n >= len(t[0]):
            with self._lock:
                self._grow(y, n)
            t = self._table
        return t[y][n]

    def _grow(self, y: int, n: int) -> None:
        t = self._table
        ny = max(y + 1, len(t))
        nn = max(n + 1, len(t[0]))
        if ny == len(t) and nn == len(t[0]):
            return
        if nn > len(t[0]):
            nn = max(nn, 2 * len(t[0]))
        table = [[1] + [0] * (nn - 1)]
        for k in range(1, ny):
            below = table[k - 1]
            r = below[:]
            for m in range(k, nn):
                r[m] += r[m - k]
            table.append(r)
        self._table = table


_table = CountTable()
_row_bound = RowBoundTable()


def default_table() -> CountTable:
    return _table


def count(x: int, y: int, z: int) -> int:
    return _table.value(x, y, z)


def count_row(x: int, y: int) -> list[int]:
    if x < 0 or y < 0:
        raise DomainError(f"count_row needs x, y >= 0, got ({x}, {y})")
    return list(_table.row(x, y))


def count_at_most_rows(y: int, z: int) -> int:
    return _row_bound.value(y, z)


def classical_count(z: int) -> int:
    return _row_bound.value(z, z) if z >= 0 else 0


def enumerate_partitions(
    x: int, y: int, z: int, budget: int = DEFAULT_ENUMERATION_CELLS
) -> list[Partition]:
    """Every partition of ``z`` fitting in an ``x`` by ``y`` box.

    Listed in decreasing lexicographic order of the row tuples.  This is the
    brute-force oracle, so boxes with more than ``budget`` cells are refused.
    """
    if x * y > budget and x > 0 and y > 0:
        raise BudgetExceeded("enumerate", x * y, budget)
    if x < 0 or y < 0 or z < 0 or z > x * y:
        return []
    return list(_generate(x, y, z))


def _generate(max_part: int, rows_left: int, z: int) -> Iterator[Partition]:
    if z == 0:
        yield ()
        return
    if rows_left == 0:
        return
    for first in range(min(max_part, z), 0, -1):
        if first * rows_left < z:
            break
        for rest in _generate(first, rows_left - 1, z - first):
            yield (first,) + rest


def gaussian_oracle(x: int, y: int) -> list[int]:
    """Coefficients of the Gaussian binomial ``[x + y choose y]_q``.

    Built as the product over ``i = 1..y`` of ``(1 - q^(x+i)) / (1 - q^i)``,
    each division exact.
    """
    if x < 0 or y < 0:
        raise DomainError(f"gaussian_oracle needs x, y >= 0, got ({x}, {y})")
    poly = [1]
    for i in range(1, y + 1):
        shift = x + i
        num = poly + [0] * shift
        for k in range(len(poly)):
            num[k + shift] -= poly[k]
        # divide by 1 - q^i: q[k] = num[k] + q[k - i]
        quo = num[:]
        for k in range(i, len(quo)):
            quo[k] += quo[k - i]
        if any(quo[len(quo) - i:]):
            raise ArithmeticError(f"inexact division by 1 - q^{i}")
        poly = quo[:len(quo) - i]
    return poly


def count_bounded_corners(x: int, y: int, z: int, i: int) -> int:
    """Partitions of ``z`` in an ``x`` by ``y`` box with at most ``i`` inner corners.

    Inner corners are distinct row lengths, so this enumerates profiles:
    ``k <= i`` distinct lengths ``v_1 > ... > v_k`` with multiplicities
    ``m_j >= 1``, ``sum m_j <= y`` and ``sum v_j m_j = z``.
    """
    if i < 0:
        raise DomainError(f"corner bound must be >= 0, got {i}")
    if x < 0 or y < 0 or z < 0 or z > x * y:
        return 0
    if z == 0:
        return 1

    def profiles(max_value: int, rows_left: int, rest: int, corners_left: int) -> int:
        if rest == 0:
            return 1
        if corners_left == 0 or rows_left == 0:
            return 0
        total = 0
        for v in range(min(max_value, rest), 0, -1):
            if v * rows_left < rest:
                break
            for m in range(1, min(rows_left, rest // v) + 1):
                total += profiles(v - 1, rows_left - m, rest - v * m, corners_left - 1)
        return total

    return profiles(x, y, z, i)


def bounded_corner_table(max_x: int, max_y: int, max_i: int) -> "BoundedCornerTable":
    """``p_{<=i}(x, y, z)`` for every ``x <= max_x``, ``y <= max_y``, ``i <= max_i``.

    A dynamic program over part values ``v = 1, 2, ...`` tracking the number
    of distinct parts used, the number of rows and the area.  Used by the
    bound sweeps, where per-cell profile enumeration is too slow.
    """
    if min(max_x, max_y, max_i) < 0:
        raise DomainError("bounded_corner_table needs nonnegative arguments")
    width = max_x * max_y + 1
    top = width - 1
    # state[k][r][z]: multisets of parts <= v with k distinct values, r parts, area z
    state = [[[0] * width for _ in range(max_y + 1)] for _ in range(max_i + 1)]
    state[0][0][0] = 1
    snapshots = [_cumulate(state)]
    for v in range(1, max_x + 1):
        new = [[r[:] for r in per_k] for per_k in state]
        for k in range(max_i):
            for r in range(max_y + 1):
                src = state[k][r]
                live = [(a, s) for a, s in enumerate(src) if s]
                if not live:
                    continue
                for m in range(1, max_y - r + 1):
                    shift = v * m
                    if shift > top:
                        break
                    dst = new[k + 1][r + m]
                    for a, s in live:
                        if a + shift > top:
                            break
                        dst[a + shift] += s
        state = new
        snapshots.append(_cumulate(state))
    return BoundedCornerTable(max_x, max_y, max_i, snapshots)


def _cumulate(state) -> list[list[list[int]]]:
    # out[k][y][z]: exactly k distinct values, at most y rows
    out = []
    for per_k in state:
        acc = [0] * len(per_k[0])
        cum = []
        for row in per_k:
            acc = [p + q for p, q in zip(acc, row)]
            cum.append(acc)
        out.append(cum)
    return out


class BoundedCornerTable:
    def __init__(self, max_x: int, max_y: int, max_i: int, snapshots):
        self.max_x, self.max_y, self.max_i = max_x, max_y, max_i
        self._snapshots = snapshots

    def value(self, x: int, y: int, z: int, i: int | None = None) -> int:
        i = self.max_i if i is None else i
        if i < 0:
            raise DomainError(f"corner bound must be >= 0, got {i}")
        if x < 0 or y < 0 or z < 0 or z > x * y:
            return 0
        if x > self.max_x or y > self.max_y or i > self.max_i:
            raise DomainError(f"({x}, {y}, i={i}) is outside the table bounds")
        snap = self._snapshots[x]
        return sum(snap[k][y][z] for k in range(i + 1))
