from itertools import product

import pytest

ACCEPTANCE_LINES: list[str] = []


def brute_partitions(x, y, z):
    """Weakly decreasing y-tuples with entries in [0, x] summing to z.

    Independent of the library: plain filtering of a Cartesian product.
    """
    if x < 0 or y < 0 or z < 0:
        return []
    out = []
    for rows in product(range(x + 1), repeat=y):
        if sum(rows) == z and all(rows[i] >= rows[i + 1] for i in range(y - 1)):
            out.append(tuple(r for r in rows if r))
    return out


def brute_words(n):
    return ["".join(p) for p in product("ab", repeat=n)]


@pytest.fixture
def record_criterion():
    def record(number, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {name}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
