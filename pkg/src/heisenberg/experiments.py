"""Desk-scale experiments: ratio tables, unimodality and bound sweeps,
corner-ratio decay, coset decay and the southwest random walk."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import partitions
from .errors import BudgetExceeded, DomainError
from .group import A, B, GroupElement, inverse, multiply, power
from .harmonic import EvaluableFunction, coset_boundary_sum

DEFAULT_PRECISION = 30
DEFAULT_COMPUTE_BUDGET = 10_000


def to_decimal(q: Fraction, digits: int = DEFAULT_PRECISION) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(q.numerator) / Decimal(q.denominator))


@dataclass(frozen=True)
class SequenceSpec:
    """A family ``t -> (x, y, z)`` inside ``1 <= y <= x``, ``0 < z <= xy/2``.

    Presets: ``diagonal`` (``x = y = t``, ``z = floor(t^2/2)``),
    ``fixed-height`` (``y`` fixed, ``x = t``, ``z = floor(t y/2)``) and
    ``affine`` with integer coefficients ``(x0, x1, y0, y1, z0, z1)``.
    """

    preset: str
    t_values: tuple[int, ...]
    height: int | None = None
    affine: tuple[int, int, int, int, int, int] | None = None

    def triple(self, t: int) -> tuple[int, int, int]:
        if self.preset == "diagonal":
            x = y = t
            z = t * t // 2
        elif self.preset == "fixed-height":
            if self.height is None:
                raise DomainError("fixed-height preset needs a height")
            x, y = t, self.height
            z = t * y // 2
        elif self.preset == "affine":
            if self.affine is None or len(self.affine) != 6:
                raise DomainError("affine preset needs six integer coefficients")
            x0, x1, y0, y1, z0, z1 = self.affine
            x, y, z = x0 + x1 * t, y0 + y1 * t, z0 + z1 * t
        else:
            raise DomainError(f"unknown preset {self.preset!r}")
        if not (1 <= y <= x and 0 < z and 2 * z <= x * y):
            raise DomainError(f"t={t} gives ({x}, {y}, {z}), outside 1 <= y <= x, 0 < z <= xy/2")
        return x, y, z

    def triples(self) -> list[tuple[int, int, int, int]]:
        return [(t, *self.triple(t)) for t in self.t_values]

    def describe(self) -> str:
        extra = ""
        if self.preset == "fixed-height":
            extra = f" height={self.height}"
        elif self.preset == "affine":
            extra = " affine=" + ",".join(map(str, self.affine or ()))
        return f"{self.preset} t={','.join(map(str, self.t_values))}{extra}"


def parse_range(text: str) -> tuple[int, ...]:
    """``"a..b"`` (inclusive), ``"a..b:step"`` or a comma list."""
    text = text.strip()
    if ".." in text:
        lo, _, rest = text.partition("..")
        hi, _, step = rest.partition(":")
        return tuple(range(int(lo), int(hi) + 1, int(step) if step else 1))
    return tuple(int(v) for v in text.split(",") if v.strip())


@dataclass
class RatioRow:
    t: int
    x: int
    y: int
    z: int
    previous: int
    current: int
    ratio: Fraction
    ratio_decimal: str
    deviation: Fraction
    deviation_decimal: str


@dataclass
class RatioReport:
    spec: SequenceSpec
    rows: list[RatioRow]

    def deviations(self) -> list[Fraction]:
        return [r.deviation for r in self.rows]


def _check_budget(x: int, y: int, budget: int, what: str) -> None:
    if x * y > budget:
        raise BudgetExceeded(f"{what} row ({x}, {y})", x * y, budget)


def ratio_table(
    spec: SequenceSpec,
    budget: int = DEFAULT_COMPUTE_BUDGET,
    precision: int = DEFAULT_PRECISION,
) -> RatioReport:
    """``p(x, y, z - 1) / p(x, y, z)`` along the family, exactly."""
    rows = []
    for t, x, y, z in spec.triples():
        _check_budget(x, y, budget, f"t={t}")
        row = partitions.count_row(x, y)
        prev, cur = row[z - 1], row[z]
        ratio = Fraction(prev, cur)
        dev = abs(ratio - 1)
        rows.append(
            RatioRow(t, x, y, z, prev, cur, ratio, to_decimal(ratio, precision), dev, to_decimal(dev, precision))
        )
    return RatioReport(spec, rows)


def unimodality_sweep(max_x: int, max_y: int) -> list[tuple[int, int, int]]:
    """Cells ``(x, y, z)`` with ``z <= xy/2`` where ``p(x, y, z) < p(x, y, z - 1)``."""
    violations = []
    for x in range(max_x + 1):
        for y in range(max_y + 1):
            row = partitions.count_row(x, y)
            for z in range(1, x * y // 2 + 1):
                if row[z] < row[z - 1]:
                    violations.append((x, y, z))
    return violations


@dataclass
class BoundReport:
    cells: int = 0
    corner_cells: int = 0
    # p(x, y, z) <= z^(y-1)
    power_violations: list[tuple[int, int, int]] = field(default_factory=list)
    # p_{<=i}(x, y, z) <= (2z)^(2i)
    corner_violations: list[tuple[int, int, int, int]] = field(default_factory=list)
    # y -> (min of p / z^(y-1) over z <= xy/2, where it is attained)
    lower_ratio_minima: dict[int, tuple[Fraction, tuple[int, int, int]]] = field(default_factory=dict)
    # (j, x, y, z, p >= z^j)
    power_lower_checks: list[tuple[int, int, int, int, bool]] = field(default_factory=list)

    @property
    def upper_bounds_hold(self) -> bool:
        return not self.power_violations and not self.corner_violations


def bound_sweep(
    x_values: Iterable[int],
    y_values: Iterable[int],
    i_values: Iterable[int] = (1, 2, 3, 4),
    z_values: Iterable[int] | None = None,
    j_values: Iterable[int] = (),
) -> BoundReport:
    """Check the polynomial upper bounds on every cell of the region.

    ``z`` runs over ``1..xy`` unless ``z_values`` restricts it.  The lower
    bounds are only reported: the minima of ``p / z^(y-1)`` per height, and
    for each ``j`` whether ``p >= z^j`` on the cells with ``4j <= y <= x``
    and ``z <= xy/2``.
    """
    xs, ys = sorted(set(x_values)), sorted(set(y_values))
    i_list = sorted(set(i_values))
    j_list = sorted(set(j_values))
    if not xs or not ys or min(xs) < 1 or min(ys) < 1 or (i_list and min(i_list) < 1):
        raise DomainError("bound sweeps need x, y, i >= 1")
    z_filter = None if z_values is None else set(z_values)
    table = partitions.bounded_corner_table(max(xs), max(ys), max(i_list)) if i_list else None
    rep = BoundReport()
    for x in xs:
        for y in ys:
            row = partitions.count_row(x, y)
            for z in range(1, x * y + 1):
                if z_filter is not None and z not in z_filter:
                    continue
                p = row[z]
                rep.cells += 1
                if p > z ** (y - 1):
                    rep.power_violations.append((x, y, z))
                if 2 * z <= x * y:
                    q = Fraction(p, z ** (y - 1))
                    best = rep.lower_ratio_minima.get(y)
                    if best is None or q < best[0]:
                        rep.lower_ratio_minima[y] = (q, (x, y, z))
                    for j in j_list:
                        if 4 * j <= y <= x:
                            rep.power_lower_checks.append((j, x, y, z, p >= z ** j))
                for i in i_list:
                    rep.corner_cells += 1
                    if table.value(x, y, z, i) > (2 * z) ** (2 * i):
                        rep.corner_violations.append((x, y, z, i))
    return rep


@dataclass
class CornerRatioRow:
    t: int
    x: int
    y: int
    z: int
    bounded: int
    total: int
    ratio: Fraction
    ratio_decimal: str


def corner_ratio_decay(
    i: int,
    spec: SequenceSpec,
    budget: int = DEFAULT_COMPUTE_BUDGET,
    precision: int = DEFAULT_PRECISION,
) -> list[CornerRatioRow]:
    """``p_{<=i} / p`` along the family."""
    if i < 0:
        raise DomainError(f"corner bound must be >= 0, got {i}")
    rows = []
    for t, x, y, z in spec.triples():
        _check_budget(x, y, budget, f"t={t}")
        bounded = partitions.count_bounded_corners(x, y, z, i)
        total = partitions.count(x, y, z)
        ratio = Fraction(bounded, total)
        rows.append(CornerRatioRow(t, x, y, z, bounded, total, ratio, to_decimal(ratio, precision)))
    return rows


# --------------------------------------------------------------------------
# the southwest random walk

_BIT_GENERATORS = {
    "philox": np.random.Philox,
    "pcg64": np.random.PCG64,
    "sfc64": np.random.SFC64,
    "mt19937": np.random.MT19937,
}
WALK_BLOCK = 4096


@dataclass
class WalkTally:
    seed: int
    trials: int
    steps: int
    rng: str
    visits: Counter

    def frequency(self, g) -> Fraction:
        return Fraction(self.visits.get(GroupElement(*g), 0), self.trials)

    def green_estimate(self, g) -> Fraction:
        """Visit frequency of ``g^-1``, which estimates ``2^-(x+y) p(g)``."""
        return self.frequency(inverse(GroupElement(*g)))

    def standard_error(self, g) -> float:
        p = float(expected_visit_mass(g))
        return math.sqrt(p * (1 - p) / self.trials)

    def z_score(self, g) -> float:
        err = self.standard_error(g)
        diff = float(self.green_estimate(g) - expected_visit_mass(g))
        return diff / err if err else (0.0 if diff == 0 else math.inf)


def expected_visit_mass(g) -> Fraction:
    g = GroupElement(*g)
    return Fraction(partitions.count(*g), 2 ** (g.x + g.y))


def _block_rng(rng: str, seed: int, block: int) -> np.random.Generator:
    # trial k draws row k % WALK_BLOCK of block k // WALK_BLOCK
    return np.random.Generator(_BIT_GENERATORS[rng](np.random.SeedSequence([seed, block])))


def simulate_walk(steps: int, trials: int, seed: int, rng: str = "philox") -> WalkTally:
    """``trials`` independent southwest walks of ``steps`` steps from ``e``.

    Each step left-multiplies by ``a^-1`` or ``b^-1`` with probability 1/2.
    Every point visited, the start included, is tallied.
    """
    if steps < 0 or trials < 1:
        raise DomainError("need steps >= 0 and trials >= 1")
    if steps > 1_000_000:
        raise BudgetExceeded("walk steps", steps, 1_000_000)
    if rng not in _BIT_GENERATORS:
        raise DomainError(f"unknown rng {rng!r}")
    visits: Counter = Counter()
    for block, start in enumerate(range(0, trials, WALK_BLOCK)):
        n = min(WALK_BLOCK, trials - start)
        bits = _block_rng(rng, seed, block).integers(0, 2, size=(n, steps), dtype=np.int8)
        x = np.zeros(n, dtype=np.int64)
        y = np.zeros(n, dtype=np.int64)
        z = np.zeros(n, dtype=np.int64)
        visits[GroupElement(0, 0, 0)] += n
        for k in range(steps):
            step_b = bits[:, k].astype(bool)
            # a^-1 (x, y, z) = (x - 1, y, z - y);  b^-1 (x, y, z) = (x, y - 1, z)
            z = np.where(step_b, z, z - y)
            x = np.where(step_b, x, x - 1)
            y = np.where(step_b, y - 1, y)
            pts, counts = np.unique(np.stack([x, y, z], axis=1), axis=0, return_counts=True)
            for (px, py, pz), c in zip(pts.tolist(), counts.tolist()):
                visits[GroupElement(px, py, pz)] += c
    return WalkTally(seed, trials, steps, rng, visits)


# --------------------------------------------------------------------------
# coset decay


class DecayHypothesisError(DomainError):
    pass


def orbit_decays(f: EvaluableFunction, g0, letter: GroupElement, probe: int = 32) -> bool:
    """Heuristic for ``f(letter^-n g0) -> 0``: the value at ``2 probe`` is zero
    or at most half the value at ``probe``."""
    g0 = GroupElement.parse(g0)
    near = f(multiply(power(letter, -probe), g0))
    far = f(multiply(power(letter, -2 * probe), g0))
    return far == 0 or 2 * far <= near


@dataclass
class CosetDecayRow:
    n: int
    value: Fraction
    value_decimal: str


def coset_decay_table(
    f: EvaluableFunction,
    g0,
    cutoff: int,
    n_values: Sequence[int],
    probe: int = 32,
    precision: int = DEFAULT_PRECISION,
) -> list[CosetDecayRow]:
    """Boundary part of the degree-``n`` sum for each ``n``.

    Refused unless ``f`` appears to decay along the ``a^-1`` and ``b^-1``
    orbits through ``g0`` and through ``e``.
    """
    g0 = GroupElement.parse(g0)
    for base in (g0, GroupElement(0, 0, 0)):
        for name, letter in (("a", A), ("b", B)):
            if not orbit_decays(f, base, letter, probe):
                raise DecayHypothesisError(f"{f.tag} does not decay along the {name}^-n orbit of {base}")
    rows = []
    for n in n_values:
        v = Fraction(coset_boundary_sum(f, g0, n, cutoff))
        rows.append(CosetDecayRow(n, v, to_decimal(v, precision)))
    return rows
