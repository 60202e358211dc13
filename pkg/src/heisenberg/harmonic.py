"""Transfer operators of finitely supported measures and their harmonic functions.

For a measure ``mu = sum mu_s delta_s`` the operator acts on functions of the
group by

    (P_mu f)(g) = sum_s mu_s f(s g)

and ``f`` is harmonic when ``P_mu f == f``.  All values are exact (``int`` or
``Fraction``); nothing here touches floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, Iterable, Iterator, Sequence

from . import partitions
from .errors import BudgetExceeded, DomainError
from .group import (
    A,
    B,
    C,
    IDENTITY,
    GroupElement,
    commutes,
    inverse,
    is_central,
    multiply,
)
from .lattice import echelon

Number = int | Fraction

DEFAULT_NODE_BUDGET = 5_000_000
DEFAULT_DIVERGENCE_BOUND = Fraction(10) ** 30


def _exact(value) -> Number:
    value = Fraction(value) if not isinstance(value, (int, Fraction)) else value
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


# --------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class Measure:
    atoms: tuple[tuple[GroupElement, Fraction], ...]
    tag: str = "custom"

    def __post_init__(self):
        points = [s for s, _ in self.atoms]
        if len(set(points)) != len(points):
            raise DomainError("measure support points must be distinct")
        if not self.atoms:
            raise DomainError("measure needs at least one atom")
        for s, w in self.atoms:
            if w <= 0:
                raise DomainError(f"weight at {s} must be positive, got {w}")

    @classmethod
    def of(cls, atoms: Iterable[tuple], tag: str = "custom") -> "Measure":
        return cls(
            tuple((GroupElement.parse(s), parse_rational(w)) for s, w in atoms), tag
        )

    @property
    def support(self) -> list[GroupElement]:
        return [s for s, _ in self.atoms]

    def weight(self, s: GroupElement) -> Fraction:
        for t, w in self.atoms:
            if t == s:
                return w
        return Fraction(0)

    @property
    def total(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    def probability_normalized(self) -> "Measure":
        tot = self.total
        return Measure(tuple((s, w / tot) for s, w in self.atoms), self.tag + "-prob")

    def restricted(self, points: Iterable[GroupElement]) -> "Measure":
        keep = set(points)
        return Measure(tuple(a for a in self.atoms if a[0] in keep), self.tag + "-restricted")

    def exact_atoms(self) -> list[tuple[GroupElement, Number]]:
        return [(s, _exact(w)) for s, w in self.atoms]

    def to_json(self) -> str:
        return json.dumps([[[s.x, s.y, s.z], f"{w.numerator}/{w.denominator}"] for s, w in self.atoms])

    @classmethod
    def from_json(cls, text: str, tag: str = "custom") -> "Measure":
        data = json.loads(text)
        return cls.of(((s, w) for s, w in data), tag)


def southwest_measure() -> Measure:
    return Measure(((inverse(A), Fraction(1)), (inverse(B), Fraction(1))), "sw")


def southwest_probability() -> Measure:
    return Measure(((inverse(A), Fraction(1, 2)), (inverse(B), Fraction(1, 2))), "sw-prob")


BUILTIN_MEASURES = {"sw": southwest_measure, "sw-prob": southwest_probability}


def load_measure(name_or_path: str) -> Measure:
    if name_or_path in BUILTIN_MEASURES:
        return BUILTIN_MEASURES[name_or_path]()
    with open(name_or_path) as fh:
        return Measure.from_json(fh.read(), tag=name_or_path)


# --------------------------------------------------------------------------
# functions on the group


class EvaluableFunction:
    """An exact nonnegative function on the group with a descriptive tag."""

    def __init__(self, rule: Callable[[GroupElement], Number], tag: str):
        self.rule = rule
        self.tag = tag

    def __call__(self, g) -> Number:
        return self.rule(GroupElement(*g))

    def __repr__(self) -> str:
        return f"EvaluableFunction({self.tag!r})"

    def __add__(self, other: "EvaluableFunction") -> "EvaluableFunction":
        return add(self, other)

    def __rmul__(self, lam) -> "EvaluableFunction":
        return scale(self, lam)


def character(r, s) -> EvaluableFunction:
    """``(x, y, z) -> r^x s^y``."""
    r, s = parse_rational(r), parse_rational(s)
    if r <= 0 or s <= 0:
        raise DomainError("character parameters must be positive")
    rp: dict[int, Number] = {}
    sp: dict[int, Number] = {}

    def rule(g: GroupElement) -> Number:
        u = rp.get(g.x)
        if u is None:
            u = rp[g.x] = _exact(r ** g.x)
        v = sp.get(g.y)
        if v is None:
            v = sp[g.y] = _exact(s ** g.y)
        return u * v

    return EvaluableFunction(rule, f"char:{r},{s}")


def h0() -> EvaluableFunction:
    """``(x, y, z) -> p_y(z)``, partitions of z with at most y rows."""
    value = partitions.count_at_most_rows
    return EvaluableFunction(lambda g: value(g.y, g.z), "h0")


def h1() -> EvaluableFunction:
    """``(x, y, z) -> p_x(xy - z)``, the mirror of h0 under a <-> b."""
    value = partitions.count_at_most_rows
    return EvaluableFunction(lambda g: value(g.x, g.x * g.y - g.z), "h1")


def potential() -> EvaluableFunction:
    value = partitions.count
    return EvaluableFunction(lambda g: value(g.x, g.y, g.z), "potential")


def indicator(axis: str = "a") -> EvaluableFunction:
    """Indicator of the cyclic subgroup generated by ``a`` or ``b``."""
    if axis == "a":
        return EvaluableFunction(lambda g: int(g.y == 0 and g.z == 0), "indicator:a")
    if axis == "b":
        return EvaluableFunction(lambda g: int(g.x == 0 and g.z == 0), "indicator:b")
    raise DomainError(f"indicator axis must be 'a' or 'b', got {axis!r}")


def point_mass(g0: GroupElement = IDENTITY) -> EvaluableFunction:
    g0 = GroupElement(*g0)
    return EvaluableFunction(lambda g: int(g == g0), f"delta:{g0.x},{g0.y},{g0.z}")


def translate(f: EvaluableFunction, g0) -> EvaluableFunction:
    """Right translate ``g -> f(g g0)``; commutes with every transfer operator."""
    g0 = GroupElement.parse(g0)
    rule = f.rule
    return EvaluableFunction(
        lambda g: rule(multiply(g, g0)), f"translate:{f.tag}:{g0.x},{g0.y},{g0.z}"
    )


def scale(f: EvaluableFunction, lam) -> EvaluableFunction:
    lam = parse_rational(lam)
    if lam <= 0:
        raise DomainError(f"scale factor must be positive, got {lam}")
    lam = _exact(lam)
    rule = f.rule
    return EvaluableFunction(lambda g: lam * rule(g), f"scale:{f.tag}:{lam}")


def add(*fs: EvaluableFunction) -> EvaluableFunction:
    rules = [f.rule for f in fs]
    tag = "sum:" + "+".join(f"({f.tag})" for f in fs)
    return EvaluableFunction(lambda g: sum(rule(g) for rule in rules), tag)


def tilt(f: EvaluableFunction, r, s) -> EvaluableFunction:
    """Pointwise product with the character ``r^x s^y``."""
    chi = character(r, s).rule
    rule = f.rule
    return EvaluableFunction(lambda g: _exact(chi(g) * rule(g)), f"tilt:{f.tag}:{r},{s}")


def southwest_normalized(f: EvaluableFunction) -> EvaluableFunction:
    """``2^(-x-y) f``, the harmonic function of the probability walk matching ``f``."""
    return tilt(f, Fraction(1, 2), Fraction(1, 2))


# --------------------------------------------------------------------------
# induced seeds


def _lattice_vector(g: GroupElement) -> list[int]:
    # (x, y, z - xy/2), doubled; additive on every abelian subgroup
    return [2 * g.x, 2 * g.y, 2 * g.z - g.x * g.y]


class AbelianSubgroup:
    """The subgroup generated by pairwise commuting elements."""

    def __init__(self, generators: Sequence[GroupElement]):
        gens = [GroupElement(*g) for g in generators]
        for g, h in cartesian(gens, gens):
            if not commutes(g, h):
                raise DomainError(f"{g} and {h} do not commute")
        self.generators = gens
        self._ech = echelon([_lattice_vector(g) for g in gens])

    @property
    def relations(self) -> list[list[int]]:
        return self._ech.relations

    def coordinates(self, g: GroupElement) -> list[int] | None:
        """Exponents ``k`` with ``prod s_i^k_i == g``, or None when ``g`` is outside."""
        if not self.generators:
            return [] if g == IDENTITY else None
        return self._ech.solve(_lattice_vector(g))

    def __contains__(self, g) -> bool:
        return self.coordinates(GroupElement(*g)) is not None


def induced_seed(generators: Sequence, chi_values: Sequence) -> EvaluableFunction:
    """``chi0 * 1_H`` where ``H`` is generated by ``generators`` and ``chi0``
    is the character of ``H`` taking the given values on them."""
    sub = AbelianSubgroup([GroupElement.parse(g) for g in generators])
    values = [parse_rational(v) for v in chi_values]
    if len(values) != len(sub.generators):
        raise DomainError("need one character value per generator")
    if any(v <= 0 for v in values):
        raise DomainError("character values must be positive")
    for rel in sub.relations:
        if _character_at(values, rel) != 1:
            raise DomainError(f"character values violate the relation {rel}")
    cache: dict[GroupElement, Number] = {}

    def rule(g: GroupElement) -> Number:
        got = cache.get(g)
        if got is None:
            k = sub.coordinates(g)
            got = cache[g] = 0 if k is None else _character_at(values, k)
        return got

    gens = ";".join(f"{g.x},{g.y},{g.z}" for g in sub.generators)
    chis = ";".join(str(v) for v in values)
    f = EvaluableFunction(rule, f"seed:{gens}:{chis}")
    f.subgroup = sub
    f.chi_values = values
    return f


def _character_at(values: Sequence[Fraction], exponents: Sequence[int]) -> Number:
    out = Fraction(1)
    for v, k in zip(values, exponents):
        if k:
            out *= v ** k
    return _exact(out)


# --------------------------------------------------------------------------
# boxes and operators


@dataclass(frozen=True)
class Box:
    x: tuple[int, int]
    y: tuple[int, int]
    z: tuple[int, int]

    @classmethod
    def symmetric(cls, x: int, y: int, z: int) -> "Box":
        return cls((-x, x), (-y, y), (-z, z))

    def __iter__(self) -> Iterator[GroupElement]:
        for x in range(self.x[0], self.x[1] + 1):
            for y in range(self.y[0], self.y[1] + 1):
                for z in range(self.z[0], self.z[1] + 1):
                    yield GroupElement(x, y, z)

    def __len__(self) -> int:
        return (
            (self.x[1] - self.x[0] + 1)
            * (self.y[1] - self.y[0] + 1)
            * (self.z[1] - self.z[0] + 1)
        )

    def __str__(self) -> str:
        return f"x{self.x[0]}..{self.x[1]} y{self.y[0]}..{self.y[1]} z{self.z[0]}..{self.z[1]}"


def apply_operator(mu: Measure, f: EvaluableFunction, g) -> Number:
    g = GroupElement(*g)
    rule = f.rule
    return _exact(sum(w * rule(multiply(s, g)) for s, w in mu.exact_atoms()))


@dataclass
class DefectReport:
    max_defect: Number
    witness: GroupElement | None
    nonzero: list[tuple[GroupElement, Number]] = field(default_factory=list)
    nonzero_count: int = 0

    @property
    def zero(self) -> bool:
        return self.max_defect == 0


def signed_defects(mu: Measure, f: EvaluableFunction, box: Iterable) -> Iterator[tuple[GroupElement, Number]]:
    """``(g, f(g) - P_mu f(g))`` over the region."""
    atoms = mu.exact_atoms()
    rule = f.rule
    if len(atoms) == 2:
        (s1, w1), (s2, w2) = atoms
        for g in box:
            yield g, rule(g) - w1 * rule(multiply(s1, g)) - w2 * rule(multiply(s2, g))
    else:
        for g in box:
            yield g, rule(g) - sum(w * rule(multiply(s, g)) for s, w in atoms)


def _report(pairs: Iterable[tuple[GroupElement, Number]], keep: int) -> DefectReport:
    best: Number = 0
    witness = None
    nonzero = []
    count = 0
    for g, d in pairs:
        if d:
            d = abs(d)
            count += 1
            if len(nonzero) < keep:
                nonzero.append((g, _exact(d)))
            if d > best:
                best, witness = d, g
    return DefectReport(_exact(best), witness, nonzero, count)


def harmonic_residual(mu: Measure, f: EvaluableFunction, box: Iterable, keep: int = 100) -> DefectReport:
    return _report(signed_defects(mu, f, box), keep)


def superharmonic_check(mu: Measure, f: EvaluableFunction, box: Iterable) -> tuple[bool, GroupElement | None]:
    for g, d in signed_defects(mu, f, box):
        if d < 0:
            return False, g
    return True, None


def center_shift_defect(f: EvaluableFunction, box: Iterable, keep: int = 100) -> DefectReport:
    rule = f.rule
    return _report(((g, rule(g) - rule(multiply(g, C))) for g in box), keep)


# --------------------------------------------------------------------------
# operator powers


class OperatorPowers:
    """``(P_mu^n seed)(g)`` by expansion over reachable points.

    Memoized on ``(n, point)``, so repeated queries share work.  The memo is
    bounded by ``node_budget``.
    """

    def __init__(self, mu: Measure, seed: EvaluableFunction, node_budget: int = DEFAULT_NODE_BUDGET):
        self.mu = mu
        self.seed = seed
        self.node_budget = node_budget
        self._atoms = mu.exact_atoms()
        self._memo: dict[tuple[int, GroupElement], Number] = {}

    @property
    def nodes(self) -> int:
        return len(self._memo)

    def value(self, n: int, g) -> Number:
        if n < 0:
            raise DomainError(f"operator power must be >= 0, got {n}")
        g = GroupElement(*g)
        memo = self._memo
        got = memo.get((n, g))
        if got is not None:
            return got
        levels = [[g]]
        seen = {g}
        for k in range(1, n + 1):
            nxt = set()
            for p in seen:
                for s, _ in self._atoms:
                    q = multiply(s, p)
                    if (n - k, q) not in memo:
                        nxt.add(q)
            if len(memo) + sum(map(len, levels)) + len(nxt) > self.node_budget:
                raise BudgetExceeded("operator expansion nodes", len(memo) + len(nxt), self.node_budget)
            levels.append(list(nxt))
            seen = nxt
        seed = self.seed.rule
        for k in range(n, -1, -1):
            rem = n - k
            for p in levels[k]:
                if (rem, p) in memo:
                    continue
                if rem == 0:
                    memo[(0, p)] = seed(p)
                else:
                    memo[(rem, p)] = _exact(
                        sum(w * memo[(rem - 1, multiply(s, p))] for s, w in self._atoms)
                    )
        return memo[(n, g)]


def iterate_seed(mu: Measure, seed: EvaluableFunction, n: int, g, node_budget: int = DEFAULT_NODE_BUDGET) -> Number:
    return OperatorPowers(mu, seed, node_budget).value(n, g)


def potential_partial_sum(n: int, g, node_budget: int = DEFAULT_NODE_BUDGET) -> Number:
    """``sum_{k <= n} (P^k 1_e)(g)`` for the southwest measure."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    powers = OperatorPowers(southwest_measure(), point_mass(IDENTITY), node_budget)
    return sum(powers.value(k, g) for k in range(n + 1))


@dataclass
class InducedResult:
    values: dict[GroupElement, Number]
    history: list[dict[GroupElement, Number]]
    steps: int
    status: str  # "converged" | "increasing" | "diverged"


def induced_function(
    mu: Measure,
    generators: Sequence,
    chi_values: Sequence,
    n_max: int,
    query: Iterable,
    divergence_bound=DEFAULT_DIVERGENCE_BOUND,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> InducedResult:
    """Iterate ``P_mu`` on the seed ``chi0 * 1_{G_S0}`` up to ``n_max`` times.

    ``status`` is "diverged" as soon as a value passes ``divergence_bound``,
    "converged" when the last two iterates agree on the query set and
    "increasing" otherwise.
    """
    gens = [GroupElement.parse(g) for g in generators]
    support = set(mu.support)
    for g in gens:
        if g not in support:
            raise DomainError(f"{g} is not in the support of the measure")
    seed = induced_seed(gens, chi_values)
    restricted = sum((mu.weight(s) * v for s, v in zip(gens, seed.chi_values)), Fraction(0))
    if restricted != 1:
        raise DomainError(f"seed character is not harmonic for the restricted measure: sum is {restricted}")
    query = [GroupElement.parse(g) for g in query]
    powers = OperatorPowers(mu, seed, node_budget)
    bound = parse_rational(divergence_bound)
    history = []
    status = "increasing"
    for n in range(n_max + 1):
        current = {g: powers.value(n, g) for g in query}
        history.append(current)
        if any(v > bound for v in current.values()):
            status = "diverged"
            break
    else:
        if len(history) >= 2 and history[-1] == history[-2]:
            status = "converged"
    return InducedResult(history[-1], history, len(history) - 1, status)


# --------------------------------------------------------------------------
# degree sums


def degree_sum_identity(f: EvaluableFunction, g0, n: int, verify: bool = True) -> tuple[Number, Number]:
    """``f(g0)`` against ``sum_{g in G_n} p(g) f(g^-1 g0)``.

    With ``verify`` the southwest harmonicity of ``f`` is checked at every
    point the sum touches.
    """
    if n < 1:
        raise DomainError(f"degree must be >= 1, got {n}")
    g0 = GroupElement.parse(g0)
    rule = f.rule
    touched = []
    rhs: Number = 0
    for x in range(n + 1):
        y = n - x
        for z, p in enumerate(partitions.count_row(x, y)):
            h = multiply(inverse(GroupElement(x, y, z)), g0)
            touched.append(h)
            rhs += p * rule(h)
    if verify:
        rep = harmonic_residual(southwest_measure(), f, touched + [g0], keep=1)
        if not rep.zero:
            raise DomainError(f"{f.tag} is not harmonic at {rep.witness}")
    return rule(g0), _exact(rhs)


def coset_boundary_sum(f: EvaluableFunction, g0, n: int, cutoff: int) -> Number:
    """Part of the degree-``n`` sum coming from ``z <= cutoff`` or ``xy - z <= cutoff``."""
    if n < 1 or cutoff < 0:
        raise DomainError("coset_boundary_sum needs n >= 1 and cutoff >= 0")
    g0 = GroupElement.parse(g0)
    rule = f.rule
    total: Number = 0
    for x in range(n + 1):
        y = n - x
        for z, p in enumerate(partitions.count_row(x, y)):
            if z <= cutoff or x * y - z <= cutoff:
                total += p * rule(multiply(inverse(GroupElement(x, y, z)), g0))
    return _exact(total)


# --------------------------------------------------------------------------
# characters of general measures


def character_harmonicity(mu: Measure, r, s, t=1) -> Fraction:
    """``|sum mu_s r^x s^y t^z - 1|`` over the support.

    ``t != 1`` is only meaningful when the support commutes; otherwise the
    function is not a homomorphism and the call is refused.
    """
    r, s, t = parse_rational(r), parse_rational(s), parse_rational(t)
    if min(r, s, t) <= 0:
        raise DomainError("character parameters must be positive")
    supp = mu.support
    if t != 1 and not all(commutes(g, h) for g in supp for h in supp):
        raise DomainError("characters are trivial on the center; t must be 1 for this support")
    total = sum((w * r ** g.x * s ** g.y * t ** g.z for g, w in mu.atoms), Fraction(0))
    return abs(total - 1)


@dataclass
class CenterCondition:
    found: bool
    depth: int
    g: GroupElement | None = None
    h: GroupElement | None = None

    @property
    def product(self) -> GroupElement | None:
        return multiply(self.g, self.h) if self.found else None


def semigroup_ball(support: Sequence[GroupElement], depth: int) -> set[GroupElement]:
    """Products of between 1 and ``depth`` support elements."""
    layer = set(support)
    ball = set(layer)
    for _ in range(depth - 1):
        layer = {multiply(g, s) for g in layer for s in support} - ball
        if not layer:
            break
        ball |= layer
    return ball


def center_product_condition(mu: Measure, depth: int) -> CenterCondition:
    """Search for non-central ``g, h`` in the semigroup with ``g h`` central and nontrivial.

    Both factors are products of at most ``depth`` support atoms.  Not finding
    one is only a statement about that depth.
    """
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    ball = semigroup_ball(mu.support, depth)
    by_projection: dict[tuple[int, int], list[GroupElement]] = {}
    for h in ball:
        if not is_central(h):
            by_projection.setdefault((h.x, h.y), []).append(h)
    for g in sorted(ball):
        if is_central(g):
            continue
        for h in sorted(by_projection.get((-g.x, -g.y), ())):
            if g.z + h.z + g.x * h.y != 0:
                return CenterCondition(True, depth, g, h)
    return CenterCondition(False, depth)


# --------------------------------------------------------------------------
# tags


def parse_function(tag: str) -> EvaluableFunction:
    """Build a function from its tag.

    Grammar: ``h0``, ``h1``, ``potential``, ``indicator:a|b``, ``char:r/s``
    (or ``char:r,s`` for fractional parameters), ``translate:<tag>:x,y,z``,
    ``scale:<tag>:lam``, ``tilt:<tag>:r,s`` and ``sum:<tag>+<tag>+...``.
    Parentheses group nested tags.
    """
    tag = _strip_parens(tag.strip())
    if tag in ("h0", "h1", "potential"):
        return {"h0": h0, "h1": h1, "potential": potential}[tag]()
    head, _, body = tag.partition(":")
    if head == "indicator":
        return indicator(body or "a")
    if head == "char":
        parts = body.split(",") if "," in body else body.split("/")
        if len(parts) != 2:
            raise DomainError(f"character tag needs two parameters: {tag!r}")
        return character(*parts)
    if head == "sum":
        return add(*(parse_function(t) for t in _split_top(body, "+")))
    if head in ("translate", "scale", "tilt"):
        inner, sep, arg = body.rpartition(":")
        if not sep:
            raise DomainError(f"malformed tag {tag!r}")
        f = parse_function(inner)
        if head == "translate":
            return translate(f, arg)
        if head == "scale":
            return scale(f, arg)
        r, s = arg.split(",")
        return tilt(f, r, s)
    raise DomainError(f"unknown function tag {tag!r}")


def _strip_parens(tag: str) -> str:
    # drop outer parentheses only when the first one closes at the very end
    while tag.startswith("(") and _matching_paren(tag) == len(tag) - 1:
        tag = tag[1:-1].strip()
    return tag


def _matching_paren(text: str) -> int:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i
    return -1


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]
