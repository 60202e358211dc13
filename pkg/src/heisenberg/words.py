"""Words in a and b, their fibers over G+, corners and the ab -> ba relation.

A word ``w`` traces the boundary of a Young diagram: each ``b`` is a row
whose length is the number of ``a`` letters before it.  Hence ``g_w``
determines the diagram and ``|fiber(g)| = count(g)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterator

from .errors import BudgetExceeded, DomainError
from .group import (
    C,
    GroupElement,
    Word,
    check_word,
    degree,
    evaluate,
    in_positive_semigroup,
    inverse,
    multiply,
)
from .partitions import Partition, count

DEFAULT_WORD_BUDGET = 16


@dataclass(frozen=True)
class Fiber:
    target: GroupElement
    words: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, w) -> bool:
        return w in self.words


@dataclass(frozen=True)
class RelationPair:
    """``w = w0 + "ab" + w1`` and ``w_prime = w0 + "ba" + w1``."""

    w: Word
    w_prime: Word
    position: int

    @property
    def f_w(self) -> int:
        return inner_corners(self.w)

    @property
    def f_prime(self) -> int:
        return outer_corners(self.w_prime)


def all_words(n: int) -> Iterator[Word]:
    for letters in cartesian("ab", repeat=n):
        yield "".join(letters)


def fiber(g: GroupElement, budget: int = DEFAULT_WORD_BUDGET) -> Fiber:
    """All words evaluating to ``g``, in lexicographic order."""
    n = degree(g)
    if n > budget:
        raise BudgetExceeded("fiber", n, budget)
    if not in_positive_semigroup(g):
        return Fiber(g, ())
    out: list[Word] = []
    letters: list[str] = []

    def extend(xu: int, yu: int, zu: int) -> None:
        xr, yr = g.x - xu, g.y - yu
        # remaining z: the a's already placed meet every later b, plus the
        # suffix word's own z, which lies in [0, xr * yr]
        need = g.z - zu - xu * yr
        if need < 0 or need > xr * yr:
            return
        if xr == 0 and yr == 0:
            out.append("".join(letters))
            return
        if xr:
            letters.append("a")
            extend(xu + 1, yu, zu)
            letters.pop()
        if yr:
            letters.append("b")
            extend(xu, yu + 1, zu + xu)
            letters.pop()

    extend(0, 0, 0)
    return Fiber(g, tuple(out))


def inner_corners(w: Word) -> int:
    return check_word(w).count("ab")


def outer_corners(w: Word) -> int:
    return check_word(w).count("ba")


def swap_positions(w: Word, pair: str) -> list[int]:
    return [i for i in range(len(w) - 1) if w[i:i + 2] == pair]


def relations_from(w: Word) -> list[RelationPair]:
    """The pairs of the relation whose first component is ``w``."""
    return [RelationPair(w, w[:i] + "ba" + w[i + 2:], i) for i in swap_positions(w, "ab")]


def relations_to(w_prime: Word) -> list[RelationPair]:
    """The pairs of the relation whose second component is ``w_prime``."""
    return [
        RelationPair(w_prime[:i] + "ab" + w_prime[i + 2:], w_prime, i)
        for i in swap_positions(w_prime, "ba")
    ]


def relation_pairs(g: GroupElement, budget: int = DEFAULT_WORD_BUDGET) -> list[RelationPair]:
    return [pair for w in fiber(g, budget) for pair in relations_from(w)]


def word_to_partition(w: Word) -> Partition:
    rows = []
    seen_a = 0
    for ch in check_word(w):
        if ch == "a":
            seen_a += 1
        elif seen_a:
            rows.append(seen_a)
    return tuple(reversed(rows))


def partition_to_word(rows: Partition, x: int, y: int) -> Word:
    """Boundary word of ``rows`` inside an ``x`` by ``y`` box."""
    if len(rows) > y or (rows and rows[0] > x):
        raise DomainError(f"{rows} does not fit in a {x} by {y} box")
    lengths = [0] * (y - len(rows)) + list(reversed(rows))
    letters = []
    placed = 0
    for length in lengths:
        letters.append("a" * (length - placed))
        letters.append("b")
        placed = length
    letters.append("a" * (x - placed))
    return "".join(letters)


@dataclass(frozen=True)
class CornerIdentity:
    """Both sides of the corner-weighted counts of ``B_g`` and ``B_{g c^-1}``."""

    target: GroupElement
    lhs: Fraction
    rhs: Fraction
    epsilon: int
    shifted_lhs: Fraction
    shifted_rhs: Fraction
    epsilon_prime: int
    pairs: int

    @property
    def holds(self) -> bool:
        return (
            self.lhs == self.rhs
            and self.shifted_lhs == self.shifted_rhs
            and self.epsilon_prime in (0, 1)
        )


def corner_identity_check(g: GroupElement, budget: int = DEFAULT_WORD_BUDGET) -> CornerIdentity:
    """Count ``B_g`` through the relation, weighting each pair by ``1/f_w``.

    ``p(g) = eps + sum 1/f_w`` where ``eps`` is 1 exactly when no pair has
    first component in ``B_g``; likewise ``p(g c^-1) = eps' + sum 1/f'_{w'}``
    where ``eps'`` counts the words of ``B_{g c^-1}`` without a ``ba``.
    """
    p = count(*g)
    if not in_positive_semigroup(g) or p < 1:
        raise DomainError(f"corner identity needs g in G+ with count(g) >= 1, got {g}")
    pairs = relation_pairs(g, budget)
    epsilon = 1 if not pairs else 0
    rhs = epsilon + sum((Fraction(1, pr.f_w) for pr in pairs), Fraction(0))
    shifted = multiply(g, inverse(C))
    epsilon_prime = sum(1 for w in fiber(shifted, budget) if outer_corners(w) == 0)
    shifted_rhs = epsilon_prime + sum((Fraction(1, pr.f_prime) for pr in pairs), Fraction(0))
    return CornerIdentity(
        target=g,
        lhs=Fraction(p),
        rhs=rhs,
        epsilon=epsilon,
        shifted_lhs=Fraction(count(*shifted)),
        shifted_rhs=shifted_rhs,
        epsilon_prime=epsilon_prime,
        pairs=len(pairs),
    )


def check_relation_pair(pair: RelationPair) -> bool:
    """The swap multiplies by the center and moves each corner count by at most 2."""
    f, fp = pair.f_w, pair.f_prime
    return (
        evaluate(pair.w) == multiply(evaluate(pair.w_prime), C)
        and abs(f - fp) <= 2
        and f <= 3 * fp
    )
