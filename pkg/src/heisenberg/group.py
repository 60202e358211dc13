"""Exact arithmetic in the discrete Heisenberg group H3(Z).

Elements are integer triples ``(x, y, z)`` standing for the unipotent matrix
with ``x`` and ``y`` on the superdiagonal and ``z`` in the corner.  Words are
plain strings over the letters ``a`` and ``b``.
"""

from __future__ import annotations

import json
from typing import Iterable, NamedTuple

from .errors import DomainError


class GroupElement(NamedTuple):
    x: int
    y: int
    z: int

    def __str__(self) -> str:
        return f"({self.x},{self.y},{self.z})"

    def to_json(self) -> str:
        return json.dumps([self.x, self.y, self.z])

    @classmethod
    def from_json(cls, text: str) -> "GroupElement":
        return cls.parse(json.loads(text))

    @classmethod
    def parse(cls, value) -> "GroupElement":
        """Accept ``[x, y, z]``, ``(x, y, z)`` or the string ``"x,y,z"``."""
        if isinstance(value, str):
            value = value.strip().strip("()[]").split(",")
        try:
            x, y, z = (int(str(v).strip()) for v in value)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"not a group element: {value!r}") from exc
        return cls(x, y, z)


Word = str

IDENTITY = GroupElement(0, 0, 0)
A = GroupElement(1, 0, 0)
B = GroupElement(0, 1, 0)
C = GroupElement(0, 0, 1)

_LETTERS = {"a": A, "b": B}


def multiply(g0: GroupElement, g: GroupElement) -> GroupElement:
    x0, y0, z0 = g0
    x, y, z = g
    return GroupElement(x0 + x, y0 + y, z0 + z + x0 * y)


def inverse(g: GroupElement) -> GroupElement:
    x, y, z = g
    return GroupElement(-x, -y, x * y - z)


def power(g: GroupElement, n: int) -> GroupElement:
    """``g`` raised to an integer power (negative powers allowed)."""
    if n < 0:
        g, n = inverse(g), -n
    # g^n = (nx, ny, nz + xy n(n-1)/2)
    return GroupElement(n * g.x, n * g.y, n * g.z + g.x * g.y * (n * (n - 1) // 2))


def product(elements: Iterable[GroupElement]) -> GroupElement:
    acc = IDENTITY
    for g in elements:
        acc = multiply(acc, g)
    return acc


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    return product((g, h, inverse(g), inverse(h)))


def commutes(g: GroupElement, h: GroupElement) -> bool:
    return g.x * h.y == h.x * g.y


def is_central(g: GroupElement) -> bool:
    return g.x == 0 and g.y == 0


def check_word(w: str) -> Word:
    if any(ch not in _LETTERS for ch in w):
        raise DomainError(f"words are over the letters a, b: {w!r}")
    return w


def evaluate(w: Word) -> GroupElement:
    """Left-to-right product of the letters of ``w``."""
    check_word(w)
    x = y = z = 0
    for ch in w:
        if ch == "a":
            x += 1
        else:
            # multiplying by b on the right adds the current a-count to z
            y += 1
            z += x
    return GroupElement(x, y, z)


def swap_letters(w: Word) -> Word:
    return w.translate(str.maketrans("ab", "ba"))


def in_positive_semigroup(g: GroupElement) -> bool:
    return g.x >= 0 and g.y >= 0 and 0 <= g.z <= g.x * g.y


def sigma(g: GroupElement) -> GroupElement:
    """The involution of G+ induced by exchanging the letters a and b."""
    if not in_positive_semigroup(g):
        raise DomainError(f"sigma is defined on the positive semigroup, got {g}")
    return GroupElement(g.y, g.x, g.x * g.y - g.z)


def degree(g: GroupElement) -> int:
    return g.x + g.y
