import pytest
from hypothesis import given
from hypothesis import strategies as st

from heisenberg.errors import DomainError
from heisenberg.group import (
    A,
    B,
    C,
    IDENTITY,
    GroupElement,
    commutator,
    degree,
    evaluate,
    in_positive_semigroup,
    inverse,
    multiply,
    power,
    product,
    sigma,
    swap_letters,
)

from conftest import brute_words

coords = st.integers(min_value=-10**30, max_value=10**30)
elements = st.builds(GroupElement, coords, coords, coords)


def test_product_examples():
    assert multiply(A, B) == (1, 1, 1)
    assert multiply(B, A) == (1, 1, 0)
    assert evaluate("ababaabab") == (5, 4, 12)
    assert evaluate("") == IDENTITY
    assert evaluate("ab") == (1, 1, 1)


@pytest.mark.parametrize(
    "g, inv",
    [((1, 0, 0), (-1, 0, 0)), ((1, 1, 1), (-1, -1, 0)), ((5, 4, 12), (-5, -4, 8))],
)
def test_inverse_examples(g, inv):
    g = GroupElement(*g)
    assert inverse(g) == inv
    assert multiply(g, inv) == IDENTITY


def test_positive_semigroup_examples():
    assert in_positive_semigroup(GroupElement(5, 4, 12))
    assert not in_positive_semigroup(GroupElement(1, 1, 2))
    assert in_positive_semigroup(GroupElement(2, 3, 6))
    assert evaluate("aabbb") == (2, 3, 6)


def test_sigma_examples():
    assert sigma(GroupElement(1, 1, 1)) == (1, 1, 0)
    assert sigma(GroupElement(5, 4, 12)) == evaluate(swap_letters("ababaabab")) == (4, 5, 8)
    assert swap_letters("ababaabab") == "bababbaba"
    assert sigma(GroupElement(7, 0, 0)) == (0, 7, 0)
    with pytest.raises(DomainError):
        sigma(GroupElement(1, 1, 2))


def test_degree():
    assert degree(GroupElement(5, 4, 12)) == 9 == len("ababaabab")
    assert degree(IDENTITY) == 0
    assert degree(GroupElement(-2, 3, 0)) == 1


def test_center():
    assert commutator(A, B) == C == (0, 0, 1)
    assert product([A, B, inverse(A), inverse(B)]) == C


@given(elements, elements, elements)
def test_group_axioms(g, h, k):
    assert multiply(multiply(g, h), k) == multiply(g, multiply(h, k))
    assert multiply(g, IDENTITY) == g == multiply(IDENTITY, g)
    assert multiply(g, inverse(g)) == IDENTITY == multiply(inverse(g), g)
    assert multiply(C, g) == multiply(g, C)


@given(elements, st.integers(-20, 20))
def test_power_matches_repeated_product(g, n):
    base = g if n >= 0 else inverse(g)
    assert power(g, n) == product([base] * abs(n))


def test_words_up_to_length_12():
    for n in range(13):
        for w in brute_words(n):
            g = evaluate(w)
            assert in_positive_semigroup(g)
            assert g.x == w.count("a") and g.y == w.count("b")
            assert sigma(g) == evaluate(swap_letters(w))
            assert sigma(sigma(g)) == g


def test_bad_word():
    with pytest.raises(DomainError):
        evaluate("abc")


def test_json_round_trip():
    g = GroupElement(5, -4, 12)
    assert g.to_json() == "[5, -4, 12]"
    assert GroupElement.from_json(g.to_json()) == g
    assert GroupElement.parse("1,2,3") == (1, 2, 3)
