from fractions import Fraction

import pytest

from heisenberg import partitions as pt
from heisenberg.errors import BudgetExceeded, DomainError
from heisenberg.experiments import (
    DecayHypothesisError,
    SequenceSpec,
    bound_sweep,
    coset_decay_table,
    corner_ratio_decay,
    expected_visit_mass,
    orbit_decays,
    parse_range,
    ratio_table,
    simulate_walk,
    to_decimal,
    unimodality_sweep,
)
from heisenberg.group import A, GroupElement
from heisenberg.harmonic import character, h0, h1, potential

from conftest import brute_partitions


def test_sequence_presets():
    assert SequenceSpec("diagonal", (4, 5)).triples() == [(4, 4, 4, 8), (5, 5, 5, 12)]
    assert SequenceSpec("fixed-height", (6,), height=3).triples() == [(6, 6, 3, 9)]
    assert SequenceSpec("affine", (2,), affine=(1, 2, 0, 1, 0, 2)).triples() == [(2, 5, 2, 4)]
    for bad in (
        SequenceSpec("diagonal", (1,)),  # z = 0
        SequenceSpec("fixed-height", (3,), height=4),  # y > x
        SequenceSpec("fixed-height", (3,)),
        SequenceSpec("affine", (1,), affine=(4, 0, 2, 0, 5, 0)),  # z > xy/2
        SequenceSpec("spiral", (1,)),
    ):
        with pytest.raises(DomainError):
            bad.triples()


def test_parse_range():
    assert parse_range("8..32:8") == (8, 16, 24, 32)
    assert parse_range("1..3") == (1, 2, 3)
    assert parse_range("4, 6,8") == (4, 6, 8)


def test_ratio_table_values():
    rows = ratio_table(SequenceSpec("diagonal", (4, 6))).rows
    assert [(r.x, r.y, r.z) for r in rows] == [(4, 4, 8), (6, 6, 18)]
    for r in rows:
        assert r.previous == len(brute_partitions(r.x, r.y, r.z - 1))
        assert r.current == len(brute_partitions(r.x, r.y, r.z))
        assert r.ratio == Fraction(r.previous, r.current)
    assert rows[0].ratio_decimal == "0.875"
    assert rows[1].ratio == Fraction(55, 58)
    assert rows[1].ratio_decimal.startswith("0.94827586206896551724")
    assert len(rows[1].ratio_decimal) - 2 >= 20


def test_ratio_fixed_height_one_is_flat():
    rep = ratio_table(SequenceSpec("fixed-height", tuple(range(2, 40)), height=1))
    assert all(r.ratio == 1 and r.deviation == 0 for r in rep.rows)


def test_ratio_rows_in_unit_interval():
    for spec in (SequenceSpec("diagonal", tuple(range(2, 20))), SequenceSpec("fixed-height", tuple(range(3, 30)), height=3)):
        assert all(0 < r.ratio <= 1 for r in ratio_table(spec).rows)


def test_ratio_budget_names_row():
    with pytest.raises(BudgetExceeded, match="t=40"):
        ratio_table(SequenceSpec("diagonal", (8, 40)), budget=1000)


def test_unimodality():
    assert unimodality_sweep(12, 12) == []
    assert pt.count_row(2, 2) == [1, 1, 2, 1, 1]
    assert pt.count_row(1, 1) == [1, 1]


def test_bound_examples():
    rep = bound_sweep([5], [4], [1], z_values=[12])
    assert rep.cells == 1 and rep.upper_bounds_hold
    assert pt.count(5, 4, 12) == 11 <= 12 ** 3
    rep = bound_sweep([8], [8], (1, 2), z_values=[30], j_values=[1, 2])
    assert rep.power_lower_checks == [(1, 8, 8, 30, True), (2, 8, 8, 30, False)]
    assert pt.count(8, 8, 30) >= 30
    with pytest.raises(DomainError):
        bound_sweep([0], [1])


def test_bound_sweep_small_region():
    rep = bound_sweep(range(1, 9), range(1, 9), range(1, 5))
    assert rep.upper_bounds_hold
    assert rep.cells == sum(x * y for x in range(1, 9) for y in range(1, 9))
    assert rep.corner_cells == 4 * rep.cells
    q, (x, y, z) = rep.lower_ratio_minima[1]
    assert q == 1  # y = 1: exactly one partition
    for y, (q, where) in rep.lower_ratio_minima.items():
        assert q == Fraction(pt.count(*where), where[2] ** (y - 1)) and q > 0


def test_corner_ratio():
    rows = corner_ratio_decay(1, SequenceSpec("diagonal", (4, 6, 8)))
    assert [r.ratio for r in rows] == [Fraction(2, 8), Fraction(2, 58), Fraction(2, 526)]
    rows = corner_ratio_decay(0, SequenceSpec("diagonal", (3, 5)))
    assert all(r.ratio == 0 for r in rows)
    rows = corner_ratio_decay(1, SequenceSpec("affine", (2, 5), affine=(0, 1, 0, 1, 1, 0)))
    assert all(r.ratio == 1 for r in rows)  # z = 1
    with pytest.raises(DomainError):
        corner_ratio_decay(-1, SequenceSpec("diagonal", (4,)))


def test_walk_reproducible_and_degree_invariant():
    t1 = simulate_walk(6, 5000, seed=7)
    t2 = simulate_walk(6, 5000, seed=7)
    assert t1.visits == t2.visits
    assert simulate_walk(6, 5000, seed=8).visits != t1.visits
    per_level = {}
    for g, c in t1.visits.items():
        assert g.x <= 0 and g.y <= 0
        per_level[-(g.x + g.y)] = per_level.get(-(g.x + g.y), 0) + c
        # positions stay inside the inverse of the positive semigroup
        assert 0 <= g.x * g.y - g.z <= g.x * g.y
    assert per_level == {n: 5000 for n in range(7)}
    assert simulate_walk(6, 5000, seed=7, rng="pcg64").visits != t1.visits


def test_walk_frequencies():
    tally = simulate_walk(8, 20000, seed=3)
    for g in [(1, 0, 0), (1, 1, 1), (2, 2, 2)]:
        assert abs(tally.z_score(g)) < 4
    assert expected_visit_mass((3, 2, 4)) == Fraction(1, 16)
    assert expected_visit_mass((5, 4, 12)) == Fraction(11, 512)
    assert tally.green_estimate(GroupElement(0, 0, 0)) == 1
    with pytest.raises(DomainError):
        simulate_walk(3, 10, seed=1, rng="xorshift")


def test_coset_decay():
    rows = coset_decay_table(character(2, 2), (0, 0, 0), 2, (10, 20, 30))
    assert rows[0].value > rows[1].value > rows[2].value > 0
    assert rows[0].value == Fraction(35, 512)
    full = coset_decay_table(character(2, 2), (0, 0, 0), 100, (6,))
    assert full[0].value == 1
    rows = coset_decay_table(character(3, Fraction(3, 2)), (0, 0, 0), 2, (10, 15, 20))
    assert rows[0].value > rows[1].value > rows[2].value
    with pytest.raises(DecayHypothesisError, match="a\\^-n"):
        coset_decay_table(h0(), (0, 0, 0), 2, (10,))
    with pytest.raises(DecayHypothesisError, match="b\\^-n"):
        coset_decay_table(h1(), (0, 0, 0), 2, (10,))
    assert orbit_decays(potential(), (0, 0, 0), A)
    # h0(a^-n g) = p_y(z - ny) only stalls on the orbit of a point with y = 0
    assert not orbit_decays(h0(), (3, 0, 0), A)
    assert orbit_decays(h0(), (1, 2, 1), A)


def test_to_decimal():
    assert to_decimal(Fraction(1, 3), 20) == "0.33333333333333333333"
    assert to_decimal(Fraction(1)) == "1"
