from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from satake_bly.roots import build_root_system
from satake_bly.satake import is_mu_connected, support
from satake_bly.weights import (
    dim_V_I,
    dominant_weights,
    restricted_highest_weight,
    weight_diagram,
    weights_by_strings,
    weyl_dimension,
)

CASES = [
    ("A1", (2,)), ("A2", (1, 0)), ("A2", (1, 1)), ("A2", (2, 1)), ("A3", (0, 1, 0)),
    ("A3", (1, 0, 1)), ("B2", (1, 0)), ("B2", (0, 1)), ("B2", (1, 1)), ("B3", (0, 0, 1)),
    ("C3", (0, 1, 0)), ("D4", (0, 1, 0, 0)), ("G2", (1, 0)), ("G2", (0, 1)), ("F4", (0, 0, 0, 1)),
]


def test_a1_adjoint():
    rs = build_root_system("A1")
    d = weight_diagram(rs, (2,))
    assert dict(d.items()) == {(2,): 1, (0,): 1, (-2,): 1}


def test_a2_examples():
    rs = build_root_system("A2")
    d = weight_diagram(rs, (1, 0))
    assert d.dimension == 3 and len(d) == 3 and set(d.multiplicities.values()) == {1}
    adj = weight_diagram(rs, (1, 1))
    assert adj.dimension == 8 and adj[(0, 0)] == 2


def test_weyl_dimension_examples():
    assert weyl_dimension(build_root_system("A2"), (1, 0)) == 3
    assert weyl_dimension(build_root_system("A3"), (0, 1, 0)) == 6
    for name in ["A1", "B3", "E6", "G2"]:
        rs = build_root_system(name)
        assert weyl_dimension(rs, (0,) * rs.rank) == 1


@pytest.mark.parametrize("name,dim", [("E6", 78), ("E7", 133), ("F4", 52), ("G2", 14), ("B3", 21), ("D5", 45)])
def test_adjoint_dimension(name, dim):
    rs = build_root_system(name)
    highest = rs.positive_roots_weights[-1]
    assert weyl_dimension(rs, highest) == dim


@pytest.mark.parametrize("name,mu", CASES)
def test_freudenthal_matches_weyl_formula(name, mu):
    rs = build_root_system(name)
    assert weight_diagram(rs, mu).dimension == weyl_dimension(rs, mu)


@pytest.mark.parametrize("name,mu", CASES)
def test_diagram_invariants(name, mu):
    rs = build_root_system(name)
    d = weight_diagram(rs, mu)
    assert d[mu] == 1
    for lam, m in d.items():
        for i in range(rs.rank):
            assert d[rs.simple_reflect(lam, i)] == m
        support(rs, lam, mu)  # raises unless mu - lam is a nonnegative integer root combination
    assert set(d) == weights_by_strings(rs, mu)


def test_dominant_weights_of_adjoint_a2():
    rs = build_root_system("A2")
    assert dominant_weights(rs, (1, 1)) == [(1, 1), (0, 0)]


@pytest.mark.parametrize("bad", [(-1, 0), (1, -2)])
def test_rejects_non_dominant(bad):
    rs = build_root_system("A2")
    with pytest.raises(ValueError):
        weight_diagram(rs, bad)
    with pytest.raises(ValueError):
        weyl_dimension(rs, bad)


def test_rejects_non_integral():
    from fractions import Fraction

    with pytest.raises(ValueError):
        weight_diagram(build_root_system("A2"), (Fraction(1, 2), 0))


def test_dim_V_I_examples():
    rs = build_root_system("A2")
    d = weight_diagram(rs, (1, 0))
    assert dim_V_I(d, ()) == 1
    assert dim_V_I(d, {0}) == 2
    assert dim_V_I(d, {0, 1}) == 3


@pytest.mark.parametrize("name,mu", [c for c in CASES if c[0] in ("A2", "A3", "B2", "B3", "C3", "G2")])
def test_dim_V_I_matches_subsystem_dimension(name, mu):
    rs = build_root_system(name)
    d = weight_diagram(rs, mu)
    for k in range(rs.rank + 1):
        for I in combinations(range(rs.rank), k):
            if not is_mu_connected(rs, I, mu):
                continue
            if not I:
                assert dim_V_I(d, I) == 1
                continue
            sub = rs.subsystem(I)
            assert dim_V_I(d, I) == weyl_dimension(sub, restricted_highest_weight(mu, I))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2"]), st.integers(0, 2), st.integers(0, 2))
def test_dimension_property(name, a, b):
    rs = build_root_system(name)
    d = weight_diagram(rs, (a, b))
    assert d.dimension == weyl_dimension(rs, (a, b))
    assert sum(m for lam, m in d.items()) == d.dimension
