from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.rootdata import build_folding, build_root_system, fundamental_lift, iota, project_coweight

SYSTEMS = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("A", 5), ("D", 4), ("D", 5), ("E", 6)]
FOLDABLE = [("A", 2), ("A", 3), ("A", 4), ("A", 5), ("D", 4), ("D", 5), ("E", 6)]


def positive_count(kind, n):
    return {"A": n * (n + 1) // 2, "D": n * (n - 1), "E": 36}[kind]


@pytest.mark.parametrize("kind,n", SYSTEMS)
def test_positive_root_count(kind, n):
    rs = build_root_system(kind, n)
    assert len(rs.positive_roots) == positive_count(kind, n)
    assert all(rs.form(a, a) == 2 for a in rs.positive_roots)


@pytest.mark.parametrize("kind,n", SYSTEMS)
def test_inverse_cartan(kind, n):
    rs = build_root_system(kind, n)
    inv = rs.inverse_cartan
    for i in range(n):
        for j in range(n):
            assert sum(rs.cartan[i][k] * inv[k][j] for k in range(n)) == (i == j)


def test_highest_root_of_e6():
    rs = build_root_system("E", 6)
    assert max(rs.positive_roots, key=sum) == (1, 2, 2, 3, 2, 1)


def test_type_a_roots():
    rs = build_root_system("A", 4)
    assert rs.type_a_root(2, 4) == (0, 1, 1, 1)
    assert rs.type_a_name((0, 1, 1, 0)) == (2, 3)
    with pytest.raises(ValueError):
        rs.type_a_root(3, 2)


def test_unsupported_root_system():
    with pytest.raises(ValueError):
        build_root_system("B", 3)


@pytest.mark.parametrize("kind,n,m,folded", [
    ("A", 2, 4, "C1"), ("A", 3, 2, "C2"), ("A", 4, 4, "C2"), ("A", 5, 2, "C3"),
    ("D", 4, 3, "G2"), ("D", 5, 2, "B4"), ("E", 6, 2, "F4"),
])
def test_folding_types(kind, n, m, folded):
    fd = build_folding(build_root_system(kind, n))
    assert fd.m == m
    assert fd.folded_name == folded


@pytest.mark.parametrize("kind,n", FOLDABLE)
def test_folded_simple_roots_give_the_folded_cartan(kind, n):
    fd = build_folding(build_root_system(kind, n))
    got = tuple(tuple(beta[i] for beta in fd.folded_simple_roots) for i in range(fd.folded_rank))
    assert got == fd.folded_cartan


@pytest.mark.parametrize("kind,n", FOLDABLE)
def test_tau_is_a_diagram_automorphism(kind, n):
    fd = build_folding(build_root_system(kind, n))
    rs = fd.parent
    for a in rs.positive_roots:
        assert fd.tau_root(a) in rs.root_index
    for i in range(n):
        for j in range(n):
            assert rs.cartan[fd.tau[i] - 1][fd.tau[j] - 1] == rs.cartan[i][j]


def test_a_even_h_values():
    fd = build_folding(build_root_system("A", 4))
    assert fd.h == (0, 1, 1, 0)
    assert fd.root_h(fd.parent.type_a_root(2, 3)) == 2


def test_a1_has_no_folding():
    with pytest.raises(ValueError):
        build_folding(build_root_system("A", 1))


dominant = st.lists(st.integers(0, 3), min_size=4, max_size=4).map(tuple)


@given(dominant)
def test_restriction_is_tau_invariant(lam):
    fd = build_folding(build_root_system("A", 4))
    assert fd.restrict(lam) == fd.restrict(fd.tau_weight(lam))
    assert project_coweight(fd, lam) == fd.restrict(lam)
    assert iota(fd, lam, twisted=True) == fd.restrict(lam)
    assert iota(fd, lam) == lam


@given(dominant, st.integers(0, 9))
def test_orbit_pairing_sums_the_orbit(lam, k):
    fd = build_folding(build_root_system("A", 4))
    rs = fd.parent
    a = rs.positive_roots[k]
    orbit = {a, fd.tau_root(a)}
    assert fd.orbit_coroot_pairing(lam, a) == sum(rs.pairing(lam, r) for r in orbit)


@given(st.lists(st.integers(0, 3), min_size=2, max_size=2).map(tuple))
def test_fundamental_lift_restricts_back(mu_bar):
    fd = build_folding(build_root_system("A", 3))
    lifts = fundamental_lift(fd, mu_bar)
    assert len(lifts) == sum(mu_bar)
    total = tuple(sum(col) for col in zip(*lifts)) if lifts else (0, 0, 0)
    assert fd.restrict(total) == mu_bar


def test_long_and_short_roots_of_a3():
    fd = build_folding(build_root_system("A", 3))
    assert set(fd.long_roots) == {(0, 1, 0), (1, 1, 1)}
    assert len(fd.short_roots) == 2
    with pytest.raises(ValueError):
        build_folding(build_root_system("A", 4)).long_roots


def test_fundamental_weight_coordinates():
    rs = build_root_system("A", 2)
    assert rs.fundamental_weight(1) == (Fraction(2, 3), Fraction(1, 3))
