from fractions import Fraction

import flint
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.numeric import (QQ, Cyclotomic, Echelon, ExactMatrix, SparseVector, format_scalar, parse_scalar, qq,
                              rref, vadd, zeta_power)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def cyc(order):
    deg = 1 if order in (1, 2) else 2
    return st.lists(small, min_size=deg, max_size=deg).map(lambda cs: Cyclotomic(order, cs))


# ------------------------------------------------------------ cyclotomic scalars

def test_zeta4_squares_to_minus_one():
    i = Cyclotomic.zeta(4)
    assert i * i == -1
    assert i ** 4 == 1


def test_zeta3_relation():
    w = Cyclotomic.zeta(3)
    assert w * w == -1 - w
    assert w ** 3 == 1
    assert 1 + w + w * w == 0


def test_zeta_power_negative_exponent():
    assert zeta_power(4, -1) == Cyclotomic(4, (0, -1))
    assert zeta_power(4, 3) == zeta_power(4, -1)


def test_rational_elements_compare_with_fractions():
    assert Cyclotomic(4, (Fraction(1, 2), 0)) == Fraction(1, 2)
    assert Cyclotomic(4, (0, 1)) != 1
    assert Cyclotomic(3, (2,)).to_fraction() == 2


@pytest.mark.parametrize("order", [3, 4])
@given(data=st.data())
def test_field_axioms(order, data):
    a, b, c = (data.draw(cyc(order)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@pytest.mark.parametrize("order", [1, 3, 4])
@given(data=st.data())
def test_format_parse_roundtrip(order, data):
    x = data.draw(cyc(order))
    y = parse_scalar(format_scalar(x))
    assert Cyclotomic.coerce(y, order) == x


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("1+x")


def test_qq_conversion():
    assert qq(Fraction(3, 4)) == QQ(3, 4)
    assert qq(Cyclotomic(4, (2,))) == QQ(2)
    with pytest.raises(ValueError):
        qq(Cyclotomic(4, (0, 1)))


# ------------------------------------------------------------ vectors and echelon

def test_vadd_drops_zeros():
    acc = {0: QQ(1), 1: QQ(2)}
    vadd(acc, {0: QQ(1)}, -1)
    assert acc == {1: QQ(2)}


def test_sparse_vector_bounds():
    with pytest.raises(IndexError):
        SparseVector.from_dict(2, {3: 1})


rows_strategy = st.integers(1, 6).flatmap(
    lambda ncols: st.lists(st.lists(st.integers(-3, 3), min_size=ncols, max_size=ncols), min_size=1, max_size=7))


@given(rows_strategy)
def test_rref_matches_flint_oracle(rows):
    ncols = len(rows[0])
    got = rref(ExactMatrix.from_lists([[Fraction(x) for x in r] for r in rows]))
    M = flint.fmpq_mat(len(rows), ncols, [x for r in rows for x in r])
    R, rank = M.rref()
    assert got.rank == rank
    want = [[R[i, j] for j in range(ncols)] for i in range(rank)]
    assert [[qq(x) for x in r] for r in got.basis.to_lists()] == want


@given(rows_strategy)
def test_echelon_coordinates_reconstruct(rows):
    ech = Echelon()
    for r in rows:
        ech.add({j: QQ(x) for j, x in enumerate(r) if x})
    for r in rows:
        v = {j: QQ(x) for j, x in enumerate(r) if x}
        coords = ech.coordinates(v)
        back: dict = {}
        for i, c in coords.items():
            vadd(back, ech.rows[i], c)
        assert back == v


@given(rows_strategy)
def test_echelon_insertion_is_stable(rows):
    ech = Echelon()
    seen = []
    for r in rows:
        row = ech.add({j: QQ(x) for j, x in enumerate(r) if x})
        if row is not None:
            seen.append(dict(row))
        assert [dict(x) for x in ech.rows] == seen
    for i, p in enumerate(ech.pivots):
        assert ech.rows[i][p] == 1
        for j in range(i):
            assert ech.pivots[j] not in ech.rows[i]


def test_coordinates_reject_vectors_outside_span():
    ech = Echelon()
    ech.add({0: QQ(1)})
    with pytest.raises(ValueError):
        ech.coordinates({1: QQ(1)})


@given(st.lists(st.lists(st.integers(-2, 2), min_size=6, max_size=6), min_size=0, max_size=60),
       st.integers(0, 10))
def test_add_many_matches_sequential_add(rows, prefix):
    vecs = [{j: QQ(x) for j, x in enumerate(r) if x} for r in rows]
    one, many = Echelon(), Echelon()
    for v in vecs[:prefix]:
        one.add(v)
        many.add(v)
    got = many.add_many(vecs[prefix:])
    want = [one.add(v) for v in vecs[prefix:]]
    assert [None if r is None else dict(r) for r in got] == [None if r is None else dict(r) for r in want]
    assert one.rows == many.rows and one.pivots == many.pivots
