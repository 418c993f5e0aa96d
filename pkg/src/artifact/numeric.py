"""Exact scalars and sparse linear algebra.

Two scalar families are used.  ``Cyclotomic`` covers the small cyclotomic
fields Q(zeta_m) with m in {1, 2, 3, 4} and is what the Lie algebra layer
computes with.  Module computations are done over type A foldings, whose
twisted bases have rational coefficients, so they stay rational; for those
``QQ`` (the flint rational type) is used because it is an order of magnitude
faster than ``fractions.Fraction``.

Vectors are plain dicts ``key -> scalar`` with no stored zeros.  ``Echelon``
is the workhorse: an incremental, insertion-ordered echelon form over dict
vectors with arbitrary hashable, mutually comparable keys.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

import flint

QQ = flint.fmpq

_DEGREE = {1: 1, 2: 1, 3: 2, 4: 2}
# coercion lattice: order a embeds into order b
_EMBEDS = {(1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 4), (3, 3), (4, 4)}


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    raise TypeError(f"not a rational: {x!r}")


def _common_order(a: int, b: int) -> int:
    if (a, b) in _EMBEDS:
        return b
    if (b, a) in _EMBEDS:
        return a
    if {a, b} == {2, 3}:
        return 3  # zeta_2 = -1 is rational, so order 2 elements live in Q(zeta_3)
    raise ValueError(f"incompatible cyclotomic orders {a} and {b}")


class Cyclotomic:
    """Element of Q(zeta_m) on the power basis 1, zeta, ..., zeta^(phi(m)-1).

    Order 2 is stored like order 1 since zeta_2 = -1.  The relations are
    zeta_4^2 = -1 and zeta_3^2 = -1 - zeta_3.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = (0,)):
        if order not in _DEGREE:
            raise ValueError(f"unsupported cyclotomic order {order}")
        cs = [_frac(c) for c in coeffs]
        deg = _DEGREE[order]
        if len(cs) > deg:
            raise ValueError("too many coefficients for this order")
        cs += [Fraction(0)] * (deg - len(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic is immutable")

    @classmethod
    def zeta(cls, m: int) -> "Cyclotomic":
        if m == 2:
            return cls(2, (-1,))
        if m == 1:
            return cls(1, (1,))
        return cls(m, (0, 1))

    @classmethod
    def coerce(cls, x, order: int = 1) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x.lift(_common_order(x.order, order))
        return cls(order, (_frac(x),))

    def lift(self, order: int) -> "Cyclotomic":
        if order == self.order:
            return self
        if self.order in (1, 2) or order in (1, 2):
            if not self.is_rational():
                raise ValueError(f"cannot view order {self.order} element in order {order}")
            return Cyclotomic(order, (self.coeffs[0],))
        raise ValueError(f"incompatible cyclotomic orders {self.order} and {order}")

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def _pair(self, other):
        if not isinstance(other, Cyclotomic):
            try:
                other = Cyclotomic(self.order, (_frac(other),))
            except TypeError:
                return None, None
        m = _common_order(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        if _DEGREE[a.order] == 1:
            return Cyclotomic(a.order, (a.coeffs[0] * b.coeffs[0],))
        (p, q), (r, s) = a.coeffs, b.coeffs
        if a.order == 4:
            return Cyclotomic(4, (p * r - q * s, p * s + q * r))
        return Cyclotomic(3, (p * r - q * s, p * s + q * r - q * s))

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        if _DEGREE[self.order] == 1:
            return self
        p, q = self.coeffs
        if self.order == 4:
            return Cyclotomic(4, (p, -q))
        return Cyclotomic(3, (p - q, -q))

    def norm(self) -> Fraction:
        return (self * self.conjugate()).coeffs[0]

    def inverse(self) -> "Cyclotomic":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return Cyclotomic(self.order, [x / n for x in c.coeffs])

    def __truediv__(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.coerce(other, 1)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other, self.order) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic(self.order, (1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            a, b = self._pair(other)
        except ValueError:
            return False
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"Cyclotomic({self.order}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_scalar(self)


def cyc_arith(a: Cyclotomic, b: Cyclotomic | None, op: str) -> Cyclotomic:
    """Apply one of add, mul, neg, inv."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


def zeta_power(m: int, k: int) -> Cyclotomic:
    return Cyclotomic.zeta(m) ** (k % m if m > 1 else 0)


def format_scalar(x) -> str:
    """Render a scalar as ``p/q`` or ``(a+b*z4)``."""
    if isinstance(x, Cyclotomic):
        if x.is_rational():
            return str(x.coeffs[0])
        a, b = x.coeffs
        return f"({a}{'+' if b >= 0 else '-'}{abs(b)}*z{x.order})"
    return str(_frac(x))


_SCALAR_RE = re.compile(r"^\(?\s*([-+]?\d+(?:/\d+)?)?\s*(?:([-+])\s*(\d+(?:/\d+)?)\s*\*\s*z([34]))?\s*\)?$")


def parse_scalar(text: str):
    """Inverse of ``format_scalar``."""
    text = text.strip()
    m = _SCALAR_RE.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ValueError(f"cannot parse scalar {text!r}")
    a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
    if m.group(2) is None:
        return a
    b = Fraction(m.group(3)) * (-1 if m.group(2) == "-" else 1)
    return Cyclotomic(int(m.group(4)), (a, b))


def qq(x) -> flint.fmpq:
    """Convert a rational scalar of any supported type to ``QQ``."""
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return QQ(x)
    if isinstance(x, Cyclotomic):
        x = x.to_fraction()
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    raise TypeError(f"not a rational scalar: {x!r}")


def to_fraction(x) -> Fraction:
    if isinstance(x, Cyclotomic):
        return x.to_fraction()
    return _frac(x)


# ---------------------------------------------------------------- vectors

def vadd(acc: dict, v: Mapping, c=1) -> dict:
    """acc += c*v in place, dropping zeros."""
    for k, x in v.items():
        y = acc.get(k, 0) + c * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


def vscale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


@dataclass(frozen=True)
class SparseVector:
    """Sparse vector with an ambient dimension; zero entries are never stored."""

    dim: int
    entries: tuple = ()

    @classmethod
    def from_dict(cls, dim: int, d: Mapping[int, object]) -> "SparseVector":
        items = tuple(sorted((i, x) for i, x in d.items() if x))
        for i, _ in items:
            if not 0 <= i < dim:
                raise IndexError(f"index {i} outside dimension {dim}")
        return cls(dim, items)

    @classmethod
    def from_list(cls, values) -> "SparseVector":
        values = list(values)
        return cls.from_dict(len(values), dict(enumerate(values)))

    def to_dict(self) -> dict:
        return dict(self.entries)

    def to_list(self) -> list:
        out = [0] * self.dim
        for i, x in self.entries:
            out[i] = x
        return out


@dataclass(frozen=True)
class ExactMatrix:
    ncols: int
    rows: tuple = ()

    def __post_init__(self):
        for r in self.rows:
            if r.dim != self.ncols:
                raise ValueError("inconsistent row dimension")

    @classmethod
    def from_lists(cls, rows, ncols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(ncols, tuple(SparseVector.from_list(r) for r in rows))

    def to_lists(self) -> list[list]:
        return [r.to_list() for r in self.rows]

    def transpose(self) -> "ExactMatrix":
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, x in r.entries:
                cols[j][i] = x
        return ExactMatrix(len(self.rows), tuple(SparseVector.from_dict(len(self.rows), c) for c in cols))


@dataclass(frozen=True)
class RREF:
    rank: int
    basis: ExactMatrix
    pivots: tuple


def rref(M: ExactMatrix) -> RREF:
    """Reduced row echelon form over the scalars of M (rational or cyclotomic)."""
    ech = Echelon()
    for r in M.rows:
        ech.add(r.to_dict())
    rows = ech.reduced_rows()
    basis = ExactMatrix(M.ncols, tuple(SparseVector.from_dict(M.ncols, r) for _, r in rows))
    return RREF(len(rows), basis, tuple(p for p, _ in rows))


# ---------------------------------------------------------------- echelon

_BATCH = 24


def _is_rational(v: Mapping) -> bool:
    return all(type(x) is flint.fmpq or type(x) is int for x in v.values())


@dataclass
class Echelon:
    """Insertion-ordered echelon form over dict vectors.

    Every stored row is monic at its pivot (its smallest key) and has zeros at
    the pivots of all earlier rows.  Old rows are never rewritten, so row
    indices are stable and coordinates with respect to the rows can be read off
    during reduction.  The pivot set coincides with the pivot set of the
    reduced row echelon form of the span.
    """

    rows: list = field(default_factory=list)
    pivots: list = field(default_factory=list)
    where: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Mapping, want_coords: bool = False):
        """Return (remainder, coords) with v = sum coords[k]*rows[k] + remainder."""
        v = dict(v)
        coords = {} if want_coords else None
        heap = [self.where[k] for k in v if k in self.where]
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            i = heapq.heappop(heap)
            p = self.pivots[i]
            c = v.get(p)
            if not c:
                continue
            if want_coords:
                coords[i] = c
            for k, x in self.rows[i].items():
                y = v.get(k, 0) - c * x
                if y:
                    if k not in v:
                        j = self.where.get(k)
                        if j is not None and j not in seen:
                            seen.add(j)
                            heapq.heappush(heap, j)
                    v[k] = y
                else:
                    v.pop(k, None)
        return v, coords

    def add(self, v: Mapping):
        """Insert v; return the new monic row, or None if v is in the span."""
        r, _ = self.reduce(v)
        if not r:
            return None
        p = min(r)
        inv = 1 / r[p]
        if inv != 1:
            r = {k: x * inv for k, x in r.items()}
        self.where[p] = len(self.rows)
        self.rows.append(r)
        self.pivots.append(p)
        return r

    def add_many(self, vecs: list) -> list:
        """Same as [self.add(v) for v in vecs]; large rational batches are screened with flint first."""
        if len(vecs) >= _BATCH and all(_is_rational(v) for v in vecs):
            keep = self._independent(vecs)
            return [self.add(v) if k else None for v, k in zip(vecs, keep)]
        return [self.add(v) for v in vecs]

    def _independent(self, vecs: list) -> list:
        # a vector survives sequential insertion iff its column is a pivot of rref[rows | vecs]
        cols = self.rows + list(vecs)
        keys: dict = {}
        for c in cols:
            for k in c:
                keys.setdefault(k, len(keys))
        if not keys:
            return [False] * len(vecs)
        M = flint.fmpq_mat(len(keys), len(cols))
        for j, c in enumerate(cols):
            for k, x in c.items():
                M[keys[k], j] = x
        R, rank = M.rref()
        pivots = set()
        j = 0
        for i in range(rank):
            while R[i, j] == 0:
                j += 1
            pivots.add(j)
            j += 1
        base = len(self.rows)
        return [base + t in pivots for t in range(len(vecs))]

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)[0]

    def coordinates(self, v: Mapping) -> dict:
        r, c = self.reduce(v, want_coords=True)
        if r:
            raise ValueError("vector is not in the span")
        return c

    def reduced_rows(self) -> list[tuple]:
        """Fully reduced rows sorted by pivot, as (pivot, row) pairs."""
        order = sorted(range(len(self.rows)), key=lambda i: self.pivots[i])
        out: list[dict] = []
        for i in reversed(order):
            row = dict(self.rows[i])
            for q, other in out:
                c = row.get(q)
                if c:
                    vadd(row, other, -c)
            out.append((self.pivots[i], row))
        out.reverse()
        return out
