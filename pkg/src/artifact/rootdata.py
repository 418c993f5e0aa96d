"""Simply-laced root systems and folding data for the standard automorphism.

Vertices are labelled 1..n in Bourbaki order.  Roots are integer tuples of
simple-root coordinates, weights and coweights are integer tuples of
fundamental (co)weight coordinates.  Since every root has (alpha, alpha) = 2
the normalized form identifies coroots with roots, so a weight in Dynkin
labels is just the tuple of pairings with the simple coroots.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

Root = tuple
Weight = tuple
Coweight = tuple


def _chain_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(1, n)]


def _edges(kind: str, n: int) -> list[tuple[int, int]]:
    if kind == "A":
        return _chain_edges(n)
    if kind == "D":
        return _chain_edges(n - 1) + [(n - 2, n)]
    if kind == "E" and n == 6:
        return [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]
    raise ValueError(f"unsupported type {kind}{n}")


@dataclass(frozen=True)
class RootSystem:
    kind: str
    rank: int
    cartan: tuple
    positive_roots: tuple

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def vertices(self) -> range:
        return range(1, self.rank + 1)

    @cached_property
    def root_index(self) -> dict:
        return {r: k for k, r in enumerate(self.positive_roots)}

    def form(self, a, b):
        """The normalized invariant form on simple-root coordinates."""
        n = self.rank
        return sum(a[i] * self.cartan[i][j] * b[j] for i in range(n) for j in range(n) if a[i] and b[j])

    def root_weight(self, a: Root) -> Weight:
        """Dynkin labels of the root with simple-root coordinates a."""
        n = self.rank
        return tuple(sum(self.cartan[i][j] * a[j] for j in range(n)) for i in range(n))

    def height(self, a: Root) -> int:
        return sum(a)

    def is_root(self, a) -> bool:
        a = tuple(a)
        return a in self.root_index or tuple(-x for x in a) in self.root_index

    def simple_root(self, i: int) -> Root:
        return tuple(1 if k == i - 1 else 0 for k in range(self.rank))

    @cached_property
    def inverse_cartan(self) -> tuple:
        n = self.rank
        m = [[Fraction(self.cartan[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for c in range(n):
            p = next(r for r in range(c, n) if m[r][c])
            m[c], m[p] = m[p], m[c]
            inv = 1 / m[c][c]
            m[c] = [x * inv for x in m[c]]
            for r in range(n):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        return tuple(tuple(row[n:]) for row in m)

    def fundamental_weight(self, j: int) -> tuple:
        """Simple-root coordinates (rational) of omega_j."""
        return tuple(self.inverse_cartan[j - 1])

    def pairing(self, lam: Coweight, a: Root) -> int:
        """<lambda, alpha> for a coweight in fundamental coordinates."""
        return sum(x * y for x, y in zip(lam, a))

    def dump(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.positive_roots) + "\n"

    def type_a_root(self, i: int, j: int) -> Root:
        """alpha_{i,j} = alpha_i + ... + alpha_j in type A."""
        if self.kind != "A" or not 1 <= i <= j <= self.rank:
            raise ValueError(f"no root alpha_({i},{j}) in {self.name}")
        return tuple(1 if i - 1 <= k <= j - 1 else 0 for k in range(self.rank))

    def type_a_name(self, a: Root) -> tuple[int, int]:
        idx = [k + 1 for k, x in enumerate(a) if x]
        return idx[0], idx[-1]


def build_root_system(kind: str, rank: int) -> RootSystem:
    kind = kind.upper()
    if kind in ("E6", "E") and rank == 6:
        kind = "E"
    valid = (kind == "A" and rank >= 1) or (kind == "D" and rank >= 4) or (kind == "E" and rank == 6)
    if not valid:
        raise ValueError(f"unsupported root system {kind}{rank}")
    n = rank
    cartan = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in _edges(kind, n):
        cartan[a - 1][b - 1] = cartan[b - 1][a - 1] = -1
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for r in layer:
            for i in range(n):
                # simply laced: r + alpha_i is a root iff (r, alpha_i) = -1
                ip = sum(r[j] * cartan[j][i] for j in range(n))
                if ip == -1:
                    s = tuple(x + (k == i) for k, x in enumerate(r))
                    if s not in found:
                        found.add(s)
                        nxt.append(s)
        layer = nxt
    roots = tuple(sorted(found, key=lambda r: (sum(r), tuple(-x for x in r))))
    return RootSystem(kind, n, tuple(tuple(r) for r in cartan), roots)


# folded Cartan matrices a_ij = <beta_i^vee, beta_j>, Bourbaki labelling
def _folded_cartan(kind: str, rank: int) -> tuple:
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i in range(rank - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if kind == "C" and rank >= 2:
        a[rank - 2][rank - 1] = -2
    elif kind == "B":
        a[rank - 1][rank - 2] = -2
    elif kind == "F":
        a[2][1] = -2
    elif kind == "G":
        a[0][1] = -3
    return tuple(tuple(r) for r in a)


@dataclass(frozen=True)
class FoldingData:
    parent: RootSystem
    m: int
    tau: tuple  # tau[i-1] = image of vertex i
    h: tuple  # alpha_i(h), zero unless the parent is A_{2l}
    folded_kind: str
    folded_rank: int
    fibers: tuple  # fibers[i-1] = vertices of the parent over folded vertex i
    folded_cartan: tuple = field(repr=False)

    @property
    def folded_name(self) -> str:
        return f"{self.folded_kind}{self.folded_rank}"

    @property
    def is_a_even(self) -> bool:
        return self.parent.kind == "A" and self.parent.rank % 2 == 0

    @property
    def ell(self) -> int:
        return self.folded_rank

    @cached_property
    def eta(self) -> dict:
        return {j: i + 1 for i, fib in enumerate(self.fibers) for j in fib}

    @property
    def m_i(self) -> tuple:
        return tuple(self.m // len(f) for f in self.fibers)

    def tau_root(self, a: Root) -> Root:
        out = [0] * len(a)
        for i, x in enumerate(a):
            out[self.tau[i] - 1] = x
        return tuple(out)

    def tau_weight(self, w: Weight) -> Weight:
        return self.tau_root(w)

    def root_h(self, a: Root) -> int:
        """alpha(h) for a root in simple coordinates."""
        return sum(x * y for x, y in zip(a, self.h))

    def restrict(self, w: Weight) -> Weight:
        """Restriction of a weight (Dynkin labels) to the fixed Cartan subalgebra."""
        return tuple(sum(w[j - 1] for j in fib) for fib in self.fibers)

    def restrict_root(self, a: Root) -> Weight:
        return self.restrict(self.parent.root_weight(a))

    @cached_property
    def folded_simple_roots(self) -> tuple:
        out = []
        for i, fib in enumerate(self.fibers):
            a = self.parent.simple_root(fib[0])
            if self.is_a_even and i + 1 == self.ell:
                # the restriction of alpha_l is half a root of the fixed algebra
                a = self.parent.type_a_root(self.ell, self.ell + 1)
            out.append(self.restrict_root(a))
        return tuple(out)

    def folded_coroot(self, i: int) -> tuple:
        """beta_i^vee as a vector of coefficients on the simple coroots of the parent."""
        fib = self.fibers[i - 1]
        return tuple(1 if (k + 1) in fib else 0 for k in range(self.parent.rank))

    @cached_property
    def root_orbits(self) -> tuple:
        """tau-orbits of positive roots, each listed from its representative."""
        seen = set()
        out = []
        for a in self.parent.positive_roots:
            if a in seen:
                continue
            orb = [a]
            b = self.tau_root(a)
            while b != a:
                orb.append(b)
                b = self.tau_root(b)
            seen.update(orb)
            out.append(tuple(orb))
        return tuple(out)

    @cached_property
    def long_roots(self) -> tuple:
        if self.is_a_even:
            raise ValueError("long/short split is not used for A_{2l}")
        return tuple(o[0] for o in self.root_orbits if len(o) == 1)

    @cached_property
    def short_roots(self) -> tuple:
        if self.is_a_even:
            raise ValueError("long/short split is not used for A_{2l}")
        return tuple(o[0] for o in self.root_orbits if len(o) > 1)

    def orbit_coroot_pairing(self, lam: Coweight, a: Root) -> int:
        """(lambda, bar alpha^vee): the pairing with the sum of distinct coroots in the orbit of alpha."""
        orb = {a}
        b = self.tau_root(a)
        while b not in orb:
            orb.add(b)
            b = self.tau_root(b)
        return sum(self.parent.pairing(lam, r) for r in orb)


def build_folding(rs: RootSystem) -> FoldingData:
    n = rs.rank
    if rs.kind == "A":
        if n < 2:
            raise ValueError("A1 has no nontrivial diagram automorphism")
        tau = tuple(n + 1 - i for i in range(1, n + 1))
        if n % 2 == 0:
            ell = n // 2
            m, kind, rank = 4, "C", ell
            h = tuple(1 if i in (ell, ell + 1) else 0 for i in range(1, n + 1))
            fibers = tuple((i, n + 1 - i) for i in range(1, ell + 1))
        else:
            ell = (n + 1) // 2
            m, kind, rank = 2, "C", ell
            h = (0,) * n
            fibers = tuple((i, n + 1 - i) for i in range(1, ell)) + ((ell,),)
    elif rs.kind == "D" and n == 4:
        tau = (3, 2, 4, 1)  # 1 -> 3 -> 4 -> 1
        m, kind, rank, h = 3, "G", 2, (0,) * 4
        fibers = ((1, 3, 4), (2,))
    elif rs.kind == "D":
        tau = tuple(range(1, n - 1)) + (n, n - 1)
        m, kind, rank, h = 2, "B", n - 1, (0,) * n
        fibers = tuple((i,) for i in range(1, n - 1)) + ((n - 1, n),)
    elif rs.kind == "E":
        tau = (6, 2, 5, 4, 3, 1)
        m, kind, rank, h = 2, "F", 4, (0,) * 6
        fibers = ((2,), (4,), (3, 5), (1, 6))
    else:
        raise ValueError(f"no standard automorphism for {rs.name}")
    fd = FoldingData(rs, m, tau, h, kind, rank, fibers, _folded_cartan(kind, rank))
    _check_folding(fd)
    return fd


def _check_folding(fd: FoldingData) -> None:
    covered = sorted(j for f in fd.fibers for j in f)
    if covered != list(fd.parent.vertices):
        raise AssertionError("fibers do not partition the vertex set")
    for f in fd.fibers:
        if {fd.tau[j - 1] for j in f} != set(f):
            raise AssertionError("fiber is not a tau-orbit")
    got = tuple(tuple(beta[i] for beta in fd.folded_simple_roots) for i in range(fd.folded_rank))
    if got != fd.folded_cartan:
        raise AssertionError(f"restricted roots give {got}, expected {fd.folded_cartan}")


def iota(fd: FoldingData | None, lam: Coweight, twisted: bool = False) -> Weight:
    """The weight (lambda, -) attached to a coweight, restricted when twisted."""
    lam = tuple(lam)
    if not twisted:
        return lam
    if fd is None:
        raise ValueError("twisted iota needs folding data")
    if len(lam) == fd.folded_rank and len(lam) != fd.parent.rank:
        return lam  # already a class
    return fd.restrict(lam)


def project_coweight(fd: FoldingData, lam: Coweight) -> Coweight:
    """Normal form of the class of lambda: coordinate sums over tau-orbits of vertices."""
    return fd.restrict(tuple(lam))


def fundamental_lift(fd: FoldingData, mu_bar: Weight) -> list[Weight]:
    """Split a dominant folded weight into fundamental weights of the parent.

    Each folded fundamental weight is lifted to omega_j with j the smallest
    vertex of its fiber.
    """
    out = []
    n = fd.parent.rank
    for i, a in enumerate(mu_bar):
        if a < 0:
            raise ValueError("weight is not dominant")
        j = fd.fibers[i][0]
        out += [tuple(1 if k == j else 0 for k in range(1, n + 1))] * a
    return out
