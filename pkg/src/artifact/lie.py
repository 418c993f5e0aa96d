"""Chevalley bases, the automorphisms tau, sigma, phi and current algebras.

Basis of g: indices 0..N-1 are e_alpha for the positive roots (in the order of
``RootSystem.positive_roots``), N..2N-1 are e_{-alpha}, and 2N..2N+n-1 are
h_1..h_n.  Elements of g are dicts index -> scalar.

Structure constants come from the bimultiplicative sign function
eps(alpha_i, alpha_j) = -1 if i == j or (i > j and i, j adjacent), else +1.
With it [E_a, E_b] = eps(a, b) E_{a+b}, [E_a, E_{-a}] = -a, and the
Chevalley basis is e_a = E_a, e_{-a} = -E_{-a} for a > 0.  In type A this
reproduces the matrix units e_{alpha_ij} = E_{i,j+1}, e_{-alpha_ij} = E_{j+1,i}.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .numeric import Cyclotomic, Echelon, format_scalar, parse_scalar, vadd, zeta_power
from .rootdata import FoldingData, RootSystem

G_T = "g[t]"
G_T_SIGMA = "g[t]^sigma"
CG = "cg"


def _norm_scalar(x):
    if isinstance(x, Cyclotomic) and x.is_rational():
        return x.to_fraction()
    return x


def _clean(d: Mapping) -> dict:
    return {k: _norm_scalar(v) for k, v in d.items() if v}


class ChevalleyAlgebra:
    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.N = len(rs.positive_roots)
        self.n = rs.rank
        self.dim = 2 * self.N + self.n
        self.roots: list = list(rs.positive_roots) + [tuple(-x for x in r) for r in rs.positive_roots] + [None] * self.n
        self._root_idx = {r: k for k, r in enumerate(self.roots) if r is not None}
        self.table = self._build_table()

    # ---- indexing
    def e(self, root) -> int:
        return self._root_idx[tuple(root)]

    def f(self, root) -> int:
        return self._root_idx[tuple(-x for x in root)]

    def h(self, i: int) -> int:
        return 2 * self.N + i - 1

    def is_h(self, idx: int) -> bool:
        return idx >= 2 * self.N

    def weight(self, idx: int) -> tuple:
        r = self.roots[idx]
        return r if r is not None else (0,) * self.n

    def h_vertex(self, idx: int) -> int:
        return idx - 2 * self.N + 1

    def coroot(self, root) -> dict:
        """h_alpha = sum a_i h_i for alpha = sum a_i alpha_i (possibly negative)."""
        return {self.h(i + 1): Fraction(a) for i, a in enumerate(root) if a}

    # ---- structure constants
    def _eps(self, a, b) -> int:
        n = self.n
        c = self.rs.cartan
        s = 0
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                if b[j] and (i == j or (i > j and c[i][j] == -1)):
                    s += a[i] * b[j]
        return -1 if s % 2 else 1

    def _build_table(self) -> dict:
        rs = self.rs
        sign = lambda r: 1 if sum(r) > 0 else -1
        table = {}
        for a in range(2 * self.N):
            ra = self.roots[a]
            for b in range(2 * self.N):
                rb = self.roots[b]
                s = tuple(x + y for x, y in zip(ra, rb))
                if not any(s):
                    # [e_a, e_{-a}] = h_a
                    table[(a, b)] = tuple((k, v) for k, v in self.coroot(ra).items())
                elif s in self._root_idx:
                    c = sign(ra) * sign(rb) * self._eps(ra, rb) * sign(s)
                    table[(a, b)] = ((self._root_idx[s], Fraction(c)),)
            for i in range(1, self.n + 1):
                hi = self.h(i)
                c = rs.form(rs.simple_root(i), ra)
                if c:
                    table[(hi, a)] = ((a, Fraction(c)),)
                    table[(a, hi)] = ((a, Fraction(-c)),)
        return table

    def bracket_basis(self, a: int, b: int) -> tuple:
        return self.table.get((a, b), ())

    def bracket(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, v in self.table.get((a, b), ()):
                    out[c] = out.get(c, 0) + ca * cb * v
        return _clean(out)

    # ---- labels
    def label(self, idx: int) -> str:
        if self.is_h(idx):
            return f"h[{self.h_vertex(idx)}]"
        r = self.roots[idx]
        pos = sum(r) > 0
        rr = r if pos else tuple(-x for x in r)
        if self.rs.kind == "A":
            i, j = self.rs.type_a_name(rr)
            return f"{'e' if pos else 'f'}[{i},{j}]"
        return f"{'e' if pos else 'f'}[{','.join(map(str, rr))}]"

    def parse_label(self, text: str) -> int:
        m = re.fullmatch(r"\s*([efh])\[([\d,\s]+)\]\s*", text)
        if not m:
            raise ValueError(f"bad basis symbol {text!r}")
        nums = tuple(int(x) for x in m.group(2).split(","))
        if m.group(1) == "h":
            return self.h(nums[0])
        if self.rs.kind == "A":
            root = self.rs.type_a_root(*nums)
        else:
            root = nums
        return self.e(root) if m.group(1) == "e" else self.f(root)

    # ---- type A matrices
    def matrix(self, idx: int) -> dict:
        """Matrix of a basis element in the defining representation of sl_{n+1}, as {(r, c): value}."""
        if self.rs.kind != "A":
            raise ValueError("matrix realization only for type A")
        if self.is_h(idx):
            i = self.h_vertex(idx)
            return {(i - 1, i - 1): 1, (i, i): -1}
        r = self.roots[idx]
        pos = sum(r) > 0
        rr = r if pos else tuple(-x for x in r)
        i, j = self.rs.type_a_name(rr)
        return {(i - 1, j): 1} if pos else {(j, i - 1): 1}


def build_chevalley(rs: RootSystem) -> ChevalleyAlgebra:
    return ChevalleyAlgebra(rs)


# ------------------------------------------------------------ automorphisms

@dataclass(frozen=True)
class AlgebraAutomorphism:
    alg: ChevalleyAlgebra
    images: tuple
    name: str = ""

    def __call__(self, x: Mapping) -> dict:
        out: dict = {}
        for a, c in x.items():
            vadd(out, self.images[a], c)
        return _clean(out)

    def compose(self, other: "AlgebraAutomorphism") -> "AlgebraAutomorphism":
        return AlgebraAutomorphism(self.alg, tuple(self(img) for img in other.images), f"{self.name}*{other.name}")

    def power(self, k: int) -> "AlgebraAutomorphism":
        out = identity_automorphism(self.alg)
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_identity(self) -> bool:
        return all(img == {a: 1} for a, img in enumerate(self.images))

    def order(self, bound: int = 12) -> int:
        p = self
        for k in range(1, bound + 1):
            if p.is_identity():
                return k
            p = self.compose(p)
        raise ValueError("order exceeds bound")

    def bracket_failures(self) -> list:
        alg = self.alg
        bad = []
        for a in range(alg.dim):
            for b in range(a + 1, alg.dim):
                lhs = self(alg.bracket({a: 1}, {b: 1}))
                rhs = alg.bracket(self.images[a], self.images[b])
                if lhs != rhs:
                    bad.append((a, b))
        return bad


def identity_automorphism(alg: ChevalleyAlgebra) -> AlgebraAutomorphism:
    return AlgebraAutomorphism(alg, tuple({a: Fraction(1)} for a in range(alg.dim)), "id")


def extend_from_generators(alg: ChevalleyAlgebra, e_img: dict, f_img: dict, h_img: dict, name: str) -> AlgebraAutomorphism:
    """Extend images of e_i, f_i, h_i to all of g through brackets, and verify."""
    rs = alg.rs
    images: list = [None] * alg.dim
    for i in rs.vertices:
        images[alg.e(rs.simple_root(i))] = _clean(e_img[i])
        images[alg.f(rs.simple_root(i))] = _clean(f_img[i])
        images[alg.h(i)] = _clean(h_img[i])
    for r in rs.positive_roots:
        if sum(r) == 1:
            continue
        for i in rs.vertices:
            rest = tuple(x - (k == i - 1) for k, x in enumerate(r))
            if rest in alg._root_idx and sum(rest) > 0:
                break
        si = rs.simple_root(i)
        for idx_of, tgt in ((alg.e, alg.e(r)), (alg.f, alg.f(r))):
            a, b = idx_of(si), idx_of(rest)
            (c, coef), = alg.bracket_basis(a, b)
            assert c == tgt
            images[tgt] = _clean({k: v / coef for k, v in alg.bracket(images[a], images[b]).items()})
    phi = AlgebraAutomorphism(alg, tuple(images), name)
    bad = phi.bracket_failures()
    if bad:
        raise ValueError(f"{name} is not a Lie algebra automorphism: first failure on {bad[0]}")
    return phi


def build_tau(alg: ChevalleyAlgebra, fd: FoldingData) -> AlgebraAutomorphism:
    rs = alg.rs
    t = {i: fd.tau[i - 1] for i in rs.vertices}
    return extend_from_generators(
        alg,
        {i: {alg.e(rs.simple_root(t[i])): 1} for i in rs.vertices},
        {i: {alg.f(rs.simple_root(t[i])): 1} for i in rs.vertices},
        {i: {alg.h(t[i]): 1} for i in rs.vertices},
        "tau",
    )


def build_phi(alg: ChevalleyAlgebra) -> AlgebraAutomorphism:
    """Cartan involution e_i -> -f_i, f_i -> -e_i, h_i -> -h_i."""
    rs = alg.rs
    return extend_from_generators(
        alg,
        {i: {alg.f(rs.simple_root(i)): -1} for i in rs.vertices},
        {i: {alg.e(rs.simple_root(i)): -1} for i in rs.vertices},
        {i: {alg.h(i): -1} for i in rs.vertices},
        "phi",
    )


def build_sigma(alg: ChevalleyAlgebra, fd: FoldingData) -> AlgebraAutomorphism:
    """sigma = tau, or tau composed with i^h on A_{2l}."""
    tau = build_tau(alg, fd)
    if not fd.is_a_even:
        return AlgebraAutomorphism(alg, tau.images, "sigma")
    imgs = []
    for a in range(alg.dim):
        c = Cyclotomic.zeta(4) ** (fd.root_h(alg.weight(a)) % 4)
        imgs.append(_clean({k: c * v for k, v in tau.images[a].items()}))
    sigma = AlgebraAutomorphism(alg, tuple(imgs), "sigma")
    bad = sigma_formula_failures(alg, fd, sigma)
    if bad:
        raise ValueError(f"sigma disagrees with the closed formula on {bad[0]}")
    return sigma


def sigma_formula_failures(alg: ChevalleyAlgebra, fd: FoldingData, sigma: AlgebraAutomorphism) -> list:
    """Compare sigma on A_{2l} with (-1)^(j-i) i^(+-alpha_ij(h)) e_{+-tau(alpha_ij)}."""
    rs = alg.rs
    n = rs.rank
    bad = []
    for r in rs.positive_roots:
        i, j = rs.type_a_name(r)
        tr = rs.type_a_root(n + 1 - j, n + 1 - i)
        for sgn, idx_of in ((1, alg.e), (-1, alg.f)):
            c = (-1) ** (j - i) * Cyclotomic.zeta(4) ** ((sgn * fd.root_h(r)) % 4)
            if sigma({idx_of(r): 1}) != _clean({idx_of(tr): c}):
                bad.append((sgn, (i, j)))
    for i in rs.vertices:
        if sigma({alg.h(i): 1}) != {alg.h(n + 1 - i): 1}:
            bad.append(("h", i))
    return bad


# ------------------------------------------------------------ current elements

class CurrentElement:
    """Finite combination of x (x) t^s with x a basis symbol of g."""

    __slots__ = ("alg", "tag", "terms")

    def __init__(self, alg: ChevalleyAlgebra, tag: str, terms: Mapping | None = None):
        if tag not in (G_T, G_T_SIGMA, CG):
            raise ValueError(f"unknown algebra tag {tag!r}")
        self.alg = alg
        self.tag = tag
        self.terms = _clean(terms or {})
        if tag != CG and any(s < 0 for _, s in self.terms):
            raise ValueError("negative t-exponent outside the hyperspecial algebra")

    @classmethod
    def from_g(cls, alg, tag, x: Mapping, s: int) -> "CurrentElement":
        return cls(alg, tag, {(a, s): c for a, c in x.items()})

    def _check(self, other):
        if not isinstance(other, CurrentElement):
            raise TypeError("expected a CurrentElement")
        if other.tag != self.tag:
            raise ValueError(f"algebra tag mismatch: {self.tag} vs {other.tag}")

    def __add__(self, other):
        self._check(other)
        return CurrentElement(self.alg, self.tag, vadd(dict(self.terms), other.terms))

    def __sub__(self, other):
        self._check(other)
        return CurrentElement(self.alg, self.tag, vadd(dict(self.terms), other.terms, -1))

    def __neg__(self):
        return CurrentElement(self.alg, self.tag, {k: -v for k, v in self.terms.items()})

    def scale(self, c) -> "CurrentElement":
        return CurrentElement(self.alg, self.tag, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return isinstance(other, CurrentElement) and self.tag == other.tag and self.terms == other.terms

    def __hash__(self):
        return hash((self.tag, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def retag(self, tag: str) -> "CurrentElement":
        return CurrentElement(self.alg, tag, self.terms)

    def degrees(self) -> set:
        return {s for _, s in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("element is not homogeneous in t")
        return ds.pop()

    def component(self, s: int) -> dict:
        return {a: c for (a, t), c in self.terms.items() if t == s}

    def __repr__(self):
        return f"CurrentElement({self.tag}, {format_element(self)!r})"


def bracket(x: CurrentElement, y: CurrentElement) -> CurrentElement:
    """[x t^a, y t^b] = [x, y] t^(a+b); the central term is not represented."""
    x._check(y)
    alg = x.alg
    out: dict = {}
    for (a, s), ca in x.terms.items():
        for (b, t), cb in y.terms.items():
            for c, v in alg.table.get((a, b), ()):
                key = (c, s + t)
                out[key] = out.get(key, 0) + ca * cb * v
    return CurrentElement(alg, x.tag, out)


def format_element(x: CurrentElement) -> str:
    if not x.terms:
        return "0"
    parts = []
    for (a, s), c in sorted(x.terms.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        parts.append(f"{format_scalar(c)}*{x.alg.label(a)}*t^{s}")
    return " + ".join(parts)


_TERM_RE = re.compile(r"^(.*?)\*?([efh]\[[\d,\s]+\])\*t\^(-?\d+)$")


def parse_element(alg: ChevalleyAlgebra, text: str, tag: str = G_T) -> CurrentElement:
    text = text.strip()
    if text == "0":
        return CurrentElement(alg, tag, {})
    terms: dict = {}
    # split on top-level " + " only; coefficients never contain spaces
    for chunk in text.split(" + "):
        m = _TERM_RE.match(chunk.strip())
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        coef = parse_scalar(m.group(1)) if m.group(1) else Fraction(1)
        key = (alg.parse_label(m.group(2)), int(m.group(3)))
        terms[key] = terms.get(key, 0) + coef
    return CurrentElement(alg, tag, terms)


# ------------------------------------------------------------ current algebras

class CurrentAlgebra:
    """g[t] (fd is None) or the fixed points g[t]^sigma with eps = zeta_m^eps_sign.

    The basis of degree d is the list of normalized sigma-averages of
    e_alpha t^d and h_i t^d over orbit representatives, with zero averages
    dropped.  Normalized means the coefficient of the representative is 1.
    """

    def __init__(self, alg: ChevalleyAlgebra, fd: FoldingData | None = None, eps_sign: int = 1):
        if eps_sign not in (1, -1):
            raise ValueError("eps_sign must be +1 or -1")
        self.alg = alg
        self.fd = fd
        self.eps_sign = eps_sign
        self.twisted = fd is not None
        self.m = fd.m if fd else 1
        self.tag = G_T_SIGMA if fd else G_T
        self.sigma = build_sigma(alg, fd) if fd else identity_automorphism(alg)
        self._basis: dict = {}
        self._labels: dict = {}

    @cached_property
    def sigma_powers(self) -> list:
        out = [identity_automorphism(self.alg)]
        for _ in range(self.m - 1):
            out.append(self.sigma.compose(out[-1]))
        return out

    def eps_power(self, k: int) -> Cyclotomic:
        return zeta_power(self.m, self.eps_sign * k) if self.m > 1 else Cyclotomic(1, (1,))

    def sigma_ext(self, x: CurrentElement) -> CurrentElement:
        """sigma(x t^j) = eps^(-j) sigma(x) t^j."""
        out: dict = {}
        for (a, s), c in x.terms.items():
            f = self.eps_power(-s) * c
            for b, v in self.sigma.images[a].items():
                out[(b, s)] = out.get((b, s), 0) + f * v
        return CurrentElement(self.alg, x.tag, out)

    def is_fixed(self, x: CurrentElement) -> bool:
        return self.sigma_ext(x).terms == x.terms

    def average(self, idx: int, d: int) -> CurrentElement | None:
        """Normalized projection of basis symbol idx times t^d to the fixed points."""
        out: dict = {}
        for k, sk in enumerate(self.sigma_powers):
            f = self.eps_power(-d * k)
            for b, v in sk.images[idx].items():
                out[(b, d)] = out.get((b, d), 0) + f * v
        out = _clean(out)
        lead = out.get((idx, d))
        if not lead:
            return None
        inv = 1 / lead if not isinstance(lead, Cyclotomic) else lead.inverse()
        return CurrentElement(self.alg, self.tag, {k: v * inv for k, v in out.items()})

    @cached_property
    def _reps(self) -> list:
        """Orbit representatives (basis indices) in output order: e, f, h."""
        alg = self.alg
        if not self.twisted:
            return list(range(alg.dim))
        fd = self.fd
        pos = [alg.e(o[0]) for o in fd.root_orbits]
        pos.sort()
        neg = [alg.f(alg.roots[a]) for a in pos]
        hs = [alg.h(fib[0]) for fib in fd.fibers]
        return pos + neg + hs

    def basis(self, d: int) -> list:
        if d < 0:
            raise ValueError("degree must be nonnegative")
        if d not in self._basis:
            els, labels = [], []
            for idx in self._reps:
                x = self.average(idx, d) if self.twisted else CurrentElement(self.alg, G_T, {(idx, d): 1})
                if x is not None:
                    els.append(x)
                    labels.append((idx, d))
            self._basis[d] = els
            self._labels[d] = labels
        return self._basis[d]

    def labels(self, d: int) -> list:
        self.basis(d)
        return self._labels[d]

    def element(self, root, d: int, negative: bool = False) -> CurrentElement | None:
        """e_{+-alpha, d}: the normalized fixed element led by e_{+-alpha} t^d."""
        idx = self.alg.f(root) if negative else self.alg.e(root)
        if not self.twisted:
            return CurrentElement(self.alg, G_T, {(idx, d): 1})
        return self.average(idx, d)

    def weight_of(self, idx: int) -> tuple:
        """Weight of a basis symbol in the coordinates used by modules."""
        w = self.alg.rs.root_weight(self.alg.weight(idx))
        return self.fd.restrict(w) if self.twisted else w

    def element_weight(self, x: CurrentElement) -> tuple:
        ws = {self.weight_of(a) for a, _ in x.terms}
        if len(ws) != 1:
            raise ValueError("element is not a weight vector")
        return ws.pop()

    @property
    def weight_rank(self) -> int:
        return self.fd.folded_rank if self.twisted else self.alg.n

    def eigenspace_dim(self, j: int) -> int:
        """dim of {x in g : sigma(x) = eps^j x}."""
        ech = Echelon()
        for idx in range(self.alg.dim):
            x = self.average(idx, j)
            if x is not None:
                ech.add({a: c for (a, _), c in x.terms.items()})
        return len(ech)

    def coordinates(self, x: CurrentElement) -> dict:
        """Coordinates of a homogeneous element in basis(d); raises if outside the span.

        Basis elements are supported on distinct sigma-orbits of basis symbols
        and are normalized at their representative, so the coordinate of each
        is the coefficient of its representative.
        """
        if not x.terms:
            return {}
        d = x.degree
        coords = {}
        rest = dict(x.terms)
        for k, (idx, _) in enumerate(self.labels(d)):
            c = x.terms.get((idx, d))
            if c:
                coords[k] = c
                vadd(rest, self.basis(d)[k].terms, -c)
        if _clean(rest):
            raise ValueError("element is not in the span of the basis")
        return coords

    def generated_in_degree_one(self) -> bool:
        """True if g_r = [g_1, g_{r-1}] for all residues r, so g[t]^sigma is generated in degrees 0 and 1."""
        if self.m == 1:
            return True
        for r in range(self.m):
            target = self.eigenspace_dim(r)
            ech = Echelon()
            for x in self.basis(1):
                for y in self.basis((r - 1) % self.m):
                    z = bracket(x, y)
                    ech.add({a: c for (a, _), c in z.terms.items()})
            if len(ech) != target:
                return False
        return True



def twisted_basis(alg: ChevalleyAlgebra, fd: FoldingData, d: int, eps_sign: int = 1) -> list:
    return CurrentAlgebra(alg, fd, eps_sign).basis(d)


# ------------------------------------------------------------ type A_{2l} families

def _a_even_roots(fd: FoldingData):
    rs = fd.parent
    ell = fd.ell
    tau_name = lambda i, j: (2 * ell + 1 - j, 2 * ell + 1 - i)
    return rs, ell, tau_name


def literal_twisted_family(ca: CurrentAlgebra, d: int) -> list:
    """The five listed basis families of g[t]^sigma on A_{2l} in degree d.

    Returns (family, sign, name, element) with name the (i, j) of the root or
    the vertex i for family 5.  The signs are those for eps = zeta_4.
    """
    fd = ca.fd
    if fd is None or not fd.is_a_even:
        raise ValueError("literal families exist only for A_{2l}")
    alg = ca.alg
    rs, ell, tn = _a_even_roots(fd)
    out = []

    def pair(i, j, s, c, deg):
        r, tr = rs.type_a_root(i, j), rs.type_a_root(*tn(i, j))
        idx = alg.e if s > 0 else alg.f
        terms = {(idx(r), deg): 1}
        terms[(idx(tr), deg)] = terms.get((idx(tr), deg), 0) + c
        return CurrentElement(alg, G_T_SIGMA, terms)

    if d % 2 == 0:
        k = d // 2
        for i in range(1, ell):
            for j in range(i, ell):
                for s in (1, -1):
                    out.append((1, s, (i, j), pair(i, j, s, (-1) ** (i + j + k), d)))
        for i in range(1, ell):
            for j in range(i, ell):
                for s in (1, -1):
                    out.append((2, s, (i, 2 * ell - j), pair(i, 2 * ell - j, s, -((-1) ** (i + j + k)), d)))
    if d % 4 == 0:
        for i in range(1, ell + 1):
            r = rs.type_a_root(i, 2 * ell + 1 - i)
            for s in (1, -1):
                idx = alg.e(r) if s > 0 else alg.f(r)
                out.append((3, s, (i, 2 * ell + 1 - i), CurrentElement(alg, G_T_SIGMA, {(idx, d): 1})))
    if d % 2 == 1:
        k = (d - 1) // 2
        for i in range(1, ell + 1):
            for s in (1, -1):
                out.append((4, s, (i, ell), pair(i, ell, s, s * (-1) ** (i + ell + k), d)))
    if d % 2 == 0:
        k = d // 2
        for i in range(1, ell + 1):
            terms = {(alg.h(i), d): 1, (alg.h(2 * ell + 1 - i), d): (-1) ** k}
            out.append((5, 0, i, CurrentElement(alg, G_T_SIGMA, terms)))
    return out


class Hyperspecial:
    """The hyperspecial current algebra inside g[t, t^-1]^tau on A_{2l} and the map eta."""

    def __init__(self, alg: ChevalleyAlgebra, fd: FoldingData):
        if not fd.is_a_even:
            raise ValueError("the hyperspecial algebra is defined for A_{2l}")
        self.alg = alg
        self.fd = fd
        self.tau = build_tau(alg, fd)
        self.phi = build_phi(alg)

    def _pair(self, i, j, s, c, deg) -> dict:
        rs, ell, tn = _a_even_roots(self.fd)
        alg = self.alg
        idx = alg.e if s > 0 else alg.f
        r, tr = rs.type_a_root(i, j), rs.type_a_root(*tn(i, j))
        return {(idx(r), deg): 1, (idx(tr), deg): c}

    def basis(self, k: int) -> list:
        """Listed basis elements with index k, as (family, sign, name, element)."""
        alg, fd = self.alg, self.fd
        rs, ell, tn = _a_even_roots(fd)
        out = []
        for i in range(1, ell):
            for j in range(i, ell):
                for s in (1, -1):
                    out.append((1, s, (i, j), CurrentElement(alg, CG, self._pair(i, j, s, (-1) ** (i + j + k), k))))
        for i in range(1, ell):
            for j in range(i, ell):
                for s in (1, -1):
                    q = k + s
                    out.append((2, s, (i, 2 * ell - j), CurrentElement(alg, CG, self._pair(i, 2 * ell - j, s, (-1) ** (i + j + q), q))))
        for i in range(1, ell + 1):
            r = rs.type_a_root(i, 2 * ell + 1 - i)
            for s in (1, -1):
                idx = alg.e(r) if s > 0 else alg.f(r)
                out.append((3, s, (i, 2 * ell + 1 - i), CurrentElement(alg, CG, {(idx, 2 * k + s): 1})))
        for i in range(1, ell + 1):
            for s in (1, -1):
                q = (2 * k + 1 + s) // 2
                out.append((4, s, (i, ell), CurrentElement(alg, CG, self._pair(i, ell, s, (-1) ** (ell + i + q), q))))
        for i in range(1, ell + 1):
            terms = {(alg.h(i), k): 1, (alg.h(2 * ell + 1 - i), k): (-1) ** k}
            out.append((5, 0, i, CurrentElement(alg, CG, terms)))
        return out

    @staticmethod
    def image_degree(family: int, k: int) -> int:
        return {1: 2 * k, 2: 2 * k, 3: 4 * k, 4: 2 * k + 1, 5: 2 * k}[family]

    def is_tau_fixed(self, x: CurrentElement) -> bool:
        out: dict = {}
        for (a, s), c in x.terms.items():
            for b, v in self.tau.images[a].items():
                out[(b, s)] = out.get((b, s), 0) + (-1) ** (s % 2) * c * v
        return _clean(out) == x.terms

    def eta(self, x: CurrentElement) -> CurrentElement:
        """eta = eta_k after eta_c: x[t^j] -> phi(x)[t^(2j+s)] with s the ad h eigenvalue of phi(x)."""
        if x.tag != CG:
            raise ValueError("eta takes an element of the hyperspecial algebra")
        if not self.is_tau_fixed(x):
            raise ValueError("input is not in the hyperspecial algebra (not tau-fixed)")
        alg, fd = self.alg, self.fd
        out: dict = {}
        for j in sorted(x.degrees()):
            y = self.phi(x.component(j))
            for b, c in y.items():
                s = fd.root_h(alg.weight(b))
                e = 2 * j + s
                if e < 0:
                    raise ValueError("input is not in the hyperspecial algebra (negative image degree)")
                out[(b, e)] = out.get((b, e), 0) + c
        return CurrentElement(alg, G_T_SIGMA, out)

    def expected_image(self, family: int, sign: int, name, k: int) -> CurrentElement:
        """Right-hand sides of the five eta identities."""
        alg, fd = self.alg, self.fd
        rs, ell, tn = _a_even_roots(fd)
        if family == 5:
            i = name
            return CurrentElement(alg, G_T_SIGMA, {(alg.h(i), 2 * k): -1, (alg.h(2 * ell + 1 - i), 2 * k): -((-1) ** k)})
        i, j = name
        if family == 3:
            r = rs.type_a_root(i, j)
            idx = alg.f(r) if sign > 0 else alg.e(r)
            return CurrentElement(alg, G_T_SIGMA, {(idx, 4 * k): -1})
        if family == 1:
            c, deg = (-1) ** (i + j + k), 2 * k
        elif family == 2:
            jj = 2 * ell - j  # name is (i, 2l - j)
            c, deg = -((-1) ** (i + jj + k)), 2 * k
        else:
            c, deg = -sign * (-1) ** (i + ell + k), 2 * k + 1
        terms = self._pair(i, j, -sign, c, deg)
        return CurrentElement(alg, G_T_SIGMA, {key: -v for key, v in terms.items()})

    def identity_failures(self, max_degree: int) -> list:
        """Check every listed identity whose image has t-degree <= max_degree."""
        bad = []
        for k in range(max_degree + 1):
            for family, sign, name, x in self.basis(k):
                if self.image_degree(family, k) > max_degree:
                    continue
                got = self.eta(x)
                want = self.expected_image(family, sign, name, k)
                if got != want:
                    bad.append((family, sign, name, k, format_element(got), format_element(want)))
        return bad

    def bracket_failures(self, pairs) -> list:
        """Pairs (x, y) of hyperspecial elements with eta([x, y]) != [eta(x), eta(y)]."""
        bad = []
        for x, y in pairs:
            if self.eta(bracket(x, y)) != bracket(self.eta(x), self.eta(y)):
                bad.append((format_element(x), format_element(y)))
        return bad
