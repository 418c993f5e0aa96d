"""Local Weyl modules and affine Demazure modules as explicit graded modules.

Untwisted Weyl modules are fusion products of evaluation modules of
fundamental representations.  Twisted Weyl modules are fibers at 0 of twisted
global modules built from the same evaluation modules.  Demazure modules are
quotients of Weyl modules by the listed relation vectors, and the twisted
ones have a second route through the fiber at 0 of a global Demazure module.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .globalmod import build_global, fiber_zero
from .lie import CurrentAlgebra, bracket
from .modcore import (GradedModule, character, cyclic_gr, quotient, restrict_twisted, shift,
                      span_closure, tensor_all, trivial_module, evaluation_module)
from .numeric import QQ, qq
from .rootdata import FoldingData, fundamental_lift


class RelationFailure(AssertionError):
    """A defining relation does not hold on a constructed generator."""


class RouteDisagreement(AssertionError):
    """Two construction routes produced different graded characters."""


@dataclass(frozen=True)
class DemazureSpec:
    fd: FoldingData | None
    level: int
    coweight: tuple
    route: str = "presentation"

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be at least 1")
        if any(x < 0 for x in self.coweight):
            raise ValueError("coweight is not dominant")
        if self.route not in ("presentation", "fiber"):
            raise ValueError(f"unknown route {self.route!r}")


@dataclass
class RelationSet:
    """Relation vectors x^power . w as (root, degree, power) triples."""

    items: list = field(default_factory=list)

    def add(self, root, degree: int, power: int):
        self.items.append((tuple(root), degree, power))

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


def _check_dominant(lam):
    if any(x < 0 for x in lam):
        raise ValueError(f"{tuple(lam)} is not dominant")


def _require_type_a(ca: CurrentAlgebra):
    if ca.alg.rs.kind != "A":
        raise ValueError("module constructions are implemented for type A")


def fundamental_list(mu) -> list:
    """Indices i, with repetition, such that mu = sum of omega_i."""
    _check_dominant(mu)
    return [i for i, a in enumerate(mu, start=1) for _ in range(a)]


def default_points(n: int) -> list:
    return [QQ(k) for k in range(1, n + 1)]


# ------------------------------------------------------------ relations

def _power_apply(M: GradedModule, x, v: dict, power: int) -> dict:
    for _ in range(power):
        if not v:
            break
        v = M.act(x, v)
    return v


def _fiber_constant(ca: CurrentAlgebra, coeffs: dict) -> list:
    """Coefficients of a sigma-fixed Cartan element on the folded simple coroots."""
    n = ca.alg.n
    a = [coeffs.get(j, 0) for j in range(1, n + 1)]
    fibers = ca.fd.fibers if ca.twisted else tuple((j,) for j in range(1, n + 1))
    out = []
    for fib in fibers:
        vals = {a[j - 1] for j in fib}
        if len(vals) != 1:
            raise AssertionError("Cartan element is not constant on fibers")
        out.append(vals.pop())
    return out


def sl2_bound(ca: CurrentAlgebra, root, mu: tuple) -> int | None:
    """mu(bar alpha^vee) for the sl_2 spanned by e_{alpha,0} and e_{-alpha,0}; None if e_{alpha,0} = 0."""
    x = ca.element(root, 0)
    y = ca.element(root, 0, negative=True)
    if x is None or y is None:
        return None
    h = bracket(x, y)
    coeffs = {ca.alg.h_vertex(idx): Fraction(str(qq(c))) for (idx, _), c in h.terms.items()}
    cs = _fiber_constant(ca, coeffs)
    alpha = ca.element_weight(x)
    a_h = sum(c * w for c, w in zip(cs, alpha))
    m_h = sum(c * w for c, w in zip(cs, mu))
    k = 2 * m_h / a_h
    if k.denominator != 1:
        raise AssertionError("non-integral sl_2 weight")
    return int(k)


def weyl_relation_failures(M: GradedModule, mu: tuple, v: dict | None = None) -> list:
    """Defining relations of the (twisted) Weyl module with lowest weight -mu checked on v."""
    ca = M.ca
    alg = ca.alg
    if v is None:
        v = {M.cyclic: QQ(1)}
    bad = []
    for d in range(M.op_bound + 1):
        for k, x in enumerate(ca.basis(d)):
            kinds = {("h" if alg.is_h(idx) else ("f" if idx >= alg.N else "e")) for idx, _ in x.terms}
            y = M.apply(d, k, v)
            if kinds == {"f"} and y:
                bad.append(("lowering", d, k))
            elif kinds == {"h"}:
                if d > 0 and y:
                    bad.append(("cartan", d, k))
                if d == 0:
                    cs = _fiber_constant(ca, {alg.h_vertex(idx): c for (idx, _), c in x.terms.items()})
                    val = -sum(qq(c) * w for c, w in zip(cs, mu))
                    if y != {j: val * c for j, c in v.items() if val}:
                        bad.append(("weight", d, k))
    for root in alg.rs.positive_roots:
        kk = sl2_bound(ca, root, mu)
        if kk is None:
            continue
        x = ca.element(root, 0)
        if _power_apply(M, x, v, kk + 1):
            bad.append(("integrable", root, kk))
    return bad


def _assert_relations(M, mu, what):
    bad = weyl_relation_failures(M, mu)
    if bad:
        raise RelationFailure(f"{what}: relations fail {bad[:3]}")


# ------------------------------------------------------------ untwisted

def weyl_module(ca: CurrentAlgebra, mu, points=None, check: bool = True) -> GradedModule:
    """W(mu) as the fusion product of V(omega_i) at distinct rational points."""
    _require_type_a(ca)
    if ca.twisted:
        raise ValueError("weyl_module builds g[t]-modules; use twisted_weyl for g[t]^sigma")
    mu = tuple(mu)
    idx = fundamental_list(mu)
    if not idx:
        return trivial_module(ca)
    pts = default_points(len(idx)) if points is None else [qq(p) for p in points]
    if len(set(pts)) != len(pts) or len(pts) != len(idx):
        raise ValueError("one distinct point per fundamental factor is needed")
    T = tensor_all([evaluation_module(ca, i, p) for i, p in zip(idx, pts)])
    W = cyclic_gr(T, label=f"W{mu}")
    if check:
        _assert_relations(W, mu, f"W{mu}")
    return W


def untwisted_relations(ca: CurrentAlgebra, c: int, lam, top: int) -> RelationSet:
    rs = ca.alg.rs
    rel = RelationSet()
    for root in rs.positive_roots:
        pair = rs.pairing(lam, root)
        for s in range(top + 1):
            rel.add(root, s, c * max(0, pair - s) + 1)
    return rel


def _relation_vectors(W: GradedModule, rel: RelationSet, exact_power: bool = True) -> list:
    ca = W.ca
    w = {W.cyclic: QQ(1)}
    out = []
    for root, s, power in rel:
        if s > W.op_bound:
            continue
        x = ca.element(root, s)
        if x is None:
            raise ValueError(f"no basis element e_({root},{s})")
        y = _power_apply(W, x, w, power)
        if y:
            out.append(y)
    return out


def demazure_untwisted(ca: CurrentAlgebra, c: int, lam, points=None) -> GradedModule:
    """D(c, lam) as W(c lam) modulo (e_alpha t^s)^(k_{alpha,s}+1) w."""
    _require_type_a(ca)
    lam = tuple(lam)
    _check_dominant(lam)
    if c < 1:
        raise ValueError("level must be at least 1")
    mu = tuple(c * x for x in lam)
    W = weyl_module(ca, mu, points)
    if not any(lam):
        return W
    rel = untwisted_relations(ca, c, lam, W.op_bound)
    S = span_closure(W, _relation_vectors(W, rel))
    D = quotient(W, S, label=f"D({c},{lam})")
    D.level = c
    return D


# ------------------------------------------------------------ twisted

def twisted_weyl(ca: CurrentAlgebra, mu_bar, lifts: list | None = None, check: bool = True,
                 method: str = "fusion") -> GradedModule:
    """W^sigma(mu_bar) from the fundamental evaluation modules of a lift of mu_bar.

    method "global" takes the fiber at 0 of their global module.  method
    "fusion" takes gr of their tensor product at the points 1, 2, ...; it is
    cyclic, satisfies the Weyl relations and has the full product dimension,
    and is much cheaper for several factors.
    """
    if method not in ("fusion", "global"):
        raise ValueError(f"unknown method {method!r}")
    _require_type_a(ca)
    if not ca.twisted:
        raise ValueError("twisted_weyl needs the twisted current algebra")
    mu_bar = tuple(mu_bar)
    _check_dominant(mu_bar)
    fd = ca.fd
    untw = CurrentAlgebra(ca.alg)
    lifts = fundamental_lift(fd, mu_bar) if lifts is None else [tuple(x) for x in lifts]
    if not lifts:
        return trivial_module(ca)
    total = tuple(sum(col) for col in zip(*lifts))
    if fd.restrict(total) != mu_bar:
        raise ValueError("lifts do not restrict to mu_bar")
    if method == "global":
        factors = [evaluation_module(untw, fundamental_list(mu)[0], 0) for mu in lifts]
        M = fiber_zero(build_global(ca, factors, 0)).module
    else:
        factors = [evaluation_module(untw, fundamental_list(mu)[0], p)
                   for mu, p in zip(lifts, default_points(len(lifts)))]
        M = cyclic_gr(restrict_twisted(tensor_all(factors), ca))
    M.label = f"Wsigma{mu_bar}"
    if check:
        _assert_relations(M, mu_bar, M.label)
    return M


def twisted_relations(ca: CurrentAlgebra, c: int, lam) -> RelationSet:
    """The listed generators of the kernel from W^sigma(c iota(lam_bar)) to D^sigma(c, lam_bar).

    The degree parameter is s_alpha = (lam, alpha_bar^vee): the pairing of the
    weight divided by the level, as for untwisted level-c Demazure modules.
    """
    fd = ca.fd
    rs = fd.parent
    rel = RelationSet()
    if not fd.is_a_even:
        for root in fd.long_roots:
            rel.add(root, fd.m * fd.orbit_coroot_pairing(lam, root), 1)
        for root in fd.short_roots:
            rel.add(root, fd.orbit_coroot_pairing(lam, root), 1)
        return rel
    ell = fd.ell
    for i in range(1, ell):
        root = rs.type_a_root(i, 2 * ell + 1 - i)
        rel.add(root, 4 * fd.orbit_coroot_pairing(lam, root), 1)
    for i in range(1, ell + 1):
        root = rs.type_a_root(i, ell)
        rel.add(root, 2 * fd.orbit_coroot_pairing(lam, root) + 1, 1)
    for i in range(1, ell):
        for j in range(i, ell):
            for root in (rs.type_a_root(i, j), rs.type_a_root(i, 2 * ell - j)):
                rel.add(root, 2 * fd.orbit_coroot_pairing(lam, root), 1)
    return rel


def twisted_relation_failures(M: GradedModule, c: int, lam) -> list:
    """Listed relations (root, degree) whose vector is nonzero on the generator of M."""
    ca = M.ca
    w = {M.cyclic: QQ(1)}
    bad = []
    for root, s, power in twisted_relations(ca, c, lam):
        if s > M.op_bound:
            continue
        x = ca.element(root, s)
        if x is not None and _power_apply(M, x, w, power):
            bad.append((root, s))
    return bad


def _demazure_twisted_presentation(ca: CurrentAlgebra, c: int, lam, weyl: GradedModule | None = None) -> GradedModule:
    mu_bar = tuple(c * x for x in ca.fd.restrict(lam))
    W = twisted_weyl(ca, mu_bar) if weyl is None else weyl
    if not any(lam):
        return W
    S = span_closure(W, _relation_vectors(W, twisted_relations(ca, c, lam)))
    D = quotient(W, S, label=f"Dsigma({c},{lam})")
    D.level = c
    return D


def split_coweight(lam) -> list:
    """Fundamental splitting lam = sum of omega_j^vee."""
    n = len(lam)
    return [tuple(1 if k == j else 0 for k in range(1, n + 1)) for j in fundamental_list(lam)]


def global_demazure(ca: CurrentAlgebra, c: int, lams: list, N: int = 0, points=None):
    """D^sigma(c, lams) inside the tensor product of D(c, lam_i)[z_i]."""
    untw = CurrentAlgebra(ca.alg)
    factors = [demazure_untwisted(untw, c, lam, points) for lam in lams]
    return build_global(ca, factors, N)


def _demazure_twisted_fiber(ca: CurrentAlgebra, c: int, lam, lams: list | None = None) -> GradedModule:
    lams = split_coweight(lam) if lams is None else [tuple(x) for x in lams]
    if not lams:
        return trivial_module(ca)
    G = global_demazure(ca, c, lams)
    M = fiber_zero(G).module
    M.label = f"Dsigma({c},{tuple(lam)})"
    M.level = c
    return M


def demazure_twisted(ca: CurrentAlgebra, c: int, lam, route: str = "presentation",
                     lams: list | None = None, cross_check: bool = False,
                     weyl: GradedModule | None = None) -> GradedModule:
    """D^sigma(c, lam_bar) by the presentation route or the fiber route.

    With cross_check the other route is built too and the graded characters
    must agree.  A prebuilt W^sigma(c iota(lam_bar)) may be passed as weyl.
    """
    _require_type_a(ca)
    if not ca.twisted:
        raise ValueError("demazure_twisted needs the twisted current algebra")
    spec = DemazureSpec(ca.fd, c, tuple(lam), route)
    if route == "presentation":
        M = _demazure_twisted_presentation(ca, c, spec.coweight, weyl)
    else:
        M = _demazure_twisted_fiber(ca, c, spec.coweight, lams)
    if cross_check:
        other = (_demazure_twisted_fiber(ca, c, spec.coweight, lams) if route == "presentation"
                 else _demazure_twisted_presentation(ca, c, spec.coweight, weyl))
        if character(M) != character(other):
            raise RouteDisagreement(f"routes disagree for c={c}, lambda={tuple(lam)}")
    return M


def fusion_module(ca: CurrentAlgebra, c: int, lams: list, points) -> GradedModule:
    """gr of the tensor product of shifted D(c, lam_i), restricted to ca when twisted."""
    untw = CurrentAlgebra(ca.alg) if ca.twisted else ca
    pts = [qq(p) for p in points]
    if len(pts) != len(lams):
        raise ValueError("one point per coweight is needed")
    m = ca.m
    powers = [p ** m for p in pts]
    if any(p == 0 for p in pts) or len(set(powers)) != len(powers):
        raise ValueError("points must have distinct nonzero m-th powers")
    mods = [shift(demazure_untwisted(untw, c, lam), p) for lam, p in zip(lams, pts)]
    T = tensor_all(mods)
    if ca.twisted:
        T = restrict_twisted(T, ca)
    return cyclic_gr(T, label="fusion")


def graded_dims(M: GradedModule) -> Counter:
    return Counter(M.grades)
