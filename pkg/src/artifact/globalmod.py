"""Global modules inside tensor products of polynomial modules V_i[z_i].

An ambient vector is a dict keyed by (b, e): b is a tuple of factor basis
indices and e a tuple of z-exponents.  The total degree of a key is the sum of
the factor grades plus |e|, and every generator x t^s raises it by exactly s,
so the global module splits into finite pieces G_d that are computed exactly
(no truncation inside a computed degree).  The cutoff N is the largest
degree computed.

The right action of the weight algebra is multiplication by polynomials in z.
Fibers at a point p are quotients G / (m_p G) where m_p is the maximal ideal of
p in the weight algebra; at p = 0 this is done degree by degree, elsewhere on
G_{<=D} with a stabilization check in D.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .lie import CurrentAlgebra, CurrentElement
from .modcore import (GradedModule, restrict_twisted, shift, span_closure, submodule, tensor_all)
from .numeric import QQ, Echelon, qq, vadd


class CutoffError(RuntimeError):
    """The requested cutoff is too small for a result to stabilize."""


# ------------------------------------------------------------ polynomials

def poly_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for a, x in f.items():
        for b, y in g.items():
            e = tuple(i + j for i, j in zip(a, b))
            v = out.get(e, 0) + x * y
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def poly_eval(f: dict, p) -> object:
    total = QQ(0)
    for e, c in f.items():
        term = c
        for pi, ei in zip(p, e):
            if ei:
                term *= pi ** ei
        total += term
    return total


def poly_degree(f: dict) -> int:
    return max((sum(e) for e in f), default=0)


def format_poly(f: dict, var: str = "z") -> str:
    if not f:
        return "0"
    parts = []
    for e, c in sorted(f.items(), reverse=True):
        mono = "*".join(f"{var}{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


# ------------------------------------------------------------ ambient

class PolyModule:
    """The g[t]-module V_1[z_1] (x) ... (x) V_n[z_n], acted on through a current algebra.

    ``ca`` may be g[t] itself or a twisted algebra over the same g; its basis
    elements are combinations of x t^s with x in g, and every x t^s acts by
    the binomial rule on each factor.
    """

    def __init__(self, ca: CurrentAlgebra, factors: list):
        if not factors:
            raise ValueError("at least one factor is needed")
        for V in factors:
            if V.ca.twisted or V.ca.alg is not ca.alg:
                raise ValueError("factors must be g[t]-modules for the same g")
            if not V.graded or V.cyclic is None:
                raise ValueError("factors must be graded with a known cyclic vector")
        self.ca = ca
        self.factors = list(factors)
        self.n = len(factors)
        self._sym: dict = {}
        self._gen: dict = {}
        self._wt: dict = {}

    def _symbol_table(self, idx: int, s: int) -> list:
        """Per factor: u -> list of (u', z-exponent, coefficient) for idx t^s."""
        key = (idx, s)
        tab = self._sym.get(key)
        if tab is None:
            tab = []
            for V in self.factors:
                rows = [dict() for _ in range(V.dim)]
                for j in range(min(s, V.op_bound) + 1):
                    coef = QQ((-1) ** (s - j) * comb(s, j))
                    M = V.op(j, idx)
                    for u, col in enumerate(M):
                        for u2, c in col.items():
                            k2 = (u2, s - j)
                            y = rows[u].get(k2, 0) + coef * c
                            if y:
                                rows[u][k2] = y
                            else:
                                rows[u].pop(k2, None)
                tab.append([[(u2, a, c) for (u2, a), c in r.items()] for r in rows])
            self._sym[key] = tab
        return tab

    def _element_table(self, x: CurrentElement) -> list:
        tab = [[dict() for _ in range(V.dim)] for V in self.factors]
        for (idx, s), c in x.terms.items():
            c = qq(c)
            for i, ftab in enumerate(self._symbol_table(idx, s)):
                for u, lst in enumerate(ftab):
                    acc = tab[i][u]
                    for u2, a, v in lst:
                        y = acc.get((u2, a), 0) + c * v
                        if y:
                            acc[(u2, a)] = y
                        else:
                            acc.pop((u2, a), None)
        return [[[(u2, a, v) for (u2, a), v in acc.items()] for acc in ftab] for ftab in tab]

    def generator_table(self, d: int, k: int) -> list:
        key = (d, k)
        tab = self._gen.get(key)
        if tab is None:
            tab = self._gen[key] = self._element_table(self.ca.basis(d)[k])
        return tab

    @staticmethod
    def _apply_table(tab: list, vec: dict) -> dict:
        out: dict = {}
        for (b, e), c in vec.items():
            for i, ftab in enumerate(tab):
                for u2, a, v in ftab[b[i]]:
                    nb = b[:i] + (u2,) + b[i + 1:]
                    ne = e[:i] + (e[i] + a,) + e[i + 1:] if a else e
                    key = (nb, ne)
                    y = out.get(key, 0) + c * v
                    if y:
                        out[key] = y
                    else:
                        out.pop(key, None)
        return out

    def apply(self, d: int, k: int, vec: dict) -> dict:
        return self._apply_table(self.generator_table(d, k), vec)

    def act(self, x: CurrentElement, vec: dict) -> dict:
        """Action of any element of g[t] (twisted or not) on an ambient vector."""
        if not x.terms:
            return {}
        return self._apply_table(self._element_table(x), vec)

    def cyclic_vector(self) -> dict:
        return {(tuple(V.cyclic for V in self.factors), (0,) * self.n): QQ(1)}

    def key_degree(self, key) -> int:
        b, e = key
        return sum(V.grades[u] for V, u in zip(self.factors, b)) + sum(e)

    def key_weight(self, key) -> tuple:
        b = key[0]
        w = self._wt.get(b)
        if w is None:
            full = [0] * self.ca.alg.n
            for V, u in zip(self.factors, b):
                for j, x in enumerate(V.weights[u]):
                    full[j] += x
            w = self.ca.fd.restrict(tuple(full)) if self.ca.twisted else tuple(full)
            self._wt[b] = w
        return w

    def vector_weight(self, vec: dict) -> tuple:
        ws = {self.key_weight(k) for k in vec}
        if len(ws) != 1:
            raise ValueError("vector is not a weight vector")
        return ws.pop()

    def multiply(self, poly: dict, vec: dict) -> dict:
        out: dict = {}
        for (b, e), c in vec.items():
            for a, x in poly.items():
                key = (b, tuple(i + j for i, j in zip(e, a)))
                y = out.get(key, 0) + c * x
                if y:
                    out[key] = y
                else:
                    out.pop(key, None)
        return out

    def evaluate(self, vec: dict, p) -> dict:
        """Specialize z -> p; keys become flattened tensor indices."""
        dims = [V.dim for V in self.factors]
        out: dict = {}
        for (b, e), c in vec.items():
            flat = 0
            for u, dm in zip(b, dims):
                flat = flat * dm + u
            term = c
            for pi, ei in zip(p, e):
                if ei:
                    term *= pi ** ei
            if term:
                y = out.get(flat, 0) + term
                if y:
                    out[flat] = y
                else:
                    out.pop(flat, None)
        return out

    def cyclic_weights(self) -> list:
        """Full g-weights of the cyclic vectors of the factors."""
        return [V.weights[V.cyclic] for V in self.factors]


def vz_action(amb: PolyModule, x: CurrentElement, vec: dict) -> dict:
    return amb.act(x, vec)


# ------------------------------------------------------------ weight algebra

def h_value(ca: CurrentAlgebra, x: CurrentElement, weight: tuple):
    """mu(h) for the Cartan part h of a homogeneous element x t^s."""
    alg = ca.alg
    total = QQ(0)
    for (idx, _), c in x.terms.items():
        if not alg.is_h(idx):
            raise ValueError("element is not in h[t]")
        total += qq(c) * weight[alg.h_vertex(idx) - 1]
    return total


def cartan_elements(ca: CurrentAlgebra, d: int) -> list:
    return [x for x in ca.basis(d) if all(ca.alg.is_h(idx) for idx, _ in x.terms)]


@dataclass
class WeightAlgebra:
    """Subalgebra of Q[z_1..z_n] generated by sum_i mu_i(h) z_i^d over h t^d in the current algebra."""

    ca: CurrentAlgebra
    weights: list
    N: int
    generators: list = field(default_factory=list)  # (degree, poly) minimal generators
    spaces: list = field(default_factory=list)  # Echelon per degree

    def __post_init__(self):
        n = len(self.weights)
        const = Echelon()
        const.add({(0,) * n: QQ(1)})
        self.spaces = [const]
        target, self.N = self.N, 0
        self.extend(target)

    def extend(self, N: int) -> "WeightAlgebra":
        """Grow spaces and generators through degree N."""
        for d in range(self.N + 1, N + 1):
            ech = Echelon()
            ech.add_many([poly_mul(g, r) for e, g in self.generators if e <= d for r in self.spaces[d - e].rows])
            raw = list(self.raw(d))
            for poly, row in zip(raw, ech.add_many(raw)):
                if row is not None:
                    self.generators.append((d, poly))
            self.spaces.append(ech)
        self.N = max(self.N, N)
        return self

    @property
    def n(self) -> int:
        return len(self.weights)

    def raw(self, d: int) -> list:
        out = []
        for x in cartan_elements(self.ca, d):
            poly = {}
            for i, mu in enumerate(self.weights):
                c = h_value(self.ca, x, mu)
                if c:
                    e = tuple(d if j == i else 0 for j in range(self.n))
                    poly[e] = c
            if poly:
                out.append(poly)
        return out

    @property
    def hilbert(self) -> list:
        return [len(s) for s in self.spaces]

    def contains(self, poly: dict) -> bool:
        d = poly_degree(poly)
        self.extend(d)
        return self.spaces[d].contains(poly)


def build_weight_algebra(ca: CurrentAlgebra, weights: list, N: int) -> WeightAlgebra:
    return WeightAlgebra(ca, [tuple(w) for w in weights], N)


def polynomial_hilbert(grades: list, N: int) -> list:
    """Coefficients of prod 1/(1-q^g) up to q^N."""
    out = [1] + [0] * N
    for g in grades:
        for d in range(g, N + 1):
            out[d] += out[d - g]
    return out


def series_mul(a: list, b: list, N: int) -> list:
    return [sum(a[i] * b[d - i] for i in range(d + 1) if i < len(a) and d - i < len(b)) for d in range(N + 1)]


# ------------------------------------------------------------ P_{i,r}

def h_even(ca: CurrentAlgebra, i: int, k: int) -> CurrentElement:
    """h_i t^{2k} + (-1)^k h_{2l+1-i} t^{2k} for A_{2l}."""
    fd = ca.fd
    if fd is None or not fd.is_a_even:
        raise ValueError("needs an A_{2l} folding")
    alg = ca.alg
    j = fd.parent.rank + 1 - i
    x = CurrentElement(alg, ca.tag, {(alg.h(i), 2 * k): 1, (alg.h(j), 2 * k): (-1) ** k})
    if not ca.is_fixed(x):
        raise AssertionError("h_{i,2k} is not sigma-fixed")
    return x


def p_ir_vector(amb: PolyModule, i: int, r: int, vec: dict | None = None) -> dict:
    """P_{i,r} applied to vec (default: the cyclic vector), by the recursion."""
    vec = amb.cyclic_vector() if vec is None else vec
    memo = {0: vec}
    for rr in range(1, r + 1):
        acc: dict = {}
        for s in range(rr):
            vadd(acc, amb.act(h_even(amb.ca, i, s + 1), memo[rr - s - 1]))
        memo[rr] = {k: c / rr for k, c in acc.items()}
    return memo[r]


def f_ir(fd, mus: list, i: int, r: int) -> dict:
    """Elementary symmetric polynomial of degree r in (delta_k z_k)^2 over k in K_i."""
    n = len(mus)
    j = fd.parent.rank + 1 - i
    K, sq = [], {}
    for k, mu in enumerate(mus):
        nz = [a for a, x in enumerate(mu, start=1) if x]
        if nz == [i] and mu[i - 1] == 1:
            K.append(k)
            sq[k] = 1
        elif nz == [j] and mu[j - 1] == 1:
            K.append(k)
            sq[k] = -1  # delta_k = sqrt(-1)
    out: dict = {}
    for sub in combinations(K, r):
        e = tuple(2 if k in sub else 0 for k in range(n))
        c = QQ(1)
        for k in sub:
            c *= sq[k]
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def p_ir_action(amb: PolyModule, i: int, r: int) -> tuple:
    """Return (P_{i,r} w, f_{i,r}); raises if P_{i,r} w differs from (-1)^r f_{i,r} w.

    The sign comes from the lowest weight convention: the cyclic vectors have
    weights -mu_k, so each h_{i,2s} contributes a factor -1.
    """
    fd = amb.ca.fd
    mus = [tuple(-x for x in w) for w in amb.cyclic_weights()]
    got = p_ir_vector(amb, i, r)
    f = f_ir(fd, mus, i, r)
    sign = QQ((-1) ** r)
    want = amb.multiply({e: sign * c for e, c in f.items()}, amb.cyclic_vector())
    if got != want:
        raise AssertionError(f"P_{{{i},{r}}} w does not match f_{{{i},{r}}} w")
    return got, f


# ------------------------------------------------------------ global module

def add_by_weight(blocks: dict, items: list) -> list:
    """Insert (weight, vector) pairs into per-weight echelons; return (weight, row index, row) for new rows in order."""
    groups: dict = {}
    for n, (wt, _) in enumerate(items):
        groups.setdefault(wt, []).append(n)
    found = []
    for wt, idx in groups.items():
        ech = blocks.setdefault(wt, Echelon())
        i = len(ech)
        for n, row in zip(idx, ech.add_many([items[n][1] for n in idx])):
            if row is not None:
                found.append((n, wt, i, row))
                i += 1
    found.sort(key=lambda t: t[0])
    return [(wt, i, row) for _, wt, i, row in found]

class GlobalModule:
    """U(a).w inside the ambient, spanned degree by degree."""

    def __init__(self, amb: PolyModule, N: int = 0):
        self.amb = amb
        self.ca = amb.ca
        self.levels: list = []  # levels[d]: weight -> Echelon
        self._one = self.ca.generated_in_degree_one()
        self._algebra: WeightAlgebra | None = None
        self.extend(N)

    @property
    def cutoff(self) -> int:
        return len(self.levels) - 1

    def _close0(self, level: dict, frontier: list):
        gens = [(0, k) for k in range(len(self.ca.basis(0)))]
        while frontier:
            ys = [self.amb.apply(*g, r) for r in frontier for g in gens]
            frontier = [row for _, _, row in self._insert(level, ys)]

    def _insert(self, level: dict, ys: list) -> list:
        return add_by_weight(level, [(self.amb.vector_weight(y), y) for y in ys if y])

    def extend(self, N: int):
        while self.cutoff < N:
            d = self.cutoff + 1
            level: dict = {}
            if d == 0:
                ys = [self.amb.cyclic_vector()]
            else:
                smax = 1 if self._one else d
                ys = [self.amb.apply(s, k, r) for s in range(1, smax + 1) for _, r in self.rows(d - s)
                      for k in range(len(self.ca.basis(s)))]
            frontier = [row for _, _, row in self._insert(level, ys)]
            self._close0(level, frontier)
            self.levels.append(level)
        return self

    def rows(self, d: int) -> list:
        self.extend(d)
        lev = self.levels[d]
        return [(wt, r) for wt in sorted(lev) for r in lev[wt].rows]

    def dim(self, d: int) -> int:
        self.extend(d)
        return sum(len(e) for e in self.levels[d].values())

    def dims(self, N: int | None = None) -> list:
        N = self.cutoff if N is None else N
        return [self.dim(d) for d in range(N + 1)]

    def character(self, d: int) -> Counter:
        self.extend(d)
        return Counter({wt: len(e) for wt, e in self.levels[d].items() if len(e)})

    def graded_character(self, N: int | None = None) -> Counter:
        N = self.cutoff if N is None else N
        out = Counter()
        for d in range(N + 1):
            for wt, c in self.character(d).items():
                out[(wt, d)] += c
        return out

    def contains(self, vec: dict) -> bool:
        if not vec:
            return True
        d = self.amb.key_degree(next(iter(vec)))
        self.extend(d)
        ech = self.levels[d].get(self.amb.vector_weight(vec))
        return ech is not None and ech.contains(vec)

    def weight_algebra(self, N: int | None = None) -> WeightAlgebra:
        N = self.cutoff if N is None else N
        if self._algebra is None:
            self._algebra = build_weight_algebra(self.ca, self.amb.cyclic_weights(), N)
        return self._algebra.extend(N)

    def stability_failures(self, N: int) -> list:
        """(generator degree, d) pairs where g G_d is not inside G_{d+deg g}."""
        A = self.weight_algebra(N)
        bad = []
        for e, g in A.generators:
            for d in range(0, N - e + 1):
                for _, r in self.rows(d):
                    if not self.contains(self.amb.multiply(g, r)):
                        bad.append((e, d))
                        break
        return bad


def build_global(ca: CurrentAlgebra, factors: list, N: int) -> GlobalModule:
    return GlobalModule(PolyModule(ca, factors), N)


# ------------------------------------------------------------ fibers

def classify_points(points, m: int) -> str:
    p = [qq(x) for x in points]
    if all(x == 0 for x in p):
        return "zero"
    powers = [x ** m for x in p]
    if all(x != 0 for x in p) and len(set(powers)) == len(powers):
        return "generic"
    return "collided"


@dataclass
class Fiber:
    points: tuple
    kind: str
    cutoffs: tuple
    dims: tuple
    character: Counter  # (weight, grade) at zero, weight -> mult otherwise
    module: GradedModule | None = None

    @property
    def dim(self) -> int:
        return self.dims[-1]

    @property
    def stable(self) -> bool:
        return len(set(self.dims)) == 1

    def ungraded_character(self) -> Counter:
        if self.kind != "zero":
            return Counter(self.character)
        out = Counter()
        for (w, _), c in self.character.items():
            out[w] += c
        return out


def _nakayama(G: GlobalModule, max_degree: int):
    """Per degree: (echelon with m G first, number of m G rows, complement reps) until the quotient vanishes."""
    out = []
    for d in range(max_degree + 1):
        A = G.weight_algebra(d)
        blocks: dict = {}
        ys = [G.amb.multiply(g, r) for e, g in A.generators if e <= d for _, r in G.rows(d - e)]
        add_by_weight(blocks, [(G.amb.vector_weight(y), y) for y in ys])
        base = {wt: len(ech) for wt, ech in blocks.items()}
        reps = [(wt, i) for wt, i, _ in add_by_weight(blocks, G.rows(d))]
        out.append((blocks, base, reps))
        if not reps:
            return out
    raise CutoffError(f"fiber at 0 does not vanish up to degree {max_degree}")


def default_cutoff(G: GlobalModule) -> int:
    """No m consecutive degrees of a cyclic graded quotient vanish below its top."""
    total = 1
    for M in G.amb.factors:
        total *= M.dim
    return max(G.ca.m, 1) * total


def fiber_zero(G: GlobalModule, max_degree: int | None = None) -> Fiber:
    levels = _nakayama(G, default_cutoff(G) if max_degree is None else max_degree)
    top = len(levels) - 2
    order = []
    pos = {}
    for d, (_, _, reps) in enumerate(levels):
        for wt, i in reps:
            pos[(d, wt, i)] = len(order)
            order.append((d, wt, i))
    ca = G.ca

    def provider(s, k):
        cols = []
        for d, wt, i in order:
            col = {}
            if d + s <= top:
                row = levels[d][0][wt].rows[i]
                y = G.amb.apply(s, k, row)
                if y:
                    blocks, base, _ = levels[d + s]
                    wy = G.amb.vector_weight(y)
                    coords = blocks[wy].coordinates(y)
                    for j, c in coords.items():
                        if j >= base.get(wy, 0):
                            col[pos[(d + s, wy, j)]] = c
            cols.append(col)
        return cols

    weights = [wt for _, wt, _ in order]
    grades = [d for d, _, _ in order]
    w_wt = G.amb.vector_weight(G.amb.cyclic_vector())
    M = GradedModule(ca, weights, grades, provider, graded=True, support={QQ(0): top + 1},
                     label="fiber0", cyclic=pos[(0, w_wt, 0)])
    ch = Counter(zip(weights, grades))
    return Fiber(tuple(QQ(0) for _ in range(G.amb.n)), "zero", (top + 1,), (len(order),), ch, M)


def _quotient_at(G: GlobalModule, p: tuple, D: int) -> Counter:
    """Weight multiplicities of G_{<=D} / span{(g - g(p)) u : u in G_{<=D-deg g}}."""
    A = G.weight_algebra(D)
    n = G.amb.n
    blocks: dict = {}
    for e, g in A.generators:
        gp = dict(g)
        c0 = poly_eval(g, p)
        zero = (0,) * n
        y0 = gp.get(zero, 0) - c0
        if y0:
            gp[zero] = y0
        else:
            gp.pop(zero, None)
        add_by_weight(blocks, [(wt, G.amb.multiply(gp, r)) for d in range(0, D - e + 1) for wt, r in G.rows(d)])
    ch = Counter()
    for d in range(D + 1):
        for wt, _, _ in add_by_weight(blocks, G.rows(d)):
            ch[wt] += 1
    return ch


def evaluation_image(G: GlobalModule, p: tuple) -> GradedModule:
    """Cyclic submodule of (x) V_{i,p_i} generated by the tensor of cyclic vectors."""
    amb = G.amb
    mods = [shift(V, pi) for V, pi in zip(amb.factors, p)]
    T = tensor_all(mods)
    if G.ca.twisted:
        T = restrict_twisted(T, G.ca)
    w = amb.evaluate(amb.cyclic_vector(), p)
    S = span_closure(T, [w])
    M = submodule(T, S, label="fiber")
    M.cyclic = None
    return M


def fiber(G: GlobalModule, points, *, extra: int | None = None, max_degree: int | None = None) -> Fiber:
    """Fiber of G at a rational point.

    At 0 the graded Nakayama quotient is computed exactly.  Elsewhere the
    quotient of G_{<=D} is computed at D = top grade of the zero fiber and at
    D + extra; both must agree.  Generic points also carry the evaluation image
    module.
    """
    p = tuple(qq(x) for x in points)
    if len(p) != G.amb.n:
        raise ValueError("one point per factor is needed")
    kind = classify_points(p, G.ca.m)
    if kind == "zero":
        return fiber_zero(G, max_degree)
    top = fiber_zero(G, max_degree).cutoffs[0] - 1
    extra = G.ca.m if extra is None else extra
    D1, D2 = top, top + extra
    ch1 = _quotient_at(G, p, D1)
    ch2 = _quotient_at(G, p, D2)
    dims = (sum(ch1.values()), sum(ch2.values()))
    if ch1 != ch2:
        raise CutoffError(f"fiber at {p} not stable between cutoffs {D1} and {D2}: {dims}")
    module = evaluation_image(G, p) if kind == "generic" else None
    return Fiber(p, kind, (D1, D2), dims, ch2, module)


# ------------------------------------------------------------ checks

@dataclass
class Report:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


def freeness_check(G: GlobalModule, N: int, fiber0: Fiber | None = None, points: list | None = None) -> Report:
    """ch_q G = ch_q(fiber at 0) * Hilb(weight algebra), weight by weight, up to q^N.

    Fiber dimensions at the sampled points must all equal the dimension at 0.
    """
    f0 = fiber0 or fiber_zero(G)
    sampled = {}
    for pt in points or []:
        fb = fiber(G, pt)
        sampled[",".join(str(x) for x in fb.points)] = [fb.kind, fb.dim]
    A = G.weight_algebra(N)
    hilb = A.hilbert
    failures = []
    for d in range(N + 1):
        want = Counter()
        for (wt, a), c in f0.character.items():
            if a <= d:
                want[wt] += c * hilb[d - a]
        got = G.character(d)
        if +want != +got:
            failures.append(d)
    constant = all(dim == f0.dim for _, dim in sampled.values())
    return Report("freeness", not failures and constant, {
        "fiber_dims": sampled,
        "cutoff": N, "global_dims": G.dims(N), "hilbert": hilb[:N + 1],
        "fiber0_q_dims": [sum(c for (_, a), c in f0.character.items() if a == d) for d in range(N + 1)],
        "failures": failures})


def points_in_partition(points, blocks: list, m: int) -> bool:
    p = [qq(x) for x in points]
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            for i in blocks[a]:
                for j in blocks[b]:
                    if p[i] ** m == p[j] ** m:
                        return False
    return True


def sub_global(G: GlobalModule, idx: list) -> GlobalModule:
    return GlobalModule(PolyModule(G.ca, [G.amb.factors[i] for i in idx]), 0)


def character_product(a: Counter, b: Counter) -> Counter:
    out = Counter()
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            out[tuple(x + y for x, y in zip(w1, w2))] += c1 * c2
    return out


def factorization_check(G: GlobalModule, blocks: list, points) -> Report:
    """Fiber at p equals the tensor product of the block fibers, as h^sigma-characters."""
    flat = sorted(i for blk in blocks for i in blk)
    if flat != list(range(G.amb.n)):
        raise ValueError("blocks must partition the factor indices")
    if not points_in_partition(points, blocks, G.ca.m):
        raise ValueError("point lies outside the open set of the partition")
    p = tuple(qq(x) for x in points)
    whole = fiber(G, p)
    prod = Counter({(0,) * G.ca.weight_rank: 1})
    dims = []
    for blk in blocks:
        Gb = sub_global(G, list(blk))
        fb = fiber(Gb, tuple(p[i] for i in blk))
        dims.append(fb.dim)
        prod = character_product(prod, fb.ungraded_character())
    ok = +prod == +whole.ungraded_character()
    return Report("factorization", ok, {"blocks": [list(b) for b in blocks], "points": [str(x) for x in p],
                                         "dim": whole.dim, "block_dims": dims})
