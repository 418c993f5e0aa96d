"""Finite-dimensional modules over current algebras with explicit action tables.

A module is a list of basis vectors tagged by (weight, grade) together with a
lazily filled table ``op(d, k)``: the matrix of the k-th basis element of
degree d of its current algebra, stored as a list of sparse columns.  All
scalars are flint rationals.

Modules over g[t] built from evaluation modules may be restricted to a
twisted algebra g[t]^sigma; afterwards only g[t]^sigma acts.

Every module records where it is supported as a set of points with
multiplicities: x (x) f acts as zero as soon as f vanishes to order K at each
point q with multiplicity K.  Dividing a monomial t^s by a polynomial in t^m
with these zeros shows that generators of degree below ``op_bound`` already
span all operators, which makes every "U(a).v" a finite computation.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable

from .lie import CurrentAlgebra, CurrentElement, bracket
from .numeric import QQ, Echelon, qq, vadd

Matrix = list  # list of sparse columns (dicts)


def mat_apply(M: Matrix, v: dict) -> dict:
    out: dict = {}
    for j, c in v.items():
        col = M[j]
        if col:
            vadd(out, col, c)
    return out


def mat_combine(pairs: Iterable, dim: int) -> Matrix:
    """sum c * M over (c, M) pairs."""
    out = [dict() for _ in range(dim)]
    for c, M in pairs:
        if not c:
            continue
        for j, col in enumerate(M):
            if col:
                vadd(out[j], col, c)
    return out


def is_zero_matrix(M: Matrix) -> bool:
    return not any(M)


def _op_bound(support: dict, m: int) -> int:
    total = 0
    for q, K in support.items():
        total += (m * K) if q != 0 else m * (-(-K // m))
    return total - 1


class GradedModule:
    def __init__(self, ca: CurrentAlgebra, weights: list, grades: list, provider: Callable,
                 *, graded: bool, support: dict, level: int = 1, label: str = "", cyclic: int | None = None):
        if len(weights) != len(grades):
            raise ValueError("weights and grades differ in length")
        self.ca = ca
        self.weights = [tuple(w) for w in weights]
        self.grades = list(grades)
        self._provider = provider
        self._ops: dict = {}
        self.graded = graded
        self.support = dict(support)
        self.level = level
        self.label = label
        self.cyclic = cyclic  # index of the cyclic vector when known

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def tag(self) -> str:
        return self.ca.tag

    @property
    def top(self) -> int:
        return max(self.grades, default=0)

    @property
    def op_bound(self) -> int:
        """Generators of degree above this either act by zero or add nothing new."""
        if self.dim == 0:
            return -1
        if self.graded:
            return self.top - min(self.grades)
        return _op_bound(self.support, self.ca.m)

    def op(self, d: int, k: int) -> Matrix:
        key = (d, k)
        M = self._ops.get(key)
        if M is None:
            if self.graded and d > self.op_bound:
                M = [dict() for _ in range(self.dim)]
            else:
                M = self._provider(d, k)
            self._ops[key] = M
        return M

    def generators(self, max_degree: int | None = None) -> list:
        """(d, k) pairs of generators that can act nontrivially."""
        bound = self.op_bound if max_degree is None else min(max_degree, self.op_bound)
        return [(d, k) for d in range(bound + 1) for k in range(len(self.ca.basis(d)))]

    def apply(self, d: int, k: int, v: dict) -> dict:
        return mat_apply(self.op(d, k), v)

    def act(self, x: CurrentElement, v: dict) -> dict:
        out: dict = {}
        for d in sorted(x.degrees()):
            part = CurrentElement(x.alg, x.tag, {key: c for key, c in x.terms.items() if key[1] == d})
            for k, c in self.ca.coordinates(part).items():
                vadd(out, self.apply(d, k, v), qq(c))
        return out

    def element_matrix(self, x: CurrentElement) -> Matrix:
        return [self.act(x, {j: QQ(1)}) for j in range(self.dim)]

    def block_key(self, j: int):
        return (self.weights[j], self.grades[j]) if self.graded else (self.weights[j], 0)

    def vector_block(self, v: dict):
        keys = {self.block_key(j) for j in v}
        if len(keys) != 1:
            raise ValueError("vector is not homogeneous")
        return keys.pop()

    def all_ops(self) -> dict:
        return {g: self.op(*g) for g in self.generators()}


# ------------------------------------------------------------ constructors

def _exterior_basis(n1: int, i: int) -> list:
    from itertools import combinations
    return [tuple(c) for c in combinations(range(n1), i)]


def _wedge_apply(S: tuple, a: int, b: int):
    """E_{ab} e_S in the exterior power: returns (sign, T) or None."""
    if b not in S:
        return None
    if a == b:
        return 1, S
    if a in S:
        return None
    rest = [x for x in S if x != b]
    pos_b = S.index(b)
    T = sorted(rest + [a])
    pos_a = T.index(a)
    sign = (-1) ** (pos_b + pos_a)
    return sign, tuple(T)


def fundamental_rep(ca: CurrentAlgebra, i: int) -> tuple:
    """Dual of the i-th exterior power of C^{n+1}: weights and matrices of the basis of g.

    The basis vector e_0 ^ ... ^ e_{i-1} has weight -omega_i and is the lowest weight vector.
    """
    alg = ca.alg
    rs = alg.rs
    if rs.kind != "A":
        raise ValueError("evaluation modules are implemented for type A")
    n = rs.rank
    if not 1 <= i <= n:
        raise ValueError(f"no fundamental weight omega_{i} in {rs.name}")
    basis = _exterior_basis(n + 1, i)
    index = {S: k for k, S in enumerate(basis)}
    weights = [tuple(-((j - 1 in S) - (j in S)) for j in range(1, n + 1)) for S in basis]
    mats = []
    for idx in range(alg.dim):
        M = [dict() for _ in basis]
        for (a, b), c in alg.matrix(idx).items():
            # contragredient action: x acts by -x^T, so E_ab acts by -E_ba
            for k, S in enumerate(basis):
                r = _wedge_apply(S, b, a)
                if r is not None:
                    sgn, T = r
                    vadd(M[k], {index[T]: QQ(-sgn * c)})
        mats.append(M)
    return weights, mats


def evaluation_module(ca: CurrentAlgebra, i: int, p=0) -> GradedModule:
    """V(omega_i) with x (x) t^s acting as p^s x (graded in degree 0 when p = 0)."""
    if ca.twisted:
        raise ValueError("evaluation modules are built over the untwisted current algebra")
    weights, mats = fundamental_rep(ca, i)
    p = qq(p)
    dim = len(weights)

    def provider(d, k):
        if d == 0:
            return mats[k]
        if p == 0:
            return [dict() for _ in range(dim)]
        c = p ** d
        return [{r: c * x for r, x in col.items()} for col in mats[k]]

    graded = p == 0
    return GradedModule(ca, weights, [0] * dim, provider, graded=graded, support={p: 1},
                        label=f"V(omega_{i})_{p}", cyclic=0)


def trivial_module(ca: CurrentAlgebra, level: int = 1) -> GradedModule:
    w = (0,) * ca.weight_rank
    return GradedModule(ca, [w], [0], lambda d, k: [dict()], graded=True, support={QQ(0): 1},
                        level=level, label="trivial", cyclic=0)


def tensor(M1: GradedModule, M2: GradedModule) -> GradedModule:
    if M1.ca is not M2.ca:
        raise ValueError("tensor factors must be modules over the same algebra")
    d1, d2 = M1.dim, M2.dim
    weights = [tuple(x + y for x, y in zip(w1, w2)) for w1 in M1.weights for w2 in M2.weights]
    grades = [g1 + g2 for g1 in M1.grades for g2 in M2.grades]

    def provider(d, k):
        A, B = M1.op(d, k), M2.op(d, k)
        out = []
        for a in range(d1):
            colA = A[a]
            for b in range(d2):
                col = {}
                for r, c in colA.items():
                    col[r * d2 + b] = c
                for r, c in B[b].items():
                    key = a * d2 + r
                    y = col.get(key, 0) + c
                    if y:
                        col[key] = y
                    else:
                        col.pop(key, None)
                out.append(col)
        return out

    support = dict(M1.support)
    for q, K in M2.support.items():
        support[q] = max(support.get(q, 0), K)
    cyc = None
    if M1.cyclic is not None and M2.cyclic is not None:
        cyc = M1.cyclic * d2 + M2.cyclic
    return GradedModule(M1.ca, weights, grades, provider, graded=M1.graded and M2.graded, support=support,
                        level=M1.level, label=f"{M1.label}*{M2.label}", cyclic=cyc)


def tensor_all(mods: list) -> GradedModule:
    out = mods[0]
    for M in mods[1:]:
        out = tensor(out, M)
    return out


def shift(M: GradedModule, p) -> GradedModule:
    """x t^s acts as x (t - p)^s did on M."""
    if M.ca.twisted:
        raise ValueError("shift is defined on modules over g[t]")
    p = qq(p)
    if p == 0:
        return M

    def provider(d, k):
        pairs = []
        # above op_bound a graded M acts by zero; an ungraded one does not
        top = min(d, M.op_bound) if M.graded else d
        for j in range(top + 1):
            pairs.append((QQ(comb(d, j)) * (-p) ** (d - j), M.op(j, k)))
        return mat_combine(pairs, M.dim)

    support = {}
    for q, K in M.support.items():
        support[q - p] = max(support.get(q - p, 0), K)
    return GradedModule(M.ca, M.weights, [0] * M.dim, provider, graded=False, support=support,
                        level=M.level, label=f"{M.label}[{p}]", cyclic=M.cyclic)


def restrict_twisted(M: GradedModule, ca_tw: CurrentAlgebra) -> GradedModule:
    if M.ca.twisted or not ca_tw.twisted or ca_tw.alg is not M.ca.alg:
        raise ValueError("restriction goes from g[t] to g[t]^sigma of the same g")
    fd = ca_tw.fd
    weights = [fd.restrict(w) for w in M.weights]

    def provider(d, k):
        x = ca_tw.basis(d)[k]
        return mat_combine(((qq(c), M.op(s, idx)) for (idx, s), c in x.terms.items()), M.dim)

    return GradedModule(ca_tw, weights, list(M.grades), provider, graded=M.graded, support=M.support,
                        level=M.level, label=f"res({M.label})", cyclic=M.cyclic)


# ------------------------------------------------------------ subspaces

@dataclass
class Subspace:
    """A homogeneous subspace of a module, one echelon per (weight, grade) block."""

    module: GradedModule
    blocks: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return sum(len(e) for e in self.blocks.values())

    def add(self, v: dict):
        if not v:
            return None
        key = self.module.vector_block(v)
        ech = self.blocks.get(key)
        if ech is None:
            ech = self.blocks[key] = Echelon()
        return ech.add(v)

    def contains(self, v: dict) -> bool:
        if not v:
            return True
        ech = self.blocks.get(self.module.vector_block(v))
        return ech is not None and ech.contains(v)

    def pivots(self) -> set:
        return {p for e in self.blocks.values() for p in e.pivots}

    def basis(self) -> list:
        """Rows in a deterministic order: sorted block keys, then insertion order."""
        return [(key, r) for key in sorted(self.blocks) for r in self.blocks[key].rows]


def _split_homogeneous(M: GradedModule, v: dict) -> list:
    parts: dict = {}
    for j, c in v.items():
        parts.setdefault(M.block_key(j), {})[j] = c
    return [parts[k] for k in sorted(parts)]


def span_closure(M: GradedModule, seeds: Iterable[dict], generators: list | None = None) -> Subspace:
    """Smallest subspace stable under all generators that contains the seeds."""
    S = Subspace(M)
    gens = M.generators() if generators is None else generators
    frontier = []
    for v in seeds:
        for part in _split_homogeneous(M, v):
            r = S.add(part)
            if r is not None:
                frontier.append(r)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = M.apply(*g, v)
                if w:
                    r = S.add(w)
                    if r is not None:
                        nxt.append(r)
        frontier = nxt
    return S


def is_stable(M: GradedModule, S: Subspace) -> bool:
    gens = M.generators()
    for _, r in S.basis():
        for g in gens:
            if not S.contains(M.apply(*g, r)):
                return False
    return True


def submodule(M: GradedModule, S: Subspace, label: str = "") -> GradedModule:
    rows = S.basis()
    pos = {}
    for n_, (key, _) in enumerate(rows):
        pos.setdefault(key, []).append(n_)
    weights = [key[0] for key, _ in rows]
    grades = [key[1] for key, _ in rows]

    def provider(d, k):
        out = []
        for key, r in rows:
            w = M.apply(d, k, r)
            col = {}
            if w:
                wkey = M.vector_block(w)
                ech = S.blocks.get(wkey)
                if ech is None:
                    raise ValueError("subspace is not stable")
                for i, c in ech.coordinates(w).items():
                    col[pos[wkey][i]] = c
            out.append(col)
        return out

    return GradedModule(M.ca, weights, grades, provider, graded=M.graded, support=M.support,
                        level=M.level, label=label or f"sub({M.label})")


def quotient(M: GradedModule, S: Subspace, check: bool = True, label: str = "") -> GradedModule:
    """M/S with the complement spanned by the non-pivot standard basis vectors."""
    if check and not is_stable(M, S):
        raise ValueError("subspace is not stable under the action")
    piv = S.pivots()
    keep = [j for j in range(M.dim) if j not in piv]
    newpos = {j: n_ for n_, j in enumerate(keep)}

    def reduce(w):
        if not w:
            return {}
        ech = S.blocks.get(M.vector_block(w))
        if ech is not None:
            w, _ = ech.reduce(w)
        return {newpos[j]: c for j, c in w.items()}

    def provider(d, k):
        A = M.op(d, k)
        return [reduce(A[j]) for j in keep]

    cyc = newpos.get(M.cyclic) if M.cyclic is not None else None
    return GradedModule(M.ca, [M.weights[j] for j in keep], [M.grades[j] for j in keep], provider,
                        graded=M.graded, support=M.support, level=M.level,
                        label=label or f"{M.label}/S", cyclic=cyc)


# ------------------------------------------------------------ filtrations

class NotCyclic(ValueError):
    pass


def cyclic_filtration(M: GradedModule, v: dict):
    """Blocks of the filtration F_k = span of PBW monomials of t-degree <= k applied to v.

    Returns (blocks, levels): blocks maps a weight to an Echelon whose rows were
    inserted in order of level; levels maps the weight to the list of levels.
    """
    ca = M.ca
    bound = M.op_bound
    one = ca.generated_in_degree_one()
    deg0 = [(0, k) for k in range(len(ca.basis(0)))]
    blocks: dict = {}
    levels: dict = {}
    by_level: list = []  # by_level[k] = list of (weight, row) added at level k

    def insert(w, k, bucket):
        if not w:
            return
        key = M.vector_block(w)[0]
        ech = blocks.get(key)
        if ech is None:
            ech = blocks[key] = Echelon()
            levels[key] = []
        r = ech.add(w)
        if r is not None:
            levels[key].append(k)
            bucket.append((key, r))

    def close0(bucket, k):
        frontier = list(bucket)
        while frontier:
            nxt = []
            for _, r in frontier:
                for g in deg0:
                    insert(M.apply(*g, r), k, nxt)
            bucket.extend(nxt)
            frontier = nxt

    bucket: list = []
    for part in _split_homogeneous(M, v):
        insert(part, 0, bucket)
    close0(bucket, 0)
    by_level.append(bucket)
    k = 0
    while True:
        k += 1
        bucket = []
        smax = 1 if one else min(k, bound)
        for s in range(1, smax + 1):
            if s > bound:
                break
            gens = [(s, j) for j in range(len(ca.basis(s)))]
            for _, r in by_level[k - s]:
                for g in gens:
                    insert(M.apply(*g, r), k, bucket)
        close0(bucket, k)
        by_level.append(bucket)
        if not bucket and (one or all(not by_level[k - s] for s in range(0, min(k, bound) + 1))):
            break
    return blocks, levels


def cyclic_gr(M: GradedModule, v: dict | None = None, label: str = "") -> GradedModule:
    """Associated graded module of the t-degree filtration generated by v."""
    if v is None:
        if M.cyclic is None:
            raise ValueError("no cyclic vector given")
        v = {M.cyclic: QQ(1)}
    blocks, levels = cyclic_filtration(M, v)
    total = sum(len(e) for e in blocks.values())
    if total != M.dim:
        raise NotCyclic(f"vector generates a subspace of dimension {total} < {M.dim}")
    order = []
    for key in sorted(blocks):
        for i, lev in enumerate(levels[key]):
            order.append((lev, key, i))
    order.sort()
    pos = {(key, i): n_ for n_, (_, key, i) in enumerate(order)}
    weights = [key for _, key, _ in order]
    grades = [lev for lev, _, _ in order]
    v_key = M.vector_block(v)[0]

    def provider(d, k):
        out = []
        for lev, key, i in order:
            r = blocks[key].rows[i]
            w = M.apply(d, k, r)
            col = {}
            if w:
                wkey = M.vector_block(w)[0]
                coords = blocks[wkey].coordinates(w)
                target = lev + d
                for j, c in coords.items():
                    lj = levels[wkey][j]
                    if lj > target:
                        raise AssertionError("filtration is not respected by the action")
                    if lj == target:
                        col[pos[(wkey, j)]] = c
            out.append(col)
        return out

    support = {QQ(0): max(grades) + 1}
    return GradedModule(M.ca, weights, grades, provider, graded=True, support=support,
                        level=M.level, label=label or f"gr({M.label})", cyclic=pos[(v_key, 0)])


# ------------------------------------------------------------ characters

def character(M: GradedModule) -> Counter:
    return Counter(zip(M.weights, M.grades))


def ungraded_character(M: GradedModule) -> Counter:
    return Counter(M.weights)


def q_dims(ch: Counter) -> list:
    top = max((g for _, g in ch), default=-1)
    out = [0] * (top + 1)
    for (_, g), c in ch.items():
        out[g] += c
    return out


def format_character(ch: Counter) -> str:
    """Stable text: one 'weight@grade:mult' item per entry, sorted."""
    return " ".join(f"{','.join(map(str, w))}@{g}:{c}" for (w, g), c in sorted(ch.items()))


def bracket_failures(M: GradedModule, pairs: Iterable) -> list:
    """Generator pairs ((d1,k1),(d2,k2)) on which the action fails to respect brackets."""
    ca = M.ca
    bad = []
    for g1, g2 in pairs:
        x, y = ca.basis(g1[0])[g1[1]], ca.basis(g2[0])[g2[1]]
        z = bracket(x, y)
        for j in range(M.dim):
            e = {j: QQ(1)}
            lhs = vadd(M.apply(*g1, M.apply(*g2, e)), M.apply(*g2, M.apply(*g1, e)), -1)
            rhs = M.act(z, e) if z else {}
            if lhs != rhs:
                bad.append((g1, g2, j))
                break
    return bad


# ------------------------------------------------------------ serialization

FORMAT_VERSION = 1
_MAGIC = "artifact-module"


def dump_module(M: GradedModule) -> str:
    """Versioned text form of a graded module: tags, basis labels, nonzero action entries."""
    if not M.graded:
        raise ValueError("only graded modules are serialized")
    lines = [
        f"{_MAGIC} {FORMAT_VERSION}",
        f"tag {M.tag}",
        f"type {M.ca.alg.rs.name}",
        f"eps {M.ca.eps_sign}",
        f"label {M.label or '-'}",
        f"level {M.level}",
        f"cyclic {'-' if M.cyclic is None else M.cyclic}",
        "support " + " ".join(f"{p}:{K}" for p, K in sorted(M.support.items(), key=lambda it: str(it[0]))),
        f"dim {M.dim}",
    ]
    for w, g in zip(M.weights, M.grades):
        lines.append(f"b {','.join(map(str, w))} {g}")
    for (d, k), mat in sorted(M.all_ops().items()):
        entries = [f"{j}:{i}:{c}" for j, col in enumerate(mat) for i, c in sorted(col.items())]
        if entries:
            lines.append(f"op {d} {k} " + " ".join(entries))
    lines.append("end")
    return "\n".join(lines) + "\n"


def load_module(text: str, ca: CurrentAlgebra) -> GradedModule:
    """Inverse of dump_module; the algebra must carry the recorded tag."""
    lines = text.splitlines()
    head = lines[0].split() if lines else []
    if len(head) != 2 or head[0] != _MAGIC:
        raise ValueError("not a serialized module")
    if int(head[1]) != FORMAT_VERSION:
        raise ValueError(f"unsupported module format version {head[1]}")
    if not lines or lines[-1] != "end":
        raise ValueError("truncated module file")
    fields: dict = {}
    weights, grades, ops = [], [], {}
    for line in lines[1:-1]:
        key, _, rest = line.partition(" ")
        if key == "b":
            w, g = rest.split()
            weights.append(tuple(int(x) for x in w.split(",")) if w else ())
            grades.append(int(g))
        elif key == "op":
            parts = rest.split()
            d, k = int(parts[0]), int(parts[1])
            cols: list = [dict() for _ in range(int(fields["dim"]))]
            for item in parts[2:]:
                j, i, c = item.split(":")
                cols[int(j)][int(i)] = QQ(c)
            ops[(d, k)] = cols
        else:
            fields[key] = rest
    if (fields.get("tag"), fields.get("type"), fields.get("eps")) != (ca.tag, ca.alg.rs.name, str(ca.eps_sign)):
        raise ValueError(f"module was built over {fields.get('tag')} of {fields.get('type')}")
    dim = int(fields["dim"])
    if len(weights) != dim:
        raise ValueError("basis count does not match dim")
    support = {}
    for item in fields.get("support", "").split():
        p, K = item.rsplit(":", 1)
        support[QQ(p)] = int(K)

    def provider(d, k):
        return [dict(col) for col in ops.get((d, k), [dict() for _ in range(dim)])]

    label = fields.get("label", "-")
    cyclic = fields.get("cyclic", "-")
    return GradedModule(ca, weights, grades, provider, graded=True, support=support,
                        level=int(fields.get("level", 1)), label="" if label == "-" else label,
                        cyclic=None if cyclic == "-" else int(cyclic))
