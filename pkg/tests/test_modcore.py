import random
from collections import Counter

import flint
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.modcore import (FORMAT_VERSION, NotCyclic, QQ, Subspace, bracket_failures, character, cyclic_gr,
                              dump_module, evaluation_module, is_stable, load_module, q_dims, quotient,
                              restrict_twisted, shift, span_closure, submodule, tensor, tensor_all, trivial_module,
                              ungraded_character)
from conftest import current


def random_pairs(M, count, seed=0):
    rng = random.Random(seed)
    gens = M.generators()
    return [(rng.choice(gens), rng.choice(gens)) for _ in range(count)]


def ops_equal(M1, M2, max_degree):
    return all(M1.op(d, k) == M2.op(d, k) for d in range(max_degree + 1)
               for k in range(len(M1.ca.basis(d))))


# ------------------------------------------------------------ evaluation modules

def test_a1_evaluation_at_zero():
    ca = current("A", 1)
    V = evaluation_module(ca, 1)
    assert V.dim == 2
    assert character(V) == Counter({((-1,), 0): 1, ((1,), 0): 1})
    assert all(not col for k in range(3) for col in V.op(1, k))


def test_a3_second_fundamental_dim():
    assert evaluation_module(current("A", 3), 2).dim == 6


def test_a1_evaluation_at_one():
    ca = current("A", 1)
    V = evaluation_module(ca, 1, 1)
    for k in range(3):
        assert V.op(1, k) == V.op(0, k)
        assert V.op(3, k) == V.op(0, k)


def test_cyclic_vector_is_lowest():
    ca = current("A", 3)
    V = evaluation_module(ca, 2)
    assert V.weights[V.cyclic] == (0, -1, 0)
    for r in ca.alg.rs.positive_roots:
        assert not V.apply(0, ca.alg.f(r), {V.cyclic: QQ(1)})


def test_evaluation_modules_need_type_a_and_valid_index():
    with pytest.raises(ValueError):
        evaluation_module(current("D", 4), 1)
    with pytest.raises(ValueError):
        evaluation_module(current("A", 2), 3)
    with pytest.raises(ValueError):
        evaluation_module(current("A", 2, True), 1)


@pytest.mark.parametrize("n,i,p", [(2, 1, 0), (3, 2, 2), (4, 2, -1)])
def test_weights_are_respected(n, i, p):
    ca = current("A", n)
    V = evaluation_module(ca, i, p)
    for d in range(2):
        for k in range(ca.alg.dim):
            beta = ca.weight_of(k)
            for j, col in enumerate(V.op(d, k)):
                for r in col:
                    assert V.weights[r] == tuple(a + b for a, b in zip(V.weights[j], beta))


# ------------------------------------------------------------ tensor, shift, restrict

def test_tensor_dimensions_and_characters():
    ca = current("A", 2)
    V1, V2 = evaluation_module(ca, 1), evaluation_module(ca, 2)
    T = tensor(V1, V2)
    assert T.dim == 9
    want = Counter()
    for (w1, g1), a in character(V1).items():
        for (w2, g2), b in character(V2).items():
            want[(tuple(x + y for x, y in zip(w1, w2)), g1 + g2)] += a * b
    assert character(T) == want
    assert character(tensor(V1, trivial_module(ca))) == character(V1)


def test_tensor_requires_same_algebra():
    with pytest.raises(ValueError):
        tensor(evaluation_module(current("A", 2), 1), trivial_module(current("A", 2, True)))


def test_a1_tensor_at_opposite_points_is_cyclic():
    ca = current("A", 1)
    T = tensor(evaluation_module(ca, 1, 1), evaluation_module(ca, 1, -1))
    assert span_closure(T, [{T.cyclic: QQ(1)}]).dim == 4


def test_shift_by_zero_is_identity():
    V = evaluation_module(current("A", 2), 1, 3)
    assert shift(V, 0) is V


@pytest.mark.parametrize("p", [1, -2, QQ(1, 2)])
def test_shift_inverse(p):
    ca = current("A", 2)
    V = tensor(evaluation_module(ca, 1, 1), evaluation_module(ca, 2, 2))
    assert ops_equal(shift(shift(V, p), -p), V, 3)


@pytest.mark.parametrize("p", [1, -3])
def test_shift_of_evaluation_at_zero(p):
    ca = current("A", 1)
    assert ops_equal(shift(evaluation_module(ca, 1), p), evaluation_module(ca, 1, -p), 4)


def test_restriction_keeps_dimension_and_restricts_weights():
    ca, tw = current("A", 2), current("A", 2, True)
    V = tensor(evaluation_module(ca, 1, 1), evaluation_module(ca, 1, 2))
    R = restrict_twisted(V, tw)
    assert R.dim == V.dim
    assert R.weights == [tw.fd.restrict(w) for w in V.weights]
    assert span_closure(R, [{R.cyclic: QQ(1)}]).dim == R.dim
    with pytest.raises(ValueError):
        restrict_twisted(R, tw)


# ------------------------------------------------------------ subspaces

def test_span_closure_edge_cases():
    ca = current("A", 2)
    V = tensor(evaluation_module(ca, 1), evaluation_module(ca, 2))
    assert span_closure(V, []).dim == 0
    assert span_closure(V, [{j: QQ(1)} for j in range(V.dim)]).dim == V.dim


@given(st.lists(st.integers(0, 8), min_size=1, max_size=3), st.integers(0, 8))
def test_span_closure_is_monotone_and_idempotent(idx, extra):
    ca = current("A", 2)
    V = tensor(evaluation_module(ca, 1), evaluation_module(ca, 2))
    seeds = [{j: QQ(1)} for j in idx]
    S = span_closure(V, seeds)
    assert is_stable(V, S)
    again = span_closure(V, [r for _, r in S.basis()])
    assert again.dim == S.dim
    bigger = span_closure(V, seeds + [{extra: QQ(1)}])
    assert all(bigger.contains(r) for _, r in S.basis())


def test_quotient_exactness():
    ca = current("A", 2)
    V = tensor(evaluation_module(ca, 1), evaluation_module(ca, 2))
    # V(omega_1) x V(omega_2) = adjoint + trivial; the lowest vector generates the adjoint
    S = span_closure(V, [{V.cyclic: QQ(1)}])
    assert S.dim == 8
    Q = quotient(V, S)
    assert character(Q) == Counter({((0, 0), 0): 1})
    sub = submodule(V, S)
    assert character(V) == character(sub) + character(Q)
    assert bracket_failures(Q, random_pairs(Q, 50)) == []


def test_quotient_edge_cases():
    ca = current("A", 2)
    V = evaluation_module(ca, 1)
    assert character(quotient(V, Subspace(V))) == character(V)
    full = span_closure(V, [{0: QQ(1)}])
    assert quotient(V, full).dim == 0


def test_quotient_rejects_unstable_subspace():
    ca = current("A", 2)
    V = evaluation_module(ca, 1)
    S = Subspace(V)
    S.add({V.cyclic: QQ(1)})
    with pytest.raises(ValueError):
        quotient(V, S)


# ------------------------------------------------------------ associated graded

def test_gr_of_graded_module_is_itself():
    ca = current("A", 3)
    V = evaluation_module(ca, 2)
    G = cyclic_gr(V)
    assert character(G) == character(V)


def rank(rows, ncols):
    if not rows:
        return 0
    return flint.fmpq_mat(len(rows), ncols, [x for r in rows for x in r]).rank()


def test_a1_gr_matches_rref_oracle():
    # explicit sl2 matrices on C^2 with basis (lowest, highest)
    e = [[0, 1], [0, 0]]
    f = [[0, 0], [1, 0]]
    h = [[-1, 0], [0, 1]]

    def kron(A, B):
        return [[A[i][j] * B[k][l] for j in range(2) for l in range(2)] for i in range(2) for k in range(2)]

    eye = [[1, 0], [0, 1]]
    ops0, ops1 = [], []
    for x in (e, f, h):
        a, b = kron(x, eye), kron(eye, x)
        ops0.append([[a[i][j] + b[i][j] for j in range(4)] for i in range(4)])
        ops1.append([[a[i][j] - b[i][j] for j in range(4)] for i in range(4)])  # points 1 and -1

    def apply(A, v):
        return [sum(A[i][j] * v[j] for j in range(4)) for i in range(4)]

    def close(vecs, ops):
        out = list(vecs)
        frontier = list(vecs)
        while frontier:
            nxt = []
            for v in frontier:
                for A in ops:
                    w = apply(A, v)
                    if rank(out + [w], 4) > rank(out, 4):
                        out.append(w)
                        nxt.append(w)
            frontier = nxt
        return out

    F0 = close([[1, 0, 0, 0]], ops0)
    F1 = close(F0 + [apply(A, v) for A in ops1 for v in F0], ops0)
    want = [rank(F0, 4), rank(F1, 4) - rank(F0, 4)]
    ca = current("A", 1)
    G = cyclic_gr(tensor(evaluation_module(ca, 1, 1), evaluation_module(ca, 1, -1)))
    assert q_dims(character(G)) == want == [3, 1]


def test_gr_shifts_grades_exactly():
    ca = current("A", 2)
    M = tensor_all([evaluation_module(ca, 1, 1), evaluation_module(ca, 1, 2), evaluation_module(ca, 2, 3)])
    G = cyclic_gr(M)
    assert G.dim == M.dim
    for d in range(3):
        for k in range(len(ca.basis(d))):
            for j, col in enumerate(G.op(d, k)):
                assert all(G.grades[r] == G.grades[j] + d for r in col)
    assert bracket_failures(G, random_pairs(G, 100)) == []


def test_gr_rejects_non_cyclic_vector():
    ca = current("A", 1)
    M = tensor(evaluation_module(ca, 1), evaluation_module(ca, 1))
    with pytest.raises(NotCyclic):
        cyclic_gr(M)


def test_characters():
    ca = current("A", 2)
    assert character(trivial_module(ca)) == Counter({((0, 0), 0): 1})
    V = evaluation_module(ca, 1)
    assert sum(ungraded_character(V).values()) == 3


# ------------------------------------------------------------ bracket compatibility

@pytest.mark.parametrize("build", [
    lambda: tensor(evaluation_module(current("A", 2), 1, 1), evaluation_module(current("A", 2), 2, -1)),
    lambda: restrict_twisted(tensor(evaluation_module(current("A", 3), 1, 1), evaluation_module(current("A", 3), 3, 2)),
                             current("A", 3, True)),
    lambda: shift(evaluation_module(current("A", 4), 2, 1), QQ(1, 3)),
])
def test_action_respects_brackets(build):
    M = build()
    assert bracket_failures(M, random_pairs(M, 120)) == []


# ------------------------------------------------------------ serialization

def test_serialization_roundtrip():
    ca = current("A", 2)
    G = cyclic_gr(tensor(evaluation_module(ca, 1, 1), evaluation_module(ca, 1, 2)))
    text = dump_module(G)
    assert text.startswith(f"artifact-module {FORMAT_VERSION}\n")
    H = load_module(text, ca)
    assert character(H) == character(G)
    assert H.cyclic == G.cyclic and H.label == G.label
    assert ops_equal(H, G, 3)
    assert dump_module(H) == text


def test_serialization_rejections():
    ca = current("A", 2)
    text = dump_module(evaluation_module(ca, 1))
    with pytest.raises(ValueError):
        load_module(text, current("A", 2, True))
    with pytest.raises(ValueError):
        load_module(text.replace("end\n", ""), ca)
    with pytest.raises(ValueError):
        load_module(text.replace(f"module {FORMAT_VERSION}", "module 99"), ca)
    with pytest.raises(ValueError):
        load_module("garbage", ca)
    with pytest.raises(ValueError):
        dump_module(evaluation_module(ca, 1, 1))
