from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import RefField, rank_by_counting
from wiretap2.gf import GF, FieldError, NoSolution, is_irreducible, make_field

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


@pytest.mark.parametrize(
    "q, p, m, modulus",
    [(2, 2, 1, (0, 1)), (4, 2, 2, (1, 1, 1)), (9, 3, 2, (1, 0, 1)), (8, 2, 3, (1, 0, 1, 1)), (27, 3, 3, (1, 0, 2, 1))],
)
def test_modulus_choice(q, p, m, modulus):
    F = make_field(q)
    assert (F.p, F.m) == (p, m)
    if m > 1:
        assert F.modulus == modulus


def test_modulus_is_first_irreducible():
    # every monic polynomial of the same degree that sorts earlier, comparing
    # the constant term first, is reducible
    for q in (4, 8, 9, 16, 25, 27):
        F = make_field(q)
        for low in itertools.product(range(F.p), repeat=F.m):
            cand = tuple(low) + (1,)
            if cand >= F.modulus:
                continue
            assert not is_irreducible(cand, F.p)


@pytest.mark.parametrize("q", [6, 12, 1, 0, 2048])
def test_bad_sizes(q):
    with pytest.raises(FieldError):
        make_field(q)


@pytest.mark.parametrize("q", SMALL_Q)
def test_tables_match_reference(q):
    F = make_field(q)
    R = RefField(F.p, F.modulus)
    for a in range(q):
        for b in range(q):
            assert F.add(a, b) == R.add(a, b)
            assert F.mul(a, b) == R.mul(a, b)


@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms(q):
    F = make_field(q)
    add, mul = F.add_table, F.mul_table
    e = np.arange(q)
    assert (add[0] == e).all() and (mul[1] == e).all()
    assert (add == add.T).all() and (mul == mul.T).all()
    assert (add[e, F.neg_table] == 0).all()
    assert (mul[e[1:], F.inv_table[1:]] == 1).all()
    for a in range(q):
        assert (add[add[a]] == add[a][add]).all()  # associativity, row by row
        assert (mul[mul[a]] == mul[a][mul]).all()
        for b in range(q):
            assert (mul[a, add[b]] == add[mul[a, b], mul[a]]).all()
    # each nonzero row of the multiplication table is a permutation
    assert all(sorted(mul[a]) == list(range(q)) for a in range(1, q))


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        make_field(5).inv(0)


def test_rank_examples():
    F2 = make_field(2)
    assert F2.rank(np.zeros((0, 0), dtype=np.int64)) == 0
    assert make_field(5).rank(np.eye(4, dtype=np.int64)) == 4
    assert F2.rank([[1, 1], [1, 1]]) == 1


def test_in_span_examples():
    F3 = make_field(3)
    assert F3.in_span([0, 0], [[1, 0]])
    assert F3.in_span([0, 0], [])
    assert not F3.in_span([0, 1], [[1, 0]])
    assert F3.in_span([2, 2], [[1, 1]])


def test_solve_examples():
    F3 = make_field(3)
    assert F3.solve(np.eye(2, dtype=np.int64), [1, 2]).tolist() == [1, 2]
    F2 = make_field(2)
    x = F2.solve([[1, 1]], [0])
    assert F2.matvec([[1, 1]], x).tolist() == [0]
    with pytest.raises(NoSolution):
        F2.solve([[1], [1]], [0, 1])


def test_entries_are_checked():
    with pytest.raises(FieldError):
        make_field(3).rank([[3]])


def test_dict_round_trip():
    F = make_field(9)
    assert GF.from_dict(F.to_dict()) is F
    G = GF.from_dict({"p": 3, "m": 2, "modulus": [2, 2, 1]})
    assert G != F and G.q == 9
    with pytest.raises(FieldError):
        GF(3, 2, (0, 0, 1))


matrices = st.sampled_from([2, 3, 4, 5]).flatmap(
    lambda q: st.tuples(
        st.just(q),
        st.integers(0, 3).flatmap(
            lambda r: st.integers(1, 3).flatmap(
                lambda c: st.lists(st.lists(st.integers(0, q - 1), min_size=c, max_size=c), min_size=r, max_size=r).map(
                    lambda rows, c=c: np.array(rows, dtype=np.int64).reshape(-1, c)
                )
            )
        ),
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_span_counting(args):
    q, M = args
    F = make_field(q)
    assert F.rank(M) == rank_by_counting(RefField(F.p, F.modulus), M.tolist())


@settings(max_examples=100, deadline=None)
@given(matrices, st.integers(0, 2**32 - 1))
def test_rank_invariants(args, seed):
    q, M = args
    F = make_field(q)
    r = F.rank(M)
    assert r <= min(M.shape)
    assert F.rank(M.T) == r
    R, piv = F.rref(M)
    assert F.rank(R) == r and len(piv) == r
    # left multiplication by an invertible matrix preserves rank
    rng = np.random.default_rng(seed)
    while True:
        P = rng.integers(0, q, size=(M.shape[0], M.shape[0]))
        if F.rank(P) == M.shape[0]:
            break
    assert F.rank(F.matmul(P, M)) == r if M.shape[0] else True
    assert F.rank(M[rng.permutation(M.shape[0])]) == r
    if M.shape[1] > 1:
        A, B = M[:, :1], M[:, 1:]
        assert r <= F.rank(A) + F.rank(B)


@settings(max_examples=100, deadline=None)
@given(matrices, st.integers(0, 2**32 - 1))
def test_solve_round_trip(args, seed):
    q, A = args
    if A.shape[0] == 0:
        return
    F = make_field(q)
    x = np.random.default_rng(seed).integers(0, q, size=A.shape[1])
    y = F.matvec(A, x)
    sol = F.solve(A, y)
    assert (F.matvec(A, sol) == y).all()
    assert F.in_span(y, A.T)
