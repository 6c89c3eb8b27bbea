import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relcheck.finset import (FinSet, Fn, fn, bool_matrix, matrix_compose, matrix_meet, diagonal,
                             all_matrices, matrix_pairs, finset_factorize, sorted_factorize)

from oracles import compose_pairs, all_relations


def test_literal_round_trip():
    f = fn("[2,1,2]:3->2")
    assert f.table == (1, 0, 1)
    assert str(f) == "[2,1,2]:3->2"
    assert fn(str(fn("[]:0->3"))) == fn("[]:0->3")


@pytest.mark.parametrize("text", ["[3]:1->2", "[1,1]:1->2", "1,1:2->1", "[a]:1->1"])
def test_bad_literals(text):
    with pytest.raises(ValueError):
        fn(text)


def test_hom_counts():
    C = FinSet(3)
    for a in range(4):
        for b in range(4):
            assert len(C.hom(a, b)) == b ** a
    assert len(C.hom(0, 0)) == 1


def test_matrix_examples():
    R = bool_matrix(2, 2, [(0, 1)])
    S = bool_matrix(2, 1, [(1, 0)])
    assert matrix_pairs(matrix_compose(R, S)) == [(0, 0)]
    assert matrix_pairs(matrix_meet(diagonal(2), R)) == []
    assert matrix_pairs(matrix_compose(diagonal(2), R)) == [(0, 1)]
    assert len(list(all_matrices(2, 2))) == 16


def test_factorize_examples():
    e, m = finset_factorize(fn("[1,1,2]:3->2"))
    assert (e, m) == (fn("[1,1,2]:3->2"), fn("[1,2]:2->2"))
    assert sorted_factorize(fn("[2,2]:2->3")) == (fn("[1,1]:2->1"), fn("[2]:1->3"))


fns = st.integers(0, 3).flatmap(lambda a: st.integers(1, 3).flatmap(
    lambda b: st.lists(st.integers(0, b - 1), min_size=a, max_size=a).map(lambda t: Fn(a, b, tuple(t)))))


@settings(max_examples=200, deadline=None)
@given(fns)
def test_factorizations_are_image_factorizations(f):
    for e, m in (finset_factorize(f), sorted_factorize(f)):
        assert e.surjective() and m.injective()
        assert e.then(m) == f


def rel(a, b):
    return st.sets(st.tuples(st.integers(0, a - 1), st.integers(0, b - 1))) if a and b else st.just(set())


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_matrix_compose_matches_pairs(data):
    a, b, c = (data.draw(st.integers(0, 3)) for _ in range(3))
    R, S = data.draw(rel(a, b)), data.draw(rel(b, c))
    got = set(matrix_pairs(matrix_compose(bool_matrix(a, b, R), bool_matrix(b, c, S))))
    assert got == compose_pairs(R, S)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_lax_distributivity(data):
    # R⊗(S ∧ T) ⊆ R⊗S ∧ R⊗T
    a, b, c = (data.draw(st.integers(0, 3)) for _ in range(3))
    R = bool_matrix(a, b, data.draw(rel(a, b)))
    S = bool_matrix(b, c, data.draw(rel(b, c)))
    T = bool_matrix(b, c, data.draw(rel(b, c)))
    lhs = matrix_compose(R, matrix_meet(S, T))
    rhs = matrix_meet(matrix_compose(R, S), matrix_compose(R, T))
    assert not np.any(lhs & ~rhs)


def test_relation_count():
    assert sum(1 for _ in all_relations(2, 2)) == 16
