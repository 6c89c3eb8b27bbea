import pytest
from hypothesis import given, settings, strategies as st

from relcheck import (FinSet, TableCategory, as_table, compose, find_limit, is_limit,
                      classify_morphism, BoundaryError, CategoryError, UnknownMorphism, parse_category)
from relcheck.category import Product, Pullback, Terminal
from relcheck.finset import fn, identity

from conftest import data


def chain3():
    return parse_category(data("chain3.fcat"))


def test_compose_with_constant():
    assert compose(FinSet(2), fn("[2,1]:2->2"), fn("[1,1]:2->1")) == fn("[1,1]:2->1")


def test_compose_identity_law():
    g = fn("[2,1]:2->2")
    assert compose(FinSet(2), identity(2), g) == g


def test_compose_in_poset():
    C = chain3()
    assert compose(C, "ab", "bc") == "ac"


def test_compose_boundary_error():
    with pytest.raises(BoundaryError):
        compose(FinSet(2), fn("[1]:1->1"), fn("[1,1]:2->1"))
    with pytest.raises(BoundaryError):
        compose(chain3(), "bc", "ab")


def test_unknown_morphism():
    with pytest.raises(UnknownMorphism):
        compose(chain3(), "zz", "ab")


def test_product_one_two():
    cone = find_limit(FinSet(2), Product(1, 2))
    assert cone.apex == 2
    assert cone.legs == (fn("[1,1]:2->1"), identity(2))
    assert is_limit(FinSet(2), cone)


def test_product_two_two_absent():
    assert find_limit(as_table(FinSet(2)), Product("2", "2")) is None


def test_pullback_of_constant():
    cone = find_limit(FinSet(2), Pullback(fn("[1,1]:2->1"), fn("[1]:1->1")))
    assert cone.apex == 2
    assert cone.legs == (identity(2), fn("[1,1]:2->1"))


def test_terminal():
    assert find_limit(FinSet(2), Terminal()).apex == 1
    assert find_limit(chain3(), Terminal()).apex == "c"


def test_limits_agree_with_native_finset():
    C = FinSet(2)
    for a in C.objects:
        for b in C.objects:
            cone = find_limit(C, Product(a, b))
            if a * b <= 2:
                assert cone.apex == a * b
            else:
                assert cone is None


def test_classify_examples():
    C = FinSet(2)
    assert classify_morphism(C, fn("[1,1]:2->1")) == {"mono": False, "epi": True, "iso": False}
    assert classify_morphism(C, fn("[1]:1->2")) == {"mono": True, "epi": False, "iso": False}
    assert classify_morphism(C, fn("[2,1]:2->2")) == {"mono": True, "epi": True, "iso": True}
    # in a poset every arrow is mono and epi, and only identities are isos
    P = chain3()
    assert classify_morphism(P, "ab") == {"mono": True, "epi": True, "iso": False}


def test_classify_witness():
    out = classify_morphism(FinSet(2), fn("[1,1]:2->1"), witness=True)
    u, v = out["mono_witness"]
    assert u != v and compose(FinSet(2), u, fn("[1,1]:2->1")) == compose(FinSet(2), v, fn("[1,1]:2->1"))


def test_table_validation():
    objs = ["x"]
    with pytest.raises(CategoryError):
        TableCategory(objs, {"i": ("x", "x"), "f": ("x", "x")}, {"x": "i"},
                      {("i", "i"): "i", ("f", "i"): "f", ("i", "f"): "f"})      # f∘f missing
    with pytest.raises(CategoryError):
        TableCategory(objs, {"i": ("x", "y")}, {"x": "i"}, {})
    # a nonassociative table on {i, f, g}
    comp = {("i", "i"): "i"}
    for m in "fg":
        comp[(m, "i")] = comp[("i", m)] = m
    comp.update({("f", "f"): "g", ("g", "g"): "f", ("f", "g"): "f", ("g", "f"): "g"})
    with pytest.raises(CategoryError):
        TableCategory(objs, {"i": ("x", "x"), "f": ("x", "x"), "g": ("x", "x")}, {"x": "i"}, comp)


def test_as_table_is_valid():
    T = as_table(FinSet(2))
    T.validate()
    assert len(T.morphisms()) == sum(b ** a for a in range(3) for b in range(3))


arrows = st.sampled_from(list(FinSet(3).morphisms()))


@settings(max_examples=200, deadline=None)
@given(arrows, arrows, arrows)
def test_associativity(f, g, h):
    C = FinSet(3)
    if f.tgt == g.src and g.tgt == h.src:
        assert C.compose(C.compose(f, g), h) == C.compose(f, C.compose(g, h))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2))
def test_product_cone_is_limit(a, b):
    C = FinSet(3)
    cone = find_limit(C, Product(a, b))
    if a * b <= 3:
        assert is_limit(C, cone)
    else:
        assert cone is None


@settings(max_examples=100, deadline=None)
@given(arrows, arrows)
def test_pullback_matches_count(f, g):
    from oracles import pullback_size
    C = FinSet(3)
    if f.tgt != g.tgt:
        return
    cone = find_limit(C, Pullback(f, g))
    n = pullback_size(f.table, g.table)
    if cone is None:
        assert n > 3
    else:
        assert cone.apex == n and is_limit(C, cone)
