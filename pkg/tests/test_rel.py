from hypothesis import given, settings, strategies as st

from relcheck import (FinSet, RelDouble, epimono, relation, companion, conjoint, restrict, extend,
                      tabulator, local_product, kernel, cokernel, classify_cover_inclusion,
                      is_cartesian, is_opcartesian, parse_category, parse_fs)
from relcheck.audit import frobenius_sides
from relcheck.finset import Fn, fn, identity

from conftest import data
from oracles import compose_pairs, graph, opgraph, all_functions


def pairs(m):
    return set(m.pairs())


def test_counts(rel2):
    assert len(rel2.proarrows(2, 2)) == 16
    assert len(rel2.proarrows(1, 2)) == 4
    R0 = RelDouble(FinSet(0), epimono())
    assert R0.window == (0,)
    assert len(R0.all_proarrows()) == 1
    assert len(R0.cells(R0.unit(0), R0.unit(0), identity(0), identity(0))) == 1


def test_companion_and_conjoint(rel2):
    f = fn("[1,1]:2->1")
    assert pairs(companion(rel2, f).proarrow) == {(0, 0), (1, 0)}
    assert pairs(conjoint(rel2, f).proarrow) == {(0, 0), (0, 1)}


def test_extension_of_unit_along_constant(rel2):
    f = fn("[1,1]:2->1")
    n, xi = extend(rel2, f, rel2.unit(2), f)
    assert n == relation(1, 1, [(0, 0)])
    assert is_opcartesian(rel2, xi)


def test_kernels_and_cokernels(rel2):
    f = fn("[1,1,2]:3->2")
    assert pairs(kernel(rel2, f)[0]) == {(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)}
    assert pairs(cokernel(rel2, f)[0]) == {(0, 0), (1, 1)}
    g = fn("[1]:1->1")
    assert pairs(kernel(rel2, g)[0]) == {(0, 0)}
    assert pairs(cokernel(rel2, g)[0]) == {(0, 0)}


def test_cover_inclusion_examples(rel2):
    expect = {"[1,1]:2->1": (True, False), "[1]:1->2": (False, True), "[2,1]:2->2": (True, True),
              "[]:0->1": (False, True), "[1,2]:2->2": (True, True)}
    for text, (cover, inclusion) in expect.items():
        assert classify_cover_inclusion(rel2, fn(text)) == {"cover": cover, "inclusion": inclusion}


def test_tabulator_is_apex(rel2):
    m = relation(2, 2, [(0, 1), (1, 1)])
    tab = tabulator(rel2, m)
    assert tab.apex == 2
    assert (tab.left, tab.right) == (fn("[1,2]:2->2"), fn("[2,2]:2->2"))


def test_cartesian_product(rel2):
    p, _, _ = rel2.product_proarrow(relation(1, 1, [(0, 0)]), relation(1, 2, [(0, 1)]))
    assert p == relation(1, 2, [(0, 1)])


def test_local_product_is_meet(rel2):
    k, _, _ = local_product(rel2, relation(1, 2, [(0, 0)]), relation(1, 2, [(0, 1)]))
    assert pairs(k) == set()


def test_frobenius_examples(rel2):
    f = fn("[1,1]:2->1")
    r = relation(1, 2, [(0, 0)])
    lhs, rhs = frobenius_sides(rel2, f, r, relation(2, 2, [(0, 0)]))
    assert pairs(lhs) == pairs(rhs) == {(0, 0)}
    lhs, rhs = frobenius_sides(rel2, f, r, relation(2, 2, [(1, 1)]))
    assert pairs(lhs) == pairs(rhs) == set()


def test_poset_relations():
    C = parse_category(data("chain3.fcat"))
    P = RelDouble(C, parse_fs(data("chain3_iso_all.fs"), C))
    counts = {(a, b): len(P.proarrows(a, b)) for a in C.objects for b in C.objects}
    # a relation x ⇸ y is an object below min(x, y)
    rank = {"a": 1, "b": 2, "c": 3}
    assert counts == {(x, y): min(rank[x], rank[y]) for x in C.objects for y in C.objects}


# -- properties against set-of-pairs references --------------------------------------------------

def rel(a, b):
    cells = [(x, y) for x in range(a) for y in range(b)]
    return st.sets(st.sampled_from(cells)) if cells else st.just(set())


sizes = st.integers(0, 2)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_hcomp_matches_reference(data):
    R = RelDouble(FinSet(2), epimono())
    a, b, c = (data.draw(sizes) for _ in range(3))
    S, T = data.draw(rel(a, b)), data.draw(rel(b, c))
    k = R.hcomp(relation(a, b, S), relation(b, c, T))
    assert pairs(k) == compose_pairs(S, T)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_restriction_is_preimage(data):
    R = RelDouble(FinSet(2), epimono())
    x, y, a, b = (data.draw(sizes) for _ in range(4))
    fs, gs = all_functions(x, a), all_functions(y, b)
    if not fs or not gs:
        return
    f = Fn(x, a, data.draw(st.sampled_from(fs)))
    g = Fn(y, b, data.draw(st.sampled_from(gs)))
    S = data.draw(rel(a, b))
    m, theta = restrict(R, f, relation(a, b, S), g)
    assert pairs(m) == {(i, j) for i in range(x) for j in range(y) if (f(i), g(j)) in S}
    assert is_cartesian(R, theta)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([f for f in FinSet(2).morphisms()]))
def test_companions_are_graphs(f):
    R = RelDouble(FinSet(2), epimono())
    assert pairs(companion(R, f).proarrow) == graph(f.table)
    assert pairs(conjoint(R, f).proarrow) == opgraph(f.table)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_local_product_and_tabulator(data):
    R = RelDouble(FinSet(2), epimono())
    a, b = data.draw(sizes), data.draw(sizes)
    S, T = data.draw(rel(a, b)), data.draw(rel(a, b))
    k, _, _ = local_product(R, relation(a, b, S), relation(a, b, T))
    assert pairs(k) == S & T
    assert tabulator(R, relation(a, b, S)).apex == len(S)


def test_restriction_of_unit_along_constant(rel2):
    f = fn("[1,1]:2->1")
    # along (f, id_1) the result is the full relation 2 ⇸ 1; the kernel restricts along (f, f)
    m, _ = restrict(rel2, f, rel2.unit(1), identity(1))
    assert m == relation(2, 1, [(0, 0), (1, 0)])
    assert pairs(kernel(rel2, f)[0]) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_beck_chevalley_cell_is_typed_a_to_b(rel2):
    from relcheck.audit import beck_chevalley_cell
    f, g = fn("[1,1]:2->1"), fn("[1]:1->1")
    cell = beck_chevalley_cell(rel2, f, g)
    assert (cell.source.src, cell.source.tgt) == (2, 1)
    assert (cell.target.src, cell.target.tgt) == (2, 1)
