import pytest

from relcheck import (Budget, FinSet, RelDouble, epimono, audit, check_equivalence, build_F, build_G,
                      adjunction_witness, replay_witness, parse_double, parse_category, parse_fs)
from relcheck.equivalence import COMPONENT_NAMES
from relcheck.table import table_copy, explicit_copy

from conftest import data

EXHAUSTIVE = Budget(exhaustive=True)


@pytest.fixture(scope="module")
def copy2():
    return table_copy(RelDouble(FinSet(2), epimono()))


def test_rel2_copy_equivalence(copy2):
    rep = check_equivalence(copy2, EXHAUSTIVE)
    assert rep.ok, {n: c.note for n, c in rep.components.items() if c.status != "pass"}
    assert rep.exhaustive
    assert list(rep.components) == list(COMPONENT_NAMES)
    assert rep.explained_by == []


@pytest.mark.parametrize("n", [0, 1])
def test_small_rel_equivalence(n):
    assert check_equivalence(RelDouble(FinSet(n), epimono()), EXHAUSTIVE).ok


def test_explicit_copy_equivalence():
    D = explicit_copy(RelDouble(FinSet(1), epimono()))
    assert check_equivalence(D, EXHAUSTIVE).ok


def test_F_and_G_are_inverse_on_objects(copy2):
    eq = build_F(copy2)
    for r in eq.R.all_proarrows():
        g, _, _ = eq.G(eq.F(r)[0])
        assert g == r
    eq = build_G(copy2)
    for p in copy2.all_proarrows():
        assert eq.F(eq.G(p)[0])[0] == p


def test_adjunction_witness(copy2):
    _, results = adjunction_witness(copy2)
    assert all(r.status == "pass" and r.exhaustive for r in results.values())


def test_no_companion_explained_by_equipment():
    D = parse_double(data("no_companion.dblcat"))
    report = audit(D, EXHAUSTIVE)
    rep = check_equivalence(D, EXHAUSTIVE, report=report)
    assert not rep.ok
    assert rep.explained_by == ["equipment"]
    for w in rep.witnesses:
        assert replay_witness(D, w)


def test_doubled_cells_explained():
    D = parse_double(data("doubled_cells.dblcat"))
    report = audit(D, EXHAUSTIVE)
    rep = check_equivalence(D, EXHAUSTIVE, report=report)
    assert not rep.ok
    assert "unit-pure" in rep.explained_by
    assert set(rep.explained_by) <= set(report.failed())


def test_chain_all_iso_differs_only_in_factorization():
    C = parse_category(data("chain3.fcat"))
    R = RelDouble(C, parse_fs(data("chain3_all_iso.fs"), C))
    rep = check_equivalence(R, EXHAUSTIVE)
    assert rep.failed() == ["fs-agrees"]
    assert rep.explained_by == ["derived-factorization-system"]


def test_chain_iso_all_passes():
    C = parse_category(data("chain3.fcat"))
    R = RelDouble(C, parse_fs(data("chain3_iso_all.fs"), C))
    assert check_equivalence(R, EXHAUSTIVE).ok
