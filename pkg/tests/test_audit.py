import pytest

from relcheck import (Budget, FinSet, RelDouble, epimono, audit, check, replay_witness, parse_double,
                      parse_category, parse_fs, CONDITION_NAMES, check_factorization_system)
from relcheck.audit import THEOREM, PreconditionError, derive_factorization_system
from relcheck.formats import emit_report
from relcheck.table import table_copy, doubled_cells, without_proarrow

from conftest import data
from oracles import repeated_pair_spans


def test_rel2_passes_everything(rel2_report):
    assert rel2_report.ok, rel2_report.failed()
    assert all(v.exhaustive for v in rel2_report.verdicts.values())
    assert rel2_report.covers and rel2_report.inclusions


def test_rel1_table_copy_passes():
    D = table_copy(RelDouble(FinSet(1), epimono()))
    assert audit(D, Budget(exhaustive=True)).ok


def test_empty_double_category_is_vacuous():
    report = audit(parse_double("mode explicit\n"), Budget(exhaustive=True))
    assert report.ok
    assert all(v.checked == 0 for n, v in report.verdicts.items() if n != "derived-factorization-system")


def test_no_companion_fails_equipment_only():
    D = parse_double(data("no_companion.dblcat"))
    report = audit(D, Budget(exhaustive=True))
    assert report.failed() == ["equipment"]
    w = report["equipment"].witness
    assert w.items == (("arrow", "[]:0->1"),)
    assert replay_witness(D, w)


def test_doubled_cells_fail_unit_pure():
    D = parse_double(data("doubled_cells.dblcat"))
    report = audit(D, Budget(exhaustive=True))
    assert "unit-pure" in report.failed()
    for w in report.witnesses():
        assert replay_witness(D, w)


def test_span_control_discrete_tabulators(spans):
    v = check(spans, "tabulators-discrete", Budget(samples=50))
    assert v.status == "fail"
    assert replay_witness(spans, v.witness)
    (kind, text), = v.witness.items
    s = spans.decode_proarrow(text)
    assert repeated_pair_spans([(s.apex, s.left.table, s.right.table)])


def test_derived_fs_gated_on_failed_hypotheses():
    D = parse_double(data("no_companion.dblcat"))
    report = audit(D, Budget(exhaustive=True))
    assert report["derived-factorization-system"].status == "skip"
    with pytest.raises(PreconditionError, match="equipment"):
        derive_factorization_system(D, report)


def test_derived_fs_on_rel3():
    R = RelDouble(FinSet(3), epimono())
    fs = derive_factorization_system(R)
    C = fs.category
    for f in C.morphisms():
        assert fs.in_left(f) == f.surjective()
        assert fs.in_right(f) == f.injective()
    assert check_factorization_system(C, fs.left(), fs.right()).ok


def test_determinism(rel2):
    budget = Budget(samples=30, seed=7)
    a = emit_report(audit(rel2, budget), "dblrep")
    b = emit_report(audit(rel2, budget), "dblrep")
    assert a == b


def test_sampling_depends_on_seed():
    picks = [list(Budget(samples=5, seed=s).choose("frobenius", range(1000))[0]) for s in (1, 2)]
    assert picks[0] != picks[1]


def test_condition_order_is_stable(rel2_report):
    assert list(rel2_report.verdicts) == list(CONDITION_NAMES)
    assert set(THEOREM) <= set(CONDITION_NAMES)


def test_chain_all_iso_regular_inclusions():
    # with M = isos, every monic arrow is an inclusion, but only the isos are regular
    C = parse_category(data("chain3.fcat"))
    R = RelDouble(C, parse_fs(data("chain3_all_iso.fs"), C))
    report = audit(R, Budget(exhaustive=True))
    assert all(report[n].status == "pass" for n in THEOREM)
    # covers and inclusions both come out as every arrow, which does not factor uniquely
    assert report.failed() == ["derived-factorization-system", "regular-inclusions"]
    assert report["regular-inclusions"].witness.items == (("arrow", "ab"),)


def test_chain_iso_all_passes():
    C = parse_category(data("chain3.fcat"))
    R = RelDouble(C, parse_fs(data("chain3_iso_all.fs"), C))
    assert audit(R, Budget(exhaustive=True)).ok
