import glob
import os

import pytest
from hypothesis import given, settings, strategies as st

from relcheck import (as_table, Budget, FinSet, RelDouble, epimono, audit, check_equivalence, ParseError,
                      parse_category, emit_category, parse_fs, emit_fs, parse_double, emit_double,
                      parse_report, emit_report)
from relcheck.formats import double_key
from relcheck.table import table_copy

from conftest import data, DATA


def test_chain_counts():
    C = parse_category(data("chain3.fcat"))
    assert len(C.objects) == 3 and len(C.morphisms()) == 6


@pytest.mark.parametrize("text, line, fragment", [
    ("object a\nmorphism f : a -> b\n", 2, "unknown object b"),
    ("object a\nbogus\n", 2, "unrecognized line"),
])
def test_category_errors_are_positioned(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        parse_category(text)
    assert exc.value.line == line
    assert fragment in str(exc.value)
    assert str(exc.value).startswith(f"<input>:{line}:")


def test_size_budget():
    assert isinstance(parse_category("finset(3)", 6), FinSet)
    with pytest.raises(ParseError, match="size budget"):
        parse_category("finset(9)", 6)


def test_epimono_needs_finset():
    C = parse_category(data("chain3.fcat"))
    with pytest.raises(ParseError):
        parse_fs("epimono", C)


def test_fs_unknown_morphism_positioned():
    C = parse_category(data("chain3.fcat"))
    with pytest.raises(ParseError) as exc:
        parse_fs("left: ida\nright: zz\n", C)
    assert exc.value.line == 2


def test_category_round_trip():
    C = parse_category(data("chain3.fcat"))
    text = emit_category(C)
    assert emit_category(parse_category(text)) == text


def test_fs_round_trip():
    C = parse_category(data("chain3.fcat"))
    for name in ("chain3_iso_all.fs", "chain3_all_iso.fs"):
        fs = parse_fs(data(name), C)
        text = emit_fs(fs, C)
        again = parse_fs(text, C)
        assert set(again.left()) == set(fs.left()) and set(again.right()) == set(fs.right())
        assert emit_fs(again, C) == text


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(DATA, "*.dblcat"))),
                         ids=lambda p: os.path.basename(p))
def test_double_round_trip(path):
    D = parse_double(path)
    again = parse_double(emit_double(D))
    assert double_key(again) == double_key(D)


def test_table_copy_matches_data_file():
    D = table_copy(RelDouble(FinSet(2), epimono()))
    assert double_key(parse_double(data("rel2.dblcat"))) == double_key(D)


def test_bad_double_is_positioned():
    with open(data("rel1_explicit.dblcat")) as fh:
        lines = fh.read().splitlines()
    lines.append("proarrow zz : 0 -> 7")
    with pytest.raises(ParseError) as exc:
        parse_double("\n".join(lines) + "\n")
    assert exc.value.line == len(lines)


def test_report_round_trip():
    D = parse_double(data("no_companion.dblcat"))
    budget = Budget(exhaustive=True)
    report = audit(D, budget)
    report.equivalence = check_equivalence(D, budget, report=report)
    text = emit_report(report, "dblrep")
    parsed = parse_report(text)
    assert emit_report(parsed, "dblrep") == text
    assert not parsed.ok
    assert [w.id for w in parsed.witnesses()] == [w.id for w in report.witnesses()]


def test_report_ignores_comments(rel2_report):
    text = emit_report(rel2_report, "dblrep")
    assert emit_report(parse_report("# header\n" + text), "dblrep") == text


def test_text_report_has_no_timings(rel2_report):
    text = emit_report(rel2_report, "text")
    assert "seconds" not in text and " s)" not in text


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3))
def test_finset_category_round_trip(n):
    C = as_table(FinSet(n))
    T = parse_category(emit_category(C))
    assert len(T.morphisms()) == len(C.morphisms())
    T.validate()
