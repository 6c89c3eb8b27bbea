"""The nine acceptance criteria, each printing one PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v` or directly with
`python tests/test_acceptance.py`.
"""
import random
import sys
import time

import pytest

from relcheck import (Budget, FinSet, RelDouble, epimono, audit, check, check_equivalence,
                      check_factorization_system, replay_witness, parse_category, parse_fs,
                      relation, span_control, emit_report)
from relcheck.audit import THEOREM, derive_factorization_system, frobenius_sides as rel_frobenius
from relcheck.finset import Fn, fn, bool_matrix, matrix_compose, matrix_pairs
from relcheck.table import table_copy

from conftest import data
from oracles import (compose_pairs, all_relations, all_functions, frobenius_sides, graph, opgraph,
                     repeated_pair_spans, non_tabulator_relations)

_printer = None


def line(number, ok, detail):
    text = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    if _printer is not None:
        with _printer.disabled():
            print("\n" + text)
    else:
        print(text)
    return ok


@pytest.fixture(autouse=True)
def _show(capsys):
    global _printer
    _printer = capsys
    yield
    _printer = None


def test_1_composition_oracle():
    start = time.perf_counter()
    R = RelDouble(FinSet(2), epimono())
    checked = mismatches = 0
    for a in range(3):
        for b in range(3):
            for c in range(3):
                for S in all_relations(a, b):
                    for T in all_relations(b, c):
                        generic = set(R.hcomp(relation(a, b, S), relation(b, c, T)).pairs())
                        matrix = set(matrix_pairs(matrix_compose(bool_matrix(a, b, S), bool_matrix(b, c, T))))
                        checked += 1
                        if not (generic == matrix == compose_pairs(S, T)):
                            mismatches += 1
    seconds = time.perf_counter() - start
    ok = mismatches == 0 and seconds < 10
    assert line(1, ok, f"{checked} pairs, {mismatches} mismatches, {seconds:.1f}s")


def test_2_full_audit_rel2():
    start = time.perf_counter()
    report = audit(RelDouble(FinSet(2), epimono()), Budget(exhaustive=True))
    seconds = time.perf_counter() - start
    bad = [n for n in THEOREM if report[n].status != "pass" or not report[n].exhaustive]
    ok = not bad and seconds < 120
    assert line(2, ok, f"{len(THEOREM)} conditions exhaustive, failing {bad or 'none'}, {seconds:.1f}s")


def _fn(a, b, table):
    return Fn(a, b, tuple(table))


def test_3_frobenius():
    start = time.perf_counter()
    small = check(RelDouble(FinSet(2), epimono()), "frobenius", Budget(exhaustive=True))
    R3 = RelDouble(FinSet(3), epimono())
    sampled = check(R3, "frobenius", Budget(samples=1000, seed=3))
    # the same law on random triples, computed library-side and reference-side
    rng = random.Random(3)
    failures = 0
    for _ in range(1000):
        a, b, x = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)
        fs = all_functions(a, b)
        if not fs:
            continue
        f = rng.choice(fs)
        r = {(i, j) for i in range(b) for j in range(x) if rng.random() < 0.5}
        q = {(i, j) for i in range(a) for j in range(x) if rng.random() < 0.5}
        lhs, rhs = frobenius_sides(f, r, q)
        got = rel_frobenius(R3, _fn(a, b, f), relation(b, x, r), relation(a, x, q))
        if lhs != rhs or set(got[0].pairs()) != lhs or set(got[1].pairs()) != rhs:
            failures += 1
    seconds = time.perf_counter() - start
    ok = (small.status == "pass" and small.exhaustive and sampled.status == "pass"
          and sampled.checked >= 1000 and failures == 0 and seconds < 120)
    assert line(3, ok, f"exhaustive {small.checked} at size 2, {sampled.checked} sampled at size 3, "
                       f"{failures} reference failures, {seconds:.1f}s")


def test_4_factorization_synthesis():
    fs = derive_factorization_system(RelDouble(FinSet(3), epimono()))
    C = fs.category
    wrong = [f for f in C.morphisms()
             if fs.in_left(f) != f.surjective() or fs.in_right(f) != f.injective()]
    rep = check_factorization_system(C, fs.left(), fs.right())
    ok = not wrong and rep.ok
    assert line(4, ok, f"{len(C.morphisms())} arrows, {len(wrong)} misclassified, clauses "
                       f"{'all pass' if rep.ok else rep.failing()}")


@pytest.fixture(scope="module")
def spans():
    return span_control()


def test_5_negative_control(spans):
    start = time.perf_counter()
    notes = []
    # independent scan: spans with a repeated pair are exactly the non-discrete tabulators
    every = [(s.apex, s.left.table, s.right.table) for s in spans.all_proarrows()]
    bad = set(repeated_pair_spans(every))

    discrete = check(spans, "tabulators-discrete", Budget(samples=200))
    disc_ok = discrete.status == "fail" and replay_witness(spans, discrete.witness)
    if disc_ok:
        s = spans.decode_proarrow(discrete.witness.items[0][1])
        disc_ok = (s.apex, s.left.table, s.right.table) in bad
    notes.append(f"discrete {'fails, witness confirmed' if disc_ok else 'not refuted'}")

    rat = check(spans, "relations-are-tabulators", Budget(samples=200))
    rat_ok = rat.status == "fail" and replay_witness(spans, rat.witness)
    scan = non_tabulator_relations(2, 4)
    rat_ok = rat_ok and bool(scan)
    notes.append(f"relations-are-tabulators {rat.status} over {rat.checked}, "
                 f"reference scan finds {len(scan)} counterexamples")

    eq = check_equivalence(spans, Budget(samples=200), report=audit(
        spans, Budget(samples=200), conditions=["tabulators-discrete", "relations-are-tabulators"]))
    eq_ok = not eq.ok and bool(eq.explained_by)
    notes.append(f"equivalence {'fails' if not eq.ok else 'passes'}, explained by {eq.explained_by}")
    ok = disc_ok and rat_ok and eq_ok
    assert line(5, ok, "; ".join(notes) + f", {time.perf_counter() - start:.1f}s")


def test_6_equivalence_pipeline():
    start = time.perf_counter()
    rep = check_equivalence(table_copy(RelDouble(FinSet(2), epimono())), Budget(exhaustive=True))
    seconds = time.perf_counter() - start
    needed = ("eta-invertible", "eps-invertible", "triangle-F", "triangle-G", "phi-invertible",
              "gamma-invertible")
    bad = [n for n in needed if rep.components[n].status != "pass" or not rep.components[n].exhaustive]
    ok = rep.ok and rep.exhaustive and not bad and seconds < 120
    assert line(6, ok, f"{len(rep.components)} components exhaustive, failing {rep.failed() or 'none'}, "
                       f"{seconds:.1f}s")


def test_7_beck_chevalley():
    v = check(RelDouble(FinSet(2), epimono()), "beck-chevalley", Budget(exhaustive=True))
    # reference: p^*⊗q_! equals f_!⊗g^* for the brute-force pullback of every cospan
    squares = failures = 0
    for c in range(3):
        for a in range(3):
            for b in range(3):
                for f in all_functions(a, c):
                    for g in all_functions(b, c):
                        P = [(x, y) for x in range(a) for y in range(b) if f[x] == g[y]]
                        p, q = [x for x, _ in P], [y for _, y in P]
                        squares += 1
                        if compose_pairs(opgraph(p), graph(q)) != compose_pairs(graph(f), opgraph(g)):
                            failures += 1
    ok = v.status == "pass" and v.exhaustive and v.checked == squares and failures == 0
    assert line(7, ok, f"{v.checked} squares audited, {squares} by reference, {failures} failures")


def test_8_factorization_checker_controls():
    C3 = FinSet(3)
    ms = C3.morphisms()
    surj_inj = check_factorization_system(C3, [f for f in ms if f.surjective()], [f for f in ms if f.injective()])
    C2 = FinSet(2)
    ms = C2.morphisms()
    all_iso = check_factorization_system(C2, ms, [f for f in ms if C2.is_iso(f)])
    P = parse_category(data("chain3.fcat"))
    fs = parse_fs(data("chain3_iso_all.fs"), P)
    chain = check_factorization_system(P, fs.left(), fs.right())
    ok = (surj_inj.ok and all_iso.failing() == ["properness"]
          and fn("[1]:1->2") in all_iso.clauses["properness"].witnesses and chain.ok)
    assert line(8, ok, f"(surj, inj) {'pass' if surj_inj.ok else surj_inj.failing()}; "
                       f"(all, iso) fails {all_iso.failing()}; chain (iso, all) "
                       f"{'pass' if chain.ok else chain.failing()}")


def test_9_determinism(spans):
    budget = Budget(samples=20, seed=11)
    rel = RelDouble(FinSet(2), epimono())
    runs = [(emit_report(audit(rel, budget), "dblrep"), emit_report(audit(spans, budget), "dblrep"))
            for _ in range(2)]
    ok = runs[0] == runs[1]
    assert line(9, ok, "two seeded runs byte-identical on Rel and on the span control" if ok
                else "dblrep output differs between runs")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
