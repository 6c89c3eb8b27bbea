"""Spans are not relations: the audit finds out why, and the comparison says which condition."""
from relcheck import Budget, audit, check_equivalence, replay_witness, span_control, emit_report

D = span_control()
budget = Budget(samples=50, seed=1)
report = audit(D, budget)
print(emit_report(report, "text"))

for w in report.witnesses():
    print(f"witness {w.id} replays: {replay_witness(D, w)}")

eq = check_equivalence(D, budget, report=report)
print("comparison with relations holds:", eq.ok)
print("failing components:", ", ".join(eq.failed()))
print("explained by:", ", ".join(eq.explained_by))
