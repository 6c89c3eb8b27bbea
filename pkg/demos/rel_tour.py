"""A walk through relations between finite sets of size at most two."""
from relcheck import (Budget, FinSet, RelDouble, epimono, relation, companion, conjoint, kernel,
                      cokernel, classify_cover_inclusion, audit, emit_report)
from relcheck.finset import fn

R = RelDouble(FinSet(2), epimono())
print("relations 2 ⇸ 2:", len(R.proarrows(2, 2)))

S = relation(1, 2, [(0, 0), (0, 1)])
T = relation(2, 1, [(1, 0)])
print(f"{S} then {T} is {R.hcomp(S, T)}")

f = fn("[1,1]:2->1")
print(f"graph of {f}: {companion(R, f).proarrow}")
print(f"opgraph of {f}: {conjoint(R, f).proarrow}")

g = fn("[1,1,2]:3->2")
print(f"kernel of {g}: {kernel(R, g)[0]}")
print(f"cokernel of {g}: {cokernel(R, g)[0]}")
for text in ("[1,1]:2->1", "[1]:1->2", "[2,1]:2->2"):
    print(text, classify_cover_inclusion(R, fn(text)))

print()
print(emit_report(audit(R, Budget(exhaustive=True)), "text"))
