"""Three factorization systems checked clause by clause, then one recovered from relations."""
from relcheck import (FinSet, RelDouble, epimono, check_factorization_system, parse_category, parse_fs)
from relcheck.audit import derive_factorization_system
import os

here = os.path.dirname(os.path.abspath(__file__))
data = os.path.join(here, "..", "data")

C = FinSet(3)
ms = C.morphisms()
print("(surjections, injections) on sets of size <= 3")
print(check_factorization_system(C, [f for f in ms if f.surjective()], [f for f in ms if f.injective()]))

C = FinSet(2)
ms = C.morphisms()
print("\n(all, isos) on sets of size <= 2")
print(check_factorization_system(C, ms, [f for f in ms if C.is_iso(f)]))

P = parse_category(os.path.join(data, "chain3.fcat"))
fs = parse_fs(os.path.join(data, "chain3_iso_all.fs"), P)
print("\n(isos, all) on the chain a <= b <= c")
print(check_factorization_system(P, fs.left(), fs.right()))

derived = derive_factorization_system(RelDouble(FinSet(3), epimono()))
print("\nrecovered from Rel on sets of size <= 3")
print("covers:", " ".join(str(f) for f in sorted(derived.left(), key=derived.category.key)))
print("inclusions:", " ".join(str(f) for f in sorted(derived.right(), key=derived.category.key)))
