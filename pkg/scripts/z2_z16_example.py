"""The module Z2+Z16: lattice, summands, the property report and its witnesses."""
from csrickart.core import make_abelian_group
from csrickart.lattice import direct_summands, radical, socle, submodules
from csrickart.properties import property_report

M = make_abelian_group([2, 16])
subs = submodules(M)
print(f"{M!r}: {len(subs)} submodules")
for S in subs:
    print("  ", S)
print("direct summands:")
for D in direct_summands(M):
    print("  ", D)
print("socle:", socle(M), " radical:", radical(M))
print()
print(property_report(M).format())
