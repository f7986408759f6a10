"""Walk through the package on a few small spaces.

    python demos/tour.py
"""
from ihsig import spaces
from ihsig.chains import intersection_homology
from ihsig.covers import CoverComplex, DeckLabeling, FiniteGroup, cyclic_labelings, universal_duality_check
from ihsig.stratification import classical
from ihsig.witt import global_witt_check, signature


def show_ih(name):
    s = spaces.named(name)
    row = {p: list(intersection_homology(s, classical(p, s)).ranks) for p in ("0", "m", "n", "t")}
    print(f"{name:12s}", "  ".join(f"{p}: {r}" for p, r in row.items()))


print("intersection homology ranks over Q, classical perversities")
for name in ("S2", "T2", "sus-T2", "pinched-T2", "S2vS2"):
    show_ih(name)

print("\nWitt verdicts")
for name in ("sus-T2", "sus-S3", "pinched-T2"):
    print(f"{name:12s}", "Witt" if global_witt_check(spaces.named(name), with_form=False).verdict else "not Witt")

print("\nsignature of CP2:", signature(spaces.cp2_space()))

pinched = spaces.pinched_torus()
g = FiniteGroup.cyclic(2)
cover = CoverComplex(pinched, g, DeckLabeling(g, cyclic_labelings(pinched.complex, 2)[0]))
rep = universal_duality_check(cover, classical("m", pinched))
print("\nconnected double cover of the pinched torus:", "duality holds" if rep.holds else "duality fails")
