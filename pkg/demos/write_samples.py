"""Write the sample space files in demos/data (torus and pinched torus with Z/2 covers)."""
from pathlib import Path

from ihsig import spaces
from ihsig.covers import DeckLabeling, FiniteGroup, cyclic_labelings
from ihsig.spacefile import write_space

out = Path(__file__).parent / "data"
out.mkdir(exist_ok=True)
g = FiniteGroup.cyclic(2)
for fname, space in (("torus-z2.space", spaces.torus_space()), ("pinched-torus-z2.space", spaces.pinched_torus())):
    write_space(space, out / fname, g, DeckLabeling(g, cyclic_labelings(space.complex, 2)[0]))
    print(out / fname)
