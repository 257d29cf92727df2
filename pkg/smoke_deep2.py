import sys

sys.path.insert(0, "src")

from fractions import Fraction as Fr
from smoke_deep import run  # reuse the constructed example

for i, st in enumerate(run.sequence.stages):
    cx = st.complex
    print(f"stage {i}:")
    for c in sorted(cx.components):
        print(f"  comp {c}: genus {cx.genus_of(c)} chambers {cx.incidence[c]}")
    for ch in sorted(cx.chambers):
        print(f"  chamber {ch}: boundary {cx.boundary_components(ch)} flag {st.flags[ch]}")
