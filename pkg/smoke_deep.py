import sys

sys.path.insert(0, "src")

from fractions import Fraction as Fr

from chamber_calculus.scene import (
    OCCUPIED,
    SPHERE_MODE,
    Chamber,
    ChamberComplex,
    Curve,
    CutComplex,
    Piece,
    SurfaceComponent,
)
from chamber_calculus.flags import FlaggedComplex
from chamber_calculus.sweepout import (
    ABOVE,
    BELOW,
    SADDLE,
    CircleRef,
    Event,
    LevelProfile,
    NestingForest,
    SweepSpec,
    guided_run,
    validate_forest,
)

prof = LevelProfile(
    (Event(Fr(1, 3), SADDLE, BELOW), Event(Fr(2, 3), SADDLE, ABOVE))
)

# genus-3 surface, three nested circles on a chain of separating curves
cut = CutComplex(
    pieces={
        "a": Piece("a", 1, ("s",)),
        "m1": Piece("m1", 1, ("s1", "s2")),
        "m2": Piece("m2", 0, ("s1", "s2")),
        "b": Piece("b", 1, ("s",)),
    },
    curves={
        "c1": Curve("c1", ("a", "s"), ("m1", "s1")),
        "c2": Curve("c2", ("m1", "s2"), ("m2", "s1")),
        "c3": Curve("c3", ("m2", "s2"), ("b", "s")),
    },
)
cx = ChamberComplex(
    ambient_mode=SPHERE_MODE,
    components={"W": SurfaceComponent("W", 3, cut)},
    chambers={"out": Chamber("out"), "in": Chamber("in")},
    incidence={"W": ("out", "in")},
)
fc = FlaggedComplex(cx, {"out": OCCUPIED, "in": OCCUPIED})
print("flagged problems:", fc.validate())

forest = NestingForest(
    circles=(
        CircleRef("x1", "W", "c1"),
        CircleRef("x2", "W", "c2", parent="x1"),
        CircleRef("x3", "W", "c3", parent="x2"),
    ),
    outer_chamber="out",
    above_pieces=frozenset({("W", "a"), ("W", "m2")}),
)
print("forest problems:", validate_forest(cx, forest))

run = guided_run(fc, SweepSpec(prof, Fr(1, 2), forest), seq_id="deep")
print("status:", run.status, "label:", run.label)
print("stages:", len(run.sequence.stages))
for i, f in enumerate(run.forests):
    print(f"  forest {i}: circles={[c.id for c in f.circles]} outer={f.outer_chamber}")
for i, ds in enumerate(run.sequence.disk_sets):
    print(f"  disks {i}:", [(d.id, d.chamber, d.curve, d.enclosed_hint) for d in ds])
print("guiding:", run.guiding)
print("certs:", [(c.kind, c.chamber, c.witness) for c in run.certificates])
print("seq problems:", run.sequence.validate())
