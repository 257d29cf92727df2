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
    BIRTH,
    SADDLE,
    CircleRef,
    Event,
    GuidedFace,
    Graphic,
    LevelProfile,
    NestingForest,
    QuadrantConfig,
    SaddleCrossing,
    SweepSpec,
    balanced_band,
    balanced_levels,
    classify_saddle,
    classify_vertex,
    guided_run,
    label_at,
    level_compress_check,
    validate_forest,
)

# --- profile ---
prof = LevelProfile(
    (
        Event(Fr(1, 4), BIRTH),
        Event(Fr(1, 3), SADDLE, BELOW),
        Event(Fr(2, 3), SADDLE, ABOVE),
    )
)
print("profile problems:", prof.validate())
print("label at 1/2:", label_at(prof, Fr(1, 2)))
print("balanced:", [(iv.lo, iv.hi, iv.label) for iv in balanced_levels(prof)])
try:
    prof.digits(Fr(1, 3))
    print("event level accepted (BUG)")
except ValueError as e:
    print("event level rejected:", e)

# --- genus-2 scene, one circle on the separating curve ---
cut = CutComplex(
    pieces={"a": Piece("a", 1, ("s1",)), "b": Piece("b", 1, ("s1",))},
    curves={"c": Curve("c", ("a", "s1"), ("b", "s1"))},
)
w = SurfaceComponent("W", 2, cut)
cx = ChamberComplex(
    ambient_mode=SPHERE_MODE,
    components={"W": w},
    chambers={"out": Chamber("out"), "in": Chamber("in")},
    incidence={"W": ("out", "in")},
)
fc = FlaggedComplex(cx, {"out": OCCUPIED, "in": OCCUPIED})
print("flagged problems:", fc.validate())

forest = NestingForest(
    circles=(CircleRef("x", "W", "c"),),
    outer_chamber="out",
    above_pieces=frozenset({("W", "a")}),
)
print("forest problems:", validate_forest(cx, forest))

run = guided_run(fc, SweepSpec(prof, Fr(1, 2), forest), seq_id="g11")
print("status:", run.status, "label:", run.label)
print("stages:", len(run.sequence.stages))
print("guiding:", run.guiding)
print("certs:", [(c.kind, c.chamber, c.witness) for c in run.certificates])
print("extra:", dict(run.sequence.extra_certificates))
print("seq problems:", run.sequence.validate())

# --- zero-circle run: two tori split by the sphere ---
t_cut = lambda: CutComplex(
    pieces={"p": Piece("p", 1, ())}, curves={}
)
cx2 = ChamberComplex(
    ambient_mode=SPHERE_MODE,
    components={
        "T1": SurfaceComponent("T1", 1, t_cut()),
        "T2": SurfaceComponent("T2", 1, t_cut()),
    },
    chambers={"u": Chamber("u"), "m": Chamber("m"), "v": Chamber("v")},
    incidence={"T1": ("u", "m"), "T2": ("m", "v")},
)
fc2 = FlaggedComplex(cx2, {"u": OCCUPIED, "m": OCCUPIED, "v": OCCUPIED})
forest2 = NestingForest((), "m", frozenset({("T1", "p")}))
run2 = guided_run(fc2, SweepSpec(prof, Fr(1, 2), forest2))
print("zero-circle:", run2.status, len(run2.sequence.stages), run2.guiding)

# --- saddle classification ---
print(classify_saddle(fc2, SaddleCrossing("saddle", "11", "10")))
print(classify_saddle(fc2, SaddleCrossing("max", "10", "10")))
try:
    classify_saddle(fc2, SaddleCrossing("saddle", "10", "01"))
    print("double flip accepted (BUG)")
except ValueError as e:
    print("double flip rejected:", e)

# --- vertex classification ---
bigon = QuadrantConfig(
    "bigon",
    circles={"P": 1, "Q": 1, "N": 2, "R": 2},
    labels={"P": "11", "Q": "11", "N": "01", "R": "10"},
)
rep = classify_vertex(bigon)
print("bigon:", rep.balanced_pair, rep.equivalent, rep.reason)
curls = QuadrantConfig(
    "curls-nested",
    circles={"P": 3, "Q": 3, "N": 2, "R": 4},
    labels={"P": "11", "Q": "11", "N": "01", "R": "10"},
)
try:
    classify_vertex(curls)
    print("curls 11/11 accepted (BUG)")
except ValueError as e:
    print("curls 11/11 rejected:", e)
ok_curls = QuadrantConfig(
    "curls-nested",
    circles={"P": 3, "Q": 3, "N": 2, "R": 4},
    labels={"P": "00", "Q": "00", "N": "01", "R": "10"},
)
rep2 = classify_vertex(ok_curls)
print("curls 00/00:", rep2.balanced_pair, rep2.equivalent)
try:
    classify_vertex(QuadrantConfig("star", circles=bigon.circles, labels=bigon.labels))
    print("unknown shape accepted (BUG)")
except ValueError as e:
    print("unknown shape rejected:", e)

# --- graphic / balanced band ---
g = Graphic(
    columns=(
        ("10", "11", "01"),
        ("10", "11", "11"),
        ("10", "10", "11"),
    )
)
band = balanced_band(g)
print("band cells:", sorted(band.cells))
print("intervals:", band.column_intervals, "single:", band.single_interval)
print("connected:", band.connected, "path:", band.path)

wrapg = Graphic(
    columns=(("10", "11", "01"), ("10", "11", "01"), ("10", "11", "01")),
    wrap=True,
)
wband = balanced_band(wrapg)
print("wrap connected:", wband.connected, "circle:", wband.circle)

bad = Graphic(columns=(("01", "10"),))
try:
    balanced_band(bad)
    print("monotone violation accepted (BUG)")
except ValueError as e:
    print("monotone violation rejected:", e)

# --- level compression ---
out = level_compress_check(fc, prof, Fr(1, 5), GuidedFace(forest, "x"))
print("level compress:", out)
