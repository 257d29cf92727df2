import sys

sys.path.insert(0, "src")

from chamber_calculus.scene import (
    ANNOTATED_MODE,
    EMPTY,
    OCCUPIED,
    SPHERE_MODE,
    YES,
    Chamber,
    ChamberComplex,
    Curve,
    CutComplex,
    DiskAttachment,
    Piece,
    SurfaceComponent,
    TopAnnotation,
    annotation_closure,
)
from chamber_calculus.flags import FlaggedComplex
from chamber_calculus.certificates import (
    Bullseye,
    EquivalenceLedger,
    HostReducible,
    Persists,
    build_sequence,
    bullseye_splices,
    certificates,
    classify_added_disk,
    insert_bullseye,
    propagate_bullseye,
    relate_sequences,
    are_equivalent,
)

# --- S3 single chamber ---
s3 = ChamberComplex(
    ambient_mode=SPHERE_MODE, components={}, chambers={"m": Chamber("m")}, incidence={}
)
fc = FlaggedComplex(s3, {"m": OCCUPIED})

b2 = insert_bullseye(fc, "m", 2)
print("torus k=2 chambers:", sorted(b2.complex.chambers))
print("torus k=2 comps:", sorted(b2.complex.components))
print("flags:", {c: b2.flags[c] for c in sorted(b2.flags)})
print("valid:", b2.validate())

bb2 = insert_bullseye(fc, "m", 2, blank=True)
print("blank k=2 chambers:", sorted(bb2.complex.chambers))
print("blank valid:", bb2.validate())

try:
    insert_bullseye(fc, "m", 0, blank=True)
    print("blank k=0: accepted (BUG)")
except ValueError as e:
    print("blank k=0 rejected:", e)

print("splices of torus k=2:", [(c.host, c.k, c.blank) for c in bullseye_splices(b2)])
print("splices of blank k=2:", [(c.host, c.k, c.blank) for c in bullseye_splices(bb2)])

# --- meridian disk in Y ---
core = "m~b0y"
torus = "m~b0t"
d_mer = DiskAttachment(id="e", chamber=core, component=torus, curve="meridian")

# Y empty (default): the capped ball is pruned, blank bullseye k'=k
res = propagate_bullseye(b2, [d_mer], Bullseye("m", 2))
print("meridian, Y empty:", res)

# Y occupied: capped ball survives, blank bullseye k'=k+1
b2o = insert_bullseye(fc, "m", 2, y_flag=OCCUPIED)
res = propagate_bullseye(b2o, [d_mer], Bullseye("m", 2))
print("meridian, Y occupied:", res)

# no incident disks: persists exactly
res = propagate_bullseye(b2, [], Bullseye("m", 2))
print("no disks:", res)

# --- certificates ---
print("certs of blank k=2:", certificates(bb2))
st = insert_bullseye(fc, "m", 0, y_flag=OCCUPIED)
print("certs with occupied solid torus (opt-in):", certificates(st, solid_torus_certifies=True))
print("certs default:", certificates(st))

# --- classify_added_disk: two parallel meridians on a torus, both orders agree ---
torus_cut = CutComplex(
    pieces={"A": Piece("A", 0, ("a1", "a2")), "B": Piece("B", 0, ("b1", "b2"))},
    curves={
        "c1": Curve("c1", ("A", "a1"), ("B", "b1")),
        "c2": Curve("c2", ("A", "a2"), ("B", "b2")),
    },
)
heeg = ChamberComplex(
    ambient_mode=SPHERE_MODE,
    components={"h": SurfaceComponent("h", 1, torus_cut)},
    chambers={"in": Chamber("in"), "out": Chamber("out")},
    incidence={"h": ("in", "out")},
)
heeg, _ = annotation_closure(heeg)
fh = FlaggedComplex(heeg, {"in": OCCUPIED, "out": OCCUPIED})
d1 = DiskAttachment(id="d1", chamber="in", component="h", curve="c1")
e1 = DiskAttachment(id="e1", chamber="in", component="h", curve="c2")
out = classify_added_disk(fh, [d1], e1)
print("parallel meridians:", out.kind, out.k)

out = classify_added_disk(fh, [], e1)
print("extra alone vs nothing:", out.kind)

# --- sequences and ledger ---
seq_a = build_sequence("a", fh, [[d1]])
seq_b = build_sequence("b", fh, [[e1]])
led = EquivalenceLedger()
relate_sequences(seq_a, seq_b, led)
eq, chain = are_equivalent(led, "a", "b")
print("a ~ b:", eq, "chain:", chain)
print("stage certs a1:", seq_a.stage_certificates(1))
print("export:", led.export())
