"""Level-sphere sweepouts: profiles, guided decomposition, and graphics.

A sweepout is modeled declaratively.  A LevelProfile lists the tangency
events of the sweep together with their effect on the two planarity
digits; a NestingForest records how one level sphere meets the surface,
as nested circles cross-referenced to cut-complex curves plus an
above/below piece coloring.  The engine never derives this data from
geometry: it validates it, replays it, and drives the decomposition
pipeline with it.

Guided runs surger the disk faces of the level sphere stage by stage,
re-expressing the forest through each surgery, and assert the two
structural facts that make the method work: the intersection count
strictly drops, and the balance digits never move.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction

from .certificates import (
    Certificate,
    DecompositionSequence,
    GuidingRecord,
    REDUCING_SPHERE,
    _decompose_kept,
    certificates as read_certificates,
)
from .flags import EMPTY, OCCUPIED, FlaggedComplex, SuccessionPolicy, is_tiny
from .iso import canonical_form
from .scene import (
    ChamberComplex,
    DiskAttachment,
    SPHERE_MODE,
    SurfaceComponent,
    curve_sides,
    enclosed_side,
)
from .surgery import InternalContractError, RawComplex

# ---------------------------------------------------------------------------
# Labels and profiles

BIRTH = "birth"
DEATH = "death"
SADDLE = "saddle"
_EVENT_KINDS = (BIRTH, DEATH, SADDLE)

ABOVE = "above"
BELOW = "below"

LABELS = ("00", "01", "10", "11")
BALANCED_LABELS = ("00", "11")


def is_balanced(label: str) -> bool:
    return label in BALANCED_LABELS


def _level(value) -> Fraction:
    """Levels are exact rationals; floats are rejected outright."""
    if isinstance(value, float):
        raise ValueError("levels must be exact rationals, not floats")
    return Fraction(value)


@dataclass(frozen=True)
class Event:
    """One tangency of the sweep at level s.

    effect names the digit the event may flip: "above" (1 -> 0) or
    "below" (0 -> 1); births and deaths add or remove an inessential
    circle and never carry an effect.  links cross-reference the
    (component, curve) pairs involved, purely descriptively.
    """

    s: Fraction
    kind: str
    effect: str | None = None
    links: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class LevelProfile:
    """Ordered tangency events of a sweep by level spheres."""

    events: tuple[Event, ...] = ()

    def validate(self) -> list[str]:
        problems = []
        prev = Fraction(0)
        above, below = 1, 0
        for i, ev in enumerate(self.events):
            where = f"event-{i}"
            try:
                s = _level(ev.s)
            except (ValueError, TypeError):
                problems.append(f"bad-level:{where}")
                continue
            if not Fraction(0) < s < Fraction(1):
                problems.append(f"level-range:{where}")
            if s <= prev and i > 0:
                problems.append(f"level-order:{where}")
            prev = s
            if ev.kind not in _EVENT_KINDS:
                problems.append(f"bad-kind:{where}")
                continue
            if ev.kind in (BIRTH, DEATH):
                if ev.effect is not None:
                    problems.append(f"extremum-effect:{where}")
                continue
            if ev.effect not in (None, ABOVE, BELOW):
                problems.append(f"bad-effect:{where}")
            elif ev.effect == ABOVE:
                if above == 0:
                    problems.append(f"above-digit-exhausted:{where}")
                above = 0
            elif ev.effect == BELOW:
                if below == 1:
                    problems.append(f"below-digit-exhausted:{where}")
                below = 1
        if (above, below) != (0, 1):
            problems.append("endpoint-label")
        return problems

    def digits(self, s) -> tuple[int, int]:
        s = _level(s)
        if not Fraction(0) < s < Fraction(1):
            raise ValueError("level outside (0, 1)")
        above, below = 1, 0
        for ev in self.events:
            if ev.s == s:
                raise ValueError(f"level {s} is an event level")
            if ev.s > s:
                break
            if ev.effect == ABOVE:
                above = 0
            elif ev.effect == BELOW:
                below = 1
        return above, below


def _checked(profile: LevelProfile) -> LevelProfile:
    problems = profile.validate()
    if problems:
        raise ValueError(f"invalid profile: {problems}")
    return profile


def label_at(profile: LevelProfile, s) -> str:
    """Planarity label of the level sphere at a generic level."""
    _checked(profile)
    a, b = profile.digits(s)
    return f"{a}{b}"


@dataclass(frozen=True)
class BalancedInterval:
    lo: Fraction
    hi: Fraction
    label: str


def balanced_levels(profile: LevelProfile) -> list[BalancedInterval]:
    """Maximal open intervals of balanced levels; never empty."""
    _checked(profile)
    cuts = [Fraction(0)] + [_level(ev.s) for ev in profile.events] + [Fraction(1)]
    above, below = 1, 0
    segments = []  # (lo, hi, label)
    for i in range(len(cuts) - 1):
        if i > 0:
            ev = profile.events[i - 1]
            if ev.effect == ABOVE:
                above = 0
            elif ev.effect == BELOW:
                below = 1
        segments.append((cuts[i], cuts[i + 1], f"{above}{below}"))
    merged: list[list] = []
    for lo, hi, lab in segments:
        if merged and merged[-1][2] == lab:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi, lab])
    out = [
        BalancedInterval(lo, hi, lab)
        for lo, hi, lab in merged
        if is_balanced(lab)
    ]
    if not out:
        raise InternalContractError("monotone profile without a balanced gap")
    return out


# ---------------------------------------------------------------------------
# Nesting forests: one level sphere's intersection with the surface

@dataclass(frozen=True)
class CircleRef:
    """One circle of S intersected with F, tied to a cut-complex curve."""

    id: str
    component: str
    curve: str
    parent: str | None = None


@dataclass(frozen=True)
class NestingForest:
    """Circles of S cap F nested on the sphere, plus a side coloring.

    outer_chamber locates the face outside all root circles.  A piece is
    above the sphere iff (component, piece) is in above_pieces; the
    coloring must flip exactly across circle curves.
    """

    circles: tuple[CircleRef, ...] = ()
    outer_chamber: str = ""
    above_pieces: frozenset = frozenset()

    def circle(self, cid: str) -> CircleRef:
        for cr in self.circles:
            if cr.id == cid:
                return cr
        raise KeyError(cid)

    def children(self) -> dict:
        kids: dict = {None: []}
        for cr in self.circles:
            kids.setdefault(cr.id, [])
        for cr in self.circles:
            kids.setdefault(cr.parent, []).append(cr.id)
        return kids

    def roots(self) -> list[str]:
        return [cr.id for cr in self.circles if cr.parent is None]


def validate_forest(complex: ChamberComplex, forest: NestingForest) -> list[str]:
    problems = []
    if forest.outer_chamber not in complex.chambers:
        problems.append("outer-chamber")
    ids = [cr.id for cr in forest.circles]
    if len(set(ids)) != len(ids):
        problems.append("duplicate-circle-id")
        return problems
    by_id = {cr.id: cr for cr in forest.circles}
    seen_curves = set()
    for cr in forest.circles:
        comp = complex.components.get(cr.component)
        if comp is None:
            problems.append(f"bad-component:{cr.id}")
            continue
        if cr.curve not in comp.cut.curves:
            problems.append(f"bad-curve:{cr.id}")
            continue
        if (cr.component, cr.curve) in seen_curves:
            problems.append(f"duplicate-curve:{cr.id}")
        seen_curves.add((cr.component, cr.curve))
        if cr.parent is not None and cr.parent not in by_id:
            problems.append(f"bad-parent:{cr.id}")
    if problems:
        return problems
    for cr in forest.circles:
        hops, cur = 0, cr.parent
        while cur is not None:
            cur = by_id[cur].parent
            hops += 1
            if hops > len(forest.circles):
                return problems + [f"parent-cycle:{cr.id}"]
    for comp_id, piece in forest.above_pieces:
        comp = complex.components.get(comp_id)
        if comp is None or piece not in comp.cut.pieces:
            problems.append(f"unknown-piece:{comp_id}/{piece}")
    if problems:
        return problems
    # the coloring flips exactly across circle curves
    circle_curves = {(cr.component, cr.curve) for cr in forest.circles}
    for comp_id in sorted(complex.components):
        cut = complex.components[comp_id].cut
        for cur in cut.curves.values():
            pa, pb = cur.pieces()
            ca = (comp_id, pa) in forest.above_pieces
            cb = (comp_id, pb) in forest.above_pieces
            crossing = (comp_id, cur.id) in circle_curves
            if crossing and ca == cb:
                problems.append(f"circle-side:{comp_id}/{cur.id}")
            if not crossing and ca != cb:
                problems.append(f"side-jump:{comp_id}/{cur.id}")
    if problems:
        return problems
    try:
        face_chambers(complex, forest)
    except (KeyError, ValueError):
        problems.append("face-chamber")
    return problems


def face_chambers(complex: ChamberComplex, forest: NestingForest) -> dict:
    """Chamber of each face, keyed by the circle just outside it.

    The face outside all roots is keyed None; the face just inside a
    circle is keyed by the circle id.  Chambers alternate across circles.
    """

    out: dict = {None: forest.outer_chamber}
    kids = forest.children()
    queue = deque((rid, forest.outer_chamber) for rid in forest.roots())
    while queue:
        cid, outside = queue.popleft()
        cr = forest.circle(cid)
        inside = complex.other_side(cr.component, outside)
        out[cid] = inside
        for kid in kids.get(cid, []):
            queue.append((kid, inside))
    return out


def _enclosure_hint(
    comp: SurfaceComponent, curve_id: str, busy_curves: set
) -> str | None:
    """Pick the side of a guided compression that holds no other circle."""
    sides = curve_sides(comp.cut, curve_id)
    if sides is None:
        return None
    free = []
    for side in sides:
        if not any(
            set(comp.cut.curves[c].pieces()) <= side for c in busy_curves
        ):
            free.append(side)
    if len(free) == 1:
        return min(free[0])
    return None


def _derive_nesting(
    complex: ChamberComplex, disks: list
) -> list[DiskAttachment]:
    """Declare nesting parents among disks whose enclosures nest."""
    enc = {d.id: enclosed_side(complex, d) for d in disks}
    out = []
    for d in disks:
        mine = enc[d.id]
        parent = None
        if mine is not None:
            best = None
            for other in disks:
                if other.id == d.id or other.chamber != d.chamber:
                    continue
                if other.component != d.component:
                    continue
                theirs = enc[other.id]
                if theirs is None or not (mine < theirs):
                    continue
                if best is None or len(theirs) < len(enc[best]):
                    best = other.id
            parent = best
        out.append(replace(d, nesting_parent=parent) if parent else d)
    return out


def guided_disks(
    complex: ChamberComplex, forest: NestingForest, tag: str
) -> list[DiskAttachment]:
    """The guided disk set: faces of S - F with one boundary circle."""
    faces = face_chambers(complex, forest)
    kids = forest.children()
    candidates = []  # (circle id, outer?, chamber)
    for cr in forest.circles:
        if not kids.get(cr.id):
            candidates.append((cr.id, False, faces[cr.id]))
    roots = forest.roots()
    if len(roots) == 1:
        candidates.append((roots[0], True, faces[None]))
    candidates.sort(key=lambda t: (t[0], t[1]))
    circle_curves = {(cr.component, cr.curve) for cr in forest.circles}
    disks: list[DiskAttachment] = []
    used = set()
    for cid, outer, chamber in candidates:
        cr = forest.circle(cid)
        if (cr.component, cr.curve) in used:
            continue
        used.add((cr.component, cr.curve))
        comp = complex.components[cr.component]
        busy = {
            c.curve
            for c in forest.circles
            if c.component == cr.component and c.curve != cr.curve
        }
        hint = _enclosure_hint(comp, cr.curve, busy)
        disks.append(
            DiskAttachment(
                id=f"{cid}~d{tag}",
                chamber=chamber,
                component=cr.component,
                curve=cr.curve,
                enclosed_hint=hint,
            )
        )
    return _derive_nesting(complex, disks)


# ---------------------------------------------------------------------------
# Side coloring: planarity digits read from a forest

def _forest_label(complex: ChamberComplex, forest: NestingForest) -> str:
    """Planarity digits of the surface parts above and below the sphere."""
    above_np = below_np = False
    for comp_id in sorted(complex.components):
        cut = complex.components[comp_id].cut
        circle_curves = frozenset(
            cr.curve for cr in forest.circles if cr.component == comp_id
        )
        for block in cut.piece_components(circle_curves):
            g = cut.subset_genus(block, circle_curves)
            if g == 0:
                continue
            if (comp_id, min(block)) in forest.above_pieces:
                above_np = True
            else:
                below_np = True
    return f"{int(above_np)}{int(below_np)}"


def _component_sides(
    complex: ChamberComplex, forest: NestingForest
) -> tuple[frozenset, frozenset]:
    """Split whole components by side; only valid once no circles remain."""
    above, below = set(), set()
    for comp_id in sorted(complex.components):
        pieces = complex.components[comp_id].cut.pieces
        marks = {(comp_id, p) in forest.above_pieces for p in pieces}
        if len(marks) != 1:
            raise InternalContractError(
                f"component {comp_id} straddles the terminal sphere"
            )
        (above if marks.pop() else below).add(comp_id)
    return frozenset(above), frozenset(below)


# ---------------------------------------------------------------------------
# Forest re-expression through one surgery stage

def _surviving_chamber(after: ChamberComplex, raw: RawComplex, chamber: str) -> str:
    """Follow goneball absorption until the chamber is a surviving one."""
    hops = 0
    while chamber not in after.chambers:
        bnd = raw.complex.boundary_components(chamber)
        if len(bnd) != 1:
            raise InternalContractError(
                f"pruned chamber {chamber} is not a goneball"
            )
        chamber = raw.complex.other_side(bnd[0], chamber)
        hops += 1
        if hops > len(raw.complex.chambers):
            raise InternalContractError("absorption walk did not terminate")
    return chamber


def _carry_forest(
    raw: RawComplex, after: FlaggedComplex, forest: NestingForest
) -> NestingForest:
    old_cx = raw.before
    old_faces = face_chambers(old_cx, forest)
    surgered = {(d.component, d.curve) for d in raw.disks.values()}
    survivors = []
    homes = {}
    for cr in forest.circles:
        if (cr.component, cr.curve) in surgered:
            continue
        cur = old_cx.components[cr.component].cut.curves[cr.curve]
        home = raw.piece_home[(cr.component, cur.end_a[0])]
        if home not in after.complex.components:
            continue  # the circle's component was pruned away with its chamber
        survivors.append(cr)
        homes[cr.id] = home
    alive = {cr.id for cr in survivors}
    by_id = {cr.id: cr for cr in forest.circles}

    def nearest_alive(cid):
        cur = by_id[cid].parent
        while cur is not None and cur not in alive:
            cur = by_id[cur].parent
        return cur

    new_circles = tuple(
        CircleRef(cr.id, homes[cr.id], cr.curve, nearest_alive(cr.id))
        for cr in survivors
    )

    scar_ends = {}
    for d in raw.disks.values():
        cur = old_cx.components[d.component].cut.curves[d.curve]
        scar_ends[f"{d.id}~a"] = (d.component, cur.end_a[0])
        scar_ends[f"{d.id}~b"] = (d.component, cur.end_b[0])
    new_above = set()
    for comp_id in after.complex.components:
        origin = raw.comp_origin[comp_id]
        for pid in after.complex.components[comp_id].cut.pieces:
            key = scar_ends.get(pid, (origin, pid))
            if key in forest.above_pieces:
                new_above.add((comp_id, pid))

    # The face left outside everything that survives keeps the identity
    # of the face that was not compressed away: compressing along a disk
    # face merges it into its neighbor, and a vanished wall merges the
    # goneball side into its absorber.
    if new_circles:
        r0 = min(cr.id for cr in new_circles if cr.parent is None)
        old_parent = by_id[r0].parent  # None, pruned, or the disked root
        old_ch = old_faces[old_parent]
        old = by_id[r0]
        region = raw.chamber_of_curve(old_ch, old.component, old.curve)
    else:
        old_roots = forest.roots()
        kids = forest.children()
        if len(old_roots) == 1 and kids.get(old_roots[0]):
            old_ch = old_faces[old_roots[0]]
        else:
            old_ch = old_faces[None]
        remnants = raw.remnants_of(old_ch)
        if len(remnants) != 1:
            raise InternalContractError(
                f"terminal face chamber {old_ch} was itself compressed"
            )
        region = remnants[0]
    outer = _surviving_chamber(after.complex, raw, region)
    return NestingForest(new_circles, outer, frozenset(new_above))


# ---------------------------------------------------------------------------
# Guided runs

COMPLETE = "complete"
STUCK = "stuck"


@dataclass(frozen=True)
class SweepSpec:
    """Declarative sweep input: profile, chosen level, and its forest."""

    profile: LevelProfile
    s_star: Fraction
    forest: NestingForest


@dataclass
class GuidedRun:
    sequence: DecompositionSequence
    status: str
    label: str
    forests: tuple[NestingForest, ...]
    guiding: GuidingRecord | None = None
    certificates: tuple[Certificate, ...] = ()
    problem: str | None = None


def guided_run(
    flagged: FlaggedComplex,
    sweep,
    s_star=None,
    forest: NestingForest | None = None,
    *,
    seq_id: str = "guided",
    policy: SuccessionPolicy | None = None,
    solid_torus_certifies: bool = False,
) -> GuidedRun:
    """Decompose along the disk faces of a balanced level sphere.

    Accepts either a SweepSpec or (profile, s_star, forest).  Each stage
    surgeres the one-boundary-circle faces, re-expresses the forest, and
    checks that the intersection shrank and the balance digits held.
    """
    if isinstance(sweep, SweepSpec):
        profile, s_star, forest = sweep.profile, sweep.s_star, sweep.forest
    else:
        profile = sweep
    if s_star is None or forest is None:
        raise ValueError("guided_run needs a level and a nesting forest")
    label = label_at(profile, s_star)
    if not is_balanced(label):
        raise ValueError(f"level {s_star} is not balanced (label {label})")
    problems = flagged.validate()
    if problems:
        raise ValueError(f"invalid flagged complex: {problems}")
    problems = validate_forest(flagged.complex, forest)
    if problems:
        raise ValueError(f"invalid nesting forest: {problems}")
    seen = _forest_label(flagged.complex, forest)
    if seen != label:
        raise ValueError(
            f"profile label {label} disagrees with forest coloring {seen}"
        )

    stages = [flagged]
    forests = [forest]
    disk_sets: list[tuple[DiskAttachment, ...]] = []
    current, cur_forest = flagged, forest
    while cur_forest.circles:
        disks = guided_disks(current.complex, cur_forest, tag=str(len(disk_sets)))
        if not disks:
            seq = DecompositionSequence(seq_id, tuple(stages), tuple(disk_sets))
            return GuidedRun(
                seq,
                STUCK,
                label,
                tuple(forests),
                problem="no guided face although circles remain",
            )
        after, raw = _decompose_kept(current, disks, policy)
        new_forest = _carry_forest(raw, after, cur_forest)
        if len(new_forest.circles) >= len(cur_forest.circles):
            raise InternalContractError("guided stage did not cut |S cap F|")
        bad = validate_forest(after.complex, new_forest)
        if bad:
            raise InternalContractError(f"re-expressed forest invalid: {bad}")
        if _forest_label(after.complex, new_forest) != label:
            raise InternalContractError("balance digits moved during a stage")
        stages.append(after)
        forests.append(new_forest)
        disk_sets.append(tuple(disks))
        current, cur_forest = after, new_forest

    above, below = _component_sides(current.complex, cur_forest)
    guiding = GuidingRecord(cur_forest.outer_chamber, above, below)
    certs = read_certificates(
        current, guiding=guiding, solid_torus_certifies=solid_torus_certifies
    )
    sequence = DecompositionSequence(seq_id, tuple(stages), tuple(disk_sets))
    terminal_extras = tuple(
        c for c in certs if c.kind == REDUCING_SPHERE and c.witness == "guiding-sphere"
    )
    if terminal_extras:
        sequence.extra_certificates[len(stages) - 1] = terminal_extras
    if (
        flagged.complex.ambient_mode == SPHERE_MODE
        and is_tiny(flagged) is False
        and not certs
    ):
        raise InternalContractError(
            "non-tiny guided run reached an uncertified terminal stage"
        )
    return GuidedRun(
        sequence,
        COMPLETE,
        label,
        tuple(forests),
        guiding=guiding,
        certificates=tuple(certs),
    )


# ---------------------------------------------------------------------------
# Saddle transitions between adjacent level spheres

EQUIVALENT = "equivalent"
TERMINAL_TORUS_BOTH_OCCUPIED = "terminal-torus-both-occupied"
TERMINAL_UNLINKED_TORI = "terminal-unlinked-tori"
TERMINAL_TORUS_PAIR = "terminal-torus-pair"

TANGENCY_KINDS = ("max", "min", "saddle")


@dataclass(frozen=True)
class SaddleCrossing:
    """Two level spheres differing by one tangency, with their labels."""

    kind: str
    label_before: str
    label_after: str


@dataclass(frozen=True)
class SaddleOutcome:
    kind: str
    spheres: int | None = None
    detail: str = ""


def _genus_census(complex: ChamberComplex) -> tuple[list[str], list[str], bool]:
    """(tori, spheres, only_low_genus) over the components."""
    tori, spheres, low = [], [], True
    for c in sorted(complex.components):
        g = complex.genus_of(c)
        if g == 0:
            spheres.append(c)
        elif g == 1:
            tori.append(c)
        else:
            low = False
    return tori, spheres, low


def _empty_solid_torus_side(flagged: FlaggedComplex, torus: str) -> bool:
    cx = flagged.complex
    for ch in cx.incidence[torus]:
        if cx.boundary_components(ch) == [torus] and flagged.flag(ch) == EMPTY:
            return True
    return False


def classify_saddle(flagged: FlaggedComplex, crossing: SaddleCrossing) -> SaddleOutcome:
    """Relate the guided decompositions on the two sides of a tangency.

    Equivalence is the generic outcome; the two concrete terminal
    pictures are reported descriptively when the complex matches them.
    """
    if crossing.kind not in TANGENCY_KINDS:
        raise ValueError(f"unknown tangency kind {crossing.kind!r}")
    for lab in (crossing.label_before, crossing.label_after):
        if lab not in LABELS:
            raise ValueError(f"bad label {lab!r}")
    flips = sum(
        a != b for a, b in zip(crossing.label_before, crossing.label_after)
    )
    if flips > 1:
        raise ValueError("spheres differing by more than one tangency")
    if crossing.kind in ("max", "min"):
        if flips:
            raise ValueError("extrema do not change genus digits")
        return SaddleOutcome(EQUIVALENT, detail="extremum adds a goneball")
    bal_before = is_balanced(crossing.label_before)
    bal_after = is_balanced(crossing.label_after)
    if bal_before and bal_after:
        return SaddleOutcome(EQUIVALENT, detail="balanced on both sides")
    if not bal_before and not bal_after:
        raise ValueError("neither side of the tangency is balanced")
    balanced_label = crossing.label_before if bal_before else crossing.label_after

    tori, spheres, low = _genus_census(flagged.complex)
    in_sphere = flagged.complex.ambient_mode == SPHERE_MODE
    if balanced_label == "00":
        if (
            in_sphere
            and low
            and len(tori) == 1
            and not spheres
            and all(flagged.flag(ch) == OCCUPIED for ch in flagged.complex.chambers)
        ):
            return SaddleOutcome(
                TERMINAL_TORUS_BOTH_OCCUPIED,
                detail="single torus, both sides occupied",
            )
        return SaddleOutcome(EQUIVALENT, detail="planar-balanced side certifies")
    if (
        in_sphere
        and low
        and len(tori) == 2
        and any(_empty_solid_torus_side(flagged, t) for t in tori)
    ):
        return SaddleOutcome(
            TERMINAL_UNLINKED_TORI,
            spheres=len(spheres),
            detail="two tori with an empty solid torus side",
        )
    return SaddleOutcome(EQUIVALENT, detail="non-planar side certifies")


# ---------------------------------------------------------------------------
# Double-saddle vertices and their quadrants

QUADRANTS = ("P", "Q", "N", "R")


@dataclass(frozen=True)
class VertexShape:
    """One of the six local pictures of a double tangency.

    resolution_pairs holds the two multisets of circle counts produced
    by the opposite-quadrant pairs; either may sit on the {P, Q} side.
    """

    name: str
    connected: bool
    l_circles: int
    resolution_pairs: tuple[tuple[int, int], tuple[int, int]]
    admits_nonplanar_pair: bool


VERTEX_SHAPES: dict[str, VertexShape] = {
    s.name: s
    for s in (
        # two separate once-kinked circles, by placement on the sphere
        VertexShape("curls-disjoint", False, 2, ((3, 3), (2, 4)), False),
        VertexShape("curls-nested", False, 2, ((3, 3), (2, 4)), False),
        VertexShape("curls-mutual", False, 2, ((3, 3), (2, 4)), False),
        # one circle through both tangencies, two kink arrangements
        VertexShape("curve-with-two-curls", True, 1, ((2, 2), (1, 3)), False),
        VertexShape("curve-with-curl-in-loop", True, 1, ((2, 2), (1, 3)), False),
        # two circles crossing twice; the only shape without a
        # three-circle resolution, hence the only P=Q=11 candidate
        VertexShape("bigon", True, 2, ((1, 1), (2, 2)), True),
    )
}


@dataclass
class QuadrantConfig:
    """Local data at a graphic vertex: shape, resolutions, labels."""

    shape: str
    circles: dict
    labels: dict


@dataclass
class VertexReport:
    shape: str
    labels: dict
    circles: dict
    balanced_pair: str | None
    equivalent: bool | None
    reason: str


_UPWARD_EDGES = (("R", "P"), ("R", "Q"), ("P", "N"), ("Q", "N"))


def classify_vertex(config: QuadrantConfig) -> VertexReport:
    """Validate a double-saddle square and classify its quadrant pair."""
    shape = VERTEX_SHAPES.get(config.shape)
    if shape is None:
        raise ValueError(f"configuration {config.shape!r} not among the six")
    for mapping, what in ((config.circles, "circles"), (config.labels, "labels")):
        if set(mapping) != set(QUADRANTS):
            raise ValueError(f"{what} must cover exactly quadrants P, Q, N, R")
    counts = {q: config.circles[q] for q in QUADRANTS}
    for q, n in counts.items():
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"quadrant {q} circle count must be a positive int")
    got = (
        tuple(sorted((counts["P"], counts["Q"]))),
        tuple(sorted((counts["N"], counts["R"]))),
    )
    m1, m2 = shape.resolution_pairs
    if got not in ((m1, m2), (m2, m1)):
        raise ValueError(
            f"resolution counts {got} impossible for shape {shape.name}"
        )
    labels = {q: config.labels[q] for q in QUADRANTS}
    for q, lab in labels.items():
        if lab not in LABELS:
            raise ValueError(f"bad label {lab!r} at quadrant {q}")
    for low, high in _UPWARD_EDGES:
        a, b = labels[low], labels[high]
        if sum(x != y for x, y in zip(a, b)) > 1:
            raise ValueError(f"edge {low}-{high} changes both digits")
        if int(a[0]) < int(b[0]):
            raise ValueError(f"above digit rises across {low}-{high}")
        if int(a[1]) > int(b[1]):
            raise ValueError(f"below digit falls across {low}-{high}")
    if labels["P"] == labels["Q"] == "11":
        if not shape.admits_nonplanar_pair:
            raise ValueError(
                f"shape {shape.name} cannot carry non-planar balanced P and Q"
            )
        if counts["P"] != 1 or counts["Q"] != 1:
            raise ValueError(
                "non-planar balanced P and Q resolve to single circles"
            )

    bal_p, bal_q = is_balanced(labels["P"]), is_balanced(labels["Q"])
    if not (bal_p and bal_q):
        return VertexReport(
            shape.name, labels, counts, None, None, "no balanced opposite pair"
        )
    if is_balanced(labels["N"]) or is_balanced(labels["R"]):
        return VertexReport(
            shape.name,
            labels,
            counts,
            "adjacent",
            True,
            "a neighboring quadrant is balanced",
        )
    if labels["P"] == labels["Q"] == "00":
        kind, reason = "planar", "both resolutions cap the same sphere"
    elif labels["P"] == labels["Q"] == "11":
        kind, reason = "nonplanar", "meridian and longitude of an unknotted torus"
    else:
        kind, reason = "mixed", "the torus cannot be the only defining surface"
    return VertexReport(shape.name, labels, counts, kind, True, reason)


# ---------------------------------------------------------------------------
# Two-parameter graphics and the balanced band

@dataclass(frozen=True)
class Graphic:
    """Grid of region labels over I x I, or I x S1 when wrap is set.

    columns[t][r] is the label of the cell in column t, row r, rows
    running bottom to top.
    """

    columns: tuple
    wrap: bool = False

    def validate(self) -> list[str]:
        problems = []
        if not self.columns or not self.columns[0]:
            return ["empty-graphic"]
        rows = len(self.columns[0])
        for t, col in enumerate(self.columns):
            if len(col) != rows:
                problems.append(f"ragged-column:{t}")
                continue
            for r, lab in enumerate(col):
                if lab not in LABELS:
                    problems.append(f"bad-label:{t}/{r}")
            for r in range(rows - 1):
                a, b = col[r], col[r + 1]
                if a not in LABELS or b not in LABELS:
                    continue
                if sum(x != y for x, y in zip(a, b)) > 1:
                    problems.append(f"double-jump:{t}/{r}")
                if int(a[0]) < int(b[0]):
                    problems.append(f"above-monotone:{t}/{r}")
                if int(a[1]) > int(b[1]):
                    problems.append(f"below-monotone:{t}/{r}")
        if problems:
            return problems
        pairs = list(range(len(self.columns) - 1))
        for t in pairs:
            for r in range(rows):
                a, b = self.columns[t][r], self.columns[t + 1][r]
                if sum(x != y for x, y in zip(a, b)) > 1:
                    problems.append(f"wall-jump:{t}/{r}")
        if self.wrap and len(self.columns) > 1:
            for r in range(rows):
                a, b = self.columns[-1][r], self.columns[0][r]
                if sum(x != y for x, y in zip(a, b)) > 1:
                    problems.append(f"wrap-jump:{r}")
        return problems


@dataclass
class BandReport:
    cells: frozenset
    column_intervals: tuple
    single_interval: bool
    connected: bool
    path: tuple | None
    circle: tuple | None


def _band_neighbors(graphic: Graphic, cells, c, r):
    cols = len(graphic.columns)
    for dc in (-1, 0, 1):
        for dr in (-1, 0, 1):
            if dc == dr == 0:
                continue
            nc, nr = c + dc, r + dr
            if graphic.wrap:
                nc %= cols
            if 0 <= nc < cols and (nc, nr) in cells:
                yield nc, nr


def _cell_path(graphic: Graphic, cells, start, goal):
    if start not in cells or goal not in cells:
        return None
    prev = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            path = []
            while cur is not None:
                path.append(cur)
                cur = prev[cur]
            return tuple(reversed(path))
        for nxt in _band_neighbors(graphic, cells, *cur):
            if nxt not in prev:
                prev[nxt] = cur
                queue.append(nxt)
    return None


def _band_circle(graphic: Graphic, runs):
    """A cell cycle winding once around a wrapped graphic's band."""
    cols = len(graphic.columns)
    if any(run is None for run in runs):
        return None
    # walk on the unrolled cylinder: column c, then climb into run c+1
    lo0, hi0 = runs[0]
    for start_row in range(lo0, hi0 + 1):
        row = start_row
        trail = [(0, row)]
        ok = True
        for c in range(cols):
            lo_next, hi_next = runs[(c + 1) % cols]
            target = start_row if c == cols - 1 else max(lo_next, min(row, hi_next))
            if not lo_next <= target <= hi_next:
                ok = False
                break
            lo_c, hi_c = runs[c]
            step = 1 if target > row else -1
            while abs(target - row) > 1:
                row += step
                if not lo_c <= row <= hi_c:
                    ok = False
                    break
                trail.append((c, row))
            if not ok:
                break
            row = target
            if c < cols - 1:
                trail.append((c + 1, row))
        if ok and row == start_row:
            return tuple(trail)
    return None


def balanced_band(
    graphic: Graphic, start_row: int | None = None, end_row: int | None = None
) -> BandReport:
    """Extract the balanced region set B and check its band structure."""
    problems = graphic.validate()
    if problems:
        raise ValueError(f"invalid graphic: {problems}")
    cols = len(graphic.columns)
    rows = len(graphic.columns[0])
    cells = frozenset(
        (c, r)
        for c in range(cols)
        for r in range(rows)
        if is_balanced(graphic.columns[c][r])
    )
    intervals = []
    single = True
    for c in range(cols):
        picked = [r for r in range(rows) if (c, r) in cells]
        if not picked:
            intervals.append(None)
            single = False
            continue
        lo, hi = picked[0], picked[-1]
        if picked != list(range(lo, hi + 1)):
            single = False
        intervals.append((lo, hi))
    connected = False
    if cells:
        seen = set()
        stack = [next(iter(cells))]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(
                n for n in _band_neighbors(graphic, cells, *cur) if n not in seen
            )
        connected = len(seen) == len(cells)

    path = None
    if not graphic.wrap and intervals and intervals[0] and intervals[-1]:
        s = start_row if start_row is not None else intervals[0][0]
        g = end_row if end_row is not None else intervals[-1][0]
        if (0, s) not in cells or (cols - 1, g) not in cells:
            raise ValueError("requested band endpoints are not balanced")
        path = _cell_path(graphic, cells, (0, s), (cols - 1, g))
    circle = _band_circle(graphic, tuple(intervals)) if graphic.wrap else None
    return BandReport(cells, tuple(intervals), single, connected, path, circle)


# ---------------------------------------------------------------------------
# Level compression

@dataclass(frozen=True)
class GuidedFace:
    """One disk face of a level sphere: inside a circle, or the outer face."""

    forest: NestingForest
    circle: str | None = None


@dataclass(frozen=True)
class LevelCompressOutcome:
    kind: str
    spheres: int | None = None
    detail: str = ""


def _face_disk(
    complex: ChamberComplex, face: GuidedFace, tag: str
) -> DiskAttachment:
    forest = face.forest
    problems = validate_forest(complex, forest)
    if problems:
        raise ValueError(f"invalid nesting forest: {problems}")
    kids = forest.children()
    if face.circle is None:
        roots = forest.roots()
        if len(roots) != 1:
            raise ValueError("outer face is not a guided face: several roots")
        cid, chamber = roots[0], face_chambers(complex, forest)[None]
    else:
        cid = face.circle
        if kids.get(cid):
            raise ValueError("not a guided face: circles nested inside")
        chamber = face_chambers(complex, forest)[cid]
    cr = forest.circle(cid)
    comp = complex.components[cr.component]
    busy = {
        c.curve
        for c in forest.circles
        if c.component == cr.component and c.curve != cr.curve
    }
    return DiskAttachment(
        id=f"{cid}~d{tag}",
        chamber=chamber,
        component=cr.component,
        curve=cr.curve,
        enclosed_hint=_enclosure_hint(comp, cr.curve, busy),
    )


def level_compress_check(
    flagged: FlaggedComplex, profile: LevelProfile, e, face: GuidedFace
) -> LevelCompressOutcome:
    """Compare a complex against its compression along one guided face.

    The compression happens at a level below a balanced interval; the
    outcome is equivalence except in the concrete torus-pair picture,
    which is reported descriptively.
    """
    problems = flagged.validate()
    if problems:
        raise ValueError(f"invalid flagged complex: {problems}")
    if all(
        flagged.complex.genus_of(c) == 0 for c in flagged.complex.components
    ):
        raise ValueError("complex consists only of spheres")
    if is_tiny(flagged) is True:
        raise ValueError("tiny complex")
    _checked(profile)
    level = _level(e)
    profile.digits(level)  # rejects event levels
    band = next(
        (iv for iv in balanced_levels(profile) if iv.hi > level), None
    )
    if band is None:
        raise ValueError("no balanced interval above the level")
    disk = _face_disk(flagged.complex, face, tag="lc")
    after, _raw = _decompose_kept(flagged, [disk])
    if canonical_form(after.complex, after.flags) == canonical_form(
        flagged.complex, flagged.flags
    ):
        return LevelCompressOutcome(
            EQUIVALENT, detail="compression absorbed as a goneball"
        )
    if band.label == "00":
        return LevelCompressOutcome(
            EQUIVALENT, detail="planar balance survives the compression"
        )
    tori, spheres, low = _genus_census(after.complex)
    if low and len(tori) == 2:
        return LevelCompressOutcome(
            TERMINAL_TORUS_PAIR,
            spheres=len(spheres),
            detail="genus one above and below the compression level",
        )
    return LevelCompressOutcome(
        EQUIVALENT, detail="balance or a certificate persists"
    )
