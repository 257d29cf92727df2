"""Seeded random instances: scenes, disk sets, sweeps, graphics, configs.

Every generator threads an explicit random.Random, and rng_for seeds from
a string so a (seed, index) pair rebuilds the same instance in any
process.  Instances are valid by construction and each builder ends with
the matching validator, so fuzzing never starts from garbage.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .certificates import Bullseye
from .flags import EMPTY, OCCUPIED, FlaggedComplex, SuccessionPolicy, decompose, is_tiny
from .scenario import Scenario, SequenceSpec, scenario_problems
from .scene import (
    ANNOTATED_MODE,
    BALL_ANNOTATION,
    NO,
    SOLID_TORUS_ANNOTATION,
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
    ValidationReport,
    _validate_disk_set,
    annotation_closure,
    closed_component,
    refine_piece,
    validate_scenario,
)
from .surgery import InternalContractError
from .sweepout import (
    ABOVE,
    BELOW,
    BIRTH,
    DEATH,
    LABELS,
    SADDLE,
    TANGENCY_KINDS,
    VERTEX_SHAPES,
    CircleRef,
    Event,
    Graphic,
    LevelProfile,
    NestingForest,
    QuadrantConfig,
    SaddleCrossing,
    SweepSpec,
    _derive_nesting,
    _forest_label,
    balanced_levels,
    validate_forest,
)


def rng_for(seed: int, index: int) -> random.Random:
    # string seeding hashes with sha512, stable across processes and runs
    return random.Random(f"{seed}:{index}")


# ---------------------------------------------------------------------------
# Cut complexes and chamber complexes


def _add_handle_curve(cut: CutComplex, piece_id: str, curve_id: str) -> CutComplex:
    """Trade one unit of piece genus for a curve joining the piece to itself."""
    old = cut.pieces[piece_id]
    sa, sb = curve_id + "a", curve_id + "b"
    pieces = dict(cut.pieces)
    pieces[piece_id] = Piece(piece_id, old.genus - 1, old.slots + (sa, sb))
    curves = dict(cut.curves)
    curves[curve_id] = Curve(curve_id, (piece_id, sa), (piece_id, sb))
    return CutComplex(pieces=pieces, curves=curves)


def random_component(
    rng: random.Random, comp_id: str, genus: int, max_splits: int = 3
) -> SurfaceComponent:
    """Random cut complex of the given total genus: splits, then handles."""
    cut = closed_component(comp_id, genus).cut
    serial = 0
    for _ in range(rng.randint(0, max_splits)):
        pid = rng.choice(sorted(cut.pieces))
        piece = cut.pieces[pid]
        slots = sorted(piece.slots)
        rng.shuffle(slots)
        k = rng.randint(0, len(slots))
        serial += 1
        cut = refine_piece(
            cut,
            pid,
            (g1 := rng.randint(0, piece.genus), piece.genus - g1),
            (tuple(slots[:k]), tuple(slots[k:])),
            (f"{pid}.a{serial}", f"{pid}.b{serial}", f"{comp_id}.c{serial}"),
        )
    for pid in sorted(cut.pieces):
        while cut.pieces[pid].genus > 0 and rng.random() < 0.3:
            serial += 1
            cut = _add_handle_curve(cut, pid, f"{comp_id}.h{serial}")
    return SurfaceComponent(comp_id, genus, cut)


def random_complex(
    rng: random.Random,
    max_components: int = 4,
    max_genus: int = 3,
    mode: str | None = None,
    max_splits: int = 3,
) -> ChamberComplex:
    """Random chamber tree first, then a random cut complex per wall."""
    mode = mode or rng.choice((SPHERE_MODE, ANNOTATED_MODE))
    n = rng.randint(1, max_components)
    chambers = {f"r{i}": Chamber(f"r{i}") for i in range(n + 1)}
    components: dict[str, SurfaceComponent] = {}
    incidence: dict[str, tuple[str, str]] = {}
    for i in range(1, n + 1):
        comp_id = f"W{i}"
        components[comp_id] = random_component(
            rng, comp_id, rng.randint(0, max_genus), max_splits
        )
        incidence[comp_id] = (f"r{rng.randrange(i)}", f"r{i}")
    if mode == ANNOTATED_MODE:
        for ch in sorted(chambers):
            bdry = [c for c, pair in incidence.items() if ch in pair]
            if len(bdry) != 1 or rng.random() < 0.5:
                continue
            g = components[bdry[0]].genus
            if g == 0:
                ann = rng.choice((BALL_ANNOTATION, TopAnnotation(is_ball=NO)))
            elif g == 1:
                ann = rng.choice(
                    (SOLID_TORUS_ANNOTATION, TopAnnotation(is_handlebody=NO))
                )
            else:
                ann = TopAnnotation(is_handlebody=rng.choice((YES, NO)))
            chambers[ch] = Chamber(ch, ann)
    cx = ChamberComplex(
        ambient_mode=mode,
        components=components,
        chambers=chambers,
        incidence=incidence,
    )
    cx, conflicts = annotation_closure(cx)
    if conflicts:
        raise InternalContractError(f"generated annotations conflict: {conflicts}")
    report = validate_scenario(cx)
    if not report.ok:
        raise InternalContractError(f"generated complex invalid: {report.codes()}")
    return cx


def random_flags(
    rng: random.Random, cx: ChamberComplex, avoid_tiny: bool = False, tries: int = 12
) -> dict[str, str]:
    """Valid flag assignment, optionally re-rolled until the scene is non-tiny."""
    for _ in range(tries):
        flags = {}
        for ch in sorted(cx.chambers):
            ann = cx.chambers[ch].annotation
            if ann.is_ball == YES or ann.is_handlebody == NO:
                flags[ch] = OCCUPIED
            else:
                flags[ch] = rng.choice((OCCUPIED, EMPTY))
        if not avoid_tiny or is_tiny(FlaggedComplex(cx, flags)) is False:
            return flags
    # all-occupied is always valid and, with >= 2 chambers, never tiny
    return {ch: OCCUPIED for ch in cx.chambers}


# ---------------------------------------------------------------------------
# Disk sets and decomposition chains


def _disk_candidates(cx: ChamberComplex) -> list[tuple[str, str, str]]:
    out = []
    for comp_id in sorted(cx.components):
        comp = cx.components[comp_id]
        for curve_id in sorted(comp.cut.curves):
            for chamber in cx.incidence[comp_id]:
                out.append((chamber, comp_id, curve_id))
    return out


def _admits(cx: ChamberComplex, disks: list[DiskAttachment]) -> bool:
    report = ValidationReport()
    _validate_disk_set(cx, disks, report, where="generate")
    return report.ok


def random_disk_set(
    rng: random.Random, cx: ChamberComplex, max_disks: int = 4, prefix: str = "d"
) -> list[DiskAttachment]:
    """Valid disk set grown greedily; nesting declared where enclosures nest."""
    if max_disks < 1:
        return []
    candidates = _disk_candidates(cx)
    rng.shuffle(candidates)
    budget = rng.randint(1, max_disks)
    disks: list[DiskAttachment] = []
    for chamber, comp_id, curve_id in candidates:
        if len(disks) >= budget:
            break
        new = DiskAttachment(f"{prefix}{len(disks)}", chamber, comp_id, curve_id)
        trial = _derive_nesting(cx, disks + [new])
        if _admits(cx, trial):
            disks = trial
    return disks


def random_extra_disk(
    rng: random.Random,
    cx: ChamberComplex,
    disks: list[DiskAttachment],
    disk_id: str = "e0",
) -> DiskAttachment | None:
    """One more disk compatible with an existing set, or None."""
    candidates = _disk_candidates(cx)
    rng.shuffle(candidates)
    for chamber, comp_id, curve_id in candidates:
        new = DiskAttachment(disk_id, chamber, comp_id, curve_id)
        # derive a parent for the newcomer only; the set keeps its own
        cand = _derive_nesting(cx, list(disks) + [new])[-1]
        if _admits(cx, list(disks) + [cand]):
            return cand
    return None


def random_chain(
    rng: random.Random,
    max_stages: int = 4,
    max_components: int = 4,
    max_genus: int = 3,
    max_disks: int = 4,
    mode: str | None = None,
    avoid_tiny: bool = True,
) -> tuple[list[FlaggedComplex], list[tuple[DiskAttachment, ...]]]:
    """Start scene plus a consistent decomposition chain from random disks."""
    cx = random_complex(rng, max_components, max_genus, mode)
    flagged = FlaggedComplex(cx, random_flags(rng, cx, avoid_tiny=avoid_tiny))
    stages = [flagged]
    disk_sets: list[tuple[DiskAttachment, ...]] = []
    for stage in range(rng.randint(1, max_stages)):
        disks = random_disk_set(rng, flagged.complex, max_disks, prefix=f"s{stage}d")
        if not disks:
            break
        flagged = decompose(flagged, disks)
        stages.append(flagged)
        disk_sets.append(tuple(disks))
    return stages, disk_sets


# ---------------------------------------------------------------------------
# Profiles and guided scenes


def random_profile(
    rng: random.Random, max_events: int = 8, balanced: str | None = None
) -> LevelProfile:
    """One above-effect and one below-effect saddle among neutral events.

    balanced picks the label of the single balanced gap: "00" puts the
    above-effect saddle first, "11" the below-effect one.
    """
    n = rng.randint(2, max(2, max_events))
    i, j = sorted(rng.sample(range(n), 2))
    if balanced is None:
        balanced = rng.choice(("00", "11"))
    above_at, below_at = (i, j) if balanced == "00" else (j, i)
    events = []
    for k in range(n):
        s = Fraction(k + 1, n + 1)
        if k == above_at:
            events.append(Event(s, SADDLE, effect=ABOVE))
        elif k == below_at:
            events.append(Event(s, SADDLE, effect=BELOW))
        else:
            events.append(Event(s, rng.choice((BIRTH, DEATH, SADDLE))))
    profile = LevelProfile(tuple(events))
    problems = profile.validate()
    if problems:
        raise InternalContractError(f"generated profile invalid: {problems}")
    return profile


def balanced_midpoint(profile: LevelProfile) -> Fraction:
    """Generic level inside the first balanced interval.

    Balanced intervals may span label-neutral events, so midpoint of the
    first event-free sub-gap rather than of the interval itself.
    """
    iv = balanced_levels(profile)[0]
    inside = sorted(ev.s for ev in profile.events if iv.lo < ev.s < iv.hi)
    hi = inside[0] if inside else iv.hi
    return (iv.lo + hi) / 2


def _chain_scene(rng: random.Random, mode: str) -> tuple[ChamberComplex, NestingForest]:
    """One wall crossing the sphere in nested circles along a chain."""
    k = rng.choice((1, 3))
    genera = (
        [rng.randint(1, 2)]
        + [rng.randint(0, 1) for _ in range(k - 1)]
        + [rng.randint(1, 2)]
    )
    pieces, curves = {}, {}
    for idx, g in enumerate(genera):
        slots = ()
        if idx > 0:
            slots += ("l",)
        if idx < len(genera) - 1:
            slots += ("r",)
        pieces[f"p{idx}"] = Piece(f"p{idx}", g, slots)
        if idx:
            curves[f"c{idx}"] = Curve(f"c{idx}", (f"p{idx - 1}", "r"), (f"p{idx}", "l"))
    cut = CutComplex(pieces=pieces, curves=curves)
    for pid in sorted(pieces):
        if cut.pieces[pid].genus > 0 and rng.random() < 0.3:
            cut = _add_handle_curve(cut, pid, f"h{pid}")
    comp = SurfaceComponent("W", cut.genus(), cut)
    cx = ChamberComplex(
        ambient_mode=mode,
        components={"W": comp},
        chambers={"out": Chamber("out"), "in": Chamber("in")},
        incidence={"W": ("out", "in")},
    )
    circles = tuple(
        CircleRef(f"x{idx}", "W", f"c{idx}", None if idx == 1 else f"x{idx - 1}")
        for idx in range(1, k + 1)
    )
    above = frozenset({("W", f"p{idx}") for idx in range(0, k + 1, 2)})
    return cx, NestingForest(circles, "out", above)


def _star_scene(rng: random.Random, mode: str) -> tuple[ChamberComplex, NestingForest]:
    """Hub piece above the sphere, sibling circles around each arm."""
    k = rng.randint(2, 3)
    pieces = {"hub": Piece("hub", rng.randint(1, 2), tuple(f"a{i}" for i in range(1, k + 1)))}
    curves = {}
    for i in range(1, k + 1):
        g = 1 if i == 1 else rng.randint(0, 1)
        pieces[f"arm{i}"] = Piece(f"arm{i}", g, ("l",))
        curves[f"c{i}"] = Curve(f"c{i}", ("hub", f"a{i}"), (f"arm{i}", "l"))
    cut = CutComplex(pieces=pieces, curves=curves)
    comp = SurfaceComponent("W", cut.genus(), cut)
    cx = ChamberComplex(
        ambient_mode=mode,
        components={"W": comp},
        chambers={"out": Chamber("out"), "in": Chamber("in")},
        incidence={"W": ("out", "in")},
    )
    circles = tuple(CircleRef(f"x{i}", "W", f"c{i}") for i in range(1, k + 1))
    return cx, NestingForest(circles, "out", frozenset({("W", "hub")}))


def _split_scene(rng: random.Random, mode: str) -> tuple[ChamberComplex, NestingForest]:
    """No circles: whole walls on either side of the sphere."""
    k = rng.randint(2, 4)
    chambers = {"m": Chamber("m")}
    components: dict[str, SurfaceComponent] = {}
    incidence: dict[str, tuple[str, str]] = {}
    above = set()
    for i in range(1, k + 1):
        comp_id = f"T{i}"
        genus = rng.randint(1, 2) if i <= 2 else rng.randint(0, 2)
        components[comp_id] = random_component(rng, comp_id, genus, max_splits=2)
        chambers[f"v{i}"] = Chamber(f"v{i}")
        incidence[comp_id] = ("m", f"v{i}")
        if i % 2 == 0:
            above.update((comp_id, p) for p in components[comp_id].cut.pieces)
    cx = ChamberComplex(
        ambient_mode=mode, components=components, chambers=chambers, incidence=incidence
    )
    return cx, NestingForest((), "m", frozenset(above))


def random_guided_scene(
    rng: random.Random, max_components: int = 4, mode: str | None = None
) -> tuple[FlaggedComplex, SweepSpec]:
    """Non-tiny scene with a matching balanced sweep; completes with a
    certificate because the extreme blocks on each side carry genus."""
    mode = mode or SPHERE_MODE
    build = rng.choice((_chain_scene, _star_scene, _split_scene))
    cx, forest = build(rng, mode)

    # bystander walls hanging off existing chambers, on either side
    above = set(forest.above_pieces)
    components = dict(cx.components)
    chambers = dict(cx.chambers)
    incidence = dict(cx.incidence)
    for e in range(rng.randint(0, max(0, max_components - len(components)))):
        comp_id = f"V{e}"
        components[comp_id] = random_component(rng, comp_id, rng.randint(0, 2), 2)
        anchor = rng.choice(sorted(chambers))
        chambers[f"w{e}"] = Chamber(f"w{e}")
        incidence[comp_id] = (anchor, f"w{e}")
        if rng.random() < 0.5:
            above.update((comp_id, p) for p in components[comp_id].cut.pieces)
    cx = ChamberComplex(
        ambient_mode=mode, components=components, chambers=chambers, incidence=incidence
    )
    forest = NestingForest(forest.circles, forest.outer_chamber, frozenset(above))

    cx, conflicts = annotation_closure(cx)
    if conflicts:
        raise InternalContractError(f"guided scene conflicts: {conflicts}")
    report = validate_scenario(cx)
    if not report.ok:
        raise InternalContractError(f"guided scene invalid: {report.codes()}")
    bad = validate_forest(cx, forest)
    if bad:
        raise InternalContractError(f"guided forest invalid: {bad}")

    flags = random_flags(rng, cx, avoid_tiny=True)
    label = _forest_label(cx, forest)
    profile = random_profile(rng, balanced=label)
    spec = SweepSpec(profile, balanced_midpoint(profile), forest)
    return FlaggedComplex(cx, flags), spec


# ---------------------------------------------------------------------------
# Graphics


def random_graphic(
    rng: random.Random,
    max_cols: int = 12,
    max_rows: int = 12,
    wrap: bool = False,
    band: str | None = None,
) -> Graphic:
    """Monotone staircase grid whose balanced band threads one pivot row."""
    band = band or rng.choice(("00", "11"))
    cols = rng.randint(3 if wrap else 1, max(3, max_cols))
    rows = rng.randint(2, max(2, max_rows))
    pivot = rng.randrange(rows)
    columns = []
    for _ in range(cols):
        if band == "00":
            a = rng.randint(-1, pivot - 1)
            b = rng.randint(pivot, rows - 1)
        else:
            a = rng.randint(pivot, rows - 1)
            b = rng.randint(-1, pivot - 1)
        columns.append(tuple(f"{int(r <= a)}{int(r > b)}" for r in range(rows)))
    graphic = Graphic(tuple(columns), wrap)
    problems = graphic.validate()
    if problems:
        raise InternalContractError(f"generated graphic invalid: {problems}")
    return graphic


# ---------------------------------------------------------------------------
# Saddle crossings and vertex configurations


def random_saddle_crossing(rng: random.Random) -> SaddleCrossing:
    """Tangency with at least one balanced side: the classifiable kinds."""
    balanced = rng.choice(("00", "11"))
    kind = rng.choice(TANGENCY_KINDS)
    if kind != "saddle":
        return SaddleCrossing(kind, balanced, balanced)
    digit = rng.randrange(2)
    flipped = "1" if balanced[digit] == "0" else "0"
    other = balanced[:digit] + flipped + balanced[digit + 1 :]
    if rng.random() < 0.5:
        return SaddleCrossing(kind, balanced, other)
    return SaddleCrossing(kind, other, balanced)


_UP_EDGES = (("R", "P"), ("R", "Q"), ("P", "N"), ("Q", "N"))


def _square_ok(labels: dict[str, str]) -> bool:
    for lo, hi in _UP_EDGES:
        a, b = labels[lo], labels[hi]
        if sum(x != y for x, y in zip(a, b)) > 1:
            return False
        if a[0] < b[0] or a[1] > b[1]:
            return False
    return True


_VALID_SQUARES = tuple(
    {"P": p, "Q": q, "N": n, "R": r}
    for p in LABELS
    for q in LABELS
    for n in LABELS
    for r in LABELS
    if _square_ok({"P": p, "Q": q, "N": n, "R": r})
)


def random_quadrant_config(rng: random.Random) -> QuadrantConfig:
    """Valid vertex data: shape, resolution counts, monotone label square."""
    name = rng.choice(sorted(VERTEX_SHAPES))
    shape = VERTEX_SHAPES[name]
    m1, m2 = shape.resolution_pairs
    if rng.random() < 0.5:
        m1, m2 = m2, m1
    p, q = m1 if rng.random() < 0.5 else (m1[1], m1[0])
    n, r = m2 if rng.random() < 0.5 else (m2[1], m2[0])
    circles = {"P": p, "Q": q, "N": n, "R": r}
    squares = [
        sq
        for sq in _VALID_SQUARES
        if sq["P"] != "11" or sq["Q"] != "11" or (shape.admits_nonplanar_pair and p == q == 1)
    ]
    return QuadrantConfig(name, circles, dict(rng.choice(squares)))


# ---------------------------------------------------------------------------
# Whole scenarios


_MINIMAL_SCENARIO: Scenario | None = None


def _minimal_scenario() -> Scenario:
    """The one scene inside bounds (1 component, genus 1, 0 disks)."""
    global _MINIMAL_SCENARIO
    if _MINIMAL_SCENARIO is None:
        comp = closed_component("W1", 1)
        cx = ChamberComplex(
            ambient_mode=SPHERE_MODE,
            components={"W1": comp},
            chambers={"r0": Chamber("r0"), "r1": Chamber("r1")},
            incidence={"W1": ("r0", "r1")},
        )
        cx, _ = annotation_closure(cx)
        _MINIMAL_SCENARIO = Scenario(
            complex=cx, flags={"r0": OCCUPIED, "r1": OCCUPIED}
        )
    return _MINIMAL_SCENARIO


def random_scenario(
    rng: random.Random,
    max_components: int = 4,
    max_genus: int = 3,
    max_disks: int = 4,
    max_sequence: int = 4,
    mode: str | None = None,
    policy: str = "default",
) -> Scenario:
    """One scenario feeding every fuzz property: a guided scene plus disk
    sets, a graphic, classifier inputs, and single-step sequences."""
    if max_components == 1 and max_genus == 1 and max_disks == 0:
        return _minimal_scenario()
    flagged, sweep = random_guided_scene(rng, max_components, mode)
    cx = flagged.complex
    disks = random_disk_set(rng, cx, max_disks)
    disk_sets = {"D0": tuple(disks)} if disks else {}
    extra = random_extra_disk(rng, cx, disks) if disks else None

    sequences = []
    if disks:
        for s in range(rng.randint(1, max(1, min(2, max_sequence)))):
            sequences.append(
                SequenceSpec(
                    f"q{s}",
                    flagged.flags if s == 0 else random_flags(rng, cx, avoid_tiny=True),
                    ("D0",),
                )
            )

    sc = Scenario(
        complex=cx,
        flags=flagged.flags,
        disk_sets=disk_sets,
        policy=SuccessionPolicy(strategy=policy),
        profile=sweep.profile,
        sweep=sweep,
        graphic=random_graphic(rng, wrap=rng.random() < 0.4),
        vertex=random_quadrant_config(rng),
        saddle=random_saddle_crossing(rng),
        bullseye=Bullseye(
            host_chamber=rng.choice(sorted(cx.chambers)),
            k=rng.randint(1, 2),
            blank=rng.random() < 0.25,
        ),
        extra_disk=extra,
        sequences=tuple(sequences),
    )
    problems = scenario_problems(sc)
    if problems:
        raise InternalContractError(f"generated scenario invalid: {problems}")
    return sc
