"""Static combinatorial model of a closed surface inside an ambient manifold
in which every closed surface separates.

The surface F is a disjoint union of closed orientable components.  Each
component is presented as a *cut complex*: compact pieces (genus + boundary
slots) glued in pairs along curves.  The complementary regions of F are
*chambers*; because every closed surface separates, the chamber/component
incidence graph is a tree with one more chamber than components.

Everything here is plain data plus pure functions.  Values are never mutated
after validation; downstream engines build new complexes instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

YES = "yes"
NO = "no"
UNKNOWN = "unknown"
TRISTATES = (YES, NO, UNKNOWN)

SPHERE_MODE = "sphere"
ANNOTATED_MODE = "annotated"

OCCUPIED = "occupied"
EMPTY = "empty"

# Characters reserved for engine-generated descendant ids (splits, scars,
# rims, bullseye splices).  User scenarios may not use them.
RESERVED_ID_CHARS = (":", "~")


def valid_id(s: object) -> bool:
    """User-facing id rule: engine-reserved characters rejected."""
    return isinstance(s, str) and s != "" and not any(c in s for c in RESERVED_ID_CHARS)


def internal_id_ok(s: object) -> bool:
    """Engine-generated ids (splits, scars, splices) may use reserved chars."""
    return isinstance(s, str) and s != ""


@dataclass(frozen=True)
class Piece:
    """A compact subsurface: genus plus named boundary slots."""

    id: str
    genus: int
    slots: tuple[str, ...]

    def euler(self) -> int:
        return 2 - 2 * self.genus - len(self.slots)


@dataclass(frozen=True)
class Curve:
    """A gluing circle joining two slots (possibly both on one piece)."""

    id: str
    end_a: tuple[str, str]  # (piece id, slot name)
    end_b: tuple[str, str]

    def ends(self) -> tuple[tuple[str, str], tuple[str, str]]:
        return (self.end_a, self.end_b)

    def pieces(self) -> tuple[str, str]:
        return (self.end_a[0], self.end_b[0])


@dataclass(frozen=True)
class CutComplex:
    """Pieces glued along curves; every slot is used by exactly one curve end."""

    pieces: dict[str, Piece]
    curves: dict[str, Curve]

    def slot_usage(self) -> dict[tuple[str, str], list[str]]:
        used: dict[tuple[str, str], list[str]] = {}
        for c in self.curves.values():
            for end in c.ends():
                used.setdefault(end, []).append(c.id)
        return used

    def piece_components(self, excluded_curves: frozenset[str] = frozenset()) -> list[frozenset[str]]:
        """Connected components of the piece multigraph, some curves removed."""
        adj: dict[str, set[str]] = {pid: set() for pid in self.pieces}
        for c in self.curves.values():
            if c.id in excluded_curves:
                continue
            pa, pb = c.pieces()
            adj[pa].add(pb)
            adj[pb].add(pa)
        seen: set[str] = set()
        out: list[frozenset[str]] = []
        for start in sorted(self.pieces):
            if start in seen:
                continue
            stack = [start]
            comp: set[str] = set()
            while stack:
                p = stack.pop()
                if p in comp:
                    continue
                comp.add(p)
                stack.extend(adj[p] - comp)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def internal_curves(self, piece_subset: frozenset[str], excluded: frozenset[str] = frozenset()) -> list[str]:
        return [
            c.id
            for c in self.curves.values()
            if c.id not in excluded and all(p in piece_subset for p in c.pieces())
        ]

    def subset_genus(self, piece_subset: frozenset[str], excluded: frozenset[str] = frozenset()) -> int:
        """Genus of the (connected) subsurface spanned by a piece subset.

        Boundary circles are every slot not matched by an internal,
        non-excluded curve.  Genus is read off the Euler characteristic.
        """
        chi = sum(self.pieces[p].euler() for p in piece_subset)
        internal = self.internal_curves(piece_subset, excluded)
        total_slots = sum(len(self.pieces[p].slots) for p in piece_subset)
        boundary = total_slots - 2 * len(internal)
        genus2 = 2 - chi - boundary
        if genus2 < 0 or genus2 % 2:
            raise ValueError("inconsistent subsurface Euler count")
        return genus2 // 2

    def genus(self) -> int:
        """Genus of the closed component: piece sum + cycle rank."""
        comps = self.piece_components()
        if len(comps) != 1:
            raise ValueError("cut complex not connected")
        rank = len(self.curves) - len(self.pieces) + 1
        return sum(p.genus for p in self.pieces.values()) + rank


def component_genus(cut_complex: CutComplex) -> int:
    """Public genus query; raises on a disconnected incidence graph."""
    return cut_complex.genus()


@dataclass(frozen=True)
class SurfaceComponent:
    id: str
    genus: int
    cut: CutComplex


# ---------------------------------------------------------------------------
# Curve classification


@dataclass(frozen=True)
class Inessential:
    side: frozenset[str]  # pieces of the genus-0 side


@dataclass(frozen=True)
class EssentialSeparating:
    g1: int
    g2: int  # g1 <= g2
    side_small: frozenset[str]  # pieces of the g1 side (min piece id on ties)
    side_large: frozenset[str]


@dataclass(frozen=True)
class EssentialNonseparating:
    pass


CurveClass = Inessential | EssentialSeparating | EssentialNonseparating


def curve_sides(cut: CutComplex, curve_id: str) -> tuple[frozenset[str], frozenset[str]] | None:
    """Piece sets on the two sides of a curve, or None if non-separating."""
    if curve_id not in cut.curves:
        raise KeyError(f"unknown curve {curve_id!r}")
    comps = cut.piece_components(frozenset({curve_id}))
    if len(comps) == 1:
        return None
    assert len(comps) == 2  # removing one edge from a connected graph
    a, b = comps
    if min(a) > min(b):
        a, b = b, a
    return a, b


def classify_curve(component: SurfaceComponent, curve_id: str) -> CurveClass:
    """Exactly one of Inessential / EssentialSeparating / EssentialNonseparating."""
    cut = component.cut
    sides = curve_sides(cut, curve_id)
    if sides is None:
        return EssentialNonseparating()
    excluded = frozenset({curve_id})
    ga = cut.subset_genus(sides[0], excluded)
    gb = cut.subset_genus(sides[1], excluded)
    if ga == 0 or gb == 0:
        # canonical genus-0 side: prefer the side with the smaller min piece id
        if ga == 0 and gb == 0:
            side = sides[0]
        else:
            side = sides[0] if ga == 0 else sides[1]
        return Inessential(side=side)
    if ga <= gb:
        return EssentialSeparating(ga, gb, sides[0], sides[1])
    return EssentialSeparating(gb, ga, sides[1], sides[0])


# ---------------------------------------------------------------------------
# Chambers, annotations, the complex


@dataclass(frozen=True)
class TopAnnotation:
    is_ball: str = UNKNOWN
    is_handlebody: str = UNKNOWN
    is_solid_torus: str = UNKNOWN
    is_reducible: str = UNKNOWN

    def as_tuple(self) -> tuple[str, str, str, str]:
        return (self.is_ball, self.is_handlebody, self.is_solid_torus, self.is_reducible)


BLANK_ANNOTATION = TopAnnotation()
BALL_ANNOTATION = TopAnnotation(is_ball=YES, is_handlebody=YES, is_solid_torus=NO)
SOLID_TORUS_ANNOTATION = TopAnnotation(is_ball=NO, is_handlebody=YES, is_solid_torus=YES)


@dataclass(frozen=True)
class Chamber:
    id: str
    annotation: TopAnnotation = BLANK_ANNOTATION


@dataclass(frozen=True)
class ChamberComplex:
    ambient_mode: str
    components: dict[str, SurfaceComponent]
    chambers: dict[str, Chamber]
    incidence: dict[str, tuple[str, str]]  # component id -> its two chambers

    def boundary_components(self, chamber_id: str) -> list[str]:
        return sorted(c for c, pair in self.incidence.items() if chamber_id in pair)

    def other_side(self, component_id: str, chamber_id: str) -> str:
        a, b = self.incidence[component_id]
        if chamber_id == a:
            return b
        if chamber_id == b:
            return a
        raise ValueError(f"chamber {chamber_id!r} not incident to {component_id!r}")

    def chamber_adjacency(self) -> dict[str, list[tuple[str, str]]]:
        """chamber -> [(component, neighbor chamber)] sorted by component id."""
        adj: dict[str, list[tuple[str, str]]] = {ch: [] for ch in self.chambers}
        for comp_id in sorted(self.incidence):
            a, b = self.incidence[comp_id]
            adj[a].append((comp_id, b))
            adj[b].append((comp_id, a))
        return adj

    def side_chambers(self, component_id: str, chamber_id: str) -> frozenset[str]:
        """All chambers on the chamber_id side of the component (subtree)."""
        if chamber_id not in self.incidence[component_id]:
            raise ValueError(f"chamber {chamber_id!r} not incident to {component_id!r}")
        adj = self.chamber_adjacency()
        seen = {chamber_id}
        stack = [chamber_id]
        while stack:
            ch = stack.pop()
            for comp, nb in adj[ch]:
                if comp == component_id and ch == chamber_id:
                    continue  # do not cross the dividing component
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return frozenset(seen)

    def genus_of(self, component_id: str) -> int:
        return self.components[component_id].genus

    def annotation(self, chamber_id: str) -> TopAnnotation:
        return self.chambers[chamber_id].annotation


@dataclass(frozen=True)
class ChamberTree:
    root: str
    parent: dict[str, str | None]
    parent_edge: dict[str, str | None]  # component joining chamber to parent
    order: tuple[str, ...]  # preorder


def derive_chamber_tree(complex: ChamberComplex) -> ChamberTree:
    """Canonical rooted tree: root = smallest chamber id, children sorted."""
    if not complex.chambers:
        raise ValueError("complex has no chambers")
    adj = complex.chamber_adjacency()
    root = min(complex.chambers)
    parent: dict[str, str | None] = {root: None}
    parent_edge: dict[str, str | None] = {root: None}
    order: list[str] = []
    stack = [root]
    while stack:
        ch = stack.pop()
        order.append(ch)
        children = [(comp, nb) for comp, nb in adj[ch] if nb not in parent]
        for comp, nb in sorted(children, reverse=True):
            parent[nb] = ch
            parent_edge[nb] = comp
            stack.append(nb)
    if len(order) != len(complex.chambers):
        raise ValueError("incidence graph not connected")
    return ChamberTree(root=root, parent=parent, parent_edge=parent_edge, order=tuple(order))


# ---------------------------------------------------------------------------
# Annotation closure

# Sound in any ambient: a ball has one sphere boundary, a handlebody has
# connected boundary.  SphereMode adds the Schoenflies rule for leaves.


def _closure_pass(complex: ChamberComplex, ann: dict[str, TopAnnotation]) -> tuple[bool, list[str]]:
    changed = False
    conflicts: list[str] = []

    def set_field(ch: str, name: str, value: str) -> None:
        nonlocal changed
        cur = getattr(ann[ch], name)
        if cur == value:
            return
        if cur != UNKNOWN:
            conflicts.append(f"{ch}:{name}:{cur}->{value}")
            return
        ann[ch] = replace(ann[ch], **{name: value})
        changed = True

    for ch in complex.chambers:
        bdry = complex.boundary_components(ch)
        genera = [complex.genus_of(c) for c in bdry]
        a = ann[ch]
        if a.is_ball == YES:
            set_field(ch, "is_handlebody", YES)
            set_field(ch, "is_solid_torus", NO)
        if a.is_solid_torus == YES:
            set_field(ch, "is_handlebody", YES)
            set_field(ch, "is_ball", NO)
        if len(bdry) >= 2:
            # handlebodies (and balls) have connected boundary
            set_field(ch, "is_ball", NO)
            set_field(ch, "is_handlebody", NO)
            set_field(ch, "is_solid_torus", NO)
        if len(bdry) == 1:
            if genera[0] > 0:
                set_field(ch, "is_ball", NO)
            if genera[0] != 1:
                set_field(ch, "is_solid_torus", NO)
            if a.is_handlebody == YES:
                if genera[0] == 0:
                    set_field(ch, "is_ball", YES)
                elif genera[0] == 1:
                    set_field(ch, "is_solid_torus", YES)
        if complex.ambient_mode == SPHERE_MODE and len(bdry) == 1 and genera[0] == 0:
            # Schoenflies: a sphere bounds balls on both sides, so a leaf
            # chamber bounded by a single sphere is a ball.
            set_field(ch, "is_ball", YES)
    return changed, conflicts


def annotation_closure(complex: ChamberComplex) -> tuple[ChamberComplex, list[str]]:
    """Fixpoint of the soundness rules; returns (closed complex, conflicts)."""
    ann = {ch: complex.chambers[ch].annotation for ch in complex.chambers}
    conflicts: list[str] = []
    for _ in range(4 * len(ann) + 4):
        changed, bad = _closure_pass(complex, ann)
        conflicts.extend(bad)
        if not changed:
            break
    chambers = {ch: Chamber(id=ch, annotation=ann[ch]) for ch in complex.chambers}
    return replace(complex, chambers=chambers), sorted(set(conflicts))


# ---------------------------------------------------------------------------
# Disk attachments


@dataclass(frozen=True)
class DiskAttachment:
    """A properly embedded disk in a chamber, bounded by a cut-complex curve.

    nesting_parent declares curve nesting on the shared component (embedding
    data).  enclosed_hint optionally names a piece on the side of the curve
    the disk closes off; by default the genus-0 / smaller-genus side.
    """

    id: str
    chamber: str
    component: str
    curve: str
    nesting_parent: str | None = None
    enclosed_hint: str | None = None


def enclosed_side(complex: ChamberComplex, disk: DiskAttachment) -> frozenset[str] | None:
    """Piece set the disk closes off, or None for a non-separating curve."""
    comp = complex.components[disk.component]
    sides = curve_sides(comp.cut, disk.curve)
    if sides is None:
        if disk.enclosed_hint is not None:
            raise ValueError(f"disk {disk.id!r}: enclosed_hint on a non-separating curve")
        return None
    a, b = sides
    if disk.enclosed_hint is not None:
        if disk.enclosed_hint in a:
            return a
        if disk.enclosed_hint in b:
            return b
        raise ValueError(f"disk {disk.id!r}: enclosed_hint not on its component")
    excluded = frozenset({disk.curve})
    ga = comp.cut.subset_genus(a, excluded)
    gb = comp.cut.subset_genus(b, excluded)
    if ga != gb:
        return a if ga < gb else b
    return a  # tie: side with the smaller min piece id (curve_sides ordering)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Problem:
    code: str
    message: str
    where: str = ""


@dataclass
class ValidationReport:
    problems: list[Problem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def add(self, code: str, message: str, where: str = "") -> None:
        self.problems.append(Problem(code, message, where))

    def codes(self) -> list[str]:
        return sorted({p.code for p in self.problems})


def _validate_cut_complex(comp: SurfaceComponent, report: ValidationReport) -> bool:
    cut = comp.cut
    where = f"component:{comp.id}"
    ok = True
    for pid, piece in cut.pieces.items():
        if pid != piece.id or not internal_id_ok(pid):
            report.add("bad-id", f"piece id {pid!r}", where)
            ok = False
        if piece.genus < 0:
            report.add("bad-genus", f"piece {pid!r} negative genus", where)
            ok = False
        if len(set(piece.slots)) != len(piece.slots):
            report.add("slot-conflict", f"piece {pid!r} duplicate slot names", where)
            ok = False
    usage = cut.slot_usage()
    for cid, curve in cut.curves.items():
        if cid != curve.id or not internal_id_ok(cid):
            report.add("bad-id", f"curve id {cid!r}", where)
            ok = False
        for pid, slot in curve.ends():
            if pid not in cut.pieces or slot not in cut.pieces[pid].slots:
                report.add("dangling-ref", f"curve {cid!r} end ({pid!r},{slot!r})", where)
                ok = False
    if not ok:
        return False
    for pid, piece in cut.pieces.items():
        for slot in piece.slots:
            n = len(usage.get((pid, slot), []))
            if n != 1:
                report.add("slot-conflict", f"slot ({pid!r},{slot!r}) used {n} times", where)
                ok = False
    if not ok:
        return False
    if len(cut.pieces) == 0:
        report.add("empty-component", "component has no pieces", where)
        return False
    if len(cut.piece_components()) != 1:
        report.add("disconnected-component", "piece graph not connected", where)
        return False
    if cut.genus() != comp.genus:
        report.add(
            "genus-mismatch",
            f"declared genus {comp.genus}, computed {cut.genus()}",
            where,
        )
        return False
    return True


def _validate_disk_set(
    complex: ChamberComplex, disks: list[DiskAttachment], report: ValidationReport, where: str
) -> None:
    by_id: dict[str, DiskAttachment] = {}
    for d in disks:
        if not internal_id_ok(d.id) or d.id in by_id:
            report.add("bad-id", f"disk id {d.id!r}", where)
            return
        by_id[d.id] = d
    curves_seen: set[tuple[str, str]] = set()
    for d in disks:
        if d.component not in complex.components:
            report.add("dangling-ref", f"disk {d.id!r} component {d.component!r}", where)
            return
        comp = complex.components[d.component]
        if d.curve not in comp.cut.curves:
            report.add("dangling-ref", f"disk {d.id!r} curve {d.curve!r}", where)
            return
        if d.chamber not in complex.chambers or d.chamber not in complex.incidence[d.component]:
            report.add("bad-chamber", f"disk {d.id!r} chamber {d.chamber!r} not incident", where)
            return
        key = (d.component, d.curve)
        if key in curves_seen:
            report.add("curve-conflict", f"two disks on curve {d.curve!r}", where)
            return
        curves_seen.add(key)
        try:
            enclosed_side(complex, d)
        except ValueError as e:
            report.add("bad-enclosure", str(e), where)
            return
    # nesting forest: parent exists, same component, acyclic, enclosure nests
    for d in disks:
        if d.nesting_parent is None:
            continue
        p = by_id.get(d.nesting_parent)
        if p is None:
            report.add("dangling-ref", f"disk {d.id!r} nesting_parent {d.nesting_parent!r}", where)
            return
        if p.component != d.component:
            report.add("nesting-violation", f"disk {d.id!r} nested across components", where)
            return
    # cycle check
    for d in disks:
        seen = set()
        cur: DiskAttachment | None = d
        while cur is not None and cur.nesting_parent is not None:
            if cur.id in seen:
                report.add("nesting-violation", f"nesting cycle at {d.id!r}", where)
                return
            seen.add(cur.id)
            cur = by_id[cur.nesting_parent]
    for d in disks:
        if d.nesting_parent is None:
            continue
        p = by_id[d.nesting_parent]
        p_side = enclosed_side(complex, p)
        if p_side is None:
            report.add("nesting-violation", f"parent {p.id!r} has no enclosed side", where)
            return
        curve = complex.components[d.component].cut.curves[d.curve]
        if not all(pc in p_side for pc in curve.pieces()):
            report.add("nesting-violation", f"disk {d.id!r} curve not inside parent enclosure", where)
            return
        d_side = enclosed_side(complex, d)
        if d_side is not None and not d_side <= p_side:
            report.add("nesting-violation", f"disk {d.id!r} enclosure escapes parent", where)
            return
    # unnested same-component same-chamber disks must enclose disjoint sides
    def ancestors(d: DiskAttachment) -> set[str]:
        out: set[str] = set()
        cur = d
        while cur.nesting_parent is not None:
            out.add(cur.nesting_parent)
            cur = by_id[cur.nesting_parent]
        return out

    for d1, d2 in itertools.combinations(disks, 2):
        if d1.component != d2.component or d1.chamber != d2.chamber:
            continue
        if d1.id in ancestors(d2) or d2.id in ancestors(d1):
            continue
        s1, s2 = enclosed_side(complex, d1), enclosed_side(complex, d2)
        if s1 is not None and s2 is not None and s1 & s2:
            report.add(
                "nesting-violation",
                f"unnested disks {d1.id!r},{d2.id!r} with overlapping enclosures",
                where,
            )
            return


def validate_scenario(
    complex: ChamberComplex, disk_sets: dict[str, list[DiskAttachment]] | None = None
) -> ValidationReport:
    """Every invariant violation gets a machine-readable code; empty iff valid."""
    report = ValidationReport()
    if complex.ambient_mode not in (SPHERE_MODE, ANNOTATED_MODE):
        report.add("bad-mode", f"ambient_mode {complex.ambient_mode!r}")
        return report
    ok_refs = True
    for cid, comp in complex.components.items():
        if cid != comp.id or not internal_id_ok(cid):
            report.add("bad-id", f"component id {cid!r}")
            ok_refs = False
        else:
            ok_refs = _validate_cut_complex(comp, report) and ok_refs
    for chid, ch in complex.chambers.items():
        if chid != ch.id or not internal_id_ok(chid):
            report.add("bad-id", f"chamber id {chid!r}")
            ok_refs = False
        for name in ("is_ball", "is_handlebody", "is_solid_torus", "is_reducible"):
            if getattr(ch.annotation, name) not in TRISTATES:
                report.add("bad-annotation", f"chamber {chid!r} {name}")
                ok_refs = False
    for comp_id, pair in complex.incidence.items():
        if comp_id not in complex.components:
            report.add("dangling-ref", f"incidence component {comp_id!r}")
            ok_refs = False
            continue
        if len(pair) != 2 or pair[0] == pair[1]:
            report.add("tree-violation", f"component {comp_id!r} must border two distinct chambers")
            ok_refs = False
            continue
        for chid in pair:
            if chid not in complex.chambers:
                report.add("dangling-ref", f"incidence chamber {chid!r}")
                ok_refs = False
    for comp_id in complex.components:
        if comp_id not in complex.incidence:
            report.add("dangling-ref", f"component {comp_id!r} missing from incidence")
            ok_refs = False
    if not ok_refs:
        return report

    if len(complex.chambers) != len(complex.components) + 1:
        report.add("tree-violation", "#chambers must equal #components + 1")
        return report
    try:
        derive_chamber_tree(complex)
    except ValueError as e:
        report.add("tree-violation", str(e))
        return report
    if len(complex.chambers) > 1:
        for chid in complex.chambers:
            if not complex.boundary_components(chid):
                report.add("tree-violation", f"chamber {chid!r} has empty boundary")
                return report

    _, conflicts = annotation_closure(complex)
    for c in conflicts:
        report.add("annotation-conflict", c)

    if disk_sets:
        for set_id, disks in disk_sets.items():
            if not internal_id_ok(set_id):
                report.add("bad-id", f"disk set id {set_id!r}")
                continue
            _validate_disk_set(complex, disks, report, where=f"disk_set:{set_id}")
    return report


# ---------------------------------------------------------------------------
# Piece refinement (genus invariance under subdivision; also used by fuzzing)


def refine_piece(
    cut: CutComplex,
    piece_id: str,
    genus_split: tuple[int, int],
    slot_split: tuple[tuple[str, ...], tuple[str, ...]],
    new_ids: tuple[str, str, str],
) -> CutComplex:
    """Split one piece in two along a fresh inessential-by-construction curve.

    genus_split must sum to the old genus, slot_split must partition the old
    slots; new_ids = (piece a, piece b, joining curve).  Total genus is
    unchanged: the new curve contributes no cycle.
    """
    old = cut.pieces[piece_id]
    g1, g2 = genus_split
    sl1, sl2 = slot_split
    if g1 + g2 != old.genus or g1 < 0 or g2 < 0:
        raise ValueError("genus split must sum to the old genus")
    if sorted(sl1 + sl2) != sorted(old.slots):
        raise ValueError("slot split must partition the old slots")
    pa, pb, cid = new_ids
    if pa in cut.pieces or pb in cut.pieces or cid in cut.curves:
        raise ValueError("refinement ids collide")
    join = "cut0"
    while join in sl1 or join in sl2:
        join += "x"
    pieces = dict(cut.pieces)
    del pieces[piece_id]
    pieces[pa] = Piece(pa, g1, tuple(sl1) + (join,))
    pieces[pb] = Piece(pb, g2, tuple(sl2) + (join,))
    curves = {}
    for c in cut.curves.values():
        ends = []
        for pid, slot in c.ends():
            if pid == piece_id:
                pid = pa if slot in sl1 else pb
            ends.append((pid, slot))
        curves[c.id] = Curve(c.id, ends[0], ends[1])
    curves[cid] = Curve(cid, (pa, join), (pb, join))
    return CutComplex(pieces=pieces, curves=curves)


def closed_component(comp_id: str, genus: int) -> SurfaceComponent:
    """Trivial cut complex: one closed piece."""
    piece = Piece(f"{comp_id}p", genus, ())
    return SurfaceComponent(comp_id, genus, CutComplex(pieces={piece.id: piece}, curves={}))
