"""Surgery on disk sets: scars, remnants, panels, diskiness, goneballs.

Surgering a disk D with boundary on a curve c removes an annulus
neighborhood of c from the surface and caps the two new circles with
parallel copies of D (the *scars*).  The solid slab between the copies is
removed from D's chamber and becomes a 2-handle attached to the remnant of
the chamber on the other side of c's component (the *absorbing* chamber);
D itself ends up inside that chamber, so its scars are Internal exactly
there and External to the flanking remnants.

Chamber remnants are reconstructed per old chamber by a union-find over
panel nodes (one per new component, seen from that chamber's side) and two
side nodes per disk of that chamber.  Local merges happen at every surgered
curve; one bulk merge routes all unenclosed material into a root region.
A disk separates its chamber iff its curve separates its component, so the
enclosed-side data of the disks is exactly what the reconstruction needs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .scene import (
    ANNOTATED_MODE,
    BALL_ANNOTATION,
    BLANK_ANNOTATION,
    Chamber,
    ChamberComplex,
    Curve,
    CutComplex,
    DiskAttachment,
    EssentialNonseparating,
    Piece,
    SurfaceComponent,
    TopAnnotation,
    UNKNOWN,
    YES,
    annotation_closure,
    classify_curve,
    derive_chamber_tree,
    enclosed_side,
    validate_scenario,
)

INTERNAL = "internal"
EXTERNAL = "external"


class SurgeryError(ValueError):
    pass


class InternalContractError(AssertionError):
    """The engine produced something the contracts forbid; always a bug."""


@dataclass
class ScarRecord:
    disk: str
    component: str  # original component carrying the curve
    curve: str
    scar_a: str  # scar piece ids; a = curve's end_a side
    scar_b: str
    host_component_a: str  # new components hosting the scars
    host_component_b: str
    internal_to: str  # absorbing chamber: the one the disk ends up inside


@dataclass
class Panel:
    component: str  # new component id
    origin: str  # original component id
    pieces: frozenset[str]  # non-scar pieces
    genus: int
    scar_count: int


@dataclass
class PanelGraph:
    panels: dict[str, Panel]  # new component id -> panel
    edges: dict[str, tuple[str, str]]  # disk id -> (host_a, host_b)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[object, object] = {}

    def add(self, x: object) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: object) -> object:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: object, b: object) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


@dataclass
class RawComplex:
    """Surgered complex before goneball pruning, with full provenance."""

    complex: ChamberComplex
    before: ChamberComplex
    disks: dict[str, DiskAttachment]
    remnant_map: dict[str, str]  # new chamber -> old chamber
    scars: dict[str, ScarRecord]  # disk id -> record
    absorbed: dict[str, tuple[str, ...]]  # new chamber -> slabs it contains
    comp_origin: dict[str, str]  # new component -> original component
    piece_home: dict[tuple[str, str], str]  # (origin comp, piece) -> new component
    region_assign: dict[tuple[str, str], str]  # (old chamber, new comp) -> new chamber

    def chamber_of_curve(self, old_chamber: str, component: str, curve: str) -> str:
        """New chamber adjacent to a surviving curve, seen from an old chamber.

        Used to re-express a disk after other surgeries: the curve persists
        and the disk hangs in the region of its old chamber next to it.
        """
        cur = self.before.components[component].cut.curves[curve]
        if curve in (d.curve for d in self.disks.values() if d.component == component):
            raise SurgeryError(f"curve {curve!r} was surgered")
        home = self.piece_home[(component, cur.end_a[0])]
        home_b = self.piece_home[(component, cur.end_b[0])]
        if home != home_b:
            raise InternalContractError("surviving curve split across components")
        return self.region_assign[(old_chamber, home)]

    def remnants_of(self, old_chamber: str) -> list[str]:
        return sorted(ch for ch, old in self.remnant_map.items() if old == old_chamber)


def _scar_ids(disk_id: str) -> tuple[str, str, str, str]:
    return (f"{disk_id}~a", f"{disk_id}~b", f"{disk_id}~ra", f"{disk_id}~rb")


def surger(complex: ChamberComplex, disks: list[DiskAttachment]) -> RawComplex:
    """Simultaneous surgery on a valid disk set."""
    report = validate_scenario(complex, {"surgery": list(disks)})
    if not report.ok:
        raise SurgeryError(f"invalid surgery input: {report.codes()}")
    disk_map = {d.id: d for d in disks}

    surgered_by_comp: dict[str, dict[str, DiskAttachment]] = {}
    for d in disks:
        surgered_by_comp.setdefault(d.component, {})[d.curve] = d

    # --- rebuild each component's cut complex -----------------------------
    new_components: dict[str, SurfaceComponent] = {}
    comp_origin: dict[str, str] = {}
    piece_home: dict[tuple[str, str], str] = {}
    for comp_id in sorted(complex.components):
        comp = complex.components[comp_id]
        cut = comp.cut
        surgered = surgered_by_comp.get(comp_id, {})
        if not surgered:
            new_components[comp_id] = comp
            comp_origin[comp_id] = comp_id
            for pid in cut.pieces:
                piece_home[(comp_id, pid)] = comp_id
            continue
        pieces = dict(cut.pieces)
        curves = {c.id: c for c in cut.curves.values() if c.id not in surgered}
        for curve_id, disk in sorted(surgered.items()):
            cur = cut.curves[curve_id]
            sa, sb, ra, rb = _scar_ids(disk.id)
            pieces[sa] = Piece(sa, 0, ("s",))
            pieces[sb] = Piece(sb, 0, ("s",))
            curves[ra] = Curve(ra, cur.end_a, (sa, "s"))
            curves[rb] = Curve(rb, cur.end_b, (sb, "s"))
        new_cut_all = CutComplex(pieces=pieces, curves=curves)
        groups = new_cut_all.piece_components()
        named = []
        for grp in groups:
            real = sorted(p for p in grp if p in cut.pieces)
            if not real:
                raise InternalContractError("component of scars only")
            named.append((real[0], grp))
        named.sort()
        for idx, (_, grp) in enumerate(named):
            nid = comp_id if len(named) == 1 else f"{comp_id}:{idx}"
            sub_pieces = {p: pieces[p] for p in grp}
            sub_curves = {
                c.id: c for c in curves.values() if c.end_a[0] in grp and c.end_b[0] in grp
            }
            sub = CutComplex(pieces=sub_pieces, curves=sub_curves)
            new_components[nid] = SurfaceComponent(nid, sub.genus(), sub)
            comp_origin[nid] = comp_id
            for p in grp:
                piece_home[(comp_id, p)] = nid

    # Euler law: every surgery adds two disks
    chi_before = sum(2 - 2 * c.genus for c in complex.components.values())
    chi_after = sum(2 - 2 * c.genus for c in new_components.values())
    if chi_after != chi_before + 2 * len(disks):
        raise InternalContractError("Euler law violated")

    # --- reconstruct regions per old chamber ------------------------------
    enclosed: dict[str, frozenset[str] | None] = {
        d.id: enclosed_side(complex, d) for d in disks
    }
    parent_of: dict[str, str | None] = {d.id: d.nesting_parent for d in disks}

    region_assign: dict[tuple[str, str], str] = {}
    remnant_map: dict[str, str] = {}
    absorbed_sets: dict[str, list[str]] = {}
    new_chambers: dict[str, Chamber] = {}
    absorb_class: dict[str, tuple[str, object]] = {}  # disk -> (old chamber, class key)

    for old_ch in sorted(complex.chambers):
        bdry = complex.boundary_components(old_ch)
        uf = _UnionFind()
        root = ("root", old_ch)
        uf.add(root)
        for comp_id in bdry:
            for (oc, pid), nid in piece_home.items():
                if oc == comp_id:
                    uf.add(("p", nid))
        my_disks = [d for d in disks if d.chamber == old_ch]
        for d in my_disks:
            uf.add(("d", d.id, 0))
            uf.add(("d", d.id, 1))
        # local merges at every surgered curve of an incident component
        for comp_id in bdry:
            for curve_id, d in sorted(surgered_by_comp.get(comp_id, {}).items()):
                cur = complex.components[comp_id].cut.curves[curve_id]
                na = ("p", piece_home[(comp_id, cur.end_a[0])])
                nb = ("p", piece_home[(comp_id, cur.end_b[0])])
                if d.chamber == old_ch:
                    uf.union(("d", d.id, 0), na)
                    uf.union(("d", d.id, 1), nb)
                else:
                    # slab removed on the far side; this side bridges across
                    uf.union(na, nb)
                    absorb_class[d.id] = (old_ch, na)
        # bulk merge: unenclosed material reaches the root region
        for comp_id in bdry:
            comp_disks = [d for d in my_disks if d.component == comp_id]
            if not comp_disks:
                any_piece = next(iter(complex.components[comp_id].cut.pieces))
                uf.union(root, ("p", piece_home[(comp_id, any_piece)]))
                continue
            my_ids = {d.id for d in comp_disks}
            root_disks = []
            for d in comp_disks:
                # chamber-root: no ancestor in the nesting forest is ours
                anc = parent_of.get(d.id)
                is_root = True
                seen = set()
                while anc is not None and anc not in seen:
                    seen.add(anc)
                    if anc in my_ids:
                        is_root = False
                        break
                    anc = parent_of.get(anc)
                if is_root:
                    root_disks.append(d)
            pockets = [enclosed[e.id] for e in root_disks if enclosed[e.id] is not None]
            for d in root_disks:
                side = enclosed[d.id]
                cur = complex.components[comp_id].cut.curves[d.curve]
                if side is None:
                    # sideless disk: faces the root region unless a sibling
                    # pocket swallows its curve (then local merges place it)
                    if any(cur.end_a[0] in pk for pk in pockets):
                        continue
                    uf.union(root, ("d", d.id, 0))
                elif cur.end_a[0] not in side:
                    uf.union(root, ("d", d.id, 0))
                else:
                    uf.union(root, ("d", d.id, 1))
        # name the regions
        classes: dict[object, list[str]] = {}
        for (oc, pid), nid in piece_home.items():
            if oc in bdry:
                classes.setdefault(uf.find(("p", nid)), []).append(nid)
        if not classes:
            # chamber with empty boundary: the single-chamber complex
            new_chambers[old_ch] = complex.chambers[old_ch]
            remnant_map[old_ch] = old_ch
            continue
        for key in classes:
            classes[key] = sorted(set(classes[key]))
        ordered = sorted(classes.items(), key=lambda kv: kv[1][0])
        names: dict[object, str] = {}
        for idx, (key, nids) in enumerate(ordered):
            name = old_ch if len(ordered) == 1 else f"{old_ch}:{idx}"
            names[key] = name
            remnant_map[name] = old_ch
            for nid in nids:
                region_assign[(old_ch, nid)] = name
        for d_id, (oc, class_key) in absorb_class.items():
            if oc == old_ch:
                absorbed_sets.setdefault(names[uf.find(class_key)], []).append(d_id)
        for d in my_disks:
            k0, k1 = uf.find(("d", d.id, 0)), uf.find(("d", d.id, 1))
            if k0 not in names or k1 not in names:
                raise InternalContractError("disk side in a panel-free region")

    absorbed = {ch: tuple(sorted(v)) for ch, v in absorbed_sets.items()}

    # --- incidence, scars, annotations -------------------------------------
    incidence: dict[str, tuple[str, str]] = {}
    for nid in new_components:
        origin = comp_origin[nid]
        c1, c2 = complex.incidence[origin]
        r1 = region_assign[(c1, nid)]
        r2 = region_assign[(c2, nid)]
        if r1 == r2:
            raise InternalContractError("component bordering one chamber twice")
        incidence[nid] = (r1, r2)

    scars: dict[str, ScarRecord] = {}
    for d in disks:
        cur = complex.components[d.component].cut.curves[d.curve]
        other = complex.other_side(d.component, d.chamber)
        sa, sb, _, _ = _scar_ids(d.id)
        host_a = piece_home[(d.component, cur.end_a[0])]
        host_b = piece_home[(d.component, cur.end_b[0])]
        internal_to = region_assign[(other, host_a)]
        if internal_to != region_assign[(other, host_b)]:
            raise InternalContractError("absorbing chamber mismatch across the slab")
        scars[d.id] = ScarRecord(
            disk=d.id,
            component=d.component,
            curve=d.curve,
            scar_a=sa,
            scar_b=sb,
            host_component_a=host_a,
            host_component_b=host_b,
            internal_to=internal_to,
        )
        if absorbed_sets.get(internal_to) is None or d.id not in absorbed_sets[internal_to]:
            raise InternalContractError("scar record disagrees with absorption map")

    cut_chambers = {d.chamber for d in disks}
    for new_ch in remnant_map:
        if new_ch in new_chambers:
            continue
        old_ch = remnant_map[new_ch]
        old_ann = complex.chambers[old_ch].annotation
        got_handle = bool(absorbed.get(new_ch))
        was_cut = old_ch in cut_chambers
        if got_handle:
            ann = BLANK_ANNOTATION
        elif not was_cut:
            ann = old_ann  # untouched as a region of the ambient
        else:
            ann = _cut_annotation(complex, old_ch, old_ann, disks)
        new_chambers[new_ch] = Chamber(id=new_ch, annotation=ann)

    result = ChamberComplex(
        ambient_mode=complex.ambient_mode,
        components=new_components,
        chambers=new_chambers,
        incidence=incidence,
    )
    result, conflicts = annotation_closure(result)
    if conflicts:
        raise InternalContractError(f"annotation conflicts after surgery: {conflicts}")
    if len(result.chambers) != len(result.components) + 1:
        raise InternalContractError("tree law violated after surgery")
    derive_chamber_tree(result)
    if set(remnant_map.values()) != set(complex.chambers):
        raise InternalContractError("remnant map not surjective")

    return RawComplex(
        complex=result,
        before=complex,
        disks=disk_map,
        remnant_map=remnant_map,
        scars=scars,
        absorbed=absorbed,
        comp_origin=comp_origin,
        piece_home=piece_home,
        region_assign=region_assign,
    )


def _cut_annotation(
    complex: ChamberComplex, old_ch: str, ann: TopAnnotation, disks: list[DiskAttachment]
) -> TopAnnotation:
    """Closure rules for remnants of the chamber the disks were cut from.

    A handlebody cut along disks leaves handlebodies; a ball leaves balls; a
    solid torus cut along a meridian (non-separating curve) leaves balls.
    Anything else is unknown.  Ball/solid-torus refinements re-derive from
    boundary genus in the closure pass.
    """
    if ann.is_ball == YES:
        return BALL_ANNOTATION
    if ann.is_handlebody != YES:
        return BLANK_ANNOTATION
    if ann.is_solid_torus == YES:
        meridian = any(
            isinstance(classify_curve(complex.components[d.component], d.curve), EssentialNonseparating)
            for d in disks
            if d.chamber == old_ch
        )
        if meridian:
            return BALL_ANNOTATION
    return TopAnnotation(is_handlebody=YES)


# ---------------------------------------------------------------------------
# Scar sidedness


def classify_scar(raw: RawComplex, chamber_id: str, disk_id: str) -> str:
    """Internal iff the surgered disk lies inside the chamber."""
    rec = raw.scars[disk_id]
    on_boundary = False
    for host in (rec.host_component_a, rec.host_component_b):
        if chamber_id in raw.complex.incidence[host]:
            on_boundary = True
    if not on_boundary:
        raise SurgeryError(f"scars of {disk_id!r} not on boundary of {chamber_id!r}")
    return INTERNAL if chamber_id == rec.internal_to else EXTERNAL


# ---------------------------------------------------------------------------
# Panels and diskiness


def panel_graph(raw: RawComplex) -> PanelGraph:
    panels: dict[str, Panel] = {}
    for nid, comp in raw.complex.components.items():
        origin = raw.comp_origin[nid]
        real = frozenset(
            p for p in comp.cut.pieces if p in raw.before.components[origin].cut.pieces
        )
        scar_count = len(comp.cut.pieces) - len(real)
        genus = comp.cut.subset_genus(real) if real else 0
        panels[nid] = Panel(
            component=nid,
            origin=origin,
            pieces=real,
            genus=genus,
            scar_count=scar_count,
        )
    edges = {
        d: (rec.host_component_a, rec.host_component_b) for d, rec in raw.scars.items()
    }
    return PanelGraph(panels=panels, edges=edges)


def verify_panel_reassembly(raw: RawComplex) -> bool:
    """Gluing all panels back along all disk edges recovers each original genus."""
    pg = panel_graph(raw)
    by_origin: dict[str, list[str]] = {}
    for nid, p in pg.panels.items():
        by_origin.setdefault(p.origin, []).append(nid)
    for origin, nids in by_origin.items():
        edge_count = sum(1 for a, b in pg.edges.values() if pg.panels[a].origin == origin)
        rank = edge_count - len(nids) + 1
        total = sum(pg.panels[n].genus for n in nids) + rank
        if total != raw.before.components[origin].genus:
            return False
    return True


def _assemblies(
    raw: RawComplex, interior_comps: frozenset[str], interior_slabs: frozenset[str]
) -> list[tuple[int, int]]:
    """(euler characteristic, free boundary count) per connected assembly.

    Assemblies model F intersected with the open side: surviving panels of
    components strictly inside plus the removed annuli whose slab sits in an
    interior chamber, glued along their shared circles.
    """
    pg = panel_graph(raw)
    uf = _UnionFind()
    for n in interior_comps:
        uf.add(("panel", n))
    for d in interior_slabs:
        uf.add(("slab", d))
    free_ends: dict[str, int] = {}
    for d in interior_slabs:
        rec = raw.scars[d]
        ends = 0
        for host in (rec.host_component_a, rec.host_component_b):
            if host in interior_comps:
                uf.union(("slab", d), ("panel", host))
            else:
                ends += 1
        free_ends[d] = ends
    for n in interior_comps:
        # every frontier of an interior panel must meet an interior slab
        for d, (a, b) in pg.edges.items():
            if n in (a, b) and d not in interior_slabs:
                raise InternalContractError("interior panel with exterior slab")
    groups: dict[object, tuple[int, int]] = {}
    for n in interior_comps:
        key = uf.find(("panel", n))
        chi, b = groups.get(key, (0, 0))
        groups[key] = (chi + _panel_euler(raw, n), b)
    for d in interior_slabs:
        key = uf.find(("slab", d))
        chi, b = groups.get(key, (0, 0))
        groups[key] = (chi, b + free_ends[d])
    return list(groups.values())


def _panel_euler(raw: RawComplex, nid: str) -> int:
    comp = raw.complex.components[nid]
    origin = raw.comp_origin[nid]
    real = [p for p in comp.cut.pieces if p in raw.before.components[origin].cut.pieces]
    return sum(comp.cut.pieces[p].euler() for p in real)


def is_disky(raw: RawComplex, component_id: str, side_chamber: str) -> bool:
    """True iff F meets the side's interior only in disks (vacuously true)."""
    side = raw.complex.side_chambers(component_id, side_chamber)
    interior_comps = frozenset(
        n
        for n, pair in raw.complex.incidence.items()
        if n != component_id and pair[0] in side and pair[1] in side
    )
    interior_slabs = frozenset(d for d, rec in raw.scars.items() if rec.internal_to in side)
    for chi, b in _assemblies(raw, interior_comps, interior_slabs):
        if not (chi == 1 and b == 1):
            return False
    return True


# ---------------------------------------------------------------------------
# Goneballs


@dataclass
class GoneballCandidates:
    candidates: frozenset[str]
    needs_annotation: frozenset[str]


def goneball_candidates(
    raw: RawComplex, complex: ChamberComplex | None = None
) -> GoneballCandidates:
    """Leaf chambers bounded by one sphere, resolved balls, with a disky side.

    `complex` names the state to inspect (a partly pruned descendant of
    raw.complex); absorbing a goneball can promote its absorber, so new
    candidates appear generation by generation.  Diskiness always refers to
    the pre-surgery surface and is read off raw.
    """
    cx = raw.complex if complex is None else complex
    found: set[str] = set()
    pending: set[str] = set()
    for ch in cx.chambers:
        bdry = cx.boundary_components(ch)
        if len(bdry) != 1:
            continue
        comp = bdry[0]
        if cx.genus_of(comp) != 0:
            continue
        ball = cx.chambers[ch].annotation.is_ball
        if ball == UNKNOWN:
            if cx.ambient_mode == ANNOTATED_MODE and is_disky(raw, comp, ch):
                pending.add(ch)
            continue
        if ball != YES:
            continue
        if is_disky(raw, comp, ch):
            found.add(ch)
    return GoneballCandidates(candidates=frozenset(found), needs_annotation=frozenset(pending))


@dataclass
class DecomposedComplex:
    """Result of pruning: the decomposition, with provenance kept."""

    complex: ChamberComplex
    remnant_map: dict[str, str]  # surviving chamber -> old chamber
    goneballs: dict[str, tuple[str, str, str]]  # pruned -> (sphere, absorber, old chamber)
    raw: RawComplex


def absorb_layer(
    complex: ChamberComplex, layer: frozenset[str] | set[str]
) -> tuple[ChamberComplex, dict[str, tuple[str, str]]]:
    """Delete one generation of goneballs; returns (state, ch -> (sphere, absorber)).

    Callers must have checked candidacy; this only guards adjacency, since
    two balls sharing their sphere cannot absorb each other.
    """
    spheres = {ch: complex.boundary_components(ch)[0] for ch in layer}
    for a, b in itertools.combinations(sorted(layer), 2):
        if complex.other_side(spheres[a], a) == b:
            raise SurgeryError(f"adjacent goneballs {a!r},{b!r} cannot both be pruned")
    components = dict(complex.components)
    chambers = dict(complex.chambers)
    incidence = dict(complex.incidence)
    absorbed: dict[str, tuple[str, str]] = {}
    touched: set[str] = set()
    for ch in sorted(layer):
        sphere = spheres[ch]
        absorber = complex.other_side(sphere, ch)
        absorbed[ch] = (sphere, absorber)
        del components[sphere]
        del incidence[sphere]
        del chambers[ch]
        touched.add(absorber)
    for ch in touched:
        if ch in chambers:
            # capping a sphere boundary can change everything; recompute
            chambers[ch] = Chamber(id=ch, annotation=BLANK_ANNOTATION)
    result = ChamberComplex(
        ambient_mode=complex.ambient_mode,
        components=components,
        chambers=chambers,
        incidence=incidence,
    )
    result, conflicts = annotation_closure(result)
    if conflicts:
        raise InternalContractError(f"annotation conflicts after prune: {conflicts}")
    return result, absorbed


def prune(raw: RawComplex, chosen: frozenset[str] | set[str]) -> DecomposedComplex:
    """Absorb the chosen goneballs, cascading: a chamber may only become a
    candidate after an earlier choice capped one of its boundary spheres."""
    chosen = frozenset(chosen)
    goneballs: dict[str, tuple[str, str, str]] = {}
    state = raw.complex
    remaining = set(chosen)
    while remaining:
        cands = goneball_candidates(raw, state).candidates
        layer = remaining & cands
        if not layer:
            raise SurgeryError(f"not goneball candidates: {sorted(remaining)}")
        state, absorbed = absorb_layer(state, layer)
        for ch, (sphere, absorber) in absorbed.items():
            goneballs[ch] = (sphere, absorber, raw.remnant_map[ch])
        remaining -= layer
    remnant_map = {ch: old for ch, old in raw.remnant_map.items() if ch in state.chambers}
    return DecomposedComplex(
        complex=state, remnant_map=remnant_map, goneballs=goneballs, raw=raw
    )
