"""Independent reference implementations used to cross-check the engine.

Everything here recomputes results from first principles by a different
route than the package code: genus via raw Euler characteristic sums,
connectivity via networkx, surgery via one-disk-at-a-time case analysis,
succession via a literal rule filter over all flag assignments.  Agreement
with the engine is evidence; shared bugs would need the same mistake in two
unrelated computations.
"""

from __future__ import annotations

import itertools

import networkx as nx

from chamber_calculus.scene import (
    BALL_ANNOTATION,
    BLANK_ANNOTATION,
    Chamber,
    ChamberComplex,
    Curve,
    CutComplex,
    DiskAttachment,
    Piece,
    SurfaceComponent,
    TopAnnotation,
    YES,
    annotation_closure,
    enclosed_side,
)


# ---------------------------------------------------------------------------
# Genus and curve sides, the pedestrian way


def piece_graph(cut: CutComplex, excluded: frozenset[str] = frozenset()) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(cut.pieces)
    for c in cut.curves.values():
        if c.id not in excluded:
            g.add_edge(c.end_a[0], c.end_b[0], key=c.id)
    return g


def oracle_genus(cut: CutComplex) -> int:
    g = piece_graph(cut)
    assert nx.is_connected(g)
    chi = sum(2 - 2 * p.genus - len(p.slots) for p in cut.pieces.values())
    total = 2 - chi
    assert total % 2 == 0 and total >= 0
    return total // 2


def oracle_subset_genus(
    cut: CutComplex, subset: frozenset[str], excluded: frozenset[str] = frozenset()
) -> int:
    g = piece_graph(cut, excluded).subgraph(subset)
    assert nx.is_connected(g)
    internal = g.number_of_edges()
    chi = sum(2 - 2 * cut.pieces[p].genus - len(cut.pieces[p].slots) for p in subset)
    free = sum(len(cut.pieces[p].slots) for p in subset) - 2 * internal
    total = 2 - chi - free
    assert total % 2 == 0 and total >= 0
    return total // 2


def oracle_curve_sides(cut: CutComplex, curve_id: str):
    g = piece_graph(cut, frozenset({curve_id}))
    comps = [frozenset(c) for c in nx.connected_components(g)]
    if len(comps) == 1:
        return None
    assert len(comps) == 2
    comps.sort(key=min)
    return comps[0], comps[1]


# ---------------------------------------------------------------------------
# Canonical form for chamber complexes (independent of chamber_calculus.iso)


def canonical_form(complex: ChamberComplex, extra_labels=None) -> tuple:
    """Deterministic encoding invariant under renaming, for tree comparison.

    Chambers are vertices, components are labeled edges.  Encode as the
    minimum over all rootings of a recursive (label, sorted children) tuple.
    Quadratic in tree size, fine for the small trees the tests build.
    """
    extra_labels = extra_labels or {}

    def chamber_label(ch: str) -> tuple:
        ann = complex.chambers[ch].annotation.as_tuple()
        return (ann, extra_labels.get(ch))

    adj: dict[str, list[tuple[int, str]]] = {ch: [] for ch in complex.chambers}
    for comp, (a, b) in complex.incidence.items():
        g = complex.genus_of(comp)
        adj[a].append((g, b))
        adj[b].append((g, a))

    def encode(ch: str, parent: str | None) -> tuple:
        kids = sorted((g, encode(other, ch)) for g, other in adj[ch] if other != parent)
        return (chamber_label(ch), tuple(kids))

    return (complex.ambient_mode, min(encode(ch, None) for ch in complex.chambers))


def isomorphic(a: ChamberComplex, b: ChamberComplex, la=None, lb=None) -> bool:
    return canonical_form(a, la) == canonical_form(b, lb)


# ---------------------------------------------------------------------------
# Sequential single-disk surgery

# The enclosed side of a disk is tracked by a *witness piece*: the end piece
# of its curve lying on the enclosed side.  Curves keep their end pieces
# through other disks' surgeries, a separating curve stays separating, and
# its witness stays on the image of the original enclosed side, so one piece
# id pinned at the start identifies the enclosure at every later step.  A
# curve that starts non-separating has no enclosure; if an earlier step
# makes it separating, the engine's convention routes the root region to the
# end_a side, so the enclosed side is the one containing end_b.
#
# Processing order matters.  Enclosures are carved outermost first (strict
# supersets before the disks they contain), so by the time a disk is cut its
# chamber has already been narrowed to the innermost pocket holding its
# curve.  Sideless disks go last: a non-separating curve can only become
# separating after another non-separating cut on the same component, and by
# then every pocket it might sit in already exists.  When a cut splits a
# chamber, a sibling remnant of the same original component belongs inside
# the new pocket exactly when its original pieces lie inside the disk's
# original enclosure (in the surgered complex it reaches the pocket through
# the lateral windows left by far-side slabs); every other boundary
# component stays with the root region.


class OracleInapplicable(Exception):
    """Raised when sequential re-expression cannot mirror the engine.

    The one known case: a disk whose curve starts non-separating comes due
    after the surface already split, with a same-origin sibling facing the
    chamber it is about to divide.  The sibling's position relative to this
    cut is not recoverable from an original enclosure (there is none), so
    the oracle declines rather than guess.
    """


def _witness(complex: ChamberComplex, disk: DiskAttachment):
    """Return (witness piece, original enclosed piece set) for a disk."""
    side = enclosed_side(complex, disk)
    if side is None:
        return None, None
    cur = complex.components[disk.component].cut.curves[disk.curve]
    return (cur.end_a[0] if cur.end_a[0] in side else cur.end_b[0]), side


def _single_surger(
    complex: ChamberComplex,
    disk: DiskAttachment,
    witness: str | None,
    enc_orig: frozenset[str] | None = None,
    self_origin: str | None = None,
    origin_of: dict[str, str] | None = None,
    orig_pieces_of: dict[str, frozenset[str]] | None = None,
):
    """One-disk surgery by direct case analysis.

    Returns (new complex, piece_to_comp, chamber_rename) where piece_to_comp
    maps pieces of the cut component to the new component carrying them and
    chamber_rename maps old chamber id -> set of new ids.
    """
    comp = complex.components[disk.component]
    cut = comp.cut
    cur = cut.curves[disk.curve]
    x = disk.chamber
    y = complex.other_side(disk.component, x)
    sides = oracle_curve_sides(cut, disk.curve)

    def subcomplex(piece_set: frozenset[str], tag: str) -> CutComplex:
        sa = f"{disk.id}~{tag}"
        end = cur.end_a if tag == "a" else cur.end_b
        pieces = {p: cut.pieces[p] for p in piece_set}
        pieces[sa] = Piece(sa, 0, ("s",))
        curves = {
            c.id: c
            for c in cut.curves.values()
            if c.id != disk.curve and c.end_a[0] in piece_set and c.end_b[0] in piece_set
        }
        rim = f"{disk.id}~r{tag}"
        curves[rim] = Curve(rim, end, (sa, "s"))
        return CutComplex(pieces=pieces, curves=curves)

    components = dict(complex.components)
    incidence = dict(complex.incidence)
    chambers = dict(complex.chambers)
    piece_to_comp: dict[str, str] = {}
    rename: dict[str, set[str]] = {ch: {ch} for ch in complex.chambers}

    if sides is None:
        assert witness is None
        pieces = dict(cut.pieces)
        curves = {c.id: c for c in cut.curves.values() if c.id != disk.curve}
        for tag, end in (("a", cur.end_a), ("b", cur.end_b)):
            sid, rid = f"{disk.id}~{tag}", f"{disk.id}~r{tag}"
            pieces[sid] = Piece(sid, 0, ("s",))
            curves[rid] = Curve(rid, end, (sid, "s"))
        new_cut = CutComplex(pieces=pieces, curves=curves)
        components[disk.component] = SurfaceComponent(
            disk.component, oracle_genus(new_cut), new_cut
        )
        for p in cut.pieces:
            piece_to_comp[p] = disk.component
        cut_regions = {x}
    else:
        origin_of = origin_of or {}
        orig_pieces_of = orig_pieces_of or {}
        if witness is not None:
            enc = sides[0] if witness in sides[0] else sides[1]
            assert witness in enc
        else:
            siblings = [
                c_id
                for c_id, pair in incidence.items()
                if c_id != disk.component
                and x in pair
                and origin_of.get(c_id) == self_origin
            ]
            if siblings:
                raise OracleInapplicable(
                    f"sideless {disk.id} splits a chamber with siblings {siblings}"
                )
            enc = sides[0] if cur.end_b[0] in sides[0] else sides[1]
        unenc = sides[0] if enc == sides[1] else sides[1]
        tag_of = {}
        for side in sides:
            tag_of[side] = "a" if cur.end_a[0] in side else "b"
        named = sorted((min(s), s) for s in sides)
        comp_id_of = {}
        for idx, (_, side) in enumerate(named):
            nid = f"{disk.component}:{idx}"
            sub = subcomplex(side, tag_of[side])
            components[nid] = SurfaceComponent(nid, oracle_genus(sub), sub)
            comp_id_of[side] = nid
            for p in side:
                piece_to_comp[p] = nid
        del components[disk.component]
        del incidence[disk.component]
        # enclosed region sees only the enclosed comp; root region keeps
        # every other boundary component of X
        x_enc, x_root = f"{x}|enc", f"{x}|root"
        del chambers[x]
        chambers[x_enc] = Chamber(x_enc)
        chambers[x_root] = Chamber(x_root)
        rename[x] = {x_enc, x_root}
        incidence[comp_id_of[enc]] = tuple(
            x_enc if c == x else c for c in complex.incidence[disk.component]
        )
        incidence[comp_id_of[unenc]] = tuple(
            x_root if c == x else c for c in complex.incidence[disk.component]
        )
        for c_id, pair in list(incidence.items()):
            if c_id in (comp_id_of[enc], comp_id_of[unenc]):
                continue
            pocketed = (
                enc_orig is not None
                and origin_of.get(c_id) == self_origin
                and orig_pieces_of.get(c_id, frozenset()) <= enc_orig
            )
            target = x_enc if pocketed else x_root
            incidence[c_id] = tuple(target if ch == x else ch for ch in pair)
        cut_regions = rename[x]

    # Annotations of every touched chamber are recomputed from the original
    # complex by the caller; blanks here keep the intermediate states closed.
    new_anns: dict[str, TopAnnotation] = {r: BLANK_ANNOTATION for r in cut_regions}
    new_anns[y] = BLANK_ANNOTATION
    out_chambers = {}
    for ch, chamber in chambers.items():
        if ch in new_anns:
            out_chambers[ch] = Chamber(ch, new_anns[ch])
        else:
            out_chambers[ch] = chamber

    result = ChamberComplex(
        ambient_mode=complex.ambient_mode,
        components=components,
        chambers=out_chambers,
        incidence=incidence,
    )
    result, conflicts = annotation_closure(result)
    assert not conflicts, conflicts
    return result, piece_to_comp, rename


def _oracle_region_annotation(
    complex: ChamberComplex,
    origin_chamber: str,
    bumped: bool,
    disks: list[DiskAttachment],
) -> TopAnnotation:
    """Annotation of a final region from first principles.

    A region that swallowed a slab is a boundary connected sum along an
    annulus; nothing survives.  A region of an untouched chamber is that
    chamber.  Otherwise the region is a piece of the old chamber cut along
    disks: a ball leaves balls, a solid torus cut along a meridian leaves
    balls, a handlebody leaves handlebodies.
    """
    if bumped:
        return BLANK_ANNOTATION
    ann = complex.chambers[origin_chamber].annotation
    mine = [d for d in disks if d.chamber == origin_chamber]
    if not mine:
        return ann
    if ann.is_ball == YES:
        return BALL_ANNOTATION
    if ann.is_handlebody != YES:
        return BLANK_ANNOTATION
    if ann.is_solid_torus == YES:
        meridian = any(
            oracle_curve_sides(complex.components[d.component].cut, d.curve) is None
            for d in mine
        )
        if meridian:
            return BALL_ANNOTATION
    return TopAnnotation(is_handlebody=YES)


def oracle_sequential_surger(complex: ChamberComplex, disks: list[DiskAttachment]):
    """Surger one disk at a time, re-expressing the remaining ones.

    Returns the final ChamberComplex.  Region ids are private to the oracle;
    compare against the engine only up to isomorphism.
    """
    witnesses = {d.id: _witness(complex, d) for d in disks}
    witnessed = [d for d in disks if witnesses[d.id][1] is not None]
    witnessed.sort(key=lambda d: -len(witnesses[d.id][1]))
    sideless = [d for d in disks if witnesses[d.id][1] is None]
    pending = witnessed + sideless
    origin_of = {c: c for c in complex.components}
    orig_pieces_of = {
        c: frozenset(comp.cut.pieces) for c, comp in complex.components.items()
    }
    chamber_origin = {ch: ch for ch in complex.chambers}
    piece_owner = {
        p: c for c, comp in complex.components.items() for p in comp.cut.pieces
    }
    bumps: list[list[str]] = []  # [disk, scar_a, scar_b, absorbing chamber]
    current = complex
    while pending:
        d = pending.pop(0)
        prev = current
        piece, enc = witnesses[d.id]
        y_cur = prev.other_side(d.component, d.chamber)
        cur_curve = prev.components[d.component].cut.curves[d.curve]
        current, piece_to_comp, rename = _single_surger(
            prev, d, piece, enc, origin_of[d.component], origin_of, orig_pieces_of
        )
        orig_all = orig_pieces_of[d.component]
        origin = origin_of[d.component]
        for nid in set(piece_to_comp.values()):
            orig_pieces_of[nid] = (
                frozenset(p for p, c in piece_to_comp.items() if c == nid) & orig_all
            )
            origin_of[nid] = origin
        if d.component not in set(piece_to_comp.values()):
            del origin_of[d.component]
            del orig_pieces_of[d.component]
        piece_owner.update(piece_to_comp)
        piece_owner[f"{d.id}~a"] = piece_to_comp[cur_curve.end_a[0]]
        piece_owner[f"{d.id}~b"] = piece_to_comp[cur_curve.end_b[0]]
        chamber_origin = {
            n: chamber_origin[old] for old, news in rename.items() for n in news
        }
        for b in bumps:
            if len(rename.get(b[3], ())) > 1:
                host_a, host_b = piece_owner[b[1]], piece_owner[b[2]]
                new_a = [c for c in rename[b[3]] if c in current.incidence[host_a]]
                new_b = [c for c in rename[b[3]] if c in current.incidence[host_b]]
                assert new_a == new_b and len(new_a) == 1, (b, new_a, new_b)
                b[3] = new_a[0]
        bumps.append([d.id, f"{d.id}~a", f"{d.id}~b", y_cur])
        still: list[DiskAttachment] = []
        for e in pending:
            if e.component != d.component:
                new_comp = e.component
            else:
                end_piece = prev.components[e.component].cut.curves[e.curve].end_a[0]
                new_comp = piece_to_comp[end_piece]
            new_chamber = None
            for opt in rename.get(e.chamber, {e.chamber}):
                if opt in current.incidence.get(new_comp, ()):
                    new_chamber = opt
            assert new_chamber is not None, (e.id, new_comp)
            still.append(
                DiskAttachment(
                    id=e.id, chamber=new_chamber, component=new_comp, curve=e.curve
                )
            )
        pending = still

    # Final annotations from the original chambers: a slab bump voids the
    # region it joined, an untouched chamber carries over, a cut chamber
    # leaves pieces per _oracle_region_annotation.  Both scars of every slab
    # must end up walling the same absorbing region.
    bumped = set()
    for d_id, sa, sb, ch in bumps:
        host_a, host_b = piece_owner[sa], piece_owner[sb]
        assert ch in current.incidence[host_a], (d_id, ch)
        assert ch in current.incidence[host_b], (d_id, ch)
        bumped.add(ch)
    out_chambers = {
        ch: Chamber(
            ch,
            _oracle_region_annotation(
                complex, chamber_origin[ch], ch in bumped, disks
            ),
        )
        for ch in current.chambers
    }
    final = ChamberComplex(
        ambient_mode=current.ambient_mode,
        components=current.components,
        chambers=out_chambers,
        incidence=current.incidence,
    )
    final, conflicts = annotation_closure(final)
    assert not conflicts, conflicts
    return final


# ---------------------------------------------------------------------------
# Diskiness: assemble the side subsurface explicitly


def oracle_is_disky(raw, component_id: str, side_chamber: str) -> bool:
    """Glue surviving panels and removed annuli into honest surfaces.

    Each interior new component contributes its non-scar pieces; each slab
    whose absorbing chamber lies in the side contributes an annulus (genus 0,
    two boundary circles).  Boundaries glue where a scar sits on an interior
    component.  Every connected surface must be a disk: Euler characteristic
    one, one boundary circle.
    """
    cx = raw.complex
    side = cx.side_chambers(component_id, side_chamber)
    interior = [
        n
        for n, pair in cx.incidence.items()
        if n != component_id and pair[0] in side and pair[1] in side
    ]
    slabs = [d for d, rec in raw.scars.items() if rec.internal_to in side]
    g = nx.Graph()
    chi: dict[tuple, int] = {}
    boundary: dict[tuple, int] = {}
    for n in interior:
        comp = cx.components[n]
        origin = raw.comp_origin[n]
        real = [p for p in comp.cut.pieces if p in raw.before.components[origin].cut.pieces]
        g.add_node(("panel", n))
        chi[("panel", n)] = sum(comp.cut.pieces[p].euler() for p in real)
        boundary[("panel", n)] = 0
    for d in slabs:
        rec = raw.scars[d]
        g.add_node(("slab", d))
        chi[("slab", d)] = 0
        ends = 2
        for host in (rec.host_component_a, rec.host_component_b):
            if ("panel", host) in g:
                g.add_edge(("slab", d), ("panel", host))
                ends -= 1
        boundary[("slab", d)] = ends
    for group in nx.connected_components(g):
        total_chi = sum(chi[n] for n in group)
        total_b = sum(boundary[n] for n in group)
        if not (total_chi == 1 and total_b == 1):
            return False
    return True


# ---------------------------------------------------------------------------
# Exhaustive succession filter (literal restatement of the six rules)


def oracle_valid_successions(raw, before_flags: dict[str, str], goneball_sets):
    """All (flags, pruned) pairs passing a literal reading of the rules.

    goneball_sets enumerates prune choices; rules are evaluated on the
    pruned complex for each choice.  Only usable on scenes where every
    annotation needed by the rules is resolved.
    """
    from chamber_calculus.flags import EMPTY, OCCUPIED
    from chamber_calculus.surgery import is_disky, prune

    results = []
    for gone in goneball_sets:
        dec = prune(raw, frozenset(gone))
        cx = dec.complex
        chambers = sorted(cx.chambers)
        disky_hb: dict[str, bool] = {}
        disky_ball: dict[str, bool] = {}
        for ch in chambers:
            ann = cx.chambers[ch].annotation
            bdry = cx.boundary_components(ch)
            d = len(bdry) == 1 and is_disky(raw, bdry[0], ch)
            disky_hb[ch] = ann.is_handlebody == YES and d
            disky_ball[ch] = ann.is_ball == YES and d
        for assignment in itertools.product([OCCUPIED, EMPTY], repeat=len(chambers)):
            flags = dict(zip(chambers, assignment))
            if _ok_literal(dec, before_flags, flags, gone, disky_hb, disky_ball):
                results.append((flags, frozenset(gone)))
    return results


def _ok_literal(dec, before_flags, flags, gone, disky_hb, disky_ball) -> bool:
    from chamber_calculus.flags import EMPTY, OCCUPIED

    raw = dec.raw
    cx = dec.complex
    for ch in cx.chambers:
        # rule 1: every chamber that is not a disky handlebody is occupied
        if not disky_hb[ch] and flags[ch] == EMPTY:
            return False
        # rule 2: every ball chamber is occupied
        if cx.chambers[ch].annotation.is_ball == YES and flags[ch] == EMPTY:
            return False
    remnants: dict[str, list[str]] = {}
    for new_ch, old in raw.remnant_map.items():
        remnants.setdefault(old, []).append(new_ch)
    gone_set = set(gone)
    for old, rems in remnants.items():
        if before_flags.get(old) != OCCUPIED:
            continue
        survivors = [r for r in rems if r not in gone_set]
        occupied_survivors = [r for r in survivors if flags[r] == OCCUPIED]
        # rule 3: at least one remnant of an occupied chamber stays occupied
        if not occupied_survivors:
            return False
        all_dh = all((r in gone_set) or disky_hb[r] for r in rems)
        all_db = all((r in gone_set) or disky_ball[r] for r in rems)
        # rule 4: an occupied disky-handlebody remnant forces all disky
        for r in occupied_survivors:
            if disky_hb[r] and not all_dh:
                return False
        # rule 5: a surviving disky-ball remnant forces all disky balls
        for r in survivors:
            if disky_ball[r] and not all_db:
                return False
        # rule 6: all disky balls -> all but one pruned, survivor occupied
        if all_db:
            if len(survivors) != 1 or flags[survivors[0]] != OCCUPIED:
                return False
    return True
