"""Cut complexes, chamber complexes, annotations, and validation."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chamber_calculus.generate import random_complex, random_component, rng_for
from chamber_calculus.scene import (
    ANNOTATED_MODE,
    BALL_ANNOTATION,
    BLANK_ANNOTATION,
    NO,
    SPHERE_MODE,
    UNKNOWN,
    YES,
    Chamber,
    ChamberComplex,
    Curve,
    CutComplex,
    DiskAttachment,
    EssentialNonseparating,
    EssentialSeparating,
    Inessential,
    Piece,
    SurfaceComponent,
    TopAnnotation,
    annotation_closure,
    classify_curve,
    closed_component,
    curve_sides,
    derive_chamber_tree,
    enclosed_side,
    internal_id_ok,
    refine_piece,
    valid_id,
    validate_scenario,
)
from oracles import oracle_curve_sides, oracle_genus, oracle_subset_genus

seeds = st.integers(min_value=0, max_value=10**6)


def _component(seed: int, genus: int) -> SurfaceComponent:
    return random_component(rng_for(seed, 0), "W1", genus)


# ---------------------------------------------------------------------------
# Genus bookkeeping against the networkx oracle


@given(seeds, st.integers(min_value=0, max_value=4))
@settings(max_examples=150, deadline=None)
def test_component_genus_matches_oracle(seed, genus):
    comp = _component(seed, genus)
    assert comp.cut.genus() == oracle_genus(comp.cut) == genus


@given(seeds, st.integers(min_value=0, max_value=3))
@settings(max_examples=150, deadline=None)
def test_curve_sides_and_subset_genus_match_oracle(seed, genus):
    comp = _component(seed, genus)
    cut = comp.cut
    for cid in sorted(cut.curves):
        sides = curve_sides(cut, cid)
        assert sides == oracle_curve_sides(cut, cid)
        if sides is None:
            continue
        excluded = frozenset({cid})
        total = 0
        for side in sides:
            got = cut.subset_genus(side, excluded)
            assert got == oracle_subset_genus(cut, side, excluded)
            total += got
        # separating curve: side genera sum to the component genus
        assert total == genus


@given(seeds, st.integers(min_value=1, max_value=3))
@settings(max_examples=100, deadline=None)
def test_classify_curve_trichotomy(seed, genus):
    comp = _component(seed, genus)
    for cid in sorted(comp.cut.curves):
        kind = classify_curve(comp, cid)
        sides = curve_sides(comp.cut, cid)
        if sides is None:
            assert isinstance(kind, EssentialNonseparating)
        elif isinstance(kind, Inessential):
            assert comp.cut.subset_genus(kind.side, frozenset({cid})) == 0
        else:
            assert isinstance(kind, EssentialSeparating)
            assert 1 <= kind.g1 <= kind.g2


def test_refine_piece_preserves_genus_and_euler():
    comp = closed_component("W1", 2)
    cut = comp.cut
    pid = next(iter(cut.pieces))
    out = refine_piece(cut, pid, (1, 1), ((), ()), ("a", "b", "c"))
    assert out.genus() == 2
    chi_old = sum(p.euler() for p in cut.pieces.values())
    chi_new = sum(p.euler() for p in out.pieces.values())
    assert chi_new == chi_old
    assert oracle_genus(out) == 2


def test_refine_piece_rejects_bad_splits():
    cut = closed_component("W1", 1).cut
    pid = next(iter(cut.pieces))
    with pytest.raises(ValueError):
        refine_piece(cut, pid, (1, 1), ((), ()), ("a", "b", "c"))
    with pytest.raises(ValueError):
        refine_piece(cut, pid, (1, 0), ((("ghost",)), ()), ("a", "b", "c"))


# ---------------------------------------------------------------------------
# Chamber complexes: tree structure and annotation closure


def _two_wall_scene(mode=SPHERE_MODE) -> ChamberComplex:
    cx = ChamberComplex(
        ambient_mode=mode,
        components={
            "V": closed_component("V", 1),
            "W": closed_component("W", 0),
        },
        chambers={"r0": Chamber("r0"), "r1": Chamber("r1"), "r2": Chamber("r2")},
        incidence={"V": ("r0", "r1"), "W": ("r1", "r2")},
    )
    return cx


def test_chamber_tree_is_canonical():
    cx = _two_wall_scene()
    tree = derive_chamber_tree(cx)
    assert tree.root == "r0"
    assert tree.parent["r1"] == "r0" and tree.parent["r2"] == "r1"
    assert tree.order == ("r0", "r1", "r2")


def test_side_chambers_partition():
    cx = _two_wall_scene()
    left = cx.side_chambers("W", "r1")
    right = cx.side_chambers("W", "r2")
    assert left == frozenset({"r0", "r1"})
    assert right == frozenset({"r2"})
    assert cx.other_side("W", "r1") == "r2"


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_random_complex_is_a_tree(seed):
    cx = random_complex(rng_for(seed, 1))
    assert len(cx.chambers) == len(cx.components) + 1
    derive_chamber_tree(cx)  # raises if disconnected
    assert validate_scenario(cx).ok


def test_closure_ball_forces_handlebody():
    cx = ChamberComplex(
        ambient_mode=ANNOTATED_MODE,
        components={"W": closed_component("W", 0)},
        chambers={
            "in": Chamber("in", BALL_ANNOTATION),
            "out": Chamber("out"),
        },
        incidence={"W": ("in", "out")},
    )
    closed, conflicts = annotation_closure(cx)
    assert not conflicts
    ann = closed.chambers["in"].annotation
    assert ann.is_handlebody == YES
    assert ann.is_solid_torus == NO


def test_closure_two_boundaries_is_never_a_handlebody():
    cx = _two_wall_scene(ANNOTATED_MODE)
    closed, conflicts = annotation_closure(cx)
    assert not conflicts
    ann = closed.chambers["r1"].annotation
    assert ann.is_ball == NO
    assert ann.is_handlebody == NO
    assert ann.is_solid_torus == NO


def test_closure_schoenflies_only_in_sphere_mode():
    for mode, expected in ((SPHERE_MODE, YES), (ANNOTATED_MODE, UNKNOWN)):
        cx = ChamberComplex(
            ambient_mode=mode,
            components={"W": closed_component("W", 0)},
            chambers={"in": Chamber("in"), "out": Chamber("out")},
            incidence={"W": ("in", "out")},
        )
        closed, conflicts = annotation_closure(cx)
        assert not conflicts
        assert closed.chambers["in"].annotation.is_ball == expected


def test_closure_detects_conflicts():
    cx = ChamberComplex(
        ambient_mode=ANNOTATED_MODE,
        components={"W": closed_component("W", 1)},
        chambers={
            "in": Chamber("in", TopAnnotation(is_ball=YES)),
            "out": Chamber("out"),
        },
        incidence={"W": ("in", "out")},
    )
    _, conflicts = annotation_closure(cx)
    assert conflicts  # a genus-1 boundary cannot bound a ball


def test_genus_one_handlebody_is_a_solid_torus():
    cx = ChamberComplex(
        ambient_mode=ANNOTATED_MODE,
        components={"W": closed_component("W", 1)},
        chambers={
            "in": Chamber("in", TopAnnotation(is_handlebody=YES)),
            "out": Chamber("out"),
        },
        incidence={"W": ("in", "out")},
    )
    closed, conflicts = annotation_closure(cx)
    assert not conflicts
    ann = closed.chambers["in"].annotation
    assert ann.is_solid_torus == YES
    assert ann.is_ball == NO


# ---------------------------------------------------------------------------
# Scenario validation and disk sets


def test_id_rules():
    # user ids reject engine-reserved characters, internal ids allow them
    assert valid_id("W1") and internal_id_ok("W1")
    assert not valid_id("W:1") and internal_id_ok("W:1")
    assert not valid_id("d~a") and internal_id_ok("d~a")
    assert not valid_id("") and not internal_id_ok("")


def test_validate_rejects_empty_ids():
    cx = ChamberComplex(
        ambient_mode=SPHERE_MODE,
        components={"": closed_component("", 0)},
        chambers={"a": Chamber("a"), "b": Chamber("b")},
        incidence={"": ("a", "b")},
    )
    report = validate_scenario(cx)
    assert not report.ok
    assert "bad-id" in report.codes()


def test_validate_rejects_dangling_incidence():
    cx = ChamberComplex(
        ambient_mode=SPHERE_MODE,
        components={"W": closed_component("W", 0)},
        chambers={"a": Chamber("a"), "b": Chamber("b")},
        incidence={"W": ("a", "ghost")},
    )
    assert not validate_scenario(cx).ok


def _torus_with_meridian() -> ChamberComplex:
    # one genus-1 wall whose handle curve is exposed for disk attachment
    comp = closed_component("W", 1)
    pid = next(iter(comp.cut.pieces))
    cut = refine_piece(comp.cut, pid, (0, 1), ((), ()), ("p0", "p1", "c0"))
    h = cut.pieces["p1"]
    pieces = dict(cut.pieces)
    pieces["p1"] = Piece("p1", 0, h.slots + ("ha", "hb"))
    curves = dict(cut.curves)
    curves["m"] = Curve("m", ("p1", "ha"), ("p1", "hb"))
    cut = CutComplex(pieces=pieces, curves=curves)
    comp = SurfaceComponent("W", 1, cut)
    return ChamberComplex(
        ambient_mode=SPHERE_MODE,
        components={"W": comp},
        chambers={"in": Chamber("in"), "out": Chamber("out")},
        incidence={"W": ("in", "out")},
    )


def test_enclosed_side_rules():
    cx = _torus_with_meridian()
    sep = DiskAttachment(id="d0", chamber="in", component="W", curve="c0")
    side = enclosed_side(cx, sep)
    assert side is not None
    # default: the smaller-genus side is enclosed
    assert cx.components["W"].cut.subset_genus(side, frozenset({"c0"})) == 0
    hinted = DiskAttachment(
        id="d1", chamber="in", component="W", curve="c0", enclosed_hint="p1"
    )
    assert enclosed_side(cx, hinted) == frozenset({"p1"})
    nonsep = DiskAttachment(id="d2", chamber="in", component="W", curve="m")
    assert enclosed_side(cx, nonsep) is None
    bad = DiskAttachment(
        id="d3", chamber="in", component="W", curve="m", enclosed_hint="p1"
    )
    with pytest.raises(ValueError):
        enclosed_side(cx, bad)


def test_disk_validation_catches_conflicts():
    cx = _torus_with_meridian()
    ok = [DiskAttachment(id="d0", chamber="in", component="W", curve="c0")]
    assert validate_scenario(cx, {"D": ok}).ok
    twice = ok + [DiskAttachment(id="d1", chamber="out", component="W", curve="c0")]
    assert not validate_scenario(cx, {"D": twice}).ok  # one disk per curve
    ghost = [DiskAttachment(id="d0", chamber="in", component="W", curve="zz")]
    assert not validate_scenario(cx, {"D": ghost}).ok
    wrong_chamber = [DiskAttachment(id="d0", chamber="far", component="W", curve="c0")]
    assert not validate_scenario(cx, {"D": wrong_chamber}).ok


def test_disk_nesting_must_be_consistent():
    comp = closed_component("W", 0)
    pid = next(iter(comp.cut.pieces))
    cut = refine_piece(comp.cut, pid, (0, 0), ((), ()), ("p0", "p1", "c0"))
    cut = refine_piece(cut, "p1", (0, 0), ((), ("cut0",)), ("p2", "p3", "c1"))
    cx = ChamberComplex(
        ambient_mode=SPHERE_MODE,
        components={"W": SurfaceComponent("W", 0, cut)},
        chambers={"in": Chamber("in"), "out": Chamber("out")},
        incidence={"W": ("in", "out")},
    )
    outer = DiskAttachment(
        id="d0", chamber="in", component="W", curve="c0", enclosed_hint="p3"
    )
    inner = DiskAttachment(
        id="d1",
        chamber="in",
        component="W",
        curve="c1",
        nesting_parent="d0",
        enclosed_hint="p2",
    )
    assert validate_scenario(cx, {"D": [outer, inner]}).ok
    # child enclosure must sit inside the parent enclosure
    flipped = DiskAttachment(
        id="d1",
        chamber="in",
        component="W",
        curve="c1",
        nesting_parent="d0",
        enclosed_hint="p0",
    )
    assert not validate_scenario(cx, {"D": [outer, flipped]}).ok
    loop = DiskAttachment(
        id="d0",
        chamber="in",
        component="W",
        curve="c0",
        nesting_parent="d1",
        enclosed_hint="p3",
    )
    assert not validate_scenario(cx, {"D": [loop, inner]}).ok
