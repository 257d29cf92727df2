"""Surgery on disk sets: reassembly, diskiness, goneballs, pruning."""

from __future__ import annotations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from chamber_calculus.generate import (
    random_complex,
    random_disk_set,
    rng_for,
)
from chamber_calculus.scene import (
    SPHERE_MODE,
    YES,
    Chamber,
    ChamberComplex,
    Curve,
    CutComplex,
    DiskAttachment,
    Piece,
    SurfaceComponent,
    closed_component,
    validate_scenario,
)
from chamber_calculus.surgery import (
    SurgeryError,
    goneball_candidates,
    is_disky,
    prune,
    surger,
    verify_panel_reassembly,
)

seeds = st.integers(min_value=0, max_value=10**6)


def _instance(seed: int):
    rng = rng_for(seed, 4)
    cx = random_complex(rng)
    disks = random_disk_set(rng, cx)
    return cx, disks


def _chi(cx: ChamberComplex) -> int:
    return sum(2 - 2 * cx.genus_of(c) for c in cx.components)


# ---------------------------------------------------------------------------
# Bookkeeping and oracle agreement


@given(seeds)
@settings(max_examples=120, deadline=None)
def test_surgery_euler_and_tree_law(seed):
    cx, disks = _instance(seed)
    raw = surger(cx, disks)
    after = raw.complex
    assert _chi(after) == _chi(cx) + 2 * len(disks)
    assert len(after.chambers) == len(after.components) + 1
    assert validate_scenario(after).ok
    assert verify_panel_reassembly(raw)


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_surger_matches_sequential_oracle(seed):
    cx, disks = _instance(seed)
    got = surger(cx, disks).complex
    try:
        want = oracles.oracle_sequential_surger(cx, disks)
    except oracles.OracleInapplicable:
        assume(False)
    assert oracles.isomorphic(got, want)


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_scar_records_cover_every_disk(seed):
    cx, disks = _instance(seed)
    raw = surger(cx, disks)
    assert sorted(raw.scars) == sorted(d.id for d in disks)
    for rec in raw.scars.values():
        for host in (rec.host_component_a, rec.host_component_b):
            assert host in raw.complex.components
        assert rec.internal_to in raw.complex.chambers
        assert rec.scar_a in raw.complex.components[rec.host_component_a].cut.pieces
        assert rec.scar_b in raw.complex.components[rec.host_component_b].cut.pieces


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_remnants_partition_old_chambers(seed):
    cx, disks = _instance(seed)
    raw = surger(cx, disks)
    assert set(raw.remnant_map.values()) <= set(cx.chambers)
    assert set(raw.remnant_map) == set(raw.complex.chambers)
    # every old chamber leaves at least one remnant
    assert set(raw.remnant_map.values()) == set(cx.chambers)


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_is_disky_matches_assembled_surfaces(seed):
    cx, disks = _instance(seed)
    raw = surger(cx, disks)
    after = raw.complex
    for comp in sorted(after.components):
        for ch in after.incidence[comp]:
            assert is_disky(raw, comp, ch) == oracles.oracle_is_disky(raw, comp, ch)


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_goneball_candidates_are_disky_sphere_leaves(seed):
    cx, disks = _instance(seed)
    raw = surger(cx, disks)
    after = raw.complex
    found = goneball_candidates(raw)
    for ch in found.candidates:
        bdry = after.boundary_components(ch)
        assert len(bdry) == 1
        assert after.genus_of(bdry[0]) == 0
        assert after.chambers[ch].annotation.is_ball == YES
        assert oracles.oracle_is_disky(raw, bdry[0], ch)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_prune_all_candidates_yields_valid_complex(seed):
    cx, disks = _instance(seed)
    raw = surger(cx, disks)
    found = goneball_candidates(raw)
    chosen = _safe_layer(raw, found.candidates)
    dec = prune(raw, chosen)
    after = dec.complex
    assert validate_scenario(after).ok
    assert len(after.chambers) == len(after.components) + 1
    assert set(dec.goneballs) == set(chosen)
    for ch, (sphere, absorber, _old) in dec.goneballs.items():
        assert sphere not in after.components
        assert ch not in after.chambers
        assert absorber in raw.complex.chambers


def _safe_layer(raw, candidates):
    """Drop one of any adjacent candidate pair; the rest prune together."""
    after = raw.complex
    chosen: set[str] = set()
    spheres: set[str] = set()
    for ch in sorted(candidates):
        sphere = after.boundary_components(ch)[0]
        if sphere in spheres:
            continue
        spheres.add(sphere)
        chosen.add(ch)
    return frozenset(chosen)


# ---------------------------------------------------------------------------
# Hand scenes: pocket placement, cascades, error paths


def _sphere_two_pieces() -> ChamberComplex:
    cut = CutComplex(
        pieces={"k": Piece("k", 0, ("c",)), "q": Piece("q", 0, ("c",))},
        curves={"c": Curve("c", ("k", "c"), ("q", "c"))},
    )
    return ChamberComplex(
        ambient_mode=SPHERE_MODE,
        components={"S": SurfaceComponent("S", 0, cut)},
        chambers={"in": Chamber("in"), "out": Chamber("out")},
        incidence={"S": ("in", "out")},
    )


def test_prune_cascade_second_generation():
    # pruning the pocket turns the outside into a fresh disky ball
    cx = _sphere_two_pieces()
    disk = DiskAttachment(id="d0", chamber="in", component="S", curve="c", enclosed_hint="k")
    raw = surger(cx, [disk])
    after = raw.complex
    by_boundary = {
        tuple(sorted(after.boundary_components(ch))): ch for ch in after.chambers
    }
    comp_k = next(c for c in after.components if "k" in after.components[c].cut.pieces)
    comp_q = next(c for c in after.components if "q" in after.components[c].cut.pieces)
    pocket = by_boundary[(comp_k,)]
    outside = by_boundary[tuple(sorted((comp_k, comp_q)))]
    first = goneball_candidates(raw)
    assert pocket in first.candidates
    assert outside not in first.candidates  # two boundaries at generation one
    dec = prune(raw, frozenset({pocket, outside}))
    assert dec.goneballs[pocket][0] == comp_k
    assert dec.goneballs[outside][0] == comp_q
    assert not dec.complex.components
    assert len(dec.complex.chambers) == 1


def test_prune_rejects_non_candidates():
    cx = _sphere_two_pieces()
    disk = DiskAttachment(id="d0", chamber="in", component="S", curve="c", enclosed_hint="k")
    raw = surger(cx, [disk])
    outside = next(
        ch
        for ch in raw.complex.chambers
        if len(raw.complex.boundary_components(ch)) == 2
    )
    with pytest.raises(SurgeryError, match="not goneball candidates"):
        prune(raw, frozenset({outside}))


def test_prune_rejects_adjacent_goneballs():
    cx = ChamberComplex(
        ambient_mode=SPHERE_MODE,
        components={"S": closed_component("S", 0)},
        chambers={"in": Chamber("in"), "out": Chamber("out")},
        incidence={"S": ("in", "out")},
    )
    raw = surger(cx, [])
    found = goneball_candidates(raw)
    assert found.candidates == frozenset({"in", "out"})
    with pytest.raises(SurgeryError, match="adjacent"):
        prune(raw, frozenset({"in", "out"}))


def _pocketed_handle_scene():
    """Genus-1 wall: separating curve c1 whose enclosure holds handle curve m.

    A disk on m carries no enclosure of its own (non-separating curve), yet
    its curve sits inside the c1 pocket; surgery must route its sides into
    the pocket region, not the root region.
    """
    cut = CutComplex(
        pieces={
            "p0": Piece("p0", 0, ("c1",)),
            "p1": Piece("p1", 0, ("c1", "ha", "hb")),
        },
        curves={
            "c1": Curve("c1", ("p0", "c1"), ("p1", "c1")),
            "m": Curve("m", ("p1", "ha"), ("p1", "hb")),
        },
    )
    cx = ChamberComplex(
        ambient_mode=SPHERE_MODE,
        components={"W": SurfaceComponent("W", 1, cut)},
        chambers={"in": Chamber("in"), "out": Chamber("out")},
        incidence={"W": ("in", "out")},
    )
    disks = [
        DiskAttachment(id="d0", chamber="in", component="W", curve="c1", enclosed_hint="p1"),
        DiskAttachment(id="d1", chamber="in", component="W", curve="m"),
    ]
    assert validate_scenario(cx, {"D": disks}).ok
    return cx, disks


def test_sideless_disk_lands_in_sibling_pocket():
    cx, disks = _pocketed_handle_scene()
    raw = surger(cx, disks)
    after = raw.complex
    assert len(after.chambers) == len(after.components) + 1
    assert validate_scenario(after).ok
    assert oracles.isomorphic(after, oracles.oracle_sequential_surger(cx, disks))
    # the pocket content (handle side cut along m) became a sphere
    genera = sorted(after.genus_of(c) for c in after.components)
    assert genera == [0, 0]


def test_goneball_candidates_accept_a_later_state():
    cx = _sphere_two_pieces()
    disk = DiskAttachment(id="d0", chamber="in", component="S", curve="c", enclosed_hint="k")
    raw = surger(cx, [disk])
    after = raw.complex
    pocket = next(
        ch for ch in after.chambers if len(after.boundary_components(ch)) == 1
        and "k" in after.components[after.boundary_components(ch)[0]].cut.pieces
    )
    dec = prune(raw, frozenset({pocket}))
    promoted = goneball_candidates(raw, dec.complex)
    assert set(dec.complex.chambers) & promoted.candidates
