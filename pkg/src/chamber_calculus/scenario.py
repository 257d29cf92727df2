"""Scenario files: one canonical JSON-shaped format for engine objects.

A scenario is a single top-level object with optional sections (complex,
flags, disk sets, policy, profile, sweep, graphic, vertex, saddle,
bullseye, extra disk, sequences).  Output is canonical: sorted keys,
lists sorted by id, exact rationals as "p/q" strings, never a float.
Parsing rejects unknown keys everywhere, so serialize(parse(text)) is
byte-identical whenever text is canonical.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .certificates import Bullseye
from .flags import EMPTY, OCCUPIED, FlaggedComplex, SuccessionPolicy
from .scene import (
    ANNOTATED_MODE,
    Chamber,
    ChamberComplex,
    Curve,
    CutComplex,
    DiskAttachment,
    Piece,
    SPHERE_MODE,
    SurfaceComponent,
    TopAnnotation,
    UNKNOWN,
    validate_scenario,
)
from .sweepout import (
    ABOVE,
    BALANCED_LABELS,
    BELOW,
    BIRTH,
    DEATH,
    CircleRef,
    Event,
    Graphic,
    LABELS,
    LevelProfile,
    NestingForest,
    QUADRANTS,
    QuadrantConfig,
    SADDLE,
    SaddleCrossing,
    SweepSpec,
    validate_forest,
)


class ScenarioError(ValueError):
    """Malformed scenario text: syntax, unknown keys, or bad field values."""


_RATIONAL = re.compile(r"^-?\d+/\d+$")
_ANNOTATION_FIELDS = ("is_ball", "is_handlebody", "is_solid_torus", "is_reducible")
_TRISTATES = ("yes", "no", "unknown")
_FLAGS = (OCCUPIED, EMPTY)
_POLICIES = ("default", "enumerate")
_EVENT_KINDS = (BIRTH, DEATH, SADDLE)


def format_rational(value: Fraction) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def parse_rational(text: object, where: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ScenarioError(f"{where}: expected a rational string 'p/q', got {text!r}")
    num, den = text.split("/")
    if int(den) == 0:
        raise ScenarioError(f"{where}: zero denominator")
    return Fraction(int(num), int(den))


def _require(value, cls, where: str):
    if cls is bool:
        if not isinstance(value, bool):
            raise ScenarioError(f"{where}: expected a boolean")
    elif cls is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ScenarioError(f"{where}: expected an integer")
    elif not isinstance(value, cls):
        raise ScenarioError(f"{where}: expected {cls.__name__}")
    return value


def _obj(value, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    _require(value, dict, where)
    unknown = set(value) - set(required) - set(optional)
    if unknown:
        raise ScenarioError(f"{where}: unknown keys {sorted(unknown)}")
    missing = [k for k in required if k not in value]
    if missing:
        raise ScenarioError(f"{where}: missing keys {missing}")
    return value


def _str_list(value, where: str) -> list[str]:
    _require(value, list, where)
    for i, x in enumerate(value):
        _require(x, str, f"{where}[{i}]")
    return value


# ---------------------------------------------------------------------------
# Complex

def _parse_component(obj, where: str) -> SurfaceComponent:
    _obj(obj, where, ("id", "genus", "pieces", "curves"))
    cid = _require(obj["id"], str, f"{where}.id")
    pieces = {}
    for i, p in enumerate(_require(obj["pieces"], list, f"{where}.pieces")):
        pw = f"{where}.pieces[{i}]"
        _obj(p, pw, ("id", "genus", "slots"))
        pid = _require(p["id"], str, f"{pw}.id")
        pieces[pid] = Piece(
            pid,
            _require(p["genus"], int, f"{pw}.genus"),
            tuple(_str_list(p["slots"], f"{pw}.slots")),
        )
    curves = {}
    for i, c in enumerate(_require(obj["curves"], list, f"{where}.curves")):
        cw = f"{where}.curves[{i}]"
        _obj(c, cw, ("id", "end_a", "end_b"))
        ends = []
        for key in ("end_a", "end_b"):
            end = _str_list(c[key], f"{cw}.{key}")
            if len(end) != 2:
                raise ScenarioError(f"{cw}.{key}: expected [piece, slot]")
            ends.append((end[0], end[1]))
        curve_id = _require(c["id"], str, f"{cw}.id")
        curves[curve_id] = Curve(curve_id, ends[0], ends[1])
    return SurfaceComponent(
        cid,
        _require(obj["genus"], int, f"{where}.genus"),
        CutComplex(pieces=pieces, curves=curves),
    )


def _parse_annotation(obj, where: str) -> TopAnnotation:
    _obj(obj, where, (), _ANNOTATION_FIELDS)
    values = {}
    for name in _ANNOTATION_FIELDS:
        if name in obj:
            v = _require(obj[name], str, f"{where}.{name}")
            if v not in _TRISTATES:
                raise ScenarioError(f"{where}.{name}: expected yes/no/unknown")
            values[name] = v
    return TopAnnotation(**values)


def _parse_complex(payload, where: str) -> ChamberComplex:
    mode = _require(payload["ambient_mode"], str, f"{where}.ambient_mode")
    if mode not in (SPHERE_MODE, ANNOTATED_MODE):
        raise ScenarioError(f"{where}.ambient_mode: expected sphere or annotated")
    components = {}
    for i, c in enumerate(_require(payload["components"], list, f"{where}.components")):
        comp = _parse_component(c, f"{where}.components[{i}]")
        if comp.id in components:
            raise ScenarioError(f"{where}.components: duplicate id {comp.id!r}")
        components[comp.id] = comp
    annotations = {}
    for ch, ann in _require(
        payload.get("annotations", {}), dict, f"{where}.annotations"
    ).items():
        annotations[ch] = _parse_annotation(ann, f"{where}.annotations.{ch}")
    chambers = {}
    for ch in _str_list(payload["chambers"], f"{where}.chambers"):
        if ch in chambers:
            raise ScenarioError(f"{where}.chambers: duplicate id {ch!r}")
        chambers[ch] = Chamber(ch, annotations.pop(ch, TopAnnotation()))
    if annotations:
        raise ScenarioError(
            f"{where}.annotations: unknown chambers {sorted(annotations)}"
        )
    incidence = {}
    for comp, pair in _require(payload["incidence"], dict, f"{where}.incidence").items():
        sides = _str_list(pair, f"{where}.incidence.{comp}")
        if len(sides) != 2:
            raise ScenarioError(f"{where}.incidence.{comp}: expected two chambers")
        incidence[comp] = (sides[0], sides[1])
    return ChamberComplex(
        ambient_mode=mode,
        components=components,
        chambers=chambers,
        incidence=incidence,
    )


def _annotation_payload(ann: TopAnnotation) -> dict | None:
    out = {n: getattr(ann, n) for n in _ANNOTATION_FIELDS if getattr(ann, n) != UNKNOWN}
    return out or None


def _complex_payload(cx: ChamberComplex) -> dict:
    components = []
    for cid in sorted(cx.components):
        comp = cx.components[cid]
        components.append(
            {
                "id": cid,
                "genus": comp.genus,
                "pieces": [
                    {"id": p.id, "genus": p.genus, "slots": list(p.slots)}
                    for p in sorted(comp.cut.pieces.values(), key=lambda p: p.id)
                ],
                "curves": [
                    {"id": c.id, "end_a": list(c.end_a), "end_b": list(c.end_b)}
                    for c in sorted(comp.cut.curves.values(), key=lambda c: c.id)
                ],
            }
        )
    annotations = {}
    for ch in sorted(cx.chambers):
        payload = _annotation_payload(cx.chambers[ch].annotation)
        if payload:
            annotations[ch] = payload
    out = {
        "ambient_mode": cx.ambient_mode,
        "components": components,
        "chambers": sorted(cx.chambers),
        "incidence": {c: list(pair) for c, pair in sorted(cx.incidence.items())},
    }
    if annotations:
        out["annotations"] = annotations
    return out


# ---------------------------------------------------------------------------
# Disks, flags, policy

def _parse_disk(obj, where: str) -> DiskAttachment:
    _obj(
        obj,
        where,
        ("id", "chamber", "component", "curve"),
        ("nesting_parent", "enclosed_hint"),
    )
    return DiskAttachment(
        id=_require(obj["id"], str, f"{where}.id"),
        chamber=_require(obj["chamber"], str, f"{where}.chamber"),
        component=_require(obj["component"], str, f"{where}.component"),
        curve=_require(obj["curve"], str, f"{where}.curve"),
        nesting_parent=(
            _require(obj["nesting_parent"], str, f"{where}.nesting_parent")
            if "nesting_parent" in obj
            else None
        ),
        enclosed_hint=(
            _require(obj["enclosed_hint"], str, f"{where}.enclosed_hint")
            if "enclosed_hint" in obj
            else None
        ),
    )


def _disk_payload(d: DiskAttachment) -> dict:
    out = {
        "id": d.id,
        "chamber": d.chamber,
        "component": d.component,
        "curve": d.curve,
    }
    if d.nesting_parent is not None:
        out["nesting_parent"] = d.nesting_parent
    if d.enclosed_hint is not None:
        out["enclosed_hint"] = d.enclosed_hint
    return out


def _parse_flags(obj, where: str) -> dict[str, str]:
    flags = {}
    for ch, flag in _require(obj, dict, where).items():
        if flag not in _FLAGS:
            raise ScenarioError(f"{where}.{ch}: expected occupied or empty")
        flags[ch] = flag
    return flags


# ---------------------------------------------------------------------------
# Profile, sweep, forest

def _parse_profile(obj, where: str) -> LevelProfile:
    _obj(obj, where, ("events",))
    events = []
    for i, ev in enumerate(_require(obj["events"], list, f"{where}.events")):
        ew = f"{where}.events[{i}]"
        _obj(ev, ew, ("s", "kind"), ("effect", "links"))
        kind = _require(ev["kind"], str, f"{ew}.kind")
        if kind not in _EVENT_KINDS:
            raise ScenarioError(f"{ew}.kind: expected birth/death/saddle")
        effect = None
        if "effect" in ev:
            effect = _require(ev["effect"], str, f"{ew}.effect")
            if effect not in (ABOVE, BELOW):
                raise ScenarioError(f"{ew}.effect: expected above or below")
        links = []
        for j, link in enumerate(
            _require(ev.get("links", []), list, f"{ew}.links")
        ):
            pair = _str_list(link, f"{ew}.links[{j}]")
            if len(pair) != 2:
                raise ScenarioError(f"{ew}.links[{j}]: expected [component, curve]")
            links.append((pair[0], pair[1]))
        events.append(
            Event(parse_rational(ev["s"], f"{ew}.s"), kind, effect, tuple(links))
        )
    return LevelProfile(tuple(events))


def _profile_payload(profile: LevelProfile) -> dict:
    events = []
    for ev in profile.events:
        out = {"s": format_rational(ev.s), "kind": ev.kind}
        if ev.effect is not None:
            out["effect"] = ev.effect
        if ev.links:
            out["links"] = [list(l) for l in ev.links]
        events.append(out)
    return {"events": events}


def _parse_forest(obj, where: str) -> NestingForest:
    _obj(obj, where, ("outer_chamber", "circles", "above_pieces"))
    circles = []
    for i, c in enumerate(_require(obj["circles"], list, f"{where}.circles")):
        cw = f"{where}.circles[{i}]"
        _obj(c, cw, ("id", "component", "curve"), ("parent",))
        circles.append(
            CircleRef(
                _require(c["id"], str, f"{cw}.id"),
                _require(c["component"], str, f"{cw}.component"),
                _require(c["curve"], str, f"{cw}.curve"),
                _require(c["parent"], str, f"{cw}.parent") if "parent" in c else None,
            )
        )
    above = set()
    for i, pair in enumerate(
        _require(obj["above_pieces"], list, f"{where}.above_pieces")
    ):
        parts = _str_list(pair, f"{where}.above_pieces[{i}]")
        if len(parts) != 2:
            raise ScenarioError(
                f"{where}.above_pieces[{i}]: expected [component, piece]"
            )
        above.add((parts[0], parts[1]))
    return NestingForest(
        tuple(circles),
        _require(obj["outer_chamber"], str, f"{where}.outer_chamber"),
        frozenset(above),
    )


def _forest_payload(forest: NestingForest) -> dict:
    circles = []
    for c in forest.circles:
        out = {"id": c.id, "component": c.component, "curve": c.curve}
        if c.parent is not None:
            out["parent"] = c.parent
        circles.append(out)
    circles.sort(key=lambda c: c["id"])
    return {
        "outer_chamber": forest.outer_chamber,
        "circles": circles,
        "above_pieces": [list(p) for p in sorted(forest.above_pieces)],
    }


# ---------------------------------------------------------------------------
# Graphic: regions grid plus the derived edge/vertex cells

def _wall_changes(a: str, b: str) -> bool:
    return a != b


def graphic_edges(graphic: Graphic) -> list[dict]:
    """Label-changing walls between adjacent cells; the graphic's edges."""
    cols, rows = len(graphic.columns), len(graphic.columns[0])
    edges = []
    for c in range(cols):
        for r in range(rows - 1):
            a, b = graphic.columns[c][r], graphic.columns[c][r + 1]
            if _wall_changes(a, b):
                digit = ABOVE if a[0] != b[0] else BELOW
                edges.append({"cells": [[c, r], [c, r + 1]], "digit": digit})
    pairs = [(c, c + 1) for c in range(cols - 1)]
    if graphic.wrap and cols > 1:
        pairs.append((cols - 1, 0))
    for c, c2 in pairs:
        for r in range(rows):
            a, b = graphic.columns[c][r], graphic.columns[c2][r]
            if _wall_changes(a, b):
                digit = ABOVE if a[0] != b[0] else BELOW
                edges.append({"cells": [[c, r], [c2, r]], "digit": digit})
    return edges


def graphic_vertices(graphic: Graphic) -> list[list[int]]:
    """Corners where four label-changing walls meet (valence-4 crossings)."""
    cols, rows = len(graphic.columns), len(graphic.columns[0])
    corners = [(c, (c + 1) % cols) for c in range(cols - 1 + (1 if graphic.wrap and cols > 1 else 0))]
    out = []
    for c, c2 in corners:
        for r in range(rows - 1):
            sw, nw = graphic.columns[c][r], graphic.columns[c][r + 1]
            se, ne = graphic.columns[c2][r], graphic.columns[c2][r + 1]
            if (
                _wall_changes(sw, nw)
                and _wall_changes(se, ne)
                and _wall_changes(sw, se)
                and _wall_changes(nw, ne)
            ):
                out.append([c, r])
    return out


def _parse_graphic(obj, where: str) -> Graphic:
    _obj(obj, where, ("regions",), ("wrap", "edges", "vertices"))
    columns = []
    for i, col in enumerate(_require(obj["regions"], list, f"{where}.regions")):
        labels = _str_list(col, f"{where}.regions[{i}]")
        for j, lab in enumerate(labels):
            if lab not in LABELS:
                raise ScenarioError(f"{where}.regions[{i}][{j}]: bad label {lab!r}")
        columns.append(tuple(labels))
    wrap = _require(obj.get("wrap", False), bool, f"{where}.wrap")
    graphic = Graphic(tuple(columns), wrap)
    problems = graphic.validate()
    if problems:
        raise ScenarioError(f"{where}: invalid graphic: {problems}")
    if "edges" in obj and obj["edges"] != graphic_edges(graphic):
        raise ScenarioError(f"{where}.edges: disagrees with the region grid")
    if "vertices" in obj and obj["vertices"] != graphic_vertices(graphic):
        raise ScenarioError(f"{where}.vertices: disagrees with the region grid")
    return graphic


def _graphic_payload(graphic: Graphic) -> dict:
    out = {
        "regions": [list(col) for col in graphic.columns],
        "edges": graphic_edges(graphic),
        "vertices": graphic_vertices(graphic),
    }
    if graphic.wrap:
        out["wrap"] = True
    return out


# ---------------------------------------------------------------------------
# Classification inputs

def _parse_vertex(obj, where: str) -> QuadrantConfig:
    _obj(obj, where, ("shape", "circles", "labels"))
    circles = _require(obj["circles"], dict, f"{where}.circles")
    labels = _require(obj["labels"], dict, f"{where}.labels")
    for mapping, what in ((circles, "circles"), (labels, "labels")):
        if set(mapping) != set(QUADRANTS):
            raise ScenarioError(f"{where}.{what}: expected exactly keys P, Q, N, R")
    return QuadrantConfig(
        _require(obj["shape"], str, f"{where}.shape"),
        {q: _require(circles[q], int, f"{where}.circles.{q}") for q in QUADRANTS},
        {q: _require(labels[q], str, f"{where}.labels.{q}") for q in QUADRANTS},
    )


def _parse_saddle(obj, where: str) -> SaddleCrossing:
    _obj(obj, where, ("kind", "label_before", "label_after"))
    return SaddleCrossing(
        _require(obj["kind"], str, f"{where}.kind"),
        _require(obj["label_before"], str, f"{where}.label_before"),
        _require(obj["label_after"], str, f"{where}.label_after"),
    )


def _parse_bullseye(obj, where: str) -> Bullseye:
    _obj(obj, where, ("host_chamber", "k"), ("blank", "torus_side"))
    torus = {}
    if "torus_side" in obj:
        torus["torus_side"] = _parse_annotation(obj["torus_side"], f"{where}.torus_side")
    return Bullseye(
        _require(obj["host_chamber"], str, f"{where}.host_chamber"),
        _require(obj["k"], int, f"{where}.k"),
        _require(obj.get("blank", False), bool, f"{where}.blank"),
        **torus,
    )


# ---------------------------------------------------------------------------
# Scenario

@dataclass(frozen=True)
class SequenceSpec:
    """One decomposition sequence: start flags plus ordered disk set ids."""

    id: str
    flags: dict[str, str]
    disk_sets: tuple[str, ...]


@dataclass
class Scenario:
    complex: ChamberComplex
    flags: dict[str, str] | None = None
    disk_sets: dict[str, tuple[DiskAttachment, ...]] = field(default_factory=dict)
    policy: SuccessionPolicy | None = None
    profile: LevelProfile | None = None
    sweep: SweepSpec | None = None
    graphic: Graphic | None = None
    vertex: QuadrantConfig | None = None
    saddle: SaddleCrossing | None = None
    bullseye: Bullseye | None = None
    extra_disk: DiskAttachment | None = None
    sequences: tuple[SequenceSpec, ...] = ()

    def flagged(self) -> FlaggedComplex:
        if self.flags is None:
            raise ScenarioError("scenario has no flags section")
        return FlaggedComplex(self.complex, dict(self.flags))

    def ordered_disk_sets(self) -> list[tuple[DiskAttachment, ...]]:
        return [self.disk_sets[k] for k in sorted(self.disk_sets)]


_TOP_KEYS = (
    "ambient_mode",
    "components",
    "chambers",
    "incidence",
    "annotations",
    "flags",
    "disk_sets",
    "policy",
    "profile",
    "sweep",
    "graphic",
    "vertex",
    "saddle",
    "bullseye",
    "extra_disk",
    "sequences",
)


def parse_scenario(text: str) -> Scenario:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"not valid JSON: {e}") from None
    _obj(payload, "scenario", ("ambient_mode", "components", "chambers", "incidence"),
         tuple(k for k in _TOP_KEYS if k not in ("ambient_mode", "components", "chambers", "incidence")))
    cx = _parse_complex(payload, "scenario")

    flags = None
    if "flags" in payload:
        flags = _parse_flags(payload["flags"], "scenario.flags")

    disk_sets = {}
    for set_id, disks in _require(
        payload.get("disk_sets", {}), dict, "scenario.disk_sets"
    ).items():
        parsed = []
        for i, d in enumerate(_require(disks, list, f"scenario.disk_sets.{set_id}")):
            parsed.append(_parse_disk(d, f"scenario.disk_sets.{set_id}[{i}]"))
        disk_sets[set_id] = tuple(parsed)

    policy = None
    if "policy" in payload:
        pol = _obj(payload["policy"], "scenario.policy", ("strategy",))
        strategy = _require(pol["strategy"], str, "scenario.policy.strategy")
        if strategy not in _POLICIES:
            raise ScenarioError("scenario.policy.strategy: expected default or enumerate")
        policy = SuccessionPolicy(strategy=strategy)

    profile = None
    if "profile" in payload:
        profile = _parse_profile(payload["profile"], "scenario.profile")

    sweep = None
    if "sweep" in payload:
        sw = _obj(payload["sweep"], "scenario.sweep", ("s_star", "forest"))
        if profile is None:
            raise ScenarioError("scenario.sweep requires a profile section")
        sweep = SweepSpec(
            profile,
            parse_rational(sw["s_star"], "scenario.sweep.s_star"),
            _parse_forest(sw["forest"], "scenario.sweep.forest"),
        )

    graphic = None
    if "graphic" in payload:
        graphic = _parse_graphic(payload["graphic"], "scenario.graphic")

    vertex = None
    if "vertex" in payload:
        vertex = _parse_vertex(payload["vertex"], "scenario.vertex")

    saddle = None
    if "saddle" in payload:
        saddle = _parse_saddle(payload["saddle"], "scenario.saddle")

    bullseye = None
    if "bullseye" in payload:
        bullseye = _parse_bullseye(payload["bullseye"], "scenario.bullseye")

    extra_disk = None
    if "extra_disk" in payload:
        extra_disk = _parse_disk(payload["extra_disk"], "scenario.extra_disk")

    sequences = []
    seen = set()
    for i, s in enumerate(_require(payload.get("sequences", []), list, "scenario.sequences")):
        sw = f"scenario.sequences[{i}]"
        _obj(s, sw, ("id", "flags", "disk_sets"))
        sid = _require(s["id"], str, f"{sw}.id")
        if sid in seen:
            raise ScenarioError(f"{sw}: duplicate sequence id {sid!r}")
        seen.add(sid)
        set_ids = _str_list(s["disk_sets"], f"{sw}.disk_sets")
        for k in set_ids:
            if k not in disk_sets:
                raise ScenarioError(f"{sw}.disk_sets: unknown disk set {k!r}")
        sequences.append(
            SequenceSpec(sid, _parse_flags(s["flags"], f"{sw}.flags"), tuple(set_ids))
        )

    return Scenario(
        complex=cx,
        flags=flags,
        disk_sets=disk_sets,
        policy=policy,
        profile=profile,
        sweep=sweep,
        graphic=graphic,
        vertex=vertex,
        saddle=saddle,
        bullseye=bullseye,
        extra_disk=extra_disk,
        sequences=tuple(sequences),
    )


def serialize_scenario(sc: Scenario) -> str:
    payload = _complex_payload(sc.complex)
    if sc.flags is not None:
        payload["flags"] = {ch: sc.flags[ch] for ch in sorted(sc.flags)}
    if sc.disk_sets:
        payload["disk_sets"] = {
            k: [_disk_payload(d) for d in sorted(v, key=lambda d: d.id)]
            for k, v in sorted(sc.disk_sets.items())
        }
    if sc.policy is not None:
        payload["policy"] = {"strategy": sc.policy.strategy}
    if sc.profile is not None:
        payload["profile"] = _profile_payload(sc.profile)
    if sc.sweep is not None:
        payload["sweep"] = {
            "s_star": format_rational(sc.sweep.s_star),
            "forest": _forest_payload(sc.sweep.forest),
        }
    if sc.graphic is not None:
        payload["graphic"] = _graphic_payload(sc.graphic)
    if sc.vertex is not None:
        payload["vertex"] = {
            "shape": sc.vertex.shape,
            "circles": {q: sc.vertex.circles[q] for q in QUADRANTS},
            "labels": {q: sc.vertex.labels[q] for q in QUADRANTS},
        }
    if sc.saddle is not None:
        payload["saddle"] = {
            "kind": sc.saddle.kind,
            "label_before": sc.saddle.label_before,
            "label_after": sc.saddle.label_after,
        }
    if sc.bullseye is not None:
        payload["bullseye"] = {
            "host_chamber": sc.bullseye.host_chamber,
            "k": sc.bullseye.k,
        }
        if sc.bullseye.blank:
            payload["bullseye"]["blank"] = True
        torus = _annotation_payload(sc.bullseye.torus_side)
        if torus:
            payload["bullseye"]["torus_side"] = torus
    if sc.extra_disk is not None:
        payload["extra_disk"] = _disk_payload(sc.extra_disk)
    if sc.sequences:
        payload["sequences"] = [
            {
                "id": s.id,
                "flags": {ch: s.flags[ch] for ch in sorted(s.flags)},
                "disk_sets": list(s.disk_sets),
            }
            for s in sorted(sc.sequences, key=lambda s: s.id)
        ]
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def scenario_problems(sc: Scenario) -> list[str]:
    """Every validation problem across all sections, as stable codes."""
    report = validate_scenario(sc.complex, {k: list(v) for k, v in sc.disk_sets.items()})
    problems = [f"{p.code}:{p.where}" if p.where else p.code for p in report.problems]
    if sc.flags is not None:
        problems += [f"flags:{p}" for p in sc.flagged().validate()]
    for s in sc.sequences:
        bad = FlaggedComplex(sc.complex, dict(s.flags)).validate()
        problems += [f"sequence:{s.id}:{p}" for p in bad]
    if sc.profile is not None:
        problems += [f"profile:{p}" for p in sc.profile.validate()]
    if sc.sweep is not None:
        try:
            label = sc.profile.digits(sc.sweep.s_star)
        except ValueError:
            problems.append("sweep:s-star-at-event")
            label = None
        if label is not None and f"{label[0]}{label[1]}" not in BALANCED_LABELS:
            problems.append("sweep:s-star-not-balanced")
        problems += [
            f"sweep:{p}" for p in validate_forest(sc.complex, sc.sweep.forest)
        ]
    if sc.graphic is not None:
        problems += [f"graphic:{p}" for p in sc.graphic.validate()]
    return problems
