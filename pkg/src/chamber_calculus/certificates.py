"""Certificates, bullseyes, and the equivalence ledger for decompositions.

A flagged chamber complex certifies through concrete mechanisms only: the
boundary of an occupied ball chamber, an is_reducible annotation, or a
recorded guiding sphere whose terminal position has surface components on
both sides.  Nothing is ever inferred from genus alone.

A bullseye is a leafward appendage spliced into a chamber: k nested sphere
components ending either in a torus with declared content behind it or, when
blank, in an occupied ball core.  Bullseyes survive further decomposition
with at least as many spheres unless the host becomes reducible; the
detector works by re-inserting candidate bullseyes and comparing flagged
complexes up to isomorphism, so the claimed relations are verified rather
than trusted.

Decomposition sequences interact when some chamber houses a certificate for
both; the ledger keeps the generated equivalence classes together with
replayable interaction witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .flags import (
    FlaggedComplex,
    SuccessionPolicy,
    default_succession,
)
from .iso import canonical_form
from .scene import (
    BALL_ANNOTATION,
    EMPTY,
    NO,
    OCCUPIED,
    SOLID_TORUS_ANNOTATION,
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
    enclosed_side,
)
from .surgery import (
    InternalContractError,
    RawComplex,
    SurgeryError,
    surger,
)

# ---------------------------------------------------------------------------
# Certificates

OCCUPIED_BALL = "occupied-ball-boundary"
REDUCING_SPHERE = "reducing-sphere"
OCCUPIED_SOLID_TORUS = "occupied-solid-torus"


@dataclass(frozen=True)
class Certificate:
    kind: str
    chamber: str
    witness: str | None = None


@dataclass(frozen=True)
class GuidingRecord:
    """Terminal position of a guiding sphere inside one chamber.

    above/below list the surface components on its two sides; the sphere
    certifies exactly when both are non-empty.
    """

    chamber: str
    above: frozenset[str]
    below: frozenset[str]

    @property
    def certifies(self) -> bool:
        return bool(self.above) and bool(self.below)


def certificates(
    flagged: FlaggedComplex,
    guiding: GuidingRecord | None = None,
    solid_torus_certifies: bool = False,
) -> list[Certificate]:
    """All certificates the complex exhibits.  Total; may be empty."""
    cx = flagged.complex
    out: set[Certificate] = set()
    for ch in cx.chambers:
        ann = cx.chambers[ch].annotation
        flag = flagged.flags.get(ch)
        if flag == OCCUPIED and ann.is_ball == YES:
            bdry = cx.boundary_components(ch)
            out.add(Certificate(OCCUPIED_BALL, ch, witness=bdry[0] if bdry else None))
        if ann.is_reducible == YES:
            out.add(Certificate(REDUCING_SPHERE, ch))
        if solid_torus_certifies and flag == OCCUPIED and ann.is_solid_torus == YES:
            out.add(Certificate(OCCUPIED_SOLID_TORUS, ch))
    if guiding is not None and guiding.certifies:
        if guiding.chamber not in cx.chambers:
            raise ValueError(f"guiding sphere chamber {guiding.chamber!r} not in complex")
        out.add(Certificate(REDUCING_SPHERE, guiding.chamber, witness="guiding-sphere"))
    return sorted(out, key=lambda c: (c.chamber, c.kind, c.witness or ""))


# ---------------------------------------------------------------------------
# Bullseyes


@dataclass(frozen=True)
class Bullseye:
    """k nested spheres around a torus with content, or a blank core ball."""

    host_chamber: str
    k: int
    blank: bool = False
    torus_side: TopAnnotation = SOLID_TORUS_ANNOTATION


def _sphere_component(comp_id: str) -> SurfaceComponent:
    cut = CutComplex(
        pieces={
            "cap_a": Piece("cap_a", 0, ("rim",)),
            "cap_b": Piece("cap_b", 0, ("rim",)),
        },
        curves={"equator": Curve("equator", ("cap_a", "rim"), ("cap_b", "rim"))},
    )
    return SurfaceComponent(id=comp_id, genus=0, cut=cut)


def _torus_component(comp_id: str) -> SurfaceComponent:
    cut = CutComplex(
        pieces={"tube": Piece("tube", 0, ("m1", "m2"))},
        curves={"meridian": Curve("meridian", ("tube", "m1"), ("tube", "m2"))},
    )
    return SurfaceComponent(id=comp_id, genus=1, cut=cut)


def insert_bullseye(
    flagged: FlaggedComplex,
    chamber: str,
    k: int,
    blank: bool = False,
    y_flag: str = EMPTY,
    y_annotation: TopAnnotation | None = None,
) -> FlaggedComplex:
    """Splice a bullseye into a chamber and return the new flagged complex.

    The host chamber becomes occupied (it now holds the inserted content).
    Shell chambers between consecutive spheres are occupied; a blank core is
    an occupied ball; the chamber behind the torus carries y_flag and
    y_annotation (a solid torus by default, a knot-complement stand-in via
    an annotation with is_handlebody=no).
    """
    cx = flagged.complex
    if chamber not in cx.chambers:
        raise ValueError(f"unknown chamber {chamber!r}")
    if k < 0:
        raise ValueError("k must be non-negative")
    if blank and k == 0:
        raise ValueError("a blank bullseye needs at least one sphere")
    if y_annotation is None:
        y_annotation = SOLID_TORUS_ANNOTATION
    if not blank and y_flag == EMPTY and y_annotation.is_handlebody == NO:
        raise ValueError("a non-handlebody torus side cannot be empty")

    used = set(cx.components) | set(cx.chambers)
    n = 0
    while True:
        prefix = f"{chamber}~b{n}"
        fresh = [f"{prefix}q{i}" for i in range(1, k + 1)]
        fresh += [f"{prefix}s{i}" for i in range(1, k)]
        fresh += [f"{prefix}t", f"{prefix}y", f"{prefix}c"]
        if not any(x in used for x in fresh):
            break
        n += 1

    components = dict(cx.components)
    incidence = dict(cx.incidence)
    chambers = dict(cx.chambers)
    flags = dict(flagged.flags)

    core = f"{prefix}y"
    prev = chamber
    for i in range(k, 0, -1):
        comp = f"{prefix}q{i}"
        components[comp] = _sphere_component(comp)
        if i > 1:
            inner = f"{prefix}s{i - 1}"
        else:
            inner = f"{prefix}c" if not blank else core
        incidence[comp] = (prev, inner)
        prev = inner
    if not blank:
        comp = f"{prefix}t"
        components[comp] = _torus_component(comp)
        incidence[comp] = (prev, core)
        prev_chambers = [f"{prefix}s{i}" for i in range(1, k)]
        if k >= 1:
            prev_chambers.append(f"{prefix}c")
        for ch in prev_chambers:
            chambers[ch] = Chamber(id=ch)
            flags[ch] = OCCUPIED
        chambers[core] = Chamber(id=core, annotation=y_annotation)
        flags[core] = y_flag
    else:
        for ch in (f"{prefix}s{i}" for i in range(1, k)):
            chambers[ch] = Chamber(id=ch)
            flags[ch] = OCCUPIED
        chambers[core] = Chamber(id=core, annotation=BALL_ANNOTATION)
        flags[core] = OCCUPIED

    # the host gains boundary; its handlebody-family fields no longer apply
    old_ann = cx.chambers[chamber].annotation
    chambers[chamber] = Chamber(
        id=chamber, annotation=TopAnnotation(is_reducible=old_ann.is_reducible)
    )
    flags[chamber] = OCCUPIED

    result = ChamberComplex(
        ambient_mode=cx.ambient_mode,
        components=components,
        chambers=chambers,
        incidence=incidence,
    )
    result, conflicts = annotation_closure(result)
    if conflicts:
        raise InternalContractError(f"bullseye insertion conflicts: {conflicts}")
    out = FlaggedComplex(result, flags)
    problems = out.validate()
    if problems:
        raise InternalContractError(f"bullseye insertion invalid: {problems}")
    return out


@dataclass(frozen=True)
class SpliceCandidate:
    """A leafward chain that could be a bullseye: host, k spheres, core."""

    host: str
    k: int
    blank: bool
    components: tuple[str, ...]  # outermost sphere first, torus last if any
    chambers: tuple[str, ...]  # chambers stripped along with them (incl. core)
    core: str
    y_flag: str | None
    y_annotation: TopAnnotation | None


def bullseye_splices(flagged: FlaggedComplex) -> list[SpliceCandidate]:
    """Every chain of a complex that is shaped like a spliced bullseye.

    Walks outward from each leaf chamber through two-boundary chambers,
    yielding one candidate per possible host cut point.  Shape only; the
    caller decides by re-inserting and comparing.
    """
    cx = flagged.complex
    out: list[SpliceCandidate] = []
    for leaf in sorted(cx.chambers):
        bdry = cx.boundary_components(leaf)
        if len(bdry) != 1:
            continue
        comp = bdry[0]
        genus = cx.genus_of(comp)
        if genus == 0:
            blank = True
            if flagged.flags.get(leaf) != OCCUPIED:
                continue
            if cx.chambers[leaf].annotation.is_ball != YES:
                continue
            y_flag = None
            y_ann = None
            spheres = 1
        elif genus == 1:
            blank = False
            y_flag = flagged.flags.get(leaf)
            y_ann = cx.chambers[leaf].annotation
            spheres = 0
        else:
            continue
        comps = [comp]
        chambers = [leaf]
        cur = cx.other_side(comp, leaf)
        while True:
            # torus candidates allow k = 0; blank ones need a sphere
            if not blank or spheres >= 1:
                out.append(
                    SpliceCandidate(
                        host=cur,
                        k=spheres,
                        blank=blank,
                        components=tuple(reversed(comps)),
                        chambers=tuple(reversed(chambers)),
                        core=leaf,
                        y_flag=y_flag,
                        y_annotation=y_ann,
                    )
                )
            nxt = [c for c in cx.boundary_components(cur) if c != comps[-1]]
            if len(nxt) != 1 or cx.genus_of(nxt[0]) != 0:
                break
            comp = nxt[0]
            spheres += 1
            comps.append(comp)
            chambers.append(cur)
            cur = cx.other_side(comp, cur)
    return out


# ---------------------------------------------------------------------------
# Carrying disks through a decomposition


def _decompose_kept(
    flagged: FlaggedComplex, disks, policy: SuccessionPolicy | None = None
) -> tuple[FlaggedComplex, RawComplex]:
    """decompose() with the surgery provenance kept for re-expression."""
    raw = surger(flagged.complex, list(disks))
    after = default_succession(flagged, raw, policy)
    return after, raw


def _nearest_ancestor(disk_id: str, declared: dict[str, DiskAttachment], keep) -> str | None:
    cur = declared[disk_id].nesting_parent
    while cur is not None:
        if keep(cur):
            return cur
        cur = declared[cur].nesting_parent if cur in declared else None
    return None


def restrict_nesting(
    subset: list[DiskAttachment], declared: dict[str, DiskAttachment]
) -> list[DiskAttachment]:
    """Re-root nesting parents inside a subset of a declared disk family."""
    ids = {d.id for d in subset}
    return [
        replace(d, nesting_parent=_nearest_ancestor(d.id, declared, lambda p: p in ids))
        for d in subset
    ]


def carry_disks(
    raw: RawComplex,
    after: FlaggedComplex,
    disks: list[DiskAttachment],
    declared: dict[str, DiskAttachment] | None = None,
) -> tuple[list[DiskAttachment], list[str]]:
    """Re-express disks through a decomposition step.

    Each curve persists on the component holding its end pieces; the disk
    hangs in the region of its old chamber next to the curve.  A disk whose
    component was pruned away with a goneball has become trivial and is
    dropped; its id is reported.  Nesting parents are re-rooted to the
    nearest surviving ancestor on the same new component.
    """
    declared = declared if declared is not None else {d.id: d for d in disks}
    carried: dict[str, DiskAttachment] = {}
    home_of: dict[str, str] = {}
    vanished: list[str] = []
    for d in disks:
        cur = raw.before.components[d.component].cut.curves[d.curve]
        home = raw.piece_home[(d.component, cur.end_a[0])]
        if home not in after.complex.components:
            vanished.append(d.id)
            continue
        chamber = raw.chamber_of_curve(d.chamber, d.component, d.curve)
        if chamber not in after.complex.chambers:
            raise InternalContractError("surviving component beside a pruned chamber")
        enc = enclosed_side(raw.before, d)
        hint = None
        if enc is not None:
            hint = cur.end_a[0] if cur.end_a[0] in enc else cur.end_b[0]
        carried[d.id] = replace(
            d, component=home, chamber=chamber, enclosed_hint=hint, nesting_parent=None
        )
        home_of[d.id] = home

    def keeps(child_id: str):
        def ok(pid: str) -> bool:
            return pid in carried and home_of[pid] == home_of[child_id]

        return ok

    out = []
    for d in disks:
        if d.id not in carried:
            continue
        parent = _nearest_ancestor(d.id, declared, keeps(d.id))
        out.append(replace(carried[d.id], nesting_parent=parent))
    return out, vanished


# ---------------------------------------------------------------------------
# Bullseye propagation


@dataclass(frozen=True)
class Persists:
    k: int
    blank: bool


@dataclass(frozen=True)
class HostReducible:
    chamber: str


def _strip_splice(flagged: FlaggedComplex, cand: SpliceCandidate) -> FlaggedComplex:
    """Remove a splice; the host annotation is re-derived from scratch."""
    cx = flagged.complex
    components = {c: s for c, s in cx.components.items() if c not in cand.components}
    incidence = {c: p for c, p in cx.incidence.items() if c not in cand.components}
    chambers = {c: ch for c, ch in cx.chambers.items() if c not in cand.chambers}
    old = cx.chambers[cand.host].annotation
    chambers[cand.host] = Chamber(
        id=cand.host, annotation=TopAnnotation(is_reducible=old.is_reducible)
    )
    flags = {c: f for c, f in flagged.flags.items() if c not in cand.chambers}
    result = ChamberComplex(
        ambient_mode=cx.ambient_mode,
        components=components,
        chambers=chambers,
        incidence=incidence,
    )
    result, conflicts = annotation_closure(result)
    if conflicts:
        raise InternalContractError(f"splice strip conflicts: {conflicts}")
    return FlaggedComplex(result, flags)


def _matches_with_splice(
    target: FlaggedComplex, cand: SpliceCandidate, whole: FlaggedComplex
) -> bool:
    """Does inserting the candidate bullseye into target reproduce whole?"""
    key = canonical_form(whole.complex, whole.flags)
    for host in sorted(target.complex.chambers):
        try:
            rebuilt = insert_bullseye(
                target,
                host,
                cand.k,
                blank=cand.blank,
                y_flag=cand.y_flag or EMPTY,
                y_annotation=cand.y_annotation,
            )
        except ValueError:
            continue
        if canonical_form(rebuilt.complex, rebuilt.flags) == key:
            return True
    return False


def _find_splice(flagged: FlaggedComplex, bullseye: Bullseye) -> SpliceCandidate:
    matches = [
        c
        for c in bullseye_splices(flagged)
        if c.host == bullseye.host_chamber and c.k == bullseye.k and c.blank == bullseye.blank
    ]
    if not matches:
        raise ValueError(
            f"no bullseye with k={bullseye.k} at chamber {bullseye.host_chamber!r}"
        )
    return min(matches, key=lambda c: c.core)


def propagate_bullseye(
    base: FlaggedComplex,
    disks: list[DiskAttachment],
    bullseye: Bullseye,
    policy: SuccessionPolicy | None = None,
) -> Persists | HostReducible:
    """Decompose a complex containing a bullseye and track the bullseye.

    The disks incident to the bullseye's components may reshape it, but the
    result is the bullseye-free decomposition with a bullseye of at least k
    spheres spliced back in, unless the host chamber turned reducible.
    """
    splice = _find_splice(base, bullseye)
    splice_comps = set(splice.components)
    d_prime = [d for d in disks if d.component not in splice_comps]
    for d in d_prime:
        if d.chamber in splice.chambers:
            raise SurgeryError(f"disk {d.id!r} sits inside the bullseye it avoids")

    declared = {d.id: d for d in disks}
    after = _decompose_full(base, disks, policy)
    stripped = _strip_splice(base, splice)
    target = _decompose_full(stripped, restrict_nesting(d_prime, declared), policy)

    best: Persists | None = None
    for cand in bullseye_splices(after):
        if _matches_with_splice(target, cand, after):
            if best is None or cand.k > best.k:
                best = Persists(k=cand.k, blank=cand.blank)
    if best is not None:
        if best.k < bullseye.k:
            raise InternalContractError(
                f"bullseye lost spheres: {best.k} < {bullseye.k}"
            )
        return best

    for ch in sorted(after.complex.chambers):
        if after.complex.chambers[ch].annotation.is_reducible == YES:
            return HostReducible(chamber=ch)
    if canonical_form(after.complex, after.flags) == canonical_form(
        target.complex, target.flags
    ):
        # every sphere of the bullseye was consumed; the host must have
        # swallowed an essential sphere
        return HostReducible(chamber=splice.host)
    raise InternalContractError("bullseye neither persisted nor certified")


def _decompose_full(
    flagged: FlaggedComplex, disks, policy: SuccessionPolicy | None = None
) -> FlaggedComplex:
    after, _ = _decompose_kept(flagged, disks, policy)
    return after


# ---------------------------------------------------------------------------
# Adding a disk to a decomposition


SAME = "same"
REDUCES = "reduces"
BULLSEYE_RIGHT = "bullseye-right"
BLANK_BULLSEYE_LEFT = "blank-bullseye-left"


@dataclass(frozen=True)
class AddedDiskOutcome:
    kind: str
    k: int | None = None
    first: FlaggedComplex | None = field(default=None, compare=False)
    second: FlaggedComplex | None = field(default=None, compare=False)


def _two_orders(
    base: FlaggedComplex, disks: list[DiskAttachment], extra: DiskAttachment
) -> tuple[FlaggedComplex, FlaggedComplex, DiskAttachment | None]:
    """(extra-then-disks, disks-then-extra, extra carried past the disks)."""
    declared = {d.id: d for d in disks}
    declared[extra.id] = extra

    only_extra = restrict_nesting([extra], declared)
    c_e, raw_e = _decompose_kept(base, only_extra)
    d_carried, _ = carry_disks(raw_e, c_e, restrict_nesting(list(disks), declared))
    c_ed = _decompose_full(c_e, d_carried)

    c_d, raw_d = _decompose_kept(base, restrict_nesting(list(disks), declared))
    e_carried, e_gone = carry_disks(raw_d, c_d, only_extra, declared)
    if e_gone:
        return c_ed, c_d, None
    c_de = _decompose_full(c_d, e_carried)
    return c_ed, c_de, e_carried[0]


def classify_added_disk(
    base: FlaggedComplex, disks: list[DiskAttachment], extra: DiskAttachment
) -> AddedDiskOutcome:
    """Relate decomposing with the extra disk first against adding it last.

    Outcomes: the two orders agree; the disks-then-extra side carries an
    extra torus bullseye whose meridian is the extra disk; the extra-first
    side carries an extra blank bullseye; or a reducing sphere appeared.
    The relation is verified by direct reconstruction, never assumed.
    """
    c_ed, c_de, _ = _two_orders(base, disks, extra)
    if canonical_form(c_ed.complex, c_ed.flags) == canonical_form(c_de.complex, c_de.flags):
        return AddedDiskOutcome(SAME, first=c_ed, second=c_de)
    right = [
        c
        for c in bullseye_splices(c_de)
        if not c.blank and _matches_with_splice(c_ed, c, c_de)
    ]
    if right:
        k = max(c.k for c in right)
        return AddedDiskOutcome(BULLSEYE_RIGHT, k=k, first=c_ed, second=c_de)
    left = [
        c
        for c in bullseye_splices(c_ed)
        if c.blank and _matches_with_splice(c_de, c, c_ed)
    ]
    if left:
        k = max(c.k for c in left)
        return AddedDiskOutcome(BLANK_BULLSEYE_LEFT, k=k, first=c_ed, second=c_de)
    return AddedDiskOutcome(REDUCES, first=c_ed, second=c_de)


# ---------------------------------------------------------------------------
# Decomposition sequences and the ledger


@dataclass
class DecompositionSequence:
    """Stages of repeated decomposition, with the disk set used at each."""

    id: str
    stages: tuple[FlaggedComplex, ...]
    disk_sets: tuple[tuple[DiskAttachment, ...], ...]
    extra_certificates: dict[int, tuple[Certificate, ...]] = field(default_factory=dict)

    def validate(self) -> list[str]:
        problems = []
        if not self.stages:
            problems.append("no-stages")
            return problems
        if len(self.disk_sets) != len(self.stages) - 1:
            problems.append("stage-count")
        for i, st in enumerate(self.stages):
            for p in st.validate():
                problems.append(f"stage-{i}:{p}")
        for i in self.extra_certificates:
            if not 0 <= i < len(self.stages):
                problems.append(f"certificate-stage:{i}")
        return problems

    def stage_certificates(
        self, index: int, solid_torus_certifies: bool = False
    ) -> list[Certificate]:
        certs = certificates(self.stages[index], solid_torus_certifies=solid_torus_certifies)
        certs.extend(self.extra_certificates.get(index, ()))
        return certs


def build_sequence(
    seq_id: str,
    start: FlaggedComplex,
    disk_sets: list[list[DiskAttachment]],
    policy: SuccessionPolicy | None = None,
) -> DecompositionSequence:
    stages = [start]
    for dset in disk_sets:
        stages.append(_decompose_full(stages[-1], dset, policy))
    return DecompositionSequence(
        id=seq_id,
        stages=tuple(stages),
        disk_sets=tuple(tuple(ds) for ds in disk_sets),
    )


@dataclass(frozen=True)
class InteractionWitness:
    seq_a: str
    stage_a: int
    seq_b: str
    stage_b: int
    shared_chamber: str
    cert_a: Certificate
    cert_b: Certificate


class EquivalenceLedger:
    """Union-find over sequences, every merge backed by a recorded witness.

    Chamber sharing is by id; containment beyond boundary identity is
    declared data, not derived.
    """

    def __init__(self, solid_torus_certifies: bool = False) -> None:
        self.sequences: dict[str, DecompositionSequence] = {}
        self.solid_torus_certifies = solid_torus_certifies
        self._parent: dict[str, str] = {}
        self.edges: list[tuple[str, str, InteractionWitness | None]] = []

    def register(self, seq: DecompositionSequence) -> None:
        problems = seq.validate()
        if problems:
            raise ValueError(f"sequence {seq.id!r} invalid: {problems}")
        if seq.id in self.sequences:
            if self.sequences[seq.id] is not seq:
                raise ValueError(f"sequence id {seq.id!r} already registered")
            return
        self.sequences[seq.id] = seq
        self._parent[seq.id] = seq.id

    def find(self, seq_id: str) -> str:
        if seq_id not in self._parent:
            raise ValueError(f"unregistered sequence {seq_id!r}")
        root = seq_id
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[seq_id] != root:
            self._parent[seq_id], seq_id = root, self._parent[seq_id]
        return root

    def merge(self, a: str, b: str, witness: InteractionWitness | None) -> None:
        if witness is not None:
            self._check_witness(witness)
        self.edges.append((a, b, witness))
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[max(ra, rb)] = min(ra, rb)

    def _check_witness(self, w: InteractionWitness) -> None:
        for sid, stage, cert in ((w.seq_a, w.stage_a, w.cert_a), (w.seq_b, w.stage_b, w.cert_b)):
            seq = self.sequences.get(sid)
            if seq is None:
                raise ValueError(f"unregistered sequence {sid!r}")
            if not 0 <= stage < len(seq.stages):
                raise ValueError(f"witness stage {stage} out of range for {sid!r}")
            if cert.chamber != w.shared_chamber:
                raise ValueError("witness certificate is not in the shared chamber")
            if cert not in seq.stage_certificates(stage, self.solid_torus_certifies):
                raise ValueError(f"stage {stage} of {sid!r} does not hold {cert}")

    def witness_chain(self, a: str, b: str) -> list[InteractionWitness] | None:
        """Witnesses along a shortest merge path, or None if unrelated."""
        if self.find(a) != self.find(b):
            return None
        adj: dict[str, list[tuple[str, InteractionWitness | None]]] = {}
        for x, y, w in self.edges:
            adj.setdefault(x, []).append((y, w))
            adj.setdefault(y, []).append((x, w))
        frontier = [(a, [])]
        seen = {a}
        while frontier:
            nxt = []
            for node, path in frontier:
                if node == b:
                    return path
                for other, w in adj.get(node, []):
                    if other not in seen:
                        seen.add(other)
                        nxt.append((other, path + [w] if w is not None else list(path)))
            frontier = nxt
        raise InternalContractError("merged sequences without a connecting edge")

    def export(self) -> list[dict]:
        """Witness list in merge order; deterministic given input order."""
        out = []
        for a, b, w in self.edges:
            entry: dict = {"seq_a": a, "seq_b": b}
            if w is not None:
                entry["witness"] = {
                    "stage_a": w.stage_a,
                    "stage_b": w.stage_b,
                    "shared_chamber": w.shared_chamber,
                    "cert_a": [w.cert_a.kind, w.cert_a.chamber, w.cert_a.witness],
                    "cert_b": [w.cert_b.kind, w.cert_b.chamber, w.cert_b.witness],
                }
            out.append(entry)
        return out


def _identical(a: DecompositionSequence, b: DecompositionSequence) -> bool:
    if len(a.stages) != len(b.stages):
        return False
    return all(
        canonical_form(x.complex, x.flags) == canonical_form(y.complex, y.flags)
        for x, y in zip(a.stages, b.stages)
    )


def find_interaction(
    a: DecompositionSequence,
    b: DecompositionSequence,
    solid_torus_certifies: bool = False,
) -> InteractionWitness | None:
    """First chamber (in stage order) housing a certificate for both."""
    for i in range(len(a.stages)):
        certs_a = a.stage_certificates(i, solid_torus_certifies)
        if not certs_a:
            continue
        for j in range(len(b.stages)):
            certs_b = b.stage_certificates(j, solid_torus_certifies)
            pairs = [
                (ca, cb)
                for ca in certs_a
                for cb in certs_b
                if ca.chamber == cb.chamber
            ]
            if pairs:
                ca, cb = min(pairs, key=lambda p: (p[0].chamber, p[0].kind, p[1].kind))
                return InteractionWitness(
                    seq_a=a.id,
                    stage_a=i,
                    seq_b=b.id,
                    stage_b=j,
                    shared_chamber=ca.chamber,
                    cert_a=ca,
                    cert_b=cb,
                )
    return None


def relate_sequences(
    a: DecompositionSequence, b: DecompositionSequence, ledger: EquivalenceLedger
) -> EquivalenceLedger:
    """Merge the sequences' classes if they interact; else leave the ledger."""
    ledger.register(a)
    ledger.register(b)
    if a.id != b.id and _identical(a, b):
        ledger.merge(a.id, b.id, None)
        return ledger
    witness = find_interaction(a, b, ledger.solid_torus_certifies)
    if witness is not None:
        ledger.merge(a.id, b.id, witness)
    return ledger


def are_equivalent(
    ledger: EquivalenceLedger, a: str, b: str
) -> tuple[bool, list[InteractionWitness] | None]:
    same = ledger.find(a) == ledger.find(b)
    return (True, ledger.witness_chain(a, b)) if same else (False, None)


# ---------------------------------------------------------------------------
# Delaying a disk through a guided sequence


STEPWISE_E = "stepwise-e"
BULLSEYE_LEFT = "bullseye-left"
BLANK_BULLSEYE_RIGHT = "blank-bullseye-right"
INTERACT = "interact"


@dataclass(frozen=True)
class DelayedOutcome:
    kind: str
    stage: int | None = None
    k: int | None = None
    witness: InteractionWitness | None = None


def _delayed_ladder(
    plain: DecompositionSequence,
    extra: DiskAttachment,
    ledger: EquivalenceLedger | None = None,
) -> DelayedOutcome:
    """Extend the commuting ladder square by square and classify the break."""
    e: DiskAttachment | None = extra
    for i, dset in enumerate(plain.disk_sets):
        if e is None:
            break
        out = classify_added_disk(plain.stages[i], list(dset), e)
        if out.kind == SAME:
            stage = plain.stages[i]
            declared = {d.id: d for d in dset}
            declared[e.id] = e
            c_d, raw_d = _decompose_kept(stage, restrict_nesting(list(dset), declared))
            carried, gone = carry_disks(raw_d, c_d, restrict_nesting([e], declared), declared)
            e = carried[0] if carried else None
            continue
        if out.kind == BULLSEYE_RIGHT:
            return DelayedOutcome(BULLSEYE_LEFT, stage=i, k=out.k)
        if out.kind == BLANK_BULLSEYE_LEFT:
            return DelayedOutcome(BLANK_BULLSEYE_RIGHT, stage=i, k=out.k)
        # both orders certify somewhere; record the interaction if possible
        primed = _primed_sequence(plain, extra, i)
        witness = None
        if ledger is not None and primed is not None:
            witness = find_interaction(plain, primed, ledger.solid_torus_certifies)
            if witness is not None:
                ledger.register(plain)
                ledger.register(primed)
                ledger.merge(plain.id, primed.id, witness)
        return DelayedOutcome(INTERACT, stage=i, witness=witness)
    return DelayedOutcome(STEPWISE_E)


def _primed_sequence(
    plain: DecompositionSequence, extra: DiskAttachment, upto: int
) -> DecompositionSequence | None:
    """Stages of the extra-first sequence while the ladder commutes."""
    stages = []
    e: DiskAttachment | None = extra
    for i in range(upto + 1):
        if e is None:
            return None
        stage = plain.stages[i]
        dset = list(plain.disk_sets[i]) if i < len(plain.disk_sets) else []
        declared = {d.id: d for d in dset}
        declared[e.id] = e
        stages.append(_decompose_full(stage, restrict_nesting([e], declared)))
        if i < upto:
            c_d, raw_d = _decompose_kept(stage, restrict_nesting(dset, declared))
            carried, _ = carry_disks(raw_d, c_d, restrict_nesting([e], declared), declared)
            e = carried[0] if carried else None
    return DecompositionSequence(
        id=f"{plain.id}+{extra.id}",
        stages=tuple(stages),
        disk_sets=tuple(tuple(ds) for ds in plain.disk_sets[:upto]),
    )


def classify_delayed_disk(
    start: FlaggedComplex,
    extra: DiskAttachment,
    sphere,
    ledger: EquivalenceLedger | None = None,
) -> DelayedOutcome:
    """Compare a guided sequence against surgering the extra disk first.

    The guiding sphere may be a prepared DecompositionSequence or a sweep
    specification consumed by the sweepout engine.
    """
    if isinstance(sphere, DecompositionSequence):
        plain = sphere
    else:
        from .sweepout import guided_run

        plain = guided_run(start, sphere).sequence
    return _delayed_ladder(plain, extra, ledger)
