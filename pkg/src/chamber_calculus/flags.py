"""Flags, succession rules, tininess, and the decompose pipeline.

Every chamber carries a flag: Occupied (non-trivial content) or Empty.  An
Empty chamber must be a disky handlebody.  When a complex is decomposed
along a disk set, the new flags must relate to the old ones through six
consistency rules; `check_succession` audits them, `default_succession`
constructs a canonical consistent assignment, and `enumerate_successions`
lists every consistent one.

Unknown annotations never get guessed: rules that cannot be decided are
reported in a separate needs_annotation channel, and `is_tiny` returns an
explicit unknown.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .scene import (
    EMPTY,
    NO,
    OCCUPIED,
    UNKNOWN,
    YES,
    ChamberComplex,
)
from .surgery import (
    InternalContractError,
    RawComplex,
    absorb_layer,
    goneball_candidates,
    is_disky,
    prune,
    surger,
)


class SuccessionContractError(ValueError):
    pass


@dataclass(frozen=True)
class FlaggedComplex:
    complex: ChamberComplex
    flags: dict[str, str]

    def flag(self, chamber_id: str) -> str:
        return self.flags[chamber_id]

    def validate(self) -> list[str]:
        problems = []
        if set(self.flags) != set(self.complex.chambers):
            problems.append("flag-coverage")
        for ch, f in sorted(self.flags.items()):
            if f not in (OCCUPIED, EMPTY):
                problems.append(f"bad-flag:{ch}")
                continue
            if ch not in self.complex.chambers:
                continue
            ann = self.complex.chambers[ch].annotation
            # empty chambers are handlebodies, never balls
            if f == EMPTY and (ann.is_handlebody == NO or ann.is_ball == YES):
                problems.append(f"empty-invariant:{ch}")
        return problems


@dataclass(frozen=True)
class SuccessionPolicy:
    strategy: str = "default"  # default | enumerate | explicit
    assignment: tuple[dict[str, str], frozenset[str]] | None = None
    stabilized_hint: dict[str, bool] = field(default_factory=dict)


@dataclass(frozen=True)
class Violation:
    rule: int
    where: str
    message: str


@dataclass(frozen=True)
class ConsistencyReport:
    violations: tuple[Violation, ...]
    needs_annotation: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def fully_resolved(self) -> bool:
        return not self.violations and not self.needs_annotation


# ---------------------------------------------------------------------------
# Disky-state tristates


def _disky(raw: RawComplex, cx: ChamberComplex, ch: str) -> bool:
    bdry = cx.boundary_components(ch)
    if len(bdry) != 1:
        return False
    return is_disky(raw, bdry[0], ch)


def _disky_hb(raw: RawComplex, cx: ChamberComplex, ch: str):
    """True / False / UNKNOWN: chamber is a handlebody meeting F only in disks."""
    ann = cx.chambers[ch].annotation
    if ann.is_handlebody == NO or not _disky(raw, cx, ch):
        return False
    return True if ann.is_handlebody == YES else UNKNOWN


def _disky_ball(raw: RawComplex, cx: ChamberComplex, ch: str):
    ann = cx.chambers[ch].annotation
    if ann.is_ball == NO or not _disky(raw, cx, ch):
        return False
    return True if ann.is_ball == YES else UNKNOWN


def _conj(states):
    """Three-valued all(): False dominates, else UNKNOWN, else True."""
    out = True
    for s in states:
        if s is False:
            return False
        if s == UNKNOWN:
            out = UNKNOWN
    return out


# ---------------------------------------------------------------------------
# The six rules


def check_succession(
    before: FlaggedComplex, raw: RawComplex, after: FlaggedComplex
) -> ConsistencyReport:
    """Audit the six succession rules for a proposed flag assignment.

    `after` must be obtainable from `raw` by pruning goneballs; its pruned
    set is recovered by diffing chamber ids.
    """
    if set(before.flags) != set(raw.before.chambers):
        raise ValueError("before flags do not match the pre-surgery complex")
    pruned = frozenset(raw.complex.chambers) - frozenset(after.complex.chambers)
    if not frozenset(after.complex.chambers) <= frozenset(raw.complex.chambers):
        raise ValueError("after contains chambers the surgery never produced")
    # replay the cascade; chambers prunable only under an unproven ball
    # annotation are parked rather than replayed
    state = raw.complex
    remaining = set(pruned)
    unresolved_pruned: set[str] = set()
    while remaining:
        cands = goneball_candidates(raw, state)
        layer = remaining & cands.candidates
        if layer:
            state, _ = absorb_layer(state, layer)
            remaining -= layer
            continue
        maybe = remaining & cands.needs_annotation
        if not maybe:
            raise ValueError(
                f"pruned chambers are not goneball candidates: {sorted(remaining)}"
            )
        unresolved_pruned |= maybe
        remaining -= maybe

    cx = after.complex
    flags = after.flags
    violations: list[Violation] = []
    pending: list[Violation] = []

    def record(rule: int, where: str, message: str, unknown: bool) -> None:
        v = Violation(rule, where, message)
        (pending if unknown else violations).append(v)

    dh = {ch: _disky_hb(raw, cx, ch) for ch in cx.chambers}
    db = {ch: _disky_ball(raw, cx, ch) for ch in cx.chambers}
    for ch in sorted(cx.chambers):
        # rule 1: anything that is not a disky handlebody is occupied
        if flags[ch] == EMPTY and dh[ch] is not True:
            record(1, ch, "empty chamber is not a disky handlebody", dh[ch] == UNKNOWN)
        # rule 2: every ball chamber is occupied
        ball = cx.chambers[ch].annotation.is_ball
        if flags[ch] == EMPTY and ball != NO:
            record(2, ch, "empty chamber may be a ball", ball == UNKNOWN)

    for ch in sorted(unresolved_pruned):
        record(6, ch, "pruned chamber has unresolved ball status", True)

    remnants: dict[str, list[str]] = {old: [] for old in raw.before.chambers}
    for new_ch, old in raw.remnant_map.items():
        remnants[old].append(new_ch)
    for old in sorted(remnants):
        if before.flags[old] != OCCUPIED:
            continue
        rems = sorted(remnants[old])
        survivors = [r for r in rems if r not in pruned]
        occupied_survivors = [r for r in survivors if flags[r] == OCCUPIED]
        if not occupied_survivors:
            record(3, old, "occupied chamber keeps no occupied remnant", False)
        # goneballs count as disky balls (hence disky handlebodies)
        all_dh = _conj(True if r in pruned else dh[r] for r in rems)
        all_db = _conj(True if r in pruned else db[r] for r in rems)
        for r in occupied_survivors:
            if dh[r] is True and all_dh is not True:
                record(
                    4,
                    r,
                    "occupied disky-handlebody remnant beside a non-disky sibling",
                    all_dh == UNKNOWN,
                )
            elif dh[r] == UNKNOWN and all_dh is not True:
                record(4, r, "remnant handlebody status unresolved", True)
        for r in survivors:
            if db[r] is True and all_db is not True:
                record(
                    5,
                    r,
                    "surviving disky-ball remnant beside a non-ball sibling",
                    all_db == UNKNOWN,
                )
            elif db[r] == UNKNOWN and all_db is not True:
                record(5, r, "remnant ball status unresolved", True)
        if all_db is True:
            if len(survivors) != 1 or flags.get(survivors[0]) != OCCUPIED:
                record(6, old, "disky-ball family must keep exactly one occupied ball", False)
        elif all_db == UNKNOWN:
            record(6, old, "family ball status unresolved", True)
    return ConsistencyReport(tuple(violations), tuple(pending))


# ---------------------------------------------------------------------------
# Default policy


def _untouched(raw: RawComplex, old: str) -> bool:
    if raw.remnants_of(old) != [old]:
        return False
    if raw.absorbed.get(old):
        return False
    return all(d.chamber != old for d in raw.disks.values())


def _auto_stabilized(
    before: FlaggedComplex, raw: RawComplex, state: ChamberComplex, old: str, survivors
) -> bool:
    """Occupied chambers are forced stabilized when the annotations say so.

    A handlebody content, or a decomposition into disky handlebodies only,
    leaves no room for an unstabilized splitting.
    """
    if before.flags[old] != OCCUPIED:
        return False
    if raw.before.chambers[old].annotation.is_handlebody == YES:
        return True
    states = [_disky_hb(raw, state, r) for r in survivors]
    return _conj(states) is True


def default_succession(
    before: FlaggedComplex, raw: RawComplex, policy: SuccessionPolicy | None = None
) -> FlaggedComplex:
    """Canonical consistent succession.

    Unstabilized chambers push occupancy into non-disky remnants and prune
    disky ball remnants.  Stabilized occupied chambers concentrate occupancy
    in one remnant: a non-disky one if any exists, else the smallest
    non-ball disky handlebody, else a single surviving ball.

    Absorbing a goneball can cap a sibling's last extra boundary sphere and
    promote it to a disky ball in turn, so planning iterates until no new
    goneballs appear; each round re-reads disky states off the pruned state.
    """
    policy = policy or SuccessionPolicy()
    remnants: dict[str, list[str]] = {old: raw.remnants_of(old) for old in raw.before.chambers}

    wishes: set[str] = set()
    absorbed_into: set[str] = set()
    state = raw.complex
    while True:
        hb = {ch: _disky_hb(raw, state, ch) for ch in state.chambers}
        ball = {ch: _disky_ball(raw, state, ch) for ch in state.chambers}
        planned: dict[str, str] = {}
        fresh: set[str] = set()
        for old, rems in remnants.items():
            survivors = [r for r in rems if r in state.chambers]
            if not survivors:
                continue
            if _untouched(raw, old) and old not in absorbed_into:
                planned[old] = before.flags[old]
                continue
            auto = _auto_stabilized(before, raw, state, old, survivors)
            hint = policy.stabilized_hint.get(old)
            if hint is None:
                stabilized = auto
            elif hint and before.flags[old] == EMPTY:
                raise SuccessionContractError(f"empty chamber {old!r} cannot be stabilized")
            elif not hint and auto:
                raise SuccessionContractError(
                    f"chamber {old!r} is forced stabilized by its annotations"
                )
            else:
                stabilized = hint
            # pruned siblings count as disky balls, so survivors decide
            all_db = _conj(ball[r] for r in survivors)
            if all_db is True and before.flags[old] == OCCUPIED:
                # rule 6: the family keeps exactly one occupied ball
                keeper = min(survivors)
                fresh.update(r for r in survivors if r != keeper)
                planned[keeper] = OCCUPIED
                continue
            if stabilized and all(hb[r] is True for r in survivors):
                non_balls = sorted(r for r in survivors if ball[r] is not True)
                if non_balls:
                    # balls pruned, smallest non-ball keeps the content
                    fresh.update(r for r in survivors if ball[r] is True)
                    for r in non_balls:
                        planned[r] = OCCUPIED if r == non_balls[0] else EMPTY
                else:
                    fresh.update(survivors)
                continue
            # unstabilized, or stabilized with a non-disky remnant to hold the
            # content: prune disky balls, occupancy flows to non-disky remnants
            for r in survivors:
                if ball[r] is True:
                    fresh.add(r)
                else:
                    planned[r] = EMPTY if hb[r] is True else OCCUPIED
        fresh -= wishes
        if not fresh:
            break
        cands = goneball_candidates(raw, state).candidates
        if not fresh <= cands:
            raise InternalContractError("planned goneball is not a candidate")
        state, absorbed = absorb_layer(state, fresh)
        absorbed_into.update(absorber for _, absorber in absorbed.values())
        wishes |= fresh

    dec = prune(raw, frozenset(wishes))
    flags = {ch: planned[ch] for ch in dec.complex.chambers}
    after = FlaggedComplex(dec.complex, flags)
    report = check_succession(before, raw, after)
    if report.violations:
        raise InternalContractError(f"default succession violates rules: {report.violations}")
    return after


def enumerate_successions(
    before: FlaggedComplex, raw: RawComplex
) -> list[tuple[dict[str, str], frozenset[str]]]:
    """Every (flags, goneball set) passing check_succession with no unknowns.

    Goneball sets form a lattice explored from the empty set: pruning one
    candidate can promote new ones, so each reached state offers its own
    extensions.  Adjacent pairs are unreachable (the first prune deletes the
    shared sphere, unlisting the partner).
    """
    out = []
    seen: set[frozenset[str]] = set()
    stack: list[frozenset[str]] = [frozenset()]
    while stack:
        chosen = stack.pop()
        if chosen in seen:
            continue
        seen.add(chosen)
        dec = prune(raw, chosen)
        for ch in sorted(goneball_candidates(raw, dec.complex).candidates):
            ext = chosen | {ch}
            if ext not in seen:
                stack.append(ext)
        chambers = sorted(dec.complex.chambers)
        for assignment in itertools.product([OCCUPIED, EMPTY], repeat=len(chambers)):
            flags = dict(zip(chambers, assignment))
            after = FlaggedComplex(dec.complex, flags)
            report = check_succession(before, raw, after)
            if report.fully_resolved:
                out.append((flags, chosen))
    out.sort(key=lambda fg: (len(fg[1]), sorted(fg[1]), sorted(fg[0].items())))
    return out


# ---------------------------------------------------------------------------
# Tininess


def is_tiny(flagged: FlaggedComplex):
    """True, False, or UNKNOWN: some chamber sees only empty handlebodies.

    Vacuously tiny when the underlying surface is empty.  UNKNOWN only when
    the answer hinges on an unresolved handlebody annotation.
    """
    cx = flagged.complex
    if not cx.components:
        return True
    partial = False
    for c in sorted(cx.chambers):
        ok = True
        unknown_here = False
        for other in cx.chambers:
            if other == c:
                continue
            if flagged.flags[other] != EMPTY:
                ok = False
                break
            hb = cx.chambers[other].annotation.is_handlebody
            if hb == NO:
                ok = False
                break
            if hb == UNKNOWN:
                unknown_here = True
        if ok and not unknown_here:
            return True
        if ok and unknown_here:
            partial = True
    return UNKNOWN if partial else False


# ---------------------------------------------------------------------------
# Pipeline


def decompose(
    flagged: FlaggedComplex, disks, policy: SuccessionPolicy | None = None
) -> FlaggedComplex:
    """Surger, choose goneballs, prune, and flag, per the policy."""
    policy = policy or SuccessionPolicy()
    raw = surger(flagged.complex, list(disks))
    if policy.strategy == "explicit":
        if policy.assignment is None:
            raise ValueError("explicit policy without an assignment")
        flags, chosen = policy.assignment
        dec = prune(raw, chosen)
        after = FlaggedComplex(dec.complex, dict(flags))
        report = check_succession(flagged, raw, after)
        if report.violations:
            raise SuccessionContractError(f"explicit assignment fails: {report.violations}")
        return after
    after = default_succession(flagged, raw, policy)
    if policy.strategy == "enumerate":
        allowed = enumerate_successions(flagged, raw)
        pruned = frozenset(raw.complex.chambers) - frozenset(after.complex.chambers)
        if not any(f == after.flags and g == pruned for f, g in allowed):
            report = check_succession(flagged, raw, after)
            if report.fully_resolved:
                raise InternalContractError("default succession missing from enumeration")
        return after
    return after
