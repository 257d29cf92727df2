"""Command line front end: scenario tools plus the randomized fuzz harness.

Subcommands operate on scenario files (see scenario.py for the format):

    validate   check a scenario file, list any problems
    decompose  apply the first disk set and print the resulting scenario
    sweep      run the guided sweep and report status and certificates
    graphic    check the balanced band of a two-parameter graphic
    classify   run one of the classifiers (add-disk, bullseye, vertex, saddle)
    ledger     build the named sequences and relate consecutive pairs
    fuzz       generate random scenarios and check properties against them

Exit codes: 0 success, 1 a check failed, 2 the input could not be used.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .certificates import (
    EquivalenceLedger,
    HostReducible,
    Persists,
    are_equivalent,
    build_sequence,
    classify_added_disk,
    insert_bullseye,
    propagate_bullseye,
    relate_sequences,
)
from .flags import FlaggedComplex, SuccessionPolicy, decompose, is_tiny
from .generate import random_scenario, rng_for
from .scenario import (
    Scenario,
    ScenarioError,
    parse_scenario,
    scenario_problems,
    serialize_scenario,
)
from .scene import ANNOTATED_MODE, SPHERE_MODE, validate_scenario
from .surgery import surger
from .sweepout import (
    BALANCED_LABELS,
    COMPLETE,
    EQUIVALENT,
    TERMINAL_TORUS_BOTH_OCCUPIED,
    TERMINAL_UNLINKED_TORI,
    balanced_band,
    balanced_levels,
    classify_saddle,
    classify_vertex,
    guided_run,
)

PROPERTIES = (
    "roundtrip",
    "euler",
    "tiny-pullback",
    "succession",
    "bullseye",
    "balance",
    "band",
    "vertex",
    "saddle",
    "add-disk",
    "ledger",
)


@dataclass(frozen=True)
class FuzzConfig:
    """Everything that determines a fuzz run; equal configs give equal runs."""

    seed: int = 0
    samples: int = 100
    properties: tuple = PROPERTIES
    max_components: int = 4
    max_genus: int = 3
    max_disks: int = 4
    max_sequence: int = 4
    mode: str | None = None
    policy: str = "default"


def generate_instance(config: FuzzConfig, index: int) -> Scenario:
    """Scenario number `index` of the run; depends only on (seed, index)."""
    return random_scenario(
        rng_for(config.seed, index),
        max_components=config.max_components,
        max_genus=config.max_genus,
        max_disks=config.max_disks,
        max_sequence=config.max_sequence,
        mode=config.mode,
        policy=config.policy,
    )


# ---------------------------------------------------------------------------
# Property checkers: each takes a scenario and returns None on pass or a
# short failure message.  Sections a scenario lacks make a check vacuous.


def check_roundtrip(sc: Scenario) -> str | None:
    text = serialize_scenario(sc)
    back = parse_scenario(text)
    if serialize_scenario(back) != text:
        return "serialization is not byte-stable"
    problems = scenario_problems(back)
    if problems:
        return f"reparsed scenario fails validation: {problems}"
    return None


def _chi(complex) -> int:
    return sum(2 - 2 * complex.genus_of(c) for c in complex.components)


def check_euler(sc: Scenario) -> str | None:
    for name in sorted(sc.disk_sets):
        disks = list(sc.disk_sets[name])
        raw = surger(sc.complex, disks)
        want = _chi(sc.complex) + 2 * len(disks)
        if _chi(raw.complex) != want:
            return f"disk set {name}: euler characteristic off after surgery"
        report = validate_scenario(raw.complex)
        if not report.ok:
            return f"disk set {name}: surgered complex invalid: {report.codes()}"
    return None


def check_tiny_pullback(sc: Scenario) -> str | None:
    if sc.flags is None:
        return None
    flagged = sc.flagged()
    if is_tiny(flagged) is not False:
        return None
    for name in sorted(sc.disk_sets):
        after = decompose(flagged, list(sc.disk_sets[name]), sc.policy)
        if is_tiny(after) is True:
            return f"disk set {name}: decomposing a non-tiny complex gave a tiny one"
    return None


def check_succession(sc: Scenario) -> str | None:
    if sc.flags is None:
        return None
    flagged = sc.flagged()
    policy = SuccessionPolicy(strategy="enumerate")
    for name in sorted(sc.disk_sets):
        # enumerate replays every consistent succession and checks membership
        decompose(flagged, list(sc.disk_sets[name]), policy)
    return None


def check_bullseye(sc: Scenario) -> str | None:
    if sc.bullseye is None or sc.flags is None:
        return None
    b = sc.bullseye
    spliced = insert_bullseye(sc.flagged(), b.host_chamber, b.k, blank=b.blank)
    disks = list(sc.disk_sets[min(sc.disk_sets)]) if sc.disk_sets else []
    out = propagate_bullseye(spliced, disks, b, sc.policy)
    if isinstance(out, Persists):
        if out.k < b.k:
            return f"bullseye lost spheres: {out.k} < {b.k}"
    elif not isinstance(out, HostReducible):
        return f"unexpected propagation outcome {out!r}"
    return None


def check_balance(sc: Scenario) -> str | None:
    if sc.profile is not None and not balanced_levels(sc.profile):
        return "profile has no balanced interval"
    if sc.sweep is None or sc.flags is None:
        return None
    flagged = sc.flagged()
    run = guided_run(flagged, sc.sweep, policy=sc.policy)
    if is_tiny(flagged) is False:
        if run.status != COMPLETE:
            return f"guided run ended {run.status}: {run.problem}"
        if not run.certificates:
            return "guided run completed without a certificate"
    return None


def check_band(sc: Scenario) -> str | None:
    if sc.graphic is None:
        return None
    report = balanced_band(sc.graphic)
    if not report.single_interval:
        return "a column's balanced cells are not a single interval"
    if not report.connected:
        return "balanced band is disconnected"
    if sc.graphic.wrap and report.circle is None:
        return "wrapped band has no essential circle"
    if not sc.graphic.wrap and report.path is None:
        return "band has no side-to-side path"
    return None


def check_vertex(sc: Scenario) -> str | None:
    if sc.vertex is None:
        return None
    rep = classify_vertex(sc.vertex)
    both = all(sc.vertex.labels[q] in BALANCED_LABELS for q in ("P", "Q"))
    if both and rep.balanced_pair is None:
        return "balanced opposite quadrants not reported"
    if both and rep.equivalent is not True:
        return "balanced opposite quadrants not recognized as equivalent"
    if not both and rep.equivalent is not None:
        return "equivalence claimed without a balanced pair"
    return None


def check_saddle(sc: Scenario) -> str | None:
    if sc.saddle is None or sc.flags is None:
        return None
    out = classify_saddle(sc.flagged(), sc.saddle)
    known = (EQUIVALENT, TERMINAL_TORUS_BOTH_OCCUPIED, TERMINAL_UNLINKED_TORI)
    if out.kind not in known:
        return f"unexpected saddle outcome {out.kind!r}"
    return None


def check_add_disk(sc: Scenario) -> str | None:
    if sc.extra_disk is None or not sc.disk_sets or sc.flags is None:
        return None
    disks = list(sc.disk_sets[min(sc.disk_sets)])
    out = classify_added_disk(sc.flagged(), disks, sc.extra_disk)
    if out.kind in ("bullseye-right", "blank-bullseye-left") and (out.k or 0) < 1:
        return f"{out.kind} outcome carries no spheres"
    return None


def check_ledger(sc: Scenario) -> str | None:
    if not sc.sequences or sc.flags is None:
        return None
    ledger = EquivalenceLedger()
    seqs = []
    for spec in sc.sequences:
        start = FlaggedComplex(sc.complex, dict(spec.flags))
        sets = [list(sc.disk_sets[name]) for name in spec.disk_sets]
        seq = build_sequence(spec.id, start, sets, sc.policy)
        ledger.register(seq)
        seqs.append(seq)
    for a, b in zip(seqs, seqs[1:]):
        relate_sequences(a, b, ledger)
    if ledger.export() != ledger.export():
        return "ledger export is unstable"
    for a, b in zip(seqs, seqs[1:]):
        same, chain = are_equivalent(ledger, a.id, b.id)
        if same and a.id != b.id and chain is None:
            return f"{a.id} and {b.id} merged without a witness chain"
    return None


CHECKS = {
    "roundtrip": check_roundtrip,
    "euler": check_euler,
    "tiny-pullback": check_tiny_pullback,
    "succession": check_succession,
    "bullseye": check_bullseye,
    "balance": check_balance,
    "band": check_band,
    "vertex": check_vertex,
    "saddle": check_saddle,
    "add-disk": check_add_disk,
    "ledger": check_ledger,
}


def check_property(name: str, sc: Scenario) -> str | None:
    try:
        fn = CHECKS[name]
    except KeyError:
        raise ValueError(f"unknown property {name!r}") from None
    return fn(sc)


# ---------------------------------------------------------------------------
# Fuzz harness


def _run_sample(config: FuzzConfig, index: int):
    try:
        sc = generate_instance(config, index)
    except Exception as exc:  # noqa: BLE001 - generator bugs become verdicts
        msg = f"generation failed: {type(exc).__name__}: {exc}"
        return index, None, {name: msg for name in config.properties}
    results = {}
    for name in config.properties:
        try:
            results[name] = check_property(name, sc)
        except Exception as exc:  # noqa: BLE001 - checker errors become verdicts
            results[name] = f"{type(exc).__name__}: {exc}"
    return index, sc, results


def _worker_count(samples: int) -> int:
    env = os.environ.get("CHAMBER_CALCULUS_THREADS")
    workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(workers, samples or 1))


def run_fuzz(config: FuzzConfig) -> dict:
    """Run the campaign; the report depends only on the config (plus timing)."""
    t0 = time.perf_counter()
    passes = {name: 0 for name in config.properties}
    fails = {name: 0 for name in config.properties}
    counterexamples: dict[str, dict] = {}
    with ThreadPoolExecutor(max_workers=_worker_count(config.samples)) as pool:
        # map keeps sample order, so first-counterexample choice is stable
        for index, sc, results in pool.map(
            lambda i: _run_sample(config, i), range(config.samples)
        ):
            for name, msg in results.items():
                if msg is None:
                    passes[name] += 1
                    continue
                fails[name] += 1
                if name not in counterexamples:
                    counterexamples[name] = {
                        "sample": index,
                        "message": msg,
                        "scenario": None if sc is None else serialize_scenario(sc),
                    }
    return {
        "seed": config.seed,
        "samples": config.samples,
        "mode": config.mode or "any",
        "policy": config.policy,
        "properties": {
            name: {"pass": passes[name], "fail": fails[name]}
            for name in config.properties
        },
        "counterexamples": counterexamples,
        "elapsed_seconds": round(time.perf_counter() - t0, 3),
    }


def replay(sc: Scenario, properties) -> dict:
    """Re-check a single scenario, e.g. a saved counterexample."""
    results = {}
    for name in properties:
        try:
            results[name] = check_property(name, sc)
        except Exception as exc:  # noqa: BLE001
            results[name] = f"{type(exc).__name__}: {exc}"
    return results


# ---------------------------------------------------------------------------
# Subcommands


def _load(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_validate(args) -> int:
    sc = _load(args.file)
    problems = scenario_problems(sc)
    if problems:
        for p in problems:
            print(p)
        return 1
    print("ok")
    return 0


def _cmd_decompose(args) -> int:
    sc = _load(args.file)
    if sc.flags is None:
        print("scenario has no flags section", file=sys.stderr)
        return 1
    if not sc.disk_sets:
        print("scenario has no disk sets", file=sys.stderr)
        return 1
    name = min(sc.disk_sets)
    policy = SuccessionPolicy(strategy=args.policy) if args.policy else sc.policy
    after = decompose(sc.flagged(), list(sc.disk_sets[name]), policy)
    out = Scenario(complex=after.complex, flags=dict(after.flags), policy=policy)
    _emit(serialize_scenario(out), args.out)
    print(
        f"applied {name}: {len(sc.complex.chambers)} -> "
        f"{len(after.complex.chambers)} chambers",
        file=sys.stderr,
    )
    return 0


def _cmd_sweep(args) -> int:
    sc = _load(args.file)
    if sc.sweep is None or sc.flags is None:
        print("scenario has no sweep or no flags section", file=sys.stderr)
        return 1
    run = guided_run(sc.flagged(), sc.sweep, policy=sc.policy)
    print(f"status: {run.status}")
    print(f"label: {run.label}")
    print(f"stages: {len(run.sequence.stages)}")
    for cert in run.certificates:
        where = f" ({cert.witness})" if cert.witness else ""
        print(f"certificate: {cert.kind} at {cert.chamber}{where}")
    if run.problem:
        print(f"problem: {run.problem}")
    return 0 if run.status == COMPLETE else 1


def _cmd_graphic(args) -> int:
    sc = _load(args.file)
    if sc.graphic is None:
        print("scenario has no graphic section", file=sys.stderr)
        return 1
    report = balanced_band(sc.graphic)
    print(f"cells: {len(report.cells)}")
    print(f"single interval per column: {report.single_interval}")
    print(f"connected: {report.connected}")
    if sc.graphic.wrap:
        print(f"circle: {report.circle is not None}")
        ok = report.single_interval and report.connected and report.circle
    else:
        print(f"path: {report.path is not None}")
        ok = report.single_interval and report.connected and report.path
    return 0 if ok else 1


def _cmd_classify(args) -> int:
    sc = _load(args.file)
    if args.what == "add-disk":
        if sc.extra_disk is None or not sc.disk_sets or sc.flags is None:
            print("scenario lacks extra_disk, disk sets, or flags", file=sys.stderr)
            return 1
        disks = list(sc.disk_sets[min(sc.disk_sets)])
        out = classify_added_disk(sc.flagged(), disks, sc.extra_disk)
        print(f"outcome: {out.kind}")
        if out.k is not None:
            print(f"spheres: {out.k}")
        return 0
    if args.what == "bullseye":
        if sc.bullseye is None or sc.flags is None:
            print("scenario lacks a bullseye or flags", file=sys.stderr)
            return 1
        b = sc.bullseye
        spliced = insert_bullseye(sc.flagged(), b.host_chamber, b.k, blank=b.blank)
        disks = list(sc.disk_sets[min(sc.disk_sets)]) if sc.disk_sets else []
        out = propagate_bullseye(spliced, disks, b, sc.policy)
        if isinstance(out, Persists):
            print(f"outcome: persists with k={out.k} blank={out.blank}")
        else:
            print(f"outcome: host reducible at {out.chamber}")
        return 0
    if args.what == "vertex":
        if sc.vertex is None:
            print("scenario has no vertex section", file=sys.stderr)
            return 1
        rep = classify_vertex(sc.vertex)
        print(f"shape: {rep.shape}")
        print(f"balanced pair: {rep.balanced_pair}")
        print(f"equivalent: {rep.equivalent}")
        print(f"reason: {rep.reason}")
        return 0
    if sc.saddle is None or sc.flags is None:
        print("scenario lacks a saddle crossing or flags", file=sys.stderr)
        return 1
    out = classify_saddle(sc.flagged(), sc.saddle)
    print(f"outcome: {out.kind}")
    if out.spheres is not None:
        print(f"spheres: {out.spheres}")
    if out.detail:
        print(f"detail: {out.detail}")
    return 0


def _cmd_ledger(args) -> int:
    sc = _load(args.file)
    if not sc.sequences:
        print("scenario has no sequences section", file=sys.stderr)
        return 1
    ledger = EquivalenceLedger()
    seqs = []
    for spec in sc.sequences:
        start = FlaggedComplex(sc.complex, dict(spec.flags))
        sets = [list(sc.disk_sets[name]) for name in spec.disk_sets]
        seq = build_sequence(spec.id, start, sets, sc.policy)
        ledger.register(seq)
        seqs.append(seq)
    for a, b in zip(seqs, seqs[1:]):
        relate_sequences(a, b, ledger)
    classes: dict[str, list[str]] = {}
    for seq in seqs:
        classes.setdefault(ledger.find(seq.id), []).append(seq.id)
    payload = {
        "sequences": [seq.id for seq in seqs],
        "witnesses": ledger.export(),
        "classes": sorted(sorted(v) for v in classes.values()),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _parse_properties(raw) -> tuple:
    if not raw:
        return PROPERTIES
    names: list[str] = []
    for chunk in raw:
        for name in chunk.split(","):
            name = name.strip()
            if not name:
                continue
            if name not in CHECKS:
                raise ValueError(f"unknown property {name!r}")
            if name not in names:
                names.append(name)
    return tuple(names) if names else PROPERTIES


def _cmd_fuzz(args) -> int:
    try:
        properties = _parse_properties(args.property)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    mode = {None: None, "sphere": SPHERE_MODE, "annotated": ANNOTATED_MODE}[args.mode]
    if args.scenario:
        results = replay(_load(args.scenario), properties)
        failed = False
        for name in properties:
            msg = results[name]
            print(f"{name}: {'pass' if msg is None else f'FAIL: {msg}'}")
            failed = failed or msg is not None
        return 1 if failed else 0
    config = FuzzConfig(
        seed=args.seed,
        samples=args.samples,
        properties=properties,
        mode=mode,
        policy=args.policy,
    )
    report = run_fuzz(config)
    _emit(json.dumps(report, indent=2, sort_keys=True), args.out)
    bad = sum(v["fail"] for v in report["properties"].values())
    return 1 if bad else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chamber-calculus",
        description="Chamber complex decomposition tools and fuzz harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("decompose", help="apply the first disk set")
    p.add_argument("file")
    p.add_argument("--policy", choices=("default", "enumerate"))
    p.add_argument("--out", help="write the resulting scenario here")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("sweep", help="run the guided sweep")
    p.add_argument("file")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("graphic", help="check the balanced band")
    p.add_argument("file")
    p.set_defaults(func=_cmd_graphic)

    p = sub.add_parser("classify", help="run a classifier")
    p.add_argument("what", choices=("add-disk", "bullseye", "vertex", "saddle"))
    p.add_argument("file")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("ledger", help="relate the scenario's sequences")
    p.add_argument("file")
    p.set_defaults(func=_cmd_ledger)

    p = sub.add_parser("fuzz", help="random property checking")
    p.add_argument("scenario", nargs="?", help="replay one scenario file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument(
        "--property",
        action="append",
        help="property name, repeatable or comma separated (default: all)",
    )
    p.add_argument("--mode", choices=("sphere", "annotated"))
    p.add_argument("--policy", choices=("default", "enumerate"), default="default")
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=_cmd_fuzz)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
