"""Isomorphism of chamber complexes via canonical rooted tree encodings.

Two complexes are the same decomposition when a bijection of chambers and
components preserves the incidence tree, component genus, ambient mode,
annotations (up to closure), and any flags or extra labels supplied.  The
canonical form roots the incidence tree at its center (one or two vertices)
and encodes recursively with sorted child lists, so equal forms mean
isomorphic complexes.
"""

from __future__ import annotations

from .scene import ChamberComplex, annotation_closure


def _adjacency(complex: ChamberComplex) -> dict[str, list[tuple[int, str, str]]]:
    adj: dict[str, list[tuple[int, str, str]]] = {ch: [] for ch in complex.chambers}
    for comp, (a, b) in complex.incidence.items():
        g = complex.genus_of(comp)
        adj[a].append((g, b, comp))
        adj[b].append((g, a, comp))
    return adj


def _centers(adj: dict[str, list]) -> list[str]:
    """Tree centers by repeated leaf stripping; one or two survive."""
    degree = {v: len(n) for v, n in adj.items()}
    if len(degree) <= 2:
        return sorted(degree)
    layer = sorted(v for v, d in degree.items() if d <= 1)
    remaining = len(degree)
    neighbors = {v: [w for _, w, _ in adj[v]] for v in adj}
    while remaining > 2:
        nxt = []
        for v in layer:
            remaining -= 1
            for w in neighbors[v]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = sorted(nxt)
    return layer


def canonical_form(
    complex: ChamberComplex,
    flags: dict[str, str] | None = None,
    extra_labels: dict[str, object] | None = None,
) -> tuple:
    normalized, conflicts = annotation_closure(complex)
    if conflicts:
        raise ValueError(f"annotation conflicts: {conflicts}")
    adj = _adjacency(normalized)
    flags = flags or {}
    extra_labels = extra_labels or {}

    def opt(value: object) -> tuple:
        # missing labels must sort against present ones of any type
        return ("", "") if value is None else ("+", repr(value))

    def label(ch: str) -> tuple:
        return (
            normalized.chambers[ch].annotation.as_tuple(),
            opt(flags.get(ch)),
            opt(extra_labels.get(ch)),
        )

    def encode(ch: str, parent: str | None) -> tuple:
        kids = sorted(
            (g, encode(other, ch)) for g, other, _ in adj[ch] if other != parent
        )
        return (label(ch), tuple(kids))

    forms = [encode(c, None) for c in _centers(adj)]
    return (normalized.ambient_mode, min(forms))


def isomorphic(
    a: ChamberComplex,
    b: ChamberComplex,
    flags_a: dict[str, str] | None = None,
    flags_b: dict[str, str] | None = None,
    labels_a: dict[str, object] | None = None,
    labels_b: dict[str, object] | None = None,
) -> bool:
    return canonical_form(a, flags_a, labels_a) == canonical_form(b, flags_b, labels_b)
