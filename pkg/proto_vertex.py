"""Prototype: enumerate 2-vertex 4-valent ribbon graphs on the sphere.

Half-edges (v, i), v in {0,1}, i in {0..3}; rotation at each vertex is the
cyclic order (0,1,2,3); strands pair opposite slots {0,2} and {1,3}.
Edges = perfect matching on the 8 half-edges.  Genus 0 <=> 4 faces.
"""

import itertools

HE = [(v, i) for v in (0, 1) for i in range(4)]


def matchings(elems):
    if not elems:
        yield []
        return
    first = elems[0]
    for j in range(1, len(elems)):
        rest = elems[1:j] + elems[j + 1 :]
        for m in matchings(rest):
            yield [(first, elems[j])] + m


def as_perm(matching):
    alpha = {}
    for a, b in matching:
        alpha[a] = b
        alpha[b] = a
    return alpha


def sigma(he):
    v, i = he
    return (v, (i + 1) % 4)


def connected(alpha):
    seen = {(0, 0)}
    stack = [(0, 0)]
    while stack:
        he = stack.pop()
        for nxt in (alpha[he], sigma(he)):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == 8


def count_cycles(step):
    seen = set()
    n = 0
    for he in HE:
        if he in seen:
            continue
        n += 1
        cur = he
        while cur not in seen:
            seen.add(cur)
            cur = step(cur)
    return n


def faces(alpha):
    return count_cycles(lambda he: sigma(alpha[he]))


def strands_connected(alpha):
    # the underlying immersed curve: at a vertex, a strand goes straight
    # through (slot i -> slot i+2)
    def step(he):
        v, i = he
        return alpha[(v, (i + 2) % 4)]

    return count_cycles(step)


def resolve(alpha, s0, s1):
    """Count circles after smoothing both vertices; s in {0,1} per vertex."""
    smooth = {}
    for v, s in ((0, s0), (1, s1)):
        if s == 0:
            pairs = [(0, 1), (2, 3)]
        else:
            pairs = [(1, 2), (3, 0)]
        for a, b in pairs:
            smooth[(v, a)] = (v, b)
            smooth[(v, b)] = (v, a)
    return count_cycles(lambda he: smooth[alpha[he]])


def canon(matching, with_reflection=True, with_swap=True, rotations=4):
    """Minimal encoding over the symmetry group."""
    alpha = as_perm(matching)
    best = None
    rots = range(0, 4, 4 // rotations)
    for r0 in rots:
        for r1 in rots:
            for refl in (False, True) if with_reflection else (False,):
                for swap in (False, True) if with_swap else (False,):
                    def rename(he):
                        v, i = he
                        r = (r0, r1)[v]
                        j = (i + r) % 4
                        if refl:
                            j = (-j) % 4
                        if swap:
                            v = 1 - v
                        return (v, j)

                    enc = tuple(
                        sorted(tuple(sorted((rename(a), rename(b)))) for a, b in matching)
                    )
                    if best is None or enc < best:
                        best = enc
    return best


def survey(with_reflection, with_swap, rotations, need_one_strand):
    classes = {}
    for m in matchings(HE):
        alpha = as_perm(m)
        if not connected(alpha):
            continue
        if faces(alpha) != 4:
            continue
        if need_one_strand and strands_connected(alpha) != 1:
            continue
        key = canon(m, with_reflection, with_swap, rotations)
        if key not in classes:
            classes[key] = m
    return classes


for refl in (True, False):
    for rotations in (4, 2):
        for swap in (True, False):
            classes = survey(refl, swap, rotations, False)
            print(f"refl={refl} rots={rotations} swap={swap}: {len(classes)} classes")

# detail for the candidate model: rotation by 2 only (saddle resolutions are
# distinguished), reflections and vertex swap allowed
classes = survey(True, True, 2, False)
print()
ok_all = 0
ok_mixed = 0
for key, m in sorted(classes.items()):
    alpha = as_perm(m)
    res = {
        (s0, s1): resolve(alpha, s0, s1) // 2 for s0 in (0, 1) for s1 in (0, 1)
    }
    circles = strands_connected(alpha) // 2
    quad = [res[(0, 0)], res[(0, 1)], res[(1, 0)], res[(1, 1)]]
    admits_all = max(quad) <= 2
    admits_mixed = max(res[(0, 1)], res[(1, 0)]) <= 2
    ok_all += admits_all
    ok_mixed += admits_mixed
    print(
        "L-circles:", circles,
        "res(RR,PQ,QP,NN):", quad,
        "no3-all:", admits_all,
        "no3-mixed:", admits_mixed,
        "matching:", sorted(tuple(sorted(p)) for p in m),
    )
print("configs with no 3-circle resolution at all:", ok_all)
print("configs with no 3-circle mixed resolution:", ok_mixed)
