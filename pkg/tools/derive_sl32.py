"""One-shot derivation of the SL(3,2) fixture constants.

Maps the two generator matrices (and both subgroups) to degree-7
permutations via the action on nonzero vectors of F_2^3, builds both
Schreier graphs, matches them against the transcribed figures,
and prints everything worth pinning in nilgraph.fixtures.

Point order: vector (x1,x2,x3) gets 0-based index 4*x1+2*x2+x3 - 1.
A matrix M is sent to the permutation v -> M^{-1} v; with the project's
left-to-right composition this assignment is a group isomorphism.
"""

import itertools
import sys

sys.path.insert(0, "src")
sys.path.insert(0, "tests")

from nilgraph.groups import Permutation, generate_group, enumerate_subgroup, almost_conjugate
from nilgraph.schreier import (
    GeneratorSystem,
    SchreierGraph,
    build_schreier,
    classify_labels,
    digraph_isomorphic,
)

VECTORS = [(v >> 2 & 1, v >> 1 & 1, v & 1) for v in range(1, 8)]
VIDX = {v: i for i, v in enumerate(VECTORS)}

Z1 = ((0, 1, 1), (0, 1, 0), (1, 0, 0))
Z2 = ((1, 0, 0), (0, 0, 1), (0, 1, 1))


def mat_vec(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(3)) % 2 for i in range(3))


def mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) % 2 for j in range(3))
        for i in range(3)
    )


def mat_inv(m):
    # brute force over GL(3,2): fine at this size
    for cand in all_invertible():
        if mat_mul(m, cand) == ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            return cand
    raise ValueError("singular")


_ALL = None


def all_invertible():
    global _ALL
    if _ALL is None:
        out = []
        for bits in itertools.product((0, 1), repeat=9):
            m = (bits[0:3], bits[3:6], bits[6:9])
            imgs = [mat_vec(m, v) for v in VECTORS]
            if len(set(imgs)) == 7 and all(any(x) for x in imgs):
                out.append(m)
        _ALL = out
    return _ALL


def perm_plain(m):
    return Permutation(VIDX[mat_vec(m, v)] for v in VECTORS)


def phi(m):
    return perm_plain(mat_inv(m))


def find_generators(perms_set):
    """Smallest-first deterministic search for a 2-element generating set."""
    ordered = sorted(perms_set)
    deg = ordered[0].degree
    for a, b in itertools.combinations(ordered, 2):
        elems = {Permutation.identity(deg)}
        frontier = [Permutation.identity(deg)]
        while frontier:
            new = []
            for p in frontier:
                for g in (a, b):
                    q = p * g
                    if q not in elems:
                        elems.add(q)
                        new.append(q)
            frontier = new
        if elems == perms_set:
            return a, b
    raise RuntimeError("no 2-generator set found")


# source figures, hand-transcribed (0-based, v1..v7 -> 0..6)
FIGURE_G1 = SchreierGraph(
    vertex_names=tuple(f"v{i}" for i in range(1, 8)),
    labels=("z_r", "z_b"),
    succ={"z_r": (0, 4, 6, 5, 3, 1, 2), "z_b": (4, 0, 3, 5, 1, 2, 6)},
)
FIGURE_G2 = SchreierGraph(
    vertex_names=tuple(f"v{i}" for i in range(1, 8)),
    labels=("z_r", "z_b"),
    succ={"z_r": (1, 0, 6, 3, 2, 4, 5), "z_b": (1, 4, 5, 2, 0, 3, 6)},
)


def main():
    c1, c2 = phi(Z1), phi(Z2)
    print("phi(z1) images:", list(c1.images), "=", c1.cycle_string(), "order", c1.order())
    print("phi(z2) images:", list(c2.images), "=", c2.cycle_string(), "order", c2.order())

    group = generate_group([c1, c2])
    print("group order:", group.order)

    h1_set = {perm_plain(m) for m in all_invertible() if tuple(r[0] for r in m) == (1, 0, 0)}
    h2_set = {perm_plain(m) for m in all_invertible() if m[0] == (1, 0, 0)}
    print("|H1|,|H2| =", len(h1_set), len(h2_set))
    h1a, h1b = find_generators(h1_set)
    h2a, h2b = find_generators(h2_set)
    for name, p in [("h1a", h1a), ("h1b", h1b), ("h2a", h2a), ("h2b", h2b)]:
        print(name, list(p.images), "=", p.cycle_string())
    assert enumerate_subgroup(group, [h1a, h1b]) == {group.index_of(p) for p in h1_set}
    assert enumerate_subgroup(group, [h2a, h2b]) == {group.index_of(p) for p in h2_set}

    ok, table = almost_conjugate(group, [h1a, h1b], [h2a, h2b])
    print("almost conjugate:", ok)
    for row in table:
        print("  class", row.representative, "size", row.size, "counts", row.in_h1, row.in_h2)

    system = GeneratorSystem(pairs=(("z_r", c1), ("z_b", c2)))
    g1 = build_schreier(group, [h1a, h1b], system)
    g2 = build_schreier(group, [h2a, h2b], system)
    for tag, g in (("G1", g1), ("G2", g2)):
        print(tag, "vertices:", g.vertex_names)
        print(tag, "succ z_r:", list(g.succ["z_r"]), " z_b:", list(g.succ["z_b"]))

    for tag, built, figure in (("G1", g1, FIGURE_G1), ("G2", g2, FIGURE_G2)):
        witness = digraph_isomorphic(built, figure)
        if witness is None:
            print(tag, "NO MATCH against transcribed figure")
            continue
        vmap, _ = witness
        print(tag, "renaming built-index -> figure name:",
              {i: figure.vertex_names[vmap[i]] for i in range(7)})
        print(tag, "renaming by rep:",
              {built.vertex_names[i]: figure.vertex_names[vmap[i]] for i in range(7)})

    for tag, g in (("G1", g1), ("G2", g2)):
        rep = classify_labels(g)
        for v in rep.verdicts:
            print(tag, v.label, "admissible" if v.admissible else f"inadmissible({v.reason})",
                  v.cycle)

    print("figure graphs non-isomorphic:",
          digraph_isomorphic(FIGURE_G1, FIGURE_G2, mode="allow-label-permutation") is None)


if __name__ == "__main__":
    main()
