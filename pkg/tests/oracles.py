"""Independent brute-force oracles used to freeze expected test values.

These deliberately avoid the package's own code paths: compositions are
evaluated point by point, closures by fixed-point sweeps over sets, classes
by full conjugation scans, and bracket coefficients by rescanning the edge
lists.  Slow and dumb on purpose.
"""

from fractions import Fraction
from itertools import product


def compose_pointwise(p, q):
    """Image tuple of "apply p then q" evaluated point by point."""
    return tuple(q[p[x]] for x in range(len(p)))


def inverse_pointwise(p):
    out = [None] * len(p)
    for x in range(len(p)):
        out[p[x]] = x
    return tuple(out)


def order_by_iteration(p):
    ident = tuple(range(len(p)))
    q, k = tuple(p), 1
    while q != ident:
        q = compose_pointwise(q, p)
        k += 1
    return k


def closure_fixed_point(gens):
    """Set closure under composition by sweeping until nothing new appears."""
    elems = {tuple(range(len(gens[0])))}
    elems.update(tuple(g) for g in gens)
    while True:
        new = set()
        for a, b in product(elems, repeat=2):
            c = compose_pointwise(a, b)
            if c not in elems:
                new.add(c)
        if not new:
            return elems
        elems |= new


def conjugation_partition(elements):
    """Conjugacy classes by scanning every conjugator, as frozensets."""
    elems = [tuple(e) for e in elements]
    universe = set(elems)
    classes = set()
    for x in elems:
        orbit = frozenset(
            compose_pointwise(compose_pointwise(inverse_pointwise(g), x), g)
            for g in elems
        )
        assert orbit <= universe
        classes.add(orbit)
    return classes


def epsilon_bracket(succ_by_label, i, j):
    """[v_i, v_j] z-coefficients straight from the epsilon/epsilon' rule."""
    coeffs = {}
    for label, succ in succ_by_label.items():
        eps = 1 if succ[i] == j else 0
        pred = [0] * len(succ)
        for a, b in enumerate(succ):
            pred[b] = a
        eps_prime = 1 if pred[i] == j else 0
        if eps != eps_prime:
            coeffs[label] = Fraction(eps - eps_prime)
    return coeffs


def closed_single_label_paths(succ):
    """All closed single-label paths (as cyclic vertex tuples), brute force.

    Walks every vertex forward until it returns; on a functional graph whose
    map is a permutation these are exactly the label's cycles.
    """
    n = len(succ)
    found = set()
    for start in range(n):
        walk = [start]
        v = succ[start]
        guard = 0
        while v != start:
            walk.append(v)
            v = succ[v]
            guard += 1
            assert guard <= n + 1, "not a permutation"
        rot = min(range(len(walk)), key=lambda r: walk[r])
        found.add(tuple(walk[rot:] + walk[:rot]))
    return found


def admissibility_recheck(succ):
    """Def-level admissibility decision from the brute-force path scan."""
    paths = closed_single_label_paths(succ)
    long_paths = [p for p in paths if len(p) >= 3]
    return len(long_paths) == 1 and len(long_paths[0]) in (3, 4)


def rational_kernel(rows):
    """Textbook Gaussian-elimination nullspace over Fraction rows.

    Independent of nilgraph.ratlin: forward elimination with explicit back
    substitution rather than reduced echelon bookkeeping.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return []
    ncols = len(m[0])
    nrows = len(m)
    pivot_of_col = {}
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivot_of_col[c] = r
        r += 1
    basis = []
    for c in range(ncols):
        if c in pivot_of_col:
            continue
        vec = [Fraction(0)] * ncols
        vec[c] = Fraction(1)
        for pc, pr in pivot_of_col.items():
            vec[pc] = -m[pr][c] / m[pr][pc]
        basis.append(vec)
    return basis
