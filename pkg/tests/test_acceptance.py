"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines; every
tolerance is pinned here, nothing is deferred.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from nilgraph import fixtures as fx
from nilgraph import ratlin
from nilgraph.errors import NoAdmissibleLabel
from nilgraph.gassmann import (
    extend_two_step_isometry,
    intertwiner_basis,
    orthogonal_intertwiner,
    verify_transplant,
)
from nilgraph.groups import almost_conjugate
from nilgraph.isometry import (
    ISOMETRIC,
    NO_ISOMETRY_FOUND,
    SearchConfig,
    bracket_residual,
    fingerprint,
    random_block_orthogonal,
    search_isometry,
    transform,
)
from nilgraph.lie import (
    bracket,
    central_series,
    j_operator,
    three_step,
    two_step,
    verify_jacobi,
)
from nilgraph.schreier import (
    ALLOW_LABEL_PERMUTATION,
    classify_labels,
    digraph_isomorphic,
    label_cycles,
)

import sympy as sp

from randcases import random_graph


def report(number: int, message: str) -> None:
    print(f"ACCEPTANCE {number}: PASS - {message}")


def figure_named_edges(graph, renaming):
    names = fx.figure_names_of(graph, renaming)
    return {
        (label, names[i], names[j])
        for label in graph.labels
        for i, j in enumerate(graph.succ[label])
    }


def figure_edges(figure):
    return {
        (label, figure.vertex_names[i], figure.vertex_names[j])
        for label in figure.labels
        for i, j in enumerate(figure.succ[label])
    }


def test_criterion_01_s4_pipeline():
    start = time.perf_counter()
    graph = fx.s4_s3_graph()
    # exact match against the pinned adjacency fixture
    assert graph.succ == fx.S4_BUILT_SUCC
    # the figure, reproduced exactly under the pinned renaming
    assert figure_named_edges(graph, fx.S4_VERTEX_NAMES) == figure_edges(
        fx.s4_s3_figure_graph()
    )
    # loop at He under the 3-cycle label; 3-cycle elsewhere; 4-cycle dashed
    names = fx.figure_names_of(graph, fx.S4_VERTEX_NAMES)
    he = names.index("He")
    assert graph.succ["(1 2 3)"][he] == he
    assert label_cycles(graph, "(1 2 3)").lengths == (1, 3)
    assert label_cycles(graph, "(1 2 3 4)").lengths == (4,)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(1, f"S4/S3 graph matches the figure exactly ({elapsed:.3f}s < 1s)")


def test_criterion_02_sl32_pipeline():
    start = time.perf_counter()
    g1, g2 = fx.sl32_graphs()
    p1, p2 = fx.sl32_figure_graphs()
    assert figure_named_edges(g1, fx.SL32_G1_VERTEX_NAMES) == figure_edges(p1)
    assert figure_named_edges(g2, fx.SL32_G2_VERTEX_NAMES) == figure_edges(p2)
    # exhaustive non-isomorphism, label permutations allowed (<= 7! * 2)
    assert digraph_isomorphic(g1, g2, mode=ALLOW_LABEL_PERMUTATION) is None
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    report(2, f"both coset graphs match the figures; pair certified "
              f"non-isomorphic by exhaustion ({elapsed:.3f}s < 5s)")


def test_criterion_03_bracket_tables():
    g1, g2 = fx.sl32_graphs()
    checked = 0
    for graph, renaming, vv_expected, vz_expected, assignment in (
        (g1, fx.SL32_G1_VERTEX_NAMES, fx.N1_VV_TABLE, fx.N1_VZ_TABLE,
         fx.n1_t_assignment()),
        (g2, fx.SL32_G2_VERTEX_NAMES, fx.N2_VV_TABLE, fx.N2_VZ_TABLES[0],
         fx.n2_t_assignment(0)),
    ):
        names = fx.figure_names_of(graph, renaming)
        index_of = {n: i for i, n in enumerate(names)}
        dv = graph.vertex_count
        for algebra in (two_step(graph), three_step(graph, assignment)):
            # every nonzero [v_i, v_j] coefficient-exact, zero tolerance
            for (va, vb), coeffs in vv_expected.items():
                got = algebra.pair_bracket(index_of[va], index_of[vb])
                want = {
                    dv + graph.labels.index(lbl): Fraction(c)
                    for lbl, c in coeffs.items()
                }
                assert got == want
                checked += 1
            # and every zero stays exactly zero
            for i in range(dv):
                for j in range(i + 1, dv):
                    key = tuple(sorted((names[i], names[j])))
                    if key not in vv_expected:
                        assert algebra.pair_bracket(i, j) == {}
        algebra = three_step(graph, assignment)
        tcoord = dv + len(graph.labels)
        zr = dv + graph.labels.index("z_r")
        for i in range(dv):
            want = Fraction(vz_expected.get(names[i], 0))
            got = algebra.pair_bracket(i, zr)
            assert got == ({tcoord: want} if want else {})
            checked += 1
        zb = dv + graph.labels.index("z_b")
        for i in range(dv):
            assert algebra.pair_bracket(i, zb) == {}
    report(3, f"all printed brackets reproduced coefficient-exact "
              f"({checked} entries, exact rationals)")


def test_criterion_04_three_step_theorem_both_directions():
    start = time.perf_counter()
    g1, g2 = fx.sl32_graphs()
    assert verify_jacobi(three_step(g1, fx.n1_t_assignment())) == []
    assert verify_jacobi(three_step(g2, fx.n2_t_assignment())) == []
    rng = random.Random(2024)
    admissible_found = 0
    attempts = 0
    while admissible_found < 20 and attempts < 500:
        attempts += 1
        graph, _ = random_graph(rng, order_cap=200)
        if not classify_labels(graph).admissible_labels:
            continue
        assert verify_jacobi(three_step(graph)) == []
        admissible_found += 1
    assert admissible_found == 20
    rng = random.Random(77)
    inadmissible_found = 0
    attempts = 0
    while inadmissible_found < 5 and attempts < 500:
        attempts += 1
        graph, _ = random_graph(rng, order_cap=200)
        if classify_labels(graph).admissible_labels:
            continue
        with pytest.raises(NoAdmissibleLabel):
            three_step(graph)
        inadmissible_found += 1
    assert inadmissible_found == 5
    with pytest.raises(NoAdmissibleLabel):
        three_step(fx.c5_graph())
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    report(4, f"Jacobi exact on both worked extensions + 20 random groups; "
              f"no-admissible-label rejected on C5 + 5 random graphs "
              f"({elapsed:.1f}s < 30s)")


def test_criterion_05_nilpotency_and_series():
    g1, g2 = fx.sl32_graphs()
    n1 = three_step(g1, fx.n1_t_assignment())
    n2 = three_step(g2, fx.n2_t_assignment())
    r1, r2 = central_series(n1), central_series(n2)
    assert r1.step == 3 and r2.step == 3
    assert central_series(two_step(g1)).step == 2
    assert central_series(two_step(g2)).step == 2

    def span_rows(spans, index_of):
        rows = []
        for combo in spans:
            row = [Fraction(0)] * 10
            for name, c in combo.items():
                row[index_of[name]] = Fraction(c)
            rows.append(row)
        return rows

    for graph, renaming, series, center, center2 in (
        (g1, fx.SL32_G1_VERTEX_NAMES, r1, fx.N1_CENTER_SPAN, fx.N1_CENTER2_SPAN),
        (g2, fx.SL32_G2_VERTEX_NAMES, r2, fx.N2_CENTER_SPAN, fx.N2_CENTER2_SPAN),
    ):
        index_of = dict(fx.figure_index_of(graph, renaming))
        index_of.update({"z_r": 7, "z_b": 8, "t": 9})
        assert len(series.ascending[0]) == 4
        assert len(series.ascending[1]) == 8
        assert ratlin.span_equal(series.ascending[0], span_rows(center, index_of))
        assert ratlin.span_equal(series.ascending[1], span_rows(center2, index_of))
    report(5, "step 3 / step 2 as required; Z and Z_2 match the published "
              "spans up to exact span equality")


def test_criterion_06_j_operator_two_routes():
    g1, g2 = fx.sl32_graphs()
    checked = 0
    for graph in (g1, g2):
        algebra = two_step(graph)
        dv = graph.vertex_count
        for label in graph.labels:
            # j_operator itself asserts graph-formula == adjoint-definition;
            # re-derive both routes here independently as well
            mat = j_operator(algebra, graph, label)
            succ, pred = graph.succ[label], graph.pred(label)
            p = graph.labels.index(label)
            for v in range(dv):
                for w in range(dv):
                    graph_entry = (1 if succ[v] == w else 0) - (
                        1 if pred[v] == w else 0
                    )
                    adjoint_entry = algebra.pair_bracket(v, w).get(dv + p, 0)
                    assert mat[w][v] == graph_entry == adjoint_entry
                    checked += 1
    report(6, f"graph-formula and adjoint j-operators agree entrywise, "
              f"exactly ({checked} entries over every label of both graphs)")


def test_criterion_07_gassmann_suite():
    start = time.perf_counter()
    group, h1, h2, system = fx.sl32_group()
    ok, table = almost_conjugate(group, h1, h2)
    assert ok
    assert sum(row.size for row in table) == group.order
    assert all(row.in_h1 == row.in_h2 for row in table)
    basis, g1, g2 = intertwiner_basis(group, h1, h2, system)
    assert len(basis) == 2
    t = orthogonal_intertwiner(basis)
    assert t.exact
    m = t.sympy()
    assert sp.simplify(m.T * m - sp.eye(7)) == sp.zeros(7, 7)
    a1, a2 = two_step(g1), two_step(g2)
    rep = verify_transplant(t, g1, g2, a1, a2)
    assert rep.exact and rep.ok
    assert all(v == 0 for v in rep.alpha_residuals.values())
    assert all(v == 0 for v in rep.j_residuals.values())
    ext = extend_two_step_isometry(t, a1, a2)  # raises unless exact-zero residual
    res = bracket_residual(ext.matrix, a1, a2)
    assert res == 0 and not isinstance(res, float)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report(7, f"almost conjugate with full count table; intertwiner dim 2; "
              f"T^T T = I exact; transplant and extension residuals exactly 0 "
              f"({elapsed:.1f}s < 10s)")


def test_criterion_08_non_isometry_evidence():
    start = time.perf_counter()
    g1, g2 = fx.sl32_graphs()
    n1 = three_step(g1, fx.n1_t_assignment())
    cfg = SearchConfig(seed=fx.SEARCH_SEED, restarts=200)
    floors = []
    for variant in range(4):
        n2 = three_step(g2, fx.n2_t_assignment(variant))
        result = search_isometry(n1, n2, cfg)
        assert result.verdict == NO_ISOMETRY_FOUND
        assert result.best_residual > 1e-2
        assert result.best_residual >= fx.SEARCH_FLOOR_BOUNDS[variant]
        assert len(result.restarts) == 200
        floors.append(result.best_residual)
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    report(8, "200-restart searches floor at "
              + ", ".join(f"{f:.3f}" for f in floors)
              + f" for the printed pair and all three variations "
                f"(pinned bounds {fx.SEARCH_FLOOR_BOUNDS}, {elapsed:.0f}s < 300s)")


def test_criterion_09_search_control():
    g1, g2 = fx.sl32_graphs()
    m1, m2 = two_step(g1), two_step(g2)
    cfg = SearchConfig(seed=fx.SEARCH_SEED, restarts=200)
    result = search_isometry(m1, m2, cfg)
    assert result.verdict == ISOMETRIC
    assert result.best_residual < 1e-8
    report(9, f"the same search drives the isometric two-step pair to "
              f"residual {result.best_residual:.2e} < 1e-8")


def test_criterion_10_property_suite():
    start = time.perf_counter()
    g1, g2 = fx.sl32_graphs()
    n1 = three_step(g1, fx.n1_t_assignment())
    rng = random.Random(505)
    n = n1.dim

    def rand_vec():
        return [Fraction(rng.randrange(-5, 6)) for _ in range(n)]

    for _ in range(1000):
        x, y = rand_vec(), rand_vec()
        assert bracket(n1, x, y) == [-c for c in bracket(n1, y, x)]

    for _ in range(1000):
        x, y, z = rand_vec(), rand_vec(), rand_vec()
        yz = bracket(n1, y, z)
        zx = bracket(n1, z, x)
        xy = bracket(n1, x, y)
        total = [
            a + b + c
            for a, b, c in zip(
                bracket(n1, x, yz), bracket(n1, y, zx), bracket(n1, z, xy)
            )
        ]
        assert all(v == 0 for v in total)

    base_fp = fingerprint(n1)
    np_rng = np.random.default_rng(606)
    for _ in range(1000):
        phi = random_block_orthogonal(n1.block_dims, np_rng)
        moved_fp = fingerprint(transform(n1, phi))
        assert moved_fp.exact_entries() == base_fp.exact_entries()
        assert moved_fp.spectra_close(base_fp, tol=1e-9)

    rng = random.Random(909)
    divis_checks = 0
    cases = [(fx.s4_s3_graph(), fx.s4_s3_group()[2]),
             (g1, fx.sl32_group()[3]), (g2, fx.sl32_group()[3])]
    while divis_checks < 1000:
        if cases:
            graph, system = cases.pop()
        else:
            graph, system = random_graph(rng, order_cap=120)
        for label, perm in system.pairs:
            order = perm.order()
            for length in label_cycles(graph, label).lengths:
                assert order % length == 0
                divis_checks += 1
    assert divis_checks >= 1000
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    report(10, f"1000 checks each: skew-symmetry, Jacobi on random vectors, "
               f"fingerprint invariance, cycle-length divisibility "
               f"({divis_checks} divisibility checks, {elapsed:.1f}s < 60s)")
