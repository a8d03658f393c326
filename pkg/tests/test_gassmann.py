"""Intertwiner space, orthogonal transplantation, and the extended isometry."""

from fractions import Fraction
import random

import pytest
import sympy as sp

from nilgraph import fixtures as fx
from nilgraph import ratlin
from nilgraph.errors import IndexMismatch, IsometryCheckFailed, NoOrthogonalElement
from nilgraph.gassmann import (
    LinearMap,
    coset_action_matrices,
    extend_two_step_isometry,
    intertwiner_basis,
    orthogonal_intertwiner,
    verify_transplant,
)
from nilgraph.groups import Permutation, right_cosets
from nilgraph.lie import two_step
from oracles import rational_kernel


@pytest.fixture(scope="module")
def sl32_pipeline():
    group, h1, h2, system = fx.sl32_group()
    basis, g1, g2 = intertwiner_basis(group, h1, h2, system)
    return group, h1, h2, system, basis, g1, g2


class TestIntertwinerBasis:
    def test_sl32_dimension_two(self, sl32_pipeline):
        _, _, _, _, basis, _, _ = sl32_pipeline
        assert len(basis) == 2

    def test_dimension_against_independent_kernel_oracle(self, sl32_pipeline):
        # re-derive the commutation system directly from the action matrices
        # and feed it to the standalone elimination oracle
        _, _, _, system, basis, g1, g2 = sl32_pipeline
        n = g1.vertex_count
        acts1 = coset_action_matrices(g1)
        acts2 = coset_action_matrices(g2)
        rows = []
        for label in system.labels:
            a1m, a2m = acts1[label], acts2[label]
            for w in range(n):
                for i in range(n):
                    row = [Fraction(0)] * (n * n)
                    for q in range(n):
                        row[w * n + q] += a1m[q][i]
                        row[q * n + i] -= a2m[w][q]
                    rows.append(row)
        oracle = rational_kernel(rows)
        assert len(oracle) == len(basis) == 2
        flattened = [
            [m.matrix[r][c] for r in range(n) for c in range(n)] for m in basis
        ]
        assert ratlin.span_equal(flattened, oracle)

    def test_basis_elements_intertwine_generators(self, sl32_pipeline):
        _, _, _, system, basis, g1, g2 = sl32_pipeline
        acts1 = coset_action_matrices(g1)
        acts2 = coset_action_matrices(g2)
        for m in basis:
            t = sp.Matrix([[sp.Rational(x) for x in row] for row in m.matrix])
            for label in system.labels:
                a1m = sp.Matrix(acts1[label])
                a2m = sp.Matrix(acts2[label])
                assert t * a1m == a2m * t

    def test_commutation_extends_to_random_group_elements(self, sl32_pipeline):
        group, h1, h2, _, basis, g1, g2 = sl32_pipeline
        table1 = right_cosets(group, h1)
        table2 = right_cosets(group, h2)

        def coset_perm(table, graph, x):
            order = [
                table.index_of(group, Permutation.parse(nm, 7))
                for nm in graph.vertex_names
            ]
            pos = {c: i for i, c in enumerate(order)}
            xinv = x.inverse()
            return [
                pos[table.index_of(group, table.representatives[order[v]] * xinv)]
                for v in range(len(order))
            ]

        rng = random.Random(9)
        for _ in range(20):
            x = rng.choice(group.elements)
            p1 = coset_perm(table1, g1, x)
            p2 = coset_perm(table2, g2, x)
            for m in basis:
                t = m.matrix
                n = len(t)
                for w in range(n):
                    for i in range(n):
                        # (T A1(x))[w, i] == (A2(x) T)[w, i]
                        lhs = t[w][p1[i]]
                        rhs = t[p2.index(w)][i]
                        assert lhs == rhs

    def test_dimension_invariant_under_swap(self, sl32_pipeline):
        group, h1, h2, system, basis, _, _ = sl32_pipeline
        swapped, _, _ = intertwiner_basis(group, h2, h1, system)
        assert len(swapped) == len(basis)

    def test_identity_in_space_for_equal_subgroups(self):
        group, h_gens, system = fx.s4_s3_group()
        basis, g1, _ = intertwiner_basis(group, h_gens, h_gens, system)
        n = g1.vertex_count
        ident = [Fraction(1) if r == c else Fraction(0) for r in range(n) for c in range(n)]
        flattened = [
            [m.matrix[r][c] for r in range(n) for c in range(n)] for m in basis
        ]
        echelon, pivots = ratlin.rref(flattened)
        assert ratlin.in_span(echelon, pivots, ident)

    def test_index_mismatch(self):
        group, h_gens, system = fx.s4_s3_group()
        h2 = [Permutation.parse("(1 2)", 4), Permutation.parse("(3 4)", 4)]
        with pytest.raises(IndexMismatch):
            intertwiner_basis(group, h_gens, h2, system)


class TestOrthogonalIntertwiner:
    def test_sl32_exact_orthogonal(self, sl32_pipeline):
        _, _, _, _, basis, _, _ = sl32_pipeline
        t = orthogonal_intertwiner(basis)
        assert t.exact
        m = t.sympy()
        assert sp.simplify(m.T * m - sp.eye(7)) == sp.zeros(7, 7)
        # the Gram system forces 2 x^2 = 1, so sqrt(2) must appear
        assert any(sp.sympify(x).has(sp.sqrt(2)) for row in t.matrix for x in row)

    def test_identity_basis_returns_identity(self):
        t = orthogonal_intertwiner([LinearMap.identity(4)])
        assert t.matrix == LinearMap.identity(4).matrix

    def test_singular_map_has_no_orthogonal_element(self):
        degenerate = LinearMap.from_rows(
            [[Fraction(1), Fraction(0)], [Fraction(1), Fraction(0)]]
        )
        with pytest.raises(NoOrthogonalElement):
            orthogonal_intertwiner([degenerate])

    def test_empty_basis(self):
        with pytest.raises(NoOrthogonalElement):
            orthogonal_intertwiner([])

    def test_scaled_identity_normalized(self):
        scaled = LinearMap.from_rows(
            [[Fraction(3), Fraction(0)], [Fraction(0), Fraction(3)]]
        )
        t = orthogonal_intertwiner([scaled])
        assert t.exact
        assert t.matrix == LinearMap.identity(2).matrix


class TestVerifyTransplant:
    def test_computed_t_has_zero_residuals(self, sl32_pipeline):
        _, _, _, _, basis, g1, g2 = sl32_pipeline
        t = orthogonal_intertwiner(basis)
        a1, a2 = two_step(g1), two_step(g2)
        report = verify_transplant(t, g1, g2, a1, a2)
        assert report.exact
        assert report.ok
        assert all(v == 0 for v in report.alpha_residuals.values())
        assert all(v == 0 for v in report.j_residuals.values())

    def test_identity_between_different_graphs_fails(self, sl32_pipeline):
        _, _, _, _, _, g1, g2 = sl32_pipeline
        a1, a2 = two_step(g1), two_step(g2)
        report = verify_transplant(LinearMap.identity(7), g1, g2, a1, a2)
        assert not report.ok
        assert any(v != 0 for v in report.alpha_residuals.values())

    def test_identity_on_same_graph_passes(self, sl32_pipeline):
        _, _, _, _, _, g1, _ = sl32_pipeline
        a1 = two_step(g1)
        report = verify_transplant(LinearMap.identity(7), g1, g1, a1, a1)
        assert report.ok

    def test_alpha_and_j_commutation_co_occur(self, sl32_pipeline):
        # for every map in the intertwiner space, both checks pass; for a
        # perturbed map, both fail
        _, _, _, _, basis, g1, g2 = sl32_pipeline
        a1, a2 = two_step(g1), two_step(g2)
        for m in basis:
            report = verify_transplant(m, g1, g2, a1, a2)
            assert all(v == 0 for v in report.alpha_residuals.values())
            assert all(v == 0 for v in report.j_residuals.values())
        rows = [list(r) for r in basis[0].matrix]
        rows[0][0] += 1
        report = verify_transplant(LinearMap.from_rows(rows), g1, g2, a1, a2)
        assert any(v != 0 for v in report.alpha_residuals.values())
        assert any(v != 0 for v in report.j_residuals.values())


class TestExtendIsometry:
    def test_sl32_extension_passes_exactly(self, sl32_pipeline):
        _, _, _, _, basis, g1, g2 = sl32_pipeline
        t = orthogonal_intertwiner(basis)
        a1, a2 = two_step(g1), two_step(g2)
        assert verify_transplant(t, g1, g2, a1, a2).ok
        ext = extend_two_step_isometry(t, a1, a2)
        assert ext.shape == (9, 9)
        m = ext.sympy()
        assert sp.simplify(m.T * m - sp.eye(9)) == sp.zeros(9, 9)
        # z-block acts as the identity
        assert m[7:, 7:] == sp.eye(2)

    def test_identity_self_extension(self, sl32_pipeline):
        _, _, _, _, _, g1, _ = sl32_pipeline
        a1 = two_step(g1)
        ext = extend_two_step_isometry(LinearMap.identity(7), a1, a1)
        assert ext.sympy() == sp.eye(9)

    def test_non_intertwiner_orthogonal_map_fails(self, sl32_pipeline):
        _, _, _, _, _, g1, g2 = sl32_pipeline
        a1, a2 = two_step(g1), two_step(g2)
        swap = [[Fraction(0)] * 7 for _ in range(7)]
        swap[0][1] = swap[1][0] = Fraction(1)
        for k in range(2, 7):
            swap[k][k] = Fraction(1)
        with pytest.raises(IsometryCheckFailed):
            extend_two_step_isometry(LinearMap.from_rows(swap), a1, a2)


class TestLinearMapJson:
    def test_rational_round_trip(self, sl32_pipeline):
        _, _, _, _, basis, _, _ = sl32_pipeline
        for m in basis:
            again = LinearMap.from_json(m.to_json())
            assert again.matrix == m.matrix
            assert again.exact

    def test_radical_round_trip(self, sl32_pipeline):
        _, _, _, _, basis, _, _ = sl32_pipeline
        t = orthogonal_intertwiner(basis)
        again = LinearMap.from_json(t.to_json())
        assert again.exact
        a = t.sympy()
        b = again.sympy()
        assert sp.simplify(a - b) == sp.zeros(*t.shape)
