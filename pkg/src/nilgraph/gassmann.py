"""Transplantation operators for almost-conjugate subgroup pairs.

The intertwiner space {T : T A1(z) = A2(z) T for all labels} is computed as
an exact rational kernel.  An orthogonal element is then found exactly: for
spaces of dimension <= 2 the quadratic Gram system is solved symbolically
(the worked SL(3,2) pair needs sqrt(2) -- there is provably no rational
orthogonal intertwiner, since its Gram system forces 2x^2 = 1).  Larger
spaces fall back to a numeric least-squares fit followed by an exact
rational-reconstruction attempt.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy as sp

from . import ratlin
from .errors import IndexMismatch, IsometryCheckFailed, NoOrthogonalElement
from .groups import FiniteGroup, Permutation
from .lie import NilpotentLieAlgebra, j_operator
from .schreier import GeneratorSystem, SchreierGraph, build_schreier


@dataclass(frozen=True)
class LinearMap:
    """Exact (rational or symbolic-radical) or floating linear map.

    ``matrix`` is a tuple of row tuples; exact entries are Fractions or
    sympy expressions, inexact ones floats.
    """

    matrix: tuple[tuple[object, ...], ...]
    exact: bool = True

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), len(self.matrix[0]) if self.matrix else 0

    def sympy(self) -> sp.Matrix:
        return sp.Matrix([[sp.nsimplify(x) if isinstance(x, Fraction) else x for x in row]
                          for row in self.matrix])

    def numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix], dtype=float)

    @classmethod
    def from_rows(cls, rows, exact: bool = True) -> "LinearMap":
        return cls(matrix=tuple(tuple(row) for row in rows), exact=exact)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls.from_rows(
            [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        )

    def to_json(self) -> str:
        rows, cols = self.shape
        entries = [[str(x) for x in row] for row in self.matrix]
        return json.dumps(
            {"rows": rows, "cols": cols, "exact": self.exact, "entries": entries},
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "LinearMap":
        data = json.loads(text)
        if data["exact"]:
            rows = []
            for row in data["entries"]:
                parsed = []
                for s in row:
                    try:
                        parsed.append(Fraction(s))
                    except ValueError:
                        parsed.append(sp.sympify(s))
                rows.append(parsed)
            return cls.from_rows(rows, exact=True)
        return cls.from_rows(
            [[float(s) for s in row] for row in data["entries"]], exact=False
        )


def coset_action_matrices(graph: SchreierGraph) -> dict[str, list[list[Fraction]]]:
    """Permutation matrix of alpha(z) per label: A e_v = e_{succ(v)}."""
    n = graph.vertex_count
    out = {}
    for label in graph.labels:
        mat = [[Fraction(0)] * n for _ in range(n)]
        for v, w in enumerate(graph.succ[label]):
            mat[w][v] = Fraction(1)
        out[label] = mat
    return out


def intertwiner_basis(
    group: FiniteGroup,
    h1_gens: Sequence[Permutation],
    h2_gens: Sequence[Permutation],
    system: GeneratorSystem,
) -> tuple[list[LinearMap], SchreierGraph, SchreierGraph]:
    """Exact basis of {T : T A1(z) = A2(z) T for every label z}.

    Also returns the two Schreier graphs, whose vertex order fixes the
    coordinates T acts on.  Raises IndexMismatch when the subgroup indices
    (hence the coset-space dimensions) differ.
    """
    g1 = build_schreier(group, h1_gens, system)
    g2 = build_schreier(group, h2_gens, system)
    n1, n2 = g1.vertex_count, g2.vertex_count
    if n1 != n2:
        raise IndexMismatch(f"subgroup indices differ: {n1} vs {n2}")
    n = n1
    # unknowns T[w, i] flattened row-major; each (label, w, i) gives
    # T[w, s1(i)] - T[s2^{-1}(w), i] = 0
    rows = []
    for label in system.labels:
        s1 = g1.succ[label]
        s2inv = g2.pred(label)
        for w in range(n):
            for i in range(n):
                row = [Fraction(0)] * (n * n)
                row[w * n + s1[i]] += 1
                row[s2inv[w] * n + i] -= 1
                if any(x != 0 for x in row):
                    rows.append(row)
    kernel = ratlin.nullspace(rows) if rows else []
    basis = [
        LinearMap.from_rows([vec[r * n : (r + 1) * n] for r in range(n)])
        for vec in kernel
    ]
    return basis, g1, g2


def _normalize_sign(coeffs: Sequence[sp.Expr]) -> list[sp.Expr]:
    """Flip the overall sign so the first nonzero coefficient is positive."""
    for c in coeffs:
        if c.is_zero:
            continue
        if c.is_negative:
            return [-x for x in coeffs]
        break
    return list(coeffs)


def _exact_quadratic_solve(mats: list[sp.Matrix]) -> LinearMap | None:
    """Orthogonal element of span(mats) for d <= 2, solved symbolically."""
    n = mats[0].rows
    eye = sp.eye(n)
    # basis elements themselves are the preferred deterministic answers
    for m in mats:
        if sp.simplify(m.T * m - eye) == sp.zeros(n, n):
            return LinearMap.from_rows(m.tolist(), exact=True)
    syms = list(sp.symbols(f"a0:{len(mats)}", real=True))
    t = sum((s * m for s, m in zip(syms, mats)), sp.zeros(n, n))
    q = sp.expand(t.T * t - eye)
    eqs = sorted({e for e in q if not e.is_zero}, key=sp.default_sort_key)
    candidates = sp.solve(eqs, syms, dict=True)
    solutions = []
    for sol in candidates:
        vals = [sp.nsimplify(sp.radsimp(sol.get(s, sp.Integer(0)))) for s in syms]
        if any(v.has(s) for v in vals for s in syms):
            continue
        if not all(v.is_real for v in vals):
            continue
        vals = _normalize_sign(vals)
        t_sol = sum((v * m for v, m in zip(vals, mats)), sp.zeros(n, n))
        if sp.simplify(t_sol.T * t_sol - eye) == sp.zeros(n, n):
            solutions.append((vals, t_sol))
    if not solutions:
        return None
    solutions.sort(key=lambda item: sp.default_sort_key(sp.Tuple(*item[0])))
    t_best = solutions[0][1].applyfunc(lambda x: sp.radsimp(sp.nsimplify(x)))
    return LinearMap.from_rows(t_best.tolist(), exact=True)


def _numeric_orthogonal(
    arrays: list[np.ndarray], seed: int = 0
) -> tuple[np.ndarray, np.ndarray] | None:
    """Least-squares fit of T(c)^T T(c) = I; returns (coeffs, T) or None."""
    d = len(arrays)
    n = arrays[0].shape[0]
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(40):
        c = rng.standard_normal(d)
        for _ in range(300):
            t = sum(ci * mi for ci, mi in zip(c, arrays))
            f = (t.T @ t - np.eye(n)).reshape(-1)
            if np.abs(f).max() < 1e-13:
                break
            jac = np.stack(
                [(mi.T @ t + t.T @ mi).reshape(-1) for mi in arrays], axis=1
            )
            lhs = jac.T @ jac + 1e-12 * np.eye(d)
            step = np.linalg.solve(lhs, -(jac.T @ f))
            c = c + step
        t = sum(ci * mi for ci, mi in zip(c, arrays))
        err = np.abs(t.T @ t - np.eye(n)).max()
        if best is None or err < best[0]:
            best = (err, c, t)
        if err < 1e-13:
            break
    if best is None or best[0] > 1e-9:
        return None
    return best[1], best[2]


def orthogonal_intertwiner(basis: Sequence[LinearMap]) -> LinearMap:
    """An orthogonal element a1 T1 + ... + ad Td of the intertwiner span.

    Dimension <= 2: exact symbolic solve of the quadratic Gram system.
    Larger d (or exact failure): numeric fit, then continued-fraction
    rounding back to rationals with exact re-verification; if only the float
    solution survives it is returned flagged inexact.
    """
    if not basis:
        raise NoOrthogonalElement("empty intertwiner basis")
    n = basis[0].shape[0]
    if len(basis) <= 2:
        exact = _exact_quadratic_solve([m.sympy() for m in basis])
        if exact is not None:
            return exact
    numeric = _numeric_orthogonal([m.numpy() for m in basis])
    if numeric is None:
        raise NoOrthogonalElement(
            f"no orthogonal element found in the {len(basis)}-dimensional span"
        )
    coeffs, t_float = numeric
    # exact reconstruction attempt
    rational = [Fraction(float(c)).limit_denominator(10**9) for c in coeffs]
    t_exact = [[Fraction(0)] * n for _ in range(n)]
    for c, m in zip(rational, basis):
        for i in range(n):
            for j in range(n):
                t_exact[i][j] += c * Fraction(m.matrix[i][j])
    gram_ok = all(
        sum(t_exact[k][i] * t_exact[k][j] for k in range(n))
        == (1 if i == j else 0)
        for i in range(n)
        for j in range(n)
    )
    if gram_ok:
        return LinearMap.from_rows(t_exact, exact=True)
    return LinearMap.from_rows(t_float.tolist(), exact=False)


@dataclass(frozen=True)
class TransplantReport:
    """Residuals of the alpha- and j-commutation checks, per label.

    ``exact`` means the residuals were evaluated in exact arithmetic, in
    which case zero really is zero.
    """

    alpha_residuals: dict[str, object]
    j_residuals: dict[str, object]
    exact: bool

    @property
    def ok(self) -> bool:
        vals = list(self.alpha_residuals.values()) + list(self.j_residuals.values())
        if self.exact:
            return all(v == 0 for v in vals)
        return all(float(v) <= 1e-9 for v in vals)


def _max_abs_exact(mat: sp.Matrix) -> object:
    entries = [sp.simplify(x) for x in mat]
    if all(x == 0 for x in entries):
        return 0
    return max(abs(float(x)) for x in entries)


def verify_transplant(
    t_map: LinearMap,
    g1: SchreierGraph,
    g2: SchreierGraph,
    a1: NilpotentLieAlgebra,
    a2: NilpotentLieAlgebra,
) -> TransplantReport:
    """Check T alpha_1(z) = alpha_2(z) T and T j_1(z) = j_2(z) T per label.

    Both families are checked independently; for a genuine intertwiner both
    must vanish together.  Failures are reported as residuals, not raised.
    """
    labels = g1.labels
    acts1 = coset_action_matrices(g1)
    acts2 = coset_action_matrices(g2)
    if t_map.exact:
        t = t_map.sympy()
        alpha_res = {}
        j_res = {}
        for label in labels:
            a1m, a2m = sp.Matrix(acts1[label]), sp.Matrix(acts2[label])
            alpha_res[label] = _max_abs_exact(t * a1m - a2m * t)
            j1 = sp.Matrix(j_operator(a1, g1, label))
            j2 = sp.Matrix(j_operator(a2, g2, label))
            j_res[label] = _max_abs_exact(t * j1 - j2 * t)
        return TransplantReport(alpha_residuals=alpha_res, j_residuals=j_res, exact=True)
    t = t_map.numpy()
    alpha_res = {}
    j_res = {}
    for label in labels:
        a1m = np.array(acts1[label], dtype=float)
        a2m = np.array(acts2[label], dtype=float)
        alpha_res[label] = float(np.abs(t @ a1m - a2m @ t).max())
        j1 = np.array(j_operator(a1, g1, label), dtype=float)
        j2 = np.array(j_operator(a2, g2, label), dtype=float)
        j_res[label] = float(np.abs(t @ j1 - j2 @ t).max())
    return TransplantReport(alpha_residuals=alpha_res, j_residuals=j_res, exact=False)


def _coordinate_matrices(a: NilpotentLieAlgebra) -> dict[int, sp.Matrix]:
    """C_k with (C_k)[i][j] = coefficient of e_k in [e_i, e_j], sparse by k."""
    n = a.dim
    mats: dict[int, sp.Matrix] = {}
    for (i, j), coeffs in a.brackets.items():
        for k, c in coeffs.items():
            if k not in mats:
                mats[k] = sp.zeros(n, n)
            mats[k][i, j] += sp.nsimplify(c)
            mats[k][j, i] -= sp.nsimplify(c)
    return mats


def extend_two_step_isometry(
    t_map: LinearMap,
    a1: NilpotentLieAlgebra,
    a2: NilpotentLieAlgebra,
) -> LinearMap:
    """Extend a verified v-block intertwiner to T + Id on v + z.

    Asserts exactly that the extension is orthogonal and bracket-preserving
    on every basis pair; raises IsometryCheckFailed otherwise.
    """
    dv1, dz1, dt1 = a1.block_dims
    dv2, dz2, dt2 = a2.block_dims
    if (dv1, dz1, dt1) != (dv2, dz2, dt2) or dt1 != 0:
        raise IsometryCheckFailed("block shapes differ or algebras are not two-step")
    if t_map.shape != (dv1, dv1):
        raise IsometryCheckFailed(f"T must be {dv1}x{dv1}")
    n = dv1 + dz1
    t = t_map.sympy() if t_map.exact else sp.Matrix(t_map.numpy())
    ext = sp.zeros(n, n)
    ext[:dv1, :dv1] = t
    ext[dv1:, dv1:] = sp.eye(dz1)
    if sp.simplify(ext.T * ext - sp.eye(n)) != sp.zeros(n, n):
        raise IsometryCheckFailed("extension is not orthogonal")
    c1 = _coordinate_matrices(a1)
    c2 = _coordinate_matrices(a2)
    for k in range(n):
        lhs = ext.T * c2.get(k, sp.zeros(n, n)) * ext
        rhs = sp.zeros(n, n)
        for l in range(n):
            if ext[k, l] != 0 and l in c1:
                rhs += ext[k, l] * c1[l]
        if sp.simplify(lhs - rhs) != sp.zeros(n, n):
            raise IsometryCheckFailed(
                f"bracket preservation fails on output coordinate {k}"
            )
    rows = [[sp.radsimp(ext[i, j]) for j in range(n)] for i in range(n)]
    return LinearMap.from_rows(rows, exact=t_map.exact)
