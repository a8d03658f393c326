"""Graded nilpotent Lie algebras built from Schreier graphs.

The two-step algebra has basis (vertices | labels) with [v_i, v_j] read off
the labeled edges: each edge v_i -> v_j with label z contributes +z, each
opposing edge -z.  The three-step extension adds a t-block and the bracket
relations along each admissible cycle; everything else brackets to zero.

Coefficients are exact Fractions.  Algebras produced by pushing a float basis
change through the tensor (module ``isometry``) carry ``exact=False`` and are
only ever inspected with tolerances.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import ratlin
from .errors import (
    AdjointMismatch,
    AllZeroTAssignment,
    InternalCheckError,
    NoAdmissibleLabel,
    TAssignmentSpanError,
)
from .schreier import SchreierGraph, classify_labels

V, Z, T = "V", "Z", "T"


@dataclass(frozen=True)
class BasisElement:
    kind: str  # V, Z or T
    name: str
    index: int  # vertex index / label index / t-coordinate index


@dataclass(frozen=True)
class NilpotentLieAlgebra:
    """Sparse structure-constant tensor over a graded orthonormal basis.

    ``brackets[(i, j)]`` with i < j maps basis index k to the coefficient of
    e_k in [e_i, e_j]; only nonzero coefficients are stored, skew-symmetry is
    implicit.  The metric is always the one making the basis orthonormal.
    """

    basis: tuple[BasisElement, ...]
    brackets: dict[tuple[int, int], dict[int, object]]
    exact: bool = True

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def block_dims(self) -> tuple[int, int, int]:
        dv = sum(1 for b in self.basis if b.kind == V)
        dz = sum(1 for b in self.basis if b.kind == Z)
        dt = sum(1 for b in self.basis if b.kind == T)
        return dv, dz, dt

    def pair_bracket(self, i: int, j: int) -> dict[int, object]:
        """[e_i, e_j] as a sparse coefficient dict (any i, j)."""
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def to_json(self) -> str:
        if not self.exact:
            raise ValueError("only exact algebras serialize to JSON")
        entries = []
        for (i, j) in sorted(self.brackets):
            coeffs = self.brackets[(i, j)]
            try:
                rendered = {str(k): str(Fraction(coeffs[k])) for k in sorted(coeffs)}
            except (TypeError, ValueError):
                raise ValueError(
                    "the JSON schema is rational-only; this algebra has "
                    "irrational exact entries (a radical basis change?)"
                )
            entries.append({"i": i, "j": j, "coeffs": rendered})
        payload = {
            "basis": [{"kind": b.kind, "name": b.name} for b in self.basis],
            "brackets": entries,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "NilpotentLieAlgebra":
        data = json.loads(text)
        counters = {V: 0, Z: 0, T: 0}
        basis = []
        for entry in data["basis"]:
            kind = entry["kind"]
            basis.append(BasisElement(kind=kind, name=entry["name"], index=counters[kind]))
            counters[kind] += 1
        brackets = {}
        for entry in data["brackets"]:
            coeffs = {int(k): Fraction(v) for k, v in entry["coeffs"].items()}
            coeffs = {k: c for k, c in coeffs.items() if c != 0}
            if coeffs:
                brackets[(entry["i"], entry["j"])] = coeffs
        return cls(basis=tuple(basis), brackets=brackets, exact=True)


@dataclass(frozen=True)
class TAssignment:
    """Choice of t_{k,1}, t_{k,2} coordinates per admissible label.

    ``t_dim`` is the dimension of the t-space; the assigned vectors must
    jointly span it (pick a smaller ``t_dim`` to express linear dependence,
    as in the published (t, 0) choice, which lives in a 1-dimensional t-space).
    """

    t_dim: int
    vectors: dict[str, tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.names:
            if self.t_dim == 1:
                names = ("t",)
            else:
                names = tuple(f"t{i + 1}" for i in range(self.t_dim))
            object.__setattr__(self, "names", names)

    @classmethod
    def generic(cls, admissible_labels: Sequence[str]) -> "TAssignment":
        """Independent unit vectors per slot: dim t = 2m, the generic extension."""
        m = len(admissible_labels)
        dim = 2 * m
        vectors = {}
        names = []
        for k, label in enumerate(admissible_labels):
            e1 = tuple(Fraction(1 if p == 2 * k else 0) for p in range(dim))
            e2 = tuple(Fraction(1 if p == 2 * k + 1 else 0) for p in range(dim))
            vectors[label] = (e1, e2)
            names.extend([f"t[{label},1]", f"t[{label},2]"])
        return cls(t_dim=dim, vectors=vectors, names=tuple(names))

    @classmethod
    def from_slots(
        cls, t_dim: int, slots: dict[str, tuple[Sequence, Sequence]], names=()
    ) -> "TAssignment":
        vectors = {
            label: (
                tuple(Fraction(x) for x in pair[0]),
                tuple(Fraction(x) for x in pair[1]),
            )
            for label, pair in slots.items()
        }
        return cls(t_dim=t_dim, vectors=vectors, names=tuple(names))

    def validate(self, admissible_labels: Sequence[str]) -> None:
        if self.t_dim < 1:
            raise TAssignmentSpanError("t-space dimension must be >= 1")
        rows = []
        for label in admissible_labels:
            if label not in self.vectors:
                raise TAssignmentSpanError(f"no t-vectors assigned for label {label}")
            t1, t2 = self.vectors[label]
            if len(t1) != self.t_dim or len(t2) != self.t_dim:
                raise TAssignmentSpanError(
                    f"t-vectors for {label} must have length {self.t_dim}"
                )
            if all(x == 0 for x in t1) and all(x == 0 for x in t2):
                raise AllZeroTAssignment(
                    f"both t-vectors for admissible label {label} are zero"
                )
            rows.extend([list(t1), list(t2)])
        if ratlin.rank(rows) != self.t_dim:
            raise TAssignmentSpanError(
                "assigned t-vectors do not span the declared t-space"
            )

    def to_json(self) -> str:
        payload = {
            "t_dim": self.t_dim,
            "names": list(self.names),
            "vectors": {
                label: [[str(x) for x in vec] for vec in pair]
                for label, pair in self.vectors.items()
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TAssignment":
        data = json.loads(text)
        slots = {
            label: (pair[0], pair[1]) for label, pair in data["vectors"].items()
        }
        return cls.from_slots(data["t_dim"], slots, names=tuple(data.get("names", ())))


def _vertex_pair_coeffs(graph: SchreierGraph) -> dict[tuple[int, int], dict[int, Fraction]]:
    """Structure constants of [v_i, v_j] over the z-block, from the edges."""
    dv = graph.vertex_count
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for p, label in enumerate(graph.labels):
        for i, j in enumerate(graph.succ[label]):
            if i == j:
                continue
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            entry = brackets.setdefault(key, {})
            entry[dv + p] = entry.get(dv + p, Fraction(0)) + sign
    for key in list(brackets):
        entry = {k: c for k, c in brackets[key].items() if c != 0}
        if entry:
            brackets[key] = entry
        else:
            del brackets[key]
    return brackets


def two_step(graph: SchreierGraph) -> NilpotentLieAlgebra:
    """Two-step construction: basis = vertices + labels, z-block central."""
    basis = [
        BasisElement(kind=V, name=name, index=i)
        for i, name in enumerate(graph.vertex_names)
    ]
    basis += [
        BasisElement(kind=Z, name=label, index=p)
        for p, label in enumerate(graph.labels)
    ]
    return NilpotentLieAlgebra(
        basis=tuple(basis), brackets=_vertex_pair_coeffs(graph), exact=True
    )


def three_step(
    graph: SchreierGraph,
    assignment: Optional[TAssignment] = None,
    rotations: Optional[dict[str, int]] = None,
) -> NilpotentLieAlgebra:
    """Three-step extension along the admissible cycles.

    Requires at least one admissible label.  ``assignment`` defaults to the
    generic one (independent unit t-vectors).  ``rotations`` optionally
    rotates each admissible cycle's starting point before the relations are
    laid down; any rotation yields an isomorphic algebra.
    """
    report = classify_labels(graph)
    admissible = report.admissible_labels
    if not admissible:
        reasons = {v.label: v.reason for v in report.verdicts}
        raise NoAdmissibleLabel(f"no admissible label: {reasons}")
    if assignment is None:
        assignment = TAssignment.generic(admissible)
    assignment.validate(admissible)

    dv = graph.vertex_count
    dz = len(graph.labels)
    basis = [
        BasisElement(kind=V, name=name, index=i)
        for i, name in enumerate(graph.vertex_names)
    ]
    basis += [
        BasisElement(kind=Z, name=label, index=p)
        for p, label in enumerate(graph.labels)
    ]
    basis += [
        BasisElement(kind=T, name=name, index=b)
        for b, name in enumerate(assignment.names)
    ]

    brackets = _vertex_pair_coeffs(graph)

    def t_coeffs(vec: Sequence[Fraction]) -> dict[int, Fraction]:
        return {dv + dz + b: c for b, c in enumerate(vec) if c != 0}

    for label in admissible:
        cyc = report[label].cycle
        if rotations and label in rotations:
            r = rotations[label] % len(cyc)
            cyc = cyc[r:] + cyc[:r]
        p = graph.labels.index(label)
        t1, t2 = assignment.vectors[label]
        if len(cyc) == 4:
            slot_vectors = [
                t1,
                t2,
                tuple(-x for x in t1),
                tuple(-x for x in t2),
            ]
        else:  # length 3
            slot_vectors = [
                t1,
                t2,
                tuple(-(a + b) for a, b in zip(t1, t2)),
            ]
        for vertex, vec in zip(cyc, slot_vectors):
            coeffs = t_coeffs(vec)
            if coeffs:
                brackets[(vertex, dv + p)] = coeffs

    algebra = NilpotentLieAlgebra(basis=tuple(basis), brackets=brackets, exact=True)
    violations = verify_jacobi(algebra)
    if violations:
        raise InternalCheckError(
            f"three-step construction violated Jacobi on {len(violations)} triples"
        )
    return algebra


def bracket(algebra: NilpotentLieAlgebra, x: Sequence, y: Sequence):
    """Bilinear, skew-symmetric evaluation of [x, y] on coefficient vectors."""
    n = algebra.dim
    if len(x) != n or len(y) != n:
        raise ValueError(f"vectors must have length {n}")
    zero = Fraction(0) if algebra.exact else 0.0
    out = [zero] * n
    for (i, j), coeffs in algebra.brackets.items():
        w = x[i] * y[j] - x[j] * y[i]
        if w:
            for k, c in coeffs.items():
                out[k] = out[k] + w * c
    return out


def _ad_on_sparse(algebra: NilpotentLieAlgebra, i: int, vec: dict[int, object]) -> dict[int, object]:
    """[e_i, v] for sparse v."""
    out: dict[int, object] = {}
    for m, c in vec.items():
        for k, d in algebra.pair_bracket(i, m).items():
            out[k] = out.get(k, 0) + c * d
    return {k: c for k, c in out.items() if c != 0}


def verify_jacobi(algebra: NilpotentLieAlgebra, tol: float = 1e-9):
    """Exhaustive Jacobi check over all basis triples.

    Returns the list of violations as (i, j, k, residual-dict); empty means
    pass.  Exact algebras are checked in exact arithmetic, inexact ones
    against ``tol``.
    """
    n = algebra.dim
    violations = []
    pair = algebra.pair_bracket
    for i in range(n):
        for j in range(i + 1, n):
            bij = pair(i, j)
            for k in range(j + 1, n):
                total: dict[int, object] = {}
                for m, c in _ad_on_sparse(algebra, i, pair(j, k)).items():
                    total[m] = total.get(m, 0) + c
                for m, c in _ad_on_sparse(algebra, j, pair(k, i)).items():
                    total[m] = total.get(m, 0) + c
                for m, c in _ad_on_sparse(algebra, k, bij).items():
                    total[m] = total.get(m, 0) + c
                if algebra.exact:
                    residual = {m: c for m, c in total.items() if c != 0}
                else:
                    residual = {m: c for m, c in total.items() if abs(c) > tol}
                if residual:
                    violations.append((i, j, k, residual))
    return violations


@dataclass(frozen=True)
class SeriesReport:
    """Descending and ascending central series as exact echelon bases."""

    descending: tuple[tuple[tuple[Fraction, ...], ...], ...]
    ascending: tuple[tuple[tuple[Fraction, ...], ...], ...]
    step: int

    @property
    def descending_dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.descending)

    @property
    def ascending_dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.ascending)


def _bracket_rows_with_basis(algebra: NilpotentLieAlgebra, rows) -> list[list[Fraction]]:
    """All brackets [row, e_j], as dense rows."""
    n = algebra.dim
    out = []
    for row in rows:
        sparse = {i: c for i, c in enumerate(row) if c != 0}
        for j in range(n):
            acc: dict[int, Fraction] = {}
            for i, c in sparse.items():
                for k, d in algebra.pair_bracket(i, j).items():
                    acc[k] = acc.get(k, Fraction(0)) + c * d
            if any(v != 0 for v in acc.values()):
                dense = [Fraction(0)] * n
                for k, v in acc.items():
                    dense[k] = v
                out.append(dense)
    return out


def _ad_matrices(algebra: NilpotentLieAlgebra) -> list[list[list[Fraction]]]:
    """M_j[k][i] = coefficient of e_k in [e_i, e_j], one matrix per j."""
    n = algebra.dim
    mats = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for k, c in algebra.pair_bracket(i, j).items():
                mats[j][k][i] = Fraction(c)
    return mats


def central_series(algebra: NilpotentLieAlgebra) -> SeriesReport:
    """Exact lower (descending) and upper (ascending) central series.

    Descending: n^(0) = n, n^(k) = [n^(k-1), n]; step is the first k with
    n^(k) = 0.  Ascending: Z_1 = center, Z_{m+1} = {x : [x, n] in Z_m},
    computed via exact kernels, listed up to the first term equal to n.
    """
    if not algebra.exact:
        raise ValueError("central_series requires an exact algebra")
    n = algebra.dim
    full = [
        [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)
    ]
    descending = [tuple(tuple(r) for r in full)]
    current = full
    while current:
        nxt_rows = _bracket_rows_with_basis(algebra, current)
        echelon, _ = ratlin.rref(nxt_rows)
        descending.append(tuple(tuple(r) for r in echelon))
        if len(echelon) == len(current):
            # series stabilized above zero: not nilpotent (cannot happen for
            # graph-built algebras, but fail loudly rather than loop)
            raise InternalCheckError("descending central series did not reach zero")
        current = echelon
    step = len(descending) - 1

    mats = _ad_matrices(algebra)
    ascending = []
    prev: list[list[Fraction]] = []
    while True:
        ann = ratlin.annihilator(prev, n)
        stacked = []
        for mj in mats:
            for w in ann:
                stacked.append(
                    [
                        sum((w[k] * mj[k][i] for k in range(n)), Fraction(0))
                        for i in range(n)
                    ]
                )
        kernel = ratlin.nullspace(stacked) if stacked else full
        echelon, _ = ratlin.rref(kernel)
        ascending.append(tuple(tuple(r) for r in echelon))
        if len(echelon) == n:
            break
        if prev and len(echelon) == len(prev):
            raise InternalCheckError("ascending central series stalled below n")
        prev = [list(r) for r in echelon]
    return SeriesReport(
        descending=tuple(descending), ascending=tuple(ascending), step=step
    )


def j_operator(
    algebra: NilpotentLieAlgebra, graph: SchreierGraph, label: str
) -> tuple[tuple[Fraction, ...], ...]:
    """j(z) on the vertex block, computed two independent ways.

    Route 1 reads the graph: j(z)v = (successor of v) - (predecessor of v).
    Route 2 solves the defining relation <j(z)v, w> = <z, [v, w]> against the
    structure constants.  The two must agree entrywise; disagreement means a
    broken implementation, not bad input.
    """
    dv, dz, dt = algebra.block_dims
    if dv != graph.vertex_count or dt != 0 or dz != len(graph.labels):
        raise ValueError("algebra is not the two-step algebra of this graph")
    if label not in graph.labels:
        raise KeyError(f"unknown label {label!r}")
    p = graph.labels.index(label)
    succ = graph.succ[label]
    pred = graph.pred(label)

    graph_mat = [[Fraction(0)] * dv for _ in range(dv)]
    for i in range(dv):
        graph_mat[succ[i]][i] += 1
        graph_mat[pred[i]][i] -= 1

    adj_mat = [[Fraction(0)] * dv for _ in range(dv)]
    for i in range(dv):
        for w in range(dv):
            if i == w:
                continue
            adj_mat[w][i] = Fraction(algebra.pair_bracket(i, w).get(dv + p, 0))

    if graph_mat != adj_mat:
        raise AdjointMismatch(
            f"graph-formula and adjoint j-operators disagree for label {label}"
        )
    return tuple(tuple(row) for row in graph_mat)
