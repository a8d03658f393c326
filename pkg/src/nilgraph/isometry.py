"""Isometry evidence for graded metric nilpotent Lie algebras.

Two complementary tools: exact isometry-invariant fingerprints (block
dimensions, central series dimensions, spectra of summed Gram operators of
the structure tensor), and a seeded multi-start gradient search over
block-orthogonal basis changes that minimizes the bracket-preservation
residual.  A fingerprint mismatch in an exact entry soundly rules out an
isometry; a small search residual exhibits one; a stubbornly positive
residual floor is recorded as evidence of non-isometry, not proof.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
import sympy as sp

from . import ratlin
from .errors import GradingMismatch
from .lie import NilpotentLieAlgebra, central_series

_RANK_TOL = 1e-9
ISOMETRIC = "isometric"
NOT_ISOMETRIC = "not-isometric"
NO_ISOMETRY_FOUND = "no-isometry-found"
RESIDUAL_SUCCESS = 1e-8


@dataclass(frozen=True)
class GradingBlocks:
    """Intrinsic grading: t = second lower-central term, z+t = derived
    subalgebra, v = orthogonal complement.  ``aligned`` records whether these
    coincide with the coordinate blocks of the basis (they do for every
    non-degenerate graph algebra)."""

    dims: tuple[int, int, int]
    ranges: tuple[range, range, range]
    aligned: bool


def _block_ranges(a: NilpotentLieAlgebra) -> tuple[range, range, range]:
    dv, dz, dt = a.block_dims
    return range(0, dv), range(dv, dv + dz), range(dv + dz, dv + dz + dt)


def grading_blocks(a: NilpotentLieAlgebra) -> GradingBlocks:
    if not a.exact:
        raise ValueError("grading_blocks requires an exact algebra")
    n = a.dim
    report = central_series(a)
    derived = report.descending[1] if len(report.descending) > 1 else ()
    second = report.descending[2] if len(report.descending) > 2 else ()
    d_t = len(second)
    d_z = len(derived) - d_t
    d_v = n - len(derived)
    ranges = _block_ranges(a)

    def coordinate_rows(rng_: range):
        return [
            [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in rng_
        ]

    aligned = (
        (d_v, d_z, d_t) == a.block_dims
        and ratlin.span_equal(
            list(derived), coordinate_rows(ranges[1]) + coordinate_rows(ranges[2])
        )
        and ratlin.span_equal(list(second), coordinate_rows(ranges[2]))
    )
    return GradingBlocks(dims=(d_v, d_z, d_t), ranges=ranges, aligned=aligned)


def to_dense(a: NilpotentLieAlgebra) -> np.ndarray:
    """Full antisymmetric structure tensor C[i, j, k] as floats."""
    n = a.dim
    c = np.zeros((n, n, n))
    for (i, j), coeffs in a.brackets.items():
        for k, val in coeffs.items():
            f = float(val)
            c[i, j, k] += f
            c[j, i, k] -= f
    return c


def _float_rank(rows: np.ndarray) -> int:
    if rows.size == 0:
        return 0
    s = np.linalg.svd(rows, compute_uv=False)
    return int((s > _RANK_TOL * max(1.0, s[0] if len(s) else 1.0)).sum())


def _float_rowspace(rows: np.ndarray, ncols: int) -> np.ndarray:
    if rows.size == 0:
        return np.zeros((0, ncols))
    u, s, vt = np.linalg.svd(rows, full_matrices=False)
    r = int((s > _RANK_TOL * max(1.0, s[0] if len(s) else 1.0)).sum())
    return vt[:r]


def _float_nullspace(rows: np.ndarray, ncols: int) -> np.ndarray:
    if rows.size == 0:
        return np.eye(ncols)
    u, s, vt = np.linalg.svd(rows, full_matrices=True)
    tol = _RANK_TOL * max(1.0, s[0] if len(s) else 1.0)
    r = int((s > tol).sum())
    return vt[r:]


def _float_series_dims(c: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Descending and ascending central series dimensions of a float tensor."""
    n = c.shape[0]
    descending = [n]
    basis = np.eye(n)
    while basis.shape[0] > 0:
        rows = np.einsum("ri,ijk->rjk", basis, c).reshape(-1, n)
        basis = _float_rowspace(rows, n)
        descending.append(basis.shape[0])
        if len(descending) > n + 2:
            raise GradingMismatch("float descending series did not terminate")
    # M_j[k, i] = C[i, j, k]
    mats = [c[:, j, :].T for j in range(n)]
    ascending = []
    prev = np.zeros((0, n))
    while True:
        w = _float_nullspace(prev, n)
        stacked = np.vstack([w @ mj for mj in mats]) if w.size else np.zeros((0, n))
        kernel = _float_nullspace(stacked, n)
        ascending.append(kernel.shape[0])
        if kernel.shape[0] == n:
            break
        if ascending[:-1] and ascending[-1] == ascending[-2]:
            raise GradingMismatch("float ascending series stalled")
        prev = kernel
    return tuple(descending), tuple(ascending)


@dataclass(frozen=True)
class Fingerprint:
    """Isometry-invariant summary.

    block_dims and both series dimension vectors are exact invariants;
    the two spectra (eigenvalues of the summed Gram operators of the
    (V,V)->Z and (V,Z)->T tensor slices, rounded to 12 digits) and the
    squared Frobenius norm are invariant up to float drift.  The Frobenius
    entry is kept squared so exact algebras compare it bit-exactly.
    """

    block_dims: tuple[int, int, int]
    descending_dims: tuple[int, ...]
    ascending_dims: tuple[int, ...]
    j_spectrum: tuple[float, ...]
    vzt_spectrum: tuple[float, ...]
    frobenius_sq: object  # Fraction for exact algebras, float otherwise

    def exact_entries(self) -> tuple:
        return (self.block_dims, self.descending_dims, self.ascending_dims)

    def spectra_close(self, other: "Fingerprint", tol: float = 1e-9) -> bool:
        if len(self.j_spectrum) != len(other.j_spectrum):
            return False
        if len(self.vzt_spectrum) != len(other.vzt_spectrum):
            return False
        pairs = list(zip(self.j_spectrum, other.j_spectrum)) + list(
            zip(self.vzt_spectrum, other.vzt_spectrum)
        )
        if any(abs(x - y) > tol for x, y in pairs):
            return False
        return abs(float(self.frobenius_sq) - float(other.frobenius_sq)) <= tol * max(
            1.0, abs(float(self.frobenius_sq))
        )

    def matches(self, other: "Fingerprint", tol: float = 1e-9) -> bool:
        return self.exact_entries() == other.exact_entries() and self.spectra_close(
            other, tol
        )

    def to_jsonable(self) -> dict:
        return {
            "block_dims": list(self.block_dims),
            "descending_dims": list(self.descending_dims),
            "ascending_dims": list(self.ascending_dims),
            "j_spectrum": list(self.j_spectrum),
            "vzt_spectrum": list(self.vzt_spectrum),
            "frobenius_sq": str(self.frobenius_sq),
        }


def _round12(values) -> tuple[float, ...]:
    out = []
    for v in sorted(float(x) for x in values):
        r = round(v, 12)
        out.append(0.0 if r == 0 else r)  # avoid -0.0
    return tuple(out)


def fingerprint(a: NilpotentLieAlgebra) -> Fingerprint:
    dv, dz, dt = a.block_dims
    if a.exact:
        blocks = grading_blocks(a)
        if not blocks.aligned:
            raise GradingMismatch(
                "intrinsic grading does not match the basis blocks; "
                "fingerprints are only defined for block-aligned algebras"
            )
        report = central_series(a)
        descending = report.descending_dims
        ascending = report.ascending_dims
        frob = Fraction(0)
        for coeffs in a.brackets.values():
            for c in coeffs.values():
                frob += 2 * Fraction(c) ** 2
    else:
        c = to_dense(a)
        descending, ascending = _float_series_dims(c)
        frob = float((c**2).sum())
    dense = to_dense(a)
    if dz:
        j_ops = [dense[:dv, :dv, dv + p].T for p in range(dz)]
        j_gram = sum(jm @ jm.T for jm in j_ops)
        j_spec = _round12(np.linalg.eigvalsh(j_gram))
    else:
        j_spec = _round12(np.zeros(dv))
    if dt:
        k_ops = [dense[:dv, dv : dv + dz, dv + dz + b] for b in range(dt)]
        k_gram = sum(km @ km.T for km in k_ops)
        t_spec = _round12(np.linalg.eigvalsh(k_gram))
    else:
        t_spec = _round12(np.zeros(dv))
    return Fingerprint(
        block_dims=(dv, dz, dt),
        descending_dims=tuple(descending),
        ascending_dims=tuple(ascending),
        j_spectrum=j_spec,
        vzt_spectrum=t_spec,
        frobenius_sq=frob,
    )


# --- basis changes ----------------------------------------------------------


def _is_exact_matrix(phi) -> bool:
    if isinstance(phi, np.ndarray):
        return False
    return all(
        isinstance(x, (int, Fraction)) or isinstance(x, sp.Expr)
        for row in phi
        for x in row
    )


def _block_mask(dims: tuple[int, int, int]) -> np.ndarray:
    n = sum(dims)
    mask = np.zeros((n, n))
    start = 0
    for d in dims:
        mask[start : start + d, start : start + d] = 1.0
        start += d
    return mask


def transform(
    a: NilpotentLieAlgebra, phi: Union[np.ndarray, Sequence[Sequence[object]]]
) -> NilpotentLieAlgebra:
    """Push the tensor through the block-orthogonal basis change ``phi``.

    new[x, y] = phi [phi^T x, phi^T y]; the result is an isometric copy.
    Exact (rational or radical) phi yields an exact algebra, float phi an
    inexact one.
    """
    n = a.dim
    exact = a.exact and _is_exact_matrix(phi)
    dims = a.block_dims
    mask = _block_mask(dims)
    if exact:
        mat = sp.Matrix([[sp.nsimplify(x) for x in row] for row in phi])
        if mat.shape != (n, n):
            raise ValueError(f"phi must be {n}x{n}")
        if sp.simplify(mat.T * mat - sp.eye(n)) != sp.zeros(n, n):
            raise ValueError("phi is not orthogonal")
        if any(
            mat[i, j] != 0
            for i in range(n)
            for j in range(n)
            if mask[i, j] == 0.0
        ):
            raise ValueError("phi does not respect the grading blocks")
        mapped = {}
        for (p, q), coeffs in a.brackets.items():
            vec = [sp.Integer(0)] * n
            for k, c in coeffs.items():
                cn = sp.nsimplify(c)
                for w in range(n):
                    if mat[w, k] != 0:
                        vec[w] += mat[w, k] * cn
            mapped[(p, q)] = vec
        brackets = {}
        for i in range(n):
            for j in range(i + 1, n):
                acc = [sp.Integer(0)] * n
                for (p, q), vec in mapped.items():
                    w = sp.expand(mat[i, p] * mat[j, q] - mat[i, q] * mat[j, p])
                    if w == 0:
                        continue
                    for k in range(n):
                        if vec[k] != 0:
                            acc[k] += w * vec[k]
                entry = {}
                for k in range(n):
                    val = sp.expand(acc[k])
                    if val == 0:
                        continue
                    val = sp.nsimplify(val)
                    entry[k] = Fraction(*val.as_numer_denom()) if val.is_Rational else val
                if entry:
                    brackets[(i, j)] = entry
        return NilpotentLieAlgebra(basis=a.basis, brackets=brackets, exact=True)

    mat = np.asarray(phi, dtype=float)
    if mat.shape != (n, n):
        raise ValueError(f"phi must be {n}x{n}")
    if np.abs(mat.T @ mat - np.eye(n)).max() > 1e-9:
        raise ValueError("phi is not orthogonal")
    if np.abs(mat * (1.0 - mask)).max() > 1e-12:
        raise ValueError("phi does not respect the grading blocks")
    dense = to_dense(a)
    new = np.einsum("ip,jq,kl,pql->ijk", mat, mat, mat, dense, optimize=True)
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            entry = {
                k: float(new[i, j, k])
                for k in range(n)
                if abs(new[i, j, k]) > 1e-15
            }
            if entry:
                brackets[(i, j)] = entry
    return NilpotentLieAlgebra(basis=a.basis, brackets=brackets, exact=False)


def bracket_residual(phi, a1: NilpotentLieAlgebra, a2: NilpotentLieAlgebra):
    """Sum over basis pairs of || phi[e_i,e_j]_1 - [phi e_i, phi e_j]_2 ||^2.

    Zero exactly iff phi carries bracket 1 to bracket 2.  Exact inputs give
    an exact scalar, float inputs a float.
    """
    n = a1.dim
    if a2.dim != n:
        raise ValueError("algebras have different dimensions")
    if a1.exact and a2.exact and _is_exact_matrix(phi):
        mat = sp.Matrix([[sp.nsimplify(x) for x in row] for row in phi])
        c1 = _sympy_coordinate_mats(a1)
        c2 = _sympy_coordinate_mats(a2)
        total = sp.Integer(0)
        for k in range(n):
            lhs = sp.zeros(n, n)
            for l in range(n):
                if mat[k, l] != 0 and l in c1:
                    lhs += mat[k, l] * c1[l]
            rhs = mat.T * c2.get(k, sp.zeros(n, n)) * mat
            diff = sp.expand(lhs - rhs)
            total += sum(x**2 for x in diff)
        total = sp.simplify(total)
        return Fraction(*total.as_numer_denom()) if total.is_Rational else total
    mat = np.asarray(phi, dtype=float)
    d1, d2 = to_dense(a1), to_dense(a2)
    lhs = np.einsum("kl,ijl->ijk", mat, d1)
    rhs = np.einsum("pi,qj,pqk->ijk", mat, mat, d2, optimize=True)
    return float(((lhs - rhs) ** 2).sum())


def _sympy_coordinate_mats(a: NilpotentLieAlgebra) -> dict[int, sp.Matrix]:
    n = a.dim
    mats: dict[int, sp.Matrix] = {}
    for (i, j), coeffs in a.brackets.items():
        for k, c in coeffs.items():
            if k not in mats:
                mats[k] = sp.zeros(n, n)
            mats[k][i, j] += sp.nsimplify(c)
            mats[k][j, i] -= sp.nsimplify(c)
    return mats


def random_block_orthogonal(
    dims: tuple[int, int, int], rng: np.random.Generator
) -> np.ndarray:
    """Haar-random element of O(d_v) x O(d_z) x O(d_t) as a full matrix."""
    n = sum(dims)
    out = np.zeros((n, n))
    start = 0
    for d in dims:
        if d > 0:
            g = rng.standard_normal((d, d))
            q, r = np.linalg.qr(g)
            q = q * np.sign(np.diag(r))
            out[start : start + d, start : start + d] = q
        start += d
    return out


# --- the search -------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    restarts: int = 200
    max_iterations: int = 2000
    tolerance: float = 1e-12
    step_init: float = 0.05
    step_shrink: float = 0.5
    step_grow: float = 1.5
    armijo: float = 1e-4
    max_backtracks: int = 40

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if self.tolerance <= 0 or self.step_init <= 0:
            raise ValueError("tolerance and step sizes must be positive")


@dataclass(frozen=True)
class RestartTrace:
    index: int
    final_residual: float
    iterations: int


@dataclass(frozen=True)
class SearchResult:
    verdict: str
    best_residual: Optional[float]
    best_phi: Optional[np.ndarray]
    restarts: tuple[RestartTrace, ...]
    fingerprint_a: Fingerprint
    fingerprint_b: Fingerprint

    def to_json(self) -> str:
        payload = {
            "verdict": self.verdict,
            "best_residual": self.best_residual,
            "restarts": [
                {
                    "seed": t.index,
                    "final_residual": t.final_residual,
                    "iterations": t.iterations,
                }
                for t in self.restarts
            ],
            "fingerprint_a": self.fingerprint_a.to_jsonable(),
            "fingerprint_b": self.fingerprint_b.to_jsonable(),
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _retract_blocks(mat: np.ndarray, dims: tuple[int, int, int]) -> np.ndarray:
    """Polar retraction onto the product of orthogonal groups, per block."""
    out = np.zeros_like(mat)
    start = 0
    for d in dims:
        if d > 0:
            block = mat[start : start + d, start : start + d]
            u, _, vt = np.linalg.svd(block)
            out[start : start + d, start : start + d] = u @ vt
        start += d
    return out


def _residual_and_parts(phi, c1, c2):
    lhs = np.einsum("kl,ijl->ijk", phi, c1)
    mid = np.einsum("qj,pqk->pjk", phi, c2)
    rhs = np.einsum("pi,pjk->ijk", phi, mid)
    r = lhs - rhs
    return float((r * r).sum()), r, mid


def _gradient(phi, c1, c2, r, mid):
    g1 = np.einsum("ija,ijb->ab", r, c1)
    g2 = np.einsum("bjk,ajk->ab", r, mid)
    v = np.einsum("pi,pak->iak", phi, c2)
    g3 = np.einsum("ibk,iak->ab", r, v)
    return 2.0 * (g1 - g2 - g3)


def _descend(
    phi0: np.ndarray,
    c1: np.ndarray,
    c2: np.ndarray,
    dims: tuple[int, int, int],
    cfg: SearchConfig,
) -> tuple[np.ndarray, float, int]:
    mask = _block_mask(dims)
    phi = phi0
    res, r, mid = _residual_and_parts(phi, c1, c2)
    step = cfg.step_init
    iterations = 0
    for _ in range(cfg.max_iterations):
        if res < 1e-20:
            break
        grad = _gradient(phi, c1, c2, r, mid) * mask
        gnorm_sq = float((grad * grad).sum())
        if gnorm_sq < 1e-24:
            break
        accepted = False
        trial_step = step
        for _ in range(cfg.max_backtracks):
            cand = _retract_blocks(phi - trial_step * grad, dims)
            cand_res, cand_r, cand_mid = _residual_and_parts(cand, c1, c2)
            if cand_res <= res - cfg.armijo * trial_step * gnorm_sq:
                accepted = True
                break
            trial_step *= cfg.step_shrink
        if not accepted:
            break
        iterations += 1
        improvement = res - cand_res
        phi, res, r, mid = cand, cand_res, cand_r, cand_mid
        step = min(trial_step * cfg.step_grow, 1.0)
        if improvement <= cfg.tolerance * max(1.0, res):
            break
    return phi, res, iterations


def search_isometry(
    a1: NilpotentLieAlgebra,
    a2: NilpotentLieAlgebra,
    cfg: SearchConfig,
) -> SearchResult:
    """Multi-start block-orthogonal descent on the bracket residual.

    Restart 0 starts from the identity; the rest start from seeded
    Haar-random block-orthogonal points, so the whole run is deterministic
    given the config.  If the exact fingerprint entries differ the search is
    skipped and the verdict is "not-isometric" (sound: those entries are
    isometry invariants).
    """
    fa, fb = fingerprint(a1), fingerprint(a2)
    if fa.exact_entries() != fb.exact_entries() or (
        a1.exact
        and a2.exact
        and Fraction(fa.frobenius_sq) != Fraction(fb.frobenius_sq)
    ):
        return SearchResult(
            verdict=NOT_ISOMETRIC,
            best_residual=None,
            best_phi=None,
            restarts=(),
            fingerprint_a=fa,
            fingerprint_b=fb,
        )
    dims = a1.block_dims
    c1, c2 = to_dense(a1), to_dense(a2)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

    def run_restart(idx: int) -> tuple[int, np.ndarray, float, int]:
        if idx == 0:
            start = np.eye(a1.dim)
        else:
            start = random_block_orthogonal(dims, np.random.default_rng(seeds[idx]))
        phi, res, iters = _descend(start, c1, c2, dims, cfg)
        return idx, phi, res, iters

    workers = max(1, int(os.environ.get("NILGRAPH_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_restart, range(cfg.restarts)))
    else:
        outcomes = [run_restart(idx) for idx in range(cfg.restarts)]
    # merge is scheduling-independent: minimal residual, then minimal index
    outcomes.sort(key=lambda item: item[0])
    traces = [
        RestartTrace(index=idx, final_residual=res, iterations=iters)
        for idx, _, res, iters in outcomes
    ]
    best_idx, best_phi, best_res, _ = min(
        outcomes, key=lambda item: (item[2], item[0])
    )
    verdict = ISOMETRIC if best_res < RESIDUAL_SUCCESS else NO_ISOMETRY_FOUND
    return SearchResult(
        verdict=verdict,
        best_residual=best_res,
        best_phi=best_phi,
        restarts=tuple(traces),
        fingerprint_a=fa,
        fingerprint_b=fb,
    )
