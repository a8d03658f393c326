"""Pinned fixtures for every worked example: groups, graphs, renamings,
bracket tables, t-assignments, and expected center spans.

The SL(3,2) permutations were derived once from the two generator matrices
acting on the nonzero vectors of F_2^3 (point i-1 is the vector with binary
value i, i = 1..7; a matrix M acts as v -> M^{-1} v, which makes the
assignment a group isomorphism under this project's left-to-right
composition).  The vertex renamings below were reverse-engineered by
exhaustive labeled-digraph matching against the source figures and are
frozen here; tests re-derive all of it from scratch.
"""

from __future__ import annotations

from importlib import resources

from ..groups import FiniteGroup, Permutation, generate_group
from ..lie import TAssignment
from ..schreier import GeneratorSystem, SchreierGraph, build_schreier


def spec_path(name: str):
    """Filesystem path of a bundled spec file (s4_s3, sl32_pair, c5)."""
    return resources.files(__package__) / f"{name}.toml"


def spec_text(name: str) -> str:
    return spec_path(name).read_text(encoding="utf-8")

# --- S4 / S3 ---------------------------------------------------------------

S4_DEGREE = 4
S4_C_POS = (("(1 2 3)", "(1 2 3)"), ("(1 2 3 4)", "(1 2 3 4)"))  # (label, perm)
S4_H_GENS = ("(1 2)", "(1 2 3)")

# figure: solid loop at He, solid 3-cycle H(34)->H(14)->H(24)->H(34),
# dashed 4-cycle He->H(14)->H(24)->H(34)->He
S4_FIGURE_VERTICES = ("He", "H(34)", "H(24)", "H(14)")
S4_FIGURE_SUCC = {"(1 2 3)": (0, 3, 1, 2), "(1 2 3 4)": (3, 0, 1, 2)}

# canonical coset representative -> figure vertex name
S4_VERTEX_NAMES = {
    "e": "He",
    "(1 2 3 4)": "H(34)",
    "(3 4)": "H(14)",
    "(2 3 4)": "H(24)",
}

# pinned adjacency of the built graph (BFS vertex order)
S4_BUILT_SUCC = {"(1 2 3)": (0, 2, 3, 1), "(1 2 3 4)": (2, 0, 3, 1)}


# --- SL(3,2) ---------------------------------------------------------------

SL32_DEGREE = 7

# generator matrices, row-major over F_2
SL32_Z1_MATRIX = ((0, 1, 1), (0, 1, 0), (1, 0, 0))
SL32_Z2_MATRIX = ((1, 0, 0), (0, 0, 1), (0, 1, 1))

# phi(z1), phi(z2) as 0-based image arrays on the 7 points
SL32_C_POS_IMAGES = (
    ("z_r", (3, 2, 6, 0, 4, 1, 5)),  # order 4
    ("z_b", (1, 2, 0, 3, 5, 6, 4)),  # order 3
)

# two generators each for the point stabilizer (H1) and the
# hyperplane-functional stabilizer (H2), both of order 24
SL32_H1_IMAGES = ((0, 2, 1, 3, 4, 6, 5), (1, 4, 6, 3, 5, 0, 2))
SL32_H2_IMAGES = ((0, 2, 1, 3, 4, 6, 5), (1, 0, 2, 4, 6, 3, 5))

# source figures, v1..v7 as indices 0..6; z_r solid, z_b dashed.
# One solid edge of the second figure is ambiguous in the drawing; its
# direction (v3 -> v7) is fixed by the bracket [v3,v7] = z_r in the tables.
SL32_FIGURE_VERTICES = tuple(f"v{i}" for i in range(1, 8))
SL32_FIGURE_G1_SUCC = {"z_r": (0, 4, 6, 5, 3, 1, 2), "z_b": (4, 0, 3, 5, 1, 2, 6)}
SL32_FIGURE_G2_SUCC = {"z_r": (1, 0, 6, 3, 2, 4, 5), "z_b": (1, 4, 5, 2, 0, 3, 6)}

# canonical coset representative -> figure vertex name
SL32_G1_VERTEX_NAMES = {
    "e": "v7",
    "(1 2 4)(3 6 5)": "v3",
    "(2 4)(3 5)": "v6",
    "(2 4 3 5)(6 7)": "v4",
    "(4 6)(5 7)": "v2",
    "(4 7)(5 6)": "v5",
    "(4 5)(6 7)": "v1",
}
SL32_G2_VERTEX_NAMES = {
    "e": "v7",
    "(1 3 7 6 5 2 4)": "v3",
    "(1 2 4)(3 6 5)": "v6",
    "(2 6 4)(3 7 5)": "v5",
    "(2 4)(3 5)": "v4",
    "(1 2 5 3 7 6 4)": "v2",
    "(1 3 6 4)(2 5)": "v1",
}

# pinned adjacency of the built graphs (BFS vertex order)
SL32_G1_BUILT_SUCC = {"z_r": (1, 0, 4, 2, 5, 3, 6), "z_b": (0, 3, 1, 2, 6, 4, 5)}
SL32_G2_BUILT_SUCC = {"z_r": (2, 0, 3, 1, 4, 6, 5), "z_b": (0, 2, 4, 6, 1, 3, 5)}

# nonzero brackets of the worked example, exact coefficients, figure names.
# [v_i, v_j] columns:
N1_VV_TABLE = {
    ("v1", "v2"): {"z_b": -1},
    ("v1", "v5"): {"z_b": 1},
    ("v2", "v5"): {"z_r": 1, "z_b": -1},
    ("v2", "v6"): {"z_r": -1},
    ("v3", "v4"): {"z_b": 1},
    ("v3", "v6"): {"z_b": -1},
    ("v4", "v5"): {"z_r": -1},
    ("v4", "v6"): {"z_r": 1, "z_b": 1},
}
N2_VV_TABLE = {
    ("v1", "v2"): {"z_b": 1},
    ("v1", "v5"): {"z_b": -1},
    ("v2", "v5"): {"z_b": 1},
    ("v3", "v4"): {"z_b": -1},
    ("v3", "v5"): {"z_r": -1},
    ("v3", "v6"): {"z_b": 1},
    ("v3", "v7"): {"z_r": 1},
    ("v4", "v6"): {"z_b": -1},
    ("v5", "v6"): {"z_r": -1},
    ("v6", "v7"): {"z_r": -1},
}
# [v_i, z_r] columns (coefficient of the single t direction):
N1_VZ_TABLE = {"v2": 1, "v4": -1}
N2_VZ_TABLES = (
    {"v3": 1, "v6": -1},  # as printed
    {"v3": -1, "v6": 1},  # t <-> -t
    {"v5": 1, "v7": -1},  # t and 0 slots switched
    {"v5": -1, "v7": 1},  # both
)

# t-assignments producing those tables, in the orientation that
# classify_labels reports (cycle starting at its minimal built vertex).
# Slot vectors live in a 1-dimensional t-space with basis vector "t".
N1_T_SLOTS = ((0,), (1,))
N2_T_SLOTS_VARIANTS = (
    ((0,), (-1,)),
    ((0,), (1,)),
    ((-1,), (0,)),
    ((1,), (0,)),
)

# ascending central series of the worked pair, figure names
N1_CENTER_SPAN = (
    {"v1": 1, "v2": 1, "v3": 1, "v4": 1, "v5": 1, "v6": 1},
    {"v7": 1},
    {"z_b": 1},
    {"t": 1},
)
N1_CENTER2_SPAN = (
    {"v1": 1},
    {"v2": 1, "v4": 1},
    {"v3": 1},
    {"v5": 1, "v6": 1},
    {"v7": 1},
    {"z_r": 1},
    {"z_b": 1},
    {"t": 1},
)
N2_CENTER_SPAN = (
    {"v1": 1, "v2": 1, "v5": 1, "v7": 1},
    {"v3": 1, "v4": 1, "v6": 1},
    {"z_b": 1},
    {"t": 1},
)
N2_CENTER2_SPAN = (
    {"v1": 1},
    {"v2": 1},
    {"v3": 1, "v6": 1},
    {"v4": 1},
    {"v5": 1, "v7": 1},
    {"z_r": 1},
    {"z_b": 1},
    {"t": 1},
)

# residual floor of the 200-restart isometry search between the three-step
# pair (seed 1), recorded on first run and frozen as a regression bound;
# one entry per t-assignment variant of the second algebra.  Observed floors:
# 1.116109, 1.116106, 1.085163, 1.085192 -- the bounds leave slack for BLAS
# reduction-order drift only.
SEARCH_SEED = 1
SEARCH_FLOOR_BOUNDS = (1.1, 1.1, 1.05, 1.05)


def _perm(text_or_images, degree):
    if isinstance(text_or_images, str):
        return Permutation.parse(text_or_images, degree)
    return Permutation(text_or_images)


def s4_s3_group() -> tuple[FiniteGroup, list[Permutation], GeneratorSystem]:
    system = GeneratorSystem(
        pairs=tuple(
            (label, _perm(p, S4_DEGREE)) for label, p in S4_C_POS
        )
    )
    group = generate_group(list(system.perms))
    h_gens = [_perm(s, S4_DEGREE) for s in S4_H_GENS]
    return group, h_gens, system


def s4_s3_graph() -> SchreierGraph:
    group, h_gens, system = s4_s3_group()
    return build_schreier(group, h_gens, system)


def s4_s3_figure_graph() -> SchreierGraph:
    return SchreierGraph(
        vertex_names=S4_FIGURE_VERTICES,
        labels=tuple(label for label, _ in S4_C_POS),
        succ=dict(S4_FIGURE_SUCC),
    )


def sl32_group() -> tuple[FiniteGroup, list[Permutation], list[Permutation], GeneratorSystem]:
    system = GeneratorSystem(
        pairs=tuple(
            (label, Permutation(images)) for label, images in SL32_C_POS_IMAGES
        )
    )
    group = generate_group(list(system.perms))
    h1 = [Permutation(images) for images in SL32_H1_IMAGES]
    h2 = [Permutation(images) for images in SL32_H2_IMAGES]
    return group, h1, h2, system


def sl32_graphs() -> tuple[SchreierGraph, SchreierGraph]:
    group, h1, h2, system = sl32_group()
    return build_schreier(group, h1, system), build_schreier(group, h2, system)


def sl32_figure_graphs() -> tuple[SchreierGraph, SchreierGraph]:
    labels = ("z_r", "z_b")
    g1 = SchreierGraph(
        vertex_names=SL32_FIGURE_VERTICES, labels=labels, succ=dict(SL32_FIGURE_G1_SUCC)
    )
    g2 = SchreierGraph(
        vertex_names=SL32_FIGURE_VERTICES, labels=labels, succ=dict(SL32_FIGURE_G2_SUCC)
    )
    return g1, g2


def figure_names_of(graph: SchreierGraph, renaming: dict[str, str]) -> tuple[str, ...]:
    """Built vertex order -> figure names, via the pinned rep renaming."""
    return tuple(renaming[name] for name in graph.vertex_names)


def figure_index_of(graph: SchreierGraph, renaming: dict[str, str]) -> dict[str, int]:
    """Figure name -> built vertex index."""
    return {renaming[name]: i for i, name in enumerate(graph.vertex_names)}


def n1_t_assignment() -> TAssignment:
    return TAssignment.from_slots(
        1, {"z_r": (N1_T_SLOTS[0], N1_T_SLOTS[1])}, names=("t",)
    )


def n2_t_assignment(variant: int = 0) -> TAssignment:
    t1, t2 = N2_T_SLOTS_VARIANTS[variant]
    return TAssignment.from_slots(1, {"z_r": (t1, t2)}, names=("t",))


def c5_group() -> tuple[FiniteGroup, list[Permutation], GeneratorSystem]:
    z = Permutation.parse("(1 2 3 4 5)", 5)
    system = GeneratorSystem(pairs=(("z", z),))
    return generate_group([z]), [], system


def c5_graph() -> SchreierGraph:
    group, h_gens, system = c5_group()
    return build_schreier(group, h_gens, system)
