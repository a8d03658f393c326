"""Labeled directed Schreier graphs on right cosets, and their label analysis.

The graph of (G, H, C) has one vertex per right coset Hg and, for every label
z in C_pos, the edge Hg -> Hg z^{-1}.  Labels whose single-label cycle
structure consists of exactly one cycle of length 3 or 4 plus fixed points
and 2-cycles are *admissible*; they are what feeds the three-step extension.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    DuplicateGenerator,
    GeneratorsDoNotGenerate,
    IdentityInGenerators,
    InvolutionInGenerators,
)
from .groups import (
    FiniteGroup,
    Permutation,
    enumerate_subgroup,
    right_cosets,
)


@dataclass(frozen=True)
class GeneratorSystem:
    """The chosen half C_pos of a symmetric generating set.

    One representative per inverse pair, no identity, no involutions (an
    involution would only ever contribute zero brackets downstream).
    """

    pairs: tuple[tuple[str, Permutation], ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.pairs)

    @property
    def perms(self) -> tuple[Permutation, ...]:
        return tuple(p for _, p in self.pairs)

    def perm_of(self, label: str) -> Permutation:
        for name, p in self.pairs:
            if name == label:
                return p
        raise KeyError(label)

    def validate(self, group: FiniteGroup) -> None:
        seen: dict[Permutation, str] = {}
        for name, p in self.pairs:
            if p.is_identity():
                raise IdentityInGenerators(f"label {name} is the identity")
            if p == p.inverse():
                raise InvolutionInGenerators(
                    f"label {name} = {p.cycle_string()} has order 2"
                )
            if p in seen:
                raise DuplicateGenerator(f"labels {seen[p]} and {name} coincide")
            inv = p.inverse()
            if inv in seen:
                raise DuplicateGenerator(
                    f"labels {seen[inv]} and {name} are mutually inverse"
                )
            seen[p] = name
        closure = enumerate_subgroup(group, list(self.perms))
        if len(closure) != group.order:
            raise GeneratorsDoNotGenerate(
                f"C generates a subgroup of order {len(closure)} < {group.order}"
            )


@dataclass(frozen=True)
class SchreierGraph:
    """Vertices are right cosets (named by canonical representatives);
    ``succ[label][i]`` is the vertex hit by following the label edge out of
    vertex i, i.e. the coset of rep_i * z^{-1}."""

    vertex_names: tuple[str, ...]
    labels: tuple[str, ...]
    succ: dict[str, tuple[int, ...]]

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_names)

    def pred(self, label: str) -> tuple[int, ...]:
        """Inverse of the label's successor permutation (the z^{-1} action)."""
        s = self.succ[label]
        out = [0] * len(s)
        for i, j in enumerate(s):
            out[j] = i
        return tuple(out)

    def to_json(self) -> str:
        payload = {
            "vertices": list(self.vertex_names),
            "labels": list(self.labels),
            "succ": {label: list(self.succ[label]) for label in self.labels},
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SchreierGraph":
        data = json.loads(text)
        vertices = tuple(data["vertices"])
        labels = tuple(data["labels"])
        succ = {}
        for label in labels:
            arr = data["succ"][label]
            if sorted(arr) != list(range(len(vertices))):
                raise ValueError(f"succ[{label}] is not a vertex permutation")
            succ[label] = tuple(arr)
        return cls(vertex_names=vertices, labels=labels, succ=succ)


def build_schreier(
    group: FiniteGroup,
    h_gens: Sequence[Permutation],
    system: GeneratorSystem,
) -> SchreierGraph:
    """Schreier graph of ``group`` relative to <h_gens> and the system.

    Vertex order is BFS from the coset H, exploring each label's inverse
    action before its forward action (z1^{-1}, z1, z2^{-1}, z2, ...); this
    pins a deterministic numbering that the fixtures rely on.
    """
    system.validate(group)
    table = right_cosets(group, h_gens)

    def coset_index(perm: Permutation) -> int:
        return table.index_of(group, perm)

    # images of each coset under alpha(z)(Hg) = Hg z^{-1} and alpha(z^{-1})
    n = table.count
    fwd = {}  # label -> coset permutation, via canonical reps
    bwd = {}
    for name, z in system.pairs:
        zinv = z.inverse()
        fwd[name] = [coset_index(table.representatives[i] * zinv) for i in range(n)]
        bwd[name] = [coset_index(table.representatives[i] * z) for i in range(n)]

    start = coset_index(group.identity)
    order = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for name in system.labels:
            for nxt in (bwd[name][v], fwd[name][v]):
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
    if len(order) != n:
        # cosets are always reachable when C generates G; guarded regardless
        order.extend(sorted(set(range(n)) - seen))
    new_index = {old: new for new, old in enumerate(order)}
    names = tuple(table.representatives[old].cycle_string() for old in order)
    succ = {
        name: tuple(new_index[fwd[name][old]] for old in order)
        for name in system.labels
    }
    return SchreierGraph(vertex_names=names, labels=system.labels, succ=succ)


@dataclass(frozen=True)
class CycleDecomposition:
    label: str
    cycles: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]  # sorted multiset


def label_cycles(graph: SchreierGraph, label: str) -> CycleDecomposition:
    """Cycle decomposition of the label's successor permutation.

    Cycles start at their minimal vertex and are listed by that vertex."""
    if label not in graph.succ:
        raise KeyError(f"unknown label {label!r}")
    s = graph.succ[label]
    seen = [False] * len(s)
    cycles = []
    for start in range(len(s)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        v = s[start]
        while v != start:
            cyc.append(v)
            seen[v] = True
            v = s[v]
        cycles.append(tuple(cyc))
    return CycleDecomposition(
        label=label,
        cycles=tuple(cycles),
        lengths=tuple(sorted(len(c) for c in cycles)),
    )


NO_LONG_CYCLE = "NoLongCycle"
MULTIPLE_LONG_CYCLES = "MultipleLongCycles"
CYCLE_TOO_LONG = "CycleTooLong"


@dataclass(frozen=True)
class LabelVerdict:
    label: str
    admissible: bool
    cycle: Optional[tuple[int, ...]]  # the unique 3/4-cycle, oriented along succ
    reason: Optional[str]


@dataclass(frozen=True)
class AdmissibilityReport:
    verdicts: tuple[LabelVerdict, ...]

    def __getitem__(self, label: str) -> LabelVerdict:
        for v in self.verdicts:
            if v.label == label:
                return v
        raise KeyError(label)

    @property
    def admissible_labels(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.verdicts if v.admissible)


def classify_labels(graph: SchreierGraph) -> AdmissibilityReport:
    """Admissible/inadmissible verdict for every label.

    A label is admissible iff exactly one of its cycles has length >= 3 and
    that cycle has length 3 or 4.  The inadmissibility reasons mirror the
    three failure modes: everything short, several long cycles, or one cycle
    of length >= 5.
    """
    verdicts = []
    for label in graph.labels:
        dec = label_cycles(graph, label)
        long_cycles = [c for c in dec.cycles if len(c) >= 3]
        if not long_cycles:
            verdicts.append(LabelVerdict(label, False, None, NO_LONG_CYCLE))
        elif len(long_cycles) > 1:
            verdicts.append(LabelVerdict(label, False, None, MULTIPLE_LONG_CYCLES))
        elif len(long_cycles[0]) > 4:
            verdicts.append(LabelVerdict(label, False, None, CYCLE_TOO_LONG))
        else:
            verdicts.append(LabelVerdict(label, True, long_cycles[0], None))
    return AdmissibilityReport(verdicts=tuple(verdicts))


EXACT_LABELS = "exact-labels"
ALLOW_LABEL_PERMUTATION = "allow-label-permutation"


def digraph_isomorphic(
    g1: SchreierGraph,
    g2: SchreierGraph,
    mode: str = EXACT_LABELS,
) -> Optional[tuple[tuple[int, ...], dict[str, str]]]:
    """Exhaustive search for a labeled-digraph isomorphism g1 -> g2.

    Returns (vertex_map, label_map) for the first witness in lexicographic
    order (label bijections outer, vertex bijections inner), or None.  A
    witness satisfies  succ2[label_map[l]][vertex_map[v]] ==
    vertex_map[succ1[l][v]]  for every vertex and label.
    """
    if mode not in (EXACT_LABELS, ALLOW_LABEL_PERMUTATION):
        raise ValueError(f"unknown mode {mode!r}")
    if g1.vertex_count != g2.vertex_count:
        return None
    if len(g1.labels) != len(g2.labels):
        return None
    n = g1.vertex_count
    if mode == EXACT_LABELS:
        if set(g1.labels) != set(g2.labels):
            return None
        label_maps = [{l: l for l in g1.labels}]
    else:
        label_maps = [
            dict(zip(g1.labels, target))
            for target in itertools.permutations(g2.labels)
        ]
    for lmap in label_maps:
        # cycle-type screen before the factorial sweep
        if any(
            label_cycles(g1, l).lengths != label_cycles(g2, lmap[l]).lengths
            for l in g1.labels
        ):
            continue
        succ_pairs = [(g1.succ[l], g2.succ[lmap[l]]) for l in g1.labels]
        for perm in itertools.permutations(range(n)):
            if all(
                perm[s1[v]] == s2[perm[v]]
                for s1, s2 in succ_pairs
                for v in range(n)
            ):
                return tuple(perm), lmap
    return None


_DOT_STYLES = ("solid", "dashed", "dotted", "bold")
_DOT_COLORS = ("black", "gray40", "blue", "red4")


def export_dot(graph: SchreierGraph) -> str:
    """Graphviz DOT rendering with one edge style per label."""
    lines = ["digraph schreier {"]
    for i, name in enumerate(graph.vertex_names):
        lines.append(f'  n{i} [label="{name}"];')
    for k, label in enumerate(graph.labels):
        style = _DOT_STYLES[k % len(_DOT_STYLES)]
        color = _DOT_COLORS[k % len(_DOT_COLORS)]
        for v, w in enumerate(graph.succ[label]):
            lines.append(
                f'  n{v} -> n{w} [label="{label}", style={style}, color={color}];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
