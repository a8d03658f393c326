"""Finite permutation groups: element arithmetic, closure, conjugacy, cosets.

Composition is left-to-right everywhere in this project: ``p * q`` means
"apply p first, then q", so ``(p * q)(x) == q(p(x))``.  All coset and
Schreier-action code depends on this convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapExceeded, SubgroupError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")

DEFAULT_CAP = 1_000_000


class Permutation:
    """A permutation of {0, ..., degree-1} stored as an image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(x) for x in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a bijection on 0..{len(imgs) - 1}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # apply self first, then other
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return Permutation(other.images[i] for i in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, img in enumerate(self.images):
            inv[img] = i
        return Permutation(inv)

    def order(self) -> int:
        k, p = 1, self
        while not p.is_identity():
            p = p * self
            k += 1
        return k

    def is_identity(self) -> bool:
        return all(i == img for i, img in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles as 0-based point tuples, each starting at its
        minimal point, ordered by that point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            p = self.images[start]
            while p != start:
                cyc.append(p)
                seen[p] = True
                p = self.images[p]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        """1-based disjoint-cycle notation, ``"e"`` for the identity."""
        cycs = self.cycles()
        if not cycs:
            return "e"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycs)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int) -> "Permutation":
        """Build from 0-based cycles."""
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:]):
                images[a] = b
            if cyc:
                images[cyc[-1]] = cyc[0]
        return cls(images)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse 1-based cycle notation like ``"(1 2 3)(4 5)"``.

        ``"e"``, ``"id"`` and ``"()"`` denote the identity.  Points may be
        separated by spaces or commas.
        """
        s = text.strip()
        if s in ("e", "id", "()", ""):
            return cls.identity(degree)
        consumed = "".join(_CYCLE_RE.findall(s))
        if re.sub(r"[\s(),]", "", s) != re.sub(r"[\s,]", "", consumed):
            raise ValueError(f"malformed cycle string: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(s):
            pts = [int(tok) for tok in re.split(r"[,\s]+", body.strip()) if tok]
            if not pts:
                continue
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle: {text!r}")
            if any(p < 1 or p > degree for p in pts):
                raise ValueError(f"point out of range 1..{degree}: {text!r}")
            cycles.append([p - 1 for p in pts])
        flat = [p for c in cycles for p in c]
        if len(set(flat)) != len(flat):
            raise ValueError(f"cycles are not disjoint: {text!r}")
        return cls.from_cycles(cycles, degree)

    def to_one_based(self) -> list[int]:
        return [i + 1 for i in self.images]

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> "Permutation":
        return cls(i - 1 for i in images)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r})"


def parse_permutation(value, degree: int) -> Permutation:
    """Accept either a cycle string or a 1-based image array."""
    if isinstance(value, str):
        return Permutation.parse(value, degree)
    if isinstance(value, (list, tuple)):
        if len(value) != degree:
            raise ValueError(f"image array has length {len(value)}, expected {degree}")
        return Permutation.from_one_based(value)
    raise ValueError(f"cannot interpret {value!r} as a permutation")


@dataclass(frozen=True)
class FiniteGroup:
    """A fully enumerated permutation group.

    ``elements`` is ordered breadth-first from the identity (generator order,
    lexicographic tie-break inside each layer), which makes every derived
    artifact deterministic.
    """

    degree: int
    elements: tuple[Permutation, ...]
    generator_indices: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> dict[Permutation, int]:
        cached = getattr(self, "_index_cache", None)
        if cached is None:
            cached = {p: i for i, p in enumerate(self.elements)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def __contains__(self, perm: Permutation) -> bool:
        return perm in self.index

    def index_of(self, perm: Permutation) -> int:
        return self.index[perm]

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return tuple(self.elements[i] for i in self.generator_indices)

    @property
    def identity(self) -> Permutation:
        return self.elements[0]


def generate_group(gens: Sequence[Permutation], cap: int = DEFAULT_CAP) -> FiniteGroup:
    """BFS closure of ``gens`` under left-to-right composition.

    Element order: identity first, then layer by layer, each new layer sorted
    by image tuple.  Raises CapExceeded if the closure passes ``cap``.
    """
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators have mixed degrees")
    ident = Permutation.identity(degree)
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = p * g
                if q not in seen:
                    seen.add(q)
                    new.append(q)
                    if len(seen) > cap:
                        raise CapExceeded(f"group closure exceeded cap of {cap}")
        new.sort()
        elements.extend(new)
        frontier = new
    index = {p: i for i, p in enumerate(elements)}
    return FiniteGroup(
        degree=degree,
        elements=tuple(elements),
        generator_indices=tuple(index[g] for g in gens),
    )


def element_order(p: Permutation) -> int:
    return p.order()


def enumerate_subgroup(group: FiniteGroup, gens: Sequence[Permutation]) -> frozenset[int]:
    """Element indices of the subgroup generated by ``gens`` inside ``group``.

    Empty ``gens`` yields the trivial subgroup."""
    for g in gens:
        if g not in group:
            raise SubgroupError(f"generator {g.cycle_string()} is not in the group")
    idx = group.index
    ident = group.identity
    seen = {idx[ident]}
    frontier = [ident]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = p * g
                qi = idx[q]
                if qi not in seen:
                    seen.add(qi)
                    new.append(q)
        frontier = new
    return frozenset(seen)


def conjugacy_classes(group: FiniteGroup) -> list[tuple[int, ...]]:
    """Partition of element indices into conjugacy classes.

    Classes are ordered by their minimal element index; each class is sorted.
    Orbits are grown by conjugating with the stored generators, which must
    generate the group (true for anything built by generate_group).
    """
    idx = group.index
    assigned = [False] * group.order
    classes = []
    for i, x in enumerate(group.elements):
        if assigned[i]:
            continue
        orbit = {i}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in group.generators:
                z = g.inverse() * y * g
                zi = idx[z]
                if zi not in orbit:
                    orbit.add(zi)
                    frontier.append(group.elements[zi])
        for j in orbit:
            assigned[j] = True
        classes.append(tuple(sorted(orbit)))
    return classes


@dataclass(frozen=True)
class CosetTable:
    """Right cosets Hg of a subgroup, with canonical representatives.

    The canonical representative of a coset is its lexicographically minimal
    image array.  ``coset_of_element[i]`` is the coset index of group element
    ``i``; representatives are ordered by first appearance in the group's
    element order.
    """

    representatives: tuple[Permutation, ...]
    coset_of_element: tuple[int, ...]
    subgroup_order: int

    @property
    def count(self) -> int:
        return len(self.representatives)

    def index_of(self, group: FiniteGroup, perm: Permutation) -> int:
        return self.coset_of_element[group.index_of(perm)]


def right_cosets(group: FiniteGroup, h_gens: Sequence[Permutation]) -> CosetTable:
    h_indices = enumerate_subgroup(group, h_gens)
    h_elems = [group.elements[i] for i in h_indices]
    coset_of = [-1] * group.order
    reps = []
    idx = group.index
    for i, g in enumerate(group.elements):
        if coset_of[i] != -1:
            continue
        members = [h * g for h in h_elems]
        rep = min(members)
        ci = len(reps)
        reps.append(rep)
        for m in members:
            coset_of[idx[m]] = ci
    return CosetTable(
        representatives=tuple(reps),
        coset_of_element=tuple(coset_of),
        subgroup_order=len(h_elems),
    )


@dataclass(frozen=True)
class ClassCount:
    """One conjugacy class of the ambient group with subgroup intersections."""

    representative: str
    size: int
    in_h1: int
    in_h2: int


def almost_conjugate(
    group: FiniteGroup,
    h1_gens: Sequence[Permutation],
    h2_gens: Sequence[Permutation],
) -> tuple[bool, list[ClassCount]]:
    """Whether every conjugacy class meets both subgroups equally often.

    Returns the verdict together with the full per-class count table.
    """
    h1 = enumerate_subgroup(group, h1_gens)
    h2 = enumerate_subgroup(group, h2_gens)
    table = []
    ok = True
    for cls in conjugacy_classes(group):
        members = set(cls)
        c1 = len(members & h1)
        c2 = len(members & h2)
        table.append(
            ClassCount(
                representative=group.elements[cls[0]].cycle_string(),
                size=len(cls),
                in_h1=c1,
                in_h2=c2,
            )
        )
        if c1 != c2:
            ok = False
    return ok, table
