"""Problem-spec files: TOML for humans, JSON for machines.

A spec names the group degree, the labeled half C_pos of the generating
set, one or two subgroups (each optionally carrying a pinned vertex-renaming
table and a t-assignment), and optional search settings.  Unknown fields are
rejected; errors carry the offending field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .errors import IdentityInGenerators, InvolutionInGenerators, SpecError
from .groups import FiniteGroup, Permutation, generate_group, parse_permutation
from .lie import TAssignment
from .schreier import GeneratorSystem

SPEC_VERSION = 1

_TOP_KEYS = {"version", "degree", "cap", "c_pos", "subgroups", "search"}
_CPOS_KEYS = {"label", "perm"}
_SUBGROUP_KEYS = {"name", "generators", "vertex_names", "t_assignment"}
_TASSIGN_KEYS = {"t_dim", "names", "labels"}
_SEARCH_KEYS = {"seed", "restarts", "max_iterations", "tolerance"}


@dataclass(frozen=True)
class SubgroupSpec:
    name: str
    generators: tuple[Permutation, ...]
    vertex_names: dict[str, str] = field(default_factory=dict)
    t_assignment: Optional[TAssignment] = None


@dataclass(frozen=True)
class SearchSpec:
    seed: int = 1
    restarts: int = 200
    max_iterations: int = 2000
    tolerance: float = 1e-12


@dataclass(frozen=True)
class ProblemSpec:
    degree: int
    system: GeneratorSystem
    subgroups: tuple[SubgroupSpec, ...]
    search: SearchSpec
    cap: int = 1_000_000

    def group(self) -> FiniteGroup:
        return generate_group(list(self.system.perms), cap=self.cap)

    def subgroup(self, selector: Optional[str]) -> SubgroupSpec:
        if selector is None:
            return self.subgroups[0]
        for sub in self.subgroups:
            if sub.name == selector:
                return sub
        try:
            return self.subgroups[int(selector)]
        except (ValueError, IndexError):
            raise SpecError(f"no subgroup named {selector!r}")


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise SpecError(f"unknown field(s) {sorted(unknown)}", location=where)


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise SpecError(f"missing required field {key!r}", location=where)
    return mapping[key]


def _parse_perm(value, degree: int, where: str) -> Permutation:
    try:
        return parse_permutation(value, degree)
    except (ValueError, TypeError) as exc:
        raise SpecError(str(exc), location=where)


def _parse_t_assignment(data: dict, where: str) -> TAssignment:
    if not isinstance(data, dict):
        raise SpecError("t_assignment must be a table", location=where)
    _reject_unknown(data, _TASSIGN_KEYS, where)
    t_dim = _require(data, "t_dim", where)
    labels = _require(data, "labels", where)
    if not isinstance(t_dim, int) or t_dim < 1:
        raise SpecError("t_dim must be a positive integer", location=where)
    if not isinstance(labels, dict):
        raise SpecError("labels must be a table", location=where)
    slots = {}
    for label, pair in labels.items():
        loc = f"{where}.labels.{label}"
        if not isinstance(pair, dict) or set(pair) != {"t1", "t2"}:
            raise SpecError("expected exactly the keys t1 and t2", location=loc)
        if not isinstance(pair["t1"], list) or not isinstance(pair["t2"], list):
            raise SpecError("t1 and t2 must be arrays of rationals", location=loc)
        try:
            t1 = [Fraction(str(x)) for x in pair["t1"]]
            t2 = [Fraction(str(x)) for x in pair["t2"]]
        except (ValueError, TypeError) as exc:
            raise SpecError(f"bad rational: {exc}", location=loc)
        slots[label] = (t1, t2)
    names = tuple(data.get("names", ()))
    return TAssignment.from_slots(t_dim, slots, names=names)


def parse_spec_data(data: dict) -> ProblemSpec:
    if not isinstance(data, dict):
        raise SpecError("spec must be a table/object")
    _reject_unknown(data, _TOP_KEYS, "top level")
    version = _require(data, "version", "top level")
    if version != SPEC_VERSION:
        raise SpecError(f"unsupported version {version!r} (expected {SPEC_VERSION})")
    degree = _require(data, "degree", "top level")
    if not isinstance(degree, int) or degree < 1:
        raise SpecError("degree must be a positive integer", location="degree")
    cap = data.get("cap", 1_000_000)
    if not isinstance(cap, int) or cap < 1:
        raise SpecError("cap must be a positive integer", location="cap")

    c_pos_raw = _require(data, "c_pos", "top level")
    if not isinstance(c_pos_raw, list) or not c_pos_raw:
        raise SpecError("c_pos must be a nonempty array of tables", location="c_pos")
    pairs = []
    seen_labels = set()
    for i, entry in enumerate(c_pos_raw):
        where = f"c_pos[{i}]"
        if not isinstance(entry, dict):
            raise SpecError("entry must be a table", location=where)
        _reject_unknown(entry, _CPOS_KEYS, where)
        label = str(_require(entry, "label", where))
        if label in seen_labels:
            raise SpecError(f"duplicate label {label!r}", location=where)
        seen_labels.add(label)
        perm = _parse_perm(_require(entry, "perm", where), degree, where)
        # structural generator errors surface here with their field location
        if perm.is_identity():
            raise IdentityInGenerators(f"{where}.perm: label {label} is the identity")
        if perm == perm.inverse():
            raise InvolutionInGenerators(f"{where}.perm: label {label} has order 2")
        pairs.append((label, perm))
    system = GeneratorSystem(pairs=tuple(pairs))

    subgroups_raw = _require(data, "subgroups", "top level")
    if not isinstance(subgroups_raw, list) or not 1 <= len(subgroups_raw) <= 2:
        raise SpecError(
            "subgroups must be an array of one or two tables", location="subgroups"
        )
    subgroups = []
    for i, entry in enumerate(subgroups_raw):
        where = f"subgroups[{i}]"
        if not isinstance(entry, dict):
            raise SpecError("entry must be a table", location=where)
        _reject_unknown(entry, _SUBGROUP_KEYS, where)
        name = str(entry.get("name", f"H{i + 1}"))
        gens_raw = entry.get("generators", [])
        if not isinstance(gens_raw, list):
            raise SpecError("generators must be an array", location=where)
        gens = tuple(
            _parse_perm(g, degree, f"{where}.generators[{k}]")
            for k, g in enumerate(gens_raw)
        )
        names_raw = entry.get("vertex_names", {})
        if not isinstance(names_raw, dict):
            raise SpecError("vertex_names must be a table", location=where)
        vertex_names = {str(k): str(v) for k, v in names_raw.items()}
        t_assignment = None
        if "t_assignment" in entry:
            t_assignment = _parse_t_assignment(
                entry["t_assignment"], f"{where}.t_assignment"
            )
        subgroups.append(
            SubgroupSpec(
                name=name,
                generators=gens,
                vertex_names=vertex_names,
                t_assignment=t_assignment,
            )
        )
    names = [s.name for s in subgroups]
    if len(set(names)) != len(names):
        raise SpecError("subgroup names must be distinct", location="subgroups")

    search_raw = data.get("search", {})
    if not isinstance(search_raw, dict):
        raise SpecError("search must be a table", location="search")
    _reject_unknown(search_raw, _SEARCH_KEYS, "search")
    try:
        search = SearchSpec(
            seed=int(search_raw.get("seed", 1)),
            restarts=int(search_raw.get("restarts", 200)),
            max_iterations=int(search_raw.get("max_iterations", 2000)),
            tolerance=float(search_raw.get("tolerance", 1e-12)),
        )
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad search settings: {exc}", location="search")
    return ProblemSpec(
        degree=degree, system=system, subgroups=tuple(subgroups), search=search, cap=cap
    )


def parse_spec(text: str, format_hint: Optional[str] = None) -> ProblemSpec:
    """Parse a TOML or JSON problem spec.

    The format is taken from ``format_hint`` ("toml" or "json") when given,
    otherwise guessed: leading '{' means JSON.
    """
    fmt = format_hint
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "toml"
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"JSON syntax error: {exc}")
    elif fmt == "toml":
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise SpecError(f"TOML syntax error: {exc}")
    else:
        raise SpecError(f"unknown spec format {fmt!r}")
    return parse_spec_data(data)
