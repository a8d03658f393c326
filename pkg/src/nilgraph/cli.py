"""Command-line interface.

Subcommands take a problem-spec file and emit JSON (or DOT) on stdout or to
--out.  Exit codes: 0 verdict/artifact produced, 2 validation error,
3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .errors import NilgraphError, SpecError
from .gassmann import (
    extend_two_step_isometry,
    intertwiner_basis,
    orthogonal_intertwiner,
    verify_transplant,
)
from .groups import almost_conjugate
from .isometry import SearchConfig, search_isometry
from .lie import TAssignment, central_series, three_step, two_step, verify_jacobi
from .schreier import build_schreier, classify_labels, export_dot
from .specio import ProblemSpec, SubgroupSpec, parse_spec


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_spec(args) -> ProblemSpec:
    path = Path(args.spec)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read spec file: {exc}")
    hint = "json" if path.suffix == ".json" else "toml" if path.suffix == ".toml" else None
    return parse_spec(text, format_hint=hint)


def _display_names(graph, sub: SubgroupSpec) -> list[str]:
    return [sub.vertex_names.get(name, name) for name in graph.vertex_names]


def _graph_for(spec: ProblemSpec, sub: SubgroupSpec):
    group = spec.group()
    return group, build_schreier(group, list(sub.generators), spec.system)


def _t_assignment_for(args, sub: SubgroupSpec) -> Optional[TAssignment]:
    choice = getattr(args, "t_assignment", "generic")
    if choice == "generic":
        return None  # three_step defaults to the generic assignment
    if choice == "paper":
        if sub.t_assignment is None:
            raise SpecError(
                f"subgroup {sub.name!r} has no pinned t_assignment in the spec file"
            )
        return sub.t_assignment
    try:
        data = json.loads(Path(choice).read_text(encoding="utf-8"))
        if isinstance(data, dict) and sub.name in data:
            data = data[sub.name]
        return TAssignment.from_json(json.dumps(data))
    except OSError as exc:
        raise SpecError(f"cannot read t-assignment file: {exc}")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad t-assignment file {choice!r}: {exc}")


def cmd_graph(args) -> int:
    spec = _load_spec(args)
    sub = spec.subgroup(args.subgroup)
    _, graph = _graph_for(spec, sub)
    if args.format == "dot":
        _emit(export_dot(graph), args.out)
    else:
        _emit(graph.to_json() + "\n", args.out)
    return 0


def cmd_classify(args) -> int:
    spec = _load_spec(args)
    sub = spec.subgroup(args.subgroup)
    _, graph = _graph_for(spec, sub)
    names = _display_names(graph, sub)
    report = classify_labels(graph)
    payload = {
        "labels": {
            v.label: {
                "admissible": v.admissible,
                "cycle": [names[i] for i in v.cycle] if v.cycle else None,
                "reason": v.reason,
            }
            for v in report.verdicts
        }
    }
    _emit(_dump(payload), args.out)
    return 0


def cmd_algebra(args) -> int:
    spec = _load_spec(args)
    sub = spec.subgroup(args.subgroup)
    _, graph = _graph_for(spec, sub)
    if args.step == 2:
        algebra = two_step(graph)
    else:
        algebra = three_step(graph, _t_assignment_for(args, sub))
    _emit(algebra.to_json() + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    spec = _load_spec(args)
    sub = spec.subgroup(args.subgroup)
    _, graph = _graph_for(spec, sub)
    if args.step == 2:
        algebra = two_step(graph)
    else:
        algebra = three_step(graph, _t_assignment_for(args, sub))
    violations = verify_jacobi(algebra)
    series = central_series(algebra)
    payload = {
        "jacobi": "pass" if not violations else "fail",
        "jacobi_violations": [
            {"triple": list(v[:3]), "residual": {str(k): str(c) for k, c in v[3].items()}}
            for v in violations
        ],
        "step": series.step,
        "descending_dims": list(series.descending_dims),
        "ascending_dims": list(series.ascending_dims),
    }
    _emit(_dump(payload), args.out)
    return 0


def _require_two_subgroups(spec: ProblemSpec) -> tuple[SubgroupSpec, SubgroupSpec]:
    if len(spec.subgroups) != 2:
        raise SpecError("this command needs a spec with exactly two subgroups")
    return spec.subgroups


def cmd_gassmann(args) -> int:
    spec = _load_spec(args)
    sub1, sub2 = _require_two_subgroups(spec)
    group = spec.group()
    ok, table = almost_conjugate(group, list(sub1.generators), list(sub2.generators))
    payload = {
        "almost_conjugate": ok,
        "class_table": [
            {
                "representative": row.representative,
                "size": row.size,
                "in_h1": row.in_h1,
                "in_h2": row.in_h2,
            }
            for row in table
        ],
    }
    basis, g1, g2 = intertwiner_basis(
        group, list(sub1.generators), list(sub2.generators), spec.system
    )
    payload["intertwiner_dim"] = len(basis)
    t = orthogonal_intertwiner(basis)
    payload["orthogonal_exact"] = t.exact
    a1, a2 = two_step(g1), two_step(g2)
    report = verify_transplant(t, g1, g2, a1, a2)
    payload["transplant_ok"] = report.ok
    payload["alpha_residuals"] = {k: str(v) for k, v in report.alpha_residuals.items()}
    payload["j_residuals"] = {k: str(v) for k, v in report.j_residuals.items()}
    ext = extend_two_step_isometry(t, a1, a2)
    payload["isometry_residual"] = "0"  # extension verified exactly or raised
    payload["extended_map_exact"] = ext.exact
    _emit(_dump(payload), args.out)
    return 0


def cmd_isometry(args) -> int:
    spec = _load_spec(args)
    sub1, sub2 = _require_two_subgroups(spec)
    group = spec.group()
    g1 = build_schreier(group, list(sub1.generators), spec.system)
    g2 = build_schreier(group, list(sub2.generators), spec.system)
    if args.step == 2:
        a1, a2 = two_step(g1), two_step(g2)
    else:
        a1 = three_step(g1, _t_assignment_for(args, sub1))
        a2 = three_step(g2, _t_assignment_for(args, sub2))
    cfg = SearchConfig(
        seed=args.seed if args.seed is not None else spec.search.seed,
        restarts=args.restarts if args.restarts is not None else spec.search.restarts,
        max_iterations=spec.search.max_iterations,
        tolerance=spec.search.tolerance,
    )
    result = search_isometry(a1, a2, cfg)
    _emit(result.to_json() + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilgraph",
        description="Nilpotent Lie algebras from Schreier graphs: build, "
        "verify, and compare.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, step=False, t_assign=False, single_subgroup=True):
        p.add_argument("--spec", required=True, help="problem spec file (TOML or JSON)")
        p.add_argument("--out", help="write output here instead of stdout")
        if single_subgroup:
            p.add_argument(
                "--subgroup",
                help="subgroup name or index (default: the first one)",
            )
        if step:
            p.add_argument("--step", type=int, choices=(2, 3), default=2)
        if t_assign:
            p.add_argument(
                "--t-assignment",
                default="generic",
                help="'generic' (default), 'paper' (pinned in the spec file), "
                "or a JSON file",
            )

    p = sub.add_parser("graph", help="build the Schreier graph")
    common(p)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("classify", help="admissible/inadmissible label report")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("algebra", help="structure-constant tensor as JSON")
    common(p, step=True, t_assign=True)
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("verify", help="Jacobi check and central series")
    common(p, step=True, t_assign=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "gassmann", help="almost-conjugacy, intertwiner, and extended isometry"
    )
    common(p, single_subgroup=False)
    p.set_defaults(func=cmd_gassmann)

    p = sub.add_parser("isometry", help="fingerprints and block-orthogonal search")
    common(p, step=True, t_assign=True, single_subgroup=False)
    p.add_argument("--seed", type=int, default=None, help="override the spec's seed")
    p.add_argument(
        "--restarts", type=int, default=None, help="override the spec's restart count"
    )
    p.set_defaults(func=cmd_isometry)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NilgraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
