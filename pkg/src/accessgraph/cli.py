"""Command-line interface.

Subcommands: validate, score, explain, what-if, convert, batch, serve.
Exit codes: 0 success, 1 validation or analysis failure, 2 usage error.
Scores print as exact rationals, with a decimal alongside when
fractional; --json switches every subcommand to a stable JSON report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .accessibility import (
    LEGACY_SCORE_LABEL,
    accessibility_report,
    account_report,
    analyze_account,
    human_score,
    narrative,
    render_score,
    variable_labels,
    what_if,
)
from .errors import AagError
from .formulas import UnmappedLeafPolicy, render_dnf, render_formula
from .graph import build_graph, serialize_graph
from .providers import (
    batch_analyze_rows,
    cohort_report_json,
    instantiate_user_graph,
    read_survey,
)
from .security import ScoringPolicy

POLICY_ENV_VAR = "ACCESSGRAPH_POLICY"


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except AagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accessgraph",
        description="Analyze account access graphs: security, lockout risk, what-if loss.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("graph", help="graph document (JSON file)")
        p.add_argument("--strict", action="store_true",
                       help="reject unknown document fields instead of warning")

    def analysis_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--account", required=True, help="account node id to analyze")
        p.add_argument("--policy", help=f"scoring policy JSON (default ${POLICY_ENV_VAR})")
        p.add_argument("--leaf-policy", choices=[p.value for p in UnmappedLeafPolicy],
                       default=UnmappedLeafPolicy.ABSTRACT.value,
                       help="treatment of leaves without access methods")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("validate", help="check a graph document")
    graph_flags(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("score", help="security / accessibility scores for one account")
    graph_flags(p)
    analysis_flags(p)
    p.add_argument("--security", action="store_true", help="print the security level")
    p.add_argument("--accessibility", action="store_true", help="print the accessibility score")
    p.add_argument("--legacy", action="store_true",
                   help="print the pre-reduction score (reconstructed)")
    p.set_defaults(handler=_cmd_score)

    p = sub.add_parser("explain", help="reduced term, lockout sets, narrative")
    graph_flags(p)
    analysis_flags(p)
    p.set_defaults(handler=_cmd_explain)

    p = sub.add_parser("what-if", help="outcome of losing given access methods")
    graph_flags(p)
    analysis_flags(p)
    p.add_argument("--lose", required=True,
                   help="comma-separated access-method ids to treat as lost")
    p.set_defaults(handler=_cmd_what_if)

    p = sub.add_parser("convert", help="survey rows to one graph document per user")
    p.add_argument("--survey", required=True, help="survey file (CSV or JSON lines)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=_cmd_convert)

    p = sub.add_parser("batch", help="analyze a survey cohort into one report")
    p.add_argument("--survey", required=True, help="survey file (CSV or JSON lines)")
    p.add_argument("--report", required=True, help="report output path ('-' for stdout)")
    p.add_argument("--policy", help=f"scoring policy JSON (default ${POLICY_ENV_VAR})")
    p.add_argument("--leaf-policy", choices=[p.value for p in UnmappedLeafPolicy],
                   default=UnmappedLeafPolicy.ABSTRACT.value)
    p.set_defaults(handler=_cmd_batch)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--policy", help=f"scoring policy JSON (default ${POLICY_ENV_VAR})")
    p.set_defaults(handler=_cmd_serve)

    return parser


def _load_graph(args: argparse.Namespace):
    graph = build_graph(Path(args.graph).read_text(encoding="utf-8"),
                        strict=getattr(args, "strict", False))
    for warning in graph.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return graph


def _load_policy(args: argparse.Namespace) -> ScoringPolicy:
    path = getattr(args, "policy", None) or os.environ.get(POLICY_ENV_VAR)
    if not path:
        return ScoringPolicy()
    return ScoringPolicy.from_document(Path(path).read_text(encoding="utf-8"))


def _leaf_policy(args: argparse.Namespace) -> UnmappedLeafPolicy:
    return UnmappedLeafPolicy(getattr(args, "leaf_policy", "abstract"))


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False))


def _cmd_validate(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    if args.json:
        _emit_json({
            "ok": True,
            "nodes": len(graph.nodes),
            "edges": len(graph.edges),
            "roots": list(graph.roots),
            "warnings": list(graph.warnings),
        })
    else:
        print(f"ok: {len(graph.nodes)} nodes, {len(graph.edges)} edges, "
              f"{len(graph.roots)} root(s)")
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    analysis = analyze_account(
        graph, args.account,
        scoring_policy=_load_policy(args), leaf_policy=_leaf_policy(args),
    )
    selected = [
        name
        for name, on in (
            ("security", args.security),
            ("accessibility", args.accessibility),
            ("legacy", args.legacy),
        )
        if on
    ] or ["security", "accessibility", "legacy"]

    if args.json:
        _emit_json(account_report(analysis, include_legacy="legacy" in selected))
        return 0

    values = {
        "security": analysis.security.token,
        "accessibility": human_score(analysis.result.score),
        "legacy": human_score(analysis.legacy_score),
    }
    if len(selected) == 1:
        print(values[selected[0]])
    else:
        labels = {"legacy": LEGACY_SCORE_LABEL}
        for name in selected:
            print(f"{labels.get(name, name)}: {values[name]}")
    return 0


def _cmd_explain(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    analysis = analyze_account(
        graph, args.account,
        scoring_policy=_load_policy(args), leaf_policy=_leaf_policy(args),
    )
    if args.json:
        _emit_json(account_report(analysis, include_legacy=True))
        return 0
    labels = analysis.variable_labels
    print(f"formula: {render_formula(analysis.formula, labels)}")
    print(f"reduced: {render_dnf(analysis.result.reduced, labels)}")
    print(f"security: {analysis.security.token}")
    print(f"accessibility: {human_score(analysis.result.score)}")
    print("lockout sets:")
    for lockout in analysis.result.lockout_sets:
        print("  - " + ", ".join(sorted(labels[v] for v in lockout)))
    print(analysis.narrative)
    return 0


def _cmd_what_if(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    lost = {part.strip() for part in args.lose.split(",") if part.strip()}
    outcome = what_if(graph, args.account, lost, _leaf_policy(args))
    if args.json:
        surviving = narrative(
            outcome.result, variable_labels(graph),
            account_label=graph.node(args.account).label,
        )
        _emit_json({
            "account": args.account,
            "lost": sorted(outcome.lost),
            "accessible": outcome.accessible,
            "accessibility": accessibility_report(outcome.result, surviving),
        })
        return 0
    print("accessible" if outcome.accessible else "inaccessible")
    if outcome.accessible:
        print(f"score after loss: {human_score(outcome.result.score)}")
    return 0


def _cmd_convert(args: argparse.Namespace) -> int:
    rows = read_survey(Path(args.survey).read_text(encoding="utf-8"))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = 0
    failed = 0
    for row in rows:
        if row.record is None:
            print(f"error: row {row.index}: {row.error}", file=sys.stderr)
            failed += 1
            continue
        try:
            graph = instantiate_user_graph(row.record)
        except AagError as exc:
            print(f"error: row {row.index}: {exc}", file=sys.stderr)
            failed += 1
            continue
        path = out_dir / f"user-{row.index:03d}.json"
        path.write_text(
            json.dumps(serialize_graph(graph), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        written += 1
    print(f"wrote {written} graph(s) to {out_dir}")
    return 1 if failed else 0


def _cmd_batch(args: argparse.Namespace) -> int:
    rows = read_survey(Path(args.survey).read_text(encoding="utf-8"))
    report = batch_analyze_rows(rows, _leaf_policy(args), _load_policy(args))
    payload = cohort_report_json(report)
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.report == "-":
        sys.stdout.write(text)
    else:
        Path(args.report).write_text(text, encoding="utf-8")
        aggregates = payload["aggregates"]
        print(f"analyzed {aggregates['count']} user(s), "
              f"{len(payload['errors'])} error row(s); report at {args.report}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(scoring_policy=_load_policy(args))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
