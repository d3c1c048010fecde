"""Command-line surface.

Every command builds a JSON-serializable report ``{"command": ..., "data":
...}``; the text rendering is a pure function of that report.  Exit codes:
0 success, 1 analysis-negative (for example no injection exists), 2 usage or
input error, 3 search budget exhausted without a verdict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import cells as cells_mod
from . import dsl, embedding, semantics, yablo
from .embedding import BareDag, Injection, SearchConfig, SearchOutcome
from .formula import DnfSizeError, FormulaError, Sign, TruthValue3, dnf_str, to_dnf
from .graph import (
    GraphError,
    RefGraph,
    contradiction_loop_check,
    enumerate_paths,
    find_contradictory_cells,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

SINK_LIMIT_ENV = "REFGRAPH_SINK_LIMIT"


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "refgraph report",
    "type": "object",
    "required": ["command", "data"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "data": {"type": "object"},
        "error": {"type": "string"},
    },
    "allOf": [
        {
            "if": {"properties": {"command": {"const": "check"}}, "required": ["command"]},
            "then": {
                "properties": {
                    "data": {
                        "required": ["node", "status"],
                        "properties": {
                            "node": {"type": "string"},
                            "status": {"enum": ["C1Holds", "C2Holds", "Open"]},
                        },
                    }
                }
            },
        },
        {
            "if": {
                "properties": {"command": {"const": "classify-variants"}},
                "required": ["command"],
            },
            "then": {
                "properties": {
                    "data": {
                        "required": ["rows", "all_ok"],
                        "properties": {
                            "rows": {
                                "type": "array",
                                "minItems": 18,
                                "maxItems": 18,
                                "items": {
                                    "type": "object",
                                    "required": ["variant", "c221", "c222", "c224", "x_value"],
                                },
                            },
                            "all_ok": {"type": "array", "items": {"type": "string"}},
                        },
                    }
                }
            },
        },
        {
            "if": {"properties": {"command": {"const": "inject"}}, "required": ["command"]},
            "then": {
                "properties": {
                    "data": {
                        "required": ["outcome", "explored"],
                        "properties": {
                            "outcome": {"enum": ["found", "absent", "inconclusive"]},
                            "explored": {"type": "integer"},
                        },
                    }
                }
            },
        },
        {
            "if": {
                "properties": {"command": {"const": "replay-construction"}},
                "required": ["command"],
            },
            "then": {
                "properties": {
                    "data": {
                        "required": ["ledger"],
                        "properties": {"ledger": {"type": "array"}},
                    }
                }
            },
        },
    ],
}


def _sink_limit(args) -> int | None:
    if getattr(args, "sink_limit", None) is not None:
        return args.sink_limit
    env = os.environ.get(SINK_LIMIT_ENV)
    return int(env) if env else None


def _load_ref(path: str) -> RefGraph:
    g = dsl.load_graph(_read(path))
    if not isinstance(g, RefGraph):
        raise GraphError("this command needs a reference graph, not a bare one")
    return g


def _load_any(path: str):
    return dsl.load_graph(_read(path))


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _tv(text: str) -> TruthValue3:
    try:
        return {"T": TruthValue3.T, "F": TruthValue3.F, "xi": TruthValue3.XI}[text]
    except KeyError:
        raise ValueError(f"truth value must be T, F, or xi, got {text!r}") from None


def _assignment(text: str) -> dict[str, TruthValue3]:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        name, _, value = part.partition("=")
        if not value:
            raise ValueError(f"bad assignment entry {part!r}; use name=T|F|xi")
        out[name.strip()] = _tv(value.strip())
    return out


def _graph_payload(g) -> dict:
    return json.loads(dsl.document_to_json(dsl.graph_to_document(g)))


def injection_to_payload(inj: Injection) -> dict:
    return {
        "mu": {src: dst for src, dst in inj.mu},
        "paths": [
            {"pair": list(pair), "path": list(path)} for pair, path in inj.paths
        ],
        "valuation": [
            {"from": src, "to": dst, "sign": sign.value}
            for (src, dst), sign in inj.valuation
        ],
    }


def injection_from_payload(payload: dict) -> Injection:
    mu = tuple(sorted(payload["mu"].items(), key=lambda kv: int(kv[0][1:])))
    paths = tuple(
        sorted(
            ((tuple(row["pair"]), tuple(row["path"])) for row in payload["paths"]),
        )
    )
    valuation = tuple(
        sorted(
            ((row["from"], row["to"]), Sign(row["sign"])) for row in payload["valuation"]
        )
    )
    return Injection(mu, paths, valuation)


# --------------------------------------------------------------------------
# Command handlers


def _cmd_validate(args) -> tuple[dict, int]:
    g = _load_any(args.file)
    bare = isinstance(g, BareDag)
    sinks = sorted(n for n in g.nodes if not g.successors(n)) if bare else list(g.sinks)
    data = {
        "mode": "bare" if bare else "ref",
        "nodes": len(g.nodes),
        "arrows": len(g.arrows),
        "sinks": sinks,
        "ok": True,
    }
    return {"command": "validate", "data": data}, EXIT_OK


def _cmd_check(args) -> tuple[dict, int]:
    g = _load_ref(args.file)
    status = semantics.check_status(g, args.node, _sink_limit(args))
    data = {
        "node": args.node,
        "status": status.kind.value,
        "pos_witness": status.pos_witness,
        "neg_witness": status.neg_witness,
    }
    return {"command": "check", "data": data}, EXIT_OK


def _cmd_models(args) -> tuple[dict, int]:
    g = _load_ref(args.file)
    ms = semantics.models_of(g, args.node, args.polarity, _sink_limit(args), args.jobs)
    data = {
        "node": args.node,
        "polarity": args.polarity,
        "sinks": list(ms.sinks),
        "count": len(ms),
        "universe": ms.is_universe,
        "members": ms.assignments(),
    }
    return {"command": "models", "data": data}, EXIT_OK


def _cmd_expr(args) -> tuple[dict, int]:
    g = _load_ref(args.file)
    d = semantics.node_model_expression(g, args.node)
    data = {
        "node": args.node,
        "expression": dnf_str(d),
        "kind": semantics.expression_kind(d),
    }
    return {"command": "expr", "data": data}, EXIT_OK


def _cmd_eval3(args) -> tuple[dict, int]:
    g = _load_ref(args.file)
    values = semantics.eval3_graph(g, _assignment(args.assign))
    data = {"values": {n: str(v) for n, v in sorted(values.items())}}
    return {"command": "eval3", "data": data}, EXIT_OK


def _cmd_cells(args) -> tuple[dict, int]:
    g = _load_ref(args.file)
    paths = enumerate_paths(g, args.src, args.dst, args.max_len)
    found = [
        {
            "sigma": list(c.sigma.node_sequence()),
            "sigma_prime": list(c.sigma_prime.node_sequence()),
        }
        for c in find_contradictory_cells(g, args.src, args.dst, args.max_len)
    ]
    data = {
        "from": args.src,
        "to": args.dst,
        "paths": [list(p.node_sequence()) for p in paths],
        "cells": found,
    }
    if args.loop_check:
        report = contradiction_loop_check(paths)
        data["loop_check"] = {
            "contradicts": [list(e) for e in report.contradicts],
            "odd_cycle_witness": list(report.odd_cycle_witness)
            if report.odd_cycle_witness is not None
            else None,
        }
    return {"command": "cells", "data": data}, EXIT_OK


def _cmd_classify_variants(args) -> tuple[dict, int]:
    rows = []
    all_ok = []
    for report in cells_mod.classify_all():
        label = report.variant.label
        rows.append(
            {
                "variant": label,
                "c221": report.c221,
                "c222": report.c222,
                "c224": report.c224,
                "x_value": str(report.x_value3),
                "resolved": dnf_str(to_dnf(report.resolved_x))
                if report.resolved_x is not None
                else None,
                "all_ok": report.all_ok,
            }
        )
        if report.all_ok:
            all_ok.append(label)
    data = {"rows": rows, "all_ok": all_ok}
    return {"command": "classify-variants", "data": data}, EXIT_OK


def _cmd_build_yablo(args) -> tuple[dict, int]:
    g = yablo.yablo_truncation(args.n)
    payload = _graph_payload(g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dsl.document_to_json(dsl.graph_to_document(g)))
    data = {"n": args.n, "graph": payload}
    return {"command": "build-yablo", "data": data}, EXIT_OK


def _steps_from_payload(rows) -> list[yablo.BuildStep]:
    steps: list[yablo.BuildStep] = []
    for row in rows:
        kind = row.get("kind")
        if kind == "seed":
            steps.append(yablo.SeedTriangle())
        elif kind == "prepare":
            steps.append(yablo.PrepareC2(row["at"], row["new_sink"]))
        elif kind == "finish":
            steps.append(yablo.FinishC2(row["at"]))
        elif kind == "close":
            steps.append(yablo.CloseC1(row["from"], row["to"]))
        else:
            raise ValueError(f"unknown step kind {kind!r}")
    return steps


def _step_payload(step: yablo.BuildStep) -> dict:
    if isinstance(step, yablo.SeedTriangle):
        return {"kind": "seed"}
    if isinstance(step, yablo.PrepareC2):
        return {"kind": "prepare", "at": step.at, "new_sink": step.new_sink}
    if isinstance(step, yablo.FinishC2):
        return {"kind": "finish", "at": step.at}
    return {"kind": "close", "from": step.src, "to": step.dst}


def _cmd_replay(args) -> tuple[dict, int]:
    if args.script:
        steps = _steps_from_payload(json.loads(_read(args.script)))
    else:
        steps = yablo.canonical_script(args.depth)
    state = yablo.inductive_build(steps)
    ledger = [
        {
            "step": _step_payload(step),
            "expressions": {n: dnf_str(d) for n, d in sorted(snapshot.items())},
        }
        for step, snapshot in state.ledger
    ]
    data = {
        "steps": [_step_payload(s) for s in steps],
        "ledger": ledger,
        "final_graph": _graph_payload(state.graph),
    }
    return {"command": "replay-construction", "data": data}, EXIT_OK


def _cmd_insert_tautology(args) -> tuple[dict, int]:
    g = _load_ref(args.file)
    sign = Sign.POSITIVE if args.sign == "pos" else Sign.NEGATIVE
    src, _, dst = args.arrow.partition(",")
    if not dst:
        raise ValueError("arrow must be given as from,to")
    g2 = cells_mod.insert_tautology(g, src.strip(), dst.strip(), sign)
    data = {"graph": _graph_payload(g2)}
    if args.head:
        d = semantics.node_model_expression(g2, args.head)
        data["head_expression"] = dnf_str(d)
        data["head_kind"] = semantics.expression_kind(d)
    return {"command": "insert-tautology", "data": data}, EXIT_OK


def _cmd_audit(args) -> tuple[dict, int]:
    g = _load_ref(args.file)
    audits = yablo.composition_audit(g, args.root, args.max_len)
    data = {
        "root": args.root,
        "cells": [
            {
                "meet": a.meet,
                "sigma": list(a.sigma),
                "sigma_prime": list(a.sigma_prime),
                "label": a.label.value,
                "blocks": [{"path": b.path_index, "node": b.node} for b in a.blocks],
            }
            for a in audits
        ],
    }
    return {"command": "audit-composition", "data": data}, EXIT_OK


def _cmd_inject(args) -> tuple[dict, int]:
    g = _load_any(args.target)
    target = g if isinstance(g, BareDag) else embedding.strip_signs(g)
    cfg = SearchConfig(
        max_nodes_explored=args.budget,
        path_length_cap=args.path_cap,
    )
    result = embedding.find_injection(target, args.n, cfg)
    data = {
        "n": args.n,
        "target_nodes": len(target.nodes),
        "outcome": result.outcome.value,
        "explored": result.explored,
        "injection": injection_to_payload(result.injection) if result.injection else None,
    }
    if args.output and result.injection:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(injection_to_payload(result.injection), fh, indent=2, sort_keys=True)
            fh.write("\n")
    code = {
        SearchOutcome.FOUND: EXIT_OK,
        SearchOutcome.ABSENT: EXIT_NEGATIVE,
        SearchOutcome.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[result.outcome]
    return {"command": "inject", "data": data}, code


def _cmd_extend(args) -> tuple[dict, int]:
    g = _load_any(args.target)
    target = g if isinstance(g, BareDag) else embedding.strip_signs(g)
    inj = injection_from_payload(json.loads(_read(args.injection)))
    extended = embedding.extend_interpretation(target, inj)
    report = embedding.verify_extension(extended, inj, target)
    data = {
        "graph": _graph_payload(extended),
        "verification": {
            "image_all_xi": report.image_all_xi,
            "non_image_ok": report.non_image_ok,
            "image_complete": report.image_complete,
            "classical_c1": report.classical_c1,
            "image_root_is_source": report.image_root_is_source,
            "values": {n: str(v) for n, v in sorted(report.node_values.items())},
        },
    }
    return {"command": "extend", "data": data}, EXIT_OK if report.ok else EXIT_NEGATIVE


def _cmd_report(args) -> tuple[dict, int]:
    g = _load_ref(args.file)
    limit = _sink_limit(args)
    statuses = {}
    expressions = {}
    for n in g.nodes:
        expressions[n] = dnf_str(semantics.node_model_expression(g, n))
        statuses[n] = semantics.check_status(g, n, limit).kind.value
    data = {
        "nodes": len(g.nodes),
        "arrows": len(g.arrows),
        "sinks": list(g.sinks),
        "statuses": statuses,
        "expressions": expressions,
    }
    return {"command": "report", "data": data}, EXIT_OK


# --------------------------------------------------------------------------
# Rendering


def render_text(report: dict) -> str:
    command = report.get("command", "?")
    if "error" in report:
        return f"error: {report['error']}"
    data = report["data"]
    lines: list[str] = []
    if command == "validate":
        lines.append(
            f"ok: {data['mode']} graph, {data['nodes']} nodes, "
            f"{data['arrows']} arrows, sinks: {', '.join(data['sinks']) or '-'}"
        )
    elif command == "check":
        lines.append(f"{data['node']}: {data['status']}")
        if data["pos_witness"] is not None:
            lines.append(f"  positive witness: {_fmt_assignment(data['pos_witness'])}")
        if data["neg_witness"] is not None:
            lines.append(f"  negative witness: {_fmt_assignment(data['neg_witness'])}")
    elif command == "models":
        lines.append(
            f"{data['node']} ({data['polarity']}): {data['count']} of "
            f"{2 ** len(data['sinks'])} sink assignments"
            + (" (universe)" if data["universe"] else "")
        )
        for member in data["members"]:
            lines.append("  " + _fmt_assignment(member))
    elif command == "expr":
        lines.append(f"{data['node']} = {data['expression']}  [{data['kind']}]")
    elif command == "eval3":
        for n, v in data["values"].items():
            lines.append(f"{n} = {v}")
    elif command == "cells":
        lines.append(f"paths {data['from']} -> {data['to']}: {len(data['paths'])}")
        for p in data["paths"]:
            lines.append("  " + " -> ".join(p))
        lines.append(f"contradictory cells: {len(data['cells'])}")
        for c in data["cells"]:
            lines.append(f"  {' -> '.join(c['sigma'])}  vs  {' -> '.join(c['sigma_prime'])}")
        if "loop_check" in data:
            lc = data["loop_check"]
            lines.append(f"contradicts relation: {lc['contradicts']}")
            lines.append(
                "odd cycle: "
                + (str(lc["odd_cycle_witness"]) if lc["odd_cycle_witness"] else "none")
            )
    elif command == "classify-variants":
        lines.append("variant  c221  c222  c224  x    resolved")
        for row in data["rows"]:
            lines.append(
                f"<{row['variant']}>    "
                f"{_yn(row['c221']):<6}{_yn(row['c222']):<6}{_yn(row['c224']):<6}"
                f"{row['x_value']:<5}{row['resolved'] if row['resolved'] else '-'}"
            )
        lines.append(f"all conditions hold: {', '.join('<' + v + '>' for v in data['all_ok'])}")
    elif command == "build-yablo":
        lines.append(json.dumps(data["graph"], indent=2, sort_keys=True))
    elif command == "replay-construction":
        for k, entry in enumerate(data["ledger"], start=1):
            step = entry["step"]
            desc = {
                "seed": "seed triangle",
                "prepare": f"prepare {step.get('at')} with new sink {step.get('new_sink')}",
                "finish": f"finish knee {step.get('at')}",
                "close": f"close {step.get('from')} onto {step.get('to')}",
            }[step["kind"]]
            lines.append(f"step {k}: {desc}")
            for n, e in entry["expressions"].items():
                lines.append(f"  {n} = {e}")
    elif command == "insert-tautology":
        if "head_expression" in data:
            lines.append(f"head = {data['head_expression']}  [{data['head_kind']}]")
        lines.append(json.dumps(data["graph"], indent=2, sort_keys=True))
    elif command == "audit-composition":
        for c in data["cells"]:
            blocked = (
                ", ".join(f"path {b['path']} at {b['node']}" for b in c["blocks"])
                or "nowhere"
            )
            lines.append(
                f"meet {c['meet']}: {c['label']}  "
                f"({' -> '.join(c['sigma'])} vs {' -> '.join(c['sigma_prime'])}; blocked {blocked})"
            )
        if not data["cells"]:
            lines.append("no contradictory cells reachable from the root")
    elif command == "inject":
        lines.append(f"outcome: {data['outcome']} (explored {data['explored']})")
        if data["injection"]:
            mu = data["injection"]["mu"]
            lines.append("  " + ", ".join(f"{k} -> {v}" for k, v in sorted(mu.items())))
    elif command == "extend":
        v = data["verification"]
        lines.append(
            f"image xi: {_yn(v['image_all_xi'])}  non-image T-or-xi: {_yn(v['non_image_ok'])}"
            + (f"  classical C1 at image root: {_yn(v['classical_c1'])}" if v["classical_c1"] is not None else "")
        )
    elif command == "report":
        lines.append(f"{data['nodes']} nodes, {data['arrows']} arrows, sinks: {', '.join(data['sinks'])}")
        for n in sorted(data["statuses"]):
            lines.append(f"  {n}: {data['statuses'][n]:<8}  {data['expressions'][n]}")
    else:
        lines.append(json.dumps(data, indent=2, sort_keys=True))
    return "\n".join(lines)


def _fmt_assignment(member: dict) -> str:
    return ", ".join(f"{k}={'T' if v else 'F'}" for k, v in sorted(member.items()))


def _yn(flag) -> str:
    return "yes" if flag else "no"


# --------------------------------------------------------------------------
# Argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refgraph",
        description="Analyze self-referential acyclic reference graphs.",
    )
    parser.add_argument("--json", action="store_true", help="emit the JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text)

    p = add("validate", "parse and validate a graph file")
    p.add_argument("file")

    for name in ("check", "models", "expr"):
        p = add(name, f"{name} a node against the graph's equation system")
        p.add_argument("file")
        p.add_argument("--node", required=True)
        p.add_argument("--sink-limit", type=int, default=None)
        p.add_argument("--jobs", type=int, default=1)
        if name == "models":
            p.add_argument("--polarity", choices=["pos", "neg"], default="pos")

    p = add("eval3", "three-valued propagation from sink values")
    p.add_argument("file")
    p.add_argument("--assign", required=True, help="e.g. z=xi,y=T")

    p = add("cells", "enumerate paths and contradictory cells between two nodes")
    p.add_argument("file")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--max-len", type=int, default=32)
    p.add_argument("--loop-check", action="store_true")

    add("classify-variants", "the 18-row elementary cell table")

    p = add("build-yablo", "emit a Yablo truncation graph document")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output", default=None)

    p = add("replay-construction", "replay a build script with its symbolic ledger")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--script", help="JSON file with a list of build steps")
    group.add_argument("--depth", type=int, help="use the canonical script of this depth")

    p = add("insert-tautology", "replace an arrow by a tautology node")
    p.add_argument("file")
    p.add_argument("--arrow", required=True, help="from,to")
    p.add_argument("--sign", choices=["pos", "neg"], required=True)
    p.add_argument("--head", default=None, help="also report this node's sink expression")

    p = add("audit-composition", "label reachable cells Safe or EscapeHazard")
    p.add_argument("file")
    p.add_argument("--root", required=True)
    p.add_argument("--max-len", type=int, default=32)

    p = add("inject", "search for a truncation embedding into a bare graph")
    p.add_argument("--target", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--path-cap", type=int, default=16)
    p.add_argument("-o", "--output", default=None, help="write the injection JSON here")

    p = add("extend", "extend an injection's interpretation over the whole target")
    p.add_argument("--target", required=True)
    p.add_argument("--injection", required=True)

    p = add("report", "full per-node analysis of a graph")
    p.add_argument("file")
    p.add_argument("--sink-limit", type=int, default=None)

    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "check": _cmd_check,
    "models": _cmd_models,
    "expr": _cmd_expr,
    "eval3": _cmd_eval3,
    "cells": _cmd_cells,
    "classify-variants": _cmd_classify_variants,
    "build-yablo": _cmd_build_yablo,
    "replay-construction": _cmd_replay,
    "insert-tautology": _cmd_insert_tautology,
    "audit-composition": _cmd_audit,
    "inject": _cmd_inject,
    "extend": _cmd_extend,
    "report": _cmd_report,
}


def run_command(argv) -> tuple[dict, int]:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        return handler(args)
    except (
        GraphError,
        FormulaError,
        DnfSizeError,
        dsl.ParseError,
        embedding.EmbeddingError,
        yablo.BuildError,
        FileNotFoundError,
        ValueError,
        KeyError,
    ) as e:
        return {"command": args.command, "data": {}, "error": str(e)}, EXIT_USAGE


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        report, code = run_command(argv)
    except SystemExit as e:  # argparse usage errors
        return EXIT_USAGE if e.code else EXIT_OK
    if "--json" in argv:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render_text(report) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
