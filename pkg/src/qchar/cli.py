"""Command line driver: run scenario files, sweeps, constructions, inspection.

Reports are serialized canonically (sorted keys, no whitespace, floats in
.17g) so a rerun with the same inputs produces byte-identical output.
Exit codes: 0 all verdicts matched expectations, 1 at least one mismatch,
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import jsonschema

from .scenarios import (
    SCENARIO_KINDS,
    SWEEP_KINDS,
    ScenarioFormatError,
    run_construct,
    run_inspect,
    run_scenario,
    run_sweep,
)

_EXPECTS = ["pass", "fail", "hypothesis-violated", "counterexample"]

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["schema", "kind", "payload"],
    "properties": {
        "schema": {"const": "qchar-scenario-1"},
        "kind": {"enum": list(SCENARIO_KINDS)},
        "name": {"type": "string"},
        "expect": {"enum": _EXPECTS},
        "payload": {"type": "object"},
    },
    "additionalProperties": False,
}

FILE_SCHEMA = {
    "oneOf": [
        SCENARIO_SCHEMA,
        {
            "type": "object",
            "required": ["schema", "scenarios"],
            "properties": {
                "schema": {"const": "qchar-scenario-1"},
                "scenarios": {
                    "type": "array",
                    "items": SCENARIO_SCHEMA,
                    "minItems": 1,
                },
            },
            "additionalProperties": False,
        },
    ]
}


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, compact separators, .17g floats."""
    parts: list[str] = []
    _emit(obj, parts)
    return "".join(parts)


def _emit(obj, out: list):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            raise ValueError("non-finite float in report")
        out.append(format(obj, ".17g"))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise ValueError(f"non-string report key {key!r}")
            if i:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _emit(obj[key], out)
        out.append("}")
    else:
        item = getattr(obj, "item", None)
        if item is not None:
            _emit(item(), out)
        else:
            raise ValueError(f"unserializable report value {type(obj).__name__}")


def _write(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _reports_payload(reports: list[dict]) -> dict:
    if len(reports) == 1:
        return reports[0]
    return {"schema": "qchar-report-1", "reports": reports}


def _exit_code(reports: list[dict]) -> int:
    return 0 if all(r["matched"] for r in reports) else 1


def _load_scenarios(paths: list[str]) -> list[dict]:
    scenarios = []
    for path in paths:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ScenarioFormatError(f"{path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ScenarioFormatError(f"{path}: invalid JSON: {exc}") from exc
        try:
            jsonschema.validate(doc, FILE_SCHEMA)
        except jsonschema.ValidationError as exc:
            best = jsonschema.exceptions.best_match([exc])
            raise ScenarioFormatError(
                f"{path}: schema violation at {best.json_path}: {best.message}"
            ) from exc
        if "scenarios" in doc:
            scenarios.extend(doc["scenarios"])
        else:
            scenarios.append(doc)
    return scenarios


def _cmd_run(args) -> int:
    scenarios = _load_scenarios(args.files)
    profile = args.tolerance_profile

    def one(s):
        return run_scenario(s, profile=profile)

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            reports = list(pool.map(one, scenarios))
    else:
        reports = [one(s) for s in scenarios]
    _write(canonical_json(_reports_payload(reports)), args.out)
    return _exit_code(reports)


def _cmd_sweep(args) -> int:
    arities = tuple(int(a) for a in args.arities.split(","))
    report = run_sweep(args.kind, seed=args.seed, count=args.count,
                       max_order=args.max_order, arities=arities)
    _write(canonical_json(report), args.out)
    return _exit_code([report])


def _parse_inline_json(text: str, what: str) -> dict:
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ScenarioFormatError(f"{what}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{what}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioFormatError(f"{what}: expected a JSON object")
    return doc


def _cmd_construct(args) -> int:
    phi = _parse_inline_json(args.phi, "--phi")
    pair = _parse_inline_json(args.pair_phi, "--pair-phi") if args.pair_phi else None
    report = run_construct(phi, min_truncation=args.min_truncation,
                           radius=args.radius, pair_phi=pair)
    _write(canonical_json(report), args.out)
    return _exit_code([report])


def _cmd_inspect(args) -> int:
    if args.target != "group":
        raise ScenarioFormatError(f"unknown inspect target {args.target!r}")
    try:
        orders = [int(o) for o in args.orders.split(",")]
    except ValueError as exc:
        raise ScenarioFormatError(f"--orders: {exc}") from exc
    report = run_inspect(orders)
    _write(canonical_json(report), args.out)
    return _exit_code([report])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchar",
        description="Verification workbench for characteristic-function "
                    "identities on finite abelian groups and the circle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run scenario files")
    p_run.add_argument("files", nargs="+", help="scenario JSON files")
    p_run.add_argument("--out", default=None, help="write the report here")
    p_run.add_argument("--workers", type=int, default=1,
                       help="thread pool size for independent scenarios")
    p_run.add_argument("--tolerance-profile", choices=["default", "strict"],
                       default="default")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="randomized property sweeps")
    p_sweep.add_argument("kind", choices=list(SWEEP_KINDS))
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--count", type=int, default=20,
                         help="cases per group and arity")
    p_sweep.add_argument("--max-order", type=int, default=12)
    p_sweep.add_argument("--arities", default="2,3")
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_con = sub.add_parser("construct", help="build a circle density from "
                                             "an even polynomial exponent")
    p_con.add_argument("--phi", required=True,
                       help="JSON {'even_coeffs': {...}} or @file")
    p_con.add_argument("--pair-phi", default=None,
                       help="optional second exponent for the joint witness")
    p_con.add_argument("--min-truncation", type=int, default=None)
    p_con.add_argument("--radius", type=int, default=None)
    p_con.add_argument("--out", default=None)
    p_con.set_defaults(func=_cmd_construct)

    p_ins = sub.add_parser("inspect", help="structural report on an object")
    p_ins.add_argument("target", choices=["group"])
    p_ins.add_argument("--orders", required=True,
                       help="comma separated cyclic orders, e.g. 2,4")
    p_ins.add_argument("--out", default=None)
    p_ins.set_defaults(func=_cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioFormatError as exc:
        print(f"qchar: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
