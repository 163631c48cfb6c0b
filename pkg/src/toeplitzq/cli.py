"""``tq``: command-line front end.

Every command prints one JSON document on stdout. Exit status is 0 on
success, 1 when a verification fails and 2 for usage or parse errors.
Diagnostics go to stderr, coloured when ``TQ_COLOR=1`` (or, if unset,
when stderr is a terminal).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .axioms import check_model
from .ccr import all_letters, classical_relation, dequantize, hbar_deform, search_relations
from .modelfile import (
    ModelConfig,
    ModelParseError,
    SymbolParseError,
    bundled_model_text,
    bundled_models,
    parse_model,
    parse_symbol,
)
from .quantization import ModelError, format_matrix, toeplitz_op
from .symbols import format_symbol

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("check", "quantize", "relations", "deform", "dequantize")
MINIMALITY_NOTE = (
    "relations form a vector-space basis of low-degree relations; "
    "a minimal set of ideal generators is not computed"
)


class UsageError(Exception):
    pass


def _use_color(stream) -> bool:
    flag = os.environ.get("TQ_COLOR")
    if flag in ("0", "1"):
        return flag == "1"
    return hasattr(stream, "isatty") and stream.isatty()


def _diagnose(where: str, message: str, stream=None) -> None:
    stream = stream or sys.stderr
    label = "error"
    if _use_color(stream):
        label = f"\x1b[1;31m{label}\x1b[0m"
    stream.write(f"{where}: {label}: {message}\n")


def read_model_text(source: str) -> tuple[str, str]:
    """(display name, text) for a file path or the name of a bundled model."""
    path = Path(source)
    if path.is_file():
        return str(path), path.read_text(encoding="utf-8")
    name = source if source.endswith(".tq") else source + ".tq"
    if name in bundled_models():
        return name, bundled_model_text(name)
    raise UsageError(f"model file not found: {source}")


def _ccr_settings(config: ModelConfig, args) -> tuple[int, int]:
    dmax = args.dmax if args.dmax is not None else config.dmax
    D = args.degree if args.degree is not None else config.degree
    if dmax < 1:
        raise UsageError("dmax must be at least 1")
    if D < 2 * dmax:
        raise UsageError(f"degree {D} must be at least 2*dmax = {2 * dmax}")
    return dmax, D


def _relation_search(config: ModelConfig, args) -> tuple[dict, list]:
    model = config.build_model()
    dmax, D = _ccr_settings(config, args)
    search = search_relations(model, dmax, D)
    names = config.generators
    report = {
        "dmax": dmax,
        "truncations": list(search.truncations),
        "words": len(search.words),
        "nullity": list(search.nullity),
        "certificate": search.certificate,
        "hbar": "1" if model.gram.kind != "explicit" else str(model.gram.hbar),
        "note": MINIMALITY_NOTE,
        "relations": [r.format(names) for r in search.relations],
    }
    return report, search.relations


def run_check(config: ModelConfig, args) -> tuple[dict, int]:
    D = args.degree if args.degree is not None else config.degree
    result = check_model(config.build_model(), D, args.trials, args.seed)
    report = {"degree": D, "trials": args.trials, "seed": args.seed, **result}
    return report, EXIT_OK if result["passed"] else EXIT_FAIL


def run_quantize(config: ModelConfig, args) -> tuple[dict, int]:
    model = config.build_model()
    D = args.degree if args.degree is not None else config.degree
    try:
        g = parse_symbol(args.symbol, config, model.pres)
    except SymbolParseError as e:
        raise UsageError(f"symbol {args.symbol!r}: {e}") from None
    if max(g.bidegree()) > D:
        raise UsageError(f"symbol has degree {max(g.bidegree())} above the truncation degree {D}")
    op = toeplitz_op(g, D, model)
    n_valid = op.n_valid(model)
    basis = model.basis(D)
    report = {
        "symbol": format_symbol(g, model.pres),
        "degree": D,
        "basis": [model.pres.format_monomial(m) if any(m) else "1" for m in basis],
        "matrix": format_matrix(op),
        "raise": op.raise_deg,
        "valid_in_degree": op.valid_in_degree,
        "valid_columns": [j < n_valid for j in range(len(basis))],
    }
    return report, EXIT_OK


def run_relations(config: ModelConfig, args) -> tuple[dict, int]:
    report, _ = _relation_search(config, args)
    return report, EXIT_OK


def run_deform(config: ModelConfig, args) -> tuple[dict, int]:
    report, relations = _relation_search(config, args)
    names = config.generators
    report["deformed"] = [
        {"relation": r.format(names), "deformed": hbar_deform(r).format(names)} for r in relations
    ]
    return report, EXIT_OK


def run_dequantize(config: ModelConfig, args) -> tuple[dict, int]:
    report, relations = _relation_search(config, args)
    names = config.generators
    bound = args.bound if args.bound is not None else config.bound
    report["classical"] = [
        {
            "relation": r.format(names),
            "classical": (cl := classical_relation(r, relations)).relation.format(names),
            "in_relation_span": cl.in_ideal,
        }
        for r in relations
    ]
    dq = dequantize(relations, all_letters(len(names)), bound)
    report["bound"] = bound
    report["classical_relations"] = dq.format_relations(names)
    report["dimensions"] = dq.dimensions
    return report, EXIT_OK


RUNNERS = {
    "check": run_check,
    "quantize": run_quantize,
    "relations": run_relations,
    "deform": run_deform,
    "dequantize": run_dequantize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tq", description="Exact Toeplitz quantization of quadratic algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        if cmd == "quantize":
            p.add_argument("symbol", help='symbol in the form h k*, e.g. "z z*"')
        p.add_argument("--model", required=True, help="model file, or the name of a bundled model")
        p.add_argument("--degree", type=int, help="truncation degree D")
        p.add_argument("--dmax", type=int, help="maximum word degree for relation search")
        p.add_argument("--trials", type=int, default=50, help="random trials per axiom check")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--bound", type=int, help="degree bound for the dimension table")
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        where, text = read_model_text(args.model)
        try:
            # check reports overlap witnesses itself instead of refusing the file
            config = parse_model(text, check_confluence_=args.command != "check")
        except ModelParseError as e:
            for d in e.diagnostics:
                _diagnose(f"{where}:{d.line}:{d.col}", d.message, stderr)
            return EXIT_USAGE
        report, status = RUNNERS[args.command](config, args)
    except (UsageError, ModelError, ValueError) as e:
        _diagnose("tq", str(e), stderr)
        return EXIT_USAGE
    document = {"command": args.command, "model": Path(where).name, **report}
    stdout.write(json.dumps(document, indent=2, ensure_ascii=False) + "\n")
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
