"""Command-line surface: classification, extraction, construction and
verification as batch subcommands with JSON input and output.

Exit statuses: 0 success, 1 domain error, 2 verification report with
violations, 3 internal invariant violation. All randomness is seeded and
surfaced in the output; identical (input, seed) gives byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import chevmap, jsonio, looplie, polar, yuseq
from .errors import InternalInvariantViolation, InvalidArgumentError, PolariumError
from .rootdata import build, rootdatum_to_json
from .tails import window_from_json
from .tori import list_torus_classes, regular_numbers
from .yuseq import YuLadder, decompose_lambda, extract


def _load_input(path: str | None) -> dict:
    if path is None:
        return {}
    raw = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"malformed JSON input: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidArgumentError("input document must be a JSON object")
    return doc


def _parse_window(spec: str | None) -> tuple[int, int] | None:
    if spec is None:
        return None
    try:
        lo, hi = spec.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise InvalidArgumentError(f"window must be LO:HI, got {spec!r}") from exc


def _ladder_from_request(datum, doc: dict | None) -> YuLadder:
    if not doc:
        return extract(datum)
    breaks = [Fraction(b) for b in doc["breaks"]]
    levels = [frozenset(level) for level in doc["levels"]]
    components = decompose_lambda(datum, breaks)
    return YuLadder(datum, breaks, levels, components,
                    validate=doc.get("validate", True))


def _run_classify(doc: dict) -> tuple[dict, int]:
    datum = jsonio.datum_from_json({k: v for k, v in doc.items() if k != "levi"})
    return jsonio.datum_to_json(datum), 0


def _run_yu_sequence(doc: dict) -> tuple[dict, int]:
    datum = jsonio.datum_from_json(doc)
    ladder = extract(datum)
    out = {"datum": jsonio.datum_to_json(datum), "ladder": yuseq.ladder_to_json(ladder)}
    return out, 0


def _run_epipelagic(doc: dict) -> tuple[dict, int]:
    datum = polar.epipelagic_datum(build(doc["type"]), int(doc["m"]))
    return jsonio.datum_to_json(datum), 0


def _run_homogeneous(doc: dict) -> tuple[dict, int]:
    datum = polar.homogeneous_datum(build(doc["type"]), int(doc["m"]), int(doc["i"]))
    return jsonio.datum_to_json(datum), 0


def _run_jlattice(doc: dict) -> tuple[dict, int]:
    datum = jsonio.datum_from_json(doc["datum"])
    ladder = extract(datum)
    x = jsonio.parse_coweight(datum.rd, doc.get("x"))
    window = doc.get("window")
    lattice = looplie.build_j_lattice(datum, ladder, x, window=window)
    psi = looplie.psi_lambda_check(lattice, window=window)
    out = {"jlattice": lattice.to_json(), "psi_lambda": psi,
           "bracket_closure": "verified"}
    return out, 0


def _run_moveability(doc: dict) -> tuple[dict, int]:
    datum_doc = doc["datum"]
    datum = jsonio.datum_from_json(datum_doc, validate=datum_doc.get("validate", True))
    ladder = _ladder_from_request(datum, doc.get("ladder"))
    x = jsonio.parse_coweight(datum.rd, doc.get("x"))
    report = looplie.moveability_check(datum, ladder, x,
                                       variant=doc.get("variant", "J"),
                                       window=doc.get("window"))
    return report, 0 if report["full_rank"] else 2


def _run_verify_sl2(doc: dict) -> tuple[dict, int]:
    grid_spec = doc.get("grid", "default")
    grid = None if grid_spec == "default" else [window_from_json(w) for w in grid_spec]
    report = chevmap.verify_sl2(grid)
    return report, 0 if not report["violations"] else 2


def _run_regular_numbers(doc: dict) -> tuple[dict, int]:
    rd = build(doc["type"])
    out = {"type": rootdatum_to_json(rd)["type"], **regular_numbers(rd)}
    return out, 0


def _run_list_tori(doc: dict) -> tuple[dict, int]:
    rd = build(doc["type"])
    classes = [jsonio.torus_to_json(tc) for tc in list_torus_classes(rd)]
    return {"type": rootdatum_to_json(rd)["type"], "classes": classes}, 0


def _run_partition_check(doc: dict) -> tuple[dict, int]:
    rd = build(doc["type"])
    report = polar.partition_check(
        rd,
        samples=int(doc.get("samples", 200)),
        seed=int(doc.get("seed", 0)),
        zero_only=bool(doc.get("zero_only", False)),
        disjoint_pairs=int(doc.get("disjoint_pairs", 50)),
    )
    return report, 0 if not report["violations"] else 2


_HANDLERS = {
    "classify": _run_classify,
    "yu-sequence": _run_yu_sequence,
    "epipelagic": _run_epipelagic,
    "homogeneous": _run_homogeneous,
    "jlattice": _run_jlattice,
    "moveability": _run_moveability,
    "verify-sl2": _run_verify_sl2,
    "regular-numbers": _run_regular_numbers,
    "list-tori": _run_list_tori,
    "partition-check": _run_partition_check,
}


def _format_table(doc: dict, indent: str = "") -> str:
    lines = []
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_format_table(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for entry in value:
                row = "  ".join(f"{k}={entry[k]}" for k in sorted(entry))
                lines.append(f"{indent}  {row}")
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarium",
        description="Exact classification of Laurent-tail coadjoint data into "
                    "polar strata, with ladder extraction and lattice verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        p = sub.add_parser(name)
        p.add_argument("--type", help="Cartan type label, e.g. A2 or G2")
        p.add_argument("--input", help="JSON request document, a path or - for stdin")
        p.add_argument("--seed", type=int, help="seed for sampled commands")
        p.add_argument("--samples", type=int, help="sample count for sampled commands")
        p.add_argument("--window", help="exponent window LO:HI for lattice checks")
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--out", help="write output to this path instead of stdout")
        if name == "verify-sl2":
            p.add_argument("--grid", default="default")
        if name == "epipelagic" or name == "homogeneous":
            p.add_argument("-m", type=int, help="torus order")
        if name == "homogeneous":
            p.add_argument("-i", type=int, help="graded exponent index")
        if name == "moveability":
            p.add_argument("--variant", choices=("J", "K"))
    return parser


def _merge_flags(args: argparse.Namespace, doc: dict) -> dict:
    merged = dict(doc)
    if args.type:
        merged["type"] = args.type
    if args.seed is not None and args.command == "partition-check":
        merged["seed"] = args.seed
    if args.samples is not None and args.command == "partition-check":
        merged["samples"] = args.samples
    window = _parse_window(args.window)
    if window and args.command in ("jlattice", "moveability"):
        merged["window"] = max(abs(window[0]), abs(window[1]))
    if getattr(args, "m", None) is not None:
        merged["m"] = args.m
    if getattr(args, "i", None) is not None:
        merged["i"] = args.i
    if getattr(args, "variant", None):
        merged["variant"] = args.variant
    if args.command == "verify-sl2" and getattr(args, "grid", None) \
            and "grid" not in merged:
        merged["grid"] = args.grid
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _merge_flags(args, _load_input(args.input))
        jsonio.validate_request(args.command, doc)
        result, status = _HANDLERS[args.command](doc)
    except InternalInvariantViolation as exc:
        _emit(jsonio.canonical_dumps(
            {"error": {"code": exc.code, "message": str(exc)}}), args.out)
        return exc.exit_status
    except PolariumError as exc:
        _emit(jsonio.canonical_dumps(
            {"error": {"code": exc.code, "message": str(exc)}}), args.out)
        return exc.exit_status
    if args.format == "table":
        _emit(_format_table(result) + "\n", args.out)
    else:
        _emit(jsonio.canonical_dumps(result), args.out)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
