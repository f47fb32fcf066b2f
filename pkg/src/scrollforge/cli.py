"""Command-line front end.

    scrollforge construct --q 7
    scrollforge classify  --q 7 --h 1,0,0,0,0,0,0
    scrollforge census    --q 8 --workers 2 --format md --out census8.md
    scrollforge verify    --q 7 --theorem all
    scrollforge dump      --q 7 --out scroll7.json

Exit codes: 0 success, 1 a checked statement failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from . import census, verify
from .gf import FieldError, field_of_order
from .projgeom import max_q
from .scroll import canonical_scroll
from .sections import classify

THEOREM_NAMES = list(verify.THEOREMS)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    q: int = 7
    workers: int = 1
    output_format: str = "json"
    output_path: str | None = None
    theorem_filter: list = field(default_factory=lambda: ["all"])
    sample_seed: int = 0


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _field(q: int):
    if q > max_q():
        raise UsageError(f"q = {q} exceeds the cap {max_q()} (set SCROLLFORGE_MAX_Q)")
    try:
        return field_of_order(q)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def cmd_construct(cfg: RunConfig) -> int:
    F = _field(cfg.q)
    try:
        V = canonical_scroll(F).validate()
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    info = {
        "q": cfg.q,
        "field": F.spec.to_json(),
        "points": len(V.points),
        "generators": len(V.generators),
        "conic_plane": [list(r) for r in V.alpha.basis],
        "cubic_space": [list(r) for r in V.pi3.basis],
    }
    _emit(_json(info), cfg)
    return 0


def cmd_dump(cfg: RunConfig) -> int:
    F = _field(cfg.q)
    try:
        V = canonical_scroll(F)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    _emit(_json(V.to_json(with_points=True)), cfg)
    return 0


def parse_hyperplane(text: str | None, q: int) -> list[int]:
    if not text:
        raise UsageError("--h is required")
    try:
        h = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad coefficient list {text!r}") from exc
    if len(h) != 7:
        raise UsageError("a hyperplane of PG(6, q) needs 7 coefficients")
    if any(not 0 <= x < q for x in h):
        raise UsageError(f"coefficients are element codes 0..{q - 1}")
    if not any(h):
        raise UsageError("the zero vector is not a hyperplane")
    return h


def cmd_classify(cfg: RunConfig, h_text: str | None) -> int:
    F = _field(cfg.q)
    h = parse_hyperplane(h_text, cfg.q)
    try:
        V = canonical_scroll(F)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    _emit(_json(classify(V, h).to_json()), cfg)
    return 0


def cmd_census(cfg: RunConfig) -> int:
    _field(cfg.q)
    try:
        report = census.run_census(cfg.q, workers=cfg.workers)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    _emit(census.render(report, cfg.output_format), cfg)
    return 0 if census.report_ok(report) else 1


def _verify_text(results: list[dict], fmt: str, q: int) -> str:
    if fmt == "json":
        return _json({"q": q, "results": results})
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theorem", "status"])
        for r in results:
            w.writerow([r["name"], r["status"]])
        return buf.getvalue()
    lines = [f"# Verification, q = {q}", "", "| theorem | status |", "|---|---|"]
    lines += [f"| {r['name']} | {r['status']} |" for r in results]
    return "\n".join(lines) + "\n"


def cmd_verify(cfg: RunConfig) -> int:
    _field(cfg.q)
    names = cfg.theorem_filter
    if names != ["all"]:
        unknown = [n for n in names if n not in verify.THEOREMS]
        if unknown:
            raise UsageError(f"unknown theorem(s): {', '.join(unknown)}; known: {', '.join(THEOREM_NAMES)}")
    try:
        results = verify.run(names, cfg.q, seed=cfg.sample_seed)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    _emit(_verify_text(results, cfg.output_format, cfg.q), cfg)
    return 0 if all(r["status"] == "pass" for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=7, help="field order (prime power, at least 7)")
    common.add_argument("--workers", type=int, default=1, help="worker processes for the census")
    common.add_argument("--format", dest="output_format", choices=["json", "csv", "md"], default="json")
    common.add_argument("--out", dest="output_path", default=None, help="write output here instead of stdout")
    common.add_argument(
        "--theorem",
        action="append",
        default=None,
        help="theorem name, repeatable or comma separated, or 'all': " + ", ".join(THEOREM_NAMES),
    )
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--h", default=None, help="hyperplane coefficients, e.g. 1,0,0,0,0,0,0")
    p = argparse.ArgumentParser(prog="scrollforge", description="Ruled quintic surface of PG(6, q): construction, sections, census.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("construct", "build the canonical scroll and print its structure"),
        ("classify", "classify one hyperplane section"),
        ("census", "exhaustive hyperplane census with audits"),
        ("verify", "run named structural checks"),
        ("dump", "write the scroll as JSON"),
    ):
        sub.add_parser(name, parents=[common], help=help_)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    theorems = ["all"]
    if args.theorem:
        theorems = [t.strip() for item in args.theorem for t in item.split(",") if t.strip()]
    if args.workers < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return 2
    cfg = RunConfig(args.q, args.workers, args.output_format, args.output_path, theorems, args.seed)
    try:
        if args.command == "construct":
            return cmd_construct(cfg)
        if args.command == "dump":
            return cmd_dump(cfg)
        if args.command == "classify":
            return cmd_classify(cfg, args.h)
        if args.command == "census":
            return cmd_census(cfg)
        return cmd_verify(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
