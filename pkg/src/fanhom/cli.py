"""Command-line driver.

Subcommands: ``compute`` (homology report of a fan file or preset),
``validate`` (per-check report of a fan file), ``preset`` (emit a preset as
a fan file) and ``search-torsion`` (seeded stellar subdivisions of a seed
fan, logging every fan whose report contains torsion).

Exit codes: 0 success, 1 input error, 2 mathematical self-consistency
failure (a broken d^2 or a failed oracle - an implementation bug, not bad
input).  Output is deterministic: identical inputs and flags give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError, InternalConsistencyError
from .fan import (
    Fan,
    PRESET_NAMES,
    parse_fan,
    preset_fan,
    random_interior_point,
    stellar_subdivision,
    validate_fan_text,
)
from .homology import (
    HomologyReport,
    bm_homology_report,
    oracle_euler,
    oracle_smooth_complete_betti,
    parse_coefficients,
)
from .koszul import assemble_subcomplexes


@dataclass
class RunConfig:
    command: str
    source: tuple[str, ...] = ()
    coefficients: str = "Z"
    json_output: bool = False
    dump_pages: bool = False
    run_oracles: bool = False
    seed: int | None = None
    trials: int | None = None
    out_dir: str = "torsion-findings"
    extra: tuple[str, ...] = field(default=())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fanhom", add_help=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_coeff(p):
        p.add_argument("--coeff", default="Z", metavar="Z|Q|Fq:<q>")

    p = sub.add_parser("compute", help="homology report of a fan")
    p.add_argument("source", nargs="+",
                   help="fan file path, or: preset <name> [params...]")
    add_coeff(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--dump-pages", action="store_true")
    p.add_argument("--check-oracles", action="store_true")

    p = sub.add_parser("validate", help="check a fan file")
    p.add_argument("path")

    p = sub.add_parser("preset", help="emit a preset fan file")
    p.add_argument("name")
    p.add_argument("params", nargs="*")

    p = sub.add_parser("search-torsion",
                       help="subdivide a seed fan at random and log torsion")
    p.add_argument("source", nargs="+",
                   help="seed fan: file path, or: preset <name> [params...]")
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--trials", required=True, type=int)
    p.add_argument("--out", default="torsion-findings")
    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.command in ("compute", "search-torsion"):
        cfg.source = tuple(args.source)
    if args.command == "compute":
        cfg.coefficients = args.coeff
        cfg.json_output = args.json
        cfg.dump_pages = args.dump_pages
        cfg.run_oracles = args.check_oracles
    if args.command == "validate":
        cfg.source = (args.path,)
    if args.command == "preset":
        cfg.source = tuple([args.name] + list(args.params))
    if args.command == "search-torsion":
        if not 0 <= args.seed < 2**64:
            raise InputError("--seed must fit in an unsigned 64-bit integer")
        if args.trials < 0:
            raise InputError("--trials must be nonnegative")
        cfg.seed = args.seed
        cfg.trials = args.trials
        cfg.out_dir = args.out
    return cfg


def _parse_compact_preset(spec: str) -> Fan:
    name, _, param_text = spec.partition(":")
    if name == "product":
        raise InputError(
            "nested product presets are not expressible on the command line"
        )
    params = tuple(p for p in param_text.split(",") if p) if param_text else ()
    return preset_fan(name, params)


def _preset_from_args(name: str, params) -> Fan:
    if name == "product":
        if len(params) != 2:
            raise InputError(
                "product takes two preset specs, e.g. "
                "product projective_space:1 projective_space:1"
            )
        return preset_fan(
            "product",
            (_parse_compact_preset(params[0]), _parse_compact_preset(params[1])),
        )
    return preset_fan(name, tuple(params))


def _load_source(source: tuple[str, ...]) -> Fan:
    if source and source[0] == "preset":
        if len(source) < 2:
            raise InputError("preset requires a name")
        return _preset_from_args(source[1], source[2:])
    if len(source) != 1:
        raise InputError(
            "expected a single fan file path or 'preset <name> [params...]'"
        )
    path = Path(source[0])
    try:
        text = path.read_text()
    except OSError:
        raise InputError(f"cannot read fan source: {path}") from None
    return parse_fan(text)


def _group_text(piece, kind: str) -> str:
    if kind == "F":
        return f"rank {piece.group.free_rank}"
    if kind == "Q":
        rank = piece.group.free_rank
        return "Q" if rank == 1 else f"Q^{rank}"
    parts = []
    if piece.group.free_rank == 1:
        parts.append("Z")
    elif piece.group.free_rank > 1:
        parts.append(f"Z^{piece.group.free_rank}")
    for d, certified in zip(piece.group.torsion, piece.torsion_certified):
        parts.append(f"Z/{d}" + ("" if certified else "(conjectural)"))
    return " + ".join(parts) if parts else "0"


def _render_report(fan: Fan, report: HomologyReport) -> list[str]:
    kind, _ = parse_coefficients(report.coefficients)
    lines = [
        f"fan: rank {fan.rank}, {len(fan.cones)} cones "
        f"({len(fan.maximal_cones)} maximal)",
        f"coefficients: {report.coefficients}",
    ]
    any_piece = False
    for j in range(0, 2 * report.n + 1):
        for piece in report.degree(j):
            sign = "+1" if piece.conjugation_sign == 1 else "-1"
            lines.append(
                f"  j={j}  weight={piece.weight}  "
                f"{_group_text(piece, kind)}  conj={sign}"
            )
            any_piece = True
    if not any_piece:
        lines.append("  (all degrees vanish)")
    lines.append("degrees not listed are zero")
    lines.append("certification:")
    for q, fd, it in report.certification:
        lines.append(
            f"  q={q}  field_degeneration={'yes' if fd else 'no'}  "
            f"integral_torsion={'yes' if it else 'no'}"
        )
    return lines


def _render_pages(report: HomologyReport, subcomplexes) -> list[str]:
    lines = ["pages (weight subcomplexes):"]
    for sub in subcomplexes:
        if all(sub.rank(s) == 0 for s in range(sub.n + 1)):
            continue
        lines.append(f"  c={sub.c} (weight {sub.weight}):")
        for s in range(sub.n + 1):
            if sub.rank(s):
                lines.append(
                    f"    s={s}  k={sub.chow_degree(s)}  rank={sub.rank(s)}"
                )
        shown = []
        for j, plist in sorted(report.pieces.items()):
            for piece in plist:
                if piece.weight == sub.weight:
                    shown.append(
                        f"s={j - sub.c} j={j} {piece.group}"
                    )
        if shown:
            lines.append("    homology: " + "; ".join(shown))
    return lines


def _pages_json(report: HomologyReport, subcomplexes) -> list[dict]:
    pages = []
    for sub in subcomplexes:
        terms = [
            {"s": s, "k": sub.chow_degree(s), "rank": sub.rank(s)}
            for s in range(sub.n + 1)
            if sub.rank(s)
        ]
        if not terms:
            continue
        differentials = [
            {
                "s": s,
                "matrix": [
                    [int(x) for x in row] for row in sub.matrix(s)
                ],
            }
            for s in range(1, sub.n + 1)
            if sub.rank(s) and sub.rank(s - 1)
        ]
        pages.append(
            {"c": sub.c, "weight": sub.weight, "terms": terms,
             "differentials": differentials}
        )
    return pages


def _run_oracles(fan: Fan, report: HomologyReport):
    """(lines, ok): oracle verdicts and whether every applicable one passed."""
    lines = ["oracles:"]
    ok = True
    kind, _ = parse_coefficients(report.coefficients)
    if kind in ("Z", "Q"):
        euler = oracle_euler(report)
        ok = ok and euler
        lines.append(f"  euler: {'pass' if euler else 'FAIL'}")
    else:
        lines.append("  euler: skipped (field coefficients)")
    expected = oracle_smooth_complete_betti(fan)
    if expected is None:
        lines.append("  smooth_complete_betti: skipped (not smooth complete)")
    elif kind == "F":
        lines.append("  smooth_complete_betti: skipped (field coefficients)")
    else:
        match = report.betti() == expected and not any(
            piece.group.torsion
            for plist in report.pieces.values()
            for piece in plist
        )
        ok = ok and match
        lines.append(f"  smooth_complete_betti: {'pass' if match else 'FAIL'}")
    return lines, ok


def cmd_compute(cfg: RunConfig) -> int:
    fan = _load_source(cfg.source)
    parse_coefficients(cfg.coefficients)  # fail fast on bad spec
    subcomplexes = assemble_subcomplexes(fan)
    report = bm_homology_report(fan, cfg.coefficients, subcomplexes=subcomplexes)
    oracle_lines: list[str] = []
    oracles_ok = True
    if cfg.run_oracles:
        oracle_lines, oracles_ok = _run_oracles(fan, report)
    if cfg.json_output:
        doc = report.to_dict()
        if cfg.dump_pages:
            doc["pages"] = _pages_json(report, subcomplexes)
        if cfg.run_oracles:
            doc["oracles"] = {
                "passed": oracles_ok,
                "log": [line.strip() for line in oracle_lines[1:]],
            }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        lines = _render_report(fan, report)
        if cfg.dump_pages:
            lines += _render_pages(report, subcomplexes)
        lines += oracle_lines
        sys.stdout.write("\n".join(lines) + "\n")
    if not oracles_ok:
        print("error: oracle mismatch", file=sys.stderr)
        return 2
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    path = Path(cfg.source[0])
    try:
        text = path.read_text()
    except OSError:
        print(f"error: cannot read fan source: {path}", file=sys.stderr)
        return 1
    report = validate_fan_text(text)
    for check in report.checks:
        line = f"{check.name}: {check.status}"
        if check.detail:
            line += f" ({check.detail})"
        print(line)
    return 0 if report.ok else 1


def cmd_preset(cfg: RunConfig) -> int:
    fan = _preset_from_args(cfg.source[0], cfg.source[1:])
    sys.stdout.write(fan.file_text())
    return 0


def _mutate(seed_fan: Fan, rng: random.Random) -> Fan:
    """One trial fan: one to three stellar subdivisions of the seed fan."""
    fan = seed_fan
    for _ in range(rng.randint(1, 3)):
        candidates = [
            i for i in fan.maximal_cones if fan.cones[i].dim >= 2
        ]
        if not candidates:
            break
        target = rng.choice(candidates)
        point = random_interior_point(rng, fan, target)
        fan = stellar_subdivision(fan, target, point)
    return fan


def cmd_search_torsion(cfg: RunConfig) -> int:
    seed_fan = _load_source(cfg.source)
    rng = random.Random(cfg.seed)
    out_dir = Path(cfg.out_dir)
    findings = 0
    for trial in range(cfg.trials):
        fan = _mutate(seed_fan, rng)
        report = bm_homology_report(fan, "Z")
        torsion_pieces = [
            (piece.j, piece.weight, d, certified)
            for plist in report.pieces.values()
            for piece in plist
            for d, certified in zip(piece.group.torsion, piece.torsion_certified)
        ]
        if torsion_pieces:
            findings += 1
            out_dir.mkdir(parents=True, exist_ok=True)
            fan_path = out_dir / f"trial_{trial:03d}.fan.json"
            report_path = out_dir / f"trial_{trial:03d}.report.json"
            fan_path.write_text(fan.file_text())
            report_path.write_text(report.to_json())
            tags = ", ".join(
                f"Z/{d} at j={j} weight={w} "
                f"[{'certified' if certified else 'conjectural'}]"
                for j, w, d, certified in sorted(torsion_pieces)
            )
            print(f"trial {trial:03d}: torsion {tags} -> {fan_path.name}")
        else:
            print(f"trial {trial:03d}: no torsion")
    print(
        f"search: {findings} finding(s) in {cfg.trials} trial(s) "
        f"(seed {cfg.seed})"
    )
    return 0


def run(argv) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = _config_from_args(args)
        if cfg.command == "compute":
            return cmd_compute(cfg)
        if cfg.command == "validate":
            return cmd_validate(cfg)
        if cfg.command == "preset":
            return cmd_preset(cfg)
        if cfg.command == "search-torsion":
            return cmd_search_torsion(cfg)
        raise InputError(f"unknown command {cfg.command!r}")
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
