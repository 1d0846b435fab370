"""Command line front end: ``plancheck validate`` and ``plancheck execute``.

Exit codes: 0 success, 1 invalid plan, 2 monitor refusal, 3 parse or usage
error. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence, TextIO

from .grounding import GroundingError
from .model import GroundAtom, Literal, World
from .monitors import (
    FairnessConfig,
    FairnessConfigError,
    GenderBiasError,
    Monitor,
    MonitorError,
    canonical_handler,
    compose,
    execute_monitored,
    fairness_monitor,
    fuel_monitor,
)
from .parser import ParseError, parse_domain, parse_plan, parse_problem
from .validator import Derivation, ValidationError, check_plan

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MONITOR = 2
EXIT_USAGE = 3

FORMAT_ENV = "PLANCHECK_FORMAT"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    domain_path: str
    problem_path: str
    plan_path: str
    monitors: list[str] = field(default_factory=list)
    format: str = "text"
    trace: bool = False
    skip_validation: bool = False


# Rendering


def atom_json(a: GroundAtom) -> dict[str, Any]:
    return {"pred": a.predicate, "args": [o.name for o in a.args]}


def literal_json(lit: Literal) -> dict[str, Any]:
    return {"polarity": lit.polarity.value, **atom_json(lit.atom)}


def world_json(w: World) -> list[dict[str, Any]]:
    return [atom_json(a) for a in w]


def validation_error_json(e: ValidationError) -> dict[str, Any]:
    out: dict[str, Any] = {
        "kind": e.kind,
        "step": e.step,
        "action": str(e.action) if e.action else None,
        "literal": literal_json(e.literal) if e.literal else None,
        "world": world_json(e.world),
        "message": e.describe(),
    }
    if e.cause is not None:
        out["grounding_kind"] = e.cause.kind
    return out


def monitor_error_json(e: MonitorError) -> dict[str, Any]:
    out: dict[str, Any] = {
        "kind": e.kind,
        "step": e.step,
        "action": str(e.action),
        "world": world_json(e.world),
        "message": str(e),
    }
    if isinstance(e, GenderBiasError):
        r = e.refutation
        out.update(
            gender=r.gender.value,
            assignment_pct=r.assignment_pct,
            lower_bound_pct=r.lower_bound_pct,
            trip_count=r.trip_count.as_dict(),
        )
    return out


def _world_lines(w: World, indent: str = "  ") -> list[str]:
    return [f"{indent}{a}" for a in w]


class Report:
    """Collects one run's result and writes it as text or a JSON document."""

    def __init__(self, fmt: str, trace: bool) -> None:
        self.fmt = fmt
        self.trace = trace
        self.doc: dict[str, Any] = {
            "status": None, "steps": [], "final_world": None, "error": None,
        }
        self.lines: list[str] = []

    def steps(self, worlds_before: Sequence[World], actions: Sequence, final: World | None):
        after = list(worlds_before[1:]) + ([final] if final is not None else [])
        for i, (action, before) in enumerate(zip(actions, worlds_before)):
            entry: dict[str, Any] = {
                "index": i,
                "action": str(action),
                "world_size_before": len(before),
            }
            if i < len(after):
                entry["world_size_after"] = len(after[i])
            if self.trace:
                entry["world_before"] = world_json(before)
            self.doc["steps"].append(entry)
            line = f"  step {i}: {action}  |world| {len(before)}"
            if i < len(after):
                line += f" -> {len(after[i])}"
            self.lines.append(line)
            if self.trace:
                self.lines += _world_lines(before, "      ")

    def write(self, out: TextIO) -> None:
        if self.fmt == "json":
            out.write(json.dumps(self.doc) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def _derivation_report(rep: Report, deriv: Derivation) -> None:
    rep.steps(
        [s.world_before for s in deriv.steps],
        [s.action for s in deriv.steps],
        deriv.final_world,
    )


def _invalid(rep: Report, e: ValidationError) -> int:
    rep.doc["status"] = "invalid"
    rep.doc["error"] = validation_error_json(e)
    rep.lines.insert(0, f"invalid: {e.describe()}")
    rep.lines.append("world:")
    rep.lines += _world_lines(e.world)
    return EXIT_INVALID


# Commands


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path}: cannot read: {exc}") from exc


def _load(cfg: RunConfig):
    files = {}
    for role, path in (("domain", cfg.domain_path), ("problem", cfg.problem_path),
                       ("plan", cfg.plan_path)):
        if not path:
            raise UsageError(f"missing --{role}")
        files[role] = _read(path)
    current = cfg.domain_path
    try:
        d = parse_domain(files["domain"])
        current = cfg.problem_path
        p = parse_problem(files["problem"], d)
        current = cfg.plan_path
        pl = parse_plan(files["plan"], d, p)
    except ParseError as exc:
        exc.path = current
        raise
    return d, p, pl


def _monitors(cfg: RunConfig, d, p) -> list[Monitor]:
    monitors = []
    for spec in cfg.monitors:
        kind, sep, arg = spec.partition("=")
        if not sep:
            raise UsageError(f"bad monitor spec {spec!r}: expected fuel=<n> or fairness=<path>")
        if kind == "fuel":
            if not arg.isdigit():
                raise UsageError(f"fuel must be a nonnegative integer, got {arg!r}")
            monitors.append(fuel_monitor(int(arg)))
        elif kind == "fairness":
            if not Path(arg).is_file():
                raise UsageError(f"{arg}: no such fairness config")
            fc = FairnessConfig.load(arg)
            fc.check(d, p)
            monitors.append(fairness_monitor(fc, p))
        else:
            raise UsageError(f"unknown monitor {kind!r}")
    return monitors


def cmd_validate(cfg: RunConfig, out: TextIO) -> int:
    d, p, pl = _load(cfg)
    rep = Report(cfg.format, cfg.trace)
    try:
        deriv = check_plan(d, p, pl)
    except ValidationError as e:
        code = _invalid(rep, e)
        rep.write(out)
        return code
    rep.doc["status"] = "valid"
    rep.doc["final_world"] = world_json(deriv.final_world)
    rep.lines.append(f"valid: {len(deriv.steps)} steps, goal satisfied")
    _derivation_report(rep, deriv)
    if cfg.trace:
        rep.lines.append("final world:")
        rep.lines += _world_lines(deriv.final_world)
    rep.write(out)
    return EXIT_OK


def cmd_execute(cfg: RunConfig, out: TextIO) -> int:
    d, p, pl = _load(cfg)
    monitor = compose(_monitors(cfg, d, p))
    rep = Report(cfg.format, cfg.trace)
    if not cfg.skip_validation:
        try:
            check_plan(d, p, pl)
        except ValidationError as e:
            code = _invalid(rep, e)
            rep.write(out)
            return code
    try:
        outcome = execute_monitored(pl, canonical_handler(d, p), monitor, p.initial_world)
    except GroundingError as exc:
        action = exc.action
        step = pl.actions.index(action) if action in pl.actions else None
        code = _invalid(
            rep, ValidationError("grounding-failed", p.initial_world, step, action, cause=exc)
        )
        rep.write(out)
        return code
    last = outcome.final_world if outcome.ok else outcome.error.world
    rep.steps(outcome.worlds, pl.actions[: len(outcome.worlds)], last)
    if outcome.error is not None:
        e = outcome.error
        rep.doc["status"] = "monitor-error"
        rep.doc["error"] = monitor_error_json(e)
        rep.lines.insert(0, f"monitor-error: {e.kind} at step {e.step}: {e}")
        if isinstance(e, GenderBiasError):
            tc = e.refutation.trip_count
            rep.lines.append(
                "trip counts: " + ", ".join(f"{k}={v}" for k, v in tc.as_dict().items())
            )
        rep.lines.append("world:")
        rep.lines += _world_lines(e.world)
        rep.write(out)
        return EXIT_MONITOR
    rep.doc["status"] = "executed"
    rep.doc["final_world"] = world_json(outcome.final_world)
    rep.lines.insert(0, f"executed: {len(pl)} steps")
    rep.lines.append("final world:")
    rep.lines += _world_lines(outcome.final_world)
    rep.write(out)
    return EXIT_OK


# Entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plancheck", description="Validate and execute STRIPS plans.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("validate", "check a plan and print its derivation"),
        ("execute", "validate, then execute a plan under monitors"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--domain", required=True)
        cmd.add_argument("--problem", required=True)
        cmd.add_argument("--plan", required=True)
        cmd.add_argument("--format", choices=("text", "json"), default=None)
        cmd.add_argument("--trace", action="store_true", help="print full worlds per step")
        if name == "execute":
            cmd.add_argument(
                "--monitor", action="append", default=[], metavar="SPEC",
                help="fuel=<n> or fairness=<config.json>; repeatable, applied in order",
            )
            cmd.add_argument("--skip-validation", action="store_true")
    return parser


def _diagnose(err: TextIO, fmt: str, kind: str, message: str, **extra: Any) -> None:
    if fmt == "json":
        err.write(json.dumps({"error": {"kind": kind, "message": message, **extra}}) + "\n")
    else:
        err.write(f"plancheck: error[{kind}]: {message}\n")


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    fmt = os.environ.get(FORMAT_ENV, "text")
    try:
        if fmt not in ("text", "json"):
            raise UsageError(f"{FORMAT_ENV} must be text or json, got {fmt!r}")
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:  # --help
            return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
        fmt = args.format or fmt
        cfg = RunConfig(
            domain_path=args.domain,
            problem_path=args.problem,
            plan_path=args.plan,
            monitors=getattr(args, "monitor", []),
            format=fmt,
            trace=args.trace,
            skip_validation=getattr(args, "skip_validation", False),
        )
        command = cmd_validate if args.command == "validate" else cmd_execute
        return command(cfg, out)
    except ParseError as exc:
        path = getattr(exc, "path", "<input>")
        if fmt == "json":
            _diagnose(err, fmt, "parse-error", exc.message, parse_kind=exc.kind, file=path,
                      line=exc.pos.line, column=exc.pos.column)
        else:
            err.write(f"{path}:{exc.pos}: error[{exc.kind}]: {exc.message}\n")
        return EXIT_USAGE
    except FairnessConfigError as exc:
        _diagnose(err, fmt, "config-error", str(exc))
        return EXIT_USAGE
    except UsageError as exc:
        _diagnose(err, fmt, "usage-error", str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
