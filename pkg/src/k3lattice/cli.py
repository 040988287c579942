"""Command-line entry point: ``k3lattice {table,qp,heegner,orbits,search,selftest}``.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import List, Optional, Sequence

from . import borcherds, shortvec
from .errors import BudgetExceeded, ConsistencyError, LatticeError

log = logging.getLogger("k3lattice")

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4
COMMANDS = ("table", "qp", "heegner", "orbits", "search", "selftest")
ENV_PREFIX = "BLL_"
DEFAULT_CONFIG = Path.home() / ".config" / "k3lattice" / "config.json"


@dataclass
class RunConfig:
    command: str
    g: Optional[int] = None
    v: Optional[List[str]] = None
    format: str = "json"
    cache_dir: Optional[str] = None
    budget: int = shortvec.DEFAULT_BUDGET
    threads: int = 1
    objective: str = "minimize"
    side: str = "K"
    seed: int = 0

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise LatticeError(f"unknown command {self.command!r}")
        if self.command in ("qp", "heegner") and (self.g is None or self.v is None):
            raise LatticeError(f"{self.command} needs --g and --v")
        if self.command in ("orbits", "search") and self.g is None:
            raise LatticeError(f"{self.command} needs --g")
        if self.format not in ("json", "markdown"):
            raise LatticeError("format must be json or markdown")
        if self.v is not None:
            borcherds.parse_chart_vector(self.v)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _markdown_table(reports) -> str:
    gs = [r.g for r in reports]
    lines = [
        "| g | " + " | ".join(str(g) for g in gs) + " |",
        "|---|" + "---|" * len(gs),
        "| n(g) | " + " | ".join(str(r.n) for r in reports) + " |",
        "",
        "| g | v | r | k | n | type | disc_order | crosscheck |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for r in reports:
        v = "(" + ", ".join(str(c) for c in r.v_chart) + ")"
        check = f"{r.crosscheck.theta_over_delta_q0} = 2k" if r.crosscheck.passed else f"FAIL {r.crosscheck.theta_over_delta_q0}"
        lines.append(f"| {r.g} | {v} | {r.r} | {r.k} | {r.n} | {r.root_type} | {r.disc_order} | {check} |")
    return "\n".join(lines)


def _markdown_dict(d: dict) -> str:
    lines = ["| field | value |", "|---|---|"]
    for k, v in d.items():
        lines.append(f"| {k} | {json.dumps(v) if not isinstance(v, str) else v} |")
    return "\n".join(lines)


def _markdown_ledger(led: borcherds.HeegnerLedger) -> str:
    lines = [f"g = {led.g}, A = " + " x ".join(f"Z/{d}" for d in led.invariant_factors), ""]
    lines += ["| lambda | q(lambda) | x | c_lambda(-1-x) |", "|---|---|---|---|"]
    for e in led.entries:
        lines.append(f"| {list(e.lam)} | {e.q_lambda} | {e.x} | {e.multiplicity} |")
    lines += ["", "divisor of F(g): H + " + " + ".join(
        f"{e['multiplicity']} H({e['lambda']}, {e['heegner_x']})" for e in led.f_divisor_entries[1:]
    )]
    return "\n".join(lines)


def _markdown_search(res: borcherds.SearchResult) -> str:
    lines = [
        f"g = {res.g}: {res.representatives} primitive W(D8)-orbit representatives, shell of {res.shell_size} vectors",
        "",
        "| rank | r | n | type | v | orbits |",
        "|---|---|---|---|---|---|",
    ]
    for i, c in enumerate(res.candidates, 1):
        v = "(" + ", ".join(str(x) for x in c.v_chart) + ")"
        lines.append(f"| {i} | {c.r} | {c.n} | {c.root_type} | {v} | {c.orbits} |")
    return "\n".join(lines)


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg.validate()
        shortvec.configure_cache(cfg.cache_dir)
        if cfg.command == "table":
            reports = borcherds.paper_table(threads=cfg.threads, budget=cfg.budget)
            bad = [r.g for r in reports if not r.crosscheck.passed]
            text = _markdown_table(reports) if cfg.format == "markdown" else dumps([r.to_dict() for r in reports])
            print(text, file=out)
            if bad:
                log.error("weight cross-check failed for g = %s", bad)
                return EXIT_INTERNAL
        elif cfg.command == "qp":
            rep = borcherds.quasi_pullback(cfg.g, cfg.v, budget=cfg.budget)
            d = rep.to_dict()
            print(_markdown_dict(d) if cfg.format == "markdown" else dumps(d), file=out)
            if not rep.crosscheck.passed:
                return EXIT_INTERNAL
        elif cfg.command == "heegner":
            led = borcherds.heegner_ledger(cfg.g, cfg.v, side=cfg.side, budget=cfg.budget)
            print(_markdown_ledger(led) if cfg.format == "markdown" else dumps(led.to_dict()), file=out)
        elif cfg.command == "orbits":
            d = borcherds.eichler_minus2_orbits(cfg.g).to_dict()
            print(_markdown_dict(d) if cfg.format == "markdown" else dumps(d), file=out)
        elif cfg.command == "search":
            res = borcherds.search_v(cfg.g, objective=cfg.objective)
            print(_markdown_search(res) if cfg.format == "markdown" else dumps(res.to_dict()), file=out)
        elif cfg.command == "selftest":
            from .selftest import run_selftest

            summary = run_selftest(seed=cfg.seed)
            print(dumps(summary) if cfg.format == "json" else _markdown_dict(summary), file=out)
            if summary["failed"]:
                return EXIT_INTERNAL
        shortvec.get_cache().flush()
        return EXIT_OK
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"error: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3lattice", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--g", type=int)
    p.add_argument("--v", help="8 comma-separated chart coordinates, e.g. 3,1,0,0,0,0,0,0 or 5/2,1/2,...")
    p.add_argument("--format", choices=("json", "markdown"))
    p.add_argument("--cache-dir")
    p.add_argument("--budget", type=int, help="enumeration node cap")
    p.add_argument("--threads", type=int)
    p.add_argument("--side", choices=("K", "Lambda"), help="quadratic form used on A for heegner")
    p.add_argument("--seed", type=int, help="selftest RNG seed")
    p.add_argument("--config", help=f"JSON config file (default {DEFAULT_CONFIG})")
    obj = p.add_mutually_exclusive_group()
    obj.add_argument("--minimize", dest="objective", action="store_const", const="minimize")
    obj.add_argument("--maximize", dest="objective", action="store_const", const="maximize")
    return p


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Flags override BLL_* environment variables, which override the config file."""
    environ = os.environ if environ is None else environ
    merged = {}
    path = Path(args.config or environ.get(ENV_PREFIX + "CONFIG") or DEFAULT_CONFIG)
    if path.exists():
        merged.update(json.loads(path.read_text()))
    names = {f.name: f for f in fields(RunConfig)}
    for name in names:
        env = environ.get(ENV_PREFIX + name.upper())
        if env is not None:
            merged[name] = env
    for name in names:
        val = getattr(args, name, None)
        if val is not None:
            merged[name] = val
    merged["command"] = args.command
    for name in ("g", "budget", "threads", "seed"):
        if merged.get(name) is not None:
            merged[name] = int(merged[name])
    if isinstance(merged.get("v"), str):
        merged["v"] = [s.strip() for s in merged["v"].split(",")]
    unknown = set(merged) - set(names)
    if unknown:
        raise LatticeError(f"unknown config keys {sorted(unknown)}")
    return RunConfig(**merged)


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
