"""Command-line entry point: ``lecert <subcommand> <file> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .admissibility import DEFAULT_T_SAMPLES, MODES, PER_VERTEX, check_admissible, fmt_t
from .certify import EQUISINGULAR, CertifyOptions, certify_family
from .le import choose_exponent_a, generic_slice_milnor, le_numbers
from .newton import newton_number, newton_polyhedron
from .nondegen import is_newton_nondegenerate
from .parse import parse_family
from .poly import PolyFamily
from .probe import ISOLATED, LINE, probe_ratios

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    input: str
    t_samples: list[str] = field(default_factory=list)
    mode: str = PER_VERTEX
    seed: int = 0
    nondegen_tier: int = 3
    json: str | None = None
    csv: str | None = None
    quiet: bool = False
    threads: int = 1
    extra: dict = field(default_factory=dict)
    version: str = __version__


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors share the generic error code
        self.exit(EXIT_ERROR, f"lecert: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _rational_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_rational(x) for x in text.split(",") if x.strip())


def _mode(text: str) -> str:
    mode = text.replace("-", "_")
    if mode not in MODES:
        raise argparse.ArgumentTypeError("mode must be per-vertex or strict")
    return mode


def _common() -> argparse.ArgumentParser:
    # defaults are suppressed so flags work before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS,
                   help="write the JSON result to PATH ('-' for stdout)")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    p.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS,
                   help="report timings on stderr")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="lecert", parents=[common],
                     description="Equisingularity certificates for families of line singularities.")
    parser.add_argument("--version", action="version", version=f"lecert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file")
        return p

    add("parse", "parse and print the canonical form")
    for name, help_ in (("newton", "Newton polyhedron"), ("nu", "Newton number")):
        add(name, help_).add_argument("--t", type=_rational, help="specialize t (default: generic support)")
    p = add("nondegen", "Newton non-degeneracy verdict")
    p.add_argument("--t", type=_rational)
    p.add_argument("--nondegen-tier", type=int, choices=(1, 2, 3), default=3)
    p = add("admissible", "admissibility report")
    p.add_argument("--mode", type=_mode, default=PER_VERTEX)
    p.add_argument("--t-samples", type=_rational_list, default=DEFAULT_T_SAMPLES)
    p.add_argument("--nondegen-tier", type=int, choices=(1, 2, 3), default=3)
    p = add("le", "Lê numbers at one parameter value")
    p.add_argument("--t", type=_rational, default=Fraction(0))
    p.add_argument("--a", type=int, help="ILM exponent (default: chosen by stabilization)")
    p.add_argument("--t-samples", type=_rational_list, default=DEFAULT_T_SAMPLES)
    p.add_argument("--cross-check", action="store_true", help="add the generic-slice Milnor number")
    p.add_argument("--nondegen-tier", type=int, choices=(1, 2, 3), default=3)
    p = add("certify", "full certificate")
    p.add_argument("--mode", type=_mode, default=PER_VERTEX)
    p.add_argument("--t-samples", type=_rational_list, default=DEFAULT_T_SAMPLES)
    p.add_argument("--nondegen-tier", type=int, choices=(1, 2, 3), default=3)
    p = add("probe", "numerical regularity probe along arcs")
    p.add_argument("--arcs", type=int, default=20)
    p.add_argument("--s0", type=float, default=0.1)
    p.add_argument("--ratio", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=14)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--probe-mode", choices=(LINE, ISOLATED), default=LINE)
    return parser


def atomic_write(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(path: str) -> PolyFamily:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_family(text)


def _target(f: PolyFamily, t: Fraction | None):
    return f.specialize_t(t) if t is not None else f.support()


def _run(args: argparse.Namespace, cfg: RunConfig) -> tuple[dict, list[str], int]:
    f = _load(args.file)
    cmd = args.command
    tier = getattr(args, "nondegen_tier", 3)
    if cmd == "parse":
        result = {"n": f.n, "canonical": f.unparse(), "t_degree": f.t_degree(),
                  "support": [list(e) for e in f.support()]}
        return result, [f.unparse().rstrip("\n")], EXIT_OK
    if cmd == "newton":
        poly = newton_polyhedron(_target(f, args.t))
        d = poly.to_dict()
        lines = [f"vertices: {' '.join(str(v) for v in d['vertices'])}",
                 f"compact faces: {len(d['compact_faces'])}"]
        return d, lines, EXIT_OK
    if cmd == "nu":
        nu = newton_number(newton_polyhedron(_target(f, args.t)))
        return {"nu": nu}, [str(nu)], EXIT_OK
    if cmd == "nondegen":
        ft = f.specialize_t(args.t) if args.t is not None else f
        if not ft.is_t_free():
            raise CliError("family depends on t: pass --t")
        v = is_newton_nondegenerate(ft, tier=tier, seed=cfg.seed)
        return v.to_dict(), [v.status], EXIT_OK
    if cmd == "admissible":
        rep = check_admissible(f, args.t_samples, mode=args.mode, tier=tier, seed=cfg.seed)
        lines = [rep.overall] + ([rep.reason] if rep.reason else [])
        return rep.to_dict(), lines, EXIT_OK
    if cmd == "le":
        a = args.a if args.a is not None else choose_exponent_a(f, args.t_samples, tier=tier, seed=cfg.seed)
        ft = f.specialize_t(args.t)
        row = le_numbers(ft, a, tier=tier, seed=cfg.seed)
        d = row.to_dict()
        d["t"] = fmt_t(args.t)
        if args.cross_check:
            d["slice_mu"] = generic_slice_milnor(ft, seed=cfg.seed, tier=tier)
        line = f"t={d['t']} lambda0={row.lambda0} lambda1={row.lambda1} a={a}"
        if args.cross_check:
            line += f" slice_mu={d['slice_mu']}"
        return d, [line], EXIT_OK
    if cmd == "certify":
        opts = CertifyOptions(t_samples=args.t_samples, mode=args.mode, tier=tier,
                              seed=cfg.seed, threads=cfg.threads)
        cert = certify_family(f, opts)
        d = cert.to_dict()
        lines = [f"verdict: {cert.verdict}", f"admissibility: {cert.admissibility.overall}"]
        for t, row in d["le_table"].items():
            lines.append(f"  t={t}: " + (f"lambda0={row['lambda0']} lambda1={row['lambda1']}" if row else "n/a"))
        lines += [f"reason: {r}" for r in cert.reasons]
        return d, lines, EXIT_OK if cert.verdict == EQUISINGULAR else EXIT_INCONCLUSIVE
    if cmd == "probe":
        rep = probe_ratios(f, count=args.arcs, seed=cfg.seed, s0=args.s0, ratio=args.ratio,
                           steps=args.steps, mode=args.probe_mode)
        if args.csv:
            atomic_write(args.csv, rep.to_csv())
        d = rep.to_dict()
        lines = [f"{r}: pass on {frac:.0%} of arcs" for r, frac in d["pass_fraction"].items()]
        lines.append(f"identity max relative error: {d['identity_max_error']:.3g}")
        return d, lines, EXIT_OK
    raise CliError(f"unknown command {cmd}")


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = 42 if args.command == "probe" else 0
    cfg = RunConfig(
        subcommand=args.command,
        input=args.file,
        t_samples=[fmt_t(t) for t in getattr(args, "t_samples", ())],
        mode=getattr(args, "mode", PER_VERTEX),
        seed=seed,
        nondegen_tier=getattr(args, "nondegen_tier", 3),
        json=getattr(args, "json", None),
        csv=getattr(args, "csv", None),
        quiet=getattr(args, "quiet", False),
        threads=getattr(args, "threads", 1),
    )
    for key in ("t", "a", "cross_check", "arcs", "s0", "ratio", "steps", "probe_mode"):
        if hasattr(args, key):
            val = getattr(args, key)
            cfg.extra[key] = fmt_t(val) if isinstance(val, Fraction) else val
    started = time.perf_counter()
    try:
        result, lines, code = _run(args, cfg)
        result = dict(result)
        result["run_config"] = asdict(cfg)
        text = json.dumps(result, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    except Exception as exc:  # every failure becomes a one-line diagnostic
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"lecert: error: {msg}", file=sys.stderr)
        return EXIT_ERROR
    try:
        if cfg.json and cfg.json != "-":
            atomic_write(cfg.json, text)
    except OSError as exc:
        print(f"lecert: error: cannot write {cfg.json}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_ERROR
    if cfg.json == "-":
        sys.stdout.write(text)
    elif not cfg.quiet:
        print("\n".join(lines))
    if getattr(args, "verbose", False):
        print(f"elapsed {time.perf_counter() - started:.3f}s", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())
