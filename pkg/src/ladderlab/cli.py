"""Command-line entry point.

    ladderlab ladder-build --t0 200 --t-max 6000 --cache ladder.tsv
    ladderlab verify --formula T35 --L 100 --U 0.5 --k 1,2,3 --cache ladder.tsv
    ladderlab sweep --L 100,1000,10000 --U 0.5 --formula C18 --out sweep.csv

Exit codes: 0 all checks within budget, 1 a budget violation or internal
defect, 2 usage error, 3 the ladder cache is missing, mismatched or too short.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import crossbreed
from .errors import CacheMismatch, LadderLabError, OutOfRange
from .factorize import DEFAULT_K0, FunctionFamily, certificate
from .ladder import (
    DEFAULT_L0,
    DEFAULT_T0,
    EULER_GAMMA,
    build_ladder,
    gap_ratio,
    load_cache,
    prime_count,
    save_cache,
)
from .zeta_eval import EvalConfig

CACHE_ENV = "LADDERLAB_CACHE"
CERT_SELECTORS = {"L1": "f1", "L2": "f2", "L3": "f3", "LP": "power"}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Settings readable from a ``key = value`` file; flags override them."""

    tol_exact: float = 1e-6
    tol_power: float = 1e-6
    tol_secondary: float = 1e-5
    tol_certificate: float = 1e-7
    asym_const: float = 5.0
    asym_floor: float = 1e-6
    k0: int = DEFAULT_K0
    L0: int = DEFAULT_L0
    correction_order: int = 6
    t0: float = DEFAULT_T0
    t_max: float | None = None

    def budgets(self) -> crossbreed.Budgets:
        return crossbreed.Budgets(exact=self.tol_exact, power=self.tol_power, secondary=self.tol_secondary,
                                  asym_const=self.asym_const, asym_floor=self.asym_floor)


def read_config(path) -> RunConfig:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(RunConfig)}
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = (part.strip() for part in line.partition("="))
        if not sep or key not in types:
            raise UsageError(f"{path}:{lineno}: unrecognised line {raw!r}")
        conv = int if types[key] in ("int", int) else float
        try:
            values[key] = conv(val)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return RunConfig(**values)


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cache", help=f"ladder cache file (default: ${CACHE_ENV})")
    p.add_argument("--config", help="key=value settings file")
    p.add_argument("--U", type=float, default=0.5, help="base segment length, in (0, pi/4)")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ladderlab", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ladder-build", help="integrate and persist the ladder checkpoint cache")
    p.add_argument("--t0", type=float, default=DEFAULT_T0)
    p.add_argument("--t-max", type=float, default=6000.0)
    p.add_argument("--cache", help=f"output path (default: ${CACHE_ENV})")
    p.add_argument("--correction-order", type=int, default=None)

    p = sub.add_parser("verify", help="evaluate one identity and report its residual")
    p.add_argument("--formula", required=True, choices=list(crossbreed.FORMULA_IDS) + list(CERT_SELECTORS))
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--k", type=_parse_ints, default=(1,), help="comma tuple, e.g. 1,2,3")
    p.add_argument("--delta4", type=float, default=0.5)
    p.add_argument("--delta5", type=float, default=2.0)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--json", dest="fmt", action="store_const", const="json")
    mode.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    _add_common(p)

    p = sub.add_parser("sweep", help="one report row per L, with the gap diagnostic")
    p.add_argument("--L", type=_parse_ints, required=True, help="comma list of L values")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--formula", default="C18", choices=crossbreed.FORMULA_IDS)
    p.add_argument("--delta4", type=float, default=0.5)
    p.add_argument("--delta5", type=float, default=2.0)
    _add_common(p)
    return parser


def _timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _cache_path(args) -> str | None:
    return args.cache or os.environ.get(CACHE_ENV) or None


def _required_height(L: int, k: int) -> float:
    """Generous estimate of the top of the order-k reverse iterate of pi L."""
    y = math.pi * (L + 1)
    for _ in range(k):
        y += 1.5 * (1.0 - EULER_GAMMA) * y / math.log(y) + 10.0
    return y + 100.0


def _model(args, cfg: RunConfig, L_max: int, k_max: int):
    path = _cache_path(args)
    if path:
        if not Path(path).exists():
            raise CacheMismatch(f"cache file {path} does not exist")
        return load_cache(path, correction_order=cfg.correction_order)
    t_max = cfg.t_max or max(6000.0, _required_height(L_max, k_max))
    return build_ladder(cfg.t0, t_max, EvalConfig(correction_order=cfg.correction_order))


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row) + "\n")
        return
    flat = []
    for row in rows:
        rec = {}
        for key, val in row.items():
            if isinstance(val, dict):
                rec.update({k: (";".join(map(str, v)) if isinstance(v, list) else v) for k, v in val.items()})
            elif isinstance(val, list):
                rec[key] = ";".join(map(str, val))
            else:
                rec[key] = val
        flat.append(rec)
    header = list(dict.fromkeys(k for rec in flat for k in rec))
    writer = csv.DictWriter(out, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)


def _pad_certificate_rows(rows: list[dict]) -> list[dict]:
    """Give every certificate row the keys of the largest k, in record order."""
    kmax = max(r["k"] for r in rows)
    keys = ["formula_id", "family", "L", "U", "k", "alpha0"]
    keys += [f"alpha{r}" for r in range(1, kmax + 1)] + [f"beta{r}" for r in range(1, kmax + 1)]
    keys += ["residual", "budget", "passed"]
    return [{key: row.get(key, "") for key in keys} for row in rows]


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_ladder_build(args, cfg: RunConfig) -> int:
    path = _cache_path(args)
    if not path:
        raise UsageError("ladder-build needs --cache or $" + CACHE_ENV)
    order = cfg.correction_order if args.correction_order is None else args.correction_order
    if args.t0 < 100:
        raise UsageError("t0 must be >= 100")
    if not args.t_max > args.t0 + 100:
        raise UsageError("t_max must exceed t0 + 100")
    if Path(path).exists():
        try:
            model = load_cache(path, t0=args.t0, t_max=args.t_max, correction_order=order)
        except CacheMismatch:
            model = None
        if model is not None:
            print(f"cache {path} already matches (t0={args.t0:g}, t_max={args.t_max:g}); nothing to do")
            return 0
    model = build_ladder(args.t0, args.t_max, EvalConfig(correction_order=order))
    save_cache(model, path)
    drift = model.grid - (model.shift + model.phi_cum)
    i = int(drift.argmax())
    top = model.grid[-1]
    ratio = drift[-1] / ((1.0 - EULER_GAMMA) * prime_count(top))
    print(f"wrote {path}: {len(model.grid)} checkpoints on [{model.t0:g}, {model.t_max:g}]")
    print(f"max drift t - phi1(t) = {drift[i]:.6f} at t = {model.grid[i]:g}; "
          f"drift / ((1-c) pi(t)) at t_max = {ratio:.4f}")
    return 0


def _check_L(L: int, cfg: RunConfig) -> None:
    if L < cfg.L0:
        raise UsageError(f"L={L} below L0={cfg.L0}")


def cmd_verify(args, cfg: RunConfig) -> int:
    _check_L(args.L, cfg)
    ks = args.k
    if not ks or any(not 1 <= k <= cfg.k0 for k in ks):
        raise UsageError(f"every k must lie in 1..{cfg.k0}")
    model = _model(args, cfg, args.L, max(ks))
    rows = []
    ok = True
    if args.formula in CERT_SELECTORS:
        fam_id = CERT_SELECTORS[args.formula]
        family = (FunctionFamily.power(args.delta4) if fam_id == "power"
                  else FunctionFamily(fam_id))
        for k in ks:
            cert = certificate(family, args.L, args.U, k, model, cfg.k0)
            rec = {"formula_id": args.formula, **cert.to_record(), "budget": cfg.tol_certificate}
            rec["passed"] = cert.residual <= cfg.tol_certificate
            ok &= rec["passed"]
            rows.append(rec)
        if args.fmt == "csv":
            rows = _pad_certificate_rows(rows)
    else:
        reports = crossbreed.run_formula(args.formula, args.L, args.U, ks, model,
                                         (args.delta4, args.delta5), cfg.budgets(), cfg.k0)
        for rep in reports:
            ok &= rep.passed
            rows.append(rep.to_record())
    if not args.no_timestamp:
        stamp = _timestamp()
        for rec in rows:
            rec["timestamp"] = stamp
    out = _open_out(args.out)
    try:
        _emit(rows, args.fmt or "json", out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if ok else 1


def cmd_sweep(args, cfg: RunConfig) -> int:
    Ls = sorted(set(args.L))
    for L in Ls:
        _check_L(L, cfg)
    if not 1 <= args.k <= cfg.k0:
        raise UsageError(f"k must lie in 1..{cfg.k0}")
    model = _model(args, cfg, Ls[-1], args.k)
    rows = []
    ok = True
    stamp = None if args.no_timestamp else _timestamp()
    for L in Ls:
        rep = crossbreed.run_formula(args.formula, L, args.U, (args.k,), model,
                                     (args.delta4, args.delta5), cfg.budgets(), cfg.k0)[0]
        dev = rep.deviation if rep.deviation is not None else rep.rel_residual
        ok &= rep.passed
        row = {"L": L, "deviation": f"{dev:.17g}", "budget": f"{rep.tol_budget:.17g}",
               "gap_ratio": f"{gap_ratio(L, args.U, model):.17g}", "passed": rep.passed}
        if stamp:
            row["timestamp"] = stamp
        rows.append(row)
    print("ladderlab: gap_ratio depends on the surrogate ladder; it is a diagnostic, not a theorem check",
          file=sys.stderr)
    out = _open_out(args.out)
    try:
        _emit(rows, "csv", out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if ok else 1


COMMANDS = {"ladder-build": cmd_ladder_build, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = read_config(args.config) if getattr(args, "config", None) else RunConfig()
        return COMMANDS[args.command](args, cfg)
    except (CacheMismatch, OutOfRange) as exc:
        print(f"ladderlab: cache problem: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError) as exc:
        print(f"ladderlab: {exc}", file=sys.stderr)
        return 2
    except (LadderLabError, OSError) as exc:
        print(f"ladderlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
