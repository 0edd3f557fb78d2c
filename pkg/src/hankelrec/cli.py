"""hankelrec command line.

Exit codes: 0 success / verified, 1 usage or precondition error, 2 enumeration
budget exceeded, 3 a verification found a mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .budget import BudgetExceeded
from .fourier import verify_thm1
from .gf import FieldError, field_of_size
from .homopoly import SeqVec
from .prob import (
    AGREEMENT_TOL,
    SWEEP_COLUMNS,
    Distribution,
    conjecture_sweep,
    error_bound,
    mu_hat,
    parse_distribution,
    pi_direct,
    pi_fourier,
    pi_montecarlo,
    threshold_check,
)
from .recurrence import enumerate_Hm, hankel, minimal_recursion, rank

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3

# fixed CSV column order per subcommand
CSV_COLUMNS: dict[str, tuple[str, ...]] = {
    "rank": ("q", "n", "m", "rank"),
    "minrec": ("q", "n", "status", "m0", "q0_coeffs", "rank"),
    "count-hm": ("q", "n", "m", "count", "expected", "ok"),
    "dft-verify": ("q", "n", "m", "points", "mismatches", "ok"),
    "prob": ("q", "n", "m", "method", "value_num", "value_den", "direct", "fourier",
             "main_term", "bound", "threshold", "agree"),
    "mc": ("q", "m", "alpha", "n", "samples", "seed", "estimate", "stderr", "hits",
           "target", "l1", "threshold", "strict_threshold"),
    "sweep": SWEEP_COLUMNS,
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    q: int | None = None
    n: int | None = None
    m: int | None = None
    alpha: int = 0
    sequence: list[int] | None = None
    mu: list[Any] = field(default_factory=list)
    samples: int | None = None
    seed: int | None = None
    fmt: str = "json"
    budget: int | None = None
    threads: int = 1
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        """Check the preconditions of the chosen subcommand."""
        if self.q is not None:
            try:
                self.ctx = field_of_size(self.q)
            except FieldError as exc:
                raise UsageError(f"--q: {exc}") from exc
            if self.sequence is not None:
                bad = [v for v in self.sequence if not 0 <= v < self.q]
                if bad:
                    raise UsageError(f"--seq: entries must lie in 0..{self.q - 1}, got {bad}")
        cmd = self.subcommand
        if cmd in ("rank", "minrec") and not self.sequence:
            raise UsageError("--seq: need at least one entry")
        if cmd == "rank" and self.m is not None and not 0 <= self.m <= len(self.sequence):
            raise UsageError(f"--m: need 0 <= m <= n+1 = {len(self.sequence)}")
        if cmd in ("count-hm", "dft-verify", "prob"):
            if self.n is None or self.n < -1:
                raise UsageError("--n: need n >= -1")
            if self.m is None or not 0 <= 2 * self.m <= self.n + 1:
                raise UsageError(f"--m: need 0 <= 2m <= n+1 (n={self.n})")
        if cmd == "mc":
            if self.m is None or self.m < 0:
                raise UsageError("--m: need m >= 0")
            if self.alpha < 0:
                raise UsageError("--alpha: need alpha >= 0")
            if self.samples is None or self.samples < 1:
                raise UsageError("--samples: need samples >= 1")
        if self.threads < 1:
            raise UsageError("--threads: need at least 1")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"malformed integer list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    common.add_argument("--budget", type=int, default=None,
                        help="max points of W_n to enumerate (default 2^20 or $HANKELREC_BUDGET)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    parser = _Parser(prog="hankelrec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("rank", parents=[common], help="rank of a Hankel matrix")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seq", type=_ints, required=True)
    p.add_argument("--m", type=int, default=None, help="row count minus one (default n // 2)")

    p = sub.add_parser("minrec", parents=[common], help="minimal linear recursion")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seq", type=_ints, required=True)

    p = sub.add_parser("count-hm", parents=[common], help="count H_m by enumeration")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--list", action="store_true", help="also list the members")

    p = sub.add_parser("dft-verify", parents=[common], help="check the H_m transform formula")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--json", dest="json_out", default=None, help="write the full report here")

    p = sub.add_parser("prob", parents=[common], help="exact probability of lying in H_m")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mu", required=True,
                   help='JSON: one distribution ["1/2","1/2"] or a list of n+1 of them')
    p.add_argument("--method", choices=("direct", "fourier", "both"), default="both")

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo singularity frequency")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--mu", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", parents=[common], help="Monte Carlo grid from a JSON config")
    p.add_argument("--config", required=True)
    return parser


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: invalid JSON ({exc})") from exc


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        subcommand=args.subcommand,
        q=getattr(args, "q", None),
        n=getattr(args, "n", None),
        m=getattr(args, "m", None),
        alpha=getattr(args, "alpha", 0),
        sequence=getattr(args, "seq", None),
        samples=getattr(args, "samples", None),
        seed=getattr(args, "seed", None),
        fmt="csv" if args.csv else "json",
        budget=args.budget,
        threads=args.threads,
    )
    if getattr(args, "mu", None) is not None:
        mu = _load_json(args.mu, "--mu")
        if not isinstance(mu, list) or not mu:
            raise UsageError("--mu: expected a JSON array")
        cfg.mu = mu
    for key in ("list", "json_out", "method", "config"):
        if hasattr(args, key):
            cfg.extra[key] = getattr(args, key)
    cfg.validate()
    return cfg


def _distributions(cfg: RunConfig, count: int) -> list[Distribution]:
    try:
        if all(isinstance(d, list) for d in cfg.mu):
            if len(cfg.mu) != count:
                raise UsageError(f"--mu: need {count} distributions, got {len(cfg.mu)}")
            return [parse_distribution(cfg.ctx, d) for d in cfg.mu]
        return [parse_distribution(cfg.ctx, cfg.mu)] * count
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"--mu: {exc}") from exc


# -- commands ---------------------------------------------------------------

def cmd_rank(cfg: RunConfig) -> tuple[dict, int]:
    x = SeqVec.of(cfg.ctx, cfg.sequence)
    m = cfg.m if cfg.m is not None else x.n // 2
    return {"command": "rank", "q": cfg.q, "n": x.n, "m": m, "rank": rank(hankel(x, m))}, EXIT_OK


def cmd_minrec(cfg: RunConfig) -> tuple[dict, int]:
    x = SeqVec.of(cfg.ctx, cfg.sequence)
    found = minimal_recursion(x)
    out: dict = {"command": "minrec", "q": cfg.q, "n": x.n}
    if found is None:
        out.update(status="none below threshold", m0=None, q0_coeffs=None, q0=None)
    else:
        m0, q0 = found
        out.update(status="found", m0=m0, q0_coeffs=list(q0.coeffs), q0=str(q0))
    out["rank"] = rank(hankel(x, (x.n + 1) // 2))
    return out, EXIT_OK


def cmd_count_hm(cfg: RunConfig) -> tuple[dict, int]:
    members = [list(x.entries) for x in enumerate_Hm(cfg.ctx, cfg.n, cfg.m, cfg.budget)]
    expected = cfg.q ** (2 * cfg.m)
    ok = len(members) == expected
    out = {"command": "count-hm", "q": cfg.q, "n": cfg.n, "m": cfg.m,
           "count": len(members), "expected": expected, "ok": ok}
    if cfg.extra.get("list"):
        out["members"] = members
    return out, EXIT_OK if ok else EXIT_MISMATCH


def cmd_dft_verify(cfg: RunConfig) -> tuple[dict, int]:
    report = verify_thm1(cfg.ctx, cfg.n, cfg.m, cfg.budget)
    path = cfg.extra.get("json_out")
    if path:
        with open(path, "w") as fh:
            json.dump(report.to_dict(), fh, indent=1)
            fh.write("\n")
    out = {"command": "dft-verify", **report.to_dict(with_entries=False)}
    return out, EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_prob(cfg: RunConfig) -> tuple[dict, int]:
    mus = _distributions(cfg, cfg.n + 1)
    method = cfg.extra.get("method", "both")
    out: dict = {"command": "prob", "q": cfg.q, "n": cfg.n, "m": cfg.m, "method": method}
    code = EXIT_OK
    direct = fourier = None
    if method in ("direct", "both"):
        direct = pi_direct(mus, cfg.m, cfg.budget)
        v = direct.value
        out.update(direct=f"{v.numerator}/{v.denominator}", value_num=v.numerator, value_den=v.denominator)
    if method in ("fourier", "both"):
        fourier = pi_fourier(mus, cfg.m, cfg.budget)
        out.update(fourier=fourier.value, tail_re=fourier.tail.real, tail_im=fourier.tail.imag)
    res = direct or fourier
    out["main_term"] = str(res.main_term)
    out["bound"] = error_bound(mus, cfg.m)
    out["l1"] = [mu_hat(mu).l1 for mu in mus]
    out["threshold"] = cfg.q ** 0.5
    if direct is not None and fourier is not None:
        agree = abs(float(direct.value) - fourier.value) <= AGREEMENT_TOL
        out["agree"] = agree
        if not agree:
            code = EXIT_MISMATCH
    return out, code


def cmd_mc(cfg: RunConfig) -> tuple[dict, int]:
    (mu,) = _distributions(cfg, 1)
    res = pi_montecarlo(mu, cfg.m, cfg.alpha, cfg.samples, cfg.seed or 0, cfg.threads)
    th = threshold_check(mu)
    out = {"command": "mc", "q": cfg.q, **res.to_dict(),
           "target": float(Fraction(1, cfg.q ** (cfg.alpha + 1))),
           "l1": th.l1, "threshold": th.threshold, "strict_threshold": th.strict_threshold}
    return out, EXIT_OK


def cmd_sweep(cfg: RunConfig) -> tuple[dict, int]:
    path = cfg.extra["config"]
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"--config: {exc}") from exc
    config = _load_json(text, "--config")
    if not isinstance(config, dict):
        raise UsageError("--config: expected a JSON object")
    try:
        rows = conjecture_sweep(config, threads=cfg.threads)
    except (ValueError, FieldError) as exc:
        raise UsageError(f"--config: {exc}") from exc
    return {"command": "sweep", "rows": rows}, EXIT_OK


COMMANDS = {
    "rank": cmd_rank,
    "minrec": cmd_minrec,
    "count-hm": cmd_count_hm,
    "dft-verify": cmd_dft_verify,
    "prob": cmd_prob,
    "mc": cmd_mc,
    "sweep": cmd_sweep,
}


def _csv_cell(v) -> str:
    if isinstance(v, list):
        return " ".join(str(c) for c in v)
    if v is None:
        return ""
    return str(v)


def render(out: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out) + "\n"
    cols = CSV_COLUMNS[out["command"]]
    rows = out["rows"] if out["command"] == "sweep" else [out]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_csv_cell(row.get(c)) for c in cols])
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        out, code = COMMANDS[cfg.subcommand](cfg)
    except BudgetExceeded as exc:
        print(f"hankelrec: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError) as exc:
        print(f"hankelrec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(out, cfg.fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
