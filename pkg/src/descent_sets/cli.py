"""Command-line front end: beta, factors, verify, table, histogram, cache."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import tables
from .beta import (
    EXACT_MAX_N,
    BetaTable,
    CacheFormatError,
    ExactRangeError,
    beta_single,
    build_beta_table,
    load_table,
    residue_histogram,
    save_table,
    verify_macmahon,
    weighted_histogram,
)
from .cdindex import (
    iter_middle_level_values,
    verify_phi2_double_factor,
    verify_phi2p_double_factor_2q,
    verify_phi2p_factor_q_plus_1,
)
from .combinat import mask_from_elements
from .cyclotomic import divides, scan_factors
from .delta import verify_euler_parity
from .qsym import verify_closed_form, verify_eleven_mod_3
from .witnesses import cross_check_witnesses

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_RANGE = 0, 1, 2, 3
CACHE_MIN_N = 16  # smaller tables rebuild faster than they load


# ---------------------------------------------------------------------------
# configuration and cache
# ---------------------------------------------------------------------------


def default_cache_dir() -> Path:
    env = os.environ.get("DESCENT_CACHE_DIR")
    if env:
        return Path(env)
    if sys.platform == "win32":
        base = Path(os.environ.get("LOCALAPPDATA", Path.home() / "AppData" / "Local"))
    elif sys.platform == "darwin":
        base = Path.home() / "Library" / "Caches"
    else:
        base = Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache"))
    return base / "descent-sets"


@dataclass
class RunConfig:
    cache_dir: Path = field(default_factory=default_cache_dir)
    fmt: str = "text"
    workers: int = 1
    m_max: int = 10_000
    even_only: bool = True
    use_cache: bool = True

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")
        if self.m_max < 2:
            raise ValueError("m_max must be >= 2")

    def table_path(self, n: int) -> Path:
        return self.cache_dir / f"beta_{n:02d}.dsbt"

    def get_table(self, n: int) -> BetaTable:
        if n > EXACT_MAX_N:
            raise ExactRangeError(f"exact tables stop at n = {EXACT_MAX_N}")
        path = self.table_path(n)
        if self.use_cache and n >= CACHE_MIN_N and path.exists():
            try:
                table = load_table(path)
                if table.n == n:
                    return table
            except CacheFormatError:
                pass  # rebuild over a stale or foreign file
        table = build_beta_table(n)
        if self.use_cache and n >= CACHE_MIN_N:
            path.parent.mkdir(parents=True, exist_ok=True)
            save_table(table, path)
        return table


class UsageError(Exception):
    pass


def parse_set(spec: str, n: int) -> int:
    spec = spec.strip()
    if not spec:
        return 0
    try:
        elems = [int(tok) for tok in spec.split(",")]
    except ValueError:
        raise UsageError(f"malformed set {spec!r}; expected e.g. 1,3,4") from None
    bad = [e for e in elems if not 1 <= e <= n - 1]
    if bad:
        raise UsageError(f"elements {bad} are outside [1, {n - 1}]")
    return mask_from_elements(elems)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Path):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, default=_jsonable)


def dump_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: _csv_cell(row.get(k)) for k in columns})
    return buf.getvalue().rstrip("\n")


def _csv_cell(v):
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v))
    return v


def emit(cfg: RunConfig, text: str, payload, columns: list[str], rows: list[dict]):
    if cfg.fmt == "json":
        print(dump_json(payload))
    elif cfg.fmt == "csv":
        print(dump_csv(columns, rows))
    else:
        print(text)


def _text_table(columns: list[str], rows: list[dict]) -> str:
    cells = [[str(_csv_cell(r.get(c, ""))) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_beta(args, cfg: RunConfig) -> int:
    mask = parse_set(args.set, args.n)
    if args.n <= EXACT_MAX_N and args.n >= CACHE_MIN_N and cfg.table_path(args.n).exists():
        value = cfg.get_table(args.n)[mask]
    else:
        value = beta_single(args.n, mask)
    elems = [i + 1 for i in range(args.n - 1) if mask >> i & 1]
    row = {"n": args.n, "set": elems, "beta": value}
    if args.mod:
        row["mod"] = args.mod
        row["residue"] = value % args.mod
    text = str(row["residue"] if args.mod else value)
    emit(cfg, text, row, list(row), [row])
    return EXIT_PASS


def cmd_factors(args, cfg: RunConfig) -> int:
    table = cfg.get_table(args.n)
    report = scan_factors(table, cfg.m_max, cfg.even_only, args.mult, cfg.workers)
    rows = [{"m": e.m, "multiplicity": e.multiplicity} for e in report.entries]
    text = tables.format_factors(args.n, report)
    emit(cfg, text if report.entries else "none", report.as_dict(), ["m", "multiplicity"], rows)
    return EXIT_PASS


def cmd_histogram(args, cfg: RunConfig) -> int:
    table = cfg.get_table(args.n)
    hist = residue_histogram(table, args.mod)
    rows = [{"j": j, "count": c} for j, c in enumerate(hist.counts)]
    if args.weighted:
        for row, s in zip(rows, weighted_histogram(table, args.mod).sums):
            row["weighted"] = s
    columns = list(rows[0])
    payload = {"n": args.n, "m": args.mod, "rows": rows}
    emit(cfg, _text_table(columns, rows), payload, columns, rows)
    return EXIT_PASS


def cmd_table(args, cfg: RunConfig) -> int:
    which = args.which
    if which == 1:
        res = tables.table1(long=args.long, n_max=args.n_max)
    elif which == 6:
        res = tables.verify_table6(3, args.n_max or 16, cfg.m_max if args.m_max else 3000, cfg.workers)
    else:
        res = tables.TABLES[which]()
    _print_table(res, cfg)
    return EXIT_PASS if res.passed else EXIT_FAIL


def _print_table(res: tables.TableResult, cfg: RunConfig):
    lines = [f"{res.name}", _text_table(res.columns, res.rows)]
    lines += [f"note: {x}" for x in res.notes]
    lines += [f"MISMATCH: {x}" for x in res.problems]
    lines.append("PASS" if res.passed else "FAIL")
    emit(cfg, "\n".join(lines), res.as_dict(), res.columns, res.rows)


# --- verify targets ---------------------------------------------------------


@dataclass
class Outcome:
    target: str
    passed: bool
    checks: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    skipped: str | None = None

    def check(self, name: str, passed: bool, detail: str = ""):
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})
        if not passed:
            self.passed = False

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "passed": self.passed,
            "skipped": self.skipped,
            "notes": self.notes,
            "checks": self.checks,
        }


def _from_report(target: str, report) -> Outcome:
    out = Outcome(target, True, notes=list(report.notes), skipped=report.skipped)
    for c in report.checks:
        name = c.name if c.asserted else f"{c.name} (informational)"
        out.checks.append({"name": name, "passed": c.passed, "detail": c.detail})
    out.passed = report.passed
    return out


def v_macmahon(args) -> Outcome:
    out = Outcome("macmahon", True)
    for n in range(2, (args.n_max or 12) + 1):
        r = verify_macmahon(n)
        detail = f"{r.checked} (S, k) pairs"
        if r.counterexample:
            detail += f"; first failure mask {r.counterexample[0]}, k = {r.counterexample[1]}"
        out.check(f"n = {n}", r.passed, detail)
    return out


def v_parity(args) -> Outcome:
    out = Outcome("parity", True)
    for n in [args.n] if args.n else [6, 11, 12, 16]:
        r = verify_euler_parity(n)
        detail = f"{r.checked} sets in {r.classes} classes"
        if r.counterexample is not None:
            detail += f"; first failure mask {r.counterexample}"
        out.check(f"n = {n}", r.passed, detail)
    return out


def _v_table(which: int) -> Callable:
    def run(args) -> Outcome:
        if which == 1:
            res = tables.table1(long=args.long, n_max=args.n_max)
        elif which == 6:
            res = tables.verify_table6(3, args.n_max or 16, args.m_max or 3000, args.workers)
        else:
            res = tables.TABLES[which]()
        out = Outcome(f"table{which}", res.passed, notes=list(res.notes))
        out.check(f"{len(res.rows)} rows reconstructed", res.passed, "; ".join(res.problems))
        return out

    return run


def v_middle_level(args) -> Outcome:
    out = Outcome("middle-level", True)
    for n in range(2, (args.n_max or 6) + 1):
        bad = [(w, a, b) for w, a, b in iter_middle_level_values(n) if a != b]
        detail = f"first failure {bad[0][0]}: direct {bad[0][1]}, closed form {bad[0][2]}" if bad else ""
        out.check(f"n = {n}", not bad, detail)
    return out


def v_phi2_double(args) -> Outcome:
    out = Outcome("phi2-double", True)
    for n in [args.n] if args.n else [6, 10, 12, 14]:
        r = verify_phi2_double_factor(n)
        sub = _from_report("", r)
        ok = r.passed
        detail = r.skipped or "; ".join(c["name"] for c in sub.checks if not c["passed"])
        out.check(f"n = {n}", ok, detail)
    return out


def v_phi2p_double_2q(args) -> Outcome:
    return _from_report("phi2p-double-2q", verify_phi2p_double_factor_2q(args.q or 3))


def v_phi2p_q_plus_1(args) -> Outcome:
    return _from_report("phi2p-q-plus-1", verify_phi2p_factor_q_plus_1(args.q or 11))


def v_phi6_q11(args) -> Outcome:
    out = Outcome("phi6-q11", True)
    out.check("Phi_6 divides Q_11", divides(11, 6), "exact root test")
    return out


def v_eleven_mod_3(args) -> Outcome:
    out = Outcome("eleven-mod-3", True)
    r = verify_eleven_mod_3(build_beta_table(11).values)
    out.check("four congruence families over R in [3, 8]", r.passed,
              f"{r.checked} sets" + (f"; first failure {r.counterexample}" if r.counterexample else ""))
    return out


def _v_closed_form(which: str) -> Callable:
    def run(args) -> Outcome:
        q = args.q or 9
        r = verify_closed_form(q, which)
        out = Outcome(f"closed-form-{which}", True)
        detail = f"{r.checked} sets" + (f"; first failure {r.counterexample}" if r.counterexample else "")
        out.check(f"{r.name} at q = {q}", r.passed, detail)
        return out

    return run


def v_witnesses(args) -> Outcome:
    out = Outcome("witnesses", True)
    for n in range(3, (args.n_max or 22) + 1):
        r = cross_check_witnesses(n, args.m_max or 10_000)
        out.check(f"n = {n}", r.passed, f"{len(r.confirmed)} confirmed" + (f", failed {r.failed}" if r.failed else ""))
    return out


VERIFY_TARGETS: dict[str, Callable] = {
    "macmahon": v_macmahon,
    "parity": v_parity,
    **{f"table{i}": _v_table(i) for i in range(1, 7)},
    "middle-level": v_middle_level,
    "phi2-double": v_phi2_double,
    "phi2p-double-2q": v_phi2p_double_2q,
    "phi2p-q-plus-1": v_phi2p_q_plus_1,
    "phi6-q11": v_phi6_q11,
    "eleven-mod-3": v_eleven_mod_3,
    "closed-form-2q": _v_closed_form("2q"),
    "closed-form-q+1": _v_closed_form("q+1"),
    "witnesses": v_witnesses,
}

# short names used by existing scripts
TARGET_ALIASES = {
    "prop71": "middle-level",
    "thm72": "phi2-double",
    "thm82": "phi2p-double-2q",
    "thm91": "phi2p-q-plus-1",
    "prop66": "phi6-q11",
    "lemma65": "eleven-mod-3",
    "lemma83": "closed-form-2q",
    "eq8": "closed-form-q+1",
}


def cmd_verify(args, cfg: RunConfig) -> int:
    target = TARGET_ALIASES.get(args.target, args.target)
    if target not in VERIFY_TARGETS:
        raise UsageError(f"unknown target {args.target!r}; choose from {', '.join(VERIFY_TARGETS)}")
    args.workers = cfg.workers
    out = VERIFY_TARGETS[target](args)
    rows = out.checks
    lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}" + (f"  ({c['detail']})" if c["detail"] else "")
             for c in rows]
    lines += [f"note: {x}" for x in out.notes]
    if out.skipped:
        lines.append(f"SKIPPED: {out.skipped}")
    lines.append(f"{target}: {'PASS' if out.passed else 'FAIL'}")
    emit(cfg, "\n".join(lines), out.as_dict(), ["name", "passed", "detail"], rows)
    return EXIT_PASS if out.passed else EXIT_FAIL


def cmd_cache(args, cfg: RunConfig) -> int:
    rows = []
    if args.action == "build":
        if args.n is None:
            raise UsageError("cache build needs --n")
        path = cfg.table_path(args.n)
        table = build_beta_table(args.n)
        path.parent.mkdir(parents=True, exist_ok=True)
        save_table(table, path)
        rows.append({"n": args.n, "path": str(path), "bytes": path.stat().st_size})
    elif args.action == "list":
        for path in sorted(cfg.cache_dir.glob("beta_*.dsbt")) if cfg.cache_dir.exists() else []:
            rows.append({"n": int(path.stem.split("_")[1]), "path": str(path), "bytes": path.stat().st_size})
    elif args.action == "clear":
        for path in sorted(cfg.cache_dir.glob("beta_*.dsbt")) if cfg.cache_dir.exists() else []:
            rows.append({"n": int(path.stem.split("_")[1]), "path": str(path), "bytes": path.stat().st_size})
            path.unlink()
    columns = ["n", "path", "bytes"]
    text = f"cache: {cfg.cache_dir}\n" + (_text_table(columns, rows) if rows else "(empty)")
    emit(cfg, text, {"cache_dir": str(cfg.cache_dir), "action": args.action, "tables": rows}, columns, rows)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--cache-dir", type=Path, default=None,
                        help="table cache (default: $DESCENT_CACHE_DIR or the user cache directory)")
    common.add_argument("--no-cache", action="store_true", help="never read or write cached tables")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--m-max", type=int, default=None)
    group = common.add_mutually_exclusive_group()
    group.add_argument("--even-only", dest="even_only", action="store_true", default=True,
                       help="scan m = 1 and even m only (default)")
    group.add_argument("--all-m", dest="even_only", action="store_false", help="scan every m")

    p = argparse.ArgumentParser(prog="descent-sets", description="Descent set statistics and their cyclotomic factors.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("beta", parents=[common], help="beta_n(S), optionally mod p")
    b.add_argument("--n", type=_positive, required=True)
    b.add_argument("--set", default="", help='comma separated elements of S, e.g. "1,9"')
    b.add_argument("--mod", type=_positive, default=None)
    b.set_defaults(func=cmd_beta)

    f = sub.add_parser("factors", parents=[common], help="cyclotomic factors of Q_n(t)")
    f.add_argument("--n", type=_positive, required=True)
    f.add_argument("--mult", action=argparse.BooleanOptionalAction, default=True,
                   help="test multiplicity >= 2 (default on)")
    f.set_defaults(func=cmd_factors)

    h = sub.add_parser("histogram", parents=[common], help="residue counts a_{m,j} of beta_n mod m")
    h.add_argument("--n", type=_positive, required=True)
    h.add_argument("--mod", type=_positive, required=True)
    h.add_argument("--weighted", action="store_true", help="also print the beta-weighted sums b_{m,j}")
    h.set_defaults(func=cmd_histogram)

    v = sub.add_parser("verify", parents=[common], help="run a verifier; exit 1 on failure")
    v.add_argument("target", help=", ".join(VERIFY_TARGETS))
    v.add_argument("--n", type=_positive, default=None)
    v.add_argument("--q", type=_positive, default=None)
    v.add_argument("--n-max", type=_positive, default=None)
    v.add_argument("--long", action="store_true", help="include long runs")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", parents=[common], help="rebuild a published table and diff it")
    t.add_argument("which", type=int, choices=range(1, 7))
    t.add_argument("--n-max", type=_positive, default=None)
    t.add_argument("--long", action="store_true", help="include rho(31) in table 1")
    t.set_defaults(func=cmd_table)

    c = sub.add_parser("cache", parents=[common], help="manage cached beta tables")
    c.add_argument("action", choices=["build", "list", "clear"])
    c.add_argument("--n", type=_positive, default=None)
    c.set_defaults(func=cmd_cache)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            cache_dir=args.cache_dir or default_cache_dir(),
            fmt=args.format,
            workers=args.workers,
            m_max=args.m_max if args.m_max is not None else 10_000,
            even_only=args.even_only,
            use_cache=not args.no_cache,
        )
        return args.func(args, cfg)
    except (UsageError, ValueError) as exc:
        if isinstance(exc, ExactRangeError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RANGE
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
