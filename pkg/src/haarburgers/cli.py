"""Command-line front end.

Subcommands::

    haarburgers solve <runfile>     solution profiles at snapshot times
    haarburgers table <1|2|3|4>     recompute a published error table
    haarburgers converge <runfile>  errors over a list of resolution levels

Exit status is 0 on success, 2 for configuration errors and 3 for
numerical failures (divergence, singular systems, uncertifiable oracle).

Run files hold one ``key = value`` pair per line; ``#`` starts a comment.
"""

from __future__ import annotations

import argparse
import io
import logging
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .benchmarks import TABLES
from .errors import ConfigError, NumericalError
from .fd_oracle import fd_reference_at
from .metrics import convergence_study, error_norms
from .problems import make_test_problem
from .stepper import SolverConfig, run

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SOLUTION_HEADER = ("t", "x_star", "w_numeric", "w_exact", "abs_error")
CONVERGENCE_HEADER = ("J", "dx", "l_inf", "l_2", "ratio_to_previous", "observed_order", "K", "bound")
TABLE_HEADER = (
    "table", "problem", "J", "dx", "dt", "T", "norm",
    "computed", "printed", "rel_deviation", "ratio",
)


def fmt(value) -> str:
    """8 significant digits in scientific notation; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isnan(v):
        return ""
    return f"{v:.7e}"


def write_csv(stream, header, rows) -> None:
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


@dataclass
class RunFile:
    """Parsed run file (see module docstring for the format)."""

    problem: int
    nu: float
    dt: float
    T: float
    J: int | None = None
    J_list: list[int] = field(default_factory=list)
    c0: float | None = None
    sigma: float | None = None
    snapshots: list[float] = field(default_factory=list)
    output: str | None = None
    accuracy_target: float = 1e-6

    def make_problem(self):
        return make_test_problem(self.problem, self.nu, c0=self.c0, sigma=self.sigma)


def _int(key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from None


def _float(key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected a number, got {raw!r}") from None


def _list(conv):
    def parse(key, raw):
        return [conv(key, part.strip()) for part in raw.split(",") if part.strip()]
    return parse


_KEYS = {
    "problem": _int,
    "nu": _float,
    "dt": _float,
    "T": _float,
    "J": _int,
    "J_list": _list(_int),
    "c0": _float,
    "sigma": _float,
    "snapshots": _list(_float),
    "output": lambda key, raw: raw,
    "accuracy_target": _float,
}


def parse_runfile(text: str, *, need: tuple[str, ...] = ()) -> RunFile:
    """Parse run-file text; unknown or duplicate keys are configuration errors."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _KEYS[key](key, raw)
    for key in ("problem", "nu", "dt", "T") + need:
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
    return RunFile(**values)


def read_runfile(path: str, **kw) -> RunFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read run file {path!r}: {exc.strerror}") from None
    return parse_runfile(text, **kw)


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    buf = io.StringIO()
    yield buf
    Path(path).write_text(buf.getvalue(), newline="\n")


def solve_rows(rf: RunFile):
    """Rows of the solution CSV for a run file."""
    spec = rf.make_problem()
    if rf.J is None:
        raise ConfigError("missing required key 'J'")
    config = SolverConfig(rf.J, rf.dt, rf.T)
    times = sorted(set(rf.snapshots or [rf.T]))
    result = run(spec, config, snapshot_times=times)
    xs = spec.a + spec.L * result.basis.x
    rows = []
    for state in result.snapshots:
        if spec.has_exact:
            exact = spec.exact(xs, state.t)
            err = np.abs(state.w - exact)
        else:
            exact = err = [None] * xs.size
        for x, w, e, d in zip(xs, state.w, exact, err):
            rows.append((state.t, x, w, e, d))
    return rows


def cmd_solve(args) -> int:
    rf = read_runfile(args.runfile, need=("J",))
    rows = solve_rows(rf)
    with _output(args.out or rf.output) as out:
        write_csv(out, SOLUTION_HEADER, rows)
    return EXIT_OK


def table_rows(n: int):
    """Recompute the printed cells of table ``n``."""
    if n not in TABLES:
        raise ConfigError(f"unknown table {n!r}; expected 1-4")
    cache = {}
    rows = []
    prev_by_norm: dict[str, float] = {}
    for cell in TABLES[n]:
        if cell.run_key not in cache:
            spec = cell.make_problem()
            result = run(spec, SolverConfig(cell.J, cell.dt, cell.T))
            xs = spec.a + spec.L * result.basis.x
            cache[cell.run_key] = error_norms(
                result.final.w, spec.exact(xs, cell.T), result.basis.dx, t=cell.T
            )
        report = cache[cell.run_key]
        computed = getattr(report, cell.norm)
        ratio = None
        if n == 4:
            # successive error ratios as the spacing halves
            prev = prev_by_norm.get(cell.norm)
            ratio = prev / computed if prev else None
            prev_by_norm[cell.norm] = computed
        rel = (computed - cell.printed) / cell.printed
        rows.append((
            cell.table, cell.problem, cell.J, 1.0 / 2 ** (cell.J + 1), cell.dt, cell.T,
            cell.norm, computed, cell.printed, rel, ratio,
        ))
    return rows


def cmd_table(args) -> int:
    rows = table_rows(args.n)
    with _output(args.out) as out:
        write_csv(out, TABLE_HEADER, rows)
    return EXIT_OK


def converge_rows(rf: RunFile):
    if not rf.J_list:
        raise ConfigError("missing required key 'J_list'")
    spec = rf.make_problem()
    reference = None
    if not spec.has_exact:
        target = rf.accuracy_target
        reference = lambda xs: fd_reference_at(spec, xs, rf.T, target)  # noqa: E731
    rows = convergence_study(spec, rf.dt, rf.T, rf.J_list, reference=reference)
    return [
        (r.J, r.dx, r.l_inf, r.l_2, r.ratio_to_previous, r.observed_order, r.K, r.bound)
        for r in rows
    ]


def cmd_converge(args) -> int:
    rf = read_runfile(args.runfile, need=("J_list",))
    rows = converge_rows(rf)
    with _output(args.out or rf.output) as out:
        write_csv(out, CONVERGENCE_HEADER, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarburgers",
        description="Haar wavelet solver for the generalized Burgers equation.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one run file and write profiles as CSV")
    p.add_argument("runfile")
    p.add_argument("--out", help="output CSV path (default: run file 'output' or stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="recompute a published error table")
    p.add_argument("n", type=int, choices=sorted(TABLES))
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("converge", help="error study over J_list")
    p.add_argument("runfile")
    p.add_argument("--out", help="output CSV path (default: run file 'output' or stdout)")
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
