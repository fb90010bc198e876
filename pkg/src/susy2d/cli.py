"""Batch command-line entry point.

Subcommands
-----------
verify-symbolic   run the exact identity registry (plus the variable-change
                  consistency check of the generalized system)
verify-numeric    run the numeric suite: ladder actions, factorization
                  roundtrip, on-shell su(2) residual, zero-energy subspace
spectrum          tabulate (n, m, E_numeric, E_reference, |delta|)
ladder-diagram    emit the (n, m) lattice with one arrow per ladder operator

Common flags: --system {ho,ha,gen}, --zeta p/q, --A x, --B x,
--grid r_max,n_points, --tol x, --format {json,csv,text}, --out PATH,
--strict, --config FILE.

Configuration may also come from a flat key=value file (--config); command
line flags override file values.  Unknown keys are rejected.  When --out is
a relative path it is resolved against $SUSY2D_REPORT_DIR (default: the
current directory).

Exit codes: 0 all checks passed; 1 at least one check failed; 2 bad usage
or configuration.  JSON output is canonically ordered and byte-identical
across runs with the same configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction

from . import checks as ck
from . import identities as ident
from . import numerics as nm
from . import systems as sy
from .systems import SystemId

REPORT_DIR_ENV = "SUSY2D_REPORT_DIR"

#: zeta values exercised by the default transform-consistency run
DEFAULT_TRANSFORM_ZETAS = (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))
#: zeta values exercised by the default zero-energy run
DEFAULT_ZERO_ENERGY_ZETAS = (Fraction(1), Fraction(3, 2), Fraction(2))

#: a user grid coarser than this triggers a too-coarse warning (an error
#: under --strict): the default tolerances assume the reference resolution
MIN_SOUND_POINTS = 2000


class ConfigError(ValueError):
    """Invalid configuration or usage (exit code 2).

    Subclasses ValueError so argparse converts a failing flag parser into a
    regular usage error.
    """


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one command invocation."""

    system: str | None = None
    zeta: Fraction | None = None
    A: Fraction = Fraction(1, 2)
    B: Fraction | None = None
    grid: tuple[float, int] | None = None
    tol: float | None = None
    format: str = "text"
    out: str | None = None
    strict: bool = False
    identity: tuple[str, ...] = ()
    op: str | None = None
    state: tuple[int, int] | None = None
    level: int | None = None
    count: int = 6


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def parse_grid(text: str) -> tuple[float, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--grid wants r_max,n_points, got {text!r}")
    try:
        r_max, n_points = float(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}") from exc
    if r_max <= 0 or n_points < 8:
        raise ConfigError("grid needs r_max > 0 and n_points >= 8")
    return r_max, n_points


def parse_state(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--state wants n,m, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"bad state spec {text!r}") from exc


_CONFIG_PARSERS = {
    "system": str,
    "zeta": parse_fraction,
    "A": parse_fraction,
    "B": parse_fraction,
    "grid": parse_grid,
    "tol": float,
    "format": str,
    "out": str,
    "strict": lambda v: v.lower() in ("1", "true", "yes", "on"),
    "identity": lambda v: tuple(s for s in v.split(",") if s),
    "op": str,
    "state": parse_state,
    "level": int,
    "count": int,
}


def read_config_file(path: str) -> dict:
    """Parse a flat key = value file; '#' starts a comment."""
    values: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_PARSERS[key](value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults <- config file <- command-line flags."""
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = replace(cfg, **read_config_file(args.config))
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    cfg = replace(cfg, **overrides)
    if cfg.system is not None and cfg.system not in ("ho", "ha", "gen"):
        raise ConfigError(f"unknown system {cfg.system!r}")
    if cfg.format not in ("json", "csv", "text"):
        raise ConfigError(f"unknown format {cfg.format!r}")
    if cfg.zeta is not None and cfg.zeta <= 0:
        raise ConfigError("zeta must be positive")
    if cfg.A <= 0:
        raise ConfigError("A must be positive")
    if cfg.B is not None and cfg.B <= 0:
        raise ConfigError("B must be positive")
    if cfg.tol is not None and cfg.tol <= 0:
        raise ConfigError("tol must be positive")
    if cfg.count < 1:
        raise ConfigError("count must be at least 1")
    return cfg


def _system_id(cfg: RunConfig, kind: str) -> SystemId:
    if kind != "gen":
        return SystemId(kind)
    return SystemId("gen", zeta=cfg.zeta, A=cfg.A, B=cfg.B)


def _user_grid(cfg: RunConfig) -> nm.RadialGrid | None:
    if cfg.grid is None:
        return None
    return nm.RadialGrid(*cfg.grid)


def _grid_warnings(cfg: RunConfig) -> list[str]:
    if cfg.grid is not None and cfg.grid[1] < MIN_SOUND_POINTS:
        return [
            f"grid with {cfg.grid[1]} points is coarser than the "
            f"{MIN_SOUND_POINTS}-point resolution the default tolerances assume"
        ]
    return []


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _emit(payload: dict, rows: list[dict], cfg: RunConfig) -> None:
    """Write the report in the requested format to --out or stdout.

    `payload` is the full structured report (JSON); `rows` is its flat
    tabular projection (CSV); text output is a terse human-readable digest.
    """
    if cfg.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif cfg.format == "csv":
        buf = io.StringIO()
        headers = sorted({k for row in rows for k in row})
        writer = csv.DictWriter(buf, fieldnames=headers, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        lines = [_text_line(row) for row in rows]
        lines.append("overall: " + ("PASS" if payload["pass"] else "FAIL"))
        text = "\n".join(lines) + "\n"

    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = cfg.out
    if not os.path.isabs(path):
        path = os.path.join(os.environ.get(REPORT_DIR_ENV, "."), path)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _text_line(row: dict) -> str:
    verdict = row.get("pass")
    head = "PASS" if verdict else ("FAIL" if verdict is not None else "INFO")
    body = "  ".join(
        f"{k}={row[k]}" for k in row if k != "pass" and row[k] is not None
    )
    return f"{head}  {body}"


def _fmt_float(x: float | None) -> float | None:
    return None if x is None else float(x)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify_symbolic(cfg: RunConfig) -> int:
    if cfg.identity:
        unknown = [n for n in cfg.identity if n not in ident.REGISTRY]
        if unknown:
            raise ConfigError(f"unknown identities: {', '.join(unknown)}")
        names = list(cfg.identity)
    elif cfg.system is not None:
        names = [n for n in ident.identity_names() if n.startswith(cfg.system + ".")]
    else:
        names = ident.identity_names()

    reports = ident.verify_all(names)
    if cfg.system in (None, "gen") and not cfg.identity:
        zetas = (cfg.zeta,) if cfg.zeta is not None else DEFAULT_TRANSFORM_ZETAS
        for z in zetas:
            reports.append(ident.transform_check(z))

    rows = [
        {
            "name": r.name,
            "asserted": r.asserted,
            "residual_terms": r.residual_terms,
            "pass": r.passed,
        }
        for r in reports
    ]
    ok = all(r.passed for r in reports if r.asserted)
    payload = {
        "command": "verify-symbolic",
        "reports": [r.to_json_dict() for r in reports],
        "pass": ok,
    }
    _emit(payload, rows, cfg)
    return 0 if ok else 1


def _ladder_rows(reports: list[ck.LadderReport]) -> list[dict]:
    rows = []
    for r in reports:
        rows.append({
            "check": "ladder",
            "system": r.system,
            "operator": r.operator,
            "source": f"{r.source[0]},{r.source[1]}",
            "target": f"{r.target[0]},{r.target[1]}",
            "status": r.status,
            "overlap": _fmt_float(r.overlap),
            "constant": None if r.constant is None else abs(r.constant),
            "expected_constant": _fmt_float(r.expected_constant),
            "residual": _fmt_float(r.residual_norm),
            "pass": r.passed,
        })
    return rows


def cmd_verify_numeric(cfg: RunConfig) -> int:
    warnings = _grid_warnings(cfg)
    grid = _user_grid(cfg)
    overlap_tol = cfg.tol if cfg.tol is not None else ck.OVERLAP_TOL
    residual_tol = cfg.tol if cfg.tol is not None else 1e-4

    sections: dict = {}
    rows: list[dict] = []
    ok = True

    if cfg.op is not None:
        if cfg.system in (None, "gen"):
            raise ConfigError("--op needs --system ho or --system ha")
        sid = SystemId(cfg.system)
        if cfg.state is not None:
            sources = [cfg.state]
        else:
            sources = ck.default_sources(sid, cfg.op, cfg.count)
        reports = [
            ck.ladder_check(sid, cfg.op, src, grid, overlap_tol=overlap_tol)
            for src in sources
        ]
        sections["ladder"] = [r.to_json_dict() for r in reports]
        rows += _ladder_rows(reports)
        ok = all(r.passed for r in reports)
    else:
        kinds = [cfg.system] if cfg.system else ["ho", "ha", "gen"]

        for kind in [k for k in kinds if k in ("ho", "ha")]:
            sid = SystemId(kind)
            reports = ck.ladder_diagram(sid, grid, count=cfg.count)
            sections.setdefault("ladder", [])
            sections["ladder"] += [r.to_json_dict() for r in reports]
            rows += _ladder_rows(reports)
            ok = ok and all(r.passed for r in reports)

        if "ho" in kinds:
            trips = []
            for n in range(5):
                for m in range(-n, n + 1, 2):
                    t = ck.roundtrip_check(n, m, grid)
                    t["pass"] = t["relative_error"] <= residual_tol
                    trips.append(t)
                    rows.append({
                        "check": "roundtrip",
                        "system": "ho",
                        "source": f"{n},{m}",
                        "residual": t["relative_error"],
                        "pass": t["pass"],
                    })
            sections["roundtrip"] = trips
            ok = ok and all(t["pass"] for t in trips)

        if "ha" in kinds:
            shells = []
            for n in (2, 3):
                s = ck.on_shell_check(n, grid)
                s["pass"] = s["max_relative_residual"] <= residual_tol
                shells.append(s)
                rows.append({
                    "check": "on-shell",
                    "system": "ha",
                    "source": f"{n}",
                    "residual": s["max_relative_residual"],
                    "pass": s["pass"],
                })
            sections["on_shell"] = shells
            ok = ok and all(s["pass"] for s in shells)

        if "gen" in kinds:
            zetas = (cfg.zeta,) if cfg.zeta is not None else DEFAULT_ZERO_ENERGY_ZETAS
            levels = (cfg.level,) if cfg.level is not None else (0, 1, 2, 3)
            zero = []
            for z in zetas:
                for n in levels:
                    r = ck.zero_energy_check(z, cfg.A, n, grid)
                    worst = r["max_relative_residual"]
                    r["pass"] = worst is None or worst <= residual_tol
                    zero.append(r)
                    rows.append({
                        "check": "zero-energy",
                        "system": "gen",
                        "zeta": str(z),
                        "source": f"{n}",
                        "degeneracy": r["degeneracy"],
                        "residual": worst,
                        "pass": r["pass"],
                    })
            sections["zero_energy"] = zero
            ok = ok and all(r["pass"] for r in zero)

    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if cfg.strict and warnings:
        ok = False

    payload = {"command": "verify-numeric", "warnings": warnings,
               "pass": ok, **sections}
    _emit(payload, rows, cfg)
    return 0 if ok else 1


def cmd_spectrum(cfg: RunConfig) -> int:
    kind = cfg.system or "ho"
    sid = _system_id(cfg, kind)
    tol = cfg.tol if cfg.tol is not None else 1e-4
    warnings = _grid_warnings(cfg)

    if kind == "gen":
        if cfg.zeta is None or cfg.B is None:
            raise ConfigError("spectrum for the generalized system needs --zeta and --B")
        grid = _user_grid(cfg) or ck.zero_energy_grid(float(cfg.zeta), float(cfg.A))
    else:
        grid = _user_grid(cfg) or nm.reference_grid(sid)

    n_max = cfg.level if cfg.level is not None else (5 if kind != "ha" else 4)
    entries = []
    m_max = n_max if kind != "ha" else n_max - 1
    for m in range(0, max(m_max, 0) + 1):
        per_sector = _sector_levels(sid, m, grid, n_max)
        entries.extend(per_sector)
    entries.sort(key=lambda e: (e["n"], e["m"]))

    ok = all(e["pass"] for e in entries if e["pass"] is not None)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if cfg.strict and warnings:
        ok = False

    rows = [dict(e) for e in entries]
    payload = {
        "command": "spectrum",
        "system": kind,
        "grid": {"r_max": grid.r_max, "n_points": grid.n_points},
        "tolerance": tol,
        "levels": entries,
        "warnings": warnings,
        "pass": ok,
    }
    _emit(payload, rows, cfg)
    return 0 if ok else 1


def _sector_levels(sid: SystemId, m: int, grid: nm.RadialGrid,
                   n_max: int) -> list[dict]:
    """Numeric levels of one angular sector up to label n_max, with the
    closed-form reference when one exists.

    Hydrogen energies are Richardson-extrapolated from the grid and its
    2x refinement (the Coulomb origin limits the plain scheme's constant);
    oscillator energies are accurate on the reference grid as-is.
    """
    kind = sid.kind
    if kind == "ha":
        count = n_max - m
    else:
        # oscillator-style lattice labelling n = 2*idx + m (also used for
        # the generalized system, where it is just an enumeration)
        count = (n_max - m) // 2 + 1
    if count < 1:
        return []
    solved = nm.eigensolve(sid, m, grid, count)
    refined = None
    if kind == "ha":
        refined = nm.eigensolve(sid, m, grid.refine(), count)
    out = []
    tol = 1e-4
    for idx, (e_num, _) in enumerate(solved):
        if kind == "ho":
            n = 2 * idx + m
            e_ref: float | None = float(n + 1)
        elif kind == "ha":
            n = idx + m + 1
            e_ref = -0.5 / (n - 0.5) ** 2
            e_num, _ratio = nm.richardson(e_num, refined[idx][0])
        else:
            n = 2 * idx + m
            if sid.zeta == 2:
                # at zeta = 2 the potential is an oscillator again:
                # E_n = sqrt(2A) (n + 1) - B on the oscillator lattice
                e_ref = math.sqrt(2.0 * float(sid.A)) * (n + 1) - float(sid.B)
            else:
                e_ref = None
        delta = None if e_ref is None else abs(e_num - e_ref)
        out.append({
            "n": n,
            "m": m,
            "E_numeric": float(e_num),
            "E_reference": e_ref,
            "abs_delta": delta,
            "pass": None if delta is None else delta <= tol,
        })
    return out


def cmd_ladder_diagram(cfg: RunConfig) -> int:
    kind = cfg.system or "ho"
    if kind == "gen":
        raise ConfigError("the ladder diagram is defined for --system ho or ha")
    sid = SystemId(kind)
    n_max = cfg.level if cfg.level is not None else 6

    nodes = []
    n_lo = 0 if kind == "ho" else 1
    for n in range(n_lo, n_max + 1):
        ms = range(-n, n + 1, 2) if kind == "ho" else range(-(n - 1), n)
        for m in ms:
            nodes.append({"n": n, "m": m})

    node_set = {(d["n"], d["m"]) for d in nodes}
    arrows = []
    for (k, name), (dn, dm) in sorted(sy.LADDER_TABLE.items()):
        if k != kind:
            continue
        edges = [
            {"from": [n, m], "to": [n + dn, m + dm]}
            for (n, m) in sorted(node_set)
            if (n + dn, m + dm) in node_set
        ]
        arrows.append({"operator": name, "dn": dn, "dm": dm, "edges": edges})

    rows = [
        {
            "operator": a["operator"],
            "dn": a["dn"],
            "dm": a["dm"],
            "n": e["from"][0],
            "m": e["from"][1],
            "target_n": e["to"][0],
            "target_m": e["to"][1],
        }
        for a in arrows
        for e in a["edges"]
    ]
    payload = {
        "command": "ladder-diagram",
        "system": kind,
        "nodes": nodes,
        "arrows": arrows,
        "pass": True,
    }
    _emit(payload, rows, cfg)
    return 0


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--system", choices=("ho", "ha", "gen"))
    p.add_argument("--zeta", type=parse_fraction, metavar="P/Q",
                   help="power parameter of the generalized potential")
    p.add_argument("--A", type=parse_fraction, metavar="X",
                   help="strength of the rho^(2 zeta - 2) term (default 1/2)")
    p.add_argument("--B", type=parse_fraction, metavar="X",
                   help="strength of the rho^(zeta - 2) term")
    p.add_argument("--grid", type=parse_grid, metavar="R_MAX,N_POINTS")
    p.add_argument("--tol", type=float, metavar="X",
                   help="override the default tolerance")
    p.add_argument("--format", choices=("json", "csv", "text"))
    p.add_argument("--out", metavar="PATH",
                   help="write the report here instead of stdout; relative "
                        f"paths resolve against ${REPORT_DIR_ENV}")
    p.add_argument("--strict", action="store_const", const=True, default=None,
                   help="escalate grid-too-coarse warnings to failures")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="susy2d",
        description="Exact and numeric verification of the ladder-operator "
                    "structure of 2D radial quantum systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-symbolic",
                       help="run the exact identity registry")
    _add_common(p)
    p.add_argument("--identity", action="append",
                   help="check only this identity (repeatable)")
    p.set_defaults(func=cmd_verify_symbolic)

    p = sub.add_parser("verify-numeric", help="run the numeric suite")
    _add_common(p)
    p.add_argument("--op", help="check a single ladder operator")
    p.add_argument("--state", type=parse_state, metavar="N,M",
                   help="source state for --op")
    p.add_argument("--level", type=int,
                   help="restrict the zero-energy check to this level")
    p.add_argument("--count", type=int,
                   help="source states per ladder arrow (default 6)")
    p.set_defaults(func=cmd_verify_numeric)

    p = sub.add_parser("spectrum", help="tabulate numeric vs reference energies")
    _add_common(p)
    p.add_argument("--level", type=int, help="highest level label to include")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("ladder-diagram",
                       help="emit the state lattice and ladder arrows")
    _add_common(p)
    p.add_argument("--level", type=int, help="highest level label to include")
    p.set_defaults(func=cmd_ladder_diagram)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; preserve that
        return int(exc.code or 0)
    if getattr(args, "identity", None) is not None:
        args.identity = tuple(args.identity)
    try:
        cfg = build_config(args)
        return args.func(cfg)
    except (ConfigError, sy.UnknownOperatorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
