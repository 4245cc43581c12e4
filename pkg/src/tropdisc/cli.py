"""Command-line front end: ``tropdisc {degree|surfaces|real|check}``."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from .circuits import default_jobs
from .lattice import DimensionError, Polytope
from .multiplicity import DegreeResult, degree
from .oracle import cross_check
from .real import real_lower_bound
from .surface import order_support, path_edges_present, verify_regular

SCHEMA_VERSION = 1
BOUNDARY_POLICY = "location-driven"
ROW_COLUMNS = ("path", "kind", "k", "type", "circuit", "mt", "enhancements", "locations", "tag", "regular")

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID = 0, 1, 2

log = logging.getLogger("tropdisc")


class InputError(ValueError):
    """Invalid polytope input (reported with exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    simplex: int | None
    polytope_file: str | None
    fmt: str = "table"
    jobs: int = 1
    verbose: bool = False
    dump_dir: str | None = None
    regularity_check: bool = False
    boundary_policy: str = BOUNDARY_POLICY

    def __post_init__(self):
        if (self.simplex is None) == (self.polytope_file is None):
            raise InputError("give exactly one of --simplex and --polytope")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")


# ---------------------------------------------------------------------------
# input


def parse_polytope(source) -> Polytope:
    """``source`` is an int (simplex degree), a dict with ``vertices``, or a JSON file path."""
    if isinstance(source, int) and not isinstance(source, bool):
        if source < 1:
            raise InputError("simplex degree must be positive")
        return Polytope.simplex(source)
    if isinstance(source, (str, Path)):
        try:
            source = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read polytope file: {exc}") from exc
    if not isinstance(source, dict) or not isinstance(source.get("vertices"), list):
        raise InputError('expected a JSON object {"vertices": [[x, y, z], ...]}')
    verts = source["vertices"]
    for v in verts:
        if not isinstance(v, list) or len(v) != 3:
            raise InputError(f"vertex {v!r} is not a 3-vector")
        if any(isinstance(x, bool) or not isinstance(x, int) for x in v):
            raise InputError(f"vertex {v!r} has non-integer coordinates")
    try:
        poly = Polytope(verts)
    except DimensionError as exc:
        raise InputError(str(exc)) from exc
    if not poly.generates_lattice():
        raise InputError("lattice points of the polytope do not generate Z^3")
    return poly


# ---------------------------------------------------------------------------
# report rows


def _regular(support, rec) -> bool:
    return (
        verify_regular(support, rec.subdivision, rec.nu.nu)
        and path_edges_present(support, rec.path, rec.subdivision)
    )


def surface_rows(result: DegreeResult, support, verbose: bool = False, regularity: bool = False) -> list[dict]:
    rows = []
    for rec, rep in zip(result.records, result.reports):
        if rep.mt == 0 and not verbose:
            continue
        rows.append(
            {
                "path": rec.path.label,
                "kind": rec.path.kind,
                "k": rec.path.k,
                "type": rec.circuit.ctype,
                "circuit": [list(p) for p in rec.circuit.points],
                "mt": rep.mt,
                "enhancements": rep.enhancements,
                "locations": [loc.summary() for loc in rep.locations],
                "tag": rep.tag,
                "regular": _regular(support, rec) if regularity else None,
            }
        )
    return rows


def _cell_text(v) -> str:
    if isinstance(v, list):
        if v and isinstance(v[0], list):
            return " ".join("(" + ",".join(map(str, p)) + ")" for p in v)
        return ";".join(map(str, v))
    return "" if v is None else str(v)


def _table(header: list[str], rows: list[list]) -> str:
    cells = [[_cell_text(x) for x in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(header)]
    fmt = lambda r: "  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip()
    return "\n".join([fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in cells])


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell_text(x) for x in r])
    return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------------------
# subdivision dumps


def _svg(cells, size: int = 200) -> str:
    """Cell edges projected to the three coordinate planes, side by side."""
    pts = {p for c in cells for p in c}
    lo = min(min(p) for p in pts)
    hi = max(max(p) for p in pts)
    span = max(hi - lo, 1)
    pad = 10
    scale = (size - 2 * pad) / span
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{3 * size}" height="{size + 20}">']
    for n, (i, j, name) in enumerate(((0, 1, "xy"), (0, 2, "xz"), (1, 2, "yz"))):
        ox = n * size
        parts.append(f'<text x="{ox + pad}" y="{size + 15}" font-size="12">{name}</text>')
        segs = set()
        for c in cells:
            for a in c:
                for b in c:
                    pa, pb = (a[i], a[j]), (b[i], b[j])
                    if pa < pb:
                        segs.add((pa, pb))
        for (x1, y1), (x2, y2) in sorted(segs):
            X1, X2 = ox + pad + (x1 - lo) * scale, ox + pad + (x2 - lo) * scale
            Y1, Y2 = size - pad - (y1 - lo) * scale, size - pad - (y2 - lo) * scale
            parts.append(
                f'<line x1="{X1:.2f}" y1="{Y1:.2f}" x2="{X2:.2f}" y2="{Y2:.2f}" stroke="black" stroke-width="0.5"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def dump_subdivisions(result: DegreeResult, support, directory: str, verbose: bool = False) -> int:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    n = 0
    for idx, (rec, rep) in enumerate(zip(result.records, result.reports)):
        if rep.mt == 0 and not verbose:
            continue
        stem = f"surface_{idx:04d}_{rec.path.label.replace(',', '-')}_{rec.circuit.ctype}"
        doc = {
            "schema": SCHEMA_VERSION,
            "path": rec.path.label,
            "circuit": [list(p) for p in rec.circuit.points],
            "type": rec.circuit.ctype,
            "mt": rep.mt,
            "cells": [[list(p) for p in c] for c in rec.subdivision.cells],
            "heights": {",".join(map(str, p)): str(h) for p, h in zip(support.points, rec.nu.nu)},
        }
        (out / f"{stem}.json").write_text(json.dumps(doc, indent=1) + "\n")
        (out / f"{stem}.svg").write_text(_svg(rec.subdivision.cells))
        n += 1
    return n


# ---------------------------------------------------------------------------
# commands


def _header(cfg: RunConfig, poly: Polytope) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": cfg.command,
        "polytope": {"vertices": [list(v) for v in poly.vertices]},
        "boundary_policy": cfg.boundary_policy,
    }


def _render(cfg: RunConfig, doc: dict, header: list[str], rows: list[list], preface: list[str]) -> str:
    if cfg.fmt == "json":
        return json.dumps(doc, indent=1, sort_keys=False)
    if cfg.fmt == "csv":
        return _csv(header, rows)
    return "\n".join(preface + ([_table(header, rows)] if rows else []))


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns ``(exit code, report text)``."""
    try:
        poly = parse_polytope(cfg.simplex if cfg.simplex is not None else cfg.polytope_file)
    except InputError as exc:
        return EXIT_INVALID, f"error: {exc}"
    if cfg.command in ("real", "check") and cfg.simplex is None:
        return EXIT_INVALID, f"error: '{cfg.command}' is defined for --simplex only"
    if cfg.command in ("real", "check") and cfg.simplex < 2:
        return EXIT_INVALID, "error: the simplex family needs d >= 2"

    doc = _header(cfg, poly)
    code = EXIT_OK

    if cfg.command == "real":
        rep = real_lower_bound(cfg.simplex)
        doc.update(rep.as_dict())
        header = ["quantity", "value"]
        rows = [[k, rep.as_dict()[k]] for k in ("total", "A", "D", "E", "pair_complex", "undecided")]
        return code, _render(cfg, doc, header, rows, [str(rep.total)])

    support = order_support(poly)
    log.info("enumerating %d marked paths over %d lattice points", 2 * support.N + 2, len(support.points))
    result = degree(poly, jobs=cfg.jobs)
    doc["total"] = result.total
    doc["by_type"] = dict(result.by_type)

    if cfg.dump_dir:
        n = dump_subdivisions(result, support, cfg.dump_dir, cfg.verbose)
        log.info("wrote %d subdivision dumps to %s", n, cfg.dump_dir)

    rows_d = surface_rows(result, support, cfg.verbose, cfg.regularity_check)
    if cfg.regularity_check:
        bad = [r for r in rows_d if not r["regular"]]
        doc["regularity"] = {"checked": len(rows_d), "failed": len(bad)}
        if bad:
            code = EXIT_MISMATCH

    if cfg.command == "degree":
        header = ["type", "mt"]
        rows = [[t, result.by_type[t]] for t in "ABCDE"] + [["total", result.total]]
        preface = [str(result.total)]
        if cfg.regularity_check:
            preface.append(f"regularity: {len(rows_d) - doc['regularity']['failed']}/{len(rows_d)} certified")
        return code, _render(cfg, doc, header, rows, preface)

    if cfg.command == "surfaces":
        doc["rows"] = rows_d
        cols = [c for c in ROW_COLUMNS if c != "regular" or cfg.regularity_check]
        rows = [[r[c] for c in cols] for r in rows_d]
        return code, _render(cfg, doc, cols, rows, [f"total {result.total}"])

    # check
    cc = cross_check(cfg.simplex, degree_result=result)
    doc.update(
        {
            "passed": cc.passed,
            "expected_total": cc.expected_total,
            "oracle": cc.oracle,
            "enumerated": cc.enumerated,
            "diffs": {k: [[list(w) if w else None, [list(p) for p in q], m] for w, q, m in v] for k, v in cc.diffs.items()},
        }
    )
    if not cc.passed:
        code = EXIT_MISMATCH
    header = ["type", "enumerated", "oracle"]
    rows = [[t, cc.enumerated.get(t, 0), cc.oracle.get(t, 0)] for t in "ADE"]
    return code, _render(cfg, doc, header, rows, cc.lines()[:1] + [l.strip() for l in cc.lines()[4:]])


# ---------------------------------------------------------------------------
# click wiring


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(["degree", "surfaces", "real", "check"]))
@click.option("--simplex", "simplex", type=int, default=None, help="Use conv{0, d e1, d e2, d e3}.")
@click.option("--polytope", "polytope_file", type=click.Path(dir_okay=False), default=None,
              help='JSON file {"vertices": [[x, y, z], ...]}.')
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="table", show_default=True)
@click.option("--jobs", type=int, default=None, help="Worker processes (default: $TROPDISC_JOBS or 1).")
@click.option("--verbose", is_flag=True, help="Include rejected (mt = 0) surfaces; log progress.")
@click.option("--dump-subdivisions", "dump_dir", type=click.Path(file_okay=False), default=None,
              help="Write one JSON and one SVG per surface into this directory.")
@click.option("--regularity-check", is_flag=True, help="Re-certify every emitted subdivision.")
def main(command, simplex, polytope_file, fmt, jobs, verbose, dump_dir, regularity_check):
    """Count singular tropical surfaces through points in Mikhalkin position."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    if jobs is None:
        jobs = default_jobs()
    try:
        cfg = RunConfig(command, simplex, polytope_file, fmt, jobs, verbose, dump_dir, regularity_check)
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INVALID)
    code, text = run(cfg)
    click.echo(text, err=code == EXIT_INVALID)
    sys.exit(code)


if __name__ == "__main__":  # pragma: no cover
    main()
