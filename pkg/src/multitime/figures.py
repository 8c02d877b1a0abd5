"""CSV tables and plain SVG renderings for the three figures.

The SVG writer only sees the parsed CSV rows, so a figure is a pure
function of its table.
"""
from __future__ import annotations

import csv
import io
import os
import tempfile

import numpy as np

from .statistics import Cell, boson_family_directions, boson_family_samples, later_direction, line_distance
from .worldlines import (
    Grid,
    ParticleSpec,
    debroglie_lattice,
    fermion_worldlines,
    sigma_line,
    tau_line,
)

WORLDLINE_HEADER = ["kind", "proper_time", "x0", "x1", "x2", "x3", "x4", "x5"]
VIEW = 400


def fmt(x) -> str:
    return format(float(x), ".17g")


def atomic_write(path: str, data: str) -> None:
    """Write-then-rename so readers never see a partial file."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in r])
    return buf.getvalue()


def worldlines_csv(ws) -> str:
    rows = []
    for kind in ws.kinds():
        line = ws[kind]
        for s, ev in zip(line.proper_time, line.events):
            rows.append([kind, s, *ev])
    return rows_to_csv(WORLDLINE_HEADER, rows)


def read_worldlines_csv(text: str) -> dict:
    """Parse a world-line CSV back into {kind: (proper_time, events)}."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != WORLDLINE_HEADER:
        raise ValueError(f"unexpected header {header}")
    out: dict = {}
    for row in reader:
        out.setdefault(row[0], []).append([float(v) for v in row[1:]])
    return {k: (np.array(v)[:, 0], np.array(v)[:, 1:]) for k, v in out.items()}


# -- figure tables --------------------------------------------------------

def fig1_table(spec: ParticleSpec, n: int = 6):
    """tau and sigma line families on the x0-x1 plane and their axis intersections."""
    lat, at_t0, at_x0 = debroglie_lattice(spec, n)
    rows = []
    span = max(at_t0[-1, 1], at_x0[-1, 0], 1.0)
    for j in range(n):
        p, d = sigma_line(j, spec)
        for s in (-span, span):
            q = p + s * d / np.linalg.norm(d)
            rows.append(["sigma", j, q[0], q[1]])
        p, d = tau_line(at_t0[j, 1], spec)
        for s in (-span, span):
            q = p + s * d / np.linalg.norm(d)
            rows.append(["tau", j, q[0], q[1]])
    for j in range(n):
        rows.append(["lattice_t0", j, at_t0[j, 0], at_t0[j, 1]])
    for j in range(n):
        rows.append(["lattice_x0", j, at_x0[j, 0], at_x0[j, 1]])
    return ["family", "index", "x0", "x1"], rows


def fig2_table(spec: ParticleSpec, grid: Grid = Grid()):
    """Fermion world lines projected to (x0, x3, xs)."""
    ws = fermion_worldlines(spec, grid)
    rows = []
    for kind in ws.kinds():
        line = ws[kind]
        ev = line.events
        xs = np.hypot(ev[:, 1], ev[:, 2])
        for s, e, r in zip(line.proper_time, ev, xs):
            rows.append([kind, s, e[0], e[3], r])
    return ["kind", "proper_time", "x0", "x3", "xs"], rows


def fig3_table(spec: ParticleSpec, samples: int = 32):
    """Two parallel boson families, with each line's distance to the other particle."""
    cell = Cell.compton(spec.m0)
    offset = cell.side / 1000.0
    dirs = boson_family_directions(spec)
    later = later_direction(spec)
    base = np.zeros(6)
    base[1:4] = cell.side / 2.0
    bases = [base, base + offset * later]
    rows = []
    for i, b in enumerate(bases):
        other = bases[1 - i]
        pts = boson_family_samples(spec, b, cell.side, samples)
        for k, (kind, d) in enumerate(zip(("tau", "sigma", "phi"), dirs)):
            dmin = min(line_distance(b, d, other, d2) for d2 in dirs)
            for p in pts[kind]:
                rows.append([f"particle{i + 1}", kind, *p, dmin])
    return ["particle", "kind", "x0", "x1", "x2", "x3", "x4", "x5", "min_distance"], rows


# -- SVG ------------------------------------------------------------------

_COLORS = {"tau": "#4878A8", "sigma": "#E57A5A", "phi": "#5A9E5A",
           "lattice_t0": "#333333", "lattice_x0": "#8B6BB8"}


def _scaler(xs, ys, pad=20):
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    sx = (VIEW - 2 * pad) / ((x1 - x0) or 1.0)
    sy = (VIEW - 2 * pad) / ((y1 - y0) or 1.0)
    s = min(sx, sy)
    return lambda x, y: (pad + (x - x0) * s, VIEW - pad - (y - y0) * s)


def _svg(elements, title) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW} {VIEW}" '
            f'width="{VIEW}" height="{VIEW}">\n<title>{title}</title>\n'
            f'<rect x="0" y="0" width="{VIEW}" height="{VIEW}" fill="white"/>\n')
    return head + "".join(e + "\n" for e in elements) + "</svg>\n"


def _poly(points, color):
    pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in points)
    return f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1"/>'


def svg_from_csv(which: str, text: str) -> str:
    reader = list(csv.reader(io.StringIO(text)))
    header, rows = reader[0], reader[1:]
    col = {h: i for i, h in enumerate(header)}
    groups: dict = {}
    if which == "fig1":
        for r in rows:
            groups.setdefault((r[col["family"]], r[col["index"]]), []).append(
                (float(r[col["x1"]]), float(r[col["x0"]])))
        xs = [p[0] for g in groups.values() for p in g]
        ys = [p[1] for g in groups.values() for p in g]
        title = "tau and sigma world lines on the x0-x1 plane"
    elif which == "fig2":
        for r in rows:
            # oblique projection of (x3, xs, x0)
            x3, xs, x0 = float(r[col["x3"]]), float(r[col["xs"]]), float(r[col["x0"]])
            groups.setdefault((r[col["kind"]], "0"), []).append((xs + 0.5 * x0, x3 + 0.3 * x0))
        xs = [p[0] for g in groups.values() for p in g]
        ys = [p[1] for g in groups.values() for p in g]
        title = "fermion world lines in x0-x3-xs"
    elif which == "fig3":
        for r in rows:
            v = [float(r[col[f"x{i}"]]) for i in range(6)]
            groups.setdefault((r[col["kind"]], r[col["particle"]]), []).append(
                (v[1] + v[2] + 0.5 * v[4], v[0] + v[3] + 0.5 * v[5]))
        xs = [p[0] for g in groups.values() for p in g]
        ys = [p[1] for g in groups.values() for p in g]
        title = "two boson world-line families"
    else:
        raise ValueError(f"unknown figure {which!r}")
    to = _scaler(xs, ys)
    elems = []
    for (fam, _), pts in sorted(groups.items()):
        color = _COLORS.get(fam, "#666666")
        if fam.startswith("lattice"):
            for x, y in pts:
                cx, cy = to(x, y)
                elems.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="2.5" fill="{color}"/>')
        else:
            elems.append(_poly([to(x, y) for x, y in pts], color))
    return _svg(elems, title)


def figure_files(which: str, spec: ParticleSpec, grid: Grid = Grid()) -> tuple[str, str]:
    if which == "fig1":
        header, rows = fig1_table(spec)
    elif which == "fig2":
        header, rows = fig2_table(spec, grid)
    elif which == "fig3":
        header, rows = fig3_table(spec)
    else:
        raise ValueError(f"unknown figure {which!r}")
    text = rows_to_csv(header, rows)
    return text, svg_from_csv(which, text)

