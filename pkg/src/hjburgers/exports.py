"""Deterministic CSV/JSON/SVG writers.

Floats are serialized with repr (shortest round-trip), JSON keys are sorted,
and the SVG overlay is generated from the written CSV files, never from a
second computation, so plots cannot disagree with the data."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from fractions import Fraction


def fmt_number(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if x != x:
            return "nan"
        return repr(x)
    return str(x)


def write_csv(path, header, rows, meta: dict | None = None) -> None:
    buf = io.StringIO()
    if meta:
        for k in sorted(meta):
            buf.write(f"# {k} = {fmt_number(meta[k])}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_number(v) for v in row])
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(buf.getvalue())


def read_csv(path):
    meta, header, rows = {}, None, []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.startswith("#"):
                k, _, v = line[1:].partition("=")
                meta[k.strip()] = v.strip()
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
            else:
                rows.append(cells)
    return meta, header or [], rows


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, sort_keys=True, indent=1)
        f.write("\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


# -- SVG ----------------------------------------------------------------------------------

STYLES = {
    # mirrors the figure conventions: caustic long dash, Maxwell solid,
    # level short dash; pre-curves thin
    "caustic": 'stroke="#444444" stroke-width="1.4" stroke-dasharray="9,5" fill="none"',
    "maxwell": 'stroke="#000000" stroke-width="2.0" fill="none"',
    "level": 'stroke="#1f6fb2" stroke-width="1.0" stroke-dasharray="3,3" fill="none"',
    "pre": 'stroke="#b05020" stroke-width="0.9" fill="none"',
    "points": 'fill="#c02020" stroke="none"',
}


def _polyline_chunks(points):
    chunk = []
    for p in points:
        if p is None or any(v != v for v in p):
            if len(chunk) > 1:
                yield chunk
            chunk = []
        else:
            chunk.append(p)
    if len(chunk) > 1:
        yield chunk


def _panel_svg(curves, width, height, pad=24.0):
    xs, ys = [], []
    for _, pts in curves:
        for p in pts:
            if p is not None and all(v == v and abs(v) < 1e300 for v in p):
                xs.append(p[0])
                ys.append(p[1])
    if not xs:
        return ""
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    dx = (x1 - x0) or 1.0
    dy = (y1 - y0) or 1.0
    sx = (width - 2 * pad) / dx
    sy = (height - 2 * pad) / dy

    def tx(p):
        return (pad + (p[0] - x0) * sx, height - pad - (p[1] - y0) * sy)

    parts = []
    for style_key, pts in curves:
        style = STYLES.get(style_key, STYLES["pre"])
        if style_key == "points":
            for p in pts:
                if p is None:
                    continue
                cx, cy = tx(p)
                parts.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="2.5" {style}/>')
            continue
        for chunk in _polyline_chunks(pts):
            coords = " ".join(f"{tx(p)[0]:.3f},{tx(p)[1]:.3f}" for p in chunk)
            parts.append(f'<polyline points="{coords}" {style}/>')
    return "\n".join(parts)


def write_svg_overlay(path, panels, panel_size=(420, 420)) -> None:
    """panels: list of (title, curves) with curves = [(style_key, points)]."""
    w, h = panel_size
    total_w = w * len(panels)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{h}" '
        f'viewBox="0 0 {total_w} {h}">',
        f'<rect width="{total_w}" height="{h}" fill="white"/>',
    ]
    for i, (title, curves) in enumerate(panels):
        parts.append(f'<g transform="translate({i * w},0)">')
        parts.append(_panel_svg(curves, w, h))
        parts.append(
            f'<text x="{w/2:.1f}" y="16" font-family="monospace" font-size="12" '
            f'text-anchor="middle">{title}</text>'
        )
        parts.append("</g>")
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(parts))
        f.write("\n")


def svg_from_curve_csvs(path, csv_specs, panel_size=(420, 420)) -> None:
    """Build the overlay strictly from already-written CSV files.

    csv_specs: list of (panel_title, [(csv_path, style_key, filter_prefix)]).
    Rows are grouped by curve_id; NaN cells break polylines."""
    panels = []
    for title, sources in csv_specs:
        curves = []
        for csv_path, style_key, prefix in sources:
            if not os.path.exists(csv_path):
                continue
            _, header, rows = read_csv(csv_path)
            try:
                i_id = header.index("curve_id")
                i_x = header.index("x")
                i_y = header.index("y")
            except ValueError:
                continue
            groups: dict = {}
            for row in rows:
                cid = row[i_id]
                if prefix and not cid.startswith(prefix):
                    continue
                try:
                    p = (float(row[i_x]), float(row[i_y]))
                except ValueError:
                    p = None
                groups.setdefault(cid, []).append(p)
            for cid in sorted(groups):
                curves.append((style_key, groups[cid]))
        panels.append((title, curves))
    write_svg_overlay(path, panels, panel_size)
