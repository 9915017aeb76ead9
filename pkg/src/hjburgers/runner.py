"""Scenario runner: computes the requested products, writes deterministic
artifacts (CSV/JSON/SVG + manifest), and evaluates expectation blocks."""

from __future__ import annotations

import math
import os
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .action import build_flow, build_reduced_action
from .exports import fmt_number, sha256_file, svg_from_curve_csvs, write_csv, write_json
from .geometry import (
    GeometryError,
    complex_double_points,
    compute_caustic,
    classify_b_points,
    hot_cool,
    hot_cool_boundary,
    level_surface,
    maxwell_klein,
    perestroika_detect,
    pre_level_surface,
    pre_maxwell,
)
from .geometry.caustic import SingularParameterError
from .scenario import Scenario
from .turbulence import (
    BrownianScenario,
    eta_process,
    recurrence_stats,
    zeta_orthogonal,
    zeta_orthogonal_ensemble,
)


class ComputationError(RuntimeError):
    pass


class RunContext:
    def __init__(self, scn: Scenario, outdir: str, threads: int = 1):
        self.scn = scn
        self.outdir = outdir
        self.threads = max(1, int(threads))
        self.files: list = []
        self.results: dict = {}
        self._ra = None
        self._caustic = None
        self._noise_shift = None

    # lazily shared computations ------------------------------------------------

    @property
    def ra(self):
        if self._ra is None:
            self._ra = build_reduced_action(self.scn.initial_data)
        return self._ra

    @property
    def caustic(self):
        if self._caustic is None:
            self._caustic = compute_caustic(self.ra)
        return self._caustic

    def noise_shift(self) -> tuple:
        """-eps*a*intW(t): the exact translation of the random picture."""
        if self._noise_shift is None:
            data = self.scn.initial_data
            eps = float(data.epsilon)
            if eps == 0.0 or all(a == 0 for a in data.noise_direction):
                self._noise_shift = (0.0,) * data.dimension
            else:
                horizon = max(float(self.scn.t), float(self.scn.h))
                scn_path = BrownianScenario.generate(
                    self.scn.seed, float(self.scn.h), horizon, 1
                )
                iw = float(scn_path.int_w[-1, 0])
                self._noise_shift = tuple(
                    -eps * float(a) * iw for a in data.noise_direction
                )
        return self._noise_shift

    def path(self, name: str) -> str:
        p = os.path.join(self.outdir, name)
        self.files.append(name)
        return p

    def lam_values(self):
        lo, hi, n = self.scn.lam_grid
        lo, hi = float(lo), float(hi)
        return [lo + (hi - lo) * k / (n - 1) for k in range(int(n))]


def _product_caustic(ctx: RunContext):
    scn = ctx.scn
    ca = ctx.caustic
    t = float(scn.t)
    shift = ctx.noise_shift()
    rows = []
    for lam in ctx.lam_values():
        den = ca.singular_denominator.eval_float({"lam": lam, "t": t})
        if abs(den) < 1e-12:
            rows.append(("caustic", lam, float("nan"), float("nan")))
            continue
        pt = ca.point_float(lam, t)
        rows.append(("caustic", lam, pt[0] + shift[0], pt[1] + shift[1]))
    write_csv(
        ctx.path("caustic.csv"),
        ["curve_id", "param", "x", "y"],
        rows,
        meta={"t": t, "seed": scn.seed, "shift_x": shift[0], "shift_y": shift[1]},
    )
    cusps = [float(v) for v in ca.cusp_parameters(scn.t, (float(scn.lam_window[0]), float(scn.lam_window[1])))]
    write_json(
        ctx.path("caustic.json"),
        {
            "equation": ca.algebraic_equation.to_text(),
            "pre_caustic": ca.pre_caustic.to_text(),
            "preparam": [c.to_text() for c in ca.preparam],
            "singular_denominator": ca.singular_denominator.to_text(),
            "cusp_parameters": cusps,
            "t": t,
            "noise_shift": list(shift),
        },
    )
    # pre-caustic curve in the initial plane
    pre_rows = []
    pc = ca.pre_caustic.substitute({"t": scn.t}).canonical()
    for x0 in ctx.lam_values():
        cs = [c.eval_float({"x0": x0}) for c in pc.coefficients_in("y0")]
        if len(cs) == 2 and cs[1] != 0:
            pre_rows.append(("pre_caustic", x0, x0, -cs[0] / cs[1]))
        else:
            pre_rows.append(("pre_caustic", x0, float("nan"), float("nan")))
    write_csv(ctx.path("pre_curves_caustic.csv"), ["curve_id", "param", "x", "y"], pre_rows, meta={"t": t})
    ctx.results["caustic"] = {"cusp_parameters": cusps}


def _product_levels(ctx: RunContext):
    scn = ctx.scn
    ra = ctx.ra
    flow = build_flow(scn.initial_data)
    t = float(scn.t)
    shift = ctx.noise_shift()
    rows, pre_rows = [], []
    rho_texts = {}
    for c in scn.levels_c:
        rho = level_surface(ra, c, scn.t)
        rho_texts[str(c)] = rho.to_text()
        curve = pre_level_surface(ra, c, scn.t)
        for x0 in ctx.lam_values():
            cs = [cf.eval_float({"x0": x0}) for cf in curve.coefficients_in("y0")]
            while cs and abs(cs[-1]) < 1e-300:
                cs.pop()
            sols = []
            if len(cs) > 1:
                sols = sorted(
                    z.real for z in np.roots(list(reversed(cs))) if abs(z.imag) < 1e-9
                )
            for b_idx, y0 in enumerate(sols):
                img = [
                    p.eval_float({"x0": x0, "y0": y0, "t": t}) for p in flow.phi
                ]
                cid = f"level_c{c}_b{b_idx}"
                rows.append((cid, x0, img[0] + shift[0], img[1] + shift[1]))
                pre_rows.append((f"pre_level_c{c}_b{b_idx}", x0, x0, y0))
    write_csv(
        ctx.path("levels.csv"),
        ["curve_id", "param", "x", "y"],
        rows,
        meta={"t": t, "c_list": " ".join(str(c) for c in scn.levels_c)},
    )
    write_csv(ctx.path("pre_curves_levels.csv"), ["curve_id", "param", "x", "y"], pre_rows, meta={"t": t})
    write_json(ctx.path("levels.json"), {"rho": rho_texts, "t": t})


def _product_maxwell(ctx: RunContext):
    scn = ctx.scn
    mk = maxwell_klein(ctx.ra, caustic=ctx.caustic)
    n_c, n_b, const = mk.multiplicity_record
    write_json(
        ctx.path("maxwell.json"),
        {
            "B": mk.B.to_text(),
            "C": mk.C.to_text(),
            "D": mk.D.to_text(),
            "exponents": [n_c, n_b],
            "constant": const.to_text(),
        },
    )
    ys = [Fraction(k, 40) for k in range(-120, 121, 2)]
    pts = classify_b_points(ctx.ra, mk, scn.t, ys, solve_for="x")
    shift = ctx.noise_shift()
    rows = [
        (
            "maxwell_klein",
            p.point[1],
            p.point[0] + shift[0],
            p.point[1] + shift[1],
            p.label,
            p.n_real_preimages,
            int(p.on_caustic),
        )
        for p in pts
    ]
    write_csv(
        ctx.path("maxwell_points.csv"),
        ["curve_id", "param", "x", "y", "label", "n_real_preimages", "on_caustic"],
        rows,
        meta={"t": float(scn.t)},
    )
    ctx.results["maxwell"] = mk


def _product_premaxwell(ctx: RunContext):
    scn = ctx.scn
    flow = build_flow(scn.initial_data)
    main, k_pre, _raw = pre_maxwell(ctx.ra)
    write_json(
        ctx.path("premaxwell.json"),
        {"pre_maxwell": main.to_text(), "pre_caustic_factor_power": k_pre},
    )
    t = float(scn.t)
    shift = ctx.noise_shift()
    main_t = main.substitute({"t": scn.t}).canonical()
    rows, pre_rows = [], []
    for x0 in ctx.lam_values():
        cs = [c.eval_float({"x0": x0}) for c in main_t.coefficients_in("y0")]
        while cs and abs(cs[-1]) < 1e-300:
            cs.pop()
        sols = []
        if len(cs) > 1:
            sols = sorted(
                z.real for z in np.roots(list(reversed(cs))) if abs(z.imag) < 1e-9
            )
        elif len(cs) == 1 and abs(cs[0]) < 1e-12:
            sols = []
        for b_idx, y0 in enumerate(sols):
            img = [p.eval_float({"x0": x0, "y0": y0, "t": t}) for p in flow.phi]
            rows.append((f"maxwell_curve_b{b_idx}", x0, img[0] + shift[0], img[1] + shift[1]))
            pre_rows.append((f"pre_maxwell_b{b_idx}", x0, x0, y0))
    write_csv(ctx.path("maxwell_curve.csv"), ["curve_id", "param", "x", "y"], rows, meta={"t": t})
    write_csv(ctx.path("pre_curves_maxwell.csv"), ["curve_id", "param", "x", "y"], pre_rows, meta={"t": t})


def _product_hotcool(ctx: RunContext):
    scn = ctx.scn
    rows = []
    shift = ctx.noise_shift()
    for lam in ctx.lam_values():
        lam_q = Fraction(lam).limit_denominator(10**9)
        try:
            lab = hot_cool(ctx.ra, ctx.caustic, lam_q, scn.t, value_tol=scn.value_tol)
        except (SingularParameterError, GeometryError):
            continue
        rows.append(
            (
                "hotcool",
                float(lam_q),
                lab.point[0] + shift[0],
                lab.point[1] + shift[1],
                lab.label,
                int(lab.boundary_flag),
            )
        )
    write_csv(
        ctx.path("hotcool.csv"),
        ["curve_id", "param", "x", "y", "label", "boundary_flag"],
        rows,
        meta={"t": float(scn.t), "value_tol": scn.value_tol},
    )
    bps = hot_cool_boundary(
        ctx.ra,
        ctx.caustic,
        scn.t,
        lam_window=(float(scn.lam_window[0]), float(scn.lam_window[1])),
    )
    boundary = [
        {
            "lam": float(lam),
            "point": [float(p[0]) + shift[0], float(p[1]) + shift[1]],
            "source": src,
        }
        for lam, p, src in bps
    ]
    write_json(ctx.path("hotcool.json"), {"boundary_points": boundary, "t": float(scn.t)})
    ctx.results["hotcool_boundary"] = boundary


def _product_perestroika(ctx: RunContext):
    scn = ctx.scn
    events = perestroika_detect(
        ctx.ra,
        ctx.caustic,
        t_range=scn.t_range,
        lam_window=(float(scn.lam_window[0]), float(scn.lam_window[1])),
    )
    payload = [
        {
            "t": ev.t,
            "lam": ev.lam,
            "point": list(ev.point) if ev.point else None,
            "certificate": ev.certificate,
            "dx_dlam": list(ev.dx_dlam),
            "d2x_dlam2": list(ev.d2x_dlam2),
        }
        for ev in events
    ]
    write_json(
        ctx.path("perestroika.json"),
        {"events": payload, "t_range": [str(v) for v in scn.t_range]},
    )
    ctx.results["perestroika"] = events


def _product_doublepoints(ctx: RunContext):
    scn = ctx.scn
    times = scn.doublepoint_times or (scn.t,)
    rows = []
    counts = {}
    for tv in times:
        pts = complex_double_points(
            ctx.caustic,
            tv,
            a_window=(float(scn.a_window[0]), float(scn.a_window[1])),
            eta_window=(float(scn.eta_window[0]), float(scn.eta_window[1])),
        )
        counts[str(tv)] = len(pts)
        for p in pts:
            rows.append((float(tv), p.a, p.eta, int(p.boundary_flag)))
    write_csv(
        ctx.path("doublepoints.csv"),
        ["t", "a", "eta", "boundary_flag"],
        rows,
        meta={
            "a_window": f"{float(scn.a_window[0])} {float(scn.a_window[1])}",
            "eta_window": f"{float(scn.eta_window[0])} {float(scn.eta_window[1])}",
        },
    )
    write_json(ctx.path("doublepoints.json"), {"counts": counts})
    ctx.results["doublepoints"] = counts


def _write_path_csv(ctx: RunContext, scn_path: BrownianScenario):
    rows = []
    for k in range(len(scn_path.times)):
        row = [scn_path.times[k]]
        row.extend(scn_path.w[k])
        row.extend(scn_path.int_w[k])
        row.append(scn_path.int_w2[k])
        rows.append(row)
    d = scn_path.dimension
    header = (
        ["t"]
        + [f"W_{i+1}" for i in range(d)]
        + [f"intW_{i+1}" for i in range(d)]
        + ["intW2"]
    )
    write_csv(
        ctx.path("path.csv"),
        header,
        rows,
        meta={"seed": scn_path.seed, "h": scn_path.h},
    )


def _product_zeta(ctx: RunContext):
    scn = ctx.scn
    path = BrownianScenario.generate(scn.seed, float(scn.h), float(scn.horizon), 1)
    _write_path_csv(ctx, path)
    eps = float(scn.initial_data.epsilon)
    values, rec = zeta_orthogonal(path, float(scn.zeta_a), eps, float(scn.zeta_c))
    rows = [(t, v, 0) for t, v in zip(path.times, values)]
    write_csv(
        ctx.path("zeta.csv"),
        ["t", "value", "branch_id"],
        rows,
        meta={"seed": scn.seed, "h": float(scn.h), "a": float(scn.zeta_a), "eps": eps, "c": float(scn.zeta_c)},
    )
    write_json(
        ctx.path("zeta.json"),
        {
            "zeros": [list(z) for z in rec.times],
            "grazes": rec.grazes,
            "degenerate": rec.degenerate,
            "params": {"a": float(scn.zeta_a), "eps": eps, "c": float(scn.zeta_c)},
        },
    )
    ctx.results["zeta_record"] = rec


def _product_eta(ctx: RunContext):
    scn = ctx.scn
    path = BrownianScenario.generate(scn.seed, float(scn.h), float(scn.horizon), 1)
    res = eta_process(ctx.ra, ctx.caustic, path, eps=scn.initial_data.epsilon)
    rows = [(t, v, 0) for t, v in zip(res.times, res.values)]
    write_csv(
        ctx.path("eta.csv"),
        ["t", "value", "branch_id"],
        rows,
        meta={"seed": scn.seed, "h": float(scn.h)},
    )
    write_json(
        ctx.path("eta.json"),
        {
            "zeros": res.zero_times,
            "grazes": res.record.grazes,
            "degenerate": res.degenerate,
            "resultant_in_t": res.resultant_in_t.to_text(),
        },
    )
    ctx.results["eta"] = res


def _product_stats(ctx: RunContext):
    scn = ctx.scn
    horizon = max(float(h) for h in scn.stats_horizons)
    records = zeta_orthogonal_ensemble(
        master_seed=scn.seed,
        n_paths=scn.n_paths,
        h=float(scn.h),
        horizon=horizon,
        a=float(scn.zeta_a),
        eps=float(scn.initial_data.epsilon),
        c=float(scn.zeta_c),
    )
    rows = recurrence_stats(records, [float(h) for h in scn.stats_horizons])
    header = list(rows[0].keys())
    write_csv(
        ctx.path("stats.csv"),
        header,
        [[row[k] for k in header] for row in rows],
        meta={"master_seed": scn.seed, "h": float(scn.h), "n_paths": scn.n_paths},
    )
    write_json(
        ctx.path("stats.json"),
        {"rows": rows, "master_seed": scn.seed, "h": float(scn.h)},
    )
    ctx.results["stats"] = rows


_PRODUCT_FNS = {
    "caustic": _product_caustic,
    "levels": _product_levels,
    "maxwell": _product_maxwell,
    "premaxwell": _product_premaxwell,
    "hotcool": _product_hotcool,
    "perestroika": _product_perestroika,
    "doublepoints": _product_doublepoints,
    "zeta": _product_zeta,
    "eta": _product_eta,
    "stats": _product_stats,
}


def run_scenario(scn: Scenario, outdir: str, threads: int = 1) -> RunContext:
    os.makedirs(outdir, exist_ok=True)
    start = time.perf_counter()
    ctx = RunContext(scn, outdir, threads)
    for product in scn.products:
        try:
            _PRODUCT_FNS[product](ctx)
        except Exception as e:
            raise ComputationError(f"product {product!r} failed: {e}") from e
    geometry_products = {"caustic", "levels", "premaxwell"} & set(scn.products)
    if geometry_products:
        specs = [
            (
                "curves",
                [
                    (os.path.join(outdir, "caustic.csv"), "caustic", ""),
                    (os.path.join(outdir, "levels.csv"), "level", ""),
                    (os.path.join(outdir, "maxwell_curve.csv"), "maxwell", ""),
                ],
            ),
            (
                "pre-curves",
                [
                    (os.path.join(outdir, "pre_curves_caustic.csv"), "caustic", ""),
                    (os.path.join(outdir, "pre_curves_levels.csv"), "level", ""),
                    (os.path.join(outdir, "pre_curves_maxwell.csv"), "maxwell", ""),
                ],
            ),
        ]
        svg_from_curve_csvs(os.path.join(outdir, "overlay.svg"), specs)
        ctx.files.append("overlay.svg")
    elapsed = time.perf_counter() - start
    manifest = {
        "name": scn.name,
        "version": __version__,
        "seed": scn.seed,
        "t": str(scn.t),
        "epsilon": str(scn.initial_data.epsilon),
        "s0": scn.initial_data.s0.to_text(),
        "dimension": scn.initial_data.dimension,
        "products": list(scn.products),
        "tolerances": scn.tolerances(),
        "files": {
            name: sha256_file(os.path.join(outdir, name))
            for name in sorted(set(ctx.files))
        },
        "timing_file": "timing.txt",
    }
    write_json(os.path.join(outdir, "manifest.json"), manifest)
    with open(os.path.join(outdir, "timing.txt"), "w", encoding="utf-8") as f:
        f.write(f"wall_time_seconds {elapsed:.3f}\n")
    ctx.results["manifest"] = manifest
    return ctx


# -- verification --------------------------------------------------------------------------


class VerificationError(ValueError):
    pass


def verify_scenario(scn: Scenario, outdir: str, threads: int = 1) -> tuple:
    if not scn.expectations:
        raise VerificationError("scenario has no [expectations] block")
    needed = set()
    for exp in scn.expectations:
        needed |= {
            "perestroika_t": {"perestroika"},
            "eta_zero_t": {"eta"},
            "hotcool_point": {"hotcool"},
            "doublepoint_count": {"doublepoints"},
            "cusp_count": {"caustic"},
            "maxwell_b": {"maxwell"},
        }[exp.kind]
    scn.products = tuple(dict.fromkeys(list(scn.products) + sorted(needed)))
    ctx = run_scenario(scn, outdir, threads)
    report = []
    for exp in scn.expectations:
        row = _check_expectation(ctx, exp)
        report.append(row)
    ok = all(r["pass"] for r in report)
    write_json(os.path.join(outdir, "verify_report.json"), {"checks": report, "pass": ok})
    return report, ok


def _check_expectation(ctx: RunContext, exp) -> dict:
    row = {
        "kind": exp.kind,
        "expected": exp.raw,
        "tolerance": exp.tolerance,
        "observed": None,
        "pass": False,
    }
    if exp.kind == "perestroika_t":
        events = ctx.results.get("perestroika", [])
        if events:
            best = min(events, key=lambda ev: abs(ev.t - exp.values[0]))
            row["observed"] = best.t
            row["pass"] = abs(best.t - exp.values[0]) <= exp.tolerance
    elif exp.kind == "eta_zero_t":
        res = ctx.results.get("eta")
        zeros = res.zero_times if res else []
        if zeros:
            best = min(zeros, key=lambda z: abs(z - exp.values[0]))
            row["observed"] = best
            row["pass"] = abs(best - exp.values[0]) <= exp.tolerance
    elif exp.kind == "hotcool_point":
        pts = ctx.results.get("hotcool_boundary", [])
        ex, ey = exp.values
        if pts:
            best = min(
                pts, key=lambda p: math.hypot(p["point"][0] - ex, p["point"][1] - ey)
            )
            row["observed"] = best["point"]
            row["pass"] = (
                abs(best["point"][0] - ex) <= exp.tolerance
                and abs(best["point"][1] - ey) <= exp.tolerance
            )
    elif exp.kind == "doublepoint_count":
        counts = ctx.results.get("doublepoints", {})
        tv, n = exp.values
        key = _nearest_key(counts, tv)
        if key is not None:
            row["observed"] = counts[key]
            row["pass"] = counts[key] == n
    elif exp.kind == "cusp_count":
        info = ctx.results.get("caustic", {})
        cusps = info.get("cusp_parameters", [])
        tv, n = exp.values
        row["observed"] = len(cusps)
        row["pass"] = len(cusps) == n
    elif exp.kind == "maxwell_b":
        from .polyalg import Polynomial

        mk = ctx.results.get("maxwell")
        if mk is not None:
            expected = Polynomial.from_text(exp.values[0])
            got = mk.B
            row["observed"] = got.to_text()
            row["pass"] = got * expected.leading_coeff_grlex() == expected * got.leading_coeff_grlex()
    return row


def _nearest_key(counts: dict, tv: float):
    if not counts:
        return None
    return min(counts, key=lambda k: abs(float(Fraction(k)) - tv))
