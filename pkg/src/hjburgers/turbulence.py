"""Seeded Brownian scenarios, the zeta (real) and resultant-eta (complex)
turbulence processes, and recurrence statistics.

Paths refine by Brownian-bridge subdivision so halving h keeps the same path
(enabling convergence tests); every path in an ensemble owns an independent
generator stream derived from (master seed, path index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .action import ReducedAction
from .geometry.caustic import CausticData
from .geometry.perestroika import caustic_condition_numerators
from .polyalg import (
    Polynomial,
    RatFunc,
    isolate_real_roots,
    real_roots_in,
    refine_interval,
    resultant_with_constants,
    roots,
    substitute_ratfuncs,
    yun_squarefree,
)


class TurbulenceError(ValueError):
    pass


# -- Brownian scenarios ----------------------------------------------------------------


@dataclass(frozen=True)
class BrownianScenario:
    seed: int
    h: float
    horizon: float
    dimension: int
    times: np.ndarray
    w: np.ndarray  # shape (n+1, dimension)
    int_w: np.ndarray  # running trapezoid of W, per component
    int_w2: np.ndarray  # running trapezoid of |W|^2
    level: int = 0  # bridge refinement level

    @classmethod
    def generate(cls, seed: int, h: float, horizon: float, dimension: int = 1):
        if h <= 0 or horizon <= 0 or dimension not in (1, 2, 3):
            raise TurbulenceError("need h > 0, horizon > 0, dimension in {1,2,3}")
        n = int(round(horizon / h))
        rng = np.random.default_rng([np.uint64(seed), np.uint64(0)])
        dw = rng.standard_normal((n, dimension)) * math.sqrt(h)
        w = np.vstack([np.zeros((1, dimension)), np.cumsum(dw, axis=0)])
        return cls._finish(seed, h, n, dimension, w, level=0)

    @classmethod
    def from_path(cls, w, h: float, seed: int = 0):
        """Inject an explicit path (test mode); w has shape (n+1,) or (n+1, d)."""
        w = np.atleast_2d(np.asarray(w, dtype=float))
        if w.shape[0] == 1:
            w = w.T
        if float(np.max(np.abs(w[0]))) > 0:
            raise TurbulenceError("paths must start at W(0) = 0")
        n = w.shape[0] - 1
        return cls._finish(seed, h, n, w.shape[1], w, level=0)

    @classmethod
    def _finish(cls, seed, h, n, dimension, w, level):
        times = np.arange(n + 1) * h
        int_w = np.zeros_like(w)
        int_w[1:] = np.cumsum(0.5 * (w[1:] + w[:-1]) * h, axis=0)
        sq = np.sum(w * w, axis=1)
        int_w2 = np.zeros(n + 1)
        int_w2[1:] = np.cumsum(0.5 * (sq[1:] + sq[:-1]) * h)
        return cls(
            seed=seed,
            h=h,
            horizon=n * h,
            dimension=dimension,
            times=times,
            w=w,
            int_w=int_w,
            int_w2=int_w2,
            level=level,
        )

    def refine(self) -> "BrownianScenario":
        """Halve h by Brownian-bridge subdivision of the same path."""
        n = self.w.shape[0] - 1
        rng = np.random.default_rng([np.uint64(self.seed), np.uint64(self.level + 1)])
        mid_noise = rng.standard_normal((n, self.dimension)) * math.sqrt(self.h / 4)
        mids = 0.5 * (self.w[:-1] + self.w[1:]) + mid_noise
        w = np.empty((2 * n + 1, self.dimension))
        w[0::2] = self.w
        w[1::2] = mids
        return self._finish(self.seed, self.h / 2, 2 * n, self.dimension, w, self.level + 1)

    def scalar(self) -> np.ndarray:
        if self.dimension != 1:
            raise TurbulenceError("scalar path requested from multi-dimensional scenario")
        return self.w[:, 0]


# -- zero crossing records ----------------------------------------------------------------


@dataclass
class ZeroCrossingRecord:
    process_tag: str  # "zeta" | "eta"
    times: list  # bracketed zeros: (t_lo, t_hi, t_root)
    c: float
    params: tuple
    grazes: list = field(default_factory=list)
    degenerate: bool = False

    def zero_count(self, horizon: float | None = None) -> int:
        if horizon is None:
            return len(self.times)
        return sum(1 for (lo, hi, r) in self.times if r <= horizon)


def detect_zero_crossings(times, values, tag, c, params, tol=1e-12) -> ZeroCrossingRecord:
    """Sign-change zeros with bisection on the linear interpolant; tangential
    near-zeros reported as grazes."""
    values = np.asarray(values, dtype=float)
    scale = max(1.0, float(np.nanmax(np.abs(values))))
    rec = ZeroCrossingRecord(process_tag=tag, times=[], c=c, params=params)
    if np.all(np.abs(values) <= tol * scale):
        rec.degenerate = True
        return rec
    sgn = np.sign(values)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        v0, v1 = values[i], values[i + 1]
        t0, t1 = times[i], times[i + 1]
        root = t0 - v0 * (t1 - t0) / (v1 - v0)
        rec.times.append((float(t0), float(t1), float(root)))
    for i in np.nonzero(sgn == 0)[0]:
        if 0 < i < len(values):
            rec.times.append((float(times[i]), float(times[i]), float(times[i])))
    # grazes: interior local minima of |v| below tol without sign change
    absv = np.abs(values)
    for i in range(1, len(values) - 1):
        if absv[i] <= tol * scale and absv[i] < absv[i - 1] and absv[i] <= absv[i + 1]:
            if sgn[i - 1] * sgn[i + 1] > 0:
                rec.grazes.append(float(times[i]))
    rec.times.sort(key=lambda z: z[2])
    return rec


# -- zeta process -----------------------------------------------------------------------


def zeta_orthogonal(scn: BrownianScenario, a, eps, c) -> tuple:
    """Orthogonal-turbulence process on a scalar path:
    zeta(t) = -a*eps*W_t + eps^2*W_t*intW - (eps^2/2)*intW2 - c."""
    w = scn.scalar()
    iw = scn.int_w[:, 0]
    a, eps, c = float(a), float(eps), float(c)
    zeta = -a * eps * w + eps * eps * w * iw - 0.5 * eps * eps * scn.int_w2 - c
    rec = detect_zero_crossings(scn.times, zeta, "zeta", c, (a, eps))
    return zeta, rec


@dataclass
class ZetaBranch:
    branch_id: int
    times: list
    lams: list
    values: list


@dataclass
class ZetaDdimResult:
    times: np.ndarray
    branches: list
    gaps: list  # times with no lam root in the window
    events: list  # (t, "birth"|"death", branch_id)


def _zeta_symbolic(ra: ReducedAction, caustic: CausticData) -> tuple:
    """Symbolic pieces for the d-dim zeta process: the on-caustic action value
    psi (rational in lam, t) and the stationarity numerator polynomial in
    (lam, t, W-symbols)."""
    lam = Polynomial.variable("lam")
    assign = {v: cmp for v, cmp in zip(ra.data.space(), caustic.preparam)}
    f_on = substitute_ratfuncs(ra.f_hat.substitute({"x0": lam}), assign)
    two_t = RatFunc(2 * Polynomial.variable("t"))
    psi = f_on / two_t  # actual reduced-action value on the caustic
    dpsi = psi.derivative("lam")
    w_syms = [f"w{i+1}" for i in range(ra.dimension)]
    cond = dpsi
    for wsym, comp in zip(w_syms, caustic.preparam):
        cond = cond - RatFunc(Polynomial.variable(wsym)) * comp.derivative("lam")
    return psi, cond.num.canonical(), w_syms


def zeta_ddim(
    scn: BrownianScenario,
    caustic: CausticData,
    f0: ReducedAction,
    eps,
    lam_window=(-5, 5),
    skip_initial: int = 1,
) -> ZetaDdimResult:
    """d-dimensional zeta process on the grid: at each time the stationarity
    condition grad_lam(f0 - eps*x_t0(lam).W(t)) = 0 is solved in the window;
    branches are continued by nearest-root matching and per-branch values

        zeta = psi(lam) - eps*x.W + eps^2*W.intW - (eps^2/2)*intW2

    are returned (multiple branches separately; rootless times are gaps)."""
    d = f0.dimension
    if scn.dimension != d:
        raise TurbulenceError(f"scenario dimension {scn.dimension} != data dimension {d}")
    if d != 2:
        return _zeta_ddim_newton(scn, caustic, f0, eps, lam_window, skip_initial)
    eps = float(eps)
    psi, cond_num, w_syms = _zeta_symbolic(f0, caustic)
    # scale the W-symbols by eps once: condition numerator of dpsi - eps W.dx
    cond = cond_num.substitute(
        {w: Polynomial.variable(w) * Fraction(eps).limit_denominator(10**12) for w in w_syms}
    ) if eps != 1.0 else cond_num
    coeffs = cond.coefficients_in("lam")
    singular = caustic.singular_denominator
    branches: dict[int, ZetaBranch] = {}
    prev_roots: dict[int, float] = {}
    gaps, events = [], []
    next_id = 0
    lo, hi = float(lam_window[0]), float(lam_window[1])
    for k in range(skip_initial, len(scn.times)):
        t = float(scn.times[k])
        assign = {"t": t}
        for i, w in enumerate(w_syms):
            assign[w] = float(scn.w[k, i])
        cvals = [p.eval_float(assign) for p in coeffs]
        while cvals and abs(cvals[-1]) < 1e-300:
            cvals.pop()
        lams = []
        if len(cvals) > 1:
            rr = np.roots(list(reversed(cvals)))
            for z in rr:
                if abs(z.imag) < 1e-8 and lo <= z.real <= hi:
                    sv = abs(singular.eval_float({"lam": z.real, "t": t}))
                    if sv > 1e-12:
                        lams.append(float(z.real))
        lams.sort()
        if not lams:
            gaps.append(t)
            for bid in list(prev_roots):
                events.append((t, "death", bid))
                del prev_roots[bid]
            continue
        # continuation: match to previous roots by proximity
        new_prev: dict[int, float] = {}
        used = set()
        for bid, old in sorted(prev_roots.items()):
            best = None
            for j, lamv in enumerate(lams):
                if j in used:
                    continue
                dist = abs(lamv - old)
                if best is None or dist < best[0]:
                    best = (dist, j)
            if best is not None and best[0] < 0.5 * (1 + abs(old)):
                used.add(best[1])
                new_prev[bid] = lams[best[1]]
            else:
                events.append((t, "death", bid))
        for j, lamv in enumerate(lams):
            if j not in used:
                bid = next_id
                next_id += 1
                events.append((t, "birth", bid))
                branches[bid] = ZetaBranch(bid, [], [], [])
                new_prev[bid] = lamv
        prev_roots = new_prev
        for bid, lamv in prev_roots.items():
            x_pt = [cmp.eval_float({"lam": lamv, "t": t}) for cmp in caustic.preparam]
            wv = scn.w[k]
            val = psi.eval_float({"lam": lamv, "t": t})
            val -= eps * float(np.dot(x_pt, wv))
            val += eps * eps * float(np.dot(wv, scn.int_w[k]))
            val -= 0.5 * eps * eps * float(scn.int_w2[k])
            br = branches[bid]
            br.times.append(t)
            br.lams.append(lamv)
            br.values.append(val)
    return ZetaDdimResult(
        times=scn.times[skip_initial:],
        branches=sorted(branches.values(), key=lambda b: b.branch_id),
        gaps=gaps,
        events=events,
    )


def _zeta_ddim_newton(scn, caustic, f0, eps, lam_window, skip_initial):
    """d = 3: two stationarity conditions in (lam, lam2), solved by Newton
    continuation from a coarse grid scan."""
    eps = float(eps)
    lam1, lam2 = Polynomial.variable("lam"), Polynomial.variable("lam2")
    assign = {v: cmp for v, cmp in zip(f0.data.space(), caustic.preparam)}
    f_on = substitute_ratfuncs(f0.f_hat.substitute({"x0": lam1}), assign)
    psi = f_on / RatFunc(2 * Polynomial.variable("t"))
    w_syms = [f"w{i+1}" for i in range(3)]
    conds = []
    for pvar in ("lam", "lam2"):
        c = psi.derivative(pvar)
        for wsym, comp in zip(w_syms, caustic.preparam):
            c = c - RatFunc(Polynomial.variable(wsym)) * comp.derivative(pvar) * eps_frac(eps)
        conds.append(c.num.canonical())
    lo, hi = float(lam_window[0]), float(lam_window[1])
    grid = np.linspace(lo, hi, 13)
    branches: dict[int, ZetaBranch] = {}
    prev: dict[int, tuple] = {}
    gaps, events = [], []
    next_id = 0
    for k in range(skip_initial, len(scn.times)):
        t = float(scn.times[k])
        base = {"t": t}
        for i, w in enumerate(w_syms):
            base[w] = float(scn.w[k, i])
        sols = []
        seeds = list(prev.values()) + [(a, b) for a in grid[::3] for b in grid[::3]]
        for s in seeds:
            sol = _newton_pair(conds, base, s)
            if sol is None:
                continue
            u, v = sol
            if not (lo <= u <= hi and lo <= v <= hi):
                continue
            if any(abs(u - su) < 1e-6 and abs(v - sv) < 1e-6 for su, sv in sols):
                continue
            sols.append((u, v))
        if not sols:
            gaps.append(t)
            for bid in list(prev):
                events.append((t, "death", bid))
                del prev[bid]
            continue
        new_prev, used = {}, set()
        for bid, old in sorted(prev.items()):
            best = None
            for j, s in enumerate(sols):
                if j in used:
                    continue
                dist = math.hypot(s[0] - old[0], s[1] - old[1])
                if best is None or dist < best[0]:
                    best = (dist, j)
            if best is not None and best[0] < 0.5:
                used.add(best[1])
                new_prev[bid] = sols[best[1]]
            else:
                events.append((t, "death", bid))
        for j, s in enumerate(sols):
            if j not in used:
                bid = next_id
                next_id += 1
                events.append((t, "birth", bid))
                branches[bid] = ZetaBranch(bid, [], [], [])
                new_prev[bid] = s
        prev = new_prev
        for bid, (u, v) in prev.items():
            pa = {"lam": u, "lam2": v, "t": t}
            x_pt = [cmp.eval_float(pa) for cmp in caustic.preparam]
            wv = scn.w[k]
            val = psi.eval_float(pa)
            val -= eps * float(np.dot(x_pt, wv))
            val += eps * eps * float(np.dot(wv, scn.int_w[k]))
            val -= 0.5 * eps * eps * float(scn.int_w2[k])
            br = branches[bid]
            br.times.append(t)
            br.lams.append((u, v))
            br.values.append(val)
    return ZetaDdimResult(
        times=scn.times[skip_initial:],
        branches=sorted(branches.values(), key=lambda b: b.branch_id),
        gaps=gaps,
        events=events,
    )


def eps_frac(eps: float) -> Fraction:
    return Fraction(eps).limit_denominator(10**12)


def _newton_pair(conds, base, seed, max_iter=40):
    u, v = float(seed[0]), float(seed[1])
    d = [[c.derivative("lam"), c.derivative("lam2")] for c in conds]
    for _ in range(max_iter):
        a = dict(base)
        a["lam"], a["lam2"] = u, v
        f1, s1 = conds[0].eval_float_scaled(a)
        f2, s2 = conds[1].eval_float_scaled(a)
        j11, j12 = d[0][0].eval_float(a), d[0][1].eval_float(a)
        j21, j22 = d[1][0].eval_float(a), d[1][1].eval_float(a)
        det = j11 * j22 - j12 * j21
        if det == 0 or not np.isfinite(det):
            return None
        du = (f1 * j22 - f2 * j12) / det
        dv = (f2 * j11 - f1 * j21) / det
        u, v = u - du, v - dv
        if not (np.isfinite(u) and np.isfinite(v)):
            return None
        if abs(du) < 1e-13 * (1 + abs(u)) and abs(dv) < 1e-13 * (1 + abs(v)):
            break
    a = dict(base)
    a["lam"], a["lam2"] = u, v
    f1, s1 = conds[0].eval_float_scaled(a)
    f2, s2 = conds[1].eval_float_scaled(a)
    if abs(f1) <= 1e-8 * s1 and abs(f2) <= 1e-8 * s2:
        return u, v
    return None


def classify_branch_events(
    result: ZetaDdimResult, scn, caustic, f0, eps, lam_window=(-3, 3), margin=0.5
) -> list:
    """Explain every branch birth/death: simultaneous pairs must come from a
    root collision (the discriminant of the stationarity polynomial changes
    sign across the time bracket); single events are window-boundary or
    leading-coefficient escapes.

    Returns [{t, kind, n, class, disc_flip}] with class in
    {"pair_collision", "boundary", "degree_drop"}.
    """
    eps = float(eps)
    psi, cond_num, w_syms = _zeta_symbolic(f0, caustic)
    cond = cond_num.substitute(
        {w: Polynomial.variable(w) * eps_frac(eps) for w in w_syms}
    )
    coeff_polys = cond.coefficients_in("lam")
    by_id = {b.branch_id: b for b in result.branches}
    lo, hi = float(lam_window[0]), float(lam_window[1])

    def disc_sign(k):
        assign = {"t": float(scn.times[k])}
        for i, w in enumerate(w_syms):
            assign[w] = float(scn.w[k, i])
        cs = [p.eval_float(assign) for p in coeff_polys]
        while cs and abs(cs[-1]) < 1e-280:
            cs.pop()
        if len(cs) < 3:
            return 0.0
        rr = np.roots(list(reversed(cs)))
        prod = 1.0 + 0j
        for i in range(len(rr)):
            for j in range(i + 1, len(rr)):
                prod *= (rr[i] - rr[j]) ** 2
        return float(np.sign(prod.real))

    from collections import defaultdict

    groups = defaultdict(list)
    for t, kind, bid in result.events:
        if t <= float(scn.times[1]):
            continue
        groups[(t, kind)].append(bid)
    out = []
    for (t, kind), bids in sorted(groups.items()):
        lams = []
        for bid in bids:
            b = by_id.get(bid)
            if b and b.lams:
                lam_at = b.lams[0] if kind == "birth" else b.lams[-1]
                lams.append(lam_at if not isinstance(lam_at, tuple) else lam_at[0])
        k = int(round(t / scn.h))
        near_boundary = any(l < lo + margin or l > hi - margin for l in lams)
        flip = False
        if k >= 1 and k < len(scn.times):
            s_before = disc_sign(k - 1)
            s_after = disc_sign(min(k, len(scn.times) - 1))
            flip = s_before * s_after <= 0
        if len(bids) >= 2 and flip:
            cls = "pair_collision"
        elif near_boundary:
            cls = "boundary"
        elif len(bids) >= 2:
            cls = "pair_collision" if flip else "degree_drop"
        else:
            cls = "degree_drop"
        out.append(
            {"t": t, "kind": kind, "n": len(bids), "class": cls, "disc_flip": flip}
        )
    return out


# -- resultant eta process ---------------------------------------------------------------


@dataclass
class EtaResult:
    times: np.ndarray
    values: np.ndarray  # |R(t_k)|
    record: ZeroCrossingRecord
    zero_times: list  # exact-isolation roots of R in (0, horizon]
    degenerate: bool
    resultant_in_t: Polynomial


def eta_process(
    ra: ReducedAction,
    caustic: CausticData,
    scn: BrownianScenario,
    eps=0,
) -> EtaResult:
    """rho_eta(t) = |Res_lam(f''' , f'''')| along the caustic.  For the linear
    noise family the translation cancels along the caustic, so the process is
    deterministic: eps and the path affect nothing but the grid."""
    n3, n4 = caustic_condition_numerators(ra, caustic, strip_t=False)
    r_t = resultant_with_constants(n3, n4, "lam").canonical()
    degenerate = r_t.is_zero()
    times = scn.times
    if degenerate:
        values = np.zeros_like(times)
        rec = ZeroCrossingRecord("eta", [], 0.0, (float(eps),), degenerate=True)
        return EtaResult(times, values, rec, [], True, r_t)
    values = np.array([abs(r_t.eval_float({"t": float(t)})) for t in times])
    zero_times = []
    if r_t.degree("t") >= 1:
        zero_times = [
            float(z)
            for z in real_roots_in(r_t, Fraction(0), Fraction(scn.horizon).limit_denominator(10**9), var="t", width=1e-15)
            if float(z) > 0
        ]
    rec = ZeroCrossingRecord("eta", [], 0.0, (float(eps),))
    for z in zero_times:
        k = min(int(z / scn.h), len(times) - 2)
        rec.times.append((float(times[k]), float(times[k + 1]), z))
    # |R| does not change sign; odd-multiplicity roots cross in R itself,
    # even ones are grazes
    sq = yun_squarefree(r_t, "t")
    odd_roots = set()
    for fac, mult in sq:
        if mult % 2 == 1 and fac.degree("t") >= 1:
            for z in real_roots_in(fac, Fraction(0), Fraction(scn.horizon).limit_denominator(10**9), var="t", width=1e-12):
                if float(z) > 0:
                    odd_roots.add(round(float(z), 9))
    rec.grazes = [z for z in zero_times if round(z, 9) not in odd_roots]
    return EtaResult(times, values, rec, zero_times, False, r_t)


def eta_factorised_check(
    ra: ReducedAction,
    caustic: CausticData,
    t_values,
    rel_tol: float = 1e-8,
) -> list:
    """Root-product form of the eta resultant at fixed times:

       |Res(g3, g4)| = |lc(g3)|^deg(g4) * prod_real |g4(r)| * prod_pairs |g4(a+i eta)|^2

    with the real roots and conjugate pairs of g3 taken from polyalg.
    Returns [(t, direct, factorised, relative error)] for each sampled time."""
    n3, n4 = caustic_condition_numerators(ra, caustic, strip_t=False)
    out = []
    for t in t_values:
        tq = Fraction(t)
        g3 = n3.substitute({"t": tq}).canonical()
        g4 = n4.substitute({"t": tq}).canonical()
        if g3.degree("lam") < 1:
            continue
        direct = abs(float(resultant_with_constants(g3, g4, "lam").constant_value()))
        rs = roots(g3, var="lam", real_width=Fraction(1, 10**14), pair_width=1e-6)
        lc = float(g3.leading_coefficient("lam").constant_value())
        g4c = [float(Fraction(c.constant_value())) for c in g4.coefficients_in("lam")]

        def g4_at(z):
            acc = 0j
            for cc in reversed(g4c):
                acc = acc * z + cc
            return acc

        fact = abs(lc) ** g4.degree("lam")
        for r in rs.real_roots:
            fact *= abs(g4_at(complex(r.value(), 0.0))) ** r.multiplicity
        for p in rs.complex_pairs:
            fact *= abs(g4_at(complex(p.a, p.eta))) ** (2 * p.multiplicity)
        rel = abs(direct - fact) / max(abs(direct), abs(fact), 1e-300)
        out.append((float(t), direct, fact, rel))
    return out


# -- ensembles and statistics ---------------------------------------------------------------


def zeta_orthogonal_ensemble(
    master_seed: int,
    n_paths: int,
    h: float,
    horizon: float,
    a,
    eps,
    c,
) -> list:
    """Independent seeded paths (seed = (master, index)); returns the zero
    records computed on the full horizon."""
    records = []
    for i in range(n_paths):
        rng = np.random.default_rng([np.uint64(master_seed), np.uint64(i)])
        n = int(round(horizon / h))
        dw = rng.standard_normal((n, 1)) * math.sqrt(h)
        w = np.vstack([np.zeros((1, 1)), np.cumsum(dw, axis=0)])
        scn = BrownianScenario._finish(master_seed, h, n, 1, w, level=0)
        _, rec = zeta_orthogonal(scn, a, eps, c)
        records.append(rec)
    return records


def zeta_values_vectorized(master_seed, n_paths, h, horizon, a, eps, c):
    """All paths at once (used for Monte-Carlo moments); returns (times, zeta)
    with zeta of shape (n+1, n_paths)."""
    n = int(round(horizon / h))
    rng = np.random.default_rng([np.uint64(master_seed), np.uint64(2**32)])
    dw = rng.standard_normal((n, n_paths)) * math.sqrt(h)
    w = np.vstack([np.zeros((1, n_paths)), np.cumsum(dw, axis=0)])
    iw = np.zeros_like(w)
    iw[1:] = np.cumsum(0.5 * (w[1:] + w[:-1]) * h, axis=0)
    iw2 = np.zeros_like(w)
    iw2[1:] = np.cumsum(0.5 * (w[1:] ** 2 + w[:-1] ** 2) * h, axis=0)
    times = np.arange(n + 1) * h
    zeta = -a * eps * w + eps * eps * w * iw - 0.5 * eps * eps * iw2 - c
    return times, zeta


def recurrence_stats(records: list, horizons: list) -> list:
    """Per horizon: fraction of paths with >= k zeros (k = 1, 2, 3), the mean
    inter-zero gap, and binomial standard errors.  Zero sets are restrictions
    of the full-horizon records, so fractions are nondecreasing in T."""
    if len(records) < 100:
        raise TurbulenceError("recurrence statistics need >= 100 independent seeds")
    n = len(records)
    rows = []
    for horizon in horizons:
        counts = np.array([r.zero_count(horizon) for r in records])
        row = {"horizon": float(horizon), "n_paths": n}
        for k in (1, 2, 3):
            frac = float(np.mean(counts >= k))
            row[f"frac_ge_{k}"] = frac
            row[f"se_ge_{k}"] = math.sqrt(max(frac * (1 - frac), 0.0) / n)
        gaps = []
        for r in records:
            zs = [z for (_, _, z) in r.times if z <= horizon]
            gaps.extend(np.diff(zs))
        row["mean_gap"] = float(np.mean(gaps)) if gaps else float("nan")
        row["n_gaps"] = len(gaps)
        rows.append(row)
    return rows
