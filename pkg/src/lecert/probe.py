"""Numerical evidence for the regularity inequalities along arcs on V(f).

Arcs approach the origin with t = tau*s, z1 = zeta*s^(1/2) and the transverse
coordinates z~ = s*u, after which one z~ coordinate is moved onto V(f) by
damped Newton.  Along each arc four ratios are monitored; each should tend to
zero, and the report records whether it visibly does.

Gradients follow one convention for f and for the control function rho: the
vector of conjugated holomorphic partials, with the Hermitian inner product
<u, v> = sum u_i conj(v_i).

In "isolated" mode the stratum is the t-axis alone (still t = tau*s), rho is
built from every vertex of the generic Newton polyhedron, and all of z is
transverse; this covers families with an isolated singularity at each t.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .newton import newton_polyhedron, z1zero_vertex_data
from .numeric import CompiledPoly
from .poly import ComplexPoint, Exponent, PolyFamily

LINE = "line"
ISOLATED = "isolated"

DECAY_FACTOR = 0.2
MIN_SLOPE = 0.1
IDENTITY_TOL = 1e-9
RESIDUAL_TOL = 1e-12
SINGULAR_TOL = 1e-14
MAX_REDRAWS = 5
RATIOS = ("R1", "R2", "C1", "C2")


class ProbeError(RuntimeError):
    pass


class OnSingularLocus(ProbeError):
    pass


@dataclass(frozen=True)
class ControlFunction:
    """rho(z) = sum_i |z^alpha_i|^2."""

    alphas: tuple[Exponent, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_exps", np.array(self.alphas, dtype=np.int64))

    def monomials(self, z: np.ndarray) -> np.ndarray:
        return np.prod(np.asarray(z, dtype=complex) ** self._exps, axis=-1)

    def __call__(self, z: np.ndarray) -> float:
        return float(np.sum(np.abs(self.monomials(z)) ** 2))

    def gradient(self, z: np.ndarray) -> np.ndarray:
        """(d rho / d conj z_j)_j, which is the conjugated holomorphic gradient."""
        z = np.asarray(z, dtype=complex)
        m = self.monomials(z)
        out = np.zeros(len(z), dtype=complex)
        for j in range(len(z)):
            col = self._exps[:, j]
            live = col > 0
            if not np.any(live):
                continue
            zj = np.conj(z[j])
            if zj == 0:
                # |z_j|^(2a) with a >= 1 has vanishing derivative at z_j = 0
                continue
            out[j] = np.sum(col[live] * m[live] * np.conj(m[live]) / zj)
        return out


def control_function(f: PolyFamily, mode: str = LINE) -> ControlFunction:
    """rho from the vertices of the generic Newton polyhedron (z1-free ones in line mode)."""
    poly = newton_polyhedron(f.support())
    if mode == ISOLATED:
        return ControlFunction(poly.vertices)
    return ControlFunction(z1zero_vertex_data(poly).alphas)


@dataclass(frozen=True)
class GradientData:
    df: np.ndarray
    drho: np.ndarray
    d_stratum: np.ndarray
    d_transverse: np.ndarray
    A: complex
    wedge: float

    @property
    def identity_error(self) -> float:
        """Relative defect of (wedge/|df|)^2 + |A|^2 |df|^2 = |drho|^2."""
        nf = float(np.linalg.norm(self.df))
        nr2 = float(np.linalg.norm(self.drho)) ** 2
        lhs = (self.wedge / nf) ** 2 + abs(self.A) ** 2 * nf**2
        return abs(lhs - nr2) / nr2 if nr2 > 0 else abs(lhs)


class _Evaluator:
    def __init__(self, f: PolyFamily, mode: str, rho: ControlFunction):
        self.n = f.n
        self.mode = mode
        self.f = CompiledPoly(f)
        self.parts = [CompiledPoly(p) for p in f.partials()]
        self.rho = rho
        # indices into the (t, z1, ..., zn) vector
        self.stratum = [0, 1] if mode == LINE else [0]
        self.transverse = list(range(len(self.stratum), f.n + 1))

    def holo(self, t: complex, z: np.ndarray) -> np.ndarray:
        return np.array([p(t, z) for p in self.parts], dtype=complex)

    def gradient_terms(self, t: complex, z: np.ndarray) -> float:
        """Size of the largest single term among all partials, for relative guards."""
        biggest = 0.0
        for p in self.parts:
            if len(p.exps):
                biggest = max(biggest, float(np.max(np.abs(p.monomials(z) * p.coeffs_at(t)))))
        return biggest

    def at(self, p: ComplexPoint) -> GradientData:
        z = np.array(p.z, dtype=complex)
        df = np.conj(self.holo(p.t, z))
        nf = float(np.linalg.norm(df))
        if nf < SINGULAR_TOL * max(self.gradient_terms(p.t, z), np.finfo(float).tiny):
            raise OnSingularLocus("on singular locus")
        drho = np.concatenate([[0j], self.rho.gradient(z)])
        A = np.vdot(df, drho) / nf**2
        wedge = nf * float(np.linalg.norm(drho - A * df))
        return GradientData(df, drho, df[self.stratum], df[self.transverse], A, wedge)

    def ratios(self, p: ComplexPoint) -> tuple[dict[str, float], GradientData]:
        g = self.at(p)
        z = np.array(p.z, dtype=complex)
        nf = float(np.linalg.norm(g.df))
        n_str = float(np.linalg.norm(g.d_stratum))
        mono = float(np.sum(np.abs(self.rho.monomials(z))))
        r = {
            "R1": (abs(g.df[0]) + mono) / float(np.linalg.norm(g.df[1:])),
            "R2": n_str * float(np.linalg.norm(g.drho)) / g.wedge if g.wedge > 1e-300 else float("nan"),
            "C1": abs(g.A) * n_str / (g.wedge / nf) if g.wedge > 1e-300 else float("nan"),
            "C2": n_str / float(np.linalg.norm(g.d_transverse)),
        }
        return r, g


def gradients_at(f: PolyFamily, rho: ControlFunction, p: ComplexPoint, mode: str = LINE) -> GradientData:
    return _Evaluator(f, mode, rho).at(p)


# -- arcs --------------------------------------------------------------------------


@dataclass
class Arc:
    arc_id: int
    s: np.ndarray
    points: list[ComplexPoint]
    trace: dict = field(default_factory=dict)


def s_grid(s0: float = 0.1, ratio: float = 0.5, steps: int = 14) -> np.ndarray:
    return s0 * ratio ** np.arange(steps + 1)


def _unit(rng: np.random.Generator, m: int) -> np.ndarray:
    while True:
        u = rng.normal(size=m) + 1j * rng.normal(size=m)
        u /= np.linalg.norm(u)
        if np.min(np.abs(u)) > 0.2 / np.sqrt(m):
            return u


def _phase(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def _term_scale(cp: CompiledPoly, t: complex, z: np.ndarray) -> float:
    return float(np.sum(np.abs(cp.monomials(z) * cp.coeffs_at(t))))


def _project(ev: _Evaluator, t: complex, z: np.ndarray, j: int, iters: int = 100) -> np.ndarray | None:
    """Damped Newton in z_j until f vanishes to working precision."""
    z = z.copy()
    dj = ev.parts[j + 1]
    val = ev.f(t, z)
    for _ in range(iters):
        if abs(val) <= 1e-14 * _term_scale(ev.f, t, z):
            break
        d = dj(t, z)
        if d == 0 or not np.isfinite(d):
            return None
        step = val / d
        lam = 1.0
        while lam > 1e-6:
            trial = z.copy()
            trial[j] -= lam * step
            tv = ev.f(t, trial)
            if abs(tv) < abs(val):
                z, val = trial, tv
                break
            lam /= 2
        else:
            break
    if z[j] == 0 or not np.all(np.isfinite(z)):
        return None
    df = ev.holo(t, z)
    if abs(val) > RESIDUAL_TOL * (1 + np.linalg.norm(df)) or abs(val) > 1e-10 * _term_scale(ev.f, t, z):
        return None
    return z


def _try_arc(ev: _Evaluator, rng: np.random.Generator, grid: np.ndarray) -> tuple[list[ComplexPoint], dict] | None:
    n = ev.n
    tau = _phase(rng) * rng.uniform(0.5, 1.5)
    lead = _phase(rng) * rng.uniform(0.5, 1.5)
    if ev.mode == LINE:
        u = _unit(rng, n - 1)
        cols = list(range(1, n))
    else:
        u = _unit(rng, n)
        cols = list(range(n))
    j = cols[int(rng.integers(len(cols)))]
    points = []
    guess = None
    for s in grid:
        if ev.mode == LINE:
            t = tau * s
            z = np.concatenate([[lead * np.sqrt(s)], s * u])
        else:
            t = tau * s
            z = s * u
        if guess is not None:
            z[j] = guess
        z = _project(ev, t, z, j)
        if z is None:
            return None
        points.append(ComplexPoint(complex(t), tuple(complex(v) for v in z)))
        if len(points) >= 2:
            prev = points[-2].z[j]
            guess = z[j] * (z[j] / prev)
        else:
            guess = z[j]
    trace = {"tau": [tau.real, tau.imag], "lead": [lead.real, lead.imag], "u": [[c.real, c.imag] for c in u], "newton_coordinate": j + 1}
    return points, trace


def make_arcs(
    f: PolyFamily,
    count: int = 20,
    seed: int = 42,
    s0: float = 0.1,
    ratio: float = 0.5,
    steps: int = 14,
    mode: str = LINE,
) -> list[Arc]:
    if not 0 < ratio < 1 or s0 <= 0 or steps < 1:
        raise ValueError("need s0 > 0, 0 < ratio < 1 and steps >= 1")
    ev = _Evaluator(f, mode, control_function(f, mode))
    grid = s_grid(s0, ratio, steps)
    arcs, failed = [], 0
    for arc_id in range(count):
        rng = np.random.default_rng([seed, arc_id])
        for attempt in range(MAX_REDRAWS + 1):
            got = _try_arc(ev, rng, grid)
            if got is not None:
                points, trace = got
                trace["redraws"] = attempt
                arcs.append(Arc(arc_id, grid.copy(), points, trace))
                break
        else:
            failed += 1
    if failed > count / 2:
        raise ProbeError("arc generation failed")
    return arcs


# -- ratios and report ---------------------------------------------------------------


def decay_slope(s: np.ndarray, values: np.ndarray) -> float:
    """Least-squares slope of log(value) against log(s)."""
    ok = np.isfinite(values) & (values > 0)
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(s[ok]), np.log(values[ok]), 1)[0])


def ratio_passes(s: np.ndarray, values: np.ndarray) -> bool:
    first, last = values[0], values[-1]
    if not (np.isfinite(first) and np.isfinite(last)) or first <= 0:
        return False
    return bool(last < DECAY_FACTOR * first and decay_slope(s, values) > MIN_SLOPE)


@dataclass
class ArcProbeReport:
    mode: str
    seed: int
    config: dict
    alphas: list[list[int]]
    arcs: list[dict]
    pass_fraction: dict[str, float]
    identity_max_error: float
    skipped: list[str]

    @property
    def identity_ok(self) -> bool:
        return bool(self.identity_max_error <= IDENTITY_TOL)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "config": self.config,
            "thresholds": {"decay_factor": DECAY_FACTOR, "min_slope": MIN_SLOPE, "identity_tol": IDENTITY_TOL},
            "alphas": self.alphas,
            "arcs": self.arcs,
            "pass_fraction": self.pass_fraction,
            "identity_max_error": self.identity_max_error,
            "identity_ok": self.identity_ok,
            "skipped": self.skipped,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["arc_id", "k", "s", *RATIOS])
        for arc in self.arcs:
            for k, s in enumerate(arc["s"]):
                w.writerow([arc["arc_id"], k, "%.17g" % s, *("%.17g" % arc[r][k] for r in RATIOS)])
        return buf.getvalue()


def _ratio_table(ev: _Evaluator, arcs: list[Arc]) -> tuple[list[dict], float, list[str]]:
    rows, worst, skipped = [], 0.0, []
    for arc in arcs:
        seqs = {r: [] for r in RATIOS}
        for k, p in enumerate(arc.points):
            vals, g = ev.ratios(p)
            worst = max(worst, g.identity_error)
            if not np.isfinite(vals["R2"]):
                skipped.append(f"arc {arc.arc_id} point {k}: wedge below 1e-300")
            for r in RATIOS:
                seqs[r].append(vals[r])
        entry = {"arc_id": arc.arc_id, "s": [float(x) for x in arc.s]}
        for r in RATIOS:
            v = np.array(seqs[r])
            entry[r] = [float(x) for x in v]
            entry[f"{r}_slope"] = decay_slope(arc.s, v)
            entry[f"{r}_pass"] = ratio_passes(arc.s, v)
        entry["trace"] = arc.trace
        rows.append(entry)
    return rows, worst, skipped


def probe_ratios(
    f: PolyFamily,
    count: int = 20,
    seed: int = 42,
    s0: float = 0.1,
    ratio: float = 0.5,
    steps: int = 14,
    mode: str = LINE,
) -> ArcProbeReport:
    rho = control_function(f, mode)
    ev = _Evaluator(f, mode, rho)
    arcs = make_arcs(f, count, seed, s0, ratio, steps, mode)
    rows, worst, skipped = _ratio_table(ev, arcs)
    frac = {r: sum(e[f"{r}_pass"] for e in rows) / len(rows) for r in RATIOS}
    config = {"arcs": count, "seed": seed, "s0": s0, "ratio": ratio, "steps": steps, "mode": mode}
    return ArcProbeReport(mode, seed, config, [list(a) for a in rho.alphas], rows, frac, worst, skipped)


def _single(f: PolyFamily, arcs: list[Arc], names: tuple[str, ...], mode: str) -> list[dict[str, list[float]]]:
    ev = _Evaluator(f, mode, control_function(f, mode))
    out = []
    for arc in arcs:
        vals = [ev.ratios(p)[0] for p in arc.points]
        out.append({r: [v[r] for v in vals] for r in names})
    return out


def probe_thom_af(f: PolyFamily, arcs: list[Arc], mode: str = LINE) -> list[list[float]]:
    """R1 = (|df/dt| + sum |z^alpha_i|) / |d_z f| along each arc."""
    return [d["R1"] for d in _single(f, arcs, ("R1",), mode)]


def probe_mr3(f: PolyFamily, arcs: list[Arc], mode: str = LINE) -> list[list[float]]:
    """R2 = |d_{t,z1} f| |d rho| / |df ^ d rho| along each arc."""
    return [d["R2"] for d in _single(f, arcs, ("R2",), mode)]


def probe_abderrahmane(f: PolyFamily, arcs: list[Arc], mode: str = LINE) -> list[tuple[list[float], list[float]]]:
    """(C1, C2) along each arc: |A| |d_{t,z1} f| / |d rho restricted to X| and |d_{t,z1} f| / |d_z~ f|."""
    return [(d["C1"], d["C2"]) for d in _single(f, arcs, ("C1", "C2"), mode)]
