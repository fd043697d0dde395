"""Line-singularity hypotheses and the three admissibility conditions.

A family is admissible when, for the sampled parameter values, f_t is Newton
non-degenerate, f_t (t != 0) has a pure power of every z_j with j >= 2, and
every monomial involving z1 is controlled by the z1-free vertices alpha_i.
The last condition is checked in two readings:

* ``strict``: b_j >= a_j = max_i a_ij for all j >= 2;
* ``per_vertex`` (default): some single alpha_i satisfies b_j >= a_ij for all
  j >= 2.  This is what the gradient estimate |d_{t,z1} f| <~ sum |z^alpha_i|
  actually needs, and it accepts families the strict reading rejects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from . import nondegen
from .milnor import milnor_number_colength
from .newton import (
    is_convenient,
    is_quasi_convenient,
    newton_number,
    newton_polyhedron,
    z1zero_vertex_data,
    NoZ1FreeVertex,
)
from .numeric import CompiledPoly
from .poly import Exponent, PolyFamily

PER_VERTEX = "per_vertex"
STRICT = "strict"
MODES = (PER_VERTEX, STRICT)

DEFAULT_T_SAMPLES = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-2))

PASS_STRICT = "PassStrict"
PASS_PER_VERTEX = "PassPerVertex"
FAIL = "Fail"

ADMISSIBLE = "Admissible"
NOT_ADMISSIBLE = "NotAdmissible"
UNKNOWN = "Unknown"


def fmt_t(t: Fraction) -> str:
    return str(Fraction(t))


def _exp(e: Sequence[int] | None):
    return list(e) if e is not None else None


@dataclass
class AdmissibilityReport:
    axis_contained: bool
    restriction_isolated: str
    restriction_mu: dict[str, int | None]
    slice_probe: dict
    quasi_convenient: bool
    pure_z1_power: bool
    nondegenerate: dict[str, nondegen.NondegeneracyVerdict]
    condition_iii: dict
    mode: str
    overall: str
    reason: str = ""
    t_samples: tuple[Fraction, ...] = field(default=DEFAULT_T_SAMPLES)

    def to_dict(self) -> dict:
        return {
            "line_singularity": {
                "axis_contained": self.axis_contained,
                "restriction_isolated": self.restriction_isolated,
                "restriction_mu": self.restriction_mu,
                "slice_probe": self.slice_probe,
            },
            "quasi_convenient": self.quasi_convenient,
            "pure_z1_power": self.pure_z1_power,
            "nondegenerate": {t: v.to_dict() for t, v in self.nondegenerate.items()},
            "condition_iii": self.condition_iii,
            "mode": self.mode,
            "overall": self.overall,
            "reason": self.reason,
            "t_samples": [fmt_t(t) for t in self.t_samples],
        }


# -- line singularity -------------------------------------------------------


def axis_contained(f: PolyFamily) -> bool:
    """f and every df/dz_j vanish identically on z2 = ... = zn = 0."""
    return f.vanishes_on_z1_axis() and all(
        f.partial_z(j).vanishes_on_z1_axis() for j in range(1, f.n + 1)
    )


def restriction_milnor(ft: PolyFamily, tier: int = 3, seed: int = 0) -> tuple[str, int | None]:
    """Milnor number of f_t restricted to z1 = 0, as (status, mu)."""
    g = ft.substitute_z1(0)
    if g.is_zero():
        return "No", None
    used = {j for e in g.terms for j, b in enumerate(e) if b}
    if len(used) < g.n:
        return "No", None  # independent of some variable: critical locus is not a point
    poly = newton_polyhedron(g)
    if is_convenient(poly):
        verdict = nondegen.is_newton_nondegenerate(g, tier=tier, seed=seed, np_=poly)
        if verdict.status == nondegen.NONDEGENERATE:
            return "Yes", newton_number(poly)
    mu = milnor_number_colength(g)
    return ("Yes", mu) if mu is not None else ("Unknown", None)


def _random_small_rational(rng: np.random.Generator, max_num: int = 3) -> Fraction:
    num = int(rng.integers(1, max_num + 1))
    den = int(rng.integers(10, 31))
    sign = 1 if rng.random() < 0.5 else -1
    return Fraction(sign * num, den)


def _slice_critical_search(
    h: PolyFamily, rng: np.random.Generator, starts: int, box: float
) -> np.ndarray | None:
    m = h.n
    grads = [CompiledPoly(h.partial_z(j)) for j in range(1, m + 1)]
    bounds = [CompiledPoly(h.partial_z(j).scale(1)) for j in range(1, m + 1)]
    for b in bounds:
        b.tcoef = np.abs(b.tcoef)

    def residual(x: np.ndarray) -> np.ndarray:
        z = x[:m] + 1j * x[m:]
        with np.errstate(all="ignore"):
            g = np.array([p(0, z) for p in grads])
            s = np.sqrt(sum(abs(b(0, np.abs(z))) ** 2 for b in bounds)) + 1e-300
            r = g / s
        if not np.all(np.isfinite(r)):
            return np.full(2 * m, 1e3)
        return np.concatenate([r.real, r.imag])

    for _ in range(starts):
        x0 = rng.uniform(-box, box, size=2 * m)
        sol = least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=300)
        z = sol.x[:m] + 1j * sol.x[m:]
        size = np.max(np.abs(z))
        if np.linalg.norm(sol.fun) < 1e-9 and 1e-5 <= size <= box:
            return z
    return None


def slice_probe(
    f: PolyFamily,
    t_samples: Sequence[Fraction],
    seed: int = 0,
    trials: int = 3,
    starts: int = 6,
    box: float = 0.1,
) -> dict:
    """Look for critical points of f_t(c, .) away from the origin in a small box.

    A heuristic guard that the singular locus is the z1-axis and not larger.
    """
    if trials <= 0:
        return {"status": "Skipped", "witness": None, "box": box, "slices": []}
    rng = np.random.default_rng(seed)
    slices = []
    for t in t_samples:
        ft = f.specialize_t(t)
        for _ in range(trials):
            c = _random_small_rational(rng)
            h = ft.substitute_z1(c)
            slices.append([fmt_t(t), fmt_t(c)])
            z = _slice_critical_search(h, rng, starts, box) if not h.is_zero() else np.zeros(h.n)
            if z is not None:
                witness = {
                    "t": fmt_t(t),
                    "z1": fmt_t(c),
                    "z_tilde": [[float(v.real), float(v.imag)] for v in np.atleast_1d(z)],
                }
                return {"status": "Fail", "witness": witness, "box": box, "slices": slices}
    return {"status": "Pass", "witness": None, "box": box, "slices": slices}


def check_line_singularity(
    f: PolyFamily,
    t_samples: Sequence[Fraction] = DEFAULT_T_SAMPLES,
    tier: int = 3,
    seed: int = 0,
    slice_trials: int = 3,
) -> dict:
    contained = axis_contained(f)
    per_t: dict[str, int | None] = {}
    statuses = []
    for t in t_samples:
        status, mu = restriction_milnor(f.specialize_t(t), tier=tier, seed=seed)
        per_t[fmt_t(t)] = mu
        statuses.append(status)
    if "No" in statuses:
        isolated = "No"
    elif "Unknown" in statuses:
        isolated = "Unknown"
    else:
        isolated = "Yes"
    probe = slice_probe(f, t_samples, seed=seed, trials=slice_trials)
    return {
        "axis_contained": contained,
        "restriction_isolated": isolated,
        "restriction_mu": per_t,
        "slice_probe": probe,
    }


# -- condition (iii) ------------------------------------------------------------


def _dominates(alpha: Exponent, b: Exponent) -> bool:
    return all(b[j] >= alpha[j] for j in range(1, len(b)))


def check_condition_iii(
    f: PolyFamily,
    mode: str = PER_VERTEX,
    t_samples: Sequence[Fraction] = DEFAULT_T_SAMPLES,
) -> dict:
    """Compare z1-monomials of f against the z1-free vertices at every t != 0."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    nonzero = [t for t in t_samples if t != 0] or [Fraction(1)]
    z1_monomials = [e for e in f.support() if e[0] != 0]
    strict_offender = None
    vertex_offender = None
    alphas_seen = []
    for t in nonzero:
        ft = f.specialize_t(t)
        try:
            data = z1zero_vertex_data(newton_polyhedron(ft))
        except (NoZ1FreeVertex, ValueError):
            return {
                "status": FAIL,
                "offender": _exp(z1_monomials[0]) if z1_monomials else None,
                "strict_offender": None,
                "alphas": [],
                "a_sup": [],
                "mode": mode,
                "passed": False,
                "note": "no z1-free vertex",
            }
        alphas_seen.append(data)
        for b in z1_monomials:
            if strict_offender is None and any(
                b[j] < data.a_sup[j - 1] for j in range(1, f.n)
            ):
                strict_offender = b
            if vertex_offender is None and not any(_dominates(a, b) for a in data.alphas):
                vertex_offender = b
    if vertex_offender is not None:
        status = FAIL
    elif strict_offender is not None:
        status = PASS_PER_VERTEX
    else:
        status = PASS_STRICT
    passed = status == PASS_STRICT or (status == PASS_PER_VERTEX and mode == PER_VERTEX)
    first = alphas_seen[0]
    return {
        "status": status,
        "offender": _exp(vertex_offender),
        "strict_offender": _exp(strict_offender),
        "alphas": [list(a) for a in first.alphas],
        "a_sup": list(first.a_sup),
        "mode": mode,
        "passed": passed,
        "note": "",
    }


# -- aggregation ----------------------------------------------------------------------


def _validate_samples(t_samples: Sequence[Fraction]) -> tuple[Fraction, ...]:
    samples = tuple(Fraction(t) for t in t_samples)
    if 0 not in samples or sum(1 for t in samples if t != 0) < 2:
        raise ValueError("t-samples must include 0 and at least two nonzero values")
    return samples


def check_admissible(
    f: PolyFamily,
    t_samples: Sequence[Fraction] = DEFAULT_T_SAMPLES,
    mode: str = PER_VERTEX,
    tier: int = 3,
    seed: int = 0,
    slice_trials: int = 3,
) -> AdmissibilityReport:
    samples = _validate_samples(t_samples)
    line = check_line_singularity(f, samples, tier=tier, seed=seed, slice_trials=slice_trials)
    pure_z1 = any(e[0] > 0 and not any(e[1:]) for e in f.support())

    quasi = True
    for t in samples:
        if t != 0 and not is_quasi_convenient(newton_polyhedron(f.specialize_t(t))):
            quasi = False

    verdicts = {
        fmt_t(t): nondegen.is_newton_nondegenerate(f.specialize_t(t), tier=tier, seed=seed)
        for t in samples
    }
    cond = check_condition_iii(f, mode, samples)

    checks = [
        (not pure_z1, False, "pure z1-power present"),
        (line["axis_contained"], False, "z1-axis not contained in the singular locus"),
        (line["restriction_isolated"] == "Yes", line["restriction_isolated"] == "Unknown",
         "restriction to z1 = 0 does not have an isolated critical point"),
        (line["slice_probe"]["status"] == "Pass", line["slice_probe"]["status"] == "Skipped",
         "critical points off the z1-axis near the origin"),
        (quasi, False, "not quasi-convenient for some t != 0"),
    ]
    for t, v in verdicts.items():
        checks.append(
            (v.status == nondegen.NONDEGENERATE, v.status == nondegen.UNKNOWN,
             f"Newton non-degeneracy at t={t}: {v.status}")
        )
    offender = cond["offender"] if cond["status"] == FAIL else cond["strict_offender"]
    checks.append((cond["passed"], False, f"condition (iii) fails ({mode}) at monomial {offender}"))

    overall, reason = ADMISSIBLE, ""
    for ok, unknown, why in checks:
        if ok:
            continue
        if unknown:
            if overall == ADMISSIBLE:
                overall, reason = UNKNOWN, why
        else:
            overall, reason = NOT_ADMISSIBLE, why
            break
    return AdmissibilityReport(
        axis_contained=line["axis_contained"],
        restriction_isolated=line["restriction_isolated"],
        restriction_mu=line["restriction_mu"],
        slice_probe=line["slice_probe"],
        quasi_convenient=quasi,
        pure_z1_power=pure_z1,
        nondegenerate=verdicts,
        condition_iii=cond,
        mode=mode,
        overall=overall,
        reason=reason,
        t_samples=samples,
    )
