"""Assemble admissibility and Lê-number constancy into a verdict.

The verdict is one-directional: EQUISINGULAR means every sufficient condition
was verified at the sampled parameters, INCONCLUSIVE means something failed
or could not be decided.  Nothing here ever claims the family is not
equisingular.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .admissibility import (
    ADMISSIBLE,
    DEFAULT_T_SAMPLES,
    PER_VERTEX,
    AdmissibilityReport,
    check_admissible,
    fmt_t,
)
from .le import (
    ILMExtractionError,
    LeNumbers,
    StabilizationError,
    choose_exponent_a,
    generic_slice_milnor,
    le_numbers,
)
from .newton import newton_boundary_key, newton_number, newton_polyhedron, z1zero_vertex_data
from .poly import Exponent, PolyFamily

EQUISINGULAR = "EQUISINGULAR"
INCONCLUSIVE = "INCONCLUSIVE"

VERDICT_BASIS = (
    "sufficient conditions verified: the family is admissible along the z1-axis and the "
    "Lê numbers (lambda0, lambda1) are constant over the sampled t; under these hypotheses "
    "the natural stratification {V(f) minus the z1-axis, the z1-axis} is Bekka (c)-regular and "
    "the family {V(f_t)} is topologically equisingular. The converse is not asserted."
)
NO_BASIS = "sufficient conditions not verified; no claim is made either way"
ASSUMPTION = (
    "constancy 'for all small t' is checked only at the listed rational t-samples, with an exact "
    "guard that the Newton boundary is identical at every nonzero sample"
)


@dataclass(frozen=True)
class CertifyOptions:
    t_samples: tuple[Fraction, ...] = DEFAULT_T_SAMPLES
    mode: str = PER_VERTEX
    tier: int = 3
    seed: int = 0
    slice_trials: int = 3
    cross_check: bool = True
    threads: int = 1

    def to_dict(self) -> dict:
        return {
            "t_samples": [fmt_t(t) for t in self.t_samples],
            "mode": self.mode,
            "nondegen_tier": self.tier,
            "seed": self.seed,
            "slice_trials": self.slice_trials,
            "cross_check": self.cross_check,
        }


@dataclass
class Certificate:
    input_digest: str
    input: str
    admissibility: AdmissibilityReport
    le_table: dict[str, LeNumbers | None]
    exponent_a: int | None
    constancy: bool
    boundary_guard: bool
    verdict: str
    verdict_basis: str
    reasons: list[str]
    options: CertifyOptions
    seed: int
    version: str = __version__
    assumptions: list[str] = field(default_factory=lambda: [ASSUMPTION])

    def to_dict(self) -> dict:
        return {
            "input_digest": self.input_digest,
            "input": self.input,
            "admissibility": self.admissibility.to_dict(),
            "le_table": {t: (v.to_dict() if v else None) for t, v in self.le_table.items()},
            "exponent_a": self.exponent_a,
            "constancy": self.constancy,
            "boundary_guard": self.boundary_guard,
            "verdict": self.verdict,
            "verdict_basis": self.verdict_basis,
            "reasons": self.reasons,
            "config": self.options.to_dict(),
            "seed": self.seed,
            "version": self.version,
            "assumptions": self.assumptions,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def input_digest(f: PolyFamily) -> str:
    return "sha256:" + hashlib.sha256(f.unparse().encode()).hexdigest()


def boundary_guard(f: PolyFamily, t_samples: Sequence[Fraction]) -> bool:
    """Same Newton boundary (vertex set) at every nonzero sample."""
    keys = {
        newton_boundary_key(newton_polyhedron(f.specialize_t(t))) for t in t_samples if t != 0
    }
    return len(keys) <= 1


def _le_row(f: PolyFamily, t: Fraction, a: int, opts: CertifyOptions) -> tuple[LeNumbers | None, str]:
    ft = f.specialize_t(t)
    try:
        row = le_numbers(ft, a, tier=opts.tier, seed=opts.seed)
    except ILMExtractionError as exc:
        return None, f"t={fmt_t(t)}: {exc}"
    if not opts.cross_check:
        return row, ""
    mu = generic_slice_milnor(ft, trials=opts.slice_trials, seed=opts.seed, tier=opts.tier)
    row = LeNumbers(row.lambda0, row.lambda1, row.exponent_a, row.nu_values, mu)
    if mu is None:
        return row, f"t={fmt_t(t)}: generic slice Milnor number undecided"
    if mu != row.lambda1:
        return row, f"t={fmt_t(t)}: generic slice Milnor number {mu} differs from lambda1"
    return row, ""


def certify_family(f: PolyFamily, options: CertifyOptions | None = None) -> Certificate:
    opts = options or CertifyOptions()
    samples = tuple(Fraction(t) for t in opts.t_samples)
    reasons: list[str] = []

    adm = check_admissible(
        f, samples, mode=opts.mode, tier=opts.tier, seed=opts.seed, slice_trials=opts.slice_trials
    )
    if adm.overall != ADMISSIBLE:
        reasons.append(f"admissibility {adm.overall}: {adm.reason}")

    guard = boundary_guard(f, samples)
    if not guard:
        reasons.append("Newton boundary differs between nonzero t-samples")

    table: dict[str, LeNumbers | None] = {fmt_t(t): None for t in samples}
    a = None
    try:
        a = choose_exponent_a(f, samples, tier=opts.tier, seed=opts.seed)
    except (StabilizationError, ValueError) as exc:
        reasons.append(f"exponent a: {exc}")

    if a is not None:
        with ThreadPoolExecutor(max_workers=max(1, opts.threads)) as pool:
            rows = list(pool.map(lambda t: _le_row(f, t, a, opts), samples))
        for t, (row, why) in zip(samples, rows):
            table[fmt_t(t)] = row
            if why:
                reasons.append(why)

    pairs = {(r.lambda0, r.lambda1) for r in table.values() if r is not None}
    complete = all(r is not None for r in table.values())
    constancy = complete and len(pairs) == 1
    if len(pairs) > 1:
        reasons.append("Lê numbers not constant")

    ok = adm.overall == ADMISSIBLE and constancy and guard and not reasons
    return Certificate(
        input_digest=input_digest(f),
        input=f.expr(),
        admissibility=adm,
        le_table=table,
        exponent_a=a,
        constancy=constancy,
        boundary_guard=guard,
        verdict=EQUISINGULAR if ok else INCONCLUSIVE,
        verdict_basis=VERDICT_BASIS if ok else NO_BASIS,
        reasons=reasons,
        options=opts,
        seed=opts.seed,
    )


# -- deformation invariance --------------------------------------------------------


def _draw_s(rng: np.random.Generator, m: int) -> tuple[Fraction, ...]:
    out = []
    for _ in range(m):
        num = int(rng.integers(1, 6))
        den = int(rng.integers(2, 12))
        out.append(Fraction(num if rng.random() < 0.5 else -num, den))
    return tuple(out)


def deform(f: PolyFamily, alphas: Sequence[Exponent], s: Sequence[Fraction]) -> PolyFamily:
    """g = f + sum_i s_i z^alpha_i."""
    extra = PolyFamily.from_terms(f.n, {al: si for al, si in zip(alphas, s) if si}, f.name)
    return f + extra


def deformation_invariance_check(
    f: PolyFamily,
    a: int,
    t_samples: Sequence[Fraction] = DEFAULT_T_SAMPLES,
    s_samples: Sequence[Sequence[Fraction]] | None = None,
    count: int = 5,
    seed: int = 0,
    alphas: Sequence[Exponent] | None = None,
) -> dict:
    """Compare nu(g_{s,t} + z1^a) with nu(f_t + z1^a) at every nonzero t-sample.

    The alpha_i are the z1-free vertices, so perturbing their coefficients
    leaves the Newton boundary alone.  Draws that cancel a coefficient at some
    sample are redrawn.
    """
    nonzero = [Fraction(t) for t in t_samples if t != 0]
    if alphas is None:
        alphas = z1zero_vertex_data(newton_polyhedron(f.specialize_t(nonzero[0]))).alphas
    alphas = tuple(tuple(al) for al in alphas)
    rng = np.random.default_rng(seed)

    def cancels(s: Sequence[Fraction]) -> bool:
        for t in nonzero:
            coeffs = f.specialize_t(t).coefficients()
            if any(si and coeffs.get(al, 0) + si == 0 for al, si in zip(alphas, s)):
                return True
        return False

    if s_samples is None:
        s_samples = []
        while len(s_samples) < count:
            s = _draw_s(rng, len(alphas))
            if not cancels(s):
                s_samples.append(s)
    checks = []
    for s in s_samples:
        s = tuple(Fraction(x) for x in s)
        g = deform(f, alphas, s)
        for t in nonzero:
            lhs = newton_number(g.specialize_t(t).add_pure_power(1, a))
            rhs = newton_number(f.specialize_t(t).add_pure_power(1, a))
            checks.append(
                {"s": [str(x) for x in s], "t": fmt_t(t), "nu_g": lhs, "nu_f": rhs, "equal": lhs == rhs}
            )
    return {
        "alphas": [list(x) for x in alphas],
        "exponent_a": a,
        "checks": checks,
        "passed": all(c["equal"] for c in checks),
    }

