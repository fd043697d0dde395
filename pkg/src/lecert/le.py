"""Lê numbers of line singularities through the Iomdine-Lê-Massey route.

For a line singularity f_t and a large enough a, the isolated singularity
f_t + z1^a has Milnor number lambda0 + (a - 1) * lambda1.  When f_t + z1^a is
convenient and Newton non-degenerate that Milnor number equals the Newton
number, so both Lê numbers come out of two exact polyhedral computations.
The generic transversal Milnor number mu(f_t | z1 = c) gives an independent
value for lambda1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import nondegen
from .milnor import milnor_number_colength
from .newton import is_convenient, newton_number, newton_polyhedron
from .poly import PolyFamily

WINDOW = 3
CAP_OVER_M = 64


class MilnorNotCertified(ValueError):
    pass


class StabilizationError(ValueError):
    pass


class ILMExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class LeNumbers:
    lambda0: int
    lambda1: int
    exponent_a: int
    nu_values: dict[int, int] = field(default_factory=dict)
    slice_mu: int | None = None

    def to_dict(self) -> dict:
        return {
            "lambda0": self.lambda0,
            "lambda1": self.lambda1,
            "exponent_a": self.exponent_a,
            "nu_values": {str(k): v for k, v in sorted(self.nu_values.items())},
            "slice_mu": self.slice_mu,
        }


def milnor_via_nu(f: PolyFamily, tier: int = 3, seed: int = 0) -> int:
    """Milnor number of a convenient, Newton non-degenerate germ, as its Newton number."""
    poly = newton_polyhedron(f)
    if not is_convenient(poly):
        raise MilnorNotCertified("input is not convenient: equality mu = nu not certified")
    verdict = nondegen.is_newton_nondegenerate(f, tier=tier, seed=seed, np_=poly)
    if verdict.status != nondegen.NONDEGENERATE:
        raise MilnorNotCertified(f"non-degeneracy is {verdict.status}: equality mu = nu not certified")
    return newton_number(poly)


def nu_with_z1_power(ft: PolyFamily, a: int, tier: int = 3, seed: int = 0) -> int:
    """nu(f_t + z1^a), refusing when f_t + z1^a is not certified non-degenerate."""
    return milnor_via_nu(ft.add_pure_power(1, a), tier=tier, seed=seed)


def _window_ok(ft: PolyFamily, a: int, tier: int, seed: int) -> bool:
    try:
        nus = [nu_with_z1_power(ft, a + k, tier, seed) for k in range(WINDOW)]
    except MilnorNotCertified:
        return False
    return nus[2] - 2 * nus[1] + nus[0] == 0


def choose_exponent_a(
    f: PolyFamily, t_samples: Sequence[Fraction], tier: int = 3, seed: int = 0
) -> int:
    """Smallest a >= max(M + 2, 3) at which nu(f_t + z1^a') is affine on the window.

    M is the largest z1-exponent in the support.  Raises StabilizationError
    past M + 64.
    """
    top = max(e[0] for e in f.support())
    specs = [f.specialize_t(t) for t in t_samples]
    a = max(top + 2, 3)
    while a <= top + CAP_OVER_M:
        if all(_window_ok(ft, a, tier, seed) for ft in specs):
            return a
        a += 1
    raise StabilizationError("stabilization not reached")


def le_numbers(
    ft: PolyFamily, a: int, tier: int = 3, seed: int = 0, window: int = WINDOW
) -> LeNumbers:
    """(lambda0, lambda1) of a t-free f_t from Newton numbers of f_t + z1^a'."""
    try:
        nus = {a + k: nu_with_z1_power(ft, a + k, tier, seed) for k in range(window)}
    except MilnorNotCertified as exc:
        raise ILMExtractionError(f"ILM extraction failed: {exc}") from exc
    lam1 = nus[a + 1] - nus[a]
    lam0 = nus[a] - (a - 1) * lam1
    if lam0 < 0 or lam1 < 0:
        raise ILMExtractionError(f"ILM extraction failed: negative value ({lam0}, {lam1})")
    for ap, nu in nus.items():
        if nu != lam0 + (ap - 1) * lam1:
            raise ILMExtractionError(f"ILM extraction failed: window inconsistent at a={ap}")
    return LeNumbers(lam0, lam1, a, nus)


def _small_rational(rng: np.random.Generator) -> Fraction:
    num = int(rng.integers(1, 4))
    den = int(rng.integers(5, 20))
    return Fraction(num if rng.random() < 0.5 else -num, den)


def slice_milnor(ft: PolyFamily, a1: Fraction, tier: int = 3, seed: int = 0) -> int | None:
    """mu of f_t restricted to z1 = a1, at the origin of C^(n-1)."""
    h = ft.substitute_z1(a1)
    if h.is_zero():
        return None
    poly = newton_polyhedron(h)
    if is_convenient(poly):
        verdict = nondegen.is_newton_nondegenerate(h, tier=tier, seed=seed, np_=poly)
        if verdict.status == nondegen.NONDEGENERATE:
            return newton_number(poly)
    return milnor_number_colength(h)


def generic_slice_milnor(
    ft: PolyFamily,
    trials: int = 3,
    seed: int = 0,
    values: Sequence[Fraction] | None = None,
    tier: int = 3,
) -> int | None:
    """Common value of mu(f_t | z1 = a1) over random small a1 != 0, or None."""
    rng = np.random.default_rng(seed)
    points = list(values) if values is not None else [_small_rational(rng) for _ in range(trials)]
    found = {slice_milnor(ft, Fraction(a1), tier, seed) for a1 in points}
    found.discard(None)
    return found.pop() if len(found) == 1 else None
