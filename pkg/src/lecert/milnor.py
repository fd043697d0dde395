"""Milnor numbers as colengths of the Jacobian ideal, by linear algebra.

For an ideal J and the maximal ideal m at the origin, C[z]/(J + m^D) only
sees the local ring, and its dimension is nondecreasing in D.  Equality of the
dimensions at D and D+1 means m^D lies in J + m^(D+1), hence (Nakayama) in J
locally, so the dimension has stabilized at the local colength.  The rank of
the truncated multiples m * df/dz_j is computed exactly over Z with FLINT.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, lcm

import flint

from .poly import Exponent, PolyFamily

DEGREE_CAP = 40
MONOMIAL_BUDGET = 2000


def _monomials_below(n: int, D: int) -> list[Exponent]:
    out = []
    for d in range(D):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _quotient_dim(grads: list[dict[Exponent, Fraction]], n: int, D: int) -> int:
    monos = _monomials_below(n, D)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in grads:
        if not g:
            continue
        low = min(sum(e) for e in g)
        den = lcm(*(c.denominator for c in g.values()))
        ints = {e: int(c * den) for e, c in g.items()}
        for m in monos:
            if sum(m) + low >= D:
                continue
            row = [0] * len(monos)
            for e, c in ints.items():
                prod = tuple(a + b for a, b in zip(m, e))
                k = index.get(prod)
                if k is not None:
                    row[k] = c
            rows.append(row)
    if not rows:
        return len(monos)
    return len(monos) - flint.fmpz_mat(rows).rank()


def milnor_number_colength(
    f: PolyFamily, cap: int = DEGREE_CAP, budget: int = MONOMIAL_BUDGET
) -> int | None:
    """Local Milnor number of a t-free ``f`` at 0, or None if not certified.

    None means the dimension did not stabilize before the degree cap or the
    monomial budget: the critical point is non-isolated or too complicated.
    """
    grads = tuple(tuple(sorted(f.partial_z(j).coefficients().items())) for j in range(1, f.n + 1))
    return _colength(f.n, grads, cap, budget)


@lru_cache(maxsize=512)
def _colength(n: int, grads_key, cap: int, budget: int) -> int | None:
    grads = [dict(g) for g in grads_key]
    D, last = 4, None
    while True:
        D = min(D, cap)
        while D > 1 and comb(D + 1 + n, n) > budget:
            D -= 1
        if D == last:
            return None
        lower, upper = _quotient_dim(grads, n, D), _quotient_dim(grads, n, D + 1)
        if lower == upper:
            return lower
        last = D
        D *= 2
