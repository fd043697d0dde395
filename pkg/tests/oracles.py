"""Independent reference computations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

FP_PRIME = 10007


def lp_vertices(support: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
    """Extreme points of conv(support) + R^n_+ by LP membership.

    p is a vertex iff it is not in conv(others) + R^n_+, i.e. there is no
    convex combination of the other points that is <= p componentwise.
    """
    pts = sorted({tuple(p) for p in support})
    out = set()
    for p in pts:
        others = [q for q in pts if q != p]
        if not others:
            out.add(p)
            continue
        Q = np.array(others, dtype=float).T
        m = Q.shape[1]
        res = linprog(
            np.zeros(m),
            A_ub=Q,
            b_ub=np.array(p, dtype=float),
            A_eq=np.ones((1, m)),
            b_eq=[1.0],
            bounds=[(0, None)] * m,
            method="highs",
        )
        if res.status != 0:
            out.add(p)
    return out


def finite_difference(fn, t: complex, z: np.ndarray, slot: int, h: float = 1e-6) -> complex:
    """Central difference of a holomorphic fn(t, z) in slot 0 (t) or slot j (z_j)."""
    def shifted(d: float):
        tt, zz = t, z.copy()
        if slot == 0:
            tt = t + d
        else:
            zz[slot - 1] += d
        return fn(tt, zz)

    return (shifted(h) - shifted(-h)) / (2 * h)


def _mod(x: Fraction, p: int) -> int:
    return x.numerator * pow(x.denominator, -1, p) % p


def _outer_zeros(u1, v1, u2, v2, p: int):
    """All (i, j) with u1[i] v1[j] + u2[i] v2[j] = 0 mod p, entries of v nonzero.

    Exhaustive: rows where u2 vanishes need u1 to vanish as well; otherwise
    the equation says u1[i]/u2[i] = -v2[j]/v1[j], found by sorting the ratios.
    """
    size = len(v1)
    inv = lambda a: np.array([pow(int(x), -1, p) for x in a], dtype=np.int64)  # noqa: E731
    rows, cols = [], []
    dead = np.nonzero((u2 == 0) & (u1 == 0))[0]
    rows.append(np.repeat(dead, size))
    cols.append(np.tile(np.arange(size), len(dead)))
    live = np.nonzero(u2 != 0)[0]
    if len(live):
        r = u1[live] * inv(u2[live]) % p
        s = (-v2 % p) * inv(v1) % p
        order = np.argsort(s, kind="stable")
        s_sorted = s[order]
        lo = np.searchsorted(s_sorted, r, side="left")
        counts = np.searchsorted(s_sorted, r, side="right") - lo
        offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        rows.append(np.repeat(live, counts))
        cols.append(order[np.repeat(lo, counts) + offsets])
    return np.concatenate(rows), np.concatenate(cols)


def fp_torus_critical_points(terms: dict[tuple[int, int], Fraction], p: int = FP_PRIME) -> int:
    """Number of (z1, z2) in (F_p^*)^2 with z1 df/dz1 = z2 df/dz2 = 0, for f with at most two terms.

    The count is exhaustive over the whole torus; the two-term restriction is
    what lets each equation split as a sum of two outer products.
    """
    items = sorted(terms.items())
    if len(items) > 2:
        raise ValueError("oracle handles at most two terms")
    while len(items) < 2:
        items.append(((0, 0), Fraction(0)))
    z = np.arange(1, p, dtype=np.int64)

    def powers(k: int) -> np.ndarray:
        out = np.ones_like(z)
        for _ in range(k):
            out = out * z % p
        return out

    (a, ca), (b, cb) = items
    ca, cb = _mod(ca, p), _mod(cb, p)
    # equation j: ca a_j z^a + cb b_j z^b, split into row (z1) and column (z2) factors
    def eq(j: int):
        u1 = ca * a[j] % p * powers(a[0]) % p
        u2 = cb * b[j] % p * powers(b[0]) % p
        return u1, powers(a[1]), u2, powers(b[1])

    e0, e1 = eq(0), eq(1)
    if not (e0[0].any() or e0[2].any()):
        # z1 df/dz1 vanishes identically; generate candidates from the other equation
        e0, e1 = e1, e0
    if not (e0[0].any() or e0[2].any()):
        return (p - 1) ** 2
    i, j = _outer_zeros(*e0, p)
    if len(i) == 0:
        return 0
    u1, v1, u2, v2 = e1
    second = (u1[i] * v1[j] + u2[i] * v2[j]) % p
    return int(np.count_nonzero(second == 0))


def fp_torus_critical_points_bruteforce(terms, p: int, limit: int) -> int:
    """Plain double loop over a small prime; used to validate the fast oracle."""
    count = 0
    for x in range(1, p):
        for y in range(1, p):
            g1 = sum(_mod(c, p) * e[0] * pow(x, e[0], p) * pow(y, e[1], p) for e, c in terms.items()) % p
            g2 = sum(_mod(c, p) * e[1] * pow(x, e[0], p) * pow(y, e[1], p) for e, c in terms.items()) % p
            if g1 == 0 and g2 == 0:
                count += 1
                if count >= limit:
                    return count
    return count
