"""Vectorized double-precision evaluation of exact families."""

from __future__ import annotations

import numpy as np

from .poly import PolyFamily


class CompiledPoly:
    """f(t, z) = sum_i c_i(t) z^{e_i}, evaluated with numpy.

    ``z`` may be a vector of length n or an array of shape (..., n).
    """

    def __init__(self, f: PolyFamily):
        self.n = f.n
        items = list(f.terms.items())
        self.exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), f.n)
        width = max((len(c) for _, c in items), default=1)
        self.tcoef = np.zeros((len(items), width))
        for i, (_, c) in enumerate(items):
            self.tcoef[i, : len(c)] = [float(x) for x in c]

    def coeffs_at(self, t: complex) -> np.ndarray:
        powers = t ** np.arange(self.tcoef.shape[1])
        return self.tcoef @ powers

    def monomials(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.prod(z[..., None, :] ** self.exps, axis=-1)

    def __call__(self, t: complex, z: np.ndarray) -> complex:
        if len(self.exps) == 0:
            return 0j
        return self.monomials(z) @ self.coeffs_at(t)


class CompiledGradient:
    """Holomorphic partials (d/dt, d/dz1, ..., d/dzn) of a family."""

    def __init__(self, f: PolyFamily):
        self.f = CompiledPoly(f)
        self.parts = [CompiledPoly(p) for p in f.partials()]

    def __call__(self, t: complex, z: np.ndarray) -> np.ndarray:
        return np.array([p(t, z) for p in self.parts], dtype=complex)
