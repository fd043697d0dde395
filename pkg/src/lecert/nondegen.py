"""Newton non-degeneracy: no face polynomial may have a critical point on the torus.

Decisions come in three tiers.  Monomial and binomial faces are settled
exactly (tier 1); faces whose exponents are linearly independent are settled
by an exact rank computation (tier 2): on a compact face every exponent lies
on the hyperplane <w, x> = d > 0, so affine and linear independence agree, and
the Euler-type system sum_i c_i alpha_i z^alpha_i = 0 then forces every
monomial to vanish.  Remaining faces go to a seeded numeric search (tier 3)
whose only possible outputs are a verified witness or "undecided".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .newton import Face, NewtonPolyhedron, newton_polyhedron, rank
from .poly import Exponent, PolyFamily

NONDEGENERATE = "Nondegenerate"
DEGENERATE = "Degenerate"
UNKNOWN = "Unknown"

WITNESS_TOL = 1e-8
SEARCH_TOL = 1e-10


@dataclass(frozen=True)
class Witness:
    face: Face
    point: tuple[complex, ...]
    residual: float

    def to_dict(self) -> dict:
        return {
            "face_vertices": [list(v) for v in self.face.vertex_set],
            "point": [[float(p.real), float(p.imag)] for p in self.point],
            "residual": float(self.residual),
        }


@dataclass(frozen=True)
class NondegeneracyVerdict:
    status: str
    witness: Witness | None = None
    undecided_faces: tuple[Face, ...] = ()
    decisions: tuple[tuple[tuple[Exponent, ...], str], ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": self.witness.to_dict() if self.witness else None,
            "undecided_faces": [[list(v) for v in f.vertex_set] for f in self.undecided_faces],
            "decisions": [
                {"face": [list(v) for v in verts], "method": how} for verts, how in self.decisions
            ],
        }


def face_polynomial(f: PolyFamily, face: Face) -> PolyFamily:
    """The terms of f whose exponents lie on ``face``."""
    w = face.supporting_normal
    level = sum(a * b for a, b in zip(w, face.vertex_set[0]))
    return PolyFamily.from_terms(
        f.n,
        {e: c for e, c in f.terms.items() if sum(a * b for a, b in zip(w, e)) == level},
        f.name,
    )


def face_scale(fd: PolyFamily) -> float:
    return 1.0 + max(abs(float(c)) for c in fd.coefficients().values())


def torus_gradient(fd: PolyFamily, z: np.ndarray) -> np.ndarray:
    """Holomorphic gradient of a t-free polynomial at ``z``."""
    grad = np.zeros(fd.n, dtype=complex)
    for e, c in fd.coefficients().items():
        for j, b in enumerate(e):
            if b:
                d = list(e)
                d[j] -= 1
                grad[j] += float(c) * b * np.prod(np.asarray(z) ** np.array(d))
    return grad


def _exact_decision(fd: PolyFamily, tier: int) -> str | None:
    exps = [list(e) for e in fd.terms]
    if len(exps) == 1:
        return "monomial"
    r = rank(exps)
    if len(exps) == 2 and r == 2:
        return "binomial"
    if tier >= 2 and r == len(exps):
        return "independent-exponents"
    return None


def _search_witness(
    fd: PolyFamily, face: Face, rng: np.random.Generator, starts: int
) -> Witness | None:
    coeffs = fd.coefficients()
    E = np.array(list(coeffs), dtype=float)
    c = np.array([float(x) for x in coeffs.values()], dtype=complex)
    n = fd.n

    unused = ~np.any(E != 0, axis=0)

    def residual(x: np.ndarray) -> np.ndarray:
        logz = x[:n] + 1j * x[n:]
        with np.errstate(all="ignore"):
            mono = c * np.exp(E @ logz)
            g = E.T @ mono
            r = g / np.sqrt(np.sum(np.abs(mono) ** 2))
        if not np.all(np.isfinite(r)):
            return np.full(2 * n, 1e3)
        return np.concatenate([r.real, r.imag])

    w = np.array(face.supporting_normal, dtype=float)
    level = float(w @ E[0])
    scale = face_scale(fd)
    for _ in range(starts):
        x0 = np.concatenate([rng.normal(size=n), rng.uniform(-np.pi, np.pi, size=n)])
        try:
            sol = least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
        except (FloatingPointError, ValueError):
            continue
        if not np.all(np.isfinite(sol.x)) or np.linalg.norm(sol.fun) > SEARCH_TOL * scale:
            continue
        x = sol.x.copy()
        # rescale along the face's weight action so the largest term has size 1
        logz = x[:n] + 1j * x[n:]
        biggest = np.max(np.real(E @ logz) + np.log(np.abs(c)))
        x[:n] -= w * biggest / level
        x[:n][unused] = 0.0
        if np.max(np.abs(x[:n])) > 18:
            continue
        z = np.exp(x[:n] + 1j * x[n:])
        res = float(np.max(np.abs(torus_gradient(fd, z))))
        if res < WITNESS_TOL * scale:
            return Witness(face, tuple(complex(v) for v in z), res)
    return None


def is_newton_nondegenerate(
    f: PolyFamily,
    tier: int = 3,
    seed: int = 0,
    starts: int = 24,
    np_: NewtonPolyhedron | None = None,
) -> NondegeneracyVerdict:
    """Check every compact face of the Newton polyhedron of a t-free ``f``."""
    poly = np_ or newton_polyhedron(f)
    rng = np.random.default_rng(seed)
    undecided: list[Face] = []
    decisions = []
    witness = None
    for face in poly.compact_faces:
        fd = face_polynomial(f, face)
        how = _exact_decision(fd, tier)
        if how is None and tier >= 3:
            found = _search_witness(fd, face, rng, starts)
            if found is not None:
                witness = witness or found
                how = "numeric-witness"
        if how is None:
            undecided.append(face)
            how = "undecided"
        decisions.append((face.vertex_set, how))
    if witness is not None:
        status = DEGENERATE
    elif undecided:
        status = UNKNOWN
    else:
        status = NONDEGENERATE
    return NondegeneracyVerdict(status, witness, tuple(undecided), tuple(decisions))


def verify_witness(f: PolyFamily, witness: Witness) -> bool:
    """Independent re-check of a degeneracy witness against the verdict invariant."""
    fd = face_polynomial(f, witness.face)
    z = np.array(witness.point)
    if np.any(np.abs(z) == 0):
        return False
    return float(np.max(np.abs(torus_gradient(fd, z)))) < WITNESS_TOL * face_scale(fd)

