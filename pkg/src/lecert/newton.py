"""Exact Newton polyhedra, their compact faces, and the Newton number.

The polyhedron conv(support) + R^n_+ is handled through its homogenization:
the cone in R^{n+1} generated by (p, 1) for support points p and (e_j, 0) for
the coordinate rays.  Each facet of the cone other than x_{n+1} >= 0 is a facet
l.x >= c of the polyhedron, and is spanned by n linearly independent
generators, so the facets are found by enumerating n-subsets of generators and
keeping the integer normals that are nonnegative on every generator.  This is
brute force, but it is exact and the instances of interest have n <= 6 and a
handful of vertices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .poly import Exponent, PolyFamily


class NewtonNumberUndefined(ValueError):
    pass


class NoZ1FreeVertex(ValueError):
    pass


@dataclass(frozen=True)
class Facet:
    """The inequality <normal, x> >= offset, with a primitive normal."""

    normal: tuple[int, ...]
    offset: int


@dataclass(frozen=True)
class Face:
    dim: int
    vertex_set: tuple[Exponent, ...]
    supporting_normal: tuple[int, ...]
    support_points: tuple[Exponent, ...]


@dataclass(frozen=True)
class NewtonPolyhedron:
    n: int
    support: tuple[Exponent, ...]
    vertices: tuple[Exponent, ...]
    facets: tuple[Facet, ...]
    compact_faces: tuple[Face, ...]

    def faces_of_dim(self, d: int) -> list[Face]:
        return [f for f in self.compact_faces if f.dim == d]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "support": [list(p) for p in self.support],
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(f.normal), "offset": f.offset} for f in self.facets],
            "compact_faces": [
                {
                    "dim": f.dim,
                    "vertices": [list(v) for v in f.vertex_set],
                    "normal": list(f.supporting_normal),
                    "points": [list(p) for p in f.support_points],
                }
                for f in self.compact_faces
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class Z1ZeroVertexData:
    alphas: tuple[Exponent, ...]
    a_sup: tuple[int, ...]


# -- exact integer linear algebra ------------------------------------------


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    m = [list(r) for r in rows]
    size = len(m)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                a, b = m[r][c], m[i][c]
                m[i] = [a * x - b * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def _normal_of(rows: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Generalized cross product: a kernel vector of an n x (n+1) matrix.

    Returns None when the rows are linearly dependent.
    """
    width = len(rows[0])
    h = []
    for k in range(width):
        minor = [[r[j] for j in range(width) if j != k] for r in rows]
        h.append((-1) ** k * det(minor))
    if not any(h):
        return None
    return tuple(h)


def _primitive(v: Iterable[int]) -> tuple[int, ...]:
    v = tuple(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else v


def affine_dim(points: Sequence[Sequence[int]]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


# -- polyhedron construction -----------------------------------------------


def _undominated(pts: Sequence[Exponent]) -> list[Exponent]:
    """Drop points of the form q = p + (nonzero nonnegative vector)."""
    keep = []
    for q in pts:
        if not any(p != q and all(a <= b for a, b in zip(p, q)) for p in pts):
            keep.append(q)
    return keep


def newton_polyhedron(f: PolyFamily | Iterable[Sequence[int]]) -> NewtonPolyhedron:
    """Newton polyhedron of a t-free family, or of a bare support set."""
    if isinstance(f, PolyFamily):
        if f.is_zero():
            raise ValueError("Newton polyhedron of the zero polynomial")
        support = tuple(f.support())
    else:
        support = tuple(sorted({tuple(int(x) for x in p) for p in f}))
        if not support:
            raise ValueError("empty support")
    return _newton_polyhedron(support)


@lru_cache(maxsize=4096)
def _newton_polyhedron(support: tuple[Exponent, ...]) -> NewtonPolyhedron:
    n = len(support[0])
    cands = _undominated(support)
    gens = [tuple(p) + (1,) for p in cands] + [
        tuple(1 if i == j else 0 for i in range(n)) + (0,) for j in range(n)
    ]

    found: dict[tuple[int, ...], Facet] = {}
    for combo in combinations(gens, n):
        h = _normal_of(combo)
        if h is None:
            continue
        vals = [sum(a * b for a, b in zip(h, g)) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            h = tuple(-x for x in h)
        else:
            continue
        normal = h[:n]
        if not any(normal):
            continue  # the face at infinity
        g = 0
        for x in normal:
            g = gcd(g, x)
        normal_p = tuple(x // g for x in normal)
        offset = -h[n] // g
        found.setdefault(normal_p, Facet(normal_p, offset))
    facets = tuple(sorted(found.values(), key=lambda f: (f.normal, f.offset)))

    def tight(fc: Facet, p: Sequence[int]) -> bool:
        return sum(a * b for a, b in zip(fc.normal, p)) == fc.offset

    vertices = tuple(
        p for p in cands if rank([fc.normal for fc in facets if tight(fc, p)]) == n
    )

    tight_sets = {fc: frozenset(v for v in vertices if tight(fc, v)) for fc in facets}
    lattice = {s for s in tight_sets.values() if s}
    lattice |= {frozenset([v]) for v in vertices}
    frontier = set(lattice)
    while frontier:
        new = set()
        for a in frontier:
            for b in lattice:
                c = a & b
                if c and c not in lattice:
                    new.add(c)
        lattice |= new
        frontier = new

    faces = []
    for s in lattice:
        containing = [fc for fc, ts in tight_sets.items() if s <= ts]
        w = [sum(fc.normal[j] for fc in containing) for j in range(n)]
        if not all(x > 0 for x in w):
            continue
        w = _primitive(w)
        low = min(sum(a * b for a, b in zip(w, v)) for v in vertices)
        verts = tuple(sorted(s))
        on_face = tuple(p for p in support if sum(a * b for a, b in zip(w, p)) == low)
        faces.append(Face(affine_dim(verts), verts, w, on_face))
    faces.sort(key=lambda f: (f.dim, f.vertex_set))
    return NewtonPolyhedron(n, support, vertices, facets, tuple(faces))


# -- predicates ---------------------------------------------------------------


def _has_pure_power(support: Iterable[Sequence[int]], j: int) -> bool:
    return any(p[j] > 0 and not any(x for i, x in enumerate(p) if i != j) for p in support)


def is_convenient(np: NewtonPolyhedron) -> bool:
    return all(_has_pure_power(np.support, j) for j in range(np.n))


def is_quasi_convenient(np: NewtonPolyhedron) -> bool:
    """Pure powers of z2, ..., zn present (z1 may be missing)."""
    return all(_has_pure_power(np.support, j) for j in range(1, np.n))


def z1zero_vertex_data(np: NewtonPolyhedron) -> Z1ZeroVertexData:
    alphas = tuple(v for v in np.vertices if v[0] == 0)
    if not alphas:
        raise NoZ1FreeVertex("no vertex with vanishing z1-exponent")
    a_sup = tuple(max(a[j] for a in alphas) for j in range(1, np.n))
    return Z1ZeroVertexData(alphas, a_sup)


# -- Newton number --------------------------------------------------------------


def triangulate_face(np: NewtonPolyhedron, face: Face) -> list[tuple[Exponent, ...]]:
    """Deterministic fan triangulation from the lexicographically smallest vertex."""
    if face.dim == 0:
        return [face.vertex_set]
    apex = face.vertex_set[0]
    members = set(face.vertex_set)
    out = []
    for sub in np.compact_faces:
        if sub.dim != face.dim - 1 or apex in sub.vertex_set:
            continue
        if not set(sub.vertex_set) <= members:
            continue
        out.extend((apex,) + simplex for simplex in triangulate_face(np, sub))
    return out


def covolume_times_factorial(np: NewtonPolyhedron) -> int:
    """k! times the volume between the origin and the compact facets (k = np.n)."""
    total = 0
    for face in np.faces_of_dim(np.n - 1):
        for simplex in triangulate_face(np, face):
            total += abs(det(simplex))
    return total


def _restricted_support(support: Sequence[Exponent], coords: Sequence[int]) -> list[Exponent]:
    inside = set(coords)
    return [
        tuple(p[i] for i in coords)
        for p in support
        if not any(p[i] for i in range(len(p)) if i not in inside)
    ]


def newton_number(np: NewtonPolyhedron | PolyFamily) -> int:
    """Kouchnirenko's Newton number of a convenient support.

    nu = sum_k (-1)^(n-k) k! V_k, where V_k sums the k-volumes of the region
    under the Newton boundary in every k-dimensional coordinate subspace.
    """
    if isinstance(np, PolyFamily):
        np = newton_polyhedron(np)
    if not is_convenient(np):
        raise NewtonNumberUndefined("Newton number undefined: support is not convenient")
    return _newton_number(np.support)


@lru_cache(maxsize=4096)
def _newton_number(support: tuple[Exponent, ...]) -> int:
    n = len(support[0])
    total = (-1) ** n
    for k in range(1, n + 1):
        for coords in combinations(range(n), k):
            sub = newton_polyhedron(_restricted_support(support, coords))
            total += (-1) ** (n - k) * covolume_times_factorial(sub)
    return total


def newton_boundary_key(np: NewtonPolyhedron) -> tuple[Exponent, ...]:
    """Vertices determine the Newton boundary; used to compare specializations."""
    return np.vertices
