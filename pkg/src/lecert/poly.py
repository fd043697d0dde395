"""Exact polynomial families f(t, z1, ..., zn) over the rationals.

A family is stored as a map from z-exponent tuples to coefficient polynomials
in the deformation parameter t.  A coefficient polynomial is a tuple of
Fractions indexed by the power of t, with no trailing zeros:

    3/2 + t^2  ->  (Fraction(3, 2), Fraction(0), Fraction(1))

Terms are kept sorted lexicographically by exponent so iteration (and hence
every serialized artifact) is deterministic.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]
TCoeff = tuple[Fraction, ...]


class EvaluationError(ArithmeticError):
    """Raised when numeric evaluation overflows to a non-finite value."""


def _trim(coeffs: Sequence[Fraction]) -> TCoeff:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def tpoly_add(a: TCoeff, b: TCoeff) -> TCoeff:
    size = max(len(a), len(b))
    return _trim(
        [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)]
    )


def tpoly_scale(a: TCoeff, c: Fraction) -> TCoeff:
    return _trim([x * c for x in a])


def tpoly_eval(a: TCoeff, t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * t + c
    return acc


def tpoly_derivative(a: TCoeff) -> TCoeff:
    return _trim([k * a[k] for k in range(1, len(a))])


@dataclass(frozen=True)
class ComplexPoint:
    """A point (t, z1, ..., zn) of C x C^n in double precision."""

    t: complex
    z: tuple[complex, ...]

    def __post_init__(self) -> None:
        values = (self.t, *self.z)
        if not all(cmath.isfinite(complex(v)) for v in values):
            raise ValueError("ComplexPoint components must be finite")


@dataclass(frozen=True)
class PolyFamily:
    """A polynomial in z1..zn whose coefficients are polynomials in t over Q.

    Instances should be built through :meth:`from_terms`, which collects,
    trims and sorts the term map.  Partial derivatives may carry a constant
    term, so the f(t, 0) = 0 requirement is enforced by the parser only.
    """

    n: int
    terms: Mapping[Exponent, TCoeff] = field(compare=True)
    name: str = field(default="f", compare=False)

    @classmethod
    def from_terms(
        cls,
        n: int,
        terms: Mapping[Exponent, Sequence[Fraction] | Fraction | int] | Iterable,
        name: str = "f",
    ) -> "PolyFamily":
        """Normalize ``terms`` (exponent -> t-coefficients or a scalar)."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, TCoeff] = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            if isinstance(coeff, (int, Fraction)):
                coeff = (Fraction(coeff),)
            coeff = tuple(Fraction(c) for c in coeff)
            acc[exp] = tpoly_add(acc.get(exp, ()), coeff)
        clean = {e: acc[e] for e in sorted(acc) if acc[e]}
        return cls(n, clean, name)

    @classmethod
    def constant(cls, n: int, terms: Mapping[Exponent, Fraction | int], name: str = "f"):
        return cls.from_terms(n, {e: (Fraction(c),) for e, c in terms.items()}, name)

    # -- inspection -------------------------------------------------------

    def support(self) -> list[Exponent]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_t_free(self) -> bool:
        return all(len(c) <= 1 for c in self.terms.values())

    def coefficients(self) -> dict[Exponent, Fraction]:
        """Scalar coefficients of a t-free family."""
        if not self.is_t_free():
            raise ValueError("family still depends on t; specialize it first")
        return {e: c[0] for e, c in self.terms.items()}

    def t_degree(self) -> int:
        return max((len(c) - 1 for c in self.terms.values()), default=0)

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "PolyFamily") -> "PolyFamily":
        if self.n != other.n:
            raise ValueError("variable count mismatch")
        merged = list(self.terms.items()) + list(other.terms.items())
        return PolyFamily.from_terms(self.n, merged, self.name)

    def scale(self, c: Fraction) -> "PolyFamily":
        return PolyFamily.from_terms(
            self.n, {e: tpoly_scale(v, Fraction(c)) for e, v in self.terms.items()}, self.name
        )

    def specialize_t(self, t0: Fraction | int) -> "PolyFamily":
        t0 = Fraction(t0)
        return PolyFamily.from_terms(
            self.n, {e: (tpoly_eval(c, t0),) for e, c in self.terms.items()}, self.name
        )

    def add_pure_power(self, variable_index: int, a: int) -> "PolyFamily":
        """Return self + z_{variable_index}^a (1-based index)."""
        if a < 1 or not 1 <= variable_index <= self.n:
            raise ValueError("need a >= 1 and 1 <= variable_index <= n")
        exp = [0] * self.n
        exp[variable_index - 1] = a
        return PolyFamily.from_terms(
            self.n, list(self.terms.items()) + [(tuple(exp), (Fraction(1),))], self.name
        )

    def partial_t(self) -> "PolyFamily":
        return PolyFamily.from_terms(
            self.n, {e: tpoly_derivative(c) for e, c in self.terms.items()}, f"d{self.name}/dt"
        )

    def partial_z(self, j: int) -> "PolyFamily":
        """Derivative with respect to z_j (1-based)."""
        out = {}
        for e, c in self.terms.items():
            b = e[j - 1]
            if b == 0:
                continue
            d = list(e)
            d[j - 1] -= 1
            out[tuple(d)] = tpoly_scale(c, Fraction(b))
        return PolyFamily.from_terms(self.n, out, f"d{self.name}/dz{j}")

    def partials(self) -> list["PolyFamily"]:
        """[df/dt, df/dz1, ..., df/dzn]."""
        return [self.partial_t()] + [self.partial_z(j) for j in range(1, self.n + 1)]

    def substitute_z1(self, value: Fraction | int) -> "PolyFamily":
        """Set z1 = value and drop z1, giving a family in n-1 variables."""
        value = Fraction(value)
        out = []
        for e, c in self.terms.items():
            if value == 0 and e[0] > 0:
                continue
            out.append((e[1:], tpoly_scale(c, value ** e[0])))
        return PolyFamily.from_terms(self.n - 1, out, self.name)

    def vanishes_on_z1_axis(self) -> bool:
        """True when the family is identically zero on z2 = ... = zn = 0."""
        return all(any(e[1:]) for e in self.terms)

    # -- numerics ---------------------------------------------------------

    def evaluate(self, p: ComplexPoint) -> complex:
        if len(p.z) != self.n:
            raise ValueError(f"point has {len(p.z)} z-coordinates, expected {self.n}")
        total = 0j
        try:
            for e, c in self.terms.items():
                ct = 0j
                for coef in reversed(c):
                    ct = ct * p.t + float(coef)
                mono = 1 + 0j
                for zj, b in zip(p.z, e):
                    if b:
                        mono *= zj**b
                total += ct * mono
        except OverflowError as exc:
            raise EvaluationError(f"overflow evaluating {self.name}") from exc
        if not cmath.isfinite(total):
            raise EvaluationError(f"non-finite value evaluating {self.name}")
        return total

    # -- text -------------------------------------------------------------

    def unparse(self) -> str:
        """Render in the input language; parse(unparse(f)) reproduces f."""
        names = ", ".join(["t"] + [f"z{j}" for j in range(1, self.n + 1)])
        return f"vars {names}\n{self.name if self.name.isidentifier() else 'f'} = {self.expr()}\n"

    def expr(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(
                f"z{j + 1}" if b == 1 else f"z{j + 1}^{b}" for j, b in enumerate(e) if b
            )
            nonzero = [(k, x) for k, x in enumerate(c) if x != 0]
            if len(nonzero) == 1:
                k, x = nonzero[0]
                tpart = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
                factors = [f for f in (tpart, mono) if f]
                if x == 1 and factors:
                    coef = ""
                elif x == -1 and factors:
                    coef = "-"
                else:
                    coef = _frac(x) + ("*" if factors else "")
                body = coef + "*".join(factors)
            else:
                inner = " + ".join(
                    _frac(x) if k == 0 else f"{_frac(x)}*t" + (f"^{k}" if k > 1 else "")
                    for k, x in nonzero
                )
                body = f"({inner})" + (f"*{mono}" if mono else "")
            parts.append(body)
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __str__(self) -> str:
        return self.expr()


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def specialize_t(f: PolyFamily, t0) -> PolyFamily:
    return f.specialize_t(t0)


def add_pure_power(f: PolyFamily, variable_index: int, a: int) -> PolyFamily:
    return f.add_pure_power(variable_index, a)


def partials(f: PolyFamily) -> list[PolyFamily]:
    return f.partials()


def evaluate(expr: PolyFamily, p: ComplexPoint) -> complex:
    return expr.evaluate(p)
