"""Truncated multivariate Taylor jets.

A jet of order K at a point stores the Taylor coefficients c[beta] =
d^beta f / beta! for |beta| <= K, in a sparse dict keyed by exponent
tuples.  With that normalization products are plain Cauchy products and no
factorial bookkeeping is needed in hot loops; raw partial derivatives are
recovered on demand.

Coefficients are exact `Fraction`s in exact mode and 64-bit floats in float
mode; the arithmetic below is agnostic, it only assumes ring operations.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .polynomials import Polynomial

EXACT = "exact"
FLOAT = "float"


class JetError(ValueError):
    """Structural mismatch between jets (dimension or order)."""


class SingularJetError(ZeroDivisionError):
    """Reciprocal of a jet whose constant term vanishes."""


class OrderBudgetError(RuntimeError):
    """A derivative was requested past the truncation order."""


def as_mode(value, mode):
    """Coerce a rational value to the arithmetic domain of `mode`."""
    if mode == FLOAT:
        return float(value)
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


class Jet:
    """Immutable truncated Taylor expansion in `dim` variables."""

    __slots__ = ("dim", "order", "coeffs")

    def __init__(self, dim: int, order: int, coeffs=None):
        if order < 0:
            raise JetError(f"negative jet order {order}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        clean = {}
        for mi, c in (coeffs or {}).items():
            if len(mi) != dim:
                raise JetError(f"multi-index {mi} does not match dimension {dim}")
            if sum(mi) > order or not c:
                continue
            clean[mi] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Jet is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, dim, order, value):
        return cls(dim, order, {(0,) * dim: value})

    @classmethod
    def zero(cls, dim, order):
        return cls(dim, order, {})

    # -- basic queries -------------------------------------------------------

    @property
    def value(self):
        """Constant term, i.e. the value of the field at the point."""
        return self.coeffs.get((0,) * self.dim, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, mi):
        return self.coeffs.get(tuple(mi), 0)

    def partial(self, mi):
        """Raw partial derivative d^mi f at the point (coefficient times mi!)."""
        c = self.coefficient(mi)
        f = 1
        for e in mi:
            f *= math.factorial(e)
        return c * f

    # -- arithmetic ----------------------------------------------------------

    def _like(self, other):
        if not isinstance(other, Jet):
            return Jet.constant(self.dim, self.order, other)
        if other.dim != self.dim:
            raise JetError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return other

    def __add__(self, other):
        other = self._like(other)
        order = min(self.order, other.order)
        coeffs = {mi: c for mi, c in self.coeffs.items() if sum(mi) <= order}
        for mi, c in other.coeffs.items():
            if sum(mi) > order:
                continue
            s = coeffs.get(mi, 0) + c
            if s:
                coeffs[mi] = s
            else:
                coeffs.pop(mi, None)
        return Jet(self.dim, order, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.dim, self.order, {mi: -c for mi, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._like(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            if not other:
                return Jet.zero(self.dim, self.order)
            return Jet(self.dim, self.order,
                       {mi: c * other for mi, c in self.coeffs.items()})
        other = self._like(other)
        order = min(self.order, other.order)
        if not self.coeffs or not other.coeffs:
            return Jet.zero(self.dim, order)
        coeffs: dict = {}
        for mi1, c1 in self.coeffs.items():
            d1 = sum(mi1)
            if d1 > order:
                continue
            for mi2, c2 in other.coeffs.items():
                if d1 + sum(mi2) > order:
                    continue
                mi = tuple(a + b for a, b in zip(mi1, mi2))
                prev = coeffs.get(mi, 0)
                s = prev + c1 * c2
                if s:
                    coeffs[mi] = s
                else:
                    coeffs.pop(mi, None)
        return Jet(self.dim, order, coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Jet) and self.dim == other.dim
                and self.order == other.order and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.order, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"Jet(dim={self.dim}, order={self.order}, {self.coeffs!r})"

    # -- structure -------------------------------------------------------------

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.dim, order,
                   {mi: c for mi, c in self.coeffs.items() if sum(mi) <= order})

    def derivative(self, i: int, context: str = "") -> "Jet":
        """Partial derivative along coordinate i; drops the order by one."""
        if self.order == 0:
            what = f" (requested by {context})" if context else ""
            raise OrderBudgetError(f"jet order exhausted taking a derivative{what}")
        coeffs = {}
        for mi, c in self.coeffs.items():
            if mi[i] == 0:
                continue
            lowered = list(mi)
            lowered[i] -= 1
            coeffs[tuple(lowered)] = c * mi[i]
        return Jet(self.dim, self.order - 1, coeffs)


# -- module-level operations (the stable surface used by the pipeline) --------

def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product of two jets of identical shape, truncated at the order."""
    if not isinstance(a, Jet) or not isinstance(b, Jet):
        raise JetError("jet_mul expects two jets")
    if a.dim != b.dim or a.order != b.order:
        raise JetError(
            f"shape mismatch: dim/order ({a.dim},{a.order}) vs ({b.dim},{b.order})")
    return a * b


def jet_recip(a: Jet, name: str = "field") -> Jet:
    """Multiplicative inverse through the truncated geometric series.

    Requires a nonzero constant term; r satisfies a*r = 1 + O(K+1).
    """
    a0 = a.value
    if not a0:
        raise SingularJetError(f"cannot invert {name}: constant term vanishes")
    inv0 = (1 / a0) if isinstance(a0, float) else Fraction(1) / a0
    # b = 1 - a/a0 has zero constant term, so powers terminate at the order
    b = Jet.constant(a.dim, a.order, 1) - a * inv0
    total = Jet.constant(a.dim, a.order, 1)
    power = Jet.constant(a.dim, a.order, 1)
    for _ in range(a.order):
        power = power * b
        if power.is_zero():
            break
        total = total + power
    return total * inv0


def jet_exp(a: Jet) -> Jet:
    """exp of a jet, float mode only (constant term exponentiated numerically)."""
    a0 = a.value
    if not isinstance(a0, float):
        raise JetError("jet_exp requires float-mode jets; exact mode has no exp")
    b = a - Jet.constant(a.dim, a.order, a0)
    total = Jet.constant(a.dim, a.order, 1.0)
    power = Jet.constant(a.dim, a.order, 1.0)
    for k in range(1, a.order + 1):
        power = power * b
        if power.is_zero():
            break
        total = total + power * (1.0 / math.factorial(k))
    return total * math.exp(a0)


def jet_from_polynomial(p: Polynomial, point, order: int, mode: str = EXACT) -> Jet:
    """Exact Taylor shift of a polynomial to `point`, truncated at `order`.

    The result's coefficient at beta is the Taylor coefficient of p about the
    point, i.e. d^beta p(point) / beta!.
    """
    point = tuple(point)
    dim = len(p.variables)
    if len(point) != dim:
        raise JetError(f"point has {len(point)} coordinates, chart has {dim}")
    point = tuple(as_mode(x, mode) for x in point)
    zero_mi = (0,) * dim
    coeffs: dict = {}
    for mono, c in p.terms.items():
        c = as_mode(c, mode)
        # expand prod_i (p_i + delta_i)^e_i by binomials, truncating on degree
        partial = {zero_mi: c}
        for i, e in enumerate(mono):
            if e == 0:
                continue
            nxt: dict = {}
            for k in range(0, e + 1):
                factor = as_mode(math.comb(e, k), mode) * point[i] ** (e - k)
                for mi, v in partial.items():
                    if sum(mi) + k > order:
                        continue
                    new = list(mi)
                    new[i] += k
                    new = tuple(new)
                    nxt[new] = nxt.get(new, 0) + v * factor
            partial = nxt
        for mi, v in partial.items():
            s = coeffs.get(mi, 0) + v
            if s:
                coeffs[mi] = s
            else:
                coeffs.pop(mi, None)
    return Jet(dim, order, coeffs)
