"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a map from monomials to nonzero Fraction coefficients,
attached to a ring context (an ordered tuple of variable names).  Monomials
are exponent tuples aligned with the ring's variable order, so equal
polynomials have identical stored form.  All values are immutable and all
operations are pure functions, so they can be shared freely between threads.

The default monomial order is lexicographic with the first ring variable
greatest; elimination orders live in ``groebner``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf, lcm
from typing import Iterable, Mapping

VAR_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

Monomial = tuple[int, ...]


class RingMismatchError(ValueError):
    """Operands belong to different ring contexts."""


class DivisionByZeroPolyError(ZeroDivisionError):
    """Exact division by the zero polynomial."""


@dataclass(frozen=True)
class Ring:
    """An ordered set of variable names fixing a polynomial ring over Q.

    The variable order is also the significance order of the default lex
    comparison: ``Ring(("x", "y", "z"))`` has x > y > z.
    """

    vars: tuple[str, ...]

    def __post_init__(self):
        if not self.vars:
            raise ValueError("ring needs at least one variable")
        seen = set()
        for name in self.vars:
            if not VAR_NAME.match(name):
                raise ValueError(f"invalid variable name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate variable {name!r}")
            seen.add(name)

    @property
    def arity(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise KeyError(f"variable {name!r} not in ring {self.vars}") from None

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, value) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return self.zero()
        return Poly(self, {(0,) * self.arity: c})

    def var(self, name: str) -> "Poly":
        exps = [0] * self.arity
        exps[self.index(name)] = 1
        return Poly(self, {tuple(exps): Fraction(1)})

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.var(v) for v in self.vars)

    def poly(self, terms: Mapping[Monomial, object]) -> "Poly":
        return Poly(self, {m: Fraction(c) for m, c in terms.items()})

    def monomial(self, **exps: int) -> Monomial:
        out = [0] * self.arity
        for name, e in exps.items():
            out[self.index(name)] = e
        return tuple(out)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, Fraction]):
        clean = {}
        arity = ring.arity
        for mono, coeff in terms.items():
            if len(mono) != arity:
                raise ValueError(f"monomial {mono} does not fit ring {ring.vars}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[mono] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- basic structure ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(mono_degree(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self):
        """Total degree; -inf for the zero polynomial."""
        if not self.terms:
            return -inf
        return max(mono_degree(m) for m in self.terms)

    def degree_in(self, var: str):
        if not self.terms:
            return -inf
        i = self.ring.index(var)
        return max(m[i] for m in self.terms)

    def vars_present(self) -> tuple[str, ...]:
        used = [False] * self.ring.arity
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.ring.vars, used) if u)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            items = tuple(sorted(self.terms.items()))
            object.__setattr__(self, "_hash", hash((self.ring, items)))
        return self._hash

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(
                    f"mixed rings {self.ring.vars} and {other.ring.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return self.ring.zero()
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Monomial, Fraction] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = mono_mul(ma, mb)
                s = out.get(m, Fraction(0)) + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return Poly(self.ring, {m: coeff * c for m, coeff in self.terms.items()})

    # -- leading data under the default lex order ------------------------

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        """self divided by its content (zero stays zero)."""
        c = self.content()
        if c == 0:
            return self
        return self.scale(1 / c)

    def normalized(self) -> "Poly":
        """Primitive form with positive leading coefficient under lex."""
        p = self.primitive()
        if p.terms and p.leading_coefficient() < 0:
            p = -p
        return p

    # -- calculus and composition ----------------------------------------

    def diff(self, var: str) -> "Poly":
        i = self.ring.index(var)
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                dm = m[:i] + (e - 1,) + m[i + 1:]
                s = out.get(dm, Fraction(0)) + c * e
                if s:
                    out[dm] = s
                else:
                    del out[dm]
        return Poly(self.ring, out)

    def subst(self, images: Mapping[str, "Poly"]) -> "Poly":
        """Substitute every variable; unmapped variables keep their identity.

        All images must share one target ring, which becomes the result ring.
        """
        target: Ring | None = None
        for img in images.values():
            if target is None:
                target = img.ring
            elif img.ring != target:
                raise RingMismatchError("substitution images in mixed rings")
        if target is None:
            target = self.ring
        full = {}
        for v in self.vars_present():
            if v in images:
                full[v] = images[v]
            else:
                full[v] = target.var(v)  # identity; raises if v missing from target
        # cache variable powers to keep repeated exponents cheap
        powers: dict[tuple[str, int], Poly] = {}

        def power(v: str, e: int) -> Poly:
            key = (v, e)
            if key not in powers:
                powers[key] = full[v] ** e
            return powers[key]

        result = target.zero()
        for m, c in self.terms.items():
            term = target.const(c)
            for v, e in zip(self.ring.vars, m):
                if e:
                    term = term * power(v, e)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Evaluate at a rational point covering every present variable."""
        values = {v: Fraction(point[v]) for v in self.vars_present()}
        total = Fraction(0)
        for m, c in self.terms.items():
            val = c
            for v, e in zip(self.ring.vars, m):
                if e:
                    val *= values[v] ** e
            total += val
        return total

    def exact_div(self, q: "Poly") -> "Poly | None":
        return exact_div(self, q)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def exact_div(p: Poly, q: Poly) -> Poly | None:
    """Exact quotient p/q, or None when q does not divide p.

    Greedy leading-term division under lex: if p = q*r then lt(p) =
    lt(q)*lt(r), so each step either peels the true leading term of the
    quotient or proves indivisibility.
    """
    if q.ring != p.ring:
        raise RingMismatchError("exact_div over mixed rings")
    if q.is_zero():
        raise DivisionByZeroPolyError("division by zero polynomial")
    if p.is_zero():
        return p
    lm_q = q.leading_monomial()
    lc_q = q.terms[lm_q]
    quotient: dict[Monomial, Fraction] = {}
    rest = p
    while rest.terms:
        lm = rest.leading_monomial()
        if not mono_divides(lm_q, lm):
            return None
        m = mono_div(lm, lm_q)
        c = rest.terms[lm] / lc_q
        quotient[m] = c
        rest = rest - Poly(p.ring, {m: c}) * q
    return Poly(p.ring, quotient)


def diff(p: Poly, var: str) -> Poly:
    return p.diff(var)


def subst(p: Poly, images: Mapping[str, Poly]) -> Poly:
    return p.subst(images)


def jacobian3(f: Poly, g: Poly, h: Poly) -> Poly:
    """Determinant of the 3x3 matrix of partials of (f, g, h)."""
    ring = f.ring
    if g.ring != ring or h.ring != ring:
        raise RingMismatchError("jacobian3 over mixed rings")
    if ring.arity != 3:
        raise ValueError("jacobian3 needs a three-variable ring")
    rows = [[p.diff(v) for v in ring.vars] for p in (f, g, h)]
    det = ring.zero()
    for j, sign in ((0, 1), (1, -1), (2, 1)):
        cols = [k for k in range(3) if k != j]
        minor = (rows[1][cols[0]] * rows[2][cols[1]]
                 - rows[1][cols[1]] * rows[2][cols[0]])
        det = det + rows[0][j].scale(sign) * minor
    return det


# -- automorphisms of a two-variable ring --------------------------------


@dataclass(frozen=True)
class LinearStep:
    """Affine substitution (x, y) -> M*(x, y) + shift with invertible M."""

    matrix: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    shift: tuple[Fraction, Fraction]

    def __post_init__(self):
        m = tuple(tuple(Fraction(c) for c in row) for row in self.matrix)
        s = tuple(Fraction(c) for c in self.shift)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "shift", s)
        if self.det() == 0:
            raise ValueError("linear step is singular")

    def det(self) -> Fraction:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def inverse(self) -> "LinearStep":
        (a, b), (c, d) = self.matrix
        det = self.det()
        inv = ((d / det, -b / det), (-c / det, a / det))
        e, f = self.shift
        return LinearStep(inv, (-(inv[0][0] * e + inv[0][1] * f),
                                -(inv[1][0] * e + inv[1][1] * f)))

    def images(self, ring: Ring) -> tuple[Poly, Poly]:
        x, y = ring.gens()
        (a, b), (c, d) = self.matrix
        e, f = self.shift
        return (x.scale(a) + y.scale(b) + ring.const(e),
                x.scale(c) + y.scale(d) + ring.const(f))


@dataclass(frozen=True)
class ElementaryStep:
    """Substitution v_target -> v_target + h(v_other), h in the other variable."""

    target: int
    shift_poly: Poly

    def __post_init__(self):
        if self.target not in (0, 1):
            raise ValueError("target must be 0 or 1")
        ring = self.shift_poly.ring
        if ring.arity != 2:
            raise ValueError("elementary step needs a two-variable ring")
        other = ring.vars[1 - self.target]
        if self.shift_poly.vars_present() not in ((), (other,)):
            raise ValueError("shift polynomial must involve only the other variable")

    def inverse(self) -> "ElementaryStep":
        return ElementaryStep(self.target, -self.shift_poly)

    def images(self, ring: Ring) -> tuple[Poly, Poly]:
        if self.shift_poly.ring != ring:
            raise RingMismatchError("elementary step bound to another ring")
        out = list(ring.gens())
        out[self.target] = out[self.target] + self.shift_poly
        return tuple(out)


Step = LinearStep | ElementaryStep


@dataclass(frozen=True)
class Automorphism2:
    """A composition of invertible steps of a two-variable ring.

    Applying the automorphism to p substitutes each step's images in
    sequence; the inverse applies inverted steps in reverse order.
    """

    ring: Ring
    steps: tuple[Step, ...]

    def __post_init__(self):
        if self.ring.arity != 2:
            raise ValueError("Automorphism2 needs a two-variable ring")

    @staticmethod
    def identity(ring: Ring) -> "Automorphism2":
        return Automorphism2(ring, ())

    def then(self, step: Step) -> "Automorphism2":
        return Automorphism2(self.ring, self.steps + (step,))

    def apply(self, p: Poly, inverse: bool = False) -> Poly:
        if p.ring != self.ring:
            raise RingMismatchError("polynomial not in the automorphism's ring")
        steps: Iterable[Step]
        if inverse:
            steps = (s.inverse() for s in reversed(self.steps))
        else:
            steps = self.steps
        for step in steps:
            ix, iy = step.images(self.ring)
            p = p.subst({self.ring.vars[0]: ix, self.ring.vars[1]: iy})
        return p


def apply_automorphism2(sigma: Automorphism2, p: Poly, inverse: bool = False) -> Poly:
    return sigma.apply(p, inverse=inverse)


# -- formatting ----------------------------------------------------------


def format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Expression string, terms in descending lex order; reparses to p."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for mono in sorted(p.terms, reverse=True):
        coeff = p.terms[mono]
        factors = []
        for v, e in zip(p.ring.vars, mono):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(coeff)
        if factors and mag == 1:
            body = "*".join(factors)
        elif factors:
            body = "*".join([format_coeff(mag)] + factors)
        else:
            body = format_coeff(mag)
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(parts)
