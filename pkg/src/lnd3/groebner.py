"""Lexicographic Groebner bases, normal forms and elimination ideals.

Buchberger's algorithm with the normal pair-selection strategy and the
coprimality and chain criteria.  Output bases are reduced, monic and sorted
by leading term, so equal ideals with equal orders give identical bases.

Elimination works on a block order: with precedence u1 < ... < uk < x < ...
(least to greatest), the basis elements supported on the least block
generate the ideal's intersection with that subring.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .polyring import (Monomial, Poly, Ring, RingMismatchError, mono_div,
                       mono_divides, mono_lcm, mono_mul)


class DeadlineExceeded(Exception):
    """The computation ran past its caller-supplied time budget."""


@dataclass(frozen=True)
class MonomialOrder:
    """A total monomial order; currently lexicographic only.

    ``precedence`` lists variables from least to greatest.
    """

    precedence: tuple[str, ...]
    kind: str = "lex"

    def __post_init__(self):
        if self.kind != "lex":
            raise ValueError(f"unsupported order kind {self.kind!r}")
        if len(set(self.precedence)) != len(self.precedence):
            raise ValueError("duplicate variable in order")

    def key_function(self, ring: Ring):
        """Monomial -> sortable key, greater keys = greater monomials."""
        if set(self.precedence) != set(ring.vars):
            raise ValueError(
                f"order variables {self.precedence} do not match ring {ring.vars}")
        idx = tuple(ring.index(v) for v in reversed(self.precedence))
        return lambda mono: tuple(mono[i] for i in idx)


def lex_order(vars_least_to_greatest) -> MonomialOrder:
    return MonomialOrder(tuple(vars_least_to_greatest))


def default_order(ring: Ring) -> MonomialOrder:
    """Lex with the ring's first variable greatest."""
    return MonomialOrder(tuple(reversed(ring.vars)))


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple[Poly, ...]
    order: MonomialOrder
    ring: Ring


class _Deadline:
    __slots__ = ("limit",)

    def __init__(self, budget: float | None):
        self.limit = None if budget is None else time.monotonic() + budget

    def check(self):
        if self.limit is not None and time.monotonic() > self.limit:
            raise DeadlineExceeded("time budget exhausted")


def _leading(p: Poly, key) -> tuple[Monomial, Fraction]:
    lm = max(p.terms, key=key)
    return lm, p.terms[lm]


def _reduce(p: Poly, basis: list[tuple[Poly, Monomial, Fraction]], key,
            deadline: _Deadline) -> Poly:
    """Full remainder of p modulo the basis (no term divisible by any lt)."""
    ring = p.ring
    remainder: dict[Monomial, Fraction] = {}
    work = dict(p.terms)
    while work:
        deadline.check()
        lm = max(work, key=key)
        lc = work.pop(lm)
        for g, g_lm, g_lc in basis:
            if mono_divides(g_lm, lm):
                factor = lc / g_lc
                shift = mono_div(lm, g_lm)
                for m, c in g.terms.items():
                    if m == g_lm:
                        continue
                    mm = mono_mul(m, shift)
                    s = work.get(mm, Fraction(0)) - factor * c
                    if s:
                        work[mm] = s
                    else:
                        work.pop(mm, None)
                break
        else:
            remainder[lm] = lc
    return Poly(ring, remainder)


def _monic(p: Poly, key) -> Poly:
    _, lc = _leading(p, key)
    return p.scale(1 / lc)


def _interreduce(polys: list[Poly], key, deadline: _Deadline) -> list[Poly]:
    polys = [p for p in polys if not p.is_zero()]
    # minimalize: drop elements whose lt is divisible by another lt
    polys.sort(key=lambda p: key(_leading(p, key)[0]))
    minimal: list[Poly] = []
    for p in polys:
        lm = _leading(p, key)[0]
        if not any(mono_divides(_leading(q, key)[0], lm) for q in minimal):
            minimal.append(p)
    # fully reduce each element against the others
    reduced = []
    for i, p in enumerate(minimal):
        others = [(q, *_leading(q, key)) for j, q in enumerate(minimal) if j != i]
        r = _reduce(p, others, key, deadline)
        if not r.is_zero():
            reduced.append(_monic(r, key))
    reduced.sort(key=lambda p: key(_leading(p, key)[0]))
    return reduced


def buchberger(gens, order: MonomialOrder, deadline: float | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens]
    if not gens:
        raise ValueError("need at least one generator")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError("generators in mixed rings")
    key = order.key_function(ring)
    clock = _Deadline(deadline)

    basis = _interreduce(list(gens), key, clock)
    if not basis:
        return GroebnerBasis((), order, ring)

    lead = [_leading(g, key)[0] for g in basis]
    pairs: set[tuple[int, int]] = {(i, j) for j in range(len(basis)) for i in range(j)}

    def lcm_of(i: int, j: int) -> Monomial:
        return mono_lcm(lead[i], lead[j])

    def chain_criterion(i: int, j: int) -> bool:
        # pair (i,j) is redundant if some k divides lcm(i,j) and both
        # (i,k) and (j,k) were already handled
        l = lcm_of(i, j)
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if mono_divides(lead[k], l):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    return True
        return False

    while pairs:
        clock.check()
        i, j = min(pairs, key=lambda ij: (key(lcm_of(*ij)), ij))
        pairs.discard((i, j))
        l = lcm_of(i, j)
        if l == mono_mul(lead[i], lead[j]):
            continue  # coprime leading terms
        if chain_criterion(i, j):
            continue
        gi, gj = basis[i], basis[j]
        ci, cj = gi.terms[lead[i]], gj.terms[lead[j]]
        s_poly = (gi * Poly(ring, {mono_div(l, lead[i]): 1 / ci})
                  - gj * Poly(ring, {mono_div(l, lead[j]): 1 / cj}))
        r = _reduce(s_poly, [(g, lm, g.terms[lm]) for g, lm in zip(basis, lead)],
                    key, clock)
        if r.is_zero():
            continue
        r = _monic(r, key)
        basis.append(r)
        lead.append(_leading(r, key)[0])
        t = len(basis) - 1
        for k in range(t):
            pairs.add((k, t))

    return GroebnerBasis(tuple(_interreduce(basis, key, clock)), order, ring)


def normal_form(p: Poly, G: GroebnerBasis) -> Poly:
    """Remainder of p modulo G; zero iff p lies in the ideal."""
    if p.ring != G.ring:
        raise RingMismatchError("polynomial not in the basis ring")
    key = G.order.key_function(G.ring)
    basis = [(g, *_leading(g, key)) for g in G.generators]
    return _reduce(p, basis, key, _Deadline(None))


def eliminate(gens, keep, order: MonomialOrder,
              deadline: float | None = None) -> list[Poly]:
    """Generators of the ideal's intersection with the ``keep`` subring.

    ``keep`` must be the least block of the order's precedence.
    """
    keep = tuple(keep)
    if tuple(order.precedence[:len(keep)]) != keep:
        raise ValueError("keep variables must form the least block of the order")
    G = buchberger(gens, order, deadline)
    ring = G.ring
    keep_set = set(keep)
    dropped = [i for i, v in enumerate(ring.vars) if v not in keep_set]
    out = []
    for g in G.generators:
        if all(all(m[i] == 0 for i in dropped) for m in g.terms):
            out.append(g)
    return out
