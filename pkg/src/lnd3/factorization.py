"""GCDs, squarefree decomposition and irreducible factorization over Q.

Univariate factorization runs the classical chain: squarefree split,
Berlekamp factorization modulo a deterministically chosen small odd prime,
multifactor Hensel lifting, then subset recombination with exact trial
division.  Multivariate polynomials are factored by evaluating all but one
variable at a small integer point, factoring the univariate image, and
Hensel-lifting the image factors back one variable at a time; a final
subset-recombination pass with exact trial division makes the result
independent of the luck of the evaluation point.

Multivariate GCDs use the primitive polynomial remainder sequence, and
squarefree decomposition is the repeated-GCD construction on top of it.
Everything is exact; normalized factors are primitive with positive leading
coefficient under the ring's lex order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd, isqrt

from .polyring import Poly, Ring, RingMismatchError, exact_div


class ConstantInputError(ValueError):
    """The operation needs a nonconstant polynomial."""


@dataclass(frozen=True)
class Factorization:
    """unit * product(factor**multiplicity) reconstructs the input exactly.

    Factors are primitive with positive lex-leading coefficient, irreducible
    over Q, pairwise non-associate, and deterministically ordered.
    """

    unit: Fraction
    factors: tuple[tuple[Poly, int], ...]

    def expand(self) -> Poly:
        if not self.factors:
            raise ValueError("factorization with no factors has no ring")
        ring = self.factors[0][0].ring
        out = ring.const(self.unit)
        for f, m in self.factors:
            out = out * f ** m
        return out


# ---------------------------------------------------------------------------
# multivariate gcd (primitive PRS)
# ---------------------------------------------------------------------------


def _coeffs_wrt(p: Poly, var: str) -> dict[int, Poly]:
    """Coefficient polynomials of p viewed as univariate in ``var``."""
    i = p.ring.index(var)
    out: dict[int, dict] = {}
    for m, c in p.terms.items():
        e = m[i]
        base = m[:i] + (0,) + m[i + 1:]
        out.setdefault(e, {})[base] = c
    return {e: Poly(p.ring, terms) for e, terms in out.items()}


def _coeff_in(p: Poly, var: str, e: int) -> Poly:
    i = p.ring.index(var)
    out = {}
    for m, c in p.terms.items():
        if m[i] == e:
            out[m[:i] + (0,) + m[i + 1:]] = c
    return Poly(p.ring, out)


def _content_wrt(p: Poly, var: str) -> Poly:
    return gcd_list(list(_coeffs_wrt(p, var).values()))


def _prem(a: Poly, b: Poly, var: str) -> Poly:
    """Pseudo-remainder of a by b in ``var`` (deg_var b >= 1)."""
    db = b.degree_in(var)
    lc_b = _coeff_in(b, var, db)
    v = a.ring.var(var)
    while not a.is_zero():
        da = a.degree_in(var)
        if da < db:
            break
        lc_a = _coeff_in(a, var, da)
        a = lc_b * a - lc_a * v ** (da - db) * b
    return a


def _int_terms(p: Poly) -> dict:
    """Term dict with plain int coefficients; p must be integer-valued."""
    out = {}
    for m, c in p.terms.items():
        if c.denominator != 1:
            raise ValueError("expected integer coefficients")
        out[m] = c.numerator
    return out


def _d_eval(d: dict, i: int, xi: int) -> dict:
    out: dict = {}
    for m, c in d.items():
        e = m[i]
        base = m[:i] + (0,) + m[i + 1:]
        out[base] = out.get(base, 0) + c * xi ** e
    return {m: c for m, c in out.items() if c}


def _d_reconstruct(d: dict, i: int, xi: int) -> dict:
    """Balanced base-xi digits of every coefficient, digit k -> exponent k of
    variable i."""
    out: dict = {}
    work = dict(d)
    k = 0
    half = xi // 2
    while work:
        nxt = {}
        for m, c in work.items():
            digit = c % xi
            if digit > half:
                digit -= xi
            if digit:
                out[m[:i] + (k,) + m[i + 1:]] = digit
            rest = (c - digit) // xi
            if rest:
                nxt[m] = rest
        work = nxt
        k += 1
    return out


def _d_primitive(d: dict) -> dict:
    c = 0
    for v in d.values():
        c = int_gcd(c, v)
    if c == 0:
        return {}
    if d[max(d)] < 0:
        c = -c
    if c == 1:
        return d
    return {m: v // c for m, v in d.items()}


def _d_div_exact(a: dict, b: dict) -> dict | None:
    """Exact quotient of int-coefficient term dicts under lex, else None."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return {}
    lm_b = max(b)
    lc_b = b[lm_b]
    rest = dict(a)
    quotient: dict = {}
    while rest:
        lm = max(rest)
        if not all(x >= y for x, y in zip(lm, lm_b)):
            return None
        c, r = divmod(rest[lm], lc_b)
        if r:
            return None
        shift = tuple(x - y for x, y in zip(lm, lm_b))
        quotient[shift] = c
        for m, v in b.items():
            mm = tuple(x + y for x, y in zip(m, shift))
            s = rest.get(mm, 0) - c * v
            if s:
                rest[mm] = s
            else:
                rest.pop(mm, None)
    return quotient


def _gcd_heuristic(a: dict, b: dict) -> dict | None:
    """Evaluation/reconstruction gcd of primitive int term dicts.

    Verified by exact trial division into both inputs; None when the
    evaluation points keep failing and the caller should fall back.
    """
    if not a or not b:
        raise ValueError("heuristic gcd of zero input")
    present = [i for i in range(len(next(iter(a))))
               if any(m[i] for m in a) or any(m[i] for m in b)]
    if not present:
        g = int_gcd(next(iter(a.values())), next(iter(b.values())))
        return {next(iter(a)): abs(g)}
    i = present[0]
    norm = min(max(abs(c) for c in a.values()), max(abs(c) for c in b.values()))
    xi = 2 * norm + 29
    for _ in range(6):
        fa = _d_eval(a, i, xi)
        fb = _d_eval(b, i, xi)
        if fa and fb:
            sub = _gcd_heuristic(fa, fb)
            if sub is not None:
                h = _d_primitive(_d_reconstruct(sub, i, xi))
                if h and _d_div_exact(a, h) is not None \
                        and _d_div_exact(b, h) is not None:
                    return h
        xi = xi * 73 // 32 + 31
    return None


def _gcd_prs(p: Poly, q: Poly) -> Poly:
    """Primitive PRS gcd; exact but slow, kept as the fallback route."""
    present = set(p.vars_present()) | set(q.vars_present())
    main = next(v for v in p.ring.vars if v in present)
    if p.degree_in(main) == 0:
        return gcd_multi(p, _content_wrt(q, main))
    if q.degree_in(main) == 0:
        return gcd_multi(_content_wrt(p, main), q)
    cont_p = _content_wrt(p, main)
    cont_q = _content_wrt(q, main)
    cont = gcd_multi(cont_p, cont_q)
    a = exact_div(p, cont_p)
    b = exact_div(q, cont_q)
    if a.degree_in(main) < b.degree_in(main):
        a, b = b, a
    while True:
        r = _prem(a, b, main)
        if r.is_zero():
            g = b
            break
        if r.degree_in(main) == 0:
            g = a.ring.one()
            break
        a, b = b, exact_div(r, _content_wrt(r, main))
    return (cont * g).normalized()


def gcd_multi(p: Poly, q: Poly) -> Poly:
    """GCD over Q, normalized primitive with positive lex-leading coefficient."""
    if p.ring != q.ring:
        raise RingMismatchError("gcd over mixed rings")
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    if p.is_constant() or q.is_constant():
        return p.ring.one()
    g = _gcd_heuristic(_int_terms(p.normalized()), _int_terms(q.normalized()))
    if g is not None:
        return Poly(p.ring, {m: Fraction(c) for m, c in g.items()})
    return _gcd_prs(p, q)


def gcd_list(polys) -> Poly:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise ValueError("gcd of an empty or all-zero list")
    g = polys[0].normalized()
    for p in polys[1:]:
        if g.is_constant():
            break
        g = gcd_multi(g, p)
    return g if not g.is_constant() else polys[0].ring.one()


# ---------------------------------------------------------------------------
# squarefree decomposition (repeated gcd)
# ---------------------------------------------------------------------------


def squarefree(p: Poly) -> list[tuple[Poly, int]]:
    """Pairwise-coprime squarefree parts; weighted product rebuilds p up to
    a rational unit.  Sorted by multiplicity."""
    if p.is_zero() or p.is_constant():
        raise ConstantInputError("squarefree decomposition needs a nonconstant input")
    merged: dict[int, Poly] = {}
    for part, mult in _sqf_parts(p.normalized()):
        if mult in merged:
            merged[mult] = (merged[mult] * part).normalized()
        else:
            merged[mult] = part
    return [(poly, mult) for mult, poly in sorted(merged.items())]


def _sqf_parts(p: Poly) -> list[tuple[Poly, int]]:
    main = p.vars_present()[0]
    cont = _content_wrt(p, main)
    work = exact_div(p, cont)
    out = []
    d = work.diff(main)
    g = gcd_multi(work, d)
    w = exact_div(work, g)
    i = 1
    while not w.is_constant():
        y = gcd_multi(w, g)
        part = exact_div(w, y)
        if not part.is_constant():
            out.append((part.normalized(), i))
        w = y
        g = exact_div(g, y)
        i += 1
    if not cont.is_constant():
        out.extend(_sqf_parts(cont.normalized()))
    return out


# ---------------------------------------------------------------------------
# dense univariate helpers
#
# fq_*: lists of Fractions, index = exponent, no trailing zeros
# zp_*: lists of ints reduced mod p, same layout
# ---------------------------------------------------------------------------


def _trim(f):
    while f and not f[-1]:
        f.pop()
    return f


def fq_mul(f, g):
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim(out)


def fq_sub(f, g):
    out = list(f) + [Fraction(0)] * max(0, len(g) - len(f))
    for j, b in enumerate(g):
        out[j] -= b
    return _trim(out)


def fq_divmod(f, g):
    if not g:
        raise ZeroDivisionError("univariate division by zero")
    f = list(f)
    q = [Fraction(0)] * max(0, len(f) - len(g) + 1)
    inv = 1 / g[-1]
    while len(f) >= len(g):
        c = f[-1] * inv
        d = len(f) - len(g)
        q[d] = c
        for j, b in enumerate(g):
            f[d + j] -= c * b
        _trim(f)
        if not f:
            break
    return _trim(q), f


def fq_rem(f, g):
    return fq_divmod(f, g)[1]


def fq_monic(f):
    inv = 1 / f[-1]
    return [c * inv for c in f]


def fq_gcd(f, g):
    while g:
        f, g = g, fq_rem(f, g)
    return fq_monic(f) if f else f


def fq_gcdex(f, g):
    """(s, t, h) with s*f + t*g = h, h the monic gcd."""
    r0, r1 = list(f), list(g)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = fq_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, fq_sub(s0, fq_mul(q, s1))
        t0, t1 = t1, fq_sub(t0, fq_mul(q, t1))
    lc = r0[-1]
    inv = 1 / lc
    return ([c * inv for c in s0], [c * inv for c in t0], fq_monic(r0))


def zp_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def zp_sub(f, g, p):
    out = list(f) + [0] * max(0, len(g) - len(f))
    for j, b in enumerate(g):
        out[j] = (out[j] - b) % p
    return _trim(out)


def zp_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("univariate division by zero")
    f = [c % p for c in f]
    _trim(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        d = len(f) - len(g)
        q[d] = c
        for j, b in enumerate(g):
            f[d + j] = (f[d + j] - c * b) % p
        _trim(f)
        if not f:
            break
    return _trim(q), f


def zp_rem(f, g, p):
    return zp_divmod(f, g, p)[1]


def zp_monic(f, p):
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def zp_gcd(f, g, p):
    while g:
        f, g = g, zp_rem(f, g, p)
    return zp_monic(f, p) if f else f


def zp_gcdex(f, g, p):
    """(s, t, h) with s*f + t*g = h, h the monic gcd mod p."""
    r0, r1 = [c % p for c in f], [c % p for c in g]
    _trim(r0), _trim(r1)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = zp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, zp_sub(s0, zp_mul(q, s1, p), p)
        t0, t1 = t1, zp_sub(t0, zp_mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return ([c * inv % p for c in s0], [c * inv % p for c in t0],
            zp_monic(r0, p))


def zp_pow_mod(base, e, mod, p):
    result = [1]
    base = zp_rem(base, mod, p)
    while e:
        if e & 1:
            result = zp_rem(zp_mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = zp_rem(zp_mul(base, base, p), mod, p)
    return result


# ---------------------------------------------------------------------------
# integer univariate machinery: Berlekamp, Hensel, Zassenhaus
# ---------------------------------------------------------------------------


def zx_mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim(out)


def zx_sub(f, g):
    out = list(f) + [0] * max(0, len(g) - len(f))
    for j, b in enumerate(g):
        out[j] -= b
    return _trim(out)


def zx_primitive(f):
    """Primitive part with positive leading coefficient."""
    c = 0
    for a in f:
        c = int_gcd(c, a)
    if c == 0:
        return []
    if f[-1] < 0:
        c = -c
    return [a // c for a in f]


def zx_div_exact(f, g):
    """Quotient in Z[x] when g divides f exactly, else None."""
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    if not f:
        return []
    if len(f) < len(g):
        return None
    f = list(f)
    q = [0] * (len(f) - len(g) + 1)
    while f:
        if len(f) < len(g):
            return None
        c, r = divmod(f[-1], g[-1])
        if r:
            return None
        d = len(f) - len(g)
        q[d] = c
        for j, b in enumerate(g):
            f[d + j] -= c * b
        _trim(f)
    return q


def _odd_primes():
    yield 3
    n = 5
    while True:
        for d in range(3, isqrt(n) + 1, 2):
            if n % d == 0:
                break
        else:
            yield n
        n += 2


def _berlekamp(f, p):
    """Distinct monic irreducible factors of monic squarefree f mod p."""
    n = len(f) - 1
    if n == 1:
        return [f]
    xp = zp_pow_mod([0, 1], p, f, p)
    rows = [[1] + [0] * (n - 1)]
    cur = [1]
    for _ in range(1, n):
        cur = zp_rem(zp_mul(cur, xp, p), f, p)
        rows.append(list(cur) + [0] * (n - len(cur)))
    # nullspace of (Q - I)^T gives the fixed vectors of v -> v^p
    mat = [[(rows[j][i] - (1 if i == j else 0)) % p for j in range(n)]
           for i in range(n)]
    basis = _zp_nullspace(mat, p)
    r = len(basis)
    if r == 1:
        return [f]
    factors = [f]
    for v in basis:
        vp = _trim(list(v))
        if len(vp) <= 1:
            continue
        next_factors = []
        for w in factors:
            if len(w) - 1 <= 1:
                next_factors.append(w)
                continue
            rem_w = w
            parts = []
            for s in range(p):
                if len(rem_w) - 1 == 0:
                    break
                shifted = list(vp)
                shifted[0] = (shifted[0] - s) % p
                g = zp_gcd(rem_w, _trim(shifted), p)
                if 0 < len(g) - 1 < len(rem_w) - 1:
                    parts.append(g)
                    rem_w = zp_divmod(rem_w, g, p)[0]
                elif len(g) - 1 == len(rem_w) - 1:
                    break
            if len(rem_w) - 1 > 0:
                parts.append(zp_monic(rem_w, p))
            next_factors.extend(parts)
        factors = next_factors
        if len(factors) == r:
            break
    return sorted(factors, key=lambda h: (len(h), h))


def _zp_nullspace(mat, p):
    """Basis of the nullspace of mat (n x n) over GF(p)."""
    n = len(mat)
    m = [row[:] for row in mat]
    pivots = {}
    row = 0
    for col in range(n):
        sel = None
        for i in range(row, n):
            if m[i][col] % p:
                sel = i
                break
        if sel is None:
            continue
        m[row], m[sel] = m[sel], m[row]
        inv = pow(m[row][col], -1, p)
        m[row] = [c * inv % p for c in m[row]]
        for i in range(n):
            if i != row and m[i][col]:
                factor = m[i][col]
                m[i] = [(a - factor * b) % p for a, b in zip(m[i], m[row])]
        pivots[col] = row
        row += 1
    basis = []
    for col in range(n):
        if col in pivots:
            continue
        v = [0] * n
        v[col] = 1
        for pc, pr in pivots.items():
            v[pc] = (-m[pr][col]) % p
        basis.append(v)
    return basis


def _hensel_lift(f, mods, p, k):
    """Lift monic mod-p factors of f/lc(f) to monic factors mod p**k."""
    lc = f[-1]
    r = len(mods)
    inverses = []
    for i in range(r):
        b = [lc % p]
        for j in range(r):
            if j != i:
                b = zp_mul(b, mods[j], p)
        b = zp_rem(b, mods[i], p)
        s, _, g = zp_gcdex(b, mods[i], p)
        if g != [1]:
            raise ArithmeticError("modular factors are not coprime")
        inverses.append(s)
    lifted = [list(m) for m in mods]
    modulus = p
    for _ in range(k - 1):
        prod = [lc]
        for fi in lifted:
            prod = zx_mul(prod, fi)
        e = zx_sub(f, prod)
        if not e:
            break
        d = _trim([(c // modulus) % p for c in e])
        if d:
            for i in range(r):
                delta = zp_rem(zp_mul(d, inverses[i], p), mods[i], p)
                for j, c in enumerate(delta):
                    lifted[i][j] += modulus * c
        modulus *= p
    return lifted, p ** k


def _symmetric(c, m):
    c %= m
    if c > m // 2:
        c -= m
    return c


def zx_factor_squarefree(f):
    """Irreducible factors of a primitive squarefree f in Z[x], lc(f) > 0."""
    n = len(f) - 1
    if n == 1:
        return [list(f)]
    lc = f[-1]
    for p in _odd_primes():
        if lc % p == 0:
            continue
        fbar = _trim([c % p for c in f])
        if len(fbar) - 1 != n:
            continue
        deriv = _trim([(i * c) % p for i, c in enumerate(fbar)][1:])
        if not deriv or len(zp_gcd(fbar, deriv, p)) - 1 != 0:
            continue
        break
    mods = _berlekamp(zp_monic(fbar, p), p)
    if len(mods) == 1:
        return [list(f)]
    max_coeff = max(abs(c) for c in f)
    bound = (n + 1) * (1 << n) * max_coeff * abs(lc)
    k = 1
    pk = p
    while pk <= 2 * bound:
        pk *= p
        k += 1
    lifted, pk = _hensel_lift(f, mods, p, k)

    indices = list(range(len(lifted)))
    factors = []
    s = 1
    while 2 * s <= len(indices):
        found = True
        while found:
            found = False
            for combo in itertools.combinations(indices, s):
                g = [lc]
                for i in combo:
                    g = zx_mul(g, lifted[i])
                g = _trim([_symmetric(c, pk) for c in g])
                g = zx_primitive(g)
                if not g or len(g) - 1 == 0:
                    continue
                q = zx_div_exact(f, g)
                if q is not None:
                    factors.append(g)
                    f = zx_primitive(q)
                    lc = f[-1]
                    indices = [i for i in indices if i not in combo]
                    found = True
                    break
            if 2 * s > len(indices):
                break
        s += 1
    if len(f) - 1 >= 1:
        factors.append(f)
    return sorted(factors, key=lambda h: (len(h), h))


# ---------------------------------------------------------------------------
# sparse <-> dense conversions
# ---------------------------------------------------------------------------


def _dense_in(p: Poly, var: str):
    """p as a Fraction list in var; p must involve no other variable."""
    if p.vars_present() not in ((), (var,)):
        raise ValueError("polynomial is not univariate in " + var)
    i = p.ring.index(var)
    deg = p.degree_in(var)
    if p.is_zero():
        return []
    out = [Fraction(0)] * (int(deg) + 1)
    for m, c in p.terms.items():
        out[m[i]] = c
    return out


def _dense_int(p: Poly, var: str):
    dense = _dense_in(p, var)
    out = []
    for c in dense:
        if c.denominator != 1:
            raise ValueError("expected integer coefficients")
        out.append(c.numerator)
    return out


def _poly_from_dense(ring: Ring, var: str, dense) -> Poly:
    i = ring.index(var)
    terms = {}
    for e, c in enumerate(dense):
        if c:
            mono = [0] * ring.arity
            mono[i] = e
            terms[tuple(mono)] = Fraction(c)
    return Poly(ring, terms)


# ---------------------------------------------------------------------------
# multivariate factorization: evaluation + per-variable Hensel lifting
# ---------------------------------------------------------------------------


def _point_stream(m: int, radius: int = 8):
    for r in range(radius + 1):
        for tup in itertools.product(range(-r, r + 1), repeat=m):
            if r == 0 or max(abs(t) for t in tup) == r:
                yield tup


def _truncate(p: Poly, bounds: dict[str, int]) -> Poly:
    idx = {p.ring.index(v): b for v, b in bounds.items()}
    out = {m: c for m, c in p.terms.items()
           if all(m[i] <= b for i, b in idx.items())}
    if len(out) == len(p.terms):
        return p
    return Poly(p.ring, out)


def _factor_squarefree_poly(q: Poly) -> list[Poly]:
    """Irreducible factors of a squarefree normalized q (any variable count)."""
    present = q.vars_present()
    if len(present) == 1:
        dense = _dense_int(q, present[0])
        return [_poly_from_dense(q.ring, present[0], f).normalized()
                for f in zx_factor_squarefree(zx_primitive(dense))]
    main = min(present, key=lambda v: (q.degree_in(v), q.ring.index(v)))
    cont = _content_wrt(q, main)
    out = []
    if not cont.is_constant():
        out.extend(_factor_squarefree_poly(cont.normalized()))
        q = exact_div(q, cont).normalized()
        present = q.vars_present()
        if len(present) == 1:
            dense = _dense_int(q, present[0])
            out.extend(_poly_from_dense(q.ring, present[0], f).normalized()
                       for f in zx_factor_squarefree(zx_primitive(dense)))
            return out
    out.extend(_eez_factor(q, main))
    return out


def _eez_factor(P: Poly, x: str) -> list[Poly]:
    """Factor P: squarefree, integer, primitive in x, >= 2 present variables."""
    ring = P.ring
    n = int(P.degree_in(x))
    if n == 1:
        return [P.normalized()]
    params = [v for v in P.vars_present() if v != x]
    lead = _coeff_in(P, x, n)

    candidates = []
    for point in _point_stream(len(params)):
        assignment = {v: Fraction(a) for v, a in zip(params, point)}
        if lead.evaluate(assignment) == 0:
            continue
        u = P.subst({v: ring.const(a) for v, a in assignment.items()})
        ud = _dense_int(u, x)
        if len(ud) - 1 != n:
            continue
        deriv = _trim([i * c for i, c in enumerate(ud)][1:])
        g = fq_gcd([Fraction(c) for c in ud], [Fraction(c) for c in deriv])
        if len(g) - 1 != 0:
            continue
        base_factors = zx_factor_squarefree(zx_primitive(ud))
        if len(base_factors) == 1:
            return [P.normalized()]
        candidates.append((len(base_factors), point, base_factors))
        if len(candidates) == 5:
            break
    if not candidates:
        raise ArithmeticError("no usable evaluation point found")
    r, point, base_factors = min(candidates, key=lambda c: c[0])

    factors = _eez_lift_and_recombine(P, x, params, point, base_factors)
    return [f.normalized() for f in factors]


def _eez_lift_and_recombine(P, x, params, point, base_factors):
    ring = P.ring
    n = int(P.degree_in(x))
    r = len(base_factors)
    lead = _coeff_in(P, x, n)
    padded = lead ** (r - 1) * P

    shift = {v: ring.var(v) + ring.const(a) for v, a in zip(params, point)}
    unshift = {v: ring.var(v) - ring.const(a) for v, a in zip(params, point)}
    target_full = padded.subst(shift)
    lead_sh = lead.subst(shift)
    bounds = {v: int(target_full.degree_in(v)) for v in params}

    lval = lead.evaluate({v: Fraction(a) for v, a in zip(params, point)})
    base_monic = []
    for f in base_factors:
        fr = [Fraction(c) for c in f]
        base_monic.append(fq_monic(fr))
    # Bezout inverses for the univariate diophantine base case
    scale = lval ** (r - 1)
    inverses = []
    for i in range(r):
        b = [scale]
        for j in range(r):
            if j != i:
                b = fq_mul(b, base_monic[j])
        s, _, g = fq_gcdex(fq_rem(b, base_monic[i]), base_monic[i])
        if g != [Fraction(1)]:
            raise ArithmeticError("image factors are not coprime")
        inverses.append(s)

    levels = [[_poly_from_dense(ring, x, f).scale(lval) for f in base_monic]]
    cofactors = [_cofactor_products(levels[0])]
    degrees = [len(f) - 1 for f in base_monic]

    def solve(level: int, rhs: Poly) -> list[Poly]:
        # solve sum_i d_i * prod_{j != i} levels[level][j] = rhs, modulo the
        # per-variable truncation bounds, with deg_x d_i < degrees[i]
        if level == 0:
            dense = _dense_in(rhs, x)
            out = []
            for i in range(r):
                d = fq_rem(fq_mul(dense, inverses[i]), base_monic[i])
                out.append(_poly_from_dense(ring, x, d))
            return out
        y = params[level - 1]
        bound = bounds[y]
        sol = [ring.zero() for _ in range(r)]
        resid = rhs
        yvar = ring.var(y)
        for order in range(bound + 1):
            if resid.is_zero():
                break
            comp = _coeff_in(resid, y, order)
            if comp.is_zero():
                continue
            part = solve(level - 1, comp)
            ypow = yvar ** order
            for i in range(r):
                if part[i].is_zero():
                    continue
                term = part[i] * ypow
                sol[i] = sol[i] + term
                resid = resid - term * cofactors[level][i]
            resid = _truncate(resid, bounds)
        return sol

    current = list(levels[0])
    for stage, y in enumerate(params, start=1):
        later_zero = {v: ring.zero() for v in params[stage:]}
        target = target_full.subst(later_zero) if later_zero else target_full
        lc_stage = lead_sh.subst(later_zero) if later_zero else lead_sh
        # force the known leading coefficient before lifting this variable
        for i in range(r):
            ni = degrees[i]
            xpow = ring.var(x) ** ni
            current[i] = current[i] - _coeff_in(current[i], x, ni) * xpow \
                + lc_stage * xpow
        yvar = ring.var(y)
        depth = int(target.degree_in(y)) if target.degree_in(y) >= 0 else 0
        for order in range(1, depth + 1):
            prod = current[0]
            for f in current[1:]:
                prod = _truncate(prod * f, bounds)
            err = target - prod
            if err.is_zero():
                break
            comp = _coeff_in(err, y, order)
            if comp.is_zero():
                continue
            delta = solve(stage - 1, comp)
            ypow = yvar ** order
            for i in range(r):
                if not delta[i].is_zero():
                    current[i] = current[i] + delta[i] * ypow
        levels.append(list(current))
        cofactors.append(_cofactor_products(current))

    # recombination: subsets of lifted factors, primitive part, trial division
    remaining = P
    found: list[Poly] = []
    indices = list(range(r))
    size = 1
    while 2 * size <= len(indices):
        advanced = True
        while advanced:
            advanced = False
            for combo in itertools.combinations(indices, size):
                cand = current[combo[0]]
                for i in combo[1:]:
                    cand = _truncate(cand * current[i], bounds)
                cand = cand.subst(unshift)
                cand = _primitive_in(cand, x)
                if cand.is_constant():
                    continue
                quo = exact_div(remaining, cand)
                if quo is not None:
                    found.append(cand)
                    remaining = quo
                    indices = [i for i in indices if i not in combo]
                    advanced = True
                    break
            if 2 * size > len(indices):
                break
        size += 1
    if not remaining.is_constant():
        found.append(remaining)
    return found


def _cofactor_products(factors):
    r = len(factors)
    out = []
    for i in range(r):
        prod = None
        for j in range(r):
            if j != i:
                prod = factors[j] if prod is None else prod * factors[j]
        out.append(prod if prod is not None else factors[0].ring.one())
    return out


def _primitive_in(p: Poly, x: str) -> Poly:
    """p divided by its content with respect to x, normalized."""
    cont = _content_wrt(p, x)
    return exact_div(p, cont).normalized()


# ---------------------------------------------------------------------------
# public factorization entry points
# ---------------------------------------------------------------------------


def factor_uni(p: Poly) -> Factorization:
    """Irreducible factorization of a univariate polynomial over Q."""
    if p.is_zero() or p.is_constant():
        raise ConstantInputError("factorization needs a nonconstant input")
    present = p.vars_present()
    if len(present) != 1:
        raise ValueError("factor_uni needs a polynomial in one variable")
    return _factor(p)


def factor_multi(p: Poly) -> Factorization:
    """Irreducible factorization over Q in any number of variables."""
    if p.is_zero() or p.is_constant():
        raise ConstantInputError("factorization needs a nonconstant input")
    return _factor(p)


def _factor(p: Poly) -> Factorization:
    ring = p.ring
    work = p.normalized()
    pairs: list[tuple[Poly, int]] = []
    # monomial content: each variable dividing every term
    for i, v in enumerate(ring.vars):
        e = min((m[i] for m in work.terms), default=0)
        if e > 0:
            pairs.append((ring.var(v), e))
            work = exact_div(work, ring.var(v) ** e)
    if not work.is_constant():
        for part, mult in squarefree(work):
            for f in _factor_squarefree_poly(part):
                pairs.append((f, mult))
    merged: dict[Poly, int] = {}
    for f, m in pairs:
        merged[f] = merged.get(f, 0) + m
    factors = sorted(merged.items(),
                     key=lambda fm: (fm[0].total_degree(),
                                     sorted(fm[0].terms.items())))
    product = ring.one()
    for f, m in factors:
        product = product * f ** m
    unit = exact_div(p, product)
    if unit is None or not unit.is_constant():
        raise ArithmeticError("internal factorization inconsistency")
    return Factorization(unit.constant_value(), tuple(factors))
