"""Factorization of univariate polynomials over the integers.

Polynomials are plain ``list[int]`` coefficient lists, lowest degree first.
The pipeline is the classical one: content and square-free part, a small
prime with a square-free image, Cantor-Zassenhaus modulo that prime,
multifactor Hensel lifting past the Mignotte bound, then subset
recombination with trailing-coefficient pruning.
"""

from __future__ import annotations

import math
import random
from itertools import combinations

import gmpy2

from . import _gf, dense
from .errors import StructuralError

FIRST_PRIME = 13
PRIME_CANDIDATES = 3


def squarefree_check(f) -> bool:
    """True iff f has no repeated factor over Q."""
    f = dense.trim(f)
    if not f:
        raise ValueError("zero polynomial")
    if len(f) <= 2:
        return True
    return len(dense.gcd(f, dense.derivative(f))) == 1


def factor_mod_p(f, p, rng=None):
    """Irreducible monic factors of f over GF(p) with multiplicities.

    ``lc(f) * prod(g**k)`` equals ``f`` modulo p.
    """
    if p == 2 or not gmpy2.is_prime(p):
        raise StructuralError(f"modulus must be an odd prime, got {p}")
    rng = rng or random.Random(0)
    f = _gf.reduce(list(f), p)
    if not f:
        raise ValueError("zero polynomial modulo p")
    f = _gf.monic(f, p)
    if len(f) == 1:
        return []
    out = []
    for g, k in _gf.sqf_list(f, p):
        for h, d in _gf.ddf(g, p):
            for irr in _gf.edf(h, d, p, rng):
                out.append((irr, k))
    out.sort(key=lambda fk: (len(fk[0]), fk[0][::-1], fk[1]))
    return out


def _hensel_step(m, f, g, h, s, t):
    """Lift f = g*h (mod m) and s*g + t*h = 1 (mod m) to modulus m**2; h monic."""
    M = m * m
    e = _gf.sub(_gf.reduce(list(f), M), _gf.mul(g, h, M), M)
    q, r = _gf.divmod_(_gf.mul(s, e, M), h, M)
    g2 = _gf.add(_gf.add(g, _gf.mul(t, e, M), M), _gf.mul(q, g, M), M)
    h2 = _gf.add(h, r, M)
    b = _gf.sub(_gf.add(_gf.mul(s, g2, M), _gf.mul(t, h2, M), M), [1], M)
    c, d = _gf.divmod_(_gf.mul(s, b, M), h2, M)
    s2 = _gf.sub(s, d, M)
    t2 = _gf.sub(_gf.sub(t, _gf.mul(t, b, M), M), _gf.mul(c, g2, M), M)
    return g2, h2, s2, t2


def _lift(f, flist, p, k):
    pk = p ** k
    if len(flist) == 1:
        return [_gf.monic(_gf.reduce(list(f), pk), pk)]
    half = len(flist) // 2
    g = [f[-1] % p]
    for fi in flist[:half]:
        g = _gf.mul(g, fi, p)
    h = [1]
    for fi in flist[half:]:
        h = _gf.mul(h, fi, p)
    s, t, one = _gf.gcdex(g, h, p)
    if one != [1]:
        raise StructuralError("modular factors are not pairwise coprime")
    m = p
    while m < pk:
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m *= m
    g, h = _gf.reduce(g, pk), _gf.reduce(h, pk)
    return _lift(g, flist[:half], p, k) + _lift(h, flist[half:], p, k)


def hensel_lift_uni(f, factors, p, k):
    """Lift monic factors of f modulo p to monic factors modulo p**k.

    Requires f square-free mod p, p not dividing lc(f), and
    ``lc(f) * prod(factors) == f (mod p)``.
    """
    f = dense.trim(f)
    if f[-1] % p == 0:
        raise StructuralError("prime divides the leading coefficient")
    check = [f[-1] % p]
    for g in factors:
        if _gf.reduce(list(g), p)[-1:] != [1]:
            raise StructuralError("factors must be monic modulo p")
        check = _gf.mul(check, g, p)
    if check != _gf.reduce(list(f), p):
        raise StructuralError("factors do not multiply to f modulo p")
    if len(factors) == 0:
        return []
    return _lift(f, [list(g) for g in factors], p, k)


def mignotte_bound(f) -> int:
    """Bound on |coefficient| of any integer factor of f: 2**deg * ||f||_2."""
    f = dense.trim(f)
    if not f:
        raise ValueError("zero polynomial")
    return dense.norm2_ceil(f) << (len(f) - 1)


def _symmetric(a, m):
    half = m // 2
    return [c - m if c > half else c for c in a]


def _good_primes(f):
    lc = f[-1]
    df = dense.derivative(f)
    p = FIRST_PRIME
    while True:
        if lc % p:
            fp = _gf.reduce(list(f), p)
            if len(_gf.gcd(fp, _gf.reduce(list(df), p), p)) == 1:
                yield p
        p = int(gmpy2.next_prime(p))


def _zassenhaus(f, rng, prime=None):
    """Irreducible factors of a primitive square-free f with f(0) != 0, lc > 0."""
    n = len(f) - 1
    if n == 1:
        return [f]
    if prime is not None:
        choices = [(prime, factor_mod_p(f, prime, rng))]
    else:
        choices = []
        for p in _good_primes(f):
            choices.append((p, factor_mod_p(f, p, rng)))
            if len(choices) >= PRIME_CANDIDATES or len(choices[-1][1]) == 1:
                break
    p, modular = min(choices, key=lambda c: len(c[1]))
    if any(k != 1 for _, k in modular):
        raise StructuralError(f"image modulo {p} is not square-free")
    if len(modular) == 1:
        return [f]
    bound = 2 * mignotte_bound(f) * abs(f[-1])
    k = 1
    pk = p
    while pk <= bound:
        k += 1
        pk *= p
    lifted = hensel_lift_uni(f, [g for g, _ in modular], p, k)
    return _recombine(f, lifted, pk)


def _recombine(f, lifted, pk):
    found = []
    remaining = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(remaining):
        lc = f[-1]
        tail = lc * f[0]
        for subset in combinations(remaining, size):
            t = lc
            for i in subset:
                t = t * lifted[i][0] % pk
            t = _symmetric([t], pk)[0]
            if t == 0 or tail % t:
                continue
            g = [lc % pk]
            for i in subset:
                g = _gf.mul(g, lifted[i], pk)
            g = dense.primitive(_symmetric(g, pk))
            q = dense.exact_quo(f, g)
            if q is None:
                continue
            found.append(g)
            f = q
            remaining = [i for i in remaining if i not in subset]
            break
        else:
            size += 1
    found.append(dense.primitive(f))
    return found


def _sort_key(g):
    return (len(g), [abs(c) for c in reversed(g)], list(reversed(g)))


def factor_univariate(f, rng=None, prime=None):
    """Complete factorization over Z.

    Returns ``(unit, content, [(factor, multiplicity), ...])`` with
    ``unit * content * prod(factor**multiplicity) == f``; factors are
    primitive with positive leading coefficient and irreducible over Q.
    """
    f = dense.trim(f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    rng = rng or random.Random(0)
    unit = 1 if f[-1] > 0 else -1
    cont = dense.content(f)
    g = [c // (unit * cont) for c in f]
    if len(g) == 1:
        return unit, cont, []
    result = []
    k = dense.low_zeros(g)
    if k:
        result.append(([0, 1], k))
        g = g[k:]
    if len(g) > 1:
        sqf = g
        if len(g) > 2:
            common = dense.gcd(g, dense.derivative(g))
            if len(common) > 1:
                sqf = dense.exact_quo(g, common)
        for h in _zassenhaus(sqf, rng, prime):
            mult = 0
            while True:
                q = dense.exact_quo(g, h)
                if q is None:
                    break
                g = q
                mult += 1
            result.append((h, mult))
    result.sort(key=lambda hk: _sort_key(hk[0]))
    check = [unit * cont]
    for h, m in result:
        for _ in range(m):
            check = dense.mul(check, h)
    if check != f:
        raise AssertionError("univariate factorization does not reproduce its input")
    return unit, cont, result
