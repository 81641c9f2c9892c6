"""Dense univariate integer polynomials (lists, lowest degree first).

Helpers shared by the univariate and bivariate factorizers: exact division,
content, Taylor shifts and a heuristic gcd with a primitive-PRS fallback.
"""

import math

import gmpy2

from . import _kron
from .errors import HeuristicGCDFailed
from .poly import HEU_GCD_MAX_RETRIES


def trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def degree(a):
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def sub(a, b):
    return add(a, [-c for c in b])


def scale(a, c):
    return [x * c for x in a] if c else []


mul = _kron.mul_dense


def derivative(a):
    return trim([i * a[i] for i in range(1, len(a))])


def evaluate(a, z):
    acc = 0
    for c in reversed(a):
        acc = acc * z + c
    return acc


def content(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def primitive(a):
    """Primitive part with positive leading coefficient."""
    a = trim(a)
    if not a:
        return []
    g = content(a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def height(a):
    return max((abs(c) for c in a), default=0)


def norm2_ceil(a):
    return math.isqrt(sum(c * c for c in a)) + 1


def low_zeros(a):
    k = 0
    while k < len(a) and not a[k]:
        k += 1
    return k


def taylor_shift(a, alpha):
    """Coefficients of a(y + alpha) in y."""
    a = list(a)
    if not alpha:
        return a
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += alpha * a[j + 1]
    return a


def _naive_divmod_exact(a, b):
    n, m = len(a) - 1, len(b) - 1
    rem = list(a)
    lb = b[-1]
    q = [0] * (n - m + 1)
    for i in range(n - m, -1, -1):
        c, r = divmod(rem[i + m], lb)
        if r:
            return None
        q[i] = c
        if c:
            for j in range(m + 1):
                rem[i + j] -= c * b[j]
    if any(rem[:m]):
        return None
    return q


def exact_quo(a, b):
    """Quotient a / b in Z[x] if exact, else None."""
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return []
    if len(a) < len(b):
        return None
    if len(a) * len(b) <= 400 or len(b) == 1:
        return _naive_divmod_exact(a, b)
    # any quotient divides a, so it obeys a Mignotte-type bound
    bound = (norm2_ceil(a) << (len(a) - 1)) + height(a) + height(b)
    width = _kron.slot_width(bound)
    num = gmpy2.mpz(_kron.pack(a, width))
    den = gmpy2.mpz(_kron.pack(b, width))
    q, r = gmpy2.f_divmod(num, den)
    if r:
        return None
    try:
        quo = _kron.unpack(q, len(a) - len(b) + 1, width)
    except OverflowError:
        return None
    if mul(quo, b) != a:
        return None
    return quo


def _heu_candidates(f, g):
    hf, hg = height(f), height(g)
    z = 2 * min(hf, hg) + 2
    for _ in range(HEU_GCD_MAX_RETRIES):
        ff, gg = evaluate(f, z), evaluate(g, z)
        if ff and gg:
            h = math.gcd(ff, gg)
            yield _digits(h, z)
            yield ("cof", _digits(ff // h, z), f, g)
            yield ("cof", _digits(gg // h, z), g, f)
        z *= 2


def _digits(v, z):
    half = z // 2
    out = []
    while v:
        r = v % z
        if r > half:
            r -= z
        out.append(r)
        v = (v - r) // z
    return out


def heu_gcd(f, g):
    """gcd of primitive polynomials with nonzero constant terms, or HeuristicGCDFailed."""
    for cand in _heu_candidates(f, g):
        if isinstance(cand, tuple):
            _, cof, src, other = cand
            cof = primitive(cof)
            if not cof:
                continue
            h = exact_quo(src, cof)
            if h is None:
                continue
            h = primitive(h)
            if h and exact_quo(other, h) is not None:
                return h
            continue
        h = primitive(cand)
        if h and exact_quo(f, h) is not None and exact_quo(g, h) is not None:
            return h
    raise HeuristicGCDFailed("univariate heuristic gcd failed")


def _pseudo_rem(a, b):
    rem = list(a)
    m = len(b) - 1
    lb = b[-1]
    while len(rem) - 1 >= m and rem:
        c = rem[-1]
        shift = len(rem) - 1 - m
        rem = [x * lb for x in rem]
        for j in range(m + 1):
            rem[shift + j] -= c * b[j]
        rem = trim(rem)
    return rem


def prs_gcd(f, g):
    """Primitive polynomial remainder sequence gcd (slow but always succeeds)."""
    a, b = primitive(f), primitive(g)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, primitive(r)
    return primitive(a)


def gcd(f, g):
    """gcd over Z[x] with positive leading coefficient."""
    f, g = trim(f), trim(g)
    if not f:
        return primitive(g) if not g else [c * (1 if g[-1] > 0 else -1) for c in g]
    if not g:
        return [c * (1 if f[-1] > 0 else -1) for c in f]
    c = math.gcd(content(f), content(g))
    k = min(low_zeros(f), low_zeros(g))
    pf = primitive(f[low_zeros(f):])
    pg = primitive(g[low_zeros(g):])
    if len(pf) == 1 or len(pg) == 1:
        core = [1]
    else:
        try:
            core = heu_gcd(pf, pg)
        except HeuristicGCDFailed:
            core = prs_gcd(pf, pg)
    return [0] * k + [x * c for x in core]
