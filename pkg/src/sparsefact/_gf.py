"""Arithmetic in (Z/mZ)[x] on residue lists, lowest degree first.

Division and gcd need an invertible leading coefficient, so the modulus is
a prime for everything except the Hensel routines that only divide by monic
polynomials.
"""

from . import _kron


def trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def reduce(a, m):
    return trim([c % m for c in a])


def add(a, b, m):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % m
    return trim(out)


def sub(a, b, m):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % m
    return trim(out)


def scale(a, c, m):
    c %= m
    return trim([x * c % m for x in a]) if c else []


def mul(a, b, m):
    return trim(_kron.mul_dense_mod(a, b, m))


def inv(c, m):
    return pow(c, -1, m)


def monic(a, m):
    if not a:
        return []
    return scale(a, inv(a[-1], m), m)


def divmod_(a, b, m):
    """Division by b whose leading coefficient is a unit mod m."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], trim(rem)
    ilc = inv(b[-1], m)
    q = [0] * (len(rem) - db)
    for i in range(len(rem) - 1 - db, -1, -1):
        c = rem[i + db] * ilc % m
        q[i] = c
        if c:
            for j in range(db + 1):
                rem[i + j] = (rem[i + j] - c * b[j]) % m
    return trim(q), trim(rem[:db])


def rem(a, b, m):
    return divmod_(a, b, m)[1]


def quo(a, b, m):
    return divmod_(a, b, m)[0]


def gcd(a, b, m):
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, rem(a, b, m)
    return monic(a, m)


def gcdex(a, b, m):
    """Return (s, t, g) with s*a + t*b = g = gcd(a, b), g monic."""
    r0, r1 = trim(list(a)), trim(list(b))
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1, m)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, m), m)
        t0, t1 = t1, sub(t0, mul(q, t1, m), m)
    if not r0:
        return [], [], []
    c = inv(r0[-1], m)
    return scale(s0, c, m), scale(t0, c, m), scale(r0, c, m)


def derivative(a, m):
    return trim([i * a[i] % m for i in range(1, len(a))])


def pow_mod(a, n, f, m):
    result = [1]
    base = rem(a, f, m)
    while n:
        if n & 1:
            result = rem(mul(result, base, m), f, m)
        n >>= 1
        if n:
            base = rem(mul(base, base, m), f, m)
    return result


def sqf_list(f, p):
    """Square-free decomposition of a monic polynomial over GF(p)."""
    factors = []
    n = 1
    f = list(f)
    while True:
        done = False
        df = derivative(f, p)
        if df:
            g = gcd(f, df, p)
            h = quo(f, g, p)
            i = 1
            while h != [1]:
                G = gcd(g, h, p)
                H = quo(h, G, p)
                if len(H) > 1:
                    factors.append((H, i * n))
                g, h, i = quo(g, G, p), G, i + 1
            if g == [1]:
                done = True
            else:
                f = g
        if done:
            return factors
        # f is a p-th power: take the p-th root coefficient-wise
        f = [f[i * p] for i in range((len(f) - 1) // p + 1)]
        n *= p


def ddf(f, p):
    """Distinct-degree factorization of a monic square-free polynomial."""
    out = []
    x = [0, 1]
    h = x
    i = 1
    while 2 * i <= len(f) - 1:
        h = pow_mod(h, p, f, p)
        g = gcd(f, sub(h, x, p), p)
        if g != [1]:
            out.append((g, i))
            f = quo(f, g, p)
            h = rem(h, f, p)
        i += 1
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def edf(f, d, p, rng):
    """Split a product of irreducibles of degree d (Cantor-Zassenhaus, p odd)."""
    if len(f) - 1 <= d:
        return [f]
    n = len(f) - 1
    e = (p ** d - 1) // 2
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        b = sub(pow_mod(a, e, f, p), [1], p)
        g = gcd(f, b, p)
        if 1 < len(g) < len(f):
            break
    return edf(g, d, p, rng) + edf(quo(f, g, p), d, p, rng)
