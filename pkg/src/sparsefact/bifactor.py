"""Factorization of bivariate polynomials over the integers.

The built-in method evaluates t at a small anchor, factors the univariate
image over Z, lifts the monic image factors in powers of (t - anchor)
modulo a prime larger than twice a factor-coefficient bound, and recombines
lifted factors with the leading coefficient of F imposed.  Every candidate
is confirmed by exact division in Z[x, t].
"""

from __future__ import annotations

import logging
import random
import shlex
import subprocess
from dataclasses import dataclass
from itertools import combinations

import gmpy2

from . import _gf, _kron, dense
from .errors import BackendError, NotSquarefreeError, StructuralError
from .poly import BiPoly, to_text_bi
from .unifactor import factor_univariate

log = logging.getLogger(__name__)

MAX_ANCHORS = 5
SQUAREFREE_TRIALS = 8
DEFAULT_TIMEOUT = 60.0


@dataclass(frozen=True)
class BiFactorization:
    unit: int
    content_t: BiPoly
    factors: tuple

    def expand(self) -> BiPoly:
        out = self.content_t * self.unit
        for f in self.factors:
            out = out * f
        return out


# ---------------------------------------------------------------------------
# dense bivariate helpers: rows[i] is the coefficient of x**i, a dense t-list

def _trim_rows(rows):
    rows = [dense.trim(r) for r in rows]
    while rows and not rows[-1]:
        rows.pop()
    return rows


def _deg_t(rows):
    return max((len(r) for r in rows), default=0) - 1


def _flatten(rows, stride):
    flat = [0] * (len(rows) * stride)
    for i, r in enumerate(rows):
        flat[i * stride:i * stride + len(r)] = r
    return flat


def _rows_mul(a, b):
    stride = _deg_t(a) + _deg_t(b) + 1
    prod = _kron.mul_dense(_flatten(a, stride), _flatten(b, stride))
    return _trim_rows([prod[i:i + stride] for i in range(0, len(prod), stride)])


def _height(rows):
    return max((abs(c) for r in rows for c in r), default=0)


def _norm2_ceil(rows):
    return dense.norm2_ceil([c for r in rows for c in r])


def _rows_exact_quo(a, b):
    """a / b in Z[x, t] when exact, else None."""
    dxa, dxb = len(a) - 1, len(b) - 1
    dta, dtb = _deg_t(a), _deg_t(b)
    if dxb > dxa or dtb > dta:
        return None
    stride = dta + 1
    bound = (_norm2_ceil(a) << (dxa + dta)) + _height(a) + _height(b)
    width = _kron.slot_width(bound)
    num = gmpy2.mpz(_kron.pack(_flatten(a, stride), width))
    den = gmpy2.mpz(_kron.pack(_flatten(b, stride), width))
    q, r = gmpy2.f_divmod(num, den)
    if r:
        return None
    count = (dxa - dxb + 1) * stride
    try:
        flat = _kron.unpack(q, count, width)
    except OverflowError:
        return None
    quo = _trim_rows([flat[i:i + stride] for i in range(0, count, stride)])
    if _deg_t(quo) > dta - dtb:
        return None
    l1 = sum(abs(c) for r in b for c in r)
    if _height(quo) * l1 >= 1 << (width - 1):
        # slots could have overflowed; confirm by multiplying back
        if _rows_mul(quo, b) != _trim_rows(a):
            return None
    return quo


def _rows_content(rows):
    g = []
    for r in sorted((r for r in rows if r), key=len):
        g = dense.gcd(g, r)
        if len(g) == 1 and abs(g[0]) == 1:
            break
    return g


def _rows_evaluate(rows, alpha):
    return dense.trim([dense.evaluate(r, alpha) for r in rows])


def _to_bipoly(rows):
    return BiPoly.from_rows(rows)


# ---------------------------------------------------------------------------
# square-freeness and anchors

def _is_squarefree_modular(rows, rng):
    """True if some image F(x, a) mod p keeps its degree and is square-free.

    A square factor of F survives every such image, so True is a proof;
    False after several random trials means F is almost surely not square-free.
    """
    if len(rows) <= 2:
        return True
    p = int(gmpy2.next_prime((1 << 61) + rng.randrange(1 << 40)))
    for _ in range(SQUAREFREE_TRIALS):
        a = rng.randrange(p)
        img = [dense.evaluate(r, a) % p for r in rows]
        if img[-1] and len(_gf.gcd(img, _gf.derivative(img, p), p)) == 1:
            return True
        p = int(gmpy2.next_prime(p))
    return False


def _anchor_candidates():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def choose_anchor(F: BiPoly, start: int = 0) -> int:
    """Smallest |alpha| with lc_x(F)(alpha) != 0 and F(x, alpha) square-free."""
    rows = F.rows()
    return _choose_anchor_rows(rows, skip=start)


def _choose_anchor_rows(rows, skip=0):
    from .unifactor import squarefree_check

    limit = 100 * max(1, len(rows) - 1 + _deg_t(rows))
    seen = 0
    for alpha in _anchor_candidates():
        if abs(alpha) > limit:
            break
        img = _rows_evaluate(rows, alpha)
        if len(img) != len(rows):
            continue
        if not squarefree_check(img):
            continue
        if seen < skip:
            seen += 1
            continue
        return alpha
    raise StructuralError(f"no admissible anchor with |alpha| <= {limit}")


# ---------------------------------------------------------------------------
# t-adic lifting modulo a big prime

def _series_inverse(a, n, q):
    """Inverse of a univariate power series a (a[0] invertible) modulo s**n."""
    inv0 = pow(a[0], -1, q)
    out = [inv0] + [0] * (n - 1)
    for m in range(1, n):
        acc = 0
        for k in range(1, min(m, len(a) - 1) + 1):
            acc += a[k] * out[m - k]
        out[m] = -acc * inv0 % q
    return out


def _lift_pair(target, g0, h0, n, q):
    """Monic factorization target = g*h mod (s**n, q) from target[0] = g0*h0.

    ``target`` lists x-polynomials by power of s; the result is two such lists.
    """
    dg, dh = len(g0) - 1, len(h0) - 1
    width = _kron.slot_width((q - 1) ** 2 * (min(dg, dh) + 1) * n)
    u, _, one = _gf.gcdex(h0, g0, q)
    if one != [1]:
        raise StructuralError("image factors are not coprime modulo the lifting prime")
    g = [g0]
    h = [h0]
    gp = [gmpy2.mpz(_kron.pack_unsigned(g0, width))]
    hp = [gmpy2.mpz(_kron.pack_unsigned(h0, width))]
    nslots = dg + dh + 1
    for m in range(1, n):
        acc = gmpy2.mpz(0)
        for a in range(1, m):
            acc += gp[a] * hp[m - a]
        e = list(target[m]) if m < len(target) else []
        if acc:
            prod = _kron.unpack_unsigned(acc, nslots, width)
            e = e + [0] * (nslots - len(e))
            e = [(x - y) % q for x, y in zip(e, prod)]
        e = _gf.trim([x % q for x in e])
        if e:
            sigma = _gf.rem(_gf.mul(e, u, q), g0, q)
            tau, r = _gf.divmod_(_gf.sub(e, _gf.mul(sigma, h0, q), q), g0, q)
            if r:
                raise StructuralError("lifting equation has no solution")
        else:
            sigma, tau = [], []
        g.append(sigma)
        h.append(tau)
        gp.append(gmpy2.mpz(_kron.pack_unsigned(sigma, width)) if sigma else gmpy2.mpz(0))
        hp.append(gmpy2.mpz(_kron.pack_unsigned(tau, width)) if tau else gmpy2.mpz(0))
    return g, h


def _series_product(series_list, n, q):
    acc = [[1]]
    for s in series_list:
        acc = _series_mul(acc, s, n, q)
    return acc


def _series_mul(a, b, n, q):
    dxa = max((len(c) for c in a), default=1) - 1
    dxb = max((len(c) for c in b), default=1) - 1
    stride = dxa + dxb + 1
    width = _kron.slot_width((q - 1) ** 2 * (min(dxa, dxb) + 1) * n)
    pa = _kron.pack_unsigned(_flatten(a, stride), width)
    pb = _kron.pack_unsigned(_flatten(b, stride), width)
    prod = gmpy2.mpz(pa) * gmpy2.mpz(pb)
    # keep powers of s below n
    prod = gmpy2.f_mod_2exp(prod, n * stride * width)
    flat = _kron.unpack_unsigned(prod, n * stride, width)
    return [_gf.trim([c % q for c in flat[i:i + stride]]) for i in range(0, n * stride, stride)]


def _lift_all(target, images, n, q):
    if len(images) == 1:
        return [target]
    half = len(images) // 2
    g0 = [1]
    for g in images[:half]:
        g0 = _gf.mul(g0, g, q)
    h0 = [1]
    for h in images[half:]:
        h0 = _gf.mul(h0, h, q)
    g, h = _lift_pair(target, g0, h0, n, q)
    return _lift_all(g, images[:half], n, q) + _lift_all(h, images[half:], n, q)


def _pick_prime(bound, lc_at_anchor, images):
    q = int(gmpy2.next_prime(2 * bound + 1))
    while True:
        ok = lc_at_anchor % q != 0 and all(g[-1] % q for g in images)
        if ok:
            red = [_gf.reduce(list(g), q) for g in images]
            for a, b in combinations(red, 2):
                if len(_gf.gcd(a, b, q)) != 1:
                    ok = False
                    break
        if ok:
            return q
        q = int(gmpy2.next_prime(q))


def _lift_and_recombine(rows, alpha, images):
    dx = len(rows) - 1
    dt = _deg_t(rows)
    n = dt + 1
    bound = _norm2_ceil(rows) << (dx + dt)
    lc_at = dense.evaluate(rows[-1], alpha)
    q = _pick_prime(bound, lc_at, images)

    shifted = [[c % q for c in dense.taylor_shift(r, alpha)] + [0] * (n - len(r)) for r in rows]
    lc_series = shifted[dx]
    inv_lc = _series_inverse(lc_series, n, q)
    # monic target, indexed by power of s
    cols = [_kron.mul_dense_mod(r, inv_lc, q)[:n] for r in shifted]
    target = [_gf.trim([cols[i][m] if m < len(cols[i]) else 0 for i in range(dx + 1)]) for m in range(n)]
    monic_images = [_gf.monic(_gf.reduce(list(g), q), q) for g in images]
    lifted = _lift_all(target, monic_images, n, q)

    lc_poly = _t_series(rows[-1], alpha, q, n)
    factors = []
    remaining = list(range(len(lifted)))
    current = rows
    size = 1
    while 2 * size <= len(remaining):
        for subset in combinations(remaining, size):
            cand = _series_product([lc_poly] + [lifted[i] for i in subset], n, q)
            cand_rows = _series_to_rows(cand, alpha, q)
            cont = _rows_content(cand_rows)
            if not cont:
                continue
            cand_rows = _trim_rows([dense.exact_quo(r, cont) if r else [] for r in cand_rows])
            if not cand_rows or len(cand_rows) < 2:
                continue
            if cand_rows[-1][-1] < 0:
                cand_rows = [[-c for c in r] for r in cand_rows]
            quo = _rows_exact_quo(current, cand_rows)
            if quo is None:
                continue
            factors.append(cand_rows)
            current = quo
            remaining = [i for i in remaining if i not in subset]
            lc_poly = _t_series(current[-1], alpha, q, n)
            break
        else:
            size += 1
    if len(current) > 1:
        if current[-1][-1] < 0:
            current = [[-c for c in r] for r in current]
        factors.append(current)
    return factors


def _t_series(poly_t, alpha, q, n):
    """A polynomial in t as a power series in s = t - alpha (x-degree 0)."""
    shifted = dense.taylor_shift(poly_t, alpha)
    return [[c % q] if c % q else [] for c in shifted[:n]]


def _series_to_rows(series, alpha, q):
    dx = max((len(c) for c in series), default=0) - 1
    rows = []
    half = q // 2
    for i in range(dx + 1):
        col = [c[i] if i < len(c) else 0 for c in series]
        col = dense.taylor_shift(col, -alpha)
        rows.append([(v % q) - q if v % q > half else v % q for v in col])
    return _trim_rows(rows)


# ---------------------------------------------------------------------------
# drivers

def _primitive_factor(rows, rng):
    """Irreducible factors of F primitive in x with deg_x >= 1."""
    if len(rows) == 2:
        return [rows]
    if _deg_t(rows) == 0:
        _, _, facs = factor_univariate([r[0] if r else 0 for r in rows], rng)
        if any(m != 1 for _, m in facs):
            raise NotSquarefreeError("bivariate input is not square-free")
        return [[[c] if c else [] for c in g] for g, _ in facs]
    if not _is_squarefree_modular(rows, rng):
        raise NotSquarefreeError("bivariate input is not square-free")
    last_error = None
    for attempt in range(MAX_ANCHORS):
        alpha = _choose_anchor_rows(rows, skip=attempt)
        image = _rows_evaluate(rows, alpha)
        _, _, facs = factor_univariate(image, rng)
        if len(facs) == 1:
            return [rows]
        try:
            return _lift_and_recombine(rows, alpha, [g for g, _ in facs])
        except StructuralError as exc:
            last_error = exc
            log.debug("anchor %d failed: %s", alpha, exc)
    raise StructuralError(f"bivariate lifting failed for {MAX_ANCHORS} anchors: {last_error}")


def _sort_key(f: BiPoly):
    return (f.deg_x, f.deg_t, len(f.terms), f.terms)


def factor_bivariate(F: BiPoly, rng=None) -> BiFactorization:
    """Factor F in Z[x, t] into unit, t-content and irreducible primitive factors."""
    if F.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = rng or random.Random(0)
    unit = 1 if F.terms[0][2] > 0 else -1
    rows = _trim_rows(F.rows())
    cont = _rows_content(rows)
    if cont[-1] < 0:
        cont = [-c for c in cont]
    prim = _trim_rows([dense.exact_quo(r, cont) if r else [] for r in rows])
    if prim and prim[-1][-1] < 0:
        prim = [[-c for c in r] for r in prim]
    content_t = BiPoly.from_t(cont)
    factors = []
    if len(prim) > 1:
        factors = [_to_bipoly(f) for f in _primitive_factor(prim, rng)]
    factors.sort(key=_sort_key)
    result = BiFactorization(unit, content_t, tuple(factors))
    if result.expand() != F:
        raise AssertionError("bivariate factorization does not reproduce its input")
    return result


def _parse_backend_output(text, F):
    from .textio import parse_bivariate

    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("backend produced no output")
    head = parse_bivariate(lines[0])
    if head.is_zero() or head.deg_x > 0:
        raise ValueError("first backend line must be a nonzero t-only content term")
    unit = 1 if head.terms[0][2] > 0 else -1
    content_t = head * unit
    factors = []
    for ln in lines[1:]:
        f = parse_bivariate(ln)
        if f.deg_x < 1:
            raise ValueError(f"backend factor {ln!r} does not involve x")
        if f.terms[0][2] < 0:
            f = -f
            unit = -unit
        factors.append(f)
    factors.sort(key=_sort_key)
    result = BiFactorization(unit, content_t, tuple(factors))
    if result.expand() != F:
        raise ValueError("backend factorization does not multiply back to the input")
    return result


def backend_request(F: BiPoly) -> str:
    return "factor_bivariate x t\n" + to_text_bi(F) + "\n"


def factor_bivariate_external(F: BiPoly, cmd: str, timeout: float = DEFAULT_TIMEOUT, rng=None):
    """Delegate to an external program; verified by multiplication.

    On any failure a BackendError is raised whose ``fallback`` attribute holds
    the built-in factorization.
    """
    try:
        proc = subprocess.run(shlex.split(cmd), input=backend_request(F), capture_output=True,
                              text=True, timeout=timeout)
        if proc.returncode != 0:
            raise RuntimeError(f"backend exited with status {proc.returncode}: {proc.stderr.strip()}")
        return _parse_backend_output(proc.stdout, F)
    except (OSError, RuntimeError, ValueError, subprocess.TimeoutExpired) as exc:
        fallback = factor_bivariate(F, rng)
        raise BackendError(f"external backend failed: {exc}", fallback) from exc
