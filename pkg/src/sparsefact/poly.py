"""Sparse polynomials over the integers.

``MultiPoly`` is a multivariate polynomial stored as a tuple of
``(exponents, coefficient)`` pairs in strictly descending lexicographic
order of the exponent tuples.  ``BiPoly`` is the bivariate image in
``(x, t)`` produced by :func:`weighted_substitute`.

Both types are immutable; all operations return new objects.
"""

from __future__ import annotations

import math
from heapq import heapify, heappop, heappush, heapreplace
from operator import itemgetter
from typing import Iterable, Sequence

from . import _kron
from .errors import HeuristicGCDFailed, NotDivisible, NotIntegral, StructuralError

EXPONENT_LIMIT = 1 << 31
HEU_GCD_MAX_RETRIES = 6

_first = itemgetter(0)


def _canonical(acc):
    return tuple(sorted(((e, c) for e, c in acc.items() if c), key=_first, reverse=True))


class MultiPoly:
    """Sparse multivariate polynomial with integer coefficients."""

    __slots__ = ("variables", "terms", "_dict")

    def __init__(self, variables: Sequence[str], terms: Iterable = ()):
        self.variables = tuple(variables)
        n = len(self.variables)
        acc = {}
        for e, c in terms:
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise StructuralError(f"exponent vector {e} does not match {n} variables")
            if any(x < 0 for x in e):
                raise StructuralError(f"negative exponent in {e}")
            acc[e] = acc.get(e, 0) + int(c)
        self.terms = _canonical(acc)
        self._dict = None

    @classmethod
    def _make(cls, variables, terms):
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._dict = None
        return p

    @classmethod
    def from_dict(cls, variables, mapping):
        variables = tuple(variables)
        return cls._make(variables, _canonical(mapping))

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        return cls._make(variables, ((((0,) * len(variables)), int(c)),) if c else ())

    @classmethod
    def variable(cls, variables, name, power=1):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = power
        return cls._make(variables, ((tuple(e), 1),))

    def as_dict(self):
        if self._dict is None:
            self._dict = dict(self.terms)
        return self._dict

    @property
    def nvars(self):
        return len(self.variables)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    @property
    def lc(self):
        """Leading integer coefficient under the lex order (0 for the zero polynomial)."""
        return self.terms[0][1] if self.terms else 0

    def degree(self, v):
        i = self._index(v)
        return max((e[i] for e, _ in self.terms), default=-1)

    def degrees(self):
        return tuple(max((e[i] for e, _ in self.terms), default=0) for i in range(self.nvars))

    def height(self):
        return max((abs(c) for _, c in self.terms), default=0)

    def _index(self, v):
        return v if isinstance(v, int) else self.variables.index(v)

    def _check(self, other):
        if self.variables != other.variables:
            raise StructuralError(f"variable lists differ: {self.variables} vs {other.variables}")

    def _coerce(self, other):
        if isinstance(other, int):
            return MultiPoly.constant(self.variables, other)
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == MultiPoly.constant(self.variables, other).terms
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, self.terms))

    def __neg__(self):
        return MultiPoly._make(self.variables, tuple((e, -c) for e, c in self.terms))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly._make(self.variables, _merge(self.terms, other.terms, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly._make(self.variables, _merge(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return MultiPoly._make(self.variables, ())
            return MultiPoly._make(self.variables, tuple((e, c * other) for e, c in self.terms))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly._make(self.variables, _heap_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __repr__(self):
        return f"MultiPoly({to_text(self)!r}, variables={self.variables})"

    def __str__(self):
        return to_text(self)

    # ring-level helpers -------------------------------------------------

    def coefficients_wrt(self, v):
        """Map each power of variable ``v`` to its coefficient polynomial (v-free)."""
        i = self._index(v)
        groups = {}
        for e, c in self.terms:
            groups.setdefault(e[i], []).append((e[:i] + (0,) + e[i + 1:], c))
        return {d: MultiPoly._make(self.variables, tuple(ts)) for d, ts in groups.items()}

    def with_variables(self, variables):
        """Re-express over another variable list (must contain every used variable)."""
        variables = tuple(variables)
        pos = []
        for i, name in enumerate(self.variables):
            if name in variables:
                pos.append((i, variables.index(name)))
            elif any(e[i] for e, _ in self.terms):
                raise StructuralError(f"variable {name} is used but not in target ring")
        n = len(variables)
        out = {}
        for e, c in self.terms:
            ne = [0] * n
            for i, j in pos:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return MultiPoly.from_dict(variables, out)

    def used_variables(self):
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e, _ in self.terms))


def _merge(a, b, sign):
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ea, eb = a[i][0], b[j][0]
        if ea > eb:
            out.append(a[i])
            i += 1
        elif ea < eb:
            out.append((eb, sign * b[j][1]))
            j += 1
        else:
            c = a[i][1] + sign * b[j][1]
            if c:
                out.append((ea, c))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend((e, sign * c) for e, c in b[j:])
    return tuple(out)


def _heap_mul(a, b):
    """Johnson's heap merge of the term streams a_i * b."""
    if not a or not b:
        return ()
    if len(a) > len(b):
        a, b = b, a
    b0 = b[0][0]
    heap = [(tuple(-(x + y) for x, y in zip(ea, b0)), i, 0) for i, (ea, _) in enumerate(a)]
    heapify(heap)
    nb = len(b)
    out = []
    last = None
    acc = 0
    while heap:
        key, i, j = heap[0]
        prod = a[i][1] * b[j][1]
        if key == last:
            acc += prod
        else:
            if last is not None and acc:
                out.append((tuple(-x for x in last), acc))
            last, acc = key, prod
        j += 1
        if j < nb:
            ea = a[i][0]
            heapreplace(heap, (tuple(-(x + y) for x, y in zip(ea, b[j][0])), i, j))
        else:
            heappop(heap)
    if last is not None and acc:
        out.append((tuple(-x for x in last), acc))
    return tuple(out)


def ring_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _divide_terms(num: dict, den: Sequence):
    """Exact division by leading-term elimination; None when not divisible."""
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = dict(num)
    le, lc = den[0]
    rest = den[1:]
    heap = [tuple(-x for x in e) for e in rem]
    heapify(heap)
    quo = {}
    while heap:
        e = tuple(-x for x in heappop(heap))
        c = rem.get(e)
        if c is None:
            continue
        d = tuple(x - y for x, y in zip(e, le))
        if min(d, default=0) < 0:
            return None
        qc, r = divmod(c, lc)
        if r:
            return None
        del rem[e]
        quo[d] = qc
        for de, dc in rest:
            ne = tuple(x + y for x, y in zip(d, de))
            old = rem.get(ne)
            v = (old or 0) - qc * dc
            if v:
                if old is None:
                    heappush(heap, tuple(-x for x in ne))
                rem[ne] = v
            elif old is not None:
                del rem[ne]
    return quo


def exact_div(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """Return ``q`` with ``q * den == num``; raise NotDivisible otherwise."""
    num._check(den)
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    q = _divide_terms(num.as_dict(), den.terms)
    if q is None:
        raise NotDivisible("polynomial division leaves a remainder")
    return MultiPoly.from_dict(num.variables, q)


def divides(den: MultiPoly, num: MultiPoly) -> bool:
    try:
        exact_div(num, den)
    except NotDivisible:
        return False
    return True


def weighted_substitute(p: MultiPoly, main, weights: Sequence[int]) -> "BiPoly":
    """Map x_i -> t**w_i for every non-main variable; the main variable becomes x."""
    m = p._index(main)
    weights = tuple(int(w) for w in weights)
    if len(weights) != p.nvars - 1:
        raise StructuralError(f"need {p.nvars - 1} weights, got {len(weights)}")
    if any(w < 1 for w in weights):
        raise StructuralError("substitution weights must be positive")
    acc = {}
    for e, c in p.terms:
        others = e[:m] + e[m + 1:]
        tdeg = sum(w * a for w, a in zip(weights, others))
        if tdeg >= EXPONENT_LIMIT:
            raise OverflowError(f"t-degree {tdeg} exceeds the exponent limit")
        key = (e[m], tdeg)
        acc[key] = acc.get(key, 0) + c
    return BiPoly.from_dict(acc)


def leading_coefficient_wrt(p: MultiPoly, main) -> MultiPoly:
    """Coefficient of the highest power of ``main`` (a main-variable-free polynomial)."""
    if p.is_zero():
        raise ValueError("zero polynomial has no leading coefficient")
    m = p._index(main)
    d = p.degree(m)
    return MultiPoly._make(p.variables, tuple(
        (e[:m] + (0,) + e[m + 1:], c) for e, c in p.terms if e[m] == d))


def dilate(p: MultiPoly, main, scales: Sequence[int]) -> MultiPoly:
    """Substitute x_i -> c_i * x_i for every non-main variable."""
    m = p._index(main)
    scales = tuple(scales)
    if len(scales) != p.nvars - 1 or any(s == 0 for s in scales):
        raise StructuralError("dilation needs one nonzero scale per non-main variable")
    out = {}
    for e, c in p.terms:
        others = e[:m] + e[m + 1:]
        f = 1
        for s, a in zip(scales, others):
            if a:
                f *= s ** a
        out[e] = c * f
    return MultiPoly.from_dict(p.variables, out)


def undilate_coefficient(c: int, exponents: Sequence[int], scales: Sequence[int]) -> int:
    f = 1
    for s, a in zip(scales, exponents):
        if a:
            f *= s ** a
    q, r = divmod(c, f)
    if r:
        raise NotIntegral(f"{c} is not divisible by {f}")
    return q


def undilate(p: MultiPoly, main, scales: Sequence[int]) -> MultiPoly:
    m = p._index(main)
    return MultiPoly.from_dict(p.variables, {
        e: undilate_coefficient(c, e[:m] + e[m + 1:], scales) for e, c in p.terms})


def integer_content_and_sign(p: MultiPoly):
    """Return ``(content, primitive)`` with ``p == +-content * primitive`` and lc(primitive) > 0."""
    if p.is_zero():
        raise ValueError("zero polynomial has no content")
    g = 0
    for _, c in p.terms:
        g = math.gcd(g, c)
        if g == 1:
            break
    if p.lc < 0:
        g = -g
    return abs(g), MultiPoly._make(p.variables, tuple((e, c // g) for e, c in p.terms))


def derivative_wrt(p, v):
    """Formal partial derivative; ``p`` may be a MultiPoly or a BiPoly (v in 'x', 't')."""
    if isinstance(p, BiPoly):
        if v in ("x", 0):
            return BiPoly.from_dict({(a - 1, b): a * c for a, b, c in p.terms if a})
        if v in ("t", 1):
            return BiPoly.from_dict({(a, b - 1): b * c for a, b, c in p.terms if b})
        raise ValueError(f"BiPoly has variables x and t, not {v!r}")
    i = p._index(v)
    out = {}
    for e, c in p.terms:
        if e[i]:
            out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
    return MultiPoly.from_dict(p.variables, out)


# ----------------------------------------------------------------------------
# heuristic gcd

def _int_content(d):
    g = 0
    for c in d.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _eval_var(d, i, z):
    out = {}
    for e, c in d.items():
        if e[i]:
            c *= z ** e[i]
            e = e[:i] + (0,) + e[i + 1:]
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def _interpolate(d, i, z):
    half = z // 2
    out = {}
    for e, c in d.items():
        k = 0
        while c:
            r = c % z
            if r > half:
                r -= z
            if r:
                out[e[:i] + (k,) + e[i + 1:]] = r
            c = (c - r) // z
            k += 1
    return out


def _normalize_sign(d):
    if d and d[max(d)] < 0:
        return {e: -c for e, c in d.items()}
    return d


def _gcd_dicts(f, g, n):
    """gcd of two integer polynomials given as exponent->coeff dicts, positive lc."""
    if not f:
        return _normalize_sign(dict(g))
    if not g:
        return _normalize_sign(dict(f))
    cf, cg = _int_content(f), _int_content(g)
    ci = math.gcd(cf, cg)
    f = {e: c // cf for e, c in f.items()}
    g = {e: c // cg for e, c in g.items()}
    mf = tuple(min(e[i] for e in f) for i in range(n))
    mg = tuple(min(e[i] for e in g) for i in range(n))
    mono = tuple(min(a, b) for a, b in zip(mf, mg))
    if any(mf):
        f = {tuple(x - y for x, y in zip(e, mf)): c for e, c in f.items()}
    if any(mg):
        g = {tuple(x - y for x, y in zip(e, mg)): c for e, c in g.items()}
    core = _gcd_primitive(f, g, n)
    return {tuple(x + y for x, y in zip(e, mono)): c * ci for e, c in core.items()}


def _support(d, n):
    return {i for i in range(n) if any(e[i] for e in d)}


def _split_by(d, idx):
    parts = {}
    for e, c in d.items():
        key = tuple(e[i] for i in idx)
        ne = list(e)
        for i in idx:
            ne[i] = 0
        parts.setdefault(key, {})[tuple(ne)] = c
    return sorted(parts.values(), key=len)


def _is_unit(d):
    return len(d) == 1 and not any(next(iter(d))) and abs(next(iter(d.values()))) == 1


def _gcd_primitive(f, g, n):
    # inputs primitive and free of monomial content
    one = {(0,) * n: 1}
    vf, vg = _support(f, n), _support(g, n)
    if not vf or not vg:
        return one
    only_f = sorted(vf - vg)
    only_g = sorted(vg - vf)
    if only_f or only_g:
        # a variable missing on one side can only divide the gcd through the other's content
        acc, pieces = (g, _split_by(f, only_f)) if only_f else (f, _split_by(g, only_g))
        for piece in pieces:
            acc = _gcd_dicts(acc, piece, n)
            if _is_unit(acc):
                return one
        return _normalize_sign(acc)
    return _heu_core(f, g, n, max(vf))


def _heu_core(f, g, n, v):
    hf = max(abs(c) for c in f.values())
    hg = max(abs(c) for c in g.values())
    z = 2 * min(hf, hg) + 2
    fs = sorted(f.items(), key=_first, reverse=True)
    gs = sorted(g.items(), key=_first, reverse=True)
    for _ in range(HEU_GCD_MAX_RETRIES):
        ff = _eval_var(f, v, z)
        gg = _eval_var(g, v, z)
        if ff and gg:
            try:
                h = _gcd_dicts(ff, gg, n)
            except HeuristicGCDFailed:
                h = None
            if h is not None:
                cand = _interpolate(h, v, z)
                if cand:
                    ch = _int_content(cand)
                    cand = _normalize_sign({e: c // ch for e, c in cand.items()})
                    cs = sorted(cand.items(), key=_first, reverse=True)
                    if _divide_terms(f, cs) is not None and _divide_terms(g, cs) is not None:
                        return cand
                # cofactor route: interpolate f/h and g/h instead
                hs = sorted(h.items(), key=_first, reverse=True)
                for src, src_sorted, other in ((ff, fs, g), (gg, gs, f)):
                    cof = _divide_terms(src, hs)
                    if not cof:
                        continue
                    cof = _interpolate(cof, v, z)
                    if not cof:
                        continue
                    quo = _divide_terms(dict(src_sorted), sorted(cof.items(), key=_first, reverse=True))
                    if not quo:
                        continue
                    ch = _int_content(quo)
                    quo = _normalize_sign({e: c // ch for e, c in quo.items()})
                    if _divide_terms(other, sorted(quo.items(), key=_first, reverse=True)) is not None:
                        return quo
        z *= 2
    raise HeuristicGCDFailed(f"no gcd found after {HEU_GCD_MAX_RETRIES} evaluation points")


def heu_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Greatest common divisor by big-integer evaluation and symmetric base-z digits.

    The result has a positive leading coefficient and is checked to divide both
    inputs exactly.  Raises HeuristicGCDFailed when every evaluation point fails.
    """
    a._check(b)
    g = _gcd_dicts(a.as_dict(), b.as_dict(), a.nvars)
    return MultiPoly.from_dict(a.variables, g)


def content_wrt(p: MultiPoly, main) -> MultiPoly:
    """gcd of the coefficients of ``p`` viewed as a polynomial in ``main``."""
    coeffs = sorted(p.coefficients_wrt(main).values(), key=len)
    n = p.nvars
    acc = coeffs[0].as_dict()
    for c in coeffs[1:]:
        if _is_unit(acc):
            break
        acc = _gcd_dicts(acc, c.as_dict(), n)
    return MultiPoly.from_dict(p.variables, _normalize_sign(acc))


# ----------------------------------------------------------------------------
# bivariate images

class BiPoly:
    """Polynomial in (x, t): terms ``(xdeg, tdeg, coeff)`` sorted descending."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = ()):
        acc = {}
        for a, b, c in terms:
            if a < 0 or b < 0:
                raise StructuralError("negative exponent in BiPoly")
            acc[(a, b)] = acc.get((a, b), 0) + c
        self.terms = tuple((a, b, c) for (a, b), c in sorted(acc.items(), reverse=True) if c)

    @classmethod
    def from_dict(cls, mapping):
        p = cls.__new__(cls)
        p.terms = tuple((a, b, c) for (a, b), c in sorted(mapping.items(), reverse=True) if c)
        return p

    @classmethod
    def from_rows(cls, rows):
        """From dense rows ``rows[xdeg][tdeg]``."""
        return cls.from_dict({(a, b): c for a, row in enumerate(rows) for b, c in enumerate(row) if c})

    @classmethod
    def from_t(cls, coeffs, xdeg=0):
        return cls.from_dict({(xdeg, b): c for b, c in enumerate(coeffs) if c})

    def rows(self):
        """Dense rows indexed [xdeg][tdeg]; trailing zeros trimmed per row."""
        if not self.terms:
            return []
        out = [[] for _ in range(self.terms[0][0] + 1)]
        for a, b, c in self.terms:
            row = out[a]
            if len(row) <= b:
                row.extend([0] * (b + 1 - len(row)))
            row[b] = c
        return out

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def deg_x(self):
        return self.terms[0][0] if self.terms else -1

    @property
    def deg_t(self):
        return max((b for _, b, _ in self.terms), default=-1)

    def lc_x(self):
        """Leading coefficient in x, as a BiPoly of x-degree 0."""
        d = self.deg_x
        return BiPoly.from_dict({(0, b): c for a, b, c in self.terms if a == d})

    def t_coeffs(self):
        """Dense t-coefficient list, for a polynomial with x-degree 0."""
        if self.deg_x > 0:
            raise StructuralError("polynomial involves x")
        out = [0] * (self.deg_t + 1)
        for _, b, c in self.terms:
            out[b] = c
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = BiPoly.from_dict({(0, 0): other})
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __neg__(self):
        p = BiPoly.__new__(BiPoly)
        p.terms = tuple((a, b, -c) for a, b, c in self.terms)
        return p

    def __add__(self, other):
        acc = {(a, b): c for a, b, c in self.terms}
        for a, b, c in other.terms:
            acc[(a, b)] = acc.get((a, b), 0) + c
        return BiPoly.from_dict(acc)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BiPoly.from_dict({(a, b): c * other for a, b, c in self.terms})
        if not self.terms or not other.terms:
            return BiPoly()
        stride = self.deg_t + other.deg_t + 1
        fa = _flatten(self, stride)
        fb = _flatten(other, stride)
        prod = _kron.mul_dense(fa, fb)
        return BiPoly.from_dict({divmod(i, stride): c for i, c in enumerate(prod) if c})

    __rmul__ = __mul__

    def __repr__(self):
        return f"BiPoly({to_text_bi(self)!r})"

    def __str__(self):
        return to_text_bi(self)


def _flatten(p, stride):
    out = [0] * ((p.deg_x + 1) * stride)
    for a, b, c in p.terms:
        out[a * stride + b] = c
    return out


# ----------------------------------------------------------------------------
# text rendering (the parser lives in textio)

def _monomial_text(names, exps):
    parts = []
    for name, k in zip(names, exps):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _terms_text(names, items):
    out = []
    for exps, c in items:
        mono = _monomial_text(names, exps)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("-" if c < 0 else "+") + body)
    return "".join(out) if out else "0"


def to_text(p: MultiPoly) -> str:
    return _terms_text(p.variables, p.terms)


def to_text_bi(p: BiPoly, names=("x", "t")) -> str:
    return _terms_text(names, (((a, b), c) for a, b, c in p.terms))
