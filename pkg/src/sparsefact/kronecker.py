"""Kronecker-substitution factorization, used as a small-instance oracle.

``x_i -> x**(D**i)`` with D larger than every partial degree is injective on
the monomials of P and of all its divisors.  The univariate image is
factored, and subsets of its irreducible factors are mapped back digit by
digit and kept when they divide P.
"""

from __future__ import annotations

import random
from itertools import combinations

from . import dense
from .errors import NotDivisible, OracleInconclusive
from .poly import MultiPoly, exact_div, integer_content_and_sign
from .unifactor import factor_univariate

MAX_DEGREE = 400
MAX_POOL = 16


def _to_univariate(P: MultiPoly, D: int):
    deg = sum(d * D ** i for i, d in enumerate(P.degrees()))
    if deg > MAX_DEGREE:
        raise OracleInconclusive(f"substituted degree {deg} exceeds {MAX_DEGREE}")
    out = [0] * (deg + 1)
    for e, c in P.terms:
        out[sum(a * D ** i for i, a in enumerate(e))] += c
    return out


def _from_univariate(g, variables, D):
    n = len(variables)
    terms = {}
    for k, c in enumerate(g):
        if not c:
            continue
        e = []
        for _ in range(n):
            k, r = divmod(k, D)
            e.append(r)
        if k:
            return None
        terms[tuple(e)] = c
    return MultiPoly.from_dict(variables, terms)


def kronecker_oracle(P: MultiPoly, rng=None):
    """Irreducible factors of P (with repetition), integer content dropped."""
    if P.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = rng or random.Random(0)
    _, P = integer_content_and_sign(P)
    if P.is_constant():
        return []
    D = max(P.degrees()) + 1
    _, _, facs = factor_univariate(_to_univariate(P, D), rng)
    pool = [g for g, m in facs for _ in range(m)]
    if len(pool) > MAX_POOL:
        raise OracleInconclusive(f"{len(pool)} univariate factors is too many to recombine")
    found = []
    size = 1
    while pool and 2 * size <= len(pool):
        for subset in combinations(range(len(pool)), size):
            g = [1]
            for i in subset:
                g = dense.mul(g, pool[i])
            cand = _from_univariate(dense.primitive(g), P.variables, D)
            if cand is None or cand.is_constant():
                continue
            _, cand = integer_content_and_sign(cand)
            try:
                q = exact_div(P, cand)
            except NotDivisible:
                continue
            found.append(cand)
            P = q
            pool = [f for i, f in enumerate(pool) if i not in subset]
            break
        else:
            size += 1
    if not P.is_constant():
        if P.lc < 0:
            P = -P
        found.append(P)
    elif abs(P.lc) != 1:
        raise OracleInconclusive("leftover integer content after recombination")
    return sorted(found, key=lambda f: f.terms)
