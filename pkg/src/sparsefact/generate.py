"""Seeded random sparse polynomials and products for tests and benchmarks."""

from __future__ import annotations

import random
from functools import reduce
from operator import mul

from .poly import MultiPoly, integer_content_and_sign
from .sparselift import choose_main_variable


def random_poly(rng: random.Random, variables, terms: int, maxdeg: int, coeff_bound: int) -> MultiPoly:
    """Up to ``terms`` distinct monomials, partial degrees <= maxdeg, nonzero |coeff| <= bound."""
    n = len(variables)
    out = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, maxdeg) for _ in range(n))
        c = 0
        while c == 0:
            c = rng.randint(-coeff_bound, coeff_bound)
        out[e] = c
    return MultiPoly.from_dict(variables, out)


def _strip_monomial(p: MultiPoly) -> MultiPoly:
    mins = [min(e[i] for e, _ in p.terms) for i in range(p.nvars)]
    return MultiPoly.from_dict(p.variables, {
        tuple(a - m for a, m in zip(e, mins)): c for e, c in p.terms})


def x_profile(p: MultiPoly, main: int):
    counts = {}
    for e, _ in p.terms:
        counts[e[main]] = counts.get(e[main], 0) + 1
    return tuple(sorted(counts.items(), reverse=True))


def random_product(rng: random.Random, variables, nfactors: int, terms: int, maxdeg: int,
                   coeff_bound: int, x_distinct: bool = True, max_tries: int = 1000):
    """``(P, factors)``: a product of random factors in all ``variables``.

    Factors have between 2 and ``terms`` terms, no monomial or integer
    content and a positive leading coefficient.  With ``x_distinct`` the factors are
    resampled until they all involve the main variable of the product and
    have pairwise different x-degree profiles.
    """
    for _ in range(max_tries):
        factors = []
        for _ in range(nfactors):
            f = _strip_monomial(random_poly(rng, variables, rng.randint(2, terms), maxdeg, coeff_bound))
            if len(f) < 2:
                break
            factors.append(integer_content_and_sign(f)[1])
        if len(factors) < nfactors or len(set(factors)) < nfactors:
            continue
        P = reduce(mul, factors)
        if len(P.used_variables()) < len(variables):
            continue
        if x_distinct:
            main = choose_main_variable(P)
            profiles = [x_profile(f, main) for f in factors]
            if any(f.degree(main) == 0 for f in factors) or len(set(profiles)) < nfactors:
                continue
        return P, factors
    raise RuntimeError("could not build an instance with the requested shape")
