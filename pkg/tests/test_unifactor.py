import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsefact import _gf, dense
from sparsefact.errors import StructuralError
from sparsefact.unifactor import (
    factor_mod_p,
    factor_univariate,
    hensel_lift_uni,
    mignotte_bound,
    squarefree_check,
)


def expand(unit, content, factors):
    out = [unit * content]
    for g, m in factors:
        for _ in range(m):
            out = dense.mul(out, g)
    return out


def test_squarefree_check():
    assert squarefree_check([-1, 0, 1])
    assert not squarefree_check([1, -2, 1])
    assert squarefree_check(dense.mul(dense.mul([-1, 1], [-2, 1]), [-3, 1]))


def test_factor_mod_p_examples():
    # x^2 + 1 over GF(5): roots 2 and 3
    assert factor_mod_p([1, 0, 1], 5) == [([2, 1], 1), ([3, 1], 1)]
    assert factor_mod_p([1, 0, 1], 3) == [([1, 0, 1], 1)]
    assert factor_mod_p([0, -1, 0, 1], 7) == [([0, 1], 1), ([1, 1], 1), ([6, 1], 1)]
    assert factor_mod_p([1, 2, 1], 7) == [([1, 1], 2)]


def test_factor_mod_p_rejects_bad_modulus():
    with pytest.raises(StructuralError):
        factor_mod_p([1, 0, 1], 9)
    with pytest.raises(StructuralError):
        factor_mod_p([1, 0, 1], 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([13, 17, 101, 1009]).flatmap(
    lambda p: st.tuples(st.lists(st.integers(-50, 50), min_size=2, max_size=9).filter(
        lambda f: f[-1] % p), st.just(p))))
def test_factor_mod_p_reproduces_input(case):
    f, p = case
    facs = factor_mod_p(f, p, random.Random(1))
    prod = [f[-1] % p]
    for g, m in facs:
        assert g[-1] == 1
        for _ in range(m):
            prod = _gf.mul(prod, g, p)
    assert prod == _gf.reduce(list(f), p)


def test_hensel_lift_congruence():
    f = [-1, -1, 1]                      # x^2 - x - 1 = (x - 4)(x + 3) mod 11
    lifted = hensel_lift_uni(f, [[7, 1], [3, 1]], 11, 2)
    assert [g[0] % 11 for g in lifted] == [7, 3]
    assert _gf.mul(lifted[0], lifted[1], 121) == _gf.reduce(list(f), 121)


def test_hensel_lift_exact_factors_unchanged():
    assert hensel_lift_uni([-1, 0, 1], [[4, 1], [1, 1]], 5, 4) == [[624, 1], [1, 1]]


def test_hensel_lift_preconditions():
    with pytest.raises(StructuralError):
        hensel_lift_uni([-1, 0, 5], [[4, 1], [1, 1]], 5, 2)
    with pytest.raises(StructuralError):
        hensel_lift_uni([-1, 0, 1], [[3, 1], [1, 1]], 5, 2)


def test_mignotte_bound_examples():
    assert mignotte_bound([-1, 0, 1]) >= 1
    assert mignotte_bound([3, 3]) >= 3


def test_factor_univariate_examples():
    assert factor_univariate([-1, 0, 1]) == (1, 1, [([-1, 1], 1), ([1, 1], 1)])
    assert factor_univariate([2, 0, 2]) == (1, 2, [([1, 0, 1], 1)])
    assert factor_univariate([0, 0, -3]) == (-1, 3, [([0, 1], 2)])
    assert factor_univariate([5]) == (1, 5, [])


def test_factor_univariate_multiplicities():
    f = dense.mul(dense.mul([1, 1], [1, 1]), dense.mul([-2, 0, 1], [0, 1]))
    unit, content, facs = factor_univariate(f)
    assert dict((tuple(g), m) for g, m in facs) == {(1, 1): 2, (-2, 0, 1): 1, (0, 1): 1}


def test_swinnerton_dyer_like_is_irreducible():
    # minimal polynomial of sqrt2 + sqrt3 + sqrt5 splits into quadratics mod every prime
    f = [576, 0, -960, 0, 352, 0, -40, 0, 1]
    assert factor_univariate(f)[2] == [(f, 1)]


def test_prime_independence():
    rng = random.Random(5)
    for _ in range(20):
        gs = [[rng.randint(-9, 9) for _ in range(rng.randint(1, 4))] + [rng.randint(1, 5)] for _ in range(3)]
        f = dense.mul(dense.mul(gs[0], gs[1]), gs[2])
        if not f or not squarefree_check(f) or f[0] == 0:
            continue
        results = set()
        for prime in (13, 17, 19, 23, 29, 31):
            try:
                results.add(repr(factor_univariate(f, prime=prime)))
            except StructuralError:
                pass                    # prime divides lc or the image is not square-free
        assert len(results) == 1


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=2, max_size=5), min_size=1, max_size=3))
def test_factors_respect_mignotte_and_reproduce(parts):
    f = [1]
    for g in parts:
        f = dense.mul(f, g)
    f = dense.trim(f)
    if not f:
        return
    unit, content, facs = factor_univariate(f)
    assert expand(unit, content, facs) == f
    bound = mignotte_bound(f)
    for g, _ in facs:
        assert g[-1] > 0 and dense.content(g) == 1
        assert dense.height(g) <= bound
