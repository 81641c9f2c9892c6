import random

import pytest

from conftest import backend_cmd
from oracles import random_bivariate_irreducible
from sparsefact.bifactor import (
    _lift_and_recombine,
    backend_request,
    choose_anchor,
    factor_bivariate,
    factor_bivariate_external,
)
from sparsefact.errors import BackendError, NotSquarefreeError
from sparsefact.poly import BiPoly, weighted_substitute
from sparsefact.textio import parse_bivariate as B
from sparsefact.unifactor import factor_univariate


def test_choose_anchor_examples():
    assert choose_anchor(B("x^2-t^2")) == 1
    assert choose_anchor(B("x^2+t*x")) == 1
    assert choose_anchor(B("x^2+x+1")) == 0


def test_two_linear_factors():
    r = factor_bivariate(B("(x+t)*(x+t^2)"))
    assert r.unit == 1 and r.content_t == 1
    assert set(r.factors) == {B("x+t"), B("x+t^2")}


def test_t_content_is_split_off():
    r = factor_bivariate(B("t*(x^2-t^2)"))
    assert r.content_t == B("t")
    assert set(r.factors) == {B("x-t"), B("x+t")}


def test_negative_input_and_integer_content():
    r = factor_bivariate(B("-6*(x*t+1)*(x^2+t^3+2)"))
    assert r.unit == -1 and r.content_t == 6
    assert r.expand() == B("-6*(x*t+1)*(x^2+t^3+2)")


def test_t_free_input():
    r = factor_bivariate(B("x^3-x"))
    assert set(r.factors) == {B("x"), B("x-1"), B("x+1")}


def test_non_squarefree_rejected():
    with pytest.raises(NotSquarefreeError):
        factor_bivariate(B("(x+t)^2*(x-1)"))
    with pytest.raises(NotSquarefreeError):
        factor_bivariate(B("(x^2+t)^2"))


def test_irreducible_with_reducible_images():
    # x^4 + t^2 stays irreducible although many specializations split
    r = factor_bivariate(B("x^4+t^2"))
    assert r.factors == (B("x^4+t^2"),)


def test_golden_base_image(golden_A, golden_P):
    r = factor_bivariate(weighted_substitute(golden_P, "b", (1, 1, 1, 1)))
    assert r.content_t == B("t^5")
    assert sorted(len(f) for f in r.factors) == [30, 35]
    # the A image is the 30-term factor times a power of t
    a_img = weighted_substitute(golden_A, "b", (1, 1, 1, 1))
    small = min(r.factors, key=len)
    shift = a_img.terms[0][1] - small.terms[0][1]
    assert small * BiPoly.from_t([0] * shift + [1]) == a_img


def test_random_products_are_recovered():
    rng = random.Random(11)
    for _ in range(25):
        fs = list({random_bivariate_irreducible(rng) for _ in range(rng.randint(1, 3))})
        F = fs[0]
        for f in fs[1:]:
            F = F * f
        r = factor_bivariate(F, random.Random(0))
        assert r.expand() == F
        assert sorted(r.factors, key=lambda f: f.terms) == sorted(fs, key=lambda f: f.terms)


def test_anchor_independence():
    F = B("(x^2*t+3*x-t^2)*(x^3-2*t*x+t^4+1)*(x+t+2)")
    rows = F.rows()
    results = []
    for start in range(3):
        alpha = choose_anchor(F, start)
        image = [sum(c * alpha ** j for j, c in enumerate(r)) for r in rows]
        images = [g for g, _ in factor_univariate(image)[2]]
        got = _lift_and_recombine(rows, alpha, images)
        results.append(sorted(BiPoly.from_rows(g).terms for g in got))
    assert results[0] == results[1] == results[2]


# -- external backends -------------------------------------------------------------

def test_request_format():
    assert backend_request(B("x^2-t")) == "factor_bivariate x t\nx^2-t\n"


def test_echo_backend_matches_builtin():
    F = B("t^3*(x+t)*(x^2-3*t+1)")
    ext = factor_bivariate_external(F, backend_cmd("echo_backend.py"), timeout=30)
    assert ext == factor_bivariate(F)


@pytest.mark.parametrize("script", ["garbage_backend.py", "wrong_backend.py", "failing_backend.py",
                                    "no_such_backend.py"])
def test_bad_backends_fall_back(script):
    F = B("(x+t)*(x-t+1)")
    with pytest.raises(BackendError) as info:
        factor_bivariate_external(F, backend_cmd(script), timeout=30)
    assert info.value.fallback == factor_bivariate(F)


def test_backend_timeout():
    F = B("(x+t)*(x-t+1)")
    with pytest.raises(BackendError) as info:
        factor_bivariate_external(F, backend_cmd("slow_backend.py", "10"), timeout=0.5)
    assert info.value.fallback.expand() == F
