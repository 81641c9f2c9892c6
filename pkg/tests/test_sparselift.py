import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsefact.bifactor import factor_bivariate
from sparsefact.errors import NotXDistinct, UnluckyEvaluation
from sparsefact.generate import random_product
from sparsefact.poly import BiPoly, leading_coefficient_wrt, weighted_substitute
from sparsefact.sparselift import (
    Comparison,
    Config,
    FactorSkeleton,
    FallbackReason,
    _PassFailed,
    assemble_factors,
    canonical_key,
    choose_main_variable,
    compare_counts,
    factor,
    match_by_x_support,
    normalize_factor,
    reconstruct_variable,
    sparse_factor,
)
from sparsefact.textio import parse
from sparsefact.textio import parse_bivariate as B

V = ("x", "y", "z")


def P(text, variables=V):
    return parse(text, variables)


def golden_skeletons(P_, weights):
    lc = weighted_substitute(leading_coefficient_wrt(P_, "b"), "b", weights)
    F = weighted_substitute(P_, "b", weights)
    return sorted((normalize_factor(f, lc) for f in factor_bivariate(F).factors), key=len)


def multiset(outcome):
    return sorted((f.terms, m) for f, m in outcome.factors)


# -- normalization -----------------------------------------------------------------

def test_normalize_factor_golden(golden_P):
    base = golden_skeletons(golden_P, (1, 1, 1, 1))[0]
    probe = golden_skeletons(golden_P, (4, 1, 1, 1))[0]
    for skel, shift in ((base, 63), (probe, 73)):
        assert len(skel) == 30
        q = skel.multiplier
        # a pure power of t; the integer is lc of the other factor's integer part
        assert len(q) == shift + 1 and not any(q[:-1])
        assert q[-1] == 1728000000000


def test_normalize_factor_small():
    skel = normalize_factor(B("x+t"), B("t^2+t"))
    assert skel.to_bipoly() == B("(t^2+t)*(x+t)")
    assert skel.multiplier == (0, 1, 1)
    with pytest.raises(UnluckyEvaluation):
        normalize_factor(B("t*x+1"), B("t^2+1"))
    with pytest.raises(UnluckyEvaluation):
        normalize_factor(B("x+1"), BiPoly())


def test_skeleton_order_and_profile():
    s = FactorSkeleton.from_bipoly(B("2*x^2*t+x^2-3*x*t^4+5"))
    assert s.terms == ((2, 0, 1), (2, 1, 2), (1, 4, -3), (0, 0, 5))
    assert s.xsupport == ((2, 2), (1, 1), (0, 1))
    assert s.at_one == ((0, 5), (1, -3), (2, 3))
    assert s.tied_classes() == []
    assert FactorSkeleton.from_bipoly(B("x*t+x+1")).tied_classes() == [1]


# -- exponent reconstruction -------------------------------------------------------

def test_reconstruct_golden_leading_exponent(golden_P):
    base = golden_skeletons(golden_P, (1, 1, 1, 1))[0]
    probe = golden_skeletons(golden_P, (4, 1, 1, 1))[0]
    col = reconstruct_variable(base, probe, 4, 0)
    assert (base.terms[0][1], probe.terms[0][1]) == (153, 234)
    assert col[0] == (234 - 153) // 3 == 27


def test_reconstruct_zero_shift():
    base = FactorSkeleton.from_bipoly(B("x*t+2"))
    assert reconstruct_variable(base, base, 2, 0) == (0, 0)


def test_reconstruct_rejects_bad_images():
    base = FactorSkeleton.from_bipoly(B("x*t+2"))
    with pytest.raises(UnluckyEvaluation):  # (2-1)/2 is not an integer
        reconstruct_variable(base, FactorSkeleton.from_bipoly(B("x*t^2+2")), 3, 0)
    with pytest.raises(UnluckyEvaluation):
        reconstruct_variable(base, FactorSkeleton.from_bipoly(B("x*t+3")), 2, 0)
    with pytest.raises(UnluckyEvaluation):
        reconstruct_variable(base, FactorSkeleton.from_bipoly(B("x*t^9+2")), 2, 0, bound=3)
    with pytest.raises(ValueError):
        reconstruct_variable(base, base, 1, 0)


def test_reconstruct_with_shifted_base_weight():
    # factor x*y^3 + 1 with y -> t^3 as base and t^5 as probe
    base = FactorSkeleton.from_bipoly(B("x*t^9+1"))
    ev = FactorSkeleton.from_bipoly(B("x*t^15+1"))
    assert reconstruct_variable(base, ev, 5, 0, base_weight=3) == (3, 0)


# -- main variable, pairing, comparison --------------------------------------------

def test_choose_main_variable(golden_P):
    assert golden_P.variables[choose_main_variable(golden_P)] == "b"
    assert choose_main_variable(P("x^3+y^2+z^5")) == 1
    assert choose_main_variable(P("x+y", ("x", "y"))) == 0
    with pytest.raises(ValueError):
        choose_main_variable(P("7"))


def test_match_identity_and_permutation():
    a = FactorSkeleton.from_bipoly(B("x^2+t"))
    b = FactorSkeleton.from_bipoly(B("x+3*t+1"))
    assert match_by_x_support([a, b], [a, b]) == [0, 1]
    assert match_by_x_support([a, b], [b, a]) == [1, 0]
    with pytest.raises(UnluckyEvaluation):
        match_by_x_support([a, b], [a])


def test_match_rejects_equal_supports():
    a = FactorSkeleton.from_bipoly(B("x+t"))
    b = FactorSkeleton.from_bipoly(B("x+2*t"))
    with pytest.raises(NotXDistinct):
        match_by_x_support([a, b], [a, b])
    # the t = 1 values still tell them apart when not strict
    assert match_by_x_support([a, b], [b, a], strict=False) == [1, 0]


def test_compare_counts():
    base = FactorSkeleton.from_bipoly(B("x*t+x+1"))
    assert compare_counts(base, base) is Comparison.Equal
    assert compare_counts(base, FactorSkeleton.from_bipoly(B("2*x*t+1"))) is Comparison.EvalPoorer
    richer = FactorSkeleton.from_bipoly(B("x*t+x+t+1"))
    assert compare_counts(base, richer) is Comparison.EvalRicher


# -- full pipeline ------------------------------------------------------------------

def test_irreducible_input():
    p = P("x^2*y+z^3+x*y*z+1")
    out = factor(p)
    assert out.ok and out.factors == ((p, 1),)
    assert out.stats.bifactor_calls == 1


def test_small_product():
    out = factor(P("(x+y+z)*(x-y+z)"))
    assert out.ok
    assert {f for f, _ in out.factors} == {P("x+y+z"), P("x-y+z")}
    assert out.stats.bifactor_calls == 5


def test_forced_main_variable_not_x_distinct():
    p = P("x^2+x*y+x*z+y*z")
    out = factor(p, Config(main_var="x"))
    assert out.fallback_reason is FallbackReason.NotXDistinct
    assert out.factors == ((p, 1),)
    assert factor(p).ok


def test_contents_units_and_multiplicities():
    p = P("-12*x^3*y*(x*y+z+1)*(y+z^2)*(z^2+x*y^2+x-3)")
    out = factor(p)
    assert out.ok and out.unit == -1 and out.content == 12
    got = {f: m for f, m in out.factors}
    assert got == {P("x"): 3, P("y"): 1, P("x*y+z+1"): 1, P("y+z^2"): 1, P("z^2+x*y^2+x-3"): 1}


def test_univariate_and_bivariate_dispatch():
    out = factor(P("x^4-1", ("x", "y", "z")))
    assert out.ok and len(out.factors) == 3
    out = factor(P("y^2*(x^2-y^2)", ("x", "y")))
    assert {f: m for f, m in out.factors} == {P("y", ("x", "y")): 2, P("x-y", ("x", "y")): 1,
                                              P("x+y", ("x", "y")): 1}


def test_non_squarefree_input_falls_back():
    p = P("(x*y+z+1)^2*(x+y^2*z)")
    out = factor(p)
    assert out.fallback_reason is FallbackReason.NotSquarefree
    assert out.expand() == p


def test_zero_and_constants():
    with pytest.raises(ValueError):
        factor(P("0"))
    out = factor(P("-6"))
    assert out.ok and out.unit == -1 and out.content == 6 and out.factors == ()


def test_config_validation():
    with pytest.raises(ValueError):
        Config(jmax=1)
    with pytest.raises(ValueError):
        Config(backend="external")
    with pytest.raises(ValueError):
        Config(verify=False)


def test_sparse_factor_is_factor():
    p = P("(x*y+z^2)*(x^2-y*z+2)")
    assert multiset(sparse_factor(p)) == multiset(factor(p))


def test_golden_morphism_consistency(golden_outcome, golden_P):
    """Each stored image equals the substitution of the recovered factor, scaled by lc(P)/lc(F)."""
    state = golden_outcome.state
    lcP = leading_coefficient_wrt(golden_P, "b")
    for rec in state.records:
        lc_img = weighted_substitute(lcP, "b", rec.weights)
        images = set()
        for f, _ in golden_outcome.factors:
            g = weighted_substitute(f, "b", rec.weights)
            images.add(normalize_factor(g, lc_img).terms)
        assert {s.terms for s in rec.skeletons} == images


def test_golden_t_degree_conservation(golden_outcome):
    state = golden_outcome.state
    for i in state.tracked():
        w, cols = state.weights[i], state.exponents[i]
        for pos, (_, b, _) in enumerate(state.base[i].terms):
            assert sum(w[k] * cols[k][pos] for k in range(len(w))) == b


def test_sabotaged_state_is_rejected(golden_outcome, golden_P):
    state = golden_outcome.state
    i = state.tracked()[0]
    cols = dict(state.exponents[i])
    col = list(cols[1])
    col[0] += 1
    cols[1] = tuple(col)
    broken = replace(state, exponents=[cols if n == i else e for n, e in enumerate(state.exponents)])
    with pytest.raises(_PassFailed) as info:
        assemble_factors(broken, golden_P)
    assert info.value.reason is FallbackReason.VerificationFailed
    assert assemble_factors(state, golden_P)


def test_canonical_order():
    out = factor(P("(x^3+y*z+1)*(x+y+2*z)"))
    assert [canonical_key(f) for f, _ in out.factors] == sorted(canonical_key(f) for f, _ in out.factors)


# -- properties ---------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_round_trip_and_reason(seed):
    rng = random.Random(seed)
    p, fs = random_product(rng, V, 2, 4, 3, 30)
    out = factor(p)
    assert out.expand() == p
    if out.ok:
        assert sorted(f.terms for f, _ in out.factors) == sorted(f.terms for f in fs)
    else:
        assert out.fallback_reason in FallbackReason


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_seed_does_not_change_result(instance, seed):
    p, _ = random_product(random.Random(instance), ("x", "y", "z", "w"), 2, 4, 3, 30)
    a, b = factor(p), factor(p, Config(seed=seed))
    if a.ok and b.ok:
        assert multiset(a) == multiset(b)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_call_budget(seed):
    p, _ = random_product(random.Random(seed), V, 2, 5, 3, 50)
    out = factor(p)
    if out.ok:
        n = p.nvars - 1
        assert out.stats.bifactor_calls <= n + 1 + out.stats.total_retries
