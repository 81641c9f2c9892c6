"""Sparse multivariate factorization from a handful of bivariate images.

Every variable except a main one is replaced by a power of a single new
variable ``t``.  The base image uses weight 1 for all of them; one probe per
variable raises a single weight to ``j``.  Factors of the images are scaled
so that their leading coefficient in x is the image of lc_x(P), which makes
the images of one true factor comparable across weight vectors.  Terms are
then paired inside each x-degree class by coefficient and the exponent of the
probed variable falls out of the t-degree shift.

All factors but one are reconstructed this way; the last is the exact
quotient of P by the others.
"""

from __future__ import annotations

import enum
import logging
import random
import time
from dataclasses import dataclass, field
from functools import reduce
from operator import mul
from typing import Optional, Sequence

from . import dense
from .bifactor import factor_bivariate, factor_bivariate_external
from .errors import (
    BackendError,
    HeuristicGCDFailed,
    NotDivisible,
    NotIntegral,
    NotSquarefreeError,
    NotXDistinct,
    UnluckyEvaluation,
)
from .poly import (
    BiPoly,
    MultiPoly,
    content_wrt,
    derivative_wrt,
    dilate,
    exact_div,
    heu_gcd,
    integer_content_and_sign,
    leading_coefficient_wrt,
    undilate,
    weighted_substitute,
)
from .unifactor import factor_univariate

log = logging.getLogger(__name__)

DILATION_CHOICES = (-2, -1, 1, 2)
BASE = "(base)"


@dataclass(frozen=True)
class Config:
    jmax: int = 6
    max_dilations: int = 8
    seed: int = 0
    backend: str = "builtin"
    external_cmd: Optional[str] = None
    timeout: float = 60.0
    verify: bool = True
    main_var: Optional[str] = None

    def __post_init__(self):
        if self.jmax < 2:
            raise ValueError("jmax must be at least 2")
        if self.max_dilations < 1:
            raise ValueError("max_dilations must be at least 1")
        if self.backend not in ("builtin", "external"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "external" and not self.external_cmd:
            raise ValueError("the external backend needs a command")
        if not self.verify:
            raise ValueError("verification cannot be disabled")


class FallbackReason(str, enum.Enum):
    NotXDistinct = "NotXDistinct"
    CoefficientTiesPersist = "CoefficientTiesPersist"
    RetriesExhausted = "RetriesExhausted"
    VerificationFailed = "VerificationFailed"
    HeuristicGcdFailed = "HeuristicGcdFailed"
    NotSquarefree = "NotSquarefree"


class Comparison(enum.Enum):
    Equal = "equal"
    EvalPoorer = "poorer"
    EvalRicher = "richer"


# ---------------------------------------------------------------------------
# skeletons


@dataclass(frozen=True)
class FactorSkeleton:
    """Normalized image of one factor: ``(xdeg, tdeg, coeff)`` terms.

    Sorted by x-degree descending, then coefficient ascending.  ``multiplier``
    is the t-polynomial (dense, low degree first) the raw factor was scaled by.
    """

    terms: tuple
    multiplier: tuple = (1,)

    @classmethod
    def from_bipoly(cls, g: BiPoly, multiplier=(1,)):
        terms = sorted(g.terms, key=lambda term: (-term[0], term[2], term[1]))
        return cls(tuple(terms), tuple(multiplier))

    def __len__(self):
        return len(self.terms)

    @property
    def xsupport(self):
        """``((xdeg, count), ...)`` in descending x-degree."""
        counts = {}
        for a, _, _ in self.terms:
            counts[a] = counts.get(a, 0) + 1
        return tuple(sorted(counts.items(), reverse=True))

    @property
    def xdegrees(self):
        return frozenset(a for a, _, _ in self.terms)

    @property
    def at_one(self):
        """The skeleton at t = 1: the same for every weight vector."""
        sums = {}
        for a, _, c in self.terms:
            sums[a] = sums.get(a, 0) + c
        return tuple(sorted((a, c) for a, c in sums.items() if c))

    def classes(self):
        out = {}
        for a, b, c in self.terms:
            out.setdefault(a, []).append((b, c))
        return out

    def tied_classes(self):
        return sorted(a for a, cls in self.classes().items()
                      if len({c for _, c in cls}) < len(cls))

    def to_bipoly(self) -> BiPoly:
        return BiPoly(self.terms)


@dataclass(frozen=True)
class EvaluationRecord:
    varindex: int
    weight: int
    weights: tuple
    skeletons: tuple


def normalize_factor(f: BiPoly, lcP_img: BiPoly) -> FactorSkeleton:
    """Scale f so that its leading coefficient in x becomes ``lcP_img``."""
    if lcP_img.is_zero():
        raise UnluckyEvaluation("leading coefficient vanishes under substitution")
    q = dense.exact_quo(lcP_img.t_coeffs(), f.lc_x().t_coeffs())
    if q is None:
        raise UnluckyEvaluation("leading coefficient of the factor does not divide lc(P)")
    return FactorSkeleton.from_bipoly(f * BiPoly.from_t(q), q)


def _check_x_distinct(skeletons):
    seen = {}
    for i, s in enumerate(skeletons):
        if s.xsupport in seen:
            raise NotXDistinct(f"factors {seen[s.xsupport]} and {i} share x-support {s.xsupport}")
        seen[s.xsupport] = i


def match_by_x_support(base: Sequence[FactorSkeleton], evals: Sequence[FactorSkeleton],
                       strict: bool = True):
    """``pairing[i]`` is the index in ``evals`` matching ``base[i]``.

    The skeletons at t = 1 do not depend on the weights, so when they tell
    the base factors apart they decide the pairing.  Otherwise factors are
    grouped by their set of x-degrees and a group with several members is
    resolved by exact per-degree term counts.  With ``strict`` two base
    factors of identical x-support raise NotXDistinct.
    """
    if strict:
        _check_x_distinct(base)
    if len(base) != len(evals):
        raise UnluckyEvaluation(f"{len(evals)} factors instead of {len(base)}")
    keys = [s.at_one for s in base]
    if len(set(keys)) == len(keys):
        where = {s.at_one: i for i, s in enumerate(evals)}
        if len(where) != len(evals) or set(where) != set(keys):
            raise UnluckyEvaluation("factor values at t = 1 do not match")
        return [where[k] for k in keys]
    groups_b, groups_e = {}, {}
    for i, s in enumerate(base):
        groups_b.setdefault(s.xdegrees, []).append(i)
    for i, s in enumerate(evals):
        groups_e.setdefault(s.xdegrees, []).append(i)
    pairing = [None] * len(base)
    for key, bs in groups_b.items():
        es = groups_e.get(key, [])
        if len(es) != len(bs):
            raise UnluckyEvaluation("x-degree patterns do not match")
        if len(bs) == 1:
            pairing[bs[0]] = es[0]
            continue
        for i in bs:
            hits = [e for e in es if evals[e].xsupport == base[i].xsupport]
            if len(hits) != 1:
                raise UnluckyEvaluation("ambiguous pairing of factors with equal x-degrees")
            pairing[i] = hits[0]
    if len(set(pairing)) != len(pairing):
        raise UnluckyEvaluation("pairing is not a bijection")
    return pairing


def compare_counts(base: FactorSkeleton, ev: FactorSkeleton) -> Comparison:
    if base.xsupport == ev.xsupport:
        return Comparison.Equal
    if len(ev) > len(base):
        return Comparison.EvalRicher
    return Comparison.EvalPoorer


def reconstruct_variable(base: FactorSkeleton, ev: FactorSkeleton, j: int, k: int,
                         base_weight: int = 1, bound: Optional[int] = None):
    """Exponent of variable ``k`` for every term of ``base`` (in base order).

    ``ev`` is the image at a weight vector that differs from the base one only
    in coordinate ``k``, where it is ``j`` instead of ``base_weight``.
    """
    if j == base_weight:
        raise ValueError("probe weight must differ from the base weight")
    if base.xsupport != ev.xsupport:
        raise UnluckyEvaluation("skeletons have different x-support")
    step = j - base_weight
    out = []
    for (a, tb, cb), (a2, te, ce) in zip(base.terms, ev.terms):
        if a != a2 or cb != ce:
            raise UnluckyEvaluation(f"coefficient mismatch in x-degree class {a}")
        e, r = divmod(te - tb, step)
        if r or e < 0 or (bound is not None and e > bound):
            raise UnluckyEvaluation(f"exponent ({te}-{tb})/{step} of variable {k} is not admissible")
        out.append(e)
    # a tied class could still pair terms the wrong way round
    for a, cls in base.classes().items():
        if len({c for _, c in cls}) < len(cls):
            raise UnluckyEvaluation(f"coefficient ties in x-degree class {a}")
    return tuple(out)


def choose_main_variable(P: MultiPoly) -> int:
    """Index of the variable of smallest positive partial degree (lowest index on ties)."""
    best = None
    for i, d in enumerate(P.degrees()):
        if d > 0 and (best is None or d < best[0]):
            best = (d, i)
    if best is None:
        raise ValueError("constant polynomial has no main variable")
    return best[1]


# ---------------------------------------------------------------------------
# state and outcome


@dataclass
class Stats:
    bifactor_calls: int = 0
    calls: dict = field(default_factory=dict)
    dilations: int = 0
    probes: dict = field(default_factory=dict)
    base_sizes: list = field(default_factory=list)
    main_var: Optional[str] = None
    scales: Optional[tuple] = None
    backend_fallbacks: int = 0
    ms: float = 0.0
    state: Optional["ReconstructionState"] = field(default=None, repr=False)

    @property
    def retries(self):
        """Calls beyond the first, per variable; ``(base)`` counts extra base images."""
        return {k: c - 1 for k, c in self.calls.items()}

    @property
    def total_retries(self):
        return sum(self.retries.values())

    def as_dict(self):
        return {
            "bifactor_calls": self.bifactor_calls,
            "retries": dict(self.retries),
            "dilations": self.dilations,
            "probes": {k: [list(p) for p in v] for k, v in self.probes.items()},
            "base_sizes": list(self.base_sizes),
            "main_var": self.main_var,
            "ms": round(self.ms, 3),
        }


@dataclass
class ReconstructionState:
    """Per-pass reconstruction data.

    Factor ``i`` has its own base skeleton ``base[i]`` taken at weight vector
    ``weights[i]``; ``exponents[i]`` maps a variable position to the column of
    exponents aligned with ``base[i].terms``.  ``leftover`` is the factor that
    is recovered by division rather than reconstruction.
    """

    variables: tuple
    main: int
    others: tuple
    base: list
    weights: list
    exponents: list
    leftover: int
    scales: tuple
    tried: list = field(default_factory=list)
    records: list = field(default_factory=list)

    def tracked(self):
        return [i for i in range(len(self.base)) if i != self.leftover]

    def missing(self, i):
        return [k for k in range(len(self.others)) if k not in self.exponents[i]]

    def restart(self, i, skeleton, weights):
        self.base[i] = skeleton
        self.weights[i] = weights
        self.exponents[i] = {}
        self.tried[i] = {}


@dataclass
class SparseFactorOutcome:
    """Result of :func:`factor`: ``unit * content * prod(f**m)`` is the input."""

    variables: tuple
    unit: int = 1
    content: int = 1
    factors: tuple = ()
    fallback_reason: Optional[FallbackReason] = None
    detail: str = ""
    stats: Stats = field(default_factory=Stats)
    state: Optional[ReconstructionState] = None

    @property
    def ok(self):
        return self.fallback_reason is None

    def expand(self) -> MultiPoly:
        out = MultiPoly.constant(self.variables, self.unit * self.content)
        for f, m in self.factors:
            out = out * f ** m
        return out


class _PassFailed(Exception):
    def __init__(self, reason, detail, redraw=False):
        super().__init__(detail)
        self.reason = reason
        self.redraw = redraw


# ---------------------------------------------------------------------------
# the reconstruction pass


class _Prober:
    """Counts and caches bivariate factorizations of images of one polynomial."""

    def __init__(self, P, main, cfg, stats, rng):
        self.P = P
        self.main = main
        self.cfg = cfg
        self.stats = stats
        self.rng = rng
        self.lcP = leading_coefficient_wrt(P, main)
        self.cache = {}

    def bifactor(self, F, key=BASE):
        self.stats.bifactor_calls += 1
        self.stats.calls[key] = self.stats.calls.get(key, 0) + 1
        if self.cfg.backend == "external":
            try:
                return factor_bivariate_external(F, self.cfg.external_cmd, self.cfg.timeout, self.rng)
            except BackendError as exc:
                log.warning("%s; using the built-in factorizer", exc)
                self.stats.backend_fallbacks += 1
                return exc.fallback
        return factor_bivariate(F, self.rng)

    def skeletons(self, weights, key=BASE):
        """Normalized factor skeletons at ``weights`` (cached; may raise UnluckyEvaluation)."""
        if weights not in self.cache:
            self.cache[weights] = self._compute(weights, key)
        result = self.cache[weights]
        if isinstance(result, Exception):
            raise result
        return result

    def _compute(self, weights, key):
        try:
            lc_img = weighted_substitute(self.lcP, self.main, weights)
            if lc_img.is_zero():
                return UnluckyEvaluation("leading coefficient vanishes under substitution")
            F = weighted_substitute(self.P, self.main, weights)
        except OverflowError as exc:
            return UnluckyEvaluation(str(exc))
        try:
            fact = self.bifactor(F, key)
        except NotSquarefreeError as exc:
            return UnluckyEvaluation(f"image is not square-free: {exc}")
        try:
            return tuple(normalize_factor(f, lc_img) for f in fact.factors)
        except UnluckyEvaluation as exc:
            return exc


def _note_probe(stats, name, j, outcome):
    stats.probes.setdefault(name, []).append((j, outcome))


def _run_pass(P, main, scales, cfg, stats, rng):
    """One reconstruction attempt on the dilated image of P; returns the factors of P."""
    variables = P.variables
    others = tuple(i for i in range(len(variables)) if i != main)
    n1 = len(others)
    Pd = dilate(P, main, scales) if any(s != 1 for s in scales) else P
    prober = _Prober(Pd, main, cfg, stats, rng)
    ones = (1,) * n1

    try:
        base = prober.skeletons(ones)
    except UnluckyEvaluation as exc:
        if "square-free" in str(exc):
            # a square-free P can still have a square image; a new dilation may separate it
            raise _PassFailed(FallbackReason.NotSquarefree, str(exc), redraw=_is_squarefree(P, main))
        raise _PassFailed(FallbackReason.VerificationFailed, str(exc), redraw=True)
    stats.base_sizes = [len(s) for s in base]
    if len(base) <= 1:
        return [P]
    try:
        _check_x_distinct(base)
    except NotXDistinct as exc:
        raise _PassFailed(FallbackReason.NotXDistinct, str(exc))

    leftover = max(range(len(base)), key=lambda i: (len(base[i]), i))
    state = ReconstructionState(
        variables=variables, main=main, others=others, base=list(base),
        weights=[ones] * len(base), exponents=[{} for _ in base], leftover=leftover,
        scales=tuple(scales), tried=[{} for _ in base])
    stats.state = state
    _check_ties(state)

    bounds = [Pd.degree(k) for k in others]
    _probe_all(state, prober, cfg, stats, bounds)
    return assemble_factors(state, P)


def _probe_all(state, prober, cfg, stats, bounds):
    variables, others = state.variables, state.others
    n1 = len(others)
    while True:
        pending = [k for k in range(n1) if any(k in state.missing(i) for i in state.tracked())]
        if not pending:
            break
        k = pending[0]
        name = variables[others[k]]
        needing = [i for i in state.tracked() if k in state.missing(i)]
        nxt = {}
        for i in needing:
            done = state.tried[i].setdefault(k, set())
            choices = [j for j in range(2, cfg.jmax + 1) if j != state.weights[i][k] and j not in done]
            if not choices:
                raise _PassFailed(FallbackReason.RetriesExhausted,
                                  f"no admissible weight up to {cfg.jmax} for variable {name}")
            nxt[i] = choices[0]
        j = min(nxt.values())
        group = [i for i in needing if nxt[i] == j]
        outcomes = []
        for i in group:
            state.tried[i][k].add(j)
            w = state.weights[i][:k] + (j,) + state.weights[i][k + 1:]
            fresh = w not in prober.cache
            outcomes.append(_probe_factor(state, prober, i, k, j, w, bounds[k], name))
            if fresh:
                _note_probe(stats, name, j, outcomes[-1])
        log.debug("variable %s weight %d: %s", name, j, outcomes)


def _check_ties(state):
    for i in state.tracked():
        tied = state.base[i].tied_classes()
        if tied:
            raise _PassFailed(FallbackReason.CoefficientTiesPersist,
                              f"coefficient ties in factor {i}, x-degrees {tied}", redraw=True)


def _probe_factor(state, prober, i, k, j, w, bound, name):
    try:
        evals = prober.skeletons(w, name)
        current = list(state.base)
        pairing = match_by_x_support(current, evals, strict=False)
    except UnluckyEvaluation:
        return "unlucky"
    ev = evals[pairing[i]]
    cmp = compare_counts(state.base[i], ev)
    if cmp is Comparison.EvalPoorer:
        return "unlucky"
    if cmp is Comparison.EvalRicher:
        state.restart(i, ev, w)
        if ev.tied_classes():
            _check_ties(state)
        return "restart"
    try:
        col = reconstruct_variable(state.base[i], ev, j, k, state.weights[i][k], bound)
    except UnluckyEvaluation:
        return "unlucky"
    state.exponents[i][k] = col
    state.records.append(EvaluationRecord(k, j, w, tuple(evals)))
    return "ok"


def assemble_factors(state: ReconstructionState, P: MultiPoly):
    """Factors of P from a completed state; the leftover one by exact division."""
    variables, main, others = state.variables, state.main, state.others
    n = len(variables)
    found = []
    for i in state.tracked():
        skel, w, cols = state.base[i], state.weights[i], state.exponents[i]
        terms = {}
        for pos, (a, b, c) in enumerate(skel.terms):
            e = [0] * n
            e[main] = a
            tdeg = 0
            for k, v in enumerate(others):
                e[v] = cols[k][pos]
                tdeg += w[k] * e[v]
            if tdeg != b:
                raise _PassFailed(FallbackReason.VerificationFailed,
                                  f"t-degree {tdeg} does not match {b} in factor {i}", redraw=True)
            terms[tuple(e)] = c
        G = MultiPoly.from_dict(variables, terms)
        try:
            G = undilate(G, main, state.scales)
            cont = content_wrt(G, main)
        except NotIntegral as exc:
            raise _PassFailed(FallbackReason.VerificationFailed, str(exc), redraw=True)
        except HeuristicGCDFailed as exc:
            raise _PassFailed(FallbackReason.HeuristicGcdFailed, str(exc))
        try:
            F = exact_div(G, cont)
        except NotDivisible as exc:
            raise _PassFailed(FallbackReason.VerificationFailed, str(exc), redraw=True)
        _, F = integer_content_and_sign(F)
        if F.degree(main) < 1:
            raise _PassFailed(FallbackReason.VerificationFailed, "factor lost the main variable",
                              redraw=True)
        found.append(F)
    try:
        last = exact_div(P, reduce(mul, found))
    except NotDivisible:
        raise _PassFailed(FallbackReason.VerificationFailed,
                          "reconstructed factors do not divide the input", redraw=True)
    if last.degree(main) < 1:
        raise _PassFailed(FallbackReason.VerificationFailed, "quotient lost the main variable",
                          redraw=True)
    found.append(last)
    return found


def _draw_scales(rng, n1):
    while True:
        scales = tuple(rng.choice(DILATION_CHOICES) for _ in range(n1))
        if any(s != 1 for s in scales):
            return scales


def _lift_factors(P: MultiPoly, cfg: Config, stats: Stats, rng):
    """Irreducible factors of a primitive P without monomial or main-variable content.

    Returns ``(factors, None)`` or ``(None, (reason, detail))``.
    """
    main = P.variables.index(cfg.main_var) if cfg.main_var in P.variables else choose_main_variable(P)
    stats.main_var = P.variables[main]
    n1 = P.nvars - 1
    scales = (1,) * n1
    failure = None
    for attempt in range(cfg.max_dilations + 1):
        if attempt:
            stats.dilations += 1
            scales = _draw_scales(rng, n1)
        stats.scales = scales
        try:
            return _run_pass(P, main, scales, cfg, stats, rng), None
        except _PassFailed as exc:
            log.info("pass %d with scales %s failed: %s (%s)", attempt, scales, exc.reason.value, exc)
            failure = (exc.reason, str(exc))
            if not exc.redraw:
                break
    return None, failure


def _is_squarefree(P, main):
    try:
        g = heu_gcd(P, derivative_wrt(P, P.variables[main]))
    except HeuristicGCDFailed:
        return True
    return g.degree(main) < 1


# ---------------------------------------------------------------------------
# top-level dispatcher


def canonical_key(p: MultiPoly):
    total = max((sum(e) for e, _ in p.terms), default=0)
    return (total, p.terms)


def _monomial_content(P):
    mins = [min(e[i] for e, _ in P.terms) for i in range(P.nvars)]
    if not any(mins):
        return mins, P
    core = MultiPoly.from_dict(P.variables, {
        tuple(a - m for a, m in zip(e, mins)): c for e, c in P.terms})
    return mins, core


def _bivariate_factors(Q, cfg, stats, rng):
    main = Q.variables.index(cfg.main_var) if cfg.main_var in Q.variables else choose_main_variable(Q)
    other = 1 - main
    stats.main_var = Q.variables[main]
    F = weighted_substitute(Q, main, (1,))
    prober = _Prober(Q, main, cfg, stats, rng)
    fact = prober.bifactor(F)

    def back(g: BiPoly):
        out = {}
        for a, b, c in g.terms:
            e = [0, 0]
            e[main], e[other] = a, b
            out[tuple(e)] = c
        return MultiPoly.from_dict(Q.variables, out)

    result = [(back(f), 1) for f in fact.factors]
    cont = fact.content_t.t_coeffs()
    if len(cont) > 1:
        _, _, facs = factor_univariate(cont, rng)
        result += [(back(BiPoly.from_t(g)), m) for g, m in facs]
    return result


def _factor_core(P, cfg, stats, rng):
    """Factor a primitive P with positive lc and no monomial content."""
    used = P.used_variables()
    if len(used) < P.nvars:
        Q = P.with_variables(used)
        res = _factor_core(Q, cfg, stats, rng)
        return [(f.with_variables(P.variables), m) for f, m in res]
    if P.nvars == 0 or P.is_constant():
        return []
    if P.nvars == 1:
        _, _, facs = factor_univariate([P.as_dict().get((d,), 0) for d in range(P.degree(0) + 1)], rng)
        return [(MultiPoly.from_dict(P.variables, {(d,): c for d, c in enumerate(g) if c}), m)
                for g, m in facs]
    if P.nvars == 2:
        try:
            return _bivariate_factors(P, cfg, stats, rng)
        except NotSquarefreeError as exc:
            raise _PassFailed(FallbackReason.NotSquarefree, str(exc))
    main = P.variables.index(cfg.main_var) if cfg.main_var in P.variables else choose_main_variable(P)
    try:
        cont = content_wrt(P, P.variables[main])
    except HeuristicGCDFailed as exc:
        raise _PassFailed(FallbackReason.HeuristicGcdFailed, str(exc))
    if not cont.is_constant():
        rest = exact_div(P, cont)
        return _factor_core(cont, cfg, stats, rng) + _factor_core(rest, cfg, stats, rng)
    factors, failure = _lift_factors(P, cfg, stats, rng)
    if failure:
        raise _PassFailed(*failure)
    return [(f, 1) for f in factors]


def factor(P: MultiPoly, cfg: Optional[Config] = None) -> SparseFactorOutcome:
    """Factor P over the integers, dispatching on the number of variables.

    On failure the outcome carries a ``fallback_reason`` and the input itself
    as its only factor.
    """
    if P.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    cfg = cfg or Config()
    rng = random.Random(cfg.seed)
    stats = Stats()
    start = time.perf_counter()
    content, core = integer_content_and_sign(P)
    unit = 1 if P.lc > 0 else -1
    mins, core = _monomial_content(core)
    out = SparseFactorOutcome(P.variables, unit, content, stats=stats)
    try:
        found = _factor_core(core, cfg, stats, rng)
    except _PassFailed as exc:
        out.fallback_reason = exc.reason
        out.detail = str(exc)
        out.factors = ((exact_div(P, MultiPoly.constant(P.variables, unit * content)), 1),) \
            if not P.is_constant() else ()
    else:
        for i, m in enumerate(mins):
            if m:
                found.append((MultiPoly.variable(P.variables, P.variables[i]), m))
        merged = {}
        for f, m in found:
            # positive-lc factors multiply to the positive-lc core, so the unit is unaffected
            if f.lc < 0:
                f = -f
            merged[f] = merged.get(f, 0) + m
        out.factors = tuple(sorted(merged.items(), key=lambda fm: canonical_key(fm[0])))
    out.state = stats.state
    stats.ms = (time.perf_counter() - start) * 1000
    if out.expand() != P:
        raise AssertionError("factorization does not reproduce its input")
    return out


def sparse_factor(P: MultiPoly, cfg: Optional[Config] = None) -> SparseFactorOutcome:
    """Full pipeline for inputs in three or more variables (same as :func:`factor`)."""
    return factor(P, cfg)
