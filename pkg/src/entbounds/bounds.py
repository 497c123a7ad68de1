"""Monogamy and polygamy bound families for bipartite correlation values.

Scalar arithmetic only: the tightened two-term lower/upper bounds with the
(t, q) window, the three prior bound families they are compared against,
the N-partite chained forms, and a detailed admissibility checker.  All
correlation values (pairwise and residual) are supplied by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

GRACE = 1e-12  # relative grace band on admissibility comparisons


class BoundsError(ValueError):
    """Invalid argument domains for bound evaluation."""


class PreconditionError(BoundsError):
    """Hypotheses of a bound are not satisfied by the supplied values."""


class ChainStepError(PreconditionError):
    """A per-step hypothesis of a chained bound failed."""

    def __init__(self, step: int, message: str):
        super().__init__(f"chain step {step}: {message}")
        self.step = step


def _pow(base: float, exponent: float) -> float:
    """Power with the 0^0 = 1 convention used throughout the bounds."""
    if exponent == 0.0:
        return 1.0
    if base == 0.0:
        return 0.0
    return float(base ** exponent)


@dataclass(frozen=True)
class MonogamyParams:
    """Exponent bundle (alpha, gamma, t, q) for the lower-bound family.

    Admissible ranges: gamma >= 2, 0 <= alpha <= gamma, t >= 1,
    1 < q <= 1 + 1/t; checked by validate_params, not at construction,
    so that report-only evaluation of bad parameters is possible.
    """

    alpha: float
    gamma: float
    t: float
    q: float

    def __post_init__(self):
        for name in ("alpha", "gamma", "t", "q"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise BoundsError(f"{name} must be finite, got {v}")


@dataclass(frozen=True)
class PolygamyParams:
    """Exponent bundle (beta, delta, t, q) for the upper-bound family.

    Admissible ranges: 0 <= delta <= 1, beta >= delta, t >= 1,
    1 < q <= 1 + 1/t; checked by validate_params.
    """

    beta: float
    delta: float
    t: float
    q: float

    def __post_init__(self):
        for name in ("beta", "delta", "t", "q"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise BoundsError(f"{name} must be finite, got {v}")


@dataclass(frozen=True)
class ChainParams:
    """Per-step (t_r, q_r) lists for the chained N-partite bounds.

    split_index m (1-based, 1 <= m <= N-3) selects the mixed
    forward/reversed form; None means every step is forward.
    """

    ts: tuple[float, ...]
    qs: tuple[float, ...]
    split_index: int | None = None

    def __post_init__(self):
        ts = tuple(float(t) for t in self.ts)
        qs = tuple(float(q) for q in self.qs)
        if len(ts) != len(qs):
            raise BoundsError("ts and qs must have equal length")
        if not ts:
            raise BoundsError("chain needs at least one step")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "qs", qs)
        if self.split_index is not None:
            n_steps = len(ts)
            if not 1 <= self.split_index <= n_steps - 1:
                raise BoundsError(
                    f"split_index {self.split_index} outside [1, {n_steps - 1}]")


@dataclass(frozen=True)
class Condition:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class AdmissibilityReport:
    kind: str
    conditions: tuple[Condition, ...]
    vacuous: bool = False

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.conditions)

    def failed(self) -> list[str]:
        return [c.name for c in self.conditions if not c.ok]

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "vacuous": self.vacuous,
            "conditions": [
                {"name": c.name, "ok": c.ok, "detail": c.detail}
                for c in self.conditions
            ],
        }


def lemma1_f(x: float, m: float, q: float) -> float:
    """(1 + x)^m - q^(m-1) x^m, the scalar function behind both bound
    families."""
    if not (x > 0):
        raise BoundsError(f"x must be positive, got {x}")
    if not (q > 1):
        raise BoundsError(f"q must exceed 1, got {q}")
    if m < 0:
        raise BoundsError(f"exponent must be nonnegative, got {m}")
    return (1.0 + x) ** m - q ** (m - 1.0) * x ** m


def lemma1_check(x: float, t: float, q: float, exponent: float,
                 branch: str, slack: float = 1e-12) -> bool:
    """Evaluate one branch of the window inequality at a single point.

    branch "m" (exponent in [0, 1]) tests f(x) >= f(t); branch "n"
    (exponent >= 1) tests f(x) <= f(t).  Precondition violations raise
    PreconditionError; an inequality failure returns False.
    """
    if not (x >= t >= 1.0):
        raise PreconditionError(f"need x >= t >= 1, got x={x}, t={t}")
    lo, hi = 1.0 + 1.0 / x, 1.0 + 1.0 / t
    if not (lo * (1 - GRACE) <= q <= hi * (1 + GRACE)):
        raise PreconditionError(f"q={q} outside window [{lo}, {hi}]")
    if branch == "m":
        if not 0.0 <= exponent <= 1.0:
            raise PreconditionError(f"branch m needs exponent in [0,1], got {exponent}")
        return lemma1_f(x, exponent, q) >= lemma1_f(t, exponent, q) - slack
    if branch == "n":
        if exponent < 1.0:
            raise PreconditionError(f"branch n needs exponent >= 1, got {exponent}")
        return lemma1_f(x, exponent, q) <= lemma1_f(t, exponent, q) + slack
    raise BoundsError(f"branch must be 'm' or 'n', got {branch!r}")


def _window_conditions(kind: str, q_ab: float, q_ac: float, power: float,
                       t: float, q: float) -> list[Condition]:
    conds = [Condition("t_ge_1", t >= 1.0, f"t = {t}")]
    ab = _pow(q_ab, power)
    ac = _pow(q_ac, power)
    dom_ok = ac >= t * ab * (1.0 - GRACE)
    conds.append(Condition(
        "dominance", dom_ok,
        f"Q_AC^{kind} = {ac} vs t * Q_AB^{kind} = {t * ab}"))
    if ac > 0.0:
        lo = 1.0 + ab / ac
    else:
        lo = 1.0
    hi = 1.0 + (1.0 / t if t > 0 else math.inf)
    win_ok = (q > 1.0) and (lo * (1.0 - GRACE) <= q <= hi * (1.0 + GRACE))
    conds.append(Condition(
        "q_window", win_ok, f"q = {q}, window [{lo}, {hi}]"))
    return conds


def validate_params(kind: str, q_ab: float, q_ac: float,
                    params: MonogamyParams | PolygamyParams) -> AdmissibilityReport:
    """Per-condition admissibility report for a bound evaluation.

    kind is "monogamy" or "polygamy".  Both correlation values zero makes
    every condition pass vacuously (the bound is trivially zero).
    """
    if q_ab < 0 or q_ac < 0:
        raise BoundsError("correlation values must be nonnegative")
    if kind == "monogamy":
        if not isinstance(params, MonogamyParams):
            raise BoundsError("monogamy kind requires MonogamyParams")
        power = params.gamma
        range_conds = [
            Condition("gamma_ge_2", params.gamma >= 2.0, f"gamma = {params.gamma}"),
            Condition("alpha_range", 0.0 <= params.alpha <= params.gamma,
                      f"alpha = {params.alpha}, gamma = {params.gamma}"),
        ]
    elif kind == "polygamy":
        if not isinstance(params, PolygamyParams):
            raise BoundsError("polygamy kind requires PolygamyParams")
        power = params.delta
        range_conds = [
            Condition("delta_range", 0.0 <= params.delta <= 1.0,
                      f"delta = {params.delta}"),
            Condition("beta_ge_delta", params.beta >= params.delta,
                      f"beta = {params.beta}, delta = {params.delta}"),
        ]
    else:
        raise BoundsError(f"kind must be 'monogamy' or 'polygamy', got {kind!r}")

    if q_ab == 0.0 and q_ac == 0.0:
        vac = [Condition(c.name, True, "vacuous: both correlations zero")
               for c in range_conds]
        vac += [Condition(n, True, "vacuous: both correlations zero")
                for n in ("t_ge_1", "dominance", "q_window")]
        return AdmissibilityReport(kind, tuple(vac), vacuous=True)

    conds = range_conds + _window_conditions(
        kind, q_ab, q_ac, power, params.t, params.q)
    return AdmissibilityReport(kind, tuple(conds))


def _lemma_coeff(t: float, q: float, e: float) -> float:
    """(1 + t)^e - q^(e-1) t^e, the pair-term coefficient of the bounds."""
    return _pow(1.0 + t, e) - _pow(q, e - 1.0) * _pow(t, e)


def _two_term_bound(q_ab: float, q_ac: float, exp_num: float, exp_den: float,
                    t: float, q: float) -> float:
    e = exp_num / exp_den
    if q_ab == 0.0 and q_ac == 0.0:
        return 0.0
    if q_ab == 0.0:
        return _pow(q, e - 1.0) * _pow(q_ac, exp_num)
    return (_lemma_coeff(t, q, e) * _pow(q_ab, exp_num)
            + _pow(q, e - 1.0) * _pow(q_ac, exp_num))


def thm1_lower_bound(q_ab: float, q_ac: float, p: MonogamyParams) -> float:
    """Tightened monogamy lower bound
    ((1+t)^(a/g) - q^(a/g-1) t^(a/g)) Q_AB^a + q^(a/g-1) Q_AC^a."""
    report = validate_params("monogamy", q_ab, q_ac, p)
    if not report.ok:
        raise PreconditionError(f"inadmissible: {report.failed()}")
    return _two_term_bound(q_ab, q_ac, p.alpha, p.gamma, p.t, p.q)


def thm4_upper_bound(q_ab: float, q_ac: float, p: PolygamyParams) -> float:
    """Tightened polygamy upper bound, the (beta, delta) mirror of the
    monogamy form."""
    if p.delta == 0.0:
        raise PreconditionError("delta must be positive to evaluate the bound")
    report = validate_params("polygamy", q_ab, q_ac, p)
    if not report.ok:
        raise PreconditionError(f"inadmissible: {report.failed()}")
    return _two_term_bound(q_ab, q_ac, p.beta, p.delta, p.t, p.q)


def _check_prior_dominance(q_ab: float, q_ac: float, power: float,
                           factor: float, name: str) -> None:
    if factor < 1.0:
        raise PreconditionError(f"{name} must be >= 1, got {factor}")
    if _pow(q_ac, power) < factor * _pow(q_ab, power) * (1.0 - GRACE):
        raise PreconditionError(
            f"dominance Q_AC^{power} >= {name} * Q_AB^{power} fails")


def prior_monogamy_bound(variant: str, q_ab: float, q_ac: float, *,
                         alpha: float, gamma: float, k: float | None = None,
                         p: float | None = None, a: float | None = None) -> float:
    """Earlier lower-bound families used for tightness comparisons.

    ref16: Q_AB^a + ((1+k)^(a/g) - 1)/k^(a/g) Q_AC^a           (0 <= a <= g)
    ref28: p^(a/g) Q_AB^a + ((1+k)^(a/g) - p^(a/g))/k^(a/g) Q_AC^a
           with 1/2 <= p <= 1 and 0 <= a <= g/2
    ref29: (1+a)^(a/g - 1) Q_AB^a + (1 + 1/a)^(a/g - 1) Q_AC^a
    """
    if q_ab < 0 or q_ac < 0:
        raise BoundsError("correlation values must be nonnegative")
    if gamma < 2.0:
        raise PreconditionError(f"gamma must be >= 2, got {gamma}")
    if not 0.0 <= alpha <= gamma:
        raise PreconditionError(f"alpha {alpha} outside [0, {gamma}]")
    if q_ab == 0.0 and q_ac == 0.0:
        return 0.0
    e = alpha / gamma
    if variant == "ref16":
        if k is None:
            raise BoundsError("ref16 requires k")
        _check_prior_dominance(q_ab, q_ac, gamma, k, "k")
        coeff = (_pow(1.0 + k, e) - 1.0) / _pow(k, e)
        return _pow(q_ab, alpha) + coeff * _pow(q_ac, alpha)
    if variant == "ref28":
        if k is None or p is None:
            raise BoundsError("ref28 requires k and p")
        if not 0.5 <= p <= 1.0:
            raise PreconditionError(f"ref28 needs p in [1/2, 1], got {p}")
        if alpha > gamma / 2.0:
            raise PreconditionError(f"ref28 needs alpha <= gamma/2, got {alpha}")
        _check_prior_dominance(q_ab, q_ac, gamma, k, "k")
        coeff = (_pow(1.0 + k, e) - _pow(p, e)) / _pow(k, e)
        return _pow(p, e) * _pow(q_ab, alpha) + coeff * _pow(q_ac, alpha)
    if variant == "ref29":
        if a is None:
            raise BoundsError("ref29 requires a")
        _check_prior_dominance(q_ab, q_ac, gamma, a, "a")
        return (_pow(1.0 + a, e - 1.0) * _pow(q_ab, alpha)
                + _pow(1.0 + 1.0 / a, e - 1.0) * _pow(q_ac, alpha))
    raise BoundsError(f"unknown monogamy variant {variant!r}")


def prior_polygamy_bound(variant: str, q_ab: float, q_ac: float, *,
                         beta: float, delta: float, k: float | None = None,
                         p: float | None = None, a: float | None = None) -> float:
    """Earlier upper-bound families, the (beta >= delta) mirrors of the
    monogamy priors; ref28 here allows 0 <= p <= 1."""
    if q_ab < 0 or q_ac < 0:
        raise BoundsError("correlation values must be nonnegative")
    if not 0.0 < delta <= 1.0:
        raise PreconditionError(f"delta must be in (0, 1], got {delta}")
    if beta < delta:
        raise PreconditionError(f"beta {beta} below delta {delta}")
    if q_ab == 0.0 and q_ac == 0.0:
        return 0.0
    e = beta / delta
    if variant == "ref16":
        if k is None:
            raise BoundsError("ref16 requires k")
        _check_prior_dominance(q_ab, q_ac, delta, k, "k")
        coeff = (_pow(1.0 + k, e) - 1.0) / _pow(k, e)
        return _pow(q_ab, beta) + coeff * _pow(q_ac, beta)
    if variant == "ref28":
        if k is None or p is None:
            raise BoundsError("ref28 requires k and p")
        if not 0.0 <= p <= 1.0:
            raise PreconditionError(f"ref28 needs p in [0, 1], got {p}")
        _check_prior_dominance(q_ab, q_ac, delta, k, "k")
        coeff = (_pow(1.0 + k, e) - _pow(p, e)) / _pow(k, e)
        return _pow(p, e) * _pow(q_ab, beta) + coeff * _pow(q_ac, beta)
    if variant == "ref29":
        if a is None:
            raise BoundsError("ref29 requires a")
        _check_prior_dominance(q_ab, q_ac, delta, a, "a")
        return (_pow(1.0 + a, e - 1.0) * _pow(q_ab, beta)
                + _pow(1.0 + 1.0 / a, e - 1.0) * _pow(q_ac, beta))
    raise BoundsError(f"unknown polygamy variant {variant!r}")


def _check_step(step: int, pair: float, resid: float, power: float,
                t: float, q: float, forward: bool) -> None:
    """Hypotheses of one chain step; `forward` means the residual block
    dominates the pair, reversed means the pair dominates the residual."""
    if t < 1.0:
        raise ChainStepError(step, f"t = {t} must be >= 1")
    small, large = (pair, resid) if forward else (resid, pair)
    sp, lp = _pow(small, power), _pow(large, power)
    if lp < t * sp * (1.0 - GRACE):
        raise ChainStepError(
            step, f"dominance fails: {lp} < t * {sp} (t = {t})")
    if sp == 0.0 and lp == 0.0:
        return
    lo = 1.0 + (sp / lp if lp > 0 else math.inf)
    hi = 1.0 + 1.0 / t
    if not (q > 1.0 and lo * (1.0 - GRACE) <= q <= hi * (1.0 + GRACE)):
        raise ChainStepError(step, f"q = {q} outside window [{lo}, {hi}]")


def _chain_bound(q_pairs, q_residuals, cp: ChainParams,
                 exp_num: float, exp_den: float) -> float:
    n_steps = len(cp.ts)
    if len(q_pairs) != n_steps + 1:
        raise BoundsError(
            f"{n_steps} steps require {n_steps + 1} pair values, got {len(q_pairs)}")
    if len(q_residuals) != n_steps:
        raise BoundsError(
            f"{n_steps} steps require {n_steps} residual values, got {len(q_residuals)}")
    if any(v < 0 for v in q_pairs) or any(v < 0 for v in q_residuals):
        raise BoundsError("correlation values must be nonnegative")
    if all(v == 0.0 for v in q_pairs):
        return 0.0
    e = exp_num / exp_den
    m = cp.split_index
    total = 0.0
    prefix = 1.0
    for r in range(n_steps):
        t_r, q_r = cp.ts[r], cp.qs[r]
        pair, resid = q_pairs[r], q_residuals[r]
        forward = m is None or r < m
        _check_step(r + 1, pair, resid, exp_den, t_r, q_r, forward)
        if forward:
            # pair term carries the lemma coefficient, residual the q power
            if pair > 0.0:
                total += prefix * _lemma_coeff(t_r, q_r, e) * _pow(pair, exp_num)
            prefix *= _pow(q_r, e - 1.0)
        else:
            if pair > 0.0:
                total += prefix * _pow(q_r, e - 1.0) * _pow(pair, exp_num)
            prefix *= _lemma_coeff(t_r, q_r, e)
        if resid == 0.0:
            return total
    last = q_pairs[-1]
    if last > 0.0:
        total += prefix * _pow(last, exp_num)
    return total


def chain_monogamy_bound(q_pairs, q_residuals, cp: ChainParams,
                         alpha: float, gamma: float) -> float:
    """N-partite chained lower bound.

    q_pairs lists Q(A, B_1) ... Q(A, B_{N-1}); q_residuals lists the
    trailing-block values Q(A | B_2...B_{N-1}), ..., Q(A | B_{N-1}) used in
    the per-step hypotheses (the last residual equals the last pair).  With
    split_index m, steps 1..m treat the residual as dominant and the
    remaining steps the pair, mirroring the two-regime chained form.
    """
    if gamma < 2.0:
        raise PreconditionError(f"gamma must be >= 2, got {gamma}")
    if not 0.0 <= alpha <= gamma:
        raise PreconditionError(f"alpha {alpha} outside [0, {gamma}]")
    return _chain_bound(q_pairs, q_residuals, cp, alpha, gamma)


def chain_polygamy_bound(q_pairs, q_residuals, cp: ChainParams,
                         beta: float, delta: float) -> float:
    """N-partite chained upper bound, the (beta, delta) mirror of the
    chained lower bound."""
    if not 0.0 < delta <= 1.0:
        raise PreconditionError(f"delta must be in (0, 1], got {delta}")
    if beta < delta:
        raise PreconditionError(f"beta {beta} below delta {delta}")
    return _chain_bound(q_pairs, q_residuals, cp, beta, delta)


@dataclass(frozen=True)
class BoundReport:
    """Evaluated LHS and per-variant RHS values with admissibility flags.

    Gap convention: lhs - rhs for monogamy (slack of a lower bound),
    rhs - lhs for polygamy (slack of an upper bound).
    """

    kind: str
    lhs: float
    variant_rhs: dict = field(default_factory=dict)
    preconditions_ok: dict = field(default_factory=dict)
    gaps: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, rhs in self.variant_rhs.items():
            if name in self.gaps and math.isfinite(rhs):
                expect = self.lhs - rhs if self.kind == "monogamy" else rhs - self.lhs
                if abs(self.gaps[name] - expect) > 1e-12:
                    raise BoundsError(f"inconsistent gap for {name}")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lhs": self.lhs,
            "variant_rhs": dict(self.variant_rhs),
            "preconditions_ok": dict(self.preconditions_ok),
            "gaps": dict(self.gaps),
        }
