import numpy as np
import pytest

from entbounds.bounds import (
    BoundReport,
    BoundsError,
    ChainParams,
    ChainStepError,
    MonogamyParams,
    PolygamyParams,
    PreconditionError,
    chain_monogamy_bound,
    chain_polygamy_bound,
    lemma1_check,
    lemma1_f,
    prior_monogamy_bound,
    prior_polygamy_bound,
    thm1_lower_bound,
    thm4_upper_bound,
    validate_params,
)

S6 = np.sqrt(6.0)

# Example data: five-amplitude state gives (sqrt(6)/6, 1/2) concurrence
# pairs, W-class state gives (1/4, 1/2) assisted-negativity squares
EX1 = dict(q_ab=S6 / 6, q_ac=0.5, t=S6 / 2, q=5.0 / 3.0)
EX2 = dict(q_ab=0.25, q_ac=0.5, t=2.0 ** 0.6, q=1.0 + 0.5 ** 0.8)

# frozen by direct evaluation of the closed forms at 30-digit precision
EX1_THM1 = 0.6462607329003782
EX1_REF29 = 0.6446878605381149
EX2_THM4 = 0.8811862835051213
EX2_REF29 = 0.8823709483818013


# -- lemma scalar function ----------------------------------------------------

def test_lemma1_f_values():
    assert lemma1_f(2.0, 1.0, 2.0) == pytest.approx(1.0, abs=1e-14)
    assert lemma1_f(2.0, 0.5, 2.0) == pytest.approx(np.sqrt(3) - 1.0, abs=1e-14)
    assert lemma1_f(1.0, 0.5, 2.0) == pytest.approx(
        np.sqrt(2) - np.sqrt(0.5), abs=1e-14)
    assert lemma1_f(2.0, 0.5, 2.0) >= lemma1_f(1.0, 0.5, 2.0)


def test_lemma1_f_domain():
    with pytest.raises(BoundsError):
        lemma1_f(-1.0, 0.5, 2.0)
    with pytest.raises(BoundsError):
        lemma1_f(2.0, 0.5, 1.0)
    with pytest.raises(BoundsError):
        lemma1_f(2.0, -0.5, 2.0)


def test_lemma1_check_equality_point():
    # x = t pins the window to the single point q = 1 + 1/t
    q = 1.0 + 1.0 / 1.5
    assert lemma1_check(1.5, 1.5, q, 0.7, "m")
    assert lemma1_check(1.5, 1.5, q, 2.5, "n")


def test_lemma1_check_top_edge_holds():
    # at q = 1 + 1/t both branches reduce to the prior-bound inequality
    q = 1.0 + 1.0 / 1.5
    assert lemma1_check(3.0, 1.5, q, 0.7, "m")
    assert lemma1_check(3.0, 1.5, q, 2.5, "n")


def test_lemma1_check_interior_counterexamples():
    # the claimed inequalities fail for interior q: direct evaluation at
    # (x=3, t=1.5, q=1.4) refutes both branches
    assert not lemma1_check(3.0, 1.5, 1.4, 0.7, "m")
    assert not lemma1_check(3.0, 1.5, 1.4, 2.5, "n")
    f_x = lemma1_f(3.0, 0.7, 1.4)
    f_t = lemma1_f(1.5, 0.7, 1.4)
    assert f_x - f_t == pytest.approx(-0.00994, abs=1e-4)


def test_lemma1_check_preconditions_distinct():
    with pytest.raises(PreconditionError):
        lemma1_check(1.0, 1.5, 1.4, 0.5, "m")  # x < t
    with pytest.raises(PreconditionError):
        lemma1_check(3.0, 1.5, 3.0, 0.5, "m")  # q above window
    with pytest.raises(PreconditionError):
        lemma1_check(3.0, 1.5, 1.5, 1.5, "m")  # exponent outside branch
    with pytest.raises(BoundsError):
        lemma1_check(3.0, 1.5, 1.5, 0.5, "z")


# -- two-term bounds ----------------------------------------------------------

def test_thm1_alpha_zero_is_one():
    p = MonogamyParams(0.0, 2.0, EX1["t"], EX1["q"])
    assert thm1_lower_bound(EX1["q_ab"], EX1["q_ac"], p) == pytest.approx(
        1.0, abs=1e-14)


def test_thm1_alpha_equals_gamma_collapse():
    p = MonogamyParams(2.0, 2.0, EX1["t"], EX1["q"])
    expect = EX1["q_ab"] ** 2 + EX1["q_ac"] ** 2
    assert thm1_lower_bound(EX1["q_ab"], EX1["q_ac"], p) == pytest.approx(
        expect, abs=1e-14)


def test_thm1_example_value():
    p = MonogamyParams(1.0, 2.0, EX1["t"], EX1["q"])
    assert thm1_lower_bound(EX1["q_ab"], EX1["q_ac"], p) == pytest.approx(
        EX1_THM1, abs=1e-12)


def test_thm1_inadmissible_raises():
    p = MonogamyParams(1.0, 2.0, EX1["t"], 1.0 + 2.0 / EX1["t"])
    with pytest.raises(PreconditionError):
        thm1_lower_bound(EX1["q_ab"], EX1["q_ac"], p)


def test_thm1_zero_conventions():
    p = MonogamyParams(1.0, 2.0, 1.0, 1.5)
    assert thm1_lower_bound(0.0, 0.0, p) == 0.0
    assert thm1_lower_bound(0.0, 0.5, p) == pytest.approx(
        1.5 ** (-0.5) * 0.5, abs=1e-14)
    p0 = MonogamyParams(0.0, 2.0, 1.0, 1.5)
    assert thm1_lower_bound(0.0, 0.5, p0) == pytest.approx(
        1.5 ** (-1.0), abs=1e-14)


def test_prior_monogamy_values():
    z1 = prior_monogamy_bound("ref29", EX1["q_ab"], EX1["q_ac"],
                              alpha=1.0, gamma=2.0, a=EX1["t"])
    assert z1 == pytest.approx(EX1_REF29, abs=1e-12)

    v = prior_monogamy_bound("ref16", 0.3, 0.4, alpha=2.0, gamma=2.0, k=1.0)
    assert v == pytest.approx(0.3 ** 2 + 0.4 ** 2, abs=1e-14)

    with pytest.raises(PreconditionError):
        prior_monogamy_bound("ref28", 0.3, 0.4, alpha=1.5, gamma=2.0,
                             k=1.0, p=0.8)  # alpha > gamma/2
    with pytest.raises(BoundsError):
        prior_monogamy_bound("refXX", 0.3, 0.4, alpha=1.0, gamma=2.0)


def test_thm4_collapse_and_example():
    p = PolygamyParams(0.8, 0.8, EX2["t"], EX2["q"])
    expect = EX2["q_ab"] ** 0.8 + EX2["q_ac"] ** 0.8
    assert thm4_upper_bound(EX2["q_ab"], EX2["q_ac"], p) == pytest.approx(
        expect, abs=1e-14)

    p = PolygamyParams(1.0, 0.8, EX2["t"], EX2["q"])
    w2 = thm4_upper_bound(EX2["q_ab"], EX2["q_ac"], p)
    assert w2 == pytest.approx(EX2_THM4, abs=1e-12)
    assert 0.75 <= w2  # the assisted LHS stays below the upper bound


def test_prior_polygamy_values():
    w1 = prior_polygamy_bound("ref29", EX2["q_ab"], EX2["q_ac"],
                              beta=1.0, delta=0.8, a=EX2["t"])
    assert w1 == pytest.approx(EX2_REF29, abs=1e-12)

    v = prior_polygamy_bound("ref16", 0.3, 0.4, beta=0.7, delta=0.7, k=1.0)
    assert v == pytest.approx(0.3 ** 0.7 + 0.4 ** 0.7, abs=1e-14)


def test_example2_orderings():
    assert EX2_THM4 < EX2_REF29


# -- parameter validation -----------------------------------------------------

def test_validate_example1_sits_on_edge():
    p = MonogamyParams(1.0, 2.0, EX1["t"], EX1["q"])
    rep = validate_params("monogamy", EX1["q_ab"], EX1["q_ac"], p)
    assert rep.ok
    edge = 1.0 + EX1["q_ab"] ** 2 / EX1["q_ac"] ** 2
    assert EX1["q"] == pytest.approx(edge, abs=1e-14)


def test_validate_example2_delta_floor():
    # dominance (1/2)^d >= 2^0.6 (1/4)^d needs d >= 0.6
    p = PolygamyParams(1.0, 0.5, EX2["t"], 1.0 + 0.5 ** 0.5)
    rep = validate_params("polygamy", EX2["q_ab"], EX2["q_ac"], p)
    assert not rep.ok
    assert "dominance" in rep.failed()

    p = PolygamyParams(1.0, 0.6, EX2["t"], 1.0 + 0.5 ** 0.6)
    rep = validate_params("polygamy", EX2["q_ab"], EX2["q_ac"], p)
    assert rep.ok


def test_validate_window_failure():
    p = MonogamyParams(1.0, 2.0, EX1["t"], 1.0 + 2.0 / EX1["t"])
    rep = validate_params("monogamy", EX1["q_ab"], EX1["q_ac"], p)
    assert rep.failed() == ["q_window"]


def test_validate_vacuous_on_zero():
    p = MonogamyParams(1.0, 2.0, 5.0, 1.1)
    rep = validate_params("monogamy", 0.0, 0.0, p)
    assert rep.ok and rep.vacuous


def test_validate_t_below_one():
    p = MonogamyParams(1.0, 2.0, 0.5, 1.5)
    rep = validate_params("monogamy", 0.3, 0.4, p)
    assert "t_ge_1" in rep.failed()


def test_validate_reports_all_conditions():
    p = MonogamyParams(1.0, 2.0, EX1["t"], EX1["q"])
    rep = validate_params("monogamy", EX1["q_ab"], EX1["q_ac"], p)
    names = {c.name for c in rep.conditions}
    assert {"t_ge_1", "dominance", "q_window"} <= names


# -- special-case identities and monotonicity --------------------------------

def test_thm1_equals_ref29_at_top_edge(rng):
    for _ in range(200):
        gamma = rng.uniform(2.0, 20.0)
        alpha = rng.uniform(0.0, gamma)
        t = rng.uniform(1.0, 10.0)
        q_ab = rng.uniform(0.0, 1.0)
        q_ac = (t * q_ab ** gamma) ** (1 / gamma) + rng.uniform(0.01, 0.5)
        q_ac = min(q_ac, 1.0)
        if q_ac ** gamma < t * q_ab ** gamma:
            continue
        p = MonogamyParams(alpha, gamma, t, 1.0 + 1.0 / t)
        lhs = thm1_lower_bound(q_ab, q_ac, p)
        rhs = prior_monogamy_bound("ref29", q_ab, q_ac,
                                   alpha=alpha, gamma=gamma, a=t)
        assert abs(lhs - rhs) <= 1e-13


def test_thm4_equals_ref29_at_top_edge(rng):
    # grid ranges keep the bound O(1) so the absolute identity tolerance
    # is meaningful
    for _ in range(200):
        delta = rng.uniform(0.4, 1.0)
        beta = delta + rng.uniform(0.0, 1.2)
        t = rng.uniform(1.0, 3.0)
        q_ab = rng.uniform(0.01, 1.0)
        q_ac = min((t ** (1 / delta)) * q_ab * (1 + rng.uniform(0.0, 0.5)), 1.0)
        if q_ac ** delta < t * q_ab ** delta:
            continue
        p = PolygamyParams(beta, delta, t, 1.0 + 1.0 / t)
        lhs = thm4_upper_bound(q_ab, q_ac, p)
        rhs = prior_polygamy_bound("ref29", q_ab, q_ac,
                                   beta=beta, delta=delta, a=t)
        assert abs(lhs - rhs) <= 1e-13


def test_thm1_tightness_vs_ref29(rng):
    # lower bound is nonincreasing in q, so any admissible q at or below
    # the window top dominates the prior bound
    for _ in range(100):
        gamma = rng.uniform(2.0, 10.0)
        alpha = rng.uniform(0.0, gamma)
        q_ab = rng.uniform(0.05, 0.6)
        q_ac = rng.uniform(q_ab + 0.05, 1.0)
        x = (q_ac / q_ab) ** gamma
        if x <= 1.0:
            continue
        t = rng.uniform(1.0, min(x, 8.0))
        lo, hi = 1.0 + 1.0 / x, 1.0 + 1.0 / t
        q = rng.uniform(lo, hi)
        p = MonogamyParams(alpha, gamma, t, q)
        ours = thm1_lower_bound(q_ab, q_ac, p)
        prior = prior_monogamy_bound("ref29", q_ab, q_ac,
                                     alpha=alpha, gamma=gamma, a=t)
        assert ours >= prior - 1e-12


def test_thm1_monotone_nonincreasing_in_q():
    p_ab, p_ac, t = 0.3, 0.6, 1.5
    gamma, alpha = 2.0, 1.0
    x = (p_ac / p_ab) ** gamma
    qs = np.linspace(1.0 + 1.0 / x, 1.0 + 1.0 / t, 50)
    vals = [thm1_lower_bound(p_ab, p_ac, MonogamyParams(alpha, gamma, t, q))
            for q in qs]
    assert all(vals[i] >= vals[i + 1] - 1e-12 for i in range(len(vals) - 1))


def test_thm4_monotone_nondecreasing_in_q():
    # the upper bound moves the other way: larger q loosens it toward the
    # prior bound at the window top
    p_ab, p_ac, t = 0.25, 0.5, 2.0 ** 0.6
    delta, beta = 0.8, 1.0
    x = (p_ac / p_ab) ** delta
    qs = np.linspace(1.0 + 1.0 / x, 1.0 + 1.0 / t, 50)
    vals = [thm4_upper_bound(p_ab, p_ac, PolygamyParams(beta, delta, t, q))
            for q in qs]
    assert all(vals[i] <= vals[i + 1] + 1e-12 for i in range(len(vals) - 1))


# -- chained bounds -----------------------------------------------------------

def test_chain_single_step_matches_thm1():
    cp = ChainParams((EX1["t"],), (EX1["q"],))
    chain = chain_monogamy_bound([EX1["q_ab"], EX1["q_ac"]], [EX1["q_ac"]],
                                 cp, 1.0, 2.0)
    single = thm1_lower_bound(EX1["q_ab"], EX1["q_ac"],
                              MonogamyParams(1.0, 2.0, EX1["t"], EX1["q"]))
    assert chain == single  # identical arithmetic path


def test_chain_single_step_matches_thm4():
    cp = ChainParams((EX2["t"],), (EX2["q"],))
    chain = chain_polygamy_bound([EX2["q_ab"], EX2["q_ac"]], [EX2["q_ac"]],
                                 cp, 1.0, 0.8)
    single = thm4_upper_bound(EX2["q_ab"], EX2["q_ac"],
                              PolygamyParams(1.0, 0.8, EX2["t"], EX2["q"]))
    assert chain == single


def test_chain_all_zero_pairs():
    cp = ChainParams((1.0, 1.0), (1.5, 1.5))
    assert chain_monogamy_bound([0.0, 0.0, 0.0], [0.0, 0.0], cp, 1.0, 2.0) == 0.0


def test_chain_forward_matches_hand_rolled():
    # independent transcription of the fully forward chained form:
    # l_1 Q_1^a + q_1^e' l_2 Q_2^a + (q_1 q_2)^e' Q_3^a, e' = a/g - 1
    pairs = [0.2, 0.3, 0.6]
    resid = [0.55, 0.6]
    ts = (1.2, 1.1)
    qs = (1.4, 1.5)
    alpha, gamma = 1.0, 2.0
    e = alpha / gamma

    def ell(t, q):
        return (1 + t) ** e - q ** (e - 1) * t ** e

    expect = (ell(ts[0], qs[0]) * pairs[0] ** alpha
              + qs[0] ** (e - 1) * ell(ts[1], qs[1]) * pairs[1] ** alpha
              + (qs[0] * qs[1]) ** (e - 1) * pairs[2] ** alpha)
    got = chain_monogamy_bound(pairs, resid, ChainParams(ts, qs), alpha, gamma)
    assert got == pytest.approx(expect, abs=1e-15)


def test_chain_split_matches_hand_rolled():
    # N = 5 with split m = 1: first step forward, then two reversed steps
    pairs = [0.1, 0.7, 0.5, 0.2]
    resid = [0.75, 0.4, 0.2]
    ts = (1.3, 1.2, 1.4)
    qs = (1.5, 1.65, 1.5)
    beta, delta = 1.5, 0.9
    e = beta / delta

    def kay(t, q):
        return (1 + t) ** e - q ** (e - 1) * t ** e

    expect = (kay(ts[0], qs[0]) * pairs[0] ** beta
              + (qs[0] * qs[1]) ** (e - 1) * pairs[1] ** beta
              + qs[0] ** (e - 1) * kay(ts[1], qs[1]) * qs[2] ** (e - 1)
              * pairs[2] ** beta
              + qs[0] ** (e - 1) * kay(ts[1], qs[1]) * kay(ts[2], qs[2])
              * pairs[3] ** beta)
    got = chain_polygamy_bound(pairs, resid,
                               ChainParams(ts, qs, split_index=1), beta, delta)
    assert got == pytest.approx(expect, abs=1e-14)


def test_chain_split_mode_on_bell_product_state():
    # |Bell(A,B2)> x |0>_B1 x |0>_B3: the second pair carries everything,
    # so the step peeling B2 runs in the reversed (pair-dominant) regime
    import itertools
    from entbounds.measures import concurrence_pure, concurrence_wootters
    from entbounds.states import PureState, reduce_pair, to_density

    amps = np.zeros(16, dtype=complex)
    amps[0b0000] = 1 / np.sqrt(2)   # A=0, B2=0
    amps[0b1010] = 1 / np.sqrt(2)   # A=1, B2=1
    psi = PureState(amps, 4)
    rho = to_density(psi)
    lhs = concurrence_pure(psi, (0,))
    pairs = [concurrence_wootters(reduce_pair(rho, j)) for j in (1, 2, 3)]
    assert pairs == [0.0, pytest.approx(1.0, abs=1e-12), 0.0]
    # residuals: A|B2B3 is the Bell pair (1), A|B3 is uncorrelated (0)
    residuals = [1.0, 0.0]
    cp = ChainParams((1.5, 1.5), (1.25, 1.25), split_index=1)
    rhs = chain_monogamy_bound(pairs, residuals, cp, 1.0, 2.0)
    e = 0.5
    assert rhs == pytest.approx((1.25 * 1.25) ** (e - 1.0), abs=1e-14)
    assert rhs <= lhs + 1e-12


def test_chain_ghz_all_pairwise_zero():
    # 4-qubit GHZ: every two-qubit marginal is separable, the bound is 0
    from entbounds.measures import (RoofConfig, concurrence_functional,
                                    concurrence_pure, concurrence_wootters,
                                    convex_roof)
    from entbounds.linalg import partial_trace
    from entbounds.states import PureState, reduce_pair, to_density

    amps = np.zeros(16, dtype=complex)
    amps[0] = amps[15] = 1 / np.sqrt(2)
    psi = PureState(amps, 4)
    rho = to_density(psi)
    lhs = concurrence_pure(psi, (0,))
    pairs = [concurrence_wootters(reduce_pair(rho, j)) for j in (1, 2, 3)]
    assert pairs == [0.0, 0.0, 0.0]
    res = convex_roof(partial_trace(rho, (0, 2, 3)),
                      concurrence_functional((0,)), "min",
                      RoofConfig(restarts=4, seed=3))
    residuals = [res.value, pairs[2]]
    assert res.value <= 1e-8  # the GHZ marginal is separable
    cp = ChainParams((1.0, 1.0), (1.5, 1.5))
    rhs = chain_monogamy_bound(pairs, residuals, cp, 1.0, 2.0)
    assert rhs == 0.0
    assert rhs <= lhs


def test_chain_polygamy_additive_collapse():
    # beta = delta with every q at the window top gives unit lemma
    # coefficients, so the chain reduces to the plain additive form
    pairs = [0.2, 0.3, 0.4]
    resid = [0.5, 0.4]
    ts = (1.2, 1.1)
    qs = tuple(1.0 + 1.0 / t for t in ts)
    delta = 0.7
    got = chain_polygamy_bound(pairs, resid, ChainParams(ts, qs), delta, delta)
    assert got == pytest.approx(sum(v ** delta for v in pairs), abs=1e-14)


def test_symmetric_w_single_step_polygamy():
    # equal pairwise assisted values force t = 1 and q = 2; the upper
    # bound must still clear the exact split value
    from entbounds.measures import RoofConfig, negativity_pure, screnoa
    from entbounds.states import reduce_pair, to_density, w_class_state

    c = 1 / np.sqrt(3)
    psi = w_class_state(c, c, c)
    rho = to_density(psi)
    lhs = negativity_pure(psi, (0,)) ** 2
    cfg = RoofConfig(restarts=8, seed=17)
    # the two assisted values agree to optimizer accuracy; order them so
    # the dominance check cannot trip on last-digit noise
    n_ab, n_ac = sorted((screnoa(reduce_pair(rho, 1), cfg),
                         screnoa(reduce_pair(rho, 2), cfg)))
    beta, delta = 1.0, 0.8
    cp = ChainParams((1.0,), (2.0,))
    rhs = chain_polygamy_bound([n_ab, n_ac], [n_ac], cp, beta, delta)
    assert lhs == pytest.approx(8.0 / 9.0, abs=1e-12)
    assert lhs ** beta <= rhs + 2e-3


def test_chain_step_error_names_step():
    pairs = [0.2, 0.3, 0.6]
    resid = [0.55, 0.6]
    cp = ChainParams((1.2, 5.0), (1.4, 1.1))  # step 2 dominance fails
    with pytest.raises(ChainStepError) as err:
        chain_monogamy_bound(pairs, resid, cp, 1.0, 2.0)
    assert err.value.step == 2


def test_chain_params_validation():
    with pytest.raises(BoundsError):
        ChainParams((1.0,), (1.5, 1.5))
    with pytest.raises(BoundsError):
        ChainParams((), ())
    with pytest.raises(BoundsError):
        ChainParams((1.0, 1.0), (1.5, 1.5), split_index=2)
    with pytest.raises(BoundsError):
        chain_monogamy_bound([0.1, 0.2], [0.2, 0.3],
                             ChainParams((1.0,), (1.5,)), 1.0, 2.0)


# -- reports ------------------------------------------------------------------

def test_bound_report_gap_consistency():
    rep = BoundReport("monogamy", 0.7, {"thm1": 0.6}, {"thm1": True},
                      {"thm1": 0.1})
    assert rep.as_dict()["gaps"]["thm1"] == pytest.approx(0.1)
    with pytest.raises(BoundsError):
        BoundReport("monogamy", 0.7, {"thm1": 0.6}, {"thm1": True},
                    {"thm1": 0.2})
