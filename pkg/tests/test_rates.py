import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import channels, random_channels
from relaygap.channel import ChannelParams, DomainError, params_from_db
from relaygap.cutset import cutset, relaxed_cutset
from relaygap.optimize import golden_section_max
from relaygap.rates import (
    HALF_LOG2_3,
    QuantizerOrigin,
    cf_quantizer,
    cf_rate,
    df_rate,
    gap_report,
    manual_quantizer,
    nnc_gap_bound,
    nnc_rates,
    q_star,
)

# mpmath (40 digits) evaluations
HALF_LOG2_5 = 1.1609640474436812
HALF_LOG2_7_OVER_3 = 0.61119621066822396
HALF_LOG2_10_OVER_3 = 0.86848279708310308
HALF_LOG2_10001 = 6.6439283209202720
GAP_NNC_EXAMPLE = 0.36848279708310308


def half_log2(x):
    return 0.5 * math.log2(x)


def test_half_log2_3_constant():
    assert HALF_LOG2_3 == pytest.approx(0.79248125036057809, rel=1e-15)


@pytest.mark.parametrize("rho, q", [(0.0, 2.0), (0.5, 1.5), (0.999, 0.003998), (-0.999, 0.003998)])
def test_q_star(rho, q):
    choice = q_star(ChannelParams(1, 1, 1, rho))
    assert choice.q == pytest.approx(q, rel=1e-12)
    assert choice.origin is QuantizerOrigin.STAR


@pytest.mark.parametrize("rho", [1.0, -1.0])
def test_q_star_rejects_unit_rho(rho):
    with pytest.raises(DomainError):
        q_star(ChannelParams(1, 1, 1, rho))


def test_nnc_example(example_channel):
    rates = nnc_rates(example_channel, q_star(example_channel))
    assert rates.r1 == pytest.approx(1.0, rel=1e-14)
    assert rates.r2 == pytest.approx(HALF_LOG2_3, rel=1e-14)
    assert rates.rate == rates.r2


def test_nnc_uncorrelated_unit_gains():
    rates = nnc_rates(ChannelParams(1, 1, 1, 0.0), manual_quantizer(2.0))
    assert rates.r1 == pytest.approx(0.5, rel=1e-14)
    assert rates.r2 == pytest.approx(HALF_LOG2_7_OVER_3, rel=1e-14)


@pytest.mark.parametrize("rho", [-0.7, 0.0, 0.9])
def test_nnc_without_relay_links(rho):
    p = ChannelParams(1.3, 0.0, 0.0, rho)
    direct = half_log2(1 + p.h_sd**2)
    for q in (1.0, 1e3, 1e8):
        assert nnc_rates(p, manual_quantizer(q)).rate <= direct + 1e-15
    assert nnc_rates(p, manual_quantizer(1e12)).r1 == pytest.approx(direct, abs=1e-9)


def test_raw_r1_can_be_negative():
    p = params_from_db(-40, -40, -40, 0.0)
    rates = nnc_rates(p, manual_quantizer(1e-3))
    assert rates.r1 < 0.0
    assert rates.rate == 0.0


@pytest.mark.parametrize("q", [0.0])
def test_nnc_rejects_zero_q(example_channel, q):
    with pytest.raises(DomainError):
        nnc_rates(example_channel, manual_quantizer(q))


def test_quantizer_rejects_negative():
    with pytest.raises(DomainError):
        manual_quantizer(-1.0)


@pytest.mark.parametrize("rho", np.linspace(-0.999, 0.999, 9))
def test_gap_bound_at_q_star(rho):
    p = ChannelParams(1, 1, 1, float(rho))
    assert nnc_gap_bound(p, q_star(p)) == pytest.approx(HALF_LOG2_3, abs=1e-12)


@pytest.mark.parametrize("q, expected", [(1.0, 1.0), (4.0, HALF_LOG2_5)])
def test_gap_bound_uncorrelated(q, expected):
    p = ChannelParams(1, 1, 1, 0.0)
    assert nnc_gap_bound(p, manual_quantizer(q)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("p, q_c", [
    (ChannelParams(1, 2, 2, 0.5), 0.9375),
    (ChannelParams(1.7, 1.7, 3.0, 1.0), 0.0),
    (ChannelParams(0, 1, 1, 0.0), 2.0),
])
def test_cf_quantizer(p, q_c):
    choice = cf_quantizer(p)
    assert choice.q == pytest.approx(q_c, rel=1e-14, abs=1e-300)
    assert choice.origin is QuantizerOrigin.CF_CONSTRAINT


def test_cf_needs_relay_destination_link():
    with pytest.raises(DomainError):
        cf_quantizer(ChannelParams(1, 1, 0, 0.2))
    with pytest.raises(DomainError):
        cf_rate(ChannelParams(1, 1, 0, 0.2))


def test_cf_example(example_channel):
    r_cf = cf_rate(example_channel)
    assert r_cf == pytest.approx(HALF_LOG2_10_OVER_3, rel=1e-14)
    at_qc = nnc_rates(example_channel, cf_quantizer(example_channel))
    assert at_qc.r1 == pytest.approx(r_cf, rel=1e-13)
    assert at_qc.r2 == pytest.approx(r_cf, rel=1e-13)


def test_cf_zero_over_zero_policy():
    p = ChannelParams(2.0, 2.0, 5.0, 1.0)
    assert cf_rate(p) == pytest.approx(half_log2(5.0), rel=1e-15)


def test_cf_unit_correlation_uses_full_relay_link():
    p = ChannelParams(1.0, 3.0, 2.0, 1.0)
    expected = half_log2(1 + 1.0 + 4.0)
    assert cf_rate(p) == pytest.approx(expected, rel=1e-14)
    # continuity from inside the open interval
    assert cf_rate(p.with_rho(1.0 - 1e-12)) == pytest.approx(expected, abs=1e-9)


def test_df_fig2():
    assert df_rate(params_from_db(20, 40, 60, 0.3)) == pytest.approx(HALF_LOG2_10001, rel=1e-14)


def test_df_ignores_weak_relay():
    p = ChannelParams(3.0, 2.0, 10.0, 0.4)
    assert df_rate(p) == pytest.approx(half_log2(10.0), rel=1e-15)


def test_df_example(example_channel):
    assert df_rate(example_channel) == pytest.approx(HALF_LOG2_5, rel=1e-14)


@given(channels(), st.floats(-1, 1))
def test_df_independent_of_rho(p, other_rho):
    assert df_rate(p) == df_rate(p.with_rho(other_rho))


def test_gap_report_example(example_channel):
    rep = gap_report(example_channel)
    assert rep.cutset == pytest.approx(HALF_LOG2_5, rel=1e-14)
    assert rep.gap_nnc == pytest.approx(GAP_NNC_EXAMPLE, rel=1e-12)
    assert rep.gap_nnc < HALF_LOG2_3 + 1e-5


def test_gap_report_without_relay():
    rep = gap_report(ChannelParams(2.0, 0.0, 0.0, 0.6))
    assert rep.cf is None and rep.gap_cf is None
    assert 0.0 <= rep.gap_nnc < HALF_LOG2_3


def test_gap_report_epsilon():
    with pytest.raises(DomainError):
        gap_report(ChannelParams(1, 1, 1, 1 - 1e-7))
    gap_report(ChannelParams(1, 1, 1, 1 - 1e-7), epsilon=1e-8)


@given(channels(), st.floats(-12, 12), st.floats(0.01, 6))
def test_quantizer_monotonicity(p, log_q, step):
    q, q_big = 10.0**log_q, 10.0 ** (log_q + step)
    lo, hi = nnc_rates(p, manual_quantizer(q)), nnc_rates(p, manual_quantizer(q_big))
    assert hi.r1 >= lo.r1
    assert hi.r2 <= lo.r2


@given(channels())
def test_cf_fixed_point(p):
    r_cf = cf_rate(p)
    at_qc = nnc_rates(p, cf_quantizer(p))
    assert at_qc.r1 == pytest.approx(r_cf, rel=1e-9)
    assert at_qc.r2 == pytest.approx(r_cf, rel=1e-9)


@given(channels())
def test_cf_dominates_nnc_at_q_star(p):
    assert cf_rate(p) >= nnc_rates(p, q_star(p)).rate - 1e-12


@given(channels())
def test_constant_gap(p):
    assert cutset(p) - nnc_rates(p, q_star(p)).rate < HALF_LOG2_3 + 1e-5


def _max_min_over_q(p):
    def objective(log_q):
        r = nnc_rates(p, manual_quantizer(math.exp(log_q)))
        return min(r.r1, r.r2)

    _, best = golden_section_max(objective, math.log(1e-30), math.log(1e30), tol=1e-13)
    return best


def test_cf_quantizer_is_max_min_optimal():
    for p in random_channels(100, seed=21):
        assert _max_min_over_q(p) == pytest.approx(cf_rate(p), abs=1e-7)


def test_df_gap_grows_without_bound_at_unit_correlation():
    # rho_z = 1: the broadcast cut is infinite and the cut-set bound is the MAC cut
    gaps = []
    for hrd_db in (40, 60, 80, 100):
        p = params_from_db(20, 40, hrd_db, 1.0)
        gaps.append(min(relaxed_cutset(p)) - df_rate(p))
    steps = np.diff(gaps)
    assert np.all(steps > 0)
    assert steps[-1] == pytest.approx(half_log2(100.0), rel=0.05)


def test_df_gap_saturates_just_below_unit_correlation():
    # at rho_z = 0.999 the broadcast cut caps the bound once h_rd^2 is large
    p60, p100 = (params_from_db(20, 40, d, 0.999) for d in (60, 100))
    assert min(relaxed_cutset(p100)) == relaxed_cutset(p100)[1]
    assert (cutset(p100) - df_rate(p100)) - (cutset(p60) - df_rate(p60)) < 1.0
