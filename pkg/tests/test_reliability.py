import math

import pytest

from blrc.analysis import MetricsReport, build_report
from blrc.reliability import (
    DAYS_PER_YEAR,
    MarkovModel,
    ParamsError,
    ProfileError,
    ReliabilityParams,
    build_model,
    mttdl_stripe,
    mttdl_system,
    parse_params,
    simulate_mttdl,
)


def two_state_chain(lam):
    return MarkovModel(
        states=("up", "down"),
        rates=((0.0, lam), (0.0, 0.0)),
        initial=0,
        absorbing=frozenset({1}),
    )


def three_state_chain(f1, r1, f2):
    return MarkovModel(
        states=("up", "degraded", "down"),
        rates=(
            (0.0, f1, 0.0),
            (r1, 0.0, f2),
            (0.0, 0.0, 0.0),
        ),
        initial=0,
        absorbing=frozenset({2}),
    )


def test_two_state_exponential_sojourn():
    lam = 0.37
    assert mttdl_stripe(two_state_chain(lam)) == pytest.approx(1 / lam)


def test_three_state_closed_form():
    f1, r1, f2 = 0.002, 180.0, 0.0007
    model = three_state_chain(f1, r1, f2)
    expected = (f1 + f2 + r1) / (f1 * f2)
    assert mttdl_stripe(model) == pytest.approx(expected, rel=1e-9)


def test_unreachable_absorption_is_infinite():
    model = MarkovModel(
        states=("up", "also-up", "down"),
        rates=((0.0, 1.0, 0.0), (2.0, 0.0, 0.0), (0.0, 0.0, 0.0)),
        initial=0,
        absorbing=frozenset({2}),
    )
    assert mttdl_stripe(model) == math.inf


def test_zero_failure_rate_gives_infinite_mttdl(code_15_10):
    report = build_report(code_15_10)
    params = ReliabilityParams(
        total_bytes=30e15,
        nodes=3000,
        block_bytes=256e6,
        repair_bandwidth_bps=1e9,
        mttf_days=float("inf"),
    )
    model = build_model(report, 15, 10, params)
    assert mttdl_stripe(model) == math.inf


def test_model_structure_for_15_10(code_15_10):
    report = build_report(code_15_10)
    params = ReliabilityParams.defaults()
    model = build_model(report, 15, 10, params)
    model.check()
    idx = {s: i for i, s in enumerate(model.states)}
    assert set(model.states) == {
        "15", "14", "13", "12", "11", "10", "9", "11F", "10F",
    }
    lam = params.failure_rate_per_day
    bw = params.repair_bytes_per_day
    B = params.block_bytes
    # failure cascade and one-step-up repairs
    assert model.rates[idx["15"]][idx["14"]] == pytest.approx(15 * lam)
    assert model.rates[idx["14"]][idx["15"]] == pytest.approx(bw / (6 * B))
    assert model.rates[idx["13"]][idx["14"]] == pytest.approx(bw / (9 * B))
    assert model.rates[idx["12"]][idx["13"]] == pytest.approx(bw / (10 * B))
    p4 = report.decodability[4]
    p5 = report.decodability[5]
    assert model.rates[idx["12"]][idx["11"]] == pytest.approx(12 * lam * p4)
    assert model.rates[idx["12"]][idx["11F"]] == pytest.approx(
        12 * lam * (1 - p4)
    )
    assert model.rates[idx["11"]][idx["10F"]] == pytest.approx(
        11 * lam * (1 - p5)
    )
    assert model.rates[idx["10"]][idx["9"]] == pytest.approx(10 * lam)
    assert model.absorbing == {idx["9"], idx["11F"], idx["10F"]}
    # generator row sums vanish on transient rows once the diagonal is added
    for i in range(len(model.states)):
        if i not in model.absorbing:
            assert model.exit_rate(i) > 0


def test_mds_like_profile_has_no_f_states():
    report = MetricsReport(
        storage_overhead=0.4,
        avg_repair_single=10.0,
        avg_repair_double=10.0,
        avg_column_weight=10.0,
        update_complexity=5,
        decodability={1: 1.0, 2: 1.0, 3: 1.0, 4: 1.0, 5: 0.0},
        min_distance=5,
    )
    model = build_model(report, 14, 10, ReliabilityParams.defaults())
    assert not any(s.endswith("F") for s in model.states)


def test_increasing_profile_rejected():
    report = MetricsReport(
        storage_overhead=0.5,
        avg_repair_single=6.0,
        avg_repair_double=9.0,
        avg_column_weight=6.0,
        update_complexity=4,
        decodability={1: 1.0, 2: 0.5, 3: 0.9},
        min_distance=2,
    )
    with pytest.raises(ProfileError):
        build_model(report, 15, 10, ReliabilityParams.defaults())


def test_mttdl_monotone_in_failure_and_repair_rates(code_16_10_w2):
    report = build_report(code_16_10_w2)
    base = ReliabilityParams.defaults()
    results = []
    for mttf_years in (2, 4, 8):
        params = ReliabilityParams(
            total_bytes=base.total_bytes,
            nodes=base.nodes,
            block_bytes=base.block_bytes,
            repair_bandwidth_bps=base.repair_bandwidth_bps,
            mttf_days=mttf_years * DAYS_PER_YEAR,
        )
        results.append(mttdl_stripe(build_model(report, 16, 10, params)))
    assert results[0] < results[1] < results[2]
    results = []
    for gbps in (0.5, 1.0, 2.0):
        params = ReliabilityParams(
            total_bytes=base.total_bytes,
            nodes=base.nodes,
            block_bytes=base.block_bytes,
            repair_bandwidth_bps=gbps * 1e9,
            mttf_days=base.mttf_days,
        )
        results.append(mttdl_stripe(build_model(report, 16, 10, params)))
    assert results[0] < results[1] < results[2]


def test_simulation_agrees_with_solver():
    # five-state repairable chain kept failure-heavy so absorption happens
    # within a few transitions and 1e5 trials stay cheap
    model = MarkovModel(
        states=("4", "3", "2", "3F", "1"),
        rates=(
            (0.0, 4.0, 0.0, 0.0, 0.0),
            (30.0, 0.0, 2.4, 0.6, 0.0),
            (0.0, 20.0, 0.0, 0.0, 2.0),
            (0.0,) * 5,
            (0.0,) * 5,
        ),
        initial=0,
        absorbing=frozenset({3, 4}),
    )
    exact = mttdl_stripe(model)
    est, stderr = simulate_mttdl(model, trials=100_000, seed=11)
    assert abs(est - exact) <= 3 * stderr


def test_system_mttdl_divides_by_stripe_count():
    params = ReliabilityParams.defaults()
    assert params.stripe_count(15) == pytest.approx(30e15 / (15 * 256e6))
    assert mttdl_system(1000.0, 15, params) == pytest.approx(
        1000.0 / (30e15 / (15 * 256e6))
    )
    one_stripe = ReliabilityParams(
        total_bytes=15 * 256e6,
        nodes=15,
        block_bytes=256e6,
        repair_bandwidth_bps=1e9,
        mttf_days=1460,
    )
    assert mttdl_system(123.0, 15, one_stripe) == pytest.approx(123.0)


def test_params_parsing_defaults_and_overrides():
    params = parse_params("C 30PB\nB = 256MB\ngamma 1Gbps\nmttf 4y\nN 3000\n")
    assert params == ReliabilityParams.defaults()
    binary = parse_params("units binary\nC 30PB\n")
    assert binary.total_bytes == 30 * 2**50
    assert parse_params("mttf 1460d\n").mttf_days == 1460
    with pytest.raises(ParamsError):
        parse_params("C -1\n")
    with pytest.raises(ParamsError):
        parse_params("unknown 4\n")
    with pytest.raises(ParamsError):
        parse_params("units metric\n")


def test_published_table_reconciliation(code_16_10_w3):
    """The [16, 10] w=3 published MTTDL (5.7378e14 days) assumed a 7-block
    double repair; with that transfer size the chain lands within 5%, while
    the exhaustive-minimum double average (7.4) falls short.  This pins the
    divergence to the bandwidth figure, not the chain."""
    report = build_report(code_16_10_w3)
    params = ReliabilityParams.defaults()
    with_published_b2 = mttdl_system(
        mttdl_stripe(build_model(report, 16, 10, params, b2=7.0)), 16, params
    )
    assert with_published_b2 == pytest.approx(5.7378e14, rel=0.05)
    own = mttdl_system(
        mttdl_stripe(build_model(report, 16, 10, params)), 16, params
    )
    assert own < 5.7378e14 * 0.95
