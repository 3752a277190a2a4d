import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfmimo import (
    NO_RELAY,
    LinkCapacityModel,
    NetworkParams,
    achievable_rate,
    check_rate_constraints,
    derive_rng,
    lozano_regime_value,
    noise_profile,
    phase_matrix,
    place_nodes,
    quantization_noise,
    quantized_mimo_rate,
    rate_lower_bound_iid,
    realization_from_positions,
    received_power,
    sum_rate,
)

# One group at source distances (0.5, 0.6).
TWO_MEMBER = realization_from_positions(
    np.array([[0.0, 0.5], [0.02, 0.86]]), grid_side=1
)


# ---------------------------------------------------------------------------
# received power
# ---------------------------------------------------------------------------


def test_received_power_farthest_member():
    assert received_power(TWO_MEMBER, 0, 1, p0=3.0, alpha=4.0) == pytest.approx(4.0)


def test_received_power_ratio():
    # p0 (0.6/0.5)**4 + 1 = 3.0736
    assert received_power(TWO_MEMBER, 0, 0, p0=1.0, alpha=4.0) == pytest.approx(3.0736)


def test_received_power_no_signal():
    assert received_power(TWO_MEMBER, 0, 0, p0=0.0, alpha=4.0) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# quantization noise
# ---------------------------------------------------------------------------


def test_noise_exact_unit_exponent():
    # exponent = ((1-.5)/.5) * (16/16) * 1 = 1, so N = 2 / (2**1 - 1) = 2.
    assert quantization_noise(2.0, 1.0, 0.5, 16, 4) == 2.0


def test_noise_strictly_decreasing_in_capacity():
    caps = np.linspace(0.5, 5.0, 10)
    values = [quantization_noise(2.0, c, 0.5, 16, 4) for c in caps]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_noise_vanishes_for_perfect_links():
    assert quantization_noise(2.0, 1e3, 0.5, 16, 4) < 1e-290
    assert quantization_noise(2.0, 1e9, 0.5, 16, 4) == 0.0


def test_noise_no_relay_sentinel():
    assert quantization_noise(2.0, 0.0, 0.5, 16, 4) == NO_RELAY
    assert quantization_noise(2.0, -1.0, 0.5, 16, 4) == NO_RELAY


def test_noise_requires_unit_noise_floor():
    with pytest.raises(ValueError):
        quantization_noise(0.5, 1.0, 0.5, 16, 4)


def test_noise_profile_shape_and_self_link():
    p = NetworkParams(m=3, beta=2.0, seed=14, trials=8)
    r = place_nodes(p, derive_rng(p.seed, 0))
    k = int(np.argmax([r.n2_of(g) for g in range(r.n1)]))
    j = r.n2_of(k) - 1
    profile = noise_profile(r, k, j, LinkCapacityModel.from_params(p), p)
    assert profile.n2 == r.n2_of(k)
    assert profile.noises[j] == 0.0
    assert profile.link_capacities[j] == math.inf
    others = np.delete(profile.noises, j)
    assert np.all(others > 0.0)  # p1 > 0 makes every relay link usable
    assert np.all(profile.received_powers >= 1.0)
    # farthest member receives exactly p0 + 1
    assert profile.received_powers[-1] == pytest.approx(p.p0 + 1.0)


@given(
    e_y2=st.floats(1.0, 50.0),
    c=st.floats(0.01, 10.0),
    bump=st.floats(0.01, 5.0),
)
@settings(max_examples=50)
def test_noise_monotone_property(e_y2, c, bump):
    lo = quantization_noise(e_y2, c + bump, 0.5, 64, 8)
    hi = quantization_noise(e_y2, c, 0.5, 64, 8)
    assert lo <= hi


# ---------------------------------------------------------------------------
# quantized MIMO decode rate
# ---------------------------------------------------------------------------


def test_rate_single_member_is_deterministic():
    rate, stderr, mean = quantized_mimo_rate(
        np.ones(1), np.zeros(1), p0=1.0, m=1, delta=0.5, n=1, trials=32,
        rng=derive_rng(0),
    )
    assert rate == pytest.approx(0.5)  # (delta/n) log2(1 + p0)
    assert mean == pytest.approx(1.0)
    assert stderr < 1e-12


def test_rate_monotone_in_noise_at_fixed_phases():
    gamma = np.array([2.0, 1.5, 1.0])
    base = np.array([0.2, 0.5, 1.0])
    r1, _, _ = quantized_mimo_rate(gamma, base, 1.0, 4, 0.5, 27, 64, derive_rng(5))
    r2, _, _ = quantized_mimo_rate(gamma, base + 0.7, 1.0, 4, 0.5, 27, 64, derive_rng(5))
    assert r2 < r1


def test_quantized_never_beats_unquantized():
    gamma = np.array([3.0, 1.2, 1.0, 1.0])
    clean, _, _ = quantized_mimo_rate(gamma, np.zeros(4), 1.0, 8, 0.5, 64, 64, derive_rng(9))
    noisy, _, _ = quantized_mimo_rate(gamma, np.full(4, 2.0), 1.0, 8, 0.5, 64, 64, derive_rng(9))
    assert noisy < clean


def test_no_relay_rows_are_dropped():
    gamma = np.array([1.0, 5.0])
    with_drop, _, _ = quantized_mimo_rate(
        gamma, np.array([0.0, NO_RELAY]), 1.0, 3, 0.5, 10, 16, derive_rng(4)
    )
    alone, _, _ = quantized_mimo_rate(
        gamma[:1], np.zeros(1), 1.0, 3, 0.5, 10, 16, derive_rng(4)
    )
    assert with_drop == alone


def test_all_rows_dropped_gives_zero_rate():
    rate, stderr, mean = quantized_mimo_rate(
        np.ones(2), np.full(2, NO_RELAY), 1.0, 3, 0.5, 10, 16, derive_rng(4)
    )
    assert (rate, stderr, mean) == (0.0, 0.0, 0.0)


def test_rate_uses_small_side_of_product():
    # The small-side determinant must agree with the literal n2 x n2 form.
    gamma = np.array([2.0, 1.4, 1.1, 1.0, 1.0])
    noises = np.array([0.1, 0.3, 0.0, 0.9, 0.2])
    m, p0 = 2, 1.3
    rate, _, _ = quantized_mimo_rate(gamma, noises, p0, m, 0.5, 25, 8, derive_rng(11))
    vals = []
    theta = phase_matrix(derive_rng(11), 8, 5, m)
    for t in range(8):
        g = np.diag(gamma)
        qinv = np.diag(1.0 / (1.0 + noises))
        mat = np.eye(5) + (p0 / m) * g @ theta[t] @ theta[t].conj().T @ g @ qinv
        vals.append(math.log2(abs(np.linalg.det(mat))))
    assert rate == pytest.approx((0.5 / 25) * np.mean(vals), rel=1e-10)


# ---------------------------------------------------------------------------
# achievable rate and the i.i.d. surrogate
# ---------------------------------------------------------------------------


def test_single_destination_rate_exact():
    r = realization_from_positions(np.array([[0.5, 0.9]]), grid_side=1)
    p = NetworkParams(m=1, beta=1.0, p0=1.0, trials=16)
    dr = achievable_rate(r, 0, 0, LinkCapacityModel.from_params(p), p, derive_rng(0))
    assert dr.rate == pytest.approx(0.5 * math.log2(1.0 + p.p0))
    assert dr.noises[0] == 0.0
    assert dr.link_capacities[0] == math.inf


def test_iid_surrogate_single_antenna_exact():
    v = rate_lower_bound_iid(1, 1, 2.0, 1.0, 0.5, 4, 16, derive_rng(1))
    assert v == pytest.approx((0.5 / 4) * math.log2(1.0 + 2.0 / 2.0))


def test_iid_surrogate_with_zero_noise_is_unquantized():
    a = rate_lower_bound_iid(3, 2, 1.0, 0.0, 0.5, 9, 32, derive_rng(2))
    b, _, _ = quantized_mimo_rate(np.ones(3), np.zeros(3), 1.0, 2, 0.5, 9, 32, derive_rng(2))
    assert a == b


def test_iid_surrogate_square_matrix_matches_regime_oracle():
    # Per-antenna value at 64x64 against the square-array closed form.
    n2 = m = 64
    rate = rate_lower_bound_iid(n2, m, 1.0, 0.0, 0.5, 1000, 200, derive_rng(3))
    per_antenna = rate * 1000 / (0.5 * n2)
    oracle = lozano_regime_value("a_to_1", 1.0)
    assert abs(per_antenna - oracle) / oracle < 0.03


def test_bound_chain_surrogate_below_estimate():
    p = NetworkParams(m=6, beta=2.0, seed=3, trials=300)
    r = place_nodes(p, derive_rng(p.seed, 0))
    model = LinkCapacityModel.from_params(p)
    for dest in range(0, r.n, 7):
        k = int(r.group_of[dest])
        j = int(r.rank_of[dest])
        dr = achievable_rate(r, k, j, model, p, derive_rng(p.seed, 5, dest))
        finite = dr.noises[np.isfinite(dr.noises)]
        n_q_max = float(finite.max()) if finite.size else 0.0
        surrogate = rate_lower_bound_iid(
            dr.noises.size, p.m, p.p0, n_q_max, p.delta, r.n, 300,
            derive_rng(p.seed, 6, dest),
        )
        assert surrogate <= dr.rate + 2.0 * dr.stderr


def test_achievable_rate_rejects_bad_rank():
    p = NetworkParams(m=2, beta=1.0)
    r = realization_from_positions(np.array([[0.2, 0.2], [0.3, 0.3]]), grid_side=1)
    with pytest.raises(ValueError):
        achievable_rate(r, 0, 2, LinkCapacityModel.from_params(p), p, derive_rng(0))


# ---------------------------------------------------------------------------
# constraint system
# ---------------------------------------------------------------------------


def test_constraints_all_zero_rates_pass():
    z = np.zeros(3)
    assert check_rate_constraints(0.0, z, np.array([1.0, 2.0, 0.5]), z, 0.0, 0.5, 27, 3)


def test_constraints_budget_violation_fails():
    n2, delta, n = 3, 0.5, 27
    c = np.array([1.0, 2.0, 0.5])
    r_q = (1 - delta) / (4 * n2) * c
    r_q_over = r_q.copy()
    r_q_over[0] *= 1.01  # exceed the link budget by 1%
    assert check_rate_constraints(0.0, r_q, c, np.zeros(n2), 0.0, delta, n, n2)
    assert not check_rate_constraints(0.0, r_q_over, c, np.zeros(n2), 0.0, delta, n, n2)


def test_constraints_fidelity_violation_fails():
    n2, delta, n = 2, 0.5, 16
    c = np.array([4.0, 4.0])
    r_q = (1 - delta) / (4 * n2) * c
    mi = np.array([0.0, 1.05 * r_q[1] * n / delta])  # needs more than granted
    assert not check_rate_constraints(0.0, r_q, c, mi, 0.0, delta, n, n2)


def test_constraints_decode_violation_fails():
    z = np.zeros(2)
    assert not check_rate_constraints(
        0.2, z, np.ones(2), z, mi_decode=1.0, delta=0.5, n=4, n2=2
    )
    assert check_rate_constraints(
        0.1, z, np.ones(2), z, mi_decode=1.0, delta=0.5, n=4, n2=2
    )


def test_constraints_infinite_self_link():
    # Self link: infinite capacity, infinite fidelity requirement, infinite
    # granted rate; all three inequalities must hold.
    inf = math.inf
    assert check_rate_constraints(
        0.0,
        np.array([inf, 0.1]),
        np.array([inf, 10.0]),
        np.array([inf, 0.0]),
        0.0,
        0.5,
        16,
        2,
    )
    # A finite granted rate cannot satisfy an infinite fidelity requirement.
    assert not check_rate_constraints(
        0.0,
        np.array([5.0, 0.1]),
        np.array([inf, 10.0]),
        np.array([inf, 0.0]),
        0.0,
        0.5,
        16,
        2,
    )


def test_constraints_reject_mismatched_lengths():
    with pytest.raises(ValueError):
        check_rate_constraints(
            0.0, np.zeros(2), np.zeros(3), np.zeros(2), 0.0, 0.5, 4, 2
        )


def test_pipeline_output_satisfies_constraints():
    p = NetworkParams(m=4, beta=2.0, seed=6, trials=32, sample_size=8)
    r = place_nodes(p, derive_rng(p.seed, 0))
    report = sum_rate(r, LinkCapacityModel.from_params(p), p, derive_rng(p.seed, 1), 8)
    for dr in report.destinations:
        assert check_rate_constraints(
            dr.rate,
            dr.quantizer_rates,
            dr.link_capacities,
            dr.mi_quantize,
            dr.mean_logdet,
            p.delta,
            r.n,
            dr.noises.size,
        )


# ---------------------------------------------------------------------------
# sum rate
# ---------------------------------------------------------------------------


def test_sum_rate_single_destination():
    r = realization_from_positions(np.array([[0.5, 0.9]]), grid_side=1)
    p = NetworkParams(m=1, beta=1.0, trials=16)
    report = sum_rate(r, LinkCapacityModel.from_params(p), p, derive_rng(1), 5)
    assert report.sample_size == 1
    assert report.r_sum == report.destinations[0].rate
    assert report.r_ind == report.destinations[0].rate


def test_sum_rate_full_sample_takes_exact_minimum():
    p = NetworkParams(m=3, beta=2.0, seed=8, trials=16)
    r = place_nodes(p, derive_rng(p.seed, 0))
    report = sum_rate(r, LinkCapacityModel.from_params(p), p, derive_rng(2), 50)
    assert report.sample_size == r.n
    assert report.r_ind == min(dr.rate for dr in report.destinations)
    assert report.r_sum == r.n * report.r_ind


def test_sum_rate_subsample_is_deterministic():
    p = NetworkParams(m=4, beta=2.0, seed=9, trials=16)
    r = place_nodes(p, derive_rng(p.seed, 0))
    model = LinkCapacityModel.from_params(p)
    a = sum_rate(r, model, p, derive_rng(3), 4)
    b = sum_rate(r, model, p, derive_rng(3), 4)
    assert a.r_sum == b.r_sum
    assert a.sample_size == 4
    assert [d.dest_index for d in a.destinations] == [d.dest_index for d in b.destinations]


def test_sum_rate_rejects_empty_sample():
    r = realization_from_positions(np.array([[0.5, 0.9]]), grid_side=1)
    p = NetworkParams(m=1, beta=1.0)
    with pytest.raises(ValueError):
        sum_rate(r, LinkCapacityModel.from_params(p), p, derive_rng(0), 0)
