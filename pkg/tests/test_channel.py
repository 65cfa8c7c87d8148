import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_teleport import fock
from hybrid_teleport.analytic import SqueezeParams
from hybrid_teleport.channel import (
    ChannelParams,
    balanced_ancilla_weight,
    build_channel_analytic,
    make_params,
    prepare_channel_simulated,
)
from hybrid_teleport.errors import DomainError, TruncationError


def test_make_params_units():
    p = ChannelParams(SqueezeParams(1.0), 0.5)
    assert p.S_dB == pytest.approx(8.685889638, rel=1e-9)
    q = make_params(p.S_dB, 0.5)
    assert q.squeeze.s == pytest.approx(1.0)
    assert q.y0 == pytest.approx(math.tanh(1) / 2 / 1.5)
    assert q.t0**2 + q.r0**2 == pytest.approx(1.0)
    with pytest.raises(DomainError):
        make_params(-1, 1)
    with pytest.raises(DomainError):
        make_params(3, -0.1)


def test_zero_squeezing_gives_nonlocal_single_photon():
    ch = build_channel_analytic(make_params(0.0, 1.0), 10)
    a = ch.state.amplitudes
    h = 1 / math.sqrt(2)
    assert a[1, 0] == pytest.approx(h)
    assert a[0, 1] == pytest.approx(h)
    assert np.sum(np.abs(a) ** 2) == pytest.approx(1.0)


@pytest.mark.parametrize("S,B0", [(0.0, 0.5), (3.0, 1.0), (10.0, 2.0), (10.0, 0.1)])
def test_branches_have_equal_weight_and_bob_is_maximally_mixed(S, B0):
    ch = build_channel_analytic(make_params(S, B0), 120)
    _, w0 = ch.branch(0)
    _, w1 = ch.branch(1)
    assert w0 == pytest.approx(0.5, abs=1e-10)
    assert w1 == pytest.approx(0.5, abs=1e-10)
    assert np.allclose(ch.bob_reduced(), np.eye(2) / 2, atol=1e-10)


def test_branch_parities():
    ch = build_channel_analytic(make_params(6.0, 0.7), 80)
    odd, _ = ch.branch(0)
    even, _ = ch.branch(1)
    assert np.all(odd[0::2] == 0)
    assert np.all(even[1::2] == 0)


def test_truncation_error_when_cutoff_too_small():
    with pytest.raises(TruncationError):
        build_channel_analytic(make_params(10.0, 0.1), 20)
    ch = build_channel_analytic(make_params(10.0, 0.1), 20, tail_tol=1.0)
    assert ch.state.leaked > 0


@pytest.mark.parametrize("S", [0.5, 2.5, 5.0, 7.5, 10.0])
@pytest.mark.parametrize("B0", [0.1, 0.5, 1.0, 3.0, 10.0])
def test_simulated_preparation_matches_closed_form(S, B0):
    p = make_params(S, B0)
    r = balanced_ancilla_weight(p)
    sim, prob = prepare_channel_simulated(p, r, 90)
    ana = build_channel_analytic(p, 90, tail_tol=1e-6)
    assert prob > 0
    assert np.max(np.abs(sim.state.amplitudes - ana.state.amplitudes)) < 1e-9


@given(st.floats(0.5, 10.0), st.floats(0.1, 5.0), st.floats(0.05, 3.0))
@settings(max_examples=15)
def test_branch_weight_ratio_follows_ancilla_weight(S, B0, r):
    p = make_params(S, B0)
    sim, _ = prepare_channel_simulated(p, r, 70)
    _, w0 = sim.branch(0)
    _, w1 = sim.branch(1)
    assert w1 / w0 == pytest.approx((r / balanced_ancilla_weight(p)) ** 2, rel=1e-7)


def test_balanced_weight_vanishes_with_squeezing():
    # r is linear in y0 with slope 2 sqrt(B0 (1 + B0))
    B0 = 1.7
    for S in (1e-3, 1e-5):
        p = make_params(S, B0)
        assert balanced_ancilla_weight(p) / p.y0 == pytest.approx(2 * math.sqrt(B0 * (1 + B0)), rel=1e-4)


def test_realistic_two_mode_squeezed_ancilla_is_close_to_ideal():
    # a two-mode squeezed ancilla with s = 0.1 against the ideal |00> + r|11>
    # with r = tanh(0.1): higher pairs change the channel only at O(r^2)
    p = make_params(6.0, 1.0)
    cutoff = 60
    lam = math.tanh(0.1)
    anc = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for n in range(cutoff + 1):
        anc[n, n] = lam**n
    anc /= np.linalg.norm(anc)
    real, _ = prepare_channel_simulated(p, 0.0, cutoff, ancilla=fock.FockState(anc, cutoff))
    ideal, _ = prepare_channel_simulated(p, lam, cutoff)
    real_q = real.state.amplitudes[:, :2]
    fid = abs(np.vdot(ideal.state.amplitudes[:, :2], real_q)) ** 2 / np.vdot(real_q, real_q).real
    assert 1 - fid < 1e-3
    assert np.sum(np.abs(real.state.amplitudes[:, 2:]) ** 2) < 1e-3


def test_simulation_rejects_bad_weight():
    with pytest.raises(DomainError):
        prepare_channel_simulated(make_params(3.0, 1.0), 0.0, 20)
