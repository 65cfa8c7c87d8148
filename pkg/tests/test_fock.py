import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybrid_teleport import fock
from hybrid_teleport.fock import BeamSplitterSpec, FockState

import oracles


def random_state(rng, modes, cutoff):
    a = rng.normal(size=(cutoff + 1,) * modes) + 1j * rng.normal(size=(cutoff + 1,) * modes)
    return FockState(a / np.linalg.norm(a), cutoff)


# ---------------------------------------------------------------------------
# squeezed vacuum


def test_smsv_zero_squeezing_is_vacuum():
    s = fock.smsv_state(0.0, 10)
    assert s.amplitude(0) == 1
    assert s.norm_sq() == 1


def test_smsv_second_amplitude_ratio():
    s = fock.smsv_state(0.2, 20)
    assert s.amplitude(2) / s.amplitude(0) == pytest.approx(0.2 * math.sqrt(2), rel=1e-14)


@pytest.mark.parametrize("y", [0.05, 0.2, 0.4, 0.45])
def test_smsv_amplitudes_match_exact_combinatorics(y):
    s = fock.smsv_state(y, 60)
    for n in range(31):
        assert s.amplitude(2 * n).real == pytest.approx(oracles.smsv_amplitude(y, n), rel=1e-12, abs=1e-300)
        if 2 * n + 1 <= 60:
            assert s.amplitude(2 * n + 1) == 0


def test_smsv_tail_at_cutoff_60_matches_series():
    # mass beyond the cutoff, compared with the exact-binomial series
    y = 0.4
    s = fock.smsv_state(y, 60)
    tail = sum(oracles.smsv_weight(y, n) for n in range(31, 200))
    assert s.leaked == pytest.approx(tail, rel=1e-6)
    assert 1 - s.norm_sq() == pytest.approx(tail, rel=1e-6)


def test_smsv_norm_within_1e10_at_large_cutoff():
    s = fock.smsv_state(0.4, 120)
    assert abs(s.norm_sq() - 1) < 1e-10


@pytest.mark.parametrize("y,cutoff", [(0.5, 10), (-0.1, 10), (0.2, 1)])
def test_smsv_rejects_bad_input(y, cutoff):
    with pytest.raises(ValueError):
        fock.smsv_state(y, cutoff)


# ---------------------------------------------------------------------------
# beam splitter


def test_identity_splitter():
    s = fock.fock_ket((1, 0), 4)
    out = fock.apply_beam_splitter(s, BeamSplitterSpec(1.0, 0.0))
    assert np.allclose(out.amplitudes, s.amplitudes)


def test_single_photon_rule():
    t, r = math.cos(0.3), math.sin(0.3)
    out = fock.apply_beam_splitter(fock.fock_ket((1, 0), 3), BeamSplitterSpec(t, r))
    assert out.amplitude(1, 0) == pytest.approx(t)
    assert out.amplitude(0, 1) == pytest.approx(-r)


def test_hong_ou_mandel():
    h = 1 / math.sqrt(2)
    out = fock.apply_beam_splitter(fock.fock_ket((1, 1), 4), BeamSplitterSpec(h, h))
    assert abs(out.amplitude(1, 1)) < 1e-14
    assert out.amplitude(2, 0) == pytest.approx(h)
    assert out.amplitude(0, 2) == pytest.approx(-h)


@pytest.mark.parametrize("n1,n2", [(0, 3), (2, 1), (3, 3), (5, 2), (4, 6)])
def test_splitter_matches_operator_algebra(n1, n2):
    t, r = 1 / math.sqrt(1 + 1.7), math.sqrt(1.7 / 2.7)
    out = fock.apply_beam_splitter(fock.fock_ket((n1, n2), 12), BeamSplitterSpec(t, r))
    ref = oracles.bs_by_operators(t, r, n1, n2)
    for (m1, m2), amp in ref.items():
        assert out.amplitude(m1, m2).real == pytest.approx(amp, abs=1e-13)
    assert sum(abs(a) ** 2 for a in ref.values()) == pytest.approx(1.0, abs=1e-13)


def test_large_block_is_orthogonal():
    blk = fock.beam_splitter_block(0.6, 0.8, 80)
    assert np.allclose(blk @ blk.T, np.eye(81), atol=1e-12)


@given(st.floats(0.01, 1.0), st.integers(0, 2), st.integers(0, 10**6))
def test_unitarity_and_inverse(t, extra_mode, seed):
    rng = np.random.default_rng(seed)
    r = math.sqrt(1 - t * t)
    modes = 2 + extra_mode
    state = random_state(rng, modes, 5)
    # keep total photons per pair below the cutoff so nothing leaks
    idx = np.indices(state.amplitudes.shape)
    mask = idx[0] + idx[modes - 1] <= 5
    state = FockState(np.where(mask, state.amplitudes, 0), 5).normalize()
    bs = BeamSplitterSpec(t, r, 0, modes - 1)
    out = fock.apply_beam_splitter(state, bs)
    assert out.norm_sq() == pytest.approx(1.0, abs=1e-12)
    back = fock.apply_beam_splitter(out, bs.inverse())
    assert np.max(np.abs(back.amplitudes - state.amplitudes)) < 1e-12


@given(st.floats(0.05, 1.0), st.integers(0, 10**6))
def test_total_photon_distribution_invariant(t, seed):
    rng = np.random.default_rng(seed)
    state = random_state(rng, 2, 6)
    bs = BeamSplitterSpec(t, math.sqrt(1 - t * t))
    out = fock.apply_beam_splitter(state, bs)
    before = fock.total_photon_distribution(state)[:7]
    after = fock.total_photon_distribution(out)[:7]
    assert np.allclose(before, after, atol=1e-12)


def test_leaked_mass_is_reported():
    out = fock.apply_beam_splitter(fock.fock_ket((3, 3), 3), BeamSplitterSpec.from_B(1.0))
    assert out.leaked > 0
    assert out.norm_sq() + out.leaked == pytest.approx(1.0, abs=1e-12)


def test_splitter_spec_validation():
    with pytest.raises(ValueError):
        BeamSplitterSpec(0.0, 1.0)
    with pytest.raises(ValueError):
        BeamSplitterSpec(0.6, 0.6)
    with pytest.raises(ValueError):
        BeamSplitterSpec(0.6, 0.8, 1, 1)
    assert BeamSplitterSpec.from_B(2.5).B == pytest.approx(2.5, rel=1e-12)


def test_splitter_bad_modes():
    with pytest.raises(IndexError):
        fock.apply_beam_splitter(fock.fock_ket((0, 1), 2), BeamSplitterSpec(0.6, 0.8, 0, 2))


# ---------------------------------------------------------------------------
# projections and overlaps


def test_project_definite_photon_number():
    psi = fock.from_vector([0.6, 0.8], 4)
    st_ = fock.tensor(psi, fock.fock_ket((3,), 4))
    cond, p = fock.project_pnr(st_, 1, 3)
    assert p == pytest.approx(1.0)
    assert np.allclose(cond.amplitudes, psi.amplitudes)
    cond, p = fock.project_pnr(st_, 1, 2)
    assert p == 0 and cond.is_empty


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_projection_completeness(seed, mode):
    rng = np.random.default_rng(seed)
    s = random_state(rng, 3, 4)
    total = sum(fock.project_pnr(s, mode, k)[1] for k in range(5))
    assert total == pytest.approx(s.norm_sq(), abs=1e-10)


def test_project_heralds_one_photon_subtracted_state():
    # SMSV through BS(B0=1), one photon detected on the reflected mode:
    # the conditional state is the odd state proportional to x exp(y0 x^2)
    y, B0 = 0.3, 1.0
    y0 = y / (1 + B0)
    st_ = fock.tensor(fock.smsv_state(y, 60), fock.fock_ket((0,), 60))
    st_ = fock.apply_beam_splitter(st_, BeamSplitterSpec.from_B(B0))
    cond, _ = fock.project_pnr(st_, 1, 1)
    expected = np.zeros(61)
    for n in range(30):
        c, _ = oracles.family_coefficient("sub_only", 1, y0, 0, 0, n)
        expected[2 * n + 1] = float(c)
    expected /= np.linalg.norm(expected)
    got = cond.amplitudes.real * np.sign(cond.amplitudes.real[1])
    assert np.max(np.abs(got - expected)) < 1e-10


def test_overlap_basics():
    z, o = fock.fock_ket((0,), 3), fock.fock_ket((1,), 3)
    assert fock.overlap(z, z) == 1
    assert fock.overlap(z, o) == 0
    s = fock.smsv_state(0.3, 120)
    assert abs(fock.overlap(s, s) - 1) < 1e-10
    with pytest.raises(ValueError):
        fock.overlap(z, fock.fock_ket((0, 0), 3))


def test_truncation_tail_reports_boundary_mass():
    s = fock.from_vector([0, 0, 1], 2)
    assert s.truncation_tail() == pytest.approx(1.0)
    assert fock.fock_ket((0, 0), 2).truncation_tail() == 0
