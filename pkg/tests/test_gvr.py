import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from catcode import linalg
from catcode.channel import damp_density, flip_probability
from catcode.coherent import LogicalQubit, QubitDensity, frame_vector, qubit_to_density
from catcode.gvr import (CodeConfig, Regime, code_success_probability, decode_frames, decoded_density,
                         exact_n3_oracle, logical_flip_prob, majority_failure_probability, per_mode_amplitude,
                         per_mode_flip, transmit, xor_combine)
from catcode.hadamard import hadamard_unitary_frame

REGIMES = list(Regime)
NS = (1, 3, 5, 11, 51)


def _enumerate_success(p, n):
    return sum(p ** sum(f) * (1 - p) ** (n - sum(f))
               for f in itertools.product((0, 1), repeat=n) if sum(f) <= (n - 1) // 2)


def test_per_mode_amplitude():
    assert per_mode_amplitude(1.7, 1) == 1.7
    assert per_mode_amplitude(1.7, 4) == 0.85
    assert abs(per_mode_amplitude(2.0, 3) - 1.1547005) <= 1e-7


def test_xor_combine():
    for p in (0.0, 0.13, 0.6):
        assert xor_combine(p, 0.0) == p
        assert xor_combine(0.5, p) == 0.5
    assert abs(xor_combine(0.1, 0.2) - 0.26) <= 1e-15


def test_lossless_post_selected_has_no_flips():
    for n in NS:
        assert per_mode_flip(1.3, 1.0, n, Regime.POST_SELECTED)[0] == 0.0


def test_orthogonal_limit_leaves_only_loss():
    ref = flip_probability(8 / math.sqrt(3), 0.9)
    for regime in REGIMES:
        assert abs(per_mode_flip(8.0, 0.9, 3, regime)[0] - ref) <= 1e-6


def test_deterministic_flip_is_three_term_xor():
    a = 1.5 / math.sqrt(3)
    b = a * math.sqrt(0.9)
    enc = (1 - math.sqrt(1 - math.exp(-4 * a * a))) / 2
    loss = (1 - math.exp(-2 * 0.1 * a * a)) / 2
    dec = (1 - math.sqrt(1 - math.exp(-4 * b * b))) / 2
    two = enc + loss - 2 * enc * loss
    ref = two + dec - 2 * two * dec
    assert abs(per_mode_flip(1.5, 0.9, 3, Regime.DETERMINISTIC)[0] - ref) <= 1e-14


def test_regime_heralds():
    a, b = 1.2 / math.sqrt(5), 1.2 * math.sqrt(0.8) / math.sqrt(5)
    ok = lambda x: (1 + math.sqrt(1 - math.exp(-4 * x * x))) / 2
    p, h = per_mode_flip(1.2, 0.8, 5, Regime.POST_SELECTED)
    assert abs(h - ok(a) * ok(b)) <= 1e-14
    for regime in (Regime.OFFLINE_ENCODING, Regime.DETERMINISTIC):
        assert per_mode_flip(1.2, 0.8, 5, regime)[1] == 1.0
        assert logical_flip_prob(1.2, 0.8, CodeConfig(5, regime))[1] == 1.0


def test_encoder_amplitude_switch():
    base = CodeConfig(3, Regime.DETERMINISTIC)
    late = CodeConfig(3, Regime.DETERMINISTIC, encoder_at="post_loss")
    assert logical_flip_prob(1.0, 0.66, late)[0] > logical_flip_prob(1.0, 0.66, base)[0]
    off = [logical_flip_prob(1.0, 0.66, CodeConfig(3, Regime.OFFLINE_ENCODING, e))[0] for e in ("input", "post_loss")]
    assert off[0] == off[1]


def test_success_probability_three_reps_closed_form():
    for p in np.linspace(0, 1, 101):
        assert abs(code_success_probability(p, 3) - (1 - 3 * p * p + 2 * p ** 3)) <= 1e-13


def test_success_probability_trivial_and_enumerated():
    for n in NS:
        assert code_success_probability(0.0, n) == 1.0
    assert abs(code_success_probability(0.1, 5) - 0.99144) <= 1e-12
    assert abs(_enumerate_success(0.1, 5) - 0.99144) <= 1e-12


def test_success_and_failure_are_complementary():
    for n in NS:
        for p in np.linspace(0, 1, 21):
            assert abs(code_success_probability(p, n) + majority_failure_probability(p, n) - 1) <= 1e-13


def test_majority_vote_amplifies_majority():
    for p in (0.05, 0.2, 0.45):
        s = [code_success_probability(p, n) for n in NS]
        assert np.all(np.diff(s) > 0)
        s = [code_success_probability(1 - p, n) for n in NS]
        assert np.all(np.diff(s) < 0)


def test_fifty_one_reps_against_exact_rationals():
    p = Fraction(0.3)
    ref = sum(math.comb(51, k) * p ** k * (1 - p) ** (51 - k) for k in range(26))
    assert abs(code_success_probability(0.3, 51) - float(ref)) / float(ref) <= 1e-10


def test_even_repetition_count_rejected():
    with pytest.raises(ValueError):
        code_success_probability(0.1, 4)
    for n in (0, 2, 101):
        with pytest.raises(ValueError):
            CodeConfig(n, Regime.DETERMINISTIC)
    with pytest.raises(ValueError):
        CodeConfig(3, Regime.DETERMINISTIC, encoder_at="middle")


def test_logical_flip_examples():
    p1, _ = per_mode_flip(1.1, 0.7, 1, Regime.DETERMINISTIC)
    assert logical_flip_prob(1.1, 0.7, CodeConfig(1, Regime.DETERMINISTIC))[0] == p1
    for n in NS:
        assert abs(majority_failure_probability(0.5, n) - 0.5) <= 1e-13
    assert abs(majority_failure_probability(0.05, 3) - (3 * 0.05 ** 2 * 0.95 + 0.05 ** 3)) <= 1e-16
    assert abs(majority_failure_probability(0.05, 3) - 0.00725) <= 1e-15


def test_perfect_channel_returns_input(rng):
    for n in NS:
        q = LogicalQubit(1.3, float(rng.uniform()), float(rng.uniform(0, math.pi)))
        res = transmit(q, 1.0, CodeConfig(n, Regime.POST_SELECTED))
        assert linalg.trace_distance(res.output.matrix, qubit_to_density(q).matrix) <= 1e-12
        assert res.p_logical_flip == 0.0 and res.p_success_channel == 1.0


def test_transmission_result_is_normalized(rng):
    for regime in REGIMES:
        for n in NS:
            q = LogicalQubit(2.0, float(rng.uniform()), float(rng.uniform(0, math.pi)))
            res = transmit(q, 0.66, CodeConfig(n, regime))
            assert abs(res.output.matrix.trace() - 1) <= 1e-10
            assert 0 <= res.p_logical_flip <= 1 and 0 < res.p_herald <= 1
            assert abs(res.output.frame.alpha - 2.0 * math.sqrt(0.66)) <= 1e-15


def test_single_mode_with_ideal_gates_is_loss_between_hadamards():
    # N = 1 is H, loss, H; at alpha = 6 the gates are ideal
    h = hadamard_unitary_frame()
    for w, theta in ((1.0, 0.0), (0.3, 1.0), (0.5, 0.0), (0.8, 2.5)):
        q = LogicalQubit(6.0, w, theta)
        rho = qubit_to_density(q)
        mid = damp_density(QubitDensity(rho.frame, h @ rho.matrix @ h.conj().T), 0.9)
        ref = h @ mid.matrix @ h.conj().T
        out = transmit(q, 0.9, CodeConfig(1, Regime.DETERMINISTIC)).output.matrix
        assert linalg.trace_distance(out, ref) <= 1e-6


def test_three_modes_against_oracle():
    q = LogicalQubit(1.0, 0.5, 0.0)
    out = transmit(q, 0.66, CodeConfig(3, Regime.DETERMINISTIC)).output
    assert linalg.trace_distance(out.matrix, exact_n3_oracle(q, 0.66, Regime.DETERMINISTIC).matrix) <= 1e-6


@pytest.mark.parametrize("encoder_at", ["input", "post_loss"])
@pytest.mark.parametrize("regime", REGIMES)
def test_three_modes_against_oracle_random(rng, regime, encoder_at):
    for alpha in (0.8, 1.6, 2.5):
        for eta in (0.5, 0.9):
            q = LogicalQubit(alpha, float(rng.uniform()), float(rng.uniform(0, math.pi)))
            a = transmit(q, eta, CodeConfig(3, regime, encoder_at)).output.matrix
            b = exact_n3_oracle(q, eta, regime, encoder_at).matrix
            assert linalg.trace_distance(a, b) <= 1e-10


def test_oracle_identity_on_perfect_channel(rng):
    q = LogicalQubit(1.4, float(rng.uniform()), float(rng.uniform(0, math.pi)))
    out = exact_n3_oracle(q, 1.0, Regime.POST_SELECTED)
    assert linalg.trace_distance(out.matrix, qubit_to_density(q).matrix) <= 1e-10


def test_oracle_basis_input_ends_as_basis_mixture():
    # an uncorrected vote swaps the codewords: |-beta> becomes |beta>
    alpha, eta = 1.2, 0.66
    beta = alpha * math.sqrt(eta)
    p_l, _ = logical_flip_prob(alpha, eta, CodeConfig(3, Regime.DETERMINISTIC))
    out = exact_n3_oracle(LogicalQubit(alpha, 1.0, 0.0), eta, Regime.DETERMINISTIC)
    zero = qubit_to_density(LogicalQubit(beta, 1.0, 0.0)).matrix
    one = qubit_to_density(LogicalQubit(beta, 0.0, 0.0)).matrix
    assert linalg.trace_distance(out.matrix, (1 - p_l) * zero + p_l * one) <= 1e-12


def test_oracle_amplitude_guard():
    with pytest.raises(ValueError):
        exact_n3_oracle(LogicalQubit(3.5, 1.0, 0.0), 0.9, Regime.DETERMINISTIC)


def test_vectorized_decoder_matches_scalar(rng):
    alpha, eta, p = 1.3, 0.8, 0.17
    qs = [LogicalQubit(alpha, float(rng.uniform()), float(rng.uniform(0, math.pi))) for _ in range(10)]
    batch = decode_frames(np.stack([frame_vector(q) for q in qs]), alpha, eta, p)
    for q, m in zip(qs, batch):
        ref = decoded_density(q.coefficients(), alpha * math.sqrt(eta), p).matrix
        assert np.abs(m - ref).max() <= 1e-14
