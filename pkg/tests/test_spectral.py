import itertools
import os
import sys

import numpy as np
import pytest

# Add project root to sys.path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.exceptions import ConfigurationError, CostOverflowError
from core.rng import make_rng
from core.sbox import (
    AES_SBOX, TruthTable, component_function, identity_sbox, parity_table,
    random_sbox, sbox_from_table,
)
from core.spectral import (
    CostParams, evaluate, is_balanced, nonlinearity, walsh_spectrum,
    walsh_transform, whs_cost,
)


def _naive_spectrum(s) -> np.ndarray:
    """W[b-1][a] by direct summation over x, as a signed matrix product."""
    size = s.size
    par = parity_table(s.n)
    idx = np.arange(size)
    f_signs = 1 - 2 * par[idx[1:, None] & s.table.astype(np.int64)[None, :]].astype(np.int64)
    chi = 1 - 2 * par[idx[:, None] & idx[None, :]].astype(np.int64)
    return f_signs @ chi.T


def _naive_cost(s, x=0, r=12):
    return sum(abs(int(w) - x) ** r for w in _naive_spectrum(s).ravel())


def _brute_force_nl(s) -> int:
    """Minimum Hamming distance from any nonzero component to any affine function."""
    size = s.size
    par = parity_table(s.n)
    idx = np.arange(size)
    linear = par[idx[:, None] & idx[None, :]]
    best = size
    for b in range(1, size):
        f = component_function(s, b).bits
        dist = (f[None, :] != linear).sum(axis=1)
        best = min(best, int(dist.min()), int((size - dist).min()))
    return best


def test_walsh_transform_of_constant_and_linear():
    zero = TruthTable(3, np.zeros(8, dtype=np.uint8))
    assert walsh_transform(zero).tolist() == [8, 0, 0, 0, 0, 0, 0, 0]

    low_bit = TruthTable(3, np.array([x & 1 for x in range(8)], dtype=np.uint8))
    assert walsh_transform(low_bit).tolist() == [0, 8, 0, 0, 0, 0, 0, 0]


def test_parseval_on_random_components():
    rng = make_rng(31)
    for _ in range(1000):
        n = int(rng.integers(3, 9))
        s = random_sbox(n, rng)
        b = int(rng.integers(1, s.size))
        w = walsh_transform(component_function(s, b)).astype(np.int64)
        assert int((w * w).sum()) == 1 << (2 * n)


def test_parseval_holds_for_unbalanced_functions():
    rng = make_rng(32)
    for _ in range(50):
        tt = TruthTable(6, rng.integers(0, 2, size=64).astype(np.uint8))
        w = walsh_transform(tt).astype(np.int64)
        assert int((w * w).sum()) == 64 * 64


def test_spectrum_matches_direct_summation():
    s = random_sbox(6, make_rng(3))
    assert np.array_equal(walsh_spectrum(s).coeffs, _naive_spectrum(s))


def test_nonlinearity_of_aes_and_identity():
    assert nonlinearity(sbox_from_table(8, AES_SBOX)) == 112
    assert nonlinearity(identity_sbox(8)) == 0


def test_nonlinearity_matches_affine_distance_oracle():
    rng = make_rng(404)
    for _ in range(200):
        s = random_sbox(4, rng)
        assert nonlinearity(s) == _brute_force_nl(s)
    for _ in range(50):
        s = random_sbox(5, rng)
        assert nonlinearity(s) == _brute_force_nl(s)


def test_nonlinearity_respects_bent_bound():
    rng = make_rng(8)
    for n in (4, 6, 8):
        bound = (1 << (n - 1)) - (1 << (n // 2 - 1))
        for _ in range(20):
            assert 0 <= nonlinearity(random_sbox(n, rng)) <= bound


def test_nonlinearity_is_invariant_under_input_bit_permutation():
    rng = make_rng(9)
    n = 6
    for _ in range(20):
        s = random_sbox(n, rng)
        perm = rng.permutation(n)
        moved = [sum(((x >> i) & 1) << int(perm[i]) for i in range(n)) for x in range(1 << n)]
        t = sbox_from_table(n, [s[moved[x]] for x in range(1 << n)])
        assert nonlinearity(t) == nonlinearity(s)


def test_cost_of_identity():
    assert whs_cost(identity_sbox(8)) == 255 * 2 ** 96


def test_cost_with_exponent_two_is_constant():
    rng = make_rng(10)
    for _ in range(20):
        assert whs_cost(random_sbox(8, rng), CostParams(x=0, r=2)) == 255 * 2 ** 16
    assert whs_cost(sbox_from_table(8, AES_SBOX), CostParams(x=0, r=2)) == 255 * 2 ** 16


def test_cost_matches_naive_oracle_on_random_sboxes():
    rng = make_rng(11)
    for _ in range(50):
        s = random_sbox(8, rng)
        assert whs_cost(s) == _naive_cost(s)


def test_cost_matches_naive_oracle_on_small_widths():
    # every 3-bit permutation, plus samples at n = 4, 5
    for perm in itertools.permutations(range(8)):
        s = sbox_from_table(3, perm)
        assert whs_cost(s) == _naive_cost(s)
    rng = make_rng(12)
    for n in (4, 5):
        for _ in range(100):
            s = random_sbox(n, rng)
            assert whs_cost(s, CostParams(x=4, r=6)) == _naive_cost(s, x=4, r=6)


def test_cost_is_exact_integer_and_positive():
    cost = whs_cost(sbox_from_table(8, AES_SBOX))
    assert isinstance(cost, int)
    assert cost > 0
    assert cost.bit_length() <= 128


def test_evaluate_agrees_with_standalone_functions():
    rng = make_rng(13)
    for n in (4, 8):
        s = random_sbox(n, rng)
        result = evaluate(s)
        assert result.nl == nonlinearity(s)
        assert result.cost == whs_cost(s)


def test_large_exponent_overflows():
    with pytest.raises(CostOverflowError):
        whs_cost(identity_sbox(8), CostParams(x=0, r=20))


def test_fractional_offset_uses_float_path():
    s = random_sbox(4, make_rng(14))
    cost = whs_cost(s, CostParams(x=0.5, r=3))
    assert isinstance(cost, float)
    expected = float(sum(abs(float(w) - 0.5) ** 3 for w in _naive_spectrum(s).ravel()))
    assert cost == pytest.approx(expected)


def test_cost_params_reject_bad_exponent():
    with pytest.raises(ConfigurationError):
        CostParams(x=0, r=0)
    with pytest.raises(ConfigurationError):
        CostParams(x=0, r=2.5)


def test_bijective_sboxes_are_balanced():
    assert is_balanced(sbox_from_table(8, AES_SBOX))
    assert is_balanced(random_sbox(5, make_rng(15)))


def test_aes_cost_matches_naive_oracle():
    aes = sbox_from_table(8, AES_SBOX)
    expected = _naive_cost(aes)
    assert whs_cost(aes) == expected
    result = evaluate(aes)
    assert (result.nl, result.cost) == (112, expected)


def test_float_cost_overflow_is_flagged():
    with pytest.raises(CostOverflowError):
        whs_cost(identity_sbox(8), CostParams(x=0.5, r=200))
