"""
core/spectral.py
Walsh-Hadamard analysis of S-boxes: the fast butterfly transform, the full
component spectrum, nonlinearity and the WHS cost that drives the search.

Spectra use the signed convention W(a) = sum_x (-1)^(f(x) xor a.x).
"""
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from config import COST_MAX_BITS, DEFAULT_COST_R, DEFAULT_COST_X
from core.exceptions import ConfigurationError, CostOverflowError
from core.sbox import SBox, TruthTable, component_matrix

Cost = Union[int, float]


@dataclass(frozen=True)
class CostParams:
    """WHS parameters: cost = sum |W[b][a] - x|^r."""
    x: float = DEFAULT_COST_X
    r: int = DEFAULT_COST_R

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ConfigurationError(f"cost exponent r must be a positive integer, got {self.r}")

    @property
    def exact(self) -> bool:
        """True when the cost is an exact integer (integral offset)."""
        return float(self.x).is_integer()


@dataclass(frozen=True)
class EvalResult:
    nl: int
    cost: Cost


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    """coeffs[b - 1][a] = W_b(a) for component selectors b = 1..2^n-1."""
    n: int
    coeffs: np.ndarray

    @property
    def max_abs(self) -> int:
        return int(np.abs(self.coeffs).max())


# Any function SBox -> EvalResult can drive the search engines.
Evaluator = Callable[[SBox], EvalResult]


def _butterfly(a: np.ndarray) -> np.ndarray:
    """In-place-style fast Walsh-Hadamard butterfly along the last axis of a 2-D array."""
    rows, size = a.shape
    h = 1
    while h < size:
        a = a.reshape(rows, size // (2 * h), 2, h)
        lo, hi = a[:, :, 0, :], a[:, :, 1, :]
        a = np.stack((lo + hi, lo - hi), axis=2)
        h *= 2
    return a.reshape(rows, size)


def walsh_transform(tt: TruthTable) -> np.ndarray:
    """Walsh spectrum of one Boolean function, O(n 2^n)."""
    signs = 1 - 2 * tt.bits.astype(np.int32)
    return _butterfly(signs[None, :])[0]


def walsh_spectrum(s: SBox) -> WalshSpectrum:
    """Spectra of all 2^n - 1 nonzero component functions, transformed together."""
    signs = 1 - 2 * component_matrix(s).astype(np.int32)
    return WalshSpectrum(s.n, _butterfly(signs))


def _nl_from_spectrum(spec: WalshSpectrum) -> int:
    return (1 << (spec.n - 1)) - spec.max_abs // 2


def _cost_from_spectrum(spec: WalshSpectrum, p: CostParams) -> Cost:
    if not p.exact:
        cost = float(np.sum(np.abs(spec.coeffs - p.x) ** float(p.r)))
        if not math.isfinite(cost):
            raise CostOverflowError(f"WHS cost is not finite in float arithmetic (n={spec.n}, X={p.x}, R={p.r})")
        return cost

    # Histogram of |W - X| lets the power sum run on exact Python integers.
    magnitudes = np.abs(spec.coeffs.astype(np.int64) - int(p.x)).ravel()
    counts = np.bincount(magnitudes)
    r = int(p.r)
    cost = sum(int(c) * v ** r for v, c in enumerate(counts.tolist()) if c)
    if cost.bit_length() > COST_MAX_BITS:
        raise CostOverflowError(
            f"WHS cost needs {cost.bit_length()} bits (n={spec.n}, X={p.x}, R={p.r}); limit is {COST_MAX_BITS}"
        )
    return cost


def nonlinearity(s: SBox) -> int:
    """NL = 2^(n-1) - max |W_b(a)| / 2 over all b != 0 and all a."""
    return _nl_from_spectrum(walsh_spectrum(s))


def whs_cost(s: SBox, p: CostParams = CostParams()) -> Cost:
    return _cost_from_spectrum(walsh_spectrum(s), p)


def evaluate(s: SBox, p: CostParams = CostParams()) -> EvalResult:
    """Nonlinearity and WHS cost from a single spectrum computation."""
    spec = walsh_spectrum(s)
    return EvalResult(_nl_from_spectrum(spec), _cost_from_spectrum(spec, p))


def is_balanced(s: SBox) -> bool:
    """Every nonzero component has weight 2^(n-1), i.e. W_b(0) = 0 for all b."""
    return bool((walsh_spectrum(s).coeffs[:, 0] == 0).all())
