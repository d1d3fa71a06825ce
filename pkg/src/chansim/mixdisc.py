"""Mixed discriminants and the induced distribution on outcome tuples.

The mixed discriminant is the symmetric multilinear extension of the
determinant: evaluated by the column-interleaving permutation expansion,
so D(E, ..., E) = det E. For a POVM E_1..E_k the values
p_I = D(E_{i_1}, ..., E_{i_n}) over I in [k]^n form a probability
distribution; it is computed once per index multiset and shared across
permutations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Sequence

import numpy as np

from ._multiset import multiplicity, multiset_classes, orderings
from .errors import (
    BadRange,
    DimensionMismatch,
    EnumerationCapExceeded,
    MassDriftExceeded,
    NegativeWeight,
    NonRealResult,
)
from .linalg import as_complex_matrix

CLAMP_TOL = 1e-9
MASS_DRIFT_TOL = 1e-7
DEFAULT_CAP = 10**6


@lru_cache(maxsize=None)
def _permutation_array(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.intp)


def mixed_discriminant(matrices: Sequence[np.ndarray]) -> float:
    """D(E_1, ..., E_n) for exactly n matrices of dimension n.

    Averages det over all ways of taking column t from matrix pi(t); the
    inputs are expected Hermitian so the result is real (NonRealResult if
    the imaginary part survives above 1e-8).
    """
    mats = [as_complex_matrix(m) for m in matrices]
    if not mats:
        raise DimensionMismatch("need at least one matrix")
    n = mats[0].shape[0]
    if len(mats) != n:
        raise DimensionMismatch(f"need exactly {n} matrices of dimension {n}, got {len(mats)}")
    for m in mats:
        if m.shape[0] != n:
            raise DimensionMismatch("all matrices must share the same dimension")
    stack = np.stack(mats)  # (n, n, n): stack[i] = E_i
    perms = _permutation_array(n)  # (n!, n)
    # interleaved[q, t, :] = column t of E_{perms[q, t]}
    interleaved = stack[perms, :, np.arange(n)]
    dets = np.linalg.det(interleaved.transpose(0, 2, 1))
    value = dets.sum() / math.factorial(n)
    if abs(value.imag) > 1e-8:
        raise NonRealResult(f"imaginary part {value.imag:.3e} exceeds 1e-8")
    return float(value.real)


def symmetric_mixed(f: np.ndarray, q: int, n: int) -> float:
    """D(F, ..., F, 1-F, ..., 1-F) with n-q copies of F and q of 1-F."""
    a = as_complex_matrix(f)
    if a.shape[0] != n:
        raise DimensionMismatch(f"matrix is {a.shape[0]}-square, expected {n}")
    if not 0 <= q <= n:
        raise BadRange(f"q={q} outside 0..{n}")
    comp = np.eye(n) - a
    return mixed_discriminant([a] * (n - q) + [comp] * q)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Sparse probability weights p_I over index tuples I in [k]^n.

    Zero entries are omitted; stored weights are positive and sum to 1.
    """

    n: int
    k: int
    weights: dict[tuple[int, ...], float] = field(repr=False)

    def total(self) -> float:
        return float(sum(self.weights.values()))

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.weights)

    def class_weights(self) -> dict[tuple[int, ...], tuple[float, int]]:
        """Map sorted multiset -> (weight per tuple, number of tuples)."""
        out: dict[tuple[int, ...], tuple[float, int]] = {}
        for key, p in self.weights.items():
            ms = tuple(sorted(key))
            if ms not in out:
                out[ms] = (p, multiplicity(ms))
        return out


def distribution_from_class_values(
    k: int, n: int, class_value, cap: int = DEFAULT_CAP
) -> OutcomeDistribution:
    """Build an OutcomeDistribution from a symmetric per-multiset evaluator.

    ``class_value(ms)`` must return the common weight of every ordering of
    the sorted multiset ``ms``. Weights in [-1e-9, 0) are clamped to zero,
    anything more negative is an error, and the total mass is renormalized
    when it drifts from 1 by at most 1e-7.
    """
    if k**n > cap:
        raise EnumerationCapExceeded(f"k^n = {k}^{n} exceeds cap {cap}")
    weights: dict[tuple[int, ...], float] = {}
    mass = 0.0
    for ms in multiset_classes(k, n):
        value = float(class_value(ms))
        if value < -CLAMP_TOL:
            raise NegativeWeight(f"weight {value:.3e} at class {ms} below -1e-9")
        if value <= 0.0:
            continue
        mass += value * multiplicity(ms)
        for key in orderings(ms):
            weights[key] = value
    drift = abs(mass - 1.0)
    if drift > MASS_DRIFT_TOL:
        raise MassDriftExceeded(f"total mass {mass!r} drifts from 1 by {drift:.3e}")
    if mass > 0.0:
        for key in weights:
            weights[key] /= mass
    return OutcomeDistribution(n=n, k=k, weights=weights)


def outcome_distribution(
    outcomes: Sequence[np.ndarray], cap: int = DEFAULT_CAP
) -> OutcomeDistribution:
    """p_I = D(E_{i_1}, ..., E_{i_n}) for every tuple I over a POVM."""
    mats = [as_complex_matrix(e) for e in outcomes]
    if not mats:
        raise DimensionMismatch("need at least one POVM outcome")
    n = mats[0].shape[0]
    k = len(mats)
    return distribution_from_class_values(
        k, n, lambda ms: mixed_discriminant([mats[i] for i in ms]), cap=cap
    )
