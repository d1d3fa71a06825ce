"""Majorization tests and constructive permutation-mixture decompositions.

``hlp_decompose`` writes a probability vector inside the permutohedron of
another as an explicit convex combination of its coordinate permutations:
a chain of pairwise-averaging transfers produces a doubly stochastic matrix
connecting the two vectors, and a Birkhoff extraction turns that matrix
into permutation terms. Term counts are reduced to the Caratheodory bound
(n-1)^2 + 1 by eliminating affine dependencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadRange, LengthMismatch, NotDoublyStochastic, NotMajorized

SUPPORT_TOL = 1e-10
RECON_TOL = 1e-8
WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class PermutationMixture:
    """Terms (weight, perm) with perm applied as out[i] = vec[perm[i]]."""

    terms: tuple[tuple[float, tuple[int, ...]], ...]

    def apply(self, vec: np.ndarray) -> np.ndarray:
        v = np.asarray(vec, dtype=float)
        out = np.zeros_like(v)
        for w, perm in self.terms:
            out += w * v[np.array(perm)]
        return out

    def matrix(self, n: int) -> np.ndarray:
        out = np.zeros((n, n))
        for w, perm in self.terms:
            out[np.arange(n), np.array(perm)] += w
        return out

    def total_weight(self) -> float:
        return float(sum(w for w, _ in self.terms))


def majorized_by_permutohedron(x, mu, tol: float = WEIGHT_TOL) -> bool:
    """True iff x lies in the convex hull of the coordinate permutations of mu.

    Checked via ascending partial sums: for every r the r smallest entries
    of x must sum to at least the r smallest entries of mu, with totals
    agreeing.
    """
    xs = np.sort(np.asarray(x, dtype=float))
    ms = np.sort(np.asarray(mu, dtype=float))
    if xs.shape != ms.shape:
        raise LengthMismatch(f"lengths {xs.shape} vs {ms.shape}")
    if abs(xs.sum() - ms.sum()) > tol:
        return False
    return bool(np.all(np.cumsum(xs)[:-1] >= np.cumsum(ms)[:-1] - tol))


def _perfect_matching(support: np.ndarray) -> list[int] | None:
    """Augmenting-path matching on the row->column support graph.

    Returns match[row] = column, or None when no perfect matching exists.
    """
    n = support.shape[0]
    match_col = [-1] * n  # column -> row

    def try_row(r: int, seen: list[bool]) -> bool:
        for c in range(n):
            if support[r, c] and not seen[c]:
                seen[c] = True
                if match_col[c] == -1 or try_row(match_col[c], seen):
                    match_col[c] = r
                    return True
        return False

    for r in range(n):
        if not try_row(r, [False] * n):
            return None
    out = [-1] * n
    for c, r in enumerate(match_col):
        out[r] = c
    return out


def _prune_to_caratheodory(
    weights: list[float], perms: list[tuple[int, ...]], n: int
) -> tuple[list[float], list[tuple[int, ...]]]:
    """Drop terms while the permutation matrices stay affinely dependent."""
    limit = (n - 1) ** 2 + 1
    while len(weights) > limit:
        rows = []
        for perm in perms:
            p = np.zeros((n, n))
            p[np.arange(n), np.array(perm)] = 1.0
            rows.append(np.concatenate([p.ravel(), [1.0]]))
        a = np.array(rows).T  # (n^2+1, T) with T <= n^2 - n + 1 from the greedy
        _, s, vt = np.linalg.svd(a)
        if s[-1] > 1e-12:
            break  # affinely independent already
        c = vt[-1]
        if np.max(np.abs(c)) < 1e-12:
            break
        positive = [(weights[t] / c[t], t) for t in range(len(c)) if c[t] > 1e-15]
        if not positive:
            c = -c
            positive = [(weights[t] / c[t], t) for t in range(len(c)) if c[t] > 1e-15]
            if not positive:
                break
        theta, drop = min(positive)
        weights = [w - theta * ct for w, ct in zip(weights, c)]
        weights[drop] = 0.0
        keep = [t for t, w in enumerate(weights) if w > 1e-15]
        weights = [weights[t] for t in keep]
        perms = [perms[t] for t in keep]
    return weights, perms


def birkhoff(d: np.ndarray, tol: float = RECON_TOL) -> PermutationMixture:
    """Decompose a doubly stochastic matrix into permutation matrices.

    Greedy extraction along perfect matchings of the positive support
    (entries below 1e-10 count as zero), then Caratheodory reduction to at
    most (n-1)^2 + 1 terms.
    """
    a = np.array(d, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotDoublyStochastic(f"expected square matrix, got {a.shape}")
    n = a.shape[0]
    if np.any(a < -SUPPORT_TOL):
        raise NotDoublyStochastic("negative entries")
    if np.max(np.abs(a.sum(axis=0) - 1.0)) > tol or np.max(np.abs(a.sum(axis=1) - 1.0)) > tol:
        raise NotDoublyStochastic("row/column sums deviate from 1")

    work = np.clip(a, 0.0, None)
    weights: list[float] = []
    perms: list[tuple[int, ...]] = []
    remaining = 1.0
    for _ in range(n * n + 1):
        if remaining <= tol:
            break
        match = _perfect_matching(work > SUPPORT_TOL)
        if match is None:
            raise NotDoublyStochastic(
                f"no perfect matching on residual support (mass {remaining:.3e} left)"
            )
        w = float(min(work[r, match[r]] for r in range(n)))
        weights.append(w)
        perms.append(tuple(match))
        for r in range(n):
            work[r, match[r]] -= w
        work = np.clip(work, 0.0, None)
        remaining -= w
    if remaining > tol:
        raise NotDoublyStochastic(f"extraction stalled with mass {remaining:.3e} left")
    weights, perms = _prune_to_caratheodory(weights, perms, n)
    total = sum(weights)
    terms = tuple((w / total, perm) for w, perm in zip(weights, perms))
    return PermutationMixture(terms=terms)


def _transfer_chain(target_desc: np.ndarray, source_desc: np.ndarray) -> np.ndarray:
    """Doubly stochastic D with target = D @ source, both sorted descending.

    Each step averages the pair of coordinates bracketing the remaining
    disagreement, matching at least one more coordinate; at most n-1 steps.
    """
    n = len(source_desc)
    d = np.eye(n)
    y = source_desc.astype(float).copy()
    x = target_desc
    for _ in range(n):
        diff = y - x
        if np.max(np.abs(diff)) <= 1e-13:
            break
        over = np.nonzero(diff > 1e-13)[0]
        j = int(over[-1])  # largest index still exceeding the target
        after = np.nonzero(diff[j + 1 :] < -1e-13)[0]
        if len(after) == 0:
            break
        k = j + 1 + int(after[0])
        delta = min(y[j] - x[j], x[k] - y[k])
        gap = y[j] - y[k]
        lam = 1.0 - delta / gap
        t = np.eye(n)
        t[j, j] = t[k, k] = lam
        t[j, k] = t[k, j] = 1.0 - lam
        y = t @ y
        d = t @ d
    return d


def hlp_decompose(mu, nu, tol: float = WEIGHT_TOL) -> PermutationMixture:
    """Write mu as a convex combination of coordinate permutations of nu.

    Requires mu inside the permutohedron of nu; the result recomposes to mu
    within 1e-8 and has at most (n-1)^2 + 1 terms.
    """
    m = np.asarray(mu, dtype=float)
    v = np.asarray(nu, dtype=float)
    if m.shape != v.shape:
        raise LengthMismatch(f"lengths {m.shape} vs {v.shape}")
    if not majorized_by_permutohedron(m, v, tol):
        raise NotMajorized("target vector lies outside the permutohedron")
    n = len(m)
    order_m = np.argsort(-m, kind="stable")
    order_v = np.argsort(-v, kind="stable")
    d_sorted = _transfer_chain(m[order_m], v[order_v])
    # unsort: with S selecting sorted coordinates, D = S_m^T D_sorted S_v
    s_m = np.zeros((n, n))
    s_m[np.arange(n), order_m] = 1.0
    s_v = np.zeros((n, n))
    s_v[np.arange(n), order_v] = 1.0
    d = s_m.T @ d_sorted @ s_v
    return birkhoff(d)


def max_subset_distribution(n: int, d: int) -> np.ndarray:
    """Distribution of the largest element of a uniform d-subset of [n].

    Prefix sums are exactly C(r,d)/C(n,d) (computed in integer arithmetic).
    """
    if not 1 <= d <= n:
        raise BadRange(f"need 1 <= d <= n, got d={d}, n={n}")
    total = math.comb(n, d)
    out = np.empty(n)
    for r in range(1, n + 1):
        out[r - 1] = float(Fraction(math.comb(r, d) - math.comb(r - 1, d), total))
    return out
