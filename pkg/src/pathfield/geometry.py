"""Flat diagonal metrics, intervals, permutation signs, and the
dimension-raising metric extension.

The signature convention is fixed to (+, -, ..., -): index 0 is the
time-like direction. This is not configurable; every other module relies
on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class Metric:
    """Diagonal constant-coefficient metric of a Minkowski-type manifold.

    diag holds the N signature entries (each +1 or -1).  invariant_label
    optionally names the conjugate invariant attached to this level of the
    dimensional ladder (e.g. "m", "m'").
    """

    dim: int
    diag: tuple[int, ...]
    invariant_label: str | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"metric dimension must be >= 1, got {self.dim}")
        if len(self.diag) != self.dim:
            raise ValueError("diag length does not match dim")
        if any(s not in (-1, 1) for s in self.diag):
            raise ValueError("diag entries must be +1 or -1")

    @property
    def signs(self) -> np.ndarray:
        return np.asarray(self.diag, dtype=float)


def minkowski_metric(n: int) -> Metric:
    """Metric diag(+1, -1, ..., -1) in n dimensions (n >= 2)."""
    if n < 2:
        raise ValueError(f"Minkowski construction needs dimension >= 2, got {n}")
    return Metric(dim=n, diag=(1,) + (-1,) * (n - 1))


def extend_metric(g: Metric, new_invariant: str) -> Metric:
    """Adjoin one coordinate with metric entry -1, labelling the new
    conjugate invariant.  All existing diagonal entries are preserved."""
    return Metric(dim=g.dim + 1, diag=g.diag + (-1,), invariant_label=new_invariant)


def interval(g: Metric, dx: Sequence[float]) -> float:
    """Quadratic form sum_mu diag[mu] * dx[mu]^2."""
    v = np.asarray(dx, dtype=float)
    if v.shape != (g.dim,):
        raise ValueError(f"displacement has shape {v.shape}, metric needs ({g.dim},)")
    return float(np.dot(g.signs, v * v))


def levi_civita_sign(indices: Sequence[int], dim: int | None = None) -> int:
    """Permutation parity: +1/-1 for even/odd permutations of 0..dim-1,
    0 when an index repeats.  Computed by transposition counting so it
    works in any dimension."""
    idx = list(indices)
    n = len(idx) if dim is None else dim
    if len(idx) != n:
        raise IndexError(f"expected {n} indices, got {len(idx)}")
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range [0, {n})")
    if len(set(idx)) != n:
        return 0
    sign = 1
    work = idx[:]
    for i in range(n):
        while work[i] != i:
            j = work[i]
            work[i], work[j] = work[j], work[i]
            sign = -sign
    return sign


def dual_rank(dim: int) -> int:
    """Rank of the Levi-Civita dual of a rank-2 antisymmetric tensor."""
    if dim < 2:
        raise ValueError("dual of a rank-2 tensor needs dimension >= 2")
    return dim - 2
