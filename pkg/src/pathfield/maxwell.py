"""Discrete field tensor, Levi-Civita dual, gauge conditions, and the
source-free / Jacobi identities in N dimensions.

Every derivative in this module is the same central-difference stencil
(periodic rolls in space, interior slices in time), so discrete mixed
partials commute exactly and the Jacobi identity holds to roundoff for
any potential-derived tensor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import GaugeError
from .geometry import Metric, levi_civita_sign
from .modes import FieldConfig

#: duals are materialized only up to this dimension
MAX_DUAL_DIM = 6


def _time_central(arr: np.ndarray, dt: float) -> np.ndarray:
    if arr.shape[0] < 3:
        raise ValueError("need at least three time slices for a central difference")
    return (arr[2:] - arr[:-2]) / (2.0 * dt)


def _space_central(arr: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    return (np.roll(arr, -1, axis=axis) - np.roll(arr, 1, axis=axis)) / (2.0 * spacing)


@dataclass(frozen=True)
class FieldTensor:
    """Antisymmetric f^{mu nu} sampled on interior time slices,
    comps shaped (T', N, N, n1, ..., nd)."""

    comps: np.ndarray
    spacing: float
    dt: float
    metric: Metric

    def __post_init__(self):
        c = np.asarray(self.comps)
        n = self.metric.dim
        if c.ndim < 3 or c.shape[1] != n or c.shape[2] != n:
            raise ValueError("comps must be shaped (T', N, N, grid...)")
        if not np.array_equal(c, -np.swapaxes(c, 1, 2)):
            raise ValueError("field tensor must be exactly antisymmetric")
        object.__setattr__(self, "comps", c)

    @property
    def rank(self) -> int:
        return 2


@dataclass(frozen=True)
class DualTensor:
    """Totally antisymmetric rank-(N-2) dual, comps shaped
    (T', N, ..., N, n1, ..., nd) with N-2 tensor axes."""

    comps: np.ndarray
    spacing: float
    dt: float
    metric: Metric

    def __post_init__(self):
        c = np.asarray(self.comps)
        r = self.metric.dim - 2
        if c.ndim < 1 + r or c.shape[1:1 + r] != (self.metric.dim,) * r:
            raise ValueError("comps must carry N-2 tensor axes of size N")
        for ax in range(1, r):
            if not np.array_equal(c, -np.swapaxes(c, ax, ax + 1)):
                raise ValueError("dual tensor must be totally antisymmetric")
        object.__setattr__(self, "comps", c)

    @property
    def rank(self) -> int:
        return self.metric.dim - 2


def field_tensor(potential: FieldConfig, g: Metric) -> FieldTensor:
    """f^{mu nu} = d^mu xi^nu - d^nu xi^mu by central differences, indices
    raised with the (constant diagonal) metric after differentiation."""
    n = g.dim
    if potential.n_components != n:
        raise ValueError(f"potential has {potential.n_components} components, metric needs {n}")
    if potential.spatial_dim != n - 1:
        raise ValueError("spatial dimension must be N-1")
    if potential.n_frames < 3:
        raise ValueError("need at least three frames for the time derivative")

    signs = g.signs
    t_prime = potential.n_frames - 2
    # lower-index derivatives d[mu][nu] = d_mu xi^nu on interior frames
    d = np.empty((n, n, t_prime) + potential.spatial_shape)
    for nu in range(n):
        comp = potential.frames[:, nu]
        d[0, nu] = _time_central(comp, potential.dt)
        inner = comp[1:-1]  # (T-2, n1, ..., nd): spatial direction a is axis 1+a
        for mu in range(1, n):
            d[mu, nu] = _space_central(inner, potential.spacing, mu)

    comps = np.zeros((t_prime, n, n) + potential.spatial_shape)
    for mu in range(n):
        for nu in range(mu + 1, n):
            val = signs[mu] * d[mu, nu] - signs[nu] * d[nu, mu]
            comps[:, mu, nu] = val
            comps[:, nu, mu] = -val
    return FieldTensor(comps=comps, spacing=potential.spacing,
                       dt=potential.dt, metric=g)


def _levi_dual(comps_lower: np.ndarray, n: int) -> np.ndarray:
    """Contract the last two tensor slots with the permutation signs; the
    1/2! normalization makes the double dual at N=4 equal to -f."""
    t_and_grid = (comps_lower.shape[0],) + comps_lower.shape[3:]
    out = np.zeros((t_and_grid[0],) + (n,) * (n - 2) + t_and_grid[1:])
    for perm in itertools.permutations(range(n)):
        sign = levi_civita_sign(perm)
        head = perm[:-2]
        idx = (slice(None),) + head
        out[idx] += 0.5 * sign * comps_lower[:, perm[-2], perm[-1]]
    return out


def dual_tensor(f: FieldTensor, g: Metric) -> DualTensor:
    """Rank-(N-2) Levi-Civita dual of f (indices lowered first)."""
    if g.dim != f.metric.dim or g.diag != f.metric.diag:
        raise ValueError("metric does not match the tensor")
    n = g.dim
    if n > MAX_DUAL_DIM:
        raise ValueError(
            f"duals are materialized only for N <= {MAX_DUAL_DIM} "
            "(component count grows combinatorially)")
    signs = g.signs
    shape = (1, n, n) + (1,) * (f.comps.ndim - 3)
    lower = f.comps * (signs[:, None] * signs[None, :]).reshape(shape)
    comps = _levi_dual(lower, n)
    return DualTensor(comps=comps, spacing=f.spacing, dt=f.dt, metric=g)


def _slot_divergence(comps: np.ndarray, slot_axis: int, n: int,
                     spacing: float, dt: float) -> np.ndarray:
    """sum_nu d_nu comps[..., slot=nu, ...] on interior time slices.

    After removing the contracted slot, axes 1..slot_axis-1 are the
    remaining tensor slots and the spatial axes start at slot_axis.
    """
    out = None
    for nu in range(n):
        sub = np.take(comps, nu, axis=slot_axis)
        if nu == 0:
            term = _time_central(sub, dt)
        else:
            term = _space_central(sub, spacing, slot_axis + (nu - 1))[1:-1]
        out = term if out is None else out + term
    return out


def jacobi_residual(fhat: DualTensor) -> float:
    """Max over the grid of |sum_nu d_nu fhat^{... nu}| normalized by the
    dual's RMS magnitude.  Total antisymmetry makes every index slot give
    the same value, so the last slot is differentiated."""
    n = fhat.metric.dim
    r = fhat.rank
    if r == 0:
        return 0.0  # N = 2: the identity has no components
    div = _slot_divergence(fhat.comps, slot_axis=r, n=n,
                           spacing=fhat.spacing, dt=fhat.dt)
    rms = float(np.sqrt(np.mean(fhat.comps**2)))
    if rms == 0.0:
        return float(np.max(np.abs(div))) if div.size else 0.0
    return float(np.max(np.abs(div)) / rms)


def lorenz_gauge_residual(potential: FieldConfig, g: Metric) -> float:
    """Max |d_mu xi^mu| normalized by the largest first derivative of any
    component; 0 for the zero potential."""
    n = g.dim
    if potential.n_components != n or potential.spatial_dim != n - 1:
        raise ValueError("potential shape does not match the metric")
    div = _time_central(potential.frames[:, 0], potential.dt)
    for mu in range(1, n):
        div = div + _space_central(potential.frames[1:-1, mu],
                                   potential.spacing, mu)
    # all first derivatives, for the scale
    scale = 0.0
    for nu in range(n):
        comp = potential.frames[:, nu]
        scale = max(scale, float(np.max(np.abs(_time_central(comp, potential.dt)))))
        inner = comp[1:-1]
        for mu in range(1, n):
            scale = max(scale, float(np.max(np.abs(
                _space_central(inner, potential.spacing, mu)))))
    peak = float(np.max(np.abs(div)))
    if scale == 0.0:
        return 0.0 if peak == 0.0 else float("inf")
    return peak / scale


def source_free_residual(f: FieldTensor, potential: FieldConfig,
                         g: Metric, gauge_tol: float = 1e-6) -> float:
    """Max |sum_nu d_nu f^{mu nu}| normalized by the largest derivative of
    f.  The potential must satisfy the Lorenz gauge first; otherwise the
    identity says nothing about the wave equation."""
    gauge = lorenz_gauge_residual(potential, g)
    if gauge > gauge_tol:
        raise GaugeError(
            f"Lorenz gauge residual {gauge:.3e} exceeds tolerance {gauge_tol:.1e}")
    n = g.dim
    div = _slot_divergence(f.comps, slot_axis=2, n=n,
                           spacing=f.spacing, dt=f.dt)
    scale = 0.0
    scale = max(scale, float(np.max(np.abs(_time_central(f.comps, f.dt)))))
    inner = f.comps[1:-1]
    for mu in range(1, n):
        scale = max(scale, float(np.max(np.abs(
            _space_central(inner, f.spacing, 2 + mu)))))
    peak = float(np.max(np.abs(div)))
    if scale == 0.0:
        return 0.0 if peak == 0.0 else float("inf")
    return peak / scale


def plane_wave_potential(g: Metric, points: int, frames: int,
                         k_ints: tuple[int, ...], amplitude: float = 1.0,
                         dt: float | None = None) -> FieldConfig:
    """Transverse plane wave xi = (0, e A sin(k.x - |k| t)) on the periodic
    box [0, 2 pi)^{N-1}, polarization e chosen perpendicular to k.  An
    exact Lorenz-gauged solution of the wave equation, used by the
    identity checks and the CLI."""
    n = g.dim
    if len(k_ints) != n - 1:
        raise ValueError("k_ints must have N-1 entries")
    k = np.array(k_ints, dtype=float)
    if np.all(k == 0):
        raise ValueError("wavevector must be nonzero")
    omega = float(np.linalg.norm(k))
    # deterministic transverse polarization
    trial = np.zeros(n - 1)
    trial[int(np.argmin(np.abs(k)))] = 1.0
    pol = trial - (trial @ k) / (k @ k) * k
    pol /= np.linalg.norm(pol)

    spacing = 2.0 * np.pi / points
    axes = [spacing * np.arange(points) for _ in range(n - 1)]
    mesh = np.meshgrid(*axes, indexing="ij")
    phase_x = sum(ki * xi for ki, xi in zip(k, mesh))
    step = spacing / 4.0 if dt is None else dt
    out = np.zeros((frames, n) + (points,) * (n - 1))
    for j in range(frames):
        wave = amplitude * np.sin(phase_x - omega * j * step)
        for a in range(n - 1):
            out[j, 1 + a] = pol[a] * wave
    return FieldConfig(frames=out, spacing=spacing, dt=step)
