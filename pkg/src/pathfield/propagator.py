"""Imaginary-time kernel evolution on a 1D grid.

The short-time kernel is the Euclidean Gaussian exp[-m (x-y)^2 / (2 eps)]
with the potential entering through a midpoint factor exp[-eps V((x+y)/2)].
The Gaussian factor is normalized per row against the grid's trapezoid
rule, which stands in for the stationary-phase measure and repairs edge
truncation; for the free model this makes every row integrate to exactly 1.
The spectrum-preserving potential factor is applied after normalization,
so iterated evolution converges (first order in eps) to the semigroup
exp(-T H) generated by the finite-difference Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .grid import Grid1D
from .spectral import harmonic_hamiltonian, Hamiltonian1D


@dataclass(frozen=True)
class EvolutionModel:
    """free(m) or oscillator(m, eta); V(q) = eta q^2 / 2 for the latter."""

    kind: str
    m: float = 1.0
    eta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("free", "oscillator"):
            raise ValueError(f"unknown evolution model {self.kind!r}")
        if self.m <= 0:
            raise ValueError("mass must be positive")
        if self.kind == "oscillator" and self.eta <= 0:
            raise ValueError("oscillator stiffness eta must be positive")

    def potential(self, q: np.ndarray) -> np.ndarray:
        if self.kind == "free":
            return np.zeros_like(q)
        return 0.5 * self.eta * q**2


def free(m: float = 1.0) -> EvolutionModel:
    return EvolutionModel("free", m=m)


def oscillator(m: float, eta: float) -> EvolutionModel:
    return EvolutionModel("oscillator", m=m, eta=eta)


@dataclass(frozen=True)
class GridFunction:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.points,):
            raise ValueError("values length must match the grid")
        object.__setattr__(self, "values", v)

    def trapezoid_integral(self) -> float:
        return float(np.sum(self.grid.trapezoid_weights() * self.values))


@dataclass(frozen=True)
class GridKernel:
    grid: Grid1D
    eps: float
    matrix: np.ndarray
    boundary_flag: bool = False


def gaussian_initial(grid: Grid1D, sigma: float = 1.0, center: float = 0.0) -> GridFunction:
    q = grid.coordinates()
    return GridFunction(grid, np.exp(-0.5 * (q - center) ** 2 / sigma**2))


def short_time_kernel(model: EvolutionModel, grid: Grid1D, eps: float) -> GridKernel:
    """One-step Euclidean kernel.  The boundary flag is raised when the
    6-sigma support of the Gaussian factor (sigma^2 = eps/m) no longer fits
    inside the grid half-width, i.e. when even central rows are truncated."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    q = grid.coordinates()
    dx = q[:, None] - q[None, :]
    mat = np.exp(-model.m * dx**2 / (2.0 * eps))
    row_mass = mat @ grid.trapezoid_weights()
    mat = mat / row_mass[:, None]
    if model.kind == "oscillator":
        vmid = model.potential(0.5 * (q[:, None] + q[None, :]))
        mat = mat * np.exp(-eps * vmid)
    sigma = math.sqrt(eps / model.m)
    flag = 6.0 * sigma > 0.5 * (grid.x_max - grid.x_min)
    return GridKernel(grid=grid, eps=eps, matrix=mat, boundary_flag=flag)


def evolve(kernel: GridKernel, f: GridFunction, steps: int) -> GridFunction:
    """Apply the kernel `steps` times with trapezoid quadrature."""
    if kernel.grid != f.grid:
        raise ValueError("kernel and function live on different grids")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if steps == 0:
        return f
    step_matrix = kernel.matrix * kernel.grid.trapezoid_weights()[None, :]
    v = f.values
    for _ in range(steps):
        v = step_matrix @ v
    return GridFunction(f.grid, v)


def fd_generator(model: EvolutionModel, grid: Grid1D) -> Hamiltonian1D:
    """Finite-difference Hamiltonian -(1/2m) d2 + V on the grid."""
    if model.kind == "oscillator":
        ham = harmonic_hamiltonian(model.eta, grid)
        return Hamiltonian1D(grid=grid, potential=ham.potential, mass=model.m)
    return Hamiltonian1D(grid=grid, potential=np.zeros(grid.points), mass=model.m)


def oracle_evolution(model: EvolutionModel, grid: Grid1D, f: GridFunction,
                     total_time: float) -> GridFunction:
    """exp(-T H) f via full eigendecomposition of the finite-difference
    Hamiltonian; entirely independent of the kernel code path."""
    if grid != f.grid:
        raise ValueError("function grid does not match")
    if total_time < 0:
        raise ValueError("total_time must be >= 0")
    ham = fd_generator(model, grid)
    lam, u = linalg.eigh_tridiagonal(ham.diagonal(), ham.offdiagonal())
    v = u @ (np.exp(-total_time * lam) * (u.T @ f.values))
    return GridFunction(grid, v)


def l2_distance(a: GridFunction, b: GridFunction) -> float:
    if a.grid != b.grid:
        raise ValueError("grids differ")
    d = a.values - b.values
    return float(np.sqrt(a.grid.spacing * np.sum(np.abs(d) ** 2)))


@dataclass(frozen=True)
class ConvergenceRow:
    eps: float
    l2_error: float
    order_estimate: float | None


def convergence_study(model: EvolutionModel, grid: Grid1D, f: GridFunction,
                      total_time: float, eps_list) -> list[ConvergenceRow]:
    """L2 error of kernel evolution against the eigendecomposition oracle
    for each step size; the order column compares consecutive rows."""
    eps_values = list(eps_list)
    if not eps_values:
        raise ValueError("eps_list must be non-empty")
    steps = []
    for eps in eps_values:
        ratio = total_time / eps
        n = round(ratio)
        if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"eps={eps} does not divide total time {total_time}")
        steps.append(n)
    ref = oracle_evolution(model, grid, f, total_time)
    rows: list[ConvergenceRow] = []
    for eps, n in zip(eps_values, steps):
        kern = short_time_kernel(model, grid, eps)
        err = l2_distance(evolve(kern, f, n), ref)
        order = None
        if rows:
            prev = rows[-1]
            order = math.log(prev.l2_error / err) / math.log(prev.eps / eps)
        rows.append(ConvergenceRow(eps=eps, l2_error=err, order_estimate=order))
    return rows


def fitted_order(rows: list[ConvergenceRow]) -> float:
    """Least-squares slope of log(error) against log(eps) over the study."""
    if len(rows) < 2:
        raise ValueError("need at least two rows to fit an order")
    x = np.log([r.eps for r in rows])
    y = np.log([r.l2_error for r in rows])
    a = np.vstack([x, np.ones_like(x)]).T
    return float(np.linalg.lstsq(a, y, rcond=None)[0][0])
