import math

import numpy as np
import pytest

from pathfield.grid import Grid1D
from pathfield.propagator import (GridFunction, convergence_study, evolve,
                                  fitted_order, free, gaussian_initial,
                                  l2_distance, oracle_evolution, oscillator,
                                  short_time_kernel)

GRID = Grid1D(-8.0, 8.0, 801)


def moments(f: GridFunction):
    w = f.grid.trapezoid_weights()
    x = f.grid.coordinates()
    norm = np.sum(w * f.values)
    mean = np.sum(w * x * f.values) / norm
    var = np.sum(w * (x - mean) ** 2 * f.values) / norm
    return norm, mean, var


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 2)
    with pytest.raises(ValueError):
        Grid1D(1.0, 0.0, 10)


def test_model_validation():
    with pytest.raises(ValueError):
        free(m=0.0)
    with pytest.raises(ValueError):
        oscillator(1.0, eta=0.0)


def test_grid_function_validation():
    with pytest.raises(ValueError):
        GridFunction(GRID, np.zeros(7))
    with pytest.raises(ValueError):
        oracle_evolution(free(1.0), GRID, gaussian_initial(GRID), -1.0)


def test_free_kernel_rows_are_gaussian():
    eps, m = 0.1, 1.0
    kern = short_time_kernel(free(m), GRID, eps)
    x = GRID.coordinates()
    i = GRID.points // 2
    exact = np.exp(-m * (x[i] - x) ** 2 / (2 * eps)) / math.sqrt(2 * math.pi * eps / m)
    assert np.max(np.abs(kern.matrix[i] - exact)) <= 1e-10


def test_free_kernel_rows_integrate_to_one():
    kern = short_time_kernel(free(1.0), GRID, 0.1)
    sums = kern.matrix @ GRID.trapezoid_weights()
    assert np.max(np.abs(sums - 1.0)) <= 1e-12


def test_small_eps_rows_concentrate():
    grid = Grid1D(-2.0, 2.0, 401)
    kern = short_time_kernel(free(1.0), grid, 1e-7)
    w = grid.trapezoid_weights()
    i = grid.points // 2
    near = slice(i - 1, i + 2)
    assert np.sum(w[near] * kern.matrix[i, near]) >= 1.0 - 1e-10


def test_oscillator_potential_vanishes_at_origin():
    eps = 0.05
    k_free = short_time_kernel(free(1.0), GRID, eps)
    k_osc = short_time_kernel(oscillator(1.0, 1.0), GRID, eps)
    i = GRID.points // 2  # x = y = 0: midpoint potential factor is exp(0) = 1
    assert k_osc.matrix[i, i] == k_free.matrix[i, i]


def test_kernel_rejects_bad_eps():
    with pytest.raises(ValueError):
        short_time_kernel(free(1.0), GRID, 0.0)


def test_boundary_flag():
    assert not short_time_kernel(free(1.0), GRID, 0.1).boundary_flag
    narrow = Grid1D(-1.0, 1.0, 101)
    assert short_time_kernel(free(1.0), narrow, 0.1).boundary_flag


def test_evolve_zero_steps_is_identity():
    f = gaussian_initial(GRID)
    kern = short_time_kernel(free(1.0), GRID, 0.1)
    out = evolve(kern, f, 0)
    assert np.array_equal(out.values, f.values)


def test_evolve_grid_mismatch():
    kern = short_time_kernel(free(1.0), GRID, 0.1)
    other = gaussian_initial(Grid1D(-8.0, 8.0, 401))
    with pytest.raises(ValueError):
        evolve(kern, other, 1)


def test_free_variance_law():
    m, total = 1.0, 1.0
    f = gaussian_initial(GRID, sigma=1.0)
    kern = short_time_kernel(free(m), GRID, 0.1)
    out = evolve(kern, f, 10)
    _, _, var = moments(out)
    assert abs(var - (1.0 + total / m)) / 2.0 <= 1e-4


def test_free_evolution_matches_continuum_heat_kernel():
    # the Gaussian kernel composes exactly; only quadrature error remains
    m, total = 1.0, 1.0
    f = gaussian_initial(GRID, sigma=1.0)
    out = evolve(short_time_kernel(free(m), GRID, 0.1), f, 10)
    s2 = 1.0 + total / m
    exact = GridFunction(GRID, np.sqrt(1.0 / s2) * np.exp(-0.5 * GRID.coordinates() ** 2 / s2))
    assert l2_distance(out, exact) <= 1e-6


def test_positivity_and_constant_preservation():
    kern = short_time_kernel(free(1.0), GRID, 0.1)
    f = gaussian_initial(GRID)
    assert np.all(evolve(kern, f, 3).values >= 0.0)
    const = GridFunction(GRID, np.ones(GRID.points))
    assert np.max(np.abs(evolve(kern, const, 1).values - 1.0)) <= 1e-12


def test_normalization_conserved_per_step():
    kern = short_time_kernel(free(1.0), GRID, 0.1)
    f = gaussian_initial(GRID)
    before = f.trapezoid_integral()
    after = evolve(kern, f, 1).trapezoid_integral()
    assert abs(after - before) / before <= 1e-8


def test_oracle_zero_time_identity():
    f = gaussian_initial(GRID)
    out = oracle_evolution(free(1.0), GRID, f, 0.0)
    assert np.max(np.abs(out.values - f.values)) <= 1e-10


def test_oracle_decays_eigenfunctions_exactly():
    from scipy.linalg import eigh_tridiagonal
    from pathfield.propagator import fd_generator
    model = oscillator(1.0, 1.0)
    ham = fd_generator(model, GRID)
    lam, vec = eigh_tridiagonal(ham.diagonal(), ham.offdiagonal(),
                                select="i", select_range=(0, 0))
    f = GridFunction(GRID, vec[:, 0])
    out = oracle_evolution(model, GRID, f, 0.7)
    assert np.max(np.abs(out.values - math.exp(-0.7 * lam[0]) * f.values)) <= 1e-12


def test_semigroup_property_free():
    f = gaussian_initial(GRID)
    two_small = evolve(short_time_kernel(free(1.0), GRID, 0.05), f, 2)
    one_big = evolve(short_time_kernel(free(1.0), GRID, 0.1), f, 1)
    assert l2_distance(two_small, one_big) <= 1e-10


def test_power_iteration_finds_oscillator_ground_state():
    m = eta = 1.0
    kern = short_time_kernel(oscillator(m, eta), GRID, 0.05)
    v = gaussian_initial(GRID, sigma=1.3)
    for _ in range(300):
        v = evolve(kern, v, 1)
        v = GridFunction(GRID, v.values / np.sqrt(GRID.spacing * np.sum(v.values**2)))
    x = GRID.coordinates()
    gs = np.exp(-math.sqrt(m * eta) * x**2 / 2)
    gs /= np.sqrt(GRID.spacing * np.sum(gs**2))
    assert np.sqrt(GRID.spacing * np.sum((v.values - gs) ** 2)) <= 1e-8


def test_convergence_study_oscillator():
    f = gaussian_initial(GRID)
    rows = convergence_study(oscillator(1.0, 1.0), GRID, f, 1.0,
                             [0.1, 0.05, 0.025, 0.0125])
    errs = [r.l2_error for r in rows]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert rows[0].order_estimate is None
    for r in rows[1:]:
        assert 0.8 <= r.order_estimate <= 1.2
    assert 0.8 <= fitted_order(rows) <= 1.2


def test_convergence_study_single_row():
    f = gaussian_initial(GRID)
    rows = convergence_study(free(1.0), GRID, f, 1.0, [1.0])
    assert len(rows) == 1 and rows[0].order_estimate is None


def test_convergence_study_validation():
    f = gaussian_initial(GRID)
    with pytest.raises(ValueError):
        convergence_study(free(1.0), GRID, f, 1.0, [])
    with pytest.raises(ValueError):
        convergence_study(free(1.0), GRID, f, 1.0, [0.3])


def test_free_errors_sit_on_fd_floor():
    # the quadrature kernel is essentially exact for free evolution; the
    # study measures only the oracle's finite-difference floor, flat in eps
    f = gaussian_initial(GRID)
    rows = convergence_study(free(1.0), GRID, f, 1.0, [0.5, 0.25, 0.125])
    errs = np.array([r.l2_error for r in rows])
    assert np.all(errs <= 1e-4)
    assert errs.max() - errs.min() <= 0.1 * errs.max()
