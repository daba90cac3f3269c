"""Uniform 1D grids shared by the kernel-evolution and eigensolver modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if self.points < 3:
            raise ValueError("grid needs at least 3 points")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    def coordinates(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.points, self.spacing)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w
