"""Sampled amplitude time series."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class AmplitudeTrace:
    t: np.ndarray          # shape (n,)
    amplitudes: np.ndarray  # shape (n, dim), complex

    def __post_init__(self):
        if self.amplitudes.ndim != 2 or self.amplitudes.shape[0] != self.t.shape[0]:
            raise ValidationError("amplitudes must have shape (len(t), dim)")

    @property
    def dim(self):
        return self.amplitudes.shape[1]

    @property
    def populations(self):
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self):
        return self.populations.sum(axis=1)

    def uniform_step(self, rtol=1e-6):
        """Return the grid step, or raise if the grid is not uniform."""
        if len(self.t) < 2:
            raise ValidationError("trace needs at least two samples")
        step = (self.t[-1] - self.t[0]) / (len(self.t) - 1)
        if step <= 0 or np.max(np.abs(np.diff(self.t) - step)) > rtol * step:
            raise ValidationError("time grid is not uniform")
        return step
