"""Complex field profiles on the line with +-1 asymptotics, plus CSV I/O."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import MismatchedGridsError
from .numutil import SQRT2, fd_derivative, uniform_interp
from .spectral import Grid1D

ASYMPTOTE_TOL = 1e-3


def black_soliton(x):
    """Stationary kink tanh(x/sqrt2)."""
    return np.tanh(np.asarray(x, dtype=float) / SQRT2)


def dark_soliton(x, c: float):
    """Traveling wave of speed c (modulus-1 background), evaluated at rest frame x."""
    k = np.sqrt(1.0 - c * c / 2.0)
    return k * np.tanh(k * np.asarray(x, dtype=float) / SQRT2) + 1j * c / SQRT2


@dataclass
class FieldProfile:
    """Complex field u on a uniform grid, tending to -1 / +1 at the ends.

    `u_fn`, when present, is the analytic evaluator the samples came from;
    off-grid values then use it instead of interpolation.
    """

    grid: Grid1D
    u: np.ndarray
    u_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    decay_weight: float = field(default=float("nan"))
    strict: bool = True     # False skips the +-1 tail check (rotated gauges etc.)

    left_asymptote = -1.0
    right_asymptote = 1.0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=complex)
        if len(self.u) != self.grid.n:
            raise MismatchedGridsError("sample count does not match grid")
        if not np.all(np.isfinite(self.u)):
            raise ValueError("non-finite field samples")
        if self.strict and (abs(self.u[-1] - 1.0) > ASYMPTOTE_TOL
                            or abs(self.u[0] + 1.0) > ASYMPTOTE_TOL):
            raise ValueError("field tails have not reached the +-1 asymptotes")
        if np.isnan(self.decay_weight) and self.strict:
            self.decay_weight = self._weighted_sup()

    @property
    def q(self) -> np.ndarray:
        return (SQRT2 / 2.0) * self.u

    def u_at(self, x):
        if self.u_fn is not None:
            return self.u_fn(np.asarray(x, dtype=float))
        return uniform_interp(self.grid.x_min, self.grid.h, self.u, x, order=5)

    def q_at(self, x):
        return (SQRT2 / 2.0) * self.u_at(x)

    def _weighted_sup(self) -> float:
        """sup over k <= 3 of <x>^4 |d^k (u - U0)| via grid stencils."""
        d = self.u - black_soliton(self.grid.x)
        h = self.grid.h
        w = (1.0 + self.grid.x ** 2) ** 2
        best = float(np.max(w * np.abs(d)))
        dk = d
        for _ in range(3):
            dk = fd_derivative(dk, h, order=1, accuracy=4)
            best = max(best, float(np.max(w * np.abs(dk))))
        return best

    @staticmethod
    def from_function(fn: Callable, grid: Grid1D, strict: bool = True) -> "FieldProfile":
        return FieldProfile(grid, fn(grid.x), u_fn=fn, strict=strict)


def make_black_soliton(grid: Grid1D) -> FieldProfile:
    return FieldProfile.from_function(black_soliton, grid)


def write_profile_csv(path, profile: FieldProfile, t: Optional[float] = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["x", "re_u", "im_u"] + (["t"] if t is not None else [])
        writer.writerow(header)
        for x, u in zip(profile.grid.x, profile.u):
            row = [repr(float(x)), repr(u.real), repr(u.imag)]
            if t is not None:
                row.append(repr(float(t)))
            writer.writerow(row)


def read_profile_csv(path) -> FieldProfile:
    xs, us = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:3] != ["x", "re_u", "im_u"]:
            raise ValueError(f"unexpected profile header {header!r}")
        for row in reader:
            xs.append(float(row[0]))
            us.append(float(row[1]) + 1j * float(row[2]))
    x = np.asarray(xs)
    n = len(x)
    grid = Grid1D(float(x[0]), float(x[-1]), n)
    if not np.allclose(grid.x, x, atol=1e-9):
        raise ValueError("profile CSV is not on a uniform symmetric grid")
    return FieldProfile(grid, np.asarray(us))
