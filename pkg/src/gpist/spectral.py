"""Spectral variety, grids, and black-soliton closed forms.

Everything spectral lives on the hyperbola lambda^2 - zeta^2 = 1/2 (and its
complexification).  Points carry an explicit sheet tag instead of the usual
two-valued-function bookkeeping, and the exact kink formulas collected here
serve as oracles for the numerical stages.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .numutil import SQRT2

HYPERBOLA_TOL = 1e-12


class Sheet(enum.Enum):
    REAL_BRANCH_POS = "real+"
    REAL_BRANCH_NEG = "real-"
    GAP_UPPER = "gap+"        # zeta = i nu, nu > 0
    GAP_LOWER = "gap-"
    UPPER_SHEET = "gamma+"    # interior analytic continuation, Im zeta > 0
    LOWER_SHEET = "gamma-"


def classify_sheet(lam: complex, zeta: complex) -> Sheet:
    if abs(lam.imag) < 1e-12 and abs(zeta.imag) < 1e-12:
        return Sheet.REAL_BRANCH_POS if lam.real > 0 else Sheet.REAL_BRANCH_NEG
    if abs(lam.imag) < 1e-12 and abs(zeta.real) < 1e-12:
        return Sheet.GAP_UPPER if zeta.imag > 0 else Sheet.GAP_LOWER
    return Sheet.UPPER_SHEET if zeta.imag > 0 else Sheet.LOWER_SHEET


@dataclass(frozen=True)
class SheetPoint:
    """A point (lambda, zeta) on lambda^2 - zeta^2 = 1/2 with its sheet tag."""

    lam: complex
    zeta: complex
    sheet: Sheet

    def __post_init__(self):
        defect = abs(self.lam ** 2 - self.zeta ** 2 - 0.5)
        if defect > HYPERBOLA_TOL * max(1.0, abs(self.lam) ** 2):
            raise ValueError(f"point off the hyperbola: defect={defect:.3e}")

    @property
    def energy(self) -> complex:
        return 2.0 * self.lam / np.sqrt(3.0)

    @property
    def on_gap(self) -> bool:
        return self.sheet in (Sheet.GAP_UPPER, Sheet.GAP_LOWER)


def lift(zeta: complex, branch_sign: int) -> SheetPoint:
    """Lift zeta to the hyperbola on the branch with sign(Re lambda) = branch_sign."""
    zeta = complex(zeta)
    lam = branch_sign * np.sqrt(zeta ** 2 + 0.5)  # principal square root
    lam = complex(lam)
    return SheetPoint(lam, zeta, classify_sheet(lam, zeta))


def gap_point(lam: float) -> SheetPoint:
    """Gap point at real lambda in (-sqrt2/2, sqrt2/2), zeta = i nu on the upper sheet."""
    nu = float(np.sqrt(0.5 - lam * lam))
    return SheetPoint(complex(lam), 1j * nu, Sheet.GAP_UPPER)


def free_states(point: SheetPoint, x, side: int):
    """Free solutions (X1, X2) of the constant-background system at q = side*sqrt2/2.

    Returns two arrays shaped (..., 2); side is +1 or -1.
    """
    lam, zeta = point.lam, point.zeta
    x = np.asarray(x, dtype=float)
    w = SQRT2 * (lam - zeta) * side
    em = np.exp(-1j * zeta * x)
    ep = np.exp(1j * zeta * x)
    x1 = np.stack([em, w * em], axis=-1)
    x2 = np.stack([w * ep, ep], axis=-1)
    return x1, x2


def unperturbed_a(point: SheetPoint) -> complex:
    """Transmission-coefficient closed form for the black soliton; b is zero."""
    lam, zeta = point.lam, point.zeta
    return (lam + zeta - 1j * SQRT2 / 2.0) / (lam + zeta + 1j * SQRT2 / 2.0)


def unperturbed_jost(point: SheetPoint, x, which: str) -> np.ndarray:
    """Black-soliton Jost solution closed forms; which in {psi1, psi2, phi1, phi2}."""
    lam, zeta = point.lam, point.zeta
    x = np.asarray(x, dtype=float)
    s = 1.0 / (1.0 + np.exp(SQRT2 * x))          # -> 0 as x -> +inf
    sm = np.exp(SQRT2 * x) / (1.0 + np.exp(SQRT2 * x))  # -> 0 as x -> -inf
    h = SQRT2 / 2.0
    w = SQRT2 * (lam - zeta)
    if which == "psi1":
        f1 = 1.0 - s * (h - 1j * (lam - zeta)) / (h + 1j * zeta)
        f2 = w - s * (h * 1j + (lam - zeta)) / (h + 1j * zeta)
        return np.stack([f1, f2], axis=-1) * np.exp(-1j * zeta * x)[..., None]
    if which == "psi2":
        f1 = w - s * (-h * 1j + (lam - zeta)) / (h - 1j * zeta)
        f2 = 1.0 - s * (h + 1j * (lam - zeta)) / (h - 1j * zeta)
        return np.stack([f1, f2], axis=-1) * np.exp(1j * zeta * x)[..., None]
    if which == "phi1":
        f1 = 1.0 - sm * (h + 1j * (lam - zeta)) / (h - 1j * zeta)
        f2 = -w + sm * (-h * 1j + (lam - zeta)) / (h - 1j * zeta)
        return np.stack([f1, f2], axis=-1) * np.exp(-1j * zeta * x)[..., None]
    if which == "phi2":
        f1 = -w + sm * (h * 1j + (lam - zeta)) / (h + 1j * zeta)
        f2 = 1.0 - sm * (h - 1j * (lam - zeta)) / (h + 1j * zeta)
        return np.stack([f1, f2], axis=-1) * np.exp(1j * zeta * x)[..., None]
    raise ValueError(f"unknown Jost label {which!r}")


def unperturbed_kernel(x, p) -> np.ndarray:
    """Black-soliton kernel Psi0(x, x+2p) as a (..., 2, 2) array; p >= 0."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("kernel offset p must be nonnegative")
    amp = np.exp(-SQRT2 * p) / (SQRT2 * (1.0 + np.exp(SQRT2 * x)))
    k11 = amp + 0j
    k12 = -1j * amp
    out = np.empty(np.broadcast(x, p).shape + (2, 2), dtype=complex)
    out[..., 0, 0] = k11
    out[..., 0, 1] = k12
    out[..., 1, 0] = np.conj(k12)
    out[..., 1, 1] = np.conj(k11)
    return out


@dataclass(frozen=True)
class Grid1D:
    """Uniform symmetric spatial grid."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise ValueError("grid needs at least 16 samples")
        if not np.isclose(self.x_min, -self.x_max):
            raise ValueError("grid must be symmetric about 0")
        if self.x_max <= self.x_min:
            raise ValueError("empty grid")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @cached_property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @staticmethod
    def default(x_max: float = 40.0, h: float = 0.02) -> "Grid1D":
        n = int(round(2 * x_max / h)) + 1
        return Grid1D(-x_max, x_max, n)


@dataclass(frozen=True)
class SpectralGrid:
    """Symmetric zeta samples excluding 0, with smooth refinement near 0.

    The nodes are the image of a uniform grid under a sinh map, so the
    companion `weights` realize the trapezoid rule in the flat variable;
    that keeps the quadrature error a pure boundary term.
    """

    zeta: np.ndarray
    weights: np.ndarray
    zeta_max: float
    zeta_min: float

    def __post_init__(self):
        z = self.zeta
        if np.any(z == 0.0):
            raise ValueError("zeta = 0 is excluded from the spectral grid")
        if not np.allclose(z, -z[::-1], rtol=0, atol=1e-15):
            raise ValueError("spectral grid must be symmetric under zeta -> -zeta")

    @property
    def n(self) -> int:
        return len(self.zeta)

    @cached_property
    def positive_half(self) -> np.ndarray:
        return self.zeta[self.zeta > 0]


def make_spectral_grid(zeta_max: float = 30.0, n: int = 4096,
                       zeta_min: float = 1e-3, kappa: float = 8.0) -> SpectralGrid:
    """Default spectral grid: n symmetric samples, sinh-graded toward 0."""
    n_half = n // 2
    sh = np.sinh(kappa)
    s0 = np.arcsinh(zeta_min * sh / zeta_max) / kappa
    s = np.linspace(s0, 1.0, n_half)
    zp = zeta_max * np.sinh(kappa * s) / sh
    # trapezoid-in-s weights, mapped with the analytic Jacobian
    ds = s[1] - s[0]
    jac = zeta_max * kappa * np.cosh(kappa * s) / sh
    wp = jac * ds
    wp[0] *= 0.5
    wp[-1] *= 0.5
    zeta = np.concatenate([-zp[::-1], zp])
    weights = np.concatenate([wp[::-1], wp])
    return SpectralGrid(zeta, weights, float(zeta_max), float(zp[0]))
