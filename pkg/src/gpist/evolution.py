"""Explicit time evolution of scattering data: phases only, a is frozen."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jost import DiscreteData, ScatteringData


@dataclass
class EvolvedData:
    """Scattering data advanced to time t; the base data are kept unchanged.

    b(t, zeta) = b(0, zeta) e^{-4 i lambda zeta t} per branch and
    b0(t) = b0 e^{4 lambda0 nu0 t}; a never moves.  The wrapper is cheap, so
    many times can be materialized from one forward solve.
    """

    base: ScatteringData
    t: float
    b_t: np.ndarray
    b0_t: complex
    mu0_t: float

    @property
    def a(self):
        return self.base.a

    @property
    def sgrid(self):
        return self.base.sgrid

    @property
    def discrete(self):
        return self.base.discrete

    def as_base(self) -> ScatteringData:
        """Re-base: treat time t as the new origin of the flow."""
        disc = self.base.discrete
        new_disc = DiscreteData(disc.lambda0, disc.nu0, self.b0_t,
                                disc.a_prime0, self.mu0_t,
                                disc.a_prime0_fd, disc.min_abs_a)
        return ScatteringData(self.base.sgrid, self.base.a,
                              self.b_t.copy(), new_disc)


def evolve(data: ScatteringData, t: float) -> EvolvedData:
    if data.discrete is None:
        raise ValueError("evolve needs the discrete data; run the full forward stage")
    zeta = data.sgrid.zeta
    lam = np.sqrt(zeta ** 2 + 0.5)
    phases = np.exp(-4j * lam * zeta * t)
    b_t = np.stack([data.b[0] * phases, data.b[1] * np.conj(phases)], axis=0)
    disc = data.discrete
    growth = np.exp(4.0 * disc.lambda0 * disc.nu0 * t)
    b0_t = disc.b0 * growth
    mu0_t = complex(b0_t / (disc.nu0 * disc.a_prime0))
    return EvolvedData(data, float(t), b_t, b0_t, float(mu0_t.real))
