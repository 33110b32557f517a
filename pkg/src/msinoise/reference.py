"""Reference configuration used by the verification suite and golden files."""
from __future__ import annotations

import math

from .scattering import InterferometerParams, PortVector

__all__ = ["p1_params", "p1_pump", "P1_WAVELENGTH"]

P1_WAVELENGTH = 1.064e-6  # m


def p1_params() -> InterferometerParams:
    """The frozen reference interferometer P1.

    1064 nm pump, 30 cm signal-recycling path, t_s = 0.1 SRM, no power
    recycling, membrane angle 0.15 pi, small beamsplitter imbalance and
    dark-port offset.  Every golden number in the test suite was derived
    from this configuration through the brute-force oracle.
    """
    t_s = 0.1
    return InterferometerParams(
        theta_m=0.15 * math.pi,
        epsilon=0.02,
        kappa=0.01,
        tau_s=1.0e-9,
        tau_w=1.1e-9,
        r_s=math.sqrt(1.0 - t_s**2),
        t_s=t_s,
        r_w=0.0,
        t_w=1.0,
        k_p=2.0 * math.pi / P1_WAVELENGTH,
    )


def p1_pump() -> PortVector:
    """West-port pump of 1e16 photons/s (about 1.9 mW at 1064 nm), dark south."""
    return PortVector(west=math.sqrt(1.0e16), south=0.0)
