import math

import numpy as np
import pytest

from msinoise.errors import OpticalSingularity
from msinoise.reference import p1_params, p1_pump
from msinoise.scattering import InterferometerParams, mode_dynamics


@pytest.fixture
def p1():
    return p1_params()


@pytest.fixture
def p1_drive():
    return p1_pump()


def random_params(rng: np.random.Generator) -> InterferometerParams:
    """Random valid interferometer, power recycling included."""
    r_s = rng.uniform(0.0, 0.995)
    r_w = rng.uniform(0.0, 0.995)
    return InterferometerParams(
        theta_m=rng.uniform(0.0, math.pi / 2),
        epsilon=rng.uniform(-0.7, 0.7),
        kappa=rng.uniform(-2.0, 2.0),
        tau_s=rng.uniform(0.5e-9, 2.0e-9),
        tau_w=rng.uniform(0.5e-9, 2.0e-9),
        r_s=r_s,
        t_s=math.sqrt(1.0 - r_s**2),
        r_w=r_w,
        t_w=math.sqrt(1.0 - r_w**2),
        k_p=rng.uniform(4.0e6, 8.0e6),
    )


def clear_of_resonance(params, big_omega: float, floor: float = 1e-3) -> bool:
    """True when the mode determinant is comfortably non-singular."""
    try:
        dets = [
            abs(mode_dynamics(params, params.omega_p + w)[2])
            for w in (big_omega, -big_omega, 0.0)
        ]
    except OpticalSingularity:
        return False
    return min(dets) >= floor
