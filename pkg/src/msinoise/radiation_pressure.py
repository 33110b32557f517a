"""Radiation-pressure back-action: force transfer, rigidity and noise spectra.

The fluctuating radiation-pressure force on the membrane is
F_fl = hbar k_p E^dagger F(Omega) a + (reflected-frequency conjugate),
and the displacement-proportional part defines the complex optical
rigidity K(Omega) = hbar k_p^2 E^dagger K_mat(Omega) E.  Re K acts as an
optical spring, -Im K / Omega as viscous optical damping.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import hbar

from .algebra import cc_close, dagger
from .errors import DegenerateFrequency, OpticalSingularity
from .scattering import (
    InterferometerParams,
    IntracavityField,
    SidebandResponse,
    displacement_transfer,
    fixed_matrices,
    mode_dynamics,
    mode_mixer,
    scattering_matrix,
)

__all__ = [
    "RigidityBreakdown",
    "ForceNoiseSpectrum",
    "force_transfer",
    "rigidity_matrices",
    "rigidity",
    "noise_spectra",
    "optical_damping",
    "sideband_response",
]

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class RigidityBreakdown:
    """Optical rigidity split into its two physical parts, N/m.

    ``k1`` is the optical spring proper (cavity-field modulation by the
    moving membrane, frequency dependent and complex), ``k2`` the static
    attraction of the membrane into the standing-wave antinode (real,
    frequency independent, vanishing for a perfect mirror or a fully
    transparent membrane).
    """

    k1: complex
    k2: float

    @property
    def k(self) -> complex:
        return self.k1 + self.k2


@dataclass(frozen=True)
class ForceNoiseSpectrum:
    """Force-noise and back-action summary over a sideband grid.

    Spectra are stored at explicitly paired +/-Omega points: entry i holds
    the non-symmetrised density at +grid[i] and at -grid[i], so the
    symmetrised column never resamples.  Grid points where the optics is
    exactly singular are dropped and listed in ``skipped``.
    """

    grid: np.ndarray            # rad/s
    s_tilde_pos: np.ndarray     # N^2 s at +Omega
    s_tilde_neg: np.ndarray     # N^2 s at -Omega
    s_sym: np.ndarray           # N^2 s, (pos + neg)/2
    k: np.ndarray               # complex N/m
    h_opt: np.ndarray           # kg/s
    skipped: tuple = field(default_factory=tuple)


def force_transfer(
    params: InterferometerParams,
    big_omega: float,
    det_tol: float | None = None,
) -> np.ndarray:
    """Input-field-to-force transfer matrix F at sideband frequency Omega.

    Satisfies F(Omega)^dagger = G(Omega) (the displacement transfer), the
    two-port form of the usual measurement/back-action reciprocity.
    """
    omega = params.omega_p + big_omega
    q = mode_mixer(params)
    p = fixed_matrices(params, omega)
    _, _, d = mode_dynamics(params, omega, det_tol)
    return (2 * params.r_m / d) * _X @ (p.m @ q - q.conj() @ p.r_breve) @ p.t_tilde


def _spring_generator(
    params: InterferometerParams,
    big_omega: float,
    det_tol: float | None = None,
) -> np.ndarray:
    """One-sided generator of the dynamic rigidity before conjugate closure."""
    omega = params.omega_p + big_omega
    q = mode_mixer(params)
    p = fixed_matrices(params, omega)
    _, _, d = mode_dynamics(params, omega, det_tol)
    bracket = p.m @ q @ p.r_tilde @ q.T - p.r_tilde[0, 0] * p.r_tilde[1, 1] * np.eye(2)
    return (-4j * params.r_m**2 / d) * _X @ bracket @ _X


def rigidity_matrices(
    params: InterferometerParams,
    big_omega: float,
    det_tol: float | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rigidity matrices (K1, K2, K1 + K2) at sideband frequency Omega.

    K1 needs the optics at both omega_p + Omega and omega_p - Omega (the
    conjugate closure); K2 = -4 R_m T_m Z is frequency independent.
    """
    k1 = cc_close(
        _spring_generator(params, big_omega, det_tol),
        _spring_generator(params, -big_omega, det_tol),
    )
    k2 = -4.0 * params.r_m * params.t_m * _Z
    return k1, k2, k1 + k2


def rigidity(
    params: InterferometerParams,
    field_: IntracavityField,
    big_omega: float,
    det_tol: float | None = None,
) -> RigidityBreakdown:
    """Scalar optical rigidity for the given intracavity field, N/m."""
    k1_mat, k2_mat, _ = rigidity_matrices(params, big_omega, det_tol)
    e = field_.as_array()
    k1 = hbar * params.k_p**2 * complex(e.conj() @ k1_mat @ e)
    k2 = hbar * params.k_p**2 * complex(e.conj() @ k2_mat @ e)
    # K2 is a real quadratic form (diagonal real matrix)
    return RigidityBreakdown(k1=k1, k2=k2.real)


def _s_tilde_one_sided(
    params: InterferometerParams,
    e: np.ndarray,
    big_omega: float,
    det_tol: float | None,
) -> float:
    row = e.conj() @ force_transfer(params, big_omega, det_tol)
    value = hbar**2 * params.k_p**2 * float(np.real(row @ row.conj()))
    # quadratic form: negative values can only be rounding noise
    if value < -1e-18:
        raise ArithmeticError(f"negative force spectral density {value!r}")
    return max(value, 0.0)


def optical_damping(spectrum: ForceNoiseSpectrum) -> np.ndarray:
    """Optical damping H_opt from the +/-Omega spectral asymmetry, kg/s."""
    return _damping(spectrum.s_tilde_pos, spectrum.s_tilde_neg, spectrum.grid)


def _damping(s_pos: np.ndarray, s_neg: np.ndarray, grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if np.any(grid == 0.0):
        raise DegenerateFrequency("optical damping is undefined at Omega = 0")
    return (np.asarray(s_pos) - np.asarray(s_neg)) / (2.0 * hbar * grid)


def noise_spectra(
    params: InterferometerParams,
    field_: IntracavityField,
    grid,
    det_tol: float | None = None,
) -> ForceNoiseSpectrum:
    """Radiation-pressure force noise over a sideband grid (vacuum inputs).

    For each Omega in ``grid`` evaluates the non-symmetrised densities at
    +/-Omega, the symmetrised density, the complex rigidity and the
    optical damping.  Points where either sideband hits an exact optical
    singularity are skipped and reported, not interpolated.
    """
    e = field_.as_array()
    kept, s_pos, s_neg, k_vals = [], [], [], []
    skipped = []
    for big_omega in np.asarray(grid, dtype=float):
        if big_omega == 0.0:
            skipped.append((0.0, "zero sideband frequency (damping undefined)"))
            continue
        try:
            sp = _s_tilde_one_sided(params, e, big_omega, det_tol)
            sn = _s_tilde_one_sided(params, e, -big_omega, det_tol)
            k = rigidity(params, field_, big_omega, det_tol).k
        except OpticalSingularity as exc:
            skipped.append((float(big_omega), str(exc)))
            continue
        kept.append(big_omega)
        s_pos.append(sp)
        s_neg.append(sn)
        k_vals.append(k)
    grid_arr = np.array(kept, dtype=float)
    s_pos_arr = np.array(s_pos, dtype=float)
    s_neg_arr = np.array(s_neg, dtype=float)
    return ForceNoiseSpectrum(
        grid=grid_arr,
        s_tilde_pos=s_pos_arr,
        s_tilde_neg=s_neg_arr,
        s_sym=(s_pos_arr + s_neg_arr) / 2.0,
        k=np.array(k_vals, dtype=complex),
        h_opt=_damping(s_pos_arr, s_neg_arr, grid_arr) if kept else np.array([]),
        skipped=tuple(skipped),
    )


def sideband_response(
    params: InterferometerParams,
    big_omega: float,
    det_tol: float | None = None,
) -> SidebandResponse:
    """Bundle all transfer matrices of one sideband into a SidebandResponse."""
    omega = params.omega_p + big_omega
    _, _, d = mode_dynamics(params, omega, det_tol)
    _, _, k_mat = rigidity_matrices(params, big_omega, det_tol)
    return SidebandResponse(
        omega=omega,
        big_omega=big_omega,
        r_ifo=scattering_matrix(params, omega, det_tol),
        g=displacement_transfer(params, big_omega, det_tol),
        f=force_transfer(params, big_omega, det_tol),
        k_mat=k_mat,
        d=d,
    )
