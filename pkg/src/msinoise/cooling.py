"""Optical cooling: thermal baths, steady-state occupancy, pump optimisation.

Fluctuation-dissipation fixes the thermal force spectra of the mechanical
bath; the radiation-pressure spectra of the optical bath are supplied by
the exact two-port model.  Their spectral asymmetries set the steady-state
phonon number, and the pump split between the common and differential
optical modes is the tuning knob the optimiser sweeps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar, k as k_boltzmann

from .errors import (
    DegenerateFrequency,
    NonpositiveTemperature,
    UnreachableField,
    UnstableSystem,
)
from .radiation_pressure import force_transfer
from .scattering import (
    InterferometerParams,
    IntracavityField,
    PortVector,
    fixed_matrices,
    mode_dynamics,
)

__all__ = [
    "MechanicalMode",
    "RegimeFlags",
    "CoolingResult",
    "PumpOptimum",
    "thermal_occupation",
    "thermal_spectra",
    "occupancy",
    "occupancy_simplified",
    "optimize_pump",
    "pump_for_intracavity",
    "spring_shifted_frequency",
]


def thermal_occupation(temperature: float, omega: float) -> float:
    """Bose occupation n_T = 1 / (exp(hbar|Omega|/kT) - 1).

    Algebraically identical to the coth form 2 n_T + 1 =
    coth(hbar|Omega| / 2kT).
    """
    if temperature <= 0.0:
        raise NonpositiveTemperature(f"temperature {temperature!r} K")
    if omega == 0.0:
        raise DegenerateFrequency("thermal occupation diverges at Omega = 0")
    x = hbar * abs(omega) / (k_boltzmann * temperature)
    if x > 700.0:  # expm1 overflows; the Boltzmann tail is exact to doubles
        return math.exp(-x)
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class MechanicalMode:
    """Mechanical oscillator coupled to its native heat bath.

    ``omega_m`` is the effective resonance frequency with any optical
    spring shift already absorbed.  The bath is given either as a
    temperature or directly as an occupation number.  ``mass`` is only
    needed by the optional spring-shift helper.
    """

    omega_m: float          # rad/s
    h_friction: float       # kg/s
    temperature: float | None = None
    n_thermal: float | None = None
    mass: float | None = None

    def __post_init__(self):
        if self.omega_m <= 0.0:
            raise ValueError(f"omega_m = {self.omega_m!r} must be positive")
        if self.h_friction <= 0.0:
            raise ValueError(f"h_friction = {self.h_friction!r} must be positive")
        if (self.temperature is None) == (self.n_thermal is None):
            raise ValueError("give exactly one of temperature, n_thermal")
        if self.n_thermal is not None and self.n_thermal < 0.0:
            raise ValueError(f"n_thermal = {self.n_thermal!r} must be >= 0")

    @property
    def n_t(self) -> float:
        if self.n_thermal is not None:
            return self.n_thermal
        return thermal_occupation(self.temperature, self.omega_m)


def thermal_spectra(mode: MechanicalMode) -> tuple[float, float]:
    """Non-symmetrised thermal force spectra at +/-omega_m, N^2 s.

    s(+) = 2 hbar omega_m H (n_T + 1), s(-) = 2 hbar omega_m H n_T: the
    unique pair whose symmetrised sum satisfies fluctuation-dissipation
    and whose difference satisfies the Kubo relation for friction H.
    """
    base = 2.0 * hbar * mode.omega_m * mode.h_friction
    n_t = mode.n_t
    return base * (n_t + 1.0), base * n_t


@dataclass(frozen=True)
class RegimeFlags:
    """Margins of the simplifying inequalities behind the one-line occupancy.

    Each margin is "how many times over" the inequality holds; a margin of
    at least `required` on all three justifies
    n ~= s_thermal(-) / s_force(+).
    """

    thermal_asymmetry: float    # s_t(+-) / (s_t(+) - s_t(-))
    force_asymmetry: float      # s_f(+) / s_f(-)
    weak_backaction: float      # s_t(-) / s_f(-)
    required: float = 10.0

    @property
    def ok(self) -> bool:
        return (
            self.thermal_asymmetry >= self.required
            and self.force_asymmetry >= self.required
            and self.weak_backaction >= self.required
        )


@dataclass(frozen=True)
class CoolingResult:
    """Steady-state phonon number with its spectral breakdown."""

    n_bar: float
    n_bar_sym_form: float   # same number via the symmetrised-density route
    s_t_pos: float
    s_t_neg: float
    s_f_pos: float
    s_f_neg: float
    h_opt: float
    flags: RegimeFlags


def _flags(s_t_pos, s_t_neg, s_f_pos, s_f_neg) -> RegimeFlags:
    def ratio(num, den):
        if den <= 0.0:
            return math.inf
        return num / den

    return RegimeFlags(
        thermal_asymmetry=ratio(s_t_neg, s_t_pos - s_t_neg),
        force_asymmetry=ratio(s_f_pos, s_f_neg),
        weak_backaction=ratio(s_t_neg, s_f_neg),
    )


def occupancy(mode: MechanicalMode, s_f_pos: float, s_f_neg: float) -> CoolingResult:
    """Steady-state phonon number from thermal plus optical spectra.

    1/n + 1 = [s_t(+) + s_f(+)] / [s_t(-) + s_f(-)], with both spectra
    taken at the mechanical resonance.  The symmetrised-density form
    (2n + 1 = (S_t + S_f) / (hbar omega_m (H + H_opt))) is evaluated as a
    cross-check; the two are algebraically identical.

    Raises
    ------
    UnstableSystem
        When the total damping H + H_opt is not positive (optical
        anti-damping exceeds the mechanical friction).
    """
    s_t_pos, s_t_neg = thermal_spectra(mode)
    h_opt = (s_f_pos - s_f_neg) / (2.0 * hbar * mode.omega_m)
    if mode.h_friction + h_opt <= 0.0:
        raise UnstableSystem(
            f"H + H_opt = {mode.h_friction + h_opt!r} kg/s <= 0 "
            "(optical anti-damping)"
        )
    num = s_t_neg + s_f_neg
    den = (s_t_pos + s_f_pos) - num
    n_bar = num / den
    s_t_sym = (s_t_pos + s_t_neg) / 2.0
    s_f_sym = (s_f_pos + s_f_neg) / 2.0
    two_n_plus_1 = (s_t_sym + s_f_sym) / (
        hbar * mode.omega_m * (mode.h_friction + h_opt)
    )
    return CoolingResult(
        n_bar=n_bar,
        n_bar_sym_form=(two_n_plus_1 - 1.0) / 2.0,
        s_t_pos=s_t_pos,
        s_t_neg=s_t_neg,
        s_f_pos=s_f_pos,
        s_f_neg=s_f_neg,
        h_opt=h_opt,
        flags=_flags(s_t_pos, s_t_neg, s_f_pos, s_f_neg),
    )


def occupancy_simplified(mode: MechanicalMode, s_f_pos: float) -> float:
    """One-line occupancy n = s_thermal(-) / s_force(+).

    Valid when the regime flags of `occupancy` pass: small thermal
    asymmetry, strongly asymmetric force noise, anti-Stokes force noise
    far below thermal.  Callers probing regime breakdown get the raw
    number regardless; consult `CoolingResult.flags` for the margins.
    """
    _, s_t_neg = thermal_spectra(mode)
    return s_t_neg / s_f_pos


@dataclass(frozen=True)
class PumpOptimum:
    """Result of the fixed-energy pump optimisation."""

    field: IntracavityField
    chi: float
    phi: float
    result: CoolingResult
    chi_grid: np.ndarray
    phi_grid: np.ndarray
    n_bar_grid: np.ndarray      # inf where anti-damped
    s_f_pos_grid: np.ndarray
    s_f_neg_grid: np.ndarray


def _golden_min(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of a scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while (b - a) > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    x = c if fc <= fd else d
    return x, min(fc, fd)


def optimize_pump(
    params: InterferometerParams,
    mode: MechanicalMode,
    energy_budget: float,
    grid_size: int = 64,
    tol: float = 1e-6,
    constraint: str = "intracavity",
    det_tol: float | None = None,
) -> PumpOptimum:
    """Minimise the phonon number over the pump split at fixed energy.

    The field is parametrised as E+ = sqrt(E) cos(chi),
    E- = sqrt(E) sin(chi) e^{i phi} with |E+|^2 + |E-|^2 = energy_budget
    held fixed; a coarse (chi, phi) grid is followed by golden-section
    refinement on each axis.  With ``constraint="injected"`` the same
    parametrisation is applied to the port amplitudes instead (fixed
    injected flux |A_w|^2 + |A_s|^2; note the fixed-intracavity-energy
    optimum does not generally carry over to this constraint).

    Raises
    ------
    UnstableSystem
        If every sampled pump split is anti-damped.
    """
    if energy_budget <= 0.0:
        raise ValueError(f"energy_budget = {energy_budget!r} must be positive")
    if constraint not in ("intracavity", "injected"):
        raise ValueError(f"unknown constraint {constraint!r}")

    f_pos = force_transfer(params, mode.omega_m, det_tol)
    f_neg = force_transfer(params, -mode.omega_m, det_tol)
    p_pos = hbar**2 * params.k_p**2 * (f_pos @ f_pos.conj().T)
    p_neg = hbar**2 * params.k_p**2 * (f_neg @ f_neg.conj().T)
    if constraint == "injected":
        _, d_e_inv, _ = mode_dynamics(params, params.omega_p, det_tol)
        w = d_e_inv @ fixed_matrices(params, params.omega_p).t_tilde
        p_pos = w.conj().T @ p_pos @ w
        p_neg = w.conj().T @ p_neg @ w

    s_t_pos, s_t_neg = thermal_spectra(mode)
    two_hbar_om = 2.0 * hbar * mode.omega_m

    def spectra_at(chi, phi):
        """Force spectra at +/-omega_m for pump split (chi, phi); vectorised."""
        c, s = np.cos(chi), np.sin(chi)
        cross = c * s * np.exp(1j * phi)
        out = []
        for p_mat in (p_pos, p_neg):
            val = (
                c * c * p_mat[0, 0].real
                + s * s * p_mat[1, 1].real
                + 2.0 * np.real(p_mat[0, 1] * cross)
            )
            out.append(energy_budget * val)
        return out

    def n_bar_at(chi, phi):
        s_f_pos, s_f_neg = spectra_at(chi, phi)
        num = s_t_neg + s_f_neg
        den = (s_t_pos + s_f_pos) - num
        return np.where(den > 0.0, num / np.maximum(den, 1e-300), np.inf)

    chi_grid = np.linspace(0.0, math.pi / 2.0, grid_size)
    phi_grid = np.linspace(0.0, 2.0 * math.pi, grid_size, endpoint=False)
    chi_mesh, phi_mesh = np.meshgrid(chi_grid, phi_grid, indexing="ij")
    s_f_pos_grid, s_f_neg_grid = spectra_at(chi_mesh, phi_mesh)
    n_grid = n_bar_at(chi_mesh, phi_mesh)
    if not np.isfinite(n_grid).any():
        raise UnstableSystem("every sampled pump split is anti-damped")

    i, j = np.unravel_index(np.argmin(n_grid), n_grid.shape)
    best_chi, best_phi = float(chi_grid[i]), float(phi_grid[j])
    best_n = float(n_grid[i, j])

    d_chi = chi_grid[1] - chi_grid[0]
    d_phi = phi_grid[1] - phi_grid[0]
    for _ in range(40):
        chi, n_chi = _golden_min(
            lambda c: float(n_bar_at(np.asarray(c), np.asarray(best_phi))),
            max(0.0, best_chi - d_chi),
            min(math.pi / 2.0, best_chi + d_chi),
            tol,
        )
        if n_chi < best_n:
            best_chi, best_n = chi, n_chi
        phi, n_phi = _golden_min(
            lambda f: float(n_bar_at(np.asarray(best_chi), np.asarray(f))),
            best_phi - d_phi,
            best_phi + d_phi,
            tol,
        )
        if n_phi < best_n:
            best_phi, best_n = phi % (2.0 * math.pi), n_phi
        moved = max(abs(chi - best_chi), abs(phi % (2.0 * math.pi) - best_phi))
        d_chi, d_phi = max(d_chi / 4.0, 4 * tol), max(d_phi / 4.0, 4 * tol)
        if moved < tol and d_chi <= 4 * tol and d_phi <= 4 * tol:
            break

    root = math.sqrt(energy_budget)
    vec = np.array([
        root * math.cos(best_chi),
        root * math.sin(best_chi) * np.exp(1j * best_phi),
    ])
    if constraint == "injected":
        field = IntracavityField(*(w @ vec))
    else:
        field = IntracavityField(complex(vec[0]), complex(vec[1]))
    s_f_pos, s_f_neg = spectra_at(np.asarray(best_chi), np.asarray(best_phi))
    result = occupancy(mode, float(s_f_pos), float(s_f_neg))
    return PumpOptimum(
        field=field,
        chi=best_chi,
        phi=best_phi,
        result=result,
        chi_grid=chi_grid,
        phi_grid=phi_grid,
        n_bar_grid=n_grid,
        s_f_pos_grid=s_f_pos_grid,
        s_f_neg_grid=s_f_neg_grid,
    )


def pump_for_intracavity(
    params: InterferometerParams,
    field: IntracavityField,
    det_tol: float | None = None,
) -> PortVector:
    """Port amplitudes that sustain a requested intracavity field.

    Inverts the classical steady state: A = T_tilde^{-1} D_e E at the pump
    frequency.  Round-trips with `classical_fields` whenever both ports
    are open.

    Raises
    ------
    UnreachableField
        If a port with zero transmissivity would have to carry drive.
    """
    d_e, _, _ = mode_dynamics(params, params.omega_p, det_tol)
    needed = d_e @ field.as_array()
    p = fixed_matrices(params, params.omega_p)
    amplitudes = []
    for idx, port in ((0, "west"), (1, "south")):
        t = p.t_tilde[idx, idx]
        if abs(t) == 0.0:
            if abs(needed[idx]) > 0.0:
                raise UnreachableField(
                    f"{port} port is closed (t = 0) but needs drive "
                    f"{needed[idx]!r}"
                )
            amplitudes.append(0.0 + 0.0j)
        else:
            amplitudes.append(needed[idx] / t)
    return PortVector(west=amplitudes[0], south=amplitudes[1])


def spring_shifted_frequency(mode: MechanicalMode, k_re: float) -> float:
    """First-order spring-shifted resonance sqrt(omega_m^2 + Re K / m).

    Convenience outside the core formulas (which absorb the shift into
    omega_m); requires the mode mass.
    """
    if mode.mass is None:
        raise ValueError("spring_shifted_frequency needs MechanicalMode.mass")
    shifted_sq = mode.omega_m**2 + k_re / mode.mass
    if shifted_sq <= 0.0:
        raise UnstableSystem(
            f"spring constant {k_re!r} N/m overwhelms the mechanical restoring force"
        )
    return math.sqrt(shifted_sq)
