"""CSV/JSON emission for sweeps, comparisons and cooling reports.

Numbers are written in shortest round-trip decimal form, outputs carry no
timestamps, and grid evaluation order never affects file contents, so
identical configurations produce bit-identical files at any worker count.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from scipy.constants import hbar

from . import __version__
from .config import RunConfig, config_digest
from .cooling import occupancy, optimize_pump
from .errors import OpticalSingularity
from .lumped_mode import (
    approx_force_transfer,
    approx_rigidity,
    canonical_spectra,
    coupling_constants,
    fano_spectrum,
    from_exact,
    strip_propagation_phases,
)
from .radiation_pressure import force_transfer, noise_spectra, rigidity
from .scattering import classical_fields

SPECTRUM_HEADER = "Omega,S_tilde_pos,S_tilde_neg,S_sym,Re_K,Im_K,H_opt"
COMPARE_HEADER = "Omega,err_F,err_K,err_S_tilde,err_S_canonical,err_S_fano"
LANDSCAPE_HEADER = "chi,phi,n_bar,s_f_pos,s_f_neg"


def fmt(x: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(x))


def _write_rows(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {obj!r}")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"
    )


def _sidecar(cfg: RunConfig, kind: str, **extra) -> dict:
    lumped = from_exact(cfg.params)
    payload = {
        "schema": 1,
        "kind": kind,
        "version": __version__,
        "config": cfg.echo,
        "config_sha256": config_digest(cfg.echo),
        "validity_warnings": list(lumped.validity.warnings),
    }
    payload.update(extra)
    return payload


def _map_ordered(fun, items, threads: int):
    if threads <= 1:
        return [fun(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fun, items))


def run_spectrum(cfg: RunConfig, out_dir: Path, threads: int = 1) -> dict:
    """Force-noise sweep -> spectrum.csv + spectrum.json; returns summary."""
    out_dir.mkdir(parents=True, exist_ok=True)
    field = classical_fields(cfg.params, cfg.pump, cfg.det_tol)
    e = field.as_array()

    def one(big_omega: float):
        if big_omega == 0.0:
            return (big_omega, "zero sideband frequency (damping undefined)")
        try:
            spec = noise_spectra(cfg.params, field, [big_omega], cfg.det_tol)
        except OpticalSingularity as exc:  # classical-field singularities
            return (big_omega, str(exc))
        if spec.skipped:
            return (big_omega, spec.skipped[0][1])
        k = spec.k[0]
        return (
            big_omega,
            spec.s_tilde_pos[0],
            spec.s_tilde_neg[0],
            spec.s_sym[0],
            k.real,
            k.imag,
            spec.h_opt[0],
        )

    results = _map_ordered(one, [float(w) for w in cfg.grid], threads)
    rows = [r for r in results if len(r) > 2]
    skipped = [
        {"omega": r[0], "reason": r[1]} for r in results if len(r) == 2
    ]
    _write_rows(out_dir / "spectrum.csv", SPECTRUM_HEADER, rows)
    _write_json(
        out_dir / "spectrum.json",
        _sidecar(
            cfg,
            "spectrum",
            skipped=skipped,
            field={"e_plus": [e[0].real, e[0].imag],
                   "e_minus": [e[1].real, e[1].imag]},
        ),
    )
    return {"rows": len(rows), "skipped": len(skipped), "total": len(results)}


def run_compare(cfg: RunConfig, out_dir: Path, threads: int = 1) -> dict:
    """Exact vs reduced-model sweep -> compare.csv + compare.json.

    Relative-error columns: force transfer matrix (entrywise, in the
    phase-stripped gauge), scalar rigidity, force noise via the reduced
    matrix, the canonical Lorentzian (using the symmetric field only) and,
    when the south port is unpumped, the Fano line shape.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    params = cfg.params
    field = classical_fields(params, cfg.pump, cfg.det_tol)
    e = field.as_array()
    lp = from_exact(params)
    dark_south = cfg.pump.south == 0
    k_p = params.k_p

    def one(big_omega: float):
        if big_omega == 0.0:
            return (big_omega, "zero sideband frequency")
        try:
            f_exact = force_transfer(params, big_omega, cfg.det_tol)
            k_exact = rigidity(params, field, big_omega, cfg.det_tol).k
        except OpticalSingularity as exc:
            return (big_omega, str(exc))
        f_strip = strip_propagation_phases(params, f_exact, big_omega)
        f_ap = approx_force_transfer(lp, k_p, big_omega)
        # floor keeps identically-zero entries (symmetric case) at error 0
        err_f = float(np.max(
            np.abs(f_strip - f_ap) / np.maximum(np.abs(f_strip), 1e-300)
        ))

        k_ap = approx_rigidity(lp, k_p, big_omega, field)
        err_k = abs(k_exact - k_ap) / abs(k_exact)

        row_ex = e.conj() @ f_exact
        s_exact = hbar**2 * k_p**2 * float(np.real(row_ex @ row_ex.conj()))
        row_ap = e.conj() @ f_ap
        s_ap = hbar**2 * k_p**2 * float(np.real(row_ap @ row_ap.conj()))
        err_s = abs(s_exact - s_ap) / s_exact

        s_can = canonical_spectra(lp, k_p, e[0], [big_omega]).s_tilde_pos[0]
        err_can = abs(s_exact - s_can) / s_exact

        if dark_south:
            s_fano = float(fano_spectrum(
                lp, params.epsilon, params.kappa, k_p, cfg.pump.west, [big_omega]
            )[0])
            err_fano = abs(s_exact - s_fano) / s_exact
        else:
            err_fano = float("nan")
        return (big_omega, err_f, err_k, err_s, err_can, err_fano)

    results = _map_ordered(one, [float(w) for w in cfg.grid], threads)
    rows = [r for r in results if len(r) > 2]
    skipped = [{"omega": r[0], "reason": r[1]} for r in results if len(r) == 2]
    _write_rows(out_dir / "compare.csv", COMPARE_HEADER, rows)
    couplings = coupling_constants(lp, k_p)
    _write_json(
        out_dir / "compare.json",
        _sidecar(
            cfg,
            "compare",
            skipped=skipped,
            fano_applicable=dark_south,
            lumped={
                "gamma_s": lp.gamma_s,
                "delta_s": lp.delta_s,
                "gamma_m": lp.gamma_m,
                "delta_m": lp.delta_m,
                "gamma": lp.gamma,
                "delta": lp.delta,
                "p": lp.p,
                "alpha": lp.alpha,
                "g_disp": couplings.g_disp,
                "g_diss_combo": couplings.g_diss_combo,
            },
        ),
    )
    return {"rows": len(rows), "skipped": len(skipped), "total": len(results)}


def run_cooling(cfg: RunConfig, out_dir: Path, optimize: bool = False) -> dict:
    """Occupancy report -> cooling.json (+ landscape.csv with optimisation).

    Raises UnstableSystem for anti-damped configurations; the CLI maps
    that to its own exit code.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    mode = cfg.mechanical
    field = classical_fields(cfg.params, cfg.pump, cfg.det_tol)
    spec = noise_spectra(cfg.params, field, [mode.omega_m], cfg.det_tol)
    if spec.skipped:
        raise OpticalSingularity(cfg.params.omega_p + mode.omega_m, 0.0)
    result = occupancy(mode, float(spec.s_tilde_pos[0]), float(spec.s_tilde_neg[0]))

    report = {
        "n_bar": result.n_bar,
        "n_bar_sym_form": result.n_bar_sym_form,
        "n_thermal": mode.n_t,
        "s_t_pos": result.s_t_pos,
        "s_t_neg": result.s_t_neg,
        "s_f_pos": result.s_f_pos,
        "s_f_neg": result.s_f_neg,
        "h_opt": result.h_opt,
        "h_friction": mode.h_friction,
        "rigidity": {"re": spec.k[0].real, "im": spec.k[0].imag},
        "regime_flags": {
            "thermal_asymmetry": result.flags.thermal_asymmetry,
            "force_asymmetry": result.flags.force_asymmetry,
            "weak_backaction": result.flags.weak_backaction,
            "ok": result.flags.ok,
        },
    }

    if optimize:
        e = field.as_array()
        budget = cfg.energy_budget
        if budget is None:
            budget = float(np.abs(e[0]) ** 2 + np.abs(e[1]) ** 2)
        opt = optimize_pump(
            cfg.params,
            mode,
            budget,
            constraint=cfg.optimize_constraint,
            det_tol=cfg.det_tol,
        )
        rows = []
        for i, chi in enumerate(opt.chi_grid):
            for j, phi in enumerate(opt.phi_grid):
                rows.append((
                    chi,
                    phi,
                    opt.n_bar_grid[i, j],
                    opt.s_f_pos_grid[i, j],
                    opt.s_f_neg_grid[i, j],
                ))
        _write_rows(out_dir / "landscape.csv", LANDSCAPE_HEADER, rows)
        e_opt = opt.field.as_array()
        report["optimum"] = {
            "chi": opt.chi,
            "phi": opt.phi,
            "n_bar": opt.result.n_bar,
            "energy_budget": budget,
            "constraint": cfg.optimize_constraint,
            "e_plus": [e_opt[0].real, e_opt[0].imag],
            "e_minus": [e_opt[1].real, e_opt[1].imag],
        }

    _write_json(out_dir / "cooling.json", _sidecar(cfg, "cooling", report=report))
    return report
