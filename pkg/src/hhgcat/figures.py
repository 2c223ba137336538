"""Datasets behind each figure, returned as ``{file name: text}`` before anything is written."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock as fk
from .coherent import ParityOutcome, StateSuperposition, displace, normalize
from .errors import DegenerateMeasurementError, ZeroStateError
from .output import csv_text, grid_csv_text, grid_sidecar, json_text
from .schemes import (
    MEASUREMENTS,
    SQRT2,
    SWEEP_COLUMNS_ENLARGE,
    SWEEP_COLUMNS_INTERFEROMETER,
    SchemeConfig,
    closed_form_probabilities,
    enlarge_config,
    enlarge_pipeline,
    enlarge_sweep,
    interferometer_condition,
    interferometer_pipeline,
    measurement_sweep,
    sequential_coefficients,
    sequential_pipeline,
)
from .wigner import DEFAULT_STEP, DEFAULT_WINDOW, Window, covering_window, make_grid, point_asymmetry, wigner_grid

FIGURES = ("fig1", "fig3", "fig4", "fig6", "fig7", "fig8")

FIG1_SQUEEZE = 0.5
FIG3_TILDES = (-0.9, -1.3)
FIG4_RANGE = np.round(np.arange(1, 126) * 0.02, 10)  # |d~| in 0.02 .. 2.5
FIG4_MARKERS = (0.9, 1.3)
FIG6_SHIFTS = (-0.9, -1.3, -1.5, -2.0)
FIG78_THETAS = (math.pi / 3, math.pi / 4, math.pi / 6)
FIG78_RANGE = np.round(np.arange(1, 151) * 0.02, 10)  # 0.02 .. 3.0
FIG78_INSETS = (1.0, 1.5, 2.0)
FIG78_INSET_THETA = math.pi / 6
CLOSED_FORM_TILDES = (0.5, 1.0, 1.5, 2.0)


@dataclass(frozen=True)
class FigureParams:
    """Shell-level parameters; ``None`` means the figure's own default."""

    alpha: complex | None = None
    delta_alpha: complex | None = None
    delta_alpha2: complex | None = None
    theta: float | None = None
    phi: float | None = None
    gamma: complex | None = None
    truncation: int | None = None
    window: Window | None = None
    step: float | None = None
    squeeze: float | None = None

    def as_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, Window):
                v = v.as_list()
            out[k] = v
        return out


def _tag(x: float) -> str:
    return f"{x:+.4g}".replace("+", "p").replace("-", "m").replace(".", "_")


def _sign(d, error=ZeroStateError) -> float:
    """Only the sign of a user shift is kept; zero is degenerate."""
    if d is None:
        return -1.0
    if d == 0:
        raise error("zero shift: the conditioned state vanishes")
    return -1.0 if np.real(d) < 0 else 1.0


def _grid_files(stem: str, grid, **extra) -> dict[str, str]:
    return {f"{stem}.csv": grid_csv_text(grid), f"{stem}.json": json_text(grid_sidecar(grid, **extra))}


def _window_for(s: StateSuperposition, params: FigureParams) -> Window:
    return params.window if params.window is not None else covering_window(s)


def _diag_row(grid) -> dict:
    d = grid.diagnostics
    return {k: d[k] for k in ("integral", "min", "max", "negativity_volume")}


def fig1(params: FigureParams) -> dict[str, str]:
    """Vacuum, squeezed vacuum and single-photon Wigner functions from the number basis."""
    N = params.truncation or fk.DEFAULT_TRUNCATION
    r = FIG1_SQUEEZE if params.squeeze is None else params.squeeze
    window = params.window or DEFAULT_WINDOW
    step = params.step or DEFAULT_STEP
    xs, ps = window.axes(step)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    states = {
        "vacuum": fk.fock_state(0, N),
        "squeezed": fk.fock_normalize(fk.squeezed_vacuum(r, N)),
        "fock1": fk.fock_state(1, N),
    }
    files, rows = {}, []
    for name, v in states.items():
        grid = make_grid(fk.wigner_fock(v, X, P), window, step, truncation=N, tail_mass=v.tail_mass())
        files.update(_grid_files(f"fig1_{name}", grid, state=name, squeeze=r if name == "squeezed" else 0.0))
        vx, vp = fk.quadrature_variances(v)
        rows.append({"state": name, "W_origin": fk.wigner_fock(v, 0.0, 0.0), "var_x": vx, "var_p": vp, **_diag_row(grid)})
    cols = ("state", "W_origin", "var_x", "var_p", "integral", "min", "max", "negativity_volume")
    files["fig1_summary.csv"] = csv_text(cols, rows)
    return files


def fig3(params: FigureParams) -> dict[str, str]:
    """Interferometer cats for each shift and herald outcome."""
    alpha = params.alpha or 0.0
    shifts = [params.delta_alpha] if params.delta_alpha is not None else [SQRT2 * t for t in FIG3_TILDES]
    step = params.step or DEFAULT_STEP
    files, rows = {}, []
    for d in shifts:
        cfg = SchemeConfig(alpha=alpha, delta_alpha=d, phi_delay=params.phi or 0.0)
        two = interferometer_pipeline(cfg)
        dt = float(np.real(d)) / SQRT2
        for m in MEASUREMENTS:
            out = interferometer_condition(two, m, cfg)
            grid = wigner_grid(out.conditioned_state, _window_for(out.conditioned_state, params), step)
            stem = f"fig3_dt{_tag(dt)}_{m}"
            files.update(_grid_files(stem, grid, measurement=m, delta_alpha=d, state=out.conditioned_state.to_dict()))
            rows.append(
                {
                    "delta_alpha": d,
                    "delta_alpha_tilde": dt,
                    "measurement": m,
                    "a_re": out.a_coeff.real,
                    "a_im": out.a_coeff.imag,
                    "b_re": out.b_coeff.real,
                    "b_im": out.b_coeff.imag,
                    "probability": out.probability,
                    "raw_weight": out.raw_weight,
                    **_diag_row(grid),
                }
            )
    cols = ("delta_alpha", "delta_alpha_tilde", "measurement", "a_re", "a_im", "b_re", "b_im",
            "probability", "raw_weight", "integral", "min", "max", "negativity_volume")
    files["fig3_summary.csv"] = csv_text(cols, rows)
    return files


def fig4(params: FigureParams) -> dict[str, str]:
    """Herald probabilities of the interferometer versus |d~|."""
    cfg = SchemeConfig(alpha=params.alpha or 0.0, delta_alpha=_sign(params.delta_alpha), phi_delay=params.phi or 0.0)
    rows = measurement_sweep(cfg, FIG4_RANGE)
    markers = [r for r in rows if any(abs(r["abs_delta_alpha_tilde"] - t) < 1e-9 for t in FIG4_MARKERS)]
    return {
        "fig4_sweep.csv": csv_text(SWEEP_COLUMNS_INTERFEROMETER, rows),
        "fig4_markers.csv": csv_text(SWEEP_COLUMNS_INTERFEROMETER, markers),
    }


def fig6_state(cfg: SchemeConfig) -> StateSuperposition:
    """Normalized sequential state shifted so its middle label sits at the origin."""
    s = normalize(sequential_pipeline(cfg))
    return displace(s, 0, -(cfg.alpha - cfg.delta_alpha))


def fig6(params: FigureParams) -> dict[str, str]:
    """Sequential-conditioning cats for each shift."""
    alpha = params.alpha or 0.0
    shifts = [params.delta_alpha] if params.delta_alpha is not None else list(FIG6_SHIFTS)
    step = params.step or DEFAULT_STEP
    files, rows = {}, []
    for d in shifts:
        cfg = SchemeConfig(alpha=alpha, delta_alpha=d, delta_alpha_2=params.delta_alpha2, amplification_gamma=params.gamma)
        raw = sequential_pipeline(cfg)
        s = fig6_state(cfg)
        window = _window_for(s, params)
        grid = wigner_grid(s, window, step)
        w = grid.window
        symmetric = math.isclose(w.x_min, -w.x_max) and math.isclose(w.p_min, -w.p_max)
        mid = raw.coeff_of(alpha - d)
        closed = sequential_coefficients(float(np.real(alpha)), float(np.real(d))) if np.isreal(alpha) and np.isreal(d) else {}
        stem = f"fig6_d{_tag(float(np.real(d)))}"
        files.update(_grid_files(stem, grid, delta_alpha=d, frame_offset=-(alpha - d), state=s.to_dict()))
        rows.append(
            {
                "delta_alpha": d,
                "xi2": -raw.coeff_of(alpha - 2 * d) / mid,
                "xi1_prime": -raw.coeff_of(alpha) / mid,
                "xi2_closed": closed.get("xi2"),
                "xi1_prime_closed": closed.get("xi1_prime"),
                "point_asymmetry": point_asymmetry(grid) if symmetric else None,
                **_diag_row(grid),
            }
        )
    cols = ("delta_alpha", "xi2", "xi1_prime", "xi2_closed", "xi1_prime_closed", "point_asymmetry",
            "integral", "min", "max", "negativity_volume")
    files["fig6_summary.csv"] = csv_text(cols, rows)
    return files


def _fig78(name: str, outcome: ParityOutcome, params: FigureParams) -> dict[str, str]:
    alpha_t = params.alpha or 0.0
    sign = _sign(params.delta_alpha, DegenerateMeasurementError)
    thetas = [params.theta] if params.theta is not None else list(FIG78_THETAS)
    base = SchemeConfig(delta_alpha=sign)
    files = {f"{name}_sweep.csv": csv_text(SWEEP_COLUMNS_ENLARGE, enlarge_sweep(base, thetas, FIG78_RANGE, outcome, alpha_t))}

    theta_in = params.theta if params.theta is not None else FIG78_INSET_THETA
    step = params.step or DEFAULT_STEP
    rows = []
    for t in FIG78_INSETS:
        cfg = enlarge_config(t, theta_in, alpha_t, sign)
        res = enlarge_pipeline(sequential_pipeline(cfg), cfg, outcome)
        grid = wigner_grid(res.cat_state, _window_for(res.cat_state, params), step)
        files.update(
            _grid_files(f"{name}_inset_t{_tag(t)}", grid, theta=theta_in, abs_delta_alpha_tilde=t, state=res.cat_state.to_dict())
        )
        rows.append(
            {"theta": theta_in, "abs_delta_alpha_tilde": t, "probability": res.probability,
             "separation": res.separation, "branch_fidelity": res.branch_fidelity, **_diag_row(grid)}
        )
    cols = ("theta", "abs_delta_alpha_tilde", "probability", "separation", "branch_fidelity",
            "integral", "min", "max", "negativity_volume")
    files[f"{name}_insets.csv"] = csv_text(cols, rows)

    arows = []
    for theta in thetas:
        for t in CLOSED_FORM_TILDES:
            cfg = enlarge_config(t, theta, alpha_t, sign)
            arows.append({"theta": theta, "abs_delta_alpha_tilde": t, **closed_form_probabilities(cfg)})
    acols = ("theta", "abs_delta_alpha_tilde") + tuple(k for k in arows[0] if k not in ("theta", "abs_delta_alpha_tilde"))
    files[f"{name}_closed_form.csv"] = csv_text(acols, arows)
    return files


def fig7(params: FigureParams) -> dict[str, str]:
    return _fig78("fig7", ParityOutcome.EVEN, params)


def fig8(params: FigureParams) -> dict[str, str]:
    return _fig78("fig8", ParityOutcome.ODD, params)


BUILDERS = {"fig1": fig1, "fig3": fig3, "fig4": fig4, "fig6": fig6, "fig7": fig7, "fig8": fig8}


def build(figure: str, params: FigureParams) -> dict[str, str]:
    if figure not in BUILDERS:
        raise KeyError(figure)
    return BUILDERS[figure](params)
