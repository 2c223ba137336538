"""Phase-space characterization of coherent superpositions.

The Wigner function of ``sum_ij c_i c_j* |a_i><a_j|`` is a bilinear sum of
cross terms, each a complex Gaussian in ``(x, p)``; no truncation is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coherent import StateSuperposition, compact
from .errors import DimensionError

SQRT2 = math.sqrt(2.0)
DEFAULT_STEP = 0.05
COVER_MARGIN = 3.0


@dataclass(frozen=True)
class Window:
    x_min: float = -6.0
    x_max: float = 6.0
    p_min: float = -6.0
    p_max: float = 6.0

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.p_min < self.p_max):
            raise ValueError(f"empty window {self}")

    def axes(self, step: float) -> tuple[np.ndarray, np.ndarray]:
        if not step > 0:
            raise ValueError("step must be positive")
        nx = int(round((self.x_max - self.x_min) / step)) + 1
        npts = int(round((self.p_max - self.p_min) / step)) + 1
        return np.linspace(self.x_min, self.x_max, nx), np.linspace(self.p_min, self.p_max, npts)

    def contains(self, x: float, p: float, margin: float = 0.0) -> bool:
        return (
            self.x_min <= x - margin
            and x + margin <= self.x_max
            and self.p_min <= p - margin
            and p + margin <= self.p_max
        )

    def as_list(self) -> list[float]:
        return [self.x_min, self.x_max, self.p_min, self.p_max]


DEFAULT_WINDOW = Window()


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """``values[i, j] = W(xs[i], ps[j])`` plus summary diagnostics."""

    window: Window
    step: float
    xs: np.ndarray
    ps: np.ndarray
    values: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def quadrature_center(label: complex) -> tuple[float, float]:
    """Phase-space position of ``|label>``."""
    return SQRT2 * label.real, SQRT2 * label.imag


def cross_wigner(a, g, x, p):
    """Wigner transform of the dyad ``|a><g|`` at ``(x, p)``.

    With ``b = (x + ip)/sqrt(2)`` the displaced-parity form gives
    ``exp((b* a - b a*)/2 + (b g* - b* g)/2) <g - b | b - a> / pi``.
    The overlap is evaluated as ``exp(-|u - v|^2/2 + i Im(u* v))``.
    """
    a = np.asarray(a, dtype=complex)
    g = np.asarray(g, dtype=complex)
    b = (np.asarray(x, dtype=float) + 1j * np.asarray(p, dtype=float)) / SQRT2
    u = g - b
    v = b - a
    expo = (
        0.5 * (np.conj(b) * a - b * np.conj(a))
        + 0.5 * (b * np.conj(g) - np.conj(b) * g)
        - 0.5 * np.abs(u - v) ** 2
        + 1j * np.imag(np.conj(u) * v)
    )
    out = np.exp(expo) / math.pi
    return complex(out) if out.ndim == 0 else out


def wigner_complex(s: StateSuperposition, x, p) -> np.ndarray:
    """Bilinear sum over term pairs; the imaginary part is rounding residue."""
    if s.num_modes != 1:
        raise DimensionError("Wigner function needs a single-mode state")
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    total = np.zeros(x.shape, dtype=complex)
    labels = s.labels[:, 0]
    for ci, ai in zip(s.coeffs, labels):
        for cj, aj in zip(s.coeffs, labels):
            total += ci * np.conj(cj) * cross_wigner(ai, aj, x, p)
    return total


def wigner(s: StateSuperposition, x, p):
    out = wigner_complex(s, x, p).real
    return float(out) if out.ndim == 0 else out


def covers_labels(s: StateSuperposition, window: Window, margin: float = COVER_MARGIN) -> bool:
    return all(window.contains(*quadrature_center(complex(a)), margin=margin) for a in s.labels[:, 0])


def covering_window(s: StateSuperposition, margin: float = 5.0, base: Window = DEFAULT_WINDOW) -> Window:
    """Smallest window containing ``base`` and every label center +- ``margin``, grown to whole units."""
    cx = [quadrature_center(complex(a)) for a in s.labels[:, 0]]
    xs = [c[0] for c in cx]
    ps = [c[1] for c in cx]
    return Window(
        min(base.x_min, math.floor(min(xs) - margin)),
        max(base.x_max, math.ceil(max(xs) + margin)),
        min(base.p_min, math.floor(min(ps) - margin)),
        max(base.p_max, math.ceil(max(ps) + margin)),
    )


def _integrate(values: np.ndarray, xs: np.ndarray, ps: np.ndarray) -> float:
    return float(np.trapezoid(np.trapezoid(values, ps, axis=1), xs))


def make_grid(values: np.ndarray, window: Window, step: float, **extra) -> WignerGrid:
    """Wrap sampled values in a :class:`WignerGrid` and fill the diagnostics."""
    xs, ps = window.axes(step)
    if values.shape != (xs.size, ps.size):
        raise DimensionError(f"values shape {values.shape} does not match window axes")
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    diag = {
        "integral": _integrate(values, xs, ps),
        "min": float(values.min()),
        "max": float(values.max()),
        "negativity_volume": _integrate(np.abs(np.minimum(values, 0.0)), xs, ps),
    }
    diag.update(extra)
    return WignerGrid(window, float(step), xs, ps, values, diag)


def wigner_grid(
    s: StateSuperposition, window: Window = DEFAULT_WINDOW, step: float = DEFAULT_STEP
) -> WignerGrid:
    """Sample the Wigner function of a normalized single-mode state."""
    s = compact(s)
    n2 = s.norm_squared()
    if abs(n2 - 1.0) > 1e-8:
        raise ValueError(f"state is not normalized (squared norm {n2:.10f})")
    xs, ps = window.axes(step)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    w = wigner_complex(s, X, P)
    return make_grid(
        w.real,
        window,
        step,
        max_imag_residue=float(np.abs(w.imag).max()),
        covers_labels=covers_labels(s, window),
    )


def marginals(grid: WignerGrid) -> tuple[np.ndarray, np.ndarray]:
    """``(P(x), P(p))`` by trapezoid integration over the other quadrature."""
    return (
        np.trapezoid(grid.values, grid.ps, axis=1),
        np.trapezoid(grid.values, grid.xs, axis=0),
    )


def overlap_via_wigner(g1: WignerGrid, g2: WignerGrid) -> float:
    """``Tr(rho1 rho2) = 2 pi * int W1 W2 dx dp`` (``[x, p] = i``)."""
    if g1.window != g2.window or g1.step != g2.step:
        raise DimensionError("grids must share window and step")
    return 2 * math.pi * _integrate(g1.values * g2.values, g1.xs, g1.ps)


def point_asymmetry(grid: WignerGrid) -> float:
    """``max |W(x, p) - W(-x, -p)|`` on a window symmetric about the origin."""
    w = grid.window
    if not (math.isclose(w.x_min, -w.x_max) and math.isclose(w.p_min, -w.p_max)):
        raise DimensionError("point asymmetry needs a window centred on the origin")
    return float(np.abs(grid.values - grid.values[::-1, ::-1]).max())
