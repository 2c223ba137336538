import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hhgcat import coherent as ca
from hhgcat import fock as fk
from hhgcat import wigner as wg
from hhgcat.coherent import StateSuperposition
from hhgcat.errors import DimensionError
from hhgcat.schemes import SchemeConfig, interferometer_condition, interferometer_pipeline
from hhgcat.wigner import Window

from conftest import amplitudes, states

S = StateSuperposition
SQ2 = math.sqrt(2)


def coherent_wavefunction(a):
    q, p = SQ2 * a.real, SQ2 * a.imag
    return lambda x: np.pi ** -0.25 * np.exp(-((x - q) ** 2) / 2 + 1j * p * x - 0.5j * q * p)


def cross_wigner_by_integral(a, g, x, p, y_max=12.0, n=6001):
    """(1/pi) int psi_a(x+y) psi_g*(x-y) e^{-2ipy} dy, complex."""
    y = np.linspace(-y_max, y_max, n)
    f = coherent_wavefunction(a)(x + y) * np.conj(coherent_wavefunction(g)(x - y)) * np.exp(-2j * p * y)
    return np.trapezoid(f, y) / math.pi


def m_state(dt, which):
    cfg = SchemeConfig(alpha=0.0, delta_alpha=SQ2 * dt)
    return interferometer_condition(interferometer_pipeline(cfg), which, cfg).conditioned_state


# cross_wigner


def test_cross_wigner_vacuum_peak():
    assert wg.cross_wigner(0, 0, 0.0, 0.0) == pytest.approx(1 / math.pi)


@given(amplitudes(3), st.floats(-4, 4), st.floats(-4, 4))
def test_diagonal_is_gaussian(a, x, p):
    ref = math.exp(-((x - SQ2 * a.real) ** 2) - (p - SQ2 * a.imag) ** 2) / math.pi
    assert wg.cross_wigner(a, a, x, p) == pytest.approx(ref, abs=1e-14)


@given(amplitudes(3), amplitudes(3), st.floats(-4, 4), st.floats(-4, 4))
def test_cross_wigner_hermitian(a, g, x, p):
    assert wg.cross_wigner(a, g, x, p) == pytest.approx(np.conj(wg.cross_wigner(g, a, x, p)), abs=1e-14)


@pytest.mark.parametrize(
    "a,g,x,p",
    [
        (0.5 + 0.2j, -0.7 + 0.1j, 0.3, -0.4),
        (1.2, -1.2, 0.0, 0.9),
        (0.0, 1.0 - 1.0j, -1.1, 0.6),
        (2.0 - 0.5j, 1.5 + 1.0j, 2.2, 0.1),
    ],
)
def test_cross_wigner_three_way(a, g, x, p):
    """Closed form vs direct integral vs displaced-parity sum in the number basis."""
    analytic = wg.cross_wigner(a, g, x, p)
    integral = cross_wigner_by_integral(a, g, x, p)
    N = 50
    rho = np.outer(fk.coherent_vector(a, N), fk.coherent_vector(g, N).conj())
    gamma = np.array([SQ2 * (x + 1j * p)])
    D = fk.displacement_elements(gamma, N)[:, :, 0]
    sign = (-1.0) ** np.arange(N + 1)
    parity = np.einsum("nm,mn,n->", rho, D, sign) / math.pi
    assert analytic == pytest.approx(integral, abs=1e-10)
    assert analytic == pytest.approx(parity, abs=1e-10)


# grids


def test_vacuum_grid():
    g = wg.wigner_grid(S.coherent(0.0))
    assert g.diagnostics["min"] >= 0
    assert g.diagnostics["max"] == pytest.approx(1 / math.pi)
    i, j = np.unravel_index(np.argmax(g.values), g.values.shape)
    assert g.xs[i] == pytest.approx(0.0, abs=1e-12) and g.ps[j] == pytest.approx(0.0, abs=1e-12)
    assert g.diagnostics["integral"] == pytest.approx(1.0, abs=1e-4)
    assert g.diagnostics["negativity_volume"] == 0


def test_grid_requires_normalized_state():
    with pytest.raises(ValueError):
        wg.wigner_grid(S.coherent(0.0, coeff=2.0))


def test_grid_flags_uncovered_labels():
    s = S.coherent(3.5)
    assert not wg.wigner_grid(s, Window(-6, 6, -6, 6), 0.2).diagnostics["covers_labels"]
    assert wg.wigner_grid(s, wg.covering_window(s), 0.2).diagnostics["covers_labels"]


def test_covering_window_contains_base_and_labels():
    s = ca.normalize(S.from_terms([(1, [3.0 + 0.5j]), (1, [-0.2j])]))
    w = wg.covering_window(s, margin=5)
    assert w.x_min <= -6 and w.x_max >= SQ2 * 3 + 5
    assert w.as_list() == [float(v) for v in w.as_list()]


def test_window_validation_and_axes():
    with pytest.raises(ValueError):
        Window(1, 1, 0, 1)
    xs, ps = Window(-1, 1, -2, 2).axes(0.5)
    assert xs.tolist() == [-1, -0.5, 0, 0.5, 1]
    assert ps.size == 9
    with pytest.raises(ValueError):
        Window().axes(0)


@given(states(max_terms=4, radius=2.0))
def test_grid_bounds_realness_and_integral(s):
    g = wg.wigner_grid(s, wg.covering_window(s), 0.1)
    assert g.diagnostics["max_imag_residue"] < 1e-12
    assert g.values.min() >= -1 / math.pi - 1e-9
    assert g.values.max() <= 1 / math.pi + 1e-9
    assert g.diagnostics["integral"] == pytest.approx(1.0, abs=1e-4)


@given(states(max_terms=6, radius=3.0))
def test_analytic_matches_fock(s):
    xs = np.linspace(-5, 5, 7)
    X, P = np.meshgrid(xs, xs, indexing="ij")
    v = fk.fock_normalize(fk.encode(s, 40, tail_bound=np.inf))
    assert np.abs(wg.wigner(s, X, P) - fk.wigner_fock(v, X, P)).max() < 1e-6


# marginals and overlaps


def test_vacuum_marginal():
    g = wg.wigner_grid(S.coherent(0.0))
    px, pp = wg.marginals(g)
    assert np.allclose(px, np.exp(-g.xs**2) / math.sqrt(math.pi), atol=1e-9)
    assert np.trapezoid(pp, g.ps) == pytest.approx(1.0, abs=1e-3)


def test_even_cat_marginal_is_bimodal():
    b = 1.5
    s = ca.normalize(S.coherent(b) + S.coherent(-b))
    g = wg.wigner_grid(s, wg.covering_window(s), 0.05)
    px, _ = wg.marginals(g)
    v = fk.fock_normalize(fk.encode(s, 40))
    ref = np.abs(fk.position_wavefunction(v, g.xs)) ** 2
    assert np.abs(px - ref).max() < 1e-4
    peaks = [g.xs[i] for i in range(1, px.size - 1) if px[i] > px[i - 1] and px[i] > px[i + 1]]
    assert peaks == pytest.approx([-SQ2 * b, SQ2 * b], abs=0.06)


def test_overlap_via_wigner():
    w = Window(-7, 7, -7, 7)
    vac = wg.wigner_grid(S.coherent(0.0), w, 0.05)
    one = wg.wigner_grid(S.coherent(1.0), w, 0.05)
    xs, ps = w.axes(0.05)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    f1 = wg.make_grid(fk.wigner_fock(fk.fock_state(1, 10), X, P), w, 0.05)
    assert wg.overlap_via_wigner(vac, vac) == pytest.approx(1.0, abs=1e-3)
    assert wg.overlap_via_wigner(vac, f1) == pytest.approx(0.0, abs=1e-3)
    assert wg.overlap_via_wigner(vac, one) == pytest.approx(math.exp(-1), abs=1e-3)


def test_overlap_via_wigner_window_mismatch():
    a = wg.wigner_grid(S.coherent(0.0), Window(), 0.1)
    b = wg.wigner_grid(S.coherent(0.0), Window(-5, 5, -5, 5), 0.1)
    with pytest.raises(DimensionError):
        wg.overlap_via_wigner(a, b)


def test_single_mode_required():
    with pytest.raises(DimensionError):
        wg.wigner(S.coherent(0.0, 0.0), 0.0, 0.0)


# symmetry and negativity placement


@pytest.mark.parametrize("dt", [-0.9, -1.3])
@pytest.mark.parametrize("which", ["M1", "M2", "M3"])
def test_interferometer_states_point_symmetric(dt, which):
    g = wg.wigner_grid(m_state(dt, which), Window(), 0.05)
    assert wg.point_asymmetry(g) < 1e-10


def test_point_asymmetry_needs_centred_window():
    g = wg.wigner_grid(S.coherent(0.0), Window(-5, 6, -6, 6), 0.5)
    with pytest.raises(DimensionError):
        wg.point_asymmetry(g)


@pytest.mark.parametrize("dt,which", [(-0.9, "M1"), (-0.9, "M2"), (-1.3, "M1"), (-1.3, "M2")])
def test_negativity_on_x_axis_between_components(dt, which):
    g = wg.wigner_grid(m_state(dt, which), Window(), 0.05)
    i, j = np.unravel_index(np.argmin(g.values), g.values.shape)
    assert g.values[i, j] < 0
    assert g.ps[j] == pytest.approx(0.0, abs=1e-12)
    # components sit at x = 0 and x = +-sqrt2 |dt| in this quadrature map
    assert 0 < abs(g.xs[i]) < SQ2 * abs(dt) + 0.15


@pytest.mark.parametrize("dt", [-0.9, -1.3])
def test_m3_identical_side_maxima(dt):
    x = np.linspace(-4, 4, 801)
    w = wg.wigner(m_state(dt, "M3"), x, 0 * x)
    peaks = [i for i in range(1, x.size - 1) if w[i] > w[i - 1] and w[i] > w[i + 1]]
    assert len(peaks) == 3
    assert x[peaks[0]] == pytest.approx(-x[peaks[2]])
    assert w[peaks[0]] == pytest.approx(w[peaks[2]], abs=1e-14)
