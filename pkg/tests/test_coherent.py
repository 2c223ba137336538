import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hhgcat import coherent as ca
from hhgcat.coherent import CatDescriptor, ParityOutcome, StateSuperposition
from hhgcat.errors import DimensionError, ZeroStateError

from conftest import amplitudes, states

S = StateSuperposition


# construction and serialization


def test_labels_must_match_coefficients():
    with pytest.raises(DimensionError):
        S(np.ones(2), np.zeros((3, 1)))


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        S.coherent(complex("nan"))


def test_mixed_mode_counts_rejected():
    with pytest.raises(DimensionError):
        S.from_terms([(1, [0.0]), (1, [0.0, 1.0])])


def test_arrays_are_read_only():
    s = S.coherent(1.0)
    with pytest.raises(ValueError):
        s.coeffs[0] = 2.0


def test_json_layout():
    s = S.from_terms([(1 + 2j, [0.5, -1j]), (-0.25, [1.0, 2.0])])
    doc = json.loads(s.to_json())
    assert doc["modes"] == 2
    assert doc["terms"][0] == {"coeff": [1.0, 2.0], "labels": [[0.5, 0.0], [0.0, -1.0]]}


@given(states(num_modes=2))
def test_json_round_trip(s):
    back = S.from_json(s.to_json())
    assert np.array_equal(back.coeffs, s.coeffs)
    assert np.array_equal(back.labels, s.labels)


# overlap


def test_overlap_examples():
    assert ca.overlap(0, 0) == pytest.approx(1.0)
    assert ca.overlap(0, 1) == pytest.approx(0.6065306597126334, abs=1e-14)
    assert ca.overlap(1, -1) == pytest.approx(0.1353352832366127, abs=1e-14)


@given(amplitudes(3), amplitudes(3))
def test_overlap_symmetry_and_modulus(a, b):
    ab = ca.overlap(a, b)
    assert ab == pytest.approx(np.conj(ca.overlap(b, a)), abs=1e-15)
    assert abs(ab) == pytest.approx(math.exp(-abs(a - b) ** 2 / 2), abs=1e-14)


def test_overlap_matches_textbook_form():
    a, b = 0.7 - 1.1j, -0.3 + 2.0j
    ref = np.exp(-abs(a) ** 2 / 2 - abs(b) ** 2 / 2 + np.conj(a) * b)
    assert ca.overlap(a, b) == pytest.approx(ref, abs=1e-14)


def test_overlap_stable_for_large_labels():
    # textbook form overflows at |a| ~ 30
    assert abs(ca.overlap(30 + 5j, 30 + 5j)) == pytest.approx(1.0)


# inner product and normalization


def test_inner_product_examples():
    a = 1.3 - 0.4j
    assert ca.inner_product(S.coherent(a, a), S.coherent(a, a)) == pytest.approx(1.0)
    xi = math.exp(-0.5)
    cat = S.from_terms([(1, [1.0]), (-xi, [0.0])])
    assert ca.inner_product(cat, cat) == pytest.approx(1 - math.exp(-1), abs=1e-14)
    assert ca.inner_product(cat, S.empty(1)) == 0


def test_inner_product_mode_mismatch():
    with pytest.raises(DimensionError):
        ca.inner_product(S.coherent(0.0), S.coherent(0.0, 0.0))


@given(states(max_terms=6, radius=3.0, normalized=False))
def test_norm_is_real_and_nonnegative(s):
    n = ca.inner_product(s, s)
    assert abs(n.imag) < 1e-12
    assert n.real >= -1e-12


def test_normalize_examples():
    s = ca.normalize(S.coherent(0.0, coeff=2.0))
    assert s.coeffs[0] == pytest.approx(1.0)
    cat = S.from_terms([(1, [1.0]), (-math.exp(-0.5), [0.0])])
    n = ca.normalize(cat)
    assert np.array_equal(n.labels, cat.labels)
    assert n.coeffs == pytest.approx(cat.coeffs / math.sqrt(1 - math.exp(-1)))
    with pytest.raises(ZeroStateError):
        ca.normalize(S.coherent(0.4) - S.coherent(0.4))


@given(states(normalized=False))
def test_normalize_gives_unit_norm(s):
    if s.norm_squared() > 1e-8:
        assert ca.normalize(s).norm_squared() == pytest.approx(1.0, abs=1e-12)


# unitary elements


def test_displace_examples():
    g = 0.8 - 0.3j
    out = ca.displace(S.coherent(0.0), 0, g)
    assert out.coeffs[0] == pytest.approx(1.0)
    assert out.labels[0, 0] == g
    a, d = 0.4, -0.7
    out = ca.displace(S.coherent(a + 2 * d), 0, -3 * d)
    assert out.labels[0, 0] == pytest.approx(a - d)
    assert out.coeffs[0] == pytest.approx(1.0)
    out = ca.displace(S.coherent(1.0), 0, 1j)
    assert out.coeffs[0] == pytest.approx(np.exp(1j), abs=1e-15)
    assert out.labels[0, 0] == pytest.approx(1 + 1j)


def test_displace_composition_law():
    # D(b) D(a) = exp((b a* - b* a)/2) D(a + b)
    a, b = 0.3 + 0.2j, -0.5 + 0.9j
    s = S.coherent(0.1 - 0.4j)
    two = ca.displace(ca.displace(s, 0, a), 0, b)
    one = ca.displace(s, 0, a + b) * np.exp((b * np.conj(a) - np.conj(b) * a) / 2)
    assert ca.distance(two, one, tol=1e-12) < 1e-12


def test_phase_delay_examples():
    s = S.from_terms([(0.3, [1.0 + 0.5j]), (1j, [-0.2])])
    assert ca.distance(ca.phase_delay(s, 0, 0.0), s) == 0
    out = ca.phase_delay(S.coherent(0.7 - 0.1j), 0, math.pi)
    assert out.labels[0, 0] == pytest.approx(-(0.7 - 0.1j))
    twice = ca.phase_delay(ca.phase_delay(s, 0, math.pi), 0, math.pi)
    assert ca.distance(twice, s, tol=1e-12) < 1e-15


def test_beam_splitter_examples():
    a = 0.6 - 0.2j
    s = S.coherent(a, 0.3j)
    assert ca.distance(ca.beam_splitter(s, 0, 1, 0.0), s) == 0
    out = ca.beam_splitter(S.coherent(math.sqrt(2) * a, 0.0), 0, 1, math.pi / 4)
    assert out.labels[0] == pytest.approx([a, -a])
    alpha, d, th = 0.2, -1.1, math.pi / 6
    out = ca.beam_splitter(S.coherent(alpha - d, (alpha - d) * math.tan(th)), 0, 1, th)
    assert out.labels[0, 0] == pytest.approx((alpha - d) / math.cos(th))
    assert out.labels[0, 1] == pytest.approx(0.0, abs=1e-15)


def test_beam_splitter_needs_distinct_modes():
    with pytest.raises(DimensionError):
        ca.beam_splitter(S.coherent(0.0, 0.0), 1, 1, 0.3)


@given(states(num_modes=2), st.floats(-math.pi, math.pi))
def test_beam_splitter_inverse(s, theta):
    back = ca.beam_splitter(ca.beam_splitter(s, 0, 1, theta), 0, 1, -theta)
    assert ca.distance(back, s, tol=1e-9) < 1e-12


@given(states(num_modes=2), states(num_modes=2), amplitudes(2.0), st.floats(-math.pi, math.pi), st.integers(0, 1))
def test_unitaries_preserve_inner_products(s1, s2, g, phi, mode):
    ref = ca.inner_product(s1, s2)
    for op in (
        lambda s: ca.displace(s, mode, g),
        lambda s: ca.phase_delay(s, mode, phi),
        lambda s: ca.beam_splitter(s, 0, 1, phi),
    ):
        assert abs(ca.inner_product(op(s1), op(s2)) - ref) < 1e-12


def test_mode_out_of_range():
    s = S.coherent(0.0, 1.0)
    with pytest.raises(DimensionError):
        ca.displace(s, 2, 0.1)
    with pytest.raises(DimensionError):
        ca.phase_delay(s, -1, 0.1)


# projections


def test_project_coherent_examples():
    a, b = 0.5 - 0.5j, 1.2 + 0.3j
    rest, w = ca.project_coherent(S.coherent(a, b), 1, b)
    assert rest.num_modes == 1
    assert w == pytest.approx(1.0)
    rest, w = ca.project_coherent(S.coherent(a, b), 1, 0.0)
    assert rest.coeffs[0] == pytest.approx(math.exp(-abs(b) ** 2 / 2))
    assert w == pytest.approx(math.exp(-abs(b) ** 2))


def test_project_coherent_needs_two_modes():
    with pytest.raises(DimensionError):
        ca.project_coherent(S.coherent(0.0), 0, 0.0)


def test_exclusion_examples():
    a, d = 0.3 + 0.1j, -0.8
    out = ca.exclusion_project(S.coherent(a + d), a, 0)
    xi = ca.overlap(a, a + d)
    assert out.coeff_of(a + d) == pytest.approx(1.0)
    assert out.coeff_of(a) == pytest.approx(-xi)
    assert out.num_terms == 2
    assert ca.exclusion_project(S.coherent(a), a, 0).norm_squared() < 1e-24


@given(states(max_terms=4), amplitudes(2.5))
def test_exclusion_idempotent(s, a):
    once = ca.exclusion_project(s, a, 0)
    assert once.num_terms <= 2 * s.num_terms
    assert ca.distance(once, ca.exclusion_project(once, a, 0)) < 1e-12


def test_parity_examples():
    _, w = ca.parity_project(S.coherent(0.0), 0, "odd")
    assert w == pytest.approx(0.0, abs=1e-30)
    b = 0.9 - 0.6j
    out, w = ca.parity_project(S.coherent(b), 0, ParityOutcome.ZERO)
    assert out.coeff_of(0.0) == pytest.approx(math.exp(-abs(b) ** 2 / 2))
    assert w == pytest.approx(math.exp(-abs(b) ** 2))
    _, w = ca.parity_project(S.coherent(b), 0, "even_nonzero")
    x = abs(b) ** 2
    assert w == pytest.approx(math.exp(-x) * (math.cosh(x) - 1), abs=1e-14)


@given(states(num_modes=2, max_terms=4), st.integers(0, 1))
def test_parity_completeness_and_orthogonality(s, mode):
    parts = [ca.parity_project(s, mode, o) for o in ParityOutcome]
    assert sum(w for _, w in parts) == pytest.approx(s.norm_squared(), abs=1e-12)
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(ca.inner_product(parts[i][0], parts[j][0])) < 1e-12
    for o, (p, _) in zip(ParityOutcome, parts):
        again, _ = ca.parity_project(p, mode, o)
        assert ca.distance(again, p, tol=1e-12) < 1e-12


# compaction and factorization


def test_compact_examples():
    a = 0.2 - 0.9j
    out = ca.compact(S.coherent(a) + S.coherent(a))
    assert out.num_terms == 1 and out.coeffs[0] == 2
    assert ca.compact(S.coherent(a) - S.coherent(a)).num_terms == 0
    tiny = S.from_terms([(1.0, [a]), (1e-20, [1.0])])
    assert ca.compact(tiny, tol=1e-15).num_terms == 1


@given(states(max_terms=6, normalized=False), states())
def test_compact_preserves_inner_products(s, probe):
    dup = s + s * 0.5 + S.from_terms([(1e-14, [0.0])])
    ref = ca.inner_product(probe, dup)
    out = ca.compact(dup, tol=1e-12)
    assert abs(ca.inner_product(probe, out) - ref) <= 1e-12 * (np.abs(dup.coeffs).sum() + 1)
    labels = out.labels[:, 0]
    if labels.size > 1:
        gaps = np.abs(labels[:, None] - labels[None, :]) + np.eye(labels.size)
        assert gaps.min() >= 1e-12


def test_factorize_product_state():
    s = ca.tensor(S.from_terms([(1, [0.5]), (-0.3, [-1.0])]), S.from_terms([(1, [0.2j]), (0.7, [1.0])]))
    rest, factor, fid = ca.factorize(s, 1)
    assert fid == pytest.approx(1.0, abs=1e-12)
    assert ca.distance(ca.compact(ca.tensor(rest, factor)), ca.compact(s), tol=1e-12) < 1e-12


def test_factorize_reports_entanglement():
    s = S.coherent(1.0, 1.0) + S.coherent(-1.0, -1.0)
    _, _, fid = ca.factorize(s, 1)
    assert fid < 0.5


def test_permute_and_tensor():
    s = ca.tensor(S.coherent(1.0), S.coherent(2.0, 3.0))
    assert s.labels[0] == pytest.approx([1, 2, 3])
    assert ca.permute_modes(s, [2, 0, 1]).labels[0] == pytest.approx([3, 1, 2])
    with pytest.raises(DimensionError):
        ca.permute_modes(s, [0, 0, 1])


def test_cat_descriptor_fields():
    from hhgcat.schemes import hhg_cat

    cat = hhg_cat(0.0, 1.0)
    assert isinstance(cat, CatDescriptor)
    assert cat.xi == pytest.approx(math.exp(-0.5))
    assert cat.state.norm_squared() == pytest.approx(1 - math.exp(-1), abs=1e-14)


# mutation: a corrupted Weyl phase must be caught by the unitarity check


def test_corrupted_weyl_phase_breaks_unitarity(monkeypatch):
    from hhgcat.check import unitarity_suite

    assert unitarity_suite(10)["displace"] < 1e-12
    monkeypatch.setattr(ca, "weyl_phase", lambda g, a: np.exp(0.5 * (g * np.conj(a) + np.conj(g) * a)))
    assert unitarity_suite(10)["displace"] > 1e-3
