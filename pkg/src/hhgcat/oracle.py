"""Cross-representation checks: coherent algebra against the Fock oracle.

Each ``compare_*`` helper returns the largest absolute deviation between the
two representations for one randomized instance.  The ``fock_*`` pipelines
rebuild every scheme from number-basis matrices alone.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from . import coherent as ca
from . import fock as fk
from .coherent import ParityOutcome, StateSuperposition
from .errors import TruncationWarning
from .schemes import (
    ANCILLA_MODE,
    CAT_MODE,
    HERALD_MODE,
    SQRT2,
    SchemeConfig,
    herald_amplitudes,
)


def random_state(rng: np.random.Generator, num_modes: int, max_terms: int = 6, radius: float = 2.5) -> StateSuperposition:
    """Normalized superposition with labels uniform in the disk ``|a| <= radius``."""
    n = int(rng.integers(1, max_terms + 1))
    r = radius * np.sqrt(rng.random((n, num_modes)))
    labels = r * np.exp(2j * np.pi * rng.random((n, num_modes)))
    coeffs = rng.normal(size=n) + 1j * rng.normal(size=n)
    return ca.normalize(StateSuperposition(coeffs, labels))


def random_amplitude(rng: np.random.Generator, radius: float) -> complex:
    return complex(radius * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))


def _dev(s: StateSuperposition, v: fk.FockVector) -> float:
    return float(np.abs(fk.encode(s, v.truncation, tail_bound=np.inf).amplitudes - v.amplitudes).max())


def compare_operations(s: StateSuperposition, rng: np.random.Generator, N: int = fk.DEFAULT_TRUNCATION) -> dict[str, float]:
    """Run every coherent-algebra operation on ``s`` and its Fock encoding."""
    out: dict[str, float] = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        v = fk.encode(s, N)
        M = s.num_modes
        mode = int(rng.integers(M))

        a, b = random_amplitude(rng, 2.5), random_amplitude(rng, 2.5)
        out["overlap"] = abs(ca.overlap(a, b) - np.vdot(fk.coherent_vector(a, N), fk.coherent_vector(b, N)))

        other = random_state(rng, M)
        out["inner_product"] = abs(ca.inner_product(other, s) - fk.fock_inner(fk.encode(other, N), v))

        scaled = s * complex(rng.normal() + 1j * rng.normal())
        out["normalize"] = _dev(ca.normalize(scaled), fk.fock_normalize(fk.encode(scaled, N)))

        gamma = random_amplitude(rng, 1.0)
        out["displace"] = _dev(ca.displace(s, mode, gamma), fk.fock_apply(fk.FockOp("displace", gamma), v, mode))

        phi = float(rng.uniform(-np.pi, np.pi))
        out["phase_delay"] = _dev(ca.phase_delay(s, mode, phi), fk.fock_apply(fk.FockOp("phase", phi), v, mode))

        beta = random_amplitude(rng, 2.5)
        if rng.random() < 0.5:
            beta = complex(s.labels[0, mode])
        out["exclusion_project"] = _dev(
            ca.exclusion_project(s, beta, mode), fk.fock_apply(fk.FockOp("exclusion", beta), v, mode)
        )

        dev = 0.0
        for o in ParityOutcome:
            cs, cw = ca.parity_project(s, mode, o)
            fv, fw = fk.fock_parity_project(v, mode, o)
            dev = max(dev, _dev(cs, fv), abs(cw - fw))
        out["parity_project"] = dev

        doubled = ca.compact(s + s + s * 1e-20)
        out["compact"] = _dev(doubled, fk.FockVector(2 * v.amplitudes))

        if M >= 2:
            i, j = rng.choice(M, size=2, replace=False)
            theta = float(rng.uniform(0, np.pi))
            out["beam_splitter"] = _dev(
                ca.beam_splitter(s, int(i), int(j), theta),
                fk.fock_apply(fk.FockOp("beam_splitter", theta), v, [int(i), int(j)]),
            )
            cs, cw = ca.project_coherent(s, mode, beta)
            fv, fw = fk.fock_project_coherent(v, mode, beta)
            out["project_coherent"] = max(_dev(cs, fv), abs(cw - fw))
    return out


def unitarity_deviation(s1: StateSuperposition, s2: StateSuperposition, rng: np.random.Generator) -> dict[str, float]:
    """Change of ``<s1|s2>`` under each unitary element."""
    ref = ca.inner_product(s1, s2)
    mode = int(rng.integers(s1.num_modes))
    gamma = random_amplitude(rng, 2.0)
    phi = float(rng.uniform(-np.pi, np.pi))
    out = {
        "displace": abs(ca.inner_product(ca.displace(s1, mode, gamma), ca.displace(s2, mode, gamma)) - ref),
        "phase_delay": abs(ca.inner_product(ca.phase_delay(s1, mode, phi), ca.phase_delay(s2, mode, phi)) - ref),
    }
    if s1.num_modes >= 2:
        theta = float(rng.uniform(0, np.pi))
        out["beam_splitter"] = abs(
            ca.inner_product(ca.beam_splitter(s1, 0, 1, theta), ca.beam_splitter(s2, 0, 1, theta)) - ref
        )
    return out


# Fock-only pipelines


def _coh(alpha: complex, N: int) -> fk.FockVector:
    return fk.FockVector(fk.coherent_vector(alpha, N))


def _op(kind, param, v, modes):
    return fk.fock_apply(fk.FockOp(kind, param), v, modes)


def fock_interferometer(cfg: SchemeConfig, N: int) -> fk.FockVector:
    """Unnormalized two-mode interferometer output as ``(signal, herald)``."""
    a, d = cfg.alpha, cfg.delta_alpha
    v = fk.FockVector(np.multiply.outer(fk.coherent_vector(SQRT2 * a, N), fk.coherent_vector(0.0, N)))
    v = _op("beam_splitter", math.pi / 4, v, [0, 1])
    v = _op("exclusion", a, _op("displace", d, v, 0), 0)
    v = _op("exclusion", -a, _op("displace", -d, v, 1), 1)
    v = _op("phase", math.pi + cfg.phi_delay, v, 1)
    v = _op("beam_splitter", math.pi / 4, v, [0, 1])
    return fk.FockVector(v.amplitudes.T)


def fock_measurement_probabilities(two_mode: fk.FockVector, cfg: SchemeConfig) -> dict[str, float]:
    psi = fk.fock_normalize(two_mode)
    w = {k: fk.fock_project_coherent(psi, HERALD_MODE, b)[1] for k, b in herald_amplitudes(cfg).items()}
    total = sum(w.values())
    return {k: x / total for k, x in w.items()}


def fock_sequential(cfg: SchemeConfig, N: int) -> fk.FockVector:
    a = cfg.alpha
    v = _coh(a, N)
    v = _op("displace", cfg.delta_alpha, v, 0)
    v = _op("displace", cfg.second_shift, v, 0)
    v = _op("exclusion", a + cfg.delta_alpha, v, 0)
    if cfg.gamma is not None:
        v = _op("displace", cfg.gamma, v, 0)
    return _op("exclusion", a, v, 0)


def fock_enlarge(three: fk.FockVector, cfg: SchemeConfig, outcome) -> tuple[np.ndarray, dict[str, float]]:
    """Reduced cat density matrix for ``outcome`` and all three herald probabilities."""
    N = three.truncation
    psi = fk.fock_normalize(three)
    two = fk.FockVector(np.multiply.outer(psi.amplitudes, fk.coherent_vector(cfg.ancilla_amplitude, N)))
    two = _op("beam_splitter", cfg.theta, two, [CAT_MODE, ANCILLA_MODE])
    weights = {o.value: fk.fock_parity_project(two, ANCILLA_MODE, o)[1] for o in ParityOutcome}
    total = sum(weights.values())
    proj, w = fk.fock_parity_project(two, ANCILLA_MODE, outcome)
    rho = fk.reduced_density(proj, CAT_MODE) / w
    return rho, {k: x / total for k, x in weights.items()}
