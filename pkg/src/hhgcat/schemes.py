"""Conditioned high-harmonic pipelines producing three-component and enlarged cats.

Mode conventions:

* interferometer output: mode 0 carries the small-amplitude signal branch
  ``{0, +-d/sqrt(2)}``, mode 1 the herald branch that is measured.
* enlargement: mode 0 is the cat, mode 1 the ancilla that is parity-heralded.

An HHG shift is modelled as a displacement of the driving mode, and the
harmonic conditioning as ``1 - |a0><a0|`` with ``a0`` the amplitude that drove
that medium.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .coherent import (
    ZERO_NORM_TOL,
    CatDescriptor,
    ParityOutcome,
    StateSuperposition,
    beam_splitter,
    compact,
    displace,
    exclusion_project,
    factorize,
    normalize,
    overlap,
    parity_project,
    permute_modes,
    phase_delay,
    project_coherent,
    tensor,
)
from .errors import DegenerateMeasurementError, ZeroStateError

SQRT2 = math.sqrt(2.0)
MEASUREMENTS = ("M1", "M2", "M3")
SEPARABILITY_TOL = 1e-9
OUTCOMES = tuple(ParityOutcome)

SIGNAL_MODE, HERALD_MODE = 0, 1
CAT_MODE, ANCILLA_MODE = 0, 1


@dataclass(frozen=True)
class SchemeConfig:
    """Parameters shared by all pipelines.

    ``amplification_gamma`` of ``None`` means ``-3 * delta_alpha`` when
    ``amplify`` is set; ``ancilla`` of ``None`` selects ``(alpha - d) tan(theta)``.
    """

    alpha: complex = 0.0
    delta_alpha: complex = -1.0
    delta_alpha_2: complex | None = None
    theta: float = math.pi / 6
    phi_delay: float = 0.0
    amplify: bool = True
    amplification_gamma: complex | None = None
    ancilla: complex | None = None

    def __post_init__(self):
        if not 0.0 < self.theta <= math.pi / 2 + 1e-15:
            raise ValueError(f"theta must lie in (0, pi/2], got {self.theta}")

    @property
    def second_shift(self) -> complex:
        return self.delta_alpha if self.delta_alpha_2 is None else self.delta_alpha_2

    @property
    def gamma(self) -> complex | None:
        if not self.amplify:
            return None
        if self.amplification_gamma is not None:
            return self.amplification_gamma
        return -3.0 * self.delta_alpha

    @property
    def ancilla_amplitude(self) -> complex:
        if self.ancilla is not None:
            return self.ancilla
        return (self.alpha - self.delta_alpha) * math.tan(self.theta)


@dataclass(frozen=True)
class InterferometerOutcome:
    conditioned_state: StateSuperposition
    a_coeff: complex
    b_coeff: complex
    probability: float
    measurement_index: str
    raw_weight: float = 0.0
    raw_weights: tuple = ()


@dataclass(frozen=True)
class EnlargeOutcome:
    cat_state: StateSuperposition
    herald_outcome: ParityOutcome
    probability: float
    separation: float
    weight: float = 0.0
    weights: dict = field(default_factory=dict)
    branch_fidelity: float = 1.0
    ancilla_state: StateSuperposition | None = None


def _nonzero(s: StateSuperposition, what: str) -> StateSuperposition:
    s = compact(s)
    if not s.norm_squared() > ZERO_NORM_TOL:
        raise ZeroStateError(f"{what} produced a zero-norm state")
    return s


# QHHG source


def hhg_cat(alpha: complex, delta_alpha: complex) -> CatDescriptor:
    """Conditioned HHG output ``|a + d> - xi |a>`` with ``xi = <a|a + d>``."""
    if delta_alpha == 0:
        raise ZeroStateError("zero shift: the conditioning annihilates the state")
    xi = overlap(alpha, alpha + delta_alpha)
    state = StateSuperposition.from_terms([(1.0, [alpha + delta_alpha]), (-xi, [alpha])])
    _nonzero(state, "hhg_cat")
    return CatDescriptor(complex(alpha), complex(delta_alpha), xi, state)


def qhhg_element(s: StateSuperposition, mode: int, drive: complex, shift: complex) -> StateSuperposition:
    """Shift ``mode`` by ``shift`` and condition on harmonics generated from ``|drive>``."""
    return exclusion_project(displace(s, mode, shift), drive, mode)


# interferometer


def interferometer_pipeline(cfg: SchemeConfig) -> StateSuperposition:
    """Two-mode state after BS1, an HHG element per arm, the delays and BS2.

    The result is unnormalized with unit weight on ``|0>|sqrt2 (a + d)>``.
    Arm 2 receives ``|-a>``; its shift is ``-d`` and its conditioning projector
    excludes ``|-a>``.  The mirror path adds a phase of pi on top of
    ``cfg.phi_delay``.
    """
    a, d = cfg.alpha, cfg.delta_alpha
    if d == 0:
        raise ZeroStateError("zero shift: both arm projections annihilate the state")
    s = StateSuperposition.coherent(SQRT2 * a, 0.0)
    s = beam_splitter(s, 0, 1, math.pi / 4)
    s = qhhg_element(s, 0, a, d)
    s = qhhg_element(s, 1, -a, -d)
    s = phase_delay(s, 1, math.pi + cfg.phi_delay)
    s = beam_splitter(s, 0, 1, math.pi / 4)
    # BS2 puts the herald branch in its first output; relabel to (signal, herald)
    return permute_modes(s, [1, 0])


def herald_amplitudes(cfg: SchemeConfig) -> dict[str, complex]:
    a, d = cfg.alpha, cfg.delta_alpha
    return {"M1": SQRT2 * (a + d), "M2": SQRT2 * (a + d / 2), "M3": SQRT2 * a}


def measurement_weights(two_mode: StateSuperposition, cfg: SchemeConfig) -> dict[str, float]:
    """Squared norms after projecting the normalized herald mode on each candidate."""
    psi = normalize(compact(two_mode))
    return {
        k: project_coherent(psi, HERALD_MODE, beta)[1] for k, beta in herald_amplitudes(cfg).items()
    }


def interferometer_condition(two_mode: StateSuperposition, which: str, cfg: SchemeConfig) -> InterferometerOutcome:
    """Herald one of the three coherent outcomes and return the signal state.

    Probabilities are the three raw weights renormalized to sum to one.
    ``a_coeff``/``b_coeff`` refer to the unnormalized pipeline output.
    """
    if which not in MEASUREMENTS:
        raise ValueError(f"measurement must be one of {MEASUREMENTS}, got {which!r}")
    weights = measurement_weights(two_mode, cfg)
    total = sum(weights.values())
    if not total > ZERO_NORM_TOL:
        raise ZeroStateError("all herald outcomes have vanishing weight")
    beta = herald_amplitudes(cfg)[which]
    raw, _ = project_coherent(compact(two_mode), HERALD_MODE, beta)
    raw = compact(raw)
    dt = cfg.delta_alpha / SQRT2
    a_coeff = raw.coeff_of(0.0)
    b_coeff = raw.coeff_of(dt)
    return InterferometerOutcome(
        conditioned_state=normalize(raw),
        a_coeff=a_coeff,
        b_coeff=b_coeff,
        probability=weights[which] / total,
        measurement_index=which,
        raw_weight=weights[which],
        raw_weights=tuple(weights[k] for k in MEASUREMENTS),
    )


SWEEP_COLUMNS_INTERFEROMETER = ("abs_delta_alpha_tilde", "P_M1", "P_M2", "P_M3", "W_M1", "W_M2", "W_M3")


def measurement_sweep(cfg: SchemeConfig, delta_range) -> list[dict]:
    """Renormalized and raw herald probabilities versus ``|d|/sqrt(2)``.

    Each entry of ``delta_range`` is a magnitude; the shift keeps the sign of
    ``cfg.delta_alpha``.
    """
    sign = -1.0 if np.real(cfg.delta_alpha) < 0 else 1.0
    rows = []
    for t in delta_range:
        if t == 0:
            raise ValueError("sweep range must exclude zero")
        c = replace(cfg, delta_alpha=sign * SQRT2 * abs(t))
        w = measurement_weights(interferometer_pipeline(c), c)
        total = sum(w.values())
        row = {"abs_delta_alpha_tilde": abs(t)}
        row.update({f"P_{k}": w[k] / total for k in MEASUREMENTS})
        row.update({f"W_{k}": w[k] for k in MEASUREMENTS})
        rows.append(row)
    return rows


# sequential conditioning


def sequential_pipeline(cfg: SchemeConfig) -> StateSuperposition:
    """Two HHG media on one mode, optional amplification, then both conditionings.

    With equal shifts ``d`` and ``gamma = -3d`` this yields
    ``-xi1' |a> + |a - d> - xi2 |a - 2d>`` (unnormalized).
    """
    a, d1, d2 = cfg.alpha, cfg.delta_alpha, cfg.second_shift
    if d1 == 0 or d2 == 0:
        raise ZeroStateError("zero shift in a conditioning stage")
    s = StateSuperposition.coherent(a)
    s = displace(s, 0, d1)
    s = compact(exclusion_project(displace(s, 0, d2), a + d1, 0))
    if cfg.gamma is not None:
        s = compact(displace(s, 0, cfg.gamma))
    s = exclusion_project(s, a, 0)
    return _nonzero(s, "sequential_pipeline")


def sequential_coefficients(alpha: float, delta_alpha: float) -> dict[str, complex]:
    """Closed-form ``xi2`` and ``xi1'`` of the amplified sequential state."""
    xi2 = overlap(alpha + delta_alpha, alpha + 2 * delta_alpha)
    xi1p = xi2 * (1 - overlap(alpha, alpha - 2 * delta_alpha))
    return {"xi2": xi2, "xi1_prime": xi1p}


# enlargement


def enlarge_pipeline(
    three_state: StateSuperposition, cfg: SchemeConfig, outcome: ParityOutcome | str
) -> EnlargeOutcome:
    """Mix the three-component state with an ancilla and herald its photon parity."""
    outcome = ParityOutcome(outcome)
    if cfg.delta_alpha == 0:
        raise DegenerateMeasurementError("zero shift: no cat is generated and the herald diverges")
    psi = normalize(compact(three_state))
    two = tensor(psi, StateSuperposition.coherent(cfg.ancilla_amplitude))
    two = compact(beam_splitter(two, CAT_MODE, ANCILLA_MODE, cfg.theta))

    projected = {o: parity_project(two, ANCILLA_MODE, o) for o in OUTCOMES}
    weights = {o.value: w for o, (_, w) in projected.items()}
    total = sum(weights.values())
    state, weight = projected[outcome]
    if not weight > ZERO_NORM_TOL:
        raise ZeroStateError(f"outcome {outcome.value} has vanishing weight {weight:.3e}")

    cat, ancilla, fid = factorize(state, ANCILLA_MODE)
    if fid < 1.0 - SEPARABILITY_TOL:
        raise RuntimeError(f"heralded state is not a product state (branch fidelity {fid:.3e})")
    cat = normalize(compact(cat))
    labels = cat.labels[:, 0]
    sep = float(np.max(np.abs(labels[:, None] - labels[None, :]))) if labels.size > 1 else 0.0
    return EnlargeOutcome(
        cat_state=cat,
        herald_outcome=outcome,
        probability=weight / total,
        separation=sep,
        weight=weight,
        weights=weights,
        branch_fidelity=fid,
        ancilla_state=ancilla,
    )


def enlarge_config(abs_delta_tilde: float, theta: float, alpha_tilde: complex = 0.0, sign: float = -1.0) -> SchemeConfig:
    """Config whose enlarged cat has ``|d cos(theta)| = abs_delta_tilde`` and centre ``alpha_tilde``."""
    c = math.cos(theta)
    d = sign * abs_delta_tilde / c
    return SchemeConfig(alpha=alpha_tilde * c + d, delta_alpha=d, theta=theta)


SWEEP_COLUMNS_ENLARGE = ("theta", "abs_delta_alpha_tilde", "delta_alpha", "P_outcome", "P_zero", "P_even_nonzero", "P_odd")


def enlarge_sweep(cfg: SchemeConfig, theta_set, delta_range, outcome: ParityOutcome | str, alpha_tilde: complex = 0.0) -> list[dict]:
    """Herald probabilities of the enlarged cat versus ``|d cos(theta)|``.

    The three-component input is the amplified sequential state built from
    each point's ``(alpha, d)``.
    """
    outcome = ParityOutcome(outcome)
    sign = -1.0 if np.real(cfg.delta_alpha) < 0 else 1.0
    rows = []
    for theta in theta_set:
        for t in delta_range:
            if t == 0:
                raise ValueError("sweep range must exclude zero")
            c = replace(enlarge_config(t, theta, alpha_tilde, sign), ancilla=cfg.ancilla)
            res = enlarge_pipeline(sequential_pipeline(c), c, outcome)
            rows.append(
                {
                    "theta": float(theta),
                    "abs_delta_alpha_tilde": abs(t),
                    "delta_alpha": float(np.real(c.delta_alpha)),
                    "P_outcome": res.probability,
                    **{f"P_{k}": w / sum(res.weights.values()) for k, w in res.weights.items()},
                }
            )
    return rows


def parity_fock_sums(c: complex, terms: int = 200) -> dict[str, float]:
    """Explicit photon-number sums of ``|c>``: vacuum, nonzero even, odd weights."""
    x = abs(c) ** 2
    log_p = [-x + (k * math.log(x) if x > 0 else (0.0 if k == 0 else -math.inf)) - math.lgamma(k + 1) for k in range(terms)]
    p = [math.exp(v) for v in log_p]
    return {
        "zero": p[0],
        "even_nonzero": math.fsum(p[2::2]),
        "odd": math.fsum(p[1::2]),
    }


def closed_form_probabilities(cfg: SchemeConfig) -> dict[str, float]:
    """Herald probabilities from post-measurement norms next to their cosh/sinh closed forms.

    The even/odd factors are evaluated under two readings of their
    argument ``c = d sin(theta)``: unsquared, ``cosh(|c|) - 1`` and ``sinh(|c|)``,
    and squared, ``cosh(|c|^2) - 1`` and ``sinh(|c|^2)``.  Each reading is
    renormalized over the three outcomes.
    """
    three = normalize(sequential_pipeline(cfg))
    norm_based = {o.value: enlarge_pipeline(three, cfg, o).probability for o in OUTCOMES}

    alpha_t = (cfg.alpha - cfg.delta_alpha) / math.cos(cfg.theta)
    dc = cfg.delta_alpha * math.cos(cfg.theta)
    cs = cfg.delta_alpha * math.sin(cfg.theta)
    x1p = -three.coeff_of(cfg.alpha)
    x2 = -three.coeff_of(cfg.alpha - 2 * cfg.delta_alpha)
    mid = three.coeff_of(cfg.alpha - cfg.delta_alpha)
    even_cat = StateSuperposition.from_terms([(-x1p, [alpha_t + dc]), (-x2, [alpha_t - dc])])
    odd_cat = StateSuperposition.from_terms([(x1p, [alpha_t + dc]), (-x2, [alpha_t - dc])])
    vac = overlap(0.0, cs)
    zero_cat = StateSuperposition.from_terms(
        [(-x1p * vac, [alpha_t + dc]), (mid, [alpha_t]), (-x2 * vac, [alpha_t - dc])]
    )
    ne, no, nz = even_cat.norm_squared(), odd_cat.norm_squared(), zero_cat.norm_squared()
    damp = math.exp(-abs(cs) ** 2)
    out = {f"norm_{k}": v for k, v in norm_based.items()}
    for tag, arg in (("unsquared", abs(cs)), ("squared", abs(cs) ** 2)):
        raw = {
            "zero": nz,
            "even_nonzero": ne * damp * (math.cosh(arg) - 1.0),
            "odd": no * damp * math.sinh(arg),
        }
        tot = sum(raw.values())
        out.update({f"formula_{tag}_{k}": v / tot for k, v in raw.items()})
    return out
