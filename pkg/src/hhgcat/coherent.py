"""Finite superpositions of multimode coherent states.

A state is stored as a coefficient vector ``coeffs`` of shape ``(T,)`` and a
label matrix ``labels`` of shape ``(T, M)``, one row of coherent amplitudes
per term.  Every optical element used by the schemes maps coherent products
to coherent products, so all operations here are exact up to floating point.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ZeroStateError

MERGE_TOL = 1e-12
ZERO_NORM_TOL = 1e-24


class ParityOutcome(str, Enum):
    """Photon-count classes of the heralding POVM."""

    ZERO = "zero"
    EVEN = "even_nonzero"
    ODD = "odd"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateSuperposition:
    """Weighted sum of coherent-state products, ``sum_k c_k |a_k1>...|a_kM>``."""

    coeffs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex).reshape(-1)
        labels = np.array(self.labels, dtype=complex)
        if labels.ndim != 2:
            raise DimensionError("labels must be a (terms, modes) array")
        if labels.shape[0] != coeffs.shape[0]:
            raise DimensionError(
                f"{coeffs.shape[0]} coefficients but {labels.shape[0]} label rows"
            )
        if labels.shape[1] < 1:
            raise DimensionError("a state needs at least one mode")
        if not (np.all(np.isfinite(coeffs)) and np.all(np.isfinite(labels))):
            raise ValueError("coefficients and labels must be finite")
        object.__setattr__(self, "coeffs", _frozen(coeffs))
        object.__setattr__(self, "labels", _frozen(labels))

    # constructors

    @classmethod
    def coherent(cls, *labels: complex, coeff: complex = 1.0) -> "StateSuperposition":
        """Single product state ``coeff * |labels[0]>|labels[1]>...``."""
        return cls(np.array([coeff]), np.array([labels], dtype=complex))

    @classmethod
    def empty(cls, num_modes: int) -> "StateSuperposition":
        return cls(np.zeros(0, dtype=complex), np.zeros((0, num_modes), dtype=complex))

    @classmethod
    def from_terms(
        cls, terms: Iterable[tuple[complex, Sequence[complex]]], num_modes: int | None = None
    ) -> "StateSuperposition":
        terms = list(terms)
        if not terms:
            if num_modes is None:
                raise DimensionError("num_modes is required for an empty term list")
            return cls.empty(num_modes)
        coeffs = [c for c, _ in terms]
        labels = [list(lab) for _, lab in terms]
        widths = {len(lab) for lab in labels}
        if len(widths) != 1 or (num_modes is not None and widths != {num_modes}):
            raise DimensionError("all terms must have the same number of modes")
        return cls(np.array(coeffs), np.array(labels, dtype=complex))

    # basic properties

    @property
    def num_modes(self) -> int:
        return self.labels.shape[1]

    @property
    def num_terms(self) -> int:
        return self.coeffs.shape[0]

    @property
    def terms(self) -> list[tuple[complex, tuple[complex, ...]]]:
        return [(complex(c), tuple(complex(x) for x in row)) for c, row in zip(self.coeffs, self.labels)]

    def norm_squared(self) -> float:
        return inner_product(self, self).real

    def coeff_of(self, *label: complex, tol: float = 1e-9) -> complex:
        """Summed coefficient of all terms whose labels lie within ``tol`` of ``label``."""
        target = np.asarray(label, dtype=complex)
        hit = np.max(np.abs(self.labels - target), axis=1) < tol
        return complex(self.coeffs[hit].sum())

    # arithmetic

    def _check_same(self, other: "StateSuperposition"):
        if other.num_modes != self.num_modes:
            raise DimensionError(f"mode counts differ: {self.num_modes} vs {other.num_modes}")

    def __add__(self, other: "StateSuperposition") -> "StateSuperposition":
        if not isinstance(other, StateSuperposition):
            return NotImplemented
        self._check_same(other)
        return StateSuperposition(
            np.concatenate([self.coeffs, other.coeffs]),
            np.concatenate([self.labels, other.labels]),
        )

    def __neg__(self) -> "StateSuperposition":
        return StateSuperposition(-self.coeffs, self.labels)

    def __sub__(self, other: "StateSuperposition") -> "StateSuperposition":
        if not isinstance(other, StateSuperposition):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: complex) -> "StateSuperposition":
        if not np.isscalar(scalar):
            return NotImplemented
        return StateSuperposition(self.coeffs * scalar, self.labels)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "StateSuperposition":
        return self * (1.0 / scalar)

    def __repr__(self) -> str:
        body = " + ".join(
            f"({c:.6g})|" + ",".join(f"{x:.6g}" for x in lab) + ">" for c, lab in self.terms
        )
        return f"StateSuperposition[{self.num_modes}]({body or '0'})"

    # serialization

    def to_dict(self) -> dict:
        return {
            "modes": self.num_modes,
            "terms": [
                {
                    "coeff": [float(c.real), float(c.imag)],
                    "labels": [[float(x.real), float(x.imag)] for x in row],
                }
                for c, row in zip(self.coeffs, self.labels)
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StateSuperposition":
        modes = int(doc["modes"])
        terms = []
        for t in doc["terms"]:
            re, im = t["coeff"]
            labs = [complex(a, b) for a, b in t["labels"]]
            terms.append((complex(re, im), labs))
        return cls.from_terms(terms, num_modes=modes)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "StateSuperposition":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CatDescriptor:
    """Record of one conditioned high-harmonic shift ``|a+d> - xi |a>``."""

    alpha: complex
    delta_alpha: complex
    xi: complex
    state: StateSuperposition


# kernels


def overlap(a, b):
    """Coherent-state overlap ``<a|b>``; broadcasts over arrays.

    Written as ``exp(-|a-b|^2/2 + i Im(a* b))`` which has the same value as the
    textbook form but never exponentiates large cancelling terms.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.exp(-0.5 * np.abs(a - b) ** 2 + 1j * np.imag(np.conj(a) * b))
    return complex(out) if out.ndim == 0 else out


def weyl_phase(gamma, alpha):
    """Phase picked up by ``|alpha>`` under ``D(gamma)``."""
    return np.exp(0.5 * (gamma * np.conj(alpha) - np.conj(gamma) * alpha))


def _check_mode(s: StateSuperposition, mode: int):
    if not 0 <= mode < s.num_modes:
        raise DimensionError(f"mode {mode} out of range for a {s.num_modes}-mode state")


def _with_column(labels: np.ndarray, mode: int, column) -> np.ndarray:
    out = labels.copy()
    out[:, mode] = column
    return out


# operations


def inner_product(s1: StateSuperposition, s2: StateSuperposition) -> complex:
    """``<s1|s2>`` expanded term by term over coherent overlaps."""
    s1._check_same(s2)
    if s1.num_terms == 0 or s2.num_terms == 0:
        return 0j
    kernel = overlap(s1.labels[:, None, :], s2.labels[None, :, :]).prod(axis=-1)
    return complex(np.conj(s1.coeffs) @ kernel @ s2.coeffs)


def distance(s1: StateSuperposition, s2: StateSuperposition, tol: float = MERGE_TOL) -> float:
    """Upper bound on ``||s1 - s2||``: summed coefficient moduli of the merged difference.

    Coherent states have unit norm, so the bound follows from the triangle
    inequality and avoids the cancellation of expanding ``<d|d>``.
    """
    return float(np.abs(compact(s1 - s2, tol, drop=0.0).coeffs).sum())


def normalize(s: StateSuperposition, tol: float = ZERO_NORM_TOL) -> StateSuperposition:
    n2 = s.norm_squared()
    if not n2 > tol:
        raise ZeroStateError(f"state has squared norm {n2:.3e}, below {tol:.1e}")
    return s * (1.0 / np.sqrt(n2))


def displace(s: StateSuperposition, mode: int, gamma: complex) -> StateSuperposition:
    """Apply ``D(gamma)`` to one mode."""
    _check_mode(s, mode)
    col = s.labels[:, mode]
    coeffs = s.coeffs * weyl_phase(gamma, col)
    return StateSuperposition(coeffs, _with_column(s.labels, mode, col + gamma))


def phase_delay(s: StateSuperposition, mode: int, phi: float) -> StateSuperposition:
    _check_mode(s, mode)
    return StateSuperposition(
        s.coeffs, _with_column(s.labels, mode, s.labels[:, mode] * np.exp(1j * phi))
    )


def beam_splitter(s: StateSuperposition, mode_i: int, mode_j: int, theta: float) -> StateSuperposition:
    """Mix two modes: ``(u, v) -> (u cos + v sin, -u sin + v cos)``."""
    _check_mode(s, mode_i)
    _check_mode(s, mode_j)
    if mode_i == mode_j:
        raise DimensionError("beam splitter needs two distinct modes")
    c, sn = np.cos(theta), np.sin(theta)
    u = s.labels[:, mode_i]
    v = s.labels[:, mode_j]
    labels = s.labels.copy()
    labels[:, mode_i] = u * c + v * sn
    labels[:, mode_j] = -u * sn + v * c
    return StateSuperposition(s.coeffs, labels)


def tensor(s1: StateSuperposition, s2: StateSuperposition) -> StateSuperposition:
    """Product state with the modes of ``s1`` followed by those of ``s2``."""
    i, j = np.meshgrid(np.arange(s1.num_terms), np.arange(s2.num_terms), indexing="ij")
    i, j = i.ravel(), j.ravel()
    return StateSuperposition(
        s1.coeffs[i] * s2.coeffs[j], np.concatenate([s1.labels[i], s2.labels[j]], axis=1)
    )


def permute_modes(s: StateSuperposition, order: Sequence[int]) -> StateSuperposition:
    if sorted(order) != list(range(s.num_modes)):
        raise DimensionError(f"{order} is not a permutation of {s.num_modes} modes")
    return StateSuperposition(s.coeffs, s.labels[:, list(order)])


def project_coherent(
    s: StateSuperposition, mode: int, beta: complex
) -> tuple[StateSuperposition, float]:
    """Contract one mode with ``<beta|`` and drop it.

    Returns the unnormalized remainder and its squared norm.
    """
    _check_mode(s, mode)
    if s.num_modes < 2:
        raise DimensionError("projection would leave no modes")
    coeffs = s.coeffs * overlap(beta, s.labels[:, mode])
    rest = StateSuperposition(coeffs, np.delete(s.labels, mode, axis=1))
    return rest, rest.norm_squared()


def exclusion_project(s: StateSuperposition, alpha: complex, mode: int) -> StateSuperposition:
    """Apply ``1 - |alpha><alpha|`` on one mode, keeping the mode."""
    _check_mode(s, mode)
    removed = StateSuperposition(
        -s.coeffs * overlap(alpha, s.labels[:, mode]),
        _with_column(s.labels, mode, alpha),
    )
    return compact(s + removed)


def parity_project(
    s: StateSuperposition, mode: int, outcome: ParityOutcome | str
) -> tuple[StateSuperposition, float]:
    """Project one mode onto vacuum, nonzero even, or odd photon number.

    The even/odd projectors are realized on coherent labels through
    ``(|b> +- |-b>)/2``; the vacuum component is subtracted for the even class.
    The mode stays in the state (collapsed).
    """
    _check_mode(s, mode)
    outcome = ParityOutcome(outcome)
    col = s.labels[:, mode]
    vac = overlap(0.0, col)
    if outcome is ParityOutcome.ZERO:
        out = StateSuperposition(s.coeffs * vac, _with_column(s.labels, mode, 0.0))
    else:
        sign = 1.0 if outcome is ParityOutcome.EVEN else -1.0
        plus = StateSuperposition(0.5 * s.coeffs, s.labels)
        minus = StateSuperposition(0.5 * sign * s.coeffs, _with_column(s.labels, mode, -col))
        out = plus + minus
        if outcome is ParityOutcome.EVEN:
            out = out + StateSuperposition(-s.coeffs * vac, _with_column(s.labels, mode, 0.0))
    out = compact(out)
    return out, max(out.norm_squared(), 0.0)


def compact(s: StateSuperposition, tol: float = MERGE_TOL, drop: float | None = None) -> StateSuperposition:
    """Merge terms with labels closer than ``tol`` (max norm), then drop terms with ``|c| < drop``.

    ``drop`` defaults to ``tol``.
    """
    drop = tol if drop is None else drop
    reps: list[np.ndarray] = []
    sums: list[complex] = []
    for c, row in zip(s.coeffs, s.labels):
        for k, rep in enumerate(reps):
            if np.max(np.abs(rep - row)) < tol:
                sums[k] += c
                break
        else:
            reps.append(row)
            sums.append(complex(c))
    keep = [k for k, c in enumerate(sums) if abs(c) >= drop and c != 0]
    if not keep:
        return StateSuperposition.empty(s.num_modes)
    return StateSuperposition(np.array([sums[k] for k in keep]), np.array([reps[k] for k in keep]))


def _proportional(a: StateSuperposition, b: StateSuperposition, rtol: float = 1e-12) -> complex | None:
    """``lam`` with ``b == lam * a`` term by term on matching labels, else ``None``."""
    if a.num_terms != b.num_terms or a.num_terms == 0:
        return None
    order = []
    for row in b.labels:
        hit = np.flatnonzero(np.max(np.abs(a.labels - row), axis=1) < MERGE_TOL)
        if hit.size != 1:
            return None
        order.append(int(hit[0]))
    if len(set(order)) != len(order):
        return None
    ca = a.coeffs[order]
    lam = complex(np.vdot(ca, b.coeffs) / np.vdot(ca, ca))
    if np.linalg.norm(b.coeffs - lam * ca) > rtol * np.linalg.norm(b.coeffs):
        return None
    return lam


def factorize(
    s: StateSuperposition, mode: int, tol: float = ZERO_NORM_TOL
) -> tuple[StateSuperposition, StateSuperposition, float]:
    """Split ``s`` into ``rest (x) factor`` across ``mode``.

    Terms are grouped by their labels on the other modes; each group carries a
    conditional state of ``mode``.  Returns ``(rest, factor, min_fidelity)``
    where ``factor`` is normalized and ``min_fidelity`` is the smallest fidelity
    between any conditional state and ``factor`` (1 for a product state).
    """
    _check_mode(s, mode)
    if s.num_modes < 2:
        raise DimensionError("need at least two modes to factorize")
    s = compact(s)
    others = np.delete(s.labels, mode, axis=1)
    groups: list[tuple[np.ndarray, list[int]]] = []
    for k, row in enumerate(others):
        for rep, members in groups:
            if np.max(np.abs(rep - row)) < MERGE_TOL:
                members.append(k)
                break
        else:
            groups.append((row, [k]))

    conditionals = []
    for rep, members in groups:
        cond = StateSuperposition(s.coeffs[members], s.labels[members][:, [mode]])
        n2 = cond.norm_squared()
        if n2 > tol:
            conditionals.append((rep, cond, n2))
    if not conditionals:
        raise ZeroStateError("state has no non-vanishing branch to factorize")

    ref_raw = max(conditionals, key=lambda t: t[2])[1]
    ref = normalize(ref_raw)
    ref_norm = float(np.sqrt(ref_raw.norm_squared()))
    fid = 1.0
    rest_terms = []
    for rep, cond, n2 in conditionals:
        lam = _proportional(ref_raw, cond)
        if lam is not None:
            # exact multiple: skip the overlap sums, which cancel badly for tiny factors
            amp = lam * ref_norm
        else:
            amp = inner_product(ref, cond)
            fid = min(fid, abs(amp) ** 2 / n2)
        rest_terms.append((amp, rep))
    rest = StateSuperposition.from_terms(rest_terms, num_modes=s.num_modes - 1)
    return rest, ref, fid
