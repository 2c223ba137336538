"""Truncated photon-number representation used as an independent oracle.

Everything here is built from ladder-operator matrices and never calls the
closed-form coherent-state identities of :mod:`hhgcat.coherent`.  It is also
the only home for states that are not coherent superpositions (Fock states,
squeezed vacuum).

Quadratures follow ``x = (a + a^dag)/sqrt(2)``, ``p = (a - a^dag)/(i sqrt(2))``
so the vacuum has ``W = exp(-x^2 - p^2)/pi``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .coherent import ParityOutcome, StateSuperposition
from .errors import DimensionError, TruncationWarning

DEFAULT_TRUNCATION = 40
TAIL_MARGIN = 5
TAIL_BOUND = 1e-10
MAX_TRUNCATION = 200


@dataclass(frozen=True, eq=False)
class FockVector:
    """Dense amplitude tensor of shape ``(N+1,) * num_modes``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim < 1 or len(set(amps.shape)) != 1 or amps.shape[0] < 2:
            raise DimensionError(f"amplitude tensor must be hypercubic with side >= 2, got {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def truncation(self) -> int:
        return self.amplitudes.shape[0] - 1

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tail_mass(self, margin: int = TAIL_MARGIN) -> float:
        """Fraction of the squared norm sitting on any photon number above ``N - margin``."""
        total = self.norm_squared()
        if total == 0.0:
            return 0.0
        cut = max(self.truncation - margin, 0)
        kept = self.amplitudes[(slice(0, cut + 1),) * self.num_modes]
        return max(total - float(np.vdot(kept, kept).real), 0.0) / total

    def to_dict(self) -> dict:
        flat = self.amplitudes.reshape(-1)
        return {
            "modes": self.num_modes,
            "truncation": self.truncation,
            "amplitudes": [[float(z.real), float(z.imag)] for z in flat],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FockVector":
        m, n = int(doc["modes"]), int(doc["truncation"])
        flat = np.array([complex(a, b) for a, b in doc["amplitudes"]])
        if flat.size != (n + 1) ** m:
            raise DimensionError(f"expected {(n + 1) ** m} amplitudes, got {flat.size}")
        return cls(flat.reshape((n + 1,) * m))


def _check_truncation(N: int):
    if not 1 <= N <= MAX_TRUNCATION:
        raise ValueError(f"truncation must lie in [1, {MAX_TRUNCATION}], got {N}")


def coherent_vector(alpha: complex, N: int) -> np.ndarray:
    """Amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n <= N``."""
    c = np.empty(N + 1, dtype=complex)
    c[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, N + 1):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


def fock_state(n: int, N: int) -> FockVector:
    v = np.zeros(N + 1, dtype=complex)
    v[n] = 1.0
    return FockVector(v)


def encode(s: StateSuperposition, N: int = DEFAULT_TRUNCATION, tail_bound: float = TAIL_BOUND) -> FockVector:
    """Expand a coherent superposition in the truncated number basis.

    Emits :class:`TruncationWarning` when more than ``tail_bound`` of the
    weight sits within ``TAIL_MARGIN`` of the cutoff.
    """
    _check_truncation(N)
    amps = np.zeros((N + 1,) * s.num_modes, dtype=complex)
    for c, row in zip(s.coeffs, s.labels):
        amps += c * reduce(np.multiply.outer, [coherent_vector(a, N) for a in row])
    v = FockVector(amps)
    tail = v.tail_mass()
    if tail > tail_bound:
        warnings.warn(
            f"truncation N={N} leaves tail mass {tail:.2e} above N-{TAIL_MARGIN}",
            TruncationWarning,
            stacklevel=2,
        )
    return v


def fock_inner(v1: FockVector, v2: FockVector) -> complex:
    if v1.amplitudes.shape != v2.amplitudes.shape:
        raise DimensionError(f"shapes differ: {v1.amplitudes.shape} vs {v2.amplitudes.shape}")
    return complex(np.vdot(v1.amplitudes, v2.amplitudes))


def fock_normalize(v: FockVector) -> FockVector:
    return FockVector(v.amplitudes / math.sqrt(v.norm_squared()))


# single-mode matrices


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)


def _padded_dim(N: int, gamma: complex) -> int:
    # D(gamma) moves |n> to photon numbers around (sqrt(n) + |gamma|)^2;
    # pad so that paths reaching the edge are negligible for n <= N.
    reach = math.sqrt(N) + abs(gamma) + 8.0
    return max(N + 1, int(reach * reach) + 16)


@lru_cache(maxsize=256)
def displacement_matrix(gamma: complex, N: int) -> np.ndarray:
    """``<m|exp(g a^dag - g* a)|n>`` for ``m, n <= N``.

    Exponentiated in a padded space and cut back, so the kept block does not
    see the truncation edge.
    """
    dim = _padded_dim(N, gamma)
    a = annihilation(dim)
    gen = gamma * a.conj().T - np.conj(gamma) * a
    out = expm(gen)[: N + 1, : N + 1]
    out.setflags(write=False)
    return out


def phase_matrix(phi: float, N: int) -> np.ndarray:
    return np.diag(np.exp(1j * phi * np.arange(N + 1)))


def coherent_dyad(beta: complex, N: int) -> np.ndarray:
    c = coherent_vector(beta, N)
    return np.outer(c, c.conj())


def exclusion_matrix(alpha: complex, N: int) -> np.ndarray:
    return np.eye(N + 1, dtype=complex) - coherent_dyad(alpha, N)


def parity_matrix(outcome: ParityOutcome | str, N: int) -> np.ndarray:
    outcome = ParityOutcome(outcome)
    n = np.arange(N + 1)
    if outcome is ParityOutcome.ZERO:
        mask = n == 0
    elif outcome is ParityOutcome.EVEN:
        mask = (n % 2 == 0) & (n > 0)
    else:
        mask = n % 2 == 1
    return np.diag(mask.astype(complex))


# two-mode beam splitter


@lru_cache(maxsize=64)
def _bs_blocks(theta: float, N: int) -> tuple[np.ndarray, ...]:
    """Orthogonal block of the beam splitter for each total photon number ``K <= 2N``.

    The generator ``a1^dag a2 - a1 a2^dag`` conserves ``K`` and is tridiagonal in
    ``n1``.  Each block is exponentiated at full size ``K+1`` and then cut to the
    rows/columns with ``n1, n2 <= N``, so kept amplitudes are exact.
    """
    blocks = []
    for K in range(2 * N + 1):
        n1 = np.arange(K)
        off = np.sqrt((n1 + 1.0) * (K - n1))
        gen = np.diag(off, k=-1) - np.diag(off, k=1)
        U = expm(theta * gen)
        lo, hi = max(0, K - N), min(K, N)
        blk = U[lo : hi + 1, lo : hi + 1]
        blk.setflags(write=False)
        blocks.append(blk)
    return tuple(blocks)


def _apply_beam_splitter(amps: np.ndarray, i: int, j: int, theta: float) -> np.ndarray:
    N = amps.shape[0] - 1
    moved = np.moveaxis(amps, (i, j), (0, 1))
    rest = moved.shape[2:]
    flat = moved.reshape(N + 1, N + 1, -1)
    out = np.zeros_like(flat)
    for K, blk in enumerate(_bs_blocks(float(theta), N)):
        lo, hi = max(0, K - N), min(K, N)
        n1 = np.arange(lo, hi + 1)
        out[n1, K - n1] = blk @ flat[n1, K - n1]
    return np.moveaxis(out.reshape((N + 1, N + 1) + rest), (0, 1), (i, j))


# operator dispatch


@dataclass(frozen=True)
class FockOp:
    """One optical element: ``kind`` selects the matrix, ``param`` its argument."""

    kind: str
    param: object = None

    KINDS = ("beam_splitter", "displace", "phase", "coherent_dyad", "exclusion", "parity")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")

    def matrix(self, N: int) -> np.ndarray:
        if self.kind == "displace":
            return displacement_matrix(complex(self.param), N)
        if self.kind == "phase":
            return phase_matrix(float(self.param), N)
        if self.kind == "coherent_dyad":
            return coherent_dyad(complex(self.param), N)
        if self.kind == "exclusion":
            return exclusion_matrix(complex(self.param), N)
        if self.kind == "parity":
            return parity_matrix(self.param, N)
        raise ValueError(f"{self.kind} is not a single-mode operator")


def apply_single(matrix: np.ndarray, amps: np.ndarray, mode: int) -> np.ndarray:
    out = np.tensordot(matrix, amps, axes=([1], [mode]))
    return np.moveaxis(out, 0, mode)


def fock_apply(op: FockOp, v: FockVector, modes: Sequence[int] | int) -> FockVector:
    """Act with ``op`` on the listed mode(s) of ``v``."""
    modes = [modes] if isinstance(modes, (int, np.integer)) else list(modes)
    for m in modes:
        if not 0 <= m < v.num_modes:
            raise DimensionError(f"mode {m} out of range for {v.num_modes} modes")
    if op.kind == "beam_splitter":
        if len(modes) != 2 or modes[0] == modes[1]:
            raise DimensionError("beam splitter needs two distinct modes")
        return FockVector(_apply_beam_splitter(v.amplitudes, modes[0], modes[1], float(op.param)))
    if len(modes) != 1:
        raise DimensionError(f"{op.kind} acts on exactly one mode")
    return FockVector(apply_single(op.matrix(v.truncation), v.amplitudes, modes[0]))


def fock_project_coherent(v: FockVector, mode: int, beta: complex) -> tuple[FockVector, float]:
    """Contract ``mode`` with ``<beta|`` and remove it."""
    if v.num_modes < 2:
        raise DimensionError("projection would leave no modes")
    if not 0 <= mode < v.num_modes:
        raise DimensionError(f"mode {mode} out of range for {v.num_modes} modes")
    bra = coherent_vector(beta, v.truncation).conj()
    out = FockVector(np.tensordot(v.amplitudes, bra, axes=([mode], [0])))
    return out, out.norm_squared()


def fock_parity_project(v: FockVector, mode: int, outcome) -> tuple[FockVector, float]:
    out = fock_apply(FockOp("parity", outcome), v, mode)
    return out, out.norm_squared()


def reduced_density(v: FockVector, keep: int) -> np.ndarray:
    """Partial trace of the pure state over every mode except ``keep``."""
    amps = np.moveaxis(v.amplitudes, keep, 0).reshape(v.truncation + 1, -1)
    return amps @ amps.conj().T


# non-coherent states


def squeezed_vacuum(r: float, N: int = DEFAULT_TRUNCATION) -> FockVector:
    """Single-mode squeezed vacuum, antisqueezed along ``p`` for ``r > 0``."""
    if r < 0:
        raise ValueError("squeeze parameter must be non-negative")
    if N < 2:
        raise ValueError("truncation must be at least 2")
    v = np.zeros(N + 1, dtype=complex)
    t = -math.tanh(r)
    v[0] = 1.0 / math.sqrt(math.cosh(r))
    # c_{2n} = c_{2n-2} * (-tanh r) * sqrt((2n-1)/(2n))
    for n in range(1, N // 2 + 1):
        v[2 * n] = v[2 * n - 2] * t * math.sqrt((2 * n - 1) / (2 * n))
    return FockVector(v)


def quadrature_variances(v: FockVector) -> tuple[float, float]:
    """Variances of ``x`` and ``p`` for a single-mode vector."""
    if v.num_modes != 1:
        raise DimensionError("quadrature variances need a single-mode vector")
    psi = v.amplitudes / math.sqrt(v.norm_squared())
    a = annihilation(v.truncation + 1)
    x = (a + a.conj().T) / math.sqrt(2)
    p = (a - a.conj().T) / (1j * math.sqrt(2))
    out = []
    for q in (x, p):
        mean = np.vdot(psi, q @ psi).real
        out.append(np.vdot(psi, q @ (q @ psi)).real - mean**2)
    return out[0], out[1]


# phase space


def displacement_elements(gamma: np.ndarray, N: int) -> np.ndarray:
    """``<m|D(gamma)|n>`` for ``m, n <= N`` evaluated at every ``gamma``.

    For ``m = n + k`` the element is
    ``sqrt(n!/m!) gamma^k exp(-|gamma|^2/2) L_n^(k)(|gamma|^2)`` and the upper
    triangle follows from ``gamma^k -> (-gamma*)^k``.  Laguerre polynomials come
    from their forward three-term recurrence in ``n``, which stays accurate
    where direct recursion on the matrix elements does not.  Returns shape
    ``(N+1, N+1) + gamma.shape``.
    """
    gamma = np.asarray(gamma, dtype=complex)
    x = np.abs(gamma) ** 2
    with np.errstate(divide="ignore"):
        log_mod = np.log(np.abs(gamma))
    angle = np.angle(gamma)
    log_fact = gammaln(np.arange(N + 1) + 1.0)
    D = np.empty((N + 1, N + 1) + gamma.shape, dtype=complex)
    for k in range(N + 1):
        L = np.empty((N + 1 - k,) + gamma.shape)
        L[0] = 1.0
        if N - k >= 1:
            L[1] = 1.0 + k - x
        for n in range(1, N - k):
            L[n + 1] = ((2 * n + 1 + k - x) * L[n] - (n + k) * L[n - 1]) / (n + 1)
        for n in range(N + 1 - k):
            m = n + k
            log_pre = 0.5 * (log_fact[n] - log_fact[m]) - 0.5 * x
            if k:
                mod = np.exp(log_pre + k * log_mod) * L[n]
                D[m, n] = mod * np.exp(1j * k * angle)
                D[n, m] = mod * (-1) ** k * np.exp(-1j * k * angle)
            else:
                D[n, n] = np.exp(log_pre) * L[n]
    return D


def _as_density(state) -> np.ndarray:
    if isinstance(state, FockVector):
        if state.num_modes != 1:
            raise DimensionError("Wigner function needs a single-mode state")
        psi = state.amplitudes
        return np.outer(psi, psi.conj())
    rho = np.asarray(state, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError("density matrix must be square")
    return rho


def wigner_fock(state, x, p, chunk: int = 4096):
    """Wigner function from the displaced-parity form.

    ``W(x, p) = Tr[rho D(b) Pi D(-b)] / pi`` with ``b = (x + ip)/sqrt(2)``;
    since ``D(b) Pi D(-b) = D(2b) Pi`` only matrix elements inside the
    truncation are needed.  ``state`` is a single-mode :class:`FockVector` or a
    density matrix.
    """
    rho = _as_density(state)
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-6:
        raise ValueError(f"state trace {trace:.8f} is not normalized")
    N = rho.shape[0] - 1
    x, p = np.broadcast_arrays(np.asarray(x, float), np.asarray(p, float))
    gamma = (np.sqrt(2.0) * (x + 1j * p)).reshape(-1)
    sign = (-1.0) ** np.arange(N + 1)
    # W = sum_{n,m} rho[n,m] D[m,n] (-1)^n / pi
    weights = (rho * sign[:, None]).T  # [m, n] -> rho[n, m] (-1)^n
    out = np.empty(gamma.size)
    for start in range(0, gamma.size, chunk):
        g = gamma[start : start + chunk]
        D = displacement_elements(g, N)
        out[start : start + chunk] = np.einsum("mn,mnk->k", weights, D).real / math.pi
    out = out.reshape(x.shape)
    return float(out) if out.ndim == 0 else out


def hermite_functions(x, N: int) -> np.ndarray:
    """Number-state wavefunctions ``<x|n>`` for ``n <= N``; shape ``(N+1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    h = np.empty((N + 1,) + x.shape)
    h[0] = np.pi ** -0.25 * np.exp(-0.5 * x**2)
    if N >= 1:
        h[1] = math.sqrt(2.0) * x * h[0]
    for n in range(1, N):
        h[n + 1] = math.sqrt(2.0 / (n + 1)) * x * h[n] - math.sqrt(n / (n + 1)) * h[n - 1]
    return h


def position_wavefunction(v: FockVector, x) -> np.ndarray:
    if v.num_modes != 1:
        raise DimensionError("wavefunction needs a single-mode vector")
    return np.tensordot(v.amplitudes, hermite_functions(x, v.truncation), axes=([0], [0]))


def wigner_integral(psi, x: float, p: float, y_max: float = 12.0, n: int = 4801) -> float:
    """Direct quadrature of ``(1/pi) int dy psi(x+y) psi*(x-y) exp(-2ipy)``.

    ``psi`` is any callable wavefunction.  The integrand decays like a
    Gaussian, so the trapezoid rule on a fine uniform grid converges fast.
    """
    y = np.linspace(-y_max, y_max, n)
    f = psi(x + y) * np.conj(psi(x - y)) * np.exp(-2j * p * y)
    return float(np.trapezoid(f, y).real / math.pi)
