"""Invariant suite behind ``hhgcat check``."""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import coherent as ca
from . import fock as fk
from . import oracle
from .coherent import ParityOutcome
from .errors import TruncationWarning
from .schemes import (
    SchemeConfig,
    enlarge_config,
    enlarge_pipeline,
    interferometer_condition,
    interferometer_pipeline,
    measurement_weights,
    sequential_pipeline,
)
from .wigner import wigner

OP_TOL = 1e-8
UNITARY_TOL = 1e-12
PIPELINE_TOL = 1e-6
WIGNER_TOL = 1e-6


@dataclass
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<52s} max_dev={self.max_deviation:.3e}  tol={self.tolerance:.0e}"


def _accumulate(results: dict, name: str, value: float):
    results[name] = max(results.get(name, 0.0), float(value))


def operation_suite(n_states: int, N: int, seed: int = 2022, radius: float = 2.5) -> dict[str, float]:
    """Largest coherent-vs-Fock deviation per operation over random states."""
    rng = np.random.default_rng(seed)
    worst: dict[str, float] = {}
    for k in range(n_states):
        s = oracle.random_state(rng, num_modes=1 + k % 2, radius=radius)
        for name, dev in oracle.compare_operations(s, rng, N).items():
            _accumulate(worst, name, dev)
    return worst


def unitarity_suite(n_pairs: int, seed: int = 7) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    worst: dict[str, float] = {}
    for k in range(n_pairs):
        m = 1 + k % 2
        s1, s2 = oracle.random_state(rng, m), oracle.random_state(rng, m)
        for name, dev in oracle.unitarity_deviation(s1, s2, rng).items():
            _accumulate(worst, name, dev)
    return worst


def projector_suite(n_states: int, seed: int = 11) -> dict[str, float]:
    """Idempotence, orthogonality and completeness of the conditioning projectors."""
    rng = np.random.default_rng(seed)
    worst: dict[str, float] = {}
    for _ in range(n_states):
        s = oracle.random_state(rng, 1)
        a = oracle.random_amplitude(rng, 2.5)
        once = ca.exclusion_project(s, a, 0)
        _accumulate(worst, "exclusion idempotence", ca.distance(once, ca.exclusion_project(once, a, 0)))
        parts = {o: ca.parity_project(s, 0, o) for o in ParityOutcome}
        _accumulate(worst, "parity completeness", abs(sum(w for _, w in parts.values()) - s.norm_squared()))
        outs = [p for p, _ in parts.values()]
        for i in range(3):
            for j in range(i + 1, 3):
                _accumulate(worst, "parity orthogonality", abs(ca.inner_product(outs[i], outs[j])))
    return worst


def wigner_suite(n_states: int, N: int, seed: int = 5, radius: float = 3.0) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    xs = np.linspace(-5, 5, 9)
    X, P = np.meshgrid(xs, xs, indexing="ij")
    for _ in range(n_states):
        s = oracle.random_state(rng, 1, radius=radius)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            v = fk.encode(s, N)
        worst = max(worst, float(np.abs(wigner(s, X, P) - fk.wigner_fock(fk.fock_normalize(v), X, P)).max()))
    return worst


def _enlarge_against(worst, prefix, three, fthree, cfg, N):
    for o in ParityOutcome:
        res = enlarge_pipeline(three, cfg, o)
        rho, fp = oracle.fock_enlarge(fthree, cfg, o)
        _accumulate(worst, f"{prefix} probabilities", abs(res.probability - fp[o.value]))
        c = fk.encode(res.cat_state, N).amplitudes
        _accumulate(worst, f"{prefix} cat fidelity", abs(1.0 - float(np.vdot(c, rho @ c).real)))


def pipeline_suite(N: int, extended: bool = False) -> dict[str, float]:
    """Fock reruns of every scheme."""
    worst: dict[str, float] = {}
    reach = 0.6 * math.sqrt(N)  # largest label whose number-basis tail is negligible at N
    alphas = (0.0, 0.5, 1.0, 2.0) if extended else (0.0, 0.5, 1.0)
    shifts = (-0.5, -0.9, -1.3, -2.0) if extended else (-0.5, -0.9, -1.3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for a in alphas:
            for d in shifts:
                cfg = SchemeConfig(alpha=a, delta_alpha=d)
                two = interferometer_pipeline(cfg)
                fv = oracle.fock_interferometer(cfg, N)
                _accumulate(worst, "interferometer state", oracle._dev(two, fv))
                w = measurement_weights(two, cfg)
                tot = sum(w.values())
                fp = oracle.fock_measurement_probabilities(fv, cfg)
                for k in w:
                    _accumulate(worst, "interferometer probabilities", abs(w[k] / tot - fp[k]))
                    interferometer_condition(two, k, cfg)

        seq_alphas = (0.0, 0.5, 1.0) if extended else (0.0, 0.5)
        for a in seq_alphas:
            for d in shifts:
                for amplify in (True, False):
                    cfg = SchemeConfig(alpha=a, delta_alpha=d, amplify=amplify)
                    _accumulate(
                        worst, "sequential state", oracle._dev(sequential_pipeline(cfg), oracle.fock_sequential(cfg, N))
                    )

        # Stage check on the exactly encoded three-component state, then
        # end-to-end reruns where the intermediate |alpha + 2d> fits in N.
        tildes = (0.5, 1.0, 1.5, 2.0) if extended else (0.5, 1.0, 1.5)
        for theta in (math.pi / 3, math.pi / 4, math.pi / 6):
            for t in tildes:
                cfg = enlarge_config(t, theta)
                three = sequential_pipeline(cfg)
                _enlarge_against(worst, "enlarge", three, fk.encode(three, N), cfg, N)
                if abs(cfg.alpha + 2 * cfg.delta_alpha) <= reach:
                    _enlarge_against(worst, "enlarge end-to-end", three, oracle.fock_sequential(cfg, N), cfg, N)
    return worst


def run_check(regime: str = "standard") -> list[CheckResult]:
    """Execute the invariant suite; ``extended`` adds N = 80 replays."""
    if regime not in ("standard", "extended"):
        raise ValueError(f"unknown regime {regime!r}")
    results: list[CheckResult] = []

    def add(prefix, worst, tol):
        for name, dev in sorted(worst.items()):
            results.append(CheckResult(f"{prefix}{name}", dev, tol))

    add("oracle N=40: ", operation_suite(100, 40), OP_TOL)
    add("unitarity: ", unitarity_suite(50), UNITARY_TOL)
    add("projector: ", projector_suite(50), UNITARY_TOL)
    results.append(CheckResult("wigner analytic vs Fock N=40", wigner_suite(10, 40), WIGNER_TOL))
    add("pipeline N=40: ", pipeline_suite(40), PIPELINE_TOL)
    if regime == "extended":
        add("oracle N=80: ", operation_suite(40, 80, seed=99, radius=4.0), OP_TOL)
        results.append(CheckResult("wigner analytic vs Fock N=80", wigner_suite(6, 80, radius=4.5), WIGNER_TOL))
        add("pipeline N=80: ", pipeline_suite(80, extended=True), PIPELINE_TOL)
    return results


def report(results: list[CheckResult], elapsed: float | None = None) -> str:
    lines = [r.line() for r in results]
    n_fail = sum(not r.passed for r in results)
    tail = f"{len(results) - n_fail}/{len(results)} invariants passed"
    if elapsed is not None:
        tail += f" in {elapsed:.1f} s"
    return "\n".join(lines + [tail])


def timed_check(regime: str = "standard") -> tuple[list[CheckResult], float]:
    t0 = time.perf_counter()
    res = run_check(regime)
    return res, time.perf_counter() - t0
