"""Simulator for optical cat states conditioned on high-harmonic generation.

Coherent superpositions are handled exactly in :mod:`hhgcat.coherent`; the
truncated number basis in :mod:`hhgcat.fock` serves as the independent
oracle and hosts the non-coherent states.
"""
__version__ = "0.1.0"

from .coherent import (
    ParityOutcome,
    StateSuperposition,
    beam_splitter,
    compact,
    displace,
    exclusion_project,
    inner_product,
    normalize,
    overlap,
    parity_project,
    phase_delay,
    project_coherent,
    tensor,
)
from .errors import DegenerateMeasurementError, DimensionError, TruncationWarning, ZeroStateError
from .schemes import (
    SchemeConfig,
    enlarge_pipeline,
    enlarge_sweep,
    hhg_cat,
    interferometer_condition,
    interferometer_pipeline,
    measurement_sweep,
    sequential_pipeline,
)
from .wigner import Window, WignerGrid, wigner_grid
