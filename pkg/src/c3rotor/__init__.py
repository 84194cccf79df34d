"""Spectral toolkit for the threefold hindered rigid rotor.

Energies are dimensionless throughout: eigenvalues in units of the
rotational constant, barrier heights likewise.  The package covers the
Hermitian rotor (symmetry-adapted tridiagonal blocks, Sturm-bisection
spectra, quasi-degenerate tunneling splittings, exact rational perturbation
series, deep-well asymptotics) and its space-time-symmetric imaginary
barrier variant (real spectra in the unbroken phase, exceptional points to
certified precision, complex conjugate branches beyond).

All public objects are immutable and all operations are pure functions, so
everything here is safe to call concurrently without coordination.
"""

from .blocks import (
    BarrierKind,
    BlockOperator,
    Coupling,
    Species,
    build_block,
    potential_value,
)
from .fields import DOUBLE, NumericField
from .recurrence import CharacteristicValue, ConvergenceError, characteristic, count_below
from .series import RationalSeries, SeriesValue, asymptotic_energy, evaluate_series, rs_series
from .spectral import (
    Spectrum,
    SpectrumEntry,
    auto_truncation,
    combined_a_spectrum,
    dense_oracle,
    parity_assignment,
    solve_spectrum,
    tunneling_splitting,
)
from .stsym import (
    ComplexPair,
    EPSeed,
    ExceptionalPoint,
    complex_pair_continuation,
    ep_scan,
    find_a_exceptional_point,
    find_exceptional_point,
    real_spectrum_st,
)
from .figures import FigureData, figure_data, write_svg

__version__ = "0.1.0"

__all__ = [
    "BarrierKind",
    "BlockOperator",
    "CharacteristicValue",
    "ComplexPair",
    "ConvergenceError",
    "Coupling",
    "DOUBLE",
    "EPSeed",
    "ExceptionalPoint",
    "FigureData",
    "NumericField",
    "RationalSeries",
    "SeriesValue",
    "Species",
    "Spectrum",
    "SpectrumEntry",
    "asymptotic_energy",
    "auto_truncation",
    "build_block",
    "characteristic",
    "combined_a_spectrum",
    "complex_pair_continuation",
    "count_below",
    "dense_oracle",
    "ep_scan",
    "evaluate_series",
    "figure_data",
    "find_a_exceptional_point",
    "find_exceptional_point",
    "parity_assignment",
    "potential_value",
    "real_spectrum_st",
    "rs_series",
    "solve_spectrum",
    "tunneling_splitting",
    "write_svg",
]
