"""Exact-rational perturbation series and the large-barrier asymptotic law.

Rayleigh-Schrodinger corrections are computed on a similarity-transformed
copy of each symmetry block.  Scaling the basis vectors turns the symmetric
off-diagonal pairs (b*lam, b*lam) into the rational pair (b^2*lam, lam)
without touching the spectrum, which removes the lone irrational coupling
1/sqrt(2) of the even-parity A block; every quantity in the recursion is
then an exact :class:`fractions.Fraction` of unbounded size.

Because each perturbation order moves the basis index by at most one, a
block truncated at level + order/2 + 2 rows reproduces the infinite-matrix
coefficients exactly, and odd-order corrections vanish identically (closed
walks on a chain have even length).  The vanishing is asserted during
construction rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .blocks import Species, diagonal_energies, unit_offdiagonal_products

MAX_SERIES_ORDER = 40


@dataclass(frozen=True)
class RationalSeries:
    """Even-power expansion of one eigenvalue in the barrier strength.

    ``coeffs[j]`` multiplies lam**(2*j); coefficient 0 is the exact integer
    unperturbed energy.  Odd orders vanish identically and are not stored.
    """

    species: Species
    level: int
    order: int
    coeffs: tuple[Fraction, ...]

    def coefficient(self, power: int) -> Fraction:
        """Coefficient of lam**power (zero for odd powers)."""
        if power % 2:
            return Fraction(0)
        if power // 2 >= len(self.coeffs):
            raise IndexError(f"series only extends to order {self.order}")
        return self.coeffs[power // 2]


@dataclass(frozen=True)
class SeriesValue:
    value: float
    last_term: float
    exact: Fraction


def _perturbation_coefficients(diag, lower, m0, max_order):
    """RS recursion on a chain: diagonal ``diag``, down-couplings ``lower``.

    The perturbation has unit up-couplings and rational down-couplings equal
    to the off-diagonal products; intermediate normalization keeps the m0
    component of every correction at zero.  Correction vectors are sparse
    dicts; the support at each order includes both where the perturbation
    reaches and where earlier energy corrections act.
    """
    size = len(diag)
    energies = [Fraction(diag[m0])]
    psis = [{m0: Fraction(1)}]
    for k in range(1, max_order + 1):
        applied: dict[int, Fraction] = {}
        for m, c in psis[k - 1].items():
            if m + 1 < size:
                applied[m + 1] = applied.get(m + 1, Fraction(0)) + lower[m] * c
            if m - 1 >= 0:
                applied[m - 1] = applied.get(m - 1, Fraction(0)) + c
        energies.append(applied.get(m0, Fraction(0)))
        support = set(applied)
        for j in range(1, k):
            if energies[j]:
                support |= set(psis[k - j])
        support.discard(m0)
        nxt: dict[int, Fraction] = {}
        for m in support:
            val = applied.get(m, Fraction(0))
            for j in range(1, k):
                if energies[j]:
                    val -= energies[j] * psis[k - j].get(m, Fraction(0))
            if val:
                nxt[m] = val / (diag[m0] - diag[m])
        psis.append(nxt)
    return energies


def rs_series(species: Species, level: int, max_order: int) -> RationalSeries:
    """Exact eigenvalue series for ``level`` of a nondegenerate block.

    Parameters
    ----------
    species : Species
        Any parity-adapted block (A+, A-, E_a, E_b).  The unreduced A block
        is rejected: its unperturbed levels are pairwise degenerate and the
        nondegenerate recursion does not apply.
    level : int
        Index within the block, counting its eigenvalues upward from 0.
    max_order : int
        Highest power of the barrier strength, even, at most 40.
    """
    if species is Species.RAW_A:
        raise ValueError("series are defined per parity-adapted block, not for raw A")
    if level < 0:
        raise ValueError("level must be nonnegative")
    if max_order % 2:
        raise ValueError(f"order must be even, got {max_order}")
    if not 0 <= max_order <= MAX_SERIES_ORDER:
        raise ValueError(f"order must lie in [0, {MAX_SERIES_ORDER}]")

    n = level + max_order // 2 + 2
    diag = diagonal_energies(species, n)
    lower = unit_offdiagonal_products(species, len(diag))
    if species.is_two_sided:
        m0 = sorted(range(len(diag)), key=lambda i: diag[i])[level]
    else:
        m0 = level
    energies = _perturbation_coefficients(diag, lower, m0, max_order)
    for k in range(1, max_order + 1, 2):
        assert energies[k] == 0, f"odd-order correction {k} is nonzero: {energies[k]}"
    coeffs = tuple(energies[k] for k in range(0, max_order + 1, 2))
    return RationalSeries(species, level, max_order, coeffs)


def evaluate_series(
    series: RationalSeries,
    lam=None,
    lam_squared=None,
) -> SeriesValue:
    """Evaluate the even-power series at a real barrier or at lam^2 directly.

    Passing ``lam_squared`` covers the imaginary-barrier case: an imaginary
    barrier of magnitude g corresponds to lam_squared = -g**2, and every
    term stays real because only even powers occur.  Evaluation is exact
    rational; ``last_term`` reports the magnitude of the highest included
    term as a truncation-error heuristic.
    """
    if (lam is None) == (lam_squared is None):
        raise ValueError("pass exactly one of lam or lam_squared")
    if lam is not None:
        x = Fraction(lam) ** 2
    else:
        x = Fraction(lam_squared)
    total = Fraction(0)
    term = Fraction(0)
    for j, c in enumerate(series.coeffs):
        term = c * x**j
        total += term
    return SeriesValue(float(total), abs(float(term)), total)


def asymptotic_energy(v: int, lam) -> float:
    """Deep-well estimate of level v: -lam + 3*sqrt(lam/2)*(2v+1).

    The barrier bottom at -lam plus the harmonic ladder of small
    oscillations about a potential minimum; the neglected remainder is
    bounded (order one) as lam grows.  Requires lam > 0.
    """
    lam = float(lam)
    if lam <= 0:
        raise ValueError("asymptotic form requires a positive barrier")
    if v < 0:
        raise ValueError("level must be nonnegative")
    return -lam + 3 * math.sqrt(lam / 2) * (2 * v + 1)
