"""Symmetry blocks of the threefold hindered rigid rotor.

The rotor Hamiltonian -d^2/dphi^2 + lambda*cos(3*phi) (energies measured in
units of the rotational constant B = hbar^2/(2I), barrier height in the same
units) block-diagonalizes over the irreducible representations of C3.  In a
plane-wave Fourier basis each block is an infinite symmetric tridiagonal
matrix; truncating it gives the finite operators built here.

Five blocks are distinguished:

* ``A_PLUS``  -- parity-even A states (constant + cosines), including the
  special sqrt(2)-enhanced coupling of the constant basis function,
* ``A_MINUS`` -- parity-odd A states (sines),
* ``E_A`` / ``E_B`` -- the two members of the doubly degenerate E species,
* ``RAW_A``   -- the A block without parity reduction, which contains
  quasi-degenerate eigenvalue pairs and exists mainly to demonstrate them.

Only the *products* of symmetric off-diagonal pairs enter determinant
recursions and Sturm counts, so :class:`BlockOperator` stores those products.
With an imaginary barrier i*g the entries i*g/2 are purely imaginary but
their products -(g/2)**2 are real, so the same real-arithmetic machinery
covers both Hermitian and space-time-symmetric variants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .fields import DOUBLE, NumericField


class Species(Enum):
    """Symmetry block label."""

    A_PLUS = "A+"
    A_MINUS = "A-"
    E_A = "Ea"
    E_B = "Eb"
    RAW_A = "rawA"

    @classmethod
    def parse(cls, text: str) -> "Species":
        key = text.strip().lower().replace("_", "")
        aliases = {
            "a+": cls.A_PLUS, "aplus": cls.A_PLUS, "a1": cls.A_PLUS,
            "a-": cls.A_MINUS, "aminus": cls.A_MINUS, "a2": cls.A_MINUS,
            "ea": cls.E_A, "eb": cls.E_B,
            "rawa": cls.RAW_A, "a": cls.RAW_A,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown symmetry species {text!r}") from None

    @property
    def is_two_sided(self) -> bool:
        return self in (Species.E_A, Species.E_B, Species.RAW_A)

    @property
    def fourier_offset(self) -> int:
        """Offset s in the plane-wave exponents 3m+s (0 for A, -1/+1 for E_a/E_b)."""
        return {Species.E_A: -1, Species.E_B: 1}.get(self, 0)


class BarrierKind(Enum):
    REAL = "real"
    IMAGINARY = "imaginary"


@dataclass(frozen=True)
class Coupling:
    """Dimensionless barrier strength.

    All dimensional bookkeeping of the model lives here: for a rotor with
    moment of inertia I hindered by a barrier of height V3, energies are
    reported as eps = E/B with B = hbar**2/(2*I) the rotational constant,
    and the magnitude stored in this type is lambda = V3/B (real barrier)
    or g (imaginary barrier i*g*cos(3*phi)).  Downstream code never sees
    hbar, I, B or V3 again.

    With an imaginary barrier the matrix-element pairs are purely imaginary
    but their products are real and negative, (i*g/2)**2 = -g**2/4, which is
    what keeps the whole unbroken-phase machinery in real arithmetic.  The
    magnitude may be given as a decimal string, which extended-precision
    fields convert without a float64 round trip.
    """

    kind: BarrierKind
    magnitude: float | int | str | Fraction

    def __post_init__(self):
        if not math.isfinite(float(self.magnitude)):
            raise ValueError(f"coupling magnitude must be finite, got {self.magnitude!r}")

    @classmethod
    def real(cls, lam) -> "Coupling":
        return cls(BarrierKind.REAL, lam)

    @classmethod
    def imaginary(cls, g) -> "Coupling":
        return cls(BarrierKind.IMAGINARY, g)

    @property
    def is_real(self) -> bool:
        return self.kind is BarrierKind.REAL


def diagonal_energies(species: Species, n: int) -> tuple[int, ...]:
    """Unperturbed energies of the truncated block, as exact integers.

    One-sided A blocks list 9*j**2 (j from 0 for A+, from 1 for A-); the
    two-sided blocks list (3m+s)**2 in index order m = -n .. n.
    """
    if species is Species.A_PLUS:
        return tuple(9 * j * j for j in range(n + 1))
    if species is Species.A_MINUS:
        return tuple(9 * j * j for j in range(1, n + 1))
    s = species.fourier_offset
    return tuple((3 * m + s) ** 2 for m in range(-n, n + 1))


def unit_offdiagonal_products(species: Species, size: int) -> tuple[Fraction, ...]:
    """Off-diagonal products for unit coupling, as exact rationals.

    Entry k is the product of the symmetric matrix-element pair on the edge
    between rows k-1 and k.  All couplings are 1/2 per unit barrier except
    the A+ edge touching the constant basis function, which is 1/sqrt(2)
    (product 1/2 instead of 1/4).
    """
    if size < 2:
        return ()
    if species is Species.A_PLUS:
        return (Fraction(1, 2),) + (Fraction(1, 4),) * (size - 2)
    return (Fraction(1, 4),) * (size - 1)


@dataclass(frozen=True)
class BlockOperator:
    """Truncated tridiagonal operator of one symmetry block.

    ``diag`` holds the unperturbed energies (exact integers) and ``offprod``
    the off-diagonal products b_k*c_k feeding the determinant recursion;
    for an imaginary barrier all products are negative.
    """

    species: Species
    coupling: Coupling
    truncation: int
    diag: tuple
    offprod: tuple

    @property
    def size(self) -> int:
        return len(self.diag)


def build_block(
    species: Species,
    coupling: Coupling,
    n: int,
    field: NumericField = DOUBLE,
) -> BlockOperator:
    """Construct the truncated block operator at truncation index ``n``.

    Parameters
    ----------
    species : Species
        Which symmetry block to build.
    coupling : Coupling
        Barrier strength; real or imaginary kind.
    n : int
        Truncation index (>= 2).  One-sided A blocks get n+1 (A+) or n (A-)
        rows, two-sided blocks 2n+1 rows.
    field : NumericField
        Arithmetic used for the off-diagonal products.
    """
    if n < 2:
        raise ValueError(f"truncation must be at least 2, got {n}")
    diag = diagonal_energies(species, n)
    mag = field.convert(coupling.magnitude)
    units = unit_offdiagonal_products(species, len(diag))
    off = tuple(mag * mag * u.numerator / u.denominator for u in units)
    if not coupling.is_real:
        off = tuple(-p for p in off)
    return BlockOperator(species, coupling, n, diag, off)


def potential_value(coupling: Coupling, phi: float):
    """Hindering potential at angle ``phi``: lam*cos(3*phi), or i*g*cos(3*phi).

    Real couplings return a float, imaginary ones a complex value.  Intended
    for documentation plots; solver code never samples the potential.
    """
    c = math.cos(3 * phi)
    mag = float(coupling.magnitude)
    if coupling.is_real:
        return mag * c
    return complex(0.0, mag) * c


def gershgorin_bounds(block: BlockOperator):
    """Enclosing interval for all eigenvalues of the (real-coupling) block."""
    b = [abs(p) ** 0.5 for p in block.offprod]
    lo = min(
        d - (b[k - 1] if k > 0 else 0) - (b[k] if k < len(b) else 0)
        for k, d in enumerate(block.diag)
    )
    hi = max(
        d + (b[k - 1] if k > 0 else 0) + (b[k] if k < len(b) else 0)
        for k, d in enumerate(block.diag)
    )
    return lo, hi
