"""Eigenvalue solver for the Hermitian (real-barrier) blocks.

Roots of the characteristic value are isolated by Sturm bisection and then
polished by safeguarded Newton iteration using the exact derivative
recursion.  Quasi-degenerate pairs of the unreduced A block (split only at
high order in the barrier) are handled by the same machinery: bisection
keeps narrowing until the Sturm count certifies an isolating bracket, in
extended precision if the pair lies below double resolution.  Splittings are
always computed across the two parity blocks, whose own roots are well
separated at every barrier strength, so the difference never cancels.

An independent dense oracle (LAPACK tridiagonal diagonalization via scipy)
cross-checks the recurrence path; it shares no root-finding code with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .blocks import (
    BarrierKind,
    BlockOperator,
    Coupling,
    Species,
    build_block,
    gershgorin_bounds,
)
from .fields import DOUBLE, NumericField
from .recurrence import (
    ConvergenceError,
    characteristic_raw,
    newton_correction,
    polish_bracketed_root,
)

MAX_TRUNCATION = 2000
TRUNCATION_STEP = 10


@dataclass(frozen=True)
class SpectrumEntry:
    species: Species
    level: int
    value: object  # field number


@dataclass(frozen=True)
class Spectrum:
    """Sorted, labeled eigenvalues with convergence metadata.

    ``residuals`` holds, per entry, the final Newton correction magnitude
    |D/D'| (the estimated distance to the exact eigenvalue of the truncated
    block); for a pair too degenerate to isolate at the field's resolution
    it is half the terminal bracket width instead.
    """

    entries: tuple[SpectrumEntry, ...]
    truncation_used: int
    residuals: tuple[float, ...]

    def values(self) -> list:
        return [e.value for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def _initial_bracket(block: BlockOperator, k: int, field: NumericField):
    """Interval certain to contain the k lowest eigenvalues: Gershgorin below,
    diagonal-plus-spread (Weyl) above."""
    lo, _ = gershgorin_bounds(block)
    diag_sorted = sorted(block.diag)
    top = diag_sorted[min(k - 1, len(diag_sorted) - 1)]
    bmax = max((abs(float(p)) ** 0.5 for p in block.offprod), default=0.0)
    return field.convert(float(lo) - 1), field.convert(top + 2 * bmax + 1)


def _bisect_root(diag, prods, j, lo, hi, tol, field, one):
    """Shrink [lo, hi] around eigenvalue j by Sturm bisection.

    Returns (lo, hi, isolated).  Stops once the bracket is isolating and no
    wider than 64*tol, or at the resolution floor of the field.
    """
    feps = field.eps

    def count(x):
        return characteristic_raw(diag, prods, x, one)[2]

    c_lo = count(lo)
    c_hi = count(hi)
    if not (c_lo <= j < c_hi):
        raise ConvergenceError(
            f"bracket [{float(lo)}, {float(hi)}] lost eigenvalue {j} "
            f"(counts {c_lo}, {c_hi})"
        )
    target = 64 * tol
    while True:
        width = hi - lo
        mid = (lo + hi) / 2
        floor = 8 * feps * (1 + abs(mid))
        isolated = c_hi - c_lo == 1
        if width <= floor:
            return lo, hi, isolated
        if isolated and width <= target:
            return lo, hi, True
        c_mid = count(mid)
        if c_mid <= j:
            lo, c_lo = mid, c_mid
        else:
            hi, c_hi = mid, c_mid


def _solve_at_truncation(species, coupling, k, tol, n, field):
    """Lowest k eigenvalues of the block at fixed truncation n."""
    block = build_block(species, coupling, n, field)
    if k > block.size:
        raise ValueError(f"requested {k} levels from a block of size {block.size}")
    one = field.convert(1)
    tol_f = field.convert(tol)
    lo0, hi0 = _initial_bracket(block, k, field)
    diag, prods = block.diag, block.offprod

    # Cheap double-precision pre-brackets when running in an extended field.
    pre = None
    if not field.is_double:
        try:
            pre = _solve_at_truncation(species, coupling, k, max(tol, 1e-9), n, DOUBLE)
        except ConvergenceError:
            pre = None

    roots = []
    residuals = []
    for j in range(k):
        if pre is not None:
            v = float(pre.entries[j].value)
            pad = max(1e-7 * (1 + abs(v)), 100 * float(tol_f))
            lo, hi = field.convert(v - pad), field.convert(v + pad)
            c_lo = characteristic_raw(diag, prods, lo, one)[2]
            c_hi = characteristic_raw(diag, prods, hi, one)[2]
            if not (c_lo <= j < c_hi):
                lo, hi = lo0, hi0
        else:
            lo, hi = lo0, hi0
        lo, hi, isolated = _bisect_root(diag, prods, j, lo, hi, tol_f, field, one)
        if isolated:
            root, res = polish_bracketed_root(diag, prods, lo, hi, tol_f, one)
        else:
            # Bracket hit the resolution floor while holding >= 2 eigenvalues;
            # the midpoint is correct to the achievable precision.
            root = (lo + hi) / 2
            res = float(hi - lo) / 2
            if (hi - lo) > 1000 * tol_f:
                raise ConvergenceError(
                    f"level {j}: tolerance {tol} unreachable at this precision "
                    f"(bracket width {float(hi - lo):.3e}); use an extended field"
                )
        # Integer eigenvalues (zero coupling, decoupled rows) deserve to come
        # out exact: snap when the characteristic vanishes identically there.
        nearest = field.convert(round(float(root)))
        if abs(root - nearest) <= tol_f and (
            characteristic_raw(diag, prods, nearest, one)[0] == 0
        ):
            root, res = nearest, 0.0
        roots.append(root)
        residuals.append(res)
    entries = tuple(
        SpectrumEntry(species, j, r) for j, r in enumerate(roots)
    )
    return Spectrum(entries, n, tuple(residuals))


def _starting_truncation(coupling, k: int) -> int:
    mag = abs(float(coupling.magnitude))
    return k + math.ceil(2 * mag**0.5) + 8


def auto_truncation(
    species: Species,
    coupling: Coupling,
    k: int,
    tol: float,
    field: NumericField = DOUBLE,
) -> int:
    """Smallest tested truncation at which the k lowest eigenvalues are stable.

    Stability means no eigenvalue moves by more than tol/10 (or the field's
    resolution floor, if larger) when the truncation grows by a fixed step.
    """
    n, _ = _auto_truncation_with_spectrum(species, coupling, k, tol, field)
    return n


def _auto_truncation_with_spectrum(species, coupling, k, tol, field):
    if k < 1:
        raise ValueError("need at least one level")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    n = max(_starting_truncation(coupling, k), k + 2)
    inner_tol = tol / 100
    prev = _solve_at_truncation(species, coupling, k, inner_tol, n, field)
    while n <= MAX_TRUNCATION:
        n_next = n + TRUNCATION_STEP
        cur = _solve_at_truncation(species, coupling, k, inner_tol, n_next, field)
        scale = max(abs(float(v)) for v in cur.values())
        threshold = max(tol / 10, 40 * float(field.eps) * (1 + scale))
        move = max(
            abs(float(a.value) - float(b.value))
            for a, b in zip(prev.entries, cur.entries)
        )
        if move < threshold:
            return n, prev
        n, prev = n_next, cur
    raise ConvergenceError(
        f"truncation exceeded {MAX_TRUNCATION} without stabilizing (tol {tol})"
    )


def solve_spectrum(
    species: Species,
    coupling: Coupling,
    k: int,
    tol: float = 1e-12,
    field: NumericField = DOUBLE,
    truncation: int | None = None,
) -> Spectrum:
    """First k eigenvalues of a real-barrier block, sorted ascending.

    Parameters
    ----------
    species : Species
        Symmetry block.
    coupling : Coupling
        Must be a real barrier; imaginary barriers are handled by the
        space-time-symmetric solver.
    k : int
        Number of levels, counted from the bottom.
    tol : float
        Absolute tolerance on each eigenvalue.
    field : NumericField
        Working arithmetic; extended precision is required when tol is
        below the double-precision resolution of the block.
    truncation : int, optional
        Fixed truncation index; chosen automatically when omitted.

    Raises
    ------
    ConvergenceError
        If the tolerance is unreachable at the field's precision or the
        truncation search does not stabilize.
    """
    if coupling.kind is not BarrierKind.REAL:
        raise ValueError("solve_spectrum handles real barriers only")
    if k < 1:
        raise ValueError("need at least one level")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if truncation is not None:
        return _solve_at_truncation(species, coupling, k, tol, truncation, field)
    n, _ = _auto_truncation_with_spectrum(species, coupling, k, tol, field)
    return _solve_at_truncation(species, coupling, k, tol, n, field)


def dense_oracle(block: BlockOperator, k: int) -> Spectrum:
    """First k eigenvalues by full dense tridiagonal diagonalization.

    Independent verification path: LAPACK via scipy, no shared root-finding
    with the recurrence solver.  Real barriers only, block size capped at
    5000.  Residuals report the Newton correction of the characteristic
    value at each LAPACK eigenvalue as a consistency diagnostic.
    """
    import numpy as np
    from scipy.linalg import eigvalsh_tridiagonal

    if block.coupling.kind is not BarrierKind.REAL:
        raise ValueError("dense oracle covers the Hermitian case only")
    if block.size > 5000:
        raise ValueError(f"block size {block.size} exceeds the dense-oracle cap")
    if k > block.size:
        raise ValueError(f"requested {k} levels from a block of size {block.size}")
    d = np.asarray(block.diag, dtype=float)
    e = np.sqrt(np.asarray([float(p) for p in block.offprod]))
    if block.size > 1:
        # stebz with a tight absolute tolerance; the default stemr driver
        # only guarantees ~eps * ||T||, coarser than 1e-12 once the diagonal
        # reaches ~1e4
        vals = np.sort(eigvalsh_tridiagonal(d, e, lapack_driver="stebz", tol=1e-14))
    else:
        vals = d
    entries = tuple(
        SpectrumEntry(block.species, j, float(vals[j])) for j in range(k)
    )
    res = tuple(
        newton_correction(block.diag, block.offprod, float(vals[j]), 1.0)
        for j in range(k)
    )
    return Spectrum(entries, block.truncation, res)


def tunneling_splitting(
    n: int,
    lam,
    tol: float = 1e-12,
    field: NumericField = DOUBLE,
):
    """Splitting of the n-th quasi-degenerate A pair at barrier ``lam``.

    The two members of pair n live in different parity blocks (A+ level n
    and A- level n-1).  Each is solved in its own block, where neighbors are
    separated by order-one gaps, so forming the difference involves no
    quasi-degenerate cancellation.  Positive for every lam != 0.
    """
    if n < 1:
        raise ValueError("pair index starts at 1")
    if float(lam) == 0:
        raise ValueError("splitting is defined for a nonzero barrier")
    coupling = Coupling.real(lam)
    upper = solve_spectrum(Species.A_PLUS, coupling, n + 1, tol, field)
    lower = solve_spectrum(Species.A_MINUS, coupling, n, tol, field)
    delta = upper.entries[n].value - lower.entries[n - 1].value
    return delta if delta >= 0 else -delta


def combined_a_spectrum(
    coupling: Coupling,
    k: int,
    tol: float = 1e-12,
    field: NumericField = DOUBLE,
) -> Spectrum:
    """First k A-symmetry eigenvalues with their parity labels.

    Solves the two parity blocks separately and merges, which resolves the
    quasi-degenerate pairs of the unreduced A block at any barrier strength.
    """
    plus = solve_spectrum(Species.A_PLUS, coupling, k, tol, field)
    minus = solve_spectrum(Species.A_MINUS, coupling, k, tol, field)
    merged = sorted(
        [(e.value, e.species, r) for e, r in zip(plus.entries, plus.residuals)]
        + [(e.value, e.species, r) for e, r in zip(minus.entries, minus.residuals)],
        key=lambda t: t[0],
    )[:k]
    entries = tuple(
        SpectrumEntry(sp, j, v) for j, (v, sp, _) in enumerate(merged)
    )
    return Spectrum(
        entries,
        max(plus.truncation_used, minus.truncation_used),
        tuple(r for _, _, r in merged),
    )


def parity_assignment(
    n_max: int,
    lam,
    tol: float = 1e-12,
    field: NumericField = DOUBLE,
) -> dict:
    """Determine which parity block hosts each member of the A pairs.

    For each pair n = 1 .. n_max, matches the unreduced-A eigenvalues
    2n-1 and 2n against the parity-block eigenvalues and reports which
    block supplies the lower and the upper member, together with the
    matching defects.  The assignment is established numerically rather
    than assumed.
    """
    coupling = Coupling.real(lam)
    k = 2 * n_max + 1
    # each side solved at a quarter of the matching tolerance so the defect
    # budget stays within tol
    raw = solve_spectrum(Species.RAW_A, coupling, k, tol / 4, field)
    merged = combined_a_spectrum(coupling, k, tol / 4, field)
    defect = max(
        abs(float(a.value) - float(b.value))
        for a, b in zip(raw.entries, merged.entries)
    )
    pairs = {}
    for n in range(1, n_max + 1):
        lower = merged.entries[2 * n - 1]
        upper = merged.entries[2 * n]
        pairs[n] = {"lower": lower.species, "upper": upper.species}
    return {"pairs": pairs, "max_defect": defect, "lambda": float(lam)}
