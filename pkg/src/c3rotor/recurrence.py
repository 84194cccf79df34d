"""Rescaled determinant recursions for tridiagonal blocks.

The characteristic polynomial of a truncated block is evaluated through the
leading-principal-minor recursion

    D[-1] = 1,  D[0] = d0 - eps,  D[k] = (d_k - eps) * D[k-1] - p_k * D[k-2],

where d_k are diagonal energies and p_k off-diagonal products.  Raw minors
grow like the product of (d_k - eps) and overflow doubles well before k = 40,
so every step rescales the running pair by an integer power of ten and
accumulates the stripped exponent separately.  The value is therefore carried
as (mantissa, exponent) with |mantissa| <= 1.

For blocks with all p_k > 0 the minor sequence is a Sturm sequence: the
number of sign changes equals the number of eigenvalues below the shift.
A zero minor inherits the sign of its predecessor, which makes the count
strict ("< eps", not "<= eps").  Negative products (imaginary barrier) void
the Sturm property; the terminal value itself remains valid and real.

All functions are pure and generic over the numeric field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .blocks import BarrierKind, BlockOperator
from .fields import DOUBLE, NumericField


@dataclass(frozen=True)
class CharacteristicValue:
    """Terminal minor in rescaled form plus the Sturm sign-change count.

    ``mantissa * 10**exponent`` reconstructs the unscaled determinant up to
    the rounding of the per-step rescaling.  ``sign_changes`` counts
    eigenvalues strictly below the shift when all off-diagonal products are
    positive; with negative products it is still the raw count along the
    sequence but carries no spectral meaning.
    """

    mantissa: float
    exponent: int
    sign_changes: int

    def log10_magnitude(self) -> float:
        """log10 of the unscaled determinant magnitude (-inf at a root)."""
        m = abs(float(self.mantissa))
        if m == 0.0:
            return float("-inf")
        return self.exponent + math.log10(m)


def _rescale_exponent(values) -> int:
    """Power of ten that maps max|values| into (0.1, 1]; 0 if already sane."""
    m = 0.0
    for v in values:
        a = float(abs(v))
        if a > m:
            m = a
    if m == 0.0 or 0.01 <= m <= 1.0:
        return 0
    return math.ceil(math.log10(m))


def _minor_sequence(diag, prods, eps, one, want_derivative: bool):
    """Shared worker: returns (D, dD/deps, exponent, sign_changes)."""
    zero = one * 0
    d_prev = one
    d_cur = diag[0] - eps
    e_prev = zero
    e_cur = -one
    exponent = 0
    changes = 0
    prev_sign = 1
    cur = prev_sign if d_cur == 0 else (1 if d_cur > 0 else -1)
    if cur != prev_sign:
        changes += 1
    prev_sign = cur
    for k in range(1, len(diag)):
        a = diag[k] - eps
        p = prods[k - 1]
        d_next = a * d_cur - p * d_prev
        d_prev, d_cur = d_cur, d_next
        if want_derivative:
            e_next = -d_prev + a * e_cur - p * e_prev
            e_prev, e_cur = e_cur, e_next
        shift = _rescale_exponent((d_cur, d_prev))
        if shift:
            scale = (one * 10) ** shift
            d_prev /= scale
            d_cur /= scale
            if want_derivative:
                e_prev /= scale
                e_cur /= scale
            exponent += shift
        cur = prev_sign if d_cur == 0 else (1 if d_cur > 0 else -1)
        if cur != prev_sign:
            changes += 1
        prev_sign = cur
    return d_cur, e_cur, exponent, changes


def characteristic_raw(diag, prods, eps, one):
    """(mantissa, exponent, sign_changes) without building a BlockOperator."""
    d, _, expo, changes = _minor_sequence(diag, prods, eps, one, False)
    return d, expo, changes


def characteristic_with_derivative(diag, prods, eps, one):
    """(D, dD/deps, exponent) with both sequences under a common rescaling.

    The derivative recursion differentiates the three-term recursion exactly,
    so Newton steps D/D' lose none of the working precision to differencing.
    """
    d, e, expo, _ = _minor_sequence(diag, prods, eps, one, True)
    return d, e, expo


def characteristic(
    block: BlockOperator, eps, field: NumericField = DOUBLE
) -> CharacteristicValue:
    """Evaluate the rescaled characteristic value of ``block`` at shift ``eps``.

    Parameters
    ----------
    block : BlockOperator
        Truncated symmetry block (real or imaginary coupling).
    eps : number
        Trial energy, converted into ``field``.
    field : NumericField
        Working arithmetic.
    """
    one = field.convert(1)
    e = field.convert(eps)
    d, expo, changes = characteristic_raw(block.diag, block.offprod, e, one)
    return CharacteristicValue(d, expo, changes)


def count_below(block: BlockOperator, eps, field: NumericField = DOUBLE) -> int:
    """Number of eigenvalues of ``block`` strictly below ``eps`` (Sturm count).

    Requires a real coupling; negative off-diagonal products break the Sturm
    property, so imaginary-barrier blocks are rejected.
    """
    if block.coupling.kind is not BarrierKind.REAL:
        raise ValueError("Sturm counting requires a real barrier (all products > 0)")
    return characteristic(block, eps, field).sign_changes


class ConvergenceError(RuntimeError):
    """A solver failed to reach the requested tolerance or iteration budget."""


def newton_correction(diag, prods, x, one) -> float:
    """|D/D'| at x: estimated distance to the nearest characteristic root.

    This is the natural residual for a located eigenvalue.  The raw
    characteristic magnitude is useless for that purpose: near a
    quasi-degenerate pair the last two minors shrink together (a submatrix
    eigenvalue interlaces between the pair members), so the rescaled
    mantissa stays order one while the smallness moves into the exponent.
    """
    d, dd, _ = characteristic_with_derivative(diag, prods, x, one)
    if dd == 0:
        return float("inf") if d != 0 else 0.0
    return abs(float(d / dd))


def polish_bracketed_root(diag, prods, lo, hi, tol, one):
    """Newton iteration safeguarded by a sign-changing bracket.

    The characteristic value must change sign across [lo, hi] and contain a
    single root there.  Newton steps that leave the bracket are replaced by
    bisection, and every iterate tightens the bracket, so the method cannot
    escape or cycle.  Returns (root, residual) with the residual the final
    Newton correction magnitude |D/D'|.

    Raises ConvergenceError if the iteration budget runs out before the
    bracket narrows to ``tol`` (the tolerance is finer than the field can
    resolve at this conditioning).
    """

    def dv(x):
        return characteristic_with_derivative(diag, prods, x, one)

    def shrink(point, value):
        # keep [lo, hi] sign-changing; the point always becomes one end
        nonlocal lo, hi
        if (1 if value > 0 else -1) == sign_lo:
            lo = point
        else:
            hi = point

    d_lo, _, _ = dv(lo)
    sign_lo = 1 if d_lo > 0 else -1
    x = (lo + hi) / 2
    d, dd, _ = dv(x)
    if d == 0:
        return x, 0.0
    shrink(x, d)
    for _ in range(100):
        x_new = x - d / dd if dd != 0 else (lo + hi) / 2
        if not (lo < x_new < hi):
            x_new = (lo + hi) / 2
        step = abs(x_new - x)
        d_new, dd_new, _ = dv(x_new)
        if d_new == 0:
            return x_new, 0.0
        shrink(x_new, d_new)
        x, d, dd = x_new, d_new, dd_new
        if step <= tol / 4 or (hi - lo) <= tol:
            return x, (abs(float(d / dd)) if dd != 0 else float(hi - lo))
    if (hi - lo) > tol:
        raise ConvergenceError(
            f"Newton polish exhausted its budget at bracket width "
            f"{float(hi - lo):.3e} > tol {float(tol):.3e}; use an extended field"
        )
    return x, (abs(float(d / dd)) if dd != 0 else float(hi - lo))


def complex_characteristic(diag, prods, eps):
    """(D, dD/deps) at complex shift ``eps``, rescaled by powers of ten.

    Used for continuing eigenvalue branches into the complex plane after an
    exceptional point.  Sign counting is meaningless here and skipped; the
    exponent is dropped since only the Newton ratio D/D' is consumed.
    """
    one = eps * 0 + 1
    d_prev = one
    d_cur = diag[0] - eps
    e_prev = eps * 0
    e_cur = -one
    for k in range(1, len(diag)):
        a = diag[k] - eps
        p = prods[k - 1]
        d_next = a * d_cur - p * d_prev
        e_next = -d_cur + a * e_cur - p * e_prev
        d_prev, d_cur = d_cur, d_next
        e_prev, e_cur = e_cur, e_next
        shift = _rescale_exponent((d_cur, d_prev))
        if shift:
            scale = (one * 10) ** shift
            d_prev /= scale
            d_cur /= scale
            e_prev /= scale
            e_cur /= scale
    return d_cur, e_cur
