"""Numeric working fields for the solver kernels.

Every kernel in this package is written against plain arithmetic
(+, -, *, /, abs, comparisons) so the same code runs on machine doubles
or on mpmath arbitrary-precision floats.  A :class:`NumericField` bundles
the choice of representation together with conversion helpers.  Each
extended-precision field owns a private mpmath context, so two fields
with different precision never interfere and nothing mutates global
mpmath state.
"""

from __future__ import annotations

import cmath
import math
import sys
from fractions import Fraction

import mpmath


class NumericField:
    """Arithmetic context: float64 when ``dps`` is None, else mpmath at ``dps`` digits."""

    def __init__(self, dps: int | None = None):
        if dps is not None:
            if dps < 1:
                raise ValueError(f"precision digits must be positive, got {dps}")
            ctx = mpmath.ctx_mp.MPContext()
            ctx.dps = dps
            self._ctx = ctx
        else:
            self._ctx = None
        self.dps = dps

    @property
    def is_double(self) -> bool:
        return self.dps is None

    @property
    def eps(self):
        """Relative machine epsilon of the field."""
        if self._ctx is None:
            return sys.float_info.epsilon
        return self._ctx.mpf(2) ** (1 - self._ctx.prec)

    def convert(self, x):
        """Coerce ``x`` (int, float, decimal string, Fraction, mpf) into the field.

        Decimal strings are converted directly at the working precision, so
        ``convert("0.1")`` at 30 digits carries no double-rounding from an
        intermediate float64.
        """
        if self._ctx is None:
            return float(x)
        if isinstance(x, Fraction):
            return self._ctx.mpf(x.numerator) / x.denominator
        return self._ctx.mpf(x)

    def convert_complex(self, re, im=0):
        if self._ctx is None:
            return complex(float(re), float(im))
        return self._ctx.mpc(self.convert(re), self.convert(im))

    def sqrt(self, x):
        if self._ctx is None:
            return math.sqrt(x)
        return self._ctx.sqrt(x)

    def csqrt(self, z):
        if self._ctx is None:
            return cmath.sqrt(z)
        return self._ctx.sqrt(z)

    def to_float(self, x) -> float:
        return float(x)

    def format(self, x, digits: int | None = None) -> str:
        """Full-precision decimal rendering (round-trippable for doubles)."""
        if self._ctx is None:
            return repr(float(x))
        n = digits if digits is not None else self.dps
        return mpmath.nstr(x, n, strip_zeros=False)

    def __repr__(self) -> str:
        return "NumericField(double)" if self.is_double else f"NumericField(dps={self.dps})"


#: Shared default field: IEEE double precision.
DOUBLE = NumericField()
