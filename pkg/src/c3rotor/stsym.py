"""Spectra and exceptional points of the imaginary-barrier rotor.

With barrier i*g*cos(3*phi) the blocks stop being Hermitian, but the
combined rotation-by-pi/3 and time-reversal operation is an antiunitary
symmetry of the operator, so eigenvalues are real or come in complex
conjugate pairs.  Off-diagonal matrix elements enter the determinant
recursion only through their products -(g/2)**2, which are real and
negative: the whole unbroken phase is handled in real arithmetic.

Negative products void the Sturm count, so real eigenvalues are located by
an adaptive sign-change scan of the characteristic value, with dip
refinement near local magnitude minima where a nearly coalesced pair hides
between grid points.  An exceptional point, where two real eigenvalues
merge and turn into a conjugate pair, is a simultaneous root of the
characteristic value and its energy derivative; it is refined by a 2x2
Newton iteration with the full Jacobian of exact recursion derivatives in
extended precision.  Past the exceptional point the complex branch is
followed by complex Newton continuation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .blocks import Species, diagonal_energies, unit_offdiagonal_products
from .fields import DOUBLE, NumericField
from .recurrence import (
    ConvergenceError,
    characteristic_raw,
    complex_characteristic,
    newton_correction,
    polish_bracketed_root,
)
from .spectral import Spectrum, SpectrumEntry


@dataclass(frozen=True)
class ExceptionalPoint:
    """Coalescence of two eigenvalues at imaginary barrier strength g.

    ``residual_d`` and ``residual_dd`` are the magnitudes of the final
    Newton update for the coalescence system (D = 0, dD/deps = 0), i.e. the
    estimated location error in energy and in g.  The raw characteristic
    mantissa is not reported: at a double root the terminal minors shrink
    together and the pair rescaling keeps the mantissa order one.  By
    evenness in g the mirror point at -g is implied and only the positive
    representative is stored.
    """

    species: Species
    pair: tuple[int, int]
    g: object
    energy: object
    residual_d: float
    residual_dd: float
    precision_digits: int
    truncation: int


@dataclass(frozen=True)
class ComplexPair:
    """One member of a conjugate eigenvalue pair in the broken phase.

    ``value`` has positive imaginary part; its partner is the exact
    conjugate and is not stored separately.
    """

    species: Species
    pair: tuple[int, int]
    g: float
    value: complex


@dataclass(frozen=True)
class EPSeed:
    g: float
    energy: float
    pair: tuple[int, int]


def _signed_units(species: Species, size: int):
    return [-u for u in unit_offdiagonal_products(species, size)]


def _log_mag(mantissa, exponent) -> float:
    m = abs(float(mantissa))
    if m == 0.0:
        return float("-inf")
    return exponent + math.log10(m)


def _scan_grid(diag, k: int, g: float):
    """Scan window and initial spacing for the k lowest unperturbed levels."""
    lows = sorted(diag)[: k + 1]
    gaps = [b - a for a, b in zip(lows, lows[1:]) if b > a]
    h = min(1.0, (min(gaps) if gaps else 1.0) / 8)
    lo = lows[0] - abs(g) - 1.0
    hi = lows[min(k - 1, len(lows) - 1)] + abs(g) + 1.0
    return lo, hi, h


def _refine_dip(evaluate, left, right, depth: int = 60):
    """Ternary search for the magnitude minimum of the characteristic value.

    Returns (eps_min, sign_at_min, logmag_at_min).  Used where a root pair
    may hide between grid points without a sign change.
    """
    a, b = left, right
    for _ in range(depth):
        m1 = a + (b - a) / 3
        m2 = b - (b - a) / 3
        if evaluate(m1)[1] <= evaluate(m2)[1]:
            b = m2
        else:
            a = m1
    mid = (a + b) / 2
    s, lm = evaluate(mid)
    return mid, s, lm


def real_spectrum_st(
    species: Species,
    g,
    k: int,
    tol: float = 1e-10,
    field: NumericField = DOUBLE,
    truncation: int | None = None,
) -> Spectrum:
    """Real eigenvalues of the imaginary-barrier block among the k lowest levels.

    Scans the characteristic value over an adaptive energy grid, bisects
    every sign change, and ternary-refines local magnitude minima to catch
    nearly coalesced pairs.  Returns however many real roots exist in the
    window; fewer than k signals a broken-symmetry pair.  Never fabricates
    complex roots.
    """
    if k < 1:
        raise ValueError("need at least one level")
    g = float(g)
    n = truncation if truncation is not None else (
        k + math.ceil(2 * abs(g) ** 0.5) + 10
    )
    diag = diagonal_energies(species, n)
    units = _signed_units(species, len(diag))
    one = field.convert(1)
    g2 = field.convert(g) ** 2
    prods = [g2 * u.numerator / u.denominator for u in units]
    tol_f = field.convert(tol)

    def evaluate(x):
        d, expo, _ = characteristic_raw(diag, prods, x, one)
        sign = 0 if d == 0 else (1 if d > 0 else -1)
        return sign, _log_mag(d, expo)

    lo, hi, h = _scan_grid(diag, k, g)
    grid = [field.convert(lo + i * h) for i in range(int((hi - lo) / h) + 2)]
    samples = [evaluate(x) for x in grid]

    roots = []

    def solve_between(a, b):
        x, _ = polish_bracketed_root(diag, prods, a, b, tol_f, one)
        roots.append(x)

    for i in range(len(grid) - 1):
        s0, _ = samples[i]
        s1, _ = samples[i + 1]
        if s0 != 0 and s1 != 0 and s0 != s1:
            solve_between(grid[i], grid[i + 1])
        elif s0 == 0:
            roots.append(grid[i])
    # Dip refinement: local minima of |D| without a sign change can hide a
    # close root pair entirely inside two grid cells.
    for i in range(1, len(grid) - 1):
        s_prev, m_prev = samples[i - 1]
        s_cur, m_cur = samples[i]
        s_next, m_next = samples[i + 1]
        if s_prev == s_cur == s_next and m_cur < m_prev and m_cur < m_next:
            eps_min, s_min, _ = _refine_dip(evaluate, grid[i - 1], grid[i + 1])
            if s_min != 0 and s_min != s_cur:
                solve_between(grid[i - 1], eps_min)
                solve_between(eps_min, grid[i + 1])
            elif s_min == 0:
                roots.append(eps_min)

    roots.sort()
    deduped = []
    for r in roots:
        if not deduped or abs(r - deduped[-1]) > 10 * tol_f + 1e-13:
            deduped.append(r)
    deduped = deduped[:k]
    entries = tuple(SpectrumEntry(species, j, r) for j, r in enumerate(deduped))
    residuals = tuple(newton_correction(diag, prods, r, one) for r in deduped)
    return Spectrum(entries, n, residuals)


def ep_scan(
    species: Species,
    g_range: tuple[float, float],
    g_step: float,
    k: int,
    field: NumericField = DOUBLE,
) -> list[EPSeed]:
    """Sweep g and emit coalescence seed candidates for the EP refiner.

    A seed is emitted when a tracked root pair disappears between two
    consecutive g samples (midpoint of the last bracket) or when its gap
    passes through a local minimum.  An empty list means no coalescence was
    detected in the range.
    """
    g_lo, g_hi = g_range
    if not (0 <= g_lo < g_hi <= 100):
        raise ValueError("scan range must lie within [0, 100]")
    if g_step <= 0:
        raise ValueError("scan step must be positive")
    seeds: list[EPSeed] = []
    prev_roots: list[float] | None = None
    prev_g = None
    gap_history: dict[int, list[tuple[float, float, float]]] = {}
    g = g_lo
    while g <= g_hi + 1e-12:
        if g == 0.0:
            g_eval = min(g_step / 4, 1e-3)  # degenerate grid start; nudge off zero
        else:
            g_eval = g
        spec = real_spectrum_st(species, g_eval, k, tol=1e-10, field=field)
        vals = [float(v) for v in spec.values()]
        if prev_roots is not None and len(vals) < len(prev_roots):
            j = len(vals) - (len(vals) % 2)
            if j + 1 < len(prev_roots):
                seeds.append(
                    EPSeed(
                        (prev_g + g_eval) / 2,
                        (prev_roots[j] + prev_roots[j + 1]) / 2,
                        (j, j + 1),
                    )
                )
        for j in range(len(vals) - 1):
            gap_history.setdefault(j, []).append(
                (g_eval, vals[j + 1] - vals[j], (vals[j] + vals[j + 1]) / 2)
            )
        prev_roots, prev_g = vals, g_eval
        g += g_step
    for j, hist in gap_history.items():
        if j % 2:
            continue  # pairs coalesce as (even, odd) partners
        for (g0, d0, _), (g1, d1, e1), (g2, d2, _) in zip(hist, hist[1:], hist[2:]):
            if d1 < d0 and d1 < d2:
                seeds.append(EPSeed(g1, e1, (j, j + 1)))
    seen = []
    unique = []
    for seed in sorted(seeds, key=lambda s: s.g):
        if any(p == seed.pair and abs(s - seed.g) < 2 * g_step for p, s in seen):
            continue
        seen.append((seed.pair, seed.g))
        unique.append(seed)
    return unique


def _ep_system(diag, units, eps, g, one):
    """D and its derivatives (d/de, d/dg, d2/de2, d2/dedg) under one rescaling.

    Products depend on g as p_k = u_k * g**2, so dp_k/dg = 2*u_k*g; all five
    sequences ride the same power-of-ten rescaling, keeping Newton ratios
    exact.
    """
    g2 = g * g
    prods = [u * g2 for u in units]
    dprods = [2 * u * g for u in units]
    zero = one * 0
    d_p, d_c = one, diag[0] - eps
    e_p, e_c = zero, -one
    gg_p, gg_c = zero, zero
    ee_p, ee_c = zero, zero
    eg_p, eg_c = zero, zero
    expo = 0
    for k in range(1, len(diag)):
        a = diag[k] - eps
        p = prods[k - 1]
        dp = dprods[k - 1]
        d_n = a * d_c - p * d_p
        e_n = -d_c + a * e_c - p * e_p
        gg_n = a * gg_c - p * gg_p - dp * d_p
        ee_n = -2 * e_c + a * ee_c - p * ee_p
        eg_n = -gg_c + a * eg_c - p * eg_p - dp * e_p
        d_p, d_c = d_c, d_n
        e_p, e_c = e_c, e_n
        gg_p, gg_c = gg_c, gg_n
        ee_p, ee_c = ee_c, ee_n
        eg_p, eg_c = eg_c, eg_n
        m = max(abs(float(d_c)), abs(float(d_p)))
        if m != 0.0 and (m > 1.0 or m < 1e-2):
            shift = math.ceil(math.log10(m))
            scale = (one * 10) ** shift
            d_p /= scale; d_c /= scale
            e_p /= scale; e_c /= scale
            gg_p /= scale; gg_c /= scale
            ee_p /= scale; ee_c /= scale
            eg_p /= scale; eg_c /= scale
            expo += shift
    return d_c, e_c, gg_c, ee_c, eg_c, expo


def _units_in_field(species, size, field):
    return [
        field.convert(Fraction(-u.numerator, u.denominator))
        for u in unit_offdiagonal_products(species, size)
    ]


def _newton_ep(diag, units, eps, g, field, precision_digits):
    """Returns (eps, g, last_step_eps, last_step_g) after convergence."""
    step_tol = field.convert(10) ** (-(precision_digits + 2))
    for _ in range(80):
        d, de, dg, dee, deg = _ep_system(diag, units, eps, g, field.convert(1))[:5]
        det = de * deg - dg * dee
        norm = abs(de * deg) + abs(dg * dee)
        if norm == 0 or abs(det) < 1e-25 * norm:
            raise ConvergenceError(
                "coalescence Jacobian nearly singular (higher-order degeneracy?)"
            )
        step_e = (-d * deg + dg * de) / det
        step_g = (-de * de + d * dee) / det
        cap = 1 + abs(g) / 4
        biggest = max(abs(step_e), abs(step_g))
        if biggest > cap:
            step_e *= cap / biggest
            step_g *= cap / biggest
        eps += step_e
        g += step_g
        if g < 0:
            g = -g  # spectrum is even in g; keep the positive representative
        if max(abs(step_e), abs(step_g)) < step_tol:
            return eps, g, abs(float(step_e)), abs(float(step_g))
    raise ConvergenceError("exceptional-point Newton did not converge (bad seed?)")


def find_exceptional_point(
    species: Species,
    pair: tuple[int, int],
    seed,
    precision_digits: int = 20,
) -> ExceptionalPoint:
    """Refine a coalescence seed to a certified exceptional point.

    Solves D(eps, g) = 0, dD/deps(eps, g) = 0 by full-Jacobian Newton in an
    extended field (at least 10 guard digits beyond the requested
    precision), raising the truncation until the location is stable at the
    requested precision.

    Parameters
    ----------
    species : Species
        Block hosting the coalescing pair.
    pair : (int, int)
        Level indices of the merging eigenvalues, lower first.
    seed : (g, energy)
        Starting point, typically from :func:`ep_scan`.
    precision_digits : int
        Certified decimal digits of the result.
    """
    if precision_digits < 1:
        raise ValueError("precision_digits must be positive")
    field = NumericField(max(30, precision_digits + 10))
    g_seed, eps_seed = float(seed[0]), float(seed[1])
    n = max(12, pair[1] + math.ceil(2 * abs(g_seed) ** 0.5) + 10)
    tol_stable = field.convert(10) ** (-precision_digits)
    prev = None
    for _ in range(30):
        diag = diagonal_energies(species, n)
        units = _units_in_field(species, len(diag), field)
        if prev is None:
            eps, g = field.convert(eps_seed), field.convert(g_seed)
        else:
            eps, g = prev
        eps, g, res_e, res_g = _newton_ep(diag, units, eps, g, field, precision_digits)
        if prev is not None and abs(g - prev[1]) < tol_stable * (1 + abs(g)):
            return ExceptionalPoint(
                species,
                tuple(pair),
                g,
                eps,
                res_e,
                res_g,
                precision_digits,
                n,
            )
        prev = (eps, g)
        n += 6
    raise ConvergenceError("exceptional point did not stabilize under truncation growth")


def find_a_exceptional_point(
    pair: tuple[int, int],
    g_range: tuple[float, float] = (0.0, 10.0),
    g_step: float = 0.05,
    precision_digits: int = 20,
) -> ExceptionalPoint:
    """Locate the A-species exceptional point, searching both parity blocks.

    The parity block hosting the coalescence is established numerically from
    the scans; the returned record names it in ``species``.
    """
    candidates = []
    for sp in (Species.A_PLUS, Species.A_MINUS):
        for seed in ep_scan(sp, g_range, g_step, max(pair[1] + 1, 2)):
            if seed.pair == tuple(pair):
                candidates.append((sp, seed))
    if not candidates:
        raise ConvergenceError(
            f"no A-block coalescence of pair {pair} found in {g_range}"
        )
    sp, seed = min(candidates, key=lambda c: c[1].g)
    return find_exceptional_point(sp, pair, (seed.g, seed.energy), precision_digits)


def complex_pair_continuation(
    species: Species,
    pair: tuple[int, int],
    ep: ExceptionalPoint,
    g,
) -> ComplexPair:
    """Follow the complex-conjugate branch from an exceptional point to g.

    Near the branch point the pair behaves like
    eps_e +/- sqrt(c * (g - g_e)); the local coefficient c from the
    exceptional-point derivatives seeds a complex Newton iteration that is
    then path-continued in g.  The member with positive imaginary part is
    returned; its partner is the exact conjugate.
    """
    g = float(g)
    g_e = float(ep.g)
    eps_e = float(ep.energy)
    if g <= g_e:
        raise ValueError(f"continuation needs g > g_e = {g_e}")
    n = ep.truncation
    diag = diagonal_energies(species, n)
    units = [float(u) for u in _units_in_field(species, len(diag), DOUBLE)]

    _, _, dg_, dee_, _, _ = _ep_system(diag, units, eps_e, g_e, 1.0)
    if dee_ == 0:
        raise ConvergenceError("flat coalescence: cannot seed the complex branch")
    branch_coeff = -2 * dg_ / dee_  # (eps - eps_e)^2 ~ branch_coeff * (g - g_e)

    steps = 8
    z = None
    for i in range(1, steps + 1):
        gi = g_e + (g - g_e) * i / steps
        prods = [u * gi * gi for u in units]
        if z is None:
            delta = complex(branch_coeff * (gi - g_e)) ** 0.5
            if delta.imag < 0:
                delta = -delta
            z = complex(eps_e) + delta
        for _ in range(60):
            d, dd = complex_characteristic(diag, prods, z)
            if dd == 0:
                raise ConvergenceError("vanishing derivative on the complex branch")
            step = d / dd
            z -= step
            if abs(step) < 1e-13 * (1 + abs(z)):
                break
        else:
            raise ConvergenceError(f"complex Newton stalled at g = {gi}")
        if abs(z.imag) < 1e-11 and gi > g_e * (1 + 1e-9):
            raise ConvergenceError(
                "lost the complex branch (iterate collapsed onto the real axis)"
            )
    if z.imag < 0:
        z = z.conjugate()
    return ComplexPair(species, tuple(pair), g, z)
