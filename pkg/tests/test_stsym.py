import math

import mpmath
import numpy as np
import pytest

from c3rotor import (
    ConvergenceError,
    Species,
    complex_pair_continuation,
    ep_scan,
    evaluate_series,
    find_a_exceptional_point,
    find_exceptional_point,
    real_spectrum_st,
    rs_series,
)
from c3rotor.blocks import diagonal_energies, unit_offdiagonal_products

# 20-digit reference coalescence points
GE1 = mpmath.mpf("2.9356105095073260590")
EPS_E1 = mpmath.mpf("2.6226454301444952679")
GE2 = mpmath.mpf("6.6094587620331389653")
EPS_E2 = mpmath.mpf("4.6995725311868146666")


def _ep(species, pair, scan_hi, digits=20):
    seeds = [s for s in ep_scan(species, (0.0, scan_hi), 0.05, pair[1] + 1)
             if s.pair == pair]
    assert seeds, f"no seed for {species} pair {pair}"
    return find_exceptional_point(species, pair, (seeds[0].g, seeds[0].energy), digits)


def test_zero_coupling_returns_squares():
    spec = real_spectrum_st(Species.E_A, 0.0, 4)
    assert [float(v) for v in spec.values()] == pytest.approx([1, 4, 16, 25], abs=1e-9)


def test_small_g_matches_series():
    s = rs_series(Species.E_A, 0, 6)
    pred = evaluate_series(s, lam_squared=-1.0)
    spec = real_spectrum_st(Species.E_A, 1.0, 2)
    assert float(spec.values()[0]) == pytest.approx(pred.value, abs=10 * pred.last_term)


def test_roots_straddle_then_vanish():
    below = real_spectrum_st(Species.E_A, 2.9, 2)
    vals = [float(v) for v in below.values()]
    assert len(vals) == 2
    assert vals[0] < float(EPS_E1) < vals[1]
    above = real_spectrum_st(Species.E_A, 3.0, 2)
    assert len(above) < 2  # merged and complexified


def test_scan_seeds_near_first_coalescence():
    seeds = ep_scan(Species.E_A, (0.0, 5.0), 0.05, 2)
    assert any(
        s.pair == (0, 1) and abs(s.g - 2.94) < 0.1 and abs(s.energy - 2.62) < 0.2
        for s in seeds
    )


def test_scan_empty_below_first_coalescence():
    assert ep_scan(Species.E_A, (0.0, 1.0), 0.05, 2) == []


def test_scan_locates_a_block_host():
    hits = {
        sp: [s for s in ep_scan(sp, (0.0, 8.0), 0.05, 2) if s.pair == (0, 1)]
        for sp in (Species.A_PLUS, Species.A_MINUS)
    }
    hosts = [sp for sp, seeds in hits.items() if seeds]
    assert hosts == [Species.A_PLUS]
    assert abs(hits[Species.A_PLUS][0].g - 6.61) < 0.15


def test_first_e_exceptional_point_to_twenty_digits():
    ep = _ep(Species.E_A, (0, 1), 5.0)
    assert abs(mpmath.mpf(ep.g) - GE1) / GE1 < mpmath.mpf("1e-19")
    assert abs(mpmath.mpf(ep.energy) - EPS_E1) / EPS_E1 < mpmath.mpf("1e-19")
    assert ep.residual_d < 1e-18 and ep.residual_dd < 1e-18
    assert ep.precision_digits == 20


def test_eb_exceptional_point_identical():
    ea = _ep(Species.E_A, (0, 1), 5.0)
    eb = find_exceptional_point(Species.E_B, (0, 1), (2.9, 2.6), 20)
    assert abs(mpmath.mpf(ea.g) - mpmath.mpf(eb.g)) < mpmath.mpf("1e-19")


def test_a_exceptional_point_to_twenty_digits():
    ep = find_a_exceptional_point((0, 1), (0.0, 10.0), 0.05, 20)
    assert ep.species is Species.A_PLUS  # hosting block, found not assumed
    assert abs(mpmath.mpf(ep.g) - GE2) / GE2 < mpmath.mpf("1e-19")
    assert abs(mpmath.mpf(ep.energy) - EPS_E2) / EPS_E2 < mpmath.mpf("1e-19")


def test_reality_below_threshold():
    for frac in (0.5, 0.9, 0.99):
        spec = real_spectrum_st(Species.E_A, frac * float(GE1), 2)
        assert len(spec) == 2, f"E pair lost reality at {frac} g_e"
        spec_a = real_spectrum_st(Species.A_PLUS, frac * float(GE2), 2)
        assert len(spec_a) == 2, f"A+ pair lost reality at {frac} g_e"


def test_exceptional_points_increase_with_level():
    first = _ep(Species.E_A, (0, 1), 5.0, digits=16)
    second = _ep(Species.E_A, (2, 3), 12.0, digits=16)
    assert float(second.g) > float(first.g)


def test_square_root_branch_constant():
    ep = _ep(Species.E_A, (0, 1), 5.0, digits=16)
    g_e = float(ep.g)
    ratios = []
    for frac in (1.001, 1.01, 1.05):
        branch = complex_pair_continuation(Species.E_A, (0, 1), ep, frac * g_e)
        ratios.append(branch.value.imag / math.sqrt(frac * g_e - g_e))
    assert max(ratios) / min(ratios) < 1.05


def test_branch_point_limit():
    ep = _ep(Species.E_A, (0, 1), 5.0, digits=16)
    g_e = float(ep.g)
    branch = complex_pair_continuation(Species.E_A, (0, 1), ep, g_e * (1 + 1e-8))
    assert branch.value.imag == pytest.approx(0.0, abs=1e-3)
    assert branch.value.real == pytest.approx(float(ep.energy), abs=1e-3)
    assert branch.value.imag > 0


def _dense_complex_eigs(species, g, n):
    diag = diagonal_energies(species, n)
    units = unit_offdiagonal_products(species, len(diag))
    m = np.diag(np.asarray(diag, dtype=complex))
    for k, u in enumerate(units):
        b = 1j * g * math.sqrt(float(u))
        m[k, k + 1] = b
        m[k + 1, k] = b
    return np.linalg.eigvals(m)


@pytest.mark.parametrize("frac", [1.01, 1.04])
def test_continuation_against_dense_complex_oracle(frac):
    ep = _ep(Species.E_A, (0, 1), 5.0, digits=16)
    g = frac * float(ep.g)
    branch = complex_pair_continuation(Species.E_A, (0, 1), ep, g)
    eigs = _dense_complex_eigs(Species.E_A, g, ep.truncation)
    nearest = eigs[np.argmin(np.abs(eigs - branch.value))]
    assert abs(nearest - branch.value) < 1e-8
    conj = eigs[np.argmin(np.abs(eigs - branch.value.conjugate()))]
    assert abs(conj - branch.value.conjugate()) < 1e-8


def test_imaginary_ratio_two():
    ep = _ep(Species.E_A, (0, 1), 5.0)
    g_e = float(ep.g)
    b1 = complex_pair_continuation(Species.E_A, (0, 1), ep, 1.01 * g_e)
    b2 = complex_pair_continuation(Species.E_A, (0, 1), ep, 1.04 * g_e)
    assert b2.value.imag / b1.value.imag == pytest.approx(2.0, abs=0.1)


def test_continuation_validation():
    ep = _ep(Species.E_A, (0, 1), 5.0, digits=16)
    with pytest.raises(ValueError):
        complex_pair_continuation(Species.E_A, (0, 1), ep, 0.5 * float(ep.g))


def test_scan_range_validation():
    with pytest.raises(ValueError):
        ep_scan(Species.E_A, (0.0, 200.0), 0.1, 2)
    with pytest.raises(ValueError):
        ep_scan(Species.E_A, (0.0, 5.0), -0.1, 2)


def test_bad_seed_reported():
    with pytest.raises(ConvergenceError):
        find_exceptional_point(Species.E_A, (0, 1), (50.0, 1e4), 20)
