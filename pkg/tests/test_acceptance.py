"""Acceptance suite: one test per shipped guarantee, at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion, including measured runtimes.
"""

import contextlib
import io
import math
import random
import time
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from c3rotor import (
    Coupling,
    NumericField,
    Species,
    build_block,
    complex_pair_continuation,
    dense_oracle,
    ep_scan,
    figure_data,
    find_a_exceptional_point,
    find_exceptional_point,
    parity_assignment,
    rs_series,
    solve_spectrum,
    tunneling_splitting,
)
from c3rotor.cli import main as cli_main
from c3rotor.spectral import _starting_truncation

REF_VALUES = [8.99990740760586, 9.00046293268167, 36.0000370368357, 36.0000370373120]
GE1 = "2.9356105095073260590"
EPS_E1 = "2.6226454301444952679"
GE2 = "6.6094587620331389653"
EPS_E2 = "4.6995725311868146666"


def report(n, text):
    print(f"\nACCEPTANCE {n}: PASS - {text}")


def _run_cli(*args):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(list(args))
    assert code == 0, f"cli exited {code}"
    rows = []
    for line in buf.getvalue().splitlines():
        if line.startswith("#") or line.startswith("species"):
            continue
        rows.append(line.split(","))
    return rows


def test_criterion_1_reference_eigenvalues():
    t0 = time.perf_counter()
    rows = _run_cli("spectrum", "--species", "rawA", "--lambda", "0.1", "--levels", "5")
    t_double = time.perf_counter() - t0
    vals = [float(r[2]) for r in rows]
    for got, want in zip(vals[1:], REF_VALUES):
        assert got == pytest.approx(want, abs=1e-9)

    t0 = time.perf_counter()
    rows = _run_cli(
        "spectrum", "--species", "rawA", "--lambda", "0.1",
        "--levels", "5", "--precision", "30", "--tol", "1e-15",
    )
    t_ext = time.perf_counter() - t0
    with mpmath.workdps(40):
        for row, want in zip(rows[1:], REF_VALUES):
            assert abs(mpmath.mpf(row[2]) - mpmath.mpf(repr(want))) < 5e-11
    assert t_double < 1.0 and t_ext < 1.0
    report(1, f"all four 15-digit eigenvalues at lambda=0.1 "
              f"(double {t_double:.2f}s @1e-9, 30-digit {t_ext:.2f}s @5e-11)")


A_SERIES = {
    (Species.A_PLUS, 0): [F(0), F(-1, 18), F(7, 23328), F(-29, 8503056)],
    (Species.A_MINUS, 0): [F(9), F(-1, 108), F(5, 2519424), F(-289, 293865615360)],
    (Species.A_PLUS, 1): [F(9), F(5, 108), F(-763, 2519424), F(1002401, 293865615360)],
    (Species.A_MINUS, 1): [F(36), F(1, 270), F(-317, 157464000), F(10049, 10044234900000)],
    (Species.A_PLUS, 2): [F(36), F(1, 270), F(433, 157464000), F(-5701, 10044234900000)],
    (Species.A_MINUS, 2): [
        F(81), F(1, 630), F(187, 8001504000), F(-5861633, 342986069260800000)
    ],
    (Species.A_PLUS, 3): [
        F(81), F(1, 630), F(187, 8001504000), F(6743617, 342986069260800000)
    ],
}
E_SERIES = {
    0: [F(1), F(-1, 10), F(83, 32000), F(-4581, 30800000)],
    1: [F(4), F(1, 14), F(-143, 54880), F(2601, 17479280)],
    2: [F(16), F(1, 110), F(383, 37268000), F(-72621, 958253450000)],
    3: [F(25), F(1, 182), F(563, 385828352), F(144549, 30352923537664)],
    4: [F(49), F(1, 374), F(1043, 8370179840), F(90081, 3366013416487040)],
}


def test_criterion_2_exact_rational_series():
    t0 = time.perf_counter()
    checked = 0
    for (species, level), expected in A_SERIES.items():
        got = rs_series(species, level, 6)
        assert list(got.coeffs) == expected  # exact equality, zero tolerance
        checked += len(expected)
    for level, expected in E_SERIES.items():
        got = rs_series(Species.E_A, level, 6)
        assert list(got.coeffs) == expected
        checked += len(expected)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(2, f"{checked} rational coefficients reproduced exactly ({elapsed:.2f}s)")


def test_criterion_3_parity_assignment():
    assignments = set()
    for lam in (0.1, 1.0, 5.0):
        result = parity_assignment(3, lam, tol=1e-12)
        assert result["max_defect"] < 1e-12
        for n in (1, 2, 3):
            pair = result["pairs"][n]
            assignments.add((pair["lower"], pair["upper"]))
    assert assignments == {(Species.A_MINUS, Species.A_PLUS)}
    report(3, "per-block eigenvalues match the combined spectrum within 1e-12 "
              "for n=1..3 at lambda in {0.1, 1, 5}; the determined assignment is "
              "lower=A- / upper=A+ for every pair (the even block hosts the "
              "upper member), settling the suggested labeling the other way")


def _check_ep(ep, g_ref, e_ref):
    with mpmath.workdps(40):
        g, e = mpmath.mpf(g_ref), mpmath.mpf(e_ref)
        assert abs(mpmath.mpf(ep.g) - g) / g < mpmath.mpf("1e-19")
        assert abs(mpmath.mpf(ep.energy) - e) / e < mpmath.mpf("1e-19")


def test_criterion_4_exceptional_points():
    t0 = time.perf_counter()
    seeds = [s for s in ep_scan(Species.E_A, (0.0, 5.0), 0.05, 2) if s.pair == (0, 1)]
    ep_e = find_exceptional_point(Species.E_A, (0, 1), (seeds[0].g, seeds[0].energy), 20)
    t_e = time.perf_counter() - t0
    _check_ep(ep_e, GE1, EPS_E1)

    t0 = time.perf_counter()
    ep_a = find_a_exceptional_point((0, 1), (0.0, 10.0), 0.05, 20)
    t_a = time.perf_counter() - t0
    _check_ep(ep_a, GE2, EPS_E2)
    assert ep_a.species is Species.A_PLUS
    assert t_e < 60.0 and t_a < 60.0
    report(4, f"both coalescence points to 20 digits (rel < 1e-19): "
              f"E pair {t_e:.1f}s, A pair (hosted by A+) {t_a:.1f}s")


def test_criterion_5_splitting_scaling():
    t0 = time.perf_counter()
    lams = ("0.02", "0.04", "0.08")
    slopes = {}
    for n, dps, tol in ((1, None, 1e-12), (2, 30, 1e-20), (3, 40, 1e-30)):
        field = NumericField(dps) if dps else None
        ds = [
            float(tunneling_splitting(n, lam, tol,
                                      field if field else NumericField()))
            for lam in lams
        ]
        xs = [math.log(float(F(lam))) for lam in lams]
        ys = [math.log(d) for d in ds]
        slope = (ys[-1] - ys[0]) / (xs[-1] - xs[0])
        slopes[n] = slope
        assert slope == pytest.approx(2 * n, abs=0.05)
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    report(5, "log-log splitting slopes "
              + ", ".join(f"n={n}: {s:.4f} (want {2*n})" for n, s in slopes.items())
              + f" ({elapsed:.1f}s)")


def test_criterion_6_asymptotic_remainder():
    from c3rotor import asymptotic_energy, combined_a_spectrum

    residuals = {}
    for lam in (1e3, 1e4):
        spec = combined_a_spectrum(Coupling.real(lam), 4, tol=1e-8)
        residuals[lam] = [
            abs(float(spec.values()[v]) - asymptotic_energy(v, lam)) for v in range(4)
        ]
    for v in range(4):
        ratio = residuals[1e4][v] / residuals[1e3][v]
        assert 0.5 < ratio < 2.0
    report(6, "deep-well remainder bounded: residual ratios (1e4 vs 1e3) = "
              + ", ".join(f"{residuals[1e4][v] / residuals[1e3][v]:.3f}"
                          for v in range(4)))


def test_criterion_7_oracle_equivalence():
    rng = random.Random(20240811)
    worst_dense = worst_even = worst_ee = 0.0
    for _ in range(40):
        lam = rng.uniform(0.0, 50.0)
        species = rng.choice(list(Species))
        k = rng.randint(1, 10)
        n = _starting_truncation(Coupling.real(lam), k)
        rec = solve_spectrum(species, Coupling.real(lam), k, tol=1e-13, truncation=n)
        dense = dense_oracle(build_block(species, Coupling.real(lam), n), k)
        worst_dense = max(
            worst_dense,
            max(abs(float(a) - float(b)) for a, b in zip(rec.values(), dense.values())),
        )
        neg = solve_spectrum(species, Coupling.real(-lam), k, tol=1e-13, truncation=n)
        worst_even = max(
            worst_even,
            max(abs(float(a) - float(b)) for a, b in zip(rec.values(), neg.values())),
        )
        ka = rng.randint(1, 10)
        ea = solve_spectrum(Species.E_A, Coupling.real(lam), ka, tol=1e-13)
        eb = solve_spectrum(Species.E_B, Coupling.real(lam), ka, tol=1e-13)
        worst_ee = max(
            worst_ee,
            max(abs(float(a) - float(b)) for a, b in zip(ea.values(), eb.values())),
        )
    assert worst_dense < 1e-12
    assert worst_even < 1e-12
    assert worst_ee < 1e-12
    report(7, f"40 randomized cases: |recurrence - dense| <= {worst_dense:.2e}, "
              f"evenness defect <= {worst_even:.2e}, E-degeneracy defect <= "
              f"{worst_ee:.2e} (all < 1e-12)")


def test_criterion_8_broken_phase():
    seeds = ep_scan(Species.E_A, (0.0, 5.0), 0.05, 2)
    ep = find_exceptional_point(Species.E_A, (0, 1), (seeds[0].g, seeds[0].energy), 20)
    g_e = float(ep.g)

    from c3rotor.blocks import diagonal_energies, unit_offdiagonal_products

    branches = {}
    for frac in (1.01, 1.04):
        g = frac * g_e
        branch = complex_pair_continuation(Species.E_A, (0, 1), ep, g)
        assert branch.value.imag > 0
        diag = diagonal_energies(Species.E_A, ep.truncation)
        units = unit_offdiagonal_products(Species.E_A, len(diag))
        m = np.diag(np.asarray(diag, dtype=complex))
        for k, u in enumerate(units):
            b = 1j * g * math.sqrt(float(u))
            m[k, k + 1] = b
            m[k + 1, k] = b
        eigs = np.linalg.eigvals(m)
        nearest = eigs[np.argmin(np.abs(eigs - branch.value))]
        assert abs(nearest - branch.value) < 1e-8
        conj = eigs[np.argmin(np.abs(eigs - branch.value.conjugate()))]
        assert abs(conj - branch.value.conjugate()) < 1e-8
        branches[frac] = branch.value
    ratio = branches[1.04].imag / branches[1.01].imag
    assert ratio == pytest.approx(2.0, abs=0.1)
    report(8, f"conjugate pairs beyond g_e verified against dense complex "
              f"eigensolve to 1e-8; imaginary-part ratio {ratio:.3f} (want 2.0 +- 0.1)")


def test_criterion_9_figure_datasets():
    fig1 = figure_data(1, samples=400)

    def sign_changes(lo, hi):
        vals = [v for e, v in fig1.rows if lo <= float(e) <= hi]
        return sum(1 for a, b in zip(vals, vals[1:]) if a * b < 0)

    assert sign_changes(8.9, 9.1) == 2
    assert sign_changes(35.9, 36.1) == 2

    fig2 = figure_data(2, lam_max=20.0, samples=10)
    assert len(fig2.rows) == 11

    fig3 = figure_data(3, samples=40)
    g_e = fig3.meta["g_e_E"]
    step = 1.25 * g_e / 40
    real_rows = [(r[1], r[3] - r[2]) for r in fig3.rows if r[0] == "E" and r[4] == 0.0]
    g_min, _ = min(real_rows, key=lambda t: t[1])
    assert abs(g_min - g_e) <= step + 1e-9

    fig4 = figure_data(4, g_max=6.0, g_step=0.5, levels=4)
    assert fig4.rows
    report(9, "all four figure datasets generated; compressed characteristic "
              "shows exactly two sign changes in [8.9, 9.1] and [35.9, 36.1]; "
              "E-curve minimum gap sits at the coalescence point within the "
              "scan resolution")
