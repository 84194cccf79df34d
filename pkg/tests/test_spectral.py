import random
from fractions import Fraction

import pytest

from c3rotor import (
    ConvergenceError,
    Coupling,
    NumericField,
    Species,
    auto_truncation,
    build_block,
    combined_a_spectrum,
    dense_oracle,
    parity_assignment,
    rs_series,
    solve_spectrum,
    tunneling_splitting,
)
from c3rotor.spectral import _starting_truncation

# 15-digit reference eigenvalues of the unreduced A block at lambda = 0.1
REF = {
    1: 8.99990740760586,
    2: 9.00046293268167,
    3: 36.0000370368357,
    4: 36.0000370373120,
}
# ground level from exact evaluation of its order-6 expansion at lambda = 1/10
REF_GROUND = float(
    Fraction(-1, 18) * Fraction(1, 100)
    + Fraction(7, 23328) * Fraction(1, 100) ** 2
    + Fraction(-29, 8503056) * Fraction(1, 100) ** 3
)


def test_rawa_reference_eigenvalues_double():
    spec = solve_spectrum(Species.RAW_A, Coupling.real(0.1), 5)
    vals = [float(v) for v in spec.values()]
    assert vals[0] == pytest.approx(REF_GROUND, abs=1e-9)
    for j in (1, 2, 3, 4):
        assert vals[j] == pytest.approx(REF[j], abs=1e-9)
    assert all(r < 1e-11 for r in spec.residuals)


def test_rawa_reference_eigenvalues_extended():
    f = NumericField(30)
    spec = solve_spectrum(Species.RAW_A, Coupling.real("0.1"), 5, tol=1e-15, field=f)
    vals = [float(v) for v in spec.values()]
    for j in (1, 2, 3, 4):
        assert vals[j] == pytest.approx(REF[j], abs=5e-11)


def test_ea_zero_coupling_levels():
    spec = solve_spectrum(Species.E_A, Coupling.real(0.0), 4)
    assert [float(v) for v in spec.values()] == [1, 4, 16, 25]


def test_parity_blocks_resolve_the_quasi_degenerate_pair():
    # The lower pair member lives in the odd block, the upper in the even
    # block: the constant basis function pushes the even 9-level up.
    plus = solve_spectrum(Species.A_PLUS, Coupling.real(0.1), 2)
    minus = solve_spectrum(Species.A_MINUS, Coupling.real(0.1), 1)
    assert float(plus.values()[0]) == pytest.approx(REF_GROUND, abs=1e-11)
    assert float(plus.values()[1]) == pytest.approx(REF[2], abs=1e-11)
    assert float(minus.values()[0]) == pytest.approx(REF[1], abs=1e-11)


def test_dense_oracle_agreement():
    block = build_block(Species.RAW_A, Coupling.real(0.1), 14)
    dense = dense_oracle(block, 5)
    rec = solve_spectrum(Species.RAW_A, Coupling.real(0.1), 5, truncation=14)
    for a, b in zip(dense.values(), rec.values()):
        assert float(a) == pytest.approx(float(b), abs=1e-12)


def test_dense_oracle_zero_coupling_exact():
    block = build_block(Species.A_PLUS, Coupling.real(0.0), 5)
    dense = dense_oracle(block, 6)
    assert [float(v) for v in dense.values()] == [0, 9, 36, 81, 144, 225]


def test_dense_oracle_rejects_imaginary():
    block = build_block(Species.E_A, Coupling.imaginary(1.0), 5)
    with pytest.raises(ValueError):
        dense_oracle(block, 2)


def test_e_blocks_degenerate():
    for lam in (0.7, 3.7):
        ea = solve_spectrum(Species.E_A, Coupling.real(lam), 6)
        eb = solve_spectrum(Species.E_B, Coupling.real(lam), 6)
        for a, b in zip(ea.values(), eb.values()):
            assert float(a) == pytest.approx(float(b), abs=1e-13)


def test_spectrum_even_in_barrier_sign():
    for species in (Species.A_PLUS, Species.E_A):
        pos = solve_spectrum(species, Coupling.real(2.3), 5)
        neg = solve_spectrum(species, Coupling.real(-2.3), 5)
        for a, b in zip(pos.values(), neg.values()):
            assert float(a) == pytest.approx(float(b), abs=1e-12)


def test_parity_union_matches_unreduced_block():
    lam = Coupling.real(1.3)
    n = 16
    raw = solve_spectrum(Species.RAW_A, lam, 7, truncation=n)
    plus = solve_spectrum(Species.A_PLUS, lam, 4, truncation=n)
    minus = solve_spectrum(Species.A_MINUS, lam, 4, truncation=n)
    merged = sorted(float(v) for v in plus.values() + minus.values())[:7]
    for a, b in zip(raw.values(), merged):
        assert float(a) == pytest.approx(b, abs=1e-12)


def test_auto_truncation_zero_coupling_immediate():
    n = auto_truncation(Species.A_PLUS, Coupling.real(0.0), 3, 1e-10)
    assert n == _starting_truncation(Coupling.real(0.0), 3) == 11


def test_auto_truncation_small_barrier():
    n = auto_truncation(Species.RAW_A, Coupling.real(0.1), 5, 1e-12)
    assert n <= 30
    # stability against a larger basis, checked through the dense oracle
    a = dense_oracle(build_block(Species.RAW_A, Coupling.real(0.1), n), 5)
    b = dense_oracle(build_block(Species.RAW_A, Coupling.real(0.1), n + 10), 5)
    for x, y in zip(a.values(), b.values()):
        assert float(x) == pytest.approx(float(y), abs=1e-12)


def test_auto_truncation_grows_with_barrier():
    small = auto_truncation(Species.A_PLUS, Coupling.real(0.1), 1, 1e-10)
    large = auto_truncation(Species.A_PLUS, Coupling.real(100.0), 1, 1e-10)
    assert large > small


def test_splitting_reference_values():
    d1 = tunneling_splitting(1, 0.1)
    assert float(d1) == pytest.approx(REF[2] - REF[1], abs=1e-9)
    f = NumericField(30)
    d2 = tunneling_splitting(2, "0.1", tol=1e-20, field=f)
    assert float(d2) == pytest.approx(REF[4] - REF[3], abs=2e-13)
    assert float(d2) == pytest.approx(4.7629777665e-10, rel=1e-9)


def test_splitting_matches_exact_series_prediction():
    # independent route: rational series of both pair members, order 12
    upper = rs_series(Species.A_PLUS, 2, 12)
    lower = rs_series(Species.A_MINUS, 1, 12)
    lam2 = Fraction(1, 100)
    exact = sum(
        (u - l) * lam2**j for j, (u, l) in enumerate(zip(upper.coeffs, lower.coeffs))
    )
    f = NumericField(30)
    d2 = tunneling_splitting(2, "0.1", tol=1e-20, field=f)
    assert float(d2) == pytest.approx(float(exact), rel=1e-10)


def test_splitting_quadratic_limit():
    f = NumericField(30)
    d = tunneling_splitting(1, "0.001", tol=1e-18, field=f)
    assert float(d) / 1e-6 == pytest.approx(1 / 18, abs=1e-9)


def test_splitting_positive_and_validated():
    assert float(tunneling_splitting(1, 0.5)) > 0
    with pytest.raises(ValueError):
        tunneling_splitting(0, 0.5)
    with pytest.raises(ValueError):
        tunneling_splitting(1, 0.0)


def test_combined_spectrum_labels():
    merged = combined_a_spectrum(Coupling.real(0.1), 5)
    species = [e.species for e in merged.entries]
    assert species == [
        Species.A_PLUS,
        Species.A_MINUS,
        Species.A_PLUS,
        Species.A_MINUS,
        Species.A_PLUS,
    ]


def test_parity_assignment_is_determined_numerically():
    report = parity_assignment(2, 1.0)
    assert report["max_defect"] < 1e-12
    for n, pair in report["pairs"].items():
        assert pair["lower"] is Species.A_MINUS
        assert pair["upper"] is Species.A_PLUS


def test_oracle_equivalence_randomized():
    rng = random.Random(2024)
    for _ in range(12):
        lam = rng.uniform(0.0, 50.0)
        species = rng.choice(list(Species))
        k = rng.randint(1, 8)
        n = _starting_truncation(Coupling.real(lam), k)
        rec = solve_spectrum(species, Coupling.real(lam), k, tol=1e-13, truncation=n)
        dense = dense_oracle(build_block(species, Coupling.real(lam), n), k)
        for a, b in zip(rec.values(), dense.values()):
            assert float(a) == pytest.approx(float(b), abs=1e-12)


def test_unreachable_tolerance_raises():
    # the pair at 81 splits ~4e-17, far below double resolution: a 1e-16
    # tolerance cannot be certified
    with pytest.raises(ConvergenceError):
        solve_spectrum(Species.RAW_A, Coupling.real(0.1), 7, tol=1e-16)


def test_input_validation():
    with pytest.raises(ValueError):
        solve_spectrum(Species.RAW_A, Coupling.imaginary(1.0), 2)
    with pytest.raises(ValueError):
        solve_spectrum(Species.RAW_A, Coupling.real(1.0), 0)
    with pytest.raises(ValueError):
        solve_spectrum(Species.RAW_A, Coupling.real(1.0), 2, tol=-1.0)
