#!/usr/bin/env python3
"""Why the unreduced A block is numerically treacherous, and the parity cure.

A threefold barrier splits each doubly degenerate free-rotor A level into a
pair separated by only O(lambda^(2n)).  Finding both members as roots of one
characteristic polynomial demands resolving nearly identical roots; split by
parity, each block has well separated roots at every barrier strength.
"""

from c3rotor import (
    Coupling,
    NumericField,
    Species,
    combined_a_spectrum,
    solve_spectrum,
    tunneling_splitting,
)

LAM = 0.1

print(f"A-symmetry spectrum at barrier strength {LAM}")
print("=" * 60)

raw = solve_spectrum(Species.RAW_A, Coupling.real(LAM), 5)
print("\nunreduced A block (single characteristic polynomial):")
for entry in raw.entries:
    print(f"  level {entry.level}:  {float(entry.value):+.14f}")

merged = combined_a_spectrum(Coupling.real(LAM), 5)
print("\nsame five levels, solved per parity block and merged:")
for entry in merged.entries:
    print(f"  level {entry.level} ({entry.species.value:2s}): {float(entry.value):+.14f}")

print("""
The pair near 9 is split by ~5.6e-4, the pair near 36 by ~4.8e-10: already
at the edge of what double precision can see in one polynomial.  The next
pair (near 81) splits by ~4e-17 and is flatly invisible to doubles, yet per
parity block each value is an easy, isolated root.
""")

print("tunneling splittings, each member from its own parity block:")
field = NumericField(30)
for n in (1, 2, 3):
    delta = tunneling_splitting(n, "0.1", tol=1e-24, field=field)
    print(f"  pair n={n}:  {field.format(delta, 8)}")

print("\nscaling: the n-th splitting opens like lambda^(2n):")
for n in (1, 2):
    d1 = float(tunneling_splitting(n, "0.02", tol=1e-24, field=field))
    d2 = float(tunneling_splitting(n, "0.04", tol=1e-24, field=field))
    print(f"  n={n}: doubling lambda multiplies the gap by "
          f"{d2 / d1:.3f} ~ 2^{2 * n} = {2 ** (2 * n)}")
