"""Signalling dimension of delta-noisy channels: closed form vs prefix test.

Tabulates ceil((1-delta) n + delta) against the smallest d passing the
binomial prefix-sum criterion, then prints partial replacer channel bounds.
"""

from fractions import Fraction

import numpy as np

from chansim.certify import (
    noisy_signalling_dimension,
    permutohedron_simulable_by_d,
    replacer_bounds,
)
from chansim.channels import noisy_classical_extremals

print("signalling dimension of the delta-noisy n-state channel")
print("n \\ delta", "  ".join(f"{k}/8" for k in range(9)))
for n in range(2, 9):
    row = []
    for k in range(9):
        delta = Fraction(k, 8)
        formula = noisy_signalling_dimension(n, delta)
        ext = np.sort(noisy_classical_extremals(n, delta)[0])
        smallest = next(
            d for d in range(1, n + 1) if permutohedron_simulable_by_d(ext, d) is None
        )
        assert formula == smallest
        row.append(formula)
    print(f"n={n}:      ", "    ".join(str(d) for d in row))
print("(every entry double-checked against the prefix-sum criterion)")

print("\npartial replacer channel, m = n = 4:")
for k in (1, 2, 4, 6):
    delta = Fraction(k, 8)
    mixed = replacer_bounds(4, delta, spectrum=np.ones(4) / 4, n=4)
    print(
        f"  delta={k}/8: bounds [{mixed.lower}, {mixed.upper}], "
        f"maximally mixed replacement -> exact {mixed.exact}"
    )
