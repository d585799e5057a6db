"""Where the subtracted-state QFI blows up, and why heralding cancels it.

The QFI of a displaced squeezed state after photon subtraction grows without
bound near the vacuum. A heralded source only succeeds with probability P1,
which vanishes at the same rate, so the time-averaged sensitivity stays finite.
"""

import math

import numpy as np

from photonqfi import ParamJet, effective_qfi, qfi_coherent, qfi_subtracted
from photonqfi.fock import herald_probability_closed
from photonqfi.qfi_closed import qfi_subtracted_squeeze_form


def main():
    print("QFI / coherent value for a displacement x̄ (x̄' = 1), rows x̄, columns Γ")
    gammas = [1.001, 1.01, 1.1, 1.5, 2.0]
    print("  xbar  " + "".join(f"{g:>10}" for g in gammas))
    for xbar in (0.01, 0.05, 0.2, 1.0):
        ratios = [qfi_subtracted(ParamJet.make(xbar, 0, g, 1)).value / qfi_coherent(1) for g in gammas]
        print(f"{xbar:6}  " + "".join(f"{v:10.2f}" for v in ratios))

    print("\nsqueezed vacuum, small r: r^2 * QFI tends to 2")
    for r in (1e-1, 1e-2, 1e-3, 1e-4):
        print(f"  r={r:<6g} r^2*QFI = {r * r * qfi_subtracted_squeeze_form(r):.6f}")

    delta = math.pi / 4
    print(f"\nheralded source at delta = pi/4: P1 * QFI tends to {0.5 * math.sin(2 * delta) ** 2}")
    for r in np.geomspace(0.3, 1e-4, 6):
        jet = ParamJet.make(0, 0, math.exp(2 * r), 1)
        p1 = herald_probability_closed(r, delta)
        raw = qfi_subtracted_squeeze_form(r)
        print(f"  r={r:.1e}  P1={p1:.3e}  QFI={raw:.3e}  effective={effective_qfi(jet, r, delta):.5f}")


if __name__ == "__main__":
    main()
