"""Single-photon heralding on a weak beam-splitter tap.

A squeezed vacuum meets the vacuum on a beam splitter with mixing angle δ;
one photon in the tap mode heralds an approximately photon-subtracted state.
Compares the closed-form success probability with a full two-mode simulation
and checks the heralded state against the ideal subtracted state.
"""

import math

import numpy as np

from photonqfi.fock import (
    SqueezeParams,
    apply_beam_splitter,
    fidelity,
    herald_probability_closed,
    herald_single_photon,
    squeezed_coherent,
    subtract_fock,
)


def main():
    print("   r   delta     P1 closed     P1 simulated   fidelity to a|psi>")
    for r in (0.5, 1.0, 2.0):
        source = squeezed_coherent(SqueezeParams(0j, r), max_cutoff=2048)
        ideal = subtract_fock(source)
        for delta in (0.01, 0.2, math.pi / 4):
            state, p1 = herald_single_photon(apply_beam_splitter(source.tensor_vacuum(), delta))
            closed = herald_probability_closed(r, delta)
            print(f"{r:5.1f} {delta:7.3f}  {closed:12.6e}  {p1:12.6e}   {fidelity(state, ideal):.6f}")

    deltas = np.linspace(0, math.pi / 2, 2001)
    probs = [herald_probability_closed(2.0, d) for d in deltas]
    k = int(np.argmax(probs))
    print(f"\nbest success probability at r=2: {probs[k]:.4f} for delta={deltas[k]:.4f}")


if __name__ == "__main__":
    main()
