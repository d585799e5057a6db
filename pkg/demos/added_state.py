"""Two candidate photon-added QFIs, and which state each one belongs to.

``qfi_added`` evaluates a closed form that is exactly the QFI of the mixture
[(N+1)W⁺ + W]/(N+2) of the photon-added state W⁺ and the input Gaussian W.
The moment integral and the Fock-basis fidelity both follow a†ρa/(N+1).
This script shows the two families side by side.
"""

import math

import numpy as np

from photonqfi import ParamJet, qfi_added, qfi_fock, qfi_moment, theta_derivative, wigner
from photonqfi.phase_space import mean_photon, mean_photon_derivative, moment_integral, product


def mixture_qfi(jet):
    s = jet.state
    n, dn = mean_photon(s), mean_photon_derivative(jet)
    w_add, w = wigner(s, "added"), wigner(s)
    d_add = theta_derivative(jet, "added") * (n + 1) + w_add * dn
    d_mix = (d_add + theta_derivative(jet)) / (n + 2) - (w_add * (n + 1) + w) * (dn / (n + 2) ** 2)
    return 4 * math.pi * moment_integral(product(d_mix, d_mix))


def main():
    vacuum = ParamJet.make(0, 0, 1, 1)
    origin = wigner(vacuum.state, "added")(0.0, 0.0)
    print(f"added vacuum: W(0,0) = {origin:.6f} (one-photon state: -1/pi = {-1 / math.pi:.6f})")

    print("\n jet (xbar, pbar, gamma, x', p', gamma')           closed     mixture     moment       fock")
    rng = np.random.default_rng(3)
    jets = [vacuum] + [
        ParamJet.make(*rng.uniform(-1.5, 1.5, 2), rng.uniform(0.5, 2), *rng.uniform(-1, 1, 3)) for _ in range(4)
    ]
    for jet in jets:
        s = jet.state
        label = f"({s.xbar:+.2f}, {s.pbar:+.2f}, {s.gamma:.2f}, {jet.dxbar:+.2f}, {jet.dpbar:+.2f}, {jet.dgamma:+.2f})"
        print(
            f" {label:<46} {qfi_added(jet).value:10.5f} {mixture_qfi(jet):10.5f}"
            f" {qfi_moment(jet, 'add').value:10.5f} {qfi_fock(jet, 'add').value:10.5f}"
        )


if __name__ == "__main__":
    main()
