"""Wigner function of a photon-subtracted, nearly coherent squeezed state.

Subtracting a photon from a state close to the vacuum punches a negative hole
into the phase-space distribution, while a coherent state is left unchanged.
Prints the depth of the hole and a coarse character map of the surface.
"""

import numpy as np

from photonqfi import GaussianSpec, wigner
from photonqfi.phase_space import evaluate

SHADES = " .:-=+*#%@"


def character_map(values, negative="o"):
    top = values.max()
    lines = []
    for row in values:
        chars = []
        for v in row:
            if v < 0:
                chars.append(negative)
            else:
                chars.append(SHADES[min(int(v / top * (len(SHADES) - 1)), len(SHADES) - 1)])
        lines.append("".join(chars))
    return "\n".join(lines)


def main():
    axis = np.linspace(-4, 4, 101)
    xx, pp = np.meshgrid(axis, axis, indexing="ij")

    spec = GaussianSpec(0.05, 0.0, 1.1)
    w = evaluate(wigner(spec, "sub"), xx, pp)
    i, j = np.unravel_index(np.argmin(w), w.shape)
    print(f"subtracted state (xbar=0.05, gamma=1.1): min W = {w.min():.4f} at x={axis[i]:.2f}, p={axis[j]:.2f}")
    print(f"negative area fraction of the grid: {(w < 0).mean():.3f}")

    coarse = np.linspace(-3, 3, 25)
    cx, cp = np.meshgrid(coarse, coarse, indexing="ij")
    print("\nsurface over x (rows) and p (columns), 'o' marks W < 0:")
    print(character_map(evaluate(wigner(spec, "sub"), cx, cp)))

    coherent = GaussianSpec(0.9, -0.4, 1.0)
    diff = np.abs(evaluate(wigner(coherent, "sub"), xx, pp) - evaluate(wigner(coherent), xx, pp)).max()
    print(f"\ncoherent state is a fixed point of subtraction: max |W_sub - W| = {diff:.1e}")


if __name__ == "__main__":
    main()
