"""Numerical QFI from the phase-space integral ``I = 4π ∬ (∂θW)² dx dp``.

Two routes that share no discretization:

* :func:`qfi_moment` squares the exact ∂θW and integrates with closed-form Gaussian moments.
* :func:`qfi_finite_difference` differentiates W numerically along the θ-path
  and integrates the square on a tensor Gauss-Hermite grid.
"""

from __future__ import annotations

import math

import numpy as np

from .phase_space import ParamJet, evaluate, moment_integral, normalize_kind, product, theta_derivative, wigner
from .qfi_closed import QfiReport, qfi_subtracted

__all__ = ["qfi_moment", "qfi_finite_difference", "default_step", "QUADRATURE_NODES"]

QUADRATURE_NODES = 81
FD_NOTE_THRESHOLD = 1e-6


def qfi_moment(jet: ParamJet, kind: str = "gaussian") -> QfiReport:
    """Exact phase-space QFI of the Gaussian, subtracted or added state.

    Raises:
        DomainError: for subtraction from the exact vacuum.
    """
    kind = normalize_kind(kind)
    dw = theta_derivative(jet, kind)
    value = 4.0 * math.pi * moment_integral(product(dw, dw))
    conditioning = math.inf
    notes: tuple[str, ...] = ()
    if kind == "subtracted":
        closed = qfi_subtracted(jet)
        conditioning, notes = closed.conditioning, closed.notes
    return QfiReport(max(value, 0.0), "moment", conditioning=conditioning, notes=notes)


def default_step(jet: ParamJet) -> float:
    s = jet.state
    return 1e-4 * max(1.0, abs(s.xbar), abs(s.pbar), s.gamma)


def _grid(jet: ParamJet, nodes: int):
    """Gauss-Hermite nodes/weights adapted to the squared envelope ``exp(-2Γu² - 2v²/Γ)``."""
    t, w = np.polynomial.hermite.hermgauss(nodes)
    s = jet.state
    ax, ap = 2.0 * s.gamma, 2.0 / s.gamma
    x = s.xbar + t / math.sqrt(ax)
    p = s.pbar + t / math.sqrt(ap)
    # undo the Hermite weight so the rule integrates plain functions
    wx = w * np.exp(t * t) / math.sqrt(ax)
    wp = w * np.exp(t * t) / math.sqrt(ap)
    return np.meshgrid(x, p, indexing="ij"), np.outer(wx, wp)


def _fd_estimate(jet: ParamJet, kind: str, h: float, mesh, weights) -> float:
    xx, pp = mesh
    plus = evaluate(wigner(jet.at(h), kind), xx, pp)
    minus = evaluate(wigner(jet.at(-h), kind), xx, pp)
    deriv = (plus - minus) / (2.0 * h)
    return 4.0 * math.pi * float(np.sum(weights * deriv * deriv))


def qfi_finite_difference(
    jet: ParamJet,
    kind: str = "gaussian",
    h: float | None = None,
    nodes: int = QUADRATURE_NODES,
) -> QfiReport:
    """QFI from a central difference of W along the θ-path and grid quadrature.

    Estimates at ``h`` and ``h/2`` are combined by one Richardson step; their
    difference is reported as ``error``. The truncation part of that difference
    is ``O(h²)`` and tiny at the default step, so a relative change above
    :data:`FD_NOTE_THRESHOLD` means the step is either too coarse or small
    enough for cancellation to dominate, and a note is attached.
    """
    kind = normalize_kind(kind)
    if h is None:
        h = default_step(jet)
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    if jet.is_static:
        return QfiReport(0.0, "quadrature", error=0.0)
    mesh, weights = _grid(jet, nodes)
    coarse = _fd_estimate(jet, kind, h, mesh, weights)
    fine = _fd_estimate(jet, kind, h / 2, mesh, weights)
    error = abs(coarse - fine)
    value = (4.0 * fine - coarse) / 3.0
    notes: tuple[str, ...] = ()
    if error > FD_NOTE_THRESHOLD * abs(fine):
        notes = (f"h-halving changed the estimate by {error:.3g}; step {h:g} too coarse or cancellation-dominated",)
    return QfiReport(max(value, 0.0), "quadrature", notes=notes, error=error)
