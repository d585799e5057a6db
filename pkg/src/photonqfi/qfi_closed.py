"""Closed-form quantum Fisher information for Gaussian, photon-subtracted and photon-added states.

All functions take the state parameters ``(x̄, p̄, Γ)`` and their θ-derivatives
``(x̄′, p̄′, Γ′)``, either bundled in a :class:`~photonqfi.phase_space.ParamJet`
or as explicit scalars for the special cases.

The photon-subtracted formulas are evaluated in an algebraically regrouped form
in which the vanishing factor ``(Γ - 1)² + 2Γ(x̄² + p̄²)`` is explicit, so that
values close to the singular point ``(x̄, p̄, Γ) = (0, 0, 1)`` keep full relative
precision. ``tests/test_qfi_closed.py`` checks each regrouping symbolically
against the expanded polynomial.

The photon-added formulas (:func:`qfi_added` and its special cases) follow the
mixture convention: they equal ``4π ∬ (∂θW)²`` for the Wigner function
``[(N + 1) W⁺ + W] / (N + 2)``, where ``W⁺`` is the photon-added Wigner function
and ``W`` the Gaussian one. This is not the QFI of ``a†ρa / (N + 1)``; use
:func:`photonqfi.qfi_numeric.qfi_moment` with ``kind="added"`` for that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ContractError, DomainError
from .phase_space import ParamJet

__all__ = [
    "QfiReport",
    "CONDITIONING_WARN",
    "ADDED_VACUUM_GAMMA_COEFFS",
    "qfi_gaussian",
    "qfi_coherent",
    "qfi_subtracted",
    "qfi_subtracted_shift_only",
    "qfi_subtracted_vacuum_series",
    "qfi_subtracted_eps_expansion",
    "qfi_subtracted_squeeze_form",
    "qfi_subtracted_squeeze_series",
    "qfi_subtracted_gamma_only",
    "qfi_added",
    "qfi_added_shift_only",
    "qfi_added_gamma_only",
    "qfi_added_vacuum_gamma_only",
    "qfi_asymptotic",
    "cramer_rao_bound",
    "gamma_from_squeeze",
    "squeeze_from_gamma",
]

CONDITIONING_WARN = 1e-6

# Γ-polynomial of the photon-added vacuum with all θ-dependence in Γ (palindromic).
ADDED_VACUUM_GAMMA_COEFFS = (3, 48, 420, 912, 1330, 912, 420, 48, 3)


@dataclass(frozen=True)
class QfiReport:
    """A QFI value with provenance.

    Attributes:
        value: Quantum Fisher information, in units of ``1/[θ]²``.
        method: One of ``closed``, ``moment``, ``quadrature``, ``fock``, ``asymptotic``.
        conditioning: Magnitude of the smallest denominator met while evaluating.
        notes: Human-readable diagnostics (near-singular inputs, step-size warnings).
        error: Error estimate, when the method provides one.
    """

    value: float
    method: str
    conditioning: float = math.inf
    notes: tuple[str, ...] = field(default_factory=tuple)
    error: float | None = None

    def __float__(self):
        return float(self.value)

    def bound(self, shots: float = 1.0) -> float:
        """Cramér-Rao bound ``1/sqrt(shots * value)`` on the standard deviation of θ."""
        return cramer_rao_bound(self.value, shots)


def cramer_rao_bound(qfi: float, shots: float = 1.0) -> float:
    """Smallest achievable standard deviation ``1/sqrt(Q·I)`` for ``Q`` independent shots."""
    if shots <= 0:
        raise ContractError("number of shots must be positive")
    if qfi < 0:
        raise DomainError("QFI must be non-negative")
    if qfi == 0:
        return math.inf
    return 1.0 / math.sqrt(shots * qfi)


def gamma_from_squeeze(r: float) -> float:
    """``Γ = e^{2r}`` for a state squeezed along x with squeeze parameter ``r``."""
    return math.exp(2.0 * r)


def squeeze_from_gamma(gamma: float) -> float:
    return 0.5 * math.log(gamma)


def _unpack(jet: ParamJet):
    s = jet.state
    return s.xbar, s.pbar, s.gamma, jet.dxbar, jet.dpbar, jet.dgamma


def qfi_gaussian(jet: ParamJet) -> QfiReport:
    """QFI of a pure Gaussian state, ``(4Γp̄′² + 4Γ³x̄′² + Γ′²)/(2Γ²)``."""
    _, _, g, dx, dp, dg = _unpack(jet)
    value = (4 * g * dp**2 + 4 * g**3 * dx**2 + dg**2) / (2 * g**2)
    return QfiReport(value, "closed", conditioning=2 * g**2)


def qfi_coherent(dxbar: float, dpbar: float = 0.0) -> float:
    """Coherent-state QFI ``2(x̄′² + p̄′²)``; the reference for ratio outputs."""
    return 2.0 * (dxbar**2 + dpbar**2)


def qfi_subtracted(jet: ParamJet) -> QfiReport:
    """QFI of the single-photon-subtracted pure Gaussian state.

    ``conditioning`` is ``|Γ + 2(-1 + p̄² + x̄²)Γ² + Γ³|``, the root factor of the
    squared denominator. Below :data:`CONDITIONING_WARN` the value is still
    returned but a note is attached, since the QFI genuinely diverges towards
    the vacuum.

    Raises:
        DomainError: at the exact vacuum, where subtraction is undefined.
    """
    x, p, g, dx, dp, dg = _unpack(jet)
    if jet.state.is_vacuum:
        raise DomainError("photon subtraction from vacuum undefined (N- = 0)")
    s = x * x + p * p
    q = (g - 1.0) ** 2
    base = q + 2.0 * g * s  # Γ + 2(-1+s)Γ² + Γ³ = Γ·base
    shift = q * (3 - 2 * g + 3 * g * g) + 8 * g * (g - 1) * (g * x * x - p * p) + 4 * g * g * s * s
    cross = p * (1 + (s - 1) * g) * dp - x * g * (s - 1 + g) * dx
    squeeze = 3 * q * q + 4 * g * s * (3 - 2 * g + 3 * g * g + g * s)
    numerator = 4 * g * shift * (dp**2 + g**2 * dx**2) + 32 * g**2 * cross * dg + squeeze * dg**2
    value = numerator / (2 * g**2 * base**2)
    conditioning = abs(g * base)
    notes = ()
    if conditioning < CONDITIONING_WARN:
        notes = (f"near-singular denominator {conditioning:.3g}: QFI diverges towards the vacuum",)
    return QfiReport(value, "closed", conditioning=conditioning, notes=notes)


def qfi_subtracted_shift_only(jet: ParamJet) -> QfiReport:
    """Subtracted-state QFI when only x̄ depends on θ (``Γ′ = p̄ = p̄′ = 0``).

    ``2Γ(3 - 8Γ + 2(5 - 4x̄² + 2x̄⁴)Γ² + 8(x̄² - 1)Γ³ + 3Γ⁴) x̄′² / (1 + 2(x̄² - 1)Γ + Γ²)²``
    """
    x, p, g, dx, dp, dg = _unpack(jet)
    if dg != 0 or p != 0 or dp != 0:
        raise ContractError("shift-only form requires dgamma = pbar = dpbar = 0")
    if x == 0 and g == 1:
        raise DomainError(
            "(xbar, gamma) = (0, 1) is the only real root of the denominator; QFI undefined"
        )
    q = (g - 1.0) ** 2
    den = q + 2.0 * x * x * g
    num = q * (3 - 2 * g + 3 * g * g) + 4 * x * x * g * g * (x * x + 2 * g - 2)
    value = 2 * g * num * dx**2 / den**2
    notes = ()
    if den < CONDITIONING_WARN:
        notes = (f"near-singular denominator {den:.3g}",)
    return QfiReport(value, "closed", conditioning=den, notes=notes)


def qfi_subtracted_vacuum_series(gamma: float, xbar_prime: float = 1.0):
    """Subtracted squeezed vacuum with x̄′ ≠ 0 only.

    Returns:
        ``(value, (c2, c1, c0))`` where ``value = x̄′²·2Γ(3 - 2Γ + 3Γ²)/(Γ - 1)²`` and
        the Laurent terms about Γ = 1 are ``x̄′²·(8/(Γ-1)², 16/(Γ-1), 14)``.
    """
    if gamma == 1:
        raise DomainError("vacuum-limit QFI diverges at gamma = 1")
    e = gamma - 1.0
    d2 = xbar_prime**2
    value = d2 * 2 * gamma * (3 - 2 * gamma + 3 * gamma**2) / e**2
    return value, (d2 * 8 / e**2, d2 * 16 / e, d2 * 14.0)


def qfi_subtracted_eps_expansion(xbar: float, eps: float, xbar_prime: float = 1.0) -> float:
    """Second-order expansion of the shift-only QFI around Γ = 1 + ε."""
    if xbar == 0:
        raise DomainError("expansion around gamma = 1 needs xbar != 0")
    x2 = xbar * xbar
    return 2 * xbar_prime**2 * (1 + (1 + 2 / x2) * eps + (1 / x2**2 + 1 / x2) * eps**2)


def qfi_subtracted_squeeze_form(r: float, xbar_prime: float = 1.0) -> float:
    """``x̄′²·4e^{4r}(3cosh(2r) - 1)/(e^{2r} - 1)²`` for subtracted squeezed vacuum."""
    if r == 0:
        raise DomainError("squeeze-form QFI diverges at r = 0")
    em = math.expm1(2 * r)
    return xbar_prime**2 * 4 * math.exp(4 * r) * (3 * math.cosh(2 * r) - 1) / em**2


def qfi_subtracted_squeeze_series(r: float, xbar_prime: float = 1.0) -> float:
    """Three-term small-r expansion ``2x̄′²(1/r² + 2/r + 14/3)``."""
    if r == 0:
        raise DomainError("small-r expansion diverges at r = 0")
    return 2 * xbar_prime**2 * (1 / r**2 + 2 / r + 14 / 3)


def qfi_subtracted_gamma_only(xbar: float, gamma: float, dgamma: float) -> float:
    """Subtracted-state QFI when only Γ depends on θ (``x̄′ = p̄′ = p̄ = 0``).

    Tends to ``3Γ′²/(2Γ²)`` at x̄ = 0 without diverging at Γ = 1.
    """
    if xbar == 0 and gamma == 1:
        raise DomainError("photon subtraction from vacuum undefined (N- = 0)")
    g, x2 = gamma, xbar * xbar
    q = (g - 1.0) ** 2
    num = 3 * q * q + 4 * x2 * g * (3 - 2 * g + 3 * g * g + x2 * g)
    den = g * (q + 2 * x2 * g)
    return num * dgamma**2 / (2 * den**2)


def _added_numerator(x, p, g, dx, dp, dg):
    """Curly-bracket numerator of the photon-added QFI, term by term in powers of Γ."""
    x2, p2 = x * x, p * p
    x4, p4 = x2 * x2, p2 * p2
    x6, p6 = x4 * x2, p4 * p2
    x8, p8 = x4 * x4, p4 * p4
    dx2, dp2, dg2 = dx * dx, dp * dp, dg * dg

    t0 = 3 * dg2
    t1 = 12 * g * (dp2 + 2 * (2 + p2 + x2) * dg2)
    t2 = 4 * g**2 * (
        4 * (9 + 5 * p2 + 3 * x2) * dp2
        + 8 * p * dp * dg
        + (7 + 4 * p2 + 4 * x2) * (15 + 4 * p2 + 4 * x2) * dg2
    )
    t3 = 4 * g**3 * (
        4 * (35 + 12 * p4 + 16 * p2 * (3 + x2) + 4 * x2 * (6 + x2)) * dp2
        + 3 * dx2
        + 8 * p * (19 + 5 * p2 + 5 * x2) * dp * dg
        + 2 * dg * (
            -4 * x * (-1 + p2 + x2) * dx
            + 114 * dg
            + (p2 + x2) * (149 + 8 * p4 + 60 * x2 + 8 * x4 + 4 * p2 * (15 + 4 * x2)) * dg
        )
    )
    t4 = 2 * g**4 * (
        8 * (91 + 12 * p6 + 103 * x2 + 28 * p4 * (3 + x2) + 4 * x4 * (9 + x2)
             + p2 * (177 + 20 * x2 * (6 + x2))) * dp2
        + 8 * (13 + 5 * p2 + 3 * x2) * dx2
        + 16 * (
            2 * p * (33 + 20 * x2 + 4 * (p4 + x4 + p2 * (5 + 2 * x2))) * dp
            - x * (45 + 4 * p4 + 8 * p2 * (4 + x2) + 4 * x2 * (8 + x2)) * dx
        ) * dg
        + (665 + 992 * x2 + 8 * (p8 + 4 * p6 * (3 + x2) + 6 * p4 * (10 + 6 * x2 + x4)
                                 + x4 * (60 + 12 * x2 + x4)
                                 + 4 * p2 * (31 + 30 * x2 + 9 * x4 + x6))) * dg2
    )
    t5 = 8 * g**5 * (
        (593 + 848 * x2 + 8 * (p8 + 4 * p6 * (3 + x2) + 6 * p4 * (3 + x2) ** 2
                               + x4 * (54 + 12 * x2 + x4)
                               + 2 * p2 * (49 + 2 * x2 * (27 + 9 * x2 + x4)))) * dp2
        + 2 * (83 + 8 * x2 + 4 * (3 * p4 + x4 + 4 * p2 * (4 + x2))) * dx2
        - 8 * x * (3 + p2 + x2) * (21 + 2 * p4 + 4 * p2 * (3 + x2) + 2 * x2 * (6 + x2)) * dx * dg
        + (114 + 8 * p6 + 149 * x2 + 60 * x4 + 8 * x6 + 12 * p4 * (5 + 2 * x2)
           + p2 * (149 + 24 * x2 * (5 + x2))) * dg2
        + 8 * p * dp * (
            -16 * x * dx
            + (3 + p2 + x2) * (21 + 2 * p4 + 4 * p2 * (3 + x2) + 2 * x2 * (6 + x2)) * dg
        )
    )
    t6 = 4 * g**6 * (
        4 * (239 + 135 * p2 + 52 * p4 + 4 * p6 + (273 + 152 * p2 + 20 * p4) * x2
             + 4 * (25 + 7 * p2) * x4 + 12 * x6) * dp2
        + 4 * (239 + 12 * p6 + 135 * x2 + 52 * x4 + 4 * x6 + 4 * p4 * (25 + 7 * x2)
               + p2 * (273 + 152 * x2 + 20 * x4)) * dx2
        - 16 * x * (33 + 20 * x2 + 4 * (p4 + x4 + p2 * (5 + 2 * x2))) * dx * dg
        + (7 + 4 * p2 + 4 * x2) * (15 + 4 * p2 + 4 * x2) * dg2
        + 8 * p * dp * (-64 * x * dx + (45 + 4 * p4 + 8 * p2 * (4 + x2) + 4 * x2 * (8 + x2)) * dg)
    )
    t7 = 8 * g**7 * (
        2 * (83 + 8 * p2 + 4 * p4 + 16 * (4 + p2) * x2 + 12 * x4) * dp2
        + (593 + 784 * x2 + 8 * (p8 + 4 * p6 * (3 + x2) + 6 * p4 * (3 + x2) ** 2
                                 + x4 * (54 + 12 * x2 + x4)
                                 + 2 * p2 * (53 + 2 * x2 * (27 + 9 * x2 + x4)))) * dx2
        - 4 * x * (19 + 5 * p2 + 5 * x2) * dx * dg
        + 3 * (2 + p2 + x2) * dg2
        + 4 * p * dp * (-32 * x * dx + (-1 + p2 + x2) * dg)
    )
    t8 = g**8 * (
        16 * (13 + 3 * p2 + 5 * x2) * dp2
        + 16 * (91 + 103 * p2 + 36 * p4 + 4 * p6 + (177 + 20 * p2 * (6 + p2)) * x2
                + 28 * (3 + p2) * x4 + 12 * x6) * dx2
        - 32 * x * dx * dg
        + 3 * dg2
    )
    t9 = 4 * g**9 * (3 * dp2 + 4 * (35 + 4 * p4 + 12 * x2 * (4 + x2) + 8 * p2 * (3 + 2 * x2)) * dx2)
    t10 = 16 * (9 + 3 * p2 + 5 * x2) * g**10 * dx2
    t11 = 12 * g**11 * dx2
    return t0 + t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8 + t9 + t10 + t11


def qfi_added(jet: ParamJet) -> QfiReport:
    """Closed-form photon-added QFI in the mixture convention (see the module docstring).

    The denominator ``2Γ²(1 + 2(3 + p̄² + x̄²)Γ + Γ²)⁴`` is strictly positive, so
    there is no singular point. See the module docstring for the Wigner
    function this expression belongs to.
    """
    x, p, g, dx, dp, dg = _unpack(jet)
    root = 1 + 2 * (3 + p * p + x * x) * g + g * g
    value = _added_numerator(x, p, g, dx, dp, dg) / (2 * g**2 * root**4)
    return QfiReport(value, "closed", conditioning=root, notes=("photon-added mixture convention",))


def qfi_added_shift_only(xbar: float, gamma: float, xbar_prime: float = 1.0) -> float:
    """Photon-added closed form with ``Γ′ = p̄ = p̄′ = 0``.

    The Γ⁷ coefficient is ``4(9 + 5x̄²)``, the value consistent with the full
    expression of :func:`qfi_added`.
    """
    x2, g = xbar * xbar, gamma
    x4, x6, x8 = x2 * x2, x2 * x2 * x2, x2 * x2 * x2 * x2
    coeffs = (
        3,
        4 * (13 + 3 * x2),
        4 * (83 + 8 * x2 + 4 * x4),
        4 * (239 + 135 * x2 + 52 * x4 + 4 * x6),
        2 * (593 + 784 * x2 + 432 * x4 + 96 * x6 + 8 * x8),
        4 * (91 + 177 * x2 + 84 * x4 + 12 * x6),
        4 * (35 + 48 * x2 + 12 * x4),
        4 * (9 + 5 * x2),
        3,
    )
    poly = 0.0
    for c in reversed(coeffs):
        poly = poly * g + c
    root = 1 + 2 * (3 + x2) * g + g * g
    return 2 * g * poly * xbar_prime**2 / root**4


def qfi_added_gamma_only(xbar: float, gamma: float, dgamma: float) -> float:
    """Photon-added closed form with ``x̄′ = p̄′ = p̄ = 0``; decays as ``3Γ′²/(2Γ²)``."""
    x2, g = xbar * xbar, gamma
    x4, x6, x8 = x2 * x2, x2 * x2 * x2, x2 * x2 * x2 * x2
    c1 = 24 * (2 + x2)
    c2 = 4 * (105 + 88 * x2 + 16 * x4)
    c3 = 8 * (114 + 149 * x2 + 60 * x4 + 8 * x6)
    c4 = 2 * (665 + 992 * x2 + 480 * x4 + 96 * x6 + 8 * x8)
    coeffs = (3, c1, c2, c3, c4, c3, c2, c1, 3)
    poly = 0.0
    for c in reversed(coeffs):
        poly = poly * g + c
    root = 1 + 2 * (3 + x2) * g + g * g
    return poly * dgamma**2 / (2 * g**2 * root**4)


def qfi_added_vacuum_gamma_only(gamma: float, dgamma: float) -> float:
    """x̄ = 0 limit of :func:`qfi_added_gamma_only`, via :data:`ADDED_VACUUM_GAMMA_COEFFS`."""
    poly = 0.0
    for c in reversed(ADDED_VACUUM_GAMMA_COEFFS):
        poly = poly * gamma + c
    return poly * dgamma**2 / (2 * gamma**2 * (1 + 6 * gamma + gamma**2) ** 4)


def qfi_asymptotic(jet: ParamJet) -> float:
    """Large-|x̄| expansion ``I_G - 4x̄′Γ′/(Γx̄)``, accurate up to ``O(1/x̄²)``.

    Shared by the subtracted and added states.
    """
    x, _, g, dx, _, dg = _unpack(jet)
    if x == 0:
        raise DomainError("asymptotic expansion needs xbar != 0")
    return qfi_gaussian(jet).value - 4 * dx * dg / (g * x)
