r"""Wigner functions of pure Gaussian states and their photon-subtracted/-added versions.

Every Wigner function handled here has the form

.. math::
    f(x, p) = \sum_{j,k} c_{jk} (x - x_0)^j (p - p_0)^k
              e^{-a_x (x - x_0)^2 - a_p (p - p_0)^2},

which is closed under multiplication by quadratures, differentiation and
products. Phase-space integrals of such functions reduce to one-dimensional
Gaussian moments, so they are evaluated exactly.

Conventions: :math:`\hbar = 1`, :math:`x = (a + a^\dagger)/\sqrt{2}`,
:math:`p = i(a^\dagger - a)/\sqrt{2}`, and the Wigner function is normalized to
:math:`\iint W\,dx\,dp = 1`. A pure Gaussian state with diagonal covariance is
fixed by its mean quadratures and :math:`\Gamma = 1/(2\,\mathrm{Var}\,x)`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d
from scipy.special import comb

from .errors import DomainError

__all__ = [
    "GAMMA_MIN",
    "GAMMA_MAX",
    "GaussianSpec",
    "ParamJet",
    "PolyGaussian",
    "Kind",
    "normalize_kind",
    "wigner_gaussian",
    "apply_subtraction",
    "apply_addition",
    "wigner",
    "mean_photon",
    "mean_photon_derivative",
    "theta_derivative",
    "moment_integral",
    "product",
    "evaluate",
]

GAMMA_MIN = 1e-8
GAMMA_MAX = 1e8

Kind = Literal["gaussian", "subtracted", "added"]

_KIND_ALIASES = {
    "gaussian": "gaussian",
    "gauss": "gaussian",
    "subtracted": "subtracted",
    "sub": "subtracted",
    "minus": "subtracted",
    "added": "added",
    "add": "added",
    "plus": "added",
}


def normalize_kind(kind: str) -> Kind:
    """Map user-facing spellings (``"sub"``, ``"add"``, ...) onto the canonical kind names."""
    try:
        return _KIND_ALIASES[kind.lower()]  # type: ignore[return-value]
    except (KeyError, AttributeError):
        raise ValueError(f"unknown state kind {kind!r}; expected gaussian, subtracted or added") from None


@dataclass(frozen=True)
class GaussianSpec:
    """Pure single-mode Gaussian state with diagonal covariance.

    Attributes:
        xbar: Mean of the x quadrature.
        pbar: Mean of the p quadrature.
        gamma: Inverse of twice the x variance. Purity fixes the p-width to ``1/gamma``.
    """

    xbar: float = 0.0
    pbar: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("xbar", "pbar", "gamma"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not GAMMA_MIN <= self.gamma <= GAMMA_MAX:
            raise DomainError(f"gamma must lie in [{GAMMA_MIN:g}, {GAMMA_MAX:g}], got {self.gamma!r}")

    @property
    def squeeze(self) -> float:
        """Signed squeeze parameter ``r = ln(gamma) / 2``."""
        return 0.5 * math.log(self.gamma)

    @classmethod
    def from_squeeze(cls, r: float, xbar: float = 0.0, pbar: float = 0.0) -> GaussianSpec:
        return cls(xbar, pbar, math.exp(2.0 * r))

    @property
    def is_vacuum(self) -> bool:
        return self.xbar == 0.0 and self.pbar == 0.0 and self.gamma == 1.0


@dataclass(frozen=True)
class ParamJet:
    """A Gaussian state together with the first θ-derivatives of its parameters."""

    state: GaussianSpec
    dxbar: float = 0.0
    dpbar: float = 0.0
    dgamma: float = 0.0

    def __post_init__(self):
        for name in ("dxbar", "dpbar", "dgamma"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))

    @classmethod
    def make(
        cls,
        xbar: float = 0.0,
        pbar: float = 0.0,
        gamma: float = 1.0,
        dxbar: float = 0.0,
        dpbar: float = 0.0,
        dgamma: float = 0.0,
    ) -> ParamJet:
        return cls(GaussianSpec(xbar, pbar, gamma), dxbar, dpbar, dgamma)

    def at(self, theta: float) -> GaussianSpec:
        """State on the affine path ``(xbar + θ·dxbar, pbar + θ·dpbar, gamma + θ·dgamma)``."""
        s = self.state
        return GaussianSpec(
            s.xbar + theta * self.dxbar,
            s.pbar + theta * self.dpbar,
            s.gamma + theta * self.dgamma,
        )

    @property
    def is_static(self) -> bool:
        return self.dxbar == 0.0 and self.dpbar == 0.0 and self.dgamma == 0.0


Number = Union[int, float]


def _binomial_shift(n: int, shift: float) -> np.ndarray:
    """Matrix ``T`` with ``(u + shift)^j = sum_i T[j, i] u^i``."""
    j = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    with np.errstate(invalid="ignore"):
        powers = np.where(i <= j, float(shift) ** np.clip(j - i, 0, None), 0.0)
    return comb(j, i) * powers


def _gaussian_moments(n: int, a: float) -> np.ndarray:
    """``∫ u^j exp(-a u^2) du`` for ``j = 0..n-1``."""
    out = np.zeros(n)
    for j in range(0, n, 2):
        out[j] = math.gamma((j + 1) / 2) / a ** ((j + 1) / 2)
    return out


@dataclass(frozen=True, eq=False)
class PolyGaussian:
    """Polynomial in centered quadratures times a Gaussian envelope.

    ``coeffs[j, k]`` multiplies ``(x - x0)**j * (p - p0)**k``; the envelope is
    ``exp(-ax (x - x0)**2 - ap (p - p0)**2)``. Instances are immutable.
    """

    coeffs: np.ndarray
    center: tuple[float, float] = (0.0, 0.0)
    widths: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, copy=True)
        if c.ndim == 0:
            c = c.reshape(1, 1)
        if c.ndim != 2:
            raise ValueError("coeffs must be a 2-d table")
        c.setflags(write=False)
        ax, ap = (float(w) for w in self.widths)
        if not (ax > 0 and ap > 0):
            raise DomainError(f"envelope widths must be positive, got {self.widths!r}")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "widths", (ax, ap))

    @property
    def degrees(self) -> tuple[int, int]:
        """Declared maximum degrees ``(jmax, kmax)`` of the coefficient table."""
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    def __repr__(self):
        return (
            f"PolyGaussian(degrees={self.degrees}, center={self.center}, "
            f"widths={self.widths})"
        )

    def __call__(self, x, p):
        return evaluate(self, x, p)

    def _same_envelope(self, other: PolyGaussian) -> bool:
        return self.center == other.center and self.widths == other.widths

    def _with(self, coeffs: np.ndarray) -> PolyGaussian:
        return PolyGaussian(coeffs, self.center, self.widths)

    def __add__(self, other):
        if not isinstance(other, PolyGaussian):
            return NotImplemented
        if not self._same_envelope(other):
            raise ValueError("can only add PolyGaussians sharing center and widths")
        shape = np.maximum(self.coeffs.shape, other.coeffs.shape)
        out = np.zeros(shape)
        out[: self.coeffs.shape[0], : self.coeffs.shape[1]] += self.coeffs
        out[: other.coeffs.shape[0], : other.coeffs.shape[1]] += other.coeffs
        return self._with(out)

    def __neg__(self):
        return self._with(-self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, PolyGaussian):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Number):
        if isinstance(scalar, PolyGaussian):
            return product(self, scalar)
        return self._with(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: Number):
        return self._with(self.coeffs / float(scalar))

    def mul_x(self) -> PolyGaussian:
        """Multiply by ``x = (x - x0) + x0``."""
        c = self.coeffs
        out = np.zeros((c.shape[0] + 1, c.shape[1]))
        out[1:] += c
        out[:-1] += self.center[0] * c
        return self._with(out)

    def mul_p(self) -> PolyGaussian:
        c = self.coeffs
        out = np.zeros((c.shape[0], c.shape[1] + 1))
        out[:, 1:] += c
        out[:, :-1] += self.center[1] * c
        return self._with(out)

    def dx(self) -> PolyGaussian:
        """Partial derivative in x, including the envelope factor ``-2 ax (x - x0)``."""
        c = self.coeffs
        n = c.shape[0]
        out = np.zeros((n + 1, c.shape[1]))
        out[: n - 1] += np.arange(1, n)[:, None] * c[1:]
        out[1:] -= 2.0 * self.widths[0] * c
        return self._with(out)

    def dp(self) -> PolyGaussian:
        c = self.coeffs
        n = c.shape[1]
        out = np.zeros((c.shape[0], n + 1))
        out[:, : n - 1] += np.arange(1, n)[None, :] * c[:, 1:]
        out[:, 1:] -= 2.0 * self.widths[1] * c
        return self._with(out)

    def with_center(self, center: tuple[float, float]) -> np.ndarray:
        """Coefficients of the same polynomial expanded about another center.

        Only the polynomial part is re-expanded; the envelope is untouched.
        """
        c = self.coeffs
        # (x - x0) = (x - xn) + (xn - x0)
        tx = _binomial_shift(c.shape[0], center[0] - self.center[0])
        tp = _binomial_shift(c.shape[1], center[1] - self.center[1])
        return tx.T @ c @ tp

    def trimmed(self, tol: float = 0.0) -> PolyGaussian:
        """Drop trailing all-zero rows/columns (entries with ``|c| <= tol``)."""
        mask = np.abs(self.coeffs) > tol
        if not mask.any():
            return self._with(np.zeros((1, 1)))
        jmax = np.nonzero(mask.any(axis=1))[0].max()
        kmax = np.nonzero(mask.any(axis=0))[0].max()
        return self._with(self.coeffs[: jmax + 1, : kmax + 1])


def evaluate(w: PolyGaussian, x, p):
    """Pointwise value of ``w`` at ``(x, p)``; broadcasts over array arguments."""
    u = np.asarray(x, dtype=float) - w.center[0]
    v = np.asarray(p, dtype=float) - w.center[1]
    poly = npoly.polyval2d(u, v, w.coeffs)
    return poly * np.exp(-w.widths[0] * u * u - w.widths[1] * v * v)


def moment_integral(w: PolyGaussian) -> float:
    """Exact ``∬ w(x, p) dx dp`` from closed-form Gaussian moments."""
    mx = _gaussian_moments(w.coeffs.shape[0], w.widths[0])
    mp = _gaussian_moments(w.coeffs.shape[1], w.widths[1])
    return float(mx @ w.coeffs @ mp)


def product(a: PolyGaussian, b: PolyGaussian) -> PolyGaussian:
    """Exact pointwise product of two PolyGaussians.

    With different centers the Gaussian exponents are combined by completing
    the square and both polynomials are re-expanded about the combined center.
    """
    ax1, ap1 = a.widths
    ax2, ap2 = b.widths
    ax, ap = ax1 + ax2, ap1 + ap2
    if a.center == b.center:
        center = a.center
        ca, cb = a.coeffs, b.coeffs
        scale = 1.0
    else:
        (x1, p1), (x2, p2) = a.center, b.center
        center = ((ax1 * x1 + ax2 * x2) / ax, (ap1 * p1 + ap2 * p2) / ap)
        ca, cb = a.with_center(center), b.with_center(center)
        scale = math.exp(-ax1 * ax2 / ax * (x1 - x2) ** 2 - ap1 * ap2 / ap * (p1 - p2) ** 2)
    return PolyGaussian(scale * convolve2d(ca, cb), center, (ax, ap))


def wigner_gaussian(spec: GaussianSpec) -> PolyGaussian:
    """Wigner function ``exp(-Γ(x-x̄)² - (p-p̄)²/Γ)/π`` of a pure Gaussian state."""
    return PolyGaussian(
        np.array([[1.0 / math.pi]]),
        (spec.xbar, spec.pbar),
        (spec.gamma, 1.0 / spec.gamma),
    )


def _ladder_sandwich(w: PolyGaussian, sign: int) -> PolyGaussian:
    """Unnormalized Wigner function of ``a ρ a†`` (sign=+1) or ``a† ρ a`` (sign=-1).

    Both follow from the quadrature product rules:
    ``½[x² + p² ± (x∂x + p∂p) + ¼(∂x² + ∂p²) ± 1] W``.
    """
    xx = w.mul_x().mul_x()
    pp = w.mul_p().mul_p()
    euler = w.dx().mul_x() + w.dp().mul_p()
    lap = w.dx().dx() + w.dp().dp()
    return 0.5 * (xx + pp + sign * euler + 0.25 * lap + sign * w)


def apply_subtraction(w: PolyGaussian, nminus: float) -> PolyGaussian:
    """Wigner function of ``a ρ a† / nminus``.

    Args:
        w: Normalized Wigner function of ``ρ``.
        nminus: Normalization, the mean photon number of ``ρ``.

    Raises:
        DomainError: if ``nminus <= 0``; subtraction from the vacuum is undefined.
    """
    if not nminus > 0:
        raise DomainError("photon subtraction from vacuum undefined (N- must be > 0)")
    return _ladder_sandwich(w, +1) / nminus


def apply_addition(w: PolyGaussian, nplus: float) -> PolyGaussian:
    """Wigner function of ``a† ρ a / nplus`` (``nplus`` is the mean photon number plus one)."""
    if not nplus > 0:
        raise DomainError("photon addition needs a positive normalization N+")
    return _ladder_sandwich(w, -1) / nplus


def mean_photon(spec: GaussianSpec) -> float:
    """Mean photon number ``(x̄² + p̄²)/2 + (Γ + 1/Γ)/4 - 1/2``."""
    g = spec.gamma
    # (Γ + 1/Γ - 2) written as (Γ-1)²/Γ to keep precision near Γ = 1
    return 0.5 * (spec.xbar**2 + spec.pbar**2) + 0.25 * (g - 1.0) ** 2 / g


def mean_photon_derivative(jet: ParamJet) -> float:
    """θ-derivative of :func:`mean_photon` along the jet."""
    s = jet.state
    return s.xbar * jet.dxbar + s.pbar * jet.dpbar + 0.25 * (1.0 - 1.0 / s.gamma**2) * jet.dgamma


def wigner(spec: GaussianSpec, kind: str = "gaussian") -> PolyGaussian:
    """Normalized Wigner function of the Gaussian, photon-subtracted or photon-added state."""
    kind = normalize_kind(kind)
    g = wigner_gaussian(spec)
    if kind == "gaussian":
        return g
    if kind == "subtracted":
        return apply_subtraction(g, mean_photon(spec))
    return apply_addition(g, mean_photon(spec) + 1.0)


def _gaussian_derivative(jet: ParamJet) -> PolyGaussian:
    s = jet.state
    g = s.gamma
    c = np.zeros((3, 3))
    c[1, 0] = 2.0 * g * jet.dxbar
    c[0, 1] = 2.0 * jet.dpbar / g
    c[2, 0] = -jet.dgamma
    c[0, 2] = jet.dgamma / g**2
    return PolyGaussian(c / math.pi, (s.xbar, s.pbar), (g, 1.0 / g))


def theta_derivative(jet: ParamJet, kind: str = "gaussian") -> PolyGaussian:
    """∂W/∂θ for the state described by ``jet``.

    For the subtracted and added kinds the θ-dependence of the normalization
    ``N`` (resp. ``N + 1``) is included, so the result always integrates to zero.
    """
    kind = normalize_kind(kind)
    dg = _gaussian_derivative(jet)
    if kind == "gaussian":
        return dg
    spec = jet.state
    n = mean_photon(spec)
    sign = +1
    if kind == "subtracted":
        if not n > 0:
            raise DomainError("photon subtraction from vacuum undefined (N- = 0)")
    else:
        n += 1.0
        sign = -1
    dn = mean_photon_derivative(jet)
    g = wigner_gaussian(spec)
    return _ladder_sandwich(dg, sign) / n - _ladder_sandwich(g, sign) * (dn / n**2)
