"""Truncated photon-number-basis oracle.

State preparation (squeezed coherent states), the beam-splitter heralding
scheme, photon subtraction/addition on amplitudes, Wigner reconstruction and a
fidelity-based QFI estimate. Nothing here uses the phase-space machinery, so
the results serve as independent ground truth for it.

Conventions match :mod:`photonqfi.phase_space`: ``x = (a + a†)/√2``,
``p = i(a† - a)/√2``, squeezed coherent states ``S(ξ)D(α)|0⟩`` with
``S(ξ) = exp((ξ* a² - ξ a†²)/2)``, ``ξ = r e^{iϑ}``.
"""

from __future__ import annotations

import cmath
import functools
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import eval_genlaguerre, gammaln

from .errors import ContractError, DomainError, HeraldingError, NormalizationError, ResourceError
from .phase_space import GaussianSpec, ParamJet, normalize_kind

__all__ = [
    "MAX_CUTOFF",
    "TAIL_TOL",
    "FockVector",
    "TwoModeFock",
    "SqueezeParams",
    "squeeze_params_from_spec",
    "squeezed_coherent",
    "photon_probability",
    "quadrature_moments",
    "beam_splitter_element",
    "beam_splitter_block",
    "apply_beam_splitter",
    "herald_single_photon",
    "herald_probability",
    "herald_probability_closed",
    "herald_probability_small_r",
    "herald_probability_series",
    "subtract_fock",
    "add_fock",
    "fidelity",
    "fidelity_qfi",
    "state_family",
    "qfi_fock",
    "effective_qfi",
    "wigner_fock",
]

log = logging.getLogger(__name__)

MAX_CUTOFF = 512
TAIL_TOL = 1e-12
CUTOFF_MARGIN = 1.5


@dataclass(frozen=True, eq=False)
class FockVector:
    """Single-mode amplitudes ``a_0 .. a_cutoff``."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex, copy=True).ravel()
        if a.size == 0:
            raise ContractError("a Fock vector needs at least one amplitude")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def cutoff(self) -> int:
        return self.amps.size - 1

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def mean_photon(self) -> float:
        return float(np.arange(self.amps.size) @ self.probabilities / self.norm2)

    def normalized(self) -> FockVector:
        return FockVector(self.amps / math.sqrt(self.norm2))

    def padded(self, cutoff: int) -> FockVector:
        if cutoff < self.cutoff:
            raise ContractError("padding cannot shrink a Fock vector")
        out = np.zeros(cutoff + 1, dtype=complex)
        out[: self.amps.size] = self.amps
        return FockVector(out)

    def tensor_vacuum(self) -> TwoModeFock:
        """Two-mode state ``|0⟩ ⊗ self`` (first mode empty)."""
        table = np.zeros((self.amps.size, self.amps.size), dtype=complex)
        table[0, :] = self.amps
        return TwoModeFock(table)


@dataclass(frozen=True, eq=False)
class TwoModeFock:
    """Two-mode amplitudes ``amps[n, m]`` of ``|n, m⟩``; square table."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ContractError("two-mode table must be square")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def cutoff(self) -> int:
        return self.amps.shape[0] - 1

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True)
class SqueezeParams:
    """Parameters of ``S(ξ)D(α)|0⟩`` with ``ξ = r e^{iϑ}``."""

    alpha: complex = 0j
    r: float = 0.0
    vartheta: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ContractError("squeeze magnitude r must be non-negative")
        object.__setattr__(self, "alpha", complex(self.alpha))


def squeeze_params_from_spec(spec: GaussianSpec) -> SqueezeParams:
    """``(x̄, p̄, Γ)`` → ``(α, r, ϑ)``.

    With the signed squeeze ``s = ln(Γ)/2``: ``r = |s|``, ``ϑ = 0`` for ``s ≥ 0``
    and ``π`` otherwise, ``Re α = x̄ e^{s}/√2``, ``Im α = p̄ e^{-s}/√2``. The map is
    fixed by matching first and second quadrature moments of ``S(ξ)D(α)|0⟩``.
    """
    s = spec.squeeze
    alpha = complex(spec.xbar * math.exp(s), spec.pbar * math.exp(-s)) / math.sqrt(2.0)
    return SqueezeParams(alpha, abs(s), 0.0 if s >= 0 else math.pi)


def squeezed_coherent(
    params: SqueezeParams,
    cutoff: int | None = None,
    *,
    tail_tol: float = TAIL_TOL,
    max_cutoff: int = MAX_CUTOFF,
) -> FockVector:
    """Amplitudes of ``S(ξ)D(α)|0⟩``.

    ``a_0`` is known in closed form and the rest follow from the eigenvalue
    relation ``(a cosh r + a† e^{iϑ} sinh r)|ψ⟩ = α|ψ⟩``, i.e.

        cosh(r) √(n+1) a_{n+1} = α a_n − e^{iϑ} sinh(r) √n a_{n−1}.

    The recurrence is run until the missing probability is below ``tail_tol``
    (and at least up to ``cutoff`` when given).

    Raises:
        ResourceError: if ``cutoff`` or the adequate cutoff exceeds ``max_cutoff``.
    """
    if cutoff is not None and cutoff > max_cutoff:
        raise ResourceError(f"requested cutoff {cutoff} exceeds the hard limit {max_cutoff}")
    alpha, r, th = params.alpha, params.r, params.vartheta
    ch, sh, th_r = math.cosh(r), math.sinh(r), math.tanh(r)
    eith = cmath.exp(1j * th)
    a0 = cmath.exp(-abs(alpha) ** 2 / 2 + 0.5 * cmath.exp(-1j * th) * alpha**2 * th_r) / math.sqrt(ch)
    if abs(a0) == 0.0:
        raise ResourceError("vacuum amplitude underflows; state too far from the origin")
    amps = [a0]
    total = abs(a0) ** 2
    n = 0
    minimum = cutoff if cutoff is not None else 0
    while n < minimum or 1.0 - total >= tail_tol:
        if n + 1 > max_cutoff:
            raise ResourceError(f"tail {1.0 - total:.2e} still above {tail_tol:g} at the hard limit {max_cutoff}")
        prev = amps[n - 1] if n > 0 else 0.0
        nxt = (alpha * amps[n] - eith * sh * math.sqrt(n) * prev) / (ch * math.sqrt(n + 1))
        amps.append(nxt)
        total += abs(nxt) ** 2
        n += 1
    return FockVector(np.array(amps))


def _photon_probabilities(params: SqueezeParams):
    """Yield ``P_0, P_1, ...`` from the Hermite closed form (needs ``r > 0``).

    The Hermite factor is accumulated as ``H_n(z)/sqrt(2^n n!)`` so large ``n``
    does not overflow.
    """
    alpha, r, th = params.alpha, params.r, params.vartheta
    z = alpha * cmath.exp(-0.5j * th) / math.sqrt(math.sinh(2 * r))
    t = math.tanh(r)
    expo = -abs(alpha) ** 2 + (cmath.exp(-1j * th) * alpha**2).real * t
    scale = math.exp(expo) / math.cosh(r)
    h_prev, h = 0j, 1.0 + 0j
    k = 0
    while True:
        yield scale * abs(h) ** 2
        h_prev, h = h, (math.sqrt(2.0) * z * h - math.sqrt(k) * h_prev) / math.sqrt(k + 1)
        scale *= t
        k += 1


def photon_probability(n: int, params: SqueezeParams) -> float:
    """Photon-number probability of ``S(ξ)D(α)|0⟩`` from the Hermite closed form.

    At ``r = 0`` the closed form is singular and the Poisson law of the
    coherent state is used instead.
    """
    if n < 0:
        raise ContractError("photon number must be non-negative")
    if params.r == 0:
        log.debug("photon_probability: r = 0, using the coherent-state Poisson law")
        mu = abs(params.alpha) ** 2
        if mu == 0:
            return 1.0 if n == 0 else 0.0
        return math.exp(n * math.log(mu) - mu - math.lgamma(n + 1))
    for k, pk in enumerate(_photon_probabilities(params)):
        if k == n:
            return pk
    raise AssertionError("unreachable")


def quadrature_moments(state: FockVector) -> tuple[float, float, float, float]:
    """``(⟨x⟩, ⟨p⟩, Var x, Var p)`` of a normalized single-mode state."""
    c = state.amps / math.sqrt(state.norm2)
    n = np.arange(c.size)
    sq1 = np.sqrt(n[1:])
    a1 = np.vdot(c[:-1], sq1 * c[1:])  # ⟨a⟩
    a2 = np.vdot(c[:-2], np.sqrt(n[2:] * n[1:-1]) * c[2:])  # ⟨a²⟩
    nn = float(n @ (np.abs(c) ** 2))
    xbar = math.sqrt(2.0) * a1.real
    pbar = math.sqrt(2.0) * a1.imag
    # x² = (a² + a†² + 2a†a + 1)/2, p² = (-a² - a†² + 2a†a + 1)/2
    x2 = (2 * a2.real + 2 * nn + 1) / 2
    p2 = (-2 * a2.real + 2 * nn + 1) / 2
    return xbar, pbar, x2 - xbar**2, p2 - pbar**2


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


# absolute error allowed in a block column before the alternating sum is abandoned
BS_SUM_TOL = 1e-13


@functools.lru_cache(maxsize=8)
def _generator_eigvecs(n_total: int) -> np.ndarray:
    """Eigenvectors of the symmetric tridiagonal ``T`` with ``T[k, k+1] = sqrt((k+1)(N-k))``.

    The sector-N generator of the beam splitter is ``A = D (-iT) D⁻¹`` with
    ``D = diag(i^k)``; the spectrum of ``T`` is exactly ``-N, -N+2, ..., N``.
    """
    k = np.arange(n_total)
    off = np.sqrt((k + 1.0) * (n_total - k))
    _, vecs = eigh_tridiagonal(np.zeros(n_total + 1), off)
    return vecs


def _stable_column(n_total: int, m: int, delta: float) -> np.ndarray:
    if n_total == 0:
        return np.ones(1)
    vecs = _generator_eigvecs(n_total)
    lam = -n_total + 2.0 * np.arange(n_total + 1)
    phase_k = 1j ** (np.arange(n_total + 1) % 4)
    col = phase_k * (vecs @ (np.exp(-1j * delta * lam) * vecs[m])) / 1j ** (m % 4)
    return col.real


def _block_column(n_total: int, m: int, delta: float) -> np.ndarray:
    """Column ``m`` of the sector-N block, vectorized over the row index k.

    The dual-rail sum is evaluated in log space so large ``N`` neither
    overflows nor produces ``inf * 0``. The sum alternates in sign; when the
    magnitudes of its terms imply an absolute rounding error above
    :data:`BS_SUM_TOL`, the column is taken from the eigen-decomposition of the
    sector generator instead.
    """
    k = np.arange(n_total + 1)
    c, s = math.cos(delta), math.sin(delta)
    log_c = math.log(abs(c)) if c != 0 else -math.inf
    log_s = math.log(abs(s)) if s != 0 else -math.inf
    log_pref = 0.5 * (gammaln(k + 1) + gammaln(n_total - k + 1) - gammaln(m + 1) - gammaln(n_total - m + 1))
    col = np.zeros(n_total + 1)
    magnitude = np.zeros(n_total + 1)
    for l in range(0, m + 1):
        valid = (l >= m - k) & (l <= n_total - k)
        if not valid.any():
            continue
        kv = k[valid]
        pc = m + n_total - kv - 2 * l
        ps = kv - m + 2 * l
        with np.errstate(invalid="ignore"):
            log_trig = np.where(pc > 0, pc * log_c, 0.0) + np.where(ps > 0, ps * log_s, 0.0)
        sign = (-1.0) ** l * np.where(c < 0, (-1.0) ** pc, 1.0) * np.where(s < 0, (-1.0) ** ps, 1.0)
        logs = log_pref[valid] + _log_binom(m, l) + _log_binom(n_total - m, n_total - kv - l) + log_trig
        terms = np.exp(logs)
        col[valid] += sign * terms
        magnitude[valid] += terms
    if (m + 1) * np.finfo(float).eps * magnitude.max() > BS_SUM_TOL:
        return _stable_column(n_total, m, delta)
    return col


def beam_splitter_element(k: int, m: int, n_total: int, delta: float) -> float:
    """``⟨k, N-k| U_BS(δ) |m, N-m⟩`` for ``U_BS = exp(δ(a†b - a b†))``.

    ``√(k!(N-k)!/(m!(N-m)!)) Σ_l C(m,l) C(N-m,N-k-l) (-1)^l cos^{m+N-k-2l}δ sin^{k-m+2l}δ``
    """
    if not (0 <= k <= n_total and 0 <= m <= n_total):
        raise ContractError(f"indices must satisfy 0 <= k, m <= N (got k={k}, m={m}, N={n_total})")
    return float(_block_column(n_total, m, delta)[k])


def beam_splitter_block(n_total: int, delta: float) -> np.ndarray:
    """Real ``(N+1) × (N+1)`` block ``B[k, m]`` of the beam splitter at total photon number N."""
    if n_total < 0:
        raise ContractError("total photon number must be non-negative")
    return np.column_stack([_block_column(n_total, m, delta) for m in range(n_total + 1)])


def apply_beam_splitter(state: TwoModeFock, delta: float) -> TwoModeFock:
    """Apply ``U_BS(δ)`` sector by sector in total photon number.

    The output table is sized to the largest populated total photon number, so
    every sector is complete and the map is exactly unitary. Only block
    columns that carry amplitude are computed.
    """
    a = state.amps
    c = state.cutoff
    occupied = np.nonzero(a)
    n_max = int(max(occupied[0] + occupied[1])) if occupied[0].size else 0
    out = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(n_max + 1):
        k = np.arange(n + 1)
        valid = (k <= c) & (n - k <= c)
        vec = np.zeros(n + 1, dtype=complex)
        vec[valid] = a[k[valid], n - k[valid]]
        result = np.zeros(n + 1, dtype=complex)
        for m in np.nonzero(vec)[0]:
            result += _block_column(n, int(m), delta) * vec[m]
        out[k, n - k] = result
    return TwoModeFock(out)


def herald_single_photon(state: TwoModeFock) -> tuple[FockVector, float]:
    """Condition on exactly one photon in the first mode.

    Returns:
        The normalized second-mode state and the success probability.

    Raises:
        HeraldingError: if the success probability is below 1e-300.
    """
    row = state.amps[1, :] if state.cutoff >= 1 else np.zeros(1, dtype=complex)
    p1 = float(np.sum(np.abs(row) ** 2))
    if p1 < 1e-300:
        raise HeraldingError("heralding event has zero probability")
    return FockVector(row / math.sqrt(p1)), p1


def herald_probability_closed(r: float, delta: float) -> float:
    """One-photon heralding probability for squeezed vacuum input.

    ``sin²(2δ) sech(r) tanh²(r) / (4 (1 - cos⁴δ tanh²r)^{3/2})``
    """
    if r < 0:
        raise ContractError("squeeze magnitude r must be non-negative")
    t = math.tanh(r)
    return math.sin(2 * delta) ** 2 * t * t / math.cosh(r) / (4 * (1 - math.cos(delta) ** 4 * t * t) ** 1.5)


def herald_probability_small_r(r: float, delta: float) -> float:
    """Leading small-r behavior ``sin²(2δ) r² / 4``."""
    return 0.25 * math.sin(2 * delta) ** 2 * r * r


def herald_probability_series(
    params: SqueezeParams, delta: float, *, tail_tol: float = 1e-14, max_terms: int = 1_000_000
) -> float:
    """``Σ_n P_n n cos^{2(n-1)}δ sin²δ`` with ``P_n`` from the photon-number closed form.

    Raises:
        ResourceError: if the probability tail is still above ``tail_tol`` after ``max_terms``.
    """
    c2, s2 = math.cos(delta) ** 2, math.sin(delta) ** 2
    if params.r == 0:
        probs = (photon_probability(n, params) for n in range(max_terms + 1))
    else:
        probs = _photon_probabilities(params)
    total, seen = 0.0, 0.0
    for n, pn in enumerate(probs):
        seen += pn
        if n:
            total += pn * n * c2 ** (n - 1) * s2
        if 1.0 - seen <= tail_tol:
            return total
        if n >= max_terms:
            break
    raise ResourceError(f"photon-number series tail {1.0 - seen:.2e} above {tail_tol:g} after {max_terms} terms")


def subtract_fock(state: FockVector) -> FockVector:
    """Normalized ``a|ψ⟩``."""
    n = np.arange(state.amps.size)
    out = np.sqrt(n[1:]) * state.amps[1:]
    norm2 = float(np.sum(np.abs(out) ** 2))
    if norm2 <= 0 or state.mean_photon() <= 0:
        raise DomainError("photon subtraction from vacuum undefined")
    if out.size == 0:
        out = np.zeros(1, dtype=complex)
    return FockVector(out / math.sqrt(norm2))


def add_fock(state: FockVector) -> FockVector:
    """Normalized ``a†|ψ⟩``; the cutoff grows by one so nothing is truncated."""
    n = np.arange(state.amps.size)
    out = np.zeros(state.amps.size + 1, dtype=complex)
    out[1:] = np.sqrt(n + 1) * state.amps
    return FockVector(out / math.sqrt(float(np.sum(np.abs(out) ** 2))))


def fidelity(a: FockVector, b: FockVector) -> float:
    """``|⟨a|b⟩|²`` for normalized states (padded to a common cutoff)."""
    size = max(a.cutoff, b.cutoff)
    return abs(np.vdot(a.padded(size).amps, b.padded(size).amps)) ** 2


def _bures_gap(a: FockVector, b: FockVector) -> float:
    """``1 - |⟨a|b⟩|`` evaluated as ``½‖b - e^{iφ}a‖²`` to avoid cancellation."""
    size = max(a.cutoff, b.cutoff)
    va, vb = a.padded(size).amps, b.padded(size).amps
    for v in (va, vb):
        if abs(np.vdot(v, v).real - 1.0) > 1e-9:
            raise NormalizationError("fidelity_qfi needs normalized states")
    overlap = np.vdot(va, vb)
    if abs(overlap) > 1.0 + 1e-9:
        raise NormalizationError(f"overlap {abs(overlap)!r} exceeds 1")
    phase = overlap / abs(overlap) if overlap != 0 else 1.0
    diff = vb - phase * va
    return 0.5 * float(np.vdot(diff, diff).real)


def fidelity_qfi(
    family: Callable[[float], FockVector], theta: float = 0.0, dtheta: float = 1e-4
) -> float:
    """QFI of a pure-state family from the overlap of neighbouring states.

    Uses ``I ≈ 8(1 - |⟨ψ(θ-h)|ψ(θ+h)⟩|)/(2h)²``, which is even in ``h``, and
    one Richardson step between ``h = dtheta`` and ``h = dtheta/2``.
    """
    if not dtheta > 0:
        raise ContractError("dtheta must be positive")

    def estimate(h):
        return 8.0 * _bures_gap(family(theta - h), family(theta + h)) / (2 * h) ** 2

    coarse = estimate(dtheta)
    fine = estimate(dtheta / 2)
    return (4 * fine - coarse) / 3


def state_family(jet: ParamJet, kind: str = "gaussian") -> Callable[[float], FockVector]:
    """θ ↦ Fock amplitudes of the state on the jet's affine path."""
    kind = normalize_kind(kind)

    def family(theta: float) -> FockVector:
        params = squeeze_params_from_spec(jet.at(theta))
        base = squeezed_coherent(params)
        base = squeezed_coherent(params, cutoff=min(MAX_CUTOFF, int(CUTOFF_MARGIN * base.cutoff) + 2))
        if kind == "gaussian":
            return base.normalized()
        if kind == "subtracted":
            return subtract_fock(base)
        return add_fock(base)

    return family


def qfi_fock(jet: ParamJet, kind: str = "gaussian", dtheta: float = 1e-4):
    """Fidelity-based QFI of the state described by ``jet`` (method tag ``fock``)."""
    from .qfi_closed import QfiReport

    if normalize_kind(kind) == "subtracted" and jet.state.is_vacuum:
        raise DomainError("photon subtraction from vacuum undefined (N- = 0)")
    if jet.is_static:
        return QfiReport(0.0, "fock")
    return QfiReport(fidelity_qfi(state_family(jet, kind), 0.0, dtheta), "fock")


def herald_probability(spec: GaussianSpec, delta: float) -> float:
    """One-photon heralding probability for the squeezed (coherent) input ``spec``.

    Squeezed vacuum (``x̄ = p̄ = 0``) uses the closed form, anything else the
    photon-number series.
    """
    if spec.xbar == 0 and spec.pbar == 0:
        return herald_probability_closed(abs(spec.squeeze), delta)
    return herald_probability_series(squeeze_params_from_spec(spec), delta)


def effective_qfi(jet: ParamJet, r: float, delta: float) -> float:
    """Heralding-rate-weighted QFI ``P₁(r, δ) · I(subtracted state)``.

    The jet's Γ must equal ``e^{2r}``.
    """
    from .qfi_closed import qfi_subtracted

    s = jet.state
    if not math.isclose(s.gamma, math.exp(2 * r), rel_tol=1e-12):
        raise ContractError(f"jet gamma {s.gamma!r} does not match exp(2r) = {math.exp(2 * r)!r}")
    return herald_probability(s, delta) * qfi_subtracted(jet).value


def wigner_fock(state: FockVector, x, p):
    """Wigner function of a pure single-mode state from its Fock amplitudes.

    Uses the Laguerre form of the Wigner function of ``|m⟩⟨n|``. Normalized so
    that ``∬ W dx dp = 1``.
    """
    c = state.amps / math.sqrt(state.norm2)
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    rho2 = x * x + p * p
    z = math.sqrt(2.0) * (x + 1j * p)
    out = np.zeros(np.broadcast(x, p).shape, dtype=complex)
    env = np.exp(-rho2)
    for m in range(c.size):
        if c[m] == 0:
            continue
        for n in range(m + 1):
            weight = c[m] * np.conj(c[n]) if n != m else abs(c[m]) ** 2
            if weight == 0:
                continue
            d = m - n
            pref = (-1) ** n * math.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)))
            w_mn = pref * np.conj(z) ** d * eval_genlaguerre(n, d, 2 * rho2) * env / math.pi
            if d == 0:
                out += weight * w_mn
            else:
                out += 2 * (weight * w_mn).real
    return out.real
