import math

import numpy as np
import pytest
import sympy as sp

from photonqfi.errors import ContractError, DomainError
from photonqfi.phase_space import (
    ParamJet,
    mean_photon,
    mean_photon_derivative,
    moment_integral,
    product,
    theta_derivative,
    wigner,
)
from photonqfi.qfi_closed import (
    ADDED_VACUUM_GAMMA_COEFFS,
    CONDITIONING_WARN,
    QfiReport,
    _added_numerator,
    cramer_rao_bound,
    gamma_from_squeeze,
    qfi_added,
    qfi_added_gamma_only,
    qfi_added_shift_only,
    qfi_added_vacuum_gamma_only,
    qfi_asymptotic,
    qfi_coherent,
    qfi_gaussian,
    qfi_subtracted,
    qfi_subtracted_eps_expansion,
    qfi_subtracted_gamma_only,
    qfi_subtracted_shift_only,
    qfi_subtracted_squeeze_form,
    qfi_subtracted_squeeze_series,
    qfi_subtracted_vacuum_series,
    squeeze_from_gamma,
)

x, p, g, dx, dp, dg = sp.symbols("x p g dx dp dg", real=True)


# ---- fully expanded reference expressions, for symbolic comparison -------------------------------

def expanded_subtracted_numerator():
    return (
        4 * g * (3 + g * (-8 + 8 * p**2 + 10 * g + 4 * (-2 + p**2 + x**2) * (p**2 + x**2) * g
                          + 8 * (-1 + x**2) * g**2 + 3 * g**3)) * (dp**2 + g**2 * dx**2)
        + 32 * g**2 * (p * (1 + (-1 + p**2 + x**2) * g) * dp
                       - x * g * (-1 + p**2 + x**2 + g) * dx) * dg
        + (3 + g * (12 * p**2 + 4 * (-2 + p**2 + x**2) * (p**2 + x**2) * g
                    + 12 * (-1 + p**2 + x**2) * g**2 + 3 * g**3
                    + 6 * (-2 + 2 * x**2 + 3 * g))) * dg**2
    )


def expanded_subtracted_denominator():
    return 2 * (g + 2 * (-1 + p**2 + x**2) * g**2 + g**3) ** 2


def expanded_shift_only():
    num = 2 * g * (3 - 8 * g + 2 * (5 - 4 * x**2 + 2 * x**4) * g**2 + 8 * (-1 + x**2) * g**3
                   + 3 * g**4) * dx**2
    return num, (1 + 2 * (-1 + x**2) * g + g**2) ** 2


def expanded_gamma_only():
    num = (3 + g * (4 * x**4 * g + 4 * x**2 * (3 - 2 * g + 3 * g**2)
                    + 3 * (-4 + 6 * g - 4 * g**2 + g**3))) * dg**2
    return num, 2 * (g + 2 * (-1 + x**2) * g**2 + g**3) ** 2


def expanded_added_shift_poly(gamma7):
    return (3 + 4 * (13 + 3 * x**2) * g + 4 * (83 + 8 * x**2 + 4 * x**4) * g**2
            + 4 * (239 + 135 * x**2 + 52 * x**4 + 4 * x**6) * g**3
            + 2 * (593 + 784 * x**2 + 432 * x**4 + 96 * x**6 + 8 * x**8) * g**4
            + 4 * (91 + 177 * x**2 + 84 * x**4 + 12 * x**6) * g**5
            + 4 * (35 + 48 * x**2 + 12 * x**4) * g**6 + gamma7 * g**7 + 3 * g**8)


def expanded_added_gamma_poly():
    return (3 + 24 * (2 + x**2) * g + 4 * (105 + 88 * x**2 + 16 * x**4) * g**2
            + 8 * (114 + 149 * x**2 + 60 * x**4 + 8 * x**6) * g**3
            + 2 * (665 + 992 * x**2 + 480 * x**4 + 96 * x**6 + 8 * x**8) * g**4
            + 8 * (114 + 149 * x**2 + 60 * x**4 + 8 * x**6) * g**5
            + 4 * (105 + 88 * x**2 + 16 * x**4) * g**6 + 24 * (2 + x**2) * g**7 + 3 * g**8)


# ---- regrouped forms used by the library, restated symbolically ----------------------------

def regrouped_subtracted_numerator():
    s = x**2 + p**2
    q = (g - 1) ** 2
    shift = q * (3 - 2 * g + 3 * g**2) + 8 * g * (g - 1) * (g * x**2 - p**2) + 4 * g**2 * s**2
    cross = p * (1 + (s - 1) * g) * dp - x * g * (s - 1 + g) * dx
    squeeze = 3 * q**2 + 4 * g * s * (3 - 2 * g + 3 * g**2 + g * s)
    return 4 * g * shift * (dp**2 + g**2 * dx**2) + 32 * g**2 * cross * dg + squeeze * dg**2


def random_jets(n, seed, lo=0.2, hi=5.0, span=3.0):
    rng = np.random.default_rng(seed)
    return [
        ParamJet.make(*rng.uniform(-span, span, 2), rng.uniform(lo, hi), *rng.uniform(-2, 2, 3))
        for _ in range(n)
    ]


def expanded_value(expr_num, expr_den, jet):
    vals = {x: jet.state.xbar, p: jet.state.pbar, g: jet.state.gamma,
            dx: jet.dxbar, dp: jet.dpbar, dg: jet.dgamma}
    return float(expr_num.subs(vals) / expr_den.subs(vals))


class TestGaussianAndBounds:
    def test_examples(self):
        assert qfi_gaussian(ParamJet.make(gamma=1, dxbar=1)).value == 2
        assert qfi_gaussian(ParamJet.make(0.3, 0.2, 1.7)).value == 0
        assert qfi_gaussian(ParamJet.make(gamma=2, dgamma=1)).value == pytest.approx(1 / 8)
        assert qfi_coherent(1.0, 2.0) == 10

    def test_cramer_rao(self):
        assert cramer_rao_bound(2.0, 100) == pytest.approx(1 / math.sqrt(200))
        assert QfiReport(2.0, "closed").bound(100) == pytest.approx(1 / math.sqrt(200))
        assert cramer_rao_bound(0.0) == math.inf
        with pytest.raises(ContractError):
            cramer_rao_bound(1.0, 0)
        with pytest.raises(DomainError):
            cramer_rao_bound(-1.0)

    def test_squeeze_conversion(self):
        assert squeeze_from_gamma(gamma_from_squeeze(0.37)) == pytest.approx(0.37)


class TestSubtracted:
    def test_regrouping_is_exact(self):
        assert sp.expand(expanded_subtracted_numerator() - regrouped_subtracted_numerator()) == 0
        base = (g - 1) ** 2 + 2 * g * (x**2 + p**2)
        assert sp.expand(expanded_subtracted_denominator() - 2 * g**2 * base**2) == 0

    def test_shift_only_regrouping_is_exact(self):
        num, den = expanded_shift_only()
        q = (g - 1) ** 2
        ours_num = 2 * g * (q * (3 - 2 * g + 3 * g**2) + 4 * x**2 * g**2 * (x**2 + 2 * g - 2)) * dx**2
        ours_den = (q + 2 * x**2 * g) ** 2
        assert sp.expand(num - ours_num) == 0
        assert sp.expand(den - ours_den) == 0

    def test_gamma_only_regrouping_is_exact(self):
        num, den = expanded_gamma_only()
        q = (g - 1) ** 2
        ours_num = (3 * q**2 + 4 * x**2 * g * (3 - 2 * g + 3 * g**2 + x**2 * g)) * dg**2
        ours_den = 2 * (g * (q + 2 * x**2 * g)) ** 2
        assert sp.expand(num - ours_num) == 0
        assert sp.expand(den - ours_den) == 0

    def test_matches_expanded_expression(self):
        num, den = expanded_subtracted_numerator(), expanded_subtracted_denominator()
        for jet in random_jets(25, 1):
            ref = expanded_value(num, den, jet)
            assert qfi_subtracted(jet).value == pytest.approx(ref, rel=1e-10)

    def test_examples(self):
        assert qfi_subtracted(ParamJet.make(0.3, 0.7, 1, 1, 2)).value == pytest.approx(10, rel=1e-13)
        assert qfi_subtracted(ParamJet.make(0.3, 0.7, 1.4)).value == 0
        assert qfi_subtracted(ParamJet.make(1, 0, 2, 1)).value == pytest.approx(9.44, rel=1e-14)

    def test_vacuum_is_domain_error(self):
        with pytest.raises(DomainError):
            qfi_subtracted(ParamJet.make(dxbar=1))

    def test_conditioning_and_note(self):
        jet = ParamJet.make(0.3, 0.4, 1.5, 1)
        x0, p0, g0 = 0.3, 0.4, 1.5
        expected = abs(g0 + 2 * (-1 + p0**2 + x0**2) * g0**2 + g0**3)
        assert qfi_subtracted(jet).conditioning == pytest.approx(expected)
        close = qfi_subtracted(ParamJet.make(1e-4, 0, 1 + 1e-4, 1))
        assert close.conditioning < CONDITIONING_WARN
        assert close.notes and math.isfinite(close.value) and close.value > 1e6

    def test_exchange_symmetry_at_unit_gamma(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a, b, da, db = rng.uniform(-2, 2, 4)
            lhs = qfi_subtracted(ParamJet.make(a, b, 1.0, da, db)).value
            rhs = qfi_subtracted(ParamJet.make(b, a, 1.0, db, da)).value
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_nonnegative(self):
        for jet in random_jets(300, 3):
            assert qfi_subtracted(jet).value >= 0
            assert qfi_added(jet).value >= 0
            assert qfi_gaussian(jet).value >= 0


class TestSubtractedSpecialCases:
    def test_shift_only_examples(self):
        assert qfi_subtracted_shift_only(ParamJet.make(1, 0, 2, 1)).value == pytest.approx(236 / 25)
        for xb in (0.1, 0.7, 3.0):
            assert qfi_subtracted_shift_only(ParamJet.make(xb, 0, 1, 1.5)).value == pytest.approx(4.5)
        assert qfi_subtracted_shift_only(ParamJet.make(0, 0, 2, 1)).value == pytest.approx(44)

    def test_shift_only_contract(self):
        with pytest.raises(ContractError):
            qfi_subtracted_shift_only(ParamJet.make(1, 0, 2, 1, dgamma=0.1))
        with pytest.raises(ContractError):
            qfi_subtracted_shift_only(ParamJet.make(1, 0.1, 2, 1))
        with pytest.raises(DomainError):
            qfi_subtracted_shift_only(ParamJet.make(0, 0, 1, 1))

    def test_shift_only_equals_full(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            jet = ParamJet.make(rng.uniform(-3, 3), 0, rng.uniform(0.2, 5), rng.uniform(-2, 2))
            a, b = qfi_subtracted_shift_only(jet).value, qfi_subtracted(jet).value
            assert a == pytest.approx(b, rel=1e-11)

    def test_gamma_only_equals_full(self):
        assert qfi_subtracted_gamma_only(0.5, 1.5, 1) == pytest.approx(
            qfi_subtracted(ParamJet.make(0.5, 0, 1.5, dgamma=1)).value, rel=1e-12
        )
        rng = np.random.default_rng(5)
        for _ in range(50):
            xb, gm, dgm = rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(-2, 2)
            full = qfi_subtracted(ParamJet.make(xb, 0, gm, dgamma=dgm)).value
            assert qfi_subtracted_gamma_only(xb, gm, dgm) == pytest.approx(full, rel=1e-11)

    def test_gamma_only_vacuum_limit(self):
        assert qfi_subtracted_gamma_only(0, 2, 1) == pytest.approx(3 / 8)
        assert qfi_subtracted_gamma_only(0, 1 + 1e-9, 1) == pytest.approx(1.5, rel=1e-6)
        with pytest.raises(DomainError):
            qfi_subtracted_gamma_only(0, 1, 1)

    def test_vacuum_series(self):
        value, terms = qfi_subtracted_vacuum_series(2.0)
        assert value == pytest.approx(44) and sum(terms) == pytest.approx(38)
        value, terms = qfi_subtracted_vacuum_series(1.001)
        assert abs(value / sum(terms) - 1) < 1e-3
        for e in (1e-2, 1e-3, 1e-4):
            assert e**2 * qfi_subtracted_vacuum_series(1 + e, 1.5)[0] == pytest.approx(8 * 2.25, rel=3 * e)
        with pytest.raises(DomainError):
            qfi_subtracted_vacuum_series(1.0)

    def test_eps_expansion(self):
        assert qfi_subtracted_eps_expansion(0.7, 0.0, 1.3) == pytest.approx(2 * 1.69)
        assert qfi_subtracted_eps_expansion(1.0, 0.1) == pytest.approx(2.64)
        with pytest.raises(DomainError):
            qfi_subtracted_eps_expansion(0.0, 0.1)

    def test_eps_expansion_remainder_is_third_order(self):
        def remainder(e):
            exact = qfi_subtracted_shift_only(ParamJet.make(0.5, 0, 1 + e, 1)).value
            return exact - qfi_subtracted_eps_expansion(0.5, e)

        r1, r2 = remainder(0.01), remainder(0.005)
        assert r1 / r2 == pytest.approx(8, rel=0.1)

    def test_squeeze_form(self):
        assert qfi_subtracted_squeeze_form(0.5) == pytest.approx(qfi_subtracted_vacuum_series(math.e)[0], rel=1e-13)
        for r in (1e-2, 1e-3, 1e-4):
            assert r * r * qfi_subtracted_squeeze_form(r) == pytest.approx(2, rel=5 * r)
        v = qfi_subtracted_squeeze_form(0.1)
        assert abs(v / qfi_subtracted_squeeze_series(0.1) - 1) < 0.05
        with pytest.raises(DomainError):
            qfi_subtracted_squeeze_form(0.0)

    def test_squeeze_form_equals_gamma_form(self):
        rng = np.random.default_rng(6)
        for r in rng.uniform(-2, 2, 20):
            a = qfi_subtracted_squeeze_form(r, 0.8)
            b = qfi_subtracted_vacuum_series(math.exp(2 * r), 0.8)[0]
            assert a == pytest.approx(b, rel=1e-12)

    def test_limits_do_not_commute(self):
        along_unit_gamma = [qfi_subtracted_shift_only(ParamJet.make(xb, 0, 1, 1)).value for xb in (1e-2, 1e-4)]
        assert along_unit_gamma == pytest.approx([2, 2])
        along_zero_x = [(e**2) * qfi_subtracted_shift_only(ParamJet.make(0, 0, 1 + e, 1)).value for e in (1e-3, 1e-5)]
        assert along_zero_x == pytest.approx([8, 8], rel=1e-2)


class TestAdded:
    def test_shift_only_reduction_symbolic(self):
        num = sp.expand(_added_numerator(x, 0, g, dx, 0, 0))
        # value = num / (2Γ² root⁴) and the shift-only form is 2Γ·poly·x̄′²/root⁴
        fixed = expanded_added_shift_poly(4 * (9 + 5 * x**2))
        gamma_squared_variant = expanded_added_shift_poly(4 * (9 + 5 * g**2))
        assert sp.expand(num - 4 * g**3 * fixed * dx**2) == 0
        assert sp.expand(num - 4 * g**3 * gamma_squared_variant * dx**2) != 0

    def test_gamma_only_reduction_symbolic(self):
        num = sp.expand(_added_numerator(x, 0, g, 0, 0, dg))
        assert sp.expand(num - expanded_added_gamma_poly() * dg**2) == 0
        vac = sp.Poly(sp.expand(expanded_added_gamma_poly().subs(x, 0)), g)
        assert tuple(int(c) for c in reversed(vac.all_coeffs())) == ADDED_VACUUM_GAMMA_COEFFS

    def test_vacuum_coefficients_palindromic(self):
        assert ADDED_VACUUM_GAMMA_COEFFS == tuple(reversed(ADDED_VACUUM_GAMMA_COEFFS))
        assert sum(ADDED_VACUUM_GAMMA_COEFFS) == 4096

    def test_special_cases_equal_full(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            xb, gm, d = rng.uniform(-3, 3), rng.uniform(0.2, 5), rng.uniform(-2, 2)
            full = qfi_added(ParamJet.make(xb, 0, gm, d)).value
            assert qfi_added_shift_only(xb, gm, d) == pytest.approx(full, rel=1e-12)
            full = qfi_added(ParamJet.make(xb, 0, gm, dgamma=d)).value
            assert qfi_added_gamma_only(xb, gm, d) == pytest.approx(full, rel=1e-12)
            assert qfi_added_vacuum_gamma_only(gm, d) == pytest.approx(qfi_added_gamma_only(0, gm, d), rel=1e-13)

    def test_examples(self):
        assert qfi_added(ParamJet.make(0.4, -0.2, 1.3)).value == 0
        assert qfi_added_vacuum_gamma_only(1, 1) == pytest.approx(0.5)
        assert qfi_added(ParamJet.make(0, 0, 1, dgamma=1)).value == pytest.approx(0.5)
        ratio = qfi_added_gamma_only(0, 100, 1) / (3 / (2 * 100**2))
        assert 0.9 <= ratio <= 1.1
        big = qfi_added_shift_only(100, 1.7, 1)
        gauss = qfi_gaussian(ParamJet.make(100, 0, 1.7, 1)).value
        assert abs(big / gauss - 1) < 10 / 100**2

    def test_closed_form_is_qfi_of_mixture(self):
        # 4π∬(∂θ W_mix)² with W_mix = [(N+1) W⁺ + W] / (N+2), built from public pieces
        for jet in random_jets(30, 8):
            s = jet.state
            n, dn = mean_photon(s), mean_photon_derivative(jet)
            w_add, w = wigner(s, "added"), wigner(s)
            d_scaled_add = theta_derivative(jet, "added") * (n + 1) + w_add * dn
            d_mix = (d_scaled_add + theta_derivative(jet)) / (n + 2) - (w_add * (n + 1) + w) * (dn / (n + 2) ** 2)
            mix_qfi = 4 * math.pi * moment_integral(product(d_mix, d_mix))
            assert qfi_added(jet).value == pytest.approx(mix_qfi, rel=1e-10)


class TestAsymptotic:
    def test_reduces_to_gaussian(self):
        jet = ParamJet.make(3, 0.2, 1.7, 1, 0.5)
        assert qfi_asymptotic(jet) == qfi_gaussian(jet).value
        with pytest.raises(DomainError):
            qfi_asymptotic(ParamJet.make(0, 0, 2, 1))

    @pytest.mark.parametrize("closed", [qfi_subtracted, qfi_added])
    def test_remainder_is_second_order(self, closed):
        scaled = []
        for xb in (25.0, 50.0, 100.0):
            jet = ParamJet.make(xb, 0, 2, 1, 0, 0.5)
            scaled.append(abs(closed(jet).value - qfi_asymptotic(jet)) * xb**2)
        assert max(scaled) < 2 * min(scaled)
