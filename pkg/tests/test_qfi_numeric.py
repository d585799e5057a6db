import math

import numpy as np
import pytest

from photonqfi.errors import DomainError
from photonqfi.fock import qfi_fock
from photonqfi.phase_space import ParamJet
from photonqfi.qfi_closed import qfi_gaussian, qfi_subtracted
from photonqfi.qfi_numeric import default_step, qfi_finite_difference, qfi_moment

KINDS = ["gaussian", "subtracted", "added"]


def random_jets(n, seed):
    rng = np.random.default_rng(seed)
    return [
        ParamJet.make(*rng.uniform(-2.5, 2.5, 2), rng.uniform(0.3, 3), *rng.uniform(-2, 2, 3))
        for _ in range(n)
    ]


class TestMoment:
    @pytest.mark.parametrize("kind", ["gaussian", "subtracted"])
    def test_coherent(self, kind):
        assert qfi_moment(ParamJet.make(0.8, -0.3, 1, 1), kind).value == pytest.approx(2, rel=1e-12)

    def test_shift_only_value(self):
        assert qfi_moment(ParamJet.make(1, 0, 2, 1), "subtracted").value == pytest.approx(9.44, rel=1e-10)

    def test_matches_closed_forms(self):
        for jet in random_jets(60, 1):
            assert qfi_moment(jet).value == pytest.approx(qfi_gaussian(jet).value, rel=1e-11)
            assert qfi_moment(jet, "sub").value == pytest.approx(qfi_subtracted(jet).value, rel=1e-9)

    def test_added_vacuum_matches_fock(self):
        jet = ParamJet.make(0, 0, 1, 1)
        assert qfi_moment(jet, "added").value == pytest.approx(4, rel=1e-12)
        assert qfi_fock(jet, "added").value == pytest.approx(4, rel=1e-6)

    def test_added_matches_fock_oracle(self):
        for jet in random_jets(8, 2):
            assert qfi_moment(jet, "added").value == pytest.approx(qfi_fock(jet, "added").value, rel=1e-5)

    def test_carries_conditioning_for_subtracted(self):
        rep = qfi_moment(ParamJet.make(1e-4, 0, 1 + 1e-4, 1), "subtracted")
        assert rep.method == "moment" and rep.notes
        assert rep.conditioning < 1e-6

    def test_vacuum_subtraction(self):
        with pytest.raises(DomainError):
            qfi_moment(ParamJet.make(dxbar=1), "subtracted")


class TestFiniteDifference:
    def test_coherent(self):
        rep = qfi_finite_difference(ParamJet.make(0.5, 0, 1, 1), h=1e-4)
        assert rep.value == pytest.approx(2, abs=1e-6)
        assert rep.method == "quadrature" and not rep.notes

    def test_static_jet(self):
        assert qfi_finite_difference(ParamJet.make(1, 1, 2), "added").value == pytest.approx(0, abs=1e-10)

    @pytest.mark.parametrize("kind", KINDS)
    def test_agrees_with_moment(self, kind):
        for jet in random_jets(30, 3):
            m = qfi_moment(jet, kind).value
            f = qfi_finite_difference(jet, kind).value
            assert abs(f - m) <= max(1e-6, 1e-4 * m)

    def test_error_estimate_is_second_order(self):
        jet = ParamJet.make(0.7, -0.4, 1.6, 1.2, -0.5, 0.8)
        coarse = qfi_finite_difference(jet, "subtracted", h=1e-3).error
        fine = qfi_finite_difference(jet, "subtracted", h=1e-4).error
        assert coarse / fine == pytest.approx(100, rel=0.05)

    def test_tiny_step_is_flagged(self):
        rep = qfi_finite_difference(ParamJet.make(1, 0, 2, 1), "subtracted", h=1e-12)
        assert rep.notes

    def test_default_step_scales(self):
        assert default_step(ParamJet.make(0.1, 0, 0.5, 1)) == pytest.approx(1e-4)
        assert default_step(ParamJet.make(30, 0, 2, 1)) == pytest.approx(3e-3)

    def test_bad_step(self):
        with pytest.raises(ValueError):
            qfi_finite_difference(ParamJet.make(1, 0, 1, 1), h=0.0)
        with pytest.raises(ValueError):
            qfi_finite_difference(ParamJet.make(1, 0, 1, 1), h=-math.inf)
