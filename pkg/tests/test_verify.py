import dataclasses

import numpy as np
import pytest

from cantiq.closedform import dissipative_cat, realize, wigner_analytic_grid
from cantiq.hilbert import wigner_grid
from cantiq.verify import (
    VerifyProfile,
    check_bch_vs_dense,
    check_steady_closed_vs_solve,
    check_wigner_consistency,
    realize_auto,
    wigner_discrepancy,
)

FIG2 = dict(beta=3.0, phase=0.0, g_s=-300.0, omega=100.0, gamma=1.0)


class TestCheckPlumbing:
    def test_bch_check_passes(self):
        result = check_bch_vs_dense(VerifyProfile())
        assert result.passed
        assert result.value < result.threshold

    def test_steady_check_passes(self):
        result = check_steady_closed_vs_solve(VerifyProfile())
        assert result.passed

    def test_wigner_check_passes(self):
        result = check_wigner_consistency(VerifyProfile())
        assert result.passed
        # the swung-out time point forces a larger cutoff
        assert "191" in result.detail


class TestRealizeAuto:
    def test_keeps_base_dim_for_small_labels(self):
        cat = dissipative_cat(FIG2["beta"], 0.0, FIG2["g_s"], FIG2["omega"],
                              FIG2["gamma"], 0.0)
        _, dim = realize_auto(cat, 60)
        assert dim == 60

    def test_grows_for_swung_branch(self):
        cat = dissipative_cat(FIG2["beta"], 0.0, FIG2["g_s"], FIG2["omega"],
                              FIG2["gamma"], 0.1)
        _, dim = realize_auto(cat, 60)
        assert dim > 130


class TestMutationDetection:
    def test_sign_flip_in_cross_phase_is_caught(self):
        # corrupting delta_i on the analytic side only must blow past the
        # agreement threshold of the wigner consistency check
        cat = dissipative_cat(FIG2["beta"], FIG2["phase"], FIG2["g_s"],
                              FIG2["omega"], FIG2["gamma"], 0.5)
        assert cat.delta_i != 0.0
        bad = dataclasses.replace(cat, delta_i=-cat.delta_i)
        xs = np.arange(-5.0, 5.0 + 1e-9, 0.25)
        rho = realize(cat, 60)
        healthy = np.abs(wigner_analytic_grid(cat, xs, xs)
                         - wigner_grid(rho, xs, xs)).max()
        corrupted = np.abs(wigner_analytic_grid(bad, xs, xs)
                           - wigner_grid(rho, xs, xs)).max()
        assert healthy < 1e-6
        assert corrupted > 1e-6

    def test_discrepancy_helper_consistent(self):
        cat = dissipative_cat(FIG2["beta"], FIG2["phase"], FIG2["g_s"],
                              FIG2["omega"], FIG2["gamma"], 1.5)
        diff, dim = wigner_discrepancy(
            cat, 60, np.arange(-5, 5.0001, 0.5), np.arange(-5, 5.0001, 0.5))
        assert dim == 60
        assert diff < 1e-6
