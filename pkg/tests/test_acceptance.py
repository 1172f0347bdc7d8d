"""Acceptance suite: every validation check at its stated tolerance.

Runs the full built-in suite once at the desk-scale defaults
(G = b = d = 1, nu = 1/4, L = 200 zeta, N = 4096) and asserts each
check, printing one pass/fail line per criterion (visible with -s).
"""

import pytest

from pnedge.config import RunConfig
from pnedge.validation import run_validation

CHECK_NAMES = [
    "01.closed_form_residual",
    "02.static_recovery.core_error",
    "02.static_recovery.monotone",
    "02.static_recovery.odd",
    "03.sobolev.analytic_vs_gamma",
    "03.sobolev.grid_vs_analytic",
    "03.sobolev.half_divergence",
    "04.decay_rate",
    "05.extension.displacement",
    "05.extension.stress",
    "05.extension.plane_strain",
    "05.extension.sigma22_on_plane",
    "05.extension.mirror",
    "06.dtn.force_balance",
    "06.dtn.sigma12_at_zeta",
    "07.energy_relation.total",
    "07.energy_relation.cross_terms",
    "08.minimizer.energy_nonnegative",
    "08.minimizer.extension_optimal",
    "09.log_divergence.affine_fit",
    "09.log_divergence.slope_positive",
    "09.log_divergence.slope_converged",
    "10.dynamics.F_nonincreasing",
    "10.dynamics.relaxation",
    "10.dynamics.chain_rule_order",
    "10.dynamics.chain_rule_bound",
    "10.dynamics.integrator_gap_order",
    "11.misfit_energy",
    "12.burgers.total",
    "12.burgers.density_center",
]

_RESULTS = None


def _results():
    global _RESULTS
    if _RESULTS is None:
        _RESULTS = {r.name: r for r in run_validation(RunConfig())}
    return _RESULTS


def test_suite_composition():
    assert sorted(_results()) == sorted(CHECK_NAMES)


@pytest.mark.parametrize("name", CHECK_NAMES)
def test_acceptance_check(name):
    r = _results()[name]
    print(r.line())
    assert r.passed, r.line()


def test_acceptance_covers_all_criteria():
    for crit in range(1, 13):
        prefix = f"{crit:02d}."
        assert any(n.startswith(prefix) for n in CHECK_NAMES), f"criterion {crit} missing"
