"""Misfit potential: closed forms, tables, structural validation."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pnedge.params import PhysParams
from pnedge.potential import (
    eval_potential,
    frenkel,
    from_csv,
    from_table,
    validate_potential,
)


@pytest.fixture(scope="module")
def fr():
    return frenkel(PhysParams())


def test_frenkel_values(fr):
    b = fr.params.b
    assert eval_potential(fr, b / 4.0, 0) == pytest.approx(0.0, abs=1e-15)
    assert eval_potential(fr, 0.0, 0) == pytest.approx(1.0 / (2 * np.pi**2), rel=1e-14)
    assert eval_potential(fr, b / 8.0, 1) == pytest.approx(-1.0 / np.pi, rel=1e-14)
    assert eval_potential(fr, b / 4.0, 2) == pytest.approx(4.0, rel=1e-14)


def test_eval_rejects_bad_order(fr):
    with pytest.raises(ValueError):
        eval_potential(fr, 0.1, 3)


@settings(max_examples=50, deadline=None)
@given(st.floats(-2.0, 2.0, allow_nan=False))
def test_frenkel_periodicity(u):
    fr = frenkel(PhysParams())
    period = fr.params.b / 2.0
    assert abs(eval_potential(fr, u, 0) - eval_potential(fr, u + period, 0)) <= 1e-10


def test_well_symmetry(fr):
    b = fr.params.b
    assert abs(eval_potential(fr, b / 4.0, 0) - eval_potential(fr, -b / 4.0, 0)) <= 1e-12


@pytest.mark.parametrize("order", [1, 2])
def test_derivative_consistency(fr, order):
    # centered differences of the analytic forms, observed order >= 1.9
    u = np.linspace(-0.3, 0.3, 11)
    errs = []
    for h in (1e-3, 1e-4):
        fd = (eval_potential(fr, u + h, order - 1)
              - eval_potential(fr, u - h, order - 1)) / (2 * h)
        errs.append(np.max(np.abs(fd - eval_potential(fr, u, order))))
    assert np.log10(errs[0] / errs[1]) >= 1.9


def test_interior_minimum_scan(fr):
    b = fr.params.b
    v = np.linspace(-b / 4, b / 4, 10_000 + 2)[1:-1]
    w = eval_potential(fr, v, 0)
    assert np.min(w) > 1e-10


def test_validate_frenkel(fr):
    report = validate_potential(fr)
    assert report.interior_strict_minimum
    assert report.positive_curvature_at_wells
    assert report.endpoint_values_equal
    assert report.passed


def test_validate_inverted_well():
    # endpoints are maxima: the interior-minimum check must fail
    prm = PhysParams()
    u = np.linspace(0, prm.b / 2, 64, endpoint=False)
    table = np.column_stack([u, 1.0 - np.cos(4 * np.pi * u / prm.b)])
    spec = from_table(prm, table)
    report = validate_potential(spec)
    assert not report.interior_strict_minimum
    assert not report.passed


def test_tabulated_frenkel_passes():
    prm = PhysParams()
    fr = frenkel(prm)
    u = np.linspace(0, prm.b / 2, 64, endpoint=False)
    table = np.column_stack([u, eval_potential(fr, u, 0)])
    spec = from_table(prm, table)
    assert validate_potential(spec).passed
    probe = np.linspace(-0.2, 0.2, 7)
    np.testing.assert_allclose(eval_potential(spec, probe, 0),
                               eval_potential(fr, probe, 0), atol=2e-8)
    np.testing.assert_allclose(eval_potential(spec, probe, 1),
                               eval_potential(fr, probe, 1), atol=2e-5)


def test_table_needs_enough_samples():
    prm = PhysParams()
    u = np.linspace(0, prm.b / 2, 5, endpoint=False)
    with pytest.raises(ValueError):
        from_table(prm, np.column_stack([u, np.ones_like(u)]))


def test_table_csv_roundtrip(tmp_path):
    prm = PhysParams()
    fr = frenkel(prm)
    u = np.linspace(0, prm.b / 2, 48, endpoint=False)
    lines = ["u,W"] + [f"{ui:.17g},{wi:.17g}"
                       for ui, wi in zip(u, eval_potential(fr, u, 0))]
    path = tmp_path / "pot.csv"
    path.write_text("\n".join(lines) + "\n")
    spec = from_csv(prm, path)
    assert validate_potential(spec).passed
