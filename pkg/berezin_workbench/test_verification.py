#!/usr/bin/env python3
"""
Tests for the quantization axiom checks and semiclassical sweeps

Expected values are closed forms: coordinate functions quantize to S/(J+1),
which fixes the bracket defect of (x, y), the product defect of (z, z) and
the norm gap of x exactly.
"""
import json
import logging
import os
import sys

import numpy as np
import pytest

logging.basicConfig(level=logging.DEBUG, format='%(levelname)s - %(name)s - %(message)s')

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from berezin_workbench.errors import DimensionCapError, FitError
from berezin_workbench.models import ModelKind, ModelSpec, SweepReport
from berezin_workbench.polynomials import parse_poly, random_poly
from berezin_workbench.verification import (
    attach_fit,
    axiom_check,
    cw_defect_sweep,
    dgr_defect,
    fit_rate,
    hamiltonian_norm_limit,
    norm_gap,
    product_defect,
    sweep,
    sweep_dgr_defect,
    sweep_norm_gap,
    sweep_product_defect,
)

X1 = parse_poly("x1", 1)
Y1 = parse_poly("y1", 1)
Z1 = parse_poly("z1", 1)


def closed_form_slope(parameters, values):
    return np.polyfit(np.log(parameters), np.log(values), 1)[0]


@pytest.mark.parametrize("two_j", [1, 2, 3, 4, 8, 15])
def test_bracket_defect_of_coordinates(two_j):
    J = two_j / 2
    assert dgr_defect(X1, Y1, two_j) == pytest.approx(J / (J + 1) ** 2, rel=1e-10)


def test_bracket_defect_on_two_sites_matches_one_site():
    f = parse_poly("x1", 2)
    g = parse_poly("y1", 2)
    assert dgr_defect(f, g, 2) == pytest.approx(dgr_defect(X1, Y1, 2), rel=1e-10)


def test_product_defect_closed_forms():
    assert product_defect(Z1, Z1, 1) == pytest.approx(2 / 9, rel=1e-10)
    for two_j in (2, 4, 10):
        J = two_j / 2
        assert product_defect(Z1, Z1, two_j) == pytest.approx(1 / (2 * J + 3), rel=1e-10)


def test_product_defect_of_unit_vanishes():
    rng = np.random.default_rng(4)
    f = random_poly(1, 2, rng)
    one = parse_poly("1", 1)
    assert product_defect(f, one, 5) < 1e-12


def test_dgr_sweep_fit():
    two_j_range = [10, 20, 40, 80]
    report = sweep_dgr_defect(X1, Y1, two_j_range)
    J = np.array(two_j_range) / 2
    expected = J / (J + 1) ** 2
    np.testing.assert_allclose(report.column("dgr_defect"), expected, rtol=1e-10)
    np.testing.assert_allclose(report.parameters, J)
    assert report.fit_column == "dgr_defect"
    assert report.fit.exponent == pytest.approx(closed_form_slope(J, expected), abs=1e-8)
    assert -1.0 < report.fit.exponent < -0.8
    assert report.fit.r_squared > 0.99
    print(f"Bracket defect exponent: {report.fit.exponent:.4f}")


def test_product_sweep_fit():
    report = sweep_product_defect(Z1, Z1, [10, 20, 40, 80])
    J = report.parameters
    expected = 1 / (2 * J + 3)
    np.testing.assert_allclose(report.column("product_defect"), expected, rtol=1e-10)
    assert report.fit.exponent == pytest.approx(closed_form_slope(J, expected), abs=1e-8)
    assert -1.0 < report.fit.exponent < -0.85


def test_norm_gap_of_coordinate():
    result = norm_gap(X1, 4)
    assert result.quantum_norm == pytest.approx(2 / 3, rel=1e-12)
    assert result.classical_norm == pytest.approx(1.0, abs=1e-9)
    assert result.gap == pytest.approx(1 / 3, abs=1e-9)
    assert norm_gap(X1, 4, classical_norm=1.0).gap == pytest.approx(1 / 3, rel=1e-12)


def test_norm_gap_sweep():
    report = sweep_norm_gap(Z1, [2, 4, 8, 16])
    J = report.parameters
    np.testing.assert_allclose(report.column("gap"), 1 / (J + 1), atol=1e-9)
    assert report.columns == ["quantum_norm", "classical_norm", "gap"]
    assert report.fit.exponent == pytest.approx(closed_form_slope(J, 1 / (J + 1)), abs=1e-6)


def test_axiom_check():
    rng = np.random.default_rng(12)
    f = random_poly(2, 2, rng, complex_coeffs=True)
    report = axiom_check(f, 2)
    assert report.passed
    assert report.unit_residual <= 1e-12
    assert report.model_dump()["adjoint_passed"] is True


def axiom_corpus():
    rng = np.random.default_rng(2718)
    corpus = [parse_poly(text, 1) for text in ("1", "x1", "(1+2i)*y1*z1", "z1^2 - 0.5*x1^3", "i*x1^2*y1 + 3")]
    corpus += [random_poly(1, 3, rng, complex_coeffs=True) for _ in range(3)]
    corpus += [random_poly(2, 2, rng, n_terms=6, complex_coeffs=True) for _ in range(2)]
    return corpus


@pytest.mark.parametrize("two_j", range(1, 21))
def test_axioms_hold_across_corpus(two_j):
    for f in axiom_corpus():
        report = axiom_check(f, two_j)
        assert report.unit_residual <= 1e-12, (two_j, str(f))
        assert report.adjoint_residual <= 1e-12, (two_j, str(f))


def test_sweep_report_json_matches_model_dump():
    report = sweep_dgr_defect(X1, Y1, [2, 4, 6, 8])
    assert json.loads(report.to_json()) == json.loads(json.dumps(report.model_dump()))
    assert report.to_json().endswith("\n")


def test_sweep_dispatch_and_validation():
    report = sweep("dgr", [1, 2], X1, Y1)
    assert report.fit is None
    assert len(report.rows) == 2
    with pytest.raises(ValueError, match="needs a second polynomial"):
        sweep("product", [1, 2], X1)
    with pytest.raises(ValueError, match="unknown observable"):
        sweep("bogus", [1, 2], X1, Y1)
    with pytest.raises(ValueError, match="strictly ascending"):
        sweep("dgr", [4, 2], X1, Y1)
    with pytest.raises(ValueError, match="empty"):
        sweep("dgr", [], X1, Y1)


def test_fit_rate_requirements():
    report = SweepReport(parameter_name="J")
    for J in (1, 2, 3):
        report.add_row(J, {"value": 1.0 / J})
    with pytest.raises(FitError, match="at least 4 rows"):
        fit_rate(report, "value")
    report.add_row(4, {"value": 0.0})
    with pytest.raises(FitError, match="positive"):
        fit_rate(report, "value")
    assert attach_fit(report, "value").fit is None


def test_fit_rate_recovers_power_law():
    report = SweepReport(parameter_name="J")
    for J in (1, 2, 4, 8, 16):
        report.add_row(J, {"value": 3.0 * J ** -1.5})
    fit = fit_rate(report, "value")
    assert fit.exponent == pytest.approx(-1.5, abs=1e-12)
    assert fit.prefactor == pytest.approx(3.0, rel=1e-12)
    assert fit.r_squared == pytest.approx(1.0)


def test_curie_weiss_rescaled_defect_sweep():
    report = cw_defect_sweep([2, 4, 6, 8], B=0.3, scaling="rescaled")
    d = report.parameters
    np.testing.assert_allclose(report.column("cw_defect"), 1 / (2 * (d + 3)), rtol=1e-10)
    assert report.parameter_name == "d"
    assert report.fit is not None


def per_site_defect_without_field(d):
    k = np.arange(d + 1)
    q = 4 * (k + 1) * (k + 2) / ((d + 2) * (d + 3)) - 4 * (k + 1) / (d + 2) + 1
    return np.max(np.abs(-q / 2 + 2 * (k - d / 2) ** 2 / d ** 2))


def test_curie_weiss_per_site_sweep_fit():
    d_range = list(range(10, 121, 10))
    report = cw_defect_sweep(d_range, B=0.0)
    expected = np.array([per_site_defect_without_field(d) for d in d_range])
    np.testing.assert_allclose(report.column("cw_defect"), expected, rtol=1e-10)
    assert report.fit.exponent == pytest.approx(closed_form_slope(d_range, expected), abs=1e-8)
    assert -0.95 < report.fit.exponent < -0.8
    values = report.column("cw_defect")
    assert 1.5 < values[0] / values[1] < 2.1
    print(f"Curie-Weiss per-site exponent: {report.fit.exponent:.4f}")


def test_curie_weiss_per_site_sweep_with_field():
    report = cw_defect_sweep(list(range(10, 121, 10)), B=0.5)
    values = report.column("cw_defect")
    assert np.all(np.diff(values) < 0)
    assert -0.95 < report.fit.exponent < -0.8
    assert report.fit.r_squared > 0.98


def test_heisenberg_norm_limit():
    model = ModelSpec(ModelKind.HEISENBERG, 2)
    report = hamiltonian_norm_limit(model, [1, 2, 3, 4])
    J = report.parameters
    np.testing.assert_allclose(report.column("quantum_norm"), J / (J + 1), rtol=1e-10)
    np.testing.assert_allclose(report.column("gap"), 1 / (J + 1), atol=1e-8)


def test_ising_norm_limit():
    model = ModelSpec(ModelKind.ISING, 2)
    report = hamiltonian_norm_limit(model, [1, 2, 3])
    J = report.parameters
    np.testing.assert_allclose(report.column("quantum_norm"), (J / (J + 1)) ** 2, rtol=1e-10)
    np.testing.assert_allclose(report.column("classical_norm"), 1.0, atol=1e-9)


@pytest.mark.parametrize("kind", [ModelKind.ISING, ModelKind.HEISENBERG])
def test_norm_limit_rejects_chains_beyond_classical_norm_cap(kind):
    # 2^5 is within the matrix cap; the classical sup norm stops at 4 sites
    with pytest.raises(DimensionCapError, match="classical sup norm supports at most 4 sites"):
        hamiltonian_norm_limit(ModelSpec(kind, 5), [1])


def test_curie_weiss_norm_limit_is_indexed_by_sites():
    model = ModelSpec(ModelKind.CURIE_WEISS, 2, 0.0)
    report = hamiltonian_norm_limit(model, [2, 4, 6])
    assert report.parameter_name == "d"
    d = report.parameters
    # at B = 0 the extreme eigenvalue is -(1/2)(d/2)^2/(d/2+1)^2
    np.testing.assert_allclose(report.column("quantum_norm"), 0.5 * (d / (d + 2)) ** 2, rtol=1e-10)
    np.testing.assert_allclose(report.column("classical_norm"), 0.5, atol=1e-9)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
