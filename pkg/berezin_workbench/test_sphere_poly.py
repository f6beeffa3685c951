#!/usr/bin/env python3
"""
Tests for polynomials on products of spheres and their Poisson brackets
"""
import logging
import math
import os
import sys

import numpy as np
import pytest

logging.basicConfig(level=logging.DEBUG, format='%(levelname)s - %(name)s - %(message)s')

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from berezin_workbench.errors import SiteMismatchError
from berezin_workbench.polynomials import (
    SitePolynomial,
    format_poly,
    parse_poly,
    partial_derivative,
    poisson_bracket_single,
    poisson_bracket_tensor,
    poly_add,
    poly_mul,
    random_poly,
    scale_coordinates,
)


def coord(sites, site, axis):
    return SitePolynomial.coordinate(sites, site, axis)


def test_normal_form_rewrites_z_squared():
    P = parse_poly("z1^2", 1)
    assert P == parse_poly("1 - x1^2 - y1^2", 1)
    assert all(exps[2] <= 1 for monomial, _ in P for exps in monomial)
    Q = parse_poly("z1^3", 1)
    assert Q == parse_poly("z1 - x1^2*z1 - y1^2*z1", 1)


def test_normal_form_is_canonical():
    a = parse_poly("(x1^2 + y1^2 + z1^2) * x2", 2)
    assert a == coord(2, 2, "x")
    assert len(a) == 1


def test_evaluation_matches_cartesian_values():
    P = parse_poly("x1*y2 - 0.5*z1^2 + 3", 2)
    angles = [(0.7, 1.1), (2.0, -0.4)]
    (t1, p1), (t2, p2) = angles
    x1 = math.sin(t1) * math.cos(p1)
    y2 = math.sin(t2) * math.sin(p2)
    z1 = math.cos(t1)
    assert P.evaluate(angles) == pytest.approx(x1 * y2 - 0.5 * z1 ** 2 + 3, abs=1e-14)


def test_evaluate_requires_one_pair_per_site():
    with pytest.raises(SiteMismatchError):
        coord(2, 1, "x").evaluate([(0.0, 0.0)])


def test_basic_brackets_are_cyclic():
    x, y, z = (coord(1, 1, a) for a in "xyz")
    assert poisson_bracket_single(x, y) == z
    assert poisson_bracket_single(y, z) == x
    assert poisson_bracket_single(z, x) == y
    assert poisson_bracket_single(x, x).is_zero()


def test_bracket_antisymmetry_and_leibniz():
    rng = np.random.default_rng(2024)
    f = random_poly(1, 2, rng)
    g = random_poly(1, 2, rng)
    h = random_poly(1, 2, rng)
    assert poisson_bracket_single(f, g).is_close(-poisson_bracket_single(g, f), tol=1e-10)
    lhs = poisson_bracket_single(f, poly_mul(g, h))
    rhs = poisson_bracket_single(f, g) * h + g * poisson_bracket_single(f, h)
    assert lhs.is_close(rhs, tol=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_bracket_jacobi_identity(seed):
    rng = np.random.default_rng(99 + seed)
    f, g, h = (random_poly(1, 2, rng) for _ in range(3))
    br = poisson_bracket_single
    total = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))
    assert total.is_zero(tol=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_tensor_bracket_jacobi_identity(seed):
    rng = np.random.default_rng(500 + seed)
    f, g, h = (random_poly(2, 2, rng, n_terms=10) for _ in range(3))
    br = poisson_bracket_tensor
    total = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))
    assert total.is_zero(tol=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_bracket_commutes_with_conjugation(seed):
    rng = np.random.default_rng(700 + seed)
    f, g = (random_poly(1, 2, rng, complex_coeffs=True) for _ in range(2))
    assert poisson_bracket_single(f, g).conjugate().is_close(
        poisson_bracket_single(f.conjugate(), g.conjugate()), tol=1e-10)
    F, G = (random_poly(2, 2, rng, n_terms=8, complex_coeffs=True) for _ in range(2))
    assert poisson_bracket_tensor(F, G).conjugate().is_close(
        poisson_bracket_tensor(F.conjugate(), G.conjugate()), tol=1e-10)


CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def shifted_bracket_values(f, g, q, shifted_site, coords):
    """
    {f + (|e_s|^2 - 1) q, g} from the ambient gradient formula, at points on the spheres.

    On the sphere the gradient of (|e_s|^2 - 1) q reduces to 2 e_s q.
    """
    q_values = q.evaluate_cartesian(coords)
    total = np.zeros(coords[0].shape[0], dtype=np.complex128)
    for site in range(1, f.sites + 1):
        e = [c[:, site - 1] for c in coords]
        grad_f = [partial_derivative(f, site, axis).evaluate_cartesian(coords) for axis in "xyz"]
        grad_g = [partial_derivative(g, site, axis).evaluate_cartesian(coords) for axis in "xyz"]
        if site == shifted_site:
            grad_f = [grad_f[a] + 2 * e[a] * q_values for a in range(3)]
        for a, b, c in CYCLIC:
            total += e[c] * (grad_f[a] * grad_g[b] - grad_f[b] * grad_g[a])
    return total


def random_sphere_points(rng, n_points, sites):
    theta = np.arccos(rng.uniform(-1, 1, size=(n_points, sites)))
    phi = rng.uniform(0, 2 * np.pi, size=(n_points, sites))
    return (np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))


@pytest.mark.parametrize("sites, shifted_site", [(1, 1), (2, 1), (2, 2)])
@pytest.mark.parametrize("seed", range(5))
def test_bracket_is_independent_of_representative(sites, shifted_site, seed):
    rng = np.random.default_rng(900 + seed)
    f, g, q = (random_poly(sites, 2, rng, n_terms=8) for _ in range(3))
    coords = random_sphere_points(rng, 64, sites)
    bracket = poisson_bracket_tensor(f, g).evaluate_cartesian(coords)
    np.testing.assert_allclose(shifted_bracket_values(f, g, q, shifted_site, coords), bracket, atol=1e-10)


def test_tensor_bracket_on_elementary_tensors():
    f = coord(2, 1, "x") * coord(2, 2, "x")
    g = coord(2, 1, "y") * coord(2, 2, "y")
    expected = coord(2, 1, "z") * coord(2, 2, "x") * coord(2, 2, "y") \
        + coord(2, 1, "x") * coord(2, 1, "y") * coord(2, 2, "z")
    assert poisson_bracket_tensor(f, g) == expected


def test_tensor_bracket_of_separate_sites_vanishes():
    f = coord(3, 1, "x")
    g = coord(3, 3, "y")
    assert poisson_bracket_tensor(f, g).is_zero()


def test_site_mismatch_is_rejected():
    with pytest.raises(SiteMismatchError):
        poly_add(coord(1, 1, "x"), coord(2, 1, "x"))
    with pytest.raises(SiteMismatchError):
        poisson_bracket_single(coord(2, 1, "x"), coord(2, 1, "y"))
    with pytest.raises(SiteMismatchError):
        coord(1, 1, "x") * coord(2, 1, "x")


def test_partial_derivative():
    P = parse_poly("x1^3*y1 + 2*z1", 1)
    assert partial_derivative(P, 1, "x") == parse_poly("3*x1^2*y1", 1)
    assert partial_derivative(P, 1, "z") == SitePolynomial.constant(1, 2)


def test_scale_coordinates_multiplies_by_powers_of_j_plus_one():
    P = parse_poly("x1*y1 + z1 - 4", 1)
    scaled = scale_coordinates(P, 2)
    assert scaled == parse_poly("4*x1*y1 + 2*z1 - 4", 1)


def test_degrees():
    P = parse_poly("x1^2*y2 + z2", 2)
    assert P.total_degree() == 3
    assert P.site_degree(1) == 2
    assert P.site_degree(2) == 1
    assert P.max_site_degree() == 2
    assert SitePolynomial.constant(2, 5).total_degree() == 0


def test_format_poly():
    assert format_poly(SitePolynomial.zero(1)) == "0"
    assert format_poly(coord(1, 1, "x")) == "x1"
    assert format_poly(-coord(1, 1, "x")) == "-x1"
    assert format_poly(SitePolynomial.constant(1, 2)) == "2.0"
    assert format_poly(SitePolynomial.constant(1, 1 - 2j)) == "(1.0-2.0i)"
    assert format_poly(parse_poly("x1*y2 - 0.5*z1", 2)) == "-0.5*z1 + x1*y2"


def test_format_poly_text_parses_back():
    rng = np.random.default_rng(17)
    P = random_poly(2, 3, rng, n_terms=6, complex_coeffs=True)
    assert parse_poly(format_poly(P), 2) == P


def test_random_poly_is_reproducible():
    a = random_poly(2, 2, np.random.default_rng(1), n_terms=4)
    b = random_poly(2, 2, np.random.default_rng(1), n_terms=4)
    assert a == b
    assert len(a) == 4


def test_conjugate_and_reality():
    P = parse_poly("(1+2i)*x1 + 3", 1)
    assert not P.is_real()
    assert P.conjugate() == parse_poly("(1-2i)*x1 + 3", 1)
    assert (P + P.conjugate()).is_real()


def test_restrict_site():
    P = parse_poly("x2^2 + 2*z2", 3)
    assert P.restrict_site(2) == parse_poly("x1^2 + 2*z1", 1)
    with pytest.raises(ValueError):
        P.restrict_site(1)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
