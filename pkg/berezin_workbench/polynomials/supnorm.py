"""
Sup-norm estimation of polynomials on (S^2)^d.

A grid search seeds local coordinate ascent with bounded Brent refinement from
the best grid points. The result is a heuristic estimate, accurate to about
1e-6 relative for total degree <= 6, not a certified bound.
"""

import logging
import math
from typing import Callable, List, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import SiteMismatchError
from ..utils.tolerances import (
    MAX_SUP_NORM_SITES,
    SUP_NORM_GRID,
    SUP_NORM_SEED_BUDGET,
    SUP_NORM_SEEDS,
)
from .sphere import SitePolynomial

logger = logging.getLogger(__name__)

MAX_SWEEPS = 8
REFINE_XATOL = 1e-10


def _site_grid(n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray]:
    """θ nodes including both poles and uniform φ nodes."""
    theta = np.linspace(0.0, math.pi, n_theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    return theta, phi


def _coarse_site_grid(sites: int) -> Tuple[np.ndarray, np.ndarray]:
    """Per-site grid whose d-fold product stays within the seeding budget."""
    per_site = SUP_NORM_SEED_BUDGET ** (1.0 / sites)
    n_theta = max(3, int(math.sqrt(per_site / 2)))
    n_phi = max(4, int(per_site // n_theta))
    return _site_grid(n_theta, n_phi)


def _top_indices(values: np.ndarray, count: int) -> np.ndarray:
    order = np.argsort(-values, kind="stable")
    return order[:count]


class _Objective:
    """|P| as a function of one coordinate, all others held fixed."""

    def __init__(self, P: SitePolynomial, theta: np.ndarray, phi: np.ndarray):
        self.P = P
        self.theta = theta.astype(float).copy()
        self.phi = phi.astype(float).copy()

    def value(self) -> float:
        return float(abs(self.P.evaluate_many(self.theta[None, :], self.phi[None, :])[0]))

    def along(self, site: int, axis: str) -> Callable[[float], float]:
        def negative_abs(x: float) -> float:
            theta = self.theta.copy()
            phi = self.phi.copy()
            if axis == "theta":
                theta[site] = x
            else:
                phi[site] = x
            return -float(abs(self.P.evaluate_many(theta[None, :], phi[None, :])[0]))

        return negative_abs

    def refine_coordinate(self, site: int, axis: str, half_width: float) -> float:
        """Bounded Brent search in one coordinate around its current value; keeps the better point."""
        current = self.theta[site] if axis == "theta" else self.phi[site]
        if axis == "theta":
            lower, upper = max(0.0, current - half_width), min(math.pi, current + half_width)
        else:
            lower, upper = current - half_width, current + half_width
        best = self.value()
        if upper <= lower:
            return best
        result = minimize_scalar(
            self.along(site, axis),
            bounds=(lower, upper),
            method="bounded",
            options={"xatol": REFINE_XATOL},
        )
        if -result.fun > best:
            if axis == "theta":
                self.theta[site] = result.x
            else:
                self.phi[site] = result.x
            best = -float(result.fun)
        return best


def _refine_single(P: SitePolynomial, theta0: float, phi0: float, step: Tuple[float, float]) -> float:
    objective = _Objective(P, np.array([theta0]), np.array([phi0]))
    best = objective.value()
    for _ in range(MAX_SWEEPS):
        previous = best
        objective.refine_coordinate(0, "theta", step[0])
        best = objective.refine_coordinate(0, "phi", step[1])
        if best - previous <= 1e-14 * max(1.0, best):
            break
    return best


def _site_grid_search(objective: _Objective, site: int, theta_grid: np.ndarray, phi_grid: np.ndarray) -> None:
    """Move one site to the best point of its full grid when that improves |P|."""
    tt, pp = np.meshgrid(theta_grid, phi_grid, indexing="ij")
    n = tt.size
    theta = np.repeat(objective.theta[None, :], n, axis=0)
    phi = np.repeat(objective.phi[None, :], n, axis=0)
    theta[:, site] = tt.ravel()
    phi[:, site] = pp.ravel()
    values = np.abs(objective.P.evaluate_many(theta, phi))
    k = int(np.argmax(values))
    if values[k] > objective.value():
        objective.theta[site] = theta[k, site]
        objective.phi[site] = phi[k, site]


def _refine_product(
    P: SitePolynomial,
    theta0: np.ndarray,
    phi0: np.ndarray,
    site_grid: Tuple[np.ndarray, np.ndarray],
    step: Tuple[float, float],
) -> float:
    objective = _Objective(P, theta0, phi0)
    best = objective.value()
    for _ in range(MAX_SWEEPS):
        previous = best
        for site in range(P.sites):
            _site_grid_search(objective, site, *site_grid)
            objective.refine_coordinate(site, "theta", step[0])
            best = objective.refine_coordinate(site, "phi", step[1])
        if best - previous <= 1e-14 * max(1.0, best):
            break
    return best


def sup_norm(P: SitePolynomial) -> float:
    """
    Estimate sup |P| over the product of unit spheres.

    Args:
        P: Polynomial on at most 4 sites

    Returns:
        The estimated supremum (nonnegative)

    Raises:
        SiteMismatchError: if P has more than 4 sites
    """
    if P.sites > MAX_SUP_NORM_SITES:
        raise SiteMismatchError(f"sup_norm supports at most {MAX_SUP_NORM_SITES} sites, got {P.sites}")
    if P.total_degree() == 0:
        return float(abs(P.coefficient(SitePolynomial.unit_monomial(P.sites))))

    n_theta, n_phi = SUP_NORM_GRID
    theta_grid, phi_grid = _site_grid(n_theta, n_phi)
    step = (math.pi / (n_theta - 1), 2 * math.pi / n_phi)

    if P.sites == 1:
        tt, pp = np.meshgrid(theta_grid, phi_grid, indexing="ij")
        theta = tt.reshape(-1, 1)
        phi = pp.reshape(-1, 1)
    else:
        coarse_theta, coarse_phi = _coarse_site_grid(P.sites)
        tt, pp = np.meshgrid(coarse_theta, coarse_phi, indexing="ij")
        site_theta, site_phi = tt.ravel(), pp.ravel()
        index = np.indices((site_theta.size,) * P.sites).reshape(P.sites, -1).T
        theta = site_theta[index]
        phi = site_phi[index]

    values = np.abs(P.evaluate_many(theta, phi))
    best = float(np.max(values))
    seeds = _top_indices(values, SUP_NORM_SEEDS)
    logger.debug(f"sup_norm grid of {values.size} points on {P.sites} site(s), grid max {best:.12g}")

    candidates: List[float] = [best]
    for k in seeds:
        if P.sites == 1:
            candidates.append(_refine_single(P, float(theta[k, 0]), float(phi[k, 0]), step))
        else:
            candidates.append(_refine_product(P, theta[k], phi[k], (theta_grid, phi_grid), step))
    result = max(candidates)
    logger.debug(f"sup_norm refined to {result:.15g}")
    return result
