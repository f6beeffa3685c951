"""
Berezin quantization of sphere polynomials.

Q_J(P) = (2J+1)/(4π) Σ_k w_k P(Ω_k) |Ω_k⟩⟨Ω_k| over a product Gauss-Legendre
times uniform-φ grid that integrates the polynomial integrand exactly, and its
d-fold tensor extension Q^{(d)}(f_1 ⊗ ... ⊗ f_d) = Q(f_1) ⊗ ... ⊗ Q(f_d).
"""

import logging
import math
from functools import lru_cache

import numpy as np

from .errors import SiteMismatchError
from .linalg import ComplexMatrix, check_dimension, kron_all
from .models import QuadratureGrid
from .polynomials.sphere import SitePolynomial, SiteExponents
from .spin import coherent_amplitudes, coherent_state

logger = logging.getLogger(__name__)


@lru_cache(maxsize=128)
def _grid(n_theta: int, n_phi: int, exact_degree: int) -> QuadratureGrid:
    t_nodes, t_weights = np.polynomial.legendre.leggauss(n_theta)
    phi_nodes = 2 * math.pi * np.arange(n_phi) / n_phi
    for arr in (t_nodes, t_weights, phi_nodes):
        arr.setflags(write=False)
    return QuadratureGrid(
        n_theta=n_theta,
        n_phi=n_phi,
        exact_degree=exact_degree,
        t_nodes=t_nodes,
        t_weights=t_weights,
        phi_nodes=phi_nodes,
    )


def build_grid(two_j: int, poly_degree: int) -> QuadratureGrid:
    """
    Quadrature grid exact for the Berezin integrand of a degree-poly_degree symbol.

    Args:
        two_j: Twice the spin
        poly_degree: Total degree of the symbol

    Returns:
        Grid with two_j + poly_degree + 2 Gauss-Legendre nodes in t = cosθ and
        2(two_j + poly_degree) + 3 uniform φ nodes
    """
    if two_j < 1 or poly_degree < 0:
        raise ValueError(f"need two_j >= 1 and poly_degree >= 0, got {two_j} and {poly_degree}")
    n = two_j + poly_degree
    n_theta = n + 2
    n_phi = 2 * n + 3
    grid = _grid(n_theta, n_phi, 2 * n_theta - 1)
    logger.debug(f"Quadrature grid for two_j={two_j}, degree={poly_degree}: {n_theta}x{n_phi}")
    return grid


@lru_cache(maxsize=32)
def _grid_amplitudes(two_j: int, n_theta: int, n_phi: int) -> np.ndarray:
    grid = _grid(n_theta, n_phi, 2 * n_theta - 1)
    A = coherent_amplitudes(two_j, grid.theta, grid.phi)
    A.setflags(write=False)
    return A


def quantize_site(P: SitePolynomial, two_j: int) -> ComplexMatrix:
    """
    Single-site Berezin quantization.

    Args:
        P: Polynomial on one site
        two_j: Twice the spin

    Returns:
        The (2J+1)-dimensional matrix Q_J(P)

    Raises:
        SiteMismatchError: if P is not a one-site polynomial
    """
    if P.sites != 1:
        raise SiteMismatchError(f"quantize_site needs a 1-site polynomial, got {P.sites} sites")
    check_dimension(two_j + 1)
    grid = build_grid(two_j, P.total_degree())
    A = _grid_amplitudes(two_j, grid.n_theta, grid.n_phi)
    values = P.evaluate_many(grid.theta[:, None], grid.phi[:, None])
    weighted = grid.weights * values * ((two_j + 1) / (4 * math.pi))
    return A.T @ (weighted[:, None] * A.conj())


@lru_cache(maxsize=512)
def _site_monomial_matrix(two_j: int, exps: SiteExponents) -> np.ndarray:
    if exps == (0, 0, 0):
        M = np.eye(two_j + 1, dtype=np.complex128)
    else:
        M = quantize_site(SitePolynomial(1, {(exps,): 1}), two_j)
    M.setflags(write=False)
    return M


def quantize_tensor(P: SitePolynomial, two_j: int) -> ComplexMatrix:
    """
    Tensor quantization Q^{(d)} at a uniform spin.

    Each monomial is an elementary tensor of per-site monomials and maps to the
    Kronecker product of their single-site quantizations; the sum over monomials
    is taken in sorted monomial order. On one site this is quantize_site.

    Raises:
        DimensionCapError: if (2J+1)^d exceeds the cap
    """
    if P.sites == 1:
        return quantize_site(P, two_j)
    dim = (two_j + 1) ** P.sites
    check_dimension(dim)
    result = np.zeros((dim, dim), dtype=np.complex128)
    for monomial, coeff in P:
        factors = [_site_monomial_matrix(two_j, exps) for exps in monomial]
        result += coeff * kron_all(factors)
    logger.debug(f"Tensor quantization of {len(P)} term(s) on {P.sites} sites at two_j={two_j}")
    return result


def lower_symbol(A, two_j: int, theta: float, phi: float) -> complex:
    """⟨Ω(θ, φ)|A|Ω(θ, φ)⟩ for a (2J+1)-dimensional matrix A."""
    v = coherent_state(two_j, theta, phi).amplitudes
    return complex(np.vdot(v, np.asarray(A, dtype=np.complex128) @ v))

