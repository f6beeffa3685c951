"""
Resolvent of a non-interacting two-particle Hamiltonian by contour integration.

For H = H1⊗1 + 1⊗H2 and real λ != 0,

    (iλ - H)^{-1} = (1/2πi) ∮ (iλ - z - H1)^{-1} ⊗ (z - H2)^{-1} dz

over a contour enclosing spec(H2) and excluding the pole line Im z = λ of the
first factor. The contour is an ellipse discretized by the periodic trapezoid
rule, which converges exponentially in the node count.
"""

import logging
import math
from typing import Sequence

import numpy as np
import scipy.linalg as la

from .errors import ContourError
from .linalg import ComplexMatrix, eigvalsh, kron, kron_sum, require_hermitian, spectral_norm
from .models import ContourSpec, SweepReport

logger = logging.getLogger(__name__)


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if lam == 0.0:
        raise ContourError("lambda = 0 puts iλ on the real spectrum line")
    return lam


def build_contour(H2, lam: float, nodes: int) -> ContourSpec:
    """
    Ellipse around spec(H2) that stays clear of the line Im z = λ.

    Args:
        H2: Hermitian matrix of the second particle
        lam: Nonzero real λ
        nodes: Trapezoid node count M

    Returns:
        ContourSpec centered at the spectral midpoint of H2, with semi-major axis
        half the spectral spread plus 1 and semi-minor axis |λ|/2

    Raises:
        ContourError: if lam is zero or nodes < 1
    """
    lam = _check_lambda(lam)
    if nodes < 1:
        raise ContourError(f"contour needs at least one node, got {nodes}")
    spectrum = eigvalsh(H2)
    lo, hi = float(spectrum[0]), float(spectrum[-1])
    return ContourSpec(
        center=(lo + hi) / 2,
        semi_major=(hi - lo) / 2 + 1.0,
        semi_minor=abs(lam) / 2,
        nodes=int(nodes),
    )


def validate_contour(contour: ContourSpec, H2, lam: float) -> None:
    """
    Check that the contour encloses spec(H2) and excludes the pole line.

    Raises:
        ContourError: naming the violated condition
    """
    lam = _check_lambda(lam)
    if contour.semi_major <= 0 or contour.semi_minor <= 0 or contour.nodes < 1:
        raise ContourError(f"degenerate contour {contour}")
    if not contour.semi_minor < abs(lam):
        raise ContourError(
            f"semi-minor axis {contour.semi_minor} reaches the pole line Im z = {lam}"
        )
    spectrum = eigvalsh(H2)
    left = contour.center - contour.semi_major
    right = contour.center + contour.semi_major
    if not (left < spectrum[0] and spectrum[-1] < right):
        raise ContourError(
            f"contour interval [{left}, {right}] does not strictly contain spec(H2) "
            f"[{spectrum[0]}, {spectrum[-1]}]"
        )


def resolvent_sum(H1, H2, lam: float, contour: ContourSpec) -> ComplexMatrix:
    """
    Trapezoid approximation of the contour integral for (iλ - H1⊗1 - 1⊗H2)^{-1}.

    Args:
        H1, H2: Hermitian one-particle Hamiltonians
        lam: Nonzero real λ
        contour: Ellipse satisfying validate_contour

    Returns:
        (1/2πi) Σ_m w_m (iλ - z_m - H1)^{-1} ⊗ (z_m - H2)^{-1}, w_m = z'(s_m)·2π/M

    Raises:
        ContourError: on an invalid contour or a singular node solve
    """
    H1 = require_hermitian(H1)
    H2 = require_hermitian(H2)
    validate_contour(contour, H2, lam)
    n1, n2 = H1.shape[0], H2.shape[0]
    I1 = np.eye(n1, dtype=np.complex128)
    I2 = np.eye(n2, dtype=np.complex128)
    z_nodes, weights = contour.points()

    total = np.zeros((n1 * n2, n1 * n2), dtype=np.complex128)
    for z, w in zip(z_nodes, weights):
        try:
            first = la.solve((1j * lam - z) * I1 - H1, I1)
            second = la.solve(z * I2 - H2, I2)
        except la.LinAlgError as e:
            raise ContourError(f"singular resolvent solve at contour node z = {z}") from e
        total += w * kron(first, second)
    logger.debug(f"Resolvent contour sum over {contour.nodes} node(s), dimension {n1 * n2}")
    return total / (2j * math.pi)


def direct_resolvent(H1, H2, lam: float) -> ComplexMatrix:
    """(iλ - H1⊗1 - 1⊗H2)^{-1} by direct inversion."""
    lam = _check_lambda(lam)
    H = kron_sum([H1, H2])
    return la.inv(1j * lam * np.eye(H.shape[0]) - H)


def resolvent_error(H1, H2, lam: float, nodes: int) -> float:
    """
    Relative operator-norm error of the contour sum against the direct inverse.

    Args:
        H1, H2: Hermitian one-particle Hamiltonians
        lam: Nonzero real λ
        nodes: Trapezoid node count M

    Returns:
        ||resolvent_sum - direct|| / ||direct||
    """
    contour = build_contour(H2, lam, nodes)
    approx = resolvent_sum(H1, H2, lam, contour)
    direct = direct_resolvent(H1, H2, lam)
    return spectral_norm(approx - direct) / spectral_norm(direct)


def resolvent_convergence(H1, H2, lam: float, node_counts: Sequence[int]) -> SweepReport:
    """Relative error for each node count, in ascending M."""
    report = SweepReport(parameter_name="M")
    for nodes in sorted(set(int(m) for m in node_counts)):
        error = resolvent_error(H1, H2, lam, nodes)
        report.add_row(nodes, {"error": error})
        logger.debug(f"Resolvent error at M={nodes}: {error:.3e}")
    return report
