"""
Dense complex linear algebra kernel.

Hermitian eigendecomposition, spectral norms, Kronecker products and sums and
the scaled matrix exponential that every other module builds on. Matrices are
plain ``numpy`` arrays of dtype ``complex128``.
"""

import logging
from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np
import numpy.typing as npt
import scipy.linalg as la

from .errors import DimensionCapError, HermitianError
from .utils.tolerances import HERMITIAN_TOL, MAX_DIM

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]


class Eigensystem(NamedTuple):
    """Ascending real eigenvalues and the unitary whose columns are the eigenvectors."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix


def as_matrix(A, square: bool = True) -> ComplexMatrix:
    """
    Validate and convert an array-like to a complex matrix.

    Args:
        A: Anything numpy can turn into a 2-D array
        square: Whether the matrix must be square

    Returns:
        The matrix as a complex128 array

    Raises:
        ValueError: if the input is not 2-D, not square when required, or has non-finite entries
        DimensionCapError: if the matrix has more than MAX_DIM rows
    """
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got an array of shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] > MAX_DIM:
        raise DimensionCapError(f"matrix has {M.shape[0]} rows, the cap is {MAX_DIM}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has NaN or infinite entries")
    return M


def check_dimension(dim: int) -> None:
    """Raise DimensionCapError when a matrix of this dimension would exceed the cap."""
    if dim > MAX_DIM:
        raise DimensionCapError(f"dimension {dim} exceeds the cap of {MAX_DIM}")


def hermitian_defect(A: ComplexMatrix) -> float:
    """Return ||A - A*||_max divided by (1 + ||A||_max)."""
    scale = 1.0 + float(np.max(np.abs(A), initial=0.0))
    return float(np.max(np.abs(A - A.conj().T), initial=0.0)) / scale


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    """Whether A passes the Hermitian tolerance check."""
    return hermitian_defect(as_matrix(A)) <= tol


def require_hermitian(A, tol: float = HERMITIAN_TOL) -> ComplexMatrix:
    """
    Return the Hermitian part of A after checking A is Hermitian within tolerance.

    Raises:
        HermitianError: naming the violated tolerance
    """
    M = as_matrix(A)
    defect = hermitian_defect(M)
    if defect > tol:
        raise HermitianError(
            f"matrix is not Hermitian: ||A - A*||_max / (1 + ||A||_max) = {defect:.3e} > {tol:.0e}"
        )
    return (M + M.conj().T) / 2


def adjoint(A) -> ComplexMatrix:
    """Conjugate transpose."""
    return as_matrix(A, square=False).conj().T.copy()


def kron(A, B) -> ComplexMatrix:
    """
    Kronecker product, first factor outer and second factor inner.

    (A⊗B)[(i,k),(j,l)] = A[i,j]·B[k,l].
    """
    A = as_matrix(A, square=False)
    B = as_matrix(B, square=False)
    check_dimension(A.shape[0] * B.shape[0])
    return np.kron(A, B)


def kron_all(factors: Sequence) -> ComplexMatrix:
    """Kronecker product of a non-empty sequence, left to right."""
    if not factors:
        raise ValueError("kron_all needs at least one factor")
    return reduce(kron, factors[1:], as_matrix(factors[0], square=False))


def kron_sum(H_list: Sequence) -> ComplexMatrix:
    """
    Kronecker sum H_1⊗1⊗...⊗1 + 1⊗H_2⊗...⊗1 + ... of square matrices.

    Args:
        H_list: Non-empty sequence of square matrices

    Returns:
        The sum on the tensor-product space
    """
    if len(H_list) == 0:
        raise ValueError("kron_sum needs at least one matrix")
    mats = [as_matrix(H) for H in H_list]
    dims = [M.shape[0] for M in mats]
    total = int(np.prod(dims))
    check_dimension(total)

    result = np.zeros((total, total), dtype=np.complex128)
    for i, M in enumerate(mats):
        left = int(np.prod(dims[:i]))
        right = int(np.prod(dims[i + 1:]))
        term = np.kron(np.eye(left), np.kron(M, np.eye(right)))
        result += term
    return result


def hermitian_eig(A) -> Eigensystem:
    """
    Eigendecomposition of a Hermitian matrix.

    Args:
        A: Hermitian matrix (checked within HERMITIAN_TOL)

    Returns:
        Eigensystem with ascending eigenvalues and unitary eigenvectors, A = U diag(λ) U*
    """
    H = require_hermitian(A)
    eigenvalues, eigenvectors = la.eigh(H)
    return Eigensystem(np.asarray(eigenvalues, dtype=np.float64), eigenvectors.astype(np.complex128))


def eigvalsh(A) -> npt.NDArray[np.float64]:
    """Ascending eigenvalues of a Hermitian matrix."""
    H = require_hermitian(A)
    return np.asarray(la.eigvalsh(H), dtype=np.float64)


def spectral_norm(A) -> float:
    """
    Operator norm (largest singular value).

    Hermitian input uses the largest absolute eigenvalue; general input uses the
    square root of the largest eigenvalue of A*A.
    """
    M = as_matrix(A, square=False)
    if M.size == 0:
        return 0.0
    if M.shape[0] == M.shape[1] and hermitian_defect(M) <= HERMITIAN_TOL:
        ev = la.eigvalsh((M + M.conj().T) / 2)
        return float(np.max(np.abs(ev)))
    gram = M.conj().T @ M
    ev = la.eigvalsh((gram + gram.conj().T) / 2)
    return float(np.sqrt(max(float(ev[-1]), 0.0)))


def max_abs(A) -> float:
    """Entrywise max norm."""
    M = np.asarray(A)
    return float(np.max(np.abs(M), initial=0.0))


def matrix_exp_scaled(H, w: complex) -> ComplexMatrix:
    """
    e^{wH} for Hermitian H through its eigendecomposition.

    Args:
        H: Hermitian matrix
        w: Complex scalar

    Returns:
        U diag(e^{wλ}) U*; the exact identity when w == 0
    """
    M = require_hermitian(H)
    if w == 0:
        return np.eye(M.shape[0], dtype=np.complex128)
    eigenvalues, U = la.eigh(M)
    return (U * np.exp(complex(w) * eigenvalues)) @ U.conj().T


def trace(A) -> complex:
    """Matrix trace."""
    return complex(np.trace(as_matrix(A)))


def commutator(A, B) -> ComplexMatrix:
    """[A, B] = AB - BA."""
    A = as_matrix(A)
    B = as_matrix(B)
    return A @ B - B @ A


def random_hermitian(dim: int, rng: np.random.Generator, norm: float = 1.0) -> ComplexMatrix:
    """
    Seeded random Hermitian matrix rescaled to a given spectral norm.

    Args:
        dim: Matrix dimension
        rng: numpy Generator supplying the entries
        norm: Spectral norm of the result

    Returns:
        A dense Hermitian matrix
    """
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = (X + X.conj().T) / 2
    scale = spectral_norm(H)
    if scale == 0.0:
        return H
    return H * (norm / scale)
