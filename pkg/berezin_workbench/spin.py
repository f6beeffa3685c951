"""
Spin-J representations of su(2) and coherent spin states.

Basis vectors are ordered by m descending (m = J first). Spins are passed as
two_j = 2J so half-integer spins stay integral.
"""

import logging
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
from scipy.special import comb

from .linalg import ComplexMatrix, check_dimension, kron_all
from .models import CoherentState, SpinRepresentation

logger = logging.getLogger(__name__)


def _check_two_j(two_j: int) -> None:
    if int(two_j) != two_j or two_j < 1:
        raise ValueError(f"two_j must be a positive integer, got {two_j!r}")
    check_dimension(int(two_j) + 1)


def magnetic_numbers(two_j: int) -> np.ndarray:
    """m = J, J-1, ..., -J."""
    return two_j / 2 - np.arange(two_j + 1)


@lru_cache(maxsize=64)
def _ladder(two_j: int) -> Tuple[np.ndarray, np.ndarray]:
    J = two_j / 2
    m = magnetic_numbers(two_j)
    # S_+ |m> = sqrt(J(J+1) - m(m+1)) |m+1>, and |m+1> sits one row above |m>
    raising = np.zeros((two_j + 1, two_j + 1), dtype=np.complex128)
    for i in range(1, two_j + 1):
        raising[i - 1, i] = np.sqrt(J * (J + 1) - m[i] * (m[i] + 1))
    raising.setflags(write=False)
    lowering = raising.conj().T.copy()
    lowering.setflags(write=False)
    return raising, lowering


def ladder_operators(two_j: int) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """
    Raising and lowering operators (S_+, S_-).

    Raises:
        ValueError: if two_j is not a positive integer
    """
    _check_two_j(two_j)
    raising, lowering = _ladder(int(two_j))
    return raising.copy(), lowering.copy()


@lru_cache(maxsize=64)
def _spin_matrices(two_j: int) -> SpinRepresentation:
    raising, lowering = _ladder(two_j)
    s_x = (raising + lowering) / 2
    s_y = (raising - lowering) / 2j
    s_z = np.diag(magnetic_numbers(two_j)).astype(np.complex128)
    for M in (s_x, s_y, s_z):
        M.setflags(write=False)
    return SpinRepresentation(two_j=two_j, s_x=s_x, s_y=s_y, s_z=s_z)


def spin_matrices(two_j: int) -> SpinRepresentation:
    """
    Spin-J representation with S_x, S_y, S_z on C^{2J+1}.

    Args:
        two_j: Twice the spin, at least 1

    Returns:
        Cached SpinRepresentation; its matrices are read-only

    Raises:
        ValueError: if two_j is not a positive integer
        DimensionCapError: if 2J+1 exceeds the cap
    """
    _check_two_j(two_j)
    return _spin_matrices(int(two_j))


def coherent_amplitudes(two_j: int, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """
    Coherent-state amplitudes for many points at once.

    Args:
        two_j: Twice the spin
        theta: Polar angles, shape (N,)
        phi: Azimuths, shape (N,)

    Returns:
        Array of shape (N, 2J+1); row k is |Ω(θ_k, φ_k)⟩
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    k = np.arange(two_j + 1)  # k = J - m
    up = two_j - k  # J + m
    binom = np.sqrt(comb(two_j, up, exact=False))
    cos_half = np.cos(theta / 2)[:, None]
    sin_half = np.sin(theta / 2)[:, None]
    magnitude = binom[None, :] * cos_half ** up[None, :] * sin_half ** k[None, :]
    return magnitude * np.exp(1j * np.outer(phi, k))


def coherent_state(two_j: int, theta: float, phi: float) -> CoherentState:
    """
    Coherent spin state |Ω(θ, φ)⟩.

    Amplitude at m: sqrt(binom(2J, J+m)) cos(θ/2)^{J+m} sin(θ/2)^{J-m} e^{i(J-m)φ}.
    θ = 0 gives the m = J basis vector exactly.
    """
    _check_two_j(two_j)
    amplitudes = coherent_amplitudes(int(two_j), np.array([theta]), np.array([phi]))[0]
    return CoherentState(two_j=int(two_j), theta=float(theta), phi=float(phi), amplitudes=amplitudes)


def coherent_projector(state: CoherentState) -> ComplexMatrix:
    """Rank-one projector |Ω⟩⟨Ω|."""
    v = state.amplitudes
    return np.outer(v, v.conj())


def coherent_overlap(a: CoherentState, b: CoherentState) -> complex:
    """⟨a|b⟩."""
    if a.two_j != b.two_j:
        raise ValueError(f"spins differ: two_j {a.two_j} vs {b.two_j}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def product_coherent_state(two_j: int, angles: Sequence[Tuple[float, float]]) -> np.ndarray:
    """
    Kronecker product of per-site coherent states, site 1 outermost.

    Args:
        two_j: Twice the spin at every site
        angles: One (θ_j, φ_j) pair per site

    Returns:
        Unit vector of length (2J+1)^d
    """
    _check_two_j(two_j)
    if not angles:
        raise ValueError("product_coherent_state needs at least one site")
    check_dimension((int(two_j) + 1) ** len(angles))
    factors = [coherent_state(two_j, theta, phi).amplitudes[:, None] for theta, phi in angles]
    return kron_all(factors)[:, 0]
