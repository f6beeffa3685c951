"""
Gibbs states, modular flow and the KMS boundary condition at finite dimension.
"""

import logging
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.special import softmax

from .errors import FactorizationError, SiteMismatchError
from .linalg import (
    ComplexMatrix,
    as_matrix,
    hermitian_eig,
    kron,
    kron_sum,
    matrix_exp_scaled,
    require_hermitian,
    spectral_norm,
)
from .models import CoherentFamily, GibbsFamily, GibbsState, SweepReport, TwoPointFunction
from .polynomials.sphere import SitePolynomial
from .quantization import lower_symbol, quantize_tensor
from .spin import product_coherent_state
from .utils.tolerances import FACTORIZATION_TOL
from .verification import attach_fit

logger = logging.getLogger(__name__)


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not beta > 0 or not np.isfinite(beta):
        raise ValueError(f"beta must be positive and finite, got {beta!r}")
    return beta


def gibbs_state(H, beta: float) -> GibbsState:
    """
    Gibbs state e^{-βH}/Tr(e^{-βH}).

    Args:
        H: Hermitian Hamiltonian
        beta: Inverse temperature, positive

    Returns:
        GibbsState whose density matrix has eigenvalues softmax(-βλ)

    Raises:
        HermitianError: if H is not Hermitian
    """
    beta = _check_beta(beta)
    eigenvalues, U = hermitian_eig(H)
    populations = softmax(-beta * eigenvalues)
    rho = (U * populations) @ U.conj().T
    rho = (rho + rho.conj().T) / 2
    return GibbsState(hamiltonian=require_hermitian(H), beta=beta, rho=rho)


def maximally_mixed(H, beta: float) -> GibbsState:
    """The tracial state I/n paired with the flow of H; a KMS state only when H is scalar."""
    M = require_hermitian(H)
    n = M.shape[0]
    return GibbsState(hamiltonian=M, beta=_check_beta(beta), rho=np.eye(n, dtype=np.complex128) / n)


def modular_flow(H, w: complex, a) -> ComplexMatrix:
    """
    φ_w(a) = e^{iwH} a e^{-iwH} for complex w.

    Real w gives unitary conjugation; w = 0 returns a unchanged.
    """
    a = as_matrix(a)
    if w == 0:
        return a.copy()
    return matrix_exp_scaled(H, 1j * w) @ a @ matrix_exp_scaled(H, -1j * w)


def kms_residual(state: GibbsState, a, b, t: float) -> float:
    """
    Normalized violation of the KMS boundary identity at time t.

    |Tr(ρ a φ_{t+iβ}(b)) - Tr(ρ φ_t(b) a)| / (1 + ||a|| ||b||)
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != state.rho.shape or b.shape != state.rho.shape:
        raise ValueError(f"operator shapes {a.shape}, {b.shape} do not match the state dimension {state.dim}")
    H = state.hamiltonian
    shifted = modular_flow(H, complex(t, state.beta), b)
    lhs = np.trace(state.rho @ a @ shifted)
    rhs = np.trace(state.rho @ modular_flow(H, t, b) @ a)
    scale = 1.0 + spectral_norm(a) * spectral_norm(b)
    return float(abs(lhs - rhs) / scale)


def two_point_function(state: GibbsState, a, b, samples: Sequence[Tuple[float, float]]) -> TwoPointFunction:
    """
    Samples of F_ab(t + is) = ω(a φ_{t+is}(b)) on the closed strip 0 <= s <= β.

    Raises:
        ValueError: if a sample leaves the strip or a value is not finite
    """
    a = as_matrix(a)
    b = as_matrix(b)
    result = TwoPointFunction(a=a, b=b, state=state)
    for t, s in samples:
        if not 0.0 <= s <= state.beta:
            raise ValueError(f"sample s={s} outside the strip [0, {state.beta}]")
        value = complex(np.trace(state.rho @ a @ modular_flow(state.hamiltonian, complex(t, s), b)))
        if not np.isfinite(value):
            raise ValueError(f"two-point function is not finite at t={t}, s={s}")
        result.samples.append((float(t), float(s)))
        result.values.append(value)
    return result


def product_state(state_a: GibbsState, state_b: GibbsState) -> GibbsState:
    """Product state with density kron(ρ_A, ρ_B) and Hamiltonian H_A⊗1 + 1⊗H_B."""
    if state_a.beta != state_b.beta:
        raise ValueError(f"product state needs a common beta, got {state_a.beta} and {state_b.beta}")
    rho = kron(state_a.rho, state_b.rho)
    H = kron_sum([state_a.hamiltonian, state_b.hamiltonian])
    return GibbsState(hamiltonian=H, beta=state_a.beta, rho=rho)


def product_kms_residual(
    state_a: GibbsState,
    state_b: GibbsState,
    samples: Sequence[Tuple[np.ndarray, np.ndarray]],
    times: Sequence[float],
) -> float:
    """
    KMS residual of the product state under the diagonal flow Φ_{t,t}.

    Args:
        state_a: State on the first factor
        state_b: State on the second factor, same beta
        samples: Elementary tensors (a, b); sample i is paired with sample i+1 (cyclically)
        times: Real times t

    Returns:
        The maximum residual over sample pairs and times

    Raises:
        ValueError: if the betas differ
        FactorizationError: if ω(a⊗b) differs from ω_A(a)ω_B(b) beyond 1e-12
    """
    product = product_state(state_a, state_b)
    tensors = []
    for a, b in samples:
        ab = kron(a, b)
        expected = state_a.expectation(a) * state_b.expectation(b)
        actual = product.expectation(ab)
        scale = 1.0 + spectral_norm(a) * spectral_norm(b)
        if abs(actual - expected) > FACTORIZATION_TOL * scale:
            raise FactorizationError(
                f"product state does not factorize: ω(a⊗b) = {actual} but ω_A(a)ω_B(b) = {expected}"
            )
        tensors.append(ab)

    worst = 0.0
    for i, x in enumerate(tensors):
        y = tensors[(i + 1) % len(tensors)]
        for t in times:
            worst = max(worst, kms_residual(product, x, y, t))
    logger.debug(f"Product KMS residual over {len(tensors)} sample(s) and {len(times)} time(s): {worst:.3e}")
    return worst


def _family_row(family, f: SitePolynomial, two_j: int) -> Dict[str, float]:
    Qf = quantize_tensor(f, two_j)
    if isinstance(family, CoherentFamily):
        if f.sites == 1:
            theta, phi = family.angles[0]
            value = lower_symbol(Qf, two_j, theta, phi)
        else:
            psi = product_coherent_state(two_j, family.angles)
            value = complex(np.vdot(psi, Qf @ psi))
        limit = f.evaluate(family.angles)
        row = {"expectation": value.real, "limit": limit.real, "gap": abs(value - limit)}
    else:
        if family.symbol.sites != f.sites:
            raise SiteMismatchError(f"symbol has {family.symbol.sites} sites, f has {f.sites}")
        state = gibbs_state(quantize_tensor(family.symbol, two_j), family.beta)
        value = state.expectation(Qf)
        row = {"expectation": value.real}
    if not f.is_real():
        row["expectation_imag"] = value.imag
    return row


def classical_limit_sweep(family, f: SitePolynomial, two_j_range: Sequence[int]) -> SweepReport:
    """
    Expectations ω_J(Q_J(f)) of a family of states across spins.

    Args:
        family: CoherentFamily (one point per site of f) or GibbsFamily (the
            Gibbs state of Q_J(symbol) at the family's beta)
        f: Observable symbol
        two_j_range: Strictly ascending two_j values

    Returns:
        SweepReport with parameter J. Coherent rows also carry the limit f(point)
        and the gap, which is fitted when positive.
    """
    if isinstance(family, CoherentFamily):
        if len(family.angles) != f.sites:
            raise SiteMismatchError(f"family has {len(family.angles)} point(s), f has {f.sites} sites")
    elif isinstance(family, GibbsFamily):
        _check_beta(family.beta)
    else:
        raise TypeError(f"unknown state family {family!r}")

    values = [int(v) for v in two_j_range]
    if not values:
        raise ValueError("sweep range is empty")
    report = SweepReport(parameter_name="J")
    for two_j in values:
        report.add_row(two_j / 2, _family_row(family, f, two_j))
    if isinstance(family, CoherentFamily):
        attach_fit(report, "gap")
    return report
