"""
Spin models: Ising, Heisenberg and Curie-Weiss.

Classical symbols live on products of spheres, quantum Hamiltonians on
Kronecker products of spin representations. Chains use open boundary
conditions. The Curie-Weiss model is also available restricted to the
symmetric subspace of d qubits, where it is a spin-d/2 operator.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.special import comb

from .errors import DimensionCapError
from .linalg import ComplexMatrix, check_dimension, eigvalsh, kron_all, kron_sum, spectral_norm
from .models import ModelKind, ModelSpec, SweepReport
from .polynomials.sphere import SitePolynomial
from .quantization import quantize_site
from .spin import spin_matrices
from .utils.tolerances import MAX_DICKE_SITES

logger = logging.getLogger(__name__)

CW_SCALINGS = ("per_site", "rescaled")


def _coord(sites: int, site: int, axis: str) -> SitePolynomial:
    return SitePolynomial.coordinate(sites, site, axis)


def classical_symbol(spec: ModelSpec) -> SitePolynomial:
    """
    Classical symbol of a model.

    ising: -Σ_{j<d} z_j z_{j+1} - B Σ_j x_j; heisenberg: -Σ_{j<d} e_j·e_{j+1};
    curie_weiss: the one-site mean-field symbol -(z^2/2 + B x) in normal form.
    """
    d = spec.d
    if spec.kind == ModelKind.CURIE_WEISS:
        return -(0.5 * _coord(1, 1, "z") * _coord(1, 1, "z") + spec.B * _coord(1, 1, "x"))

    symbol = SitePolynomial.zero(d)
    axes = ("z",) if spec.kind == ModelKind.ISING else ("x", "y", "z")
    for j in range(1, d):
        for axis in axes:
            symbol = symbol - _coord(d, j, axis) * _coord(d, j + 1, axis)
    if spec.kind == ModelKind.ISING and spec.B != 0.0:
        for j in range(1, d + 1):
            symbol = symbol - spec.B * _coord(d, j, "x")
    return symbol


def site_operator(op: np.ndarray, site: int, sites: int) -> ComplexMatrix:
    """op acting on one site (0-based) of a chain, identity elsewhere."""
    eye = np.eye(op.shape[0], dtype=np.complex128)
    return kron_all([op if j == site else eye for j in range(sites)])


def _chain_hamiltonian(spec: ModelSpec, two_j: int, scale: float) -> ComplexMatrix:
    """Chain Hamiltonian with every spin operator multiplied by scale."""
    d = spec.d
    check_dimension((two_j + 1) ** d)
    rep = spin_matrices(two_j)
    axes = ("z",) if spec.kind == ModelKind.ISING else ("x", "y", "z")
    ops = {axis: [site_operator(rep.component(axis) * scale, j, d) for j in range(d)] for axis in axes}
    H = np.zeros(((two_j + 1) ** d,) * 2, dtype=np.complex128)
    for j in range(d - 1):
        for axis in axes:
            H -= ops[axis][j] @ ops[axis][j + 1]
    if spec.kind == ModelKind.ISING and spec.B != 0.0:
        s_x = rep.s_x * scale
        for j in range(d):
            H -= spec.B * site_operator(s_x, j, d)
    return H


def quantum_hamiltonian(spec: ModelSpec, two_j: int) -> ComplexMatrix:
    """
    Quantum Hamiltonian of a model.

    Args:
        spec: The model
        two_j: Twice the per-site spin; must be 1 for curie_weiss

    Returns:
        ising: -Σ S_z(j)S_z(j+1) - B Σ S_x(j); heisenberg: -Σ S_j·S_{j+1};
        curie_weiss: -(1/2d) Σ_{i,j} σ3(i)σ3(j) - B Σ σx(j) on 2^d

    Raises:
        DimensionCapError: if (2J+1)^d exceeds the cap
    """
    if spec.kind == ModelKind.CURIE_WEISS:
        if two_j != 1:
            raise ValueError(f"the full Curie-Weiss model is a qubit model (two_j = 1), got two_j={two_j}")
        return cw_full(spec.d, spec.B)
    return _chain_hamiltonian(spec, two_j, 1.0)


def cw_full(d: int, B: float) -> ComplexMatrix:
    """
    Curie-Weiss Hamiltonian on d qubits, -(1/2d)(Σσ3)^2 - B Σσx.

    The double sum keeps its i = j terms. Qubit basis state 0 has σ3 = +1.
    """
    dim = 2 ** d
    check_dimension(dim)
    popcount = np.array([bin(b).count("1") for b in range(dim)])
    total_z = (d - 2 * popcount).astype(float)
    sigma_x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    H = np.diag(-(total_z ** 2) / (2 * d)).astype(np.complex128)
    if B != 0.0:
        H -= B * kron_sum([sigma_x] * d)
    return H


def rescaled_hamiltonian(spec: ModelSpec, two_j: int) -> ComplexMatrix:
    """
    Hamiltonian with spin operators divided by (J+1).

    For ising and heisenberg this is Q^{(d)} of the unscaled classical symbol.
    For curie_weiss it is the restricted per-site operator
    -(1/2)(S_z/(J+1))^2 - B S_x/(J+1) at two_j (two_j = d on the symmetric subspace).
    """
    scale = 1.0 / (two_j / 2 + 1)
    if spec.kind == ModelKind.CURIE_WEISS:
        rep = spin_matrices(two_j)
        s_z = rep.s_z * scale
        return -0.5 * (s_z @ s_z) - spec.B * scale * rep.s_x
    return _chain_hamiltonian(spec, two_j, scale)


def cw_restricted(d: int, B: float) -> ComplexMatrix:
    """
    Curie-Weiss Hamiltonian on the (d+1)-dimensional symmetric subspace.

    Built from the spin-d/2 representation as -(2/d) S_z^2 - 2B S_x.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    rep = spin_matrices(d)
    return -(2.0 / d) * (rep.s_z @ rep.s_z) - 2.0 * B * rep.s_x


def cw_defect(d: int, B: float, scaling: str = "per_site") -> float:
    """
    Distance between the quantized mean-field symbol and the restricted model.

    Args:
        d: Number of qubits, at least 2; the symbol is quantized at two_j = d
        B: Transverse field
        scaling: "per_site" compares with cw_restricted(d, B) / d; "rescaled" compares
            with the restricted model with spin operators divided by (J+1)

    Returns:
        ||quantize_site(h0, d) - comparison||
    """
    if d < 2:
        raise ValueError(f"cw_defect needs d >= 2, got {d}")
    if scaling not in CW_SCALINGS:
        raise ValueError(f"unknown scaling {scaling!r}; expected one of {CW_SCALINGS}")
    spec = ModelSpec(ModelKind.CURIE_WEISS, d, B)
    quantized = quantize_site(classical_symbol(spec), d)
    if scaling == "rescaled":
        comparison = rescaled_hamiltonian(spec, d)
    else:
        comparison = cw_restricted(d, B) / d
    return spectral_norm(quantized - comparison)


def dicke_symmetrizer(d: int) -> ComplexMatrix:
    """
    Isometry from the symmetric subspace onto d qubits.

    Column k is the normalized Dicke state with k qubits in state 1 (σ3 = -1),
    matching the spin-d/2 basis vector with m = d/2 - k.

    Raises:
        DimensionCapError: if d exceeds 12
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if d > MAX_DICKE_SITES:
        raise DimensionCapError(f"Dicke symmetrizer supports at most {MAX_DICKE_SITES} qubits, got {d}")
    dim = 2 ** d
    V = np.zeros((dim, d + 1), dtype=np.complex128)
    for b in range(dim):
        k = bin(b).count("1")
        V[b, k] = 1.0 / np.sqrt(comb(d, k, exact=True))
    return V


def cw_classical_minimum(B: float) -> float:
    """Minimum over the sphere of -(z^2/2 + B x)."""
    B = abs(B)
    if B >= 1.0:
        return -B
    return -0.5 * (1.0 + B * B)


def cw_ground_energy_sweep(d_range: Sequence[int], B: float) -> SweepReport:
    """
    Ground energy per site of the restricted Curie-Weiss model across d.

    Rows carry the per-site ground energy, the classical minimum of the
    mean-field symbol and their difference. Convergence is recorded, not asserted.
    """
    report = SweepReport(parameter_name="d")
    classical = cw_classical_minimum(B)
    for d in sorted(set(int(v) for v in d_range)):
        ground = float(eigvalsh(cw_restricted(d, B))[0]) / d
        report.add_row(d, {
            "ground_energy_per_site": ground,
            "classical_minimum": classical,
            "gap": abs(ground - classical),
        })
        logger.debug(f"Curie-Weiss d={d}, B={B}: ground energy per site {ground:.12g}")
    return report


def model_from_name(kind: str, d: int, B: Optional[float] = None) -> ModelSpec:
    """ModelSpec from CLI-style arguments; B defaults to 0."""
    return ModelSpec(ModelKind(kind), d, 0.0 if B is None else float(B))

