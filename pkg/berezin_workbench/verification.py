"""
Numerical checks of the deformation-quantization axioms.

Defects use the convention ħ = 1/J and the commutator prefactor 1/(iħ) = -iJ,
so that (1/(iħ))[Q(f), Q(g)] - Q({f, g}) tends to zero. All norms are
operator norms; reports carry raw values.
"""

import logging
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from .errors import DimensionCapError, FitError
from .linalg import max_abs, spectral_norm
from .models import AxiomReport, ModelKind, ModelSpec, NormGap, RateFit, SweepReport
from .polynomials.sphere import SitePolynomial, poisson_bracket_tensor, poly_mul
from .polynomials.supnorm import sup_norm
from .quantization import quantize_tensor
from .spin_models import classical_symbol, cw_defect, rescaled_hamiltonian
from .utils.tolerances import MAX_SUP_NORM_SITES

logger = logging.getLogger(__name__)

MIN_FIT_ROWS = 4

OBSERVABLES = ("dgr", "product", "norm_gap")


def dgr_defect(f: SitePolynomial, g: SitePolynomial, two_j: int) -> float:
    """
    ||(1/(iħ))[Q(f), Q(g)] - Q({f, g})|| with ħ = 1/J.

    Args:
        f, g: Polynomials on the same number of sites
        two_j: Twice the per-site spin

    Returns:
        The operator-norm defect
    """
    J = two_j / 2
    Qf = quantize_tensor(f, two_j)
    Qg = quantize_tensor(g, two_j)
    Qb = quantize_tensor(poisson_bracket_tensor(f, g), two_j)
    return spectral_norm(-1j * J * (Qf @ Qg - Qg @ Qf) - Qb)


def product_defect(f: SitePolynomial, g: SitePolynomial, two_j: int) -> float:
    """||Q(f)Q(g) - Q(fg)||."""
    Qf = quantize_tensor(f, two_j)
    Qg = quantize_tensor(g, two_j)
    return spectral_norm(Qf @ Qg - quantize_tensor(poly_mul(f, g), two_j))


def norm_gap(f: SitePolynomial, two_j: int, classical_norm: Optional[float] = None) -> NormGap:
    """
    Quantum norm ||Q(f)||, classical sup norm of f and their distance.

    Args:
        f: Polynomial on at most 4 sites
        two_j: Twice the per-site spin
        classical_norm: Precomputed sup norm of f, reused across sweep rows

    Returns:
        NormGap(quantum_norm, classical_norm, gap)
    """
    quantum = spectral_norm(quantize_tensor(f, two_j))
    classical = sup_norm(f) if classical_norm is None else float(classical_norm)
    return NormGap(quantum, classical, abs(quantum - classical))


def axiom_check(f: SitePolynomial, two_j: int, tolerance: float = 1e-12) -> AxiomReport:
    """
    Unit and self-adjointness checks.

    The unit residual is ||Q(1) - I||_max; the adjoint residual is
    ||Q(f*) - Q(f)*||_max / (1 + ||Q(f)||).
    """
    unit = quantize_tensor(SitePolynomial.constant(f.sites), two_j)
    unit_residual = max_abs(unit - np.eye(unit.shape[0]))
    Qf = quantize_tensor(f, two_j)
    Qf_conj = quantize_tensor(f.conjugate(), two_j)
    adjoint_residual = max_abs(Qf_conj - Qf.conj().T) / (1.0 + spectral_norm(Qf))
    return AxiomReport(unit_residual=unit_residual, adjoint_residual=adjoint_residual, tolerance=tolerance)


def _check_range(values: Sequence[int]) -> list:
    values = [int(v) for v in values]
    if not values:
        raise ValueError("sweep range is empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"sweep range must be strictly ascending, got {values}")
    return values


def fit_rate(report: SweepReport, column: str) -> RateFit:
    """
    Least-squares fit of log(value) = exponent·log(parameter) + log(prefactor).

    Raises:
        FitError: with fewer than 4 rows or a nonpositive value or parameter
    """
    parameters = report.parameters
    values = report.column(column)
    if len(values) < MIN_FIT_ROWS:
        raise FitError(f"fit needs at least {MIN_FIT_ROWS} rows, got {len(values)}")
    if np.any(values <= 0) or np.any(parameters <= 0):
        raise FitError(f"fit needs positive values; column {column!r} has nonpositive entries")
    x = np.log(parameters)
    y = np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_res = float(np.sum(residual ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    fit = RateFit(exponent=float(slope), prefactor=float(np.exp(intercept)), r_squared=r_squared)
    logger.debug(f"Fitted {column}: exponent {fit.exponent:.6f}, prefactor {fit.prefactor:.6g}, r^2 {r_squared:.6f}")
    return fit


def attach_fit(report: SweepReport, column: str) -> SweepReport:
    """Attach a rate fit of one column when the column supports one."""
    values = report.column(column)
    if len(values) >= MIN_FIT_ROWS and np.all(values > 0):
        report.fit = fit_rate(report, column)
        report.fit_column = column
    else:
        logger.debug(f"No fit for column {column!r}: needs {MIN_FIT_ROWS} positive rows")
    return report


def _spin_sweep(
    two_j_range: Sequence[int],
    row: Callable[[int], Dict[str, float]],
    fit_column: str,
) -> SweepReport:
    report = SweepReport(parameter_name="J")
    for two_j in _check_range(two_j_range):
        values = row(two_j)
        report.add_row(two_j / 2, values)
        logger.debug(f"Sweep row two_j={two_j}: {values}")
    return attach_fit(report, fit_column)


def sweep(
    observable: str,
    two_j_range: Sequence[int],
    f: SitePolynomial,
    g: Optional[SitePolynomial] = None,
) -> SweepReport:
    """
    Tabulate a defect across spins.

    Args:
        observable: "dgr", "product" or "norm_gap"
        two_j_range: Strictly ascending two_j values
        f: First polynomial
        g: Second polynomial for "dgr" and "product"

    Returns:
        SweepReport with parameter J = two_j/2, fitted on the defect (or gap) column
    """
    if observable not in OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}; expected one of {OBSERVABLES}")
    if observable == "dgr":
        return sweep_dgr_defect(f, _require_g(g, observable), two_j_range)
    if observable == "product":
        return sweep_product_defect(f, _require_g(g, observable), two_j_range)
    return sweep_norm_gap(f, two_j_range)


def _require_g(g: Optional[SitePolynomial], observable: str) -> SitePolynomial:
    if g is None:
        raise ValueError(f"observable {observable!r} needs a second polynomial g")
    return g


def sweep_dgr_defect(f: SitePolynomial, g: SitePolynomial, two_j_range: Sequence[int]) -> SweepReport:
    return _spin_sweep(two_j_range, lambda tj: {"dgr_defect": dgr_defect(f, g, tj)}, "dgr_defect")


def sweep_product_defect(f: SitePolynomial, g: SitePolynomial, two_j_range: Sequence[int]) -> SweepReport:
    return _spin_sweep(two_j_range, lambda tj: {"product_defect": product_defect(f, g, tj)}, "product_defect")


def sweep_norm_gap(f: SitePolynomial, two_j_range: Sequence[int]) -> SweepReport:
    classical = sup_norm(f)

    def row(two_j: int) -> Dict[str, float]:
        return norm_gap(f, two_j, classical)._asdict()

    return _spin_sweep(two_j_range, row, "gap")


def cw_defect_sweep(d_range: Sequence[int], B: float, scaling: str = "per_site") -> SweepReport:
    """cw_defect across d with a rate fit of the defect column."""
    report = SweepReport(parameter_name="d")
    for d in _check_range(d_range):
        report.add_row(d, {"cw_defect": cw_defect(d, B, scaling)})
    return attach_fit(report, "cw_defect")


def hamiltonian_norm_limit(model: ModelSpec, two_j_range: Sequence[int]) -> SweepReport:
    """
    Norms of the (J+1)-rescaled Hamiltonians against the classical sup norm.

    Ising and Heisenberg rows are indexed by J at the model's d. Curie-Weiss
    rows are indexed by d, each using the restricted operator at two_j = d, so
    the range values are read as site counts.

    Raises:
        DimensionCapError: if a row's Hamiltonian exceeds the cap, or if an
            ising/heisenberg chain has more sites than the classical sup norm handles
    """
    if model.kind != ModelKind.CURIE_WEISS and model.d > MAX_SUP_NORM_SITES:
        raise DimensionCapError(
            f"classical sup norm supports at most {MAX_SUP_NORM_SITES} sites; "
            f"{model.kind.value} chain has d={model.d}"
        )
    classical = sup_norm(classical_symbol(model))
    if model.kind == ModelKind.CURIE_WEISS:
        report = SweepReport(parameter_name="d")
        for d in _check_range(two_j_range):
            quantum = spectral_norm(rescaled_hamiltonian(ModelSpec(model.kind, d, model.B), d))
            report.add_row(d, {"quantum_norm": quantum, "classical_norm": classical, "gap": abs(quantum - classical)})
        return attach_fit(report, "gap")

    def row(two_j: int) -> Dict[str, float]:
        quantum = spectral_norm(rescaled_hamiltonian(model, two_j))
        return {"quantum_norm": quantum, "classical_norm": classical, "gap": abs(quantum - classical)}

    return _spin_sweep(two_j_range, row, "gap")
