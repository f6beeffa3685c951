"""
Workbench Service

Runs the quantization, sweep, KMS and resolvent checks described by a RunConfig
and assembles report payloads for the command-line harness.
"""

import logging
from typing import Any, Dict, List, Tuple

import numpy as np

from .config import RunConfig
from .errors import ConfigError, WorkbenchError
from .kms import classical_limit_sweep, gibbs_state, kms_residual, maximally_mixed, product_kms_residual
from .linalg import random_hermitian, spectral_norm
from .models import CoherentFamily, GibbsFamily, ModelSpec, SweepReport
from .polynomials.parser import parse_poly
from .quantization import quantize_tensor
from .resolvent import resolvent_convergence
from .spin_models import model_from_name
from .utils.reports import matrix_to_pairs
from .verification import (
    cw_defect_sweep,
    hamiltonian_norm_limit,
    sweep_dgr_defect,
    sweep_norm_gap,
    sweep_product_defect,
)

logger = logging.getLogger(__name__)


class WorkbenchService:
    """
    Orchestrates workbench runs for the CLI.

    Each run method takes a validated RunConfig and returns a payload. Errors
    the workbench raises on purpose pass through; anything else is logged and
    wrapped in RuntimeError.
    """

    def run_quantize(self, config: RunConfig) -> Dict[str, Any]:
        """
        Quantize one polynomial.

        Returns:
            Dict with the matrix (row-major [re, im] pairs), its dimension and spectral norm
        """
        try:
            P = parse_poly(config["poly"], config["sites"])
            matrix = quantize_tensor(P, config["two_j"])
            norm = spectral_norm(matrix)
            logger.debug(f"Quantized {config['poly']!r} at two_j={config['two_j']}: norm {norm:.12g}")
            return {
                "command": "quantize",
                "config": config.model_dump(),
                "dim": matrix.shape[0],
                "matrix": matrix_to_pairs(matrix),
                "spectral_norm": norm,
            }
        except WorkbenchError:
            raise
        except Exception as e:
            logger.error(f"Quantization failed: {str(e)}", exc_info=True)
            raise RuntimeError(f"Quantization failed: {str(e)}") from e

    def run_sweep(self, config: RunConfig) -> SweepReport:
        """Run the configured sweep observable and return its report."""
        try:
            report = self._sweep(config)
            if not config["fit"]:
                report.fit = None
                report.fit_column = None
            logger.debug(f"Sweep {config['observable']!r} produced {len(report.rows)} row(s)")
            return report
        except WorkbenchError:
            raise
        except Exception as e:
            logger.error(f"Sweep failed: {str(e)}", exc_info=True)
            raise RuntimeError(f"Sweep failed: {str(e)}") from e

    def run_kms(self, config: RunConfig) -> Dict[str, Any]:
        """
        Seeded KMS residual checks.

        Modes: "product" (product of two Gibbs states, the diagonal flow),
        "gibbs" (one Gibbs state) and "mixed" (the maximally mixed state paired
        with a nontrivial flow, which must fail).

        Returns:
            Dict with the max residual, the tolerance and whether the check passed
        """
        try:
            rng = np.random.default_rng(config["seed"])
            beta = config["beta"]
            times = config["times"]
            dims = config["dims"]
            norm = config["norm"]

            if config["mode"] == "product":
                H_a = random_hermitian(dims[0], rng, norm)
                H_b = random_hermitian(dims[1], rng, norm)
                samples = [
                    (random_hermitian(dims[0], rng), random_hermitian(dims[1], rng))
                    for _ in range(config["samples"])
                ]
                residual = product_kms_residual(gibbs_state(H_a, beta), gibbs_state(H_b, beta), samples, times)
            else:
                H = random_hermitian(dims[0], rng, norm)
                state = gibbs_state(H, beta) if config["mode"] == "gibbs" else maximally_mixed(H, beta)
                operators = [random_hermitian(dims[0], rng) for _ in range(config["samples"])]
                residual = max(
                    kms_residual(state, a, operators[(i + 1) % len(operators)], t)
                    for i, a in enumerate(operators)
                    for t in times
                )

            passed = residual <= config["tolerance"]
            logger.debug(f"KMS {config['mode']} residual {residual:.3e} (tolerance {config['tolerance']:.0e})")
            return {
                "command": "kms",
                "config": config.model_dump(),
                "residuals": {"max_residual": residual},
                "tolerance": config["tolerance"],
                "passed": passed,
            }
        except WorkbenchError:
            raise
        except Exception as e:
            logger.error(f"KMS check failed: {str(e)}", exc_info=True)
            raise RuntimeError(f"KMS check failed: {str(e)}") from e

    def run_resolvent(self, config: RunConfig) -> Tuple[SweepReport, bool]:
        """
        Contour-resolvent error for each configured node count.

        Returns:
            (report with columns M and error, whether the last error is within tolerance)
        """
        try:
            H1, H2 = self._resolvent_pair(config)
            report = resolvent_convergence(H1, H2, config["lambda"], config["nodes"])
            final = float(report.column("error")[-1])
            return report, final <= config["tolerance"]
        except WorkbenchError:
            raise
        except Exception as e:
            logger.error(f"Resolvent check failed: {str(e)}", exc_info=True)
            raise RuntimeError(f"Resolvent check failed: {str(e)}") from e

    def _resolvent_pair(self, config: RunConfig) -> Tuple[np.ndarray, np.ndarray]:
        if config.get("dims") is not None:
            rng = np.random.default_rng(config["seed"])
            n1, n2 = config["dims"]
            return random_hermitian(n1, rng), random_hermitian(n2, rng)
        return np.diag(config["h1"]).astype(np.complex128), np.diag(config["h2"]).astype(np.complex128)

    def _model(self, config: RunConfig) -> ModelSpec:
        try:
            return model_from_name(config["model"], config["d"], config["B"])
        except ValueError as e:
            raise ConfigError(f"invalid model: {str(e)}") from e

    def _angles(self, config: RunConfig, sites: int) -> List[Tuple[float, float]]:
        theta = config.get("theta", [0.0] * sites)
        phi = config.get("phi", [0.0] * sites)
        if len(theta) != sites or len(phi) != sites:
            raise ConfigError(f"theta and phi need {sites} value(s) each, got {len(theta)} and {len(phi)}")
        return list(zip(theta, phi))

    def _sweep(self, config: RunConfig) -> SweepReport:
        observable = config["observable"]
        values = config["range"]
        sites = config["sites"]

        if observable in ("dgr", "product"):
            f = parse_poly(config["f"], sites)
            g = parse_poly(config["g"], sites)
            if observable == "dgr":
                return sweep_dgr_defect(f, g, values)
            return sweep_product_defect(f, g, values)
        if observable == "norm_gap":
            return sweep_norm_gap(parse_poly(config["f"], sites), values)
        if observable == "cw_defect":
            return cw_defect_sweep(values, config["B"], config["scaling"])
        if observable == "norm_limit":
            return hamiltonian_norm_limit(self._model(config), values)

        f = parse_poly(config["f"], sites)
        if config["family"] == "coherent":
            family = CoherentFamily(angles=tuple(self._angles(config, sites)))
        else:
            family = GibbsFamily(symbol=parse_poly(config["symbol"], sites), beta=config["beta"])
        return classical_limit_sweep(family, f, values)
