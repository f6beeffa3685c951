"""
Core models for the quantization workbench.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from .utils.reports import dumps_json, ensure_finite, matrix_to_pairs, rows_to_csv


@dataclass(frozen=True)
class SpinRepresentation:
    """Spin-J representation of su(2) on C^{2J+1}, basis ordered by m descending."""

    two_j: int
    s_x: np.ndarray = field(repr=False)
    s_y: np.ndarray = field(repr=False)
    s_z: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def spin(self) -> float:
        return self.two_j / 2

    def component(self, axis: str) -> np.ndarray:
        """S_x, S_y or S_z by axis name."""
        return {"x": self.s_x, "y": self.s_y, "z": self.s_z}[axis]

    def model_dump(self) -> Dict[str, Any]:
        """Convert the representation to a dictionary representation."""
        return {
            "two_j": self.two_j,
            "dim": self.dim,
            "s_x": matrix_to_pairs(self.s_x),
            "s_y": matrix_to_pairs(self.s_y),
            "s_z": matrix_to_pairs(self.s_z),
        }


@dataclass(frozen=True)
class CoherentState:
    """Coherent spin state |Ω(θ, φ)⟩ of spin two_j/2."""

    two_j: int
    theta: float
    phi: float
    amplitudes: np.ndarray = field(repr=False)

    def model_dump(self) -> Dict[str, Any]:
        return {
            "two_j": self.two_j,
            "theta": self.theta,
            "phi": self.phi,
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.amplitudes],
        }


@dataclass(frozen=True)
class QuadratureGrid:
    """
    Product Gauss-Legendre (in t = cos θ) times uniform-φ rule on the sphere.

    Flattened node arrays are θ-major: node k is (t_nodes[k // n_phi], phi_nodes[k % n_phi]).
    """

    n_theta: int
    n_phi: int
    exact_degree: int
    t_nodes: np.ndarray = field(repr=False)
    t_weights: np.ndarray = field(repr=False)
    phi_nodes: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.n_theta * self.n_phi

    @property
    def weights(self) -> np.ndarray:
        """Flattened weights summing to 4π."""
        return np.repeat(self.t_weights * (2 * math.pi / self.n_phi), self.n_phi)

    @property
    def theta(self) -> np.ndarray:
        """Flattened polar angles."""
        return np.repeat(np.arccos(self.t_nodes), self.n_phi)

    @property
    def phi(self) -> np.ndarray:
        """Flattened azimuths."""
        return np.tile(self.phi_nodes, self.n_theta)

    def model_dump(self) -> Dict[str, Any]:
        return {
            "n_theta": self.n_theta,
            "n_phi": self.n_phi,
            "exact_degree": self.exact_degree,
            "total_weight": float(np.sum(self.weights)),
        }


@dataclass(frozen=True)
class GibbsState:
    """Density matrix of a state together with the Hamiltonian and β of its flow."""

    hamiltonian: np.ndarray = field(repr=False)
    beta: float
    rho: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def expectation(self, a) -> complex:
        """ω(a) = Tr(ρ a)."""
        return complex(np.trace(self.rho @ np.asarray(a, dtype=np.complex128)))

    def model_dump(self) -> Dict[str, Any]:
        return {
            "beta": self.beta,
            "dim": self.dim,
            "rho": matrix_to_pairs(self.rho),
        }


@dataclass
class TwoPointFunction:
    """Samples of F_ab(t + is) = ω(a φ_{t+is}(b)) on the closed strip 0 <= s <= β."""

    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    state: GibbsState = field(repr=False)
    samples: List[Tuple[float, float]] = field(default_factory=list)
    values: List[complex] = field(default_factory=list)

    def model_dump(self) -> Dict[str, Any]:
        return {
            "beta": self.state.beta,
            "samples": [list(s) for s in self.samples],
            "values": [[v.real, v.imag] for v in self.values],
        }


@dataclass(frozen=True)
class ContourSpec:
    """Ellipse z(s) = center + semi_major·cos s + i·semi_minor·sin s, traversed with M trapezoid nodes."""

    center: float
    semi_major: float
    semi_minor: float
    nodes: int

    def points(self) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes z_m and trapezoid weights z'(s_m)·2π/M."""
        s = 2 * np.pi * np.arange(self.nodes) / self.nodes
        z = self.center + self.semi_major * np.cos(s) + 1j * self.semi_minor * np.sin(s)
        dz = -self.semi_major * np.sin(s) + 1j * self.semi_minor * np.cos(s)
        return z, dz * (2 * np.pi / self.nodes)

    def model_dump(self) -> Dict[str, Any]:
        return {
            "center": self.center,
            "semi_major": self.semi_major,
            "semi_minor": self.semi_minor,
            "nodes": self.nodes,
        }


class ModelKind(str, Enum):
    ISING = "ising"
    HEISENBERG = "heisenberg"
    CURIE_WEISS = "curie_weiss"


@dataclass(frozen=True)
class ModelSpec:
    """A spin model: kind, number of sites and transverse field."""

    kind: ModelKind
    d: int
    B: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.d < 1:
            raise ValueError(f"site count must be >= 1, got {self.d}")
        if self.kind in (ModelKind.ISING, ModelKind.HEISENBERG) and self.d < 2:
            raise ValueError(f"{self.kind.value} needs at least 2 sites, got {self.d}")
        if self.kind == ModelKind.HEISENBERG and self.B != 0.0:
            raise ValueError("the Heisenberg model takes no transverse field")

    def model_dump(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "d": self.d, "B": self.B}


class RateFit(NamedTuple):
    """Least-squares fit value ≈ prefactor · parameter^exponent."""

    exponent: float
    prefactor: float
    r_squared: float


class NormGap(NamedTuple):
    quantum_norm: float
    classical_norm: float
    gap: float


@dataclass
class AxiomReport:
    """Unit and self-adjointness checks of a quantization map on one polynomial."""

    unit_residual: float
    adjoint_residual: float
    tolerance: float = 1e-12

    @property
    def unit_passed(self) -> bool:
        return self.unit_residual <= self.tolerance

    @property
    def adjoint_passed(self) -> bool:
        return self.adjoint_residual <= self.tolerance

    @property
    def passed(self) -> bool:
        return self.unit_passed and self.adjoint_passed

    def model_dump(self) -> Dict[str, Any]:
        return {
            "unit_residual": self.unit_residual,
            "unit_passed": self.unit_passed,
            "adjoint_residual": self.adjoint_residual,
            "adjoint_passed": self.adjoint_passed,
            "tolerance": self.tolerance,
        }


@dataclass
class SweepReport:
    """Table of observables across a semiclassical sweep, plus an optional fitted rate."""

    parameter_name: str
    rows: List[Tuple[float, Dict[str, float]]] = field(default_factory=list)
    fit: Optional[RateFit] = None
    fit_column: Optional[str] = None

    def __post_init__(self):
        previous = None
        for parameter, values in self.rows:
            if previous is not None and not parameter > previous:
                raise ValueError(
                    f"parameter column must be strictly increasing, got {previous} then {parameter}"
                )
            if not math.isfinite(parameter):
                raise ValueError(f"non-finite parameter value {parameter!r}")
            ensure_finite(values)
            previous = parameter

    def add_row(self, parameter: float, values: Dict[str, float]) -> None:
        if self.rows and not parameter > self.rows[-1][0]:
            raise ValueError(
                f"parameter column must be strictly increasing, got {self.rows[-1][0]} then {parameter}"
            )
        ensure_finite(values)
        self.rows.append((float(parameter), {k: float(v) for k, v in values.items()}))

    @property
    def columns(self) -> List[str]:
        """Observable names in first-seen order."""
        names: List[str] = []
        for _, values in self.rows:
            for key in values:
                if key not in names:
                    names.append(key)
        return names

    @property
    def parameters(self) -> np.ndarray:
        return np.array([p for p, _ in self.rows], dtype=float)

    def column(self, name: str) -> np.ndarray:
        """Values of one observable, in row order."""
        if name not in self.columns:
            raise KeyError(f"no column {name!r} in report (columns: {self.columns})")
        return np.array([values[name] for _, values in self.rows], dtype=float)

    def to_csv(self) -> str:
        """Header row with the parameter name then observable names, one line per row."""
        names = self.columns
        table = [[p] + [values[n] for n in names] for p, values in self.rows]
        return rows_to_csv([self.parameter_name] + names, table)

    def to_json(self) -> str:
        return dumps_json(self.model_dump())

    def fit_dump(self) -> Optional[Dict[str, Any]]:
        if self.fit is None:
            return None
        return {
            "column": self.fit_column,
            "exponent": self.fit.exponent,
            "prefactor": self.fit.prefactor,
            "r_squared": self.fit.r_squared,
        }

    def model_dump(self) -> Dict[str, Any]:
        """Convert the report to a dictionary representation."""
        return {
            "parameter_name": self.parameter_name,
            "columns": self.columns,
            "rows": [{"parameter": p, "values": dict(values)} for p, values in self.rows],
            "fit": self.fit_dump(),
        }


@dataclass(frozen=True)
class CoherentFamily:
    """Product coherent states at fixed points, one (θ, φ) pair per site."""

    angles: Tuple[Tuple[float, float], ...]

    def model_dump(self) -> Dict[str, Any]:
        return {"family": "coherent", "angles": [list(a) for a in self.angles]}


@dataclass(frozen=True)
class GibbsFamily:
    """Gibbs states of the quantized symbol at inverse temperature beta."""

    symbol: Any
    beta: float

    def model_dump(self) -> Dict[str, Any]:
        return {"family": "gibbs", "symbol": str(self.symbol), "beta": self.beta}
