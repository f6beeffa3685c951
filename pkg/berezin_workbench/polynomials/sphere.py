"""
Polynomials on a d-fold product of unit 2-spheres.

A SitePolynomial stores complex coefficients keyed by monomials; a monomial
holds one exponent triple (a, b, c) of (x_j, y_j, z_j) per site. Polynomials
are kept in normal form, z-degree at most 1 per site, by rewriting
z_j^2 = 1 - x_j^2 - y_j^2.
"""

import itertools
import logging
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import SiteMismatchError
from ..utils.tolerances import COEFF_TOL

logger = logging.getLogger(__name__)

SiteExponents = Tuple[int, int, int]
Monomial = Tuple[SiteExponents, ...]
Scalar = Union[int, float, complex]

AXES = ("x", "y", "z")


@lru_cache(maxsize=None)
def _reduce_site(a: int, b: int, c: int) -> Tuple[Tuple[SiteExponents, int], ...]:
    """Integer expansion of x^a y^b z^c with the z-degree brought down to at most 1."""
    if c < 2:
        return (((a, b, c), 1),)
    expansion: Dict[SiteExponents, int] = {}
    for exps, sign in (((a, b, c - 2), 1), ((a + 2, b, c - 2), -1), ((a, b + 2, c - 2), -1)):
        for reduced, k in _reduce_site(*exps):
            expansion[reduced] = expansion.get(reduced, 0) + sign * k
    return tuple((exps, k) for exps, k in sorted(expansion.items()) if k != 0)


def _reduce_monomial(monomial: Monomial) -> Iterator[Tuple[Monomial, int]]:
    if all(c < 2 for _, _, c in monomial):
        yield monomial, 1
        return
    per_site = [_reduce_site(*exps) for exps in monomial]
    for combo in itertools.product(*per_site):
        coeff = 1
        for _, k in combo:
            coeff *= k
        yield tuple(exps for exps, _ in combo), coeff


def _normalize(terms: Iterable[Tuple[Monomial, complex]]) -> Dict[Monomial, complex]:
    result: Dict[Monomial, complex] = {}
    for monomial, coeff in terms:
        if coeff == 0:
            continue
        for reduced, k in _reduce_monomial(monomial):
            result[reduced] = result.get(reduced, 0j) + coeff * k
    return {m: c for m, c in result.items() if c != 0}


class SitePolynomial:
    """
    Complex polynomial in the sphere coordinates (x_j, y_j, z_j), j = 1..sites, in normal form.

    Instances are immutable; arithmetic returns new polynomials.
    """

    __slots__ = ("_sites", "_terms")

    def __init__(self, sites: int, terms: Optional[Mapping[Monomial, Scalar]] = None):
        if sites < 1:
            raise ValueError(f"site count must be positive, got {sites}")
        self._sites = int(sites)
        items = []
        for monomial, coeff in (terms or {}).items():
            monomial = tuple(tuple(int(e) for e in exps) for exps in monomial)
            if len(monomial) != self._sites or any(len(exps) != 3 for exps in monomial):
                raise ValueError(f"monomial {monomial} does not have {self._sites} exponent triples")
            if any(e < 0 for exps in monomial for e in exps):
                raise ValueError(f"negative exponent in monomial {monomial}")
            coeff = complex(coeff)
            if not np.isfinite(coeff):
                raise ValueError(f"non-finite coefficient {coeff!r}")
            items.append((monomial, coeff))
        self._terms = _normalize(items)

    # constructors

    @classmethod
    def constant(cls, sites: int, value: Scalar = 1) -> "SitePolynomial":
        return cls(sites, {cls.unit_monomial(sites): value})

    @classmethod
    def zero(cls, sites: int) -> "SitePolynomial":
        return cls(sites)

    @classmethod
    def coordinate(cls, sites: int, site: int, axis: str) -> "SitePolynomial":
        """The coordinate function x_site, y_site or z_site (site is 1-based)."""
        if not 1 <= site <= sites:
            raise ValueError(f"site {site} outside 1..{sites}")
        exps = [(0, 0, 0)] * sites
        triple = [0, 0, 0]
        triple[AXES.index(axis)] = 1
        exps[site - 1] = tuple(triple)
        return cls(sites, {tuple(exps): 1})

    @staticmethod
    def unit_monomial(sites: int) -> Monomial:
        return ((0, 0, 0),) * sites

    # accessors

    @property
    def sites(self) -> int:
        return self._sites

    @property
    def terms(self) -> Dict[Monomial, complex]:
        """Copy of the normal-form term collection."""
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, complex]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, monomial: Monomial) -> complex:
        return self._terms.get(monomial, 0j)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self._terms.values())

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def total_degree(self) -> int:
        return max((sum(sum(exps) for exps in m) for m in self._terms), default=0)

    def site_degree(self, site: int) -> int:
        """Largest degree in the variables of one site (1-based)."""
        return max((sum(m[site - 1]) for m in self._terms), default=0)

    def max_site_degree(self) -> int:
        return max((self.site_degree(j) for j in range(1, self._sites + 1)), default=0)

    # arithmetic

    def _check_sites(self, other: "SitePolynomial") -> None:
        if other.sites != self._sites:
            raise SiteMismatchError(f"site counts differ: {self._sites} vs {other.sites}")

    def _coerce(self, other) -> "SitePolynomial":
        if isinstance(other, SitePolynomial):
            self._check_sites(other)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return SitePolynomial.constant(self._sites, complex(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_sub(other, self)

    def __neg__(self):
        return poly_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return poly_scale(self, other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {exponent!r}")
        result = SitePolynomial.constant(self._sites)
        for _ in range(exponent):
            result = poly_mul(result, self)
        return result

    def __eq__(self, other):
        if not isinstance(other, SitePolynomial):
            return NotImplemented
        return self.is_close(other)

    __hash__ = None

    def is_close(self, other: "SitePolynomial", tol: float = COEFF_TOL) -> bool:
        """Equality of normal forms with absolute coefficient tolerance."""
        if other.sites != self._sites:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= tol for k in keys)

    def conjugate(self) -> "SitePolynomial":
        """Coefficient-conjugated polynomial (the pointwise complex conjugate on the sphere)."""
        return SitePolynomial(self._sites, {m: c.conjugate() for m, c in self._terms.items()})

    def restrict_site(self, site: int) -> "SitePolynomial":
        """Single-site view of a polynomial that only involves one site."""
        for monomial in self._terms:
            for j, exps in enumerate(monomial, start=1):
                if j != site and any(exps):
                    raise ValueError(f"polynomial involves site {j}, not only site {site}")
        return SitePolynomial(1, {(m[site - 1],): c for m, c in self._terms.items()})

    # evaluation

    def evaluate(self, angles: Sequence[Tuple[float, float]]) -> complex:
        """
        Evaluate at one point of the product of spheres.

        Args:
            angles: One (θ_j, φ_j) pair per site

        Returns:
            The polynomial value with x = sinθcosφ, y = sinθsinφ, z = cosθ
        """
        if len(angles) != self._sites:
            raise SiteMismatchError(f"expected {self._sites} (theta, phi) pairs, got {len(angles)}")
        theta = np.array([[a[0] for a in angles]], dtype=float)
        phi = np.array([[a[1] for a in angles]], dtype=float)
        return complex(self.evaluate_many(theta, phi)[0])

    def evaluate_many(self, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
        """
        Vectorized evaluation.

        Args:
            theta: Array of shape (N, sites) of polar angles
            phi: Array of shape (N, sites) of azimuths

        Returns:
            Complex array of shape (N,)
        """
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        phi = np.atleast_2d(np.asarray(phi, dtype=float))
        if theta.shape != phi.shape or theta.shape[1] != self._sites:
            raise SiteMismatchError(
                f"angle arrays must have shape (N, {self._sites}), got {theta.shape} and {phi.shape}"
            )
        sin_t = np.sin(theta)
        coords = (sin_t * np.cos(phi), sin_t * np.sin(phi), np.cos(theta))
        return self.evaluate_cartesian(coords)

    def evaluate_cartesian(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate at cartesian coordinates given as (x, y, z) arrays of shape (N, sites)."""
        n_points = coords[0].shape[0]
        values = np.zeros(n_points, dtype=np.complex128)
        for monomial, coeff in self._terms.items():
            term = np.full(n_points, coeff, dtype=np.complex128)
            for j, exps in enumerate(monomial):
                for axis, e in enumerate(exps):
                    if e:
                        term *= coords[axis][:, j] ** e
            values += term
        return values

    # printing

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"SitePolynomial(sites={self._sites}, {format_poly(self)!r})"


def _require_same_sites(P: SitePolynomial, Q: SitePolynomial) -> None:
    if P.sites != Q.sites:
        raise SiteMismatchError(f"site counts differ: {P.sites} vs {Q.sites}")


def poly_add(P: SitePolynomial, Q: SitePolynomial) -> SitePolynomial:
    _require_same_sites(P, Q)
    terms = P.terms
    for m, c in Q.terms.items():
        terms[m] = terms.get(m, 0j) + c
    return SitePolynomial(P.sites, terms)


def poly_sub(P: SitePolynomial, Q: SitePolynomial) -> SitePolynomial:
    _require_same_sites(P, Q)
    terms = P.terms
    for m, c in Q.terms.items():
        terms[m] = terms.get(m, 0j) - c
    return SitePolynomial(P.sites, terms)


def poly_scale(P: SitePolynomial, alpha: Scalar) -> SitePolynomial:
    alpha = complex(alpha)
    return SitePolynomial(P.sites, {m: alpha * c for m, c in P.terms.items()})


def poly_mul(P: SitePolynomial, Q: SitePolynomial) -> SitePolynomial:
    """
    Normal-form product.

    Raises:
        SiteMismatchError: if the site counts differ
    """
    _require_same_sites(P, Q)
    products: Dict[Monomial, complex] = {}
    for m1, c1 in P.terms.items():
        for m2, c2 in Q.terms.items():
            m = tuple((e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]) for e1, e2 in zip(m1, m2))
            products[m] = products.get(m, 0j) + c1 * c2
    return SitePolynomial(P.sites, products)


def partial_derivative(P: SitePolynomial, site: int, axis: str) -> SitePolynomial:
    """∂P/∂x_{site} (axis 'x', 'y' or 'z') of the normal-form representative on R^3."""
    k = AXES.index(axis)
    terms: Dict[Monomial, complex] = {}
    for monomial, coeff in P.terms.items():
        e = monomial[site - 1][k]
        if e == 0:
            continue
        exps = list(monomial[site - 1])
        exps[k] -= 1
        reduced = monomial[: site - 1] + (tuple(exps),) + monomial[site:]
        terms[reduced] = terms.get(reduced, 0j) + coeff * e
    return SitePolynomial(P.sites, terms)


def _site_bracket(f: SitePolynomial, g: SitePolynomial, site: int) -> SitePolynomial:
    """Σ ε_abc x_c ∂_a f ∂_b g in the variables of one site, others held constant."""
    fx, fy, fz = (partial_derivative(f, site, a) for a in AXES)
    gx, gy, gz = (partial_derivative(g, site, a) for a in AXES)
    x, y, z = (SitePolynomial.coordinate(f.sites, site, a) for a in AXES)
    return (
        poly_mul(z, poly_mul(fx, gy) - poly_mul(fy, gx))
        + poly_mul(x, poly_mul(fy, gz) - poly_mul(fz, gy))
        + poly_mul(y, poly_mul(fz, gx) - poly_mul(fx, gz))
    )


def poisson_bracket_single(f: SitePolynomial, g: SitePolynomial) -> SitePolynomial:
    """
    Poisson bracket on one sphere, {f,g} = Σ ε_abc x_c ∂_a f ∂_b g.

    Computed on the ambient R^3 representatives, then reduced to normal form.

    Raises:
        SiteMismatchError: if either polynomial has more than one site
    """
    if f.sites != 1 or g.sites != 1:
        raise SiteMismatchError(
            f"single-site bracket needs 1-site polynomials, got {f.sites} and {g.sites}"
        )
    return _site_bracket(f, g, 1)


def poisson_bracket_tensor(f: SitePolynomial, g: SitePolynomial) -> SitePolynomial:
    """
    Product Poisson bracket on (S^2)^d: the sum over sites of the single-site bracket.

    On elementary tensors this is {f1⊗f2, g1⊗g2} = {f1,g1}⊗f2g2 + f1g1⊗{f2,g2}.
    """
    _require_same_sites(f, g)
    result = SitePolynomial.zero(f.sites)
    for site in range(1, f.sites + 1):
        result = poly_add(result, _site_bracket(f, g, site))
    return result


def scale_coordinates(P: SitePolynomial, two_j: int) -> SitePolynomial:
    """
    Substitute e_j -> (J+1) e_j on the normal-form representative.

    Each monomial gains Π_j (J+1)^{k_j}, k_j its degree in the variables of site j.
    """
    factor = two_j / 2 + 1
    terms = {}
    for monomial, coeff in P.terms.items():
        degree = sum(sum(exps) for exps in monomial)
        terms[monomial] = coeff * factor ** degree
    return SitePolynomial(P.sites, terms)


def monomials_up_to(sites: int, degree: int) -> List[Monomial]:
    """All normal-form monomials of total degree <= degree, sorted."""
    per_site = [
        (a, b, c)
        for a in range(degree + 1)
        for b in range(degree + 1 - a)
        for c in range(min(1, degree - a - b) + 1)
    ]
    result = []
    for combo in itertools.product(per_site, repeat=sites):
        if sum(sum(exps) for exps in combo) <= degree:
            result.append(tuple(combo))
    return sorted(result)


def random_poly(
    sites: int,
    degree: int,
    rng: np.random.Generator,
    n_terms: Optional[int] = None,
    complex_coeffs: bool = False,
) -> SitePolynomial:
    """
    Seeded random polynomial of total degree <= degree.

    Args:
        sites: Number of sites
        degree: Total degree bound
        rng: numpy Generator
        n_terms: Number of monomials drawn (all of them when None)
        complex_coeffs: Whether coefficients get an imaginary part

    Returns:
        A normal-form polynomial with coefficients drawn from N(0, 1)
    """
    pool = monomials_up_to(sites, degree)
    if n_terms is not None and n_terms < len(pool):
        picks = rng.choice(len(pool), size=n_terms, replace=False)
        pool = [pool[i] for i in sorted(picks)]
    terms = {}
    for monomial in pool:
        coeff = complex(rng.standard_normal())
        if complex_coeffs:
            coeff += 1j * rng.standard_normal()
        terms[monomial] = coeff
    return SitePolynomial(sites, terms)


def _format_number(value: float) -> str:
    return repr(float(value))


def _format_coefficient(coeff: complex) -> str:
    if coeff.imag == 0:
        return _format_number(coeff.real)
    sign = "-" if coeff.imag < 0 else "+"
    return f"({_format_number(coeff.real)}{sign}{_format_number(abs(coeff.imag))}i)"


def _format_monomial(monomial: Monomial) -> str:
    factors = []
    for j, exps in enumerate(monomial, start=1):
        for axis, e in zip(AXES, exps):
            if e == 1:
                factors.append(f"{axis}{j}")
            elif e > 1:
                factors.append(f"{axis}{j}^{e}")
    return "*".join(factors)


def format_poly(P: SitePolynomial) -> str:
    """
    Text form of a polynomial in the parser's grammar.

    Monomials are sorted site-major, then lexicographically in (a, b, c).
    """
    pieces = []
    for monomial, coeff in sorted(P.terms.items()):
        body = _format_monomial(monomial)
        if not body:
            text = _format_coefficient(coeff)
        elif coeff == 1:
            text = body
        elif coeff == -1:
            text = f"-{body}"
        else:
            text = f"{_format_coefficient(coeff)}*{body}"
        pieces.append(text)
    if not pieces:
        return "0"
    out = pieces[0]
    for text in pieces[1:]:
        if text.startswith("-"):
            out += f" - {text[1:]}"
        else:
            out += f" + {text}"
    return out
