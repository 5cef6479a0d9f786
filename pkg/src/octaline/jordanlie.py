"""Jordan-Lie structures: two compatible bilinear products with a coupling constant.

A structure consists of a commutative product ``.`` and a Lie bracket ``[,]``
on one real or complex vector space whose associators are proportional:

    (x . y) . z - x . (y . z) = kappa * [[x, z], y]

Both products are stored as structure-constant tensors over an explicit
matrix basis, which makes axiom sweeps, tensor products, and conversions to
and from associative matrix algebras mechanical.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import StarAlgebra
from .errors import ConfigurationError, DimensionError
from .sampling import rng_for


# ---------------------------------------------------------------------------
# raw associator helpers (work on anything a bilinear callable accepts)

def associator(product, x, y, z):
    """(xy)z - x(yz) for an arbitrary bilinear callable."""
    return product(product(x, y), z) - product(x, product(y, z))


def split_sym_skew(product):
    """Symmetric and skew parts J(x,y) = xy + yx, L(x,y) = xy - yx.

    The original product is recovered as (J + L) / 2; for an associative
    product the associators of the two parts cancel: A_J = -A_L.
    """

    def sym(x, y):
        return product(x, y) + product(y, x)

    def skew(x, y):
        return product(x, y) - product(y, x)

    return sym, skew


# ---------------------------------------------------------------------------
# conversion parameters

@dataclass(frozen=True)
class ConversionParams:
    """Coefficients (w, u) or (w, v) linking the two products to one associative product.

    Real u realizes kappa = -w^2/u^2; a bracket coefficient i*v realizes
    kappa = +w^2/v^2.  Defaults w = 1/2, v = 1/hbar, hbar = 1 give kappa = 1/4.
    """

    w: float = 0.5
    u: float | None = None
    v: float | None = None
    hbar: float = 1.0

    def __post_init__(self):
        if self.w == 0:
            raise ConfigurationError("w must be nonzero")
        if self.u is not None and self.v is not None:
            raise ConfigurationError("give u or v, not both")
        if self.u is None and self.v is None:
            if self.hbar == 0:
                raise ConfigurationError("hbar must be nonzero")
            object.__setattr__(self, "v", 1.0 / self.hbar)
        if self.u == 0 or self.v == 0:
            raise ConfigurationError("bracket coefficient must be nonzero")

    @property
    def kappa(self) -> float:
        if self.u is not None:
            return -self.w ** 2 / self.u ** 2
        return self.w ** 2 / self.v ** 2


def hbar_for_kappa(kappa: float) -> float:
    """Positive scale 2*sqrt(kappa) attached to a positive coupling constant."""
    if kappa <= 0:
        raise ConfigurationError("hbar is defined for positive kappa only")
    return 2.0 * math.sqrt(kappa)


# ---------------------------------------------------------------------------
# bases

def matrix_unit_basis(n: int) -> np.ndarray:
    """Hilbert-Schmidt orthonormal basis E_ij of M(n, C), shape (n*n, n, n)."""
    basis = np.zeros((n * n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            basis[i * n + j, i, j] = 1.0
    return basis


def hermitian_basis(n: int) -> np.ndarray:
    """Hilbert-Schmidt orthonormal real basis of Herm(n), shape (n*n, n, n)."""
    mats = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[i, i] = 1.0
        mats.append(m)
    s = 1.0 / math.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = s
            m[j, i] = s
            mats.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = 1j * s
            m[j, i] = -1j * s
            mats.append(m)
    return np.array(mats)


def _tensor_from_product(basis: np.ndarray, product) -> np.ndarray:
    """Structure constants T[i, j, k] of a matrix-level bilinear product."""
    dim = basis.shape[0]
    flat = basis.reshape(dim, -1)
    tensor = np.empty((dim, dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            p = product(basis[i], basis[j]).reshape(-1)
            tensor[i, j] = flat.conj() @ p
    return tensor


# ---------------------------------------------------------------------------
# the structure itself

@dataclass
class JordanLieStructure:
    """Structure constants for the pair (jordan, lie) over an explicit basis."""

    basis: np.ndarray | None
    jordan: np.ndarray
    lie: np.ndarray
    kappa: float
    basis_labels: tuple[str, ...] | None = None
    unit: np.ndarray | None = None  # coordinates of a distinguished Jordan unit

    def __post_init__(self):
        self.jordan = np.asarray(self.jordan, dtype=complex)
        self.lie = np.asarray(self.lie, dtype=complex)
        d = self.jordan.shape[0]
        if self.jordan.shape != (d, d, d) or self.lie.shape != (d, d, d):
            raise DimensionError("structure tensors must both have shape (d, d, d)")
        if not np.isfinite(self.kappa):
            raise ConfigurationError("kappa must be finite")

    @property
    def dim(self) -> int:
        return self.jordan.shape[0]

    def jordan_apply(self, x, y) -> np.ndarray:
        return np.einsum("ijk,...i,...j->...k", self.jordan, x, y)

    def lie_apply(self, x, y) -> np.ndarray:
        return np.einsum("ijk,...i,...j->...k", self.lie, x, y)

    def to_coords(self, matrix) -> np.ndarray:
        if self.basis is None:
            raise ConfigurationError("structure has no matrix realization")
        flat = self.basis.reshape(self.dim, -1)
        return flat.conj() @ np.asarray(matrix, dtype=complex).reshape(-1)

    def from_coords(self, coords) -> np.ndarray:
        if self.basis is None:
            raise ConfigurationError("structure has no matrix realization")
        return np.tensordot(np.asarray(coords, dtype=complex), self.basis, axes=(0, 0))

    def rescaled(self, jordan_factor: float, lie_factor: float) -> "JordanLieStructure":
        """Scale the products; the coupling constant rescales by (mu/lambda)^2."""
        return JordanLieStructure(
            basis=self.basis,
            jordan=jordan_factor * self.jordan,
            lie=lie_factor * self.lie,
            kappa=self.kappa * (jordan_factor / lie_factor) ** 2,
            basis_labels=self.basis_labels,
        )


# ---------------------------------------------------------------------------
# constructions

def from_associative(alg: StarAlgebra, params: ConversionParams) -> JordanLieStructure:
    """Products w(ab + ba) and u(ab - ba) on all of M(n, C); kappa = -w^2/u^2."""
    if params.u is None:
        raise ConfigurationError("from_associative needs a real bracket coefficient u")
    w, u = params.w, params.u
    basis = matrix_unit_basis(alg.n)
    jordan = _tensor_from_product(basis, lambda a, b: w * (a @ b + b @ a))
    lie = _tensor_from_product(basis, lambda a, b: u * (a @ b - b @ a))
    labels = tuple(f"E{i}{j}" for i in range(alg.n) for j in range(alg.n))
    unit = np.zeros(alg.n * alg.n, dtype=complex)
    for i in range(alg.n):
        unit[i * alg.n + i] = 1.0 / (2.0 * w)
    return JordanLieStructure(basis, jordan, lie, params.kappa, labels, unit=unit)


def to_associative(jl: JordanLieStructure, params: ConversionParams):
    """Recover the associative product (1/2w) x . y + (1/2u) [x, y] on coordinates."""
    if params.u is None:
        raise ConfigurationError("to_associative needs a real bracket coefficient u")
    if abs(params.kappa - jl.kappa) > 1e-12:
        raise ConfigurationError(
            f"params imply kappa {params.kappa:g}, structure has {jl.kappa:g}"
        )
    cj, cl = 1.0 / (2.0 * params.w), 1.0 / (2.0 * params.u)

    def product(x, y):
        return cj * jl.jordan_apply(x, y) + cl * jl.lie_apply(x, y)

    return product


def from_star_algebra(alg: StarAlgebra, params: ConversionParams) -> JordanLieStructure:
    """Real structure on Herm(n): w(ab + ba) and iv(ab - ba); kappa = w^2/v^2 > 0."""
    if params.v is None:
        raise ConfigurationError("from_star_algebra needs a bracket coefficient v")
    if alg.signature != (alg.n, 0):
        raise ConfigurationError("hermitian realization expects the definite involution")
    w, v = params.w, params.v
    basis = hermitian_basis(alg.n)
    jordan = _tensor_from_product(basis, lambda a, b: w * (a @ b + b @ a))
    lie = _tensor_from_product(basis, lambda a, b: 1j * v * (a @ b - b @ a))
    herm_err = max(np.abs(jordan.imag).max(), np.abs(lie.imag).max())
    if herm_err > 1e-12:
        raise ConfigurationError("hermitian structure constants came out complex")
    unit = np.zeros(alg.n * alg.n, dtype=complex)
    unit[: alg.n] = 1.0 / (2.0 * w)
    return JordanLieStructure(basis, jordan.real.astype(complex), lie.real.astype(complex),
                              params.kappa, unit=unit)


class ComplexifiedStarAlgebra:
    """Associative *-algebra on V + iV rebuilt from a positive-kappa structure.

    Coordinates are complex vectors over the original real basis; ``star`` is
    coordinate conjugation, which is the matrix adjoint whenever the basis
    consists of hermitian matrices.
    """

    def __init__(self, jl: JordanLieStructure, params: ConversionParams):
        if jl.kappa <= 0:
            raise ConfigurationError("complexification needs kappa > 0")
        if params.v is None:
            raise ConfigurationError("complexification needs a bracket coefficient v")
        if abs(params.kappa - jl.kappa) > 1e-12:
            raise ConfigurationError("params/structure kappa mismatch")
        self.jl = jl
        self._cj = 1.0 / (2.0 * params.w)
        self._cl = 1.0 / (2j * params.v)

    def product(self, x, y) -> np.ndarray:
        return self._cj * self.jl.jordan_apply(x, y) + self._cl * self.jl.lie_apply(x, y)

    @staticmethod
    def star(x) -> np.ndarray:
        return np.conj(x)


def complexify_to_star(jl: JordanLieStructure, params: ConversionParams) -> ComplexifiedStarAlgebra:
    return ComplexifiedStarAlgebra(jl, params)


# ---------------------------------------------------------------------------
# axiom checking

@dataclass
class AxiomReport:
    residuals: dict[str, float]
    max_residual: float
    passed: bool
    tol: float
    trials: int
    seed: int

    def __str__(self):
        rows = ", ".join(f"{k}={v:.3e}" for k, v in self.residuals.items())
        return f"AxiomReport(passed={self.passed}, {rows})"


def check_axioms(jl: JordanLieStructure, trials: int, seed: int, tol: float = 1e-9) -> AxiomReport:
    """Residuals of the four defining identities plus the Jordan identity.

    Checked over seeded random triples: alternation and Jacobi for the
    bracket, symmetry of the dot product, the bracket acting as derivations,
    associator proportionality with factor kappa, and (x.y).x^2 = x.(y.x^2).
    When the structure carries a distinguished unit, e . a = a and [e, a] = 0
    are included as well.
    """
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    rng = rng_for(seed, 202)
    d = jl.dim

    def draw():
        vec = rng.standard_normal((trials, d))
        if np.iscomplexobj(jl.jordan) and np.abs(jl.jordan.imag).max() > 1e-14:
            vec = vec + 1j * rng.standard_normal((trials, d))
        norms = np.linalg.norm(vec, axis=1, keepdims=True)
        return vec / np.maximum(norms, 1e-12)

    x, y, z = draw(), draw(), draw()
    jo, li = jl.jordan_apply, jl.lie_apply

    def maxnorm(arr):
        return float(np.max(np.linalg.norm(arr, axis=-1)))

    residuals = {
        "alternation": maxnorm(li(x, x)),
        "jacobi": maxnorm(li(li(x, y), z) + li(li(y, z), x) + li(li(z, x), y)),
        "symmetry": maxnorm(jo(x, y) - jo(y, x)),
        "leibniz": maxnorm(li(x, jo(y, z)) - jo(li(x, y), z) - jo(y, li(x, z))),
        "associator": maxnorm(jo(jo(x, y), z) - jo(x, jo(y, z)) - jl.kappa * li(li(x, z), y)),
    }
    x2 = jo(x, x)
    residuals["jordan_identity"] = maxnorm(jo(jo(x, y), x2) - jo(x, jo(y, x2)))
    if jl.unit is not None:
        e = np.asarray(jl.unit)
        residuals["unit_jordan"] = maxnorm(jo(e[None, :] * np.ones((trials, 1)), x) - x)
        residuals["unit_central"] = maxnorm(li(e[None, :] * np.ones((trials, 1)), x))
    worst = max(residuals.values())
    return AxiomReport(residuals, worst, worst <= tol, tol, trials, seed)


# ---------------------------------------------------------------------------
# tensor products and triple systems

def tensor_product(a: JordanLieStructure, b: JordanLieStructure) -> JordanLieStructure:
    """Structure on the tensor space with the same coupling constant.

    (x@y).(x'@y') = (x.x')@(y.y') - kappa [x,x']@[y,y']
    [x@y, x'@y']  = (x.x')@[y,y'] + [x,x']@(y.y')
    """
    if a.kappa == 0 or abs(a.kappa - b.kappa) > 1e-12:
        raise ConfigurationError("tensor product needs equal nonzero kappa")
    k = a.kappa
    jordan = (
        np.einsum("ijk,pqr->ipjqkr", a.jordan, b.jordan)
        - k * np.einsum("ijk,pqr->ipjqkr", a.lie, b.lie)
    )
    lie = (
        np.einsum("ijk,pqr->ipjqkr", a.jordan, b.lie)
        + np.einsum("ijk,pqr->ipjqkr", a.lie, b.jordan)
    )
    d = a.dim * b.dim
    basis = None
    if a.basis is not None and b.basis is not None:
        basis = np.array([np.kron(ma, mb) for ma in a.basis for mb in b.basis])
    unit = None
    if a.unit is not None and b.unit is not None:
        unit = np.einsum("i,p->ip", a.unit, b.unit).reshape(d)
    return JordanLieStructure(
        basis=basis,
        jordan=jordan.reshape(d, d, d),
        lie=lie.reshape(d, d, d),
        kappa=k,
        unit=unit,
    )


def flip_map(a: JordanLieStructure, b: JordanLieStructure) -> np.ndarray:
    """Permutation matrix sending the (a, b) tensor basis to the (b, a) one."""
    da, db = a.dim, b.dim
    perm = np.zeros((da * db, da * db))
    for i in range(da):
        for j in range(db):
            perm[j * da + i, i * db + j] = 1.0
    return perm


def triple_systems(jl: JordanLieStructure, x, y, z):
    """Jordan triple product T, its skew part R, and the curvature residual.

    T(x,y,z) = (x.y).z + x.(y.z) - y.(x.z);  R(x,y,z) = T(y,x,z) - T(x,y,z).
    The residual measures R(x,y,z) + 2 kappa [[y,x],z], which vanishes for a
    genuine structure.
    """
    jo, li = jl.jordan_apply, jl.lie_apply

    def t(p, q, r):
        return jo(jo(p, q), r) + jo(p, jo(q, r)) - jo(q, jo(p, r))

    t_val = t(x, y, z)
    r_val = t(y, x, z) - t_val
    residual = float(np.max(np.linalg.norm(r_val + 2.0 * jl.kappa * li(li(y, x), z), axis=-1)))
    return t_val, r_val, residual


# ---------------------------------------------------------------------------
# JSON interchange for structure constants

def _split_complex(arr: np.ndarray):
    return {"re": np.real(arr).tolist(), "im": np.imag(arr).tolist()}


def _join_complex(blob) -> np.ndarray:
    return np.asarray(blob["re"], dtype=float) + 1j * np.asarray(blob["im"], dtype=float)


def structure_to_json(jl: JordanLieStructure) -> str:
    payload = {
        "dim": jl.dim,
        "kappa": jl.kappa,
        "basis_labels": list(jl.basis_labels) if jl.basis_labels else None,
        "jordan": _split_complex(jl.jordan),
        "lie": _split_complex(jl.lie),
    }
    return json.dumps(payload, sort_keys=True)


def structure_from_json(text: str) -> JordanLieStructure:
    blob = json.loads(text)
    labels = tuple(blob["basis_labels"]) if blob.get("basis_labels") else None
    return JordanLieStructure(
        basis=None,
        jordan=_join_complex(blob["jordan"]),
        lie=_join_complex(blob["lie"]),
        kappa=float(blob["kappa"]),
        basis_labels=labels,
    )
