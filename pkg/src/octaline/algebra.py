"""Finite-dimensional matrix *-algebras with configurable involutions.

The algebra is M(n, C) with the involution a* = I_{p,q} conj(a)^T I_{p,q},
where I_{p,q} = diag(+1 x p, -1 x q).  Signature (n, 0) gives the usual
conjugate transpose; mixed signatures give the indefinite involutions whose
positivity failure the checks below exhibit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError, SingularMatrixError
from .sampling import ginibre, random_positive_definite, rng_for

DEFAULT_TOL = 1e-9


def _as_element(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x.view(float))):
        raise ValueError("matrix has non-finite entries")
    return x


@dataclass(frozen=True)
class StarAlgebra:
    """M(n, C) with the involution determined by the signature (p, q), p + q = n."""

    n: int
    signature: tuple[int, int] = None  # type: ignore[assignment]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError("matrix size must be >= 1")
        sig = self.signature if self.signature is not None else (self.n, 0)
        p, q = sig
        if p < 0 or q < 0 or p + q != self.n:
            raise ConfigurationError(f"signature {sig} incompatible with n={self.n}")
        object.__setattr__(self, "signature", (int(p), int(q)))

    @property
    def signature_matrix(self) -> np.ndarray:
        p, q = self.signature
        return np.diag(np.concatenate([np.ones(p), -np.ones(q)]))

    def is_definite(self) -> bool:
        p, q = self.signature
        return p == 0 or q == 0


def adjoint(x, alg: StarAlgebra) -> np.ndarray:
    """Involution a* = I_{p,q} conj(a)^T I_{p,q}."""
    x = _as_element(x, alg.n)
    ipq = alg.signature_matrix
    return ipq @ x.conj().T @ ipq


def invert(x, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Inverse, guarded by the singular-value ratio test.

    Raises SingularMatrixError when the smallest singular value drops below
    tol times the largest; this is the transversality discriminator used by
    the projective-line layer.
    """
    x = np.asarray(x, dtype=complex)
    sv = np.linalg.svd(x, compute_uv=False)
    if sv[-1] <= tol * sv[0] or sv[0] == 0.0:
        raise SingularMatrixError(
            f"matrix is singular at relative tolerance {tol:g} (sv ratio {sv[-1] / max(sv[0], 1e-300):.3e})"
        )
    return np.linalg.inv(x)


def is_invertible(x, tol: float = DEFAULT_TOL) -> bool:
    sv = np.linalg.svd(np.asarray(x, dtype=complex), compute_uv=False)
    return bool(sv[0] > 0 and sv[-1] > tol * sv[0])


def is_hermitian(x, alg: StarAlgebra) -> bool:
    """True iff x equals its involution, relative to alg.tol (zero counts)."""
    x = _as_element(x, alg.n)
    scale = np.linalg.norm(x)
    if scale == 0.0:
        return True
    return bool(np.linalg.norm(x - adjoint(x, alg)) <= alg.tol * scale)


def is_positive(x, alg: StarAlgebra) -> bool:
    """Cone membership test: x hermitian and I_{p,q} x positive definite.

    For signature (n, 0) this is the ordinary open cone of positive definite
    hermitian matrices.  Positivity is decided spectrally: the smallest
    eigenvalue must exceed tol times the spectral radius.
    """
    x = _as_element(x, alg.n)
    if not is_hermitian(x, alg):
        return False
    h = alg.signature_matrix @ x
    h = (h + h.conj().T) / 2
    eig = np.linalg.eigvalsh(h)
    radius = max(np.max(np.abs(eig)), 1e-300)
    return bool(eig[0] > alg.tol * radius)


def random_hermitian_element(alg: StarAlgebra, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of Herm(alg): I_{p,q} times an ordinary hermitian matrix."""
    g = ginibre(alg.n, rng, scale)
    return alg.signature_matrix @ ((g + g.conj().T) / 2)


def random_cone_element(alg: StarAlgebra, rng: np.random.Generator) -> np.ndarray:
    """Random element of the candidate positive cone (passes is_positive)."""
    return alg.signature_matrix @ random_positive_definite(alg.n, rng)


@dataclass
class PositivityReport:
    """Outcome of the positivity sweep; failures carry explicit witnesses."""

    is_p_star: bool
    trials: int
    seed: int
    conjugators: str
    witnesses: list = field(default_factory=list)

    def first_witness(self):
        return self.witnesses[0] if self.witnesses else None


def check_p_star(alg: StarAlgebra, trials: int, seed: int, conjugators: str = "hermitian") -> PositivityReport:
    """Sample-based test of the two positivity clauses of an ordered *-algebra.

    Clause "cone-stability": for invertible hermitian a and cone element b,
    a b a stays in the cone.  Clause "unit-shift": for arbitrary hermitian a
    and cone element b, 1 + a b a lies in the cone.  With ``conjugators="all"``
    the outer element ranges over all invertible algebra elements and the
    conjugation is a* b a.  Failures are recorded as witnesses, not raised.

    Conjugators are resampled until their condition number stays below 1e2;
    beyond that the relative spectral cone test can misread a genuinely
    positive congruence, while indefinite involutions fail at order one.
    """
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    if conjugators not in ("hermitian", "all"):
        raise ConfigurationError(f"unknown conjugator range {conjugators!r}")
    rng = rng_for(seed, 101)
    one = np.eye(alg.n)
    witnesses = []
    for trial in range(trials):
        b = random_cone_element(alg, rng)
        if conjugators == "hermitian":
            a = random_hermitian_element(alg, rng)
            while not is_invertible(a, 1e-2):
                a = random_hermitian_element(alg, rng)
            conj_b = a @ b @ a
        else:
            a = ginibre(alg.n, rng)
            while not is_invertible(a, 1e-2):
                a = ginibre(alg.n, rng)
            conj_b = adjoint(a, alg) @ b @ a
        if not is_positive(conj_b, alg):
            witnesses.append({"clause": "cone-stability", "trial": trial, "a": a, "b": b})
        a2 = random_hermitian_element(alg, rng)
        shifted = one + a2 @ b @ a2
        if not is_positive(shifted, alg):
            witnesses.append({"clause": "unit-shift", "trial": trial, "a": a2, "b": b})
    return PositivityReport(
        is_p_star=not witnesses,
        trials=trials,
        seed=seed,
        conjugators=conjugators,
        witnesses=witnesses,
    )


@dataclass(frozen=True)
class RingExtensionElement:
    """Element x_r + j x_j of the quadratic extension with j^2 = -kappa."""

    real_part: np.ndarray
    j_part: np.ndarray
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "real_part", np.asarray(self.real_part))
        object.__setattr__(self, "j_part", np.asarray(self.j_part))
        if self.real_part.shape != self.j_part.shape:
            raise DimensionError("real and j components must have equal shape")


def ring_extension_product(a: RingExtensionElement, b: RingExtensionElement, jl) -> RingExtensionElement:
    """Associative product on V + jV induced by a Jordan-Lie structure.

    The product is x y = x . y + j [x, y] with both bilinear maps extended
    over the extension ring; j^2 = -kappa makes the eight-term expansion
    associative exactly when the Jordan-Lie axioms hold.
    """
    if a.kappa != b.kappa or abs(a.kappa - jl.kappa) > 1e-12:
        raise ConfigurationError("kappa mismatch between elements and structure")
    k = jl.kappa
    jo, li = jl.jordan_apply, jl.lie_apply
    xr, xj, yr, yj = a.real_part, a.j_part, b.real_part, b.j_part
    real = jo(xr, yr) - k * jo(xj, yj) - k * (li(xr, yj) + li(xj, yr))
    jpart = jo(xr, yj) + jo(xj, yr) + li(xr, yr) - k * li(xj, yj)
    return RingExtensionElement(real, jpart, a.kappa)
