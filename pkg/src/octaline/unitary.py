"""Unitary groups, the torsor inside the hermitian real form, and Cayley maps.

Two charts of the same torsor appear here.  Points fixed by the principal
real form (conjugation, in chart terms) have hermitian chart values; the
order-three transform c(z) = (z - i)(z + i)^{-1} carries them to unitary
matrices, which serve as torsor coordinates.  ``torsor_point`` /
``torsor_coordinate`` convert both ways without leaving the frame picture,
so points over the chart's infinity are handled uniformly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import StarAlgebra, adjoint
from .errors import (
    CayleyPoleError,
    ConfigurationError,
    NotTransversalError,
    OctalineError,
)
from .octahedron import PoleSet, standard_poles
from .projline import (
    MoebiusMap,
    Point,
    apply_moebius,
    dilation,
    point_equals,
    point_from_chart,
    point_from_pair,
    real_form_tau,
    scalar_mobius,
    transversal,
    transversality_margin,
)
from .sampling import (
    cauchy_scaled_hermitian,
    random_hermitian,
    random_invertible,
    random_unitary,
    rng_for,
)


@dataclass(frozen=True)
class UnitaryGroupSpec:
    """Unitary group of an invertible form M: A* M A = M = A M A*."""

    alg: StarAlgebra
    form: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        form = np.eye(self.alg.n) if self.form is None else np.asarray(self.form, dtype=complex)
        if form.shape != (self.alg.n, self.alg.n):
            raise ConfigurationError("form must be n x n")
        sv = np.linalg.svd(form, compute_uv=False)
        if sv[-1] <= 1e-12 * sv[0]:
            raise ConfigurationError("form must be invertible")
        form.flags.writeable = False
        object.__setattr__(self, "form", form)


def is_unitary(a, spec: UnitaryGroupSpec) -> bool:
    """Both defining identities, to the algebra tolerance."""
    a = np.asarray(a, dtype=complex)
    m = spec.form
    tol = spec.alg.tol
    astar = adjoint(a, spec.alg)
    scale = max(np.linalg.norm(m), 1e-300)
    left = np.linalg.norm(astar @ m @ a - m) <= tol * scale * max(np.linalg.norm(a) ** 2, 1.0)
    right = np.linalg.norm(a @ m @ astar - m) <= tol * scale * max(np.linalg.norm(a) ** 2, 1.0)
    return bool(left and right)


def unitarity_defect(u) -> float:
    u = np.asarray(u, dtype=complex)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


# ---------------------------------------------------------------------------
# Cayley maps

def cayley(z, tol: float = 1e-9) -> np.ndarray:
    """(z - i)(z + i)^{-1}; maps hermitian matrices onto unitaries missing 1.

    For hermitian z the denominator is always invertible because
    (z + i)(z - i) = z*z + 1 is positive definite.
    """
    z = np.asarray(z, dtype=complex)
    if np.linalg.norm(z - z.conj().T) > max(np.linalg.norm(z), 1.0) * 1e-8:
        raise ConfigurationError("cayley expects a hermitian argument")
    eye = np.eye(z.shape[0])
    return (z - 1j * eye) @ np.linalg.inv(z + 1j * eye)


def inverse_cayley(u, tol: float = 1e-9) -> np.ndarray:
    """Hermitian z with cayley(z) = u; CayleyPoleError when 1 is in the spectrum."""
    u = np.asarray(u, dtype=complex)
    if unitarity_defect(u) > 1e-8 * max(np.linalg.norm(u), 1.0):
        raise ConfigurationError("inverse_cayley expects a unitary argument")
    eye = np.eye(u.shape[0])
    den = eye - u
    sv = np.linalg.svd(den, compute_uv=False)
    if sv[-1] <= tol * max(sv[0], 1.0):
        raise CayleyPoleError("1 is in the spectrum; the preimage lies at infinity")
    z = 1j * (eye + u) @ np.linalg.inv(den)
    return (z + z.conj().T) / 2


@lru_cache(maxsize=16)
def cayley_map(n: int) -> MoebiusMap:
    """The chart transform as a projective map (matrix (1, -i; 1, i))."""
    return scalar_mobius(1, -1j, 1, 1j, n)


def translation_map(u1: np.ndarray, u2: np.ndarray) -> MoebiusMap:
    """Two-sided torsor translation: in unitary coordinates k -> u1 k u2^{-1}.

    Realized as the diagonal pair conjugated through the Cayley transform;
    these maps commute with the Euclidean orthocomplement and with the
    central inversion, and they preserve the hermitian real form.
    """
    u1 = np.atleast_2d(np.asarray(u1, dtype=complex))
    u2 = np.atleast_2d(np.asarray(u2, dtype=complex))
    n = u1.shape[0]
    c = cayley_map(n).matrix
    diag = np.block([[u1, np.zeros((n, n))], [np.zeros((n, n)), u2]])
    return MoebiusMap(np.linalg.inv(c) @ diag @ c)


# ---------------------------------------------------------------------------
# the unitary setting

@dataclass(frozen=True)
class UnitarySetting:
    """Standard poles, the principal real form, and the reference origin."""

    poles: PoleSet
    tau: MoebiusMap
    origin: Point

    @property
    def n(self) -> int:
        return self.poles.n


@lru_cache(maxsize=8)
def standard_setting(n: int) -> UnitarySetting:
    poles = standard_poles(n)
    tau = real_form_tau(poles.N, poles.S, poles.O)
    setting = UnitarySetting(poles, tau, poles.O)
    if not point_equals(apply_moebius(tau, poles.N), poles.S):
        raise OctalineError("principal real form does not swap the vertical poles")
    if not point_equals(apply_moebius(tau, poles.S), poles.N):
        raise OctalineError("principal real form does not swap the vertical poles")
    return setting


def in_real_form(p: Point, setting: UnitarySetting) -> bool:
    return point_equals(apply_moebius(setting.tau, p), p)


def in_torsor(p: Point, setting: UnitarySetting) -> bool:
    """Fixed by the real form and transversal to both vertical poles.

    The two transversality conditions are equivalent for real-form points;
    both are computed and their agreement is asserted rather than assumed.
    """
    if not in_real_form(p, setting):
        return False
    t_north = transversal(p, setting.poles.N)
    t_south = transversal(p, setting.poles.S)
    if t_north != t_south:
        raise OctalineError("vertical transversality conditions disagree on a real point")
    return t_north


def antipode(p: Point, setting: UnitarySetting) -> Point:
    """Central inversion partner; in chart terms z -> -z^{-1}."""
    return apply_moebius(dilation(-1, setting.poles.N, setting.poles.S), p)


def embed_unitary(x, setting: UnitarySetting) -> Point:
    """Graph imbedding x -> [(1, x)] of a unitary matrix.

    The image is isotropic for the hyperbolic form (hence fixed by the
    unitary real form), carries the group unit to the front pole, and is
    transversal to the vertical poles except when i or -i is an eigenvalue
    of x.
    """
    x = np.asarray(x, dtype=complex)
    spec = UnitaryGroupSpec(StarAlgebra(setting.n))
    if not is_unitary(x, spec):
        raise ConfigurationError("embed_unitary expects a unitary matrix")
    return point_from_chart(x)


# ---------------------------------------------------------------------------
# torsor coordinates

def torsor_point(u) -> Point:
    """Real-form point with unitary coordinate u; total, covers the chart's infinity."""
    u = np.atleast_2d(np.asarray(u, dtype=complex))
    if unitarity_defect(u) > 1e-8 * max(np.linalg.norm(u), 1.0):
        raise ConfigurationError("torsor_point expects a unitary matrix")
    eye = np.eye(u.shape[0])
    return point_from_pair(eye - u, 1j * (eye + u))


def torsor_coordinate(p: Point) -> np.ndarray:
    """Unitary coordinate of a torsor point: -(r + i s)(r - i s)^{-1}."""
    r, s = p.r, p.s
    den = r - 1j * s
    sv = np.linalg.svd(den, compute_uv=False)
    if sv[-1] <= 1e-10 * max(sv[0], 1.0):
        raise NotTransversalError("point is not transversal to the south pole", pair=("p", "S"))
    return -(r + 1j * s) @ np.linalg.inv(den)


def cell_point(base_coordinate: np.ndarray, value: np.ndarray) -> Point:
    """Point of the affine cell at the torsor point with the given coordinate.

    value is the hermitian cell coordinate; value 0 returns the base point.
    """
    n = base_coordinate.shape[0]
    t = translation_map(-base_coordinate, np.eye(n))
    return apply_moebius(t, point_from_chart(value))


def co_cell_point(base_coordinate: np.ndarray, value: np.ndarray) -> Point:
    """Point of the dual cell (origin at the antipode of the base point)."""
    n = base_coordinate.shape[0]
    t = translation_map(-base_coordinate, np.eye(n))
    return apply_moebius(t, point_from_pair(np.atleast_2d(value), np.eye(n)))


def cell_coordinate(base_coordinate: np.ndarray, p: Point) -> np.ndarray:
    """Inverse of cell_point at the same base."""
    from .projline import chart_value

    n = base_coordinate.shape[0]
    t_inv = translation_map(-base_coordinate, np.eye(n)).inverse()
    return chart_value(apply_moebius(t_inv, p))


def co_cell_coordinate(base_coordinate: np.ndarray, p: Point) -> np.ndarray:
    from .projline import co_chart_value

    n = base_coordinate.shape[0]
    t_inv = translation_map(-base_coordinate, np.eye(n)).inverse()
    return co_chart_value(apply_moebius(t_inv, p))


# ---------------------------------------------------------------------------
# verification sweeps

@dataclass
class AffineCompletenessReport:
    trials: int
    seed: int
    violations: int
    min_margin_north: float
    min_margin_south: float
    heavy_tail_trials: int


def affine_completeness_check(setting: UnitarySetting, trials: int, seed: int,
                              heavy_tail_every: int = 4) -> AffineCompletenessReport:
    """Affine cells of torsor points stay inside the torsor.

    Draws a torsor point through a random unitary coordinate and a random
    hermitian cell coordinate (heavy-tailed every few trials) and verifies
    the resulting real-form point is transversal to both vertical poles.
    Violations are counted, and the worst transversality margins recorded.
    """
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    rng = rng_for(seed, 404)
    n = setting.n
    violations = 0
    min_n, min_s = np.inf, np.inf
    heavy = 0
    for k in range(trials):
        u_a = random_unitary(n, rng)
        if heavy_tail_every and k % heavy_tail_every == heavy_tail_every - 1:
            x = cauchy_scaled_hermitian(n, rng)
            heavy += 1
        else:
            x = random_hermitian(n, rng)
        y = cell_point(u_a, x)
        m_n = transversality_margin(y, setting.poles.N)
        m_s = transversality_margin(y, setting.poles.S)
        min_n, min_s = min(min_n, m_n), min(min_s, m_s)
        if not (transversal(y, setting.poles.N) and transversal(y, setting.poles.S)):
            violations += 1
    return AffineCompletenessReport(trials, seed, violations, float(min_n), float(min_s), heavy)


def sample_real_form(setting: UnitarySetting, count: int, seed: int,
                     include_nonchart: bool = False) -> list[Point]:
    """Spectral sampler of the hermitian real form: frames [cos(T) g; sin(T) g].

    T is a random hermitian angle matrix and g a random invertible scaling;
    with include_nonchart, every other sample pins an eigenvalue of T at
    pi/2, forcing a point over the standard chart's infinity.
    """
    if count < 1:
        raise ConfigurationError("count must be >= 1")
    rng = rng_for(seed, 505)
    n = setting.n
    points = []
    for k in range(count):
        theta = random_hermitian(n, rng)
        if include_nonchart and k % 2 == 1:
            lam, vec = np.linalg.eigh(theta)
            lam[rng.integers(0, n)] = np.pi / 2
            theta = vec @ np.diag(lam) @ vec.conj().T
        lam, vec = np.linalg.eigh(theta)
        cos_t = vec @ np.diag(np.cos(lam)) @ vec.conj().T
        sin_t = vec @ np.diag(np.sin(lam)) @ vec.conj().T
        g = random_invertible(n, rng)
        points.append(point_from_pair(cos_t @ g, sin_t @ g))
    return points


# ---------------------------------------------------------------------------
# observables and states as point data

@dataclass(frozen=True)
class Obstate:
    """Triple (h, w; p): observable part h, state part w, reference point p."""

    h: Point
    w: Point
    p: Point


def make_obstate(h: Point, w: Point, p: Point, setting: UnitarySetting) -> Obstate:
    """Validated triple; the two transversality constraints name their failure."""
    if not transversal(w, p):
        raise NotTransversalError("state part is not transversal to the reference point",
                                  pair=("w", "p"))
    inf_p = antipode(p, setting)
    if not transversal(h, inf_p):
        raise NotTransversalError("observable part is not transversal to the antipode",
                                  pair=("h", "antipode(p)"))
    return Obstate(h, w, p)


def obstate_margins(ob: Obstate, setting: UnitarySetting) -> dict[str, float]:
    return {
        "w_vs_p": transversality_margin(ob.w, ob.p),
        "h_vs_antipode": transversality_margin(ob.h, antipode(ob.p, setting)),
    }
