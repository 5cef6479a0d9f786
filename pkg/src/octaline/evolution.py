"""Unitary flows and the numerical equivalence of the three evolution pictures.

Torsor points are handled in unitary-matrix coordinates; tangent data are
hermitian matrices.  A tangent value h at a point with coordinate u means
the curve t -> u exp(i t h / hbar), so flows are right multiplications and
left-invariant fields have constant trivialized value.  Expectation values
are computed three ways: by conjugating the state, by conjugating the
observable with the opposite sign, and geometrically through transported
cell points paired by the graph-map trace.  All three agree; the geometric
route goes through frames, charts, and the projective pairing, so agreement
is a genuine cross-check rather than an algebraic identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, IntegrationError
from .projline import Point, apply_moebius, cross_ratio, point_equals
from .unitary import (
    UnitarySetting,
    antipode,
    cell_coordinate,
    cell_point,
    co_cell_point,
    standard_setting,
    torsor_coordinate,
    torsor_point,
    translation_map,
    unitarity_defect,
)

_HERM_TOL = 1e-8


def _check_hermitian(x, what: str) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    if np.linalg.norm(x - x.conj().T) > _HERM_TOL * max(np.linalg.norm(x), 1.0):
        raise ConfigurationError(f"{what} must be hermitian")
    return x


def quantum_identify(v, hbar: float):
    """Identification of a chart displacement with a tangent value: multiply by hbar."""
    if hbar == 0:
        raise ConfigurationError("hbar must be nonzero")
    return hbar * np.asarray(v)


@dataclass(frozen=True)
class TangentVector:
    """Hermitian cell coordinate at a torsor point (cell centered at the foot)."""

    foot: Point
    value: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "value", _check_hermitian(self.value, "tangent value"))


@dataclass(frozen=True)
class CotangentVector:
    """Hermitian coordinate in the dual cell (origin at the antipode of the foot)."""

    foot: Point
    value: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "value", _check_hermitian(self.value, "cotangent value"))


@dataclass(frozen=True)
class LeftInvariantField:
    """Field whose trivialized value is one hermitian generator everywhere."""

    generator: np.ndarray
    hbar: float = 1.0
    base_setting: UnitarySetting | None = None

    def __post_init__(self):
        object.__setattr__(self, "generator", _check_hermitian(self.generator, "generator"))

    def evaluate(self, at: Point | np.ndarray) -> TangentVector:
        foot = at if isinstance(at, Point) else torsor_point(at)
        return TangentVector(foot, self.generator, self.hbar)


def left_invariant_field(v: TangentVector, setting: UnitarySetting | None = None) -> LeftInvariantField:
    """Extend a tangent vector to the field generated by right translations."""
    return LeftInvariantField(v.value, v.hbar, setting or standard_setting(v.foot.n))


def field_bracket(a: LeftInvariantField, b: LeftInvariantField) -> LeftInvariantField:
    """Vector-field bracket: generator i [A, B] / hbar (sign pinned by a test)."""
    if a.hbar != b.hbar:
        raise ConfigurationError("fields carry different hbar scalings")
    comm = a.generator @ b.generator - b.generator @ a.generator
    return LeftInvariantField(1j * comm / a.hbar, a.hbar, a.base_setting)


# ---------------------------------------------------------------------------
# pairing through the projective cross ratio

def pairing(v: TangentVector, phi: CotangentVector, setting: UnitarySetting | None = None) -> complex:
    """trace of the graph-map product of the two cell points at the shared foot.

    Reduces to trace(v w) in the standard cells at the chart origin, and is
    invariant under simultaneous two-sided translation of all the data.
    """
    if not point_equals(v.foot, phi.foot):
        raise ConfigurationError("tangent and cotangent feet differ")
    setting = setting or standard_setting(v.foot.n)
    u_p = torsor_coordinate(v.foot)
    v_hat = cell_point(u_p, v.value)
    phi_hat = co_cell_point(u_p, phi.value)
    return pairing_points(v.foot, v_hat, phi_hat, setting)


def pairing_points(p: Point, v_hat: Point, phi_hat: Point,
                   setting: UnitarySetting | None = None) -> complex:
    """Pairing evaluated directly on cell points; usable after translations."""
    setting = setting or standard_setting(p.n)
    return complex(np.trace(cross_ratio(p, antipode(p, setting), v_hat, phi_hat)))


# ---------------------------------------------------------------------------
# flows

def _evolution_factors(generator: np.ndarray, times, hbar: float):
    """exp(i t generator / hbar) over the grid, by one hermitian eigendecomposition."""
    lam, vec = np.linalg.eigh(generator)
    vech = vec.conj().T
    for t in np.asarray(times, dtype=float):
        yield vec @ np.diag(np.exp(1j * t * lam / hbar)) @ vech


@dataclass
class FlowResult:
    times: np.ndarray
    points: list[np.ndarray]
    method: str
    expectations: list[complex] | None = None
    max_unitarity_error: float = 0.0

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)


def flow_closed_form(generator, x0, t_grid, hbar: float = 1.0,
                     observable: np.ndarray | None = None) -> FlowResult:
    """x(t) = x0 exp(i t generator / hbar); exact one-parameter flow.

    With an observable supplied, expectations collect trace(observable x(t))
    per grid point; the picture report is the place for evolved pairings.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=complex))
    generator = _check_hermitian(generator, "flow generator")
    if hbar == 0:
        raise ConfigurationError("hbar must be nonzero")
    points, expectations = [], [] if observable is not None else None
    worst = 0.0
    for u in _evolution_factors(generator, t_grid, hbar):
        x = x0 @ u
        points.append(x)
        worst = max(worst, unitarity_defect(x))
        if expectations is not None:
            expectations.append(complex(np.trace(observable @ x)))
    return FlowResult(np.asarray(t_grid, dtype=float), points, "closed-form",
                      expectations, worst)


def flow_rk4(generator, x0, t_grid, step: float = 1e-2, hbar: float = 1.0,
             drift_limit: float = 1e-3) -> FlowResult:
    """Classical fourth-order integration of x' = x (i generator / hbar).

    Integrates between grid points with substeps of at most ``step`` and
    reprojects onto the unitary manifold (polar factor) after every substep.
    A unitarity drift beyond ``drift_limit`` before projection aborts.
    """
    if step <= 0:
        raise ConfigurationError("step must be positive")
    x = np.atleast_2d(np.asarray(x0, dtype=complex))
    generator = _check_hermitian(generator, "flow generator")
    a = 1j * generator / hbar

    def rhs(u):
        return u @ a

    def polar(u):
        w, _, vh = np.linalg.svd(u)
        return w @ vh

    times = np.asarray(t_grid, dtype=float)
    points = []
    worst = 0.0
    t_now = times[0]
    points.append(x.copy())
    for t_next in times[1:]:
        span = t_next - t_now
        substeps = max(1, int(np.ceil(abs(span) / step)))
        h = span / substeps
        for _ in range(substeps):
            k1 = rhs(x)
            k2 = rhs(x + 0.5 * h * k1)
            k3 = rhs(x + 0.5 * h * k2)
            k4 = rhs(x + h * k3)
            x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            drift = unitarity_defect(x)
            if drift > drift_limit:
                raise IntegrationError(f"unitarity drift {drift:.2e} exceeds {drift_limit:g}")
            worst = max(worst, drift)
            x = polar(x)
        t_now = t_next
        points.append(x.copy())
    return FlowResult(times, points, "rk4", None, worst)


def schrodinger_reference(w, h, t: float, hbar: float = 1.0) -> np.ndarray:
    """Conjugated density matrix exp(-i t h / hbar) w exp(+i t h / hbar)."""
    w = _check_hermitian(w, "density matrix")
    h = _check_hermitian(h, "hamiltonian")
    eig = np.linalg.eigvalsh(w)
    if eig[0] < -1e-8 or abs(np.trace(w).real - 1.0) > 1e-8:
        raise ConfigurationError("density matrix must be positive semidefinite with unit trace")
    lam, vec = np.linalg.eigh(h)
    u = vec @ np.diag(np.exp(-1j * t * lam / hbar)) @ vec.conj().T
    return u @ w @ u.conj().T


# ---------------------------------------------------------------------------
# the three pictures

@dataclass
class PictureReport:
    times: np.ndarray
    schrodinger: np.ndarray
    heisenberg: np.ndarray
    geometric: np.ndarray
    max_dev_s_h: float = field(init=False)
    max_dev_s_g: float = field(init=False)
    max_dev_h_g: float = field(init=False)

    def __post_init__(self):
        self.max_dev_s_h = float(np.max(np.abs(self.schrodinger - self.heisenberg)))
        self.max_dev_s_g = float(np.max(np.abs(self.schrodinger - self.geometric)))
        self.max_dev_h_g = float(np.max(np.abs(self.heisenberg - self.geometric)))


def picture_equivalence_check(generator, v_value, phi_value, p, t_grid,
                              hbar: float = 1.0,
                              setting: UnitarySetting | None = None) -> PictureReport:
    """Expectation values along the flow, computed three independent ways.

    One column evolves the state side by conjugation, one evolves the
    observable side with the opposite sign, and one transports the cell
    points geometrically (left translation for tangents, right translation
    for cotangents) to the flow point and evaluates the projective pairing
    there.
    """
    generator = _check_hermitian(generator, "flow generator")
    v_value = _check_hermitian(v_value, "tangent value")
    phi_value = _check_hermitian(phi_value, "cotangent value")
    if isinstance(p, Point):
        u_p = torsor_coordinate(p)
    else:
        u_p = np.atleast_2d(np.asarray(p, dtype=complex))
    n = u_p.shape[0]
    setting = setting or standard_setting(n)
    eye = np.eye(n)

    v_hat0 = cell_point(u_p, v_value)
    phi_hat0 = co_cell_point(u_p, phi_value)

    times = np.asarray(t_grid, dtype=float)
    vals_s = np.empty(len(times), dtype=complex)
    vals_h = np.empty(len(times), dtype=complex)
    vals_g = np.empty(len(times), dtype=complex)
    for k, r in enumerate(_evolution_factors(generator, times, hbar)):
        rh = r.conj().T
        w_t = rh @ phi_value @ r
        vals_s[k] = np.trace(v_value @ w_t)
        v_t = r @ v_value @ rh
        vals_h[k] = np.trace(v_t @ phi_value)

        u_q = u_p @ r
        q_point = torsor_point(u_q)
        move_left = translation_map(u_q @ u_p.conj().T, eye)
        move_right = translation_map(eye, rh)
        v_hat_t = apply_moebius(move_left, v_hat0)
        phi_hat_t = apply_moebius(move_right, phi_hat0)
        vals_g[k] = pairing_points(q_point, v_hat_t, phi_hat_t, setting)
    return PictureReport(times, vals_s, vals_h, vals_g)


def transported_pair_values(generator, v_value, phi_value, u_p, t: float,
                            hbar: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Cell coordinates of the transported pair at the flow point.

    Returns (v_t, w_t) read back through the charts; v_t equals v (left
    transport is trivial in trivialized coordinates) and w_t equals the
    conjugated cotangent value.
    """
    lam, vec = np.linalg.eigh(_check_hermitian(generator, "flow generator"))
    r = vec @ np.diag(np.exp(1j * t * lam / hbar)) @ vec.conj().T
    n = u_p.shape[0]
    eye = np.eye(n)
    u_q = u_p @ r
    v_hat_t = apply_moebius(translation_map(u_q @ u_p.conj().T, eye), cell_point(u_p, v_value))
    phi_hat_t = apply_moebius(translation_map(eye, r.conj().T), co_cell_point(u_p, phi_value))
    from .unitary import co_cell_coordinate

    return cell_coordinate(u_q, v_hat_t), co_cell_coordinate(u_q, phi_hat_t)
