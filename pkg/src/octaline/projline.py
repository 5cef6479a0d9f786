"""The projective line over a matrix *-algebra.

Points are right submodules of C^(2n) of rank n, stored as orthonormal
2n x n frames (QR-canonicalized).  A point with frame [r; s] and invertible
r has affine chart value z = s r^{-1}; the standard imbedding is
z -> [(1, z)].

Fraction-linear maps are stored in the convention in which the block matrix
(a b; c d) acts on chart values as z -> (a z + b)(c z + d)^{-1}.  On frames
this is left multiplication by the block anti-transpose (d c; b a); a unit
test pins the convention on all six poles.  Antiholomorphic maps are stored
as (matrix, flag) and mean "Euclidean orthocomplement first, then the
fraction-linear map", which reproduces the usual conjugate-chart formulas.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigurationError,
    DimensionError,
    NotInChartError,
    NotTransversalError,
    RankError,
)

PROJECTIVE_TOL = 1e-8
RANK_TOL = 1e-10


class Point:
    """A point of the projective line, canonicalized to an orthonormal frame."""

    __slots__ = ("frame", "n")

    def __init__(self, frame):
        frame = np.asarray(frame, dtype=complex)
        if frame.ndim != 2 or frame.shape[0] != 2 * frame.shape[1]:
            raise DimensionError(f"frame must be 2n x n, got {frame.shape}")
        if not np.all(np.isfinite(frame.view(float))):
            raise ValueError("frame has non-finite entries")
        sv = np.linalg.svd(frame, compute_uv=False)
        if sv[0] == 0 or sv[-1] <= RANK_TOL * sv[0]:
            raise RankError("frame is rank deficient")
        q, _ = np.linalg.qr(frame)
        q.flags.writeable = False
        self.frame = q
        self.n = frame.shape[1]

    @property
    def r(self) -> np.ndarray:
        return self.frame[: self.n]

    @property
    def s(self) -> np.ndarray:
        return self.frame[self.n :]

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    def equals(self, other: "Point", tol: float = PROJECTIVE_TOL) -> bool:
        return point_equals(self, other, tol)

    def __repr__(self):
        return f"Point(n={self.n})"

    def to_json(self) -> str:
        return json.dumps(
            {
                "r": {"re": self.r.real.tolist(), "im": self.r.imag.tolist()},
                "s": {"re": self.s.real.tolist(), "im": self.s.imag.tolist()},
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "Point":
        blob = json.loads(text)
        r = np.asarray(blob["r"]["re"]) + 1j * np.asarray(blob["r"]["im"])
        s = np.asarray(blob["s"]["re"]) + 1j * np.asarray(blob["s"]["im"])
        return Point(np.vstack([r, s]))


def point_from_pair(r, s) -> Point:
    return Point(np.vstack([np.asarray(r, dtype=complex), np.asarray(s, dtype=complex)]))


def point_from_chart(z) -> Point:
    """Standard imbedding z -> [(1, z)]."""
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    return point_from_pair(np.eye(z.shape[0]), z)


def chart_value(p: Point, tol: float = RANK_TOL) -> np.ndarray:
    """Affine coordinate s r^{-1}; NotInChartError at the points over infinity."""
    sv = np.linalg.svd(p.r, compute_uv=False)
    if sv[0] == 0 or sv[-1] <= max(tol, 1e-12) * 1.0:
        raise NotInChartError("point lies at infinity of the standard chart")
    return p.s @ np.linalg.inv(p.r)


def co_chart_value(p: Point, tol: float = RANK_TOL) -> np.ndarray:
    """Coordinate r s^{-1} in the opposite chart (origin at [(0,1)])."""
    sv = np.linalg.svd(p.s, compute_uv=False)
    if sv[0] == 0 or sv[-1] <= max(tol, 1e-12) * 1.0:
        raise NotInChartError("point lies at infinity of the opposite chart")
    return p.r @ np.linalg.inv(p.s)


def point_equals(p: Point, q: Point, tol: float = PROJECTIVE_TOL) -> bool:
    """Projective equality: the column spaces coincide (projector distance)."""
    if p.n != q.n:
        raise DimensionError("points live over different matrix sizes")
    return bool(np.linalg.norm(p.projector() - q.projector(), 2) <= tol)


def transversality_margin(p: Point, q: Point) -> float:
    """Smallest singular value of the stacked frame, 0 at non-transversal pairs."""
    stacked = np.hstack([p.frame, q.frame])
    return float(np.linalg.svd(stacked, compute_uv=False)[-1])


def transversal(p: Point, q: Point, tol: float = 1e-9) -> bool:
    """True iff the two submodules span C^(2n) directly."""
    stacked = np.hstack([p.frame, q.frame])
    sv = np.linalg.svd(stacked, compute_uv=False)
    return bool(sv[-1] > tol * sv[0])


# ---------------------------------------------------------------------------
# fraction-linear maps

def _flip(m: np.ndarray) -> np.ndarray:
    """Block anti-transpose (a b; c d) -> (d c; b a)."""
    n = m.shape[0] // 2
    return np.block([[m[n:, n:], m[n:, :n]], [m[:n, n:], m[:n, :n]]])


def _twist(m: np.ndarray) -> np.ndarray:
    """Conjugated inverse; hops a map over the Euclidean orthocomplement."""
    return np.linalg.inv(m).conj().T


def euclid_complement_frame(frame: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the columns."""
    u, _, _ = np.linalg.svd(frame, full_matrices=True)
    n = frame.shape[1]
    return u[:, n:]


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """Projective transformation: 2n x 2n block matrix plus a conjugation flag.

    Holomorphic maps act on charts by z -> (a z + b)(c z + d)^{-1}.
    Antiholomorphic maps compose that action with the Euclidean
    orthocomplement (applied first).
    """

    matrix: np.ndarray
    antiholomorphic: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise DimensionError("matrix must be 2n x 2n")
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[0] == 0 or sv[-1] <= 1e-12 * sv[0]:
            raise ConfigurationError("projective matrix must be invertible")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def blocks(self):
        n = self.n
        m = self.matrix
        return m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:]

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other, as maps of the line."""
        inner = _twist(other.matrix) if self.antiholomorphic else other.matrix
        return MoebiusMap(self.matrix @ inner, self.antiholomorphic ^ other.antiholomorphic)

    def inverse(self) -> "MoebiusMap":
        inv = np.linalg.inv(self.matrix)
        if self.antiholomorphic:
            return MoebiusMap(_twist(inv), True)
        return MoebiusMap(inv, False)

    def to_json(self) -> str:
        a, b, c, d = self.blocks

        def enc(x):
            return {"re": x.real.tolist(), "im": x.imag.tolist()}

        return json.dumps(
            {"a": enc(a), "b": enc(b), "c": enc(c), "d": enc(d),
             "antiholomorphic": self.antiholomorphic},
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "MoebiusMap":
        blob = json.loads(text)

        def dec(k):
            return np.asarray(blob[k]["re"]) + 1j * np.asarray(blob[k]["im"])

        m = np.block([[dec("a"), dec("b")], [dec("c"), dec("d")]])
        return MoebiusMap(m, bool(blob["antiholomorphic"]))


def identity_map(n: int) -> MoebiusMap:
    return MoebiusMap(np.eye(2 * n))


def mobius_from_blocks(a, b, c, d, antiholomorphic: bool = False) -> MoebiusMap:
    blk = [np.atleast_2d(np.asarray(x, dtype=complex)) for x in (a, b, c, d)]
    return MoebiusMap(np.block([[blk[0], blk[1]], [blk[2], blk[3]]]), antiholomorphic)


def scalar_mobius(a, b, c, d, n: int, antiholomorphic: bool = False) -> MoebiusMap:
    """Scalar 2x2 coefficients inflated to n-level blocks."""
    eye = np.eye(n)
    return mobius_from_blocks(a * eye, b * eye, c * eye, d * eye, antiholomorphic)


def apply_moebius(m: MoebiusMap, p: Point) -> Point:
    """Image of a point; always a valid point since the matrix is invertible."""
    frame = p.frame
    if m.antiholomorphic:
        frame = euclid_complement_frame(frame)
    return Point(_flip(m.matrix) @ frame)


def maps_equal(m1: MoebiusMap, m2: MoebiusMap, probes, tol: float = PROJECTIVE_TOL) -> bool:
    """Projective equality of maps, decided by action on probe points."""
    if m1.antiholomorphic != m2.antiholomorphic:
        return False
    return all(point_equals(apply_moebius(m1, p), apply_moebius(m2, p), tol) for p in probes)


# ---------------------------------------------------------------------------
# forms and orthocomplements

FORM_NAMES = ("euclid", "J", "F", "I11")


@dataclass(frozen=True, eq=False)
class FormMatrix:
    """A nondegenerate sesquilinear form on C^(2n), <x, y> = x* M y."""

    name: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[0] == 0 or sv[-1] <= 1e-12 * sv[0]:
            raise ConfigurationError("form matrix is degenerate")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def form_matrix(name: str, n: int) -> FormMatrix:
    """The four named 2-level form matrices: euclid, J, F, I11."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    if name == "euclid":
        m = np.eye(2 * n)
    elif name == "J":
        m = np.block([[zero, eye], [-eye, zero]])
    elif name == "F":
        m = np.block([[zero, eye], [eye, zero]])
    elif name == "I11":
        m = np.block([[-eye, zero], [zero, eye]])
    else:
        raise ConfigurationError(f"unknown form {name!r}; expected one of {FORM_NAMES}")
    return FormMatrix(name, m)


def orthocomplement(p: Point, form: FormMatrix) -> Point:
    """The point spanning { y : x* M y = 0 for all frame columns x }."""
    a = form.matrix.conj().T @ p.frame  # complement of col(a)
    u, _, _ = np.linalg.svd(a, full_matrices=True)
    return Point(u[:, p.n :])


def orthocomplement_map(form: FormMatrix) -> MoebiusMap:
    """The same orthocomplement packaged as an antiholomorphic map."""
    return MoebiusMap(_twist(_flip(form.matrix.conj().T)), True)


def is_lagrangian(p: Point, form: FormMatrix, tol: float = 1e-9) -> bool:
    """True iff the subspace is isotropic: frame* M frame = 0 to tolerance."""
    gram = p.frame.conj().T @ form.matrix @ p.frame
    return bool(np.linalg.norm(gram) <= tol * np.linalg.norm(form.matrix))


# ---------------------------------------------------------------------------
# maps determined by pairs and triples of points

def _pair_frame(a: Point, b: Point) -> np.ndarray:
    if not transversal(a, b):
        raise NotTransversalError("pair is not transversal", pair=("a", "b"))
    return np.hstack([a.frame, b.frame])


def dilation(lam: complex, a: Point, b: Point) -> MoebiusMap:
    """Scalar dilation fixing a and b.

    Acts as z -> lam z in the chart with origin a and infinity b, so the
    lam-scaling sits on the b-component of the splitting.  This convention
    is pinned by the pole tests: dilation(i, O, W) carries the front pole
    to the north pole.
    """
    if lam == 0:
        raise ConfigurationError("dilation factor must be nonzero")
    g = _pair_frame(a, b)
    n = a.n
    scale = np.diag(np.concatenate([np.ones(n), lam * np.ones(n)])).astype(complex)
    return MoebiusMap(_flip(g @ scale @ np.linalg.inv(g)))


def _adapted_pair_frame(a: Point, b: Point, c: Point) -> np.ndarray:
    """Frames of a and b rescaled so that c becomes the diagonal [fa + fb]."""
    for x, y, names in ((a, b, ("a", "b")), (a, c, ("a", "c")), (b, c, ("b", "c"))):
        if not transversal(x, y):
            raise NotTransversalError(f"pair {names} is not transversal", pair=names)
    g = np.hstack([a.frame, b.frame])
    comps = np.linalg.solve(g, c.frame)
    n = a.n
    p_blk, q_blk = comps[:n], comps[n:]
    return np.hstack([a.frame @ p_blk, b.frame @ q_blk])


def symmetry_J(a: Point, b: Point, c: Point) -> MoebiusMap:
    """Holomorphic involution fixing c and swapping a with b.

    In the decomposition where c is the diagonal it is (u, v) -> (v, u);
    equivalently the inversion at c of the group of common complements.
    """
    g = _adapted_pair_frame(a, b, c)
    n = a.n
    swap = np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    return MoebiusMap(_flip(g @ swap @ np.linalg.inv(g)))


def real_form_tau(a: Point, b: Point, c: Point) -> MoebiusMap:
    """Antiholomorphic involution fixing c and swapping a with b.

    Orthocomplement for the hyperbolic form u* u' - v* v' written in the
    frames adapted to the triple; its fixed set is a real form of the line.
    """
    g = _adapted_pair_frame(a, b, c)
    n = a.n
    g_inv = np.linalg.inv(g)
    hyperbolic = np.diag(np.concatenate([np.ones(n), -np.ones(n)])).astype(complex)
    m_form = g_inv.conj().T @ hyperbolic @ g_inv
    return MoebiusMap(_twist(_flip(m_form.conj().T)), True)


def cross_ratio(a: Point, b: Point, c: Point, d: Point) -> np.ndarray:
    """Composite graph map of (c, d) through the splitting by (a, b).

    c is read as the graph of a map a -> b and d as the graph of a map
    b -> a; the result is their composite, an endomorphism well defined up
    to conjugation, so its trace is invariant under applying one projective
    map to all four arguments.  In the standard splitting it is the chart
    product z_c * w_d with w_d the coordinate of d in the opposite chart.
    """
    g = _pair_frame(a, b)
    n = a.n
    comps_c = np.linalg.solve(g, c.frame)
    comps_d = np.linalg.solve(g, d.frame)
    pc, qc = comps_c[:n], comps_c[n:]
    pd, qd = comps_d[:n], comps_d[n:]
    # Only c transversal to b and d transversal to a are genuinely required;
    # c may even coincide with a (zero graph map).
    for blk, names in ((pc, ("c", "b")), (qd, ("d", "a"))):
        sv = np.linalg.svd(blk, compute_uv=False)
        if sv[0] == 0 or sv[-1] <= 1e-10 * max(sv[0], 1.0):
            raise NotTransversalError(f"point {names[0]} is not transversal to {names[1]}", pair=names)
    gamma = qc @ np.linalg.inv(pc)
    delta = pd @ np.linalg.inv(qd)
    return gamma @ delta
