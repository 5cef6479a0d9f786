"""The six poles, the 48-element symmetry group, and the printed-table audit.

The poles O, W, N, S, F, B sit at chart values 0, infinity, i, -i, 1, -1 and
form three opposite pairs.  Scalar dilations by i along the three axes,
together with the Euclidean orthocomplement, generate a group of 48
projective transformations (24 holomorphic), isomorphic to the full
octahedral group S4 x S2.

The module also carries a transcription of the conventional reference table
for these 48 maps (cycle label, matrix, chart formula per row).  Cycle labels
in that table are audited against the permutations actually realized by the
formulas rather than trusted; the audit emits MATCH, INVERSE-MATCH, or
MISMATCH per row and cross-references every mismatch to the row whose label
the formula does realize.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import GroupClosureError, OctalineError
from .projline import (
    MoebiusMap,
    Point,
    _flip,
    apply_moebius,
    dilation,
    euclid_complement_frame,
    form_matrix,
    identity_map,
    orthocomplement_map,
    point_equals,
    point_from_chart,
    point_from_pair,
    transversal,
)
from .sampling import rng_for

POLE_LABELS = "OWNSFB"
_OPPOSITE = (1, 0, 3, 2, 5, 4)
_PROBE_SEED = 71923


@dataclass(frozen=True)
class PoleSet:
    O: Point
    W: Point
    N: Point
    S: Point
    F: Point
    B: Point

    def as_list(self) -> list[Point]:
        return [self.O, self.W, self.N, self.S, self.F, self.B]

    @property
    def n(self) -> int:
        return self.O.n


def standard_poles(n: int) -> PoleSet:
    """Six pairwise transversal points with scalar chart values 0, inf, i, -i, 1, -1."""
    eye = np.eye(n)
    o = point_from_chart(np.zeros((n, n)))
    w = point_from_pair(np.zeros((n, n)), eye)
    f = point_from_chart(eye)
    rot = dilation(1j, o, w)
    nn = apply_moebius(rot, f)
    b = apply_moebius(rot, nn)
    s = apply_moebius(rot, b)
    poles = PoleSet(o, w, nn, s, f, b)
    for i, p in enumerate(poles.as_list()):
        for j, q in enumerate(poles.as_list()):
            if i < j and not transversal(p, q):
                raise OctalineError("standard poles failed pairwise transversality")
    return poles


def probe_points(poles: PoleSet, extra: int = 3) -> list[Point]:
    """The six poles plus seeded random points; enough to separate the 48 maps."""
    rng = rng_for(_PROBE_SEED)
    pts = list(poles.as_list())
    n = poles.n
    for _ in range(extra):
        g = rng.standard_normal((2 * n, n)) + 1j * rng.standard_normal((2 * n, n))
        pts.append(Point(g))
    return pts


# ---------------------------------------------------------------------------
# fast frame-level action (avoids Point canonicalization in hot loops)


@lru_cache(maxsize=8192)
def _flip_of(m: MoebiusMap) -> np.ndarray:
    return _flip(m.matrix)


def _act_frame(m: MoebiusMap, frame: np.ndarray) -> np.ndarray:
    if m.antiholomorphic:
        frame = euclid_complement_frame(frame)
    return _flip_of(m) @ frame


def _frame_projector(frame: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(frame)
    return q @ q.conj().T


def _image_projectors(m: MoebiusMap, frames: list[np.ndarray]) -> list[np.ndarray]:
    return [_frame_projector(_act_frame(m, f)) for f in frames]


def _projs_close(a: list[np.ndarray], b: list[np.ndarray], tol: float = 1e-8) -> bool:
    return all(np.linalg.norm(x - y, 2) <= tol for x, y in zip(a, b))


def _match_pole(proj: np.ndarray, pole_projs: list[np.ndarray]) -> int | None:
    for j, pp in enumerate(pole_projs):
        if np.linalg.norm(proj - pp, 2) <= 1e-8:
            return j
    return None


def _perm_from_projs(projs: list[np.ndarray], pole_projs: list[np.ndarray]) -> tuple[int, ...]:
    images = []
    for proj in projs[:6]:
        hit = _match_pole(proj, pole_projs)
        if hit is None:
            raise OctalineError("map does not permute the six poles")
        images.append(hit)
    if sorted(images) != list(range(6)):
        raise OctalineError("pole images do not form a permutation")
    return tuple(images)


# ---------------------------------------------------------------------------
# permutations of the pole labels

def derive_permutation(m: MoebiusMap, poles: PoleSet) -> tuple[int, ...]:
    """Permutation induced on the six pole labels; errors if an image is no pole."""
    frames = [p.frame for p in poles.as_list()]
    pole_projs = [_frame_projector(f) for f in frames]
    return _perm_from_projs(_image_projectors(m, frames), pole_projs)


def preserves_opposition(perm: tuple[int, ...]) -> bool:
    return all(perm[_OPPOSITE[i]] == _OPPOSITE[perm[i]] for i in range(6))


def compose_perm(g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
    """Permutation of 'g after h'."""
    return tuple(g[h[i]] for i in range(6))


def invert_perm(g: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * 6
    for i, j in enumerate(g):
        out[j] = i
    return tuple(out)


def perm_order(g: tuple[int, ...]) -> int:
    e = tuple(range(6))
    p, k = g, 1
    while p != e:
        p, k = compose_perm(g, p), k + 1
        if k > 48:
            raise OctalineError("runaway permutation order")
    return k


def cycle_string(perm: tuple[int, ...]) -> str:
    """Canonical disjoint-cycle notation over the pole letters; 'id' if trivial."""
    seen = [False] * 6
    cycles = []
    for start in range(6):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        cycles.append("(" + "".join(POLE_LABELS[k] for k in cyc) + ")")
    return "".join(cycles) if cycles else "id"


def parse_cycles(text: str) -> tuple[int, ...]:
    """Left-to-right cycle convention: (ABC) maps A to B, B to C, C to A."""
    perm = list(range(6))
    body = text.strip()
    if body in ("id", ""):
        return tuple(perm)
    if body.count("(") != body.count(")"):
        raise ValueError(f"unbalanced cycles in {text!r}")
    for chunk in body.replace(")", ")|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        letters = chunk.strip("()")
        idx = [POLE_LABELS.index(ch) for ch in letters]
        for a, b in zip(idx, idx[1:] + idx[:1]):
            perm[a] = b
    return tuple(perm)


# ---------------------------------------------------------------------------
# group generation

@dataclass
class OctElement:
    map: MoebiusMap
    perm: tuple[int, ...]
    holomorphic: bool
    order: int
    label: str

    def __repr__(self):
        return f"OctElement({self.label}, holo={self.holomorphic}, order={self.order})"


@dataclass
class OctGroup:
    elements: list[OctElement]
    cayley_table: np.ndarray
    pole_action: dict[int, tuple[int, ...]]
    poles: PoleSet
    probes: list[Point] = field(repr=False, default_factory=list)
    _probe_frames: list[np.ndarray] = field(repr=False, default_factory=list)
    _pole_projs: list[np.ndarray] = field(repr=False, default_factory=list)
    _element_projs: list[list[np.ndarray]] = field(repr=False, default_factory=list)

    def __len__(self):
        return len(self.elements)

    def identity_index(self) -> int:
        return next(i for i, e in enumerate(self.elements)
                    if e.perm == tuple(range(6)) and not e.map.antiholomorphic)

    def index_of(self, m: MoebiusMap) -> int:
        projs = _image_projectors(m, self._probe_frames)
        key = (_perm_from_projs(projs, self._pole_projs), m.antiholomorphic)
        for i, e in enumerate(self.elements):
            if (e.perm, e.map.antiholomorphic) == key and _projs_close(projs, self._element_projs[i]):
                return i
        raise OctalineError("map is not a group element")


def _same_map(m1: MoebiusMap, m2: MoebiusMap, probes: list[Point]) -> bool:
    if m1.antiholomorphic != m2.antiholomorphic:
        return False
    return all(point_equals(apply_moebius(m1, p), apply_moebius(m2, p)) for p in probes)


def standard_generators(poles: PoleSet) -> dict[str, MoebiusMap]:
    return {
        "i_{N,S}": dilation(1j, poles.N, poles.S),
        "i_{O,W}": dilation(1j, poles.O, poles.W),
        "i_{F,B}": dilation(1j, poles.F, poles.B),
        "zeta": orthocomplement_map(form_matrix("euclid", poles.n)),
    }


def generate_group(poles: PoleSet, generators: list[MoebiusMap] | None = None,
                   max_rounds: int = 10) -> OctGroup:
    """Breadth-first closure of the generators under composition.

    Deduplication is projective: two maps are identified when they agree on
    the six poles and three seeded probe points.  Closure in more than
    max_rounds rounds (the true group closes in four) raises, turning a
    convention bug into a loud failure.
    """
    if generators is None:
        generators = list(standard_generators(poles).values())
    probes = probe_points(poles)
    probe_frames = [p.frame for p in probes]
    pole_projs = [_frame_projector(f) for f in probe_frames[:6]]
    gens = [identity_map(poles.n)] + list(generators)

    found: list[MoebiusMap] = []
    found_projs: list[list[np.ndarray]] = []
    fingerprints: dict[tuple, list[int]] = {}

    def try_add(m: MoebiusMap) -> bool:
        projs = _image_projectors(m, probe_frames)
        key = (_perm_from_projs(projs, pole_projs), m.antiholomorphic)
        for idx in fingerprints.get(key, []):
            if _projs_close(projs, found_projs[idx]):
                return False
        fingerprints.setdefault(key, []).append(len(found))
        found.append(m)
        found_projs.append(projs)
        return True

    for g in gens:
        try_add(g)
    frontier = list(found)
    for _ in range(max_rounds):
        new_maps = []
        for g in frontier:
            for h in gens[1:]:
                for cand in (g.compose(h), h.compose(g)):
                    if try_add(cand):
                        new_maps.append(cand)
        if not new_maps:
            break
        frontier = new_maps
    else:
        raise GroupClosureError(f"generation did not close within {max_rounds} rounds")
    if len(found) > 96:
        raise GroupClosureError(f"closure exploded to {len(found)} elements")

    ident_projs = _image_projectors(identity_map(poles.n), probe_frames)
    pairs = []
    for m, projs in zip(found, found_projs):
        perm = _perm_from_projs(projs, pole_projs)
        if not preserves_opposition(perm):
            raise OctalineError("group element breaks the opposite-pole pairing")
        order, power = 1, m
        while not _projs_close(_image_projectors(power, probe_frames), ident_projs):
            power = power.compose(m)
            order += 1
            if order > 48:
                raise OctalineError("runaway element order")
        label = ("~" if m.antiholomorphic else "") + cycle_string(perm)
        pairs.append((OctElement(m, perm, not m.antiholomorphic, order, label), projs))

    pairs.sort(key=lambda pr: (pr[0].map.antiholomorphic, pr[0].order, pr[0].perm))
    elements = [pr[0] for pr in pairs]
    group = OctGroup(elements, np.zeros((len(elements), len(elements)), dtype=int),
                     {i: e.perm for i, e in enumerate(elements)}, poles, probes,
                     probe_frames, pole_projs, [pr[1] for pr in pairs])
    for i, gi in enumerate(elements):
        for j, gj in enumerate(elements):
            group.cayley_table[i, j] = group.index_of(gi.map.compose(gj.map))
    return group


# ---------------------------------------------------------------------------
# the abstract group on six paired symbols

@dataclass
class AbstractOctahedralGroup:
    """All permutations of three paired symbols compatible with the pairing."""

    perms: list[tuple[int, ...]]
    zeta: tuple[int, ...]
    rotation_subgroup: list[tuple[int, ...]]

    @property
    def order(self) -> int:
        return len(self.perms)


def _axis_permutation(perm: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(perm[2 * k] // 2 for k in range(3))


def _sign3(p: tuple[int, ...]) -> int:
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
    return -1 if inv % 2 else 1


def det_character(perm: tuple[int, ...]) -> int:
    """Determinant of the signed 3x3 permutation matrix acting on the axes."""
    flips = sum(1 for k in range(3) if perm[2 * k] % 2 == 1)
    return _sign3(_axis_permutation(perm)) * (-1) ** flips


def abstract_octahedral_group() -> AbstractOctahedralGroup:
    perms = [p for p in itertools.permutations(range(6)) if preserves_opposition(p)]
    zeta = _OPPOSITE
    if len(perms) != 48:
        raise OctalineError(f"expected 48 pairing-compatible permutations, got {len(perms)}")
    if any(compose_perm(zeta, p) != compose_perm(p, zeta) for p in perms):
        raise OctalineError("pair swap is not central")
    rotations = [p for p in perms if det_character(p) == 1]
    if len(rotations) != 24:
        raise OctalineError("rotation subgroup has wrong order")
    return AbstractOctahedralGroup(perms, zeta, rotations)


def check_isomorphism(group: OctGroup) -> tuple[bool, dict]:
    """Verify the pole action is an isomorphism onto the abstract group.

    Checks injectivity, the full 48 x 48 homomorphism table, surjectivity,
    that holomorphy matches the rotation character, cycle census, and the
    four-element north-pole stabilizer.
    """
    abstract = abstract_octahedral_group()
    report: dict = {}
    perms = [e.perm for e in group.elements]
    report["size"] = len(group.elements)
    report["holomorphic"] = sum(e.holomorphic for e in group.elements)
    report["injective"] = len({(p, e.map.antiholomorphic)
                               for p, e in zip(perms, group.elements)}) == len(perms)
    report["distinct_perms"] = len(set(perms))

    hom_ok = True
    for i, gi in enumerate(group.elements):
        for j, gj in enumerate(group.elements):
            k = group.cayley_table[i, j]
            if perms[k] != compose_perm(gi.perm, gj.perm):
                hom_ok = False
    report["homomorphism"] = hom_ok
    report["onto_abstract"] = set(perms) == set(abstract.perms)
    report["holomorphy_matches_rotations"] = all(
        (det_character(e.perm) == 1) == e.holomorphic for e in group.elements
    )

    census: dict[tuple[int, bool], int] = {}
    for e in group.elements:
        key = (e.order, e.holomorphic)
        census[key] = census.get(key, 0) + 1
    report["census"] = census
    report["holomorphic_order3"] = census.get((3, True), 0)

    n_idx = 2  # label N
    stab = [e for e in group.elements if e.holomorphic and e.perm[n_idx] == n_idx]
    report["stabilizer_N_size"] = len(stab)
    expected = {dilation(lam, group.poles.N, group.poles.S) for lam in (1j, -1, -1j)}
    stab_ok = len(stab) == 4
    matched = 0
    for e in stab:
        if e.perm == tuple(range(6)) and e.holomorphic:
            matched += 1
            continue
        if any(_same_map(e.map, m, group.probes) for m in expected):
            matched += 1
    report["stabilizer_is_ns_dilations"] = stab_ok and matched == 4
    report["stabilizer_cyclic"] = sorted(e.order for e in stab) == [1, 2, 4, 4]

    ok = all([
        report["size"] == 48,
        report["holomorphic"] == 24,
        report["injective"],
        report["distinct_perms"] == 48,
        hom_ok,
        report["onto_abstract"],
        report["holomorphy_matches_rotations"],
        report["holomorphic_order3"] == 8,
        report["stabilizer_is_ns_dilations"],
        report["stabilizer_cyclic"],
    ])
    return ok, report


def real_form_elements(group: OctGroup) -> dict[str, int]:
    """Indices of the three major real-form involutions inside the group."""
    n = group.poles.n
    out = {}
    for name in ("J", "F", "I11"):
        out[name] = group.index_of(orthocomplement_map(form_matrix(name, n)))
    return out


def cayley_rotates_real_forms(group: OctGroup) -> bool:
    """Each holomorphic order-3 element permutes the three real forms cyclically."""
    forms = real_form_elements(group)
    form_idx = set(forms.values())
    cayleys = [i for i, e in enumerate(group.elements) if e.holomorphic and e.order == 3]
    if len(cayleys) != 8:
        return False
    for ci in cayleys:
        c = group.elements[ci].map
        c_inv = c.inverse()
        image = {}
        for name, fi in forms.items():
            conj = c.compose(group.elements[fi].map).compose(c_inv)
            image[name] = group.index_of(conj)
        if set(image.values()) != form_idx:
            return False
        if any(image[name] == forms[name] for name in forms):
            return False  # a 3-cycle on three symbols has no fixed point
    return True


# ---------------------------------------------------------------------------
# reference table transcription and audit

@dataclass(frozen=True)
class ReferenceRow:
    section: str
    cycle: str
    label: str
    matrix: tuple          # 2x2 coefficients as printed in the matrix column
    formula_matrix: tuple  # 2x2 coefficients transcribed from the chart formula
    formula_text: str
    antiholomorphic: bool = False


REFERENCE_TABLE: tuple[ReferenceRow, ...] = (
    # Klein four-group
    ReferenceRow("klein", "id", "id", ((1, 0), (0, 1)), ((1, 0), (0, 1)), "z -> z"),
    ReferenceRow("klein", "(NS)(FB)", "(-1)_{O,W}", ((-1, 0), (0, 1)), ((-1, 0), (0, 1)), "z -> -z"),
    ReferenceRow("klein", "(OW)(NS)", "(-1)_{F,B}", ((0, 1), (1, 0)), ((0, 1), (1, 0)), "z -> z^-1"),
    ReferenceRow("klein", "(OW)(FB)", "(-1)_{N,S}", ((0, 1), (-1, 0)), ((0, 1), (-1, 0)), "z -> -z^-1"),
    # four-cycles
    ReferenceRow("four-cycles", "(FNBS)", "i_{O,W}", ((1j, 0), (0, 1)), ((1j, 0), (0, 1)), "z -> i z"),
    ReferenceRow("four-cycles", "(SBNF)", "(-i)_{O,W} = i_{W,O}", ((-1j, 0), (0, 1)), ((-1j, 0), (0, 1)), "z -> -i z"),
    ReferenceRow("four-cycles", "(FWBO)", "i_{N,S}", ((1, -1), (1, 1)), ((1, -1), (1, 1)), "z -> (z-1)(z+1)^-1"),
    ReferenceRow("four-cycles", "(OBWF)", "(-i)_{N,S} = i_{S,N}", ((1, 1), (-1, 1)), ((-1, -1), (1, -1)), "z -> -(z+1)(z-1)^-1"),
    ReferenceRow("four-cycles", "(NWSO)", "i_{F,B}", ((1, 1j), (1j, 1)), ((1, 1j), (1j, 1)), "z -> (z+i)(iz+1)^-1"),
    ReferenceRow("four-cycles", "(OSWN)", "(-i)_{F,B} = i_{B,F}", ((1, -1j), (-1j, 1)), ((1, -1j), (-1j, 1)), "z -> (z-i)(-iz+1)^-1"),
    # transpositions
    ReferenceRow("transpositions", "(NF)(SB)(OW)", "(-1)_{F,B} . i_{W,O} = (-1)_{N,S} . i_{O,W}",
                 ((0, 1), (1j, 0)), ((0, -1j), (1, 0)), "z -> -i z^-1"),
    ReferenceRow("transpositions", "(NB)(SF)(OW)", "(-1)_{F,B} . i_{O,W} = (-1)_{N,S} . i_{W,O}",
                 ((0, 1j), (1, 0)), ((0, 1j), (1, 0)), "z -> i z^-1"),
    ReferenceRow("transpositions", "(FO)(BW)(NS)", "(-1)_{F,B} . i_{S,N} = (-1)_{O,W} . i_{N,S}",
                 ((-1, 1), (1, 1)), ((-1, 1), (1, 1)), "z -> (1-z)(z+1)^-1"),
    ReferenceRow("transpositions", "(FW)(BO)(NS)", "(-1)_{F,B} . i_{N,S} = (-1)_{O,W} . i_{S,N}",
                 ((1, 1), (1, -1)), ((1, 1), (1, -1)), "z -> (z+1)(z-1)^-1"),
    ReferenceRow("transpositions", "(NO)(SW)(FB)", "(-1)_{N,S} . i_{B,F} = (-1)_{O,W} . i_{F,B}",
                 ((-1j, 1), (-1, 1j)), ((-1j, 1), (-1, 1j)), "z -> (1-iz)(i-z)^-1"),
    ReferenceRow("transpositions", "(NW)(SO)(FB)", "(-1)_{N,S} . i_{F,B} = (-1)_{O,W} . i_{B,F}",
                 ((-1, 1j), (-1j, 1)), ((-1, 1j), (-1j, 1)), "z -> (i-z)(1-iz)^-1"),
    # three-cycles
    ReferenceRow("three-cycles", "(NBO)(SFW)", "i_{O,W} . i_{F,B}",
                 ((1j, -1), (1j, 1)), ((1, 1j), (1, -1j)), "z -> (z+i)(z-i)^-1"),
    ReferenceRow("three-cycles", "(NOB)(SWF)", "i_{B,F} . i_{W,O}",
                 ((-1j, -1j), (-1, 1)), ((1j, 1), (1, -1)), "z -> (iz+1)(z-1)^-1"),
    ReferenceRow("three-cycles", "(SBO)(WNF)", "i_{N,S} . i_{W,O}",
                 ((1, -1j), (1, 1j)), ((1, -1j), (1, 1j)), "z -> (z-i)(z+i)^-1"),
    ReferenceRow("three-cycles", "(SOB)(NWF)", "i_{O,W} . i_{S,N}",
                 ((1j, 1j), (1j, -1)), ((1j, 1j), (-1, 1)), "z -> i(z+1)(1-z)^-1"),
    ReferenceRow("three-cycles", "(NBW)(SFO)", "i_{O,W} . i_{B,F}",
                 ((-1, 1j), (1, 1j)), ((-1, 1j), (1, 1j)), "z -> (i-z)(z+i)^-1"),
    ReferenceRow("three-cycles", "(WBN)(FSO)", "i_{F,B} . i_{W,O}",
                 ((-1j, 1j), (1, 1)), ((-1j, 1j), (1, 1)), "z -> i(1-z)(1+z)^-1"),
    ReferenceRow("three-cycles", "(SWB)(NOF)", "i_{O,W} . i_{N,S}",
                 ((1j, -1j), (1, 1)), ((1j, -1j), (1, 1)), "z -> i(z-1)(z+1)^-1"),
    ReferenceRow("three-cycles", "(SBW)(NFO)", "i_{S,N} . i_{W,O}",
                 ((1, 1j), (-1, 1j)), ((1, 1j), (-1, 1j)), "z -> (z+i)(i-z)^-1"),
    # antiholomorphic real-form rows
    ReferenceRow("real-forms", "(NS)(OW)(FB)", "zeta", ((1, 0), (0, 1)), ((0, -1), (1, 0)),
                 "z -> -conj(z)^-1", True),
    ReferenceRow("real-forms", "(NS)", "tau hermitian = zeta . (-1)_{N,S}", ((0, 1), (-1, 0)),
                 ((1, 0), (0, 1)), "z -> conj(z)", True),
    ReferenceRow("real-forms", "(FB)", "tau skew = zeta . (-1)_{F,B}", ((0, 1), (1, 0)),
                 ((-1, 0), (0, 1)), "z -> -conj(z)", True),
    ReferenceRow("real-forms", "(OW)", "tau unitary = zeta . (-1)_{O,W}", ((-1, 0), (0, 1)),
                 ((0, 1), (1, 0)), "z -> conj(z)^-1", True),
)

# scalar poles as homogeneous pairs (r, s), chart value s/r
_SCALAR_POLES = ((1, 0), (0, 1), (1, 1j), (1, -1j), (1, 1), (1, -1))


def _formula_permutation(coeffs: tuple, conjugate: bool) -> tuple[int, ...] | None:
    """Pole permutation realized by a scalar fraction-linear formula, or None."""
    (a, b), (c, d) = coeffs
    images = []
    for r, s in _SCALAR_POLES:
        if conjugate:
            r, s = np.conj(r), np.conj(s)
        r2, s2 = c * s + d * r, a * s + b * r
        hit = None
        for j, (pr, ps) in enumerate(_SCALAR_POLES):
            # projective equality of (r2, s2) and (pr, ps)
            if abs(r2 * ps - s2 * pr) < 1e-9 and max(abs(r2), abs(s2)) > 1e-9:
                hit = j
                break
        if hit is None:
            return None
        images.append(hit)
    if sorted(images) != list(range(6)):
        return None
    return tuple(images)


def _proportional(m1: tuple, m2: tuple) -> bool:
    a = np.array(m1, dtype=complex).reshape(-1)
    b = np.array(m2, dtype=complex).reshape(-1)
    k = np.argmax(np.abs(a))
    if abs(a[k]) < 1e-12 or abs(b[k]) < 1e-12:
        return bool(np.allclose(a, 0) and np.allclose(b, 0))
    return bool(np.allclose(b * (a[k] / b[k]), a, atol=1e-9))


def _matrix_matches_formula(row: "ReferenceRow") -> bool:
    """Consistency of the matrix column with the chart-formula column.

    Holomorphic rows should be proportional directly.  Antiholomorphic rows
    encode the map as matrix-after-orthocomplement, so the matrix composed
    with w -> -w^{-1} must be proportional to the formula coefficients
    applied to the conjugate.
    """
    if not row.antiholomorphic:
        return _proportional(row.matrix, row.formula_matrix)
    m = np.array(row.matrix, dtype=complex)
    inversion = np.array([[0, -1], [1, 0]], dtype=complex)
    return _proportional(tuple(map(tuple, m @ inversion)), row.formula_matrix)


@dataclass
class TableAuditRow:
    section: str
    cycle: str
    label: str
    formula_text: str
    status: str                 # MATCH | INVERSE-MATCH | MISMATCH
    derived_cycle: str | None
    matrix_agrees_formula: bool
    realizes_row: str | None    # printed cycle (possibly of another row) the formula realizes


def table_diff_report() -> list[TableAuditRow]:
    """Audit every reference row: derived permutation versus printed cycle.

    The permutation is recomputed from the printed chart formula; the printed
    cycle is parsed left to right.  MISMATCH rows are cross-referenced to the
    row whose printed cycle the formula actually realizes, which exposes
    label swaps inside the table.
    """
    rows = []
    printed = {r.cycle: parse_cycles(r.cycle) for r in REFERENCE_TABLE}
    for ref in REFERENCE_TABLE:
        derived = _formula_permutation(ref.formula_matrix, ref.antiholomorphic)
        printed_perm = printed[ref.cycle]
        if derived is None:
            status, derived_cycle = "MISMATCH", None
        elif derived == printed_perm:
            status, derived_cycle = "MATCH", cycle_string(derived)
        elif derived == invert_perm(printed_perm):
            status, derived_cycle = "INVERSE-MATCH", cycle_string(derived)
        else:
            status, derived_cycle = "MISMATCH", cycle_string(derived)
        realizes = None
        if derived is not None:
            for other in REFERENCE_TABLE:
                if other.antiholomorphic == ref.antiholomorphic and printed[other.cycle] == derived:
                    realizes = other.cycle
                    break
        rows.append(
            TableAuditRow(
                section=ref.section,
                cycle=ref.cycle,
                label=ref.label,
                formula_text=ref.formula_text,
                status=status,
                derived_cycle=derived_cycle,
                matrix_agrees_formula=_matrix_matches_formula(ref),
                realizes_row=realizes,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# commutant sweep

def _commutes(g: MoebiusMap, h: MoebiusMap, probes: list[Point], tol: float = 1e-9) -> float:
    """Max projector displacement between g.h and h.g on the probes."""
    gh, hg = g.compose(h), h.compose(g)
    worst = 0.0
    for p in probes:
        q1 = _frame_projector(_act_frame(gh, p.frame))
        q2 = _frame_projector(_act_frame(hg, p.frame))
        worst = max(worst, float(np.linalg.norm(q1 - q2, 2)))
    return worst


def commutant_check(group: OctGroup, trials: int, seed: int = 0) -> dict:
    """Three sweeps around the two-sided translation action.

    (a) Euclid-unitary block matrices commute with the Euclidean
    orthocomplement; (b) translations (diagonal pairs conjugated through the
    order-three transform that carries the NS axis to the OW axis) commute
    with both the orthocomplement and the central inversion; (c) within the
    group, the holomorphic elements commuting with all sampled translations
    are exactly the four NS-axis dilations, with their four antiholomorphic
    companions.
    """
    from .sampling import random_unitary
    from .unitary import translation_map

    if trials < 1:
        raise OctalineError("trials must be >= 1")
    rng = rng_for(seed, 303)
    n = group.poles.n
    probes = group.probes
    zeta = orthocomplement_map(form_matrix("euclid", n))
    central = dilation(-1, group.poles.N, group.poles.S)

    unitary_vs_zeta = 0.0
    for _ in range(trials):
        m = MoebiusMap(random_unitary(2 * n, rng))
        unitary_vs_zeta = max(unitary_vs_zeta, _commutes(m, zeta, probes))

    translation_vs_zeta = 0.0
    translation_vs_central = 0.0
    translations = []
    for _ in range(max(trials, 5)):
        t = translation_map(random_unitary(n, rng), random_unitary(n, rng))
        translations.append(t)
        translation_vs_zeta = max(translation_vs_zeta, _commutes(t, zeta, probes))
        translation_vs_central = max(translation_vs_central, _commutes(t, central, probes))

    sample = translations[:5]
    commutant_holo, commutant_anti = [], []
    for i, e in enumerate(group.elements):
        if all(_commutes(e.map, t, probes) <= 1e-8 for t in sample):
            (commutant_holo if e.holomorphic else commutant_anti).append(i)

    stab_names = {"id"} | {cycle_string(derive_permutation(dilation(lam, group.poles.N, group.poles.S),
                                                           group.poles)) for lam in (1j, -1, -1j)}
    holo_names = {group.elements[i].label for i in commutant_holo}
    negative = _commutes(dilation(-1, group.poles.O, group.poles.W), sample[0], probes)

    return {
        "unitary_vs_zeta": unitary_vs_zeta,
        "translation_vs_zeta": translation_vs_zeta,
        "translation_vs_central": translation_vs_central,
        "holomorphic_commutant": sorted(holo_names),
        "holomorphic_commutant_ok": holo_names == stab_names and len(commutant_holo) == 4,
        "antiholomorphic_commutant_size": len(commutant_anti),
        "negative_control_displacement": negative,
    }
