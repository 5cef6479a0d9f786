import numpy as np
import pytest

from octaline.errors import NotInChartError, NotTransversalError, RankError
from octaline.projline import (
    MoebiusMap,
    Point,
    apply_moebius,
    chart_value,
    co_chart_value,
    cross_ratio,
    dilation,
    form_matrix,
    identity_map,
    is_lagrangian,
    mobius_from_blocks,
    orthocomplement,
    orthocomplement_map,
    point_equals,
    point_from_chart,
    point_from_pair,
    real_form_tau,
    scalar_mobius,
    symmetry_J,
    transversal,
)
from octaline.octahedron import standard_poles
from octaline.sampling import ginibre, random_hermitian, random_unitary, rng_for


def scalar_point(z):
    return point_from_chart(np.array([[z]], dtype=complex))


def chart_scalar(p):
    return complex(chart_value(p)[0, 0])


def test_chart_roundtrip_and_poles():
    poles = standard_poles(1)
    assert point_equals(scalar_point(0.0), poles.O)
    assert point_equals(scalar_point(1.0), poles.F)
    assert point_equals(scalar_point(1j), poles.N)
    z = np.array([[0.3 + 0.4j]])
    assert point_equals(point_from_chart(chart_value(point_from_chart(z))), point_from_chart(z))
    with pytest.raises(NotInChartError):
        chart_value(poles.W)


def test_chart_value_homogeneous_rescaling():
    p = point_from_pair(2 * np.eye(1), 2j * np.eye(1))
    assert abs(chart_scalar(p) - 1j) <= 1e-12


def test_point_equals_right_module_invariance():
    rng = rng_for(1)
    x = ginibre(3, rng)
    g = ginibre(3, rng) + 3 * np.eye(3)
    p = point_from_pair(np.eye(3), x)
    q = point_from_pair(g, x @ g)
    assert point_equals(p, q)
    poles = standard_poles(3)
    assert not point_equals(poles.O, poles.W)


def test_rank_deficient_frame_rejected():
    g = np.diag([1.0, 0.0])  # not invertible: no longer a point frame
    with pytest.raises(RankError):
        point_from_pair(g, g)


def test_transversality():
    poles = standard_poles(2)
    assert transversal(poles.O, poles.W)
    assert transversal(poles.N, poles.S)
    assert not transversal(poles.F, poles.F)


def test_moebius_identity_and_pole_convention():
    poles = standard_poles(1)
    ident = identity_map(1)
    for p in poles.as_list():
        assert point_equals(apply_moebius(ident, p), p)
    # the matrix (i 0; 0 1) acts on charts as z -> i z, so it carries F to N
    rot = scalar_mobius(1j, 0, 0, 1, 1)
    assert point_equals(apply_moebius(rot, poles.F), poles.N)
    assert point_equals(apply_moebius(rot, poles.N), poles.B)
    # Cayley matrix at the origin: (0 - i)(0 + i)^{-1} = -1
    cay = scalar_mobius(1, -1j, 1, 1j, 1)
    assert abs(chart_scalar(apply_moebius(cay, poles.O)) + 1.0) <= 1e-12


def test_moebius_in_chart_consistency_matrix_case():
    rng = rng_for(2)
    a, b, c, d = (ginibre(2, rng) for _ in range(4))
    m = mobius_from_blocks(a, b, c, d)
    z = ginibre(2, rng)
    p = apply_moebius(m, point_from_chart(z))
    expected = (a @ z + b) @ np.linalg.inv(c @ z + d)
    assert np.linalg.norm(chart_value(p) - expected) <= 1e-9


def test_moebius_composition_and_transversality_preservation():
    rng = rng_for(3)
    poles = standard_poles(2)
    for _ in range(20):
        m1 = MoebiusMap(ginibre(4, rng) + 2 * np.eye(4))
        m2 = MoebiusMap(ginibre(4, rng) + 2 * np.eye(4))
        p = Point(ginibre(4, rng)[:, :2])
        lhs = apply_moebius(m2, apply_moebius(m1, p))
        rhs = apply_moebius(m2.compose(m1), p)
        assert point_equals(lhs, rhs)
        q1, q2 = apply_moebius(m1, poles.O), apply_moebius(m1, poles.W)
        assert transversal(q1, q2)


def test_antiholomorphic_composition_algebra():
    rng = rng_for(4)
    zeta = orthocomplement_map(form_matrix("euclid", 2))
    probes = [Point(ginibre(4, rng)[:, :2]) for _ in range(5)]
    m = MoebiusMap(ginibre(4, rng) + 2 * np.eye(4))
    anti = m.compose(zeta)
    assert anti.antiholomorphic
    # anti . anti is holomorphic and acts like the two-step composite
    sq = anti.compose(anti)
    assert not sq.antiholomorphic
    for p in probes:
        direct = apply_moebius(anti, apply_moebius(anti, p))
        assert point_equals(apply_moebius(sq, p), direct)
    inv = anti.inverse()
    for p in probes:
        assert point_equals(apply_moebius(inv, apply_moebius(anti, p)), p)


def test_orthocomplement_euclid_is_antipode():
    poles = standard_poles(1)
    euclid = form_matrix("euclid", 1)
    assert point_equals(orthocomplement(poles.O, euclid), poles.W)
    rng = rng_for(5)
    for _ in range(10):
        z = complex(rng.standard_normal() + 1j * rng.standard_normal())
        image = orthocomplement(scalar_point(z), euclid)
        assert abs(chart_scalar(image) - (-1 / np.conj(z))) <= 1e-9


def test_orthocomplement_hermitian_form_fixes_hermitian_points():
    j_form = form_matrix("J", 2)
    rng = rng_for(6)
    for _ in range(10):
        h = random_hermitian(2, rng)
        p = point_from_chart(h)
        assert point_equals(orthocomplement(p, j_form), p)


@pytest.mark.parametrize("name", ["euclid", "J", "F", "I11"])
def test_orthocomplement_involutive(name):
    form = form_matrix(name, 2)
    rng = rng_for(7)
    for _ in range(10):
        p = Point(ginibre(4, rng)[:, :2])
        assert point_equals(orthocomplement(orthocomplement(p, form), form), p)
        # the packaged antiholomorphic map realizes the same complement
        assert point_equals(apply_moebius(orthocomplement_map(form), p),
                            orthocomplement(p, form))


def test_dilation():
    poles = standard_poles(1)
    ident = dilation(1.0, poles.O, poles.W)
    assert point_equals(apply_moebius(ident, poles.F), poles.F)
    rot = dilation(1j, poles.O, poles.W)
    assert abs(chart_scalar(apply_moebius(rot, scalar_point(0.7))) - 0.7j) <= 1e-12
    central = dilation(-1.0, poles.N, poles.S)
    z = 0.3 - 0.8j
    assert abs(chart_scalar(apply_moebius(central, scalar_point(z))) + 1 / z) <= 1e-10
    lhs = dilation(2.0, poles.O, poles.W).compose(dilation(1.5j, poles.O, poles.W))
    rhs = dilation(3.0j, poles.O, poles.W)
    for z0 in (0.2, 1.1 + 0.4j):
        assert point_equals(apply_moebius(lhs, scalar_point(z0)),
                            apply_moebius(rhs, scalar_point(z0)))
    with pytest.raises(NotTransversalError):
        dilation(1j, poles.O, poles.O)


def test_symmetry_fixing_the_diagonal():
    poles = standard_poles(1)
    sym = symmetry_J(poles.O, poles.W, poles.F)
    z = 0.37 + 0.21j
    assert abs(chart_scalar(apply_moebius(sym, scalar_point(z))) - 1 / z) <= 1e-10
    assert point_equals(apply_moebius(sym, poles.O), poles.W)
    assert point_equals(apply_moebius(sym, poles.F), poles.F)
    square = sym.compose(sym)
    for p in (poles.N, scalar_point(0.5), poles.B):
        assert point_equals(apply_moebius(square, p), p)


def test_real_form_tau_is_conjugation():
    poles = standard_poles(2)
    tau = real_form_tau(poles.N, poles.S, poles.O)
    rng = rng_for(8)
    for _ in range(10):
        z = ginibre(2, rng)
        image = apply_moebius(tau, point_from_chart(z))
        assert point_equals(image, point_from_chart(z.conj().T))
    for fixed in (poles.O, poles.W, poles.F, poles.B):
        assert point_equals(apply_moebius(tau, fixed), fixed)
    assert point_equals(apply_moebius(tau, poles.N), poles.S)
    assert point_equals(apply_moebius(tau, poles.S), poles.N)
    square = tau.compose(tau)
    p = point_from_chart(ginibre(2, rng))
    assert point_equals(apply_moebius(square, p), p)


def test_real_form_same_for_both_diagonal_choices():
    poles = standard_poles(1)
    tau_o = real_form_tau(poles.N, poles.S, poles.O)
    tau_f = real_form_tau(poles.N, poles.S, poles.F)
    for z in (0.3, 0.5 - 0.2j, 1.7j):
        assert point_equals(apply_moebius(tau_o, scalar_point(z)),
                            apply_moebius(tau_f, scalar_point(z)))


def test_is_lagrangian():
    i11 = form_matrix("I11", 2)
    rng = rng_for(9)
    for _ in range(20):
        u = random_unitary(2, rng)
        assert is_lagrangian(point_from_chart(u), i11)
    assert not is_lagrangian(point_from_chart(2 * np.eye(2)), i11)


def test_cross_ratio_zero_and_scalar_product():
    poles = standard_poles(1)
    assert np.linalg.norm(cross_ratio(poles.O, poles.W, poles.O, poles.F)) <= 1e-12
    z1, z2 = 0.8 + 0.1j, -1.3 + 0.5j
    c = scalar_point(z1)
    d = point_from_pair(z2 * np.eye(1), np.eye(1))  # opposite-chart value z2
    assert abs(co_chart_value(d)[0, 0] - z2) <= 1e-12
    val = cross_ratio(poles.O, poles.W, c, d)
    assert abs(val[0, 0] - z1 * z2) <= 1e-10


def test_cross_ratio_trace_invariance():
    rng = rng_for(10)
    n = 2
    pts = [Point(ginibre(2 * n, rng)[:, :n]) for _ in range(4)]
    base = np.trace(cross_ratio(*pts))
    worst = 0.0
    for _ in range(20):
        m = MoebiusMap(random_unitary(2 * n, rng))
        moved = [apply_moebius(m, p) for p in pts]
        worst = max(worst, abs(np.trace(cross_ratio(*moved)) - base))
        g = MoebiusMap(ginibre(2 * n, rng) + 2 * np.eye(2 * n))
        moved = [apply_moebius(g, p) for p in pts]
        worst = max(worst, abs(np.trace(cross_ratio(*moved)) - base))
    assert worst <= 1e-9


def test_cross_ratio_transversality_errors():
    poles = standard_poles(1)
    with pytest.raises(NotTransversalError):
        cross_ratio(poles.O, poles.O, poles.F, poles.B)
    with pytest.raises(NotTransversalError):
        cross_ratio(poles.O, poles.W, poles.W, poles.F)  # c not transversal to b
    with pytest.raises(NotTransversalError):
        cross_ratio(poles.O, poles.W, poles.F, poles.O)  # d not transversal to a


def test_serialization_roundtrips():
    rng = rng_for(11)
    p = Point(ginibre(4, rng)[:, :2])
    assert point_equals(Point.from_json(p.to_json()), p)
    m = MoebiusMap(ginibre(4, rng) + 2 * np.eye(4), antiholomorphic=True)
    back = MoebiusMap.from_json(m.to_json())
    assert back.antiholomorphic
    assert np.allclose(back.matrix, m.matrix)
