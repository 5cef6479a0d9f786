import numpy as np
import pytest

from octaline.algebra import StarAlgebra
from octaline.errors import CayleyPoleError, ConfigurationError, NotTransversalError
from octaline.projline import (
    apply_moebius,
    chart_value,
    form_matrix,
    is_lagrangian,
    orthocomplement,
    point_equals,
    point_from_chart,
    transversal,
)
from octaline.sampling import random_hermitian, random_unitary, rng_for
from octaline.unitary import (
    UnitaryGroupSpec,
    affine_completeness_check,
    antipode,
    cayley,
    cell_coordinate,
    cell_point,
    embed_unitary,
    in_real_form,
    in_torsor,
    inverse_cayley,
    is_unitary,
    make_obstate,
    obstate_margins,
    sample_real_form,
    standard_setting,
    torsor_coordinate,
    torsor_point,
    translation_map,
    unitarity_defect,
)


def test_is_unitary_examples():
    spec = UnitaryGroupSpec(StarAlgebra(2))
    assert is_unitary(np.eye(2), spec)
    assert is_unitary(np.diag(np.exp(1j * np.array([0.3, -1.2]))), spec)
    assert not is_unitary(np.diag([2.0, 0.5]), spec)

    i11 = np.diag([1.0, -1.0])
    spec_i11 = UnitaryGroupSpec(StarAlgebra(2), i11)
    assert not is_unitary(np.diag([2.0, 0.5]), spec_i11)
    t = 0.7
    boost = np.array([[np.cosh(t), np.sinh(t)], [np.sinh(t), np.cosh(t)]])
    assert is_unitary(boost, spec_i11)


def test_cayley_values_and_unitarity():
    assert np.allclose(cayley(np.zeros((1, 1))), -np.eye(1))
    rng = rng_for(1)
    for n in (1, 2, 3, 4):
        for _ in range(25):
            z = random_hermitian(n, rng)
            u = cayley(z)
            assert unitarity_defect(u) <= 1e-9
            # scalar functional calculus: eigenvalues move to the unit circle
            assert np.allclose(np.abs(np.linalg.eigvals(u)), 1.0)
    with pytest.raises(ConfigurationError):
        cayley(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_inverse_cayley():
    assert np.allclose(inverse_cayley(-np.eye(2)), np.zeros((2, 2)))
    z = inverse_cayley(1j * np.eye(1))
    assert np.allclose(cayley(z), 1j * np.eye(1))
    assert np.allclose(z, -np.eye(1))  # the scalar solution of (z-i)(z+i)^{-1} = i
    with pytest.raises(CayleyPoleError):
        inverse_cayley(np.eye(3))
    rng = rng_for(2)
    for _ in range(50):
        z = random_hermitian(2, rng)
        assert np.linalg.norm(inverse_cayley(cayley(z)) - z) <= 1e-8 * max(np.linalg.norm(z), 1)


def test_torsor_point_roundtrip_including_infinity():
    setting = standard_setting(2)
    rng = rng_for(3)
    for _ in range(20):
        u = random_unitary(2, rng)
        p = torsor_point(u)
        assert in_torsor(p, setting)
        assert np.linalg.norm(torsor_coordinate(p) - u) <= 1e-9
    w_point = torsor_point(np.eye(2))
    assert point_equals(w_point, setting.poles.W)
    assert point_equals(torsor_point(-np.eye(2)), setting.poles.O)


def test_embed_unitary():
    setting = standard_setting(2)
    assert point_equals(embed_unitary(np.eye(2), setting), setting.poles.F)
    assert point_equals(embed_unitary(-np.eye(2), setting), setting.poles.B)
    i11 = form_matrix("I11", 2)
    rng = rng_for(4)
    for _ in range(100):
        x = random_unitary(2, rng)
        p = embed_unitary(x, setting)
        assert is_lagrangian(p, i11)
        assert point_equals(orthocomplement(p, i11), p)
        assert transversal(p, setting.poles.N) and transversal(p, setting.poles.S)
    with pytest.raises(ConfigurationError):
        embed_unitary(2 * np.eye(2), setting)


def test_antipode():
    setting = standard_setting(1)
    assert point_equals(antipode(setting.poles.O, setting), setting.poles.W)
    assert point_equals(antipode(setting.poles.F, setting), setting.poles.B)
    rng = rng_for(5)
    for _ in range(50):
        p = torsor_point(random_unitary(1, rng))
        assert point_equals(antipode(antipode(p, setting), setting), p)
        assert transversal(p, antipode(p, setting))


def test_torsor_membership_of_poles():
    setting = standard_setting(2)
    for p in (setting.poles.O, setting.poles.W, setting.poles.F, setting.poles.B):
        assert in_torsor(p, setting)
    assert not in_real_form(setting.poles.N, setting)
    assert not in_real_form(setting.poles.S, setting)


def test_translation_action_on_coordinates():
    rng = rng_for(6)
    n = 2
    for _ in range(20):
        u1, u2, u = (random_unitary(n, rng) for _ in range(3))
        t = translation_map(u1, u2)
        moved = apply_moebius(t, torsor_point(u))
        assert np.linalg.norm(torsor_coordinate(moved) - u1 @ u @ u2.conj().T) <= 1e-9


def test_cell_point_roundtrip():
    rng = rng_for(7)
    n = 2
    setting = standard_setting(n)
    for _ in range(20):
        base = random_unitary(n, rng)
        x = random_hermitian(n, rng)
        y = cell_point(base, x)
        assert in_real_form(y, setting)
        assert np.linalg.norm(cell_coordinate(base, y) - x) <= 1e-8
    assert point_equals(cell_point(base, np.zeros((n, n))), torsor_point(base))


@pytest.mark.parametrize("n", [1, 2])
def test_affine_completeness_small(n):
    setting = standard_setting(n)
    report = affine_completeness_check(setting, trials=300, seed=11)
    assert report.violations == 0
    assert report.min_margin_north > 0
    assert report.heavy_tail_trials > 0


def test_sampler_real_form():
    setting = standard_setting(2)
    pts = sample_real_form(setting, 40, 13, include_nonchart=True)
    nonchart = 0
    for p in pts:
        assert in_real_form(p, setting)
        assert transversal(p, setting.poles.N) and transversal(p, setting.poles.S)
        u = torsor_coordinate(p)
        assert unitarity_defect(u) <= 1e-9
        try:
            chart_value(p)
        except Exception:
            nonchart += 1
    assert nonchart > 0  # the forced angle pi/2 produced points over infinity


def test_sampler_expected_poles():
    from octaline.projline import point_from_pair

    # angle zero gives the origin pole, angle pi/2 the pole at infinity
    setting = standard_setting(2)
    g = np.array([[2.0, 1.0], [0.0, 1.0]], dtype=complex)
    assert point_equals(point_from_pair(g, np.zeros((2, 2))), setting.poles.O)
    assert point_equals(point_from_pair(np.zeros((2, 2)), g), setting.poles.W)


def test_full_circle_at_level_one():
    setting = standard_setting(1)
    for theta in np.linspace(0, 2 * np.pi, 37):
        p = torsor_point(np.array([[np.exp(1j * theta)]]))
        assert in_torsor(p, setting)


def test_make_obstate_and_margins():
    setting = standard_setting(1)
    ob = make_obstate(setting.poles.F, setting.poles.F, setting.poles.O, setting)
    margins = obstate_margins(ob, setting)
    assert min(margins.values()) > 0
    with pytest.raises(NotTransversalError) as err:
        make_obstate(setting.poles.W, setting.poles.F, setting.poles.O, setting)
    assert "antipode" in str(err.value)
    rng = rng_for(17)
    base = random_unitary(2, rng)
    setting2 = standard_setting(2)
    p = torsor_point(base)
    h = cell_point(base, random_hermitian(2, rng))       # transversal to antipode(p)
    w = antipode(cell_point(base, random_hermitian(2, rng)), setting2)  # transversal to p
    ob = make_obstate(h, w, p, setting2)
    assert min(obstate_margins(ob, setting2).values()) > 0
