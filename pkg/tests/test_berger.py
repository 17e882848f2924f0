import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergerflow.berger import (
    E1,
    E2,
    E3,
    FRAME,
    BergerContext,
    FrameVector,
    ProductAlgebraVector,
    algebra_to_frame,
    check_nabla_phi_xi,
    curvature,
    eta,
    frame_to_algebra,
    hat_map,
    levi_civita,
    lorentz_phi,
    metric,
    nat_red_check,
    product_inner,
    reeb,
    ricci,
    ricci_tensor,
    scalar,
    sectional,
    standard_field,
    standard_field_check,
    structure_bracket,
    tangent_at_origin,
    u_tensor,
    u_tensor_from_bracket,
)
from bergerflow.liealg import AlgebraVector, bracket

cs = st.floats(-2.99, 20.0)
comp = st.floats(-3.0, 3.0)
frames = st.builds(FrameVector, comp, comp, comp)


def vclose(a, b, tol):
    return (a - b).norm() <= tol


def koszul(v, w, ctx):
    """Levi-Civita connection of a left-invariant metric straight from the bracket."""
    comps = []
    for z in FRAME:
        comps.append(
            0.5
            * (
                metric(structure_bracket(v, w, ctx), z)
                - metric(structure_bracket(w, z, ctx), v)
                + metric(structure_bracket(z, v, ctx), w)
            )
        )
    return FrameVector(*comps)


def test_context_validation():
    with pytest.raises(ValueError, match="c must exceed -3"):
        BergerContext(-3.0)
    ctx = BergerContext(5.0)
    assert ctx.s1 == pytest.approx(math.sqrt(2.0))
    assert ctx.s3 == 2.0
    assert ctx.inertia == (0.5, 0.5, 0.25)


@given(cs)
def test_inertia_identity(c):
    I1, I2, I3 = BergerContext(c).inertia
    assert I1 == I2 and I1 > 0 and I3 > 0
    assert I3 == pytest.approx(I1 * I1, rel=1e-14)


@given(cs, frames, frames)
def test_inertia_reproduces_metric(c, v, w):
    ctx = BergerContext(c)
    x, y = frame_to_algebra(v, ctx).as_array(), frame_to_algebra(w, ctx).as_array()
    assert metric(v, w) == pytest.approx(float(np.dot(np.array(ctx.inertia) * x, y)), abs=1e-11)


def test_frame_examples():
    assert frame_to_algebra(E1, BergerContext(1.0)) == AlgebraVector(1.0, 0.0, 0.0)
    assert frame_to_algebra(E3, BergerContext(5.0)) == AlgebraVector(0.0, 0.0, 2.0)


@given(cs, frames)
def test_frame_roundtrip(c, v):
    ctx = BergerContext(c)
    assert vclose(algebra_to_frame(frame_to_algebra(v, ctx), ctx), v, 1e-14)


def test_bracket_examples():
    ctx = BergerContext(5.0)
    assert structure_bracket(E1, E2, ctx) == FrameVector(0.0, 0.0, 2.0)
    assert structure_bracket(E2, E3, ctx) == FrameVector(4.0, 0.0, 0.0)
    assert structure_bracket(E3, E1, ctx) == FrameVector(0.0, 4.0, 0.0)


@given(cs, frames, frames)
def test_bracket_agrees_with_su2(c, v, w):
    ctx = BergerContext(c)
    ours = structure_bracket(v, w, ctx)
    via = algebra_to_frame(bracket(frame_to_algebra(v, ctx), frame_to_algebra(w, ctx)), ctx)
    assert vclose(ours, via, 1e-12 * (abs(c) + 3))
    assert structure_bracket(v, v, ctx).norm() == 0.0


def test_connection_examples():
    assert levi_civita(E1, E1, BergerContext(0.3)).norm() == 0.0
    assert levi_civita(E3, E1, BergerContext(3.0)) == FrameVector(0.0, 2.0, 0.0)
    assert levi_civita(E1 + E2, E1 + E2, BergerContext(7.0)).norm() == 0.0


@pytest.mark.parametrize("c", [-2.5, -1.0, 0.0, 1.0, 3.0, 5.0, 17.0])
def test_connection_table_identities(c):
    ctx = BergerContext(c)
    for v, w in itertools.product(FRAME, repeat=2):
        torsion = levi_civita(v, w, ctx) - levi_civita(w, v, ctx) - structure_bracket(v, w, ctx)
        assert torsion.norm() == 0.0
        assert vclose(levi_civita(v, w, ctx), 0.5 * structure_bracket(v, w, ctx) + u_tensor(v, w, ctx), 1e-14)
        assert vclose(levi_civita(v, w, ctx), koszul(v, w, ctx), 1e-14)
        assert vclose(u_tensor(v, w, ctx), u_tensor_from_bracket(v, w, ctx), 1e-14)
        assert vclose(u_tensor(v, w, ctx), u_tensor(w, v, ctx), 0.0)
    for u, v, w in itertools.product(FRAME, repeat=3):
        assert abs(metric(levi_civita(u, v, ctx), w) + metric(v, levi_civita(u, w, ctx))) <= 1e-14


def test_u_examples():
    ctx = BergerContext(5.0)
    assert u_tensor(E1, E3, ctx) == FrameVector(0.0, 1.0, 0.0)
    assert u_tensor(E1, E2, ctx).norm() == 0.0
    one = BergerContext(1.0)
    assert all(u_tensor(v, w, one).norm() == 0.0 for v, w in itertools.product(FRAME, repeat=2))


def test_curvature_examples():
    ctx = BergerContext(5.0)
    assert sectional(E1, E2, ctx) == pytest.approx(5.0, abs=1e-12)
    assert scalar(ctx) == pytest.approx(14.0, abs=1e-12)
    with pytest.raises(ValueError):
        sectional(E1, 2.0 * E1, ctx)


@given(frames, frames)
def test_round_sphere_sectional(v, w):
    ctx = BergerContext(1.0)
    area = metric(v, v) * metric(w, w) - metric(v, w) ** 2
    if area <= 1e-3 * metric(v, v) * metric(w, w) or area < 1e-6:
        return
    assert sectional(v, w, ctx) == pytest.approx(1.0, abs=1e-10)


def test_curvature_tables_random():
    rng = np.random.default_rng(11)
    for c in rng.uniform(-3.0, 20.0, size=20):
        c = float(c) if c > -3.0 else -2.999
        ctx = BergerContext(c)
        k = (sectional(E1, E2, ctx), sectional(E1, E3, ctx), sectional(E2, E3, ctx))
        assert np.allclose(k, (c, 1.0, 1.0), rtol=0, atol=1e-11)
        assert np.allclose(ricci(ctx), (c + 1, c + 1, 2.0), rtol=0, atol=1e-11)
        assert np.allclose(ricci_tensor(ctx), np.diag(ricci(ctx)), rtol=0, atol=1e-11)
        assert scalar(ctx) == pytest.approx(2 * (c + 2), abs=1e-11)


@given(cs, frames, frames, frames)
def test_curvature_symmetries(c, u, v, w):
    ctx = BergerContext(c)
    assert vclose(curvature(u, v, w, ctx), -1.0 * curvature(v, u, w, ctx), 1e-9)
    bianchi = curvature(u, v, w, ctx) + curvature(v, w, u, ctx) + curvature(w, u, v, ctx)
    assert bianchi.norm() <= 1e-8


def test_contact_examples():
    assert lorentz_phi(E3).norm() == 0.0
    assert lorentz_phi(lorentz_phi(E1)) == FrameVector(-1.0, 0.0, 0.0)
    assert eta(reeb()) == 1.0


@given(frames, frames)
def test_contact_identities(v, w):
    assert vclose(lorentz_phi(lorentz_phi(v)), -1.0 * v + eta(v) * reeb(), 1e-14)
    lhs = metric(lorentz_phi(v), lorentz_phi(w))
    assert lhs == pytest.approx(metric(v, w) - eta(v) * eta(w), abs=1e-12)


@pytest.mark.parametrize("c", [-2.0, 0.0, 1.0, 5.0, 10.0, 19.5])
def test_nabla_phi_xi(c):
    ctx = BergerContext(c)
    assert check_nabla_phi_xi(ctx).max_deviation <= 1e-12
    assert levi_civita(E1, reeb(), ctx) == FrameVector(0.0, -1.0, 0.0)
    assert levi_civita(E3, reeb(), ctx).norm() == 0.0


def test_hat_map_examples():
    ctx = BergerContext(4.0)
    v = FrameVector(0.3, -0.8, 0.0)
    assert hat_map(v, ctx) == ProductAlgebraVector(v, -0.0)
    one = BergerContext(1.0)
    h = hat_map(E3, one)
    assert h.g == E3 and h.k == 0.0


@given(cs, frames)
def test_hat_map_is_section_of_tangent_map(c, v):
    ctx = BergerContext(c)
    assert vclose(tangent_at_origin(hat_map(v, ctx)), v, 1e-13)
    assert vclose(tangent_at_origin(hat_map(frame_to_algebra(v, ctx), ctx)), v, 1e-12)


@pytest.mark.parametrize("c", [-2.0, 0.0, 1.0, 5.0, 10.0])
def test_naturally_reductive(c):
    assert nat_red_check(BergerContext(c)).max_deviation <= 1e-12


def test_l_basis_orthonormal():
    basis = [ProductAlgebraVector(e, 0.0) for e in FRAME] + [ProductAlgebraVector(FrameVector(0, 0, 0), 1.0)]
    gram = np.array([[product_inner(a, b) for b in basis] for a in basis])
    assert np.array_equal(gram, np.eye(4))


def test_standard_field():
    ctx = BergerContext(1.0)
    assert standard_field(E1, E2, ctx) == pytest.approx(-1.0, abs=1e-15)
    assert metric(lorentz_phi(E1), E2) == -1.0
    assert standard_field(E1, E1, ctx) == 0.0
    assert standard_field_check(ctx).max_deviation <= 1e-12
    with pytest.raises(ValueError):
        standard_field_check(BergerContext(5.0))
