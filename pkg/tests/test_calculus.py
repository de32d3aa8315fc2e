import math

import numpy as np
import pytest

from ternion import algebra as ta
from ternion.algebra import ComplexTernary, Ternary, conjugates, inverse, mul, norm_cubed, scale
from ternion.calculus import (
    Curve,
    TernaryField,
    box_boundary_patches,
    check_holo_type1,
    check_holo_type2,
    conformal_jacobian,
    cubic_band_patch,
    cubic_surface_geometry,
    line_integral,
    polar_band_patch,
    sphere_patch,
    surface_integral_2form,
    ternary_laplacian,
    trisectrice_loop,
    volume_integral_3form,
    wirtinger_partials,
)
from ternion.errors import (
    DomainError,
    NotHolomorphic,
    NumericalBreakdown,
    SingularOnPath,
)

from oracles import random_admissible, ternary_close

SQ3 = math.sqrt(3.0)

identity_field = TernaryField(lambda z: z, name="z")
square_field = TernaryField(lambda z: mul(z, z), derivative=lambda z: scale(z, 2.0), name="z^2")
cube_field = TernaryField(lambda z: mul(mul(z, z), z), name="z^3")
x0_field = TernaryField(lambda z: Ternary(z.x0, 0.0, 0.0), name="x0")
one_field = TernaryField(lambda z: ta.ONE, name="1")
log_field = TernaryField(ta.log, name="log z")
reciprocal_field = TernaryField(inverse, name="1/z")


def conjugate_cube_field(n, m):
    """Real and imaginary parts of ztilde^n * ztiltil^m as real fields."""

    def value(z):
        zt, ztt = conjugates(z)
        out = ComplexTernary(1.0 + 0.0j, 0.0j, 0.0j)
        for _ in range(n):
            out = out * zt
        for _ in range(m):
            out = out * ztt
        return out

    re = TernaryField(lambda z: value(z).real_part(), name=f"Re zt^{n} ztt^{m}")
    im = TernaryField(lambda z: value(z).imag_part(), name=f"Im zt^{n} ztt^{m}")
    return re, im


def test_wirtinger_identity_field():
    dz, dzt, dztt = wirtinger_partials(identity_field, Ternary(0.4, -1.2, 2.0))
    assert ternary_close(dz, ta.ONE, 1e-9)
    assert dzt.max_imag() <= 1e-9 and (dzt.real_part()).max_abs() <= 1e-9
    assert dztt.max_imag() <= 1e-9 and (dztt.real_part()).max_abs() <= 1e-9


def test_wirtinger_coordinate_field():
    # x0 = (z + zt + ztt)/3, so every partial has scalar part 1/3.
    for p in (Ternary(0, 0, 0), Ternary(1.5, -0.7, 0.2)):
        dz, dzt, dztt = wirtinger_partials(x0_field, p)
        assert dz.x0 == pytest.approx(1.0 / 3.0, abs=1e-9)
        assert dzt.c0.real == pytest.approx(1.0 / 3.0, abs=1e-9)
        assert dztt.c0.real == pytest.approx(1.0 / 3.0, abs=1e-9)


def test_wirtinger_square_field():
    p = Ternary(1.0, 2.0, 3.0)
    dz, dzt, dztt = wirtinger_partials(square_field, p)
    assert ternary_close(dz, scale(p, 2.0), 1e-6)
    assert max(abs(c) for c in dzt.components()) <= 1e-6
    assert max(abs(c) for c in dztt.components()) <= 1e-6


def test_wirtinger_breakdown_on_rough_field():
    rough = TernaryField(lambda z: Ternary(math.sin(1e8 * z.x0), 0.0, 0.0))
    with pytest.raises(NumericalBreakdown):
        wirtinger_partials(rough, Ternary(0.3, 0.0, 0.0))


def test_holo_type1_polynomials_pass():
    rep = check_holo_type1(square_field, Ternary(1.0, 2.0, 3.0), tol=1e-6)
    assert rep.passed and rep.max_polar is not None


def test_holo_type1_scalar_field_fails():
    rep = check_holo_type1(x0_field, Ternary(0.5, 0.1, -0.2), tol=1e-6)
    assert not rep.passed
    assert rep.max_cartesian == pytest.approx(1.0, abs=1e-6)


def test_holo_type1_log_passes(rng):
    for _ in range(5):
        p = random_admissible(rng, lo=0.3, hi=1.8)
        rep = check_holo_type1(log_field, p, tol=1e-6)
        assert rep.passed


def test_holo_type2_conjugate_product_passes():
    # (zt ztt)^2 is a function of the conjugate product: both residual sets vanish.
    prod_sq = TernaryField(lambda z: mul(ta.tilde_product(z), ta.tilde_product(z)))
    rep = check_holo_type2(prod_sq, Ternary(0.9, 0.4, -0.3), tol=1e-6)
    assert rep.passes_single and rep.passes_reality


def test_holo_type2_identity_fails():
    rep = check_holo_type2(identity_field, Ternary(0.9, 0.4, -0.3), tol=1e-6)
    assert not rep.passes_single
    # the summed constraint is 3 * dF/dz = 3 for the identity
    assert rep.max_single == pytest.approx(3.0, abs=1e-6)


def test_holo_type2_mixed_powers_pass_single_only():
    re, im = conjugate_cube_field(2, 1)
    p = Ternary(0.9, 0.4, -0.3)
    for f in (re, im):
        rep = check_holo_type2(f, p, tol=1e-6)
        assert rep.passes_single
        assert rep.max_reality > 1e-3  # genuinely fails reality


def test_laplacian_monomials():
    assert ternary_laplacian(lambda z: z.x0**3, Ternary(0.3, 0.7, -0.2)) == pytest.approx(6.0, abs=1e-6)
    assert ternary_laplacian(lambda z: z.x0 * z.x1 * z.x2, Ternary(0.3, 0.7, -0.2)) == pytest.approx(
        -3.0, abs=1e-6
    )


def test_laplacian_annihilates_cube_components(rng):
    for _ in range(10):
        p = Ternary(*rng.uniform(-1.5, 1.5, size=3))
        for i in range(3):
            val = ternary_laplacian(lambda z, i=i: cube_field(z).components()[i], p)
            assert abs(val) <= 1e-3


def test_laplacian_annihilates_log_components(rng):
    for _ in range(5):
        p = random_admissible(rng, lo=0.5, hi=2.0)
        for i in range(3):
            val = ternary_laplacian(lambda z, i=i: ta.log(z).components()[i], p)
            assert abs(val) <= 1e-3


def straight_line(a: Ternary, b: Ternary) -> Curve:
    diff = b - a

    def gamma(t):
        return a + scale(diff, t)

    return Curve(gamma, 0.0, 1.0, derivative=lambda t: diff)


def test_line_integral_constant_field():
    a, b = Ternary(0.2, -0.4, 1.0), Ternary(1.3, 0.8, -0.5)
    got = line_integral(one_field, straight_line(a, b), tol=1e-12)
    assert ternary_close(got, b - a, 1e-10)


def test_line_integral_primitive_of_z():
    a, b = ta.ONE, Ternary(2.0, 1.0, 0.0)
    # the primitive z^2/2 is itself type-1 holomorphic
    assert check_holo_type1(square_field, Ternary(1.5, 0.5, 0.0), tol=1e-6).passed
    got = line_integral(identity_field, straight_line(a, b), tol=1e-12)
    expected = scale(mul(b, b) - mul(a, a), 0.5)
    assert ternary_close(got, expected, 1e-10)


def test_line_integral_primitive_consistency():
    pairs = [
        (one_field, lambda z: z),
        (identity_field, lambda z: scale(mul(z, z), 0.5)),
        (square_field, lambda z: scale(mul(mul(z, z), z), 1.0 / 3.0)),
    ]
    a = Ternary(0.5, -0.2, 0.3)
    b = Ternary(1.4, 0.9, -0.6)
    curve = straight_line(a, b)
    for f, primitive in pairs:
        # each primitive is itself type-1 holomorphic
        assert check_holo_type1(TernaryField(primitive), Ternary(0.8, 0.1, 0.2), tol=1e-6).passed
        got = line_integral(f, curve, tol=1e-12)
        assert ternary_close(got, primitive(b) - primitive(a), 1e-9)


def test_line_integral_path_independence():
    a, b = Ternary(0.5, -0.2, 0.3), Ternary(1.4, 0.9, -0.6)
    bulge = Ternary(0.3, 1.1, 0.8)

    def arc(t):
        # quadratic Bezier sharing endpoints with the straight line
        u = 1.0 - t
        mid = scale(a + b, 0.5) + bulge
        return scale(a, u * u) + scale(mid, 2 * u * t) + scale(b, t * t)

    tol = 1e-11
    straight = line_integral(square_field, straight_line(a, b), tol=tol)
    curved = line_integral(square_field, Curve(arc, 0.0, 1.0), tol=tol)
    assert ternary_close(straight, curved, 10 * tol * (1 + straight.max_abs()))


def test_line_integral_quadrature_convergence():
    a, b = Ternary(0.5, -0.2, 0.3), Ternary(1.4, 0.9, -0.6)
    tol = 1e-8
    v1 = line_integral(cube_field, straight_line(a, b), tol=tol)
    v2 = line_integral(cube_field, straight_line(a, b), tol=tol / 2)
    assert (v1 - v2).max_abs() <= tol


def test_trisectrice_loop_residue():
    loop = trisectrice_loop(rho=1.0)
    assert loop.closed
    got = line_integral(reciprocal_field, loop, tol=1e-12)
    expected = Ternary(0.0, 2.0 * math.pi / SQ3, -2.0 * math.pi / SQ3)
    assert ternary_close(got, expected, 1e-8)


def test_line_integral_singular_on_path():
    # midpoint of the parameter range sits exactly on the trisectrice
    def gamma(t):
        return Ternary(1.0 + (t - 0.5), 1.0, 1.0 - (t - 0.5))

    with pytest.raises(SingularOnPath):
        line_integral(reciprocal_field, Curve(gamma, 0.0, 1.0), tol=1e-10)


def inverse_conjugate_field():
    """Phi = 1/(zt ztt) = z/||z||^3."""
    return TernaryField(lambda z: scale(z, 1.0 / norm_cubed(z)), name="z/||z||^3")


def test_surface_band_integral():
    a1, a2 = 1.0, math.e
    got = surface_integral_2form(inverse_conjugate_field(), cubic_band_patch(1.0, a1, a2), tol=1e-9)
    expected = 2.0 * math.pi / SQ3 * math.log(a2 / a1)
    assert got.x0 == pytest.approx(expected, rel=1e-7)
    assert abs(got.x1) <= 1e-8 and abs(got.x2) <= 1e-8


def test_surface_band_integral_polar_route():
    lo, hi = -0.2, 0.3
    got = surface_integral_2form(inverse_conjugate_field(), polar_band_patch(1.0, lo, hi), tol=1e-9)
    expected = 4.0 * math.pi / SQ3 * (hi - lo)
    assert got.x0 == pytest.approx(expected, rel=1e-7)
    assert abs(got.x1) <= 1e-8 and abs(got.x2) <= 1e-8


def test_surface_closed_non_enclosing_is_zero():
    patch = sphere_patch(Ternary(2.0, 0.0, 0.0), 0.5)
    got = surface_integral_2form(inverse_conjugate_field(), patch, tol=1e-10)
    assert got.max_abs() <= 1e-8


def test_volume_unit_cube():
    got = volume_integral_3form(one_field, ((0, 1), (0, 1), (0, 1)), tol=1e-10)
    assert ternary_close(got, ta.ONE, 1e-9)


def test_volume_scalar_slot_only():
    w = TernaryField(lambda z: Ternary(z.x0**2, 0.0, 0.0))
    got = volume_integral_3form(w, ((0, 1), (0, 1), (0, 1)), tol=1e-10)
    assert got.x0 == pytest.approx(1.0 / 3.0, abs=1e-9)
    assert abs(got.x1) <= 1e-12 and abs(got.x2) <= 1e-12


def test_divergence_theorem():
    box = ((0.2, 1.0), (0.1, 0.8), (-0.3, 0.5))
    phi = square_field
    h = 1e-6

    def partial(i, j, p):
        c = list(p.components())
        c[j] += h
        up = phi(Ternary(*c)).components()[i]
        c[j] -= 2 * h
        dn = phi(Ternary(*c)).components()[i]
        return (up - dn) / (2 * h)

    def divergences(p):
        # flux vectors of the three 2-forms: (f0,f1,f2), (f1,f2,f0), (f2,f0,f1)
        d0 = partial(0, 0, p) + partial(1, 1, p) + partial(2, 2, p)
        d1 = partial(1, 0, p) + partial(2, 1, p) + partial(0, 2, p)
        d2 = partial(2, 0, p) + partial(0, 1, p) + partial(1, 2, p)
        return Ternary(d0, d1, d2)

    flux = ta.ZERO
    for face in box_boundary_patches(box):
        flux = flux + surface_integral_2form(phi, face, tol=1e-10)
    vol = volume_integral_3form(TernaryField(divergences), box, tol=1e-8)
    assert ternary_close(flux, vol, 1e-6)


def test_cubic_surface_point_on_level_set(rng):
    for _ in range(20):
        rho = rng.uniform(0.5, 2.0)
        a = rng.uniform(0.2, 3.0)
        theta = rng.uniform(0.0, 2 * math.pi)
        geom = cubic_surface_geometry(rho, a, theta)
        assert norm_cubed(geom.point) == pytest.approx(rho**3, rel=1e-9, abs=1e-9)


def test_cubic_surface_jacobians_match_finite_differences(rng):
    h = 1e-6
    for _ in range(10):
        rho = rng.uniform(0.5, 1.5)
        a = rng.uniform(0.5, 2.0)
        theta = rng.uniform(0.0, 2 * math.pi)

        def point(aa, tt):
            return np.array(cubic_surface_geometry(rho, aa, tt).point.components())

        da = (point(a + h, theta) - point(a - h, theta)) / (2 * h)
        dt = (point(a, theta + h) - point(a, theta - h)) / (2 * h)
        j12 = da[1] * dt[2] - da[2] * dt[1]
        j20 = da[2] * dt[0] - da[0] * dt[2]
        j01 = da[0] * dt[1] - da[1] * dt[0]
        got = cubic_surface_geometry(rho, a, theta).jacobians
        assert np.allclose(got, (j12, j20, j01), atol=1e-8)


def test_cubic_surface_pythagorean_identity(rng):
    for _ in range(50):
        rho = rng.uniform(0.5, 2.0)
        a = rng.uniform(0.3, 3.0)
        theta = rng.uniform(0.0, 2 * math.pi)
        j12, j20, j01 = cubic_surface_geometry(rho, a, theta).jacobians
        expected = rho**6 / (3.0 * SQ3 * a**3)
        assert ta.cubic_form(j01, j12, j20) == pytest.approx(expected, rel=1e-9)


def test_cubic_surface_flat_limit():
    # a -> 0 sends r -> infinity and the dr^2 coefficient to 2/3
    geoms = [cubic_surface_geometry(1.0, a, 0.7) for a in (1e-2, 1e-4, 1e-6)]
    errs = [abs(g.metric_r - 2.0 / 3.0) for g in geoms]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 1e-8
    assert geoms[2].metric_theta == pytest.approx(2.0 / 3.0 * geoms[2].r**2, rel=1e-12)


def test_cubic_surface_domain_errors():
    with pytest.raises(DomainError):
        cubic_surface_geometry(1.0, -0.1, 0.0)
    with pytest.raises(DomainError):
        cubic_surface_geometry(0.0, 1.0, 0.0)


def test_conformal_jacobian_values():
    assert conformal_jacobian(identity_field, Ternary(0.7, -0.3, 0.4)) == pytest.approx(1.0, abs=1e-6)
    got = conformal_jacobian(square_field, Ternary(2.0, 0.0, 0.0))
    assert got == pytest.approx(64.0, rel=1e-6)
    const = TernaryField(lambda z: Ternary(0.3, 0.1, -0.2))
    assert conformal_jacobian(const, Ternary(0.5, 0.2, 0.1)) == pytest.approx(0.0, abs=1e-9)


def test_conformal_jacobian_equals_norm_of_derivative(rng):
    for _ in range(10):
        p = Ternary(*rng.uniform(-1.5, 1.5, size=3))
        det = conformal_jacobian(square_field, p)
        assert det == pytest.approx(norm_cubed(scale(p, 2.0)), rel=1e-5, abs=1e-6)


def test_conformal_jacobian_rejects_non_holomorphic():
    with pytest.raises(NotHolomorphic):
        conformal_jacobian(x0_field, Ternary(0.5, 0.1, -0.2))


def test_closedness_of_holomorphic_one_form(rng):
    # d(F dz) = 0: the curl of each component 1-form vanishes for a random
    # polynomial F = c0 + c1 z + c2 z^2.
    h = 1e-5
    c0, c1, c2 = (Ternary(*rng.uniform(-1, 1, size=3)) for _ in range(3))

    def poly(z):
        return c0 + mul(c1, z) + mul(c2, mul(z, z))

    def coeffs(p):
        f0, f1, f2 = poly(p).components()
        return np.array([[f0, f2, f1], [f1, f0, f2], [f2, f1, f0]])

    for _ in range(10):
        p = Ternary(*rng.uniform(-1.0, 1.0, size=3))
        for comp in range(3):
            for (i, j) in ((0, 1), (1, 2), (2, 0)):
                ei = [0.0] * 3
                ej = [0.0] * 3
                ei[i] = h
                ej[j] = h
                pi_up = Ternary(p.x0 + ei[0], p.x1 + ei[1], p.x2 + ei[2])
                pi_dn = Ternary(p.x0 - ei[0], p.x1 - ei[1], p.x2 - ei[2])
                pj_up = Ternary(p.x0 + ej[0], p.x1 + ej[1], p.x2 + ej[2])
                pj_dn = Ternary(p.x0 - ej[0], p.x1 - ej[1], p.x2 - ej[2])
                dwj_dxi = (coeffs(pi_up)[comp][j] - coeffs(pi_dn)[comp][j]) / (2 * h)
                dwi_dxj = (coeffs(pj_up)[comp][i] - coeffs(pj_dn)[comp][i]) / (2 * h)
                assert abs(dwj_dxi - dwi_dxj) <= 1e-6
