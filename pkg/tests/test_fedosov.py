import random

import pytest

from polyvec.algebra import (ETA, PSI, X, Y, GradedElement,
                             TruncationPolicy, parse, serialize)
from polyvec.complexes import (de_rham, delta, delta_star, sigma,
                               taylor_lift, vertical_bracket)
from polyvec.fedosov import (ConnectionJet, JetParseError, NotCocycleError,
                             check_lemma4, constant_connection, curvature,
                             d_squared_defect, differential_D,
                             flat_connection, flatness_residual, gamma_form,
                             invert_exact, nabla, parse_connection,
                             random_connection_jet, recursion_residual,
                             serialize_connection, solve_A, tau)
from polyvec.sampling import random_form, random_polyvector
from polyvec.scalars import QQ

POL = TruncationPolicy(y_order=4, x_order=2)
rng = random.Random(3)


@pytest.fixture(scope="module")
def curved_fd():
    cj = random_connection_jet(random.Random(11), 2, 2, entries=3)
    return solve_A(cj, POL)


def test_flat_connection_package():
    fd = solve_A(flat_connection(2), POL)
    assert fd.a_form.is_zero()
    assert fd.r_form.is_zero()
    # D = d - delta
    f = random_form(rng, 2, fd.work_policy, n_terms=3)
    assert differential_D(fd, f) == de_rham(f) - delta(f)
    y1 = GradedElement.generator(2, fd.work_policy, Y, 1)
    e1 = GradedElement.generator(2, fd.work_policy, ETA, 1)
    assert differential_D(fd, y1) == -e1


def test_nabla_flat_is_de_rham():
    cj = flat_connection(2)
    f = random_form(rng, 2, TruncationPolicy(4, None), n_terms=3)
    assert nabla(cj, f) == de_rham(f)


def test_nabla_on_unit_vanishes():
    cj = random_connection_jet(rng, 2, 2)
    one = GradedElement.scalar(2, TruncationPolicy(4, None), QQ(1))
    assert nabla(cj, one).is_zero()


def test_nabla_dimension_mismatch():
    cj = random_connection_jet(rng, 2, 2)
    f = random_form(rng, 3, TruncationPolicy(4, None))
    with pytest.raises(ValueError):
        nabla(cj, f)


def test_curvature_flat_and_d1():
    assert curvature(flat_connection(2), POL).is_zero()
    # d = 1: the two-form indices must differ, so R = 0 always
    cj = ConnectionJet(1, 2)
    pol1 = TruncationPolicy(None, None)
    cj.set_entry(1, 1, 1, parse("x1", 1, pol1))
    assert curvature(cj, POL).is_zero()


def test_constant_gamma211_is_flat():
    # a single constant Christoffel entry has zero curvature, hence A = 0
    fd = solve_A(constant_connection(2, {(2, 1, 1): 1}), POL)
    assert fd.r_form.is_zero()
    assert fd.a_form.is_zero()
    assert not fd.gamma.is_zero()


def test_nabla_squared_is_curvature_bracket(curved_fd):
    fd = curved_fd
    assert not fd.r_form.is_zero()
    for _ in range(6):
        f = random_form(rng, 2, fd.work_policy, n_terms=3, max_x=1, max_y=2)
        lhs = fd.nabla(fd.nabla(f))
        rhs = vertical_bracket(fd.r_form, f)
        assert (lhs - rhs).truncate(y_max=POL.y_order).is_zero()


def test_curvature_equals_gamma_expression(curved_fd):
    fd = curved_fd
    expected = -de_rham(fd.gamma) - \
        vertical_bracket(fd.gamma, fd.gamma).scale(QQ(1, 2))
    assert fd.r_form == expected


def test_bianchi_identities(curved_fd):
    fd = curved_fd
    assert delta(fd.r_form).is_zero()
    assert fd.nabla(fd.r_form).truncate(y_max=POL.y_order).is_zero()


def test_delta_nabla_anticommute(curved_fd):
    fd = curved_fd
    for _ in range(5):
        f = random_form(rng, 2, fd.work_policy, n_terms=3, max_x=1, max_y=2)
        out = delta(fd.nabla(f)) + fd.nabla(delta(f))
        assert out.truncate(y_max=POL.y_order).is_zero()


def test_a_form_invariants(curved_fd):
    fd = curved_fd
    assert not fd.a_form.is_zero()
    assert delta_star(fd.a_form).is_zero()
    assert sigma(fd.a_form).is_zero()
    assert min(sum(m[1]) for m in fd.a_form.terms) >= 2
    # one-form in eta, vector field in psi
    assert {len(m[3]) for m in fd.a_form.terms} == {1}
    assert {len(m[2]) for m in fd.a_form.terms} == {1}


def test_first_slice_is_minus_delta_star_r(curved_fd):
    fd = curved_fd
    assert fd.a_slices[2] == delta_star(-fd.r_form)


def test_flatness_equation(curved_fd):
    assert flatness_residual(curved_fd).is_zero()


def test_recursion_fixed_point(curved_fd):
    assert recursion_residual(curved_fd).is_zero()


def test_d_squared_zero(curved_fd):
    fd = curved_fd
    for _ in range(8):
        f = random_form(rng, 2, fd.work_policy, n_terms=3, max_x=1, max_y=2)
        assert d_squared_defect(fd, f).is_zero()


def test_d_matches_b_description(curved_fd):
    fd = curved_fd
    f = random_form(rng, 2, fd.work_policy, n_terms=3)
    assert differential_D(fd, f) == fd.differential_via_b(f)


def test_d_is_bracket_derivation(curved_fd):
    # D[f,g] = -[Df,g] - (-1)^{|f|} [f,Dg], as for delta and d
    fd = curved_fd
    tested = 0
    while tested < 10:
        f = random_form(rng, 2, fd.work_policy, n_terms=2, max_x=1, max_y=1)
        g = random_form(rng, 2, fd.work_policy, n_terms=2, max_x=1, max_y=1)
        fparts = f.homogeneous_parts()
        gparts = g.homogeneous_parts()
        if not fparts or not gparts:
            continue
        df_, fh = sorted(fparts.items())[0]
        dg_, gh = sorted(gparts.items())[0]
        tested += 1
        s = QQ(-1 if df_ % 2 else 1)
        lhs = differential_D(fd, vertical_bracket(fh, gh))
        rhs = -vertical_bracket(differential_D(fd, fh), gh) - \
            vertical_bracket(fh, differential_D(fd, gh)).scale(s)
        assert (lhs - rhs).truncate(y_max=POL.y_order - 1).is_zero()


def test_tau_flat_is_taylor_lift():
    fd = solve_A(flat_connection(2), POL)
    for _ in range(5):
        f0 = random_polyvector(rng, 2, POL)
        lifted = taylor_lift(f0.with_policy(fd.work_policy))
        assert tau(fd, f0) == lifted


def test_tau_of_unit(curved_fd):
    one = GradedElement.scalar(2, POL, QQ(1))
    assert tau(curved_fd, one) == \
        GradedElement.scalar(2, curved_fd.work_policy, QQ(1))


def test_tau_section_properties(curved_fd):
    fd = curved_fd
    for _ in range(8):
        f0 = random_polyvector(rng, 2, POL)
        tf = tau(fd, f0)
        assert sigma(tf) == f0.with_policy(fd.work_policy)
        assert differential_D(fd, tf, y_max=POL.y_order) \
            .truncate(y_max=POL.y_order).is_zero()


def test_invert_exact_roundtrip(curved_fd):
    fd = curved_fd
    for _ in range(6):
        h = random_form(rng, 2, fd.work_policy, n_terms=2, max_x=1, max_y=1)
        f = differential_D(fd, h)
        if f.is_zero():
            continue
        g = invert_exact(fd, f)
        assert sigma(g).is_zero()
        assert delta_star(g).is_zero()
        defect = differential_D(fd, g) - f
        assert defect.truncate(y_max=POL.y_order).is_zero()


def test_invert_exact_zero():
    fd = solve_A(flat_connection(2), POL)
    zero = GradedElement.zero(2, fd.work_policy)
    assert invert_exact(fd, zero).is_zero()


def test_invert_exact_flat_eta_example():
    fd = solve_A(flat_connection(2), POL)
    e1 = GradedElement.generator(2, fd.work_policy, ETA, 1)
    y1 = GradedElement.generator(2, fd.work_policy, Y, 1)
    g = invert_exact(fd, -e1)       # -eta^1 = D(y^1)
    assert g == y1


def test_invert_exact_rejects_non_cocycle(curved_fd):
    fd = curved_fd
    y1 = GradedElement.generator(2, fd.work_policy, Y, 1)
    e1 = GradedElement.generator(2, fd.work_policy, ETA, 1)
    bad = (y1 * y1 * e1).scale(QQ(1))
    with pytest.raises(NotCocycleError):
        invert_exact(fd, bad)


def test_lemma4_flat_and_curved(curved_fd):
    flat = solve_A(flat_connection(2), POL)
    for fd in (flat, curved_fd):
        for _ in range(6):
            f0 = random_polyvector(rng, 2, POL)
            g0 = random_polyvector(rng, 2, POL)
            assert check_lemma4(fd, f0, g0)
    # functions bracket to zero trivially
    f0 = parse("x1^2", 2, POL)
    g0 = parse("x2", 2, POL)
    assert check_lemma4(curved_fd, f0, g0)


def test_connection_roundtrip_and_symmetry():
    cj = random_connection_jet(rng, 2, 2, entries=4)
    text = serialize_connection(cj)
    back = parse_connection(text)
    assert back.dim == cj.dim
    for key, val in cj.christoffel.items():
        got = back.gamma(*key)
        if val.is_zero():
            assert got is None or got.is_zero()
        else:
            assert got == val
    # symmetric closure: either order parses to the same entry
    cj2 = parse_connection("dim 2\nGamma 1 2 1 : x1\n")
    assert cj2.gamma(1, 1, 2) == parse("x1", 2,
                                       TruncationPolicy(None, 2))


def test_connection_parse_errors():
    with pytest.raises(JetParseError):
        parse_connection("Gamma 1 1 : x1\n")
    with pytest.raises(JetParseError):
        parse_connection("dim 2\nGamma 1 1 2 : x1\nGamma 1 2 1 : x2\n")
    with pytest.raises(JetParseError):
        parse_connection("")


def test_d3_package_smoke():
    cj = random_connection_jet(random.Random(21), 3, 2, entries=2)
    fd = solve_A(cj, POL)
    assert flatness_residual(fd).is_zero()
    f = random_form(rng, 3, fd.work_policy, n_terms=2, max_x=1, max_y=1)
    assert d_squared_defect(fd, f).is_zero()
    f0 = random_polyvector(rng, 3, POL)
    assert sigma(tau(fd, f0)) == f0.with_policy(fd.work_policy)
