import random

from polyvec.algebra import (ETA, PSI, X, Y, GradedElement,
                             TruncationPolicy, parse)
from polyvec.complexes import (de_rham, delta, delta_star, homotopy_defect,
                               jacobi_defect, schouten_bracket, sigma,
                               taylor_lift, vertical_bracket)
from polyvec.sampling import random_form, random_homogeneous, random_polyvector
from polyvec.scalars import QQ

POL = TruncationPolicy(y_order=4, x_order=4)
FREE = TruncationPolicy(y_order=6, x_order=None)


def gen(d, kind, i, policy=POL):
    return GradedElement.generator(d, policy, kind, i)


def one(d, policy=POL):
    return GradedElement.scalar(d, policy, QQ(1))


# ---- schouten bracket -----------------------------------------------------

def test_bracket_x_psi():
    assert schouten_bracket(gen(1, X, 1), gen(1, PSI, 1)) == one(1)


def test_bracket_vector_fields_is_lie_bracket():
    # [a(x) psi, b(x) psi] = (a b' - a' b) psi  in d = 1
    d = 1
    a = parse("x1^2", d, POL)
    b = parse("x1 + 1", d, POL)
    lhs = schouten_bracket(a * gen(d, PSI, 1), b * gen(d, PSI, 1))
    db = parse("1", d, POL)
    da = parse("2 x1", d, POL)
    expected = (a * db - da * b) * gen(d, PSI, 1)
    assert lhs == expected


def test_bracket_of_functions_vanishes():
    d = 2
    f = parse("x1^2 + x2", d, POL)
    g = parse("x1 x2", d, POL)
    assert schouten_bracket(f, g).is_zero()


def test_vertical_y_psi():
    assert vertical_bracket(gen(1, Y, 1), gen(1, PSI, 1)) == one(1)


def test_vertical_eta_linearity():
    # for eta-free f, g the eta factor moves out with one global sign:
    # [eta^1 f, g] = -eta^1 [f, g]
    rng = random.Random(21)
    d = 2
    for _ in range(20):
        f = random_form(rng, d, POL, n_terms=3, allow_eta=False)
        g = random_form(rng, d, POL, n_terms=3, allow_eta=False)
        e1 = gen(d, ETA, 1)
        assert vertical_bracket(e1 * f, g) == -(e1 * vertical_bracket(f, g))


def test_vertical_no_psi_vanishes():
    d = 2
    f = parse("y1 + x1 y2", d, POL)
    g = parse("y2^2", d, POL)
    assert vertical_bracket(f, g).is_zero()


def test_bracket_symmetry_sign():
    rng = random.Random(22)
    for _ in range(80):
        d = rng.choice([1, 2, 3])
        f = random_homogeneous(rng, d, rng.randint(0, 2), POL, max_y=1)
        g = random_homogeneous(rng, d, rng.randint(0, 2), POL, max_y=1)
        if f is None or g is None:
            continue
        s = QQ(-1 if (f.degree() * g.degree()) % 2 else 1)
        assert vertical_bracket(f, g) == vertical_bracket(g, f).scale(s)


def test_bracket_degree():
    rng = random.Random(23)
    for _ in range(30):
        d = rng.choice([2, 3])
        f = random_homogeneous(rng, d, rng.randint(1, 2), POL)
        g = random_homogeneous(rng, d, rng.randint(1, 2), POL)
        if f is None or g is None:
            continue
        b = vertical_bracket(f, g)
        if not b.is_zero():
            assert b.degrees() == {f.degree() + g.degree() - 1}


def test_jacobi_both_brackets():
    rng = random.Random(24)
    tested = 0
    while tested < 60:
        d = rng.choice([1, 2, 3])
        f = random_homogeneous(rng, d, rng.randint(0, 2), FREE, max_y=1)
        g = random_homogeneous(rng, d, rng.randint(0, 2), FREE, max_y=1)
        h = random_homogeneous(rng, d, rng.randint(0, 2), FREE, max_y=1)
        if f is None or g is None or h is None:
            continue
        tested += 1
        assert jacobi_defect(f, g, h, vertical_bracket).is_zero()
    tested = 0
    while tested < 40:
        d = rng.choice([1, 2, 3])
        f = random_polyvector(rng, d, FREE)
        g = random_polyvector(rng, d, FREE)
        h = random_polyvector(rng, d, FREE)
        parts = [p for p in (f, g, h)]
        for i, p in enumerate(parts):
            hp = p.homogeneous_parts()
            parts[i] = hp[max(hp)] if hp else None
        if any(p is None for p in parts):
            continue
        tested += 1
        assert jacobi_defect(*parts, bracket=schouten_bracket).is_zero()


# ---- delta / delta* / sigma / d ------------------------------------------

def test_delta_defining_actions():
    d = 1
    assert delta(gen(d, Y, 1)) == gen(d, ETA, 1)
    assert delta(gen(d, ETA, 1)).is_zero()


def test_delta_on_y2_psi():
    d = 1
    w = gen(d, Y, 1) * gen(d, Y, 1) * gen(d, PSI, 1)
    expected = (gen(d, Y, 1) * gen(d, PSI, 1) * gen(d, ETA, 1)).scale(QQ(-2))
    assert delta(w) == expected


def test_delta_star_examples():
    d = 2
    assert delta_star(gen(d, ETA, 1)) == gen(d, Y, 1)
    assert delta_star(parse("x1 p2", d, POL)).is_zero()
    w = gen(d, Y, 1) * gen(d, ETA, 1)
    assert delta_star(w) == (gen(d, Y, 1) * gen(d, Y, 1)).scale(QQ(1, 2))


def test_sigma_projection():
    d = 2
    f = parse("x1 p1 + y1 p2 + e1", d, POL)
    assert sigma(f) == parse("x1 p1", d, POL)


def test_sigma_idempotent_and_kills_delta():
    rng = random.Random(25)
    for _ in range(30):
        d = rng.choice([1, 2, 3])
        f = random_form(rng, d, POL)
        assert sigma(sigma(f)) == sigma(f)
        assert sigma(delta(f)).is_zero()


def test_de_rham_examples():
    d = 2
    assert de_rham(gen(d, X, 1)) == gen(d, ETA, 1)
    assert de_rham(gen(d, Y, 1)).is_zero()
    w = gen(d, X, 1) * gen(d, X, 2) * gen(d, PSI, 1)
    expected = -(gen(d, X, 2) * gen(d, PSI, 1) * gen(d, ETA, 1)) \
        - (gen(d, X, 1) * gen(d, PSI, 1) * gen(d, ETA, 2))
    assert de_rham(w) == expected


def test_operator_identities_random():
    rng = random.Random(26)
    for _ in range(60):
        d = rng.choice([1, 2, 3])
        f = random_form(rng, d, POL)
        assert delta(delta(f)).is_zero()
        assert delta_star(delta_star(f)).is_zero()
        assert de_rham(de_rham(f)).is_zero()
        assert (delta(de_rham(f)) + de_rham(delta(f))).is_zero()


def test_homotopy_identity_exact_everywhere():
    rng = random.Random(27)
    for _ in range(120):
        d = rng.choice([1, 2, 3])
        f = random_form(rng, d, POL, n_terms=5, max_x=3, max_y=4)
        assert homotopy_defect(f).is_zero()


def test_delta_derivation_law():
    # verified sign law in this convention:
    # delta[f,g] = -[delta f, g] - (-1)^{|f|} [f, delta g]
    rng = random.Random(28)
    tested = 0
    while tested < 30:
        d = rng.choice([1, 2])
        f = random_homogeneous(rng, d, rng.randint(0, 2), FREE, max_y=1)
        g = random_homogeneous(rng, d, rng.randint(0, 2), FREE, max_y=1)
        if f is None or g is None:
            continue
        tested += 1
        s = QQ(-1 if f.degree() % 2 else 1)
        lhs = delta(vertical_bracket(f, g))
        rhs = -vertical_bracket(delta(f), g) - \
            vertical_bracket(f, delta(g)).scale(s)
        assert lhs == rhs


def test_flat_chart_consistency():
    # [f,g]_Schouten = sigma([lift f, lift g]_vertical), lift = x -> x+y
    rng = random.Random(29)
    for _ in range(25):
        d = rng.choice([1, 2])
        f = random_polyvector(rng, d, FREE)
        g = random_polyvector(rng, d, FREE)
        lhs = schouten_bracket(f, g)
        rhs = sigma(vertical_bracket(taylor_lift(f), taylor_lift(g)))
        assert lhs == rhs
