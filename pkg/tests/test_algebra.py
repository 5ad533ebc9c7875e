import random

import pytest

from polyvec.algebra import (ETA, PSI, X, Y, GradedElement, ParseError,
                             TruncationPolicy, derive, multiply, parse,
                             serialize, substitute_linear)
from polyvec.sampling import (random_form, random_invertible_matrix)
from polyvec.scalars import QQ

POL = TruncationPolicy(y_order=4, x_order=4)


def gen(d, kind, i, policy=POL):
    return GradedElement.generator(d, policy, kind, i)


def test_odd_anticommutation():
    p1, p2 = gen(2, PSI, 1), gen(2, PSI, 2)
    assert p1 * p2 == -(p2 * p1)
    assert serialize(p1 * p2) == "1 * p1 p2"
    assert serialize(p2 * p1) == "-1 * p1 p2"


def test_odd_square_is_zero():
    p1 = gen(1, PSI, 1)
    assert (p1 * p1).is_zero()
    e1 = gen(1, ETA, 1)
    assert (e1 * e1).is_zero()


def test_distributivity_with_truncation():
    pol = TruncationPolicy(y_order=1, x_order=None)
    x1 = gen(1, X, 1, pol)
    y1 = gen(1, Y, 1, pol)
    e1 = gen(1, ETA, 1, pol)
    out = (x1 + y1) * e1
    assert out == parse("x1 e1 + y1 e1", 1, pol)


def test_mixed_psi_eta_sign():
    # eta before psi reorders with a sign
    e1, p1 = gen(1, ETA, 1), gen(1, PSI, 1)
    assert serialize(e1 * p1) == "-1 * p1 e1"
    assert serialize(p1 * e1) == "1 * p1 e1"


def test_graded_commutativity_random():
    rng = random.Random(7)
    for _ in range(60):
        d = rng.choice([1, 2, 3])
        a = random_form(rng, d, POL)
        b = random_form(rng, d, POL)
        for da, fa in a.homogeneous_parts().items():
            for db, fb in b.homogeneous_parts().items():
                s = QQ(-1 if (da * db) % 2 else 1)
                assert fa * fb == (fb * fa).scale(s)


def test_associativity_random():
    rng = random.Random(8)
    pol = TruncationPolicy(y_order=None, x_order=None)
    for _ in range(40):
        d = rng.choice([1, 2])
        a = random_form(rng, d, pol, n_terms=3)
        b = random_form(rng, d, pol, n_terms=3)
        c = random_form(rng, d, pol, n_terms=3)
        assert (a * b) * c == a * (b * c)


def test_derive_leading_psi():
    p1, p2 = gen(2, PSI, 1), gen(2, PSI, 2)
    w = p1 * p2
    assert derive(PSI, 1, w) == p2
    assert derive(PSI, 2, w) == -p1


def test_derive_even():
    y1, p1 = gen(1, Y, 1), gen(1, PSI, 1)
    w = y1 * y1 * p1
    assert derive(Y, 1, w) == (y1 * p1).scale(QQ(2))


def test_derive_eta_counts_psis():
    p1, e1 = gen(1, PSI, 1), gen(1, ETA, 1)
    w = p1 * e1
    assert derive(ETA, 1, w) == -p1


def test_leibniz_random():
    rng = random.Random(9)
    for _ in range(50):
        d = rng.choice([1, 2, 3])
        a = random_form(rng, d, POL, n_terms=3)
        b = random_form(rng, d, POL, n_terms=3)
        kind = rng.choice([X, Y, PSI, ETA])
        i = rng.randint(1, d)
        gdeg = 1 if kind in (PSI, ETA) else 0
        lhs = derive(kind, i, a * b)
        rhs = multiply(derive(kind, i, a), b)
        for da, fa in a.homogeneous_parts().items():
            s = QQ(-1 if (gdeg * da) % 2 else 1)
            rhs = rhs + multiply(fa, derive(kind, i, b)).scale(s)
        assert lhs == rhs


def test_odd_derivations_square_to_zero():
    rng = random.Random(10)
    for _ in range(30):
        d = rng.choice([1, 2, 3])
        a = random_form(rng, d, POL)
        for kind in (PSI, ETA):
            i = rng.randint(1, d)
            assert derive(kind, i, derive(kind, i, a)).is_zero()


def test_truncation_coherence():
    rng = random.Random(11)
    tight = TruncationPolicy(y_order=2, x_order=2)
    loose = TruncationPolicy(y_order=None, x_order=None)
    for _ in range(30):
        d = rng.choice([1, 2])
        a = random_form(rng, d, loose, max_x=2, max_y=2)
        b = random_form(rng, d, loose, max_x=2, max_y=2)
        full = (a * b).with_policy(tight)
        trunc = a.with_policy(tight) * b.with_policy(tight)
        assert full == trunc
        i = rng.randint(1, d)
        assert derive(Y, i, a).with_policy(tight) == \
            derive(Y, i, a.with_policy(tight))


def test_substitute_identity():
    d = 2
    ident = [[QQ(1), QQ(0)], [QQ(0), QQ(1)]]
    rng = random.Random(12)
    a = random_form(rng, d, POL)
    assert substitute_linear(a, ident) == a


def test_substitute_contragredient_weights_cancel():
    d = 2
    m = [[QQ(2), QQ(0)], [QQ(0), QQ(1)]]
    y1p1 = gen(d, Y, 1) * gen(d, PSI, 1)
    assert substitute_linear(y1p1, m) == y1p1


def test_substitute_euler_field_invariant():
    rng = random.Random(13)
    d = 2
    euler = gen(d, Y, 1) * gen(d, PSI, 1) + gen(d, Y, 2) * gen(d, PSI, 2)
    for _ in range(10):
        m = random_invertible_matrix(rng, d)
        assert substitute_linear(euler, m) == euler


def test_substitute_transposition_eta_sign():
    d = 2
    m = [[QQ(0), QQ(1)], [QQ(1), QQ(0)]]
    e12 = gen(d, ETA, 1) * gen(d, ETA, 2)
    assert substitute_linear(e12, m) == -e12


def test_substitute_homomorphism_and_composition():
    rng = random.Random(14)
    d = 2
    for _ in range(10):
        m = random_invertible_matrix(rng, d)
        n = random_invertible_matrix(rng, d)
        a = random_form(rng, d, POL, n_terms=2, max_x=1, max_y=1)
        b = random_form(rng, d, POL, n_terms=2, max_x=1, max_y=1)
        assert substitute_linear(a * b, m) == \
            substitute_linear(a, m) * substitute_linear(b, m)
        nm = [[sum(n[i][k] * m[k][j] for k in range(d)) for j in range(d)]
              for i in range(d)]
        assert substitute_linear(substitute_linear(a, n), m) == \
            substitute_linear(a, nm)


def test_substitute_singular_matrix_rejected():
    d = 2
    m = [[QQ(1), QQ(1)], [QQ(1), QQ(1)]]
    with pytest.raises(ValueError):
        substitute_linear(gen(d, X, 1), m)


def test_dimension_mismatch_rejected():
    a = gen(1, X, 1)
    b = gen(2, X, 1)
    with pytest.raises(ValueError):
        _ = a * b


def test_serialize_parse_roundtrip():
    rng = random.Random(15)
    for _ in range(40):
        d = rng.choice([1, 2, 3])
        a = random_form(rng, d, POL)
        assert parse(serialize(a), d, POL) == a


def test_parse_whitespace_insensitive():
    a = parse("1/2*x1^2 p1  +  -3 y2 e1", 2, POL)
    b = parse("1/2 * x1^2 p1+-3*y2 e1", 2, POL)
    assert a == b


def test_parse_errors():
    with pytest.raises(ParseError):
        parse("x9", 2, POL)
    with pytest.raises(ParseError):
        parse("p1^2", 2, POL)
    with pytest.raises(ParseError):
        parse("frog", 2, POL)


def test_canonical_emission_deterministic():
    a = parse("y1 p1 + x1 + 2 * p1 p2", 2, POL)
    b = parse("2 p1 p2 + y1 p1 + x1", 2, POL)
    assert serialize(a) == serialize(b)
