import itertools
import random

import pytest

from polyvec.algebra import (PSI, X, GradedElement, TruncationPolicy,
                             substitute_linear)
from polyvec.action import (check_conditions, mc_action_matches_schouten,
                            operad_morphism_check, phi,
                            phi_directed_expansion,
                            vector_field_term_vanishing)
from polyvec.complexes import schouten_bracket
from polyvec.graphs import Graph, GraphSum, compose, mc_graph, symmetrize, \
    tetrahedron, unit_graph
from polyvec.sampling import (random_invertible_matrix, random_polyvector,
                              random_vector_field)
from polyvec.scalars import QQ

POL = TruncationPolicy(y_order=None, x_order=None)
rng = random.Random(42)


def random_graph(n_max=4, k_max=5, n_min=1):
    n = rng.randint(n_min, n_max)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    rng.shuffle(pairs)
    k = rng.randint(0, min(k_max, len(pairs)))
    return Graph(n, tuple(sorted(pairs[:k])))


def k4_graph():
    return Graph(4, tuple(itertools.combinations(range(1, 5), 2)))


def test_mc_on_x_psi():
    d = 1
    x = GradedElement.generator(d, POL, X, 1)
    p = GradedElement.generator(d, POL, PSI, 1)
    out = phi(mc_graph(), [x, p])
    assert out == GradedElement.scalar(d, POL, QQ(1))


def test_mc_equals_schouten_bracket():
    for _ in range(60):
        assert mc_action_matches_schouten(rng, rng.choice([1, 2]), POL)


def test_unit_graph_is_identity():
    for _ in range(10):
        d = rng.choice([1, 2])
        g = random_polyvector(rng, d, POL)
        assert phi(unit_graph(), [g]) == g


def test_k4_vanishes_on_vector_fields():
    for _ in range(6):
        d = rng.choice([1, 2])
        args = [random_vector_field(rng, d, POL) for _ in range(4)]
        assert phi(k4_graph(), args).is_zero()


def test_directed_expansion_agrees_with_phi():
    for _ in range(60):
        d = rng.choice([1, 2])
        g = random_graph(4, 5)
        args = [random_polyvector(rng, d, POL, n_terms=2)
                for _ in range(g.n)]
        assert phi(g, args) == phi_directed_expansion(g, args)


def test_double_psi_terms_vanish_on_vector_fields():
    for _ in range(5):
        d = rng.choice([1, 2])
        g = random_graph(4, 5, n_min=2)
        args = [random_vector_field(rng, d, POL) for _ in range(g.n)]
        assert vector_field_term_vanishing(g, args)


def test_edge_order_independence_of_evaluation():
    for _ in range(10):
        d = rng.choice([1, 2])
        g = random_graph(4, 4)
        if g.k < 2:
            continue
        perm = list(range(g.k))
        rng.shuffle(perm)
        inv = sum(1 for a in range(g.k) for b in range(a + 1, g.k)
                  if perm[a] > perm[b])
        shuffled = GraphSum.single(g.n, [g.edges[p] for p in perm],
                                   QQ(-1 if inv % 2 else 1))
        args = [random_polyvector(rng, d, POL, n_terms=2)
                for _ in range(g.n)]
        assert phi(shuffled, args) == phi(g, args)


def test_multilinearity():
    d = 2
    g = random_graph(3, 3, n_min=2)
    args = [random_polyvector(rng, d, POL) for _ in range(g.n)]
    a1 = random_polyvector(rng, d, POL)
    a2 = random_polyvector(rng, d, POL)
    pos = rng.randrange(g.n)
    combined = list(args)
    combined[pos] = a1 + a2.scale(QQ(3, 2))
    v1 = list(args)
    v1[pos] = a1
    v2 = list(args)
    v2[pos] = a2
    assert phi(g, combined) == phi(g, v1) + phi(g, v2).scale(QQ(3, 2))


def test_operad_morphism_mc_pair():
    for _ in range(15):
        d = rng.choice([1, 2])
        i = rng.choice([1, 2])
        args = [random_polyvector(rng, d, POL, n_terms=2) for _ in range(3)]
        mc = Graph(2, ((1, 2),))
        assert operad_morphism_check(mc, i, mc, args)


def test_operad_morphism_unit():
    for _ in range(5):
        d = rng.choice([1, 2])
        g = random_graph(3, 3)
        i = rng.randint(1, g.n)
        args = [random_polyvector(rng, d, POL, n_terms=2)
                for _ in range(g.n)]
        assert operad_morphism_check(g, i, unit_graph(), args)


def test_operad_morphism_random():
    for _ in range(30):
        d = rng.choice([1, 2])
        g1, g2 = random_graph(3, 3), random_graph(3, 3)
        i = rng.randint(1, g1.n)
        args = [random_polyvector(rng, d, POL, n_terms=2)
                for _ in range(g1.n + g2.n - 1)]
        assert operad_morphism_check(g1, i, g2, args)


def test_phi_arity_mismatch():
    with pytest.raises(ValueError):
        phi(mc_graph(), [random_polyvector(rng, 2, POL)])


def test_equivariance_of_phi():
    for _ in range(10):
        d = rng.choice([1, 2])
        g = random_graph(3, 3)
        m = random_invertible_matrix(rng, d)
        args = [random_polyvector(rng, d, POL, n_terms=2)
                for _ in range(g.n)]
        lhs = phi(g, [substitute_linear(a, m) for a in args])
        rhs = substitute_linear(phi(g, args), m)
        assert lhs == rhs


def test_conditions_k4_all_pass():
    rep = check_conditions(symmetrize(tetrahedron()), 2, rng, samples=3)
    assert rep.all_pass()


def test_conditions_mc_fails_three():
    rep = check_conditions(mc_graph(), 2, rng, samples=4)
    assert not rep.vanishes_on_vector_fields
    assert 3 in rep.failing()


def test_conditions_zero_element_vacuous():
    zero = GraphSum(2, {})
    rep = check_conditions(zero, 2, rng, samples=2)
    assert rep.all_pass()


def test_symmetrized_action_is_graded_symmetric():
    # the operator of an invariant sum is symmetric under adjacent swaps
    # weighted by the plain Koszul sign of the arguments
    k4 = symmetrize(tetrahedron())
    for _ in range(5):
        d = rng.choice([1, 2])
        args = [random_polyvector(rng, d, POL, n_terms=2) for _ in range(4)]
        homs = [list(a.homogeneous_parts().items()) for a in args]
        for combo in itertools.product(*homs):
            degs = [dg for dg, _ in combo]
            els = [el for _, el in combo]
            pos = rng.randrange(3)
            swapped = list(els)
            swapped[pos], swapped[pos + 1] = swapped[pos + 1], swapped[pos]
            s = QQ(-1 if (degs[pos] * degs[pos + 1]) % 2 else 1)
            assert phi(k4, swapped) == phi(k4, els).scale(s)
            break
