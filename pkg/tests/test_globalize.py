import random

import pytest

from polyvec.action import phi
from polyvec.algebra import GradedElement, TruncationPolicy
from polyvec.fedosov import (constant_connection, flat_connection,
                             random_connection_jet, solve_A)
from polyvec.globalize import (ConditionGateError, condition_gate,
                               extend_vertical, globalize,
                               random_h_perturbation,
                               step2_invariance_report, verify_globalized)
from polyvec.graphs import mc_graph, symmetrize, tetrahedron
from polyvec.complexes import de_rham, taylor_lift
from polyvec.linfty import (GraphMap, IdentityMap, exponential,
                            graph_cochain, identity_morphism,
                            morphism_from_components)
from polyvec.sampling import random_form, random_polyvector
from polyvec.scalars import QQ, T_PARAM

POL = TruncationPolicy(y_order=4, x_order=None)
D = 2
rng = random.Random(9)


def k4_morphism(policy=POL, cap=4):
    gamma = graph_cochain(symmetrize(tetrahedron()), D, policy, cap,
                          weight=T_PARAM)
    return exponential(gamma)


def mc_morphism(policy=POL):
    return morphism_from_components(
        {1: IdentityMap(D, policy), 2: GraphMap(mc_graph(), D, policy)},
        3, D, policy)


@pytest.fixture(scope="module")
def curved_setup():
    cj = random_connection_jet(random.Random(41), D, 2, entries=3)
    fd = solve_A(cj, POL)
    return cj, fd


def test_gate_accepts_trivalent_backed():
    condition_gate(k4_morphism(), D, rng)


def test_gate_rejects_mc_backed_with_condition_number():
    with pytest.raises(ConditionGateError) as err:
        condition_gate(mc_morphism(), D, rng)
    assert 3 in err.value.failing


def test_gate_rejects_non_identity_first():
    from polyvec.linfty import ScaledMap
    bad = morphism_from_components(
        {1: ScaledMap(IdentityMap(D, POL), QQ(2))}, 2, D, POL)
    with pytest.raises(ConditionGateError):
        condition_gate(bad, D, rng)


def test_extend_vertical_commutes_with_de_rham(curved_setup):
    _, fd = curved_setup
    work = fd.work_policy
    F = k4_morphism(work)
    Fv = extend_vertical(F)
    for n in (1, 4):
        for _ in range(2):
            args = [random_form(rng, D, work, n_terms=2, max_x=1, max_y=1)
                    for _ in range(n)]
            homs = [list(a.homogeneous_parts().values()) for a in args]
            import itertools as it
            for combo in it.product(*homs):
                combo = list(combo)
                lhs = GradedElement.zero(D, work)
                parities = [a.degree() for a in combo]
                for i in range(n):
                    sgn = QQ(-1 if sum(parities[:i]) % 2 else 1)
                    new = combo[:i] + [de_rham(combo[i])] + combo[i + 1:]
                    lhs = lhs + Fv.evaluate(n, new).scale(sgn)
                rhs = de_rham(Fv.evaluate(n, combo))
                assert lhs == rhs
                break


def test_extend_vertical_matches_renaming_on_y_inputs():
    # on y-only inputs the vertical extension is the x -> y renaming
    F = k4_morphism(POL)
    Fv = extend_vertical(F)
    for _ in range(3):
        args_x = [random_polyvector(rng, D, POL, n_terms=2, max_x=2)
                  for _ in range(4)]
        args_y = []
        for a in args_x:
            terms = {}
            for (xe, ye, ps, es), c in a.terms.items():
                terms[(ye, xe, ps, es)] = c
            args_y.append(GradedElement(D, POL, terms))
        out_x = F.evaluate(4, args_x)
        out_y = Fv.evaluate(4, args_y)
        expect = {}
        for (xe, ye, ps, es), c in out_x.terms.items():
            expect[(ye, xe, ps, es)] = c
        assert out_y == GradedElement(D, POL, expect)


def test_globalize_identity_any_connection(curved_setup):
    cj, fd = curved_setup
    res = globalize(identity_morphism(D, POL, 2), cj, POL, rng=rng, fd=fd)
    for _ in range(4):
        f = random_polyvector(rng, D, POL, n_terms=2)
        assert res.morphism.evaluate(1, [f]) == f.with_policy(POL)
    args = [random_polyvector(rng, D, POL, n_terms=2) for _ in range(2)]
    assert res.morphism.evaluate(2, args).is_zero()


def test_globalize_flat_collapses_to_original():
    res = globalize(k4_morphism(), flat_connection(D), POL, arity_cap=4,
                    rng=rng)
    F = k4_morphism()
    for _ in range(3):
        f = random_polyvector(rng, D, POL, n_terms=2)
        assert res.morphism.evaluate(1, [f]) == f.with_policy(POL)
        args = [random_polyvector(rng, D, POL, n_terms=2)
                for _ in range(2)]
        assert res.morphism.evaluate(2, args).is_zero()
        args4 = [random_polyvector(rng, D, POL, n_terms=2, max_x=1)
                 for _ in range(4)]
        assert res.morphism.evaluate(4, args4) == \
            phi(symmetrize(tetrahedron()), args4).scale(T_PARAM) \
            .with_policy(POL)


def test_globalize_gate_refuses_mc(curved_setup):
    cj, fd = curved_setup
    with pytest.raises(ConditionGateError):
        globalize(mc_morphism(), cj, POL, rng=rng, fd=fd)


def test_globalized_curved_is_morphism(curved_setup):
    cj, fd = curved_setup
    res = globalize(k4_morphism(), cj, POL, arity_cap=2, rng=rng, fd=fd)
    assert verify_globalized(res, rng, samples=2, arity_max=2)
    f = random_polyvector(rng, D, POL, n_terms=2)
    assert res.morphism.evaluate(1, [f]) == f.with_policy(POL)


def test_globalize_constant_connection_differs_from_flat_b():
    # Gamma^2_11 = 1 is curvature-flat, so A = 0, but B still carries the
    # connection form and the pipeline runs through it
    cj = constant_connection(D, {(2, 1, 1): 1})
    res = globalize(k4_morphism(), cj, POL, arity_cap=2, rng=rng)
    assert res.fedosov.a_form.is_zero()
    assert not res.fedosov.gamma.is_zero()
    assert verify_globalized(res, rng, samples=2, arity_max=2)


def test_h_perturbation_shape():
    h = random_h_perturbation(rng, D, POL)
    for (xe, ye, ps, es), _ in h.terms.items():
        assert sum(ye) == 1 and len(ps) == 1 and len(es) == 1


def test_step2_invariance_for_trivalent(curved_setup):
    cj, fd = curved_setup
    rep = step2_invariance_report(k4_morphism(), cj, POL, rng,
                                  perturbations=2, samples=1, fd=fd)
    assert rep.all_invariant()


def test_step2_necessity_witness(curved_setup):
    cj, fd = curved_setup
    rep = step2_invariance_report(mc_morphism(), cj, POL, rng,
                                  perturbations=3, samples=1, fd=fd)
    assert rep.changed > 0


def test_step2_zero_perturbation_trivial(curved_setup):
    cj, fd = curved_setup
    rep = step2_invariance_report(k4_morphism(), cj, POL, rng,
                                  perturbations=0, samples=1, fd=fd)
    assert rep.all_invariant() and rep.perturbations == 0
