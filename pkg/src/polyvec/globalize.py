"""The globalization pipeline for graph-backed automorphisms.

Given an automorphism of polyvector fields on the formal chart whose
components are backed by at-least-trivalent graphs, and a torsion-free
connection jet:

  step 1  re-read every component with y-differentiating edges, so it
          acts on vertical forms with the x, eta coefficients inert
          (this extension commutes with the de Rham part d);
  step 2  twist by the Maurer-Cartan element B of the Fedosov package,
          producing a morphism that intertwines the flat differential D;
  step 3  conjugate by the section tau and the projection sigma, landing
          back on polyvector fields:
              F_glob_n(f_1..f_n) = sigma(F_twisted_n(tau f_1..tau f_n)).

The condition gate refuses inputs that fail any of the four conditions
(series stability, linear equivariance, vanishing on vector fields,
vanishing on linear vector fields); the twist is only chart-independent
for morphisms killed by linear-vector-field insertions, which the
perturbation report demonstrates mechanically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .algebra import (ETA, PSI, X, Y, GradedElement, TruncationPolicy,
                      multiply)
from .action import check_conditions
from .complexes import de_rham, schouten_bracket, sigma, vertical_bracket
from .fedosov import ConnectionJet, FedosovData, solve_A, tau
from .graphs import GraphSum
from .linfty import (DgLieContext, GraphMap, IdentityMap, LInftyMorphism,
                     MaurerCartanElement, ScaledMap, SumMap, SymMap,
                     check_morphism, twist)
from .sampling import random_polyvector
from .scalars import QQ


class ConditionGateError(ValueError):
    """An input morphism failed the main-theorem condition gate."""

    def __init__(self, failing: List[int], witnesses: dict):
        self.failing = failing
        self.witnesses = witnesses
        super().__init__(
            "morphism fails globalization conditions " +
            ", ".join(f"({n})" for n in failing))


def _graph_components(phi: LInftyMorphism) -> Dict[int, List[GraphMap]]:
    """Collect the graph-backed content of every component >= 2-ary."""
    found: Dict[int, List[GraphMap]] = {}

    def walk(m: SymMap, acc: List[GraphMap]):
        if isinstance(m, GraphMap):
            acc.append(m)
        elif isinstance(m, ScaledMap):
            walk(m.base, acc)
        elif isinstance(m, SumMap):
            for p in m.parts:
                walk(p, acc)

    for n, comp in phi.components.items():
        if n == 1:
            continue
        acc: List[GraphMap] = []
        walk(comp, acc)
        found[n] = acc
    return found


def condition_gate(phi: LInftyMorphism, dim: int,
                   rng: Optional[random.Random] = None,
                   samples: int = 4) -> None:
    """Raise ConditionGateError unless every component passes the gate.

    The 1-ary component must be the identity; higher graph-backed
    components are tested for all four conditions.
    """
    rng = rng or random.Random(0)
    if not phi.first_is_identity():
        raise ConditionGateError([3], {"arity_1": "not the identity"})
    for n, graph_maps in _graph_components(phi).items():
        for gm in graph_maps:
            report = check_conditions(gm.graphs, dim, rng, samples)
            if not report.all_pass():
                raise ConditionGateError(report.failing(),
                                         report.witnesses)


def extend_vertical(phi: LInftyMorphism) -> LInftyMorphism:
    """Step 1: the same graphs acting through y-derivatives on vertical
    forms; x and eta ride along as coefficients with their Koszul signs.
    """
    comps: Dict[int, SymMap] = {n: comp.verticalized()
                                for n, comp in phi.components.items()}
    return LInftyMorphism(comps, phi.arity_cap, phi.dim, phi.policy)


class GlobalizedComponent(SymMap):
    """sigma after a twisted vertical component after tau on each slot."""

    def __init__(self, base: SymMap, fd: FedosovData,
                 out_policy: TruncationPolicy):
        self.base, self.fd = base, fd
        self.arity = base.arity
        self.degree = base.degree
        self.dim = base.dim
        self.policy = out_policy

    def eval_homogeneous(self, args):
        lifted = [self.fd.tau_cached(a) for a in args]
        val = self.base.evaluate(lifted)
        return sigma(val).with_policy(self.policy)

    def evaluate(self, args):
        if len(args) != self.arity:
            raise ValueError("arity mismatch")
        lifted = [self.fd.tau_cached(a.with_policy(self.fd.policy))
                  for a in args]
        val = self.base.evaluate(lifted)
        return sigma(val).with_policy(self.policy)


@dataclass
class GlobalizationResult:
    morphism: LInftyMorphism
    vertical: LInftyMorphism
    twisted: LInftyMorphism
    fedosov: FedosovData
    mc_element: MaurerCartanElement
    report: dict = field(default_factory=dict)


def globalize(phi: LInftyMorphism, cj: ConnectionJet,
              policy: TruncationPolicy, arity_cap: Optional[int] = None,
              rng: Optional[random.Random] = None,
              gate_samples: int = 4,
              fd: Optional[FedosovData] = None) -> GlobalizationResult:
    """Run the full pipeline; the returned morphism acts on polyvector
    fields at the requested truncation policy."""
    rng = rng or random.Random(0)
    cap = arity_cap or phi.arity_cap
    condition_gate(phi, cj.dim, rng, gate_samples)
    if fd is None:
        fd = solve_A(cj, policy)
    work = fd.work_policy

    # re-home the morphism components at the working policy
    vert = extend_vertical(_with_policy(phi, work))
    mc = MaurerCartanElement(fd.b_form, de_rham, vertical_bracket)
    twisted = twist(vert, mc)

    comps: Dict[int, SymMap] = {}
    for n in range(1, cap + 1):
        base = twisted.component(n)
        if base is None:
            continue
        comps[n] = GlobalizedComponent(base, fd, policy)
    glob = LInftyMorphism(comps, cap, cj.dim, policy)
    return GlobalizationResult(glob, vert, twisted, fd, mc)


def _with_policy(phi: LInftyMorphism,
                 policy: TruncationPolicy) -> LInftyMorphism:
    comps = {n: m.with_policy(policy) for n, m in phi.components.items()}
    return LInftyMorphism(comps, phi.arity_cap, phi.dim, policy)


def verify_globalized(result: GlobalizationResult,
                      rng: random.Random, samples: int = 3,
                      arity_max: Optional[int] = None) -> bool:
    """The globalized morphism satisfies the Schouten morphism equations
    (zero differential) at the requested truncation."""
    glob = result.morphism
    policy = glob.policy

    def zero_test(e: GradedElement) -> bool:
        return e.truncate(y_max=policy.y_order,
                          x_max=policy.x_order).is_zero()

    ctx = DgLieContext(schouten_bracket, None, zero_test)

    def sampler(r: random.Random) -> GradedElement:
        return random_polyvector(r, glob.dim, policy, n_terms=2, max_x=1)

    return check_morphism(glob, ctx, ctx, sampler, rng, samples,
                          arity_max or glob.arity_cap)


def random_h_perturbation(rng: random.Random, dim: int,
                          policy: TruncationPolicy) -> GradedElement:
    """A term shaped like eta^i H^k_ij(x) y^j psi_k with random H."""
    out = GradedElement.zero(dim, policy)
    z = (0,) * dim
    for _ in range(3):
        i = rng.randint(1, dim)
        j = rng.randint(1, dim)
        k = rng.randint(1, dim)
        deg = rng.randint(0, 2)
        xe = [0] * dim
        for _ in range(deg):
            xe[rng.randrange(dim)] += 1
        c = rng.randint(-3, 3)
        if not c:
            continue
        h = GradedElement.from_terms(dim, policy,
                                     [((tuple(xe), z, (), ()), QQ(c))])
        term = multiply(multiply(multiply(
            GradedElement.generator(dim, policy, ETA, i), h),
            GradedElement.generator(dim, policy, Y, j)),
            GradedElement.generator(dim, policy, PSI, k))
        out = out + term
    return out


@dataclass
class InvarianceReport:
    perturbations: int
    invariant: int
    changed: int
    details: list

    def all_invariant(self) -> bool:
        return self.changed == 0


def step2_invariance_report(phi: LInftyMorphism, cj: ConnectionJet,
                            policy: TruncationPolicy,
                            rng: Optional[random.Random] = None,
                            perturbations: int = 5,
                            samples: int = 2,
                            fd: Optional[FedosovData] = None,
                            gate: bool = False) -> InvarianceReport:
    """Perturb B by connection-transformation-shaped terms and compare
    the twisted morphism before and after, on random vertical arguments.

    Morphisms that vanish on linear vector fields are unchanged (the
    chart-independence mechanism); others change, and the report says so.
    """
    rng = rng or random.Random(0)
    if gate:
        condition_gate(phi, cj.dim, rng)
    if fd is None:
        fd = solve_A(cj, policy)
    work = fd.work_policy
    vert = extend_vertical(_with_policy(phi, work))
    mc = MaurerCartanElement(fd.b_form, de_rham, vertical_bracket)
    base = twist(vert, mc)
    y_check = policy.y_order

    details = []
    invariant = 0
    for p in range(perturbations):
        h = random_h_perturbation(rng, cj.dim, work)
        mc_p = MaurerCartanElement(fd.b_form + h, de_rham,
                                   vertical_bracket)
        pert = twist(vert, mc_p)
        same = True
        for n in range(1, phi.arity_cap + 1):
            if base.component(n) is None:
                continue
            for _ in range(samples):
                args = [random_polyvector(rng, cj.dim, work, n_terms=2)
                        for _ in range(n)]
                lifted = [fd.tau_cached(a) for a in args]
                diff = base.evaluate(n, lifted) - pert.evaluate(n, lifted)
                if not diff.truncate(y_max=y_check).is_zero():
                    same = False
                    break
            if not same:
                break
        details.append((p, same))
        if same:
            invariant += 1
    return InvarianceReport(perturbations, invariant,
                            perturbations - invariant, details)
