"""The named check suite behind verify-all and the acceptance tests.

Every check returns a CheckResult with a stable name, so the CLI can
print one deterministic `CHECK <name> PASS|FAIL` line per invariant.
All randomness is drawn from a seeded generator.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

from .action import (check_conditions, operad_morphism_check, phi,
                     phi_directed_expansion)
from .algebra import GradedElement, TruncationPolicy
from .complexes import (de_rham, delta, delta_star, homotopy_defect,
                        jacobi_defect, schouten_bracket, sigma,
                        vertical_bracket)
from .fedosov import (constant_connection, d_squared_defect, differential_D,
                      flat_connection, flatness_residual, invert_exact,
                      random_connection_jet, check_lemma4, solve_A, tau)
from .globalize import (globalize, step2_invariance_report,
                        verify_globalized)
from .graphs import (Graph, GraphSum, differential, gc2_basis, lie_bracket,
                     mc_graph, symmetrize, tetrahedron)
from .linfty import exponential, graph_cochain
from .sampling import (random_form, random_homogeneous, random_polyvector)
from .scalars import QQ, T_PARAM

SCOPE_STATEMENT = (
    "Full-scale claims are out of desk range and are NOT reproduced here: "
    "the zeroth graph-complex cohomology in general (and with it the "
    "identification of its degree-zero part with the "
    "Grothendieck-Teichmuller algebra), and the induced group action as a "
    "whole, require unbounded graph sizes. The suite instead verifies "
    "every mechanism those results rest on, exactly, at graph size <= 5 "
    "and arity <= 2 at the default truncation: the graph complex checks, "
    "the operator action calibration, the condition gate, and the "
    "end-to-end globalization.")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _timed(name: str, fn: Callable[[], tuple]) -> CheckResult:
    t0 = time.time()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashed check is a failed check
        return CheckResult(name, False, f"exception: {exc}",
                           time.time() - t0)
    return CheckResult(name, passed, detail, time.time() - t0)


# ---------------------------------------------------------------------------

def check_homotopy_identity(seed: int = 0, samples: int = 500,
                            y_order: int = 4) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pol = TruncationPolicy(y_order=y_order, x_order=4)
        for i in range(samples):
            d = rng.choice([1, 2, 3])
            f = random_form(rng, d, pol, n_terms=5, max_x=3,
                            max_y=y_order)
            if not homotopy_defect(f).is_zero():
                return False, f"defect at sample {i} (d={d})"
        return True, f"{samples} random forms, exact"
    return _timed("homotopy-identity", run)


def check_odd_jacobi(seed: int = 0, triples: int = 200) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pol = TruncationPolicy(y_order=6, x_order=None)
        done = 0
        while done < triples:
            d = rng.choice([1, 2, 3])
            if done % 2:
                fgh = [random_homogeneous(rng, d, rng.randint(0, 2), pol,
                                          max_y=1) for _ in range(3)]
                bracket = vertical_bracket
            else:
                fgh = []
                for _ in range(3):
                    p = random_polyvector(rng, d, pol, n_terms=3)
                    parts = p.homogeneous_parts()
                    fgh.append(parts[max(parts)] if parts else None)
                bracket = schouten_bracket
            if any(v is None for v in fgh):
                continue
            done += 1
            if not jacobi_defect(*fgh, bracket=bracket).is_zero():
                return False, f"Jacobi defect at triple {done}"
        return True, f"{triples} homogeneous triples, both brackets, exact"
    return _timed("odd-jacobi", run)


def check_fedosov_package(seed: int = 0, y_order: int = 4,
                          x_order: int = 2,
                          d_squared_samples: int = 50) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pol = TruncationPolicy(y_order=y_order, x_order=x_order)
        flat = solve_A(flat_connection(2, x_order), pol)
        if not flat.a_form.is_zero():
            return False, "flat connection gave a nonzero recursion output"
        jets = [random_connection_jet(rng, 2, x_order, entries=3)
                for _ in range(3)]
        jets += [random_connection_jet(rng, 3, x_order, entries=2)
                 for _ in range(2)]
        per_jet = max(1, d_squared_samples // len(jets))
        for jn, cj in enumerate(jets):
            fd = solve_A(cj, pol)
            a = fd.a_form
            if not delta_star(a).is_zero():
                return False, f"jet {jn}: delta* A != 0"
            if not sigma(a).is_zero():
                return False, f"jet {jn}: sigma A != 0"
            if a.terms and min(sum(m[1]) for m in a.terms) < 2:
                return False, f"jet {jn}: A has y-degree < 2"
            if not flatness_residual(fd).is_zero():
                return False, f"jet {jn}: flatness residual != 0"
            for s in range(per_jet):
                f = random_form(rng, cj.dim, fd.work_policy, n_terms=3,
                                max_x=1, max_y=2)
                if not d_squared_defect(fd, f).is_zero():
                    return False, f"jet {jn}: D^2 != 0 at sample {s}"
        return True, (f"5 random jets (d=2,3), flat special case, "
                      f"{per_jet * len(jets)} D^2 inputs")
    return _timed("fedosov-package", run)


def check_quasi_isomorphism(seed: int = 0, y_order: int = 4,
                            sections: int = 100,
                            cocycles: int = 50) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pol = TruncationPolicy(y_order=y_order, x_order=2)
        fds = [solve_A(random_connection_jet(rng, 2, 2, entries=3), pol),
               solve_A(random_connection_jet(rng, 3, 2, entries=2), pol)]
        for i in range(sections):
            fd = fds[i % len(fds)]
            d = fd.cj.dim
            f0 = random_polyvector(rng, d, pol, n_terms=3)
            tf = tau(fd, f0)
            if sigma(tf) != f0.with_policy(fd.work_policy):
                return False, f"sigma(tau f) != f at sample {i}"
            if not differential_D(fd, tf, y_max=y_order) \
                    .truncate(y_max=y_order).is_zero():
                return False, f"D(tau f) != 0 at sample {i}"
        for i in range(cocycles):
            fd = fds[i % len(fds)]
            d = fd.cj.dim
            h = random_form(rng, d, fd.work_policy, n_terms=2, max_x=1,
                            max_y=1)
            f = differential_D(fd, h)
            if f.is_zero():
                continue
            g = invert_exact(fd, f)
            defect = differential_D(fd, g) - f
            if not defect.truncate(y_max=y_order).is_zero():
                return False, f"D g != f at cocycle {i}"
        return True, (f"{sections} sections, {cocycles} constructed "
                      "cocycles, d = 2 and 3")
    return _timed("quasi-isomorphism", run)


def check_bracket_compatibility(seed: int = 0, y_order: int = 4,
                                pairs: int = 100) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pol = TruncationPolicy(y_order=y_order, x_order=2)
        fds = [solve_A(random_connection_jet(rng, 2, 2, entries=3), pol)
               for _ in range(2)]
        for i in range(pairs):
            fd = fds[i % len(fds)]
            f0 = random_polyvector(rng, 2, pol, n_terms=3)
            g0 = random_polyvector(rng, 2, pol, n_terms=3)
            if not check_lemma4(fd, f0, g0):
                return False, f"bracket compatibility failed at pair {i}"
        return True, f"{pairs} pairs over non-flat jets, d = 2, exact"
    return _timed("bracket-compatibility", run)


def _naive_edge_sort(edges):
    edges = [tuple(sorted(e)) for e in edges]
    sign = 1
    for i in range(len(edges)):
        lo = min(range(i, len(edges)), key=lambda j: edges[j])
        if lo != i:
            edges[i], edges[lo] = edges[lo], edges[i]
            sign = -sign
    for i in range(1, len(edges)):
        if edges[i - 1] == edges[i]:
            return None
    return tuple(edges), sign


def _naive_mc_bracket(terms: dict, n: int, degree: int) -> dict:
    """[MC, a] by direct reconnection loops, then averaging; independent
    of the operadic composition code."""
    acc: dict = {}

    def add(raw, coeff):
        res = _naive_edge_sort(raw)
        if res is None:
            return
        key, s = res
        acc[key] = acc.get(key, QQ(0)) + coeff * s
        if not acc[key]:
            del acc[key]

    mc_edges = ((1, 2),)
    for edges, c in terms.items():
        # MC o_i a for i = 1, 2
        for i in (1, 2):
            def rl(v):
                return v if v < i else v + n - 1
            for spot in range(n):
                raw = []
                for (a, b) in mc_edges:
                    ends = []
                    for v in (a, b):
                        if v == i:
                            ends.append(i + spot)
                        else:
                            ends.append(rl(v))
                    raw.append(tuple(ends))
                raw += [(i + a - 1, i + b - 1) for a, b in edges]
                add(raw, c)
        # minus (-1)^{1 * degree} a o_j MC
        s = QQ(-1) if (degree % 2 == 0) else QQ(1)
        for j in range(1, n + 1):
            def rl2(v):
                return v if v < j else v + 1
            spots = [p for p, (a, b) in enumerate(edges) if j in (a, b)]
            for choice in itertools.product((0, 1), repeat=len(spots)):
                raw = []
                ci = 0
                for p, (a, b) in enumerate(edges):
                    if p in spots:
                        other = a if b == j else b
                        raw.append((j + choice[ci], rl2(other)))
                        ci += 1
                    else:
                        raw.append((rl2(a), rl2(b)))
                raw.append((j, j + 1))
                add(raw, s * c)
    n_out = n + 1
    sym: dict = {}
    fact = QQ(1)
    for v in range(2, n_out + 1):
        fact = fact * v
    for perm in itertools.permutations(range(1, n_out + 1)):
        for edges, c in acc.items():
            raw = [(perm[a - 1], perm[b - 1]) for a, b in edges]
            res = _naive_edge_sort(raw)
            if res is None:
                continue
            key, s = res
            sym[key] = sym.get(key, QQ(0)) + c * s / fact
            if not sym[key]:
                del sym[key]
    return sym


def check_graph_complex(seed: int = 0) -> CheckResult:
    def run():
        mc = mc_graph()
        if not lie_bracket(mc, mc).is_zero():
            return False, "[MC, MC] != 0"
        k4 = symmetrize(tetrahedron())
        if k4.is_zero():
            return False, "tetrahedron class vanished"
        dk4 = differential(k4)
        if not dk4.is_zero():
            return False, "d(K4) != 0"
        naive = _naive_mc_bracket(
            {g.edges: c for g, c in k4.terms.items()}, 4, k4.degree())
        if naive:
            return False, "independent enumerator disagrees on d(K4)"
        checked = 0
        for n in (4, 5):
            for cls in gc2_basis(n):
                img = differential(cls)
                if not img.is_zero():
                    if not differential(img).is_zero():
                        return False, f"d^2 != 0 on a {n}-vertex class"
                    if not img.is_at_least_trivalent():
                        return False, "differential left the >=3-valent " \
                            "subspace"
                checked += 1
        # substance: classes with genuinely nonzero differential
        extra = [symmetrize(GraphSum.single(
            4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])),
            symmetrize(GraphSum.single(2, []))]
        for cls in extra:
            img = differential(cls)
            if img.is_zero() or not differential(img).is_zero():
                return False, "d^2 != 0 on a class with nonzero d"
            naive2 = _naive_mc_bracket(
                {g.edges: c for g, c in cls.terms.items()},
                cls.n, cls.degree())
            lib = {g.edges: c for g, c in img.terms.items()}
            if naive2 != lib:
                return False, "independent enumerator disagrees on d"
        return True, (f"[MC,MC]=0, d(K4)=0 cross-checked, d^2=0 on "
                      f"{checked} basis classes (n<=5) and 2 nonzero-d "
                      "classes")
    return _timed("graph-complex", run)


def check_operad_action(seed: int = 0, pairs: int = 100,
                        directed_cases: int = 100,
                        composites: int = 50) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pol = TruncationPolicy(y_order=None, x_order=None)
        mc = mc_graph()
        for i in range(pairs):
            d = rng.choice([1, 2])
            f = random_polyvector(rng, d, pol, n_terms=3)
            g = random_polyvector(rng, d, pol, n_terms=3)
            if phi(mc, [f, g]) != schouten_bracket(f, g):
                return False, f"phi(MC) != Schouten at pair {i}"
        for i in range(directed_cases):
            d = rng.choice([1, 2])
            n = rng.randint(1, 4)
            pairs_all = list(itertools.combinations(range(1, n + 1), 2))
            rng.shuffle(pairs_all)
            k = rng.randint(0, min(4, len(pairs_all)))
            g = Graph(n, tuple(sorted(pairs_all[:k])))
            args = [random_polyvector(rng, d, pol, n_terms=2)
                    for _ in range(n)]
            if phi(g, args) != phi_directed_expansion(g, args):
                return False, f"directed expansion mismatch at case {i}"
        for i in range(composites):
            d = rng.choice([1, 2])
            def rand_graph():
                n = rng.randint(1, 3)
                pr = list(itertools.combinations(range(1, n + 1), 2))
                rng.shuffle(pr)
                k = rng.randint(0, min(3, len(pr)))
                return Graph(n, tuple(sorted(pr[:k])))
            g1, g2 = rand_graph(), rand_graph()
            i0 = rng.randint(1, g1.n)
            args = [random_polyvector(rng, d, pol, n_terms=2)
                    for _ in range(g1.n + g2.n - 1)]
            if not operad_morphism_check(g1, i0, g2, args):
                return False, f"operad morphism failed at composite {i}"
        return True, (f"{pairs} bracket pairs, {directed_cases} directed "
                      f"agreements, {composites} composites")
    return _timed("operad-action", run)


def check_main_theorem_conditions(seed: int = 0, d: int = 2) -> CheckResult:
    def run():
        rng = random.Random(seed)
        rep = check_conditions(symmetrize(tetrahedron()), d, rng,
                               samples=4)
        if not rep.all_pass():
            return False, f"K4 failed conditions {rep.failing()}"
        rep_mc = check_conditions(mc_graph(), d, rng, samples=4)
        if rep_mc.vanishes_on_vector_fields:
            return False, "MC unexpectedly vanished on vector fields"
        zero = GraphSum(2, {})
        if not check_conditions(zero, d, rng, samples=2).all_pass():
            return False, "zero element failed vacuous conditions"
        return True, ("K4 passes (1)-(4); MC fails (3) as the necessity "
                      "witness; zero element vacuous")
    return _timed("main-theorem-conditions", run)


def check_globalization(seed: int = 0, d: int = 2, y_order: int = 4,
                        arity_cap: int = 2,
                        perturbations: int = 10) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pol = TruncationPolicy(y_order=y_order, x_order=None)
        gamma = graph_cochain(symmetrize(tetrahedron()), d, pol, 4,
                              weight=T_PARAM)
        F = exponential(gamma)

        # (a) flat connection: the pipeline returns F itself
        res = globalize(F, flat_connection(d), pol, arity_cap=arity_cap,
                        rng=rng)
        for _ in range(4):
            f = random_polyvector(rng, d, pol, n_terms=2)
            if res.morphism.evaluate(1, [f]) != f.with_policy(pol):
                return False, "flat: arity-1 component is not the identity"
            args = [random_polyvector(rng, d, pol, n_terms=2)
                    for _ in range(2)]
            if not res.morphism.evaluate(2, args).is_zero():
                return False, "flat: arity-2 correction did not vanish"
        res4 = globalize(F, flat_connection(d), pol, arity_cap=4, rng=rng)
        args4 = [random_polyvector(rng, d, pol, n_terms=2, max_x=1)
                 for _ in range(4)]
        direct = phi(symmetrize(tetrahedron()), args4).scale(T_PARAM)
        if res4.morphism.evaluate(4, args4) != direct.with_policy(pol):
            return False, "flat: arity-4 component differs from the " \
                "original under the coordinate identification"

        # (b) the stated non-flat jet
        cj = constant_connection(d, {(2, 1, 1): 1})
        resb = globalize(F, cj, pol, arity_cap=arity_cap, rng=rng)
        if not verify_globalized(resb, rng, samples=2,
                                 arity_max=arity_cap):
            return False, "stated jet: morphism equations failed"
        rep = step2_invariance_report(F, cj, pol, rng,
                                      perturbations=perturbations,
                                      samples=1, fd=resb.fedosov)
        if not rep.all_invariant():
            return False, "stated jet: twist changed under an " \
                "H-perturbation"

        # a genuinely curved jet for good measure
        cjc = random_connection_jet(rng, d, 2, entries=3)
        resc = globalize(F, cjc, pol, arity_cap=arity_cap, rng=rng)
        if not verify_globalized(resc, rng, samples=1,
                                 arity_max=arity_cap):
            return False, "curved jet: morphism equations failed"
        return True, (f"flat collapse exact (arities 1,2,4); stated jet "
                      f"passes with {perturbations} invariant "
                      "perturbations; curved jet passes")
    return _timed("globalization", run)


def check_scope_statement() -> CheckResult:
    def run():
        return True, SCOPE_STATEMENT
    return _timed("desk-scale-scope", run)


ALL_CHECKS = [
    ("homotopy-identity", check_homotopy_identity),
    ("odd-jacobi", check_odd_jacobi),
    ("fedosov-package", check_fedosov_package),
    ("quasi-isomorphism", check_quasi_isomorphism),
    ("bracket-compatibility", check_bracket_compatibility),
    ("graph-complex", check_graph_complex),
    ("operad-action", check_operad_action),
    ("main-theorem-conditions", check_main_theorem_conditions),
    ("globalization", check_globalization),
    ("desk-scale-scope", lambda seed=0: check_scope_statement()),
]


def run_all(seed: int = 0, d: int = 2, y_order: int = 4,
            arity_cap: int = 2) -> List[CheckResult]:
    results = []
    for name, fn in ALL_CHECKS:
        if name == "homotopy-identity":
            results.append(fn(seed=seed, y_order=y_order))
        elif name == "fedosov-package":
            results.append(fn(seed=seed, y_order=y_order))
        elif name == "quasi-isomorphism":
            results.append(fn(seed=seed, y_order=y_order))
        elif name == "bracket-compatibility":
            results.append(fn(seed=seed, y_order=y_order))
        elif name == "main-theorem-conditions":
            results.append(fn(seed=seed, d=d))
        elif name == "globalization":
            results.append(fn(seed=seed, d=d, y_order=y_order,
                              arity_cap=arity_cap))
        else:
            results.append(fn(seed=seed))
    return results
