"""Command-line surface.

Verbs: bracket, delta-suite, fedosov, tau, graph-diff, graph-bracket,
phi, check-conditions, globalize, verify-all.  Exit codes: 0 on success,
1 on verification failure, 2 on input errors.  Identical inputs produce
byte-identical output (canonical serialization, seeded randomness, no
timestamps).
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import List, Optional

from .action import check_conditions, phi
from .algebra import (GradedElement, ParseError, TruncationPolicy, parse,
                      serialize)
from .complexes import (de_rham, delta, delta_star, homotopy_defect,
                        schouten_bracket, sigma, vertical_bracket)
from .fedosov import (JetParseError, differential_D, flatness_residual,
                      parse_connection, solve_A, tau)
from .globalize import (ConditionGateError, globalize,
                        step2_invariance_report, verify_globalized)
from .graphs import (GraphParseError, GraphSum, differential, lie_bracket,
                     parse_graph, symmetrize)
from .linfty import GraphMap, IdentityMap, LInftyMorphism, SumMap, ScaledMap
from .sampling import random_form
from .scalars import QQ, T_PARAM, TScalar
from .verification import run_all

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2


class InputError(ValueError):
    pass


def _policy(args) -> TruncationPolicy:
    x_order = getattr(args, "xorder", None)
    return TruncationPolicy(y_order=args.yorder, x_order=x_order)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _parse_element(text: str, dim: int, policy: TruncationPolicy,
                   what: str) -> GradedElement:
    try:
        return parse(text, dim, policy)
    except ParseError as exc:
        raise InputError(f"{what}: {exc}") from exc


def cmd_bracket(args) -> int:
    policy = TruncationPolicy(y_order=args.yorder, x_order=None)
    lhs = _parse_element(args.lhs, args.d, policy, "--lhs")
    rhs = _parse_element(args.rhs, args.d, policy, "--rhs")
    if args.vertical:
        out = vertical_bracket(lhs, rhs)
    else:
        try:
            out = schouten_bracket(lhs, rhs)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    print(serialize(out))
    return EXIT_OK


def cmd_delta_suite(args) -> int:
    rng = random.Random(args.seed)
    policy = TruncationPolicy(y_order=args.yorder, x_order=4)
    names = {
        "homotopy-identity": lambda f: homotopy_defect(f).is_zero(),
        "delta-squared": lambda f: delta(delta(f)).is_zero(),
        "delta-star-squared":
            lambda f: delta_star(delta_star(f)).is_zero(),
        "de-rham-squared": lambda f: de_rham(de_rham(f)).is_zero(),
        "delta-de-rham-anticommute":
            lambda f: (delta(de_rham(f)) + de_rham(delta(f))).is_zero(),
    }
    failures = 0
    for name, pred in names.items():
        ok = True
        for _ in range(args.samples):
            f = random_form(rng, args.d, policy, n_terms=4, max_x=3,
                            max_y=args.yorder)
            if not pred(f):
                ok = False
                break
        print(f"CHECK {name} {'PASS' if ok else 'FAIL'}")
        failures += 0 if ok else 1
    return EXIT_OK if not failures else EXIT_VERIFY


def cmd_fedosov(args) -> int:
    cj = parse_connection(_read(args.connection))
    policy = TruncationPolicy(y_order=args.yorder, x_order=None)
    fd = solve_A(cj, policy)
    print(f"# dim {cj.dim}, requested y-order {args.yorder}, "
          f"working y-order {fd.work_policy.y_order}")
    print("R =", serialize(fd.r_form))
    print("A =", serialize(fd.a_form))
    checks = [
        ("delta-star-A", delta_star(fd.a_form).is_zero()),
        ("sigma-A", sigma(fd.a_form).is_zero()),
        ("A-y-degree",
         all(sum(m[1]) >= 2 for m in fd.a_form.terms)),
        ("flatness-equation", flatness_residual(fd).is_zero()),
    ]
    rng = random.Random(args.seed)
    from .fedosov import d_squared_defect
    d2 = all(d_squared_defect(fd, random_form(
        rng, cj.dim, fd.work_policy, n_terms=3, max_x=1, max_y=2))
        .is_zero() for _ in range(args.samples))
    checks.append(("D-squared", d2))
    bad = 0
    for name, ok in checks:
        print(f"CHECK {name} {'PASS' if ok else 'FAIL'}")
        bad += 0 if ok else 1
    return EXIT_OK if not bad else EXIT_VERIFY


def cmd_tau(args) -> int:
    cj = parse_connection(_read(args.connection))
    policy = TruncationPolicy(y_order=args.yorder, x_order=None)
    fd = solve_A(cj, policy)
    f0 = _parse_element(args.input, cj.dim, policy, "--input")
    try:
        lifted = tau(fd, f0)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print(serialize(lifted))
    ok1 = sigma(lifted) == f0.with_policy(fd.work_policy)
    ok2 = differential_D(fd, lifted, y_max=args.yorder) \
        .truncate(y_max=args.yorder).is_zero()
    print(f"CHECK sigma-tau-identity {'PASS' if ok1 else 'FAIL'}")
    print(f"CHECK D-closed {'PASS' if ok2 else 'FAIL'}")
    return EXIT_OK if ok1 and ok2 else EXIT_VERIFY


def _load_graph_sum(path: str) -> GraphSum:
    text = _read(path)
    total: Optional[GraphSum] = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        coeff = QQ(1)
        body = line
        if "*" in line.split(";")[0] and not line.startswith("n="):
            head, body = line.split("*", 1)
            try:
                coeff = QQ(head.strip())
            except ValueError as exc:
                raise InputError(
                    f"line {lineno}: bad coefficient {head!r}") from exc
        try:
            g, sign = parse_graph(body)
        except GraphParseError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
        term = GraphSum(g.n, {g: coeff * sign})
        total = term if total is None else total + term
    if total is None:
        raise InputError("empty graph file")
    return total


def cmd_graph_diff(args) -> int:
    gs = _load_graph_sum(args.graph)
    sym = symmetrize(gs)
    out = differential(sym)
    if out.is_zero():
        print("0")
    else:
        for g, c in sorted(out.terms.items(), key=lambda t: t[0].edges):
            print(f"{c} * {g.n}; {g.edges}")
    return EXIT_OK


def cmd_graph_bracket(args) -> int:
    a = symmetrize(_load_graph_sum(args.lhs))
    b = symmetrize(_load_graph_sum(args.rhs))
    try:
        out = lie_bracket(a, b)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if out.is_zero():
        print("0")
    else:
        for g, c in sorted(out.terms.items(), key=lambda t: t[0].edges):
            print(f"{c} * {g.n}; {g.edges}")
    return EXIT_OK


def cmd_phi(args) -> int:
    gs = _load_graph_sum(args.graph)
    policy = TruncationPolicy(y_order=None, x_order=None)
    arg_elements: List[GradedElement] = []
    for lineno, line in enumerate(_read(args.args).splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            arg_elements.append(parse(line, args.d, policy))
        except ParseError as exc:
            raise InputError(f"args line {lineno}: {exc}") from exc
    try:
        out = phi(gs, arg_elements)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print(serialize(out))
    return EXIT_OK


def cmd_check_conditions(args) -> int:
    gs = symmetrize(_load_graph_sum(args.graph))
    rng = random.Random(args.seed)
    rep = check_conditions(gs, args.d, rng, samples=args.samples)
    labels = [
        ("series-stability", rep.series_stable),
        ("linear-equivariance", rep.equivariant),
        ("vanishing-on-vector-fields", rep.vanishes_on_vector_fields),
        ("vanishing-on-linear-vector-field",
         rep.vanishes_on_linear_vector_field),
    ]
    for name, ok in labels:
        print(f"CHECK {name} {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if rep.all_pass() else EXIT_VERIFY


def _parse_weight(text: str):
    text = text.strip()
    if text == "t":
        return T_PARAM
    if text.endswith("*t"):
        return TScalar(0, QQ(text[:-2].strip()))
    try:
        return QQ(text)
    except ValueError as exc:
        raise InputError(f"bad weight {text!r}") from exc


def load_morphism(path: str, dim: int,
                  policy: TruncationPolicy) -> LInftyMorphism:
    """Format, one component per line:
        cap <N>
        arity 1 identity
        arity <n> weight <c> graph n=<n>; edges=(i,j),...
    Lines with the same arity accumulate; weights accept `t` and `c*t`.
    """
    comps: dict = {}
    cap = 4
    for lineno, line in enumerate(_read(path).splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        bits = line.split()
        if bits[0] == "cap":
            cap = int(bits[1])
            continue
        if bits[0] != "arity":
            raise InputError(f"line {lineno}: expected 'arity' or 'cap'")
        try:
            n = int(bits[1])
        except (IndexError, ValueError) as exc:
            raise InputError(f"line {lineno}: bad arity") from exc
        if bits[2] == "identity":
            comps.setdefault(n, []).append(IdentityMap(dim, policy))
            continue
        if bits[2] != "weight":
            raise InputError(
                f"line {lineno}: expected 'identity' or 'weight'")
        weight = _parse_weight(bits[3])
        rest = " ".join(bits[4:])
        if not rest.startswith("graph"):
            raise InputError(f"line {lineno}: expected a graph body")
        try:
            g, sign = parse_graph(rest[len("graph"):].strip())
        except GraphParseError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
        if g.n != n:
            raise InputError(
                f"line {lineno}: graph has {g.n} vertices, arity is {n}")
        gs = symmetrize(GraphSum(g.n, {g: QQ(sign)}))
        comps.setdefault(n, []).append(
            GraphMap(gs, dim, policy, weight=weight))
    merged = {n: (parts[0] if len(parts) == 1 else SumMap(parts))
              for n, parts in comps.items()}
    return LInftyMorphism(merged, cap, dim, policy)


def serialize_morphism(phi_m: LInftyMorphism) -> str:
    lines = [f"cap {phi_m.arity_cap}"]
    for n in sorted(phi_m.components):
        comp = phi_m.components[n]
        lines.append(f"# arity {n}: {type(comp).__name__}")
    return "\n".join(lines)


def cmd_globalize(args) -> int:
    cj = parse_connection(_read(args.connection))
    policy = TruncationPolicy(y_order=args.yorder, x_order=None)
    morphism = load_morphism(args.morphism, cj.dim, policy)
    rng = random.Random(args.seed)
    try:
        result = globalize(morphism, cj, policy, arity_cap=args.arity,
                           rng=rng)
    except ConditionGateError as exc:
        print(f"condition gate failure: conditions {exc.failing}",
              file=sys.stderr)
        return EXIT_VERIFY
    ok = verify_globalized(result, rng, samples=args.samples,
                           arity_max=args.arity)
    rep = step2_invariance_report(morphism, cj, policy, rng,
                                  perturbations=args.perturbations,
                                  samples=1, fd=result.fedosov)
    print(f"# globalized morphism, arity cap {args.arity}")
    print(serialize_morphism(result.morphism))
    print("# evaluation on sample arguments:")
    for n in range(1, args.arity + 1):
        f = [parse("x1 p1", cj.dim, policy)] * n
        print(f"F_{n}(x1 p1, ...) =",
              serialize(result.morphism.evaluate(n, f)))
    print(f"CHECK morphism-equations {'PASS' if ok else 'FAIL'}")
    print(f"CHECK twist-invariance "
          f"{'PASS' if rep.all_invariant() else 'FAIL'} "
          f"({rep.invariant}/{rep.perturbations} perturbations)")
    return EXIT_OK if ok and rep.all_invariant() else EXIT_VERIFY


def cmd_verify_all(args) -> int:
    results = run_all(seed=args.seed, d=args.d, y_order=args.yorder,
                      arity_cap=args.arity)
    failures = 0
    for r in results:
        print(f"CHECK {r.name} {'PASS' if r.passed else 'FAIL'}")
        if args.verbose:
            print(f"  {r.detail}")
        if not r.passed:
            print(f"  failure: {r.detail}", file=sys.stderr)
            failures += 1
    return EXIT_OK if not failures else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="polyvec",
        description="Exact graded polyvector calculus: brackets, the "
                    "flattening recursion, graph complexes and their "
                    "operator action, and globalization of graph-backed "
                    "automorphisms.")
    sub = top.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("bracket", help="bracket of two elements")
    p.add_argument("--lhs", required=True,
                   help="element, e.g. '1/2 x1^2 p1 + -3 y2 e1'")
    p.add_argument("--rhs", required=True)
    p.add_argument("--d", type=int, required=True, help="chart dimension")
    p.add_argument("--yorder", type=int, default=4)
    p.add_argument("--vertical", action="store_true",
                   help="vertical bracket (y-differentiating) instead of "
                        "the Schouten bracket")
    p.set_defaults(fn=cmd_bracket)

    p = sub.add_parser("delta-suite",
                       help="operator identities on random forms")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--yorder", type=int, default=4)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_delta_suite)

    p = sub.add_parser("fedosov",
                       help="build and verify the flattening package")
    p.add_argument("--connection", required=True,
                   help="file of lines 'Gamma k i j : <poly in x>'")
    p.add_argument("--yorder", type=int, default=4)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_fedosov)

    p = sub.add_parser("tau", help="lift a polyvector field to a "
                                   "D-closed form")
    p.add_argument("--connection", required=True)
    p.add_argument("--input", required=True, help="polyvector field text")
    p.add_argument("--yorder", type=int, default=4)
    p.set_defaults(fn=cmd_tau)

    p = sub.add_parser("graph-diff",
                       help="differential of an invariant graph sum")
    p.add_argument("--graph", required=True,
                   help="file of lines '[c *] n=..; edges=(i,j),...'")
    p.set_defaults(fn=cmd_graph_diff)

    p = sub.add_parser("graph-bracket",
                       help="Lie bracket of invariant graph sums")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(fn=cmd_graph_bracket)

    p = sub.add_parser("phi", help="evaluate a graph on polyvector fields")
    p.add_argument("--graph", required=True)
    p.add_argument("--args", required=True,
                   help="file with one element per line")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(fn=cmd_phi)

    p = sub.add_parser("check-conditions",
                       help="the four globalization conditions")
    p.add_argument("--graph", required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_check_conditions)

    p = sub.add_parser("globalize",
                       help="run the globalization pipeline")
    p.add_argument("--morphism", required=True,
                   help="file: 'cap N' / 'arity 1 identity' / "
                        "'arity n weight c graph n=..; edges=...'")
    p.add_argument("--connection", required=True)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--yorder", type=int, default=4)
    p.add_argument("--samples", type=int, default=2)
    p.add_argument("--perturbations", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_globalize)

    p = sub.add_parser("verify-all", help="the full acceptance suite")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--yorder", type=int, default=4)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(fn=cmd_verify_all)

    return top


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (InputError, JetParseError, ParseError,
            GraphParseError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
