"""Flattening the vertical complex: connection, curvature, and the
recursive construction of a square-zero differential from a torsion-free
connection jet.

Conventions (pinned by the invariant suite):

  Gamma-form   G = -eta^i Gamma^k_ij(x) y^j psi_k
  nabla        = d + [G, -]
  curvature    R = -1/2 eta^i eta^j R^l_kij(x) y^k psi_l  with
               R^l_kij = d_j Gamma^l_ik - d_i Gamma^l_jk
                       + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
               equivalently R = -dG - 1/2 [G, G]; the derivative and
               quadratic parts carry opposite relative orientation to the
               common textbook formula because the connection one-form
               enters G with a minus sign.  This is the unique orientation
               with nabla^2 = [R, -].
  A            solves  A = delta*(-R) + delta*(nabla A + 1/2 [A, A]),
               delta* A = sigma A = 0, built slice by slice in y-degree.
               In the undressed bracket convention used here, expanding
               D^2 gives D^2 = [R - nabla A - 1/2 [A,A] + delta A, -], so
               the flatness equation reads
               delta A = nabla A + 1/2 [A, A] - R; the curvature enters
               the recursion with the opposite sign to the dressed
               convention, pinned by the requirement D^2 = 0.
  D            = nabla - delta + [A, -], square zero.
  B            = G + eta^i psi_i + A, so that D = d + [B, -]; the
               contraction term enters with a plus sign here because
               [eta^i psi_i, f] = -delta f in the undressed bracket.

Truncation bookkeeping: all forms are computed at a working y-order equal
to the requested order plus a margin (default 2).  One application of
delta or d consumes one order of trust in y of a truncated series, so
identities involving one differential are exact up to the working order
minus one, and D-squared up to minus two.  Verification helpers therefore
compare coefficients up to the *requested* order, where everything is
exact.  The x-direction stays polynomial-exact (the working policy leaves
x unbounded; the input jets are polynomials).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .algebra import (ETA, PSI, X, Y, GradedElement, TruncationPolicy,
                      derive, multiply, parse, serialize)
from .complexes import (de_rham, delta, delta_star, schouten_bracket, sigma,
                        vertical_bracket, assert_polyvector)
from .scalars import QQ

WORK_MARGIN = 2


class NotCocycleError(ValueError):
    """Raised when invert_exact is fed a non-closed form."""


@dataclass
class ConnectionJet:
    """Taylor coefficients of torsion-free Christoffel symbols.

    christoffel maps (k, i, j) with i <= j to an x-polynomial; symmetry
    in the lower indices is built into the accessor.
    """

    dim: int
    x_order: int
    christoffel: Dict[Tuple[int, int, int], GradedElement] = \
        field(default_factory=dict)

    def gamma(self, k: int, i: int, j: int) -> Optional[GradedElement]:
        key = (k, i, j) if i <= j else (k, j, i)
        return self.christoffel.get(key)

    def is_flat_data(self) -> bool:
        return all(v.is_zero() for v in self.christoffel.values())

    def set_entry(self, k: int, i: int, j: int, poly: GradedElement):
        if poly.y_degree() or any(m[2] or m[3] for m in poly.terms):
            raise ValueError("Christoffel entries must be x-polynomials")
        if poly.x_degree() > self.x_order:
            raise ValueError("entry exceeds the jet order")
        key = (k, i, j) if i <= j else (k, j, i)
        self.christoffel[key] = poly


def flat_connection(dim: int, x_order: int = 2) -> ConnectionJet:
    return ConnectionJet(dim, x_order)


def constant_connection(dim: int, entries: Dict[Tuple[int, int, int], int],
                        x_order: int = 2) -> ConnectionJet:
    """Jet with constant Christoffel symbols, e.g. {(2, 1, 1): 1}."""
    cj = ConnectionJet(dim, x_order)
    pol = TruncationPolicy(None, None)
    for (k, i, j), c in entries.items():
        cj.set_entry(k, i, j, GradedElement.scalar(dim, pol, QQ(c)))
    return cj


def gamma_form(cj: ConnectionJet, policy: TruncationPolicy) -> GradedElement:
    """G = -eta^i Gamma^k_ij(x) y^j psi_k as a vertical one-form."""
    d = cj.dim
    out = GradedElement.zero(d, policy)
    for k in range(1, d + 1):
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                g = cj.gamma(k, i, j)
                if g is None or g.is_zero():
                    continue
                term = multiply(
                    multiply(multiply(GradedElement.generator(d, policy,
                                                              ETA, i),
                                      g.with_policy(policy)),
                             GradedElement.generator(d, policy, Y, j)),
                    GradedElement.generator(d, policy, PSI, k))
                out = out - term
    return out


def curvature_form(cj: ConnectionJet,
                   policy: TruncationPolicy) -> GradedElement:
    """R = -1/2 eta^i eta^j R^l_kij y^k psi_l from the component formula."""
    d = cj.dim
    zero = GradedElement.zero(d, policy)

    def gam(k, i, j):
        g = cj.gamma(k, i, j)
        return zero if g is None else g.with_policy(policy)

    out = GradedElement.zero(d, policy)
    for l in range(1, d + 1):
        for k in range(1, d + 1):
            for i in range(1, d + 1):
                for j in range(i + 1, d + 1):
                    # antisymmetry in (i, j): keep i < j, drop the 1/2
                    comp = derive(X, j, gam(l, i, k)) - \
                        derive(X, i, gam(l, j, k))
                    for m in range(1, d + 1):
                        comp = comp + gam(l, i, m) * gam(m, j, k) \
                            - gam(l, j, m) * gam(m, i, k)
                    if comp.is_zero():
                        continue
                    term = multiply(multiply(multiply(multiply(
                        GradedElement.generator(d, policy, ETA, i),
                        GradedElement.generator(d, policy, ETA, j)),
                        comp),
                        GradedElement.generator(d, policy, Y, k)),
                        GradedElement.generator(d, policy, PSI, l))
                    out = out - term
    return out


def euler_pairing(dim: int, policy: TruncationPolicy) -> GradedElement:
    """eta^i psi_i, the form subtracted from G to build B."""
    out = GradedElement.zero(dim, policy)
    for i in range(1, dim + 1):
        out = out + multiply(
            GradedElement.generator(dim, policy, ETA, i),
            GradedElement.generator(dim, policy, PSI, i))
    return out


@dataclass
class FedosovData:
    """The derived package: forms at the working order, checked at the
    requested order."""

    cj: ConnectionJet
    policy: TruncationPolicy            # requested
    work_policy: TruncationPolicy       # requested + margin, x unbounded
    gamma: GradedElement
    r_form: GradedElement
    a_form: GradedElement
    b_form: GradedElement
    a_slices: Dict[int, GradedElement]

    def __post_init__(self):
        self._tau_cache: Dict[GradedElement, GradedElement] = {}

    def tau_cached(self, f0: GradedElement) -> GradedElement:
        got = self._tau_cache.get(f0)
        if got is None:
            got = tau(self, f0)
            self._tau_cache[f0] = got
        return got

    def nabla(self, f: GradedElement,
              y_max: Optional[int] = None) -> GradedElement:
        return de_rham(f) + vertical_bracket(self.gamma, f, y_max=y_max)

    def differential(self, f: GradedElement,
                     y_max: Optional[int] = None) -> GradedElement:
        """D f; y_max restricts the computed output slices (the dropped
        slices are exactly the ones a requested-order check discards)."""
        return self.nabla(f, y_max) - delta(f) + \
            vertical_bracket(self.a_form, f, y_max=y_max)

    def differential_via_b(self, f: GradedElement) -> GradedElement:
        return de_rham(f) + vertical_bracket(self.b_form, f)


def nabla(cj: ConnectionJet, f: GradedElement) -> GradedElement:
    """d + [G, -] for the jet's connection form, on f's own policy."""
    if cj.dim != f.dim:
        raise ValueError("dimension mismatch between jet and form")
    return de_rham(f) + vertical_bracket(gamma_form(cj, f.policy), f)


def curvature(cj: ConnectionJet, policy: TruncationPolicy) -> GradedElement:
    return curvature_form(cj, policy)


def solve_A(cj: ConnectionJet, policy: TruncationPolicy,
            work_margin: int = WORK_MARGIN) -> FedosovData:
    """Build the full package by the y-degree slice recursion.

    Slice k+1 of A is delta* of the y-degree-k part of
    R + nabla A + 1/2 [A, A]; since delta* raises y-degree by one, the
    recursion closes after work-order many slices, which is the unique
    fixed point of the displayed equation at this truncation.
    """
    if policy.y_order is None:
        raise ValueError("solve_A needs a finite y-order")
    work = TruncationPolicy(policy.y_order + work_margin, None)
    gamma = gamma_form(cj, work)
    r_form = curvature_form(cj, work)
    slices: Dict[int, GradedElement] = {}
    zero = GradedElement.zero(cj.dim, work)
    y_top = work.y_order

    if y_top >= 2:
        slices[2] = delta_star(-r_form)
    for k in range(2, y_top):
        a_k = slices.get(k, zero)
        src = de_rham(a_k) + vertical_bracket(gamma, a_k, y_max=k)
        for i in range(2, k):
            j = k + 1 - i
            if j < 2 or j > i:
                continue
            pair = vertical_bracket(slices.get(i, zero),
                                    slices.get(j, zero), y_max=k)
            if i == j:
                pair = pair.scale(QQ(1, 2))
            src = src + pair
        nxt = delta_star(src.truncate(y_max=k))
        if not nxt.is_zero():
            slices[k + 1] = nxt

    a_form = zero
    for k in sorted(slices):
        a_form = a_form + slices[k]
    b_form = gamma + euler_pairing(cj.dim, work) + a_form
    return FedosovData(cj, policy, work, gamma, r_form, a_form, b_form,
                       slices)


def fedosov_package(cj: ConnectionJet, policy: TruncationPolicy,
                    work_margin: int = WORK_MARGIN) -> FedosovData:
    return solve_A(cj, policy, work_margin)


def differential_D(fd: FedosovData, f: GradedElement,
                   y_max: Optional[int] = None) -> GradedElement:
    return fd.differential(f, y_max)


def d_squared_defect(fd: FedosovData, f: GradedElement) -> GradedElement:
    """D(D f) restricted to the requested order, where it is exact."""
    y_check = fd.policy.y_order
    inner = fd.differential(f, y_max=y_check + 1)
    return fd.differential(inner, y_max=y_check).truncate(y_max=y_check)


def recursion_residual(fd: FedosovData) -> GradedElement:
    """One more application of the displayed fixed-point map minus A,
    restricted to the working order: zero at the fixed point."""
    a = fd.a_form
    y_top = fd.work_policy.y_order
    rhs = delta_star(-fd.r_form) + delta_star(
        (fd.nabla(a) + vertical_bracket(a, a, y_max=y_top).scale(QQ(1, 2))
         ).truncate(y_max=y_top - 1))
    return (rhs - a).truncate(y_max=y_top)


def flatness_residual(fd: FedosovData) -> GradedElement:
    """nabla A + 1/2 [A,A] - R - delta A at the trusted order (the
    flatness equation in this convention; zero iff D squares to zero)."""
    a = fd.a_form
    y_check = fd.policy.y_order
    out = fd.nabla(a) + \
        vertical_bracket(a, a, y_max=y_check).scale(QQ(1, 2)) \
        - fd.r_form - delta(a)
    return out.truncate(y_max=y_check, x_max=fd.policy.x_order)


def y_slice(f: GradedElement, k: int) -> GradedElement:
    """The y-degree-k part."""
    terms = {m: c for m, c in f.terms.items() if sum(m[1]) == k}
    return GradedElement(f.dim, f.policy, terms)


def tau(fd: FedosovData, f0: GradedElement) -> GradedElement:
    """Lift a polyvector field to a D-closed degree-0 form:
    f = f0 + delta*(nabla f + [A, f]), built slice by slice."""
    assert_polyvector(f0)
    if f0.dim != fd.cj.dim:
        raise ValueError("dimension mismatch")
    work = fd.work_policy
    total = f0.with_policy(work)
    for k in range(0, work.y_order):
        src = fd.nabla(y_slice(total, k)) + \
            vertical_bracket(fd.a_form, total, y_max=k)
        gain = delta_star(y_slice(src, k))
        if not gain.is_zero():
            total = total + gain
    return total


def invert_exact(fd: FedosovData, f: GradedElement) -> GradedElement:
    """Solve D g = f for a cocycle f of form-degree >= 1, with
    sigma g = delta* g = 0:  g = -delta* f + delta*(nabla g + [A, g])."""
    if f.dim != fd.cj.dim:
        raise ValueError("dimension mismatch")
    y_check = fd.policy.y_order
    df = fd.differential(f).truncate(y_max=y_check,
                                     x_max=fd.policy.x_order)
    if not df.is_zero():
        raise NotCocycleError(
            "input is not D-closed at the requested order; "
            f"defect has {len(df.terms)} terms")
    if 0 in {len(m[3]) for m in f.terms}:
        raise ValueError("input must have form-degree >= 1 in every term")
    work = fd.work_policy
    total = -delta_star(f.with_policy(work))
    for k in range(0, work.y_order):
        src = fd.nabla(y_slice(total, k)) + \
            vertical_bracket(fd.a_form, total, y_max=k)
        gain = delta_star(y_slice(src, k))
        if not gain.is_zero():
            total = total + gain
    return total


def check_lemma4(fd: FedosovData, f0: GradedElement,
                 g0: GradedElement) -> bool:
    """sigma([tau f0, tau g0]^vert) equals the Schouten bracket."""
    tf = tau(fd, f0)
    tg = tau(fd, g0)
    lhs = sigma(vertical_bracket(tf, tg, y_max=0))
    rhs = schouten_bracket(f0.with_policy(fd.work_policy),
                           g0.with_policy(fd.work_policy))
    return lhs == rhs


# ---- textual jet format ----------------------------------------------------

class JetParseError(ValueError):
    pass


def serialize_connection(cj: ConnectionJet) -> str:
    lines = [f"dim {cj.dim}", f"xorder {cj.x_order}"]
    for (k, i, j) in sorted(cj.christoffel):
        poly = cj.christoffel[(k, i, j)]
        if poly.is_zero():
            continue
        lines.append(f"Gamma {k} {i} {j} : {serialize(poly)}")
    return "\n".join(lines) + "\n"


def parse_connection(text: str) -> ConnectionJet:
    """Format: optional 'dim d' / 'xorder n' headers, then lines
    'Gamma k i j : <polynomial in x>'.  Symmetric closure is applied; a
    conflicting pair (i,j)/(j,i) is an error."""
    dim = None
    x_order = 2
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("dim"):
            dim = int(line.split()[1])
            continue
        if line.startswith("xorder"):
            x_order = int(line.split()[1])
            continue
        if not line.startswith("Gamma"):
            raise JetParseError(f"line {lineno}: unrecognized {line!r}")
        try:
            head, poly_text = line.split(":", 1)
            _, k, i, j = head.split()
            entries.append((int(k), int(i), int(j), poly_text.strip(),
                            lineno))
        except ValueError as exc:
            raise JetParseError(f"line {lineno}: malformed entry") from exc
    if dim is None:
        indices = [t for e in entries for t in e[:3]]
        if not indices:
            raise JetParseError("empty connection description")
        dim = max(indices)
    cj = ConnectionJet(dim, x_order)
    pol = TruncationPolicy(None, x_order)
    for k, i, j, poly_text, lineno in entries:
        try:
            poly = parse(poly_text, dim, pol)
        except ValueError as exc:
            raise JetParseError(f"line {lineno}: {exc}") from exc
        existing = cj.gamma(k, i, j)
        if existing is not None and existing != poly:
            raise JetParseError(
                f"line {lineno}: conflicts with symmetric partner "
                f"Gamma {k} {j} {i}")
        cj.set_entry(k, i, j, poly)
    return cj


def random_connection_jet(rng: random.Random, dim: int, x_order: int = 2,
                          entries: int = 4,
                          ensure_curved: bool = True) -> ConnectionJet:
    """Sparse random torsion-free jet with polynomial entries."""
    pol = TruncationPolicy(None, x_order)
    while True:
        cj = ConnectionJet(dim, x_order)
        for _ in range(entries):
            k = rng.randint(1, dim)
            i = rng.randint(1, dim)
            j = rng.randint(i, dim)
            items = []
            z = (0,) * dim
            for _ in range(2):
                deg = rng.randint(0, x_order)
                xe = [0] * dim
                for _ in range(deg):
                    xe[rng.randrange(dim)] += 1
                c = rng.randint(-3, 3)
                if c:
                    items.append(((tuple(xe), z, (), ()), QQ(c)))
            if items:
                cj.set_entry(k, i, j, GradedElement.from_terms(
                    dim, pol, items))
        if not ensure_curved:
            return cj
        probe = curvature_form(cj, TruncationPolicy(3, None))
        if not probe.is_zero():
            return cj
