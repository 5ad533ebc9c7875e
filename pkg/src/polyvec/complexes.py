"""The two odd brackets and the contracting-homotopy calculus.

Polyvector fields are elements in x and psi only (psi_i standing for the
i-th coordinate vector field); vertical forms live in the full algebra,
with psi_i the vertical frame d/dy^i and eta^i the one-form dx^i.

Sign convention (pinned by the invariant suite, see tests): both brackets
satisfy the symmetric rule

    [f, g] = (-1)^{|f||g|} [g, f]

and the Jacobi identity in insertion form

    [[f,g],h] + (-1)^{|g||h|} [[f,h],g]
             + (-1)^{|f|(|g|+|h|)} [[g,h],f]  =  0,

which is the unshuffle expansion of a symmetric degree +1 binary map on
the doubly-shifted space.  Equivalently, (-1)^{|f|}[f,g] is an odd Lie
bracket in the shifted-antisymmetric dress; we keep the undressed form
because the graph action reproduces it on the nose.
"""

from __future__ import annotations

from typing import Optional

from .algebra import (ETA, PSI, X, Y, GradedElement, derive, mono_degree,
                      multiply)
from .scalars import QQ


def is_polyvector(a: GradedElement) -> bool:
    """True when a uses only x and psi generators."""
    return all(sum(m[1]) == 0 and not m[3] for m in a.terms)


def assert_polyvector(a: GradedElement):
    if not is_polyvector(a):
        raise ValueError("element has y or eta factors; not a polyvector")


def _bracket(a: GradedElement, b: GradedElement, even_kind: str,
             y_max: Optional[int] = None,
             x_max: Optional[int] = None) -> GradedElement:
    """(-1)^|f| df/du^i dg/dpsi_i + (-1)^{|f||g|+|g|} dg/du^i df/dpsi_i,
    u = x or y, extended bilinearly over homogeneous parts."""
    a._check_compatible(b)
    out = GradedElement.zero(a.dim, a.policy)
    parts_a = a.homogeneous_parts()
    parts_b = b.homogeneous_parts()
    # derivative caches keyed by (degree, generator index)
    da_even = {(da, i): derive(even_kind, i, fa)
               for da, fa in parts_a.items() for i in range(1, a.dim + 1)}
    da_psi = {(da, i): derive(PSI, i, fa)
              for da, fa in parts_a.items() for i in range(1, a.dim + 1)}
    db_even = {(db, i): derive(even_kind, i, fb)
               for db, fb in parts_b.items() for i in range(1, a.dim + 1)}
    db_psi = {(db, i): derive(PSI, i, fb)
              for db, fb in parts_b.items() for i in range(1, a.dim + 1)}
    for da in parts_a:
        for db in parts_b:
            s1 = QQ(-1 if da % 2 else 1)
            s2 = QQ(-1 if (da * db + db) % 2 else 1)
            for i in range(1, a.dim + 1):
                t1 = multiply(da_even[(da, i)], db_psi[(db, i)],
                              y_max, x_max)
                t2 = multiply(db_even[(db, i)], da_psi[(da, i)],
                              y_max, x_max)
                out = out + t1.scale(s1) + t2.scale(s2)
    return out


def schouten_bracket(f: GradedElement, g: GradedElement) -> GradedElement:
    """Schouten bracket of polyvector fields (x differentiation)."""
    assert_polyvector(f)
    assert_polyvector(g)
    return _bracket(f, g, X)


def vertical_bracket(f: GradedElement, g: GradedElement,
                     y_max: Optional[int] = None,
                     x_max: Optional[int] = None) -> GradedElement:
    """Vertical Schouten bracket on forms (y differentiation; eta inert)."""
    return _bracket(f, g, Y, y_max, x_max)


def delta(f: GradedElement) -> GradedElement:
    """delta = eta^i d/dy^i; degree +1, squares to zero.  Exact."""
    out = GradedElement.zero(f.dim, f.policy)
    for i in range(1, f.dim + 1):
        eta_i = GradedElement.generator(f.dim, f.policy, ETA, i)
        out = out + multiply(eta_i, derive(Y, i, f))
    return out


def delta_star(f: GradedElement) -> GradedElement:
    """Contracting homotopy: on a monomial with p y's and q eta's apply
    (1/(p+q)) y^a d/deta^a; zero on the p = q = 0 part.

    Not truncated: the output may exceed the y-cap by one order, which is
    exactly what makes f = sigma f + delta delta* f + delta* delta f hold
    on every stored coefficient.
    """
    terms: dict = {}
    d = f.dim
    for mono, c in f.terms.items():
        xe, ye, ps, es = mono
        p = sum(ye)
        q = len(es)
        if p + q == 0:
            continue
        w = c * QQ(1, p + q)
        for a in es:
            pos = es.index(a)
            sign = -1 if (len(ps) + pos) % 2 else 1
            new_ye = tuple(k + 1 if i == a - 1 else k
                           for i, k in enumerate(ye))
            new = (xe, new_ye, ps, es[:pos] + es[pos + 1:])
            v = -w if sign < 0 else w
            acc = terms.get(new)
            v = v if acc is None else acc + v
            if not v:
                terms.pop(new, None)
            else:
                terms[new] = v
    return GradedElement(d, f.policy, terms)


def sigma(f: GradedElement) -> GradedElement:
    """Projection onto the y = eta = 0 part (a polyvector field)."""
    terms = {m: c for m, c in f.terms.items()
             if sum(m[1]) == 0 and not m[3]}
    return GradedElement(f.dim, f.policy, terms)


def de_rham(f: GradedElement) -> GradedElement:
    """d = eta^i d/dx^i; degree +1; anticommutes with delta."""
    out = GradedElement.zero(f.dim, f.policy)
    for i in range(1, f.dim + 1):
        eta_i = GradedElement.generator(f.dim, f.policy, ETA, i)
        out = out + multiply(eta_i, derive(X, i, f))
    return out


def taylor_lift(f: GradedElement) -> GradedElement:
    """x -> x + y substitution on a polyvector field, mod the y-cap.

    This is the flat-connection closed form of the resolution section tau.
    """
    assert_polyvector(f)
    d = f.dim
    policy = f.policy
    out = GradedElement.zero(d, policy)
    xplusy = [GradedElement.generator(d, policy, X, i + 1) +
              GradedElement.generator(d, policy, Y, i + 1)
              for i in range(d)]
    for mono, c in f.terms.items():
        xe, _, ps, _ = mono
        acc = GradedElement.scalar(d, policy, c)
        for i, k in enumerate(xe):
            for _ in range(k):
                acc = acc * xplusy[i]
        for i in ps:
            acc = acc * GradedElement.generator(d, policy, PSI, i)
        out = out + acc
    return out


def bidegree_parts(f: GradedElement) -> dict:
    """Split into (p, q) pieces: p = psi-degree, q = eta-degree."""
    parts: dict = {}
    for mono, c in f.terms.items():
        parts.setdefault((len(mono[2]), len(mono[3])), {})[mono] = c
    return {pq: GradedElement(f.dim, f.policy, t)
            for pq, t in sorted(parts.items())}


def homotopy_defect(f: GradedElement) -> GradedElement:
    """f - (sigma f + delta delta* f + delta* delta f); zero identically."""
    return f - sigma(f) - delta(delta_star(f)) - delta_star(delta(f))


def jacobi_defect(f: GradedElement, g: GradedElement, h: GradedElement,
                  bracket=vertical_bracket) -> GradedElement:
    """Insertion-form Jacobi defect for homogeneous f, g, h."""
    df, dg, dh = f.degree(), g.degree(), h.degree()
    s2 = -1 if (dg * dh) % 2 else 1
    s3 = -1 if (df * (dg + dh)) % 2 else 1
    out = bracket(bracket(f, g), h)
    out = out + bracket(bracket(f, h), g).scale(QQ(s2))
    out = out + bracket(bracket(g, h), f).scale(QQ(s3))
    return out
