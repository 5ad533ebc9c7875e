"""Scratch: discover/verify sign conventions of the displayed bracket."""
import random

from polyvec.algebra import GradedElement, TruncationPolicy, X, Y, PSI, ETA
from polyvec.complexes import (schouten_bracket, vertical_bracket, delta,
                               delta_star, sigma, de_rham, homotopy_defect,
                               jacobi_defect)
from polyvec.scalars import QQ

rng = random.Random(0)
POL = TruncationPolicy(y_order=4, x_order=4)


def random_mono(d, max_x=2, max_y=2, allow_y=True):
    xe = tuple(rng.randint(0, max_x) for _ in range(d))
    ye = tuple(rng.randint(0, max_y) for _ in range(d)) if allow_y else (0,)*d
    ps = tuple(sorted(rng.sample(range(1, d+1), rng.randint(0, d))))
    es = tuple(sorted(rng.sample(range(1, d+1), rng.randint(0, d)))) if allow_y else ()
    return (xe, ye, ps, es)


def random_element(d, nterms=3, allow_y=True):
    items = []
    for _ in range(nterms):
        items.append((random_mono(d, allow_y=allow_y),
                      QQ(rng.randint(-4, 4), rng.randint(1, 3))))
    return GradedElement.from_terms(d, POL, items)


def random_homog(d, deg, allow_y=True):
    e = random_element(d, 6, allow_y)
    parts = e.homogeneous_parts()
    return parts.get(deg)


# 1. basic evaluations
d = 1
x = GradedElement.generator(d, POL, X, 1)
p = GradedElement.generator(d, POL, PSI, 1)
print("[x,psi] =", schouten_bracket(x, p).terms)   # expect {1: 1}
print("[psi,x] =", schouten_bracket(p, x).terms)

# 2. antisymmetry scan: [f,g] - (-1)^{|f||g|}[g,f] == 0 ?
bad = 0
for trial in range(300):
    d = rng.choice([1, 2, 3])
    f = random_homog(d, rng.randint(0, 2))
    g = random_homog(d, rng.randint(0, 2))
    if f is None or g is None:
        continue
    s = -1 if (f.degree() * g.degree()) % 2 else 1
    lhs = vertical_bracket(f, g)
    rhs = vertical_bracket(g, f).scale(QQ(s))
    if lhs != rhs:
        bad += 1
print("antisymmetry (-1)^{fg} failures:", bad)

# also test the spec-stated form -(-1)^{(f-1)(g-1)}
bad = 0
for trial in range(200):
    d = rng.choice([1, 2])
    f = random_homog(d, rng.randint(0, 2))
    g = random_homog(d, rng.randint(0, 2))
    if f is None or g is None or f.is_zero() or g.is_zero():
        continue
    s = -1 if ((f.degree() - 1) * (g.degree() - 1)) % 2 else 1
    lhs = vertical_bracket(f, g)
    rhs = vertical_bracket(g, f).scale(QQ(-s))
    if lhs != rhs:
        bad += 1
print("spec-form antisymmetry failures:", bad)

# 3. Jacobi insertion form
bad = 0
tested = 0
for trial in range(200):
    d = rng.choice([1, 2, 3])
    f = random_homog(d, rng.randint(0, 2))
    g = random_homog(d, rng.randint(0, 2))
    h = random_homog(d, rng.randint(0, 2))
    if f is None or g is None or h is None:
        continue
    tested += 1
    if not jacobi_defect(f, g, h).is_zero():
        bad += 1
print(f"insertion-Jacobi failures: {bad}/{tested}")

# spec-form Jacobi: (-1)^{(f-1)(h-1)}[f,[g,h]] + cyclic
bad = 0
tested = 0
for trial in range(100):
    d = rng.choice([1, 2])
    f = random_homog(d, rng.randint(0, 2))
    g = random_homog(d, rng.randint(0, 2))
    h = random_homog(d, rng.randint(0, 2))
    if f is None or g is None or h is None:
        continue
    tested += 1
    df, dg, dh = f.degree(), g.degree(), h.degree()
    def s(a, b):
        return QQ(-1 if ((a - 1) * (b - 1)) % 2 else 1)
    tot = vertical_bracket(f, vertical_bracket(g, h)).scale(s(df, dh)) + \
          vertical_bracket(g, vertical_bracket(h, f)).scale(s(dg, df)) + \
          vertical_bracket(h, vertical_bracket(f, g)).scale(s(dh, dg))
    if not tot.is_zero():
        bad += 1
print(f"spec-form Jacobi failures: {bad}/{tested}")

# 4. homotopy identity, delta^2, (delta*)^2, d^2, delta d + d delta
bad = {k: 0 for k in ["homotopy", "d2", "ds2", "dr2", "anti"]}
for trial in range(300):
    d = rng.choice([1, 2, 3])
    f = random_element(d, 4)
    if not homotopy_defect(f).is_zero():
        bad["homotopy"] += 1
    if not delta(delta(f)).is_zero():
        bad["d2"] += 1
    if not delta_star(delta_star(f)).is_zero():
        bad["ds2"] += 1
    if not de_rham(de_rham(f)).is_zero():
        bad["dr2"] += 1
    if not (delta(de_rham(f)) + de_rham(delta(f))).is_zero():
        bad["anti"] += 1
print("operator identity failures:", bad)

# 5. degree of bracket = |f|+|g|-1
f = random_homog(2, 2)
g = random_homog(2, 1)
if f is not None and g is not None:
    b = vertical_bracket(f, g)
    if not b.is_zero():
        print("bracket degree:", b.degrees(), "expected", {f.degree() + g.degree() - 1})
