"""Seeded random generators for elements, used by tests and verify-all.

Samplers take an explicit random.Random so every run is reproducible.
The y/x budgets keep double brackets and products inside the truncation
caps, where all identities are exact.
"""

from __future__ import annotations

import random
from typing import Optional

from .algebra import (ETA, PSI, X, Y, GradedElement, TruncationPolicy)
from .scalars import QQ


def random_coeff(rng: random.Random) -> QQ:
    num = rng.randint(-6, 6)
    if num == 0:
        num = 1
    return QQ(num, rng.randint(1, 4))


def random_monomial(rng: random.Random, dim: int, max_x: int, max_y: int,
                    allow_eta: bool = True):
    xe = [0] * dim
    for _ in range(max_x):
        if rng.random() < 0.5:
            xe[rng.randrange(dim)] += 1
    ye = [0] * dim
    for _ in range(max_y):
        if rng.random() < 0.5:
            ye[rng.randrange(dim)] += 1
    ps = tuple(sorted(rng.sample(range(1, dim + 1),
                                 rng.randint(0, dim))))
    es = ()
    if allow_eta:
        es = tuple(sorted(rng.sample(range(1, dim + 1),
                                     rng.randint(0, dim))))
    return (tuple(xe), tuple(ye), ps, es)


def random_form(rng: random.Random, dim: int, policy: TruncationPolicy,
                n_terms: int = 4, max_x: int = 2, max_y: int = 2,
                allow_eta: bool = True) -> GradedElement:
    items = [(random_monomial(rng, dim, max_x, max_y, allow_eta),
              random_coeff(rng)) for _ in range(n_terms)]
    return GradedElement.from_terms(dim, policy, items)


def random_homogeneous(rng: random.Random, dim: int, degree: int,
                       policy: TruncationPolicy, n_terms: int = 4,
                       max_x: int = 2, max_y: int = 2,
                       allow_eta: bool = True) -> Optional[GradedElement]:
    """Random element of pure odd degree; None if sampling came up empty."""
    items = []
    for _ in range(n_terms * 3):
        mono = random_monomial(rng, dim, max_x, max_y, allow_eta)
        if len(mono[2]) + len(mono[3]) == degree:
            items.append((mono, random_coeff(rng)))
        if len(items) >= n_terms:
            break
    el = GradedElement.from_terms(dim, policy, items)
    return None if el.is_zero() else el


def random_polyvector(rng: random.Random, dim: int,
                      policy: TruncationPolicy, n_terms: int = 3,
                      max_x: int = 2) -> GradedElement:
    """Random polyvector field: x and psi only."""
    items = []
    for _ in range(n_terms):
        mono = random_monomial(rng, dim, max_x, 0, allow_eta=False)
        items.append((mono, random_coeff(rng)))
    el = GradedElement.from_terms(dim, policy, items)
    if el.is_zero():
        z = (0,) * dim
        el = GradedElement.from_terms(
            dim, policy, [((z, z, (1,), ()), QQ(1))])
    return el


def random_vector_field(rng: random.Random, dim: int,
                        policy: TruncationPolicy, max_x: int = 2,
                        n_terms: int = 2) -> GradedElement:
    """Random vector field: psi-degree exactly 1."""
    items = []
    for _ in range(n_terms):
        xe = [0] * dim
        for _ in range(max_x):
            if rng.random() < 0.6:
                xe[rng.randrange(dim)] += 1
        mono = (tuple(xe), (0,) * dim, (rng.randint(1, dim),), ())
        items.append((mono, random_coeff(rng)))
    el = GradedElement.from_terms(dim, policy, items)
    if el.is_zero():
        z = (0,) * dim
        el = GradedElement.from_terms(
            dim, policy, [((z, z, (1,), ()), QQ(1))])
    return el


def random_linear_vector_field(rng: random.Random, dim: int,
                               policy: TruncationPolicy) -> GradedElement:
    """A^i_j x^j psi_i with random rational A, nonzero."""
    items = []
    z = (0,) * dim
    for i in range(1, dim + 1):
        for j in range(dim):
            c = rng.randint(-3, 3)
            if c:
                xe = tuple(1 if k == j else 0 for k in range(dim))
                items.append(((xe, z, (i,), ()), QQ(c)))
    if not items:
        xe = tuple(1 if k == 0 else 0 for k in range(dim))
        items.append(((xe, z, (1,), ()), QQ(1)))
    return GradedElement.from_terms(dim, policy, items)


def random_invertible_matrix(rng: random.Random, dim: int):
    """Random small-integer invertible matrix as a list of rows."""
    while True:
        m = [[QQ(rng.randint(-3, 3)) for _ in range(dim)]
             for _ in range(dim)]
        if _det(m) != 0:
            return m


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = QQ(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total - term if j % 2 else total + term
    return total
