"""Sparse exact arithmetic in the graded-commutative algebra
Q[x^1..x^d] (x) Q[[y^1..y^d]] (x) Lambda[psi_1..psi_d] (x) Lambda[eta^1..eta^d].

Degrees: |x^i| = |y^i| = 0, |psi_i| = |eta^i| = 1.  Monomials are stored in
the fixed canonical order: x-part, y-part, ascending psi's, ascending eta's.
Any construction from unsorted odd factors picks up the sign of the sorting
permutation; repeated odd factors give zero.

Partial derivatives by odd generators are *left* derivations: applying
d/d(psi_k) to a canonical monomial multiplies by (-1)^(number of odd factors
preceding psi_k in the canonical word).

Truncation: a TruncationPolicy caps the total y-degree and x-degree of
*stored* monomials.  Construction and multiplication truncate; the linear
operators (derivatives, and the differentials built on them downstream) are
exact, so a raising operator such as y*d/deta may transiently exceed
y_order by one.  All identities then hold exactly on every coefficient the
policy retains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .scalars import QQ, coeff_is_zero

X, Y, PSI, ETA = "x", "y", "p", "e"

_EVEN_KINDS = (X, Y)
_ODD_KINDS = (PSI, ETA)


def generator_degree(kind: str) -> int:
    """0 for x,y; 1 for psi, eta."""
    if kind in _EVEN_KINDS:
        return 0
    if kind in _ODD_KINDS:
        return 1
    raise ValueError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class TruncationPolicy:
    """Caps on total y-degree and total x-degree.  None means unbounded."""

    y_order: Optional[int] = None
    x_order: Optional[int] = None

    def admits(self, mono: "Monomial") -> bool:
        if self.y_order is not None and sum(mono[1]) > self.y_order:
            return False
        if self.x_order is not None and sum(mono[0]) > self.x_order:
            return False
        return True


# A monomial is (x_exps, y_exps, psis, etas): dense exponent tuples of
# length d for the even parts, ascending index tuples (1-based) for the odd.
Monomial = tuple


def mono_one(dim: int) -> Monomial:
    z = (0,) * dim
    return (z, z, (), ())


def mono_degree(mono: Monomial) -> int:
    return len(mono[2]) + len(mono[3])


def merge_odd(a: tuple, b: tuple):
    """Merge two ascending index tuples; return (merged, sign) or None.

    The sign counts the transpositions needed to interleave b into a.
    A repeated index means the product is zero: return None.
    """
    if not a:
        return b, 1
    if not b:
        return a, 1
    out = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining len(a)-i factors of a
            if (len(a) - i) % 2:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), sign


def mono_mul(m1: Monomial, m2: Monomial):
    """Product of canonical monomials; returns (monomial, sign) or None."""
    x1, y1, p1, e1 = m1
    x2, y2, p2, e2 = m2
    # moving the psi-block of m2 past the eta-block of m1
    sign = -1 if (len(e1) % 2) and (len(p2) % 2) else 1
    mp = merge_odd(p1, p2)
    if mp is None:
        return None
    me = merge_odd(e1, e2)
    if me is None:
        return None
    ps, s1 = mp
    es, s2 = me
    xe = tuple(u + v for u, v in zip(x1, x2))
    ye = tuple(u + v for u, v in zip(y1, y2))
    return (xe, ye, ps, es), sign * s1 * s2


class GradedElement:
    """Finite Q-linear combination of canonical monomials."""

    __slots__ = ("dim", "policy", "terms")

    def __init__(self, dim: int, policy: TruncationPolicy, terms: dict):
        self.dim = dim
        self.policy = policy
        self.terms = terms

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, dim: int, policy: TruncationPolicy) -> "GradedElement":
        return cls(dim, policy, {})

    @classmethod
    def scalar(cls, dim: int, policy: TruncationPolicy, c) -> "GradedElement":
        if coeff_is_zero(c):
            return cls.zero(dim, policy)
        return cls(dim, policy, {mono_one(dim): c})

    @classmethod
    def generator(cls, dim: int, policy: TruncationPolicy, kind: str,
                  index: int) -> "GradedElement":
        if not 1 <= index <= dim:
            raise ValueError(f"generator index {index} out of range 1..{dim}")
        z = (0,) * dim
        unit = tuple(1 if i == index - 1 else 0 for i in range(dim))
        if kind == X:
            mono = (unit, z, (), ())
        elif kind == Y:
            mono = (z, unit, (), ())
        elif kind == PSI:
            mono = (z, z, (index,), ())
        elif kind == ETA:
            mono = (z, z, (), (index,))
        else:
            raise ValueError(f"unknown generator kind {kind!r}")
        if not policy.admits(mono):
            return cls.zero(dim, policy)
        return cls(dim, policy, {mono: QQ(1)})

    @classmethod
    def from_terms(cls, dim: int, policy: TruncationPolicy,
                   items: Iterable) -> "GradedElement":
        terms: dict = {}
        for mono, c in items:
            if coeff_is_zero(c) or not policy.admits(mono):
                continue
            acc = terms.get(mono)
            c = c if acc is None else acc + c
            if coeff_is_zero(c):
                terms.pop(mono, None)
            else:
                terms[mono] = c
        return cls(dim, policy, terms)

    # ---- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous element (0 for the zero element)."""
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop()

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for mono, c in self.terms.items():
            parts.setdefault(mono_degree(mono), {})[mono] = c
        return {
            deg: GradedElement(self.dim, self.policy, t)
            for deg, t in sorted(parts.items())
        }

    def y_degree(self) -> int:
        return max((sum(m[1]) for m in self.terms), default=0)

    def x_degree(self) -> int:
        return max((sum(m[0]) for m in self.terms), default=0)

    def coefficient(self, mono: Monomial):
        return self.terms.get(mono, QQ(0))

    # ---- arithmetic ----------------------------------------------------

    def _check_compatible(self, other: "GradedElement"):
        if self.dim != other.dim:
            raise ValueError(
                f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check_compatible(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            acc = terms.get(mono)
            c = c if acc is None else acc + c
            if coeff_is_zero(c):
                terms.pop(mono, None)
            else:
                terms[mono] = c
        return GradedElement(self.dim, self.policy, terms)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.dim, self.policy,
                             {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "GradedElement":
        if coeff_is_zero(c):
            return GradedElement.zero(self.dim, self.policy)
        terms = {}
        for mono, v in self.terms.items():
            w = c * v
            if not coeff_is_zero(w):
                terms[mono] = w
        return GradedElement(self.dim, self.policy, terms)

    def __mul__(self, other: "GradedElement") -> "GradedElement":
        return multiply(self, other)

    def truncate(self, y_max: Optional[int] = None,
                 x_max: Optional[int] = None) -> "GradedElement":
        terms = {}
        for mono, c in self.terms.items():
            if y_max is not None and sum(mono[1]) > y_max:
                continue
            if x_max is not None and sum(mono[0]) > x_max:
                continue
            terms[mono] = c
        return GradedElement(self.dim, self.policy, terms)

    def with_policy(self, policy: TruncationPolicy) -> "GradedElement":
        terms = {m: c for m, c in self.terms.items() if policy.admits(m)}
        return GradedElement(self.dim, policy, terms)

    # ---- comparisons ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self):
        return f"GradedElement({serialize(self)!r})"


def multiply(a: GradedElement, b: GradedElement,
             y_max: Optional[int] = None,
             x_max: Optional[int] = None) -> GradedElement:
    """Graded-commutative product, truncated by a's policy.

    y_max / x_max further restrict the output (used by the recursion
    engines to skip unneeded high-order mixing).
    """
    a._check_compatible(b)
    policy = a.policy
    cap_y = policy.y_order if y_max is None else (
        y_max if policy.y_order is None else min(y_max, policy.y_order))
    cap_x = policy.x_order if x_max is None else (
        x_max if policy.x_order is None else min(x_max, policy.x_order))
    terms: dict = {}
    b_items = [(m, c, sum(m[1]), sum(m[0])) for m, c in b.terms.items()]
    for m1, c1 in a.terms.items():
        y_budget = None if cap_y is None else cap_y - sum(m1[1])
        x_budget = None if cap_x is None else cap_x - sum(m1[0])
        for m2, c2, y2, x2 in b_items:
            if y_budget is not None and y2 > y_budget:
                continue
            if x_budget is not None and x2 > x_budget:
                continue
            prod = mono_mul(m1, m2)
            if prod is None:
                continue
            mono, sign = prod
            c = c1 * c2
            if sign < 0:
                c = -c
            acc = terms.get(mono)
            c = c if acc is None else acc + c
            if coeff_is_zero(c):
                terms.pop(mono, None)
            else:
                terms[mono] = c
    return GradedElement(a.dim, policy, terms)


def derive(kind: str, index: int, a: GradedElement) -> GradedElement:
    """Left partial derivative by the generator (kind, index).  Exact."""
    if not 1 <= index <= a.dim:
        raise ValueError(f"generator index {index} out of range 1..{a.dim}")
    terms: dict = {}
    i = index - 1
    for mono, c in a.terms.items():
        xe, ye, ps, es = mono
        if kind == X:
            k = xe[i]
            if k == 0:
                continue
            new = (xe[:i] + (k - 1,) + xe[i + 1:], ye, ps, es)
            v = c * k
        elif kind == Y:
            k = ye[i]
            if k == 0:
                continue
            new = (xe, ye[:i] + (k - 1,) + ye[i + 1:], ps, es)
            v = c * k
        elif kind == PSI:
            if index not in ps:
                continue
            pos = ps.index(index)
            new = (xe, ye, ps[:pos] + ps[pos + 1:], es)
            v = -c if pos % 2 else c
        elif kind == ETA:
            if index not in es:
                continue
            pos = es.index(index)
            new = (xe, ye, ps, es[:pos] + es[pos + 1:])
            v = -c if (len(ps) + pos) % 2 else c
        else:
            raise ValueError(f"unknown generator kind {kind!r}")
        acc = terms.get(new)
        v = v if acc is None else acc + v
        if coeff_is_zero(v):
            terms.pop(new, None)
        else:
            terms[new] = v
    return GradedElement(a.dim, a.policy, terms)


# ---- linear substitution ------------------------------------------------


def _invert_matrix(m):
    """Exact inverse of a square rational matrix (Gauss-Jordan)."""
    n = len(m)
    aug = [[QQ(m[r][c]) for c in range(n)] + [QQ(1) if c == r else QQ(0)
                                              for c in range(n)]
           for r in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = QQ(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def substitute_linear(a: GradedElement, m) -> GradedElement:
    """Algebra endomorphism x -> Mx, y -> My, psi/eta -> contragredient.

    M is a d x d invertible rational matrix (list of rows).  psi_i and
    eta^i map to sum_j (M^-1)[j][i] psi_j / eta^j, so contraction pairs
    such as y^i psi_i are preserved.  Composition satisfies
    S_M o S_N = S_{N M}.
    """
    d = a.dim
    if len(m) != d or any(len(row) != d for row in m):
        raise ValueError("matrix shape does not match element dimension")
    minv = _invert_matrix(m)
    policy = a.policy

    def gen_image(kind, index):
        if kind in (X, Y):
            out = GradedElement.zero(d, policy)
            for j in range(d):
                c = QQ(m[index - 1][j])
                if c:
                    out = out + GradedElement.generator(
                        d, policy, kind, j + 1).scale(c)
            return out
        out = GradedElement.zero(d, policy)
        for j in range(d):
            c = minv[j][index - 1]
            if c:
                out = out + GradedElement.generator(
                    d, policy, kind, j + 1).scale(c)
        return out

    images = {}

    def image(kind, index):
        key = (kind, index)
        if key not in images:
            images[key] = gen_image(kind, index)
        return images[key]

    result = GradedElement.zero(d, policy)
    for mono, c in a.terms.items():
        xe, ye, ps, es = mono
        acc = GradedElement.scalar(d, policy, c)
        for i, k in enumerate(xe):
            for _ in range(k):
                acc = acc * image(X, i + 1)
        for i, k in enumerate(ye):
            for _ in range(k):
                acc = acc * image(Y, i + 1)
        for i in ps:
            acc = acc * image(PSI, i)
        for i in es:
            acc = acc * image(ETA, i)
        result = result + acc
    return result


# ---- textual serialization ------------------------------------------------

def _mono_key(mono: Monomial):
    return (mono[0], mono[1], mono[2], mono[3])


def _mono_text(mono: Monomial) -> str:
    xe, ye, ps, es = mono
    parts = []
    for i, k in enumerate(xe):
        if k == 1:
            parts.append(f"x{i + 1}")
        elif k > 1:
            parts.append(f"x{i + 1}^{k}")
    for i, k in enumerate(ye):
        if k == 1:
            parts.append(f"y{i + 1}")
        elif k > 1:
            parts.append(f"y{i + 1}^{k}")
    parts.extend(f"p{i}" for i in ps)
    parts.extend(f"e{i}" for i in es)
    return " ".join(parts)


def serialize(a: GradedElement) -> str:
    """Canonical text form: terms sorted lexicographically by monomial."""
    if not a.terms:
        return "0"
    chunks = []
    for mono in sorted(a.terms, key=_mono_key):
        c = a.terms[mono]
        mtext = _mono_text(mono)
        if mtext:
            chunks.append(f"{c} * {mtext}")
        else:
            chunks.append(f"{c}")
    return " + ".join(chunks)


class ParseError(ValueError):
    pass


def _parse_factor(token: str, dim: int):
    """A factor is a rational or a generator power like x2^3, p1, e2."""
    token = token.strip()
    if not token:
        raise ParseError("empty factor")
    head = token[0]
    if head in (X, Y, PSI, ETA) and len(token) > 1 and \
            (token[1].isdigit()):
        body = token[1:]
        if "^" in body:
            idx_s, exp_s = body.split("^", 1)
            try:
                idx, exp = int(idx_s), int(exp_s)
            except ValueError as exc:
                raise ParseError(f"bad generator token {token!r}") from exc
        else:
            try:
                idx, exp = int(body), 1
            except ValueError as exc:
                raise ParseError(f"bad generator token {token!r}") from exc
        if not 1 <= idx <= dim:
            raise ParseError(f"generator index out of range in {token!r}")
        if head in _ODD_KINDS and exp != 1:
            raise ParseError(f"odd generator power in {token!r}")
        return ("gen", head, idx, exp)
    try:
        return ("coeff", QQ(token))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad factor {token!r}") from exc


def parse(text: str, dim: int,
          policy: TruncationPolicy = TruncationPolicy()) -> GradedElement:
    """Parse the textual form.  Whitespace-insensitive; '*' optional."""
    s = text.strip()
    if not s:
        raise ParseError("empty input")
    # split into signed terms at top level
    s = s.replace("-", "+-")
    out = GradedElement.zero(dim, policy)
    for raw_term in s.split("+"):
        raw_term = raw_term.strip()
        if not raw_term:
            continue
        negate = False
        while raw_term.startswith("-"):
            negate = not negate
            raw_term = raw_term[1:].strip()
        if not raw_term:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = QQ(1)
        term = GradedElement.scalar(dim, policy, QQ(1))
        for tok in raw_term.replace("*", " ").split():
            fac = _parse_factor(tok, dim)
            if fac[0] == "coeff":
                coeff = coeff * fac[1]
            else:
                _, kind, idx, exp = fac
                g = GradedElement.generator(dim, policy, kind, idx)
                for _ in range(exp):
                    term = term * g
        term = term.scale(-coeff if negate else coeff)
        out = out + term
    return out
