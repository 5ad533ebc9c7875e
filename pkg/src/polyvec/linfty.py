"""Finite-arity homotopy-Lie machinery over the polyvector engine.

Cochains are families of n-ary graded-symmetric maps on the doubly
shifted space; because the double shift is parity-transparent, all
Koszul signs are computed with the plain odd degree of elements, while
the grading bookkeeping uses shifted degrees (a k-edge graph operator on
n vertices has degree 2(n-1) - k and parity k mod 2).

Provided: the insertion (Nijenhuis-Richardson) bracket, the differential
[bracket-cochain, -], exponentials of arity-raising degree-0 cochains,
Maurer-Cartan push-forward and morphism twisting, coalgebra-map
composition, and a morphism-equation checker for dg-Lie source/target.

All infinite series are truncated by a termination witness: summands
must strictly raise arity (exponentials need a vanishing 1-ary part;
twists insert a fixed even element, so the arity cap bounds the series).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from .algebra import GradedElement, TruncationPolicy, X, Y
from .complexes import schouten_bracket, vertical_bracket
from .graphs import GraphSum
from .scalars import QQ, coeff_is_zero


class TerminationError(ValueError):
    """A series has no witness that it terminates at this truncation."""


def koszul_unshuffle_sign(parities: Sequence[int],
                          subset: Sequence[int]) -> int:
    """Sign for moving the (sorted) subset of positions to the front."""
    sign = 1
    sset = set(subset)
    for s in subset:
        if parities[s] % 2 == 0:
            continue
        crossings = sum(1 for t in range(s) if t not in sset
                        and parities[t] % 2)
        if crossings % 2:
            sign = -sign
    return sign


def koszul_grouping_sign(parities: Sequence[int],
                         blocks: Sequence[Sequence[int]]) -> int:
    """Sign of regrouping items into the concatenated block order."""
    order = [i for block in blocks for i in block]
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b] and parities[order[a]] % 2 \
                    and parities[order[b]] % 2:
                sign = -sign
    return sign


class SymMap:
    """n-ary graded-symmetric map on polyvector fields or vertical forms.

    Subclasses implement eval_homogeneous on degree-homogeneous
    arguments; evaluate() distributes over homogeneous parts.
    """

    arity: int
    degree: int
    dim: int
    policy: TruncationPolicy

    def zero(self) -> GradedElement:
        return GradedElement.zero(self.dim, self.policy)

    def eval_homogeneous(self, args: List[GradedElement]) -> GradedElement:
        raise NotImplementedError

    def with_policy(self, policy: TruncationPolicy) -> "SymMap":
        raise TypeError(f"cannot re-home a {type(self).__name__}")

    def verticalized(self) -> "SymMap":
        """The same operator with y-differentiating edges (x, eta inert)."""
        raise TypeError(
            f"cannot extend a {type(self).__name__} vertically; only "
            "graph-backed components (and their closures) admit the "
            "coefficient-linear continuation")

    def evaluate(self, args: List[GradedElement]) -> GradedElement:
        if len(args) != self.arity:
            raise ValueError(
                f"arity mismatch: map takes {self.arity}, got {len(args)}")
        parts = [list(a.homogeneous_parts().values()) for a in args]
        if any(not p for p in parts):
            return self.zero()
        out = self.zero()
        for combo in itertools.product(*parts):
            out = out + self.eval_homogeneous(list(combo))
        return out

    @property
    def parity(self) -> int:
        return self.degree % 2


class ZeroMap(SymMap):
    def __init__(self, arity: int, degree: int, dim: int,
                 policy: TruncationPolicy):
        self.arity, self.degree, self.dim, self.policy = \
            arity, degree, dim, policy

    def eval_homogeneous(self, args):
        return self.zero()

    def evaluate(self, args):
        return self.zero()


class IdentityMap(SymMap):
    arity = 1
    degree = 0

    def __init__(self, dim: int, policy: TruncationPolicy):
        self.dim, self.policy = dim, policy

    def eval_homogeneous(self, args):
        return args[0]

    def evaluate(self, args):
        if len(args) != 1:
            raise ValueError("identity is 1-ary")
        return args[0]

    def with_policy(self, policy):
        return IdentityMap(self.dim, policy)

    def verticalized(self):
        return self


class LinearMap(SymMap):
    """1-ary map from a callable (differentials, contractions)."""

    arity = 1

    def __init__(self, fn: Callable[[GradedElement], GradedElement],
                 degree: int, dim: int, policy: TruncationPolicy):
        self.fn, self.degree, self.dim, self.policy = fn, degree, dim, policy

    def eval_homogeneous(self, args):
        return self.fn(args[0])

    def evaluate(self, args):
        if len(args) != 1:
            raise ValueError("1-ary map")
        return self.fn(args[0])


class BracketMap(SymMap):
    """2-ary map from a bracket callable; degree +1 in shifted grading."""

    arity = 2
    degree = 1

    def __init__(self, bracket: Callable, dim: int,
                 policy: TruncationPolicy):
        self.bracket, self.dim, self.policy = bracket, dim, policy

    def eval_homogeneous(self, args):
        return self.bracket(args[0], args[1])

    def evaluate(self, args):
        if len(args) != 2:
            raise ValueError("2-ary map")
        return self.bracket(args[0], args[1])


class GraphMap(SymMap):
    """Graph-backed operator; the fast directed expansion does the work."""

    def __init__(self, graphs: GraphSum, dim: int, policy: TruncationPolicy,
                 even_kind: str = X, weight=QQ(1)):
        from .action import phi_directed_expansion
        self._eval = phi_directed_expansion
        self.graphs = graphs
        self.arity = graphs.n
        self.degree = graphs.degree() if graphs.terms else 0
        self.dim, self.policy = dim, policy
        self.even_kind = even_kind
        self.weight = weight

    def eval_homogeneous(self, args):
        out = self._eval(self.graphs, args, self.even_kind)
        return out.scale(self.weight)

    def with_mode(self, even_kind: str) -> "GraphMap":
        return GraphMap(self.graphs, self.dim, self.policy, even_kind,
                        self.weight)

    def with_policy(self, policy):
        return GraphMap(self.graphs, self.dim, policy, self.even_kind,
                        self.weight)

    def verticalized(self):
        return self.with_mode(Y)


class ScaledMap(SymMap):
    def __init__(self, base: SymMap, coeff):
        self.base, self.coeff = base, coeff
        self.arity, self.degree = base.arity, base.degree
        self.dim, self.policy = base.dim, base.policy

    def eval_homogeneous(self, args):
        return self.base.eval_homogeneous(args).scale(self.coeff)

    def evaluate(self, args):
        return self.base.evaluate(args).scale(self.coeff)

    def with_policy(self, policy):
        return ScaledMap(self.base.with_policy(policy), self.coeff)

    def verticalized(self):
        return ScaledMap(self.base.verticalized(), self.coeff)


class SumMap(SymMap):
    def __init__(self, parts: List[SymMap]):
        if not parts:
            raise ValueError("empty sum needs an explicit ZeroMap")
        self.parts = parts
        self.arity = parts[0].arity
        self.degree = parts[0].degree
        self.dim, self.policy = parts[0].dim, parts[0].policy
        for p in parts:
            if p.arity != self.arity:
                raise ValueError("mixed arities in a map sum")

    def eval_homogeneous(self, args):
        out = self.zero()
        for p in self.parts:
            out = out + p.eval_homogeneous(args)
        return out

    def evaluate(self, args):
        out = self.zero()
        for p in self.parts:
            out = out + p.evaluate(args)
        return out

    def with_policy(self, policy):
        return SumMap([p.with_policy(policy) for p in self.parts])

    def verticalized(self):
        return SumMap([p.verticalized() for p in self.parts])


class InsertionMap(SymMap):
    """(outer o-bar inner): sum over unshuffles of inner into the first
    slot of outer."""

    def __init__(self, outer: SymMap, inner: SymMap):
        self.outer, self.inner = outer, inner
        self.arity = outer.arity + inner.arity - 1
        self.degree = outer.degree + inner.degree
        self.dim, self.policy = outer.dim, outer.policy

    def eval_homogeneous(self, args):
        n = len(args)
        parities = [a.degree() for a in args]
        out = self.zero()
        for subset in itertools.combinations(range(n), self.inner.arity):
            sign = koszul_unshuffle_sign(parities, subset)
            inner_val = self.inner.evaluate([args[i] for i in subset])
            if inner_val.is_zero():
                continue
            rest = [args[i] for i in range(n) if i not in set(subset)]
            val = self.outer.evaluate([inner_val] + rest)
            if sign < 0:
                val = -val
            out = out + val
        return out


class PartialMap(SymMap):
    """base with a fixed tuple of even-parity elements in front."""

    def __init__(self, base: SymMap, frozen: List[GradedElement], weight):
        for el in frozen:
            if any(d % 2 for d in el.degrees()):
                raise ValueError("frozen arguments must be even")
        self.base, self.frozen, self.weight = base, frozen, weight
        self.arity = base.arity - len(frozen)
        self.degree = base.degree
        self.dim, self.policy = base.dim, base.policy
        if self.arity < 0:
            raise ValueError("too many frozen arguments")

    def eval_homogeneous(self, args):
        return self.base.evaluate(self.frozen + list(args)) \
            .scale(self.weight)

    def evaluate(self, args):
        if len(args) != self.arity:
            raise ValueError("arity mismatch")
        return self.base.evaluate(self.frozen + list(args)) \
            .scale(self.weight)


# ---------------------------------------------------------------------------
# cochains
# ---------------------------------------------------------------------------

@dataclass
class CECochain:
    """Components indexed by arity, sharing one (shifted) degree."""

    components: Dict[int, SymMap]
    degree: int
    arity_cap: int
    dim: int
    policy: TruncationPolicy

    def component(self, n: int) -> Optional[SymMap]:
        return self.components.get(n)

    def evaluate(self, n: int, args: List[GradedElement]) -> GradedElement:
        comp = self.components.get(n)
        if comp is None:
            return GradedElement.zero(self.dim, self.policy)
        return comp.evaluate(args)

    def is_zero_map(self) -> bool:
        return not self.components

    def scale(self, c) -> "CECochain":
        return CECochain({n: ScaledMap(m, c)
                          for n, m in self.components.items()},
                         self.degree, self.arity_cap, self.dim, self.policy)

    def with_policy(self, policy: TruncationPolicy) -> "CECochain":
        return CECochain({n: m.with_policy(policy)
                          for n, m in self.components.items()},
                         self.degree, self.arity_cap, self.dim, policy)

    def verticalized(self) -> "CECochain":
        return CECochain({n: m.verticalized()
                          for n, m in self.components.items()},
                         self.degree, self.arity_cap, self.dim, self.policy)


def graph_cochain(graphs: GraphSum, dim: int, policy: TruncationPolicy,
                  arity_cap: int, even_kind: str = X,
                  weight=QQ(1)) -> CECochain:
    gm = GraphMap(graphs, dim, policy, even_kind, weight)
    comps = {gm.arity: gm} if gm.arity <= arity_cap else {}
    return CECochain(comps, gm.degree, arity_cap, dim, policy)


def schouten_cochain(dim: int, policy: TruncationPolicy,
                     arity_cap: int) -> CECochain:
    """The bracket as a 2-cochain (the image of the one-edge graph)."""
    bm = BracketMap(schouten_bracket, dim, policy)
    return CECochain({2: bm}, 1, arity_cap, dim, policy)


def vertical_cochain(dim: int, policy: TruncationPolicy,
                     arity_cap: int) -> CECochain:
    bm = BracketMap(vertical_bracket, dim, policy)
    return CECochain({2: bm}, 1, arity_cap, dim, policy)


def nr_bracket(a: CECochain, b: CECochain) -> CECochain:
    """[a, b] = a o-bar b - (-1)^{|a||b|} b o-bar a, capped in arity."""
    cap = min(a.arity_cap, b.arity_cap)
    comps: Dict[int, List[SymMap]] = {}
    for p, ma in a.components.items():
        for q, mb in b.components.items():
            n = p + q - 1
            if n > cap or n < 1:
                continue
            comps.setdefault(n, []).append(InsertionMap(ma, mb))
            back = InsertionMap(mb, ma)
            s = QQ(-1 if (a.degree * b.degree) % 2 else 1)
            comps.setdefault(n, []).append(ScaledMap(back, -s))
    return CECochain({n: SumMap(parts) for n, parts in comps.items()},
                     a.degree + b.degree, cap, a.dim, a.policy)


def ce_differential(pi: CECochain, a: CECochain,
                    check_square: bool = True,
                    rng: Optional[random.Random] = None,
                    sampler: Optional[Callable] = None) -> CECochain:
    """[pi, -] for a bracket cochain pi with [pi, pi] = 0."""
    if check_square and sampler is not None:
        sq = nr_bracket(pi, pi)
        rng = rng or random.Random(0)
        for n, comp in sq.components.items():
            for _ in range(3):
                args = [sampler(rng) for _ in range(n)]
                if not comp.evaluate(args).is_zero():
                    raise ValueError(
                        "pi does not square to zero; not a Lie structure")
    return nr_bracket(pi, a)


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

@dataclass
class LInftyMorphism:
    """Taylor components F_1..F_cap of a symmetric-coalgebra morphism."""

    components: Dict[int, SymMap]
    arity_cap: int
    dim: int
    policy: TruncationPolicy

    def component(self, n: int) -> Optional[SymMap]:
        return self.components.get(n)

    def evaluate(self, n: int, args: List[GradedElement]) -> GradedElement:
        comp = self.components.get(n)
        if comp is None:
            return GradedElement.zero(self.dim, self.policy)
        return comp.evaluate(args)

    def first_is_identity(self) -> bool:
        return isinstance(self.components.get(1), IdentityMap)


def identity_morphism(dim: int, policy: TruncationPolicy,
                      arity_cap: int) -> LInftyMorphism:
    return LInftyMorphism({1: IdentityMap(dim, policy)}, arity_cap,
                          dim, policy)


def morphism_from_components(comps: Dict[int, SymMap], arity_cap: int,
                             dim: int,
                             policy: TruncationPolicy) -> LInftyMorphism:
    return LInftyMorphism(dict(comps), arity_cap, dim, policy)


def _coderivation_step(words, gamma: CECochain):
    """One application of the coderivation of gamma to weighted words.

    A word is (coeff, [elements]); elements are degree-homogeneous.
    """
    out = []
    for coeff, word in words:
        parities = [el.degree() for el in word]
        m = len(word)
        for j, comp in gamma.components.items():
            if j > m:
                continue
            for subset in itertools.combinations(range(m), j):
                sign = koszul_unshuffle_sign(parities, subset)
                val = comp.evaluate([word[i] for i in subset])
                if val.is_zero():
                    continue
                rest = [word[i] for i in range(m) if i not in set(subset)]
                for piece in val.homogeneous_parts().values():
                    c = coeff * QQ(sign)
                    out.append((c, [piece] + rest))
    return out


class _ExpComponent(SymMap):
    """Arity-n Taylor component of exp(gamma) for gamma with no 1-ary
    part: sum over iterated coderivation applications, corestricted."""

    def __init__(self, gamma: CECochain, n: int):
        self.gamma = gamma
        self.arity = n
        self.degree = 0
        self.dim, self.policy = gamma.dim, gamma.policy

    def with_policy(self, policy):
        return _ExpComponent(self.gamma.with_policy(policy), self.arity)

    def verticalized(self):
        return _ExpComponent(self.gamma.verticalized(), self.arity)

    def eval_homogeneous(self, args):
        out = self.zero()
        if self.arity == 1:
            out = out + args[0]
        words = [(QQ(1), list(args))]
        factorial = QQ(1)
        i = 0
        while words:
            i += 1
            factorial = factorial * i
            words = _coderivation_step(words, self.gamma)
            for coeff, word in words:
                if len(word) == 1:
                    out = out + word[0].scale(coeff / factorial)
            words = [(c, w) for c, w in words if len(w) > 1]
        return out


def exponential(gamma: CECochain) -> LInftyMorphism:
    """exp of a degree-0 cochain whose 1-ary part vanishes.

    Arity strictly drops along the coderivation powers, which is the
    termination witness; a nonzero 1-ary part would make every component
    an infinite series, so it is refused.
    """
    if gamma.degree != 0:
        raise ValueError("exponential needs a degree-0 cochain")
    if 1 in gamma.components:
        raise TerminationError(
            "exp of a cochain with a 1-ary part has no finite truncation "
            "witness at a fixed arity cap")
    comps: Dict[int, SymMap] = {1: IdentityMap(gamma.dim, gamma.policy)}
    for n in range(2, gamma.arity_cap + 1):
        comps[n] = _ExpComponent(gamma, n)
    return LInftyMorphism(comps, gamma.arity_cap, gamma.dim, gamma.policy)


def _set_partitions(items: List[int]):
    """All partitions of items into nonempty blocks (blocks sorted by
    their minimum, elements sorted)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        for k in range(len(sub)):
            yield sub[:k] + [[first] + sub[k]] + sub[k + 1:]
        yield [[first]] + sub


class _CompositeComponent(SymMap):
    """Arity-n component of F after G (coalgebra-map composition)."""

    def __init__(self, outer: LInftyMorphism, inner: LInftyMorphism,
                 n: int):
        self.outer, self.inner = outer, inner
        self.arity = n
        self.degree = 0
        self.dim, self.policy = outer.dim, outer.policy

    def eval_homogeneous(self, args):
        n = len(args)
        parities = [a.degree() for a in args]
        out = self.zero()
        for blocks in _set_partitions(list(range(n))):
            k = len(blocks)
            outer_comp = self.outer.component(k)
            if outer_comp is None:
                continue
            blocks = sorted([sorted(b) for b in blocks])
            sign = koszul_grouping_sign(parities, blocks)
            vals = []
            dead = False
            for block in blocks:
                v = self.inner.evaluate(len(block),
                                        [args[i] for i in block])
                if v.is_zero():
                    dead = True
                    break
                vals.append(v)
            if dead:
                continue
            val = outer_comp.evaluate(vals)
            if sign < 0:
                val = -val
            out = out + val
        return out


def compose_morphisms(outer: LInftyMorphism,
                      inner: LInftyMorphism) -> LInftyMorphism:
    cap = min(outer.arity_cap, inner.arity_cap)
    comps = {n: _CompositeComponent(outer, inner, n)
             for n in range(1, cap + 1)}
    return LInftyMorphism(comps, cap, outer.dim, outer.policy)


# ---------------------------------------------------------------------------
# Maurer-Cartan elements, push-forward, twisting
# ---------------------------------------------------------------------------

@dataclass
class MaurerCartanElement:
    """Even element pi with d pi + 1/2 [pi, pi] = 0 in its dg-Lie home."""

    value: GradedElement
    differential: Optional[Callable[[GradedElement], GradedElement]]
    bracket: Callable

    def residual(self) -> GradedElement:
        out = self.bracket(self.value, self.value).scale(QQ(1, 2))
        if self.differential is not None:
            out = self.differential(self.value) + out
        return out


def push_mc(phi: LInftyMorphism, pi: MaurerCartanElement,
            max_terms: Optional[int] = None) -> GradedElement:
    """pi' = sum_i 1/i! phi_i(pi, ..., pi); finite by the arity cap."""
    value = pi.value
    out = GradedElement.zero(phi.dim, phi.policy)
    top = phi.arity_cap if max_terms is None else min(max_terms,
                                                      phi.arity_cap)
    fact = QQ(1)
    for i in range(1, top + 1):
        fact = fact * i
        comp = phi.component(i)
        if comp is None:
            continue
        out = out + comp.evaluate([value] * i).scale(QQ(1) / fact)
    return out


class _TwistComponent(SymMap):
    """n-ary component of the twisted morphism:
    sum_i 1/i! F_{n+i}(pi^i, -)."""

    def __init__(self, phi: LInftyMorphism, value: GradedElement, n: int):
        self.phi, self.value = phi, value
        self.arity = n
        self.degree = 0
        self.dim, self.policy = phi.dim, phi.policy

    def eval_homogeneous(self, args):
        out = self.zero()
        fact = QQ(1)
        for i in range(0, self.phi.arity_cap - self.arity + 1):
            if i:
                fact = fact * i
            comp = self.phi.component(self.arity + i)
            if comp is None:
                continue
            out = out + comp.evaluate([self.value] * i + list(args)) \
                .scale(QQ(1) / fact)
        return out


def twist(phi: LInftyMorphism, pi: MaurerCartanElement) -> LInftyMorphism:
    """Twisted morphism between the pi- and pi'-shifted dg-Lie algebras.

    The insertion element must be even so repeated symmetric insertion is
    unambiguous; arity components beyond the cap are treated as absent,
    which is the truncation of the series.
    """
    if any(d % 2 for d in pi.value.degrees()):
        raise TerminationError(
            "twisting element must be even; odd insertions have no "
            "symmetric powers")
    comps = {n: _TwistComponent(phi, pi.value, n)
             for n in range(1, phi.arity_cap + 1)}
    return LInftyMorphism(comps, phi.arity_cap, phi.dim, phi.policy)


# ---------------------------------------------------------------------------
# the morphism-equation checker
# ---------------------------------------------------------------------------

@dataclass
class DgLieContext:
    """Source or target dg-Lie data: a bracket and an optional
    differential, plus how to test an element for zero."""

    bracket: Callable[[GradedElement, GradedElement], GradedElement]
    differential: Optional[Callable[[GradedElement], GradedElement]]
    zero_test: Callable[[GradedElement], bool]


def _f_after_q(phi: LInftyMorphism, src: DgLieContext, n: int,
               args: List[GradedElement]) -> GradedElement:
    parities = [a.degree() for a in args]
    out = GradedElement.zero(phi.dim, phi.policy)
    # 1-ary part of Q (the differential)
    if src.differential is not None:
        comp = phi.component(n)
        if comp is not None:
            for i in range(n):
                sign = koszul_unshuffle_sign(parities, (i,))
                new = src.differential(args[i])
                rest = args[:i] + args[i + 1:]
                val = comp.evaluate([new] + rest)
                out = out + (val if sign > 0 else -val)
    # 2-ary part (the bracket)
    comp = phi.component(n - 1)
    if comp is not None and n >= 2:
        for subset in itertools.combinations(range(n), 2):
            sign = koszul_unshuffle_sign(parities, subset)
            new = src.bracket(args[subset[0]], args[subset[1]])
            rest = [args[i] for i in range(n) if i not in subset]
            val = comp.evaluate([new] + rest)
            out = out + (val if sign > 0 else -val)
    return out


def _q_after_f(phi: LInftyMorphism, tgt: DgLieContext, n: int,
               args: List[GradedElement]) -> GradedElement:
    parities = [a.degree() for a in args]
    out = GradedElement.zero(phi.dim, phi.policy)
    if tgt.differential is not None:
        val = phi.evaluate(n, args)
        if not val.is_zero():
            out = out + tgt.differential(val)
    if n >= 2:
        # unordered pairs {S, S^c} with 0 in S to avoid double counting
        indices = list(range(1, n))
        for size in range(0, n - 1):
            for tail in itertools.combinations(indices, size):
                s1 = [0] + list(tail)
                s2 = [i for i in range(n) if i not in set(s1)]
                if not s2:
                    continue
                sign = koszul_grouping_sign(parities, [s1, s2])
                v1 = phi.evaluate(len(s1), [args[i] for i in s1])
                if v1.is_zero():
                    continue
                v2 = phi.evaluate(len(s2), [args[i] for i in s2])
                if v2.is_zero():
                    continue
                val = tgt.bracket(v1, v2)
                out = out + (val if sign > 0 else -val)
    return out


def morphism_defect(phi: LInftyMorphism, src: DgLieContext,
                    tgt: DgLieContext, n: int,
                    args: List[GradedElement]) -> GradedElement:
    """(F o Q_src - Q_tgt o F) at arity n on the given arguments."""
    homs = [list(a.homogeneous_parts().values()) for a in args]
    out = GradedElement.zero(phi.dim, phi.policy)
    for combo in itertools.product(*homs):
        combo = list(combo)
        out = out + _f_after_q(phi, src, n, combo) \
            - _q_after_f(phi, tgt, n, combo)
    return out


def check_morphism(phi: LInftyMorphism, src: DgLieContext,
                   tgt: DgLieContext, sampler: Callable,
                   rng: random.Random, samples: int = 5,
                   arity_max: Optional[int] = None) -> bool:
    """Randomized check of the morphism equations up to the arity cap."""
    top = arity_max or phi.arity_cap
    for n in range(1, top + 1):
        for _ in range(samples):
            args = [sampler(rng) for _ in range(n)]
            defect = morphism_defect(phi, src, tgt, n, args)
            if not tgt.zero_test(defect):
                return False
    return True
