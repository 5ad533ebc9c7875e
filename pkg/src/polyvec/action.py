"""Evaluation of graphs as polydifferential operators on polyvector fields.

A graph on n vertices acts on n polyvector fields: each edge {i, j}
contributes the operator

    sum_k ( d/dx^k at slot j . d/dpsi_k at slot i
          + d/dpsi_k at slot j . d/dx^k at slot i )

applied to the tensor product, edges in stored order (first edge acts
first), and the slots are finally multiplied left to right.  Since every
edge operator is odd, transposing two edges flips the overall sign in
step with the canonical-form sign of the graph, so evaluation is
well-defined on signed graphs.

The one-edge graph on two vertices evaluates to the Schouten bracket with
no correction factor: the double shift that makes graph degrees match
operator degrees is parity-transparent, so no suspension signs appear
anywhere in the evaluation.

Two independent evaluation paths are provided: `phi` applies edges to an
explicit tensor state, `phi_directed_expansion` enumerates edge
orientations and per-slot derivative chains.  They must agree exactly;
the second is also the fast path for large arguments.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .algebra import (PSI, X, Y, GradedElement, TruncationPolicy, derive,
                      mono_degree, multiply, serialize, substitute_linear)
from .complexes import schouten_bracket
from .graphs import Graph, GraphSum, compose
from .sampling import (random_invertible_matrix, random_linear_vector_field,
                       random_polyvector, random_vector_field)
from .scalars import QQ, coeff_is_zero

GraphLike = Union[Graph, GraphSum]


def _as_sum(g: GraphLike) -> GraphSum:
    if isinstance(g, Graph):
        return GraphSum(g.n, {g: QQ(1)})
    return g


def _mono_derive(mono, kind: str, index: int):
    """Derivative on a bare monomial; returns (monomial, coeff) or None."""
    xe, ye, ps, es = mono
    i = index - 1
    if kind == X:
        k = xe[i]
        if not k:
            return None
        return (xe[:i] + (k - 1,) + xe[i + 1:], ye, ps, es), k
    if kind == Y:
        k = ye[i]
        if not k:
            return None
        return (xe, ye[:i] + (k - 1,) + ye[i + 1:], ps, es), k
    if kind == PSI:
        if index not in ps:
            return None
        pos = ps.index(index)
        return (xe, ye, ps[:pos] + ps[pos + 1:], es), (-1 if pos % 2 else 1)
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# path A: explicit tensor state
# ---------------------------------------------------------------------------

def _state_derive(state: dict, slot: int, kind: str, index: int) -> dict:
    """Apply a derivative at a tensor slot with Koszul slot-crossing signs."""
    odd = kind == PSI
    out: dict = {}
    for word, c in state.items():
        res = _mono_derive(word[slot], kind, index)
        if res is None:
            continue
        mono, mult = res
        if odd and any(mono_degree(word[l]) % 2 for l in range(slot)):
            crossings = sum(mono_degree(word[l]) for l in range(slot))
            if crossings % 2:
                mult = -mult
        new_word = word[:slot] + (mono,) + word[slot + 1:]
        v = c * mult
        acc = out.get(new_word)
        v = v if acc is None else acc + v
        if coeff_is_zero(v):
            out.pop(new_word, None)
        else:
            out[new_word] = v
    return out


def _state_edge(state: dict, i: int, j: int, dim: int,
                even_kind: str) -> dict:
    out: dict = {}
    for k in range(1, dim + 1):
        for a, b in ((i, j), (j, i)):
            # directed a -> b: psi-derivative at a, even derivative at b
            part = _state_derive(state, b, even_kind, k)
            part = _state_derive(part, a, PSI, k)
            for word, c in part.items():
                acc = out.get(word)
                c2 = c if acc is None else acc + c
                if coeff_is_zero(c2):
                    out.pop(word, None)
                else:
                    out[word] = c2
    return out


def _multiply_out(state: dict, dim: int,
                  policy: TruncationPolicy) -> GradedElement:
    out = GradedElement.zero(dim, policy)
    for word, c in state.items():
        acc = GradedElement.scalar(dim, policy, c)
        for mono in word:
            acc = multiply(acc, GradedElement(dim, policy, {mono: QQ(1)}))
            if acc.is_zero():
                break
        out = out + acc
    return out


def phi_graph(g: Graph, args: List[GradedElement],
              even_kind: str = X) -> GradedElement:
    """Evaluate one graph on homogeneous-or-not arguments (tensor path)."""
    if len(args) != g.n:
        raise ValueError(f"arity mismatch: graph has {g.n} vertices, "
                         f"got {len(args)} arguments")
    dim = args[0].dim
    policy = args[0].policy
    for a in args:
        if a.dim != dim:
            raise ValueError("argument dimension mismatch")
    total = GradedElement.zero(dim, policy)
    # split into homogeneous slot combinations so slot degrees are defined
    parts = [list(a.homogeneous_parts().items()) for a in args]
    if any(not p for p in parts):
        return total
    for combo in itertools.product(*parts):
        state = {tuple(): QQ(1)}
        words: dict = {}
        monos = [dict(p[1].terms) for p in combo]
        for word in itertools.product(*[list(m.items()) for m in monos]):
            key = tuple(w[0] for w in word)
            c = QQ(1)
            for w in word:
                c = c * w[1]
            words[key] = c
        state = words
        # the edge product is operator composition: last-listed acts first
        for (a, b) in reversed(g.edges):
            state = _state_edge(state, a - 1, b - 1, dim, even_kind)
            if not state:
                break
        total = total + _multiply_out(state, dim, policy)
    return total


def phi(gamma: GraphLike, args: List[GradedElement],
        even_kind: str = X) -> GradedElement:
    """Linear extension of phi_graph to graph sums."""
    gs = _as_sum(gamma)
    if not gs.terms:
        if not args:
            raise ValueError("cannot evaluate the empty sum with no args")
        return GradedElement.zero(args[0].dim, args[0].policy)
    out = None
    for g, c in gs.terms.items():
        val = phi_graph(g, args, even_kind).scale(c)
        out = val if out is None else out + val
    return out


# ---------------------------------------------------------------------------
# path B: directed-graph expansion with per-slot derivative chains
# ---------------------------------------------------------------------------

def _directed_term(g: Graph, orientation: Tuple[int, ...],
                   ks: Tuple[int, ...], degrees: List[int],
                   args: List[GradedElement], even_kind: str,
                   forbid_double_psi_on_vectors: bool = False):
    """One orientation and k-assignment; returns (sign, slot_chains) or
    None when a slot chain obviously annihilates."""
    sign = 1
    parities = [dg % 2 for dg in degrees]
    chains: List[List[Tuple[str, int]]] = [[] for _ in args]
    psi_counts = [0] * len(args)
    # temporal order: last-listed edge acts first (operator composition)
    for (edge, flip, k) in reversed(list(zip(g.edges, orientation, ks))):
        a, b = edge
        if flip:
            a, b = b, a
        # psi-derivative at tail a (odd), even derivative at head b
        tail, head = a - 1, b - 1
        if sum(parities[:tail]) % 2:
            sign = -sign
        parities[tail] ^= 1
        chains[tail].append((PSI, k))
        psi_counts[tail] += 1
        chains[head].append((even_kind, k))
    if forbid_double_psi_on_vectors:
        for slot, arg in enumerate(args):
            if psi_counts[slot] >= 2 and degrees[slot] == 1:
                return None
    return sign, chains


def _orientation_alive(g: Graph, orientation, psi_cap, in_cap) -> bool:
    """Degree arithmetic: an orientation dies when some slot receives
    more psi-derivatives than it has psi factors, or more head-ends than
    its even-variable capacity."""
    outs = [0] * g.n
    ins = [0] * g.n
    for (a, b), flip in zip(g.edges, orientation):
        if flip:
            a, b = b, a
        outs[a - 1] += 1
        ins[b - 1] += 1
    for l in range(g.n):
        if outs[l] > psi_cap[l] or ins[l] > in_cap[l]:
            return False
    return True


def phi_directed_graph(g: Graph, args: List[GradedElement],
                       even_kind: str = X) -> GradedElement:
    if len(args) != g.n:
        raise ValueError(f"arity mismatch: graph has {g.n} vertices, "
                         f"got {len(args)} arguments")
    dim = args[0].dim
    policy = args[0].policy
    total = GradedElement.zero(dim, policy)
    parts = [list(a.homogeneous_parts().items()) for a in args]
    if any(not p for p in parts):
        return total
    k_edges = g.k
    even_idx = 0 if even_kind == X else 1
    for combo in itertools.product(*parts):
        degrees = [deg for deg, _ in combo]
        slots = [el for _, el in combo]
        psi_cap = [max((len(m[2]) for m in el.terms), default=0)
                   for el in slots]
        in_cap = [max((sum(m[even_idx]) for m in el.terms), default=0)
                  for el in slots]
        chain_cache: dict = {}

        def derived(slot: int, chain) -> GradedElement:
            key = (slot, chain)
            got = chain_cache.get(key)
            if got is None:
                if chain:
                    got = derive(chain[-1][0], chain[-1][1],
                                 derived(slot, chain[:-1]))
                else:
                    got = slots[slot]
                chain_cache[key] = got
            return got

        for orientation in itertools.product((0, 1), repeat=k_edges):
            if not _orientation_alive(g, orientation, psi_cap, in_cap):
                continue
            for ks in itertools.product(range(1, dim + 1), repeat=k_edges):
                term = _directed_term(g, orientation, ks, degrees,
                                      slots, even_kind)
                if term is None:
                    continue
                sign, chains = term
                vals = []
                dead = False
                for slot in range(g.n):
                    v = derived(slot, tuple(chains[slot]))
                    if v.is_zero():
                        dead = True
                        break
                    vals.append(v)
                if dead:
                    continue
                acc = GradedElement.scalar(dim, policy, QQ(sign))
                for v in vals:
                    acc = multiply(acc, v)
                    if acc.is_zero():
                        break
                total = total + acc
    return total


def phi_directed_expansion(gamma: GraphLike, args: List[GradedElement],
                           even_kind: str = X) -> GradedElement:
    """Second evaluation path; must agree exactly with phi."""
    gs = _as_sum(gamma)
    if not gs.terms:
        return GradedElement.zero(args[0].dim, args[0].policy)
    out = None
    for g, c in gs.terms.items():
        val = phi_directed_graph(g, args, even_kind).scale(c)
        out = val if out is None else out + val
    return out


def vector_field_term_vanishing(g: Graph, args: List[GradedElement],
                                even_kind: str = X) -> bool:
    """Assert, orientation by orientation, that any summand which hits a
    degree-1 slot with two psi-derivatives vanishes; returns True when the
    filtered and unfiltered expansions agree (they always should)."""
    full = phi_directed_graph(g, args, even_kind)
    dim = args[0].dim
    policy = args[0].policy
    filtered = GradedElement.zero(dim, policy)
    parts = [list(a.homogeneous_parts().items()) for a in args]
    if any(not p for p in parts):
        return True
    for combo in itertools.product(*parts):
        degrees = [deg for deg, _ in combo]
        slots = [el for _, el in combo]
        for orientation in itertools.product((0, 1), repeat=g.k):
            for ks in itertools.product(range(1, dim + 1), repeat=g.k):
                term = _directed_term(g, orientation, ks, degrees, slots,
                                      even_kind,
                                      forbid_double_psi_on_vectors=True)
                if term is None:
                    continue
                sign, chains = term
                acc = GradedElement.scalar(dim, policy, QQ(sign))
                for slot, chain in enumerate(chains):
                    v = slots[slot]
                    for kind, k in chain:
                        v = derive(kind, k, v)
                    acc = multiply(acc, v)
                filtered = filtered + acc
    return full == filtered


# ---------------------------------------------------------------------------
# operad morphism property and the main-theorem condition gate
# ---------------------------------------------------------------------------

def operad_morphism_check(g1: Graph, i: int, g2: Graph,
                          args: List[GradedElement]) -> bool:
    """phi(g1 o_i g2) == (phi(g1) o_i phi(g2)) with shift-adjusted signs.

    The inner operator has parity k2 (its edge count); moving it past the
    first i-1 arguments costs the usual Koszul sign on their degrees.
    """
    if len(args) != g1.n + g2.n - 1:
        raise ValueError("arity mismatch for composite evaluation")
    lhs = phi(compose(g1, i, g2), args)
    inner_val = phi(g2, args[i - 1:i - 1 + g2.n])
    tail = args[i - 1 + g2.n:]
    rhs = None
    # the Koszul prefactor needs homogeneous degrees for the arguments the
    # inner operator moves past; distribute over their homogeneous parts
    heads = [list(a.homogeneous_parts().items()) for a in args[:i - 1]]
    for combo in itertools.product(*heads) if heads else [()]:
        outer_args = [el for _, el in combo] + [inner_val] + tail
        val = phi(g1, outer_args)
        if g2.k % 2 and sum(deg for deg, _ in combo) % 2:
            val = -val
        rhs = val if rhs is None else rhs + val
    return lhs == rhs


@dataclass
class ConditionReport:
    """Outcome of the four main-theorem condition checks."""

    series_stable: bool
    equivariant: bool
    vanishes_on_vector_fields: bool
    vanishes_on_linear_vector_field: bool
    witnesses: dict = field(default_factory=dict)

    def all_pass(self) -> bool:
        return (self.series_stable and self.equivariant and
                self.vanishes_on_vector_fields and
                self.vanishes_on_linear_vector_field)

    def failing(self) -> list:
        names = []
        if not self.series_stable:
            names.append(1)
        if not self.equivariant:
            names.append(2)
        if not self.vanishes_on_vector_fields:
            names.append(3)
        if not self.vanishes_on_linear_vector_field:
            names.append(4)
        return names


def check_conditions(gamma: GraphLike, dim: int,
                     rng: Optional[random.Random] = None,
                     samples: int = 6,
                     policy: Optional[TruncationPolicy] = None
                     ) -> ConditionReport:
    """Test the four conditions on a graph-backed n-ary operator."""
    rng = rng or random.Random(0)
    gs = _as_sum(gamma)
    n = gs.n
    k_max = max((g.k for g in gs.terms), default=0)
    policy = policy or TruncationPolicy(y_order=None, x_order=None)
    witnesses: dict = {}

    # (1) the output jet to order P-k only depends on input jets to order P
    series_ok = True
    jet_order = 3
    for _ in range(samples):
        args = [random_polyvector(rng, dim, policy, max_x=jet_order + 1)
                for _ in range(n)]
        cut = [a.truncate(x_max=jet_order) for a in args]
        full = phi(gs, args).truncate(x_max=jet_order - k_max)
        stub = phi(gs, cut).truncate(x_max=jet_order - k_max)
        if full != stub:
            series_ok = False
            witnesses[1] = [serialize(a) for a in args]
            break

    # (2) equivariance under linear coordinate change
    equi_ok = True
    for _ in range(samples):
        args = [random_polyvector(rng, dim, policy) for _ in range(n)]
        m = random_invertible_matrix(rng, dim)
        lhs = phi(gs, [substitute_linear(a, m) for a in args])
        rhs = substitute_linear(phi(gs, args), m)
        if lhs != rhs:
            equi_ok = False
            witnesses[2] = [serialize(a) for a in args]
            break

    # (3) vanishing on tuples of vector fields
    vf_ok = True
    for _ in range(samples):
        args = [random_vector_field(rng, dim, policy) for _ in range(n)]
        out = phi(gs, args)
        if not out.is_zero():
            vf_ok = False
            witnesses[3] = [serialize(a) for a in args]
            break

    # (4) vanishing when one input is a linear vector field
    lin_ok = True
    for _ in range(samples):
        pos = rng.randrange(n)
        args = [random_polyvector(rng, dim, policy) for _ in range(n)]
        args[pos] = random_linear_vector_field(rng, dim, policy)
        out = phi(gs, args)
        if not out.is_zero():
            lin_ok = False
            witnesses[4] = [serialize(a) for a in args]
            break

    return ConditionReport(series_ok, equi_ok, vf_ok, lin_ok, witnesses)


def mc_action_matches_schouten(rng: random.Random, dim: int,
                               policy: TruncationPolicy) -> bool:
    """phi of the one-edge graph equals the Schouten bracket."""
    from .graphs import mc_graph
    f = random_polyvector(rng, dim, policy)
    g = random_polyvector(rng, dim, policy)
    return phi(mc_graph(), [f, g]) == schouten_bracket(f, g)
