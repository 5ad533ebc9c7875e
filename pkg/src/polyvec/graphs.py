"""The operad of undirected graphs and the graph complex built on it.

A Graph has n numbered vertices and an ordered list of unordered edges
{i, j}, i != j.  Edge ordering carries a sign: reordering the list by an
odd permutation flips the element, so a graph with a repeated edge is
zero.  Composition g1 o_i g2 inserts g2 for vertex i of g1 and sums over
all reconnections of the edges that ended at i; g2's vertices occupy
positions i..i+n2-1 and its edges go to the end of the list.

Degree convention: deg(G) = 2(n-1) - k for n vertices, k edges, so the
one-edge graph on two vertices has degree 1 and the tetrahedron degree 0.

Invariant sums (vertex-renumbering-invariant rational combinations) form
a Lie algebra under [a,b] = sum_i a o_i b -+ ..., computed on
representatives and re-symmetrized; the one-edge graph is a Maurer-Cartan
element and d = [edge, -] is the differential.  Graphs whose vertices are
all at least trivalent span a subcomplex.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional, Tuple

from .scalars import QQ, coeff_is_zero


class Graph:
    """Canonical-form graph: edges sorted lexicographically, no repeats."""

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges: Tuple[Tuple[int, int], ...]):
        self.n = n
        self.edges = edges

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n \
            and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph({text_form(self)!r})"

    @property
    def k(self) -> int:
        return len(self.edges)

    def degree(self) -> int:
        return 2 * (self.n - 1) - self.k

    def valences(self):
        v = [0] * (self.n + 1)
        for a, b in self.edges:
            v[a] += 1
            v[b] += 1
        return v[1:]

    def is_at_least_trivalent(self) -> bool:
        return all(v >= 3 for v in self.valences())


def canonical(n: int, raw_edges: Iterable[Tuple[int, int]]):
    """Canonicalize an ordered edge list; return (Graph, sign) or None.

    None means the element is zero (repeated edge).  Loops are rejected.
    """
    edges = []
    for a, b in raw_edges:
        if a == b:
            raise ValueError(f"loop edge ({a},{b}) not allowed")
        if not (1 <= a <= n and 1 <= b <= n):
            raise ValueError(f"edge ({a},{b}) out of range 1..{n}")
        edges.append((a, b) if a < b else (b, a))
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(edges)):
        j = i
        while j > 0 and edges[j - 1] > edges[j]:
            edges[j - 1], edges[j] = edges[j], edges[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(edges)):
        if edges[i - 1] == edges[i]:
            return None
    return Graph(n, tuple(edges)), sign


class GraphSum:
    """Finite rational combination of canonical graphs on n vertices."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[dict] = None):
        self.n = n
        self.terms = terms or {}

    @classmethod
    def single(cls, n: int, raw_edges, coeff=QQ(1)) -> "GraphSum":
        out = canonical(n, raw_edges)
        if out is None or coeff_is_zero(coeff):
            return cls(n, {})
        g, sign = out
        return cls(n, {g: coeff * sign})

    def is_zero(self) -> bool:
        return not self.terms

    def add_graph(self, g: Graph, c):
        acc = self.terms.get(g)
        c = c if acc is None else acc + c
        if coeff_is_zero(c):
            self.terms.pop(g, None)
        else:
            self.terms[g] = c

    def __add__(self, other: "GraphSum") -> "GraphSum":
        if self.n != other.n:
            raise ValueError("vertex-count mismatch")
        out = GraphSum(self.n, dict(self.terms))
        for g, c in other.terms.items():
            out.add_graph(g, c)
        return out

    def __neg__(self) -> "GraphSum":
        return GraphSum(self.n, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GraphSum":
        if coeff_is_zero(c):
            return GraphSum(self.n, {})
        return GraphSum(self.n, {g: c * v for g, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, GraphSum) and self.n == other.n \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def degrees(self) -> set:
        return {g.degree() for g in self.terms}

    def degree(self) -> int:
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("graph sum is not degree-homogeneous")
        return degs.pop()

    def is_at_least_trivalent(self) -> bool:
        return all(g.is_at_least_trivalent() for g in self.terms)

    def __repr__(self):
        if not self.terms:
            return f"GraphSum(n={self.n}, 0)"
        bits = [f"{c}*[{text_form(g)}]" for g, c in sorted(
            self.terms.items(), key=lambda t: (t[0].edges,))]
        return "GraphSum(" + " + ".join(bits) + ")"


def unit_graph() -> Graph:
    return Graph(1, ())


def mc_graph() -> GraphSum:
    """The single-edge graph on two vertices."""
    return GraphSum.single(2, [(1, 2)])


def tetrahedron() -> GraphSum:
    return GraphSum.single(4, [(a, b) for a, b in
                               itertools.combinations(range(1, 5), 2)])


def compose_graph(g1: Graph, i: int, g2: Graph) -> GraphSum:
    """g1 o_i g2: insert g2 at vertex i of g1, summing reconnections."""
    if not 1 <= i <= g1.n:
        raise IndexError(f"vertex index {i} out of range 1..{g1.n}")
    n1, n2 = g1.n, g2.n
    n = n1 + n2 - 1

    def relabel1(v: int) -> int:
        return v if v < i else v + n2 - 1

    incident = []      # positions in g1.edges with one end at i
    for pos, (a, b) in enumerate(g1.edges):
        if a == i or b == i:
            incident.append(pos)

    out = GraphSum(n, {})
    for assignment in itertools.product(range(n2), repeat=len(incident)):
        raw = []
        it = iter(assignment)
        for pos, (a, b) in enumerate(g1.edges):
            if pos in incident:
                target = i + next(it)
                other = b if a == i else a
                raw.append((target, relabel1(other)))
            else:
                raw.append((relabel1(a), relabel1(b)))
        for (a, b) in g2.edges:
            raw.append((i + a - 1, i + b - 1))
        out = out + GraphSum.single(n, raw)
    return out


def compose(a, i: int, b) -> GraphSum:
    """Bilinear extension of compose_graph to graph sums."""
    if isinstance(a, Graph):
        a = GraphSum(a.n, {a: QQ(1)})
    if isinstance(b, Graph):
        b = GraphSum(b.n, {b: QQ(1)})
    out = GraphSum(a.n + b.n - 1, {})
    for g1, c1 in a.terms.items():
        for g2, c2 in b.terms.items():
            out = out + compose_graph(g1, i, g2).scale(c1 * c2)
    return out


def permute_vertices(g: Graph, perm: Tuple[int, ...]):
    """Relabel vertices by perm (perm[v-1] is the image of v); signed."""
    raw = [(perm[a - 1], perm[b - 1]) for a, b in g.edges]
    return canonical(g.n, raw)


def symmetrize(a) -> GraphSum:
    """Average over all vertex renumberings; idempotent projection."""
    if isinstance(a, Graph):
        a = GraphSum(a.n, {a: QQ(1)})
    n = a.n
    out = GraphSum(n, {})
    perms = list(itertools.permutations(range(1, n + 1)))
    norm = QQ(1, len(perms))
    for g, c in a.terms.items():
        for perm in perms:
            res = permute_vertices(g, perm)
            if res is None:
                continue
            h, sign = res
            out.add_graph(h, c * norm * sign)
    return out


def is_invariant(a: GraphSum) -> bool:
    return symmetrize(a) == a


def total_insertion(a: GraphSum, b: GraphSum) -> GraphSum:
    """sum_i a o_i b."""
    out = GraphSum(a.n + b.n - 1, {})
    for i in range(1, a.n + 1):
        out = out + compose(a, i, b)
    return out


def lie_bracket(a: GraphSum, b: GraphSum) -> GraphSum:
    """[a, b] on invariant sums: symmetrized insertion commutator."""
    da, db = a.degree(), b.degree()
    raw = total_insertion(a, b)
    sign = QQ(-1 if (da * db) % 2 else 1)
    raw = raw - total_insertion(b, a).scale(sign)
    return symmetrize(raw)


def differential(a: GraphSum) -> GraphSum:
    """d = [MC, -], degree +1; squares to zero on invariant sums."""
    return lie_bracket(mc_graph(), a)


# ---- textual format -------------------------------------------------------

def text_form(g: Graph) -> str:
    edges = ",".join(f"({a},{b})" for a, b in g.edges)
    return f"n={g.n}; edges={edges}"


class GraphParseError(ValueError):
    pass


def parse_graph(text: str):
    """Parse 'n=<int>; edges=(i,j),(k,l),...'; returns (Graph, sign).

    The listed edge order is honored: the recorded sign is the parity of
    the permutation that sorts it into canonical order.
    """
    s = text.strip()
    try:
        head, tail = s.split(";", 1)
        n = int(head.split("=", 1)[1])
        edge_text = tail.split("=", 1)[1].strip()
    except (ValueError, IndexError) as exc:
        raise GraphParseError(f"malformed graph text {text!r}") from exc
    raw = []
    if edge_text:
        buf = edge_text.replace(" ", "")
        if not (buf.startswith("(") and buf.endswith(")")):
            raise GraphParseError(f"malformed edge list {edge_text!r}")
        for pair in buf[1:-1].split("),("):
            bits = pair.split(",")
            if len(bits) != 2:
                raise GraphParseError(f"malformed edge {pair!r}")
            raw.append((int(bits[0]), int(bits[1])))
    try:
        out = canonical(n, raw)
    except ValueError as exc:
        raise GraphParseError(str(exc)) from exc
    if out is None:
        raise GraphParseError("graph has a repeated edge (zero element)")
    return out


def simple_graphs(n: int, min_valence: int = 0):
    """All canonical simple graphs on n vertices (itertools enumeration)."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for r in range(len(pairs) + 1):
        for chosen in itertools.combinations(pairs, r):
            g = Graph(n, tuple(chosen))
            if min_valence and not all(v >= min_valence for v in
                                       g.valences()):
                continue
            yield g


def gc2_basis(n: int):
    """Nonzero symmetrized classes of at-least-trivalent graphs on n
    vertices, one representative per linearly independent class."""
    basis = []
    seen = set()
    for g in simple_graphs(n, min_valence=3):
        sym = symmetrize(GraphSum(n, {g: QQ(1)}))
        if sym.is_zero():
            continue
        key = frozenset(sym.terms)
        if key in seen:
            continue
        seen.add(key)
        basis.append(sym)
    return basis
