"""Finite simple graphs with dense integer vertex labels.

Everything here is combinatorial: graph families (complete multipartite
graphs, clique-cycle joins), structural predicates, and the exact dimension
certificates they support.  Two conventions matter for unit-distance work
and are used consistently across the package:

* vertices always map to pairwise distinct points, so any graph on two or
  more vertices needs at least a line (R^0 holds a single point only), and
  the empty graph on k >= 2 vertices has dimension exactly 1;
* a graph embeds on the real line exactly when it is acyclic with maximum
  degree at most 2, i.e. every component is a path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

Edge = tuple[int, int]


def _as_edge(e) -> Edge:
    u, v = int(e[0]), int(e[1])
    if u == v:
        raise DomainError(f"self-loop ({u}, {v}) is not allowed")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with edges as sorted pairs."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("vertex count must be non-negative")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={self.n}")

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        return Graph(n, frozenset(_as_edge(e) for e in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _as_edge((u, v)) in self.edges

    def neighbors(self, v: int) -> set[int]:
        if not (0 <= v < self.n):
            raise DomainError(f"vertex {v} out of range")
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency()]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            a[u, v] = a[v, u] = True
        return a

    def to_json_obj(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @staticmethod
    def from_json_obj(obj) -> "Graph":
        try:
            n = int(obj["n"])
            edges = obj.get("edges", [])
        except (TypeError, KeyError) as exc:
            raise DomainError(f"malformed graph JSON: {exc}") from exc
        return Graph.from_edges(n, edges)


@dataclass(frozen=True)
class PartitionSpec:
    """Part sizes of a complete multipartite graph, stored descending.

    ``alpha``/``beta`` count the parts of size 1 and 2.  Two counts are kept
    for larger parts because they play different roles: ``gamma_3plus``
    (parts of size >= 3) feeds the dimension formula, while ``gamma_exact3``
    (parts of size exactly 3) feeds the criticality clauses.
    """

    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise DomainError("a partition needs at least one part")
        if any(p < 1 for p in self.parts):
            raise DomainError("part sizes must be positive")
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @staticmethod
    def of(*sizes: int) -> "PartitionSpec":
        return PartitionSpec(tuple(int(s) for s in sizes))

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    @property
    def total_vertices(self) -> int:
        return sum(self.parts)

    @property
    def alpha(self) -> int:
        return sum(1 for p in self.parts if p == 1)

    @property
    def beta(self) -> int:
        return sum(1 for p in self.parts if p == 2)

    @property
    def gamma_3plus(self) -> int:
        return sum(1 for p in self.parts if p >= 3)

    @property
    def gamma_exact3(self) -> int:
        return sum(1 for p in self.parts if p == 3)

    def part_offsets(self) -> list[int]:
        """Starting vertex index of each part in the realized graph."""
        offs, acc = [], 0
        for p in self.parts:
            offs.append(acc)
            acc += p
        return offs

    def to_json_obj(self) -> dict:
        return {"parts": list(self.parts)}

    @staticmethod
    def from_json_obj(obj) -> "PartitionSpec":
        try:
            parts = obj["parts"]
        except (TypeError, KeyError) as exc:
            raise DomainError(f"malformed partition JSON: {exc}") from exc
        if not isinstance(parts, (list, tuple)):
            raise DomainError("'parts' must be a list of positive integers")
        return PartitionSpec(tuple(int(p) for p in parts))


@dataclass(frozen=True)
class JoinSpec:
    """A clique on ``n`` vertices fully joined to a cycle of length ``m``."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("clique size must be >= 1")
        if self.m < 3:
            raise DomainError("cycle length must be >= 3")


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def build_multipartite(spec: PartitionSpec) -> Graph:
    """Complete multipartite graph; vertices grouped part by part."""
    offsets = spec.part_offsets()
    groups = [range(off, off + size) for off, size in zip(offsets, spec.parts)]
    edges = set()
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            for u in groups[i]:
                for v in groups[j]:
                    edges.add((u, v))
    return Graph(spec.total_vertices, frozenset(edges))


def build_join_clique_cycle(spec: JoinSpec) -> Graph:
    """Clique vertices 0..n-1, cycle vertices n..n+m-1 in cyclic order."""
    n, m = spec.n, spec.m
    edges = set()
    for u, v in itertools.combinations(range(n), 2):
        edges.add((u, v))
    for k in range(m):
        edges.add(_as_edge((n + k, n + (k + 1) % m)))
    for u in range(n):
        for k in range(m):
            edges.add((u, n + k))
    return Graph(n + m, frozenset(edges))


def delete_edge(g: Graph, e) -> Graph:
    e = _as_edge(e)
    if e not in g.edges:
        raise DomainError(f"edge {e} not present")
    return Graph(g.n, g.edges - {e})


def delete_vertex(g: Graph, v: int) -> Graph:
    """Remove a vertex; the remaining vertices are reindexed order-preserving."""
    if not (0 <= v < g.n):
        raise DomainError(f"vertex {v} out of range")
    shift = lambda w: w if w < v else w - 1
    edges = {(shift(a), shift(b)) for a, b in g.edges if v not in (a, b)}
    return Graph(g.n - 1, frozenset(edges))


# ---------------------------------------------------------------------------
# Structural predicates
# ---------------------------------------------------------------------------

def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    adj = g.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def is_path_forest(g: Graph) -> bool:
    """True iff every component is a path (isolated vertices count as paths)."""
    adj = g.adjacency()
    if any(len(s) > 2 for s in adj):
        return False
    # acyclic <=> every component has |edges| = |vertices| - 1
    seen = [False] * g.n
    for start in range(g.n):
        if seen[start]:
            continue
        comp_vertices = 0
        comp_degree_sum = 0
        stack = [start]
        seen[start] = True
        while stack:
            u = stack.pop()
            comp_vertices += 1
            comp_degree_sum += len(adj[u])
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if comp_degree_sum // 2 != comp_vertices - 1:
            return False
    return True


def is_cycle_graph(g: Graph) -> bool:
    return g.n >= 3 and all(len(s) == 2 for s in g.adjacency()) and is_connected(g)


def multipartite_parts(g: Graph) -> list[list[int]] | None:
    """Recover the parts of a complete multipartite graph, or None.

    Vertices belong to the same part exactly when they have the same
    neighborhood; the grouping is then checked against the required
    all-cross-edges structure.  Parts come back sorted by (size desc,
    smallest label).
    """
    if g.n == 0:
        return None
    adj = g.adjacency()
    groups: dict[frozenset, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(frozenset(adj[v]), []).append(v)
    everything = set(range(g.n))
    parts = list(groups.values())
    for members in parts:
        expected = everything - set(members)
        for v in members:
            if adj[v] != expected:
                return None
    parts.sort(key=lambda p: (-len(p), p[0]))
    return parts


def join_structure(g: Graph) -> tuple[list[int], list[int]] | None:
    """Split a clique-plus-cycle join into (clique vertices, cycle in order).

    The clique vertices are exactly the universal ones; the rest must induce
    a single cycle of length >= 3.  Returns None when the graph is not of
    this form (note K_n joined to a triangle is complete, hence has no
    non-universal vertices and is reported as None here; the multipartite
    recognizer covers it).
    """
    if g.n < 4:
        return None
    adj = g.adjacency()
    universal = [v for v in range(g.n) if len(adj[v]) == g.n - 1]
    if not universal:
        return None
    rest = [v for v in range(g.n) if v not in set(universal)]
    m = len(rest)
    if m < 3:
        return None
    rest_set = set(rest)
    inner = {v: adj[v] & rest_set for v in rest}
    if any(len(s) != 2 for s in inner.values()):
        return None
    start = min(rest)
    order = [start]
    prev, cur = None, start
    while True:
        nxt_choices = sorted(inner[cur] - ({prev} if prev is not None else set()))
        if not nxt_choices:
            return None
        nxt = nxt_choices[0]
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
        if len(order) > m:
            return None
    if len(order) != m:
        return None
    return universal, order


# ---------------------------------------------------------------------------
# Clique number
# ---------------------------------------------------------------------------

_EXHAUSTIVE_CLIQUE_LIMIT = 12


def clique_number(g: Graph) -> int:
    """Size of a largest clique: exact up to 12 vertices, greedy above.

    The greedy fallback still returns the size of a genuine clique, so
    dimension bounds built on it remain sound, merely possibly loose.
    """
    if g.n == 0:
        return 0
    if not g.edges:
        return 1
    if g.n <= _EXHAUSTIVE_CLIQUE_LIMIT:
        return _clique_exact(g)
    return _clique_greedy(g)


def _clique_exact(g: Graph) -> int:
    n = g.n
    masks = [0] * n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    best = 1

    def expand(cand: int, size: int):
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            if size + 1 + (cand & masks[v]).bit_count() <= best:
                continue
            expand(cand & masks[v], size + 1)
        best = max(best, size)

    expand((1 << n) - 1, 0)
    return best


def _clique_greedy(g: Graph) -> int:
    adj = g.adjacency()
    by_degree = sorted(range(g.n), key=lambda v: (-len(adj[v]), v))
    best = 1
    for start in by_degree:
        clique = {start}
        for u in by_degree:
            if u != start and clique <= adj[u]:
                clique.add(u)
        best = max(best, len(clique))
    return best


# ---------------------------------------------------------------------------
# Combinatorial dimension bounds
# ---------------------------------------------------------------------------

def dimension_lower_bound(g: Graph) -> int:
    """Sound lower bound on the unit-distance dimension.

    max of: 0; 1 once two distinct points are needed; 2 when some component
    is not a path; and (clique size - 1), since k mutually unit-distant
    points span a regular simplex needing k-1 dimensions.
    """
    bound = 0
    if g.n >= 2:
        bound = 1
    if not is_path_forest(g):
        bound = max(bound, 2)
    bound = max(bound, clique_number(g) - 1)
    return bound


def dimension_upper_bound_trivial(g: Graph) -> int:
    """Upper bound with no search: simplex placement, or the line for path forests."""
    if g.n <= 1:
        return 0
    if is_path_forest(g):
        return 1
    return g.n - 1


# ---------------------------------------------------------------------------
# Canonical forms, isomorphism, enumeration
# ---------------------------------------------------------------------------

_CANONICAL_LIMIT = 8
_perm_cache: dict[int, np.ndarray] = {}
_triu_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _perms(n: int) -> np.ndarray:
    if n not in _perm_cache:
        _perm_cache[n] = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    return _perm_cache[n]


def _triu(n: int):
    if n not in _triu_cache:
        iu = np.triu_indices(n, 1)
        weights = (np.int64(1) << np.arange(len(iu[0]), dtype=np.int64))
        _triu_cache[n] = (iu[0], iu[1], weights)
    return _triu_cache[n]


def canonical_form(g: Graph) -> tuple[tuple[int, int], tuple[int, ...]]:
    """Canonical key and witnessing permutation for graphs on <= 8 vertices.

    The key is (n, code) where code encodes the lexicographically smallest
    adjacency matrix over all vertex permutations.  The permutation ``p``
    satisfies: relabeled vertex i corresponds to original vertex p[i].
    """
    n = g.n
    if n > _CANONICAL_LIMIT:
        raise DomainError(f"canonical form limited to {_CANONICAL_LIMIT} vertices")
    if n <= 1:
        return (n, 0), tuple(range(n))
    a = g.adjacency_matrix()
    perms = _perms(n)
    sub = a[perms[:, :, None], perms[:, None, :]]
    r, c, w = _triu(n)
    codes = sub[:, r, c].astype(np.int64) @ w
    i = int(np.argmin(codes))
    return (n, int(codes[i])), tuple(int(x) for x in perms[i])


def relabel(g: Graph, perm: tuple[int, ...]) -> Graph:
    """Relabeled copy where new vertex i plays the role of original perm[i]."""
    inv = [0] * g.n
    for i, v in enumerate(perm):
        inv[v] = i
    return Graph.from_edges(g.n, ((inv[u], inv[v]) for u, v in g.edges))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    """Brute-force isomorphism check for graphs on at most 8 vertices."""
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if g.n > _CANONICAL_LIMIT:
        raise DomainError(f"isomorphism check limited to {_CANONICAL_LIMIT} vertices")
    return canonical_form(g)[0] == canonical_form(h)[0]


def enumerate_graphs(max_vertices: int, connected_only: bool = False) -> list[Graph]:
    """All graphs up to isomorphism on 1..max_vertices vertices.

    Built by vertex augmentation: every graph on k vertices is some graph on
    k-1 vertices plus one new vertex attached to an arbitrary neighbor
    subset, deduplicated through :func:`canonical_form`.  Output is sorted
    by (vertex count, canonical code), so iteration order is reproducible.
    """
    if not (1 <= max_vertices <= 7):
        raise DomainError("enumeration supported for 1..7 vertices")
    levels: dict[int, dict[tuple[int, int], Graph]] = {
        1: {(1, 0): Graph.from_edges(1, [])}
    }
    for n in range(2, max_vertices + 1):
        out: dict[tuple[int, int], Graph] = {}
        for smaller in levels[n - 1].values():
            base = set(smaller.edges)
            for mask in range(1 << (n - 1)):
                edges = set(base)
                for v in range(n - 1):
                    if mask >> v & 1:
                        edges.add((v, n - 1))
                cand = Graph(n, frozenset(edges))
                key, _ = canonical_form(cand)
                if key not in out:
                    out[key] = cand
        levels[n] = out
    result: list[Graph] = []
    for n in range(1, max_vertices + 1):
        for key in sorted(levels[n]):
            cand = levels[n][key]
            if connected_only and not is_connected(cand):
                continue
            result.append(cand)
    return result
