"""Exact dimension and criticality for complete multipartite graphs.

The dimension of a complete multipartite graph depends only on how many
parts of size 1, size 2, and size >= 3 it has (alpha, beta, gamma): it is
alpha + beta + 2*gamma, minus one when beta + gamma <= 1.  Criticality (does
every single-edge deletion lower the dimension?) admits a finite clause
list, decided here without any search.

Deleting an edge from a complete multipartite graph leaves a graph wedged
between complete multipartite graphs whose dimensions the formula gives:

* upper bounds: the original graph itself, and the graph obtained by
  pulling the two endpoints out of their parts and merging them into a new
  part of size 2 (the deleted pair is now non-adjacent, everything else
  gains edges only);
* lower bounds: delete either endpoint outright, or -- when an endpoint
  was a singleton part -- absorb it into the other endpoint's part, which
  only removes further edges.

Whenever the resulting sandwich collapses the per-orbit dimension is exact;
the rare gaps (they start at the complete bipartite graph on 2+3 vertices)
are closed by the numerical embedding search at the certified lower bound.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import DomainError, UnresolvedDimensionError
from .graphs import (
    Graph,
    PartitionSpec,
    build_multipartite,
    delete_edge,
    dimension_lower_bound,
    dimension_upper_bound_trivial,
)


class MultipartiteFormulaWarning(UserWarning):
    """The closed formula was not applicable; a bound-based value was returned."""


def _formula(alpha: int, beta: int, gamma: int) -> int:
    return alpha + beta + 2 * gamma - (1 if beta + gamma <= 1 else 0)


def multipartite_dimension(spec: PartitionSpec) -> int:
    """Dimension of the complete multipartite graph with these part sizes.

    The formula covers every spec with at least two parts, plus the single
    vertex.  A single part of size >= 2 realizes an edgeless graph the
    formula makes no claim about; for that input the matching combinatorial
    lower and upper bounds (both 1, distinct points on a line) are returned
    and a :class:`MultipartiteFormulaWarning` is issued.
    """
    if spec.num_parts == 1:
        if spec.parts[0] == 1:
            return 0
        g = build_multipartite(spec)
        lo, hi = dimension_lower_bound(g), dimension_upper_bound_trivial(g)
        if lo != hi:  # pragma: no cover - cannot happen for edgeless graphs
            raise UnresolvedDimensionError("edgeless graph bounds disagree", lo, hi)
        warnings.warn(
            "single part of size >= 2: dimension taken from matching "
            "combinatorial bounds, not the closed formula",
            MultipartiteFormulaWarning,
            stacklevel=2,
        )
        return lo
    return _formula(spec.alpha, spec.beta, spec.gamma_3plus)


def _parts_dimension(parts: tuple[int, ...]) -> int:
    """Formula dimension extended by the distinct-point convention.

    Handles the degenerate specs that show up while sandwiching edge
    deletions: no parts (dimension 0), and a single part (0 for a lone
    vertex, 1 for an edgeless graph on >= 2 vertices).
    """
    if not parts:
        return 0
    if len(parts) == 1:
        return 0 if parts[0] == 1 else 1
    alpha = sum(1 for p in parts if p == 1)
    beta = sum(1 for p in parts if p == 2)
    gamma = sum(1 for p in parts if p >= 3)
    return _formula(alpha, beta, gamma)


# ---------------------------------------------------------------------------
# Criticality classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalityVerdict:
    is_critical: bool
    rule: str
    witness: str | None = None

    def to_json_obj(self) -> dict:
        return {"is_critical": self.is_critical, "rule": self.rule, "witness": self.witness}


def classify_multipartite_criticality(spec: PartitionSpec) -> CriticalityVerdict:
    """Decide whether the realized graph is dimension-critical.

    Critical exactly when the spec is: a complete graph on >= 3 vertices;
    the 4-cycle [2,2]; the claw [3,1]; the [3,2] complete bipartite graph;
    or any mix of singleton parts with >= 2 parts of size exactly 3.  Every
    other spec (>= 2 parts, all sizes arbitrary) admits a deletion that
    keeps the dimension; the witness describes one.
    """
    if spec.num_parts < 2:
        raise DomainError("criticality needs a connected graph: at least 2 parts")
    offsets = spec.part_offsets()
    sizes = spec.parts

    def part_index(size: int, skip: int = -1) -> int:
        for i, s in enumerate(sizes):
            if s == size and i != skip:
                return i
        raise AssertionError("part lookup failed")

    if sizes[0] >= 4:
        v = offsets[0]
        return CriticalityVerdict(
            False,
            "part-of-size-4",
            f"delete vertex {v}: its part shrinks from {sizes[0]} to "
            f"{sizes[0] - 1}, dimension unchanged",
        )

    a, b, c = spec.alpha, spec.beta, spec.gamma_exact3

    if b == 0 and c == 0:
        if a >= 3:
            return CriticalityVerdict(True, "complete")
        return CriticalityVerdict(
            False,
            "k2",
            "delete edge (0, 1): two isolated vertices still need a line",
        )
    if b == 0 and c == 1:
        if a == 1:
            return CriticalityVerdict(True, "claw")
        i1 = part_index(1)
        j1 = part_index(1, skip=i1)
        u, v = offsets[i1], offsets[j1]
        return CriticalityVerdict(
            False,
            "one-triple",
            f"delete edge ({u}, {v}) between two singleton parts: dimension unchanged",
        )
    if b == 0 and c >= 2:
        return CriticalityVerdict(True, "triples-only")
    if b == 1 and c == 0:
        v = offsets[part_index(2)]
        return CriticalityVerdict(
            False,
            "one-pair",
            f"delete vertex {v} from the size-2 part: a complete graph of the "
            "same dimension remains",
        )
    if b == 1 and c == 1:
        if a == 0:
            return CriticalityVerdict(True, "k23")
        u = offsets[part_index(1)]
        v = offsets[part_index(2)]
        return CriticalityVerdict(
            False,
            "pair-and-triple",
            f"delete edge ({u}, {v}) between a singleton and the size-2 part: "
            "dimension unchanged",
        )
    if b == 2 and c == 0:
        if a == 0:
            return CriticalityVerdict(True, "four-cycle")
        u = offsets[part_index(1)]
        v = offsets[part_index(2)]
        return CriticalityVerdict(
            False,
            "two-pairs",
            f"delete edge ({u}, {v}) between a singleton and a size-2 part: "
            "dimension unchanged",
        )
    # everything left has b >= 1 and b + c >= 3
    v = offsets[part_index(2)]
    return CriticalityVerdict(
        False,
        "pair-rich",
        f"delete vertex {v} from a size-2 part: dimension unchanged",
    )


# ---------------------------------------------------------------------------
# Per-orbit deletion table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeletionOrbit:
    """One edge orbit of a complete multipartite graph.

    Edges are equivalent under the part-permuting symmetries exactly when
    the unordered pair of their endpoints' part sizes matches, so
    ``part_sizes`` identifies the orbit.  ``dimension`` is the exact
    dimension after deleting one such edge; ``certificate`` records whether
    the containment sandwich alone closed it or the numerical search had to
    confirm the lower bound.
    """

    part_sizes: tuple[int, int]
    edge: tuple[int, int]
    orbit_size: int
    dimension: int
    containing_parts: tuple[int, ...]
    certificate: str

    def to_json_obj(self) -> dict:
        return {
            "part_sizes": list(self.part_sizes),
            "edge": list(self.edge),
            "orbit_size": self.orbit_size,
            "dimension": self.dimension,
            "containing_parts": list(self.containing_parts),
            "certificate": self.certificate,
        }


def _reduced(parts: tuple[int, ...], remove: tuple[int, ...], add: tuple[int, ...]) -> tuple[int, ...]:
    bag = list(parts)
    for r in remove:
        bag.remove(r)
    bag.extend(p for p in add if p > 0)
    return tuple(sorted(bag, reverse=True))


def multipartite_deletion_table(spec: PartitionSpec, cfg=None) -> list[DeletionOrbit]:
    """Exact dimension after deleting one edge, per edge orbit.

    Orbits needing the numerical assist only arise at small sizes in
    practice; the search runs at the certified lower bound and its verified
    embedding closes the sandwich.  If neither route certifies an exact
    value an :class:`UnresolvedDimensionError` is raised rather than
    guessing.
    """
    if spec.num_parts < 2:
        raise DomainError("deletion table needs at least 2 parts")
    g = build_multipartite(spec)
    offsets = spec.part_offsets()
    sizes = spec.parts
    count = {}
    for s in sizes:
        count[s] = count.get(s, 0) + 1

    signatures = sorted(
        {
            (min(sizes[i], sizes[j]), max(sizes[i], sizes[j]))
            for i in range(len(sizes))
            for j in range(i + 1, len(sizes))
        }
    )

    table = []
    for s, t in signatures:
        i = sizes.index(s)
        j = next(k for k in range(len(sizes)) if sizes[k] == t and k != i)
        u, v = offsets[i], offsets[j]
        if u > v:
            u, v = v, u
        orbit_size = (
            count[s] * count[t] * s * t
            if s != t
            else count[s] * (count[s] - 1) // 2 * s * t
        )
        h = delete_edge(g, (u, v))
        merged = _reduced(sizes, (s, t), (2, s - 1, t - 1))
        uppers = [
            _parts_dimension(sizes),
            _parts_dimension(merged),
            dimension_upper_bound_trivial(h),
        ]
        lowers = [
            dimension_lower_bound(h),
            _parts_dimension(_reduced(sizes, (s,), (s - 1,))),
            _parts_dimension(_reduced(sizes, (t,), (t - 1,))),
        ]
        if s == 1:
            lowers.append(_parts_dimension(_reduced(sizes, (1, t), (t + 1,))))
        if t == 1:
            lowers.append(_parts_dimension(_reduced(sizes, (1, s), (s + 1,))))
        lo, up = max(lowers), min(uppers)
        if lo == up:
            certificate = "containment"
        else:
            from .search import SearchConfig, find_embedding  # deferred: search depends on this module

            emb = find_embedding(h, lo, cfg or SearchConfig())
            if emb is None:
                raise UnresolvedDimensionError(
                    f"orbit {s},{t} of {sizes}: sandwich open and search "
                    f"found nothing at the lower bound",
                    lo,
                    up,
                )
            certificate = "containment+search"
            up = lo
        table.append(
            DeletionOrbit((s, t), (u, v), orbit_size, lo, merged, certificate)
        )
    return table
