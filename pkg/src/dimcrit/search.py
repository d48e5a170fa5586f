"""Numerical embedding search, certified dimension estimates, criticality.

The search can only ever prove upper bounds: a found embedding is verified
and kept as a certificate.  Lower bounds come exclusively from
combinatorics (clique size, the path-forest criterion, vertex count) or
from recognized families with known exact dimension, never from "the search
failed", so every reported bound is sound and the exact/interval status is
honest.  Undecided verdicts are first-class results throughout.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .errors import DomainError, GeometryError
from .geometry import (
    SEPARATION_TOL,
    Embedding,
    embed_join_clique_cycle,
    min_pairwise_distance,
    regular_simplex,
    embed_cycle_on_sphere,
    join_sphere_radius,
    verify_embedding,
)
from .graphs import (
    Graph,
    JoinSpec,
    PartitionSpec,
    canonical_form,
    clique_number,
    delete_edge,
    delete_vertex,
    dimension_lower_bound,
    dimension_upper_bound_trivial,
    enumerate_graphs,
    is_connected,
    is_cycle_graph,
    is_path_forest,
    join_structure,
    multipartite_parts,
    relabel,
)
from .multipartite import multipartite_dimension

_CANONICAL_LIMIT = 8
_HUNT_LIMIT = 7


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 50
    max_iter: int = 5000
    tol: float = 1e-7
    seed: int = 0
    init_scale: float = 1.0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iter < 1:
            raise DomainError("restarts and max_iter must be positive")
        if self.tol <= 0 or self.init_scale <= 0:
            raise DomainError("tolerances and scales must be positive")

    def fingerprint(self) -> tuple:
        return (self.restarts, self.max_iter, self.tol, self.seed, self.init_scale)


# ---------------------------------------------------------------------------
# Multi-restart descent
# ---------------------------------------------------------------------------

def _objective(x: np.ndarray, edges: np.ndarray, n: int, d: int):
    """Sum over edges of (|x_u - x_v|^2 - 1)^2 and its gradient."""
    pts = x.reshape(n, d)
    diff = pts[edges[:, 0]] - pts[edges[:, 1]]
    gap = np.einsum("ij,ij->i", diff, diff) - 1.0
    grad = np.zeros_like(pts)
    w = (4.0 * gap)[:, None] * diff
    np.add.at(grad, edges[:, 0], w)
    np.subtract.at(grad, edges[:, 1], w)
    return float(gap @ gap), grad.ravel()


def _residual_vec(x: np.ndarray, edges: np.ndarray, n: int, d: int):
    pts = x.reshape(n, d)
    diff = pts[edges[:, 0]] - pts[edges[:, 1]]
    return np.einsum("ij,ij->i", diff, diff) - 1.0


def _residual_jac(x: np.ndarray, edges: np.ndarray, n: int, d: int):
    pts = x.reshape(n, d)
    jac = np.zeros((len(edges), n * d))
    for row, (u, v) in enumerate(edges):
        dv = 2.0 * (pts[u] - pts[v])
        jac[row, u * d : (u + 1) * d] = dv
        jac[row, v * d : (v + 1) * d] = -dv
    return jac


def _max_edge_residual(pts: np.ndarray, edges: np.ndarray) -> float:
    if not len(edges):
        return 0.0
    diff = pts[edges[:, 0]] - pts[edges[:, 1]]
    return float(np.max(np.abs(np.sqrt(np.einsum("ij,ij->i", diff, diff)) - 1.0)))


def _one_restart(g: Graph, d: int, cfg: SearchConfig, index: int) -> np.ndarray | None:
    """Run one seeded descent; return accepted coordinates or None.

    Acceptance is decided on the refined points: a candidate that meets the
    residual tolerance but cannot hold it together with vertex separation
    under refinement is a near-degenerate pseudo-embedding (typically two
    vertices drifting toward coincidence) and is rejected, keeping
    search-failure guarantees sound.
    """
    rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(index,)))
    x0 = rng.normal(0.0, cfg.init_scale, size=(g.n, d))
    edges = np.array(g.sorted_edges(), dtype=int).reshape(-1, 2)
    if len(edges):
        res = scipy.optimize.minimize(
            _objective,
            x0.ravel(),
            args=(edges, g.n, d),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": cfg.max_iter, "gtol": 1e-12, "ftol": 1e-16},
        )
        pts = res.x.reshape(g.n, d)
    else:
        pts = x0
    if _max_edge_residual(pts, edges) >= cfg.tol:
        return None
    if min_pairwise_distance(pts) <= SEPARATION_TOL:
        return None
    pts = _polish(pts, edges, g.n, d, cfg)
    if _max_edge_residual(pts, edges) >= cfg.tol:
        return None
    if min_pairwise_distance(pts) <= SEPARATION_TOL:
        return None
    return pts


def _polish(pts: np.ndarray, edges: np.ndarray, n: int, d: int, cfg: SearchConfig) -> np.ndarray:
    """Refine a candidate toward machine-precision residuals.

    A genuine embedding converges onto the solution set and comes back with
    residuals near 1e-12; a pseudo-embedding converges toward a coincident
    configuration instead, which the caller's separation check then rejects.
    """
    if not len(edges):
        return pts
    try:
        res = scipy.optimize.least_squares(
            _residual_vec,
            pts.ravel(),
            jac=_residual_jac,
            args=(edges, n, d),
            method="trf",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=1000,
        )
    except Exception:
        return pts
    refined = res.x.reshape(n, d)
    if _max_edge_residual(refined, edges) <= _max_edge_residual(pts, edges):
        return refined
    return pts


def find_embedding(g: Graph, d: int, cfg: SearchConfig | None = None) -> Embedding | None:
    """Search for a unit-distance embedding of ``g`` in R^d.

    Independent random restarts (seeds derived deterministically from the
    master seed and the restart index) each run a gradient descent on the
    squared-residual objective; the first restart, by index, whose result
    passes the residual and separation checks wins.  Absence of a result is
    a valid outcome and never an error.  Restarts may run concurrently
    (``DIMCRIT_THREADS``); selection by lowest index keeps the result
    independent of completion order.
    """
    cfg = cfg or SearchConfig()
    if d < 0:
        raise DomainError("dimension must be non-negative")
    if d == 0:
        return Embedding(0, np.zeros((g.n, 0))) if g.n <= 1 else None
    if g.n == 0:
        return Embedding(d, np.zeros((0, d)))
    threads = max(1, int(os.environ.get("DIMCRIT_THREADS", "1") or "1"))
    if threads == 1:
        for i in range(cfg.restarts):
            pts = _one_restart(g, d, cfg, i)
            if pts is not None:
                return Embedding(d, pts)
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for base in range(0, cfg.restarts, threads):
            wave = range(base, min(base + threads, cfg.restarts))
            results = list(pool.map(lambda i: _one_restart(g, d, cfg, i), wave))
            for pts in results:
                if pts is not None:
                    return Embedding(d, pts)
    return None


# ---------------------------------------------------------------------------
# Dimension estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionEstimate:
    lower: int
    lower_provenance: str
    upper: int
    upper_provenance: str
    embedding: Embedding | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise DomainError(
                f"lower bound {self.lower} exceeds upper bound {self.upper}"
            )

    @property
    def status(self) -> str:
        return "exact" if self.lower == self.upper else "interval"

    @property
    def exact_value(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    def to_json_obj(self, include_embedding: bool = False) -> dict:
        obj = {
            "lower": self.lower,
            "lower_provenance": self.lower_provenance,
            "upper": self.upper,
            "upper_provenance": self.upper_provenance,
            "status": self.status,
        }
        if include_embedding:
            obj["embedding"] = (
                self.embedding.to_json_obj() if self.embedding is not None else None
            )
        return obj


_estimate_cache: dict[tuple, DimensionEstimate] = {}


def clear_estimate_cache() -> None:
    _estimate_cache.clear()


def _combinatorial_lower(g: Graph) -> tuple[int, str]:
    candidates = [(0, "vertex-count")]
    if g.n >= 2:
        candidates.append((1, "vertex-count"))
    if not is_path_forest(g):
        candidates.append((2, "path-forest"))
    candidates.append((clique_number(g) - 1, "clique"))
    priority = {"clique": 0, "path-forest": 1, "vertex-count": 2}
    return max(candidates, key=lambda c: (c[0], -priority[c[1]]))


def _trivial_upper(g: Graph) -> tuple[int, str]:
    if g.n <= 1:
        return 0, "simplex-trivial"
    if is_path_forest(g):
        return 1, "path-forest"
    return g.n - 1, "simplex-trivial"


def _join_family_embedding(g: Graph, clique: list[int], cycle: list[int]) -> Embedding:
    """Construction-backed embedding of a recognized join, in g's labeling."""
    n, m = len(clique), len(cycle)
    simplex = regular_simplex(n)
    cyc = embed_cycle_on_sphere(m, join_sphere_radius(n))
    d = n + 2
    pts = np.zeros((g.n, d))
    for row, v in enumerate(clique):
        pts[v, : n - 1] = simplex.points[row]
    for row, v in enumerate(cycle):
        pts[v, n - 1 :] = cyc.points[row]
    return Embedding(d, pts)


def _estimate_raw(g: Graph, cfg: SearchConfig) -> DimensionEstimate:
    parts = multipartite_parts(g)
    if parts is not None and len(parts) >= 2:
        dim = multipartite_dimension(PartitionSpec(tuple(len(p) for p in parts)))
        return DimensionEstimate(dim, "exact-family", dim, "exact-family")
    js = join_structure(g)
    if js is not None and len(js[0]) >= 2:
        clique, cycle = js
        dim = len(clique) + 2
        emb = _join_family_embedding(g, clique, cycle)
        report = verify_embedding(g, emb, tol=cfg.tol)
        if not report.passed:  # pragma: no cover - construction is exact
            raise GeometryError("join construction failed verification")
        return DimensionEstimate(dim, "exact-family", dim, "embedding-found", emb)
    if is_cycle_graph(g):
        return DimensionEstimate(2, "exact-family", 2, "exact-family")
    lower, ltag = _combinatorial_lower(g)
    upper, utag = _trivial_upper(g)
    if lower == upper:
        return DimensionEstimate(lower, ltag, upper, utag)
    for d in range(lower, upper):
        emb = find_embedding(g, d, cfg)
        if emb is not None:
            return DimensionEstimate(lower, ltag, d, "embedding-found", emb)
    return DimensionEstimate(lower, ltag, upper, utag)


def estimate_dimension(g: Graph, cfg: SearchConfig | None = None) -> DimensionEstimate:
    """Certified dimension bounds for ``g``; exact when they meet.

    Recognition order: complete multipartite, then clique-cycle joins with
    clique size >= 2 (upper bound backed by the explicit construction),
    then plain cycles; otherwise combinatorial bounds plus ascending search.
    Small graphs are canonicalized first so isomorphic inputs share one
    deterministic computation.
    """
    cfg = cfg or SearchConfig()
    if g.n > _CANONICAL_LIMIT:
        return _estimate_raw(g, cfg)
    key, perm = canonical_form(g)
    cache_key = (key, cfg.fingerprint())
    est = _estimate_cache.get(cache_key)
    if est is None:
        est = _estimate_raw(relabel(g, perm), cfg)
        _estimate_cache[cache_key] = est
    if est.embedding is None:
        return est
    # map the canonical embedding's rows back onto g's labels
    pts = np.empty_like(est.embedding.points)
    pts[np.array(perm), :] = est.embedding.points
    return DimensionEstimate(
        est.lower,
        est.lower_provenance,
        est.upper,
        est.upper_provenance,
        Embedding(est.embedding.d, pts),
    )


# ---------------------------------------------------------------------------
# Edge criticality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeOutcome:
    edge: tuple[int, int]
    estimate: DimensionEstimate
    verdict: str  # "critical" | "not-critical" | "undecided"

    def to_json_obj(self) -> dict:
        return {
            "edge": list(self.edge),
            "estimate": self.estimate.to_json_obj(),
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class CriticalityReport:
    overall: str
    graph_estimate: DimensionEstimate
    edges: tuple[EdgeOutcome, ...]

    def to_json_obj(self) -> dict:
        return {
            "overall": self.overall,
            "graph_estimate": self.graph_estimate.to_json_obj(),
            "edges": [e.to_json_obj() for e in self.edges],
        }


def _edge_orbit_key(g: Graph, parts, js, e: tuple[int, int]):
    if parts is not None and len(parts) >= 2:
        part_of = {}
        for p in parts:
            for v in p:
                part_of[v] = len(p)
        return tuple(sorted((part_of[e[0]], part_of[e[1]])))
    if js is not None:
        clique = set(js[0])
        kinds = tuple(sorted("clique" if v in clique else "cycle" for v in e))
        return kinds
    if is_cycle_graph(g):
        return "cycle-edge"
    if g.n <= _CANONICAL_LIMIT:
        return canonical_form(delete_edge(g, e))[0]
    return e


def _edge_verdict(est_g: DimensionEstimate, est_h: DimensionEstimate) -> str:
    if est_h.upper < est_g.lower:
        return "critical"
    # a subgraph can never need more room, so matching certified bounds
    # pin dim(G - e) = dim(G)
    if est_h.lower >= est_g.upper:
        return "not-critical"
    return "undecided"


def test_criticality(g: Graph, cfg: SearchConfig | None = None) -> CriticalityReport:
    """Per-edge criticality verdicts with certified estimates.

    An edge is reported critical only when a verified embedding (or another
    certificate) pins dim(G - e) strictly below a certified lower bound for
    dim(G); not-critical only when certified bounds force equality.
    Everything else stays undecided.  Edges in the same orbit of a
    recognized family share one computation.
    """
    cfg = cfg or SearchConfig()
    if g.n == 0 or not g.edges:
        raise DomainError("criticality needs a non-empty graph")
    if not is_connected(g):
        raise DomainError("criticality needs a connected graph")
    est_g = estimate_dimension(g, cfg)
    parts = multipartite_parts(g)
    js = join_structure(g)
    by_orbit: dict = {}
    outcomes = []
    for e in g.sorted_edges():
        key = _edge_orbit_key(g, parts, js, e)
        if key not in by_orbit:
            est_h = estimate_dimension(delete_edge(g, e), cfg)
            by_orbit[key] = (est_h, _edge_verdict(est_g, est_h))
        est_h, verdict = by_orbit[key]
        outcomes.append(EdgeOutcome(e, est_h, verdict))
    verdicts = {o.verdict for o in outcomes}
    if verdicts == {"critical"}:
        overall = "critical"
    elif "not-critical" in verdicts:
        overall = "not-critical"
    else:
        overall = "undecided"
    return CriticalityReport(overall, est_g, tuple(outcomes))


# ---------------------------------------------------------------------------
# Pruning toward a critical subgraph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PruneResult:
    graph: Graph
    log: tuple[tuple[tuple[int, int], str, DimensionEstimate], ...]

    def to_json_obj(self) -> dict:
        return {
            "graph": self.graph.to_json_obj(),
            "log": [
                {"edge": list(e), "action": action, "estimate": est.to_json_obj()}
                for e, action, est in self.log
            ],
        }


def prune_to_critical(g: Graph, target_dim: int, cfg: SearchConfig | None = None) -> PruneResult:
    """Delete dimension-preserving edges until only certified-critical or
    undecided ones remain.

    Every deletion requires a certified-exact estimate equal to
    ``target_dim``, so the pruned graph provably keeps that dimension.  The
    scan order is the sorted edge list, restarted after each deletion.
    """
    cfg = cfg or SearchConfig()
    est = estimate_dimension(g, cfg)
    if est.status != "exact" or est.exact_value != target_dim:
        raise DomainError(
            f"input dimension not certified equal to {target_dim} "
            f"(got [{est.lower}, {est.upper}])"
        )
    log: list[tuple[tuple[int, int], str, DimensionEstimate]] = []
    current = g
    while True:
        for e in current.sorted_edges():
            est_h = estimate_dimension(delete_edge(current, e), cfg)
            if est_h.status == "exact" and est_h.exact_value == target_dim:
                log.append((e, "deleted", est_h))
                current = delete_edge(current, e)
                break
        else:
            break
    for e in current.sorted_edges():
        est_h = estimate_dimension(delete_edge(current, e), cfg)
        action = "kept-critical" if est_h.upper < target_dim else "kept-undecided"
        log.append((e, action, est_h))
    return PruneResult(current, tuple(log))


# ---------------------------------------------------------------------------
# Counterexample hunters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DropRecord:
    graph: Graph
    site: tuple[int, ...]  # (u, v) for an edge, (v,) for a vertex
    before: DimensionEstimate
    after: DimensionEstimate
    certified_drop: int
    possible_drop: int
    isolated_after: bool

    def to_json_obj(self) -> dict:
        return {
            "graph": self.graph.to_json_obj(),
            "site": list(self.site),
            "before": self.before.to_json_obj(),
            "after": self.after.to_json_obj(),
            "certified_drop": self.certified_drop,
            "possible_drop": self.possible_drop,
            "isolated_after": self.isolated_after,
        }


@dataclass(frozen=True)
class HuntReport:
    kind: str  # "edge" | "vertex"
    max_vertices: int
    graphs_checked: int
    sites_checked: int
    candidates: tuple[DropRecord, ...]  # certified drop >= 2
    big_drops: tuple[DropRecord, ...]  # certified drop >= 3
    undecided: tuple[DropRecord, ...]  # drop >= 2 possible but not certified

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "max_vertices": self.max_vertices,
            "graphs_checked": self.graphs_checked,
            "sites_checked": self.sites_checked,
            "candidates": [r.to_json_obj() for r in self.candidates],
            "big_drops": [r.to_json_obj() for r in self.big_drops],
            "undecided_count": len(self.undecided),
            "undecided": [r.to_json_obj() for r in self.undecided],
        }


def _has_isolated_vertex(g: Graph) -> bool:
    return any(len(s) == 0 for s in g.adjacency()) if g.n else False


def _hunt(kind: str, max_vertices: int, cfg: SearchConfig) -> HuntReport:
    if not (1 <= max_vertices <= _HUNT_LIMIT):
        raise DomainError(f"hunting budget capped at {_HUNT_LIMIT} vertices")
    graphs_checked = 0
    sites_checked = 0
    candidates: list[DropRecord] = []
    big: list[DropRecord] = []
    undecided: list[DropRecord] = []
    for g in enumerate_graphs(max_vertices, connected_only=True):
        graphs_checked += 1
        est_g = estimate_dimension(g, cfg)
        if kind == "edge":
            sites = [e for e in g.sorted_edges()]
        else:
            sites = [(v,) for v in range(g.n)]
        for site in sites:
            sites_checked += 1
            h = delete_edge(g, site) if kind == "edge" else delete_vertex(g, site[0])
            est_h = estimate_dimension(h, cfg)
            certified = est_g.lower - est_h.upper
            possible = est_g.upper - est_h.lower
            if certified >= 2 or possible >= 2:
                rec = DropRecord(
                    g,
                    tuple(site),
                    est_g,
                    est_h,
                    certified,
                    possible,
                    _has_isolated_vertex(h),
                )
                if certified >= 2:
                    candidates.append(rec)
                    if certified >= 3:
                        big.append(rec)
                else:
                    undecided.append(rec)
    return HuntReport(
        kind,
        max_vertices,
        graphs_checked,
        sites_checked,
        tuple(candidates),
        tuple(big),
        tuple(undecided),
    )


def hunt_edge_drop(max_vertices: int, cfg: SearchConfig | None = None) -> HuntReport:
    """Sweep all connected graphs up to ``max_vertices`` for an edge whose
    deletion certifiably drops the dimension by 2 or more.

    No such pair is expected to exist; undecided near-misses (a drop of 2
    cannot be ruled out with the available certificates) are reported, not
    asserted away.
    """
    return _hunt("edge", max_vertices, cfg or SearchConfig())


def hunt_vertex_drop(max_vertices: int, cfg: SearchConfig | None = None) -> HuntReport:
    """Same sweep over vertex deletions; drops of 2 exist once clique-cycle
    joins fit the budget, and any certified drop of 3 or more would be new.

    Records are tagged when the deletion leaves isolated vertices, since
    their dimension rests on the distinct-point convention.
    """
    return _hunt("vertex", max_vertices, cfg or SearchConfig())
