"""Geometric constructions for unit-distance embeddings.

Floating point is used for coordinates only; the rational-angle decision
procedure runs on exact integers, because no amount of floating point can
certify that an angle is an irrational multiple of pi.

Key facts wired into the constructions:

* n points pairwise at distance 1 form a regular simplex with circumradius
  sqrt((n-1)/(2n)); padding those coordinates with zeros and placing the
  remaining vertices on the orthogonal sphere of radius r2 with
  r1^2 + r2^2 = 1 makes every cross distance exactly 1.
* a closed equal-chord polygon on a circle of radius r needs the turning
  angle theta with sin(theta/2) = 1/(2r) to be a rational multiple of pi,
  and (1/pi) * arcsin(sqrt(x)) is rational for rational x in [0, 1] only at
  x in {0, 1/4, 1/2, 3/4, 1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple

import numpy as np

from .errors import ApexSolveError, DomainError, GeometryError
from .graphs import Graph, JoinSpec, build_join_clique_cycle, delete_edge

# package-wide tolerances
CONSTRUCTION_TOL = 1e-9
VERIFY_TOL = 1e-7
SEPARATION_TOL = 1e-6
DISCRIMINANT_FLOOR = 1e-12

_SQRT2_HALF = math.sqrt(0.5)


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    """Point per vertex in R^d, stored as an (n, d) read-only array."""

    d: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.d:
            raise DomainError(
                f"coordinate array must be (n, {self.d}), got {pts.shape}"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def to_json_obj(self) -> dict:
        return {"d": self.d, "points": [[float(x) for x in row] for row in self.points]}

    @staticmethod
    def from_json_obj(obj) -> "Embedding":
        try:
            d = int(obj["d"])
            rows = obj["points"]
        except (TypeError, KeyError) as exc:
            raise DomainError(f"malformed embedding JSON: {exc}") from exc
        if any(len(r) != d for r in rows):
            raise DomainError("coordinate vectors disagree on dimension")
        return Embedding(d, np.array(rows, dtype=float).reshape(len(rows), d))


@dataclass(frozen=True)
class SphereSpec:
    radius: float
    center: np.ndarray

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError("sphere radius must be positive")
        c = np.array(self.center, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)

    @property
    def ambient_dim(self) -> int:
        return self.center.shape[0]


class VerificationReport(NamedTuple):
    max_edge_residual: float
    min_pairwise_distance: float
    edges_checked: int
    edge_tol: float
    separation_tol: float
    edges_ok: bool
    separation_ok: bool

    @property
    def passed(self) -> bool:
        return self.edges_ok and self.separation_ok

    def to_json_obj(self) -> dict:
        return {
            "max_edge_residual": self.max_edge_residual,
            "min_pairwise_distance": self.min_pairwise_distance,
            "edges_checked": self.edges_checked,
            "edge_tol": self.edge_tol,
            "separation_tol": self.separation_tol,
            "passed": self.passed,
        }


def min_pairwise_distance(points: np.ndarray) -> float:
    if points.shape[0] < 2:
        return math.inf
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    iu = np.triu_indices(points.shape[0], 1)
    return float(dist[iu].min())


def edge_residuals(g: Graph, points: np.ndarray) -> np.ndarray:
    """Per-edge |distance - 1|, in the sorted-edge order of ``g``."""
    edges = g.sorted_edges()
    if not edges:
        return np.zeros(0)
    idx = np.array(edges)
    diff = points[idx[:, 0]] - points[idx[:, 1]]
    return np.abs(np.sqrt(np.einsum("ij,ij->i", diff, diff)) - 1.0)


def verify_embedding(
    g: Graph,
    emb: Embedding,
    tol: float = VERIFY_TOL,
    separation_tol: float = SEPARATION_TOL,
) -> VerificationReport:
    """Check every edge for unit length and all vertex pairs for separation."""
    if emb.n != g.n:
        raise DomainError(
            f"embedding has {emb.n} points but the graph has {g.n} vertices"
        )
    res = edge_residuals(g, emb.points)
    max_res = float(res.max()) if res.size else 0.0
    min_dist = min_pairwise_distance(emb.points)
    return VerificationReport(
        max_edge_residual=max_res,
        min_pairwise_distance=min_dist,
        edges_checked=len(g.edges),
        edge_tol=tol,
        separation_tol=separation_tol,
        edges_ok=max_res <= tol,
        separation_ok=min_dist > separation_tol,
    )


# ---------------------------------------------------------------------------
# Regular simplex
# ---------------------------------------------------------------------------

def simplex_circumradius_squared(n: int) -> Fraction:
    """(n-1)/(2n): squared circumradius of the unit-edge simplex on n points."""
    if n < 1:
        raise DomainError("need at least one point")
    return Fraction(n - 1, 2 * n)


def regular_simplex(n: int) -> Embedding:
    """n points in R^(n-1), pairwise distance 1, centroid at the origin.

    Start from scaled standard basis vectors in R^n (already equidistant),
    recenter, then rotate the common hyperplane onto the first n-1
    coordinates with a Householder reflection.
    """
    if n < 1:
        raise DomainError("need at least one point")
    if n == 1:
        return Embedding(0, np.zeros((1, 0)))
    pts = np.eye(n) / math.sqrt(2.0)
    pts -= pts.mean(axis=0)
    ones = np.full(n, 1.0 / math.sqrt(n))
    u = ones - np.eye(n)[n - 1]
    u /= np.linalg.norm(u)
    reflected = pts - 2.0 * np.outer(pts @ u, u)
    return Embedding(n - 1, reflected[:, : n - 1])


# ---------------------------------------------------------------------------
# Rational angles
# ---------------------------------------------------------------------------

# x -> (1/pi) * arcsin(sqrt(x)) for the only rational x in [0, 1] where the
# result is rational, as (numerator, denominator) pairs
_ARCSIN_TABLE = {
    (0, 1): (0, 1),
    (1, 4): (1, 6),
    (1, 2): (1, 4),
    (3, 4): (1, 3),
    (1, 1): (1, 2),
}


def rational_arcsin_sqrt(r: Fraction | int) -> Fraction | None:
    """Return (1/pi) * arcsin(sqrt(r)) when rational, else None.

    For rational r in [0, 1] the value is rational only at r = 0, 1/4, 1/2,
    3/4, 1, where it equals 0, 1/6, 1/4, 1/3, 1/2.  Exact input required;
    None is the irrationality marker.
    """
    r = Fraction(r)
    if r < 0 or r > 1:
        raise DomainError(f"argument {r} outside [0, 1]")
    hit = _ARCSIN_TABLE.get((r.numerator, r.denominator))
    return Fraction(*hit) if hit is not None else None


class CircleCycleFeasibility(NamedTuple):
    feasible: bool
    winding: int | None
    reason: str


def cycle_on_circle_feasible(r_squared: Fraction | int, m: int) -> CircleCycleFeasibility:
    """Can an m-cycle with unit edges close up on a circle of radius r?

    Exact arithmetic on r^2.  Feasible exactly when the turning angle is a
    rational multiple 2*pi*z'/m' of the full turn with m' = m, which also
    guarantees the m vertices are pairwise distinct; m' properly dividing m
    would revisit points.  On success the winding count z' is returned.
    """
    if m < 3:
        raise DomainError("cycle length must be >= 3")
    num, den = r_squared.numerator, r_squared.denominator
    if num <= 0:
        raise DomainError("r^2 must be positive")
    # chord of length 1 requires diameter >= 1, i.e. r^2 >= 1/4
    if 4 * num < den:
        return CircleCycleFeasibility(False, None, "radius-below-half")
    # s = 1/(4 r^2), reduced
    s_num, s_den = den, 4 * num
    g = gcd(s_num, s_den)
    hit = _ARCSIN_TABLE.get((s_num // g, s_den // g))
    if hit is None:
        return CircleCycleFeasibility(False, None, "irrational-angle")
    z, mp = hit
    if mp == m:
        return CircleCycleFeasibility(True, z, "closes")
    if m % mp == 0:
        return CircleCycleFeasibility(False, None, "coincident-vertices")
    return CircleCycleFeasibility(False, None, "no-closure")


# ---------------------------------------------------------------------------
# Apex points and cycles on spheres
# ---------------------------------------------------------------------------

def apex_point(sphere: SphereSpec, p1, p2, side: int = 1) -> np.ndarray:
    """Point on the sphere at distance 1 from both p1 and p2 (in R^3).

    The two solutions sit symmetrically about the plane through the center
    and p1, p2; ``side=+1`` picks the one toward (p1-c) x (p2-c).  Raises
    :class:`ApexSolveError` with the discriminant when no real solution
    exists, which signals inputs outside the covered radius/chord regime.
    """
    if sphere.ambient_dim != 3:
        raise DomainError("apex_point works on spheres in R^3")
    c = sphere.center
    r = sphere.radius
    q1 = np.asarray(p1, dtype=float) - c
    q2 = np.asarray(p2, dtype=float) - c
    for name, q in (("p1", q1), ("p2", q2)):
        if abs(np.linalg.norm(q) - r) > 1e-7 * max(1.0, r):
            raise DomainError(f"{name} does not lie on the sphere")
    chord = float(np.linalg.norm(q1 - q2))
    if chord < 1e-12:
        raise DomainError("p1 and p2 coincide")
    w = np.cross(q1, q2)
    w_norm = float(np.linalg.norm(w))
    if w_norm < 1e-12:
        raise DomainError("p1 and p2 are antipodal; apex direction undefined")
    dot = float(q1 @ q2)
    denom = r * r + dot
    if abs(denom) < 1e-12:
        raise DomainError("degenerate chord: endpoints subtend a straight angle")
    # both constraints |y - q_i| = 1 with |y| = r reduce to y . q_i = r^2 - 1/2
    a = (r * r - 0.5) / denom
    disc = r * r - a * a * (2.0 * r * r + 2.0 * dot)
    if disc < -DISCRIMINANT_FLOOR:
        raise ApexSolveError("no sphere point at distance 1 from both", disc)
    t = math.sqrt(max(disc, 0.0))
    return c + a * (q1 + q2) + (1 if side >= 0 else -1) * t * (w / w_norm)


def _apex_avoiding(sphere: SphereSpec, p1, p2, preferred_up: bool, existing: np.ndarray) -> np.ndarray:
    """Apex with the requested sign of the z-coordinate, flipping on collision."""
    plus = apex_point(sphere, p1, p2, side=1)
    minus = apex_point(sphere, p1, p2, side=-1)
    first, second = (plus, minus) if (plus[2] >= 0.0) == preferred_up else (minus, plus)
    for cand in (first, second):
        if not existing.size or np.min(np.linalg.norm(existing - cand, axis=1)) >= SEPARATION_TOL:
            return cand
    raise GeometryError("both apex choices collide with placed vertices")


def _odd_cycle_on_sphere(m: int, r: float) -> np.ndarray:
    """Odd cycle on the sphere of radius r about the origin.

    Anchors w_1, w_3, ..., w_m sit on the equator z = 0 spanning the arc
    whose endpoints are a unit chord apart, with equal angular gaps; each
    gap therefore has chord length <= 1 and admits an apex, which supplies
    the even-indexed vertices, alternating above and below the equator.
    """
    k = (m - 1) // 2  # number of anchor gaps
    psi = 2.0 * math.asin(1.0 / (2.0 * r))
    gap = psi / k
    anchors = np.array(
        [[r * math.cos(t * gap), r * math.sin(t * gap), 0.0] for t in range(k + 1)]
    )
    sphere = SphereSpec(radius=r, center=np.zeros(3))
    pts: list[np.ndarray] = [anchors[0]]
    for i in range(k):
        placed = np.array(pts)
        apex = _apex_avoiding(sphere, anchors[i], anchors[i + 1], i % 2 == 0, placed)
        pts.append(apex)
        pts.append(anchors[i + 1])
    return np.array(pts)


def embed_cycle_on_sphere(m: int, r: float) -> Embedding:
    """m points on the sphere of radius r with consecutive distances 1.

    Covered regime: sqrt(1/2) < r < 1, which includes every radius
    sqrt(1/2 + 1/(2n)) arising from clique-cycle joins.  Odd cycles come
    from the anchor/apex construction; an even cycle is the odd cycle one
    shorter with its direct unit chord replaced by a detour through one
    extra apex.
    """
    if m < 3:
        raise DomainError("cycle length must be >= 3")
    if not (_SQRT2_HALF < r < 1.0):
        raise DomainError(
            f"radius {r} outside the covered interval (sqrt(1/2), 1)"
        )
    if m % 2 == 1:
        pts = _odd_cycle_on_sphere(m, r)
    else:
        base = _odd_cycle_on_sphere(m - 1, r)
        sphere = SphereSpec(radius=r, center=np.zeros(3))
        extra = _apex_avoiding(sphere, base[0], base[-1], False, base)
        pts = np.vstack([base, extra])
    emb = Embedding(3, pts)
    norms = np.linalg.norm(pts, axis=1)
    ring = np.linalg.norm(pts - np.roll(pts, -1, axis=0), axis=1)
    if (
        np.max(np.abs(norms - r)) > CONSTRUCTION_TOL
        or np.max(np.abs(ring - 1.0)) > CONSTRUCTION_TOL
        or min_pairwise_distance(pts) <= SEPARATION_TOL
    ):
        raise GeometryError("cycle-on-sphere construction missed its tolerances")
    return emb


# ---------------------------------------------------------------------------
# Join embeddings
# ---------------------------------------------------------------------------

def join_sphere_radius(n: int) -> float:
    """sqrt(1/2 + 1/(2n)): the radius complementary to the n-point simplex."""
    if n < 1:
        raise DomainError("clique size must be >= 1")
    return math.sqrt(0.5 + 0.5 / n)


def embed_join_clique_cycle(spec: JoinSpec) -> Embedding:
    """Unit-distance embedding of the clique-cycle join in R^(n+2), n >= 2.

    Clique vertices: the regular simplex in the first n-1 coordinates.
    Cycle vertices: a unit-edge cycle on the radius-r2 sphere occupying the
    last 3 coordinates, with r1^2 + r2^2 = 1 making all cross edges unit.
    """
    n, m = spec.n, spec.m
    if n < 2:
        raise DomainError("the sphere construction needs a clique of size >= 2")
    simplex = regular_simplex(n)
    cyc = embed_cycle_on_sphere(m, join_sphere_radius(n))
    d = n + 2
    pts = np.zeros((n + m, d))
    pts[:n, : n - 1] = simplex.points
    pts[n:, n - 1 :] = cyc.points
    return Embedding(d, pts)


def embed_join_minus_edge(spec: JoinSpec) -> Embedding:
    """The join minus the cycle edge (w_1, w_m), embedded in R^(n+1).

    The cycle vertices become a unit-edge path winding around the circle of
    radius sqrt((n+1)/(2n)) in the last two coordinates; the turning angle
    is an irrational multiple of pi in this radius regime, so no two path
    vertices meet and the missing edge genuinely stays open.
    """
    n, m = spec.n, spec.m
    if n < 2:
        raise DomainError("the circle construction needs a clique of size >= 2")
    simplex = regular_simplex(n)
    r2 = math.sqrt((n + 1) / (2.0 * n))
    theta = 2.0 * math.asin(1.0 / (2.0 * r2))
    d = n + 1
    pts = np.zeros((n + m, d))
    pts[:n, : n - 1] = simplex.points
    for k in range(1, m + 1):
        pts[n + k - 1, n - 1] = r2 * math.cos(k * theta)
        pts[n + k - 1, n] = r2 * math.sin(k * theta)
    return Embedding(d, pts)


def join_minus_edge_graph(spec: JoinSpec) -> Graph:
    """The graph matching :func:`embed_join_minus_edge`: the join without (w_1, w_m)."""
    g = build_join_clique_cycle(spec)
    return delete_edge(g, (spec.n, spec.n + spec.m - 1))
