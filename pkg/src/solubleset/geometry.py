"""Point sets with exact squared-distance matrices, sub-isometry search,
and distance-matrix symmetry groups.

Embeddings are always witnessed by index maps into the target set, never by
new coordinates: working modulo congruence through squared-distance matrices
makes "contains a copy of" checkable without any orthogonal-matrix
arithmetic.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from . import scalar
from .errors import (
    CapExceeded,
    CollinearPoints,
    NotFound,
    ScalarKindMismatch,
    SchemaError,
)
from .perm import Perm, PermGroup, generating_set
from .scalar import FLOAT, GOLDEN, RATIONAL, GoldenRational, frel_eq

# Full n x n matrices are only cached below this size; larger sets compute
# single entries on demand (trapezium gon sets can run to 10^5 points).
MATRIX_CACHE_LIMIT = 1500


def sqdist_vec(u, v, kind):
    if kind == FLOAT:
        return sum((a - b) ** 2 for a, b in zip(u, v))
    if kind == RATIONAL:
        return sum((a - b) ** 2 for a, b in zip(u, v))
    if kind == GOLDEN:
        total = scalar.GOLDEN_ZERO
        for a, b in zip(u, v):
            d = a - b
            total = total + d * d
        return total
    raise ValueError(f"unknown scalar kind {kind!r}")


class PointSet:
    """Indexed finite set of points in R^d over one scalar kind.

    Points are pairwise distinct: exact kinds by exact inequality, float kind
    by separation greater than 10x the tolerance.
    """

    __slots__ = ("kind", "dim", "points", "tol", "_matrix", "_fast")

    def __init__(self, kind, points, tol=None):
        if kind not in scalar.KINDS:
            raise ValueError(f"unknown scalar kind {kind!r}")
        points = tuple(tuple(p) for p in points)
        if not points:
            raise ValueError("point set must be nonempty")
        self.kind = kind
        self.dim = len(points[0])
        if any(len(p) != self.dim for p in points):
            raise ValueError("points have inconsistent dimensions")
        self.points = points
        self.tol = float(tol) if tol is not None else (scalar.DEFAULT_TOL if kind == FLOAT else None)
        self._matrix = None
        self._fast = None
        self._check_distinct()

    def _check_distinct(self):
        n = len(self.points)
        if self.kind != FLOAT:
            if len(set(self.points)) != n:
                raise ValueError("points are not pairwise distinct")
            return
        # grid buckets of edge 10*tol; near-duplicates must share a neighbourhood
        sep = 10.0 * self.tol
        cells = {}
        for i, p in enumerate(self.points):
            key = tuple(int(c // sep) for c in p)
            for dkey in itertools.product((-1, 0, 1), repeat=self.dim):
                other = cells.get(tuple(k + d for k, d in zip(key, dkey)))
                if other is None:
                    continue
                for j in other:
                    if sqdist_vec(p, self.points[j], FLOAT) <= sep * sep:
                        raise ValueError(
                            f"points {j} and {i} are closer than 10*tol"
                        )
            cells.setdefault(key, []).append(i)

    @property
    def n(self) -> int:
        return len(self.points)

    def sqdist(self, i: int, j: int):
        if self._matrix is not None:
            return self._matrix[i][j]
        return sqdist_vec(self.points[i], self.points[j], self.kind)

    def sqdist_matrix(self):
        """Cache and return the full matrix; intended for small sets only."""
        if self._matrix is None:
            n = self.n
            m = [[None] * n for _ in range(n)]
            zero = scalar.scalar_of(0, self.kind)
            for i in range(n):
                m[i][i] = zero
                for j in range(i + 1, n):
                    d = sqdist_vec(self.points[i], self.points[j], self.kind)
                    m[i][j] = d
                    m[j][i] = d
            self._matrix = m
        return self._matrix

    # Exact coordinates cleared to machine integers: uniform scaling by the
    # common denominator preserves every distance *equality*, and plain int
    # arithmetic is an order of magnitude faster than Fraction.  Rational
    # coordinates become ints, golden ones become (a, b) integer pairs.
    def fast_coords(self):
        if self.kind == FLOAT:
            return self.points
        if self._fast is None:
            import math as _math

            if self.kind == RATIONAL:
                mult = _math.lcm(*(c.denominator for p in self.points for c in p)) if self.dim else 1
                self._fast = tuple(
                    tuple(int(c * mult) for c in p) for p in self.points
                )
            else:
                denoms = [
                    d
                    for p in self.points
                    for c in p
                    for d in (c.a.denominator, c.b.denominator)
                ]
                mult = _math.lcm(*denoms) if denoms else 1
                self._fast = tuple(
                    tuple((int(c.a * mult), int(c.b * mult)) for c in p)
                    for p in self.points
                )
        return self._fast

    def fast_sqdist(self, i: int, j: int):
        """Squared distance up to a fixed positive factor; equality-safe."""
        fc = self.fast_coords()
        u, v = fc[i], fc[j]
        if self.kind == RATIONAL:
            return sum((a - b) ** 2 for a, b in zip(u, v))
        if self.kind == GOLDEN:
            ra = rb = 0
            for (a1, b1), (a2, b2) in zip(u, v):
                da, db = a1 - a2, b1 - b2
                ra += da * da + 5 * db * db
                rb += 2 * da * db
            return (ra, rb)
        return sqdist_vec(u, v, FLOAT)

    def comparison_matrix(self):
        """Full matrix of fast_sqdist values, cached on the regular slot for
        float kind (where the values are the true squared distances)."""
        if self.kind == FLOAT:
            return self.sqdist_matrix()
        n = self.n
        zero = 0 if self.kind == RATIONAL else (0, 0)
        m = [[zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d = self.fast_sqdist(i, j)
                m[i][j] = d
                m[j][i] = d
        return m

    def index_of(self):
        """Lookup dict from coordinate tuple to index (exact kinds only)."""
        if self.kind == FLOAT:
            raise ScalarKindMismatch("exact lookup needs an exact scalar kind")
        return {p: i for i, p in enumerate(self.points)}

    def coords_float(self):
        if self.kind == FLOAT:
            return [list(p) for p in self.points]
        return [[float(c) for c in p] for p in self.points]

    def to_json(self):
        out = {
            "scalar": self.kind,
            "dim": self.dim,
            "points": [[scalar.scalar_to_json(c, self.kind) for c in p] for p in self.points],
        }
        if self.kind == FLOAT:
            out["tol"] = self.tol
        return out

    @staticmethod
    def from_json(obj, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("expected a point-set object", path)
        kind = obj.get("scalar")
        if kind not in scalar.KINDS:
            raise SchemaError(f"unknown scalar kind {kind!r}", f"{path}.scalar")
        pts = obj.get("points")
        if not isinstance(pts, list) or not pts:
            raise SchemaError("expected a nonempty point list", f"{path}.points")
        try:
            points = [
                [scalar.scalar_from_json(c, kind) for c in p] for p in pts
            ]
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"bad coordinate: {exc}", f"{path}.points") from exc
        dim = obj.get("dim")
        if dim != len(points[0]):
            raise SchemaError("dim does not match coordinates", f"{path}.dim")
        tol = obj.get("tol") if kind == FLOAT else None
        try:
            return PointSet(kind, points, tol=tol)
        except ValueError as exc:
            raise SchemaError(str(exc), f"{path}.points") from exc


@dataclass
class EmbeddingMap:
    """Index injection source -> target with all distances scaled by scale_sq."""

    source: PointSet
    target: PointSet
    map: tuple[int, ...]
    scale_sq: object

    def __post_init__(self):
        self.map = tuple(self.map)


def embedding_residual(source: PointSet, target: PointSet, mapping, scale_sq):
    """Check the scaled-distance identity over all source pairs.

    Returns (ok, max_float_residual, witness); residual is None for exact
    kinds, where the identity must hold bit-exactly.
    """
    mapping = tuple(mapping)
    if len(mapping) != source.n:
        return False, None, "map length does not match source size"
    if len(set(mapping)) != len(mapping):
        return False, None, "map is not injective"
    if any(not (0 <= t < target.n) for t in mapping):
        return False, None, "map target out of range"
    s = scalar.scalar_of(scale_sq, source.kind) if not isinstance(scale_sq, (GoldenRational, float)) else scale_sq
    worst = 0.0
    for i in range(source.n):
        for j in range(i + 1, source.n):
            want = s * source.sqdist(i, j)
            got = target.sqdist(mapping[i], mapping[j])
            if source.kind == FLOAT:
                tol = max(source.tol or 0.0, target.tol or 0.0)
                worst = max(worst, abs(float(got) - float(want)))
                if not frel_eq(float(got), float(want), tol):
                    return False, worst, f"pair ({i},{j})"
            elif got != want:
                return False, None, f"pair ({i},{j})"
    return True, (worst if source.kind == FLOAT else None), None


def find_subisometry(x: PointSet, y: PointSet, scale_sq) -> EmbeddingMap:
    """Backtracking search for an index map realizing X inside Y at the scale.

    Source points are assigned in decreasing distance-distinctness order
    (stable); candidates must match every scaled distance to the points
    already placed. The first map in this deterministic order is returned.
    """
    if x.kind != y.kind:
        raise ScalarKindMismatch(f"{x.kind} vs {y.kind}")
    if x.n > y.n:
        raise NotFound("source has more points than target")
    s = scalar.scalar_of(scale_sq, x.kind) if isinstance(scale_sq, int) else scale_sq
    xm = x.sqdist_matrix()
    small = y.n <= MATRIX_CACHE_LIMIT
    if small:
        y.sqdist_matrix()
    tol = max(x.tol or 0.0, y.tol or 0.0) if x.kind == FLOAT else None

    def dmatch(a, b):
        if tol is None:
            return a == b
        return frel_eq(float(a), float(b), tol)

    order = sorted(range(x.n), key=lambda i: -len(set(xm[i])))
    # candidate pre-filter for the first source point: its scaled distance
    # multiset must embed in the target point's row (only when rows are cached)
    first_candidates = range(y.n)
    if small and x.kind != FLOAT:
        need = Counter(s * d for d in xm[order[0]])
        need[scalar.scalar_of(0, x.kind)] -= 1
        ym = y.sqdist_matrix()
        first_candidates = [
            t for t in range(y.n)
            if not (need - Counter(ym[t]))
        ]

    assignment = {}
    used = set()

    def extend(k):
        if k == x.n:
            return True
        src = order[k]
        cands = first_candidates if k == 0 else range(y.n)
        for t in cands:
            if t in used:
                continue
            ok = True
            for placed_src, placed_t in assignment.items():
                if not dmatch(y.sqdist(t, placed_t), s * xm[src][placed_src]):
                    ok = False
                    break
            if ok:
                assignment[src] = t
                used.add(t)
                if extend(k + 1):
                    return True
                del assignment[src]
                used.remove(t)
        return False

    if not extend(0):
        raise NotFound(f"no sub-isometry at squared scale {scale_sq}")
    mapping = tuple(assignment[i] for i in range(x.n))
    return EmbeddingMap(x, y, mapping, s)


def symmetry_group(x: PointSet, cap: int = 1_000_000) -> PermGroup:
    """All index permutations preserving the squared-distance matrix.

    Exact scalar kinds only; this is the isometry-induced symmetry group of
    the configuration (the set spans its space, distances determine it up to
    congruence).
    """
    if x.kind == FLOAT:
        raise ScalarKindMismatch("symmetry_group needs an exact scalar kind")
    m = x.comparison_matrix()
    n = x.n
    profiles = [tuple(sorted(m[i])) for i in range(n)]
    elements = []

    def extend(sigma):
        k = len(sigma)
        if k == n:
            elements.append(Perm(tuple(sigma)))
            if len(elements) > cap:
                raise CapExceeded(f"symmetry group larger than cap {cap}")
            return
        for t in range(n):
            if t in sigma:
                continue
            if profiles[t] != profiles[k]:
                continue
            row = m[k]
            tr = m[t]
            if all(tr[sigma[j]] == row[j] for j in range(k)):
                sigma.append(t)
                extend(sigma)
                sigma.pop()

    extend([])
    elements.sort(key=lambda p: p.images)
    return PermGroup(n, tuple(generating_set(elements)), tuple(elements), len(elements))


def circumcircle(a, b, c, tol: float = scalar.DEFAULT_TOL):
    """Centre and squared radius of the circle through three planar points.

    Raises CollinearPoints when the triangle area is below tolerance
    (relative to the edge lengths).
    """
    (ax, ay), (bx, by), (cx, cy) = a, b, c
    ux, uy = bx - ax, by - ay
    vx, vy = cx - ax, cy - ay
    det = ux * vy - uy * vx  # twice the signed area
    scale_ = max(1.0, (ux * ux + uy * uy) ** 0.5 * (vx * vx + vy * vy) ** 0.5)
    if abs(det) <= tol * scale_:
        raise CollinearPoints(f"points are collinear within tolerance {tol}")
    # perpendicular-bisector equations in the frame anchored at a
    u2 = (ux * ux + uy * uy) / 2.0
    v2 = (vx * vx + vy * vy) / 2.0
    px = (u2 * vy - v2 * uy) / det
    py = (ux * v2 - vx * u2) / det
    center = (ax + px, ay + py)
    return center, px * px + py * py
