"""Group actions on point sets given by generator permutations.

An action stores only generators, never full element sets: orbit and
transitivity questions need only generator closure, and the amplified groups
built elsewhere in this package must never be materialized.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import NotDivisible
from .geometry import PointSet
from .perm import Perm
from .scalar import FLOAT, frel_eq


@dataclass
class Action:
    """Generators acting on the indices of a point set.

    gen_map records which spec generator each permutation realizes (labels
    produced by groupspec.spec_generator_labels).
    """

    pointset: PointSet
    gens: tuple[Perm, ...]
    spec: object = None
    gen_map: tuple[str, ...] = ()

    def __post_init__(self):
        self.gens = tuple(self.gens)
        self.gen_map = tuple(self.gen_map)


@dataclass
class ActionReport:
    ok: bool
    failures: list = field(default_factory=list)
    checked_pairs: int = 0
    sampled: bool = False
    max_residual: float | None = None


def check_action(a: Action, pair_limit: int | None = None, seed: int = 0) -> ActionReport:
    """Verify each generator is a bijection of the index set acting by isometry.

    With pair_limit set, each generator is checked on that many seeded random
    index pairs instead of all of them (for large sets); the report records
    which mode ran and any violation with a witness pair.
    """
    ps = a.pointset
    n = ps.n
    report = ActionReport(ok=True)
    report.max_residual = 0.0 if ps.kind == FLOAT else None
    full = pair_limit is None or pair_limit >= n * (n - 1) // 2
    # exact kinds compare integer-scaled distances; equalities are unaffected
    matrix = ps.comparison_matrix() if full and ps.kind != FLOAT and n > 2 else None
    for gi, g in enumerate(a.gens):
        if g.degree != n:
            report.ok = False
            report.failures.append((gi, None, None, "degree mismatch"))
            continue
        if full:
            pairs = ((i, j) for i in range(n) for j in range(i + 1, n))
        else:
            rng = random.Random(seed + gi)
            pairs = (
                tuple(rng.sample(range(n), 2)) for _ in range(pair_limit)
            )
            report.sampled = True
        images = g.images
        for i, j in pairs:
            report.checked_pairs += 1
            if ps.kind == FLOAT:
                d0 = ps.sqdist(i, j)
                d1 = ps.sqdist(images[i], images[j])
                resid = abs(d1 - d0)
                report.max_residual = max(report.max_residual, resid)
                if not frel_eq(d0, d1, ps.tol):
                    report.ok = False
                    report.failures.append((gi, i, j, f"residual {resid}"))
                    break
            elif matrix is not None:
                if matrix[images[i]][images[j]] != matrix[i][j]:
                    report.ok = False
                    report.failures.append((gi, i, j, "distance not preserved"))
                    break
            elif ps.fast_sqdist(i, j) != ps.fast_sqdist(images[i], images[j]):
                report.ok = False
                report.failures.append((gi, i, j, "distance not preserved"))
                break
    return report


def orbits(a: Action) -> list[list[int]]:
    """Connected components of the indices under all generators (union-find)."""
    n = a.pointset.n
    parent = list(range(n))

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    for g in a.gens:
        for i in range(n):
            ri, rj = find(i), find(g(i))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    buckets: dict[int, list[int]] = {}
    for i in range(n):
        buckets.setdefault(find(i), []).append(i)
    return [buckets[root] for root in sorted(buckets)]


def is_transitive(a: Action) -> bool:
    return len(orbits(a)) == 1


def stabilizer_order(a: Action, point: int, group_order: int) -> int:
    """Stabilizer size via orbit-stabilizer; NotDivisible flags bad input."""
    for orbit in orbits(a):
        if point in orbit:
            if group_order % len(orbit) != 0:
                raise NotDivisible(
                    f"group order {group_order} not divisible by orbit size {len(orbit)}"
                )
            return group_order // len(orbit)
    raise ValueError(f"point {point} outside the index range")
