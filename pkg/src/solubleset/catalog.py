"""Vertex sets of the regular polytopes treated here, each with a transitive
soluble action, plus the two-orbit inputs consumed by the amplification step.

Coordinates follow the standard conventions (golden-ratio icosahedron,
cube-inscribed dodecahedron).  Correctness is not taken from the convention:
tests pin each solid down by its distance spectrum and symmetry-group order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .action import Action, check_action, is_transitive, orbits
from .errors import UnsupportedShape
from .geometry import PointSet, symmetry_group
from .groupspec import (
    C2Power,
    Cyclic,
    Dihedral,
    DirectProduct,
    enumerated_from_group,
    prove_soluble,
)
from .perm import Perm, PermGroup, enumerate_group, setwise_stabilizer
from .scalar import DEFAULT_TOL, GOLDEN_ZERO, GoldenRational, INV_PHI, PHI

F = Fraction
G_ONE = GoldenRational.of(1)


@dataclass
class CatalogEntry:
    name: str
    pointset: PointSet
    action: Action
    spec: object
    proof: object
    notes: tuple[str, ...] = ()


@dataclass
class TwoOrbitInput:
    """Hypotheses for the two-orbit amplification, fully materialized.

    h acts transitively on the point set by isometries; g <= h is soluble with
    exactly the two orbits o1, o2; r = |h||o1| / (|g| n) is 1 or 2.
    """

    name: str
    pointset: PointSet
    h: PermGroup
    g: PermGroup
    g_spec: object
    g_proof: object
    o1: tuple[int, ...]
    o2: tuple[int, ...]
    r: int
    s: int


def _index_action(pointset: PointSet, coord_maps, labels, spec) -> Action:
    index = pointset.index_of()
    gens = []
    for f in coord_maps:
        gens.append(Perm(tuple(index[tuple(f(p))] for p in pointset.points)))
    return Action(pointset, tuple(gens), spec, tuple(labels))


def simplex(d: int) -> CatalogEntry:
    """Regular d-simplex: the d+1 permutations of (1, 0, ..., 0) in R^{d+1}."""
    if d < 1:
        raise UnsupportedShape("simplex needs d >= 1")
    n = d + 1
    pts = sorted(tuple(F(1) if j == i else F(0) for j in range(n)) for i in range(n))
    ps = PointSet("rational", pts)
    spec = Cyclic(n)

    def shift(p):
        # cyclic coordinate rotation; sends each vertex to the next
        return (p[-1],) + tuple(p[:-1])

    action = _index_action(ps, [shift], ["rot"], spec)
    return CatalogEntry(f"simplex-{d}", ps, action, spec, prove_soluble(spec))


def cube(d: int) -> CatalogEntry:
    """d-cube (+-1)^d with one sign-flip generator per axis."""
    if d < 1:
        raise UnsupportedShape("cube needs d >= 1")
    pts = sorted(itertools.product((F(-1), F(1)), repeat=d))
    ps = PointSet("rational", pts)
    spec = C2Power(d)

    def flip(m):
        def f(p):
            q = list(p)
            q[m] = -q[m]
            return q

        return f

    action = _index_action(ps, [flip(m) for m in range(d)],
                           [f"flip{m}" for m in range(d)], spec)
    return CatalogEntry(f"cube-{d}", ps, action, spec, prove_soluble(spec))


def orthoplex(d: int) -> CatalogEntry:
    """Cross-polytope +-e_i with global negation and a coordinate cycle."""
    if d < 1:
        raise UnsupportedShape("orthoplex needs d >= 1")
    pts = set()
    for i in range(d):
        for sign in (F(-1), F(1)):
            pts.add(tuple(sign if j == i else F(0) for j in range(d)))
    ps = PointSet("rational", sorted(pts))
    spec = DirectProduct((C2Power(1), Cyclic(d)))

    def negate(p):
        return [-c for c in p]

    def shift(p):
        return (p[-1],) + tuple(p[:-1])

    action = _index_action(ps, [negate, shift], ["0.flip0", "1.rot"], spec)
    return CatalogEntry(f"orthoplex-{d}", ps, action, spec, prove_soluble(spec))


def kgon(k: int, tol: float = DEFAULT_TOL) -> CatalogEntry:
    """Regular k-gon on the unit circle; float coordinates, dihedral action.

    The action is combinatorial (rotation and reflection as index maps), so
    exact coordinates are not needed; distances are checked within tolerance.
    """
    if k < 3:
        raise UnsupportedShape("kgon needs k >= 3")
    pts = [(math.cos(2 * math.pi * m / k), math.sin(2 * math.pi * m / k)) for m in range(k)]
    ps = PointSet("float", pts, tol=tol)
    spec = Dihedral(k)
    rot = Perm(tuple((m + 1) % k for m in range(k)))
    ref = Perm(tuple((-m) % k for m in range(k)))
    action = Action(ps, (rot, ref), spec, ("rot", "ref"))
    return CatalogEntry(f"kgon-{k}", ps, action, spec, prove_soluble(spec))


def _icosahedron_points():
    pts = []
    for a in (-G_ONE, G_ONE):
        for b in (-PHI, PHI):
            pts.append((GOLDEN_ZERO, a, b))
            pts.append((a, b, GOLDEN_ZERO))
            pts.append((b, GOLDEN_ZERO, a))
    return sorted(pts)


def icosahedron() -> CatalogEntry:
    """Icosahedron over Q(sqrt 5) with its order-24 cube-aligned symmetries.

    The generators: rotate the coordinates, flip two signs, central inversion.
    Together they generate the pyritohedral subgroup of the full symmetry
    group, which is soluble and still vertex-transitive.
    """
    ps = PointSet("golden", _icosahedron_points())
    maps = [
        lambda p: (p[1], p[2], p[0]),
        lambda p: (-p[0], -p[1], p[2]),
        lambda p: (-p[0], -p[1], -p[2]),
    ]
    index = ps.index_of()
    gens = tuple(Perm(tuple(index[tuple(f(p))] for p in ps.points)) for f in maps)
    group = enumerate_group(gens, degree=ps.n)
    spec = enumerated_from_group(group)
    labels = tuple(f"g{i}" for i in range(len(gens)))
    action = Action(ps, gens, spec, labels)
    return CatalogEntry("icosahedron", ps, action, spec, prove_soluble(spec))


def cell24() -> CatalogEntry:
    """24-cell: permutations of (+-1, +-1, 0, 0) under signed coordinate
    permutations (order 384, soluble, transitive)."""
    pts = set()
    for i, j in itertools.combinations(range(4), 2):
        for si in (F(-1), F(1)):
            for sj in (F(-1), F(1)):
                p = [F(0)] * 4
                p[i], p[j] = si, sj
                pts.add(tuple(p))
    ps = PointSet("rational", sorted(pts))
    maps = []
    for m in range(3):
        def swap(p, m=m):
            q = list(p)
            q[m], q[m + 1] = q[m + 1], q[m]
            return q

        maps.append(swap)
    for m in range(4):
        def flip(p, m=m):
            q = list(p)
            q[m] = -q[m]
            return q

        maps.append(flip)
    index = ps.index_of()
    gens = tuple(Perm(tuple(index[tuple(f(p))] for p in ps.points)) for f in maps)
    group = enumerate_group(gens, degree=ps.n)
    spec = enumerated_from_group(group)
    action = Action(ps, gens, spec, tuple(f"g{i}" for i in range(len(gens))))
    return CatalogEntry("cell24", ps, action, spec, prove_soluble(spec))


def catalog_build(shape: str, d: int | None = None, k: int | None = None,
                  tol: float = DEFAULT_TOL) -> CatalogEntry:
    """Build a named catalog entry; every entry is checked before return."""
    if shape == "simplex":
        entry = simplex(d if d is not None else 3)
    elif shape == "cube":
        entry = cube(d if d is not None else 3)
    elif shape == "orthoplex":
        entry = orthoplex(d if d is not None else 3)
    elif shape == "kgon":
        entry = kgon(k if k is not None else 5, tol=tol)
    elif shape == "icosahedron":
        entry = icosahedron()
    elif shape == "cell24":
        entry = cell24()
    else:
        raise UnsupportedShape(f"unknown shape {shape!r}")
    report = check_action(entry.action)
    assert report.ok, f"catalog action failed self-check: {report.failures}"
    assert is_transitive(entry.action), "catalog action must be transitive"
    return entry


CATALOG_SHAPES = ("simplex", "cube", "orthoplex", "kgon", "icosahedron", "cell24")


def catalog_certificate(entry: CatalogEntry):
    """Certificate form of a catalog entry: the vertex set inside itself,
    identity embedding, with its transitive soluble action."""
    from fractions import Fraction as _F

    from .certificate import Certificate, Transitivity

    return Certificate(
        x=entry.pointset,
        y=entry.pointset,
        embedding_map=tuple(range(entry.pointset.n)),
        scale_sq=1.0 if entry.pointset.kind == "float" else _F(1),
        gens=entry.action.gens,
        gen_map=entry.action.gen_map,
        spec=entry.spec,
        solubility=entry.proof,
        transitivity=Transitivity("orbit"),
        notes=entry.notes,
    )


def _dodecahedron_points():
    pts = [tuple(s * G_ONE for s in signs) for signs in itertools.product((-1, 1), repeat=3)]
    for a in (-INV_PHI, INV_PHI):
        for b in (-PHI, PHI):
            pts.append((GOLDEN_ZERO, a, b))
            pts.append((a, b, GOLDEN_ZERO))
            pts.append((b, GOLDEN_ZERO, a))
    return sorted(pts)


def dodecahedron_input() -> TwoOrbitInput:
    """The dodecahedron with its inscribed-cube stabilizer.

    H is the full distance-matrix symmetry group (order 120, not soluble);
    G is the setwise stabilizer of the eight cube vertices (order 24,
    soluble), with orbits the cube and the remaining twelve vertices.
    """
    ps = PointSet("golden", _dodecahedron_points())
    h = symmetry_group(ps)
    cube_idx = tuple(
        i for i, p in enumerate(ps.points)
        if all(c == G_ONE or c == -G_ONE for c in p)
    )
    g = setwise_stabilizer(h, cube_idx)
    g_spec = enumerated_from_group(g)
    g_proof = prove_soluble(g_spec)
    parts = orbits(Action(ps, g.generators))
    assert sorted(map(len, parts)) == [8, 12]
    o1 = tuple(cube_idx)
    o2 = tuple(i for i in range(ps.n) if i not in set(o1))
    r_num = h.order * len(o1)
    r_den = g.order * ps.n
    assert r_num % r_den == 0
    return TwoOrbitInput(
        "dodecahedron", ps, h, g, g_spec, g_proof, o1, o2,
        r_num // r_den, h.order // g.order,
    )


def hexagon_input() -> TwoOrbitInput:
    """Small exact two-orbit input with ratio 1: the regular hexagon under its
    rotation group, with the index-3 subgroup of double rotations.

    Uses the rational embedding of the hexagon (permutations of (1, 0, -1)),
    so the whole pipeline stays in exact arithmetic.  |H| = 6, |G| = 3, orbits
    of sizes 3 and 3, ratio 6*3/(3*6) = 1, coset count s = 2.
    """
    raw = sorted(set(itertools.permutations((F(1), F(0), F(-1)))))
    # order the six vertices cyclically so the index shift is the rotation
    start = raw[0]
    ordered = [start]
    remaining = set(raw) - {start}
    while remaining:
        cur = ordered[-1]
        nxt = min(
            p for p in remaining
            if sum((a - b) ** 2 for a, b in zip(cur, p)) == 2
        )
        ordered.append(nxt)
        remaining.remove(nxt)
    ps = PointSet("rational", ordered)
    rot = Perm(tuple((i + 1) % 6 for i in range(6)))
    h = enumerate_group([rot], degree=6)
    g = enumerate_group([rot * rot], degree=6)
    g_spec = enumerated_from_group(g)
    return TwoOrbitInput(
        "hexagon", ps, h, g, g_spec, prove_soluble(g_spec),
        (0, 2, 4), (1, 3, 5), 1, 2,
    )


TWO_ORBIT_INPUTS = {"dodecahedron": dodecahedron_input, "hexagon": hexagon_input}
