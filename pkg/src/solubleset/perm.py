"""Permutations of {0..n-1}, group enumeration from generators, and the
derived-series solubility oracle.

Groups are enumerated by plain breadth-first closure under composition; no
stabilizer-chain machinery.  That is deliberate: the enumerated derived series
is the independent oracle against which compositional solubility proofs are
checked, so it should stay as close to the definition as possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CapExceeded, DegreeMismatch, NotEnumerated, NotSubgroup

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class Perm:
    """A bijection of {0..n-1} stored as its image array."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {self.images}")

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(tuple(range(n)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        # (p * q)(i) = p(q(i)): apply q first.
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees {self.degree} != {other.degree}")
        p, q = self.images, other.images
        return Perm(tuple(p[q[i]] for i in range(len(p))))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycle_lengths(self) -> list[int]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            length, j = 0, start
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            out.append(length)
        return out

    def order(self) -> int:
        return math.lcm(*self.cycle_lengths())

    def power(self, k: int) -> "Perm":
        k %= self.order()
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = base * result
            base = base * base
            k >>= 1
        return result


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)(i) = p(q(i))."""
    return p * q


@dataclass
class PermGroup:
    """A permutation group given by generators, optionally fully enumerated.

    ``elements``, when present, is the full element list sorted
    lexicographically by image array (so the identity comes first), and
    ``order`` equals its length.
    """

    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...] | None = None
    order: int | None = None
    _element_set: frozenset | None = field(default=None, repr=False, compare=False)

    @property
    def is_enumerated(self) -> bool:
        return self.elements is not None

    def require_enumerated(self, what: str = "operation"):
        if not self.is_enumerated:
            raise NotEnumerated(f"{what} requires a fully enumerated group")

    def element_set(self) -> frozenset:
        self.require_enumerated("membership")
        if self._element_set is None:
            self._element_set = frozenset(p.images for p in self.elements)
        return self._element_set

    def __contains__(self, p: Perm) -> bool:
        return p.images in self.element_set()

    def identity(self) -> Perm:
        return Perm.identity(self.degree)


def enumerate_group(gens, cap: int = DEFAULT_CAP, degree: int | None = None) -> PermGroup:
    """Breadth-first closure of the generators under composition.

    Raises CapExceeded once more than ``cap`` elements appear, signalling the
    caller to fall back on a compositional solubility proof instead.
    """
    gens = [g if isinstance(g, Perm) else Perm(tuple(g)) for g in gens]
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if degree is None:
        if not gens:
            raise ValueError("degree required to enumerate the trivial group")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise DegreeMismatch("generators act on different degrees")

    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    gen_images = [g.images for g in gens]
    rng = range(degree)
    while frontier:
        new = []
        for x in frontier:
            for g in gen_images:
                y = tuple(g[x[i]] for i in rng)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
                    new.append(y)
        frontier = new
    elements = tuple(Perm(im) for im in sorted(seen))
    return PermGroup(degree, tuple(gens), elements, len(elements))


def generating_set(elements) -> list[Perm]:
    """Greedy small generating set for an enumerated element list.

    Deterministic: scans elements in lexicographic order and keeps those not
    yet in the closure of the picks so far.
    """
    elems = sorted((p.images for p in elements if not p.is_identity()))
    if not elems:
        return []
    degree = len(elems[0])
    target = len(elems) + 1
    picks: list[Perm] = []
    closure = {tuple(range(degree))}
    for images in elems:
        if images in closure:
            continue
        picks.append(Perm(images))
        # extend closure with the new generator (BFS restricted to new products)
        frontier = [images]
        closure.add(images)
        pick_images = [p.images for p in picks]
        rng = range(degree)
        while frontier:
            new = []
            for x in frontier:
                for g in pick_images:
                    for y in (
                        tuple(g[x[i]] for i in rng),
                        tuple(x[g[i]] for i in rng),
                    ):
                        if y not in closure:
                            closure.add(y)
                            new.append(y)
            frontier = new
        if len(closure) == target:
            break
    return picks


def _commutator_subgroup(G: PermGroup, cap: int) -> PermGroup:
    """Subgroup generated by all commutators g^-1 h^-1 g h over g, h in G."""
    n = G.degree
    rng = range(n)
    elems = [p.images for p in G.elements]
    invs = {}
    for x in elems:
        inv = [0] * n
        for i, j in enumerate(x):
            inv[j] = i
        invs[x] = tuple(inv)
    comms = set()
    for g in elems:
        ig = invs[g]
        for h in elems:
            ih = invs[h]
            # [g, h] = g^-1 h^-1 g h with "apply rightmost first" composition
            gh = tuple(g[h[i]] for i in rng)
            ihgh = tuple(ih[gh[i]] for i in rng)
            comms.add(tuple(ig[ihgh[i]] for i in rng))
    gens = generating_set(Perm(c) for c in sorted(comms))
    if not gens:
        return PermGroup(n, (), (Perm.identity(n),), 1)
    return enumerate_group(gens, cap=cap, degree=n)


def derived_series(G: PermGroup, cap: int = DEFAULT_CAP) -> tuple[list[PermGroup], bool]:
    """Iterated commutator subgroups until stable; soluble iff the last is trivial.

    Matches the textbook definition directly: each term is the subgroup
    generated by all commutators of the previous one, so this doubles as the
    oracle for compositional proofs.
    """
    G.require_enumerated("derived_series")
    series = [G]
    while series[-1].order > 1:
        nxt = _commutator_subgroup(series[-1], cap)
        series.append(nxt)
        if nxt.order == series[-2].order:
            break
    return series, series[-1].order == 1


def setwise_stabilizer(H: PermGroup, S) -> PermGroup:
    """Subgroup of H mapping the index set S onto itself."""
    H.require_enumerated("setwise_stabilizer")
    s = frozenset(S)
    keep = [h for h in H.elements if frozenset(h.images[i] for i in s) == s]
    return PermGroup(H.degree, tuple(generating_set(keep)), tuple(keep), len(keep))


def coset_representatives(H: PermGroup, G: PermGroup) -> list[Perm]:
    """One representative per right coset G*f of G in H, identity first."""
    H.require_enumerated("coset_representatives")
    G.require_enumerated("coset_representatives")
    if H.degree != G.degree or not G.element_set() <= H.element_set():
        raise NotSubgroup("G is not a subgroup of H")
    reps = []
    seen = set()
    for h in H.elements:  # lex order: identity first
        if h.images in seen:
            continue
        reps.append(h)
        for g in G.elements:
            seen.add((g * h).images)
    assert len(reps) * G.order == H.order
    return reps
