"""Two-orbit amplification: from a transitive group H on X with a soluble
subgroup G having exactly two orbits and integer ratio r = |H||O1|/(|G||X|)
in {1, 2}, build the subset Y of X^q (q prime, q >= |H|/|G|) of tuples with
exactly r entries in the first orbit.

Y carries the action of position-affine maps combined with one G element per
slot (slot j receives the entry pulled from position phi^-1(j); as in the
signed-permutation sets, slot components are permuted by the position maps
under composition, which keeps the group a soluble extension).  The copy of X
inside Y lists the images of each point under one representative per right
coset of G in H, padded with a fixed second-orbit point; its distances come
out scaled by exactly the coset count.

Y is never materialized by the constructor except in full mode: membership is
the orbit-count predicate, and transitivity is certified by constructive
witnesses derived from transporter tables inside each orbit.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .action import Action, orbits
from .catalog import TwoOrbitInput
from .certificate import AmplifiedElement, Certificate, ImplicitY, Transitivity
from .errors import BadTarget, CapExceeded, NotPrime, QTooSmall, RatioOutOfRange
from .groupspec import (
    AGL1,
    DirectProduct,
    Power,
    enumerated_from_group,
    is_prime,
    primitive_root,
    prove_soluble,
)
from .perm import Perm, coset_representatives
from .scalar import scalar_of


@dataclass
class PaddingReport:
    ok: bool
    counts: list[int]
    failures: list[int]


class AmplifiedFamily:
    """Validated amplification context: generators, membership, witnesses."""

    def __init__(self, inp: TwoOrbitInput, q: int):
        n = inp.pointset.n
        if not is_prime(q):
            raise NotPrime(f"q = {q} is not prime")
        parts = orbits(Action(inp.pointset, inp.g.generators))
        if len(parts) != 2:
            raise RatioOutOfRange(
                f"the subgroup has {len(parts)} orbits; exactly two are required"
            )
        labelled = sorted([tuple(sorted(inp.o1)), tuple(sorted(inp.o2))])
        if sorted(tuple(p) for p in parts) != labelled:
            raise RatioOutOfRange("orbit labels do not match the subgroup's orbits")
        num = inp.h.order * len(inp.o1)
        den = inp.g.order * n
        if num % den != 0 or num // den not in (1, 2):
            raise RatioOutOfRange(f"|H||O1|/(|G||X|) = {num}/{den} is not 1 or 2")
        self.r = num // den
        self.s = inp.h.order // inp.g.order
        if q < self.s:
            raise QTooSmall(f"q = {q} is smaller than the coset count {self.s}")
        self.input = inp
        self.q = q
        self.in_o1 = [False] * n
        for i in inp.o1:
            self.in_o1[i] = True
        self.y_point = min(inp.o1)
        self.z_point = min(inp.o2)
        self.base_point = (self.y_point,) * self.r + (self.z_point,) * (q - self.r)
        self.coset_reps = tuple(coset_representatives(inp.h, inp.g))
        self._transporters = None

    # -- copies and counting ---------------------------------------------------

    def copy_point(self, x: int) -> tuple[int, ...]:
        return tuple(f(x) for f in self.coset_reps) + (self.z_point,) * (self.q - self.s)

    def embed_map(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.copy_point(x) for x in range(self.input.pointset.n))

    def size(self) -> int:
        o1, o2 = len(self.input.o1), len(self.input.o2)
        return math.comb(self.q, self.r) * o1**self.r * o2 ** (self.q - self.r)

    def is_member(self, point: tuple[int, ...]) -> bool:
        return len(point) == self.q and sum(self.in_o1[v] for v in point) == self.r

    # -- the action --------------------------------------------------------------

    def generators(self) -> tuple[tuple[AmplifiedElement, ...], tuple[str, ...]]:
        q = self.q
        ident = Perm.identity(self.input.pointset.n)
        els = [AmplifiedElement((1, 1), (ident,) * q)]
        labels = ["0.shift"]
        if q > 2:
            els.append(AmplifiedElement((primitive_root(q), 0), (ident,) * q))
            labels.append("0.scale")
        for m in range(q):
            for gi, g in enumerate(self.input.g.generators):
                slots = [ident] * q
                slots[m] = g
                els.append(AmplifiedElement((1, 0), tuple(slots)))
                labels.append(f"1.slot{m}.g{gi}")
        return tuple(els), tuple(labels)

    # -- constructive transitivity -------------------------------------------------

    def _transporter(self, a: int, b: int) -> Perm | None:
        if self._transporters is None:
            table = {}
            n = self.input.pointset.n
            for start in (self.y_point, self.z_point):
                table[(start, start)] = Perm.identity(n)
                frontier = [start]
                while frontier:
                    new = []
                    for u in frontier:
                        gu = table[(start, u)]
                        for g in self.input.g.generators:
                            v = g(u)
                            if (start, v) not in table:
                                table[(start, v)] = g * gu
                                new.append(v)
                    frontier = new
            self._transporters = table
        return self._transporters.get((a, b))

    def witness(self, target: tuple[int, ...]) -> AmplifiedElement:
        """Element carrying the base point to the target, checked by applying it."""
        if len(target) != self.q:
            raise BadTarget(f"target arity {len(target)} != q = {self.q}")
        positions = [j for j, v in enumerate(target) if self.in_o1[v]]
        if len(positions) != self.r:
            raise BadTarget(f"target has {len(positions)} first-orbit entries, wants {self.r}")
        if self.r == 1:
            c, e = 1, positions[0]
        else:
            t, u = positions
            c = (u - t) % self.q
            e = t
        cinv = pow(c, -1, self.q)
        slots = []
        for j in range(self.q):
            src = self.base_point[(cinv * (j - e)) % self.q]
            g = self._transporter(src, target[j])
            if g is None:
                raise BadTarget(f"entry {target[j]} unreachable from {src} inside its orbit")
            slots.append(g)
        element = AmplifiedElement((c, e), tuple(slots))
        applied = element.apply(self.base_point)
        if applied != target:
            raise BadTarget(f"witness application produced {applied}, wanted {target}")
        return element

    def random_member(self, rng: random.Random) -> tuple[int, ...]:
        positions = set(rng.sample(range(self.q), self.r))
        o1, o2 = self.input.o1, self.input.o2
        return tuple(
            o1[rng.randrange(len(o1))] if j in positions else o2[rng.randrange(len(o2))]
            for j in range(self.q)
        )

    def materialize(self, cap: int) -> list[tuple[int, ...]]:
        if self.size() > cap:
            raise CapExceeded(f"|Y| = {self.size()} exceeds cap {cap}")
        members = []
        o1, o2 = self.input.o1, self.input.o2
        for positions in itertools.combinations(range(self.q), self.r):
            pos = set(positions)
            pools = [o1 if j in pos else o2 for j in range(self.q)]
            members.extend(itertools.product(*pools))
        members.sort()
        return members


def coset_rep_padding_check(inp: TwoOrbitInput, q: int) -> PaddingReport:
    """Runtime version of the counting argument: every copy point must have
    exactly r entries in the first orbit."""
    fam = AmplifiedFamily(inp, q)
    counts, failures = [], []
    for x in range(inp.pointset.n):
        c = sum(fam.in_o1[v] for v in fam.copy_point(x))
        counts.append(c)
        if c != fam.r:
            failures.append(x)
    return PaddingReport(not failures, counts, failures)


def amplify_witness(inp: TwoOrbitInput, q: int, target: tuple[int, ...]) -> AmplifiedElement:
    return AmplifiedFamily(inp, q).witness(target)


def two_orbit_amplify(inp: TwoOrbitInput, q: int, mode: str = "sample",
                      n: int = 10_000, seed: int = 0,
                      cap: int = 2_000_000) -> Certificate:
    """Build and self-check the amplified certificate.

    mode "sample": n seeded random members get constructive witnesses and a
    generator closure check.  mode "full": Y is materialized (bounded by cap)
    and membership, one-orbit closure and witnesses are swept exhaustively.
    """
    if mode not in ("sample", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    fam = AmplifiedFamily(inp, q)
    padding = coset_rep_padding_check(inp, q)
    if not padding.ok:
        raise RatioOutOfRange(f"copy points with wrong orbit counts: {padding.failures}")

    gens, labels = fam.generators()
    notes = [
        "position maps act on slots covariantly: slot j receives the entry at"
        " phi^-1(j); slot components are permuted by position maps under"
        " composition (soluble extension)",
    ]
    if q == fam.s:
        notes.append(
            f"q = {q} equals the coset count, so the copy has no constant padding"
        )

    if mode == "sample":
        rng = random.Random(seed)
        for _ in range(n):
            target = fam.random_member(rng)
            fam.witness(target)
            for el in gens:
                if not fam.is_member(el.apply(target)):
                    raise RatioOutOfRange("generator image leaves the set")
        transitivity = Transitivity("witness-sampled", seed, n)
    else:
        members = fam.materialize(cap)
        assert len(members) == fam.size()
        member_index = {pt: i for i, pt in enumerate(members)}
        for el in gens:
            for pt in members:
                if el.apply(pt) not in member_index:
                    raise RatioOutOfRange("generator image leaves the set")
        for pt in members:
            fam.witness(pt)
        transitivity = Transitivity("witness-full", seed, len(members))

    for x in fam.embed_map():
        for el in gens:
            assert fam.is_member(el.apply(x))

    spec = DirectProduct((AGL1(q), Power(inp.g_spec, q)))
    return Certificate(
        x=inp.pointset,
        y_implicit=ImplicitY(
            q=q,
            r=fam.r,
            orbit1=tuple(inp.o1),
            orbit2=tuple(inp.o2),
            coset_reps=fam.coset_reps,
            z=fam.z_point,
            base_point=fam.base_point,
            size=fam.size(),
        ),
        embedding_map=fam.embed_map(),
        scale_sq=scalar_of(fam.s, inp.pointset.kind),
        amplified_gens=gens,
        gen_map=labels,
        spec=spec,
        solubility=prove_soluble(spec),
        transitivity=transitivity,
        notes=tuple(notes),
    )
