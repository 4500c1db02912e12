"""Signed-permutation soluble sets and the embeddings that place the four
block-pattern families inside them.

The container set for parameters (alpha, beta, gamma) and a prime p consists
of all coordinate vectors of length p having one entry +-beta, one entry
+-gamma, and +-alpha elsewhere.  Affine maps of the positions (a soluble,
2-transitive group) combined with per-position sign flips act transitively on
it; the witness recipe below produces an explicit group element carrying the
base point to any target, which is how transitivity is certified.

Position conventions are 0-based throughout: a position map phi acts on
vectors covariantly, (phi . x)_j = x at phi^-1(j), and the witness map for a
target with the beta entry at t and the gamma entry at s is
phi(a) = (s - t) a + t, fixed by checking the application, not by symbol
pushing.  Note the sign components of two composed elements do not simply
multiply; they are permuted by the position map first (the transformation
group is an extension of the sign part by the affine part, soluble either
way).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .action import Action, is_transitive
from .certificate import Certificate, Transitivity
from .errors import BadTarget, CapExceeded, NotPrime, NotSubpattern
from .geometry import PointSet
from .groupspec import AGL1, C2Power, DirectProduct, is_prime, prove_soluble
from .perm import Perm
from .scalar import rational_to_str

F = Fraction

MAX_PRIME = 13  # beyond this the signed set no longer fits desk scale


@dataclass(frozen=True)
class BlockPattern:
    """Permutations of (alpha x i, beta x j, gamma x k, delta x l)."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    i: int
    j: int
    k: int
    l: int

    def values(self) -> tuple:
        return (
            (self.alpha,) * self.i
            + (self.beta,) * self.j
            + (self.gamma,) * self.k
            + (self.delta,) * self.l
        )

    @property
    def dim(self) -> int:
        return self.i + self.j + self.k + self.l

    def points(self) -> list[tuple]:
        return sorted(set(itertools.permutations(self.values())))

    def pointset(self) -> PointSet:
        return PointSet("rational", self.points())


def smallest_admissible_prime(ell: int) -> int:
    p = 2 + ell + 1
    while not is_prime(p):
        p += 1
    return p


def signed_perm_points(alpha, beta, gamma, length: int) -> list[tuple]:
    """All vectors with one +-beta, one +-gamma and +-alpha elsewhere."""
    pts = set()
    for t, s in itertools.permutations(range(length), 2):
        base = [alpha] * length
        base[t], base[s] = beta, gamma
        for signs in itertools.product((F(1), F(-1)), repeat=length):
            pts.add(tuple(c * e for c, e in zip(base, signs)))
    return sorted(pts)


@dataclass
class SignedPermSet:
    """The container set with its index, generators and witness machinery."""

    p: int
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    pointset: PointSet
    index: dict
    degenerate: bool

    @staticmethod
    def build(alpha, beta, gamma, p: int) -> "SignedPermSet":
        alpha, beta, gamma = F(alpha), F(beta), F(gamma)
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p > MAX_PRIME:
            raise CapExceeded(f"p = {p} exceeds the supported bound {MAX_PRIME}")
        pts = signed_perm_points(alpha, beta, gamma, p)
        ps = PointSet("rational", pts)
        magnitudes = {abs(alpha), abs(beta), abs(gamma)}
        degenerate = len(magnitudes) < 3 or F(0) in magnitudes
        return SignedPermSet(p, alpha, beta, gamma, ps, ps.index_of(), degenerate)

    # -- group elements as coordinate transformations ------------------------

    def _position_perm(self, phi: Perm) -> Perm:
        """Index permutation of x -> (x at phi^-1(j)) for j in 0..p-1."""
        inv = phi.inverse().images
        out = []
        for pt in self.pointset.points:
            out.append(self.index[tuple(pt[inv[j]] for j in range(self.p))])
        return Perm(tuple(out))

    def _flip_perm(self, m: int) -> Perm:
        out = []
        for pt in self.pointset.points:
            q = list(pt)
            q[m] = -q[m]
            out.append(self.index[tuple(q)])
        return Perm(tuple(out))

    def action(self) -> Action:
        p = self.p
        shift = Perm(tuple((a + 1) % p for a in range(p)))
        from .groupspec import primitive_root

        scale = Perm(tuple((primitive_root(p) * a) % p for a in range(p)))
        gens = [self._position_perm(shift), self._position_perm(scale)]
        labels = ["0.shift", "0.scale"]
        for m in range(p):
            gens.append(self._flip_perm(m))
            labels.append(f"1.flip{m}")
        spec = DirectProduct((AGL1(p), C2Power(p)))
        return Action(self.pointset, tuple(gens), spec, tuple(labels))

    # -- constructive transitivity -------------------------------------------

    def base_index(self) -> int:
        base = (self.beta, self.gamma) + (self.alpha,) * (self.p - 2)
        return self.index[base]

    def witness(self, target_index: int) -> tuple[tuple[int, int], tuple[int, ...]]:
        """Group element ((c, e), signs) with position map a -> c a + e sending
        the base point to the target; validated by application."""
        target = self.pointset.points[target_index]
        p = self.p
        for t, s in itertools.permutations(range(p), 2):
            signs = self._solve_signs(target, t, s)
            if signs is None:
                continue
            c = (s - t) % p
            e = t % p
            if self._apply(((c, e), signs), self.base_index()) == target_index:
                return (c, e), signs
        raise BadTarget(f"point {target_index} unreachable from the base point")

    def _solve_signs(self, target, t, s):
        signs = []
        for j in range(self.p):
            want = self.beta if j == t else self.gamma if j == s else self.alpha
            if target[j] == want:
                signs.append(1)
            elif target[j] == -want:
                signs.append(-1)
            else:
                return None
        return tuple(signs)

    def _apply(self, element, point_index: int) -> int:
        (c, e), signs = element
        # position map phi(a) = c a + e; new_j = signs_j * x at phi^-1(j)
        p = self.p
        cinv = pow(c, -1, p)
        pt = self.pointset.points[point_index]
        new = tuple(signs[j] * pt[(cinv * (j - e)) % p] for j in range(p))
        return self.index[new]

    def witness_sweep(self) -> int:
        """Derive and validate a witness for every point; returns the count."""
        base = self.base_index()
        count = 0
        for idx in range(self.pointset.n):
            element = self.witness(idx)
            assert self._apply(element, base) == idx
            count += 1
        return count


def _notes_for(sps: SignedPermSet, extra=()) -> tuple[str, ...]:
    notes = [
        "positions are 0-based residues mod p; witness maps validated by application",
        "sign components are permuted by position maps under composition; the"
        " transformation group is a soluble extension of the sign part",
    ]
    if sps.degenerate:
        notes.append(
            "parameter magnitudes collide or vanish: the point set is collapsed"
            f" ({sps.pointset.n} < p(p-1)2^p)"
        )
    return tuple(notes) + tuple(extra)


def _certificate_from(sps: SignedPermSet, x: PointSet, mapping, notes=()) -> Certificate:
    act = sps.action()
    assert is_transitive(act)
    sps.witness_sweep()
    spec = act.spec
    return Certificate(
        x=x,
        y=sps.pointset,
        embedding_map=tuple(mapping),
        scale_sq=F(1),
        gens=act.gens,
        gen_map=act.gen_map,
        spec=spec,
        solubility=prove_soluble(spec),
        transitivity=Transitivity("witness-full", None, sps.pointset.n),
        notes=_notes_for(sps, notes),
    )


def signed_perm_certificate(alpha, beta, gamma, ell: int, p: int | None = None) -> Certificate:
    """Certificate that the signed permutations of (alpha x ell, beta, gamma)
    lie in the signed-permutation container over the chosen prime."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    alpha, beta, gamma = F(alpha), F(beta), F(gamma)
    if p is None:
        p = smallest_admissible_prime(ell)
    elif not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    elif p <= 2 + ell:
        raise ValueError(f"p must exceed {2 + ell}")
    sps = SignedPermSet.build(alpha, beta, gamma, p)
    x = PointSet("rational", signed_perm_points(alpha, beta, gamma, ell + 2))
    pad = (alpha,) * (p - ell - 2)
    mapping = [sps.index[pad + pt] for pt in x.points]
    return _certificate_from(sps, x, mapping)


def block_embed(alpha, beta, gamma, delta, i: int, j: int, p: int | None = None) -> Certificate:
    """Certificate for the permutations of (alpha x i, beta x j, gamma, delta).

    The pattern, translated by -(alpha+beta)/2 in every coordinate, becomes a
    subset of the signed permutations of ((alpha-beta)/2 repeated, gamma and
    delta shifted), which the signed-permutation certificate covers; constant
    translations and constant padding both preserve distances exactly.
    """
    if i < 0 or j < 0:
        raise ValueError("multiplicities must be >= 0")
    alpha, beta, gamma, delta = F(alpha), F(beta), F(gamma), F(delta)
    pattern = BlockPattern(alpha, beta, gamma, delta, i, j, 1, 1)
    ell = i + j
    a2 = (alpha + beta) / 2
    alpha_p = (alpha - beta) / 2
    beta_p = gamma - a2
    gamma_p = delta - a2
    if p is None:
        p = smallest_admissible_prime(ell)
    elif not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    elif p <= 2 + ell:
        raise ValueError(f"p must exceed {2 + ell}")
    sps = SignedPermSet.build(alpha_p, beta_p, gamma_p, p)
    x = pattern.pointset()
    pad = (alpha_p,) * (p - ell - 2)
    mapping = [
        sps.index[pad + tuple(c - a2 for c in pt)] for pt in x.points
    ]
    note = (
        f"pattern translated by {rational_to_str(-a2)} per coordinate, then"
        f" padded to length {p}"
    )
    return _certificate_from(sps, x, mapping, (note,))


def subpattern_embed(src: BlockPattern, dst: BlockPattern):
    """Isometric copy of one pattern inside a larger one.

    Fixes the extra value occurrences as a constant prefix, in pattern order;
    requires identical values and componentwise smaller multiplicities.
    """
    from .geometry import EmbeddingMap

    if (src.alpha, src.beta, src.gamma, src.delta) != (dst.alpha, dst.beta, dst.gamma, dst.delta):
        raise NotSubpattern("patterns use different values")
    if src.i > dst.i or src.j > dst.j or src.k > dst.k or src.l > dst.l:
        raise NotSubpattern("multiplicities do not dominate componentwise")
    prefix = (
        (dst.alpha,) * (dst.i - src.i)
        + (dst.beta,) * (dst.j - src.j)
        + (dst.gamma,) * (dst.k - src.k)
        + (dst.delta,) * (dst.l - src.l)
    )
    xs = src.pointset()
    ys = dst.pointset()
    index = ys.index_of()
    mapping = tuple(index[prefix + pt] for pt in xs.points)
    return EmbeddingMap(xs, ys, mapping, F(1))


FAMILIES = ("ab", "abc", "abcc", "abcd")


def family_certificate(family: str, alpha, beta, gamma=None, delta=None,
                       i: int = 1, j: int = 1, p: int | None = None) -> Certificate:
    """Certificate for one of the four block-pattern families.

    ab   : permutations of (alpha x i, beta x j)
    abc  : ... plus one gamma
    abcc : ... plus gamma twice
    abcd : ... plus gamma and delta
    Families with fewer than two extra values are embedded in the abcd pattern
    first (constant-prefix copy), with auxiliary values chosen fresh.
    """
    alpha, beta = F(alpha), F(beta)
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    used = {alpha, beta}

    def fresh(*also):
        v = max(abs(u) for u in used | set(also)) + 1
        while v in used or v in also:
            v += 1
        return F(v)

    if family == "abcd":
        if gamma is None or delta is None:
            raise ValueError("abcd needs gamma and delta")
        return block_embed(alpha, beta, F(gamma), F(delta), i, j, p)
    if family == "abcc":
        if gamma is None:
            raise ValueError("abcc needs gamma")
        return block_embed(alpha, beta, F(gamma), F(gamma), i, j, p)
    if family == "abc":
        if gamma is None:
            raise ValueError("abc needs gamma")
        gamma = F(gamma)
        delta = fresh(gamma)
        inner = block_embed(alpha, beta, gamma, delta, i, j, p)
        sub = subpattern_embed(
            BlockPattern(alpha, beta, gamma, delta, i, j, 1, 0),
            BlockPattern(alpha, beta, gamma, delta, i, j, 1, 1),
        )
    else:  # "ab"
        gamma = fresh()
        delta = fresh(gamma)
        inner = block_embed(alpha, beta, gamma, delta, i, j, p)
        sub = subpattern_embed(
            BlockPattern(alpha, beta, gamma, delta, i, j, 0, 0),
            BlockPattern(alpha, beta, gamma, delta, i, j, 1, 1),
        )
    mapping = tuple(inner.embedding_map[t] for t in sub.map)
    note = "embedded through the four-value pattern with auxiliary value(s)"
    return Certificate(
        x=sub.source,
        y=inner.y,
        embedding_map=mapping,
        scale_sq=F(1),
        gens=inner.gens,
        gen_map=inner.gen_map,
        spec=inner.spec,
        solubility=inner.solubility,
        transitivity=inner.transitivity,
        notes=inner.notes + (note,),
    )
