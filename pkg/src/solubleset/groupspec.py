"""Compositional group descriptions with checkable solubility proofs.

A GroupSpec is a tree whose leaves are named soluble families (cyclic,
dihedral, elementary abelian 2-groups, the one-dimensional affine group over
a prime field) or an explicitly enumerated permutation group, and whose
internal nodes are direct products (a power is a direct product of identical
factors).  Solubility of a spec follows from a proof tree that mirrors it:
named leaves are soluble families, enumerated leaves carry their derived
series, products are soluble when all factors are.

Semidirect products are intentionally not a node kind: the named leaves cover
every internally-semidirect group needed, which keeps the proof checker
trivially sound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotPrime, NotSoluble, SchemaError
from .perm import DEFAULT_CAP, Perm, PermGroup, derived_series, enumerate_group


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primitive_root(p: int) -> int:
    """Smallest primitive root mod p (p prime); deterministic certificates."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        return 1
    # factor p-1, then check g^((p-1)/q) != 1 for every prime factor q
    factors = []
    m = p - 1
    f = 2
    while f * f <= m:
        if m % f == 0:
            factors.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise AssertionError("no primitive root found")  # unreachable for prime p


def agl_generators(p: int) -> list[Perm]:
    """Generators of the affine maps a -> t*a + s on {0..p-1}.

    Translation a -> a+1 and scaling by the smallest primitive root; the BFS
    closure has order p(p-1).  For p = 2 the scaling is the identity and only
    the translation is returned.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    translation = Perm(tuple((a + 1) % p for a in range(p)))
    if p == 2:
        return [translation]
    g = primitive_root(p)
    scaling = Perm(tuple((g * a) % p for a in range(p)))
    return [translation, scaling]


# --- spec nodes -------------------------------------------------------------


@dataclass(frozen=True)
class Cyclic:
    n: int


@dataclass(frozen=True)
class Dihedral:
    """Dihedral group of order 2k (symmetries of a k-gon)."""

    k: int


@dataclass(frozen=True)
class C2Power:
    d: int


@dataclass(frozen=True)
class AGL1:
    p: int


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple


@dataclass(frozen=True)
class Power:
    base: object
    exp: int


@dataclass(frozen=True)
class Enumerated:
    """An explicitly given permutation group: order claim plus generators."""

    order: int
    degree: int
    generators: tuple[Perm, ...]

    def permgroup(self, cap: int = DEFAULT_CAP) -> PermGroup:
        g = enumerate_group(self.generators, cap=cap, degree=self.degree)
        if g.order != self.order:
            raise ValueError(f"enumerated order {g.order} != claimed {self.order}")
        return g


def enumerated_from_group(g: PermGroup) -> Enumerated:
    g.require_enumerated("enumerated_from_group")
    return Enumerated(g.order, g.degree, tuple(g.generators))


GroupSpec = (Cyclic, Dihedral, C2Power, AGL1, DirectProduct, Power, Enumerated)


def spec_order(spec) -> int:
    if isinstance(spec, Cyclic):
        return spec.n
    if isinstance(spec, Dihedral):
        return 2 * spec.k
    if isinstance(spec, C2Power):
        return 2**spec.d
    if isinstance(spec, AGL1):
        return spec.p * (spec.p - 1)
    if isinstance(spec, DirectProduct):
        out = 1
        for f in spec.factors:
            out *= spec_order(f)
        return out
    if isinstance(spec, Power):
        return spec_order(spec.base) ** spec.exp
    if isinstance(spec, Enumerated):
        return spec.order
    raise TypeError(f"not a GroupSpec: {spec!r}")


# --- solubility proofs ------------------------------------------------------


@dataclass(frozen=True)
class CyclicLeaf:
    n: int


@dataclass(frozen=True)
class DihedralLeaf:
    k: int


@dataclass(frozen=True)
class AGL1Leaf:
    p: int


@dataclass(frozen=True)
class EnumeratedLeaf:
    """Derived-series order list; valid iff it ends at 1."""

    orders: tuple[int, ...]


@dataclass(frozen=True)
class ProductNode:
    children: tuple


SolubilityProof = (CyclicLeaf, DihedralLeaf, AGL1Leaf, EnumeratedLeaf, ProductNode)


def prove_soluble(spec, cap: int = DEFAULT_CAP):
    """Build the proof tree mirroring the spec; NotSoluble on any bad leaf."""
    if isinstance(spec, Cyclic):
        if spec.n < 1:
            raise ValueError("cyclic order must be >= 1")
        return CyclicLeaf(spec.n)
    if isinstance(spec, Dihedral):
        if spec.k < 1:
            raise ValueError("dihedral parameter must be >= 1")
        return DihedralLeaf(spec.k)
    if isinstance(spec, AGL1):
        if not is_prime(spec.p):
            raise NotPrime(f"{spec.p} is not prime")
        return AGL1Leaf(spec.p)
    if isinstance(spec, C2Power):
        # a power of C2: one child proof stands for every factor
        return ProductNode((CyclicLeaf(2),))
    if isinstance(spec, Power):
        return ProductNode((prove_soluble(spec.base, cap),))
    if isinstance(spec, DirectProduct):
        return ProductNode(tuple(prove_soluble(f, cap) for f in spec.factors))
    if isinstance(spec, Enumerated):
        series, soluble = derived_series(spec.permgroup(cap), cap)
        orders = tuple(g.order for g in series)
        if not soluble:
            raise NotSoluble(f"enumerated leaf has derived series {orders}")
        return EnumeratedLeaf(orders)
    raise TypeError(f"not a GroupSpec: {spec!r}")


def proof_matches_spec(spec, proof) -> bool:
    if isinstance(spec, Cyclic):
        return isinstance(proof, CyclicLeaf) and proof.n == spec.n
    if isinstance(spec, Dihedral):
        return isinstance(proof, DihedralLeaf) and proof.k == spec.k
    if isinstance(spec, AGL1):
        return isinstance(proof, AGL1Leaf) and proof.p == spec.p
    if isinstance(spec, C2Power):
        return (
            isinstance(proof, ProductNode)
            and len(proof.children) == 1
            and isinstance(proof.children[0], CyclicLeaf)
            and proof.children[0].n == 2
        )
    if isinstance(spec, Power):
        return (
            isinstance(proof, ProductNode)
            and len(proof.children) == 1
            and proof_matches_spec(spec.base, proof.children[0])
        )
    if isinstance(spec, DirectProduct):
        return (
            isinstance(proof, ProductNode)
            and len(proof.children) == len(spec.factors)
            and all(proof_matches_spec(f, c) for f, c in zip(spec.factors, proof.children))
        )
    if isinstance(spec, Enumerated):
        return isinstance(proof, EnumeratedLeaf)
    return False


def check_proof(spec, proof, cap: int = DEFAULT_CAP) -> list[str]:
    """Re-verify a proof tree against its spec with no trust in the producer.

    Named leaves are vouched for by their family (cyclic and dihedral groups
    and AGL(1,p) are soluble for every parameter); enumerated leaves are
    re-enumerated and their derived series re-run.  Returns problem strings.
    """
    problems = []
    if not proof_matches_spec(spec, proof):
        return [f"proof tree does not mirror spec {spec!r}"]

    def walk(sp, pf, path):
        if isinstance(sp, AGL1) and not is_prime(sp.p):
            problems.append(f"{path}: AGL1 parameter {sp.p} is not prime")
        elif isinstance(sp, Cyclic) and sp.n < 1:
            problems.append(f"{path}: bad cyclic order {sp.n}")
        elif isinstance(sp, Dihedral) and sp.k < 1:
            problems.append(f"{path}: bad dihedral parameter {sp.k}")
        elif isinstance(sp, Enumerated):
            try:
                series, soluble = derived_series(sp.permgroup(cap), cap)
            except Exception as exc:  # noqa: BLE001 - report, never crash the verifier
                problems.append(f"{path}: cannot re-enumerate ({exc})")
                return
            orders = tuple(g.order for g in series)
            if orders != pf.orders:
                problems.append(
                    f"{path}: recomputed derived series {orders} != claimed {pf.orders}"
                )
            if not soluble:
                problems.append(f"{path}: enumerated group is not soluble ({orders})")
        elif isinstance(sp, DirectProduct):
            for i, (f, c) in enumerate(zip(sp.factors, pf.children)):
                walk(f, c, f"{path}.{i}")
        elif isinstance(sp, Power):
            walk(sp.base, pf.children[0], f"{path}.base")
        elif isinstance(sp, C2Power) and sp.d < 0:
            problems.append(f"{path}: bad exponent {sp.d}")

    walk(spec, proof, "proof")
    return problems


# --- natural faithful realizations (for oracle cross-checks) ----------------


def _shift(p: Perm, offset: int, degree: int) -> Perm:
    images = list(range(degree))
    for i, j in enumerate(p.images):
        images[offset + i] = offset + j
    return Perm(tuple(images))


def spec_permutation_group(spec, cap: int = DEFAULT_CAP) -> PermGroup:
    """A faithful permutation realization of the spec, fully enumerated.

    Used by tests to cross-check compositional proofs against the derived
    series oracle whenever the order is small enough to enumerate.
    """
    gens, degree = _natural_generators(spec)
    group = enumerate_group(gens, cap=cap, degree=degree)
    assert group.order == spec_order(spec)
    return group


def _natural_generators(spec) -> tuple[list[Perm], int]:
    if isinstance(spec, Cyclic):
        n = max(spec.n, 1)
        return ([Perm(tuple((i + 1) % n for i in range(n)))] if n > 1 else [], n)
    if isinstance(spec, Dihedral):
        k = spec.k
        if k == 1:
            return [Perm((1, 0))], 2
        if k == 2:
            return [Perm((1, 0, 2, 3)), Perm((0, 1, 3, 2))], 4
        rot = Perm(tuple((i + 1) % k for i in range(k)))
        ref = Perm(tuple((-i) % k for i in range(k)))
        return [rot, ref], k
    if isinstance(spec, C2Power):
        d = spec.d
        gens = []
        for m in range(d):
            images = list(range(2 * d))
            images[2 * m], images[2 * m + 1] = images[2 * m + 1], images[2 * m]
            gens.append(Perm(tuple(images)))
        return gens, max(2 * d, 1)
    if isinstance(spec, AGL1):
        return agl_generators(spec.p), spec.p
    if isinstance(spec, Enumerated):
        return list(spec.generators), spec.degree
    if isinstance(spec, Power):
        spec = DirectProduct(tuple([spec.base] * spec.exp))
    if isinstance(spec, DirectProduct):
        gens, degree = [], 0
        for f in spec.factors:
            fgens, fdeg = _natural_generators(f)
            gens = [_shift(g, 0, degree + fdeg) for g in gens]
            gens += [_shift(g, degree, degree + fdeg) for g in fgens]
            degree += fdeg
        return gens, max(degree, 1)
    raise TypeError(f"not a GroupSpec: {spec!r}")


# --- generator labels and defining relations --------------------------------


def spec_generator_labels(spec, prefix: str = "") -> list[str]:
    """Canonical labels for the generators a certificate action must supply."""
    if isinstance(spec, Cyclic):
        return [prefix + "rot"]
    if isinstance(spec, Dihedral):
        return [prefix + "rot", prefix + "ref"]
    if isinstance(spec, C2Power):
        return [f"{prefix}flip{m}" for m in range(spec.d)]
    if isinstance(spec, AGL1):
        return [prefix + "shift"] if spec.p == 2 else [prefix + "shift", prefix + "scale"]
    if isinstance(spec, DirectProduct):
        out = []
        for i, f in enumerate(spec.factors):
            out += spec_generator_labels(f, f"{prefix}{i}.")
        return out
    if isinstance(spec, Power):
        out = []
        for m in range(spec.exp):
            out += spec_generator_labels(spec.base, f"{prefix}slot{m}.")
        return out
    if isinstance(spec, Enumerated):
        return [f"{prefix}g{i}" for i in range(len(spec.generators))]
    raise TypeError(f"not a GroupSpec: {spec!r}")


def check_spec_relations(spec, perms_by_label: dict, cap: int = DEFAULT_CAP,
                         prefix: str = "") -> list[str]:
    """Check that labelled permutations satisfy the spec's defining relations.

    The relation sets below are complete presentations of the named families,
    so satisfying them makes the generated permutation group a quotient of the
    spec group; quotients of soluble groups are soluble.  Enumerated factors
    are handled by membership instead: each labelled permutation must belong
    to the closure of the spec's own generators.
    """
    problems: list[str] = []

    def get(label):
        p = perms_by_label.get(label)
        if p is None:
            problems.append(f"missing generator {label!r}")
        return p

    if isinstance(spec, Cyclic):
        r = get(prefix + "rot")
        if r is not None and spec.n % r.order() != 0:
            problems.append(f"{prefix}rot^{spec.n} != id")
    elif isinstance(spec, Dihedral):
        r, s = get(prefix + "rot"), get(prefix + "ref")
        if r is not None and spec.k % r.order() != 0:
            problems.append(f"{prefix}rot^{spec.k} != id")
        if s is not None and not (s * s).is_identity():
            problems.append(f"{prefix}ref^2 != id")
        if r is not None and s is not None and (s * r * s) != r.inverse():
            problems.append(f"{prefix}: ref.rot.ref != rot^-1")
    elif isinstance(spec, C2Power):
        labels = [f"{prefix}flip{m}" for m in range(spec.d)]
        flips = [get(lbl) for lbl in labels]
        for lbl, f in zip(labels, flips):
            if f is not None and not (f * f).is_identity():
                problems.append(f"{lbl}^2 != id")
        for i in range(len(flips)):
            for j in range(i + 1, len(flips)):
                if flips[i] is not None and flips[j] is not None:
                    if flips[i] * flips[j] != flips[j] * flips[i]:
                        problems.append(f"{labels[i]} and {labels[j]} do not commute")
    elif isinstance(spec, AGL1):
        t = get(prefix + "shift")
        if t is not None and spec.p % t.order() != 0:
            problems.append(f"{prefix}shift^{spec.p} != id")
        if spec.p > 2:
            s = get(prefix + "scale")
            if s is not None and (spec.p - 1) % s.order() != 0:
                problems.append(f"{prefix}scale^{spec.p - 1} != id")
            if t is not None and s is not None:
                g = primitive_root(spec.p)
                if s * t * s.inverse() != t.power(g):
                    problems.append(f"{prefix}: scale.shift.scale^-1 != shift^{g}")
    elif isinstance(spec, Enumerated):
        labels = [f"{prefix}g{i}" for i in range(len(spec.generators))]
        try:
            group = spec.permgroup(cap)
        except Exception as exc:  # noqa: BLE001
            return [f"{prefix}: cannot enumerate spec group ({exc})"]
        for lbl in labels:
            p = get(lbl)
            if p is None:
                continue
            if p.degree != group.degree or p not in group:
                problems.append(f"{lbl} is not an element of the enumerated spec group")
    elif isinstance(spec, (DirectProduct, Power)):
        if isinstance(spec, Power):
            parts = [(f"{prefix}slot{m}.", spec.base) for m in range(spec.exp)]
        else:
            parts = [(f"{prefix}{i}.", f) for i, f in enumerate(spec.factors)]
        for pfx, sub in parts:
            problems += check_spec_relations(sub, perms_by_label, cap, pfx)
        # generators of different factors must commute
        groups = [
            [perms_by_label.get(lbl) for lbl in spec_generator_labels(sub, pfx)]
            for pfx, sub in parts
        ]
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                for a in groups[i]:
                    for b in groups[j]:
                        if a is not None and b is not None and a * b != b * a:
                            problems.append(
                                f"{prefix}: cross-factor generators do not commute"
                            )
    else:
        problems.append(f"not a GroupSpec: {spec!r}")
    return problems


# --- JSON -------------------------------------------------------------------


def spec_to_json(spec):
    if isinstance(spec, Cyclic):
        return {"kind": "cyclic", "n": spec.n}
    if isinstance(spec, Dihedral):
        return {"kind": "dihedral", "k": spec.k}
    if isinstance(spec, C2Power):
        return {"kind": "c2power", "d": spec.d}
    if isinstance(spec, AGL1):
        return {"kind": "agl", "p": spec.p}
    if isinstance(spec, DirectProduct):
        return {"kind": "direct", "factors": [spec_to_json(f) for f in spec.factors]}
    if isinstance(spec, Power):
        return {"kind": "power", "base": spec_to_json(spec.base), "exp": spec.exp}
    if isinstance(spec, Enumerated):
        return {
            "kind": "enumerated",
            "order": spec.order,
            "degree": spec.degree,
            "generators": [list(g.images) for g in spec.generators],
        }
    raise TypeError(f"not a GroupSpec: {spec!r}")


def _expect_int(obj, key, path):
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"expected integer {key!r}", path)
    return v


def spec_from_json(obj, path: str = "$.spec"):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("expected a spec object with a 'kind'", path)
    kind = obj["kind"]
    if kind == "cyclic":
        return Cyclic(_expect_int(obj, "n", path))
    if kind == "dihedral":
        return Dihedral(_expect_int(obj, "k", path))
    if kind == "c2power":
        return C2Power(_expect_int(obj, "d", path))
    if kind == "agl":
        return AGL1(_expect_int(obj, "p", path))
    if kind == "direct":
        factors = obj.get("factors")
        if not isinstance(factors, list):
            raise SchemaError("direct product needs a factor list", path)
        return DirectProduct(
            tuple(spec_from_json(f, f"{path}.factors[{i}]") for i, f in enumerate(factors))
        )
    if kind == "power":
        return Power(spec_from_json(obj.get("base"), f"{path}.base"),
                     _expect_int(obj, "exp", path))
    if kind == "enumerated":
        gens = obj.get("generators")
        if not isinstance(gens, list):
            raise SchemaError("enumerated spec needs a generator list", path)
        degree = _expect_int(obj, "degree", path)
        try:
            perms = tuple(Perm(tuple(g)) for g in gens)
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"bad generator: {exc}", path) from exc
        if any(p.degree != degree for p in perms):
            raise SchemaError("generator degree mismatch", path)
        return Enumerated(_expect_int(obj, "order", path), degree, perms)
    raise SchemaError(f"unknown spec kind {kind!r}", path)


def proof_to_json(proof):
    if isinstance(proof, CyclicLeaf):
        return {"kind": "cyclic", "n": proof.n}
    if isinstance(proof, DihedralLeaf):
        return {"kind": "dihedral", "k": proof.k}
    if isinstance(proof, AGL1Leaf):
        return {"kind": "agl", "p": proof.p}
    if isinstance(proof, EnumeratedLeaf):
        return {"kind": "enumerated", "orders": list(proof.orders)}
    if isinstance(proof, ProductNode):
        return {"kind": "product", "children": [proof_to_json(c) for c in proof.children]}
    raise TypeError(f"not a SolubilityProof: {proof!r}")


def proof_from_json(obj, path: str = "$.solubility"):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("expected a proof object with a 'kind'", path)
    kind = obj["kind"]
    if kind == "cyclic":
        return CyclicLeaf(_expect_int(obj, "n", path))
    if kind == "dihedral":
        return DihedralLeaf(_expect_int(obj, "k", path))
    if kind == "agl":
        return AGL1Leaf(_expect_int(obj, "p", path))
    if kind == "enumerated":
        orders = obj.get("orders")
        if not isinstance(orders, list) or not all(
            isinstance(o, int) and not isinstance(o, bool) for o in orders
        ):
            raise SchemaError("enumerated proof needs an integer order list", path)
        return EnumeratedLeaf(tuple(orders))
    if kind == "product":
        children = obj.get("children")
        if not isinstance(children, list):
            raise SchemaError("product proof needs a child list", path)
        return ProductNode(
            tuple(proof_from_json(c, f"{path}.children[{i}]") for i, c in enumerate(children))
        )
    raise SchemaError(f"unknown proof kind {kind!r}", path)
