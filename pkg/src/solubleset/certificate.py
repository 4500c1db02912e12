"""Certificate data model, canonical JSON serialization, and the direct
product combinator.

A certificate packages: the set X being certified, a containing set Y (given
explicitly, or implicitly for the amplified family as a subset of X^q cut out
by an orbit-count condition), an index embedding with its squared scale, the
generators of a group action on Y labelled by the spec generator they
realize, a compositional solubility proof, transitivity evidence, notes, and
float residuals.  Serialization is canonical: fixed key order, exact scalars
as canonical strings, so equal certificates have equal bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import groupspec, scalar
from .errors import ScaleMismatch, ScalarKindMismatch, SchemaError, SolubleSetError
from .geometry import PointSet, embedding_residual
from .groupspec import ProductNode
from .perm import Perm

VERSION = 1

TRANSITIVITY_MODES = ("orbit", "witness-sampled", "witness-full")


@dataclass(frozen=True)
class Transitivity:
    mode: str
    seed: int | None = None
    n: int | None = None

    def __post_init__(self):
        if self.mode not in TRANSITIVITY_MODES:
            raise ValueError(f"unknown transitivity mode {self.mode!r}")


@dataclass(frozen=True)
class AmplifiedElement:
    """Element of the amplified action: position map a -> c a + e (mod q)
    followed by one group element per slot; slot j receives the entry pulled
    from position phi^-1(j)."""

    phi: tuple[int, int]
    slots: tuple[Perm, ...]

    @property
    def q(self) -> int:
        return len(self.slots)

    def position_map(self) -> list[int]:
        c, e = self.phi
        return [(c * a + e) % self.q for a in range(self.q)]

    def apply(self, point: tuple[int, ...]) -> tuple[int, ...]:
        c, e = self.phi
        q = self.q
        cinv = pow(c, -1, q)
        return tuple(
            self.slots[j].images[point[(cinv * (j - e)) % q]] for j in range(q)
        )


@dataclass(frozen=True)
class ImplicitY:
    """Amplified container: the tuples in X^q with exactly r entries in the
    first orbit.  X is the certificate's own x; size is the counting-formula
    cardinality."""

    q: int
    r: int
    orbit1: tuple[int, ...]
    orbit2: tuple[int, ...]
    coset_reps: tuple[Perm, ...]
    z: int
    base_point: tuple[int, ...]
    size: int


@dataclass
class Certificate:
    x: PointSet
    embedding_map: tuple
    scale_sq: object
    gen_map: tuple[str, ...]
    spec: object
    solubility: object
    transitivity: Transitivity
    y: PointSet | None = None
    y_implicit: ImplicitY | None = None
    gens: tuple[Perm, ...] | None = None
    amplified_gens: tuple[AmplifiedElement, ...] | None = None
    notes: tuple[str, ...] = ()
    residuals: dict | None = None
    version: int = VERSION

    def __post_init__(self):
        if (self.y is None) == (self.y_implicit is None):
            raise ValueError("exactly one of y and y_implicit is required")
        if (self.gens is None) == (self.amplified_gens is None):
            raise ValueError("exactly one of gens and amplified_gens is required")
        self.embedding_map = tuple(
            tuple(m) if isinstance(m, (list, tuple)) else m for m in self.embedding_map
        )
        self.notes = tuple(self.notes)
        self.gen_map = tuple(self.gen_map)

    @property
    def is_implicit(self) -> bool:
        return self.y_implicit is not None

    def target_size(self) -> int:
        return self.y.n if self.y is not None else self.y_implicit.size


# --- JSON -------------------------------------------------------------------


def _scale_to_json(value, kind):
    return scalar.scalar_to_json(value, kind)


def certificate_to_obj(cert: Certificate) -> dict:
    out = {"version": cert.version, "x": cert.x.to_json()}
    if cert.y is not None:
        out["y"] = cert.y.to_json()
    else:
        yi = cert.y_implicit
        out["y_implicit"] = {
            "q": yi.q,
            "r": yi.r,
            "orbit1": list(yi.orbit1),
            "orbit2": list(yi.orbit2),
            "coset_reps": [list(p.images) for p in yi.coset_reps],
            "z": yi.z,
            "base_point": list(yi.base_point),
            "size": yi.size,
        }
    emb_map = (
        [list(m) for m in cert.embedding_map]
        if cert.is_implicit
        else list(cert.embedding_map)
    )
    out["embedding"] = {
        "map": emb_map,
        "scale_sq": _scale_to_json(cert.scale_sq, cert.x.kind),
    }
    if cert.gens is not None:
        out["action"] = {
            "generators": [list(p.images) for p in cert.gens],
            "gen_map": list(cert.gen_map),
        }
    else:
        out["action"] = {
            "amplified_generators": [
                {"phi": list(el.phi), "slots": [list(p.images) for p in el.slots]}
                for el in cert.amplified_gens
            ],
            "gen_map": list(cert.gen_map),
        }
    out["spec"] = groupspec.spec_to_json(cert.spec)
    out["solubility"] = groupspec.proof_to_json(cert.solubility)
    out["transitivity"] = {
        "mode": cert.transitivity.mode,
        "seed": cert.transitivity.seed,
        "n": cert.transitivity.n,
    }
    out["notes"] = list(cert.notes)
    out["residuals"] = cert.residuals
    return out


def emit_json(cert: Certificate) -> bytes:
    return (json.dumps(certificate_to_obj(cert), separators=(",", ":")) + "\n").encode()


TOP_KEYS = {
    "version", "x", "y", "y_implicit", "embedding", "action",
    "spec", "solubility", "transitivity", "notes", "residuals",
}


def _need(obj, key, path, types=None):
    if key not in obj:
        raise SchemaError(f"missing key {key!r}", path)
    v = obj[key]
    if types is not None and (isinstance(v, bool) or not isinstance(v, types)):
        raise SchemaError(f"bad type for {key!r}", f"{path}.{key}")
    return v


def _int_list(v, path):
    if not isinstance(v, list) or any(isinstance(c, bool) or not isinstance(c, int) for c in v):
        raise SchemaError("expected a list of integers", path)
    return tuple(v)


def _perm(v, path):
    try:
        return Perm(tuple(_int_list(v, path)))
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc


def parse_obj(obj) -> Certificate:
    if not isinstance(obj, dict):
        raise SchemaError("certificate must be an object")
    unknown = set(obj) - TOP_KEYS
    if unknown:
        raise SchemaError(f"unknown keys {sorted(unknown)}")
    version = _need(obj, "version", "$", int)
    if version != VERSION:
        raise SchemaError(f"unsupported version {version}", "$.version")
    x = PointSet.from_json(_need(obj, "x", "$", dict), "$.x")

    y = y_implicit = None
    if "y" in obj:
        if "y_implicit" in obj:
            raise SchemaError("y and y_implicit are mutually exclusive")
        y = PointSet.from_json(obj["y"], "$.y")
    elif "y_implicit" in obj:
        yi = obj["y_implicit"]
        if not isinstance(yi, dict):
            raise SchemaError("expected an object", "$.y_implicit")
        y_implicit = ImplicitY(
            q=_need(yi, "q", "$.y_implicit", int),
            r=_need(yi, "r", "$.y_implicit", int),
            orbit1=_int_list(_need(yi, "orbit1", "$.y_implicit"), "$.y_implicit.orbit1"),
            orbit2=_int_list(_need(yi, "orbit2", "$.y_implicit"), "$.y_implicit.orbit2"),
            coset_reps=tuple(
                _perm(p, f"$.y_implicit.coset_reps[{i}]")
                for i, p in enumerate(_need(yi, "coset_reps", "$.y_implicit", list))
            ),
            z=_need(yi, "z", "$.y_implicit", int),
            base_point=_int_list(_need(yi, "base_point", "$.y_implicit"), "$.y_implicit.base_point"),
            size=_need(yi, "size", "$.y_implicit", int),
        )
    else:
        raise SchemaError("one of y or y_implicit is required")

    emb = _need(obj, "embedding", "$", dict)
    raw_map = _need(emb, "map", "$.embedding", list)
    if y_implicit is not None:
        embedding_map = tuple(
            _int_list(m, f"$.embedding.map[{i}]") for i, m in enumerate(raw_map)
        )
    else:
        embedding_map = _int_list(raw_map, "$.embedding.map")
    try:
        scale_sq = scalar.scalar_from_json(_need(emb, "scale_sq", "$.embedding"), x.kind)
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc), "$.embedding.scale_sq") from exc

    act = _need(obj, "action", "$", dict)
    gen_map = tuple(_need(act, "gen_map", "$.action", list))
    if not all(isinstance(lbl, str) for lbl in gen_map):
        raise SchemaError("gen_map must be strings", "$.action.gen_map")
    gens = amplified = None
    if "generators" in act:
        gens = tuple(
            _perm(g, f"$.action.generators[{i}]")
            for i, g in enumerate(act["generators"])
        )
    elif "amplified_generators" in act:
        amplified = []
        for i, el in enumerate(act["amplified_generators"]):
            path = f"$.action.amplified_generators[{i}]"
            if not isinstance(el, dict):
                raise SchemaError("expected an object", path)
            phi = _int_list(_need(el, "phi", path), f"{path}.phi")
            if len(phi) != 2:
                raise SchemaError("phi must be a (coeff, shift) pair", f"{path}.phi")
            slots = tuple(
                _perm(s, f"{path}.slots[{k}]")
                for k, s in enumerate(_need(el, "slots", path, list))
            )
            amplified.append(AmplifiedElement((phi[0], phi[1]), slots))
        amplified = tuple(amplified)
    else:
        raise SchemaError("action needs generators or amplified_generators", "$.action")

    spec = groupspec.spec_from_json(_need(obj, "spec", "$", dict))
    proof = groupspec.proof_from_json(_need(obj, "solubility", "$", dict))

    tr = _need(obj, "transitivity", "$", dict)
    mode = _need(tr, "mode", "$.transitivity", str)
    if mode not in TRANSITIVITY_MODES:
        raise SchemaError(f"unknown mode {mode!r}", "$.transitivity.mode")
    seed, count = tr.get("seed"), tr.get("n")
    transitivity = Transitivity(mode, seed, count)

    notes = _need(obj, "notes", "$", list)
    if not all(isinstance(s, str) for s in notes):
        raise SchemaError("notes must be strings", "$.notes")
    residuals = obj.get("residuals")
    if residuals is not None and not isinstance(residuals, dict):
        raise SchemaError("residuals must be an object or null", "$.residuals")

    try:
        return Certificate(
            x=x, y=y, y_implicit=y_implicit,
            embedding_map=embedding_map, scale_sq=scale_sq,
            gens=gens, amplified_gens=amplified, gen_map=gen_map,
            spec=spec, solubility=proof, transitivity=transitivity,
            notes=tuple(notes), residuals=residuals, version=version,
        )
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def parse_json(data: bytes | str) -> Certificate:
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return parse_obj(obj)


# --- direct products ----------------------------------------------------------


def _promote(ps: PointSet, kind: str) -> PointSet:
    if ps.kind == kind:
        return ps
    assert ps.kind == scalar.RATIONAL and kind == scalar.GOLDEN
    pts = [[scalar.GoldenRational.of(c) for c in p] for p in ps.points]
    return PointSet(kind, pts)


def _lift_spec(spec, lift):
    """Re-realize the permutations inside enumerated spec nodes via lift."""
    if isinstance(spec, groupspec.Enumerated):
        gens = tuple(lift(g) for g in spec.generators)
        degree = gens[0].degree if gens else lift(Perm.identity(spec.degree)).degree
        return groupspec.Enumerated(spec.order, degree, gens)
    if isinstance(spec, groupspec.DirectProduct):
        return groupspec.DirectProduct(tuple(_lift_spec(f, lift) for f in spec.factors))
    if isinstance(spec, groupspec.Power):
        return groupspec.Power(_lift_spec(spec.base, lift), spec.exp)
    return spec


def product_certificate(c1: Certificate, c2: Certificate) -> Certificate:
    """Combine two verified certificates into one for the Cartesian product.

    Coordinates concatenate, each factor's generators act on its own block,
    and the embedding is the product of the embeddings; both factors must
    embed at the same squared scale.
    """
    from .verify import verify_certificate

    for c in (c1, c2):
        if c.is_implicit:
            raise SolubleSetError("product requires explicit containing sets")
        report = verify_certificate(c)
        if not report.passed:
            raise SolubleSetError(f"factor certificate fails verification: {report.summary()}")

    exact = {scalar.RATIONAL, scalar.GOLDEN}
    k1, k2 = c1.x.kind, c2.x.kind
    if k1 == k2:
        kind = k1
    elif {k1, k2} <= exact:
        kind = scalar.GOLDEN
    else:
        raise ScalarKindMismatch(f"cannot combine {k1} with {k2}")

    s1 = scalar.scalar_of(c1.scale_sq, kind) if kind != scalar.FLOAT else float(c1.scale_sq)
    s2 = scalar.scalar_of(c2.scale_sq, kind) if kind != scalar.FLOAT else float(c2.scale_sq)
    if kind == scalar.FLOAT:
        if abs(s1 - s2) > max(c1.x.tol or 0, c2.x.tol or 0):
            raise ScaleMismatch(f"scales {s1} and {s2} differ")
    elif s1 != s2:
        raise ScaleMismatch(f"scales {s1} and {s2} differ")

    x1, x2 = _promote(c1.x, kind), _promote(c2.x, kind)
    y1, y2 = _promote(c1.y, kind), _promote(c2.y, kind)
    tol = max(c1.x.tol or 0, c2.x.tol or 0) if kind == scalar.FLOAT else None

    def combine(a: PointSet, b: PointSet) -> PointSet:
        return PointSet(kind, [p + q for p in a.points for q in b.points], tol=tol)

    x = combine(x1, x2)
    y = combine(y1, y2)
    ny2 = y2.n

    def lift_left(g: Perm) -> Perm:
        images = [0] * y.n
        for i1 in range(y1.n):
            base = g.images[i1] * ny2
            row = i1 * ny2
            for i2 in range(ny2):
                images[row + i2] = base + i2
        return Perm(tuple(images))

    def lift_right(g: Perm) -> Perm:
        images = [0] * y.n
        for i1 in range(y1.n):
            row = i1 * ny2
            for i2 in range(ny2):
                images[row + i2] = row + g.images[i2]
        return Perm(tuple(images))

    gens = [lift_left(g) for g in c1.gens] + [lift_right(g) for g in c2.gens]
    gen_map = [f"0.{lbl}" for lbl in c1.gen_map] + [f"1.{lbl}" for lbl in c2.gen_map]

    mapping = tuple(
        c1.embedding_map[i1] * ny2 + c2.embedding_map[i2]
        for i1 in range(x1.n)
        for i2 in range(x2.n)
    )
    # enumerated specs carry concrete permutations; realize them on the
    # product indices so membership checks see the same degree
    spec = groupspec.DirectProduct(
        (_lift_spec(c1.spec, lift_left), _lift_spec(c2.spec, lift_right))
    )
    proof = ProductNode((c1.solubility, c2.solubility))
    residuals = None
    if kind == scalar.FLOAT:
        ok, worst, _ = embedding_residual(x, y, mapping, s1)
        assert ok
        residuals = {"embedding": worst}
    notes = tuple(f"factor0: {n}" for n in c1.notes) + tuple(
        f"factor1: {n}" for n in c2.notes
    )
    return Certificate(
        x=x, y=y, embedding_map=mapping, scale_sq=s1,
        gens=tuple(gens), gen_map=tuple(gen_map),
        spec=spec, solubility=proof,
        transitivity=Transitivity("orbit"),
        notes=notes, residuals=residuals,
    )
