"""Random single-field mutations of certificate JSON objects.

Each mutation targets one semantically load-bearing field.  Most kinds are
provably invalidating (e.g. swapping two images inside one generator composes
it with a transposition, which is never an isometry of a set with pairwise
distinct points).  Retargeting an embedding entry can accidentally produce
another valid embedding in a highly symmetric set, so that kind re-checks
invalidity independently and redraws when the mutation landed on a valid map.
"""

import copy
from fractions import Fraction

from solubleset.certificate import parse_obj
from solubleset.errors import SchemaError, SolubleSetError
from solubleset.geometry import embedding_residual
from solubleset.verify import verify_certificate


def _bump_rational(s: str) -> str:
    f = Fraction(s) + 1
    return f"{f.numerator}/{f.denominator}"


def _mutate_scalar(value):
    if isinstance(value, str):
        return _bump_rational(value)
    if isinstance(value, dict):
        out = dict(value)
        out["a"] = _bump_rational(out["a"])
        return out
    return value + 0.37


def _swap_two(rng, seq):
    n = len(seq)
    i = rng.randrange(n)
    j = rng.randrange(n)
    while seq[i] == seq[j]:
        j = rng.randrange(n)
    seq[i], seq[j] = seq[j], seq[i]
    return i, j


def _mutate_proof(obj, rng):
    node = obj["solubility"]
    while node.get("kind") == "product":
        node = rng.choice(node["children"])
    if node["kind"] == "enumerated":
        k = rng.randrange(len(node["orders"]))
        node["orders"][k] += 1
    else:
        key = {"cyclic": "n", "dihedral": "k", "agl": "p"}[node["kind"]]
        node[key] += 1
    return "proof"


def _mutate_coord(obj, rng):
    target = obj["y"] if "y" in obj else obj["x"]
    pts = target["points"]
    p = rng.randrange(len(pts))
    c = rng.randrange(len(pts[p])) if pts[p] else 0
    pts[p][c] = _mutate_scalar(pts[p][c])
    return "coordinate"


def _embedding_still_valid(obj) -> bool:
    try:
        cert = parse_obj(obj)
    except SchemaError:
        return False
    if cert.is_implicit:
        return False
    ok, _, _ = embedding_residual(cert.x, cert.y, cert.embedding_map, cert.scale_sq)
    return ok


def mutate_certificate_obj(obj, rng):
    """One random invalidating mutation; returns (mutated_obj, kind)."""
    implicit = "y_implicit" in obj
    kinds = ["gen-swap", "scale", "proof", "coordinate", "embed"]
    if implicit:
        kinds = ["gen-swap", "scale", "proof", "orbit-label", "embed-tuple",
                 "base-point", "coset-rep"]
    for _ in range(64):
        out = copy.deepcopy(obj)
        kind = rng.choice(kinds)
        if kind == "gen-swap":
            if implicit:
                el = rng.choice(out["action"]["amplified_generators"])
                _swap_two(rng, rng.choice(el["slots"]))
            else:
                _swap_two(rng, rng.choice(out["action"]["generators"]))
        elif kind == "scale":
            out["embedding"]["scale_sq"] = _mutate_scalar(out["embedding"]["scale_sq"])
        elif kind == "proof":
            _mutate_proof(out, rng)
        elif kind == "coordinate":
            _mutate_coord(out, rng)
        elif kind == "embed":
            emb = out["embedding"]["map"]
            if len(emb) < 2:
                continue
            i = rng.randrange(len(emb))
            new = rng.randrange(len(out["y"]["points"]))
            if new == emb[i]:
                continue
            emb[i] = new
            if _embedding_still_valid(out):
                continue  # landed on another valid embedding; redraw
        elif kind == "orbit-label":
            o1, o2 = out["y_implicit"]["orbit1"], out["y_implicit"]["orbit2"]
            i, j = rng.randrange(len(o1)), rng.randrange(len(o2))
            o1[i], o2[j] = o2[j], o1[i]
        elif kind == "embed-tuple":
            v = rng.choice(out["embedding"]["map"])
            k = rng.randrange(len(v))
            v[k] = (v[k] + 1) % len(out["x"]["points"])
        elif kind == "base-point":
            bp = out["y_implicit"]["base_point"]
            bp[0] = out["y_implicit"]["orbit2"][0]
        elif kind == "coset-rep":
            _swap_two(rng, rng.choice(out["y_implicit"]["coset_reps"]))
        return out, kind
    raise AssertionError("could not draw a usable mutation")


def rejection_reason(obj) -> str | None:
    """None if the certificate is accepted, else why it was rejected."""
    try:
        cert = parse_obj(obj)
    except (SchemaError, SolubleSetError) as exc:
        return f"schema: {exc}"
    report = verify_certificate(cert)
    if report.passed:
        return None
    return next(c.line() for c in report.clauses if not c.passed)
