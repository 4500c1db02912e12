"""Independent certificate verification.

Re-checks every claim with no trust in the producer, using only the scalar,
permutation, geometry and action primitives (never the construction modules,
so a construction bug cannot hide itself here):

  structure    well-formed data, consistent sizes and labels
  solubility   proof tree mirrors the spec; enumerated leaves re-derived
  group        action generators realize the claimed group: defining
               relations for named families, membership for enumerated ones
  action       generators act bijectively by isometries (full sweep for
               small sets, seeded sampling for large or implicit ones)
  transitivity orbit check for explicit sets; re-derived transporter
               witnesses for implicit amplified sets
  embedding    scaled-distance identity over all source pairs

For implicit (amplified) targets the containing set is a subset of X^q given
by an orbit-count condition; `escalate="full"` materializes it (bounded by
`cap`) and sweeps membership, orbits and witnesses exhaustively.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from . import groupspec, scalar
from .action import Action, check_action, orbits
from .certificate import Certificate
from .errors import CapExceeded
from .geometry import embedding_residual
from .perm import Perm, enumerate_group

ISOMETRY_FULL_LIMIT = 1100  # full pair sweep up to this many target points
SAMPLED_PAIRS = 20_000
DEFAULT_WITNESS_SAMPLES = 10_000
FLIP_CLOSURE_CAP = 4096
MATERIALIZE_CAP = 2_000_000


@dataclass
class ClauseResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'pass' if self.passed else 'FAIL'}] {self.name}: {self.detail}".rstrip(": ")


@dataclass
class VerifyReport:
    clauses: list[ClauseResult] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.clauses.append(ClauseResult(name, passed, detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def summary(self) -> str:
        return "\n".join(c.line() for c in self.clauses)


def verify_certificate(cert: Certificate, escalate: str | None = None,
                       cap: int = MATERIALIZE_CAP) -> VerifyReport:
    report = VerifyReport()
    if not _check_structure(cert, report):
        return report
    _check_solubility(cert, report)
    _check_group(cert, report)
    if cert.is_implicit:
        _check_implicit(cert, report, escalate=escalate, cap=cap)
    else:
        _check_explicit_action(cert, report)
        _check_explicit_transitivity(cert, report)
        _check_explicit_embedding(cert, report)
    return report


# --- structure ----------------------------------------------------------------


def _check_structure(cert: Certificate, report: VerifyReport) -> bool:
    problems = []
    if cert.version != 1:
        problems.append(f"unsupported version {cert.version}")
    if len(cert.embedding_map) != cert.x.n:
        problems.append("embedding map length differs from |X|")
    gens = cert.gens if cert.gens is not None else cert.amplified_gens
    if len(cert.gen_map) != len(gens):
        problems.append("gen_map length differs from generator count")
    elif len(set(cert.gen_map)) != len(cert.gen_map):
        problems.append("duplicate generator labels")
    if cert.is_implicit:
        yi = cert.y_implicit
        n = cert.x.n
        o1, o2 = set(yi.orbit1), set(yi.orbit2)
        if o1 & o2 or o1 | o2 != set(range(n)) or not o1 or not o2:
            problems.append("orbit labels do not partition the base indices")
        if yi.r not in (1, 2):
            problems.append(f"orbit-count parameter r = {yi.r} outside {{1, 2}}")
        if not groupspec.is_prime(yi.q):
            problems.append(f"q = {yi.q} is not prime")
        if len(yi.base_point) != yi.q:
            problems.append("base point has wrong arity")
        expected = (
            math.comb(yi.q, yi.r) * len(o1) ** yi.r * len(o2) ** (yi.q - yi.r)
            if not problems
            else None
        )
        if expected is not None and expected != yi.size:
            problems.append(f"size {yi.size} differs from counting formula {expected}")
        for el in cert.amplified_gens:
            if len(el.slots) != yi.q:
                problems.append("amplified generator has wrong slot count")
                break
            if el.phi[0] % yi.q == 0:
                problems.append("position map is not invertible")
                break
            if any(s.degree != n for s in el.slots):
                problems.append("slot permutation degree differs from |X|")
                break
        for i, v in enumerate(cert.embedding_map):
            if len(v) != yi.q or any(not (0 <= t < n) for t in v):
                problems.append(f"embedding image {i} is not a valid tuple over X")
                break
    else:
        if any(not (0 <= t < cert.y.n) for t in cert.embedding_map):
            problems.append("embedding map target out of range")
        if cert.x.kind != cert.y.kind:
            problems.append("X and Y use different scalar kinds")
        if any(g.degree != cert.y.n for g in cert.gens):
            problems.append("generator degree differs from |Y|")
    for p in problems:
        report.add("structure", False, p)
    if not problems:
        report.add("structure", True, "shapes, labels and sizes consistent")
    return not problems


# --- solubility -----------------------------------------------------------------


def _check_solubility(cert: Certificate, report: VerifyReport):
    problems = groupspec.check_proof(cert.spec, cert.solubility)
    if problems:
        for p in problems:
            report.add("solubility", False, p)
    else:
        report.add("solubility", True, "proof tree re-verified")


# --- group consistency ----------------------------------------------------------


def _labeled(cert: Certificate) -> dict | None:
    if cert.gens is None:
        return None
    expected = groupspec.spec_generator_labels(cert.spec)
    if sorted(expected) != sorted(cert.gen_map):
        return None
    return dict(zip(cert.gen_map, cert.gens))


def _check_group(cert: Certificate, report: VerifyReport):
    if cert.is_implicit:
        _check_group_implicit(cert, report)
        return
    labeled = _labeled(cert)
    if labeled is None:
        report.add("group", False, "generator labels do not match the spec")
        return
    problems = groupspec.check_spec_relations(cert.spec, labeled)
    if not problems:
        report.add("group", True, "defining relations hold")
        return
    if _twisted_signed_product_ok(cert.spec, labeled):
        report.add(
            "group", True,
            "sign part is normalized by the position part (soluble extension)",
        )
        return
    for p in problems:
        report.add("group", False, p)


def _twisted_signed_product_ok(spec, labeled) -> bool:
    """Accept DirectProduct(A, C2Power(d)) where the position maps permute the
    sign flips instead of commuting with them.

    The flips must be commuting involutions (their closure N is elementary
    abelian) and every conjugate of a flip by an A-generator must land in N;
    then the whole group is an extension of N by a quotient of A, soluble
    whenever A is.
    """
    if not isinstance(spec, groupspec.DirectProduct) or len(spec.factors) != 2:
        return False
    head, flips_spec = spec.factors
    if not isinstance(flips_spec, groupspec.C2Power):
        return False
    head_labels = groupspec.spec_generator_labels(head, "0.")
    flip_labels = groupspec.spec_generator_labels(flips_spec, "1.")
    head_gens = [labeled[lbl] for lbl in head_labels]
    flips = [labeled[lbl] for lbl in flip_labels]
    if groupspec.check_spec_relations(head, labeled, prefix="0."):
        return False
    for f in flips:
        if not (f * f).is_identity():
            return False
    for a, b in itertools.combinations(flips, 2):
        if a * b != b * a:
            return False
    if not flips:
        return True
    degree = flips[0].degree
    if (1 << len(flips)) > FLIP_CLOSURE_CAP:
        return False
    try:
        closure = enumerate_group(flips, cap=FLIP_CLOSURE_CAP, degree=degree)
    except CapExceeded:
        return False
    return all(
        (a * f * a.inverse()) in closure for a in head_gens for f in flips
    )


def _implicit_base_group(cert: Certificate):
    """The enumerated slotwise group claimed by an amplified certificate."""
    spec = cert.spec
    if (
        not isinstance(spec, groupspec.DirectProduct)
        or len(spec.factors) != 2
        or not isinstance(spec.factors[0], groupspec.AGL1)
        or not isinstance(spec.factors[1], groupspec.Power)
        or not isinstance(spec.factors[1].base, groupspec.Enumerated)
    ):
        return None
    return spec.factors[1].base


def _check_group_implicit(cert: Certificate, report: VerifyReport):
    yi = cert.y_implicit
    base = _implicit_base_group(cert)
    if base is None:
        report.add("group", False, "amplified spec must be AGL1 x Enumerated^q")
        return
    if cert.spec.factors[0].p != yi.q or cert.spec.factors[1].exp != yi.q:
        report.add("group", False, "spec arity differs from q")
        return
    try:
        group = base.permgroup()
    except Exception as exc:  # noqa: BLE001
        report.add("group", False, f"cannot enumerate the slotwise group ({exc})")
        return
    if group.degree != cert.x.n:
        report.add("group", False, "slotwise group degree differs from |X|")
        return
    for gi, el in enumerate(cert.amplified_gens):
        for k, s in enumerate(el.slots):
            if s not in group:
                report.add(
                    "group", False,
                    f"generator {gi} slot {k} is outside the claimed group",
                )
                return
    report.add("group", True, "position maps affine, slot entries in the claimed group")


# --- explicit certificates -------------------------------------------------------


def _explicit_action(cert: Certificate) -> Action:
    return Action(cert.y, cert.gens, cert.spec, cert.gen_map)


def _check_explicit_action(cert: Certificate, report: VerifyReport):
    n = cert.y.n
    full = n <= ISOMETRY_FULL_LIMIT
    seed = cert.transitivity.seed or 0
    res = check_action(
        _explicit_action(cert),
        pair_limit=None if full else SAMPLED_PAIRS,
        seed=seed,
    )
    mode = "full pair sweep" if full else f"{SAMPLED_PAIRS} sampled pairs per generator"
    if res.ok:
        detail = f"isometric bijections ({mode})"
        if res.max_residual is not None:
            detail += f", max residual {res.max_residual:.3g}"
        report.add("action", True, detail)
    else:
        gi, i, j, why = res.failures[0]
        report.add("action", False, f"generator {gi} on pair ({i},{j}): {why}")


def _check_explicit_transitivity(cert: Certificate, report: VerifyReport):
    parts = orbits(_explicit_action(cert))
    if len(parts) == 1:
        report.add("transitivity", True, "single orbit under the generators")
    else:
        report.add("transitivity", False, f"{len(parts)} orbits, sizes {[len(p) for p in parts]}")


def _check_explicit_embedding(cert: Certificate, report: VerifyReport):
    ok, resid, witness = embedding_residual(
        cert.x, cert.y, cert.embedding_map, cert.scale_sq
    )
    if ok:
        detail = "scaled-distance identity holds on all pairs"
        if resid is not None:
            detail += f", max residual {resid:.3g}"
        report.add("embedding", True, detail)
    else:
        report.add("embedding", False, f"identity fails at {witness}")


# --- implicit (amplified) certificates --------------------------------------------


def _check_implicit(cert: Certificate, report: VerifyReport, escalate, cap):
    yi = cert.y_implicit
    x = cert.x
    n = x.n
    in_o1 = [False] * n
    for i in yi.orbit1:
        in_o1[i] = True

    base_spec = _implicit_base_group(cert)
    if base_spec is None:
        return  # group clause already failed
    ggens = list(base_spec.generators)

    # slotwise generators must act by isometries on X; membership (group
    # clause) then extends this to every slot entry.
    m = x.sqdist_matrix()
    for g in ggens:
        for i in range(n):
            for j in range(i + 1, n):
                if m[g(i)][g(j)] != m[i][j]:
                    report.add("action", False, f"slot generator breaks distance ({i},{j})")
                    return
    # orbits of the slotwise group must be exactly the labelled ones
    parts = orbits(Action(x, tuple(ggens)))
    labelled = sorted((tuple(sorted(yi.orbit1)), tuple(sorted(yi.orbit2))))
    if sorted(tuple(p) for p in parts) != labelled:
        report.add("action", False, "slotwise orbits differ from the labels")
        return

    base = yi.base_point
    if any(not in_o1[base[i]] for i in range(yi.r)) or any(
        base[i] != base[0] for i in range(yi.r)
    ):
        report.add("action", False, "base point head is not a repeated first-orbit point")
        return
    if yi.q > yi.r and any(
        in_o1[base[i]] or base[i] != base[yi.r] for i in range(yi.r, yi.q)
    ):
        report.add("action", False, "base point tail is not a repeated second-orbit point")
        return
    report.add("action", True, "slot generators isometric; orbit labels re-derived")

    # transporters within each orbit, built from the certificate's own data
    transporter = _transporters(ggens, n)

    def witness_for(target):
        positions = [j for j in range(yi.q) if in_o1[target[j]]]
        if len(positions) != yi.r:
            return None
        if yi.r == 1:
            c, e = 1, positions[0]
        else:
            t, u = positions
            c = (u - t) % yi.q
            e = t
        cinv = pow(c, -1, yi.q)
        slots = []
        for j in range(yi.q):
            src = base[(cinv * (j - e)) % yi.q]
            g = transporter.get((src, target[j]))
            if g is None:
                return None
            slots.append(g)
        return (c, e, cinv), slots

    def apply_witness(w):
        (c, e, cinv), slots = w
        return tuple(slots[j][base[(cinv * (j - e)) % yi.q]] for j in range(yi.q))

    seed = cert.transitivity.seed if cert.transitivity.seed is not None else 0
    count = cert.transitivity.n or DEFAULT_WITNESS_SAMPLES

    if escalate == "full" or cert.transitivity.mode == "witness-full":
        ok = _full_sweep(cert, report, in_o1, witness_for, apply_witness, cap)
        if not ok:
            return
    else:
        rng = random.Random(seed)
        o1l, o2l = list(yi.orbit1), list(yi.orbit2)
        checked = 0
        for _ in range(count):
            target = _sample_member(rng, yi.q, yi.r, o1l, o2l)
            w = witness_for(target)
            if w is None or apply_witness(w) != target:
                report.add("transitivity", False, f"no witness carries base to {target}")
                return
            for el in cert.amplified_gens:
                image = el.apply(target)
                if sum(in_o1[v] for v in image) != yi.r:
                    report.add("action", False, "generator image leaves the set")
                    return
            checked += 1
        for v in cert.embedding_map:
            for el in cert.amplified_gens:
                if sum(in_o1[t] for t in el.apply(v)) != yi.r:
                    report.add("action", False, "generator image of a copy point leaves the set")
                    return
        report.add(
            "transitivity", True,
            f"{checked} seeded witnesses re-derived and applied (seed {seed})",
        )

    _check_implicit_embedding(cert, report, in_o1)


def _transporters(ggens, n):
    """BFS transporter table: (a, b) -> group element with element(a) = b,
    one per reachable pair, as image arrays composed from the generators."""
    table = {}
    for start in range(n):
        if (start, start) in table:
            continue
        ident = tuple(range(n))
        table[(start, start)] = ident
        frontier = [start]
        while frontier:
            new = []
            for u in frontier:
                gu = table[(start, u)]
                for g in ggens:
                    v = g(u)
                    if (start, v) not in table:
                        # compose: first gu, then g
                        table[(start, v)] = tuple(g.images[gu[i]] for i in range(n))
                        new.append(v)
            frontier = new
    return {(a, b): images for (a, b), images in table.items()}


def _sample_member(rng, q, r, o1l, o2l):
    positions = set(rng.sample(range(q), r))
    return tuple(
        o1l[rng.randrange(len(o1l))] if j in positions else o2l[rng.randrange(len(o2l))]
        for j in range(q)
    )


def _full_sweep(cert, report, in_o1, witness_for, apply_witness, cap) -> bool:
    yi = cert.y_implicit
    if yi.size > cap:
        report.add(
            "transitivity", False,
            f"full sweep requested but |Y| = {yi.size} exceeds cap {cap}",
        )
        return False
    members = []
    o1l, o2l = list(yi.orbit1), list(yi.orbit2)
    for positions in itertools.combinations(range(yi.q), yi.r):
        pos = set(positions)
        pools = [o1l if j in pos else o2l for j in range(yi.q)]
        members.extend(itertools.product(*pools))
    if len(members) != yi.size:
        report.add("transitivity", False, "materialized size differs from formula")
        return False
    members.sort()
    index = {pt: i for i, pt in enumerate(members)}

    parent = list(range(len(members)))

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    q = yi.q
    for el in cert.amplified_gens:
        c, e = el.phi
        cinv = pow(c, -1, q)
        pull = [(cinv * (j - e)) % q for j in range(q)]
        slot_images = [s.images for s in el.slots]
        for i, pt in enumerate(members):
            image = tuple(slot_images[j][pt[pull[j]]] for j in range(q))
            j = index.get(image)
            if j is None:
                report.add("action", False, f"generator image {image} leaves the set")
                return False
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    roots = {find(i) for i in range(len(members))}
    if len(roots) != 1:
        report.add("transitivity", False, f"{len(roots)} orbits in the materialized set")
        return False
    for pt in members:
        w = witness_for(pt)
        if w is None or apply_witness(w) != pt:
            report.add("transitivity", False, f"no witness carries base to {pt}")
            return False
    report.add(
        "transitivity", True,
        f"full sweep over {yi.size} members: closure, single orbit, all witnesses",
    )
    return True


def _check_implicit_embedding(cert: Certificate, report: VerifyReport, in_o1):
    yi = cert.y_implicit
    x = cert.x
    # membership of the scaled copy: exactly r entries in the first orbit
    for i, v in enumerate(cert.embedding_map):
        if sum(in_o1[t] for t in v) != yi.r:
            report.add("embedding", False, f"copy point {i} has wrong orbit count")
            return
    # the copy must come from the recorded coset representatives plus padding
    reps = yi.coset_reps
    m = x.sqdist_matrix()
    for f in reps:
        if f.degree != x.n:
            report.add("embedding", False, "coset representative degree mismatch")
            return
        for i in range(x.n):
            for j in range(i + 1, x.n):
                if m[f(i)][f(j)] != m[i][j]:
                    report.add("embedding", False, "coset representative is not an isometry")
                    return
    for i, v in enumerate(cert.embedding_map):
        want = tuple(f(i) for f in reps) + (yi.z,) * (yi.q - len(reps))
        if v != want:
            report.add("embedding", False, f"copy point {i} differs from coset translates")
            return
    # scaled-distance identity, exact: sum of slotwise distances = s * distance
    scale = cert.scale_sq
    expected_scale = scalar.scalar_of(len(reps), x.kind)
    if scale != expected_scale:
        report.add("embedding", False, f"scale {scale} differs from coset count {len(reps)}")
        return
    for i in range(x.n):
        vi = cert.embedding_map[i]
        for j in range(i + 1, x.n):
            vj = cert.embedding_map[j]
            total = m[vi[0]][vj[0]]
            for k in range(1, yi.q):
                total = total + m[vi[k]][vj[k]]
            if total != scale * m[i][j]:
                report.add("embedding", False, f"scaled identity fails at pair ({i},{j})")
                return
    report.add("embedding", True, "coset-translate copy verified, identity exact")
