"""Isosceles trapezia inside soluble sets.

Every isosceles trapezium ABCD (AD parallel to BC, legs AB and CD equal) is
cyclic.  If the central angle over the leg AB is 2*pi/k for an integer k, the
k-gon through A and B together with its reflection in the perpendicular
bisector of AD is a dihedral-transitive set on the same circle containing all
four vertices.  Otherwise B and C are lowered along their altitudes until the
angle hits 2*pi/k for the smallest admissible k (an intermediate-value
argument: the angle tends to 0 with the height, so a bracketing scan plus
bisection finds the height without assuming monotonicity), and the planar set
for the lowered trapezium is doubled into two parallel layers at heights
+-x, with (2x)^2 compensating the lost leg length.  The doubled set carries
the dihedral action extended by the layer swap.

Rectangles are routed to the exact segment-product construction instead; the
arc construction also works for them and can be forced with route="arc".

All computation here is floating point; certificates record the tolerance and
the achieved residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .certificate import Certificate, Transitivity, product_certificate
from .errors import (
    BisectionFailed,
    CapExceeded,
    DegenerateInput,
    NotIsoscelesTrapezium,
)
from .geometry import PointSet
from .groupspec import C2Power, Dihedral, DirectProduct, prove_soluble
from .perm import Perm
from .scalar import DEFAULT_TOL

PLANAR_ANGLE_TOL = 1e-12
SCAN_BRACKETS = 64
MAX_GON = 200_000


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _norm(u):
    return math.hypot(u[0], u[1])


@dataclass
class Trapezium:
    """Validated trapezium: original points plus the canonical frame.

    roles maps canonical corners (A, B, C, D) to indices into points; in the
    canonical frame A = (-a, 0), B = (-b, h), C = (b, h), D = (a, 0) with
    b <= a and h > 0.
    """

    points: tuple
    tol: float
    roles: tuple[int, int, int, int]
    a: float
    b: float
    h: float
    rectangle: bool
    frame_residual: float

    def canonical_corners(self):
        return ((-self.a, 0.0), (-self.b, self.h), (self.b, self.h), (self.a, 0.0))

    def original_sqdist(self, i: int, j: int) -> float:
        u = _sub(self.points[i], self.points[j])
        return _dot(u, u)


def validate_trapezium(a, b, c, d, tol: float = DEFAULT_TOL) -> Trapezium:
    """Check the defining conditions and canonicalize.

    Labels are swapped so the longer parallel side is AD and B sits left of C;
    rectangles are flagged (they take the product route).  Non-rectangular
    parallelograms fail the leg-symmetry condition: they are not cyclic.
    """
    pts = tuple((float(p[0]), float(p[1])) for p in (a, b, c, d))
    diam = max(_norm(_sub(p, q)) for p in pts for q in pts)
    atol = tol * max(1.0, diam)
    for i in range(4):
        for j in range(i + 1, 4):
            if _norm(_sub(pts[i], pts[j])) <= 10 * atol:
                raise DegenerateInput(f"corners {i} and {j} coincide within tolerance")

    roles = [0, 1, 2, 3]
    if _norm(_sub(pts[2], pts[1])) > _norm(_sub(pts[3], pts[0])):
        roles = [1, 0, 3, 2]  # the longer parallel side becomes AD

    ca, cb_, cc_, cd = (pts[r] for r in roles)
    ad = _sub(cd, ca)
    bc = _sub(cc_, cb_)
    if abs(_cross(ad, bc)) > atol * max(1.0, _norm(ad) * _norm(bc)):
        raise NotIsoscelesTrapezium("AD and BC are not parallel")

    mid = ((ca[0] + cd[0]) / 2.0, (ca[1] + cd[1]) / 2.0)
    u = _sub(cd, ca)
    ulen = _norm(u)
    u = (u[0] / ulen, u[1] / ulen)
    n = (-u[1], u[0])
    hb = _dot(_sub(cb_, mid), n)
    if hb < 0:
        n = (-n[0], -n[1])
        hb = -hb
    hc = _dot(_sub(cc_, mid), n)
    if hb <= 10 * atol or hc <= 10 * atol:
        raise DegenerateInput("B or C lies on the line AD")
    if abs(hb - hc) > atol:
        raise NotIsoscelesTrapezium("B and C are at different heights over AD")

    xb = _dot(_sub(cb_, mid), u)
    xc = _dot(_sub(cc_, mid), u)
    if xb > xc:
        roles[1], roles[2] = roles[2], roles[1]
        xb, xc = xc, xb
        hb, hc = hc, hb
    if abs(xb + xc) > atol:
        # equal legs force mirror symmetry; parallelograms land here too
        raise NotIsoscelesTrapezium("legs AB and CD have different lengths")

    half_base = ulen / 2.0
    half_top = (xc - xb) / 2.0
    height = (hb + hc) / 2.0
    rectangle = abs(half_base - half_top) <= atol
    residual = max(abs(hb - hc), abs(xb + xc))
    return Trapezium(pts, tol, tuple(roles), half_base, half_top, height,
                     rectangle, residual)


@dataclass
class ArcSolution:
    planar: bool
    k: int
    theta0: float
    theta_target: float
    h_prime: float
    x: float
    center: tuple
    radius_sq: float
    residual: float
    iterations: int
    b_prime: tuple
    c_prime: tuple


def _angle_at_height(trap: Trapezium, hp: float) -> tuple[float, tuple, float]:
    """Central angle over A and the lowered B, with centre and squared radius."""
    a, b = trap.a, trap.b
    y0 = (b * b + hp * hp - a * a) / (2.0 * hp)
    va = (-a, -y0)
    vb = (-b, hp - y0)
    theta = abs(math.atan2(_cross(va, vb), _dot(va, vb)))
    return theta, (0.0, y0), a * a + y0 * y0


def solve_arc(trap: Trapezium, k_min: int = 2) -> ArcSolution:
    """Find k and the height h' <= h with central angle exactly 2*pi/k.

    Planar when the original angle is already 2*pi/k (within a tight angular
    tolerance); otherwise k is the smallest integer with 2*pi/k below the
    original angle, and the height is bisected inside the first sign-changing
    bracket from the top of a 64-interval scan.  k_min forces a larger gon
    (used to escape near-coincidence of the mirrored gons).
    """
    theta0, center, r2 = _angle_at_height(trap, trap.h)
    ratio = 2.0 * math.pi / theta0
    k = round(ratio)
    if k >= max(2, k_min) and abs(theta0 - 2.0 * math.pi / k) <= PLANAR_ANGLE_TOL:
        return ArcSolution(True, k, theta0, 2.0 * math.pi / k, trap.h, 0.0,
                           center, r2, abs(theta0 - 2.0 * math.pi / k), 0,
                           (-trap.b, trap.h), (trap.b, trap.h))
    k = max(math.floor(ratio) + 1, k_min)
    if k > MAX_GON:
        raise CapExceeded(f"required gon order {k} exceeds the cap {MAX_GON}")
    target = 2.0 * math.pi / k

    def f(hp):
        return _angle_at_height(trap, hp)[0] - target

    h = trap.h
    hi = h
    fhi = theta0 - target
    assert fhi > 0
    lo = None
    for m in range(SCAN_BRACKETS - 1, -1, -1):
        hp = h * m / SCAN_BRACKETS
        val = f(hp) if hp > 0 else -target
        if val <= 0:
            lo, flo = hp, val
            break
        hi, fhi = hp, val
    if lo is None:
        raise BisectionFailed("no sign change over the height scan")

    iterations = 0
    best_h, best_f = hi, fhi
    while hi - lo > 1e-17 * h and iterations < 200:
        mid = (lo + hi) / 2.0
        val = f(mid) if mid > 0 else -target
        if abs(val) < abs(best_f):
            best_h, best_f = mid, val
        if val <= 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    hp = best_h
    theta, center, r2 = _angle_at_height(trap, hp)
    residual = abs(theta - target)
    if residual > 1e-9:
        raise BisectionFailed(
            f"bisection stalled: angle residual {residual:.3g} at height {hp}"
        )
    lift_sq = (trap.h * trap.h - hp * hp) / 4.0
    x = math.sqrt(max(lift_sq, 0.0))
    return ArcSolution(False, k, theta0, target, hp, x, center, r2, residual,
                       iterations, (-trap.b, hp), (trap.b, hp))


def _rot(point, center, angle):
    c, s = math.cos(angle), math.sin(angle)
    dx, dy = point[0] - center[0], point[1] - center[1]
    return (center[0] + c * dx - s * dy, center[1] + s * dx + c * dy)


class _RetryWithLargerGon(Exception):
    """Mirrored gons neither coincide nor separate cleanly; bump k."""


def _gon_points(trap: Trapezium, sol: ArcSolution):
    """The k-gon through A and B', its mirror, and the special indices.

    Returns (points, rot_perm_images, ref_perm_images, idx) where idx maps
    the corners A, B', C', D to indices.  The mirror gon either coincides
    with the first (as a set, up to float noise) or is disjoint; both cases
    are handled structurally.  D and C' live on the mirror gon as exact sign
    flips, so disjoint-case distances carry no construction error.
    """
    k = sol.k
    ca = (-trap.a, 0.0)
    step = sol.theta_target
    center = sol.center
    radius = math.sqrt(sol.radius_sq)
    # rotation direction that carries A onto B'
    cand_plus = _rot(ca, center, step)
    cand_minus = _rot(ca, center, -step)
    eps = step if _norm(_sub(cand_plus, sol.b_prime)) <= _norm(
        _sub(cand_minus, sol.b_prime)
    ) else -step
    gon = [_rot(ca, center, eps * m) for m in range(k)]

    cd = (trap.a, 0.0)
    # D = mirror(A); the mirror gon coincides with the first iff D is on it
    m0 = min(range(k), key=lambda m: _norm(_sub(gon[m], cd)))
    dmin = _norm(_sub(gon[m0], cd))
    coincide_eps = 1e-12 * max(1.0, radius)
    if dmin <= coincide_eps:
        points = gon
        rot = [(m + 1) % k for m in range(k)]
        ref = [(m0 - m) % k for m in range(k)]
        idx = {"A": 0, "B": 1, "C": (m0 - 1) % k, "D": m0}
    elif dmin > 20.0 * trap.tol:  # clears the 10*tol point-distinctness floor
        mirror = [(-p[0], p[1]) for p in gon]
        points = gon + mirror
        rot = [(m + 1) % k for m in range(k)] + [k + (m - 1) % k for m in range(k)]
        ref = [k + m for m in range(k)] + list(range(k))
        idx = {"A": 0, "B": 1, "C": k + 1, "D": k}
    else:
        raise _RetryWithLargerGon
    return points, rot, ref, idx


def build_trapezium_certificate(trap: Trapezium, route: str = "auto") -> Certificate:
    """Certificate that the trapezium lies in a dihedral-transitive set.

    route "auto" sends rectangles through the exact segment product; "arc"
    forces the circle construction (valid for rectangles as well).
    """
    if route not in ("auto", "arc"):
        raise ValueError(f"unknown route {route!r}")
    if trap.rectangle and route == "auto":
        return _rectangle_certificate(trap)

    k_min = 2
    for _ in range(8):
        sol = solve_arc(trap, k_min=k_min)
        try:
            points, rot, ref, idx = _gon_points(trap, sol)
            break
        except _RetryWithLargerGon:
            k_min = sol.k + 1
    else:
        raise BisectionFailed("mirrored gons refuse to separate; giving up")
    lifted = not sol.planar and sol.x > 10 * trap.tol
    m = len(points)

    if lifted:
        x = sol.x
        coords = [(p[0], p[1], x) for p in points] + [(p[0], p[1], -x) for p in points]
        gens = (
            Perm(tuple(rot) + tuple(m + r for r in rot)),
            Perm(tuple(ref) + tuple(m + r for r in ref)),
            Perm(tuple(range(m, 2 * m)) + tuple(range(m))),
        )
        gen_map = ("0.rot", "0.ref", "1.flip0")
        spec = DirectProduct((Dihedral(sol.k), C2Power(1)))
        mapping = {"A": idx["A"], "D": idx["D"], "B": m + idx["B"], "C": m + idx["C"]}
    else:
        coords = points
        gens = (Perm(tuple(rot)), Perm(tuple(ref)))
        gen_map = ("rot", "ref")
        spec = Dihedral(sol.k)
        mapping = dict(idx)

    y = PointSet("float", coords, tol=trap.tol)
    emb = [0] * 4
    for role, label in enumerate("ABCD"):
        emb[trap.roles[role]] = mapping[label]
    x_set = PointSet("float", trap.points, tol=trap.tol)

    emb_residual = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            want = math.sqrt(trap.original_sqdist(i, j))
            got = math.sqrt(y.sqdist(emb[i], emb[j]))
            emb_residual = max(emb_residual, abs(want - got))
    radius = math.sqrt(sol.radius_sq)
    circle_residual = max(
        abs(math.hypot(p[0] - sol.center[0], p[1] - sol.center[1]) - radius)
        for p in points
    )
    residuals = {
        "embedding": emb_residual,
        "circle": circle_residual,
        "angle": sol.residual,
    }
    notes = [
        f"gon order {sol.k}, central angle target 2*pi/{sol.k}",
        f"planar: {sol.planar}; lowered height {sol.h_prime:.17g}; layer offset {sol.x:.17g}",
    ]
    return Certificate(
        x=x_set,
        y=y,
        embedding_map=tuple(emb),
        scale_sq=1.0,
        gens=gens,
        gen_map=gen_map,
        spec=spec,
        solubility=prove_soluble(spec),
        transitivity=Transitivity("orbit"),
        notes=tuple(notes),
        residuals=residuals,
    )


def _segment_certificate(length: float, tol: float) -> Certificate:
    ps = PointSet("float", [(0.0,), (length,)], tol=tol)
    spec = C2Power(1)
    return Certificate(
        x=ps,
        y=ps,
        embedding_map=(0, 1),
        scale_sq=1.0,
        gens=(Perm((1, 0)),),
        gen_map=("flip0",),
        spec=spec,
        solubility=prove_soluble(spec),
        transitivity=Transitivity("orbit"),
        residuals={"embedding": 0.0},
    )


def _rectangle_certificate(trap: Trapezium) -> Certificate:
    """Exact product of two segments; corners are matched by their distances."""
    w = 2.0 * trap.a
    h = trap.h
    prod = product_certificate(
        _segment_certificate(w, trap.tol), _segment_certificate(h, trap.tol)
    )
    # product point order: (0,0), (0,h), (w,0), (w,h)
    corner = {"A": 0, "B": 1, "C": 3, "D": 2}
    emb = [0] * 4
    for role, label in enumerate("ABCD"):
        emb[trap.roles[role]] = corner[label]
    x_set = PointSet("float", trap.points, tol=trap.tol)
    emb_residual = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            want = math.sqrt(trap.original_sqdist(i, j))
            got = math.sqrt(prod.y.sqdist(emb[i], emb[j]))
            emb_residual = max(emb_residual, abs(want - got))
    return Certificate(
        x=x_set,
        y=prod.y,
        embedding_map=tuple(emb),
        scale_sq=1.0,
        gens=prod.gens,
        gen_map=prod.gen_map,
        spec=prod.spec,
        solubility=prod.solubility,
        transitivity=Transitivity("orbit"),
        notes=("rectangle routed through the segment product",),
        residuals={"embedding": emb_residual},
    )
