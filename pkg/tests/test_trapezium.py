import math
import random

import pytest

from solubleset.action import Action, check_action, is_transitive
from solubleset.errors import (
    BisectionFailed,
    DegenerateInput,
    NotIsoscelesTrapezium,
)
from solubleset.trapezium import (
    build_trapezium_certificate,
    solve_arc,
    validate_trapezium,
)
from solubleset.verify import verify_certificate

TRAP = ((-2.0, 0.0), (-1.0, 1.0), (1.0, 1.0), (2.0, 0.0))


def rigid(points, angle, shift):
    c, s = math.cos(angle), math.sin(angle)
    return [
        (c * x - s * y + shift[0], s * x + c * y + shift[1]) for x, y in points
    ]


def random_trapezium(rng):
    a = rng.uniform(0.5, 2.0)
    b = rng.uniform(0.05, a * 0.9)
    h = rng.uniform(0.1, 1.5)
    pts = [(-a, 0.0), (-b, h), (b, h), (a, 0.0)]
    return rigid(pts, rng.uniform(0, 2 * math.pi), (rng.uniform(-5, 5), rng.uniform(-5, 5)))


def test_validate_example():
    trap = validate_trapezium(*TRAP)
    assert not trap.rectangle
    assert math.isclose(trap.a, 2.0) and math.isclose(trap.b, 1.0)
    assert math.isclose(trap.h, 1.0)


def test_validate_rectangle_flag():
    trap = validate_trapezium((0.0, 0.0), (0.0, 1.0), (3.0, 1.0), (3.0, 0.0))
    assert trap.rectangle


def test_validate_rejects_collinear():
    with pytest.raises(DegenerateInput):
        validate_trapezium((0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0))


def test_validate_rejects_non_parallel():
    with pytest.raises(NotIsoscelesTrapezium):
        validate_trapezium((-2.0, 0.0), (-1.0, 1.0), (1.0, 1.5), (2.0, 0.0))


def test_validate_rejects_skew_parallelogram():
    with pytest.raises(NotIsoscelesTrapezium):
        validate_trapezium((0.0, 0.0), (1.0, 1.0), (4.0, 1.0), (3.0, 0.0))


def test_validate_swaps_long_base():
    # BC longer than AD: labels swap so the long side becomes the base
    trap = validate_trapezium((-1.0, 1.0), (-2.0, 0.0), (2.0, 0.0), (1.0, 1.0))
    assert math.isclose(trap.a, 2.0) and math.isclose(trap.b, 1.0)
    assert trap.roles == (1, 0, 3, 2)


def test_validate_rotated_translated():
    pts = rigid(TRAP, 0.7, (3.0, -4.0))
    trap = validate_trapezium(*pts)
    assert math.isclose(trap.a, 2.0, abs_tol=1e-12)
    assert math.isclose(trap.h, 1.0, abs_tol=1e-12)


def test_solve_arc_square_planar():
    # square as a trapezium: the central angle is pi/2 = 2*pi/4 exactly
    trap = validate_trapezium((-1.0, 0.0), (-1.0, 2.0), (1.0, 2.0), (1.0, 0.0))
    assert trap.rectangle
    sol = solve_arc(trap)
    assert sol.planar and sol.k == 4


def test_solve_arc_example_k10():
    trap = validate_trapezium(*TRAP)
    sol = solve_arc(trap)
    assert not sol.planar
    assert math.isclose(sol.theta0, math.acos(0.8), abs_tol=1e-12)
    assert sol.k == 10
    assert sol.residual < 1e-9
    assert 0 < sol.h_prime < 1.0
    assert sol.x == math.sqrt(1.0 - sol.h_prime**2) / 2.0
    # independent recheck of the angle at the found height
    b, a = 1.0, 2.0
    hp = sol.h_prime
    y0 = (b * b + hp * hp - a * a) / (2 * hp)
    va = (-a - 0.0, -y0)
    vb = (-b - 0.0, hp - y0)
    cosang = (va[0] * vb[0] + va[1] * vb[1]) / (math.hypot(*va) * math.hypot(*vb))
    assert abs(math.acos(cosang) - 2 * math.pi / 10) < 1e-9


def test_solve_arc_thin_stress():
    trap = validate_trapezium((-2.0, 0.0), (-1.0, 1e-6), (1.0, 1e-6), (2.0, 0.0))
    sol = solve_arc(trap)
    assert sol.k > 1000
    assert sol.residual < 1e-9


def test_certificate_example_trapezium():
    trap = validate_trapezium(*TRAP)
    cert = build_trapezium_certificate(trap)
    assert cert.y.n <= 4 * 10
    assert cert.y.dim == 3  # lifted
    assert cert.residuals["embedding"] < 1e-8
    assert cert.residuals["circle"] < 1e-8
    report = verify_certificate(cert)
    assert report.passed, report.summary()
    # the lifted diagonal identity |AC|^2 - |AC'|^2 = 4x^2
    sol = solve_arc(trap)
    ac = math.dist(TRAP[0], TRAP[2])
    acp = math.dist((-2.0, 0.0), (1.0, sol.h_prime))
    assert abs(ac * ac - acp * acp - 4 * sol.x * sol.x) < 1e-9


def test_certificate_square_planar_route():
    square = ((-1.0, 0.0), (-1.0, 2.0), (1.0, 2.0), (1.0, 0.0))
    trap = validate_trapezium(*square)
    cert = build_trapezium_certificate(trap, route="arc")
    assert cert.y.n <= 8  # the two 4-gons coincide
    assert cert.y.dim == 2
    assert verify_certificate(cert).passed


def test_certificate_rectangle_product_route():
    rect = ((0.0, 0.0), (0.0, 1.0), (3.0, 1.0), (3.0, 0.0))
    cert = build_trapezium_certificate(validate_trapezium(*rect))
    assert cert.y.n == 4
    assert cert.residuals["embedding"] < 1e-12
    assert any("rectangle" in n for n in cert.notes)
    report = verify_certificate(cert)
    assert report.passed, report.summary()


def test_certificate_thin_case():
    trap = validate_trapezium((-2.0, 0.0), (-1.0, 1e-3), (1.0, 1e-3), (2.0, 0.0))
    cert = build_trapezium_certificate(trap)
    assert cert.residuals["embedding"] < 1e-8
    assert cert.residuals["circle"] < 1e-8
    assert verify_certificate(cert).passed


def test_certificates_random_batch():
    rng = random.Random(20240818)
    for _ in range(25):
        trap = validate_trapezium(*random_trapezium(rng))
        cert = build_trapezium_certificate(trap)
        assert cert.residuals["embedding"] < 1e-8
        assert cert.residuals["circle"] < 1e-8
        act = Action(cert.y, cert.gens)
        assert is_transitive(act)


def test_monotone_refinement_k_stable():
    # halving the tolerance must not change k: k is fixed by the initial angle
    trap = validate_trapezium(*TRAP)
    k1 = solve_arc(trap).k
    trap2 = validate_trapezium(*TRAP, tol=0.5e-9)
    assert solve_arc(trap2).k == k1


def test_dihedral_action_well_defined():
    trap = validate_trapezium(*TRAP)
    cert = build_trapezium_certificate(trap)
    report = check_action(Action(cert.y, cert.gens))
    assert report.ok
    assert report.max_residual < 1e-10
