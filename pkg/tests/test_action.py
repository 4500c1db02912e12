import itertools
from fractions import Fraction

import pytest

from solubleset.action import Action, check_action, is_transitive, orbits, stabilizer_order
from solubleset.errors import NotDivisible
from solubleset.geometry import PointSet
from solubleset.perm import Perm

F = Fraction


def cube3():
    pts = sorted(itertools.product((F(-1), F(1)), repeat=3))
    ps = PointSet("rational", pts)
    index = {p: i for i, p in enumerate(pts)}
    gens = []
    for m in range(3):
        def flip(p, m=m):
            q = list(p)
            q[m] = -q[m]
            return tuple(q)

        gens.append(Perm(tuple(index[flip(p)] for p in pts)))
    return Action(ps, gens, gen_map=tuple(f"flip{m}" for m in range(3)))


def test_cube_action_passes():
    report = check_action(cube3())
    assert report.ok and not report.failures


def test_broken_generator_fails_with_witness():
    a = cube3()
    images = list(a.gens[0].images)
    # swap images of two vertices at different distances: breaks isometry
    images[0], images[1] = images[1], images[0]
    bad = Action(a.pointset, (Perm(tuple(images)),) + a.gens[1:])
    report = check_action(bad)
    assert not report.ok
    gi, i, j, _ = report.failures[0]
    assert gi == 0 and i is not None and j is not None


def test_orbits_cube():
    assert orbits(cube3()) == [list(range(8))]
    assert is_transitive(cube3())


def test_orbits_no_generators():
    ps = PointSet("rational", [(F(0),), (F(1),), (F(3),)])
    a = Action(ps, ())
    assert orbits(a) == [[0], [1], [2]]
    assert not is_transitive(a)


def test_two_concentric_squares_not_transitive():
    pts = [
        (F(1), F(0)), (F(0), F(1)), (F(-1), F(0)), (F(0), F(-1)),
        (F(2), F(0)), (F(0), F(2)), (F(-2), F(0)), (F(0), F(-2)),
    ]
    ps = PointSet("rational", pts)
    rot = Perm((1, 2, 3, 0, 5, 6, 7, 4))
    a = Action(ps, (rot,))
    assert orbits(a) == [[0, 1, 2, 3], [4, 5, 6, 7]]
    assert not is_transitive(a)


def test_orbit_sizes_sum():
    a = cube3()
    assert sum(len(o) for o in orbits(a)) == a.pointset.n


def test_stabilizer_order():
    a = cube3()
    assert stabilizer_order(a, 0, 8) == 1  # free and transitive
    with pytest.raises(NotDivisible):
        stabilizer_order(a, 0, 12)


def test_sampled_check_action():
    report = check_action(cube3(), pair_limit=10, seed=1)
    assert report.ok and report.sampled
