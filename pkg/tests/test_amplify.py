import random

import pytest

from solubleset.amplify import (
    AmplifiedFamily,
    amplify_witness,
    coset_rep_padding_check,
    two_orbit_amplify,
)
from solubleset.catalog import TwoOrbitInput, dodecahedron_input, hexagon_input
from solubleset.certificate import emit_json, parse_json
from solubleset.errors import NotPrime, QTooSmall, RatioOutOfRange
from solubleset.groupspec import spec_order
from solubleset.perm import Perm, enumerate_group
from solubleset.scalar import GoldenRational
from solubleset.verify import verify_certificate


@pytest.fixture(scope="module")
def dodeca():
    return dodecahedron_input()


@pytest.fixture(scope="module")
def hexagon():
    return hexagon_input()


def test_family_numbers_dodecahedron(dodeca):
    fam = AmplifiedFamily(dodeca, 5)
    assert fam.r == 2 and fam.s == 5
    assert fam.size() == 1_105_920
    assert len(fam.coset_reps) == 5
    assert fam.coset_reps[0].is_identity()


def test_family_numbers_hexagon(hexagon):
    fam = AmplifiedFamily(hexagon, 3)
    assert fam.r == 1 and fam.s == 2
    assert fam.size() == 3 * 3 * 9 == 81


def test_padding_check(dodeca, hexagon):
    rep = coset_rep_padding_check(dodeca, 5)
    assert rep.ok and rep.counts == [2] * 20
    rep = coset_rep_padding_check(hexagon, 3)
    assert rep.ok and rep.counts == [1] * 6


def test_padding_check_detects_corrupt_labels(dodeca):
    corrupt = TwoOrbitInput(
        "bad", dodeca.pointset, dodeca.h, dodeca.g, dodeca.g_spec, dodeca.g_proof,
        dodeca.o1, dodeca.o2, dodeca.r, dodeca.s,
    )
    # swap one index between the orbits: the subgroup-orbit check fires
    o1 = list(corrupt.o1)
    o2 = list(corrupt.o2)
    o1[0], o2[0] = o2[0], o1[0]
    corrupt.o1, corrupt.o2 = tuple(o1), tuple(o2)
    with pytest.raises(RatioOutOfRange):
        coset_rep_padding_check(corrupt, 5)


def test_q_validation(dodeca):
    with pytest.raises(NotPrime):
        AmplifiedFamily(dodeca, 6)
    with pytest.raises(QTooSmall):
        AmplifiedFamily(dodeca, 3)


def test_one_orbit_toy_input_rejected():
    # rotations of the square acting transitively: only one orbit
    rot = Perm((1, 2, 3, 0))
    c4 = enumerate_group([rot])
    from fractions import Fraction as F

    from solubleset.geometry import PointSet
    from solubleset.groupspec import enumerated_from_group, prove_soluble

    square = PointSet(
        "rational", [(F(1), F(0)), (F(0), F(1)), (F(-1), F(0)), (F(0), F(-1))]
    )
    spec = enumerated_from_group(c4)
    inp = TwoOrbitInput(
        "square", square, c4, c4, spec, prove_soluble(spec),
        (0, 1, 2, 3), (), 1, 1,
    )
    with pytest.raises(RatioOutOfRange):
        AmplifiedFamily(inp, 5)


def test_witness_base_is_identity_like(dodeca):
    fam = AmplifiedFamily(dodeca, 5)
    el = fam.witness(fam.base_point)
    assert el.apply(fam.base_point) == fam.base_point


def test_witness_sampled_targets(dodeca):
    fam = AmplifiedFamily(dodeca, 5)
    rng = random.Random(7)
    for _ in range(500):
        target = fam.random_member(rng)
        el = fam.witness(target)
        assert el.apply(fam.base_point) == target
        # every slot entry belongs to the claimed soluble subgroup
        for s in el.slots:
            assert s in dodeca.g


def test_witness_position_map_r2(dodeca):
    fam = AmplifiedFamily(dodeca, 5)
    target = (
        dodeca.o2[0], dodeca.o1[2], dodeca.o2[1], dodeca.o1[1], dodeca.o2[5],
    )
    el = fam.witness(target)
    pm = el.position_map()
    assert pm[0] == 1 and pm[1] == 3  # base head goes to the first-orbit slots
    assert el.apply(fam.base_point) == target


def test_scaled_embedding_identity_exact(dodeca):
    fam = AmplifiedFamily(dodeca, 5)
    ps = dodeca.pointset
    m = ps.sqdist_matrix()
    five = GoldenRational.of(5)
    emb = fam.embed_map()
    for i in range(ps.n):
        for j in range(i + 1, ps.n):
            total = None
            for a, b in zip(emb[i], emb[j]):
                total = m[a][b] if total is None else total + m[a][b]
            assert total == five * m[i][j]


def test_certificate_sampled_verifies(hexagon):
    cert = two_orbit_amplify(hexagon, 3, mode="sample", n=500, seed=11)
    assert spec_order(cert.spec) == 3 * 2 * 3**3
    report = verify_certificate(cert)
    assert report.passed, report.summary()


def test_certificate_full_verifies(hexagon):
    cert = two_orbit_amplify(hexagon, 3, mode="full")
    report = verify_certificate(cert, escalate="full")
    assert report.passed, report.summary()


def test_hexagon_q2_edge(hexagon):
    # q equal to the coset count: the copy has no padding entries
    cert = two_orbit_amplify(hexagon, 2, mode="full")
    assert any("no constant padding" in n for n in cert.notes)
    assert verify_certificate(cert, escalate="full").passed


def test_amplified_json_round_trip(hexagon):
    cert = two_orbit_amplify(hexagon, 3, mode="sample", n=100, seed=3)
    data = emit_json(cert)
    back = parse_json(data)
    assert emit_json(back) == data
    assert verify_certificate(back).passed


def test_amplify_witness_function(dodeca):
    fam = AmplifiedFamily(dodeca, 5)
    rng = random.Random(0)
    target = fam.random_member(rng)
    el = amplify_witness(dodeca, 5, target)
    assert el.apply(fam.base_point) == target
