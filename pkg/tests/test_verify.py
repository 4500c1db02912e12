import random
from fractions import Fraction

import pytest

from mutation_utils import mutate_certificate_obj, rejection_reason

from solubleset.amplify import two_orbit_amplify
from solubleset.blockset import signed_perm_certificate
from solubleset.catalog import (
    catalog_build,
    catalog_certificate,
    hexagon_input,
    icosahedron,
)
from solubleset.certificate import certificate_to_obj
from solubleset.geometry import symmetry_group
from solubleset.groupspec import EnumeratedLeaf, enumerated_from_group
from solubleset.trapezium import build_trapezium_certificate, validate_trapezium
from solubleset.verify import verify_certificate

F = Fraction


@pytest.fixture(scope="module")
def class_certificates():
    trap = validate_trapezium((-2.0, 0.0), (-1.0, 1.0), (1.0, 1.0), (2.0, 0.0))
    rect = validate_trapezium((0.0, 0.0), (0.0, 1.0), (3.0, 1.0), (3.0, 0.0))
    return {
        "catalog-cube": catalog_certificate(catalog_build("cube", d=2)),
        "catalog-icosahedron": catalog_certificate(icosahedron()),
        "blockset": signed_perm_certificate(F(1), F(2), F(3), ell=0),
        "amplified": two_orbit_amplify(hexagon_input(), 3, mode="sample", n=200, seed=5),
        "trapezium": build_trapezium_certificate(trap),
        "product": build_trapezium_certificate(rect),
    }


def test_unmutated_certificates_accepted(class_certificates):
    for name, cert in class_certificates.items():
        assert rejection_reason(certificate_to_obj(cert)) is None, name


@pytest.mark.parametrize("name", [
    "catalog-cube", "catalog-icosahedron", "blockset", "amplified",
    "trapezium", "product",
])
def test_random_mutations_rejected(class_certificates, name):
    cert = class_certificates[name]
    obj = certificate_to_obj(cert)
    rng = random.Random(hash(name) & 0xFFFF)
    for trial in range(30):
        mutated, kind = mutate_certificate_obj(obj, rng)
        reason = rejection_reason(mutated)
        assert reason is not None, f"{name} trial {trial}: {kind} mutation accepted"


def test_generator_image_swap_fails_action_clause(class_certificates):
    from solubleset.certificate import parse_obj

    cert = class_certificates["catalog-cube"]
    obj = certificate_to_obj(cert)
    images = obj["action"]["generators"][0]
    images[0], images[1] = images[1], images[0]
    report = verify_certificate(parse_obj(obj))
    failing = {c.name for c in report.clauses if not c.passed}
    # the swap composes the generator with a transposition: never an isometry
    assert "action" in failing
    action_fail = next(c for c in report.clauses if c.name == "action" and not c.passed)
    assert "pair" in action_fail.detail


def test_insoluble_spec_fails_solubility_clause():
    # swap the pyritohedral spec for the full icosahedral symmetry group and
    # forge a terminating series: the verifier recomputes and refuses
    entry = icosahedron()
    full = symmetry_group(entry.pointset)
    assert full.order == 120
    cert = catalog_certificate(entry)
    cert.gens = tuple(full.generators)
    cert.gen_map = tuple(f"g{i}" for i in range(len(full.generators)))
    cert.spec = enumerated_from_group(full)
    cert.solubility = EnumeratedLeaf((120, 60, 1))
    report = verify_certificate(cert)
    assert not report.passed
    failing = [c for c in report.clauses if not c.passed]
    assert all(c.name == "solubility" for c in failing)


def test_wrong_orbit_count_certificate_rejected(class_certificates):
    obj = certificate_to_obj(class_certificates["amplified"])
    obj["y_implicit"]["r"] = 2
    assert rejection_reason(obj) is not None


def test_escalated_full_verification(class_certificates):
    cert = class_certificates["amplified"]
    report = verify_certificate(cert, escalate="full")
    assert report.passed, report.summary()
    assert any("full sweep" in c.detail for c in report.clauses)


def test_report_lines_format(class_certificates):
    report = verify_certificate(class_certificates["catalog-cube"])
    lines = report.summary().splitlines()
    assert all(line.startswith("[pass]") for line in lines)
    assert {line.split()[1].rstrip(":") for line in lines} >= {
        "structure", "solubility", "group", "action", "transitivity", "embedding",
    }
