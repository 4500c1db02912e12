import pytest
from sympy.combinatorics import Permutation as SymPerm
from sympy.combinatorics.perm_groups import PermutationGroup as SymGroup

from solubleset.errors import NotPrime, NotSoluble
from solubleset.groupspec import (
    AGL1,
    AGL1Leaf,
    C2Power,
    Cyclic,
    CyclicLeaf,
    Dihedral,
    DirectProduct,
    Enumerated,
    EnumeratedLeaf,
    Power,
    ProductNode,
    agl_generators,
    check_proof,
    check_spec_relations,
    enumerated_from_group,
    is_prime,
    primitive_root,
    proof_from_json,
    proof_matches_spec,
    proof_to_json,
    prove_soluble,
    spec_from_json,
    spec_generator_labels,
    spec_order,
    spec_permutation_group,
    spec_to_json,
)
from solubleset.perm import Perm, derived_series, enumerate_group


def test_is_prime():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_primitive_roots():
    assert primitive_root(5) == 2
    assert primitive_root(7) == 3
    assert primitive_root(11) == 2
    with pytest.raises(NotPrime):
        primitive_root(9)


def test_agl_generators_p5():
    tau, sigma = agl_generators(5)
    assert tau == Perm((1, 2, 3, 4, 0))
    assert sigma == Perm((0, 2, 4, 1, 3))
    assert enumerate_group([tau, sigma]).order == 20


def test_agl_generators_p2():
    gens = agl_generators(2)
    assert enumerate_group(gens).order == 2


def test_agl_generators_p7():
    g = enumerate_group(agl_generators(7))
    assert g.order == 42


def test_agl_not_prime():
    with pytest.raises(NotPrime):
        agl_generators(6)


def test_spec_order():
    th = Enumerated(24, 12, ())  # order claim only; generators unused here
    spec = DirectProduct((AGL1(5), Power(th, 5)))
    assert spec_order(spec) == 20 * 24**5 == 159_252_480
    assert spec_order(Cyclic(1)) == 1
    assert spec_order(C2Power(10)) == 1024
    assert spec_order(Dihedral(7)) == 14


def test_prove_soluble_lemma_group():
    spec = DirectProduct((AGL1(5), Power(C2Power(1), 5)))
    proof = prove_soluble(spec)
    assert proof_matches_spec(spec, proof)
    assert check_proof(spec, proof) == []


def test_prove_soluble_rejects_icosahedral_group():
    # C2 x A5 of order 120: derived series stabilizes at A5
    gens = []
    images = list(range(7))
    images[0:3] = [1, 2, 0]
    gens.append(Perm(tuple(images)))
    images = list(range(7))
    images[0:5] = [1, 2, 3, 4, 0]
    gens.append(Perm(tuple(images)))
    images = list(range(7))
    images[5], images[6] = 6, 5
    gens.append(Perm(tuple(images)))
    group = enumerate_group(gens)
    assert group.order == 120
    with pytest.raises(NotSoluble):
        prove_soluble(enumerated_from_group(group))


def test_prove_soluble_cyclic_leaf():
    assert prove_soluble(Cyclic(7)) == CyclicLeaf(7)


def test_check_proof_detects_corruption():
    spec = Enumerated(6, 3, (Perm((1, 2, 0)), Perm((1, 0, 2))))
    proof = prove_soluble(spec)
    assert isinstance(proof, EnumeratedLeaf)
    bad = EnumeratedLeaf(tuple(o + 1 for o in proof.orders))
    assert check_proof(spec, bad) != []
    assert check_proof(spec, proof) == []


def test_proof_shape_mismatch():
    assert not proof_matches_spec(Cyclic(3), AGL1Leaf(3))
    assert not proof_matches_spec(
        DirectProduct((Cyclic(2), Cyclic(3))), ProductNode((CyclicLeaf(2),))
    )


@pytest.mark.parametrize(
    "spec",
    [
        Cyclic(6),
        Dihedral(6),
        C2Power(3),
        AGL1(5),
        DirectProduct((AGL1(3), C2Power(2))),
        Power(Cyclic(3), 2),
        DirectProduct((Dihedral(4), Cyclic(5))),
    ],
)
def test_compositional_proof_agrees_with_enumeration_oracle(spec):
    # realize the spec faithfully and compare the derived-series verdict
    group = spec_permutation_group(spec)
    assert group.order == spec_order(spec)
    _, soluble = derived_series(group)
    prove_soluble(spec)  # must not raise
    assert soluble


def test_realization_matches_sympy_order():
    for spec in (Dihedral(6), AGL1(7), DirectProduct((Cyclic(4), C2Power(2)))):
        group = spec_permutation_group(spec)
        sym = SymGroup([SymPerm(list(p.images)) for p in group.generators])
        assert sym.order() == spec_order(spec)


def test_generator_labels():
    spec = DirectProduct((AGL1(5), C2Power(2)))
    assert spec_generator_labels(spec) == ["0.shift", "0.scale", "1.flip0", "1.flip1"]
    assert spec_generator_labels(Power(Cyclic(3), 2)) == ["slot0.rot", "slot1.rot"]


def test_relations_accept_faithful_realization():
    for spec in (Cyclic(6), Dihedral(5), C2Power(3), AGL1(5),
                 DirectProduct((Cyclic(2), Dihedral(4)))):
        group = spec_permutation_group(spec)
        labels = spec_generator_labels(spec)
        from solubleset.groupspec import _natural_generators

        gens, _ = _natural_generators(spec)
        assert len(gens) == len(labels)
        assert check_spec_relations(spec, dict(zip(labels, gens))) == []


def test_relations_reject_wrong_generators():
    spec = Cyclic(4)
    bad = {"rot": Perm((1, 2, 0, 3, 4))}  # order 3 does not divide 4
    assert check_spec_relations(spec, bad) != []
    spec = Dihedral(4)
    rot = Perm((1, 2, 3, 0))
    assert check_spec_relations(spec, {"rot": rot, "ref": rot}) != []


def test_spec_json_round_trip():
    th = Enumerated(2, 2, (Perm((1, 0)),))
    spec = DirectProduct((AGL1(5), Power(th, 3), Cyclic(4)))
    assert spec_from_json(spec_to_json(spec)) == spec
    proof = prove_soluble(spec)
    assert proof_from_json(proof_to_json(proof)) == proof
