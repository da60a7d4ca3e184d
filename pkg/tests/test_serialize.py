import json

import pytest

from oracles import rep_family
from refmon import (
    FiniteAbelianGroup,
    GeneralizedInteger,
    block_sum,
    blocks_retract,
    boolean_lattice,
    building_block,
    chain,
    diamond,
    make_hom,
)
from refmon import serialize as ser
from refmon.errors import NotCommutative, NotHomomorphism, NotSemilattice


def roundtrip(obj, loader):
    return loader(json.loads(ser.dumps(obj)))


def test_monoid_round_trip():
    M = block_sum((2, 3))
    back = roundtrip(M, ser.monoid_from_json)
    assert back == M and back.labels == M.labels


def test_monoid_schema_errors():
    with pytest.raises(ser.SchemaError):
        ser.monoid_from_json({"size": 2, "table": [[0]]})
    with pytest.raises(ser.SchemaError):
        ser.monoid_from_json({"rows": []})
    with pytest.raises(NotCommutative):
        ser.monoid_from_json({"table": [[0, 1, 2], [1, 1, 1], [2, 2, 2]]})


def test_semilattice_forms():
    S = roundtrip(diamond(), ser.semilattice_from_json)
    assert S == diamond()
    assert ser.semilattice_from_json({"kind": "semilattice", "named": "chain", "k": 3}) == chain(3)
    assert ser.semilattice_from_json({"kind": "semilattice", "named": "boolean", "k": 2}) == \
        boolean_lattice(2)
    by_order = ser.semilattice_from_json({"kind": "semilattice", "size": 4,
                                          "leq": [[1, 3], [2, 3]]})
    assert by_order == boolean_lattice(2)
    with pytest.raises(NotSemilattice):
        ser.semilattice_from_json({"kind": "semilattice", "table": building_block(2).table})


def test_hom_paths(tmp_path):
    (tmp_path / "b4.json").write_text(ser.dumps(building_block(4)))
    (tmp_path / "b2.json").write_text(ser.dumps(building_block(2)))
    h = ser.hom_from_json({"source": "b4.json", "target": "b2.json", "map": [0, 1, 2, 1, 2]},
                          tmp_path)
    assert h.map == (0, 1, 2, 1, 2)
    with pytest.raises(NotHomomorphism):
        ser.hom_from_json({"source": "b4.json", "target": "b2.json", "map": [0, 1, 2, 2, 2]},
                          tmp_path)
    inline = roundtrip(make_hom(building_block(4), building_block(2), [0, 1, 2, 1, 2]),
                       ser.hom_from_json)
    assert inline.map == h.map


def test_triple_and_generalized_integers():
    for T, _ in rep_family()[:20]:
        back = ser.triple_from_json(json.loads(ser.dumps(T)), check_cover=False)
        assert back == T
    m = GeneralizedInteger.from_mapping({"2": 1, "3": "inf"})
    data = json.loads(ser.dumps(m))
    assert data == {"primes": {"2": 1, "3": "inf"}, "all_infinite": False}
    assert ser.generalized_from_json(data) == m
    assert ser.generalized_from_json(12) == GeneralizedInteger.of(12)


def test_subgroup_generators_are_reduced():
    G = FiniteAbelianGroup((4,))
    H = ser.subgroup_from_json({"generators": [[6]]}, G)
    assert H.elements == {(0,), (2,)}
    with pytest.raises(ser.SchemaError):
        ser.subgroup_from_json({"generators": [[1, 1]]}, G)


def test_retract_certificates_round_trip():
    for _, M in rep_family():
        c = blocks_retract(M)
        data = json.loads(ser.dumps(c))
        assert data["blocks"] == list(c.blocks.orders)
        back = ser.retract_from_json(data)
        assert back.problems() == []
        assert back.eps.map == c.eps.map and back.mu.map == c.mu.map


def test_dumps_is_stable():
    c = blocks_retract(chain(3).monoid)
    assert ser.dumps(c) == ser.dumps(ser.retract_from_json(json.loads(ser.dumps(c))))
