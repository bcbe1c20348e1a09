"""
Tests for the JSON documents: loading re-validates the mathematics
"""
import json

import pytest
from pydantic import ValidationError

from errors import WorkbenchError
from fp_poly import from_roots
from generators import corpus_algebra
from pearl import pearl, stone_quotient
from profinite import ClosedSubtower, OpenCylinderFamily, cantor_tower
from serialization import (
    AlgebraDoc,
    CheckDoc,
    ClopenDoc,
    ComplementDoc,
    FactorDoc,
    ModuleDoc,
    PearlDoc,
    PiZeroDoc,
    PolyDoc,
    QuotientDoc,
    SubtowerDoc,
    SuiteDoc,
    TowerDoc,
    dumps,
    envelope,
    load_document,
)
from sheafmod import module_from_stalk_dims
from duality import FiniteSetObj
from spectrum import pi_zero

REJECTED = (ValueError, WorkbenchError)


def through_json(doc):
    return json.loads(doc.model_dump_json())


def test_algebra_document_rebuilds_the_algebra():
    a = corpus_algebra("F4xF2")
    assert load_document(AlgebraDoc, through_json(AlgebraDoc.from_algebra(a))) == a


def test_tampered_structure_constants_are_rejected():
    payload = through_json(AlgebraDoc.from_algebra(corpus_algebra("F4")))
    payload["mul"][0][1] = [1, 0]
    with pytest.raises(REJECTED):
        load_document(AlgebraDoc, payload)
    payload["content_hash"] = None
    with pytest.raises(REJECTED):
        load_document(AlgebraDoc, payload)


def test_missing_fields_fail_validation():
    payload = through_json(AlgebraDoc.from_algebra(corpus_algebra("F4")))
    del payload["one"]
    with pytest.raises(ValidationError):
        load_document(AlgebraDoc, payload)


def test_pearl_document():
    r = pearl(corpus_algebra("x3+x"))
    payload = through_json(PearlDoc.from_result(r))
    assert payload["p_boolean"] is False
    loaded = load_document(PearlDoc, payload)
    assert loaded.pearl_algebra.dim == 2
    payload["inclusion"] = [[1, 0], [0, 1], [0, 1]]
    with pytest.raises(REJECTED):
        load_document(PearlDoc, payload)


def test_quotient_and_pi_zero_documents():
    _, proj = stone_quotient(corpus_algebra("dual2xdual2"))
    assert load_document(QuotientDoc, through_json(QuotientDoc.from_projection(proj))) == proj
    a = corpus_algebra("x3+x")
    components = load_document(PiZeroDoc, through_json(PiZeroDoc.from_result(a, pi_zero(a))))
    assert len(components) == 2
    payload = through_json(PiZeroDoc.from_result(a, pi_zero(a)))
    payload["components"][0] = [0, 1, 0]
    with pytest.raises(REJECTED):
        load_document(PiZeroDoc, payload)


def test_tower_documents():
    tower = cantor_tower(2)
    assert load_document(TowerDoc, through_json(TowerDoc.from_tower(tower))) == tower
    bad = through_json(TowerDoc.from_tower(tower))
    bad["depth"] = 3
    with pytest.raises(REJECTED):
        load_document(TowerDoc, bad)
    closed = ClosedSubtower.from_deepest(tower, [0])
    doc = ComplementDoc.from_closed(closed)
    assert doc.stable_from is None
    assert load_document(ComplementDoc, through_json(doc)) == closed
    payload = through_json(doc)
    payload["complement"]["subsets"][2] = [1, 2]
    with pytest.raises(REJECTED):
        load_document(ComplementDoc, payload)


def test_subtower_kind_is_constrained():
    payload = through_json(SubtowerDoc.from_closed(ClosedSubtower.whole(cantor_tower(1))))
    payload["kind"] = "clopen"
    with pytest.raises(ValidationError):
        load_document(SubtowerDoc, payload)


def test_clopen_document_checks_the_idempotent():
    family = OpenCylinderFamily.cylinders(cantor_tower(3), 1, [1])
    doc = ClopenDoc(family=SubtowerDoc.from_open(family), p=2, level=1, idempotent=[0, 1])
    assert load_document(ClopenDoc, through_json(doc)).tolist() == [0, 1]
    with pytest.raises(REJECTED):
        load_document(ClopenDoc, {**through_json(doc), "idempotent": [1, 0]})


def test_module_document():
    m = module_from_stalk_dims(3, FiniteSetObj(("a", "b")), [2, 1])
    assert load_document(ModuleDoc, through_json(ModuleDoc.from_module(m))) == m
    payload = through_json(ModuleDoc.from_module(m))
    payload["projectors"][1] = payload["projectors"][0]
    with pytest.raises(REJECTED):
        load_document(ModuleDoc, payload)


def test_factor_document_must_multiply_back():
    f = from_roots([0, 1], 3)
    doc = FactorDoc(poly=PolyDoc.from_poly(3, f),
                    factors=[PolyDoc.from_poly(3, (0, 1)), PolyDoc.from_poly(3, (2, 1))])
    assert load_document(FactorDoc, through_json(doc)) == [(0, 1), (2, 1)]
    payload = through_json(doc)
    payload["factors"].pop()
    with pytest.raises(REJECTED):
        load_document(FactorDoc, payload)
    payload = through_json(doc)
    payload["poly"]["coeffs"] = [0, 5, 1]
    with pytest.raises(REJECTED):
        load_document(FactorDoc, payload)


def test_check_document_verdict_must_agree():
    suites = [SuiteDoc(name="galois", seed=1, passed=True, cases=3),
              SuiteDoc(name="sheaf", seed=1, passed=False, cases=2)]
    assert load_document(CheckDoc, {"seed": 1, "ok": False, "suites": [s.model_dump() for s in suites]}) is False
    with pytest.raises(REJECTED):
        load_document(CheckDoc, {"seed": 1, "ok": True, "suites": [s.model_dump() for s in suites]})


def test_envelope_shape():
    doc = PolyDoc.from_poly(2, (1, 1))
    env = json.loads(dumps(envelope("factor", "x+1", doc)))
    assert set(env) == {"command", "input", "result", "version"}
    assert env["result"] == {"p": 2, "coeffs": [1, 1], "text": "x+1"}
