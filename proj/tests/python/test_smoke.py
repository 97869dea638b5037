import json

import pytest

import cascadeho as ch


def test_fixtures_listed_and_valid():
    names = ch.fixture_names()
    assert "interval-pair" in names
    for n in names:
        assert ch.validate(ch.fixture(n))["status"] == "ok"


def test_prequantization_nch():
    g = ch.groups(ch.nch(ch.prequantization(1, 1, 2)))
    assert g[("2Γ", 2)] == "Z"
    assert g[("2Γ", 0)] == "Z^2 + Z/2"


def test_equivariant_truncation():
    r = ch.chs1(ch.prequantization(1, 1, 2), 3)
    assert r["truncation_consistent"]
    assert ch.groups(r)[("2Γ", 1)] == "Z + (Z/2)^2"


def test_egh_ranks():
    ranks = {(x["class"], x["grading"]): x["rank"] for x in ch.egh(ch.prequantization(2, 1, 1))["ranks"]}
    assert ranks[("1Γ", 0)] == 4


def test_compare_against_reference():
    minus = ch.period_doubling("minus")
    odd = ch.compare(ch.period_doubling("plus", 3), 5, reference=minus)
    assert odd["status"] == "ok"
    even = ch.compare(ch.period_doubling("plus", 2, allow_even=True), 5, reference=minus)
    assert even["status"] == "mismatch"


def test_morphism_identity():
    assert ch.morphism(ch.fixture("trivial-cobordism"))["identity"] is True


def test_errors():
    with pytest.raises(ch.InvalidScenario):
        ch.period_doubling("plus", 2)
    with pytest.raises(ch.UnknownFixture):
        ch.fixture("nope")
    doc = json.loads(ch.fixture("one-interval"))
    doc["payload"]["basepoints"]["a"] = "2/4"
    with pytest.raises(ch.SchemaError):
        ch.validate(doc)
