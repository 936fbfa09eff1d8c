import copy
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import coextension, random_coextension
from mutations import mutate

from flatforge.catalog import ag, build_catalog, pg, reid
from flatforge.certify import KINDS, affine_functional, validate_certificate
from flatforge.errors import UsageError
from flatforge.flats import atlas_certificate, find_affine_restrictions, is_affine_restriction
from flatforge.io import dumps, loads
from flatforge.lemmas import (SearchParams, kelly2_trichotomy, lift_affine, restriction_trichotomy,
                              unavoidable_search, verify_reid1, verify_reid2, verify_reid_characteristic)
from flatforge.matroid import Matroid, indices
from flatforge.ramsey import cap_certificate


def _corpus():
    out = []
    for spec in ["pg:3,2", "free:5,2", "sum:pg:1,2+pg:1,2", "ag:3,2", "pg:2,3", "reid:3", "ag:2,3"]:
        M = build_catalog(spec)
        for k in (1, 2, 3):
            for strategy in ("direct", "proof"):
                out.append((M, unavoidable_search(M, k, strategy).certificate(M)))
        out.append((M, atlas_certificate(M, 2)))
        out.append((M, cap_certificate(M, 2)))
    for p in (2, 3):
        N = reid(p)
        e = N.vectors.index((0, 0, 1))
        lines = N.lines_through(e)
        out.append((N, verify_reid_characteristic(N, e, *lines).certificate(N)))
        out.append((N, verify_reid1(N, e, *lines).certificate(N, e, lines)))
        out.append((N, verify_reid2(N, e).certificate(N)))
    for spec, par in [("pg:4,2", (2, 3, 2, 3)), ("pg:3,3", (3, 2, 2, 3)), ("sum:pg:1,2+pg:1,2", (2, 2, 2, 3))]:
        M = build_catalog(spec)
        out.append((M, kelly2_trichotomy(M, SearchParams(*par)).certificate(M)))
    for spec, par in [("pg:3,2", (2, 3, 2, 2)), ("free:5,2", (2, 3, 2, 2)), ("sum:pg:1,2+pg:1,2", (2, 2, 2, 2))]:
        M = build_catalog(spec)
        out.append((M, restriction_trichotomy(M, SearchParams(*par)).certificate(M)))
    rng = random.Random(0)
    for _ in range(10):
        M, J, _, _ = random_coextension(rng)
        out.append((M, lift_affine(M, J, rng.choice([2, 3])).certificate(M)))
    M, J, _ = coextension(ag(2, 2), [[0, 0, 0, 1]])
    out.append((M, lift_affine(M, J, 3).certificate(M)))
    return out


CORPUS = _corpus()


def test_corpus_covers_every_kind():
    assert {c["kind"] for _, c in CORPUS} == set(KINDS)


@pytest.mark.parametrize("i", range(len(CORPUS)))
def test_emitted_certificates_validate_after_round_trip(i):
    M, cert = CORPUS[i]
    res = validate_certificate(M, loads(dumps(cert)))
    assert res, res.detail


def _lift_success():
    M, J, _ = coextension(ag(3, 2), [[0] * 8])
    res = lift_affine(M, J, 2)
    assert res.success
    return M, res.certificate(M)


def test_lift_flat_missing_an_element_has_wrong_cardinality():
    M, cert = _lift_success()
    bad = copy.deepcopy(cert)
    bad["claims"]["flat"] = bad["claims"]["flat"][:-1]
    res = validate_certificate(M, bad)
    assert not res
    assert "wrong cardinality" in res.detail


def test_connected_disconnected_witness_rejected():
    M = build_catalog("sum:pg:1,2+pg:1,2")
    cert = kelly2_trichotomy(M, SearchParams(2, 2, 2, 3)).certificate(M)
    assert cert["claims"]["branch"] == "disconnected_flat"
    bad = copy.deepcopy(cert)
    # the first summand's line: a rank-2 flat that is connected
    bad["claims"]["witness"] = [0, 1, 2]
    bad["claims"]["components"] = [[0], [1], [2]]
    assert not validate_certificate(M, bad)
    bad["claims"]["components"] = [[0, 1, 2]]
    assert not validate_certificate(M, bad)


def test_hash_mismatch_rejected():
    M, cert = CORPUS[0]
    other = pg(3, 2).delete(1 << 0)
    res = validate_certificate(other, cert)
    assert not res
    assert "hash" in res.detail


def test_unknown_kind_is_a_usage_error():
    M, cert = CORPUS[0]
    bad = dict(cert, kind="mystery")
    with pytest.raises(UsageError):
        validate_certificate(M, bad)


@pytest.mark.parametrize("junk", [None, [], "cert", {"schema": 1}, {"schema": 2, "kind": "cap"}])
def test_malformed_envelopes_rejected(junk):
    assert not validate_certificate(pg(2, 2), junk)


def test_type_strict_claims():
    M, cert = _lift_success()
    bad = copy.deepcopy(cert)
    bad["claims"]["success"] = 1
    assert not validate_certificate(M, bad)
    bad = copy.deepcopy(cert)
    bad["claims"]["k"] = 2.0
    assert not validate_certificate(M, bad)


def test_negative_unavoidable_claim_needs_full_atlas():
    M = build_catalog("reid:3")
    res = unavoidable_search(M, 3, "direct")
    cert = res.certificate(M)
    assert not res.found
    assert validate_certificate(M, cert)
    bad = copy.deepcopy(cert)
    bad["claims"]["flats"] = []
    assert not validate_certificate(M, bad)


def test_seeded_single_field_fuzz_rejected():
    rng = random.Random(2024)
    accepted = []
    for _ in range(2000):
        M, cert = rng.choice(CORPUS)
        bad, desc = mutate(cert, rng, M.n)
        try:
            ok = bool(validate_certificate(M, bad))
        except UsageError:
            ok = False
        if ok:
            accepted.append((cert["kind"], desc))
    assert accepted == []


def _vectors(p, dim, n):
    return st.lists(st.tuples(*[st.integers(0, p - 1)] * dim), min_size=1, max_size=n)


@settings(max_examples=40)
@given(st.sampled_from([2, 3]), st.data())
def test_affine_functional_agrees_with_classifier(p, data):
    vecs = data.draw(_vectors(p, 3, 9))
    M = Matroid(p, vecs)
    S = data.draw(st.integers(1, M.full))
    mine = is_affine_restriction(M, S)
    theirs = affine_functional(M, S)
    assert mine == theirs


@pytest.mark.parametrize("spec,k", [("pg:3,2", 3), ("pg:2,3", 2), ("ag:3,2", 2)])
def test_every_affine_restriction_has_a_functional(spec, k):
    M = build_catalog(spec)
    found = list(find_affine_restrictions(M, k))
    assert found
    for S in found:
        phi = affine_functional(M, S)
        assert phi is not None
        assert all(sum(a * b for a, b in zip(phi, M.vectors[i])) % M.p for i in indices(S))
