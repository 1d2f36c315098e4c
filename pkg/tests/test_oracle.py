"""Randomized corroboration and certificate replay."""

import math
from fractions import Fraction

import pytest

from tangentcat.cdc import cdc_context, cdc_map, classify_cdc_map, classify_linear
from tangentcat.classify import classify_affine, classify_calg
from tangentcat.errors import ContextMismatch, EmbeddingFailure, EvidenceMismatch
from tangentcat.oracle import (
    MERSENNE_61,
    OracleConfig,
    identity_check,
    maps_probably_equal,
    replay_evidence,
)
from tangentcat.polycore import QQ, ZZ, Polynomial, context, poly_parse, prime_field
from tangentcat.presentations import free_algebra, morphism, present

X = context("x")


def test_the_sampling_prime_is_mersenne():
    assert MERSENNE_61 == 2**61 - 1
    assert all(MERSENNE_61 % q for q in (3, 5, 7, 11, 13))  # smell test only


def test_identity_check_separates_distinct_polynomials():
    assert identity_check(
        poly_parse("(x+1)^2", X, QQ), poly_parse("x^2 + 2*x + 1", X, QQ)
    ) == "probably_equal"
    assert identity_check(
        poly_parse("x^2", X, QQ), poly_parse("x", X, QQ)
    ) == "definitely_unequal"


def test_identity_check_is_a_function_oracle_over_small_fields():
    # x^5 and x agree as functions on F_5, so sampling cannot tell them
    # apart; coefficient identity is the engine's job, not the oracle's.
    F5 = prime_field(5)
    p = poly_parse("x^5", X, F5)
    q = poly_parse("x", X, F5)
    assert not (p - q).is_zero()
    assert identity_check(p, q) == "probably_equal"


def test_identity_check_refuses_mixed_contexts():
    with pytest.raises(ContextMismatch):
        identity_check(poly_parse("x", X, QQ), poly_parse("y", context("y"), QQ))


def test_embedding_failure_on_bad_denominator():
    bad = Polynomial.variable(X, QQ, 0).scale(Fraction(1, MERSENNE_61))
    with pytest.raises(EmbeddingFailure):
        identity_check(bad, bad)


def test_maps_probably_equal():
    ctx = cdc_context(1)
    f = cdc_map(QQ, 1, (poly_parse("(x1+1)^3", ctx, QQ),))
    g = cdc_map(QQ, 1, (poly_parse("x1^3 + 3*x1^2 + 3*x1 + 1", ctx, QQ),))
    h = cdc_map(QQ, 1, (poly_parse("x1^3", ctx, QQ),))
    assert maps_probably_equal(f, g) == "probably_equal"
    assert maps_probably_equal(f, h) == "definitely_unequal"


def test_config_seed_fixes_the_sample_points():
    cfg = OracleConfig(samples=4, seed=99)
    p = poly_parse("x^3 - x", X, QQ)
    assert identity_check(p, p, cfg) == "probably_equal"
    # determinism: same config, same verdict object-for-object
    q = poly_parse("x^3", X, QQ)
    first = identity_check(p, q, cfg)
    assert all(identity_check(p, q, cfg) == first for _ in range(3))


# --- certificate replay -----------------------------------------------------

def point_morphism():
    C1 = present(QQ, ("x",), (poly_parse("x^2 - x", X, QQ),))
    K1 = free_algebra(QQ, ())
    return morphism(C1, K1, (Polynomial.zero(K1.context, QQ),))


def test_replay_corroborates_algebra_evidence():
    f = point_morphism()
    report = classify_calg(f, name="point")
    rows = replay_evidence(report, morphism=f)
    assert {(r["predicate"], r["claim"]) for r in rows} == {
        ("T_monic", "kernel_generators"),
        ("T_immersion", "kernel_generators"),
        ("T_unramified", "kernel_generators"),
        ("T_submersion", "preimages"),
        ("split_T_submersion", "witness"),
    }
    assert all(r["status"] == "corroborated" for r in rows)


def test_replay_corroborates_codiagonal_evidence():
    F2 = prime_field(2)
    k2 = free_algebra(F2, ())
    D2 = present(F2, ("x",), (poly_parse("x^2", X, F2),))
    f = morphism(k2, D2, ())
    report = classify_affine(f, name="structure")
    rows = replay_evidence(report, morphism=f)
    claims = {r["claim"] for r in rows}
    assert "codiagonal_kernel_generators" in claims
    assert all(r["status"] == "corroborated" for r in rows)


def test_replay_without_the_morphism_is_explicit():
    report = classify_calg(point_morphism(), name="point")
    rows = replay_evidence(report)
    assert rows == [
        {"status": "not_replayable",
         "note": "algebra-side replay needs the morphism object"}
    ]


def test_replay_with_nothing_to_check():
    ctx = cdc_context(1)
    cube = classify_cdc_map(cdc_map(QQ, 1, (poly_parse("x1^3", ctx, QQ),)))
    assert replay_evidence(cube) == [
        {"status": "not_replayable", "note": "no matrix annotation on this report"}
    ]
    from tangentcat.polycore import NN

    fold = classify_linear([[1, 1]], NN, name="fold")
    assert replay_evidence(fold) == [{"status": "nothing_to_replay"}]


def test_tampered_witness_is_caught():
    f = point_morphism()
    report = classify_calg(f, name="point")
    report.predicates["split_T_submersion"].evidence["witness"] = "x + 1"
    with pytest.raises(EvidenceMismatch) as exc:
        replay_evidence(report, morphism=f)
    assert "witness" in str(exc.value)


def test_tampered_right_inverse_is_caught():
    report = classify_linear([[2, 1]], ZZ, name="wide")
    rows = replay_evidence(report)
    assert ("split_T_submersion", "right_inverse", "corroborated") in {
        (r["predicate"], r["claim"], r["status"]) for r in rows
    }
    report.predicates["split_T_submersion"].evidence["right_inverse"][0][0] = "5"
    with pytest.raises(EvidenceMismatch):
        replay_evidence(report)


def test_tampered_kernel_vector_is_caught():
    report = classify_linear([[2, 4]], ZZ, name="thin")
    assert report.predicates["T_monic"].evidence["kernel_vector"] == ["-2", "1"]
    report.predicates["T_monic"].evidence["kernel_vector"] = ["1", "1"]
    with pytest.raises(EvidenceMismatch):
        replay_evidence(report)
