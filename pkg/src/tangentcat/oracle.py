"""Randomized corroboration of symbolic results.

Two independent cross-checks live here.  ``identity_check`` compares
polynomials by sampling modulo a large prime (Schwartz-Zippel): a single
differing sample refutes equality exactly, while agreement on every sample
only corroborates it.  ``replay_evidence`` re-verifies the certificates a
classification report carries -- witnesses, preimages, kernel generators,
right inverses -- by direct substitution, which is far weaker machinery
than the searches that produced them.  Neither check ever decides a
verdict; they only confirm or contradict one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ContextMismatch,
    DomainMismatch,
    EmbeddingFailure,
    EvidenceMismatch,
)
from .presentations import codiagonal, pushout, relative_tangent_calg

MERSENNE_61 = 2**61 - 1


@dataclass(frozen=True)
class OracleConfig:
    prime: int = MERSENNE_61
    samples: int = 32
    seed: int = 0


DEFAULT_CONFIG = OracleConfig()


def _eval_mod(poly, point, p):
    """Evaluate with coefficients embedded in F_p."""
    total = 0
    for mono, coeff in poly.terms.items():
        if isinstance(coeff, Fraction):
            den = coeff.denominator % p
            if den == 0:
                raise EmbeddingFailure(
                    f"denominator {coeff.denominator} vanishes modulo {p}"
                )
            c = coeff.numerator % p * pow(den, -1, p) % p
        else:
            c = coeff % p
        for v, e in zip(point, mono):
            if e:
                c = c * pow(v, e, p) % p
        total = (total + c) % p
    return total


def identity_check(p, q, config=DEFAULT_CONFIG):
    """Sample two polynomials at random points.

    Returns "definitely_unequal" on the first differing sample and
    "probably_equal" when all samples agree.  Polynomials over F_p are
    sampled modulo their own prime, everything else modulo config.prime.
    """
    if p.context != q.context:
        raise ContextMismatch("cannot compare across contexts")
    if p.domain != q.domain:
        raise DomainMismatch("cannot compare across domains")
    modulus = p.domain.p if p.domain.kind == "Fp" else config.prime
    rng = random.Random(config.seed)
    nvars = len(p.context)
    for _ in range(config.samples):
        point = [rng.randrange(modulus) for _ in range(nvars)]
        if _eval_mod(p, point, modulus) != _eval_mod(q, point, modulus):
            return "definitely_unequal"
    return "probably_equal"


def maps_probably_equal(f, g, config=DEFAULT_CONFIG):
    """Componentwise identity check for two polynomial maps."""
    if f.arity_out != g.arity_out:
        return "definitely_unequal"
    for a, b in zip(f.components, g.components):
        if identity_check(a, b, config) == "definitely_unequal":
            return "definitely_unequal"
    return "probably_equal"


# ---------------------------------------------------------------------------
# certificate replay

def _fail(predicate, claim, detail):
    raise EvidenceMismatch(
        f"evidence for {predicate} ({claim}) failed to replay: {detail}"
    )


def _replay_kernel_generators(predicate, f, texts, apply, results,
                              claim="kernel_generators"):
    for text in texts:
        gen = f.source.parse(text)
        if f.source.reduce(gen).is_zero():
            _fail(predicate, claim, f"{text} is zero in the source")
        if not apply(gen).is_zero():
            _fail(predicate, claim, f"{text} does not map to zero")
    results.append(
        {"predicate": predicate, "claim": claim, "status": "corroborated"}
    )


def _replay_preimages(predicate, f, preimages, results):
    names = list(f.target.context.names)
    for var_name, text in preimages.items():
        pre = f.source.parse(text)
        target_var = f.target.var(names.index(var_name))
        if not f.target.reduce(f.apply(pre) - target_var).is_zero():
            _fail(predicate, "preimages", f"{text} does not hit {var_name}")
    results.append({"predicate": predicate, "claim": "preimages", "status": "corroborated"})


def _replay_witness(predicate, f, text, kernel, results):
    w = f.source.parse(text)
    image = f.apply(w)
    if not f.target.reduce(image - f.target.one()).is_zero():
        _fail(predicate, "witness", f"{text} does not map to 1")
    for k in kernel:
        if not f.source.reduce(k * w).is_zero():
            _fail(predicate, "witness", f"{text} does not annihilate {k}")
    results.append({"predicate": predicate, "claim": "witness", "status": "corroborated"})


def _parse_matrix(rows, p):
    if p is None:
        return [[Fraction(x) for x in row] for row in rows]
    return [[int(x) % p for x in row] for row in rows]


def _replay_right_inverse(predicate, matrix, right, p, results):
    mat = _parse_matrix(matrix, p)
    inv = _parse_matrix(right, p)
    m = len(mat)
    for i in range(m):
        for j in range(m):
            acc = sum(mat[i][k] * inv[k][j] for k in range(len(inv)))
            if p is not None:
                acc %= p
            want = 1 if i == j else 0
            if acc != want:
                _fail(predicate, "right_inverse", f"entry ({i}, {j}) is {acc}, not {want}")
    results.append(
        {"predicate": predicate, "claim": "right_inverse", "status": "corroborated"}
    )


def _replay_kernel_vector(predicate, matrix, vec, p, results):
    mat = _parse_matrix(matrix, p)
    v = _parse_matrix([vec], p)[0]
    if all(x == 0 for x in v):
        _fail(predicate, "kernel_vector", "the claimed kernel vector is zero")
    for i, row in enumerate(mat):
        acc = sum(a * b for a, b in zip(row, v))
        if p is not None:
            acc %= p
        if acc != 0:
            _fail(predicate, "kernel_vector", f"row {i} does not annihilate the vector")
    results.append(
        {"predicate": predicate, "claim": "kernel_vector", "status": "corroborated"}
    )


def replay_evidence(report, morphism=None):
    """Re-check every replayable certificate in a classification report.

    For the algebra-side instances the morphism object must be supplied;
    linear-fragment reports replay against the matrix stored in their own
    annotations.  Contradicted evidence raises EvidenceMismatch; the return
    value lists what was corroborated.
    """
    results = []
    if report.instance in ("calg", "affine"):
        if morphism is None:
            return [{"status": "not_replayable",
                     "note": "algebra-side replay needs the morphism object"}]
        f = morphism
        mu = None
        for predicate, status in report.predicates.items():
            ev = status.evidence
            if "kernel_generators" in ev:
                _replay_kernel_generators(
                    predicate, f, ev["kernel_generators"], f.apply, results
                )
            if "codiagonal_kernel_generators" in ev:
                if mu is None:
                    mu = codiagonal(pushout(f, f), f)
                _replay_kernel_generators(
                    predicate, mu, ev["codiagonal_kernel_generators"],
                    mu.apply, results, claim="codiagonal_kernel_generators",
                )
            if "preimages" in ev:
                _replay_preimages(predicate, f, ev["preimages"], results)
            if "witness" in ev:
                kernel = relative_tangent_calg(f)
                _replay_witness(predicate, f, ev["witness"], kernel, results)
            if "missing_preimages" in ev and status.status == "fails":
                results.append(
                    {"predicate": predicate, "claim": "missing_preimages",
                     "status": "not_replayable"}
                )
    elif report.instance == "cdc-linear":
        matrix = report.annotations.get("matrix")
        if matrix is None:
            return [{"status": "not_replayable",
                     "note": "no matrix annotation on this report"}]
        p = report.annotations.get("p") if report.annotations.get("domain") == "Fp" else None
        for predicate, status in report.predicates.items():
            ev = status.evidence
            if "right_inverse" in ev:
                _replay_right_inverse(predicate, matrix, ev["right_inverse"], p, results)
            if "kernel_vector" in ev and ev["kernel_vector"]:
                _replay_kernel_vector(predicate, matrix, ev["kernel_vector"], p, results)
    if not results:
        results.append({"status": "nothing_to_replay"})
    return results
