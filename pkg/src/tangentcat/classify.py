"""Morphism classification: seven bundle-theoretic predicates with evidence.

Each predicate verdict is holds / fails / undetermined, and every decided
verdict carries machine-checkable evidence (kernel generators, preimages,
witness elements, retraction matrices).  A report bundles the verdicts
with coherence checks of the implications that are theorems:

    immersion  <=>  unramified          (in instances with negation)
    split submersion  =>  submersion
    etale  <=>  immersion and split submersion
    monic etale  <=>  monic and split submersion
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import InconsistentClassification, NotSurjective
from .kahler import (
    classify_cotangent,
    cotangent_map,
    jacobian_split_verdict,
    relative_kahler,
    zero_module_evidence,
)
from .presentations import (
    codiagonal,
    is_surjective,
    linear_section_exists,
    pushout,
    relative_tangent_calg,
)

PREDICATES = (
    "T_monic",
    "T_immersion",
    "T_unramified",
    "T_submersion",
    "split_T_submersion",
    "T_etale",
    "monic_T_etale",
)

HOLDS = "holds"
FAILS = "fails"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class PredicateStatus:
    """One predicate verdict with its evidence payload."""

    status: str
    evidence: dict = field(default_factory=dict)
    reason: str = None

    @property
    def decided(self):
        return self.status != UNDETERMINED

    @property
    def value(self):
        if self.status == HOLDS:
            return True
        if self.status == FAILS:
            return False
        return None

    def to_json(self):
        out = {"status": self.status, "evidence": self.evidence}
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def holds(evidence=None):
    return PredicateStatus(HOLDS, evidence or {})


def fails(evidence=None):
    return PredicateStatus(FAILS, evidence or {})


def undetermined(reason, evidence=None):
    return PredicateStatus(UNDETERMINED, evidence or {}, reason)


def from_bool(value, ev_holds=None, ev_fails=None, reason=None, ev_und=None):
    if value is True:
        return holds(ev_holds)
    if value is False:
        return fails(ev_fails)
    return undetermined(reason or "not decided", ev_und)


def and3(*statuses):
    """Three-valued conjunction of predicate statuses."""
    if any(s.status == FAILS for s in statuses):
        culprit = next(s for s in statuses if s.status == FAILS)
        return fails({"because": culprit.evidence})
    if all(s.status == HOLDS for s in statuses):
        return holds({"conjuncts": len(statuses)})
    reason = "; ".join(
        s.reason or "undetermined" for s in statuses if s.status == UNDETERMINED
    )
    return undetermined(reason)


@dataclass
class ClassificationReport:
    """Verdicts for one morphism in one instance, with coherence results."""

    instance: str
    morphism: str
    base: str
    predicates: dict
    coherence: list = field(default_factory=list)
    annotations: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "schema_version": "1",
            "instance": self.instance,
            "morphism": self.morphism,
            "base": self.base,
            "predicates": {name: self.predicates[name].to_json() for name in PREDICATES},
            "coherence": self.coherence,
            "annotations": self.annotations,
            "timings_ms": self.timings_ms,
        }


COHERENCE_LAWS = (
    ("immersion_implies_unramified", ("T_immersion", "T_unramified"), "implies"),
    ("unramified_implies_immersion", ("T_unramified", "T_immersion"), "implies_with_negation"),
    ("split_implies_submersion", ("split_T_submersion", "T_submersion"), "implies"),
    (
        "etale_iff_immersion_and_split",
        ("T_etale", "T_immersion", "split_T_submersion"),
        "iff_conjunction",
    ),
    (
        "monic_etale_iff_monic_and_split",
        ("monic_T_etale", "T_monic", "split_T_submersion"),
        "iff_conjunction",
    ),
)


def coherence_check(predicates, has_negation=True, raise_on_violation=True):
    """Evaluate the theorem-backed implications between computed verdicts.

    Undetermined inputs skip a law; a decided violation raises
    InconsistentClassification (or is reported when raising is disabled).
    """
    results = []
    for name, keys, mode in COHERENCE_LAWS:
        if mode == "implies_with_negation" and not has_negation:
            results.append(
                {"law": name, "status": "skipped", "note": "no negation in this instance"}
            )
            continue
        statuses = [predicates[k] for k in keys]
        if any(not s.decided for s in statuses):
            results.append({"law": name, "status": "skipped", "note": "undetermined input"})
            continue
        values = [s.value for s in statuses]
        if mode in ("implies", "implies_with_negation"):
            ok = (not values[0]) or values[1]
        else:  # iff_conjunction
            ok = values[0] == all(values[1:])
        if ok:
            results.append({"law": name, "status": "checked"})
        else:
            results.append({"law": name, "status": "violated"})
            if raise_on_violation:
                raise InconsistentClassification(
                    f"coherence law {name} is violated by the computed verdicts",
                    law=name,
                )
    return results


# ---------------------------------------------------------------------------
# commutative-algebra instance: the bundle map lands in A x B

def classify_calg(f, name="f", base_name=None):
    """Classify an algebra morphism through its dual-numbers bundle map.

    The bundle map sends a + a'e to (a, f(a')), so injectivity of f decides
    the monic-flavoured predicates, surjectivity decides the submersion,
    and an element a with f(a) = 1 and Ker(f)·a = 0 decides the splitting.
    """
    t0 = time.perf_counter()
    kernel = relative_tangent_calg(f)
    injective = len(kernel) == 0
    if injective:
        inj_ev = {"kernel": "zero"}
    else:
        inj_ev = {"kernel_generators": [str(k) for k in kernel]}
    inj_status = from_bool(injective, inj_ev, inj_ev)

    surjective, surj_data = is_surjective(f)
    if surjective:
        surj_ev = {"preimages": {k: str(v) for k, v in surj_data.items()}}
    else:
        surj_ev = {"missing_preimages": list(surj_data)}
    surj_status = from_bool(surjective, surj_ev, surj_ev)

    if surjective:
        section = linear_section_exists(f)
        if section.holds:
            split_status = holds(
                {"witness": str(section.witness), "route": section.route,
                 "note": section.reason}
            )
        else:
            split_status = fails({"route": section.route, "note": section.reason})
    else:
        split_status = fails(
            {"note": "the bundle map of a non-surjective morphism has no section",
             "missing_preimages": list(surj_data)}
        )

    predicates = {
        "T_monic": inj_status,
        "T_immersion": inj_status,
        "T_unramified": inj_status,
        "T_submersion": surj_status,
        "split_T_submersion": split_status,
    }
    predicates["T_etale"] = and3(inj_status, surj_status)
    predicates["monic_T_etale"] = and3(inj_status, split_status)

    coherence = coherence_check(predicates, has_negation=True)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return ClassificationReport(
        instance="calg",
        morphism=name,
        base=base_name,
        predicates=predicates,
        coherence=coherence,
        annotations={},
        timings_ms={"total": round(elapsed, 3)},
    )


# ---------------------------------------------------------------------------
# affine instance: differentials of the opposite morphism

def classify_affine(f, name="f", base_name=None, regime="auto"):
    """Classify the affine-side morphism opposite to an algebra map f: A -> B.

    Monic means f is an epimorphism of algebras (self-pushout codiagonal has
    zero kernel); the remaining predicates read off the comparison map of
    differentials: cokernel for immersions, kernel for submersions, module
    retractions for the splitting, and both together for the isomorphism.
    """
    t0 = time.perf_counter()
    po = pushout(f, f)
    mu = codiagonal(po, f)
    mu_kernel = relative_tangent_calg(mu)
    if mu_kernel:
        monic_ev = {"codiagonal_kernel_generators": [str(k) for k in mu_kernel]}
    else:
        monic_ev = {"codiagonal_kernel": "zero"}
    monic_status = from_bool(len(mu_kernel) == 0, monic_ev, monic_ev)

    seq = cotangent_map(f)
    verdicts = classify_cotangent(seq, regime)
    immersion_status = from_bool(
        verdicts.cokernel_zero[0], verdicts.cokernel_zero[1], verdicts.cokernel_zero[1]
    )

    rel = relative_kahler(f)
    rel_zero, rel_ev = zero_module_evidence(rel)
    unramified_status = from_bool(rel_zero, rel_ev, rel_ev)

    submersion_status = from_bool(
        verdicts.monic[0], verdicts.monic[1], verdicts.monic[1]
    )
    split_val, split_ev = verdicts.split_monic
    split_status = from_bool(
        split_val, split_ev, split_ev,
        reason=split_ev.get("reason"), ev_und=split_ev,
    )
    etale_status = from_bool(
        verdicts.iso[0], verdicts.iso[1], verdicts.iso[1],
        reason="isomorphism undecided", ev_und=verdicts.iso[1],
    )

    predicates = {
        "T_monic": monic_status,
        "T_immersion": immersion_status,
        "T_unramified": unramified_status,
        "T_submersion": submersion_status,
        "split_T_submersion": split_status,
        "T_etale": etale_status,
    }
    predicates["monic_T_etale"] = and3(monic_status, split_status)

    annotations = {}
    jac, jac_ev = jacobian_split_verdict(f.target)
    if jac is True:
        annotations["jacobian_criterion"] = {"verdict": "passes", **jac_ev}
    elif jac is False:
        annotations["jacobian_criterion"] = {"verdict": "fails", **jac_ev}
    else:
        annotations["jacobian_criterion"] = {"verdict": "undetermined", **jac_ev}
    if etale_status.status == HOLDS and jac is False:
        annotations["note"] = (
            "tangent-etale but not formally etale: the Jacobian splitting "
            "criterion fails for the target presentation"
        )

    coherence = coherence_check(predicates, has_negation=True)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return ClassificationReport(
        instance="affine",
        morphism=name,
        base=base_name,
        predicates=predicates,
        coherence=coherence,
        annotations=annotations,
        timings_ms={"total": round(elapsed, 3)},
    )
