"""Line-oriented workspace files and the ``tgc`` command.

A workspace declares coefficient fields, presented algebras (optionally
over a base), algebra morphisms, polynomial maps, and sections:

    field Q
    base R = vars(t)
    algebra B over R = vars() / (t^2)
    morphism q : A -> B over R = { }
    cdcmap fold : 2 -> 1 over N = (x1 + x2)
    section s for f = (w1, w1^2 + x1*w1)

Exit codes: 0 success, 2 parse error, 3 ill-defined input, 4 undetermined
verdict under --strict, 5 resource limit, 6 inconsistent results.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from dataclasses import dataclass, field

from .classify import (
    PREDICATES,
    classify_affine,
    classify_calg,
)
from .cdc import (
    CdcMap,
    cdc_context,
    cdc_map,
    classify_cdc_map,
    fibre_linear,
    full_section,
    linearize_section,
    random_cdc_map,
    random_polynomial,
    section_context,
    theta_composition_sides,
    theta_flip_sides,
    verify_cdc_axioms,
    verify_tangent_identities,
)
from .errors import (
    DuplicateName,
    EvidenceMismatch,
    IllDefinedMorphism,
    InconsistentClassification,
    NotASection,
    ParseError,
    ResourceLimit,
    TangentError,
    UnresolvedReference,
    UnsupportedDomain,
)
from .kahler import (
    base_change_check,
    classify_cotangent,
    cotangent_map,
    kahler_module,
    zero_module_evidence,
)
from .oracle import maps_probably_equal, replay_evidence
from .polycore import NN, QQ, ZZ, VariableContext, poly_parse, prime_field
from .presentations import free_algebra, morphism, present


# ---------------------------------------------------------------------------
# workspace model

@dataclass
class Workspace:
    algebras: dict = field(default_factory=dict)
    base_names: set = field(default_factory=set)
    algebra_base: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    morphism_decls: dict = field(default_factory=dict)
    cdcmaps: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)
    order: list = field(default_factory=list)


_NAME = r"[A-Za-z_]\w*"
ALG_RE = re.compile(
    rf"(base|algebra)\s+({_NAME})(?:\s+over\s+({_NAME}))?"
    rf"\s*=\s*vars\(([^)]*)\)\s*(?:/\s*\((.*)\))?\s*$"
)
MOR_RE = re.compile(
    rf"morphism\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})"
    rf"(?:\s+over\s+({_NAME}))?\s*=\s*\{{(.*)\}}\s*$"
)
CDC_RE = re.compile(
    rf"cdcmap\s+({_NAME})\s*:\s*(\d+)\s*->\s*(\d+)\s+over\s+"
    rf"(Q|Z|N|Fp\s+\d+)\s*=\s*\((.*)\)\s*$"
)
SEC_RE = re.compile(rf"section\s+({_NAME})\s+for\s+({_NAME})\s*=\s*\((.*)\)\s*$")
FIELD_RE = re.compile(r"field\s+(Q|Z|N|Fp(?:\s+\d+)?)\s*$")


def _split_top(text):
    """Split on commas outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced parentheses")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError("unbalanced parentheses")
    parts.append("".join(cur))
    return parts


def _domain_from_spec(spec, ln):
    spec = " ".join(spec.split())
    if spec == "Q":
        return QQ
    if spec == "Z":
        return ZZ
    if spec == "N":
        return NN
    if spec.startswith("Fp"):
        rest = spec[2:].strip()
        if not rest:
            raise ParseError("Fp needs a prime, e.g. `Fp 5`", line=ln)
        try:
            return prime_field(int(rest))
        except (ValueError, TangentError) as e:
            raise ParseError(str(e), line=ln)
    raise ParseError(f"unknown coefficient domain {spec!r}", line=ln)


def domain_label(dom):
    if dom.kind == "Fp":
        return f"Fp {dom.p}"
    return dom.kind


def _require_new(ws, name, ln):
    for table in (ws.algebras, ws.morphisms, ws.cdcmaps, ws.sections):
        if name in table:
            raise DuplicateName(f"the name {name!r} is already bound", line=ln)


def _parse_poly(text, ctx, dom, ln):
    try:
        return poly_parse(text.strip(), ctx, dom)
    except ParseError as e:
        raise ParseError(f"in {text.strip()!r}: {e}", line=ln, column=e.column)


def _identifiers(text, ln):
    names = [t.strip() for t in text.split(",")] if text.strip() else []
    for n in names:
        if not re.fullmatch(_NAME, n):
            raise ParseError(f"bad variable name {n!r}", line=ln)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable name", line=ln)
    return tuple(names)


def parse_workspace(text):
    ws = Workspace()
    current = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "field":
            m = FIELD_RE.fullmatch(line)
            if not m:
                raise ParseError("expected `field Q` or `field Fp <prime>`", line=ln)
            spec = m.group(1)
            if spec in ("Z", "N"):
                raise ParseError(
                    "algebra coefficients must form a field; use Q or Fp "
                    "(Z and N are for cdcmap declarations)",
                    line=ln,
                )
            current = _domain_from_spec(spec, ln)
        elif head in ("base", "algebra"):
            m = ALG_RE.fullmatch(line)
            if not m:
                raise ParseError(f"malformed {head} declaration", line=ln)
            kind, name, over, vars_txt, rels_txt = m.groups()
            if kind == "base" and over:
                raise ParseError("a base algebra cannot itself sit over a base", line=ln)
            _require_new(ws, name, ln)
            names = _identifiers(vars_txt, ln)
            base = None
            if over:
                if over not in ws.algebras:
                    raise UnresolvedReference(f"unknown base {over!r}", line=ln)
                base = ws.algebras[over]
                dom = base.domain
                clash = set(names) & set(base.context.names)
                if clash:
                    raise ParseError(
                        f"variable {sorted(clash)[0]!r} already names a base variable",
                        line=ln,
                    )
            else:
                if current is None:
                    raise ParseError("declare a field before any algebra", line=ln)
                dom = current
            full = VariableContext((base.context.names if base else ()) + names)
            rels = []
            if rels_txt is not None:
                for part in _split_top(rels_txt):
                    if part.strip():
                        rels.append(_parse_poly(part, full, dom, ln))
            try:
                alg = present(dom, names, rels, base=base)
            except TangentError as e:
                raise ParseError(str(e), line=ln)
            ws.algebras[name] = alg
            ws.algebra_base[name] = over
            if kind == "base":
                ws.base_names.add(name)
            ws.order.append((kind, name))
        elif head == "morphism":
            m = MOR_RE.fullmatch(line)
            if not m:
                raise ParseError("malformed morphism declaration", line=ln)
            name, src_name, tgt_name, over, pairs_txt = m.groups()
            _require_new(ws, name, ln)
            for ref in (src_name, tgt_name):
                if ref not in ws.algebras:
                    raise UnresolvedReference(f"unknown algebra {ref!r}", line=ln)
            src, tgt = ws.algebras[src_name], ws.algebras[tgt_name]
            if over:
                if over not in ws.algebras:
                    raise UnresolvedReference(f"unknown base {over!r}", line=ln)
                base = ws.algebras[over]
                if src.base != base or tgt.base != base:
                    raise ParseError(
                        f"both sides must be algebras over {over!r}", line=ln
                    )
            expected = src.relative_names if over else src.context.names
            given = {}
            for part in _split_top(pairs_txt):
                if not part.strip():
                    continue
                if "->" not in part:
                    raise ParseError(f"expected `var -> polynomial` in {part!r}", line=ln)
                lhs, rhs = part.split("->", 1)
                var = lhs.strip()
                if var not in expected:
                    raise ParseError(
                        f"{var!r} is not a variable the morphism must cover", line=ln
                    )
                if var in given:
                    raise ParseError(f"duplicate image for {var!r}", line=ln)
                given[var] = _parse_poly(rhs, tgt.context, tgt.domain, ln)
            missing = [v for v in expected if v not in given]
            if missing:
                raise ParseError(f"missing image for {missing[0]!r}", line=ln)
            try:
                f = morphism(
                    src, tgt, tuple(given[v] for v in expected), over_base=bool(over)
                )
            except IllDefinedMorphism as e:
                raise IllDefinedMorphism(
                    f"line {ln}: {e}", relation=e.relation, residue=e.residue
                )
            except TangentError as e:
                raise ParseError(str(e), line=ln)
            ws.morphisms[name] = f
            ws.morphism_decls[name] = (src_name, tgt_name, over)
            ws.order.append(("morphism", name))
        elif head == "cdcmap":
            m = CDC_RE.fullmatch(line)
            if not m:
                raise ParseError("malformed cdcmap declaration", line=ln)
            name, n_txt, m_txt, dom_spec, comps_txt = m.groups()
            _require_new(ws, name, ln)
            n, m_out = int(n_txt), int(m_txt)
            dom = _domain_from_spec(dom_spec, ln)
            ctx = cdc_context(n)
            if comps_txt.strip():
                comps = [
                    _parse_poly(part, ctx, dom, ln)
                    for part in _split_top(comps_txt)
                ]
            else:
                comps = []
            if len(comps) != m_out:
                raise ParseError(
                    f"declared {m_out} components but found {len(comps)}", line=ln
                )
            ws.cdcmaps[name] = cdc_map(dom, n, comps, context=ctx)
            ws.order.append(("cdcmap", name))
        elif head == "section":
            m = SEC_RE.fullmatch(line)
            if not m:
                raise ParseError("malformed section declaration", line=ln)
            name, map_name, comps_txt = m.groups()
            _require_new(ws, name, ln)
            if map_name not in ws.cdcmaps:
                raise UnresolvedReference(f"unknown cdcmap {map_name!r}", line=ln)
            fmap = ws.cdcmaps[map_name]
            ctx = section_context(fmap.arity_in, fmap.arity_out)
            comps = [
                _parse_poly(part, ctx, fmap.domain, ln)
                for part in _split_top(comps_txt)
            ]
            s = CdcMap(fmap.domain, ctx, tuple(comps))
            try:
                s = full_section(fmap, s)
            except (TangentError, NotASection) as e:
                raise ParseError(str(e), line=ln)
            ws.sections[name] = (map_name, s)
            ws.order.append(("section", name))
        else:
            raise ParseError(f"unknown declaration {head!r}", line=ln)
    return ws


def emit_workspace(ws):
    """Regenerate workspace text; parsing it back yields an equal workspace."""
    lines = []
    current_label = None
    for kind, name in ws.order:
        if kind in ("base", "algebra"):
            alg = ws.algebras[name]
            over = ws.algebra_base.get(name)
            if not over:
                label = domain_label(alg.domain)
                if label != current_label:
                    lines.append(f"field {label}")
                    current_label = label
            head = f"{kind} {name}"
            if over:
                head += f" over {over}"
            body = f"vars({', '.join(alg.relative_names)})"
            rels = alg.relative_ideal
            if rels:
                body += " / (" + ", ".join(str(r) for r in rels) + ")"
            lines.append(f"{head} = {body}")
        elif kind == "morphism":
            src, tgt, over = ws.morphism_decls[name]
            f = ws.morphisms[name]
            var_names = f.source.relative_names if f.over_base else f.source.context.names
            pairs = ", ".join(f"{v} -> {img}" for v, img in zip(var_names, f.images))
            head = f"morphism {name} : {src} -> {tgt}"
            if over:
                head += f" over {over}"
            lines.append(f"{head} = {{ {pairs} }}" if pairs else f"{head} = {{}}")
        elif kind == "cdcmap":
            fmap = ws.cdcmaps[name]
            comps = ", ".join(str(c) for c in fmap.components)
            lines.append(
                f"cdcmap {name} : {fmap.arity_in} -> {fmap.arity_out} "
                f"over {domain_label(fmap.domain)} = ({comps})"
            )
        elif kind == "section":
            map_name, s = ws.sections[name]
            comps = ", ".join(str(c) for c in s.components)
            lines.append(f"section {name} for {map_name} = ({comps})")
    return "\n".join(lines) + "\n"


def load_workspace(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read workspace {path!r}: {e}")
    return parse_workspace(text)


# ---------------------------------------------------------------------------
# output helpers

DISPLAY = {
    "T_monic": "T-monic",
    "T_immersion": "T-immersion",
    "T_unramified": "T-unramified",
    "T_submersion": "T-submersion",
    "split_T_submersion": "split T-submersion",
    "T_etale": "T-etale",
    "monic_T_etale": "monic T-etale",
}

_SUMMARY_KEYS = (
    "witness", "kernel_generators", "codiagonal_kernel_generators",
    "kernel", "codiagonal_kernel", "kernel_vector", "right_inverse",
    "rank", "rational_rank", "determinant", "smith_invariants",
    "zero_columns", "preimages", "missing_preimages", "route",
    "dimension", "surviving_generator", "reason", "note",
)


def _evidence_summary(status):
    if status.reason:
        return status.reason
    ev = status.evidence
    for key in _SUMMARY_KEYS:
        if key in ev:
            val = ev[key]
            if isinstance(val, dict):
                val = ", ".join(f"{k}={v}" for k, v in val.items())
            elif isinstance(val, (list, tuple)):
                val = ", ".join(str(x) for x in val)
            text = f"{key}: {val}"
            return text if len(text) <= 44 else text[:41] + "..."
    return ""


def human_report(report):
    lines = [
        f"morphism : {report.morphism}",
        f"instance : {report.instance}",
        f"base     : {report.base or '-'}",
        "-" * 78,
        f"{'predicate':<22}{'verdict':<14}evidence",
        "-" * 78,
    ]
    for name in PREDICATES:
        st = report.predicates[name]
        lines.append(f"{DISPLAY[name]:<22}{st.status:<14}{_evidence_summary(st)}")
    lines.append("-" * 78)
    checked = sum(1 for c in report.coherence if c["status"] == "checked")
    skipped = sum(1 for c in report.coherence if c["status"] == "skipped")
    lines.append(f"coherence: {checked} laws checked, {skipped} skipped")
    jac = report.annotations.get("jacobian_criterion")
    if jac:
        lines.append(f"jacobian criterion: {jac['verdict']}")
    note = report.annotations.get("note")
    if note:
        lines.append(f"note: {note}")
    replay = report.annotations.get("oracle_replay")
    if replay:
        good = sum(1 for r in replay if r["status"] == "corroborated")
        lines.append(f"oracle: {good} certificates corroborated")
    return "\n".join(lines)


def _write_output(doc, human, args):
    path = getattr(args, "json", None)
    rendered = json.dumps(doc, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(rendered)
        return
    sys.stdout.write(human + "\n")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(rendered)


def _verdict_value(pair):
    value, evidence = pair
    return {"value": value, "evidence": evidence}


# ---------------------------------------------------------------------------
# commands

def _cmd_classify(args):
    ws = load_workspace(args.workspace)
    if args.instance in ("calg", "affine"):
        if args.morphism not in ws.morphisms:
            raise UnresolvedReference(f"unknown morphism {args.morphism!r}")
        f = ws.morphisms[args.morphism]
        base_name = ws.morphism_decls[args.morphism][2]
        if args.instance == "calg":
            report = classify_calg(f, args.morphism, base_name)
        else:
            report = classify_affine(f, args.morphism, base_name, args.regime)
        oracle_target = f
    else:
        if args.morphism not in ws.cdcmaps:
            raise UnresolvedReference(f"unknown cdcmap {args.morphism!r}")
        report = classify_cdc_map(ws.cdcmaps[args.morphism], args.morphism)
        oracle_target = None
    if args.oracle:
        report.annotations["oracle_replay"] = replay_evidence(report, oracle_target)
    _write_output(report.to_json(), human_report(report), args)
    if args.strict and any(
        report.predicates[p].status == "undetermined" for p in PREDICATES
    ):
        return 4
    return 0


def _cmd_kahler(args):
    ws = load_workspace(args.workspace)
    if args.algebra not in ws.algebras:
        raise UnresolvedReference(f"unknown algebra {args.algebra!r}")
    alg = ws.algebras[args.algebra]
    module = kahler_module(alg)
    is_zero, zero_ev = zero_module_evidence(module)
    dim = module.dimension()
    doc = {
        "schema_version": "1",
        "command": "kahler",
        "algebra": args.algebra,
        "generators": list(module.labels),
        "relations": [[str(c) for c in row] for row in module.relations],
        "is_zero": is_zero,
        "dimension": dim,
    }
    lines = [
        f"differentials of {args.algebra}",
        f"generators : {', '.join(module.labels) or '(none)'}",
        f"relations  : {len(module.relations)}",
        f"zero module: {'yes' if is_zero else 'no'}",
        f"dimension  : {dim if dim is not None else 'not finite-dimensional'}",
    ]
    _write_output(doc, "\n".join(lines), args)
    return 0


def _cmd_cotangent(args):
    ws = load_workspace(args.workspace)
    if args.morphism not in ws.morphisms:
        raise UnresolvedReference(f"unknown morphism {args.morphism!r}")
    f = ws.morphisms[args.morphism]
    seq = cotangent_map(f)
    verdicts = classify_cotangent(seq, args.regime)
    doc = {
        "schema_version": "1",
        "command": "cotangent",
        "morphism": args.morphism,
        "pullback_generators": list(seq.pullback.labels),
        "target_generators": list(seq.middle.labels),
        "matrix": [[str(c) for c in row] for row in seq.v.matrix],
        "verdicts": {
            "monic": _verdict_value(verdicts.monic),
            "cokernel_zero": _verdict_value(verdicts.cokernel_zero),
            "split_monic": _verdict_value(verdicts.split_monic),
            "iso": _verdict_value(verdicts.iso),
        },
        "regime": verdicts.regime,
    }
    show = lambda pair: {True: "yes", False: "no", None: "undetermined"}[pair[0]]
    lines = [
        f"comparison map of differentials for {args.morphism}",
        f"matrix rows ({len(seq.v.matrix)}): "
        + "; ".join("[" + ", ".join(str(c) for c in row) + "]" for row in seq.v.matrix),
        f"monic       : {show(verdicts.monic)}",
        f"cokernel 0  : {show(verdicts.cokernel_zero)}",
        f"split monic : {show(verdicts.split_monic)}",
        f"isomorphism : {show(verdicts.iso)}",
        f"regime      : {verdicts.regime}",
    ]
    _write_output(doc, "\n".join(lines), args)
    return 0


def _cmd_cdc_axioms(args):
    ws = load_workspace(args.workspace)
    if args.map not in ws.cdcmaps:
        raise UnresolvedReference(f"unknown cdcmap {args.map!r}")
    f = ws.cdcmaps[args.map]
    g = None
    if args.partner:
        if args.partner not in ws.cdcmaps:
            raise UnresolvedReference(f"unknown cdcmap {args.partner!r}")
        g = ws.cdcmaps[args.partner]
    checks = verify_cdc_axioms(f, g) + verify_tangent_identities(f, g)
    doc = {
        "schema_version": "1",
        "command": "cdc-axioms",
        "map": args.map,
        "partner": args.partner,
        "laws": [
            {"name": c.name, "holds": c.holds, "detail": c.detail} for c in checks
        ],
    }
    lines = [f"axioms and naturality for {args.map}"]
    for c in checks:
        mark = "ok  " if c.holds else "FAIL"
        lines.append(f"{mark} {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    _write_output(doc, "\n".join(lines), args)
    return 0 if all(c.holds for c in checks) else 6


def _cmd_cdc_linearize(args):
    ws = load_workspace(args.workspace)
    if args.map not in ws.cdcmaps:
        raise UnresolvedReference(f"unknown cdcmap {args.map!r}")
    if args.section not in ws.sections:
        raise UnresolvedReference(f"unknown section {args.section!r}")
    f = ws.cdcmaps[args.map]
    for_name, s = ws.sections[args.section]
    if for_name != args.map:
        raise ParseError(f"section {args.section!r} was declared for {for_name!r}")
    result = linearize_section(f, s)
    linear = fibre_linear(result, f.arity_in)
    doc = {
        "schema_version": "1",
        "command": "cdc-linearize",
        "map": args.map,
        "section": args.section,
        "components": [str(c) for c in result.components],
        "fibre_linear": linear,
        "is_section": True,
    }
    lines = [
        f"linearized section of theta({args.map})",
        f"components  : {result.describe()}",
        f"fibre-linear: {'yes' if linear else 'no'}",
        "section     : yes",
    ]
    _write_output(doc, "\n".join(lines), args)
    return 0


# ---------------------------------------------------------------------------
# verification suites

def _suite_theta_laws(count, seed, oracle):
    rng = random.Random(seed)
    domains = (QQ, QQ, prime_field(5), ZZ, NN)
    failures = []
    for case in range(count):
        dom = domains[rng.randrange(len(domains))]
        n, m, l = (rng.randint(1, 3) for _ in range(3))
        f = random_cdc_map(rng, dom, n, m)
        g = random_cdc_map(rng, dom, m, l)
        for name, sides in (
            ("theta_composition", theta_composition_sides(f, g)),
            ("theta_flip", theta_flip_sides(f)),
        ):
            lhs, rhs = sides
            if lhs.components != rhs.components:
                failures.append({"case": case, "law": name, "detail": "symbolic mismatch"})
            elif oracle and maps_probably_equal(lhs, rhs) == "definitely_unequal":
                failures.append({"case": case, "law": name, "detail": "oracle refuted"})
    return failures


def _suite_tangent_identities(count, seed, oracle):
    rng = random.Random(seed)
    domains = (QQ, prime_field(5), ZZ, NN)
    failures = []
    for case in range(count):
        dom = domains[rng.randrange(len(domains))]
        n, m, l = (rng.randint(1, 2) for _ in range(3))
        f = random_cdc_map(rng, dom, n, m)
        g = random_cdc_map(rng, dom, m, l)
        for chk in verify_cdc_axioms(f, g) + verify_tangent_identities(f, g):
            if not chk.holds:
                failures.append({"case": case, "law": chk.name, "detail": chk.detail})
    return failures


def _parabola_case():
    a = free_algebra(QQ, ("t",))
    b = free_algebra(QQ, ("x",))
    ctx_x = b.context
    f = morphism(a, b, (poly_parse("x^2", ctx_x, QQ),))
    c_ctx = VariableContext(("y",))
    c = present(QQ, ("y",), (poly_parse("y", c_ctx, QQ),))
    g = morphism(a, c, (poly_parse("0", c_ctx, QQ),))
    return f, g


def _suite_base_change(count, seed, oracle):
    rng = random.Random(seed)
    failures = []
    cases = [("parabola", _parabola_case())]
    a = free_algebra(QQ, ("t",))
    for case in range(count):
        k, j = rng.randint(1, 3), rng.randint(1, 3)
        bx = VariableContext(("x",))
        cy = VariableContext(("y",))
        b = present(QQ, ("x",), (poly_parse(f"x^{k}", bx, QQ),))
        c = present(QQ, ("y",), (poly_parse(f"y^{j}", cy, QQ),))
        u = random_polynomial(rng, bx, QQ, max_degree=max(k - 1, 1), max_terms=2)
        v = random_polynomial(rng, cy, QQ, max_degree=max(j - 1, 1), max_terms=2)
        f = morphism(a, b, (u,))
        g = morphism(a, c, (v,))
        cases.append((f"random_{case}", (f, g)))
    for label, (f, g) in cases:
        res = base_change_check(f, g)
        if res.isomorphic is not True:
            failures.append(
                {"case": label, "law": "base_change", "detail": res.detail}
            )
    return failures


SUITES = {
    "theta-laws": (_suite_theta_laws, 100),
    "tangent-identities": (_suite_tangent_identities, 50),
    "base-change": (_suite_base_change, 20),
}


def _cmd_verify(args):
    runner, default_count = SUITES[args.suite]
    count = args.count if args.count is not None else default_count
    failures = runner(count, args.seed, args.oracle)
    doc = {
        "schema_version": "1",
        "command": "verify",
        "suite": args.suite,
        "count": count,
        "seed": args.seed,
        "oracle": bool(args.oracle),
        "failures": failures,
    }
    lines = [f"suite {args.suite}: {count} cases, {len(failures)} failures (seed {args.seed})"]
    for item in failures:
        lines.append(f"FAIL case {item['case']}: {item['law']} {item['detail']}")
    _write_output(doc, "\n".join(lines), args)
    return 0 if not failures else 6


# ---------------------------------------------------------------------------
# argument parsing and dispatch

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write a JSON report (- for stdout)")
    common.add_argument("--oracle", action="store_true", help="replay evidence and sample identities")
    common.add_argument("--strict", action="store_true", help="exit 4 on undetermined verdicts")
    common.add_argument("--degree-cap", type=int, metavar="N", help="abort once any degree exceeds N")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")

    parser = argparse.ArgumentParser(
        prog="tgc", description="classify morphisms by their tangent-bundle behaviour"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="run the seven predicates")
    p.add_argument("--workspace", required=True)
    p.add_argument("--instance", required=True, choices=("calg", "affine", "cdc-linear"))
    p.add_argument("--morphism", required=True)
    p.add_argument("--regime", choices=("auto", "finite", "general"), default="auto")
    p.set_defaults(run=_cmd_classify)

    p = sub.add_parser("kahler", parents=[common], help="differentials of one algebra")
    p.add_argument("--workspace", required=True)
    p.add_argument("--algebra", required=True)
    p.set_defaults(run=_cmd_kahler)

    p = sub.add_parser("cotangent", parents=[common], help="comparison map of a morphism")
    p.add_argument("--workspace", required=True)
    p.add_argument("--morphism", required=True)
    p.add_argument("--regime", choices=("auto", "finite", "general"), default="auto")
    p.set_defaults(run=_cmd_cotangent)

    p = sub.add_parser("cdc", help="polynomial-map commands")
    cdx = p.add_subparsers(dest="cdc_command", required=True)
    q = cdx.add_parser("axioms", parents=[common], help="check the differential axioms")
    q.add_argument("--workspace", required=True)
    q.add_argument("--map", required=True)
    q.add_argument("--with", dest="partner", default=None)
    q.set_defaults(run=_cmd_cdc_axioms)
    q = cdx.add_parser("linearize", parents=[common], help="linearize a bundle section")
    q.add_argument("--workspace", required=True)
    q.add_argument("--map", required=True)
    q.add_argument("--section", required=True)
    q.set_defaults(run=_cmd_cdc_linearize)

    p = sub.add_parser("verify", parents=[common], help="randomized law suites")
    p.add_argument("--suite", required=True, choices=tuple(SUITES))
    p.add_argument("--count", type=int, default=None)
    p.set_defaults(run=_cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    saved_cap = os.environ.get("TGC_DEGREE_CAP")
    if getattr(args, "degree_cap", None):
        os.environ["TGC_DEGREE_CAP"] = str(args.degree_cap)
    try:
        return _dispatch(args)
    finally:
        if getattr(args, "degree_cap", None):
            if saved_cap is None:
                os.environ.pop("TGC_DEGREE_CAP", None)
            else:
                os.environ["TGC_DEGREE_CAP"] = saved_cap


def _dispatch(args):
    try:
        return args.run(args)
    except ParseError as e:
        where = ""
        if e.line is not None:
            where = f" at line {e.line}"
            if e.column is not None:
                where += f", column {e.column}"
        print(f"tgc: parse error{where}: {e}", file=sys.stderr)
        return 2
    except (IllDefinedMorphism, NotASection, UnsupportedDomain) as e:
        print(f"tgc: {e}", file=sys.stderr)
        return 3
    except ResourceLimit as e:
        print(f"tgc: resource limit: {e}", file=sys.stderr)
        return 5
    except (InconsistentClassification, EvidenceMismatch) as e:
        print(f"tgc: inconsistency: {e}", file=sys.stderr)
        return 6


if __name__ == "__main__":
    sys.exit(main())
