"""Deterministic Buchberger engine for ideals and submodules of free modules.

Every run over the same input produces the same output: S-pairs are
processed in (lcm-degree, lcm, index) order, reducers are tried in basis
order, and finished bases are interreduced, made monic, and sorted by
leading term.  Free modules carry the position-over-term order in which
position 0 is greatest.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    ContextMismatch,
    ResourceLimit,
    ShapeMismatch,
    UnsupportedDomain,
)
from .polycore import (
    GREVLEX,
    Polynomial,
    VariableContext,
    elimination_order,
    mono_deg,
    mono_div,
    mono_lcm,
)

DEFAULT_DEGREE_CAP = 64


def resolve_cap(cap=None):
    """Effective degree cap: explicit argument, else TGC_DEGREE_CAP, else 64."""
    if cap is not None:
        return cap
    return int(os.environ.get("TGC_DEGREE_CAP", DEFAULT_DEGREE_CAP))


def _check_cap(p, cap):
    d = p.degree()
    if d > cap:
        raise ResourceLimit(
            f"polynomial degree {d} exceeds the degree cap {cap}",
            degree=d,
            cap=cap,
        )


def _term(ctx, dom, mono, coeff):
    return Polynomial(ctx, dom, {mono: coeff})


def spoly(f, g, order):
    """S-polynomial of two monic polynomials."""
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = mono_lcm(mf, mg)
    dom = f.domain
    tf = _term(f.context, dom, mono_div(lcm, mf), dom.div(dom.one(), cf))
    tg = _term(g.context, dom, mono_div(lcm, mg), dom.div(dom.one(), cg))
    return f * tf - g * tg


def division(p, divisors, order=GREVLEX):
    """Divide ``p`` by a list of polynomials; return (quotients, remainder).

    Complete reduction: no remainder term is divisible by any divisor's
    leading term, and p = sum(q_i * divisors_i) + remainder.
    """
    ctx, dom = p.context, p.domain
    lts = [d.leading_term(order) for d in divisors]
    quotients = [Polynomial.zero(ctx, dom) for _ in divisors]
    remainder = Polynomial.zero(ctx, dom)
    work = p
    while not work.is_zero():
        m, c = work.leading_term(order)
        for i, lt in enumerate(lts):
            if lt is None:
                continue
            q = mono_div(m, lt[0])
            if q is not None:
                t = _term(ctx, dom, q, dom.div(c, lt[1]))
                quotients[i] = quotients[i] + t
                work = work - divisors[i] * t
                break
        else:
            t = _term(ctx, dom, m, c)
            remainder = remainder + t
            work = work - t
    return quotients, remainder


def normal_form(p, basis, order=GREVLEX):
    """Remainder of ``p`` on complete division by ``basis``."""
    ctx, dom = p.context, p.domain
    lts = [(b, b.leading_term(order)) for b in basis if not b.is_zero()]
    remainder = Polynomial.zero(ctx, dom)
    work = p
    while not work.is_zero():
        m, c = work.leading_term(order)
        for b, (bm, bc) in lts:
            q = mono_div(m, bm)
            if q is not None:
                work = work - b * _term(ctx, dom, q, dom.div(c, bc))
                break
        else:
            t = _term(ctx, dom, m, c)
            remainder = remainder + t
            work = work - t
    return remainder


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis together with its order and ambient data."""

    generators: tuple
    order: object
    context: VariableContext
    domain: object

    def normal_form(self, p):
        return normal_form(p, self.generators, self.order)

    def contains(self, p):
        return self.normal_form(p).is_zero()

    def leading_monomials(self):
        return tuple(g.leading_term(self.order)[0] for g in self.generators)


def _pair_key(g1, g2, order, i, j):
    lcm = mono_lcm(g1.leading_term(order)[0], g2.leading_term(order)[0])
    return (mono_deg(lcm), lcm, i, j)


def _buchberger_core(gens, order, cap, track):
    gens = [g for g in gens if not g.is_zero()]
    assert gens, "caller handles the empty ideal"
    ctx, dom = gens[0].context, gens[0].domain
    if not dom.is_field:
        raise UnsupportedDomain("Groebner bases require a field domain")
    for g in gens:
        if g.context != ctx or g.domain != dom:
            raise ContextMismatch("generators disagree on context or domain")
        _check_cap(g, cap)

    basis = []
    reprs = []
    n_in = len(gens)

    def unit_row(i, scale):
        row = [Polynomial.zero(ctx, dom) for _ in range(n_in)]
        row[i] = Polynomial.constant(ctx, dom, scale)
        return row

    for i, g in enumerate(gens):
        lc = g.leading_term(order)[1]
        basis.append(g.monic(order))
        if track:
            reprs.append(unit_row(i, dom.div(dom.one(), lc)))

    def reduce_tracked(p, prepr):
        quotients, r = division(p, basis, order)
        if track:
            rrepr = list(prepr)
            for q, brepr in zip(quotients, reprs):
                if q.is_zero():
                    continue
                for k in range(n_in):
                    rrepr[k] = rrepr[k] - q * brepr[k]
            return r, rrepr
        return r, None

    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        pairs.sort(key=lambda ij: _pair_key(basis[ij[0]], basis[ij[1]], order, *ij))
        i, j = pairs.pop(0)
        mi = basis[i].leading_term(order)[0]
        mj = basis[j].leading_term(order)[0]
        if mono_lcm(mi, mj) == tuple(a + b for a, b in zip(mi, mj)):
            continue  # coprime leading monomials reduce to zero
        s = spoly(basis[i], basis[j], order)
        if track:
            srepr = [Polynomial.zero(ctx, dom) for _ in range(n_in)]
            dmi = mono_div(mono_lcm(mi, mj), mi)
            dmj = mono_div(mono_lcm(mi, mj), mj)
            for k in range(n_in):
                srepr[k] = reprs[i][k] * _term(ctx, dom, dmi, dom.one()) - reprs[j][
                    k
                ] * _term(ctx, dom, dmj, dom.one())
        else:
            srepr = None
        r, rrepr = reduce_tracked(s, srepr)
        if r.is_zero():
            continue
        _check_cap(r, cap)
        lc = r.leading_term(order)[1]
        inv = dom.div(dom.one(), lc)
        basis.append(r.scale(inv))
        if track:
            reprs.append([c * Polynomial.constant(ctx, dom, inv) for c in rrepr])
        new = len(basis) - 1
        pairs.extend((k, new) for k in range(new))

    # minimalize: drop generators whose leading term another one divides
    keep = []
    for i, g in enumerate(basis):
        m = g.leading_term(order)[0]
        redundant = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            mh = h.leading_term(order)[0]
            if mono_div(m, mh) is not None and (mh != m or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    basis = [basis[i] for i in keep]
    if track:
        reprs = [reprs[i] for i in keep]

    # interreduce to the unique reduced basis
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            quotients, r = division(basis[i], others, order)
            if r != basis[i]:
                changed = True
                assert not r.is_zero(), "minimal basis element reduced to zero"
                if track:
                    rrepr = list(reprs[i])
                    other_reprs = reprs[:i] + reprs[i + 1 :]
                    for q, brepr in zip(quotients, other_reprs):
                        if q.is_zero():
                            continue
                        for k in range(n_in):
                            rrepr[k] = rrepr[k] - q * brepr[k]
                    lc = r.leading_term(order)[1]
                    inv = dom.div(dom.one(), lc)
                    reprs[i] = [c * Polynomial.constant(ctx, dom, inv) for c in rrepr]
                basis[i] = r.monic(order)

    perm = sorted(range(len(basis)), key=lambda i: order.key(basis[i].leading_term(order)[0]))
    basis = [basis[i] for i in perm]
    if track:
        reprs = [tuple(reprs[i]) for i in perm]
    gb = GroebnerBasis(tuple(basis), order, ctx, dom)
    return (gb, tuple(reprs)) if track else (gb, None)


def buchberger(gens, order=GREVLEX, cap=None):
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ShapeMismatch("cannot infer context for an empty generator list")
    gb, _ = _buchberger_core(gens, order, resolve_cap(cap), track=False)
    return gb


def buchberger_extended(gens, order=GREVLEX, cap=None):
    """Reduced basis plus, for each element, its cofactors over the inputs.

    Returns (gb, rows) with gb.generators[k] == sum(rows[k][i] * gens[i]).
    """
    live = [g for g in gens if not g.is_zero()]
    if not live:
        raise ShapeMismatch("cannot infer context for an empty generator list")
    gb, rows = _buchberger_core(list(gens), order, resolve_cap(cap), track=True)
    return gb, rows


@lru_cache(maxsize=None)
def _cached_gb(gens, order, cap):
    gb, _ = _buchberger_core(list(gens), order, cap, track=False)
    return gb


def groebner_basis(gens, order=GREVLEX, cap=None):
    """Cached reduced Groebner basis; the empty ideal yields an empty basis."""
    gens = tuple(g for g in gens if not g.is_zero())
    if not gens:
        raise ShapeMismatch("cannot infer context for an empty generator list")
    return _cached_gb(gens, order, resolve_cap(cap))


def empty_basis(ctx, domain, order=GREVLEX):
    return GroebnerBasis((), order, ctx, domain)


def ideal_basis(gens, ctx, domain, order=GREVLEX, cap=None):
    """Like :func:`groebner_basis` but tolerates an empty generator list."""
    gens = tuple(g for g in gens if not g.is_zero())
    if not gens:
        return empty_basis(ctx, domain, order)
    return _cached_gb(gens, order, resolve_cap(cap))


def elimination_ideal(gens, neliminate, tail_context=None, cap=None):
    """Generators of (ideal) ∩ k[trailing variables], in the tail context.

    The first ``neliminate`` variables of the shared context are eliminated.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ctx, dom = gens[0].context, gens[0].domain
    if tail_context is None:
        tail_context = VariableContext(ctx.names[neliminate:])
    order = elimination_order(neliminate)
    gb = groebner_basis(tuple(gens), order, cap)
    index_map = [0] * len(ctx)
    for i in range(neliminate, len(ctx)):
        index_map[i] = i - neliminate
    out = []
    for g in gb.generators:
        if order.eliminates(g.leading_term(order)[0]):
            assert all(i >= neliminate for i in g.variables_used())
            out.append(g.rename(tail_context, index_map))
    return out


def ideal_intersection(gens1, gens2, cap=None):
    """Generators of the intersection of two ideals over the same context."""
    if not gens1 or not gens2:
        return []
    ctx, dom = gens1[0].context, gens1[0].domain
    n = len(ctx)
    tname = "@t0"
    k = 0
    while tname in ctx.names:
        k += 1
        tname = f"@t{k}"
    ext = VariableContext((tname,) + ctx.names)
    shift = [i + 1 for i in range(n)]
    t = Polynomial.variable(ext, dom, 0)
    one = Polynomial.one(ext, dom)
    mixed = [t * g.rename(ext, shift) for g in gens1]
    mixed += [(one - t) * g.rename(ext, shift) for g in gens2]
    return elimination_ideal(mixed, 1, tail_context=ctx, cap=cap)


def exact_quotient(p, h, order=GREVLEX):
    """Return p/h when h divides p exactly; raise otherwise."""
    quotients, r = division(p, [h], order)
    if not r.is_zero():
        raise ShapeMismatch("inexact polynomial division")
    return quotients[0]


def ideal_quotient(gens, h, cap=None):
    """Generators of the colon ideal (gens) : (h)."""
    if h.is_zero():
        raise ShapeMismatch("colon by the zero element")
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    meet = ideal_intersection(gens, [h], cap=cap)
    return [exact_quotient(g, h) for g in meet]


# ---------------------------------------------------------------------------
# morphism graphs: kernel, surjectivity, preimages

class MorphismGraph:
    """Graph ideal of an algebra morphism under a target-eliminating order.

    The combined context lists the target variables first, then one fresh
    ``@g<i>`` copy per source variable; the Groebner basis eliminates the
    target block, so normal forms expose kernels and preimages.
    """

    def __init__(self, f, cap=None):
        A, B = f.source, f.target
        dom = A.domain
        nA, nB = len(A.context), len(B.context)
        names = B.context.names + tuple(f"@g{i}" for i in range(nA))
        ctx = VariableContext(names)
        self.ctx = ctx
        self.nA, self.nB = nA, nB
        self.source, self.target = A, B
        self._embed_b = list(range(nB))
        self._embed_a = [nB + i for i in range(nA)]
        gens = [g.rename(ctx, self._embed_b) for g in B.ideal]
        for i in range(nA):
            lhs = Polynomial.variable(ctx, dom, nB + i)
            rhs = f.var_images[i].rename(ctx, self._embed_b)
            gens.append(lhs - rhs)
        gens += [g.rename(ctx, self._embed_a) for g in A.ideal]
        order = elimination_order(nB)
        self.gb = ideal_basis(tuple(gens), ctx, dom, order, cap)
        self.order = order

    def embed_target(self, p):
        return p.rename(self.ctx, self._embed_b)

    def embed_source(self, p):
        return p.rename(self.ctx, self._embed_a)

    def to_source(self, p):
        """Transport a source-block-only polynomial back to the source context."""
        assert all(i >= self.nB for i in p.variables_used())
        index_map = [0] * len(self.ctx)
        for i in range(self.nA):
            index_map[self.nB + i] = i
        return p.rename(self.source.context, index_map)

    def preimage(self, p):
        """A source element mapping to ``p``, or None when none exists."""
        nf = self.gb.normal_form(self.embed_target(p))
        if any(i < self.nB for i in nf.variables_used()):
            return None
        return self.to_source(nf)


@lru_cache(maxsize=None)
def _cached_graph(f, cap):
    return MorphismGraph(f, cap)


def morphism_graph(f, cap=None):
    return _cached_graph(f, resolve_cap(cap))


def ring_map_kernel(f, cap=None):
    """Generators of the kernel ideal of an algebra morphism.

    The result is reduced modulo the source ideal; an empty list means the
    morphism is injective.
    """
    graph = morphism_graph(f, cap)
    A = f.source
    raw = []
    for g in graph.gb.generators:
        if graph.order.eliminates(g.leading_term(graph.order)[0]):
            raw.append(graph.to_source(g))
    source_gb = ideal_basis(A.ideal, A.context, A.domain, GREVLEX, cap)
    out = []
    for g in raw:
        r = source_gb.normal_form(g)
        if not r.is_zero() and r not in out:
            out.append(r)
    out.sort(key=lambda p: (p.degree(), p.to_str()))
    return out


# ---------------------------------------------------------------------------
# free modules with the position-over-term order (position 0 greatest)

def vec_is_zero(v):
    return all(c.is_zero() for c in v)


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_term_mul(v, coeff, mono):
    ctx, dom = v[0].context, v[0].domain
    t = _term(ctx, dom, mono, coeff)
    return tuple(c * t for c in v)


def module_lt(v, order):
    """Leading (position, monomial, coefficient) of a vector, or None."""
    for i, c in enumerate(v):
        if not c.is_zero():
            m, coeff = c.leading_term(order)
            return i, m, coeff
    return None


def module_key(v, order):
    pos, m, _ = module_lt(v, order)
    return (pos, order.key(m))


def _vec_check(vectors):
    ranks = {len(v) for v in vectors}
    if len(ranks) != 1:
        raise ShapeMismatch(f"vectors of mixed ranks {sorted(ranks)}")
    ctx = vectors[0][0].context
    dom = vectors[0][0].domain
    for v in vectors:
        for c in v:
            if c.context != ctx or c.domain != dom:
                raise ContextMismatch("vector entries disagree on context or domain")
    return ranks.pop(), ctx, dom


def module_normal_form(v, basis, order=GREVLEX):
    """Complete normal form of a vector against module generators."""
    if not basis:
        return v
    ctx, dom = basis[0][0].context, basis[0][0].domain
    lts = [(b, module_lt(b, order)) for b in basis if not vec_is_zero(b)]
    rem = list(Polynomial.zero(ctx, dom) for _ in v)
    work = list(v)
    while True:
        lt = module_lt(tuple(work), order)
        if lt is None:
            break
        pos, m, c = lt
        for b, (bpos, bm, bc) in lts:
            if bpos != pos:
                continue
            q = mono_div(m, bm)
            if q is not None:
                step = vec_term_mul(b, dom.div(c, bc), q)
                for k in range(len(work)):
                    work[k] = work[k] - step[k]
                break
        else:
            t = _term(ctx, dom, m, c)
            rem[pos] = rem[pos] + t
            work[pos] = work[pos] - t
    return tuple(rem)


@dataclass(frozen=True)
class ModuleGroebnerBasis:
    """Reduced Groebner basis of a submodule of a free module."""

    generators: tuple
    rank: int
    order: object
    context: VariableContext
    domain: object

    def normal_form(self, v):
        if len(v) != self.rank:
            raise ShapeMismatch(f"vector rank {len(v)} != module rank {self.rank}")
        return module_normal_form(v, self.generators, self.order)

    def contains(self, v):
        return vec_is_zero(self.normal_form(v))

    def leading_positions(self):
        return tuple(module_lt(v, self.order)[:2] for v in self.generators)


def _module_pair_key(v1, v2, order, i, j):
    p1, m1, _ = module_lt(v1, order)
    _, m2, _ = module_lt(v2, order)
    lcm = mono_lcm(m1, m2)
    return (mono_deg(lcm), lcm, p1, i, j)


def module_buchberger(vectors, rank, ctx, dom, order=GREVLEX, cap=None):
    """Reduced module Groebner basis under position-over-term order."""
    cap = resolve_cap(cap)
    vectors = [tuple(v) for v in vectors if not vec_is_zero(v)]
    if not vectors:
        return ModuleGroebnerBasis((), rank, order, ctx, dom)
    vrank, vctx, vdom = _vec_check(vectors)
    if vrank != rank or vctx != ctx or vdom != dom:
        raise ShapeMismatch("vectors do not match the declared module shape")
    if not dom.is_field:
        raise UnsupportedDomain("module Groebner bases require a field domain")

    def vec_monic(v):
        _, _, c = module_lt(v, order)
        inv = dom.div(dom.one(), c)
        return tuple(comp.scale(inv) for comp in v)

    def check(v):
        for comp in v:
            _check_cap(comp, cap)

    basis = []
    for v in vectors:
        check(v)
        basis.append(vec_monic(v))

    pairs = [
        (i, j)
        for i in range(len(basis))
        for j in range(i + 1, len(basis))
        if module_lt(basis[i], order)[0] == module_lt(basis[j], order)[0]
    ]
    while pairs:
        pairs.sort(key=lambda ij: _module_pair_key(basis[ij[0]], basis[ij[1]], order, *ij))
        i, j = pairs.pop(0)
        _, mi, _ = module_lt(basis[i], order)
        _, mj, _ = module_lt(basis[j], order)
        lcm = mono_lcm(mi, mj)
        s = vec_sub(
            vec_term_mul(basis[i], dom.one(), mono_div(lcm, mi)),
            vec_term_mul(basis[j], dom.one(), mono_div(lcm, mj)),
        )
        r = module_normal_form(s, basis, order)
        if vec_is_zero(r):
            continue
        check(r)
        basis.append(vec_monic(r))
        new = len(basis) - 1
        pairs.extend(
            (k, new)
            for k in range(new)
            if module_lt(basis[k], order)[0] == module_lt(basis[new], order)[0]
        )

    keep = []
    for i, v in enumerate(basis):
        pos, m, _ = module_lt(v, order)
        redundant = False
        for j, w in enumerate(basis):
            if i == j:
                continue
            wpos, wm, _ = module_lt(w, order)
            if wpos == pos and mono_div(m, wm) is not None and (wm != m or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    basis = [basis[i] for i in keep]

    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            r = module_normal_form(basis[i], others, order)
            if r != basis[i]:
                changed = True
                assert not vec_is_zero(r)
                basis[i] = vec_monic(r)

    basis.sort(key=lambda v: module_key(v, order))
    return ModuleGroebnerBasis(tuple(basis), rank, order, ctx, dom)


def syzygy_basis(vectors, rank, ctx, dom, order=GREVLEX, cap=None):
    """Generators of the syzygy module of a list of vectors.

    Returns coefficient vectors c with sum(c_i * vectors_i) == 0, computed
    by eliminating the leading block of an extended free module.
    """
    vectors = [tuple(v) for v in vectors]
    s = len(vectors)
    if s == 0:
        return []
    ext = []
    for i, v in enumerate(vectors):
        tag = [Polynomial.zero(ctx, dom) for _ in range(s)]
        tag[i] = Polynomial.one(ctx, dom)
        ext.append(tuple(v) + tuple(tag))
    mgb = module_buchberger(ext, rank + s, ctx, dom, order, cap)
    out = []
    for w in mgb.generators:
        if vec_is_zero(w[:rank]):
            out.append(w[rank:])
    return out
