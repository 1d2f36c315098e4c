"""Exact multivariate polynomial arithmetic over Q, F_p, Z, and N.

Polynomials are immutable sparse dictionaries mapping exponent vectors to
nonzero coefficients.  All arithmetic is exact: rationals use
:class:`fractions.Fraction`, prime fields use canonical representatives
``0..p-1``, and the integer/natural semirings use Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ArityMismatch,
    ContextMismatch,
    DomainMismatch,
    IndexOutOfRange,
    ParseError,
    UnsupportedDomain,
)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class CoefficientDomain:
    """One of the four supported coefficient domains: Q, F_p, Z, or N."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "Fp", "Z", "N"):
            raise UnsupportedDomain(f"unknown coefficient domain {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise UnsupportedDomain(f"Fp needs a prime modulus, got {self.p!r}")
        elif self.p is not None:
            raise UnsupportedDomain(f"domain {self.kind} takes no modulus")

    @property
    def is_field(self):
        return self.kind in ("Q", "Fp")

    @property
    def has_negation(self):
        return self.kind != "N"

    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def from_int(self, n):
        """Coerce a Python int into this domain."""
        if self.kind == "Q":
            return Fraction(n)
        if self.kind == "Fp":
            return n % self.p
        if self.kind == "N" and n < 0:
            raise UnsupportedDomain("negative value has no image in N")
        return n

    def normalize(self, c):
        """Bring an element into canonical form, rejecting foreign types."""
        if self.kind == "Q":
            if isinstance(c, Fraction):
                return c
            if isinstance(c, int):
                return Fraction(c)
            raise DomainMismatch(f"not a rational coefficient: {c!r}")
        if not isinstance(c, int) or isinstance(c, bool):
            raise DomainMismatch(f"not an integer coefficient: {c!r}")
        if self.kind == "Fp":
            return c % self.p
        if self.kind == "N" and c < 0:
            raise UnsupportedDomain("negative coefficient over N")
        return c

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        if self.kind == "N":
            raise UnsupportedDomain("subtraction is not available over N")
        return self.normalize(a - b)

    def neg(self, a):
        if self.kind == "N":
            raise UnsupportedDomain("negation is not available over N")
        return self.normalize(-a)

    def mul(self, a, b):
        return self.normalize(a * b)

    def div(self, a, b):
        """Exact division; only fields support it."""
        if self.kind == "Q":
            if b == 0:
                raise ZeroDivisionError("division by zero in Q")
            return Fraction(a) / b
        if self.kind == "Fp":
            if b % self.p == 0:
                raise ZeroDivisionError("division by zero in Fp")
            return (a * pow(b, self.p - 2, self.p)) % self.p
        raise UnsupportedDomain(f"exact division is not available over {self.kind}")

    def coeff_str(self, c):
        if self.kind == "Q" and c.denominator != 1:
            return f"{c.numerator}/{c.denominator}"
        return str(int(c))

    def __str__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind


QQ = CoefficientDomain("Q")
ZZ = CoefficientDomain("Z")
NN = CoefficientDomain("N")


def prime_field(p):
    """Return the prime field F_p."""
    return CoefficientDomain("Fp", p)


@dataclass(frozen=True)
class VariableContext:
    """An ordered tuple of distinct variable names."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ContextMismatch(f"duplicate variable names in {self.names}")

    def __len__(self):
        return len(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise IndexOutOfRange(f"no variable named {name!r} in context {self.names}")


def context(*names):
    return VariableContext(tuple(names))


# ---------------------------------------------------------------------------
# monomials: plain exponent tuples

def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    """Return a/b as an exponent vector, or None when b does not divide a."""
    q = tuple(x - y for x, y in zip(a, b))
    return None if any(e < 0 for e in q) else q


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(a):
    return sum(a)


@dataclass(frozen=True)
class TermOrder:
    """A monomial order: grevlex, lex, or a two-block elimination order.

    ``nblock`` is the number of leading variables forming the elimination
    block; monomials are compared grevlex-within-block, leading block first.
    """

    kind: str
    nblock: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise UnsupportedDomain(f"unknown term order {self.kind!r}")

    def key(self, mono):
        """Sort key; larger key means larger monomial."""
        if self.kind == "grevlex":
            return (mono_deg(mono), tuple(-e for e in reversed(mono)))
        if self.kind == "lex":
            return mono
        head, tail = mono[: self.nblock], mono[self.nblock :]
        return (
            mono_deg(head),
            tuple(-e for e in reversed(head)),
            mono_deg(tail),
            tuple(-e for e in reversed(tail)),
        )

    def eliminates(self, mono):
        """True when a monomial avoids the elimination block entirely."""
        return all(e == 0 for e in mono[: self.nblock])


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def elimination_order(nblock):
    """Block order eliminating the first ``nblock`` variables."""
    return TermOrder("block", nblock)


class Polynomial:
    """Immutable sparse polynomial over a fixed context and domain."""

    __slots__ = ("context", "domain", "terms", "_hash")

    def __init__(self, context, domain, terms):
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "domain", domain)
        n = len(context)
        clean = {}
        for mono, coeff in terms.items():
            if len(mono) != n:
                raise ContextMismatch(
                    f"exponent vector {mono} does not fit a {n}-variable context"
                )
            c = domain.normalize(coeff)
            if c != domain.zero():
                clean[mono] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(context, domain):
        return Polynomial(context, domain, {})

    @staticmethod
    def constant(context, domain, c):
        return Polynomial(context, domain, {(0,) * len(context): c})

    @staticmethod
    def one(context, domain):
        return Polynomial.constant(context, domain, domain.one())

    @staticmethod
    def variable(context, domain, i):
        if not 0 <= i < len(context):
            raise IndexOutOfRange(f"variable index {i} out of range")
        mono = tuple(1 if j == i else 0 for j in range(len(context)))
        return Polynomial(context, domain, {mono: domain.one()})

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(mono_deg(m) == 0 for m in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.context), self.domain.zero())

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((mono_deg(m) for m in self.terms), default=-1)

    def leading_term(self, order=GREVLEX):
        """Return (monomial, coefficient) of the largest term, or None if zero."""
        if not self.terms:
            return None
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), self.domain.zero())

    def variables_used(self):
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.context != other.context:
            raise ContextMismatch("polynomials live over different contexts")
        if self.domain != other.domain:
            raise DomainMismatch("polynomials live over different domains")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        dom = self.domain
        zero = dom.zero()
        for m, c in other.terms.items():
            s = dom.add(terms.get(m, zero), c)
            if s == zero:
                terms.pop(m, None)
            else:
                terms[m] = s
        return Polynomial(self.context, dom, terms)

    def __sub__(self, other):
        self._check(other)
        terms = dict(self.terms)
        dom = self.domain
        zero = dom.zero()
        for m, c in other.terms.items():
            s = dom.sub(terms.get(m, zero), c)
            if s == zero:
                terms.pop(m, None)
            else:
                terms[m] = s
        return Polynomial(self.context, dom, terms)

    def __neg__(self):
        dom = self.domain
        return Polynomial(self.context, dom, {m: dom.neg(c) for m, c in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        dom = self.domain
        zero = dom.zero()
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = dom.add(terms.get(m, zero), dom.mul(c1, c2))
                if s == zero:
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return Polynomial(self.context, dom, terms)

    def __pow__(self, e):
        if e < 0:
            raise UnsupportedDomain("negative polynomial powers are not defined")
        result = Polynomial.one(self.context, self.domain)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def scale(self, c):
        dom = self.domain
        c = dom.normalize(c)
        return Polynomial(self.context, dom, {m: dom.mul(v, c) for m, v in self.terms.items()})

    def monic(self, order=GREVLEX):
        """Divide by the leading coefficient (fields only)."""
        lt = self.leading_term(order)
        if lt is None:
            return self
        dom = self.domain
        inv = dom.div(dom.one(), lt[1])
        return self.scale(inv)

    # -- calculus and substitution ----------------------------------------

    def partial(self, i):
        """Formal partial derivative with respect to variable ``i``."""
        if not 0 <= i < len(self.context):
            raise IndexOutOfRange(f"variable index {i} out of range")
        dom = self.domain
        zero = dom.zero()
        terms = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            c2 = dom.mul(c, dom.from_int(e))
            if c2 == zero:
                continue
            m2 = m[:i] + (e - 1,) + m[i + 1 :]
            terms[m2] = dom.add(terms.get(m2, zero), c2)
        return Polynomial(self.context, dom, terms)

    def evaluate(self, values):
        """Evaluate at a point given as one domain element per variable."""
        if len(values) != len(self.context):
            raise ArityMismatch(
                f"expected {len(self.context)} values, got {len(values)}"
            )
        dom = self.domain
        vals = [dom.normalize(v) for v in values]
        total = dom.zero()
        for m, c in self.terms.items():
            acc = c
            for v, e in zip(vals, m):
                if e:
                    acc = dom.mul(acc, v**e)
            total = dom.add(total, acc)
        return total

    def substitute(self, images):
        """Compose with polynomial images, one per variable of this context."""
        if len(images) != len(self.context):
            raise ArityMismatch(
                f"expected {len(self.context)} images, got {len(images)}"
            )
        if not images:
            raise ArityMismatch("cannot substitute into an empty context")
        ctx, dom = images[0].context, images[0].domain
        for q in images:
            if q.context != ctx:
                raise ContextMismatch("substitution images disagree on context")
            if q.domain != dom:
                raise DomainMismatch("substitution images disagree on domain")
        if dom != self.domain:
            raise DomainMismatch("substitution across domains is not defined")
        powers = [{0: Polynomial.one(ctx, dom)} for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        total = Polynomial.zero(ctx, dom)
        for m, c in self.terms.items():
            acc = Polynomial.constant(ctx, dom, c)
            for i, e in enumerate(m):
                if e:
                    acc = acc * power(i, e)
            total = total + acc
        return total

    def rename(self, new_context, index_map):
        """Transport into ``new_context``, sending old variable i to index_map[i]."""
        if len(index_map) != len(self.context):
            raise ArityMismatch("index map does not cover the context")
        n = len(new_context)
        terms = {}
        dom = self.domain
        zero = dom.zero()
        for m, c in self.terms.items():
            e2 = [0] * n
            for i, e in enumerate(m):
                if e:
                    j = index_map[i]
                    if not 0 <= j < n:
                        raise IndexOutOfRange(f"index {j} outside target context")
                    e2[j] += e
            m2 = tuple(e2)
            terms[m2] = dom.add(terms.get(m2, zero), c)
        return Polynomial(new_context, dom, terms)

    # -- comparison and display -------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.context == other.context
            and self.domain == other.domain
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            h = hash((self.context, self.domain, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def _mono_str(self, mono):
        parts = []
        for name, e in zip(self.context.names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def to_str(self, order=GREVLEX):
        """Canonical text form: terms descending in the given order."""
        if not self.terms:
            return "0"
        dom = self.domain
        monos = sorted(self.terms, key=order.key, reverse=True)
        out = []
        for k, m in enumerate(monos):
            c = self.terms[m]
            negative = dom.kind in ("Q", "Z") and c < 0
            mag = -c if negative else c
            body = self._mono_str(m)
            cs = dom.coeff_str(mag)
            if body and cs == "1":
                piece = body
            elif body:
                piece = f"{cs}*{body}"
            else:
                piece = cs
            if k == 0:
                out.append(f"-{piece}" if negative else piece)
            else:
                out.append(f" - {piece}" if negative else f" + {piece}")
        return "".join(out)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def variables(ctx, domain):
    """Return the tuple of variable polynomials of a context."""
    return tuple(Polynomial.variable(ctx, domain, i) for i in range(len(ctx)))


# ---------------------------------------------------------------------------
# parsing

_TOKEN_KINDS = ("NAME", "INT", "OP", "END")


def _tokenize(text, offset):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("NAME", text[i:j], offset + i))
            i = j
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], offset + i))
            i = j
        elif ch in "+-*^()/":
            tokens.append(("OP", ch, offset + i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", column=offset + i + 1)
    tokens.append(("END", "", offset + len(text)))
    return tokens


class _PolyParser:
    def __init__(self, tokens, ctx, domain):
        self.tokens = tokens
        self.pos = 0
        self.ctx = ctx
        self.domain = domain

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected):
        kind, value, col = self.peek()
        got = "end of input" if kind == "END" else repr(value)
        raise ParseError(f"expected {expected}, got {got}", column=col + 1)

    def parse(self):
        p = self.expr()
        if self.peek()[0] != "END":
            self.fail("end of polynomial")
        return p

    def expr(self):
        kind, value, col = self.peek()
        negate = False
        if kind == "OP" and value in "+-":
            self.take()
            negate = value == "-"
            if negate and not self.domain.has_negation:
                raise ParseError("'-' is not available over N", column=col + 1)
        p = self.term()
        if negate:
            p = -p
        while True:
            kind, value, col = self.peek()
            if kind == "OP" and value in "+-":
                self.take()
                if value == "-" and not self.domain.has_negation:
                    raise ParseError("'-' is not available over N", column=col + 1)
                q = self.term()
                p = p - q if value == "-" else p + q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "OP" and value == "*":
                self.take()
                p = p * self.factor()
            else:
                return p

    def factor(self):
        p = self.atom()
        kind, value, _ = self.peek()
        if kind == "OP" and value == "^":
            self.take()
            ekind, evalue, ecol = self.peek()
            if ekind != "INT":
                self.fail("an integer exponent")
            self.take()
            p = p ** int(evalue)
        return p

    def atom(self):
        kind, value, col = self.peek()
        if kind == "NAME":
            self.take()
            i = None
            if value in self.ctx.names:
                i = self.ctx.names.index(value)
            if i is None:
                raise ParseError(f"unknown variable {value!r}", column=col + 1)
            return Polynomial.variable(self.ctx, self.domain, i)
        if kind == "INT":
            self.take()
            num = int(value)
            nkind, nvalue, _ = self.peek()
            if nkind == "OP" and nvalue == "/":
                if self.domain.kind != "Q":
                    raise ParseError(
                        f"rational literals are not available over {self.domain}",
                        column=self.peek()[2] + 1,
                    )
                self.take()
                dkind, dvalue, dcol = self.peek()
                if dkind != "INT":
                    self.fail("a denominator")
                self.take()
                den = int(dvalue)
                if den == 0:
                    raise ParseError("zero denominator", column=dcol + 1)
                return Polynomial.constant(self.ctx, self.domain, Fraction(num, den))
            return Polynomial.constant(self.ctx, self.domain, self.domain.from_int(num))
        if kind == "OP" and value == "(":
            self.take()
            p = self.expr()
            ckind, cvalue, _ = self.peek()
            if ckind != "OP" or cvalue != ")":
                self.fail("')'")
            self.take()
            return p
        self.fail("a variable, number, or '('")


def poly_parse(text, ctx, domain, offset=0):
    """Parse polynomial text over the given context and domain.

    ``offset`` shifts reported column numbers, for callers embedding the
    text inside a longer line.
    """
    tokens = _tokenize(text, offset)
    return _PolyParser(tokens, ctx, domain).parse()
