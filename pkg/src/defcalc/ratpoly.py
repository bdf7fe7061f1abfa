"""Exact multivariate polynomial arithmetic over the rationals.

Polynomials are sparse maps from exponent tuples to Fractions, attached to a
ring that fixes the variable list and a monomial order (degrevlex, lex, or
weighted degrevlex).  Everything is immutable after construction and safe to
share.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

QQ = Fraction

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class PolyRing:
    """Polynomial ring QQ[x1..xn] with a fixed monomial order.

    order: 'degrevlex' (default), 'lex', or 'weighted' (weighted degrevlex;
    requires positive integer weights, one per variable).
    """

    def __init__(self, variables: Sequence[str], order: str = "degrevlex",
                 weights: Sequence[int] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        for v in variables:
            if not _NAME_RE.fullmatch(v):
                raise ValueError(f"bad variable name {v!r}")
        if order not in ("degrevlex", "lex", "weighted"):
            raise ValueError(f"unknown order {order!r}")
        if order == "weighted":
            if weights is None or len(weights) != len(variables):
                raise ValueError("weighted order needs one weight per variable")
            if any(w <= 0 for w in weights):
                raise ValueError("weights must be positive")
            self.weights = tuple(int(w) for w in weights)
        else:
            self.weights = tuple(1 for _ in variables)
        self.variables = variables
        self.order = order
        self._index = {v: i for i, v in enumerate(variables)}
        self._zero_exp = tuple(0 for _ in variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def mono_deg(self, expt: tuple) -> int:
        return sum(e * w for e, w in zip(expt, self.weights))

    def mono_key(self, expt: tuple):
        # Larger key = larger monomial.
        if self.order == "lex":
            return expt
        return (self.mono_deg(expt), tuple(-e for e in reversed(expt)))

    def mono_mul(self, a: tuple, b: tuple) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def mono_divides(self, a: tuple, b: tuple) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def mono_div(self, a: tuple, b: tuple) -> tuple:
        return tuple(x - y for x, y in zip(a, b))

    def mono_lcm(self, a: tuple, b: tuple) -> tuple:
        return tuple(max(x, y) for x, y in zip(a, b))

    def mono_str(self, expt: tuple) -> str:
        parts = []
        for v, e in zip(self.variables, expt):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts) if parts else "1"

    # -- constructors ------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = QQ(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, {self._zero_exp: c})

    def gen(self, name: str) -> "Polynomial":
        i = self._index[name]
        e = list(self._zero_exp)
        e[i] = 1
        return Polynomial(self, {tuple(e): QQ(1)})

    def gens(self) -> list:
        return [self.gen(v) for v in self.variables]

    def monomial(self, expt: tuple, coeff=1) -> "Polynomial":
        coeff = QQ(coeff)
        if coeff == 0:
            return self.zero()
        return Polynomial(self, {tuple(expt): coeff})

    def parse(self, text: str) -> "Polynomial":
        return _parse_poly(self, text)

    def monomials_of_degree(self, d: int) -> list:
        """All exponent tuples of weighted total degree exactly d."""
        if d < 0:
            return []
        out = []

        def rec(i, rem, acc):
            if i == self.nvars:
                if rem == 0:
                    out.append(tuple(acc))
                return
            w = self.weights[i]
            e = 0
            while e * w <= rem:
                acc.append(e)
                rec(i + 1, rem - e * w, acc)
                acc.pop()
                e += 1

        rec(0, d, [])
        return out

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.variables == other.variables
                and self.order == other.order and self.weights == other.weights)

    def __hash__(self):
        return hash((self.variables, self.order, self.weights))

    def __repr__(self):
        return f"PolyRing({list(self.variables)}, order={self.order!r})"


class Polynomial:
    """Immutable sparse polynomial; terms map exponent tuples to Fractions."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get(self.ring._zero_exp, QQ(0))

    def is_homogeneous(self) -> bool:
        degs = {self.ring.mono_deg(e) for e in self.terms}
        return len(degs) <= 1

    def degree(self) -> int:
        """Weighted total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(self.ring.mono_deg(e) for e in self.terms)

    # -- leading data ------------------------------------------------------

    def lead(self) -> tuple:
        """(exponent, coeff) of the leading term in the ring order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=self.ring.mono_key)
        return e, self.terms[e]

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ValueError("ring mismatch")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, QQ(0)) + c
            if s:
                t[e] = s
            elif e in t:
                del t[e]
        return Polynomial(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = QQ(other)
            if c == 0:
                return self.ring.zero()
            return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        mul = self.ring.mono_mul
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mul(e1, e2)
                s = out.get(e, QQ(0)) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = QQ(other) if not isinstance(other, Polynomial) else None
        if c is None:
            if not other.is_constant():
                raise ValueError("can only divide by a nonzero constant")
            c = other.constant()
        return self * (QQ(1) / c)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return self.is_constant() and self.constant() == QQ(other)
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- calculus & substitution -------------------------------------------

    def derivative(self, var) -> "Polynomial":
        i = var if isinstance(var, int) else self.ring._index[var]
        out = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Polynomial(self.ring, out)

    def subs(self, target: PolyRing, images: Sequence["Polynomial"]) -> "Polynomial":
        """Ring map: substitute images[i] for variable i."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        result = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, exp in enumerate(e):
                if exp:
                    term = term * images[i] ** exp
            result = result + term
        return result

    # -- printing ----------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: self.ring.mono_key(t[0]),
                      reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            m = self.ring.mono_str(e)
            if m == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = m
            else:
                body = f"{abs(c)}*{m}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


class Derivation:
    """Polynomial vector field sum_i coeffs[i] d/dx_i."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: PolyRing, coeffs: Sequence[Polynomial]):
        if len(coeffs) != ring.nvars:
            raise ValueError("need one coefficient per variable")
        for c in coeffs:
            if c.ring != ring:
                raise ValueError("ring mismatch")
        self.ring = ring
        self.coeffs = tuple(coeffs)

    @classmethod
    def basis(cls, ring: PolyRing, i: int) -> "Derivation":
        coeffs = [ring.zero()] * ring.nvars
        coeffs[i] = ring.one()
        return cls(ring, coeffs)

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_derivation(self, f)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Derivation(self.ring, [-a for a in self.coeffs])

    def scale(self, f) -> "Derivation":
        return Derivation(self.ring, [a * f for a in self.coeffs])

    def bracket(self, other: "Derivation") -> "Derivation":
        """Vector field commutator [v, w] = v w - w v."""
        coeffs = [self(other.coeffs[i]) - other(self.coeffs[i])
                  for i in range(self.ring.nvars)]
        return Derivation(self.ring, coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.coeffs == other.coeffs

    def __str__(self):
        parts = [f"({c})*d/d{v}" for c, v in zip(self.coeffs, self.ring.variables)
                 if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.ring != b.ring:
        raise ValueError("ring mismatch")
    return a * b


def apply_derivation(v: Derivation, f: Polynomial) -> Polynomial:
    if v.ring != f.ring:
        raise ValueError("ring mismatch")
    out = f.ring.zero()
    for i, c in enumerate(v.coeffs):
        if not c.is_zero():
            out = out + c * f.derivative(i)
    return out


# -- parser ----------------------------------------------------------------
# Grammar: identifiers, integers, ^, optional *, +, -, /, parentheses.
# Division is only by (sub)expressions that evaluate to nonzero constants.

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()^*/+-]))")


def _tokenize(text: str):
    pos, toks = 0, []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ValueError(f"parse error at {text[pos:pos+10]!r}")
            break
        if m.group(1):
            toks.append(("int", int(m.group(1))))
        elif m.group(2):
            toks.append(("name", m.group(2)))
        else:
            toks.append(("op", m.group(3)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, ring: PolyRing, toks):
        self.ring = ring
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        result = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                t = self.term()
                result = result + t if val == "+" else result - t
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.next()
                result = result * self.factor()
            elif kind == "op" and val == "/":
                self.next()
                d = self.factor()
                if not d.is_constant() or d.constant() == 0:
                    raise ValueError("division only by nonzero constants")
                result = result / d.constant()
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                result = result * self.factor()   # implicit *
            else:
                return result

    def factor(self) -> Polynomial:
        base = self.base()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val = self.next()
            if kind != "int":
                raise ValueError("exponent must be an integer literal")
            return base ** val
        return base

    def base(self) -> Polynomial:
        kind, val = self.next()
        if kind == "int":
            return self.ring.const(val)
        if kind == "name":
            if val not in self.ring._index:
                raise ValueError(f"unknown variable {val!r}")
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            e = self.expr()
            kind, val = self.next()
            if (kind, val) != ("op", ")"):
                raise ValueError("expected ')'")
            return e
        if kind == "op" and val == "-":
            return -self.base()
        raise ValueError(f"unexpected token {val!r}")


def _parse_poly(ring: PolyRing, text: str) -> Polynomial:
    toks = _tokenize(text)
    if not toks:
        raise ValueError("empty polynomial text")
    p = _Parser(ring, toks)
    result = p.expr()
    if p.i != len(toks):
        raise ValueError("trailing input in polynomial text")
    return result
