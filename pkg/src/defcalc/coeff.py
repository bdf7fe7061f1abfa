"""Artin local coefficient algebras over QQ with monomial relation ideals.

An algebra is QQ[t_1..t_k] modulo monomial generators plus a total-degree
cutoff N (so m^N = 0).  The QQ-basis is the monomial staircase, computed
once; elements are coordinate vectors over it.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

QQ = Fraction


class ArtinAlgebra:
    def __init__(self, symbols: Sequence[str], relation_monomials: Sequence[tuple],
                 cutoff: int):
        self.symbols = tuple(symbols)
        self.cutoff = int(cutoff)
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        self.relations = tuple(tuple(r) for r in relation_monomials)
        for r in self.relations:
            if len(r) != len(self.symbols):
                raise ValueError("relation arity mismatch")
        self.basis = self._staircase()
        self._pos = {m: i for i, m in enumerate(self.basis)}

    def _kills(self, mono: tuple) -> bool:
        if sum(mono) >= self.cutoff:
            return True
        return any(all(m >= r for m, r in zip(mono, rel)) for rel in self.relations)

    def _staircase(self):
        out = []

        def rec(i, acc):
            if self._kills(tuple(acc + [0] * (len(self.symbols) - i))):
                return
            if i == len(self.symbols):
                m = tuple(acc)
                if not self._kills(m):
                    out.append(m)
                return
            e = 0
            while True:
                cand = acc + [e] + [0] * (len(self.symbols) - i - 1)
                if sum(cand) >= self.cutoff + 1:
                    break
                rec(i + 1, acc + [e])
                e += 1
                if e > self.cutoff:
                    break

        rec(0, [])
        out = sorted(set(out), key=lambda m: (sum(m), m))
        return tuple(out)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def maximal_ideal_basis(self):
        return tuple(m for m in self.basis if sum(m) > 0)

    def zero(self) -> "ArtinElement":
        return ArtinElement(self, {})

    def one(self) -> "ArtinElement":
        return self.monomial_elt(tuple(0 for _ in self.symbols))

    def gen(self, name: str) -> "ArtinElement":
        i = self.symbols.index(name)
        m = [0] * len(self.symbols)
        m[i] = 1
        return self.monomial_elt(tuple(m))

    def monomial_elt(self, mono: tuple, coeff=1) -> "ArtinElement":
        if self._kills(tuple(mono)):
            return self.zero()
        return ArtinElement(self, {tuple(mono): QQ(coeff)})

    def mono_mul(self, a: tuple, b: tuple):
        m = tuple(x + y for x, y in zip(a, b))
        return None if self._kills(m) else m

    def mono_str(self, m: tuple) -> str:
        parts = [f"{s}^{e}" if e > 1 else s
                 for s, e in zip(self.symbols, m) if e]
        return "*".join(parts) if parts else "1"

    def describe(self) -> str:
        rels = [self.mono_str(r) for r in self.relations]
        rels.append(f"m^{self.cutoff}")
        return f"QQ[{','.join(self.symbols)}]/({', '.join(rels)})"

    def __repr__(self):
        return self.describe()


class ArtinElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: ArtinAlgebra, coords: dict):
        self.algebra = algebra
        self.coords = {m: c for m, c in coords.items() if c}

    def is_zero(self) -> bool:
        return not self.coords

    def constant_term(self) -> Fraction:
        z = tuple(0 for _ in self.algebra.symbols)
        return self.coords.get(z, QQ(0))

    def in_maximal_ideal(self) -> bool:
        return self.constant_term() == 0

    def __add__(self, other):
        out = dict(self.coords)
        for m, c in other.coords.items():
            s = out.get(m, QQ(0)) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return ArtinElement(self.algebra, out)

    def __neg__(self):
        return ArtinElement(self.algebra, {m: -c for m, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ArtinElement):
            if other.algebra is not self.algebra:
                raise ValueError("algebra mismatch")
            out: dict = {}
            for m1, c1 in self.coords.items():
                for m2, c2 in other.coords.items():
                    m = self.algebra.mono_mul(m1, m2)
                    if m is not None:
                        out[m] = out.get(m, QQ(0)) + c1 * c2
            return ArtinElement(self.algebra, out)
        c = QQ(other)
        return ArtinElement(self.algebra, {m: v * c for m, v in self.coords.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ArtinElement) and self.coords == other.coords

    def __str__(self):
        if not self.coords:
            return "0"
        return " + ".join(f"{c}*{self.algebra.mono_str(m)}"
                          for m, c in sorted(self.coords.items()))

    __repr__ = __str__


def artin_mul(a: ArtinElement, b: ArtinElement) -> ArtinElement:
    return a * b


class SocleIdeal:
    def __init__(self, algebra: ArtinAlgebra, monomials: Sequence[tuple]):
        self.algebra = algebra
        self.monomials = tuple(monomials)


def socle(S: ArtinAlgebra) -> SocleIdeal:
    """Basis monomials annihilated by every generator."""
    out = []
    for m in S.basis:
        if sum(m) == 0:
            continue
        ok = True
        for i in range(len(S.symbols)):
            g = [0] * len(S.symbols)
            g[i] = 1
            if S.mono_mul(m, tuple(g)) is not None:
                ok = False
                break
        if ok:
            out.append(m)
    return SocleIdeal(S, out)


def quotient_by_socle_sub(S: ArtinAlgebra, sub_monomials: Sequence[tuple]) -> ArtinAlgebra:
    """Quotient of S by an ideal generated by socle basis monomials."""
    soc = set(socle(S).monomials)
    for m in sub_monomials:
        if tuple(m) not in soc:
            raise ValueError(f"{m} is not a socle basis monomial")
    return ArtinAlgebra(S.symbols, list(S.relations) + [tuple(m) for m in sub_monomials],
                        S.cutoff)


_DESC_RE = re.compile(
    r"^\s*QQ\[\s*([A-Za-z_0-9,\s]+)\]\s*(?:/\s*\(\s*(.*?)\s*\))?\s*$")


def parse_artin(desc: str, default_cutoff: int = 8) -> ArtinAlgebra:
    """Parse 'QQ[t]/(t^3)' or 'QQ[a,b]/(a^2, b^3)'; a bare power cap on the
    whole maximal ideal can be written as m^N."""
    m = _DESC_RE.match(desc)
    if not m:
        raise ValueError(f"bad artin algebra descriptor {desc!r}")
    symbols = [s.strip() for s in m.group(1).split(",") if s.strip()]
    rels = []
    cutoff = default_cutoff
    if m.group(2):
        for part in m.group(2).split(","):
            part = part.strip()
            if not part:
                continue
            pm = re.match(r"^m\^(\d+)$", part)
            if pm:
                cutoff = int(pm.group(1))
                continue
            expt = [0] * len(symbols)
            for piece in part.split("*"):
                piece = piece.strip()
                mm = re.match(r"^([A-Za-z_0-9]+)(?:\^(\d+))?$", piece)
                if not mm or mm.group(1) not in symbols:
                    raise ValueError(f"bad relation monomial {part!r}")
                expt[symbols.index(mm.group(1))] += int(mm.group(2) or 1)
            rels.append(tuple(expt))
    return ArtinAlgebra(symbols, rels, cutoff)
