"""Bernoulli numbers, free Lie algebra combinatorics, and exact
Baker-Campbell-Hausdorff components.

Lie elements are stored by their expansion in the truncated free associative
algebra (words with rational coefficients); that canonical form doubles as
the test oracle via log(exp X exp Y).  The bivariate components come from the
derivative recursion seeded at beta_{0,1} = Y; the trivariate ones by
substituting the bivariate series into itself.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Callable, Sequence

QQ = Fraction

_BERNOULLI: list = [QQ(1)]


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2 (inversion of D(x) = (e^x - 1)/x)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        # sum_{k<=m} C(m+1, k) B_k = 0
        s = sum(comb(m + 1, k) * _BERNOULLI[k] for k in range(m))
        _BERNOULLI.append(QQ(-s, m + 1))
    return _BERNOULLI[n]


def bernoulli_c(n: int) -> Fraction:
    """Normalized coefficient C_n = B_n / n! of C(x) = x/(e^x - 1)."""
    return bernoulli(n) / factorial(n)


class Word(dict):
    """Element of the free associative algebra: {tuple(symbols): coeff}."""

    def __init__(self, data=None):
        super().__init__()
        if data:
            for w, c in data.items():
                if c:
                    self[w] = QQ(c)

    @classmethod
    def sym(cls, s) -> "Word":
        return cls({(s,): QQ(1)})

    @classmethod
    def one(cls) -> "Word":
        return cls({(): QQ(1)})

    def add(self, other: "Word") -> "Word":
        out = Word(self)
        for w, c in other.items():
            s = out.get(w, QQ(0)) + c
            if s:
                out[w] = s
            elif w in out:
                del out[w]
        return out

    def scale(self, c) -> "Word":
        c = QQ(c)
        if not c:
            return Word()
        return Word({w: v * c for w, v in self.items()})

    def mul(self, other: "Word", cap: int | None = None) -> "Word":
        out: dict = {}
        for w1, c1 in self.items():
            for w2, c2 in other.items():
                if cap is not None and len(w1) + len(w2) > cap:
                    continue
                w = w1 + w2
                out[w] = out.get(w, QQ(0)) + c1 * c2
        return Word({w: c for w, c in out.items() if c})

    def bracket(self, other: "Word", cap: int | None = None) -> "Word":
        return self.mul(other, cap).add(other.mul(self, cap).scale(-1))

    def truncate(self, cap: int) -> "Word":
        return Word({w: c for w, c in self.items() if len(w) <= cap})

    def homogeneous(self, n: int) -> "Word":
        return Word({w: c for w, c in self.items() if len(w) == n})

    def multidegree_part(self, degs: dict) -> "Word":
        out = {}
        for w, c in self.items():
            counts: dict = {}
            for s in w:
                counts[s] = counts.get(s, 0) + 1
            if counts == {s: d for s, d in degs.items() if d}:
                out[w] = c
        return Word(out)

    def is_zero(self) -> bool:
        return not self

    def __str__(self):
        if not self:
            return "0"
        parts = []
        for w, c in sorted(self.items()):
            parts.append(f"{c}*{''.join(map(str, w)) or '1'}")
        return " + ".join(parts)


def word_exp(x: Word, cap: int) -> Word:
    """exp of an element with no constant term, truncated above cap."""
    out = Word.one()
    term = Word.one()
    k = 1
    while True:
        term = term.mul(x, cap)
        if term.is_zero():
            break
        out = out.add(term.scale(QQ(1, factorial(k))))
        k += 1
        if k > cap:
            break
    return out


def word_log(x: Word, cap: int) -> Word:
    """log of 1 + nilpotent part, truncated above cap."""
    u = Word(x)
    const = u.pop((), QQ(0))
    if const != 1:
        raise ValueError("word_log needs constant term 1")
    out = Word()
    term = Word.one()
    for k in range(1, cap + 1):
        term = term.mul(u, cap)
        if term.is_zero():
            break
        out = out.add(term.scale(QQ((-1) ** (k + 1), k)))
    return out


def assoc_log(factors: Sequence[Word], cap: int) -> Word:
    """log of a product of exponentials in the free associative algebra."""
    if cap < 1:
        raise ValueError("degree cap must be >= 1")
    prod = Word.one()
    for f in factors:
        prod = prod.mul(word_exp(f, cap), cap)
    return word_log(prod, cap)


def dynkin_is_lie(x: Word) -> bool:
    """Dynkin test: the left-normed bracketing of a degree-n Lie element
    returns n times the element."""
    degs = {len(w) for w in x}
    for n in degs:
        part = x.homogeneous(n)
        br = Word()
        for w, c in part.items():
            acc = Word.sym(w[0])
            for s in w[1:]:
                acc = acc.bracket(Word.sym(s))
            br = br.add(acc.scale(c))
        if br.add(part.scale(-n)).is_zero() is False:
            return False
    return True


class LieElement:
    """Lie element in fixed multidegree, stored by its word expansion."""

    def __init__(self, word: Word, degrees: dict):
        self.word = word
        self.degrees = dict(degrees)

    @property
    def total_degree(self) -> int:
        return sum(self.degrees.values())

    def is_zero(self) -> bool:
        return self.word.is_zero()

    def scale(self, c) -> "LieElement":
        return LieElement(self.word.scale(c), self.degrees)

    def add(self, other: "LieElement") -> "LieElement":
        return LieElement(self.word.add(other.word), self.degrees)

    def is_lie(self) -> bool:
        return dynkin_is_lie(self.word)

    def __str__(self):
        return str(self.word)

    def evaluate(self, assignment: dict, bracket: Callable, scale: Callable,
                 add: Callable, zero):
        """Evaluate via the Dynkin projection: for homogeneous degree-n Lie
        words, value = (1/n) sum_w c_w [x_{w_1},[...,x_{w_n}]]-left-normed.

        assignment maps each symbol to one concrete element; bracket, scale,
        add, zero are the target algebra's operations.
        """
        out = zero
        for w, c in self.word.items():
            n = len(w)
            acc = assignment[w[0]]
            for s in w[1:]:
                acc = bracket(acc, assignment[s])
            out = add(out, scale(acc, QQ(c, n)))
        return out

    def evaluate_multilinear(self, slots: dict, bracket, scale, add, zero):
        """Polarized evaluation: slots maps each symbol to the list of
        concrete elements filling its occurrences (length = multidegree).
        Symmetrized with 1/prod(mult!) so equal entries reduce to evaluate."""
        out = zero
        norm = QQ(1)
        for s, lst in slots.items():
            norm /= factorial(len(lst))
        for w, c in self.word.items():
            n = len(w)
            positions: dict = {}
            for idx, s in enumerate(w):
                positions.setdefault(s, []).append(idx)
            perms_per_sym = [list(permutations(range(len(slots[s]))))
                             for s in positions]
            syms = list(positions)

            def rec(si, filling):
                nonlocal out
                if si == len(syms):
                    acc = filling[0]
                    for idx in range(1, n):
                        acc = bracket(acc, filling[idx])
                    out = add(out, scale(acc, QQ(c, n) * norm))
                    return
                s = syms[si]
                for perm in perms_per_sym[si]:
                    f2 = list(filling)
                    for occ, idx in enumerate(positions[s]):
                        f2[idx] = slots[s][perm[occ]]
                    rec(si + 1, f2)

            rec(0, [None] * n)
        return out


@lru_cache(maxsize=None)
def _beta_bi(i: int, j: int) -> Word:
    """Bidegree (i, j) component of beta with exp(X)exp(Y) = exp(beta)."""
    if i < 0 or j < 0 or i + j < 1:
        return Word()
    if i == 0:
        return Word.sym("Y") if j == 1 else Word()
    cap = i + j
    # i * beta_{i,j} = [C(ad beta)(X)]_{(i,j)}
    acc = Word()
    if (i - 1, j) == (0, 0):
        acc = acc.add(Word.sym("X"))  # t = 0 term C_0 X
    max_t = i - 1 + j
    for t in range(1, max_t + 1):
        ct = bernoulli_c(t)
        if ct == 0:
            continue
        for combo in _compositions(i - 1, j, t):
            term = Word.sym("X")
            ok = True
            for (a, b) in reversed(combo):
                fac = _beta_bi(a, b)
                if fac.is_zero():
                    ok = False
                    break
                term = fac.bracket(term, cap)
            if ok and not term.is_zero():
                acc = acc.add(term.scale(ct))
    return acc.scale(QQ(1, i))


@lru_cache(maxsize=None)
def _compositions(a_total: int, b_total: int, t: int):
    """Ordered t-tuples of pairs (a, b) >= (0,0), a+b >= 1, with given sums."""
    if t == 0:
        return [()] if a_total == 0 and b_total == 0 else []
    out = []
    for a in range(a_total + 1):
        for b in range(b_total + 1):
            if a + b < 1:
                continue
            for rest in _compositions(a_total - a, b_total - b, t - 1):
                out.append(((a, b),) + rest)
    return out


def bch_bidegree(i: int, j: int) -> LieElement:
    if i + j < 1:
        raise ValueError("total degree must be >= 1")
    return LieElement(_beta_bi(i, j), {"X": i, "Y": j})


@lru_cache(maxsize=None)
def _beta_tri_all(total: int) -> Word:
    """Sum of all tridegree components of beta(X,Y,Z) up to total degree,
    via substitution beta(beta(X,Y), Z)."""
    cap = total
    bxy = Word()
    for n in range(1, cap + 1):
        for i in range(n + 1):
            bxy = bxy.add(_beta_bi(i, n - i))
    out = Word()
    for a in range(0, cap + 1):
        for b in range(0, cap + 1):
            if a + b < 1:
                continue
            comp = _beta_bi(a, b)  # in symbols X (slot U) and Y (slot Z)
            if comp.is_zero():
                continue
            # substitute U -> bxy, Z stays; expand word by word
            for w, c in comp.items():
                expanded = Word.one()
                for s in w:
                    f = bxy if s == "X" else Word.sym("Z")
                    expanded = expanded.mul(f, cap)
                    if expanded.is_zero():
                        break
                out = out.add(expanded.scale(c))
    return out.truncate(cap)


def bch_tridegree(i: int, j: int, k: int) -> LieElement:
    if i + j + k < 1:
        raise ValueError("total degree must be >= 1")
    total = i + j + k
    full = _beta_tri_all(total)
    part = full.multidegree_part({"X": i, "Y": j, "Z": k})
    return LieElement(part, {"X": i, "Y": j, "Z": k})


class AdMonomial:
    """ad_S(X^i Y^j) = ad(T_1) o ... o ad(T_{n-1})(T_n), T_k = X iff k in S."""

    def __init__(self, n: int, xslots: Sequence[int]):
        self.n = n
        self.xslots = frozenset(xslots)
        if any(k < 1 or k > n for k in self.xslots):
            raise ValueError("slots out of range")

    @property
    def xdegree(self) -> int:
        return len(self.xslots)

    def symbols(self) -> list:
        return ["X" if (k + 1) in self.xslots else "Y" for k in range(self.n)]

    def expansion(self) -> Word:
        syms = self.symbols()
        acc = Word.sym(syms[-1])
        for s in reversed(syms[:-1]):
            acc = Word.sym(s).bracket(acc)
        return acc

    def to_lie(self) -> LieElement:
        return LieElement(self.expansion(),
                          {"X": self.xdegree, "Y": self.n - self.xdegree})


def symmetrized_ad(mon: AdMonomial, xs: Sequence, ys: Sequence,
                   bracket, scale, add, zero):
    """(1/i!j!) sum over permutations of the slot values (paper's admon3)."""
    if len(xs) != mon.xdegree or len(ys) != mon.n - mon.xdegree:
        raise ValueError("arity mismatch")
    syms = mon.symbols()
    out = zero
    norm = QQ(1, factorial(len(xs)) * factorial(len(ys)))
    for px in permutations(range(len(xs))):
        for py in permutations(range(len(ys))):
            vals = []
            ix = iy = 0
            for s in syms:
                if s == "X":
                    vals.append(xs[px[ix]])
                    ix += 1
                else:
                    vals.append(ys[py[iy]])
                    iy += 1
            acc = vals[-1]
            for v in reversed(vals[:-1]):
                acc = bracket(v, acc)
            out = add(out, scale(acc, norm))
    return out


def evaluate(e: LieElement, assignment: dict, bracket, scale, add, zero):
    return e.evaluate(assignment, bracket, scale, add, zero)
