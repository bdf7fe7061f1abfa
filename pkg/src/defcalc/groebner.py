"""Groebner bases for submodules of free modules, syzygies, free resolutions.

Buchberger with the normal selection strategy, chain criterion, and the
product criterion in the ring (rank-1) case.  Syzygy computation runs
Buchberger on an augmented module (generators plus unit trackers) under a
block order: the original module dominates, the tracker block carries a
Schreyer-style key induced by the generators' leading terms.  GB elements
supported entirely in the tracker block are exactly the syzygies.

Resolutions keep the caller's generators as the F^0 basis; interior levels
(<= -2) are minimalized by cancelling unit entries.  Standard resolutions
keep every Koszul generator s_{ab} and record the level-wise splitting.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .ratpoly import PolyRing, Polynomial, QQ


class FreeMod:
    """Free module over a PolyRing with per-generator degree twists."""

    def __init__(self, ring: PolyRing, rank: int, twists: Sequence[int] | None = None,
                 labels: Sequence[str] | None = None):
        self.ring = ring
        self.rank = rank
        self.twists = tuple(twists) if twists is not None else tuple(0 for _ in range(rank))
        self.labels = tuple(labels) if labels is not None else tuple(
            f"g{i}" for i in range(rank))
        if len(self.twists) != rank or len(self.labels) != rank:
            raise ValueError("twists/labels length mismatch")

    def zero(self) -> "Vec":
        return Vec(self, {})

    def basis(self, i: int) -> "Vec":
        return Vec(self, {i: self.ring.one()})

    def vec(self, polys: Sequence[Polynomial]) -> "Vec":
        return Vec(self, {i: p for i, p in enumerate(polys) if not p.is_zero()})

    def __repr__(self):
        return f"FreeMod(rank={self.rank}, twists={list(self.twists)})"


class Vec:
    """Element of a free module: sparse map component -> Polynomial."""

    __slots__ = ("module", "comps")

    def __init__(self, module: FreeMod, comps: dict):
        self.module = module
        self.comps = {i: p for i, p in comps.items() if not p.is_zero()}

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "Vec") -> "Vec":
        out = dict(self.comps)
        for i, p in other.comps.items():
            q = out.get(i)
            out[i] = p if q is None else q + p
        return Vec(self.module, out)

    def __sub__(self, other: "Vec") -> "Vec":
        return self + (-other)

    def __neg__(self) -> "Vec":
        return Vec(self.module, {i: -p for i, p in self.comps.items()})

    def scale(self, f) -> "Vec":
        if isinstance(f, Polynomial) and f.is_zero():
            return self.module.zero()
        return Vec(self.module, {i: p * f for i, p in self.comps.items()})

    def mono_scale(self, expt: tuple, coeff) -> "Vec":
        m = self.module.ring.monomial(expt, coeff)
        return self.scale(m)

    def get(self, i: int) -> Polynomial:
        return self.comps.get(i, self.module.ring.zero())

    def degree(self) -> int:
        """Weighted degree including twists (-1 for zero)."""
        if not self.comps:
            return -1
        return max(p.degree() + self.module.twists[i] for i, p in self.comps.items())

    def is_homogeneous(self) -> bool:
        degs = set()
        for i, p in self.comps.items():
            for e in p.terms:
                degs.add(self.module.ring.mono_deg(e) + self.module.twists[i])
        return len(degs) <= 1

    def __eq__(self, other):
        return isinstance(other, Vec) and self.comps == other.comps

    def __str__(self):
        if not self.comps:
            return "0"
        return " + ".join(f"({p})*{self.module.labels[i]}"
                          for i, p in sorted(self.comps.items()))

    __repr__ = __str__


class ModuleOrder:
    """Monomial order on a free module.

    mode 'TOP': ring order on monomials, ties broken by lower component.
    mode 'block': components are split in blocks (block 0 beats block 1);
    within the dominant block TOP, within the tracker block a Schreyer key
    (monomial times assigned leading monomial, tie by lower component).
    """

    def __init__(self, module: FreeMod, mode: str = "TOP",
                 block_start: int | None = None,
                 schreyer_lm: Sequence[tuple] | None = None):
        self.module = module
        self.ring = module.ring
        self.mode = mode
        self.block_start = block_start
        self.schreyer_lm = schreyer_lm

    def key(self, comp: int, expt: tuple):
        rk = self.ring.mono_key
        if self.mode == "TOP":
            return (rk(expt), -comp)
        # block mode
        if comp < self.block_start:
            return (1, rk(expt), -comp)
        lm = self.schreyer_lm[comp - self.block_start]
        return (0, rk(self.ring.mono_mul(expt, lm)), -comp)

    def lead(self, v: Vec):
        """(comp, expt, coeff) of the leading module term of v."""
        best = None
        for i, p in v.comps.items():
            for e, c in p.terms.items():
                k = self.key(i, e)
                if best is None or k > best[0]:
                    best = (k, i, e, c)
        if best is None:
            raise ValueError("zero vector has no lead")
        return best[1], best[2], best[3]


def normal_form(v: Vec, gb: Sequence[Vec], order: ModuleOrder) -> Vec:
    """Full remainder of v on division by gb (lowest reducer index first)."""
    leads = [order.lead(g) for g in gb]
    ring = order.ring
    rem = v.module.zero()
    work = v
    while not work.is_zero():
        comp, expt, coeff = order.lead(work)
        reduced = False
        for idx, (gc, ge, gcf) in enumerate(leads):
            if gc == comp and ring.mono_divides(ge, expt):
                q = ring.mono_div(expt, ge)
                work = work - gb[idx].mono_scale(q, coeff / gcf)
                reduced = True
                break
        if not reduced:
            t = Vec(work.module, {comp: ring.monomial(expt, coeff)})
            rem = rem + t
            work = work - t
    return rem


def _top_reduce(v: Vec, gens: list, leads: list, order: ModuleOrder) -> Vec:
    """Reduce only leading terms; cheaper inside the Buchberger loop."""
    ring = order.ring
    while not v.is_zero():
        comp, expt, coeff = order.lead(v)
        hit = False
        for idx, (gc, ge, gcf) in enumerate(leads):
            if gc == comp and ring.mono_divides(ge, expt):
                q = ring.mono_div(expt, ge)
                v = v - gens[idx].mono_scale(q, coeff / gcf)
                hit = True
                break
        if not hit:
            return v
    return v


def buchberger(gens: Sequence[Vec], order: ModuleOrder | None = None) -> list:
    """Reduced monic Groebner basis (deterministic, sorted by leading term)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    module = gens[0].module
    if order is None:
        order = ModuleOrder(module)
    ring = order.ring

    G: list = []
    leads: list = []
    for g in gens:
        h = _top_reduce(g, G, leads, order)
        if not h.is_zero():
            c, e, cf = order.lead(h)
            G.append(h.scale(QQ(1) / cf))
            leads.append((c, e, QQ(1)))

    rank1 = module.rank == 1

    def lcm_key(i, j):
        ci, ei, _ = leads[i]
        cj, ej, _ = leads[j]
        if ci != cj:
            return None
        lcm = ring.mono_lcm(ei, ej)
        return lcm

    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))
             if leads[i][0] == leads[j][0]}

    def chain_redundant(i, j, lcm):
        for k in range(len(G)):
            if k in (i, j):
                continue
            ck, ek, _ = leads[k]
            if ck != leads[i][0] or not ring.mono_divides(ek, lcm):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a not in pairs and b not in pairs:
                return True
        return False

    while pairs:
        # normal strategy: smallest lcm in the order
        best, best_key = None, None
        for (i, j) in pairs:
            lcm = lcm_key(i, j)
            k = order.key(leads[i][0], lcm)
            if best_key is None or k < best_key:
                best, best_key = (i, j), k
        i, j = best
        pairs.discard((i, j))
        ci, ei, _ = leads[i]
        cj, ej, _ = leads[j]
        lcm = ring.mono_lcm(ei, ej)
        if rank1 and ring.mono_mul(ei, ej) == lcm:
            continue  # product criterion (valid only in rank 1)
        if chain_redundant(i, j, lcm):
            continue
        s = (G[i].mono_scale(ring.mono_div(lcm, ei), 1)
             - G[j].mono_scale(ring.mono_div(lcm, ej), 1))
        h = _top_reduce(s, G, leads, order)
        if h.is_zero():
            continue
        c, e, cf = order.lead(h)
        h = h.scale(QQ(1) / cf)
        idx = len(G)
        G.append(h)
        leads.append((c, e, QQ(1)))
        for k in range(idx):
            if leads[k][0] == c:
                pairs.add((k, idx))

    # inter-reduce to the unique reduced basis
    changed = True
    while changed:
        changed = False
        for i in range(len(G)):
            others = G[:i] + G[i + 1:]
            if not others:
                continue
            h = normal_form(G[i], others, order)
            if h.is_zero():
                G.pop(i)
                changed = True
                break
            if h != G[i]:
                c, e, cf = order.lead(h)
                G[i] = h.scale(QQ(1) / cf)
                changed = True
    G.sort(key=lambda g: order.key(*order.lead(g)[:2]), reverse=True)
    return G


# -- syzygies and lifting ----------------------------------------------------


def _augmented_setup(gens: Sequence[Vec]):
    module = gens[0].module
    ring = module.ring
    s = len(gens)
    big = FreeMod(ring, module.rank + s,
                  twists=tuple(module.twists) + tuple(g.degree() for g in gens))
    base_order = ModuleOrder(module)
    lms = []
    for g in gens:
        _, e, _ = base_order.lead(g)
        lms.append(e)
    order = ModuleOrder(big, mode="block", block_start=module.rank, schreyer_lm=lms)
    aug = []
    for k, g in enumerate(gens):
        comps = dict(g.comps)
        comps[module.rank + k] = ring.one()
        aug.append(Vec(big, comps))
    return big, order, aug


def syzygy_module(gens: Sequence[Vec]) -> list:
    """Generators of the syzygy module {u in A^s : sum u_i gens_i = 0}."""
    gens = list(gens)
    nonzero = [(k, g) for k, g in enumerate(gens) if not g.is_zero()]
    s = len(gens)
    if not nonzero:
        return []
    module = nonzero[0][1].module
    ring = module.ring
    tracker = FreeMod(ring, s, twists=tuple(
        g.degree() if not g.is_zero() else 0 for g in gens))
    out = []
    # zero columns are free syzygies
    for k, g in enumerate(gens):
        if g.is_zero():
            out.append(tracker.basis(k))
    live = [g for _, g in nonzero]
    live_idx = [k for k, _ in nonzero]
    big, order, aug = _augmented_setup(live)
    G = buchberger(aug, order)
    for h in G:
        if all(i >= module.rank for i in h.comps):
            comps = {live_idx[i - module.rank]: p for i, p in h.comps.items()}
            out.append(Vec(tracker, comps))
    return out


def lift_through(v: Vec, gens: Sequence[Vec]) -> Optional[list]:
    """Coefficients u with v = sum u_i gens_i, or None if v is not in the span."""
    gens = list(gens)
    if v.is_zero():
        return [v.module.ring.zero()] * len(gens)
    nonzero = [(k, g) for k, g in enumerate(gens) if not g.is_zero()]
    if not nonzero:
        return None
    module = v.module
    ring = module.ring
    live = [g for _, g in nonzero]
    big, order, aug = _augmented_setup(live)
    G = buchberger(aug, order)
    ext = Vec(big, dict(v.comps))
    r = normal_form(ext, G, order)
    if any(i < module.rank for i in r.comps):
        return None
    coeffs = [ring.zero()] * len(gens)
    for i, p in r.comps.items():
        coeffs[nonzero[i - module.rank][0]] = -p
    return coeffs


def ideal_gb(gens: Sequence[Polynomial]) -> list:
    """Reduced GB of an ideal, returned as polynomials."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    mod = FreeMod(ring, 1)
    G = buchberger([mod.vec([g]) for g in gens])
    return [g.get(0) for g in G]


def ideal_normal_form(f: Polynomial, gb_polys: Sequence[Polynomial]) -> Polynomial:
    ring = f.ring
    mod = FreeMod(ring, 1)
    order = ModuleOrder(mod)
    gb = [mod.vec([g]) for g in gb_polys if not g.is_zero()]
    if not gb:
        return f
    return normal_form(mod.vec([f]), gb, order).get(0)


# -- resolutions -------------------------------------------------------------


class Resolution:
    """Finite free resolution ... -> F^-1 -> F^0 -> I (+ F^1 = A for F_+).

    terms[i] is a FreeMod for i = 1, 0, -1, ...; diffs[i] is the matrix of
    d: F^i -> F^{i+1} as rows over the source basis (diffs[0] is the
    augmentation into F^1 = A).  graded is True when every differential is
    homogeneous for the recorded twists.
    """

    def __init__(self, ring: PolyRing, gens: Sequence[Polynomial]):
        self.ring = ring
        self.gens = list(gens)
        self.terms: dict = {}
        self.diffs: dict = {}
        self.graded = True
        self.standard = False
        self.koszul_index: dict = {}   # (a, b) -> index in F^-1, a < b
        self.split0: dict = {}         # level -> sorted indices of the F_0 part
        self.split1: dict = {}         # level -> sorted indices of the F_1 part
        self.notes: list = []

    @property
    def min_level(self) -> int:
        return min(self.terms)

    def levels(self):
        return sorted(self.terms)

    def rank(self, i: int) -> int:
        m = self.terms.get(i)
        return m.rank if m else 0

    def module(self, i: int) -> FreeMod:
        m = self.terms.get(i)
        return m if m is not None else FreeMod(self.ring, 0)

    def d_vec(self, i: int, v: Vec) -> Vec:
        """Apply d: F^i -> F^{i+1} to v (zero when no differential stored)."""
        tgt = self.module(i + 1)
        out = tgt.zero()
        rows = self.diffs.get(i)
        if rows is None:
            return out
        for comp, p in v.comps.items():
            row = rows[comp]
            for j, entry in enumerate(row):
                if not entry.is_zero():
                    out = out + Vec(tgt, {j: entry * p})
        return out

    def d_basis(self, i: int, comp: int) -> Vec:
        tgt = self.module(i + 1)
        rows = self.diffs.get(i)
        if rows is None:
            return tgt.zero()
        return tgt.vec(rows[comp])

    def check_d_squared(self) -> bool:
        for i in self.levels():
            if i + 1 not in self.diffs:
                continue
            if i not in self.diffs:
                continue
            for comp in range(self.rank(i)):
                if not self.d_vec(i + 1, self.d_basis(i, comp)).is_zero():
                    return False
        return True

    def check_exactness(self) -> bool:
        """Every kernel generator at level i reduces to 0 mod im d^{i-1}."""
        for i in self.levels():
            if i >= 0 or i - 0 not in self.diffs:
                continue
            cols = [self.d_basis(i, c) for c in range(self.rank(i))]
            if not cols:
                continue
            syz = syzygy_module(cols)
            if not syz:
                continue
            below = self.diffs.get(i - 1)
            if below is None:
                if syz:
                    return False
                continue
            src = self.module(i)
            image = [self.d_basis(i - 1, c) for c in range(self.rank(i - 1))]
            order = ModuleOrder(src)
            gb = buchberger([v for v in image if not v.is_zero()], order)
            for z in syz:
                zv = Vec(src, dict(z.comps))
                if not normal_form(zv, gb, order).is_zero():
                    return False
        return True

    def shape(self) -> dict:
        return {str(i): {"rank": self.rank(i), "twists": list(self.terms[i].twists)}
                for i in self.levels()}


def _twists_for(images: Sequence[Vec], graded_flag: list) -> list:
    """Degree twist per generator; flips graded_flag[0] off if inconsistent."""
    tw = []
    for v in images:
        if v.is_zero():
            tw.append(0)
            continue
        if not v.is_homogeneous():
            graded_flag[0] = False
        tw.append(v.degree())
    return tw


def free_resolution(ring: PolyRing, gens: Sequence[Polynomial],
                    max_len: int | None = None) -> Resolution:
    """Free resolution of the ideal (gens); keeps gens as the F^0 basis."""
    gens = [g for g in gens if not g.is_zero()]
    res = Resolution(ring, gens)
    max_len = max_len if max_len is not None else ring.nvars + 2

    res.terms[1] = FreeMod(ring, 1, twists=[0], labels=["1"])
    graded = [all(g.is_homogeneous() for g in gens)]
    f0 = FreeMod(ring, len(gens), twists=[g.degree() for g in gens],
                 labels=[f"e{a+1}" for a in range(len(gens))])
    res.terms[0] = f0
    res.diffs[0] = [[g] for g in gens]

    level = 0
    while True:
        cols = [res.d_basis(level, c) for c in range(res.rank(level))]
        if not cols:
            break
        syz = syzygy_module(cols)
        syz = [s for s in syz if not s.is_zero()]
        if not syz:
            break
        if -level >= max_len:
            raise ValueError(f"free_resolution: max_len={max_len} exhausted "
                             f"before exactness at level {level - 1}")
        src = res.module(level)
        images = [Vec(src, dict(s.comps)) for s in syz]
        tw = _twists_for(images, graded)
        lvl = level - 1
        fm = FreeMod(ring, len(images), twists=tw,
                     labels=[f"G[{lvl}]{k+1}" for k in range(len(images))])
        res.terms[lvl] = fm
        res.diffs[lvl] = [[images[k].get(j) for j in range(src.rank)]
                          for k in range(len(images))]
        level = lvl

    res.graded = graded[0]
    _minimize_interior(res)
    return res


def _minimize_interior(res: Resolution):
    """Cancel unit entries in differentials at levels <= -2."""
    changed = True
    while changed:
        changed = False
        for i in sorted(res.diffs):
            if i > -2:
                continue
            mat = res.diffs[i]
            nr = len(mat)
            nc = res.rank(i + 1)
            pivot = None
            for r in range(nr):
                for c in range(nc):
                    e = mat[r][c]
                    if not e.is_zero() and e.is_constant():
                        pivot = (r, c, e.constant())
                        break
                if pivot:
                    break
            if not pivot:
                continue
            r0, c0, u = pivot
            # clear column c0 with row r0
            for r in range(nr):
                if r != r0 and not mat[r][c0].is_zero():
                    f = mat[r][c0] / u
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[r0])]
                    if i - 1 in res.diffs:
                        below = res.diffs[i - 1]
                        for row in below:
                            row[r0] = row[r0] + f * row[r]
            # clear row r0 with column c0
            for c in range(nc):
                if c != c0 and not mat[r0][c].is_zero():
                    f = mat[r0][c] / u
                    for r in range(nr):
                        mat[r][c] = mat[r][c] - f * mat[r][c0]
                    if i + 1 in res.diffs:
                        above = res.diffs[i + 1]
                        above[c0] = [a + f * b for a, b in
                                     zip(above[c0], above[c])]
            # delete row r0 (source gen) and column c0 (target gen)
            def drop(module: FreeMod, k: int) -> FreeMod:
                keep = [j for j in range(module.rank) if j != k]
                return FreeMod(module.ring, len(keep),
                               twists=[module.twists[j] for j in keep],
                               labels=[module.labels[j] for j in keep])

            res.diffs[i] = [row[:c0] + row[c0 + 1:]
                            for r, row in enumerate(mat) if r != r0]
            res.terms[i] = drop(res.terms[i], r0)
            res.terms[i + 1] = drop(res.terms[i + 1], c0)
            if i - 1 in res.diffs:
                res.diffs[i - 1] = [row[:r0] + row[r0 + 1:]
                                    for row in res.diffs[i - 1]]
            if i + 1 in res.diffs:
                res.diffs[i + 1] = res.diffs[i + 1][:c0] + res.diffs[i + 1][c0 + 1:]
            changed = True
            break
    # trim empty bottom levels
    while res.min_level < 0 and res.rank(res.min_level) == 0:
        lvl = res.min_level
        res.diffs.pop(lvl, None)
        res.terms.pop(lvl, None)


def standard_resolution(ring: PolyRing, gens: Sequence[Polynomial],
                        max_len: int | None = None) -> Resolution:
    """Resolution with Koszul splitting F^i = F^i_0 + F^i_1 for i < 0.

    F^{-1}_0 keeps one generator s_ab per pair a < b (even when redundant),
    mapping to f_a e_b - f_b e_a; deeper F_0 levels resolve the Koszul
    submodule.  F_1 complements are kernel generators reduced modulo the
    F_0 image.
    """
    gens = [g for g in gens if not g.is_zero()]
    res = Resolution(ring, gens)
    res.standard = True
    max_len = max_len if max_len is not None else ring.nvars + 3
    n0 = len(gens)

    res.terms[1] = FreeMod(ring, 1, twists=[0], labels=["1"])
    graded = [all(g.is_homogeneous() for g in gens)]
    f0 = FreeMod(ring, n0, twists=[g.degree() for g in gens],
                 labels=[f"e{a+1}" for a in range(n0)])
    res.terms[0] = f0
    res.diffs[0] = [[g] for g in gens]

    # level -1: Koszul generators + complement
    koszul_imgs = []
    koszul_pairs = []
    for a in range(n0):
        for b in range(a + 1, n0):
            v = Vec(f0, {b: gens[a], a: -gens[b]})
            koszul_imgs.append(v)
            koszul_pairs.append((a, b))

    order0 = ModuleOrder(f0)
    kgb = buchberger([v for v in koszul_imgs if not v.is_zero()], order0)

    syz = [Vec(f0, dict(s.comps)) for s in syzygy_module(
        [res.d_basis(0, c) for c in range(n0)])]
    complement = []
    for z in syz:
        r = normal_form(z, kgb, order0) if kgb else z
        if not r.is_zero():
            # keep independent complements: reduce against chosen ones too
            if complement:
                cgb = buchberger(complement + kgb, order0)
                r2 = normal_form(z, cgb, order0)
                if r2.is_zero():
                    continue
            complement.append(r)

    images1 = koszul_imgs + complement
    labels1 = [f"s{a+1}{b+1}" for (a, b) in koszul_pairs] + \
        [f"t[-1]{k+1}" for k in range(len(complement))]
    tw1 = _twists_for(images1, graded)
    # zero Koszul images (n0 == 1 has none; a == b impossible) keep twist slot
    fm1 = FreeMod(ring, len(images1), twists=tw1, labels=labels1)
    res.terms[-1] = fm1
    res.diffs[-1] = [[img.get(j) for j in range(n0)] for img in images1]
    res.koszul_index = {pair: k for k, pair in enumerate(koszul_pairs)}
    res.split0[-1] = list(range(len(koszul_pairs)))
    res.split1[-1] = list(range(len(koszul_pairs), len(images1)))

    level = -1
    while True:
        src = res.module(level)
        cols = [res.d_basis(level, c) for c in range(src.rank)]
        if not cols:
            break
        syz = [s for s in syzygy_module(cols) if not s.is_zero()]
        idx0 = res.split0[level]
        # F_0 part: syzygies of the Koszul-part columns alone (resolves K_0)
        part0 = []
        if idx0:
            syz0 = syzygy_module([cols[c] for c in idx0])
            for z in syz0:
                if not z.is_zero():
                    part0.append(Vec(src, {idx0[c]: p for c, p in z.comps.items()}))
        order_src = ModuleOrder(src)
        gb0 = buchberger(part0, order_src) if part0 else []
        part1 = []
        for z in syz:
            zv = Vec(src, dict(z.comps))
            r = normal_form(zv, gb0, order_src) if gb0 else zv
            if r.is_zero():
                continue
            if part1:
                pgb = buchberger(part1 + part0, order_src)
                if normal_form(zv, pgb, order_src).is_zero():
                    continue
            part1.append(r)
        images = part0 + part1
        if not images:
            break
        if -level >= max_len:
            raise ValueError(f"standard_resolution: max_len={max_len} exhausted")
        lvl = level - 1
        tw = _twists_for(images, graded)
        labels = [f"k[{lvl}]{k+1}" for k in range(len(part0))] + \
                 [f"t[{lvl}]{k+1}" for k in range(len(part1))]
        fm = FreeMod(ring, len(images), twists=tw, labels=labels)
        res.terms[lvl] = fm
        res.diffs[lvl] = [[img.get(j) for j in range(src.rank)] for img in images]
        res.split0[lvl] = list(range(len(part0)))
        res.split1[lvl] = list(range(len(part0), len(images)))
        level = lvl

    res.graded = graded[0]
    return res
