"""Bounded chain complexes of free modules, Hom complexes, mapping cones,
cohomology as finitely presented modules, Hilbert functions, and Ext.

Conventions (locked by the d^2 = 0 tests everywhere):
  * differentials go up: d^i : C^i -> C^{i+1}, matrices are rows over the
    source basis;
  * Hom complex: (d phi)^j = phi o d_F + (-1)^{i+1} d_G o phi for phi of
    degree i (Hom(F^j, G^{i+j}) blocks);
  * cone(f: F -> G)^i = F^{i+1} (+) G^i with d(a, b) = (-d_F a, f(a) + d_G b).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .ratpoly import PolyRing, Polynomial, QQ
from .groebner import (FreeMod, ModuleOrder, Vec, buchberger, lift_through,
                       normal_form, syzygy_module)

FreeModule = FreeMod


class ChainComplex:
    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.modules: dict = {}
        self.diffs: dict = {}

    def set_module(self, i: int, m: FreeMod):
        self.modules[i] = m

    def set_diff(self, i: int, mat):
        self.diffs[i] = mat

    def module(self, i: int) -> FreeMod:
        m = self.modules.get(i)
        if m is None:
            m = FreeMod(self.ring, 0)
        return m

    def rank(self, i: int) -> int:
        return self.module(i).rank

    def levels(self):
        return sorted(self.modules)

    def support(self):
        return [i for i in self.levels() if self.rank(i) > 0]

    def d_basis(self, i: int, comp: int) -> Vec:
        tgt = self.module(i + 1)
        mat = self.diffs.get(i)
        if mat is None:
            return tgt.zero()
        return tgt.vec(mat[comp])

    def d_vec(self, i: int, v: Vec) -> Vec:
        tgt = self.module(i + 1)
        out = tgt.zero()
        mat = self.diffs.get(i)
        if mat is None:
            return out
        for comp, p in v.comps.items():
            for j, entry in enumerate(mat[comp]):
                if not entry.is_zero():
                    out = out + Vec(tgt, {j: entry * p})
        return out

    def check_d_squared(self) -> bool:
        for i in self.levels():
            for comp in range(self.rank(i)):
                if not self.d_vec(i + 1, self.d_basis(i, comp)).is_zero():
                    return False
        return True

    def is_graded(self) -> bool:
        for i in self.levels():
            for comp in range(self.rank(i)):
                v = self.d_basis(i, comp)
                if v.is_zero():
                    continue
                if not v.is_homogeneous() or v.degree() != self.module(i).twists[comp]:
                    return False
        return True

    def shape(self) -> dict:
        return {str(i): {"rank": self.rank(i),
                         "twists": list(self.module(i).twists)}
                for i in self.support()}


class ComplexMap:
    """Degree-0 map of complexes; mats[i]: rows over src^i basis into tgt^i."""

    def __init__(self, src: ChainComplex, tgt: ChainComplex, mats: dict):
        self.src = src
        self.tgt = tgt
        self.mats = mats

    def apply_basis(self, i: int, comp: int) -> Vec:
        m = self.tgt.module(i)
        mat = self.mats.get(i)
        if mat is None:
            return m.zero()
        return m.vec(mat[comp])

    def apply(self, i: int, v: Vec) -> Vec:
        out = self.tgt.module(i).zero()
        for comp, p in v.comps.items():
            out = out + self.apply_basis(i, comp).scale(p)
        return out

    def is_chain_map(self) -> bool:
        for i in self.src.levels():
            for comp in range(self.src.rank(i)):
                a = self.apply(i + 1, self.src.d_basis(i, comp))
                b = self.tgt.d_vec(i, self.apply_basis(i, comp))
                if not (a - b).is_zero():
                    return False
        return True


def resolution_complex(res, plus: bool = True) -> ChainComplex:
    """The complex F_+ (levels <= 1) or F (levels <= 0) of a Resolution."""
    C = ChainComplex(res.ring)
    top = 1 if plus else 0
    for i in res.levels():
        if i > top:
            continue
        C.set_module(i, res.terms[i])
        if i < top and i in res.diffs:
            C.set_diff(i, [list(row) for row in res.diffs[i]])
    return C


def hom_complex(F: ChainComplex, G: ChainComplex):
    """Hom^.(F, G); returns (complex, index) with index[i] the list of
    (j, beta, alpha) basis labels of Hom(F^j, G^{i+j}) blocks in order."""
    if F.ring != G.ring:
        raise ValueError("ring mismatch")
    ring = F.ring
    H = ChainComplex(ring)
    index: dict = {}
    degs = set()
    for j in F.support():
        for k in G.support():
            degs.add(k - j)
    for i in sorted(degs | {d + 1 for d in degs}):
        basis, twists, labels = [], [], []
        for j in sorted(F.support()):
            gm = G.module(i + j)
            fm = F.module(j)
            for beta in range(fm.rank):
                for alpha in range(gm.rank):
                    basis.append((j, beta, alpha))
                    twists.append(gm.twists[alpha] - fm.twists[beta])
                    labels.append(f"{fm.labels[beta]}*->{gm.labels[alpha]}")
        index[i] = basis
        H.set_module(i, FreeMod(ring, len(basis), twists=twists, labels=labels))
    pos = {i: {b: k for k, b in enumerate(index[i])} for i in index}
    for i in sorted(index):
        if i + 1 not in index:
            continue
        src, tgt = index[i], index[i + 1]
        mat = [[ring.zero() for _ in tgt] for _ in src]
        sgn = QQ(-1) if (i + 1) % 2 else QQ(1)
        for r, (j, beta, alpha) in enumerate(src):
            dF = F.diffs.get(j - 1)
            if dF is not None:
                for bp in range(F.rank(j - 1)):
                    entry = dF[bp][beta]
                    if not entry.is_zero():
                        c = pos[i + 1].get((j - 1, bp, alpha))
                        if c is not None:
                            mat[r][c] = mat[r][c] + entry
            dG = G.diffs.get(i + j)
            if dG is not None:
                for ap in range(G.rank(i + j + 1)):
                    entry = dG[alpha][ap]
                    if not entry.is_zero():
                        c = pos[i + 1].get((j, beta, ap))
                        if c is not None:
                            mat[r][c] = mat[r][c] + sgn * entry
        H.set_diff(i, mat)
    return H, index


def mapping_cone(f: ComplexMap) -> ChainComplex:
    F, G = f.src, f.tgt
    ring = F.ring
    C = ChainComplex(ring)
    levels = set()
    for i in F.support():
        levels.add(i - 1)
    for i in G.support():
        levels.add(i)
    for i in sorted(levels):
        fm = F.module(i + 1)
        gm = G.module(i)
        tw = list(fm.twists) + list(gm.twists)
        labels = [f"F:{l}" for l in fm.labels] + [f"G:{l}" for l in gm.labels]
        C.set_module(i, FreeMod(ring, fm.rank + gm.rank, twists=tw, labels=labels))
    for i in sorted(levels):
        src = C.module(i)
        tgt = C.module(i + 1)
        if src.rank == 0:
            continue
        fr = F.rank(i + 1)
        ftr = F.rank(i + 2)
        mat = [[ring.zero() for _ in range(tgt.rank)] for _ in range(src.rank)]
        dF = F.diffs.get(i + 1)
        fm_map = f.mats.get(i + 1)
        dG = G.diffs.get(i)
        for r in range(fr):
            if dF is not None:
                for c in range(ftr):
                    mat[r][c] = -dF[r][c]
            if fm_map is not None:
                for c in range(G.rank(i + 1)):
                    mat[r][ftr + c] = fm_map[r][c]
        for r in range(G.rank(i)):
            if dG is not None:
                for c in range(G.rank(i + 1)):
                    mat[fr + r][ftr + c] = dG[r][c]
        C.set_diff(i, mat)
    return C


class PresentedModule:
    """Cokernel of relations inside a free module (rank, twists)."""

    def __init__(self, ring: PolyRing, rank: int, relations: Sequence[Vec],
                 twists: Sequence[int] | None = None,
                 labels: Sequence[str] | None = None):
        self.ring = ring
        self.ambient = FreeMod(ring, rank, twists=twists, labels=labels)
        self.relations = [r for r in relations if not r.is_zero()]
        self._gb = None
        self._order = ModuleOrder(self.ambient)

    @property
    def rank(self):
        return self.ambient.rank

    @property
    def twists(self):
        return self.ambient.twists

    def gb(self):
        if self._gb is None:
            rel = [Vec(self.ambient, dict(r.comps)) for r in self.relations]
            self._gb = buchberger(rel, self._order) if rel else []
        return self._gb

    def reduce(self, v: Vec) -> Vec:
        g = self.gb()
        return normal_form(v, g, self._order) if g else v

    def is_zero(self) -> bool:
        return all(self.reduce(self.ambient.basis(j)).is_zero()
                   for j in range(self.rank))

    def is_graded(self) -> bool:
        return all(r.is_homogeneous() for r in self.relations)

    def _lead_monomials(self):
        return [self._order.lead(g)[:2] for g in self.gb()]

    def hilbert(self, d: int) -> int:
        """dim_QQ of the degree-d graded piece."""
        if not self.is_graded():
            raise ValueError("hilbert function needs a homogeneous presentation")
        leads = self._lead_monomials()
        total = 0
        for j in range(self.rank):
            dd = d - self.twists[j]
            if dd < 0:
                continue
            for m in self.ring.monomials_of_degree(dd):
                if not any(c == j and self.ring.mono_divides(e, m)
                           for c, e in leads):
                    total += 1
        return total

    def hilbert_table(self, window) -> dict:
        lo, hi = window
        return {d: self.hilbert(d) for d in range(lo, hi + 1)}

    def is_finite_dimensional(self) -> bool:
        leads = self._lead_monomials()
        n = self.ring.nvars
        for j in range(self.rank):
            for i in range(n):
                ok = False
                for c, e in leads:
                    if c == j and all(e[k] == 0 for k in range(n) if k != i):
                        ok = True
                        break
                if not ok:
                    return False
        return True

    def total_dimension(self, cap: int = 60) -> int:
        """QQ-dimension, if finite (staircase count)."""
        if not self.is_finite_dimensional():
            raise ValueError("module is not finite dimensional")
        leads = self._lead_monomials()
        total = 0
        for j in range(self.rank):
            bounds = []
            for i in range(self.ring.nvars):
                b = min((e[i] for c, e in leads if c == j and
                         all(e[k] == 0 for k in range(self.ring.nvars) if k != i)),
                        default=cap)
                bounds.append(b)
            def rec(i, acc):
                nonlocal total
                if i == self.ring.nvars:
                    m = tuple(acc)
                    if not any(c == j and self.ring.mono_divides(e, m)
                               for c, e in leads):
                        total += 1
                    return
                for v in range(bounds[i]):
                    acc.append(v)
                    rec(i + 1, acc)
                    acc.pop()
            rec(0, [])
        return total

    def __repr__(self):
        return (f"PresentedModule(rank={self.rank}, twists={list(self.twists)}, "
                f"{len(self.relations)} relations)")


def zero_module(ring: PolyRing) -> PresentedModule:
    return PresentedModule(ring, 0, [])


def subquotient(ambient: FreeMod, out_images: Sequence[Vec],
                out_rel: Sequence[Vec], in_images: Sequence[Vec],
                amb_rel: Sequence[Vec]) -> PresentedModule:
    """Presentation of ker(out mod out_rel) / (span(in_images) + span(amb_rel)).

    out_images[c] is the image of ambient basis c under the outgoing map.
    """
    ring = ambient.ring
    if ambient.rank == 0:
        return zero_module(ring)
    cols = list(out_images)
    extra = [r for r in out_rel if not r.is_zero()]
    kgens: list = []
    if all(v.is_zero() for v in cols):
        kgens = [ambient.basis(j) for j in range(ambient.rank)]
    else:
        syz = syzygy_module(cols + extra)
        seen = []
        order = ModuleOrder(ambient)
        for z in syz:
            u = Vec(ambient, {c: p for c, p in z.comps.items()
                              if c < ambient.rank})
            if u.is_zero():
                continue
            if seen:
                gb = buchberger(seen, order)
                if normal_form(u, gb, order).is_zero():
                    continue
            seen.append(u)
        kgens = seen
    if not kgens:
        return zero_module(ring)
    rel_rows = []
    tracker = FreeMod(ring, len(kgens), twists=[v.degree() for v in kgens])
    for v in list(in_images) + [r for r in amb_rel if not r.is_zero()]:
        if v.is_zero():
            continue
        coeffs = lift_through(v, kgens)
        if coeffs is None:
            raise ValueError("subquotient: relation does not lie in the kernel")
        rel_rows.append(tracker.vec(coeffs))
    for z in syzygy_module(kgens):
        rel_rows.append(Vec(tracker, dict(z.comps)))
    return PresentedModule(ring, len(kgens), rel_rows,
                           twists=[v.degree() for v in kgens])


def cohomology(C: ChainComplex, i: int,
               coeff_relations: Sequence[Polynomial] | None = None) -> PresentedModule:
    """H^i(C), optionally with coefficients in A/(coeff_relations)."""
    amb = C.module(i)
    if amb.rank == 0:
        return zero_module(C.ring)
    out_images = [C.d_basis(i, c) for c in range(amb.rank)]
    in_images = [C.d_basis(i - 1, c) for c in range(C.rank(i - 1))]
    out_rel: list = []
    amb_rel: list = []
    if coeff_relations:
        tgt = C.module(i + 1)
        for f in coeff_relations:
            for j in range(tgt.rank):
                out_rel.append(Vec(tgt, {j: f}))
            for j in range(amb.rank):
                amb_rel.append(Vec(amb, {j: f}))
    return subquotient(amb, out_images, out_rel, in_images, amb_rel)


def hilbert_function(M: PresentedModule, d: int) -> int:
    return M.hilbert(d)


# -- graded slice machinery ---------------------------------------------------
# For a graded complex of free modules the degree-d slice of H^i is computed
# by exact QQ linear algebra; this is the Hilbert function of the cohomology
# without presenting it.

from . import linalg as _la


def slice_basis(module: FreeMod, d: int) -> list:
    """QQ-basis [(comp, expt)] of the degree-d piece of a free module."""
    out = []
    ring = module.ring
    for j in range(module.rank):
        dd = d - module.twists[j]
        if dd < 0:
            continue
        for m in ring.monomials_of_degree(dd):
            out.append((j, m))
    return out


def vec_slice_coords(v: Vec, basis: list, pos: dict):
    coords = [QQ(0)] * len(basis)
    for comp, p in v.comps.items():
        for e, c in p.terms.items():
            k = pos.get((comp, e))
            if k is None:
                if c:
                    raise ValueError("vector is not homogeneous of this degree")
                continue
            coords[k] += c
    return coords


def slice_map(C: ChainComplex, i: int, d: int, src_basis=None, tgt_basis=None):
    """Matrix of d^i on degree-d slices (rows = source slice basis)."""
    src = src_basis if src_basis is not None else slice_basis(C.module(i), d)
    tgt = tgt_basis if tgt_basis is not None else slice_basis(C.module(i + 1), d)
    pos = {b: k for k, b in enumerate(tgt)}
    ring = C.ring
    rows = []
    for (comp, e) in src:
        img = C.d_basis(i, comp).scale(ring.monomial(e))
        rows.append(vec_slice_coords(img, tgt, pos))
    return rows, src, tgt


def _relation_slice_vectors(module: FreeMod, d: int, basis, pos,
                            coeff_relations) -> list:
    out = []
    ring = module.ring
    for f in coeff_relations or []:
        fd = f.degree()
        for j in range(module.rank):
            dd = d - module.twists[j] - fd
            if dd < 0:
                continue
            for m in ring.monomials_of_degree(dd):
                v = Vec(module, {j: f * ring.monomial(m)})
                out.append(vec_slice_coords(v, basis, pos))
    return out


def slice_cohomology_dim(C: ChainComplex, i: int, d: int,
                         coeff_relations: Sequence[Polynomial] | None = None) -> int:
    """dim_QQ of the degree-d piece of H^i(C (x) A/(coeff_relations))."""
    amb = C.module(i)
    src = slice_basis(amb, d)
    if not src:
        return 0
    tgt = slice_basis(C.module(i + 1), d)
    tpos = {b: k for k, b in enumerate(tgt)}
    M, _, _ = slice_map(C, i, d, src, tgt)
    rel_tgt = _relation_slice_vectors(C.module(i + 1), d, tgt, tpos,
                                      coeff_relations)
    if rel_tgt:
        rank_rel = _la.rank(rel_tgt)
        rank_join = _la.rank(M + rel_tgt)
        dim_ker = len(src) - (rank_join - rank_rel)
    else:
        dim_ker = len(src) - _la.rank(M)
    # image of d^{i-1} plus ambient relations
    prev_src = slice_basis(C.module(i - 1), d)
    spos = {b: k for k, b in enumerate(src)}
    img_rows = []
    if prev_src:
        P, _, _ = slice_map(C, i - 1, d, prev_src, src)
        img_rows.extend(P)
    img_rows.extend(_relation_slice_vectors(amb, d, src, spos, coeff_relations))
    dim_img = _la.rank(img_rows) if img_rows else 0
    return dim_ker - dim_img


def slice_cohomology_table(C: ChainComplex, i: int, window,
                           coeff_relations=None) -> dict:
    lo, hi = window
    return {d: slice_cohomology_dim(C, i, d, coeff_relations)
            for d in range(lo, hi + 1)}


def slice_cohomology_basis(C: ChainComplex, i: int, d: int,
                           coeff_relations=None):
    """Representative vectors (as Vec in C^i) of a basis of H^i(C)_d."""
    amb = C.module(i)
    src = slice_basis(amb, d)
    if not src:
        return []
    tgt = slice_basis(C.module(i + 1), d)
    tpos = {b: k for k, b in enumerate(tgt)}
    M, _, _ = slice_map(C, i, d, src, tgt)
    rel_tgt = _relation_slice_vectors(C.module(i + 1), d, tgt, tpos,
                                      coeff_relations)
    if rel_tgt:
        # kernel of the composite into the quotient by rel_tgt
        ncols = len(tgt)
        stack = [list(r) for r in rel_tgt]
        aug = []
        for row in M:
            aug.append(list(row))
        # z in ker iff M^T z in span(rel): solve via kernel of [M | -Rel] trick
        # columns: coefficients of src + rel multipliers
        nsrc = len(src)
        big = []
        for c in range(ncols):
            big.append([M[r][c] for r in range(nsrc)] +
                       [rel_tgt[r][c] for r in range(len(rel_tgt))])
        kb = _la.kernel_basis(big)
        ker_vecs = [v[:nsrc] for v in kb]
        # project away duplicates
        kermat = ker_vecs
    else:
        cols = [[M[r][c] for r in range(len(src))] for c in range(len(tgt))]
        kermat = _la.kernel_basis(cols) if tgt else \
            [[QQ(1) if k == j else QQ(0) for k in range(len(src))]
             for j in range(len(src))]
    spos = {b: k for k, b in enumerate(src)}
    img_rows = []
    prev_src = slice_basis(C.module(i - 1), d)
    if prev_src:
        P, _, _ = slice_map(C, i - 1, d, prev_src, src)
        img_rows.extend(P)
    img_rows.extend(_relation_slice_vectors(amb, d, src, spos, coeff_relations))
    reps = []
    span = [list(r) for r in img_rows]
    base_rank = _la.rank(span)
    for v in kermat:
        test = span + [list(v)]
        r = _la.rank(test)
        if r > base_rank:
            span = test
            base_rank = r
            reps.append(v)
    out = []
    ring = C.ring
    for v in reps:
        comps: dict = {}
        for k, c in enumerate(v):
            if c:
                comp, e = src[k]
                mono = ring.monomial(e, c)
                comps[comp] = comps.get(comp, ring.zero()) + mono
        out.append(Vec(amb, comps))
    return out


# -- Ext ---------------------------------------------------------------------


def module_resolution(M: PresentedModule, max_len: int | None = None):
    """Free resolution of a presented module: list of (FreeMod, matrix) pairs
    [(F0, None), (F1, d1), ...] with d_k : F_k -> F_{k-1} (rows over F_k)."""
    ring = M.ring
    max_len = max_len if max_len is not None else ring.nvars + 3
    levels = [(M.ambient, None)]
    current = M.relations
    k = 0
    while current:
        imgs = [v for v in current if not v.is_zero()]
        if not imgs:
            break
        k += 1
        if k > max_len:
            raise ValueError("module_resolution: max_len exhausted")
        fm = FreeMod(ring, len(imgs), twists=[v.degree() for v in imgs])
        prev = levels[-1][0]
        mat = [[v.get(j) for j in range(prev.rank)] for v in imgs]
        levels.append((fm, mat))
        syz = syzygy_module(imgs)
        current = [Vec(fm, dict(z.comps)) for z in syz if not z.is_zero()]
    return levels


def ext(M: PresentedModule, N: PresentedModule, i: int) -> PresentedModule:
    """Ext^i_A(M, N), computed from a free resolution of M against the
    presentation of N (independent of any dgla machinery)."""
    if i < 0:
        raise ValueError("ext degree must be >= 0")
    ring = M.ring
    levels = module_resolution(M)
    p = N.rank

    def hom_mod(k: int) -> FreeMod:
        if k >= len(levels):
            return FreeMod(ring, 0)
        fm = levels[k][0]
        tw = [N.twists[n] - fm.twists[b] for b in range(fm.rank) for n in range(p)]
        return FreeMod(ring, fm.rank * p, twists=tw)

    def hom_map_images(k: int) -> list:
        """Images of Hom(F_k, N)-basis under precomposition with d_{k+1}."""
        tgt = hom_mod(k + 1)
        if k + 1 >= len(levels):
            fm = hom_mod(k)
            return [tgt.zero() for _ in range(fm.rank)]
        fm_k = levels[k][0]
        mat = levels[k + 1][1]  # rows over F_{k+1}, cols over F_k
        out = []
        for b in range(fm_k.rank):
            for n in range(p):
                comps = {}
                for bp in range(levels[k + 1][0].rank):
                    entry = mat[bp][b]
                    if not entry.is_zero():
                        comps[bp * p + n] = entry
                out.append(Vec(tgt, comps))
        return out

    amb = hom_mod(i)
    if amb.rank == 0:
        return zero_module(ring)
    out_images = hom_map_images(i)
    in_images = hom_map_images(i - 1) if i >= 1 else []
    # N-relations in ambient and target blocks
    def rel_block(k: int) -> list:
        m = hom_mod(k)
        fm = levels[k][0] if k < len(levels) else None
        rels = []
        if fm is None:
            return rels
        for b in range(fm.rank):
            for r in N.relations:
                comps = {b * p + n: poly for n, poly in r.comps.items()}
                rels.append(Vec(m, comps))
        return rels

    return subquotient(amb, out_images, rel_block(i + 1),
                       in_images, rel_block(i))


def syzygy_module_mod(vecs: Sequence[Vec], ideal_gens: Sequence[Polynomial]) -> list:
    """Generators of the syzygies of vecs over A/(ideal_gens): vectors u with
    sum u_i vecs_i in (ideal_gens) * (ambient free module)."""
    if not vecs:
        return []
    module = vecs[0].module
    ring = module.ring
    stacked = list(vecs)
    for f in ideal_gens:
        for j in range(module.rank):
            stacked.append(Vec(module, {j: f}))
    syz = syzygy_module(stacked)
    s = len(vecs)
    tracker = FreeMod(ring, s, twists=[v.degree() for v in vecs])
    out = []
    for z in syz:
        u = Vec(tracker, {c: p for c, p in z.comps.items() if c < s})
        if not u.is_zero():
            out.append(u)
    return out


def quotient_resolution_fragment(ring: PolyRing, ideal_gens: Sequence[Polynomial],
                                 rank: int, twists: Sequence[int],
                                 rel_rows: Sequence[Vec], length: int):
    """First `length` steps of a free resolution over A/(ideal_gens) of the
    module presented by rel_rows inside A^rank.  Returns [(FreeMod, matrix or
    None)] with matrices over the ambient polynomial ring."""
    levels = [(FreeMod(ring, rank, twists=list(twists)), None)]
    current = [v for v in rel_rows if not v.is_zero()]
    for _ in range(length):
        if not current:
            break
        fm = FreeMod(ring, len(current), twists=[v.degree() for v in current])
        prev = levels[-1][0]
        mat = [[v.get(j) for j in range(prev.rank)] for v in current]
        levels.append((fm, mat))
        syz = syzygy_module_mod(current, ideal_gens)
        current = [Vec(fm, dict(z.comps)) for z in syz if not z.is_zero()]
    return levels


def ext_quotient_complex(ring: PolyRing, ideal_gens: Sequence[Polynomial],
                         rank: int, twists: Sequence[int],
                         rel_rows: Sequence[Vec], max_i: int) -> ChainComplex:
    """Hom_{A/I}(F_., A/I) for a quotient-ring resolution fragment of the
    presented module; pair with coeff_relations=ideal_gens when slicing."""
    levels = quotient_resolution_fragment(ring, ideal_gens, rank, twists,
                                          rel_rows, max_i + 1)
    C = ChainComplex(ring)
    for k, (fm, _) in enumerate(levels):
        C.set_module(k, FreeMod(ring, fm.rank,
                                twists=[-t for t in fm.twists]))
    for k in range(len(levels) - 1):
        src = levels[k][0]
        tgt, mat = levels[k + 1]
        dmat = [[mat[c][r] for c in range(tgt.rank)] for r in range(src.rank)]
        C.set_diff(k, dmat)
    return C


def ext_quotient_table(ring: PolyRing, ideal_gens: Sequence[Polynomial],
                       rank: int, twists: Sequence[int],
                       rel_rows: Sequence[Vec], i: int, window) -> dict:
    """Hilbert table of Ext^i over A/(ideal_gens) of the presented module
    with values in A/(ideal_gens)."""
    C = ext_quotient_complex(ring, ideal_gens, rank, twists, rel_rows, i + 1)
    return slice_cohomology_table(C, i, window, coeff_relations=list(ideal_gens))


def presented_ideal(ring: PolyRing, gens: Sequence[Polynomial]) -> PresentedModule:
    """The ideal (gens) as a presented module (generators + their syzygies)."""
    gens = [g for g in gens if not g.is_zero()]
    mod = FreeMod(ring, 1)
    cols = [mod.vec([g]) for g in gens]
    syz = syzygy_module(cols)
    tw = [g.degree() for g in gens]
    tracker = FreeMod(ring, len(gens), twists=tw)
    rels = [Vec(tracker, dict(z.comps)) for z in syz]
    return PresentedModule(ring, len(gens), rels, twists=tw)


def quotient_ring_module(ring: PolyRing, gens: Sequence[Polynomial]) -> PresentedModule:
    """A/(gens) as a presented module of rank 1."""
    mod = FreeMod(ring, 1)
    return PresentedModule(ring, 1, [mod.vec([g]) for g in gens if not g.is_zero()])


def kaehler_differentials(ring: PolyRing, gens: Sequence[Polynomial]) -> PresentedModule:
    """Omega_{A/QQ} for A = ring/(gens): free on dx_i modulo df and I dx_i."""
    n = ring.nvars
    tw = [ring.weights[i] for i in range(n)]
    mod = FreeMod(ring, n, twists=tw, labels=[f"d{v}" for v in ring.variables])
    rels = []
    for g in gens:
        rels.append(mod.vec([g.derivative(i) for i in range(n)]))
    for g in gens:
        for i in range(n):
            rels.append(Vec(mod, {i: g}))
    return PresentedModule(ring, n, rels, twists=tw,
                           labels=[f"d{v}" for v in ring.variables])
