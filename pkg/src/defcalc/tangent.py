"""Tangent dglas T_X(P) and T_{X/P}, the J map, Milnor algebras, reduced
tangent algebras, tangent dglas of maps, and the Ext comparison.

T^i = (T_P (x) F^{i+1}_+) (+) N^i.  Elements act on F_+: the ambient part by
differentiating coefficients (basis elements are annihilated) followed by mu,
the N part as graded homomorphisms.  The differential decomposes as

    d(G (x) v) = (-1)^{lvl(G)} dG (x) v + mu_ext(G, [v, d]),   d(phi) = [phi, d]

which is the operator commutator [ . , d] written componentwise (the sign on
the first summand is forced by the mu chain rule; locked by the operator
identity test and d^2 = 0).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .ratpoly import Derivation, PolyRing, Polynomial, QQ
from .groebner import (FreeMod, Resolution, Vec, free_resolution,
                       standard_resolution)
from .homalg import (ChainComplex, ComplexMap, FreeModule, PresentedModule,
                     cohomology, ext, kaehler_differentials, mapping_cone,
                     quotient_ring_module, slice_basis, slice_cohomology_basis,
                     slice_cohomology_dim, slice_cohomology_table)
from .normal import GradedHom, Mu, NormalDGLA, mu_action, mu_extend


class TangentElement:
    """Element of T^deg: ambient part {(lvl, idx, var): coeff poly} with
    lvl = deg + 1, plus an N part of degree deg."""

    __slots__ = ("T", "deg", "tp", "n")

    def __init__(self, T: "TangentComplex", deg: int, tp: dict | None = None,
                 n: GradedHom | None = None):
        self.T = T
        self.deg = deg
        self.tp = {k: v for k, v in (tp or {}).items() if not v.is_zero()}
        self.n = n if n is not None else GradedHom(T.res, deg)

    def is_zero(self) -> bool:
        return not self.tp and self.n.is_zero()

    def add(self, other: "TangentElement") -> "TangentElement":
        if other.deg != self.deg:
            raise ValueError("degree mismatch")
        tp = dict(self.tp)
        for k, v in other.tp.items():
            w = tp.get(k)
            s = v if w is None else w + v
            if s.is_zero():
                tp.pop(k, None)
            else:
                tp[k] = s
        return TangentElement(self.T, self.deg, tp, self.n.add(other.n))

    def scale(self, f) -> "TangentElement":
        return TangentElement(self.T, self.deg,
                              {k: v * f for k, v in self.tp.items()},
                              self.n.scale(f))

    def tp_vector_field(self) -> Optional[Derivation]:
        """For deg 0: the plain T_P part as a Derivation."""
        ring = self.T.ring
        coeffs = [ring.zero()] * ring.nvars
        for (lvl, idx, k), c in self.tp.items():
            if lvl != 1:
                return None
            coeffs[k] = coeffs[k] + c
        return Derivation(ring, coeffs)

    def __repr__(self):
        return f"TangentElement(deg={self.deg}, tp={len(self.tp)}, n={len(self.n.comps)})"


class TangentComplex:
    """T_X(P) built from a free resolution of I_{X/P}."""

    def __init__(self, res: Resolution, mu: Mu | None = None,
                 restrict_ambient: Sequence[int] | None = None):
        self.res = res
        self.ring = res.ring
        self.mu = mu if mu is not None else mu_extend(res)
        self.N = NormalDGLA(res, self.mu)
        # ambient derivations used for the T_P factor (all by default;
        # a subset for f^! models)
        self.ambient_vars = list(restrict_ambient) if restrict_ambient is not None \
            else list(range(self.ring.nvars))
        # source restriction for Hom parts (None = all of F)
        self.source_levels: dict | None = None
        self._dv_cache: dict = {}
        self._complex: ChainComplex | None = None
        self._index: dict = {}

    # -- basis -----------------------------------------------------------------

    def degrees(self):
        lo = self.res.min_level
        return range(lo - 1, 1 - lo + 1)

    def tp_index(self, deg: int):
        lvl = deg + 1
        if lvl not in self.res.terms or lvl > 1:
            return []
        out = []
        for idx in range(self.res.rank(lvl)):
            for k in self.ambient_vars:
                out.append((lvl, idx, k))
        return out

    def n_index(self, deg: int):
        idx = self.N.basis_index(deg)
        if self.source_levels is None:
            return idx
        return [key for key in idx if key[1] in self.source_levels.get(key[0], ())]

    def basis_index(self, deg: int):
        if deg not in self._index:
            self._index[deg] = [("tp",) + k for k in self.tp_index(deg)] + \
                               [("n",) + k for k in self.n_index(deg)]
        return self._index[deg]

    def basis_elt(self, deg: int, key) -> TangentElement:
        if key[0] == "tp":
            (lvl, idx, k) = key[1:]
            return TangentElement(self, deg, {(lvl, idx, k): self.ring.one()})
        (j, b, a) = key[1:]
        tgt = self.res.module(j + deg)
        return TangentElement(self, deg, None,
                              GradedHom(self.res, deg, {(j, b): tgt.basis(a)}))

    # -- differential ------------------------------------------------------------

    def dv(self, k: int) -> GradedHom:
        """[d, d/dx_k]: the degree-1 hom sending G_b^j to -sum v(g_ba) G_a
        (v annihilates basis elements, so [d, v] = -v(d entries))."""
        if k in self._dv_cache:
            return self._dv_cache[k]
        res = self.res
        comps: dict = {}
        for j in res.levels():
            if j > 0:
                continue
            tgt = res.module(j + 1)
            for b in range(res.rank(j)):
                img = res.d_basis(j, b)
                val = tgt.zero()
                for a, p in img.comps.items():
                    dp = p.derivative(k)
                    if not dp.is_zero():
                        val = val + Vec(tgt, {a: dp})
                if not val.is_zero():
                    comps[(j, b)] = val
        out = GradedHom(res, 1, comps)
        self._dv_cache[k] = out
        return out

    def _restrict_sources(self, phi: GradedHom) -> GradedHom:
        if self.source_levels is None:
            return phi
        comps = {k: v for k, v in phi.comps.items()
                 if k[1] in self.source_levels.get(k[0], ())}
        return GradedHom(self.res, phi.deg, comps)

    def differential(self, t: TangentElement) -> TangentElement:
        """[d, .] componentwise: d(G (x) v) = dG (x) v
        + (-1)^{lvl} mu_ext(G, vd), d(phi) = [d, phi]."""
        res = self.res
        out_tp: dict = {}
        out_n = GradedHom(res, t.deg + 1)
        for (lvl, idx, k), c in t.tp.items():
            if lvl <= 0:
                img = res.d_basis(lvl, idx)
                for a, p in img.comps.items():
                    key = (lvl + 1, a, k)
                    cur = out_tp.get(key, self.ring.zero())
                    out_tp[key] = cur + p * c
            sgn = QQ(-1) if lvl % 2 else QQ(1)
            mix = mu_action(self.mu, lvl, res.module(lvl).basis(idx),
                            self.dv(k)).scale(c * sgn)
            out_n = out_n.add(self._restrict_sources(mix))
        out_n = out_n.add(self._restrict_sources(t.n.differential()))
        return TangentElement(self, t.deg + 1, out_tp, out_n)

    # -- operator model (for identity tests) --------------------------------------

    def act(self, t: TangentElement, lvl: int, v: Vec) -> Vec:
        """Action of t on F_+: tp part differentiates coefficients then mu."""
        res = self.res
        tgt_lvl = lvl + t.deg
        if tgt_lvl < res.min_level or tgt_lvl > 1:
            out = FreeMod(self.ring, 0).zero()
        else:
            out = res.module(tgt_lvl).zero()
        for (glvl, gidx, k), c in t.tp.items():
            for i, p in v.comps.items():
                dp = p.derivative(k)
                if dp.is_zero():
                    continue
                val = self.mu.vec_pair(glvl, res.module(glvl).basis(gidx),
                                       lvl, res.module(lvl).basis(i))
                if not val.is_zero():
                    out = out + val.scale(c * dp)
        out = out + t.n.apply(lvl, v)
        return out

    def operator_identity_holds(self, t: TangentElement, probes: Sequence[Polynomial]) -> bool:
        """[d, act(t)] == act(d(t)) on c*basis probes."""
        res = self.res
        dt = self.differential(t)
        sgn = QQ(-1) if t.deg % 2 else QQ(1)
        for lvl in res.levels():
            for i in range(res.rank(lvl)):
                for c in probes:
                    v = Vec(res.module(lvl), {i: c})
                    # d(act(t, v)) - (-1)^{|t|} act(t, d v)
                    tv = self.act(t, lvl, v)
                    lhs = res.d_vec(lvl + t.deg, tv) if lvl + t.deg <= 0 \
                        else FreeMod(self.ring, 0).zero()
                    if lvl <= 0:
                        lhs = lhs - self.act(t, lvl + 1, res.d_vec(lvl, v)).scale(sgn)
                    rhs = self.act(dt, lvl, v)
                    if not (lhs - rhs).is_zero():
                        return False
        return True

    # -- brackets ------------------------------------------------------------------

    def bracket(self, t1: TangentElement, t2: TangentElement) -> TangentElement:
        """Bracket table: commutator on N x N; the graded-multiplication rule
        on (T_P (x) F) pairs; on the cross pairs

            [G (x) v, phi] = (-1)^{pq+1} phi(G) (x) v + mu_ext(G, v(phi))

        (p, q the two degrees mod 2; v(phi) differentiates coefficients).
        Signs machine-calibrated against the differential-compatibility and
        Jacobi identities; those hold on the paper's stated scope, i.e.
        whenever mu takes standard basis pairs to (multiples of at most one)
        basis element - see the test suite notes."""
        res = self.res
        deg = t1.deg + t2.deg
        out = TangentElement(self, deg)
        out = out.add(TangentElement(self, deg, None,
                                     self._restrict_sources(t1.n.bracket(t2.n))))
        tp_acc: dict = {}
        n_acc = GradedHom(res, deg)
        for (al, ai, j), a in t1.tp.items():
            for (bl, bi, k), b in t2.tp.items():
                muv = self.mu.vec_pair(al, res.module(al).basis(ai),
                                       bl, res.module(bl).basis(bi))
                if muv.is_zero():
                    continue
                da_k = a.derivative(k)
                db_j = b.derivative(j)
                for mi, mp in muv.comps.items():
                    lvl = al + bl - 1
                    if not db_j.is_zero():
                        key = (lvl, mi, k)
                        tp_acc[key] = tp_acc.get(key, self.ring.zero()) + a * db_j * mp
                    if not da_k.is_zero():
                        key = (lvl, mi, j)
                        tp_acc[key] = tp_acc.get(key, self.ring.zero()) - b * da_k * mp
        res_tp, res_n = self._tp_n_bracket(t1, t2)
        for k, v in res_tp.items():
            tp_acc[k] = tp_acc.get(k, self.ring.zero()) + v
        n_acc = n_acc.add(res_n)
        res_tp2, res_n2 = self._tp_n_bracket(t2, t1)
        sgn = QQ(-1) if (t1.deg * t2.deg) % 2 else QQ(1)
        for k, v in res_tp2.items():
            tp_acc[k] = tp_acc.get(k, self.ring.zero()) - sgn * v
        n_acc = n_acc.add(res_n2.scale(-sgn))
        tp_clean = {}
        for (lvl, mi, k), v in tp_acc.items():
            if v.is_zero():
                continue
            tp_clean[(lvl, mi, k)] = tp_clean.get((lvl, mi, k), self.ring.zero()) + v
        return out.add(TangentElement(self, deg, tp_clean,
                                      self._restrict_sources(n_acc)))

    def _tp_n_bracket(self, t_tp: TangentElement, t_n: TangentElement):
        """[tp part of t_tp, n part of t_n] in the t_tp-first orientation."""
        res = self.res
        tp_out: dict = {}
        n_out = GradedHom(res, t_tp.deg + t_n.deg)
        p1 = t_tp.deg % 2
        p2 = t_n.deg % 2
        asgn = QQ(1) if (p1 * p2 + 1) % 2 == 0 else QQ(-1)
        for (lvl, idx, k), c in t_tp.tp.items():
            # coefficient-derivative term mu_ext(G, v(phi))
            dh = GradedHom(res, t_n.deg)
            for (src, b), w in t_n.n.comps.items():
                dw = res.module(src + t_n.deg).zero()
                for a, p in w.comps.items():
                    dp = p.derivative(k)
                    if not dp.is_zero():
                        dw = dw + Vec(res.module(src + t_n.deg), {a: dp})
                if not dw.is_zero():
                    dh.comps[(src, b)] = dw
            mixed = mu_action(self.mu, lvl, res.module(lvl).basis(idx),
                              dh).scale(c)
            n_out = n_out.add(mixed)
            # evaluation term phi(G) (x) v
            if lvl <= 0:
                val = t_n.n.apply(lvl, Vec(res.module(lvl), {idx: c}))
                if not val.is_zero():
                    tgt_lvl = lvl + t_n.deg
                    if tgt_lvl <= 1 and tgt_lvl in res.terms:
                        for a, p in val.comps.items():
                            key = (tgt_lvl, a, k)
                            tp_out[key] = tp_out.get(key, self.ring.zero()) \
                                + asgn * p
        n_out.comps = {k: v for k, v in n_out.comps.items() if not v.is_zero()}
        return tp_out, n_out

    # -- complex assembly -----------------------------------------------------------

    def from_element(self, t: TangentElement):
        idx = self.basis_index(t.deg)
        pos = {k: n for n, k in enumerate(idx)}
        coords = [self.ring.zero()] * len(idx)
        for (lvl, i, k), c in t.tp.items():
            coords[pos[("tp", lvl, i, k)]] = c
        for (j, b), w in t.n.comps.items():
            for a, p in w.comps.items():
                coords[pos[("n", j, b, a)]] = p
        return coords

    def complex(self) -> ChainComplex:
        if self._complex is not None:
            return self._complex
        C = ChainComplex(self.ring)
        degs = sorted(self.degrees())
        for i in degs:
            idx = self.basis_index(i)
            tw, labels = [], []
            for key in idx:
                if key[0] == "tp":
                    (lvl, b, k) = key[1:]
                    tw.append(self.res.module(lvl).twists[b]
                              - self.ring.weights[k])
                    labels.append(f"d/d{self.ring.variables[k]}(x)"
                                  f"{self.res.module(lvl).labels[b]}")
                else:
                    (j, b, a) = key[1:]
                    tw.append(self.res.module(j + i).twists[a]
                              - self.res.module(j).twists[b])
                    labels.append(f"{self.res.module(j).labels[b]}*>"
                                  f"{self.res.module(j + i).labels[a]}")
            C.set_module(i, FreeModule(self.ring, len(idx), twists=tw,
                                       labels=labels))
        for i in degs:
            idx = self.basis_index(i)
            if not idx:
                continue
            mat = [self.from_element(self.differential(self.basis_elt(i, key)))
                   for key in idx]
            C.set_diff(i, mat)
        self._complex = C
        return C

    def h_table(self, i: int, window) -> dict:
        return slice_cohomology_table(self.complex(), i, window)

    def cohomology(self, i: int) -> PresentedModule:
        return cohomology(self.complex(), i)


def tangent_dgla(res: Resolution, mu: Mu | None = None) -> TangentComplex:
    return TangentComplex(res, mu)


def milnor_algebra(f: Polynomial) -> PresentedModule:
    ring = f.ring
    gens = [f] + [f.derivative(i) for i in range(ring.nvars)]
    return quotient_ring_module(ring, gens)


# -- T_{X/P} and the J map ----------------------------------------------------


class TangentXP:
    """Subcomplex of T_X with the ambient factor only in degree 0."""

    def __init__(self, T: TangentComplex):
        self.T = T

    def basis_index(self, deg: int):
        out = []
        if deg == 0:
            out.extend(("tp",) + k for k in self.T.tp_index(0))
        out.extend(("n",) + k for k in self.T.n_index(deg))
        return out

    def complex(self) -> ChainComplex:
        C = ChainComplex(self.T.ring)
        degs = sorted(self.T.degrees())
        index = {i: self.basis_index(i) for i in degs}
        for i in degs:
            idx = index[i]
            tw = []
            for key in idx:
                if key[0] == "tp":
                    (lvl, b, k) = key[1:]
                    tw.append(self.T.res.module(lvl).twists[b]
                              - self.T.ring.weights[k])
                else:
                    (j, b, a) = key[1:]
                    tw.append(self.T.res.module(j + i).twists[a]
                              - self.T.res.module(j).twists[b])
            C.set_module(i, FreeModule(self.T.ring, len(idx), twists=tw))
        for i in degs:
            idx = index[i]
            if not idx:
                continue
            tgt_idx = index.get(i + 1, [])
            pos = {k: n for n, k in enumerate(tgt_idx)}
            mat = []
            for key in idx:
                dt = self.T.differential(self.T.basis_elt(i, key))
                row = [self.T.ring.zero()] * len(tgt_idx)
                for (lvl, b, k), c in dt.tp.items():
                    kk = ("tp", lvl, b, k)
                    if kk in pos:
                        row[pos[kk]] = c
                    elif not c.is_zero():
                        raise RuntimeError("T_{X/P} is not a subcomplex")
                for (j, b), w in dt.n.comps.items():
                    for a, p in w.comps.items():
                        row[pos[("n", j, b, a)]] = p
                mat.append(row)
            C.set_diff(i, mat)
        return C


def j_map(T: TangentComplex):
    """J: (T_P (x) F, twisted differential) -> T_{X/P}; returns
    (ComplexMap, source complex, target complex)."""
    res = T.res
    ring = T.ring
    src = ChainComplex(ring)
    xp = TangentXP(T)
    tgt = xp.complex()
    # source: degree i holds T_P (x) F^i (levels <= 0), differential
    # (-1)^lvl d (x) id
    tp_idx = {}
    for i in res.levels():
        if i > 0:
            continue
        idx = [(i, b, k) for b in range(res.rank(i)) for k in T.ambient_vars]
        tp_idx[i] = idx
        tw = [res.module(i).twists[b] - ring.weights[k] for (_, b, k) in idx]
        src.set_module(i, FreeModule(ring, len(idx), twists=tw))
    for i in sorted(tp_idx):
        if i + 1 not in tp_idx:
            continue
        idx, tidx = tp_idx[i], tp_idx[i + 1]
        pos = {k: n for n, k in enumerate(tidx)}
        sgn = QQ(-1) if i % 2 else QQ(1)
        mat = []
        for (lvl, b, k) in idx:
            row = [ring.zero()] * len(tidx)
            img = res.d_basis(lvl, b)
            for a, p in img.comps.items():
                row[pos[(lvl + 1, a, k)]] = sgn * p
            mat.append(row)
        src.set_diff(i, mat)
    # the map
    mats = {}
    for i in sorted(tp_idx):
        idx = tp_idx[i]
        tgt_idx = xp.basis_index(i)
        pos = {k: n for n, k in enumerate(tgt_idx)}
        mat = []
        for (lvl, b, k) in idx:
            row = [ring.zero()] * len(tgt_idx)
            if lvl == 0:
                # f_b * v in the T_P part
                key = ("tp", 1, 0, k)
                if key in pos:
                    row[pos[key]] = res.gens[b]
            mix = mu_action(T.mu, lvl, res.module(lvl).basis(b), T.dv(k))
            mix = T._restrict_sources(mix)
            for (j, bb), w in mix.comps.items():
                for a, p in w.comps.items():
                    row[pos[("n", j, bb, a)]] = p
            mat.append(row)
        mats[i] = mat
    return ComplexMap(src, tgt, mats), src, tgt


# -- reduced tangent algebra ----------------------------------------------------


class ReducedTangent:
    """T_X with redN in place of N (standard resolutions only)."""

    def __init__(self, res: Resolution, mu: Mu | None = None):
        from .normal import ReducedNormal
        if not res.standard:
            raise ValueError("reduced_tangent needs a standard resolution")
        self.res = res
        self.mu = mu if mu is not None else mu_extend(res)
        self.T = TangentComplex(res, self.mu)
        self.red = ReducedNormal(res, self.mu)

    def red_keys(self, deg: int):
        return [k for k in self.T.n_index(deg) if self.red.is_red_key(k)]

    def complex(self) -> ChainComplex:
        ring = self.res.ring
        C = ChainComplex(ring)
        degs = sorted(self.T.degrees())
        index = {}
        for i in degs:
            idx = [("tp",) + k for k in self.T.tp_index(i)] + \
                  [("n",) + k for k in self.red_keys(i)]
            index[i] = idx
            tw = []
            for key in idx:
                if key[0] == "tp":
                    (lvl, b, k) = key[1:]
                    tw.append(self.res.module(lvl).twists[b] - ring.weights[k])
                else:
                    (j, b, a) = key[1:]
                    tw.append(self.res.module(j + i).twists[a]
                              - self.res.module(j).twists[b])
            C.set_module(i, FreeModule(ring, len(idx), twists=tw))
        for i in degs:
            idx = index[i]
            if not idx:
                continue
            tgt_idx = index.get(i + 1, [])
            pos = {k: n for n, k in enumerate(tgt_idx)}
            mat = []
            for key in idx:
                row = [ring.zero()] * len(tgt_idx)
                if key[0] == "tp":
                    (lvl, b, k) = key[1:]
                    if lvl <= 0:
                        for a, p in self.res.d_basis(lvl, b).comps.items():
                            row[pos[("tp", lvl + 1, a, k)]] = p
                    sgn = QQ(-1) if lvl % 2 else QQ(1)
                    mix = mu_action(self.mu, lvl, self.res.module(lvl).basis(b),
                                    self.T.dv(k)).scale(sgn)
                    redmix = self.red.project(self.red.id_minus_pi(mix), True)
                    for (j, bb), w in redmix.comps.items():
                        for a, p in w.comps.items():
                            row[pos[("n", j, bb, a)]] = p
                else:
                    phi = self.red.N.basis_elt(i, key[1:])
                    dp = self.red.d_prime(phi)
                    for (j, bb), w in dp.comps.items():
                        for a, p in w.comps.items():
                            kk = ("n", j, bb, a)
                            if kk in pos:
                                row[pos[kk]] = p
                            elif not p.is_zero():
                                raise RuntimeError("redN leak inside redT")
                mat.append(row)
            C.set_diff(i, mat)
        return C


def reduced_tangent(res: Resolution, mu: Mu | None = None) -> ReducedTangent:
    return ReducedTangent(res, mu)


# -- comparison with Ext(Omega, A_X) ---------------------------------------------


def cotangent_complex_model(res: Resolution) -> ChainComplex:
    """G^.: ... -> F^{-1}_1 (x) A_X -> F^0 (x) A_X -> Omega_P (x) A_X in
    degrees <= 1 (A_X realized by coefficient relations; the complex is over
    A_P, pair it with coeff_relations=I when taking slices)."""
    ring = res.ring
    C = ChainComplex(ring)
    n = ring.nvars
    omega = FreeModule(ring, n, twists=list(ring.weights),
                       labels=[f"d{v}" for v in ring.variables])
    C.set_module(1, omega)
    f0 = res.module(0)
    C.set_module(0, FreeModule(ring, f0.rank, twists=list(f0.twists)))
    mat0 = [[res.gens[b].derivative(k) for k in range(n)]
            for b in range(f0.rank)]
    C.set_diff(0, mat0)
    lvl = -1
    while lvl in res.terms:
        idx1 = res.split1.get(lvl, [])
        fm = FreeModule(ring, len(idx1),
                        twists=[res.module(lvl).twists[b] for b in idx1])
        C.set_module(lvl, fm)
        upper = res.split1.get(lvl + 1, []) if lvl + 1 < 0 else \
            list(range(res.rank(0)))
        posu = {b: k for k, b in enumerate(upper)}
        mat = []
        for b in idx1:
            img = res.d_basis(lvl, b)
            row = [ring.zero()] * len(upper)
            for a, p in img.comps.items():
                if a in posu:
                    row[posu[a]] = p
            mat.append(row)
        C.set_diff(lvl, mat)
        lvl -= 1
    return C


def ext_comparison(ring: PolyRing, gens: Sequence[Polynomial], window,
                   case_hint: str = "") -> dict:
    """Compare Ext^i_{A_X}(Omega_X, A_X) with H^i(redT) for i <= 2 over a
    degree window (the tau import of the comparison theorem)."""
    from .groebner import FreeMod as FM
    from .homalg import ext_quotient_table
    res = standard_resolution(ring, gens)
    mu = mu_extend(res)
    redT = reduced_tangent(res, mu).complex()
    # Omega_X as an A_X module: A_X^n on dx_i modulo the rows df
    n = ring.nvars
    amb = FM(ring, n, twists=list(ring.weights))
    rel_rows = [amb.vec([g.derivative(i) for i in range(n)]) for g in gens]
    report = {"case_hint": case_hint, "window": list(window), "tables": {}}
    agree = {}
    for i in (0, 1, 2):
        ext_tab = ext_quotient_table(ring, list(gens), n, list(ring.weights),
                                     rel_rows, i, window)
        h_tab = slice_cohomology_table(redT, i, window)
        report["tables"][f"ext{i}"] = ext_tab
        report["tables"][f"h{i}"] = h_tab
        agree[i] = ext_tab == h_tab
    report["agree"] = agree
    report["G_complex_shape"] = cotangent_complex_model(res).shape()
    return report


def embedding_independence_check(ringA: PolyRing, gensA: Sequence[Polynomial],
                                 ringB: PolyRing, gensB: Sequence[Polynomial],
                                 window) -> dict:
    """h^0, h^1 Hilbert tables agree between two embeddings; h^2 does not
    drop from the small embedding to the big one."""
    TA = tangent_dgla(free_resolution(ringA, list(gensA)))
    TB = tangent_dgla(free_resolution(ringB, list(gensB)))
    CA, CB = TA.complex(), TB.complex()
    out = {"h0_equal": True, "h1_equal": True, "h2_no_decrease": True,
           "tables": {}}
    for i in (0, 1, 2):
        ta = slice_cohomology_table(CA, i, window)
        tb = slice_cohomology_table(CB, i, window)
        out["tables"][f"A_h{i}"] = ta
        out["tables"][f"B_h{i}"] = tb
        if i <= 1 and ta != tb:
            out[f"h{i}_equal"] = False
        if i == 2 and any(tb[d] < ta[d] for d in ta):
            out["h2_no_decrease"] = False
    return out


# -- tangent dgla of a map ---------------------------------------------------


class MapTangent:
    """Tangent data of f: X -> Y via the graph embedding.

    Holds T_X (graph model over P^ = P x Q), T_Y over Q, the pullback model
    f^!T_Y over P^, the comparison map, and the cone T_f."""

    def __init__(self, ringP: PolyRing, gensX: Sequence[Polynomial],
                 ringQ: PolyRing, gensY: Sequence[Polynomial],
                 images: Sequence[Polynomial]):
        if len(images) != ringQ.nvars:
            raise ValueError("need one image polynomial per target variable")
        self.ringQ = ringQ
        self.gensY = list(gensY)
        # product ring P^ = P x Q
        weights = tuple(ringP.weights) + tuple(ringQ.weights)
        order = "weighted" if (ringP.order == "weighted"
                               or ringQ.order == "weighted"
                               or any(w != 1 for w in weights)) else ringP.order
        self.ringPQ = PolyRing(tuple(ringP.variables) + tuple(ringQ.variables),
                               order=order if order != "lex" else "degrevlex",
                               weights=weights if order == "weighted" else None)
        nP = ringP.nvars
        self.nP = nP
        px = [self.ringPQ.gen(v) for v in ringP.variables]
        pq = [self.ringPQ.gen(v) for v in ringQ.variables]
        inc_P = lambda f: f.subs(self.ringPQ, px)
        inc_Q = lambda g: g.subs(self.ringPQ, pq)
        self.inc_Q = inc_Q
        # graph ideal generators: Y-pulled first, then graph equations, then X
        self.pulled_Y = [inc_Q(g) for g in self.gensY]
        graph_eqs = [pq[j] - inc_P(images[j]) for j in range(ringQ.nvars)]
        gens_graph = self.pulled_Y + graph_eqs + [inc_P(g) for g in gensX]
        self.resY = free_resolution(ringQ, self.gensY)
        self.resX, self.yblocks = self._compatible_resolution(gens_graph)
        self.muX = mu_extend(self.resX)
        self.TX = TangentComplex(self.resX, self.muX)
        self.TY = TangentComplex(self.resY)
        # f^! T_Y model: Q-direction fields only, Hom sources = Y blocks
        self.fTY = TangentComplex(self.resX, self.muX,
                                  restrict_ambient=list(range(nP, self.ringPQ.nvars)))
        self.fTY.source_levels = {lvl: tuple(blk)
                                  for lvl, blk in self.yblocks.items()}
        self._cone = None
        self._typ = None

    def pulled_TY_complex(self) -> ChainComplex:
        """T_Y's complex with coefficients extended to the product ring."""
        if self._typ is not None:
            return self._typ
        src = self.TY.complex()
        C = ChainComplex(self.ringPQ)
        for i in src.levels():
            m = src.module(i)
            C.set_module(i, FreeModule(self.ringPQ, m.rank,
                                       twists=list(m.twists),
                                       labels=list(m.labels)))
        for i, mat in src.diffs.items():
            C.set_diff(i, [[self.inc_Q(p) for p in row] for row in mat])
        self._typ = C
        return C

    def _compatible_resolution(self, gens_graph):
        """Resolution of the graph ideal whose levels contain the pulled-back
        Y-resolution as leading direct summands."""
        from .groebner import syzygy_module, FreeMod as FM
        ring = self.ringPQ
        resY = self.resY
        res = Resolution(ring, gens_graph)
        res.terms[1] = FM(ring, 1, twists=[0], labels=["1"])
        graded = [all(g.is_homogeneous() for g in gens_graph)]
        f0 = FM(ring, len(gens_graph),
                twists=[g.degree() for g in gens_graph],
                labels=[f"e{a+1}" for a in range(len(gens_graph))])
        res.terms[0] = f0
        res.diffs[0] = [[g] for g in gens_graph]
        yblocks = {0: list(range(len(self.pulled_Y)))}
        level = 0
        while True:
            src = res.module(level)
            cols = [res.d_basis(level, c) for c in range(src.rank)]
            if not cols:
                break
            ylvl = level - 1
            pulled: list = []
            if ylvl in resY.terms:
                yprev = yblocks[level]
                for b in range(resY.rank(ylvl)):
                    img = resY.d_basis(ylvl, b)
                    comps = {}
                    for a, p in img.comps.items():
                        comps[yprev[a]] = self.inc_Q(p)
                    pulled.append(Vec(src, comps))
            syz = [Vec(src, dict(z.comps))
                   for z in syzygy_module(cols) if not z.is_zero()]
            from .groebner import ModuleOrder, buchberger, normal_form
            order = ModuleOrder(src)
            chosen = list(pulled)
            gbp = buchberger(chosen, order) if chosen else []
            for z in syz:
                r = normal_form(z, gbp, order) if gbp else z
                if r.is_zero():
                    continue
                if len(chosen) > len(pulled):
                    gb2 = buchberger(chosen, order)
                    if normal_form(z, gb2, order).is_zero():
                        continue
                chosen.append(r)
            if not chosen:
                break
            if -level > ring.nvars + 3:
                raise ValueError("graph resolution too long")
            from .groebner import _twists_for
            tw = _twists_for(chosen, graded)
            fm = FM(ring, len(chosen), twists=tw,
                    labels=[f"G[{ylvl}]{k+1}" for k in range(len(chosen))])
            res.terms[ylvl] = fm
            res.diffs[ylvl] = [[v.get(j) for j in range(src.rank)]
                               for v in chosen]
            yblocks[ylvl] = list(range(len(pulled)))
            level = ylvl
        res.graded = graded[0]
        return res, yblocks

    # comparison map pieces -----------------------------------------------------

    def map_from_TX(self) -> ComplexMap:
        """Restriction T_X -> f^!T_Y: project ambient part to Q-fields,
        restrict Hom sources to the Y blocks."""
        src = self.TX.complex()
        tgt = self.fTY.complex()
        mats = {}
        for i in self.TX.degrees():
            sidx = self.TX.basis_index(i)
            tidx = self.fTY.basis_index(i)
            pos = {k: n for n, k in enumerate(tidx)}
            mat = []
            for key in sidx:
                row = [self.ringPQ.zero()] * len(tidx)
                if key in pos:
                    row[pos[key]] = self.ringPQ.one()
                mat.append(row)
            mats[i] = mat
        return ComplexMap(src, tgt, mats)

    def map_from_TY(self) -> ComplexMap:
        """Inclusion T_Y -> f^!T_Y via the pulled-back resolution blocks."""
        src = self.pulled_TY_complex()
        tgt = self.fTY.complex()
        mats = {}
        for i in self.TY.degrees():
            sidx = self.TY.basis_index(i)
            tidx = self.fTY.basis_index(i)
            pos = {k: n for n, k in enumerate(tidx)}
            mat = []
            for key in sidx:
                row = [self.ringPQ.zero()] * len(tidx)
                if key[0] == "tp":
                    (lvl, b, k) = key[1:]
                    if lvl == 1:
                        kk = ("tp", 1, 0, self.nP + k)
                        if kk in pos:
                            row[pos[kk]] = self.ringPQ.one()
                    else:
                        kk = ("tp", lvl, self.yblocks[lvl][b], self.nP + k)
                        if kk in pos:
                            row[pos[kk]] = self.ringPQ.one()
                else:
                    (j, b, a) = key[1:]
                    tgt_lvl = j + i
                    bb = self.yblocks[j][b]
                    if tgt_lvl == 1:
                        aa = 0
                    else:
                        aa = self.yblocks[tgt_lvl][a]
                    kk = ("n", j, bb, aa)
                    if kk in pos:
                        row[pos[kk]] = self.ringPQ.one()
                mat.append(row)
            mats[i] = mat
        return ComplexMap(src, tgt, mats)

    def difference_map(self) -> ComplexMap:
        """T_X (+) T_Y -> f^!T_Y, (a, b) -> res(a) - inc(b)."""
        fX = self.map_from_TX()
        fY = self.map_from_TY()
        CX, CY, tgt = fX.src, fY.src, fX.tgt
        ring = self.ringPQ
        direct = ChainComplex(ring)
        levels = sorted(set(CX.levels()) | set(CY.levels()))
        for i in levels:
            mx, my = CX.module(i), CY.module(i)
            direct.set_module(i, FreeModule(
                ring, mx.rank + my.rank,
                twists=list(mx.twists) + list(my.twists)))
        for i in levels:
            mx, my = CX.module(i), CY.module(i)
            tx, ty = CX.module(i + 1), CY.module(i + 1)
            mat = []
            dX = CX.diffs.get(i)
            dY = CY.diffs.get(i)
            for r in range(mx.rank):
                row = [ring.zero()] * (tx.rank + ty.rank)
                if dX is not None:
                    for c in range(tx.rank):
                        row[c] = dX[r][c]
                mat.append(row)
            for r in range(my.rank):
                row = [ring.zero()] * (tx.rank + ty.rank)
                if dY is not None:
                    for c in range(ty.rank):
                        row[tx.rank + c] = dY[r][c]
                mat.append(row)
            direct.set_diff(i, mat)
        mats = {}
        for i in levels:
            mx, my = CX.module(i), CY.module(i)
            tgt_rank = tgt.module(i).rank
            mat = []
            mX = fX.mats.get(i)
            mY = fY.mats.get(i)
            for r in range(mx.rank):
                mat.append(list(mX[r]) if mX is not None else
                           [ring.zero()] * tgt_rank)
            for r in range(my.rank):
                row = [(-p) for p in mY[r]] if mY is not None else \
                    [ring.zero()] * tgt_rank
                mat.append(row)
            mats[i] = mat
        return ComplexMap(direct, tgt, mats)

    def cone(self) -> ChainComplex:
        if self._cone is None:
            self._cone = mapping_cone(self.difference_map())
        return self._cone


def tangent_of_map(ringP: PolyRing, gensX, ringQ: PolyRing, gensY,
                   images) -> MapTangent:
    return MapTangent(ringP, gensX, ringQ, gensY, images)
