"""The normal dgla N = Hom(F, F_+), the mu multiplication on resolutions,
and the reduced normal atom (pi, d', splitting).

Sign conventions (verified by d^2 = 0 and the projection lemma tests):
  * F_+ carries shifted parities: a basis element of F^a has parity a - 1;
  * mu is graded symmetric, mu(B (x) A) = (-1)^{(a-1)(b-1)} mu(A (x) B), and
    satisfies d mu(A (x) B) = mu(dA (x) B) + (-1)^{a-1} mu(A (x) dB);
  * on standard resolutions mu(e_a (x) e_b) = s_ab exactly;
  * d phi = [phi, d] = phi d - (-1)^{deg phi} d phi.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .ratpoly import PolyRing, Polynomial, QQ
from .groebner import FreeMod, Resolution, Vec, lift_through
from .homalg import ChainComplex, FreeModule, PresentedModule, cohomology, ext


class Mu:
    """Graded multiplication mu: F^a_+ (x) F^b_+ -> F^{a+b-1}_+ on basis pairs."""

    def __init__(self, res: Resolution):
        self.res = res
        self.table: dict = {}
        self.to_f0_ok = True   # mu(F^0 (x) F^i) lands in the Koszul part
        self._build()

    def _key(self, a, ai, b, bi):
        return (a, ai, b, bi)

    def value(self, a: int, ai: int, b: int, bi: int) -> Vec:
        """mu on basis pair (level a index ai, level b index bi)."""
        res = self.res
        tgt_lvl = a + b - 1
        if (a, ai) > (b, bi):
            sign = QQ(-1) if ((a - 1) * (b - 1)) % 2 else QQ(1)
            return self.value(b, bi, a, ai).scale(sign)
        if tgt_lvl < res.min_level or tgt_lvl > 1:
            return FreeMod(res.ring, 0).zero()
        return self.table[self._key(a, ai, b, bi)]

    def vec_pair(self, a: int, va: Vec, b: int, vb: Vec) -> Vec:
        """Bilinear extension to vectors at levels a and b."""
        res = self.res
        tgt_lvl = a + b - 1
        if tgt_lvl < res.min_level or tgt_lvl > 1:
            return FreeMod(res.ring, 0).zero()
        out = res.module(tgt_lvl).zero()
        for ai, pa in va.comps.items():
            for bi, pb in vb.comps.items():
                out = out + self.value(a, ai, b, bi).scale(pa * pb)
        return out

    def _build(self):
        res = self.res
        ring = res.ring
        levels = sorted(res.levels(), reverse=True)  # 1, 0, -1, ...
        pairs = []
        for a in levels:
            for b in levels:
                if a > b or a + b - 1 < res.min_level:
                    continue
                pairs.append((a, b))
        pairs.sort(key=lambda p: p[0] + p[1], reverse=True)
        for (a, b) in pairs:
            tgt = a + b - 1
            ma, mb = res.module(a), res.module(b)
            for ai in range(ma.rank):
                for bi in range(mb.rank):
                    if (a, ai) > (b, bi):
                        continue
                    self.table[self._key(a, ai, b, bi)] = \
                        self._compute(a, ai, b, bi)

    def _compute(self, a, ai, b, bi) -> Vec:
        res = self.res
        ring = res.ring
        tgt_lvl = a + b - 1
        tgt = res.module(tgt_lvl)
        if a == 1 or b == 1:
            # unit law: mu(1 (x) B) = B = mu(B (x) 1)
            lvl, idx = (b, bi) if a == 1 else (a, ai)
            return res.module(lvl).basis(idx) if tgt_lvl == lvl else tgt.zero()
        if a == 0 and b == 0:
            if ai == bi:
                return tgt.zero()
            fa = res.gens[ai]
            fb = res.gens[bi]
            f0 = res.module(0)
            e_ab = Vec(f0, {bi: fa, ai: -fb})
            if res.standard:
                k = res.koszul_index.get((ai, bi))
                out = tgt.zero()
                return tgt.basis(k) if k is not None else out
            return self._lift(tgt_lvl, e_ab)
        # general: z = mu(dA (x) B) + (-1)^{a-1} mu(A (x) dB); lift z through d
        dA = self.res.d_basis(a, ai)
        dB = self.res.d_basis(b, bi)
        z = self.vec_pair(a + 1, dA, b, res.module(b).basis(bi))
        sgn = QQ(-1) if (a - 1) % 2 else QQ(1)
        z = z + self.vec_pair(a, res.module(a).basis(ai), b + 1, dB).scale(sgn)
        w = self._lift(tgt_lvl, z)
        if (res.standard and a == 0 and tgt_lvl - 1 in res.split0
                and any(c not in res.split0.get(tgt_lvl - 1, [])
                        and c in res.split1.get(tgt_lvl - 1, [])
                        for c in self._lift_comps(w))):
            self.to_f0_ok = False
        return w

    @staticmethod
    def _lift_comps(w: Vec):
        return list(w.comps)

    def _lift(self, src_lvl: int, z: Vec) -> Vec:
        """Solve d(w) = z with w in F^{src_lvl}."""
        res = self.res
        if z.is_zero():
            return res.module(src_lvl).zero()
        cols = [res.d_basis(src_lvl, c) for c in range(res.rank(src_lvl))]
        coeffs = lift_through(z, cols)
        if coeffs is None:
            raise RuntimeError("mu: lift failed on an exact complex (invariant violation)")
        return res.module(src_lvl).vec(coeffs)

    def check_chain_property(self) -> bool:
        """d mu(A,B) = mu(dA,B) + (-1)^{a-1} mu(A,dB) on all table pairs."""
        res = self.res
        for (a, ai, b, bi), w in self.table.items():
            lhs = res.d_vec(a + b - 1, w) if not w.is_zero() else \
                res.module(a + b).zero()
            dA = res.d_basis(a, ai) if a < 1 else res.module(2 if a == 1 else a + 1).zero()
            z = self.vec_pair(a + 1, dA, b, res.module(b).basis(bi)) if a < 1 else \
                res.module(a + b).zero()
            if b < 1:
                dB = res.d_basis(b, bi)
                sgn = QQ(-1) if (a - 1) % 2 else QQ(1)
                z = z + self.vec_pair(a, res.module(a).basis(ai), b + 1, dB).scale(sgn)
            if not (lhs - z).is_zero():
                return False
        return True


def mu_extend(res: Resolution) -> Mu:
    return Mu(res)


class GradedHom:
    """Degree-deg element of Hom(F^{<=0}, F_+), vanishing on F^1_+.

    comps maps (src_level, src_index) -> Vec in F^{src_level + deg}_+.
    """

    __slots__ = ("res", "deg", "comps")

    def __init__(self, res: Resolution, deg: int, comps: dict | None = None):
        self.res = res
        self.deg = deg
        self.comps = {}
        if comps:
            for k, v in comps.items():
                if not v.is_zero():
                    self.comps[k] = v

    def is_zero(self) -> bool:
        return not self.comps

    def copy(self) -> "GradedHom":
        return GradedHom(self.res, self.deg, dict(self.comps))

    def add(self, other: "GradedHom") -> "GradedHom":
        if other.deg != self.deg:
            raise ValueError("degree mismatch")
        out = dict(self.comps)
        for k, v in other.comps.items():
            w = out.get(k)
            out[k] = v if w is None else w + v
        return GradedHom(self.res, self.deg, out)

    def scale(self, f) -> "GradedHom":
        return GradedHom(self.res, self.deg,
                         {k: v.scale(f) for k, v in self.comps.items()})

    def apply(self, src_lvl: int, v: Vec) -> Vec:
        """Apply to a vector living in F^{src_lvl}_+ (zero on F^1)."""
        tgt_lvl = src_lvl + self.deg
        res = self.res
        if src_lvl > 0 or tgt_lvl > 1 or tgt_lvl < res.min_level:
            return FreeMod(res.ring, 0).zero()
        out = res.module(tgt_lvl).zero()
        for i, p in v.comps.items():
            w = self.comps.get((src_lvl, i))
            if w is not None:
                out = out + w.scale(p)
        return out

    def compose(self, other: "GradedHom") -> "GradedHom":
        """self o other."""
        res = self.res
        out = GradedHom(res, self.deg + other.deg)
        acc: dict = {}
        for (lvl, i), w in other.comps.items():
            img = self.apply(lvl + other.deg, w)
            if img.is_zero():
                continue
            key = (lvl, i)
            cur = acc.get(key)
            acc[key] = img if cur is None else cur + img
        out.comps = {k: v for k, v in acc.items() if not v.is_zero()}
        return out

    def bracket(self, other: "GradedHom") -> "GradedHom":
        sgn = QQ(-1) if (self.deg * other.deg) % 2 else QQ(1)
        return self.compose(other).add(other.compose(self).scale(-sgn))

    def differential(self) -> "GradedHom":
        """[d, phi] = d o phi - (-1)^deg phi o d (so d is a bracket
        derivation: d[a,b] = [da,b] + (-1)^|a| [a,db])."""
        res = self.res
        out = GradedHom(res, self.deg + 1)
        acc: dict = {}
        # d o phi
        for (lvl, i), w in self.comps.items():
            tgt_lvl = lvl + self.deg
            if tgt_lvl > 0:
                continue   # no differential out of F^1
            img = res.d_vec(tgt_lvl, w)
            if not img.is_zero():
                k = (lvl, i)
                cur = acc.get(k)
                acc[k] = img if cur is None else cur + img
        # - (-1)^deg phi o d
        sgn = QQ(1) if self.deg % 2 else QQ(-1)
        for j in res.levels():
            if j > 0 or j not in res.diffs:
                continue
            for i in range(res.rank(j)):
                img = self.apply(j + 1, res.d_basis(j, i)).scale(sgn)
                if not img.is_zero():
                    k = (j, i)
                    cur = acc.get(k)
                    acc[k] = img if cur is None else cur + img
        out.comps = {k: v for k, v in acc.items() if not v.is_zero()}
        return out

    def __eq__(self, other):
        return (isinstance(other, GradedHom) and self.deg == other.deg
                and self.add(other.scale(-1)).is_zero())

    def __repr__(self):
        return f"GradedHom(deg={self.deg}, {len(self.comps)} blocks)"


def mu_action(mu: Mu, lvl: int, g: Vec, phi: GradedHom) -> GradedHom:
    """Module action F^lvl x N^deg -> N^{deg+lvl-1}: postmultiply values."""
    res = phi.res
    out = GradedHom(res, phi.deg + lvl - 1)
    acc: dict = {}
    for (src, i), w in phi.comps.items():
        img = mu.vec_pair(lvl, g, src + phi.deg, w)
        if not img.is_zero():
            acc[(src, i)] = acc.get((src, i), res.module(src + phi.deg + lvl - 1).zero()) + img
    out.comps = {k: v for k, v in acc.items() if not v.is_zero()}
    return out


class NormalDGLA:
    """N = Hom^.(F, F_+) with bracket, differential, and complex model."""

    def __init__(self, res: Resolution, mu: Mu):
        self.res = res
        self.mu = mu
        self._index: dict = {}
        self._complex: ChainComplex | None = None

    # -- basis bookkeeping ---------------------------------------------------

    def degrees(self):
        lo = min(self.res.levels())
        return range(lo - 0, 1 - lo + 1)

    def basis_index(self, deg: int):
        """List of (src_lvl, src_idx, tgt_idx) for N^deg."""
        if deg in self._index:
            return self._index[deg]
        out = []
        for j in sorted(l for l in self.res.levels() if l <= 0):
            tgt = j + deg
            if tgt < self.res.min_level or tgt > 1:
                continue
            for b in range(self.res.rank(j)):
                for a in range(self.res.rank(tgt)):
                    out.append((j, b, a))
        self._index[deg] = out
        return out

    def basis_elt(self, deg: int, key) -> GradedHom:
        (j, b, a) = key
        tgt = self.res.module(j + deg)
        return GradedHom(self.res, deg, {(j, b): tgt.basis(a)})

    def from_hom(self, phi: GradedHom):
        """Coordinates of phi over basis_index(phi.deg) as polynomials."""
        idx = self.basis_index(phi.deg)
        pos = {k: n for n, k in enumerate(idx)}
        coords = [self.res.ring.zero()] * len(idx)
        for (j, b), w in phi.comps.items():
            for a, p in w.comps.items():
                coords[pos[(j, b, a)]] = p
        return coords

    def complex(self) -> ChainComplex:
        if self._complex is not None:
            return self._complex
        C = ChainComplex(self.res.ring)
        degs = sorted(self.degrees())
        for i in degs:
            idx = self.basis_index(i)
            tw, labels = [], []
            for (j, b, a) in idx:
                tw.append(self.res.module(j + i).twists[a]
                          - self.res.module(j).twists[b])
                labels.append(f"{self.res.module(j).labels[b]}*>"
                              f"{self.res.module(j + i).labels[a]}")
            C.set_module(i, FreeModule(self.res.ring, len(idx), twists=tw,
                                       labels=labels))
        for i in degs:
            src = self.basis_index(i)
            if not src:
                continue
            mat = []
            for key in src:
                dphi = self.basis_elt(i, key).differential()
                mat.append(self.from_hom(dphi))
            C.set_diff(i, mat)
        self._complex = C
        return C

    def cohomology(self, i: int) -> PresentedModule:
        return cohomology(self.complex(), i)


def normal_dgla(res: Resolution, mu: Mu | None = None) -> NormalDGLA:
    return NormalDGLA(res, mu if mu is not None else Mu(res))


def normal_ext_oracle(res: Resolution, i: int) -> PresentedModule:
    """Ext^{i-1}(I, A_X) (module indexing): the independent oracle for
    H^i(N), since F_+ resolves A_X placed in degree 1."""
    from .homalg import presented_ideal, quotient_ring_module
    ring = res.ring
    I = presented_ideal(ring, res.gens)
    AX = quotient_ring_module(ring, res.gens)
    if i - 1 < 0:
        from .homalg import zero_module
        return zero_module(ring)
    return ext(I, AX, i - 1)


class ReducedNormal:
    """pi, d' = d + d pi - pi d, and the redN / N_0 splitting data."""

    def __init__(self, res: Resolution, mu: Mu):
        if not res.standard:
            raise ValueError("reduced_normal needs a standard resolution")
        self.res = res
        self.mu = mu
        self.N = NormalDGLA(res, mu)

    # -- pi ------------------------------------------------------------------

    def pi(self, phi: GradedHom) -> GradedHom:
        """(pidef2)-style projector; the sign (-1)^{i+1} (rather than the
        paper's (-1)^i) is what makes the projection lemma, the Lie
        homomorphism lemma and d'-stability of redN all hold under this
        package's mu and differential conventions (verified by tests)."""
        res = self.res
        out = GradedHom(res, phi.deg)
        if -1 not in res.terms:
            return out
        acc: dict = {}
        f0_rank = res.rank(0)
        for (lvl, a), g in phi.comps.items():
            if lvl != 0:
                continue
            i = phi.deg  # g lives in F^{0 + deg}
            sgn = QQ(-1) if (i + 1) % 2 else QQ(1)
            for b in range(f0_rank):
                if b == a:
                    continue
                pair = (a, b) if a < b else (b, a)
                k = res.koszul_index.get(pair)
                if k is None:
                    continue
                flip = QQ(1) if a < b else QQ(-1)
                val = self.mu.vec_pair(0, res.module(0).basis(b),
                                       0 + i, g).scale(sgn * flip)
                if val.is_zero():
                    continue
                key = (-1, k)
                cur = acc.get(key)
                acc[key] = val if cur is None else cur + val
        out.comps = {k: v for k, v in acc.items() if not v.is_zero()}
        return out

    def d_prime(self, phi: GradedHom) -> GradedHom:
        d = phi.differential()
        return d.add(self.pi(phi).differential()).add(self.pi(d).scale(-1))

    def id_plus_pi(self, phi: GradedHom) -> GradedHom:
        return phi.add(self.pi(phi))

    def id_minus_pi(self, phi: GradedHom) -> GradedHom:
        return phi.add(self.pi(phi).scale(-1))

    # -- splitting -----------------------------------------------------------

    def is_red_key(self, key) -> bool:
        (j, b, a) = key
        if j == 0:
            return True
        return b in set(self.res.split1.get(j, []))

    def project(self, phi: GradedHom, red: bool) -> GradedHom:
        out = GradedHom(self.res, phi.deg)
        for (lvl, b), w in phi.comps.items():
            in_red = (lvl == 0) or (b in set(self.res.split1.get(lvl, [])))
            if in_red == red:
                out.comps[(lvl, b)] = w
        return out

    def red_complex(self) -> tuple:
        """(ChainComplex of redN under d', leak_flag).

        leak_flag is True when d' pushes some redN basis element into N_0
        (possible only through Hom(F^{-2}_0, .) sources; reported, see notes).
        """
        res = self.res
        C = ChainComplex(res.ring)
        index: dict = {}
        for i in self.N.degrees():
            idx = [k for k in self.N.basis_index(i) if self.is_red_key(k)]
            index[i] = idx
            tw = [res.module(k[0] + i).twists[k[2]] - res.module(k[0]).twists[k[1]]
                  for k in idx]
            C.set_module(i, FreeModule(res.ring, len(idx), twists=tw))
        leak = False
        for i in sorted(index):
            idx = index[i]
            if not idx:
                continue
            tgt_idx = index.get(i + 1, [])
            pos = {k: n for n, k in enumerate(tgt_idx)}
            mat = []
            for key in idx:
                dphi = self.d_prime(self.N.basis_elt(i, key))
                row = [res.ring.zero()] * len(tgt_idx)
                for (j, b), w in dphi.comps.items():
                    for a, p in w.comps.items():
                        k2 = (j, b, a)
                        if k2 in pos:
                            row[pos[k2]] = p
                        elif not p.is_zero():
                            leak = True
                mat.append(row)
            C.set_diff(i, mat)
        return C, leak

    def splitting_report(self) -> dict:
        """Check pi^2 = 0, (d')^2 = 0, projection identities, d'-stability."""
        res = self.res
        report = {"pi_squared_zero": True, "d_prime_squared_zero": True,
                  "projections_ok": True, "red_stable": True, "n0_stable": True,
                  "id_plus_pi_chain_map": True}
        for i in self.N.degrees():
            for key in self.N.basis_index(i):
                phi = self.N.basis_elt(i, key)
                if not self.pi(self.pi(phi)).is_zero():
                    report["pi_squared_zero"] = False
                if not self.d_prime(self.d_prime(phi)).is_zero():
                    report["d_prime_squared_zero"] = False
                pr = self.project(phi, True).add(self.project(phi, False))
                if not pr.add(phi.scale(-1)).is_zero():
                    report["projections_ok"] = False
                ipm = self.id_minus_pi(self.id_plus_pi(phi))
                if not ipm.add(phi.scale(-1)).is_zero():
                    report["projections_ok"] = False
                dp = self.d_prime(phi)
                if self.is_red_key(key):
                    if not self.project(dp, False).is_zero():
                        report["red_stable"] = False
                else:
                    if not self.project(dp, True).is_zero():
                        report["n0_stable"] = False
                # (id+pi) d' = d (id+pi)
                lhs = self.id_plus_pi(dp)
                rhs = self.id_plus_pi(phi).differential()
                if not lhs.add(rhs.scale(-1)).is_zero():
                    report["id_plus_pi_chain_map"] = False
        return report

    def pi_homo_check(self) -> bool:
        """Lemma (pi-homo) on all basis pairs of Hom(F^0, F^0)."""
        res = self.res
        n0 = res.rank(0)
        for a1 in range(n0):
            for c1 in range(n0):
                for a2 in range(n0):
                    for c2 in range(n0):
                        p1 = GradedHom(res, 0, {(0, a1): res.module(0).basis(c1)})
                        p2 = GradedHom(res, 0, {(0, a2): res.module(0).basis(c2)})
                        lhs = self.pi(p1.bracket(p2))
                        rhs = self.pi(p1).bracket(self.pi(p2))
                        if not lhs.add(rhs.scale(-1)).is_zero():
                            return False
        return True


def reduced_normal(res: Resolution, mu: Mu | None = None) -> ReducedNormal:
    return ReducedNormal(res, mu if mu is not None else Mu(res))
