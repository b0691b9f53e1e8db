"""Bimodules over pairs of path algebras and stable equivalences of Morita type.

A bimodule for the pair (B, A) -- left action of B, right action of A -- is
stored as a left module over the tensor presentation of B with the opposite
of A: a quiver with one vertex per vertex pair, one arrow per (B-arrow,
A-vertex) carrying the left action, one arrow per (B-vertex, reversed
A-arrow) carrying the right action, and relations lifting both factors'
relations together with the commutation squares.  Validating a
representation over that presentation is exactly the statement that both
actions satisfy their own algebra's relations and commute with each other.

On top of that sit the balanced tensor product (a cokernel of the relation
rows m*a (x) x - m (x) a*x), the two duals Hom into either regular module,
and the certification entry points: Frobenius bimodules, stable equivalence
of Morita type with explicit projective complements, unit/counit defect
projectivity, and a side-by-side invariant comparison for two algebras.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactla
from .gorenstein import gp_catalog
from .ktheory import k0_gorenstein, k1_gorenstein
from .presentation import (
    FiniteDimAlgebra,
    Path,
    Quiver,
    RelationElem,
    build_algebra,
    opposite,
)
from .rep import (
    Morphism,
    Representation,
    _right_mult_on_projectives,
    decompose,
    direct_sum,
    hom_basis,
    is_isomorphic,
    is_projective,
    projective,
    zero_rep,
)


class AlgebraMismatch(ValueError):
    """The algebras of the operands do not line up."""


# ---------------------------------------------------------------------------
# the tensor presentation


def _tv(u: str, v: str) -> str:
    return f"{u}.{v}"


def _lname(label: str, v: str) -> str:
    return f"{label}@{v}"


def _rname(u: str, label: str) -> str:
    return f"{u}~{label}"


_TENSOR_CACHE = {}
_POINT_CACHE = {}


def tensor_algebra(b: FiniteDimAlgebra, a: FiniteDimAlgebra) -> FiniteDimAlgebra:
    """The algebra whose left modules are (b, a)-bimodules.

    Built as a quiver presentation from the two factors: vertices are pairs
    u.v, arrows are the left-action copies of b's arrows and the
    right-action copies of a's reversed arrows, and the relations are both
    factors' relations (one copy per vertex of the other factor) plus a
    commutation square for every arrow pair.  The result is cached per
    operand pair and its dimension is checked to be dim(b) * dim(a).
    """
    key = (id(b), id(a))
    hit = _TENSOR_CACHE.get(key)
    if hit is not None and hit[0] is b and hit[1] is a:
        return hit[2]
    if b.field.char != a.field.char:
        raise AlgebraMismatch("the factors are defined over different fields")
    f = b.field
    op = opposite(a)
    verts = [_tv(u, v) for u in b.quiver.vertices for v in a.quiver.vertices]
    arrows = []
    for beta in b.quiver.arrows:
        for v in a.quiver.vertices:
            arrows.append(
                (_lname(beta.label, v), _tv(beta.source, v), _tv(beta.target, v))
            )
    for u in b.quiver.vertices:
        for al in op.quiver.arrows:
            arrows.append((_rname(u, al.label), _tv(u, al.source), _tv(u, al.target)))
    qt = Quiver.make(verts, arrows)
    rels = []
    for r in b.relations:
        for v in a.quiver.vertices:
            rels.append(
                RelationElem(
                    tuple(
                        (
                            c,
                            Path(
                                _tv(p.source, v),
                                _tv(p.target, v),
                                tuple(_lname(lab, v) for lab in p.arrows),
                            ),
                        )
                        for c, p in r.terms
                    )
                )
            )
    for r in op.relations:
        for u in b.quiver.vertices:
            rels.append(
                RelationElem(
                    tuple(
                        (
                            c,
                            Path(
                                _tv(u, p.source),
                                _tv(u, p.target),
                                tuple(_rname(u, lab) for lab in p.arrows),
                            ),
                        )
                        for c, p in r.terms
                    )
                )
            )
    one = f.canon(1)
    minus = f.canon(-1)
    for beta in b.quiver.arrows:
        for al in op.quiver.arrows:
            src = _tv(beta.source, al.source)
            tgt = _tv(beta.target, al.target)
            rels.append(
                RelationElem(
                    (
                        (
                            one,
                            Path(
                                src,
                                tgt,
                                (
                                    _rname(beta.source, al.label),
                                    _lname(beta.label, al.target),
                                ),
                            ),
                        ),
                        (
                            minus,
                            Path(
                                src,
                                tgt,
                                (
                                    _lname(beta.label, al.source),
                                    _rname(beta.target, al.label),
                                ),
                            ),
                        ),
                    )
                )
            )
    t = build_algebra(qt, rels, f, max_len=b.loewy_length + a.loewy_length)
    assert t.dim == b.dim * a.dim
    _TENSOR_CACHE[key] = (b, a, t)
    return t


def point_algebra(field) -> FiniteDimAlgebra:
    """The one-vertex arrowless algebra; its modules are plain vector spaces."""
    if field.char not in _POINT_CACHE:
        _POINT_CACHE[field.char] = build_algebra(Quiver.make(("pt",), ()), [], field)
    return _POINT_CACHE[field.char]


# ---------------------------------------------------------------------------
# bimodules


@dataclass
class Bimodule:
    """A (left, right)-bimodule, stored over the tensor presentation."""

    left: FiniteDimAlgebra
    right: FiniteDimAlgebra
    rep: Representation

    def __post_init__(self):
        if self.rep.algebra is not tensor_algebra(self.left, self.right):
            raise AlgebraMismatch(
                "the representation is not over the tensor presentation "
                "of the stated pair"
            )

    @property
    def dim(self) -> int:
        return self.rep.total_dim

    @property
    def is_zero(self) -> bool:
        return self.rep.is_zero

    def component_dims(self) -> dict:
        return {
            (u, v): self.rep.dims[_tv(u, v)]
            for u in self.left.quiver.vertices
            for v in self.right.quiver.vertices
        }

    def describe(self) -> str:
        comps = ", ".join(
            f"({u},{v}): {d}" for (u, v), d in sorted(self.component_dims().items())
        )
        return f"bimodule of dimension {self.dim} with components {comps}"


def regular_bimodule(a: FiniteDimAlgebra) -> Bimodule:
    """The algebra itself as a bimodule over (a, a)."""
    t = tensor_algebra(a, a)
    f = a.field
    idx = {}
    for i, p in enumerate(a.basis):
        idx.setdefault((p.target, p.source), []).append(i)
    dims = {}
    for u in a.quiver.vertices:
        for v in a.quiver.vertices:
            dims[_tv(u, v)] = len(idx.get((u, v), []))
    maps = {}
    for beta in a.quiver.arrows:
        bi = a.arrow_index[beta.label]
        for v in a.quiver.vertices:
            src = idx.get((beta.source, v), [])
            tgt = idx.get((beta.target, v), [])
            mat = f.zeros((len(tgt), len(src)))
            for col, i in enumerate(src):
                for k, c in a.mult_basis(bi, i):
                    mat[tgt.index(k), col] = f.canon(mat[tgt.index(k), col] + c)
            maps[_lname(beta.label, v)] = mat
    op = opposite(a)
    for u in a.quiver.vertices:
        for al in op.quiver.arrows:
            ai = a.arrow_index[al.label]
            src = idx.get((u, al.source), [])
            tgt = idx.get((u, al.target), [])
            mat = f.zeros((len(tgt), len(src)))
            for col, i in enumerate(src):
                for k, c in a.mult_basis(i, ai):
                    mat[tgt.index(k), col] = f.canon(mat[tgt.index(k), col] + c)
            maps[_rname(u, al.label)] = mat
    return Bimodule(a, a, Representation(t, dims, maps, check=True))


def bimodule_from_module(x: Representation) -> Bimodule:
    """View a left module as a bimodule with trivial right point action."""
    a = x.algebra
    pt = point_algebra(a.field)
    t = tensor_algebra(a, pt)
    dims = {_tv(v, "pt"): x.dims[v] for v in a.quiver.vertices}
    maps = {_lname(arw.label, "pt"): x.maps[arw.label] for arw in a.quiver.arrows}
    return Bimodule(a, pt, Representation(t, dims, maps, check=True))


def module_from_bimodule(m: Bimodule) -> Representation:
    """Forget the trivial point action of a (b, point)-bimodule."""
    if m.right.quiver.vertices != ("pt",):
        raise AlgebraMismatch("the right algebra is not the point algebra")
    b = m.left
    dims = {u: m.rep.dims[_tv(u, "pt")] for u in b.quiver.vertices}
    maps = {a.label: m.rep.maps[_lname(a.label, "pt")] for a in b.quiver.arrows}
    return Representation(b, dims, maps, check=True)


def _block_diag(f, blocks, rdims, cdims):
    mat = f.zeros((sum(rdims), sum(cdims)))
    r0 = 0
    c0 = 0
    for blk, rd, cd in zip(blocks, rdims, cdims):
        mat[r0 : r0 + rd, c0 : c0 + cd] = blk
        r0 += rd
        c0 += cd
    return mat


def left_module_of(m: Bimodule) -> Representation:
    """Forget the right action; the left arrows act blockwise."""
    b, a = m.left, m.right
    avs = a.quiver.vertices
    dims = {
        u: sum(m.rep.dims[_tv(u, v)] for v in avs) for u in b.quiver.vertices
    }
    maps = {}
    for beta in b.quiver.arrows:
        maps[beta.label] = _block_diag(
            b.field,
            [m.rep.maps[_lname(beta.label, v)] for v in avs],
            [m.rep.dims[_tv(beta.target, v)] for v in avs],
            [m.rep.dims[_tv(beta.source, v)] for v in avs],
        )
    return Representation(b, dims, maps, check=True)


def right_module_of(m: Bimodule) -> Representation:
    """Forget the left action; a module over the opposite of the right algebra."""
    b, a = m.left, m.right
    op = opposite(a)
    bvs = b.quiver.vertices
    dims = {
        v: sum(m.rep.dims[_tv(u, v)] for u in bvs) for v in a.quiver.vertices
    }
    maps = {}
    for al in op.quiver.arrows:
        maps[al.label] = _block_diag(
            a.field,
            [m.rep.maps[_rname(u, al.label)] for u in bvs],
            [m.rep.dims[_tv(u, al.target)] for u in bvs],
            [m.rep.dims[_tv(u, al.source)] for u in bvs],
        )
    return Representation(op, dims, maps, check=True)


# ---------------------------------------------------------------------------
# balanced tensor products


def _kron(f, x, y):
    k = np.kron(x, y)
    return (k % f.char) if f.char else k


def tensor_bimodules(m: Bimodule, n: Bimodule) -> Bimodule:
    """The balanced tensor product of m over (B, A) with n over (A, C).

    Formed inside the outer tensor sum Y(u, c) = sum over v of
    M(u, v) (x) N(v, c) as the quotient by the rows m*a (x) x - m (x) a*x,
    one per inner arrow and basis pair; the quotient basis is the canonical
    complement of the reduced rows, so the dimension is dim(Y) minus the
    row rank, and the quotient is re-validated against all relations of the
    (B, C) tensor presentation.
    """
    if m.right is not n.left:
        raise AlgebraMismatch("inner algebras of the tensor factors differ")
    b, a, c = m.left, m.right, n.right
    f = b.field
    t = tensor_algebra(b, c)
    avs = a.quiver.vertices

    def dm(u, v):
        return m.rep.dims[_tv(u, v)]

    def dn(v, ch):
        return n.rep.dims[_tv(v, ch)]

    off = {}
    ydims = {}
    for u in b.quiver.vertices:
        for ch in c.quiver.vertices:
            o = {}
            tot = 0
            for v in avs:
                o[v] = tot
                tot += dm(u, v) * dn(v, ch)
            off[(u, ch)] = o
            ydims[_tv(u, ch)] = tot
    ymaps = {}
    for beta in b.quiver.arrows:
        for ch in c.quiver.vertices:
            mat = f.zeros((ydims[_tv(beta.target, ch)], ydims[_tv(beta.source, ch)]))
            for v in avs:
                blk = _kron(f, m.rep.maps[_lname(beta.label, v)], f.eye(dn(v, ch)))
                r0 = off[(beta.target, ch)][v]
                c0 = off[(beta.source, ch)][v]
                mat[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
            ymaps[_lname(beta.label, ch)] = mat
    cop = opposite(c)
    for u in b.quiver.vertices:
        for ga in cop.quiver.arrows:
            mat = f.zeros((ydims[_tv(u, ga.target)], ydims[_tv(u, ga.source)]))
            for v in avs:
                blk = _kron(f, f.eye(dm(u, v)), n.rep.maps[_rname(v, ga.label)])
                r0 = off[(u, ga.target)][v]
                c0 = off[(u, ga.source)][v]
                mat[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
            ymaps[_rname(u, ga.label)] = mat
    y = Representation(t, ydims, ymaps, check=True)

    from .rep import quotient_by_rows

    rows = {}
    for u in b.quiver.vertices:
        for ch in c.quiver.vertices:
            pieces = []
            for al in a.quiver.arrows:
                w, v = al.source, al.target
                s = dm(u, v) * dn(w, ch)
                if s == 0:
                    continue
                rmat = f.zeros((ydims[_tv(u, ch)], s))
                blk = _kron(f, m.rep.maps[_rname(u, al.label)], f.eye(dn(w, ch)))
                r0 = off[(u, ch)][w]
                rmat[r0 : r0 + blk.shape[0], :] = blk
                blk = _kron(f, f.eye(dm(u, v)), n.rep.maps[_lname(al.label, ch)])
                r0 = off[(u, ch)][v]
                rmat[r0 : r0 + blk.shape[0], :] = f.add(
                    rmat[r0 : r0 + blk.shape[0], :], f.scale(f.canon(-1), blk)
                )
                pieces.append(rmat.T)
            if pieces:
                rows[_tv(u, ch)] = np.vstack(pieces)
    q, _ = quotient_by_rows(y, rows)
    out = Representation(t, q.dims, q.maps, check=True)
    return Bimodule(b, c, out)


def tensor(m: Bimodule, x: Representation) -> Representation:
    """The left module m (x) x for a left module x over m's right algebra."""
    if x.algebra is not m.right:
        raise AlgebraMismatch("the module is not over the bimodule's right algebra")
    return module_from_bimodule(tensor_bimodules(m, bimodule_from_module(x)))


# ---------------------------------------------------------------------------
# duals and Frobenius bimodules


def _column_module(m: Bimodule, v: str) -> Representation:
    """The left-algebra module on the right-vertex-v slice of the bimodule."""
    b = m.left
    dims = {u: m.rep.dims[_tv(u, v)] for u in b.quiver.vertices}
    maps = {a.label: m.rep.maps[_lname(a.label, v)] for a in b.quiver.arrows}
    return Representation(b, dims, maps, check=True)


def _row_module(m: Bimodule, u: str) -> Representation:
    """The right-algebra module on the left-vertex-u slice, over the opposite."""
    op = opposite(m.right)
    dims = {v: m.rep.dims[_tv(u, v)] for v in m.right.quiver.vertices}
    maps = {al.label: m.rep.maps[_rname(u, al.label)] for al in op.quiver.arrows}
    return Representation(op, dims, maps, check=True)


def _hom_coords(f, basis_mat, morphism):
    coeffs = exactla.solve_raw(f, basis_mat.T, morphism.as_vector())
    assert coeffs is not None
    return coeffs


def _hom_family_rep(t, f, homs, dims, arrow_actions):
    """Assemble a representation from hom-space components and their actions.

    homs maps tensor vertices to HomSpaces, arrow_actions maps arrow labels
    to (src vertex, tgt vertex, morphism-level action); each action is
    expressed in the chosen hom bases by coordinate solving.
    """
    basis_mats = {}
    for tv, hs in homs.items():
        if hs.dim:
            stacked = np.stack([bm.as_vector() for bm in hs.basis])
            basis_mats[tv] = stacked.astype(np.int64 if f.char else object)
    maps = {}
    for label, (src, tgt, act) in arrow_actions.items():
        mat = f.zeros((dims[tgt], dims[src]))
        for col, g in enumerate(homs[src].basis):
            img = act(g)
            if dims[tgt]:
                mat[:, col] = _hom_coords(f, basis_mats[tgt], img)
            else:
                assert img.is_zero
        maps[label] = mat
    return Representation(t, dims, maps, check=True)


def left_dual(m: Bimodule) -> Bimodule:
    """Left-linear maps of the bimodule into the left regular module.

    The component at (v, u) is Hom over the left algebra from the v-column
    of m to the projective at u; the result is a bimodule over
    (right algebra, left algebra).
    """
    b, a = m.left, m.right
    f = b.field
    t = tensor_algebra(a, b)
    cols = {v: _column_module(m, v) for v in a.quiver.vertices}
    projs = {u: projective(b, u) for u in b.quiver.vertices}
    homs = {}
    dims = {}
    for v in a.quiver.vertices:
        for u in b.quiver.vertices:
            hs = hom_basis(cols[v], projs[u])
            homs[_tv(v, u)] = hs
            dims[_tv(v, u)] = hs.dim
    actions = {}
    for al in a.quiver.arrows:
        w, v = al.source, al.target
        for u in b.quiver.vertices:
            right_act = Morphism(
                cols[v],
                cols[w],
                {u2: m.rep.maps[_rname(u2, al.label)] for u2 in b.quiver.vertices},
            )
            actions[_lname(al.label, u)] = (
                _tv(w, u),
                _tv(v, u),
                lambda g, ra=right_act: g.compose(ra),
            )
    bop = opposite(b)
    for v in a.quiver.vertices:
        for be in bop.quiver.arrows:
            u1, u0 = be.source, be.target
            rho = _right_mult_on_projectives(projs[u1], projs[u0], be.label)
            actions[_rname(v, be.label)] = (
                _tv(v, u1),
                _tv(v, u0),
                lambda g, r=rho: r.compose(g),
            )
    return Bimodule(a, b, _hom_family_rep(t, f, homs, dims, actions))


def right_dual(m: Bimodule) -> Bimodule:
    """Right-linear maps of the bimodule into the right regular module.

    The component at (v, u) is Hom over the opposite of the right algebra
    from the u-row of m to the opposite projective at v; the result is a
    bimodule over (right algebra, left algebra), comparable with left_dual.
    """
    b, a = m.left, m.right
    f = b.field
    t = tensor_algebra(a, b)
    op = opposite(a)
    rows = {u: _row_module(m, u) for u in b.quiver.vertices}
    projs = {v: projective(op, v) for v in a.quiver.vertices}
    homs = {}
    dims = {}
    for v in a.quiver.vertices:
        for u in b.quiver.vertices:
            hs = hom_basis(rows[u], projs[v])
            homs[_tv(v, u)] = hs
            dims[_tv(v, u)] = hs.dim
    actions = {}
    for al in a.quiver.arrows:
        w, v = al.source, al.target
        for u in b.quiver.vertices:
            rho = _right_mult_on_projectives(projs[w], projs[v], al.label)
            actions[_lname(al.label, u)] = (
                _tv(w, u),
                _tv(v, u),
                lambda g, r=rho: r.compose(g),
            )
    for v in a.quiver.vertices:
        for be in b.quiver.arrows:
            u0, u1 = be.source, be.target
            left_act = Morphism(
                rows[u0],
                rows[u1],
                {v2: m.rep.maps[_lname(be.label, v2)] for v2 in a.quiver.vertices},
            )
            actions[_rname(v, be.label)] = (
                _tv(v, u1),
                _tv(v, u0),
                lambda g, la=left_act: g.compose(la),
            )
    return Bimodule(a, b, _hom_family_rep(t, f, homs, dims, actions))


@dataclass
class FrobeniusReport:
    dimension: int
    left_projective: bool
    right_projective: bool
    duals_isomorphic: object  # bool, or None when not reached
    passed: bool
    reason: str


def check_frobenius_bimodule(m: Bimodule) -> FrobeniusReport:
    """Projectivity on both sides plus agreement of the two duals."""
    if m.is_zero:
        return FrobeniusReport(0, True, True, None, False, "zero bimodule")
    lp = is_projective(left_module_of(m))
    rp = is_projective(right_module_of(m))
    if not lp or not rp:
        side = "left" if not lp else "right"
        return FrobeniusReport(
            m.dim, lp, rp, None, False, f"not projective as a {side} module"
        )
    ok, _ = is_isomorphic(left_dual(m).rep, right_dual(m).rep)
    reason = "" if ok else "the two duals are not isomorphic"
    return FrobeniusReport(m.dim, lp, rp, ok, ok, reason)


# ---------------------------------------------------------------------------
# stable equivalences of Morita type


@dataclass
class SemtReport:
    passed: bool
    p: object  # Bimodule complement of n (x) m, or None
    q: object  # Bimodule complement of m (x) n, or None
    product_nm: Bimodule
    product_mn: Bimodule
    reason: str

    def describe(self) -> str:
        if self.passed:
            return (
                "stable equivalence of Morita type: complements of dimension "
                f"{self.p.dim} and {self.q.dim}, both projective"
            )
        return f"not a stable equivalence of Morita type: {self.reason}"


def _strip_regular(t: Bimodule):
    """Split one copy of the regular bimodule off t; None when impossible."""
    reg = regular_bimodule(t.left)
    remaining = [[r, k] for r, k in decompose(t.rep)]
    for rp, rk in decompose(reg.rep):
        for slot in remaining:
            ok, _ = is_isomorphic(slot[0], rp)
            if ok and slot[1] >= rk:
                slot[1] -= rk
                break
        else:
            return None
    return [r for r, k in remaining for _ in range(k)]


def _complement_bimodule(a: FiniteDimAlgebra, parts) -> Bimodule:
    t = tensor_algebra(a, a)
    rep = direct_sum(parts)[0] if parts else zero_rep(t)
    return Bimodule(a, a, rep)


def check_semt(m: Bimodule, n: Bimodule) -> SemtReport:
    """Certify that (m, n) induce a stable equivalence of Morita type.

    Both products are computed, one copy of the relevant regular bimodule
    is split off each, and the complements are certified projective over
    their tensor presentations; the complements are returned as witnesses.
    """
    if m.left is not n.right or m.right is not n.left:
        raise AlgebraMismatch("the bimodules are not over opposite pairs")
    a, b = m.right, m.left
    nm = tensor_bimodules(n, m)
    mn = tensor_bimodules(m, n)
    parts_a = _strip_regular(nm)
    if parts_a is None:
        return SemtReport(
            False,
            None,
            None,
            nm,
            mn,
            "the product n (x) m has no regular-bimodule summand "
            f"(components {sorted(nm.component_dims().items())})",
        )
    parts_b = _strip_regular(mn)
    if parts_b is None:
        return SemtReport(
            False,
            None,
            None,
            nm,
            mn,
            "the product m (x) n has no regular-bimodule summand "
            f"(components {sorted(mn.component_dims().items())})",
        )
    for parts, label in ((parts_a, "n (x) m"), (parts_b, "m (x) n")):
        for part in parts:
            if not is_projective(part):
                return SemtReport(
                    False,
                    None,
                    None,
                    nm,
                    mn,
                    f"complement summand of {label} with dims "
                    f"{part.dim_vector} is not projective",
                )
    return SemtReport(
        True,
        _complement_bimodule(a, parts_a),
        _complement_bimodule(b, parts_b),
        nm,
        mn,
        "",
    )


@dataclass
class AdjunctionData:
    """A certified pair with its two projective complement bimodules."""

    m: Bimodule
    n: Bimodule
    p: Bimodule  # n (x) m is regular plus p over the right algebra
    q: Bimodule  # m (x) n is regular plus q over the left algebra

    def unit_defect(self, x: Representation) -> Representation:
        """The cokernel of the unit at x, realized as p (x) x."""
        return tensor(self.p, x)

    def counit_defect(self, y: Representation) -> Representation:
        """The kernel of the counit at y, realized as q (x) y."""
        return tensor(self.q, y)


def adjunction_data(m: Bimodule, n: Bimodule) -> AdjunctionData:
    report = check_semt(m, n)
    if not report.passed:
        raise ValueError(report.describe())
    return AdjunctionData(m, n, report.p, report.q)


@dataclass
class UnitCounitReport:
    passed: bool
    entries: list
    reason: str


def check_unit_counit_pd(m: Bimodule, n: Bimodule, samples) -> UnitCounitReport:
    """Unit and counit defects on sample modules: split off and projective.

    For a sample x over the right algebra the round trip n (x) m (x) x must
    be x plus the unit defect p (x) x, and that defect must be projective
    (projective dimension zero); dually for samples over the left algebra
    with the counit defect q (x) y.  Samples over any other algebra raise
    AlgebraMismatch.
    """
    data = adjunction_data(m, n)
    a, b = m.right, m.left
    entries = []
    for x in samples:
        matched = False
        if x.algebra is a:
            matched = True
            back = tensor(n, tensor(m, x))
            defect = data.unit_defect(x)
            split, _ = is_isomorphic(back, direct_sum([x, defect])[0])
            entries.append(
                {
                    "side": "unit",
                    "sample_dims": x.dim_vector,
                    "defect_dims": defect.dim_vector,
                    "splits": split,
                    "defect_projective": is_projective(defect),
                }
            )
        if x.algebra is b:
            matched = True
            back = tensor(m, tensor(n, x))
            defect = data.counit_defect(x)
            split, _ = is_isomorphic(back, direct_sum([x, defect])[0])
            entries.append(
                {
                    "side": "counit",
                    "sample_dims": x.dim_vector,
                    "defect_dims": defect.dim_vector,
                    "splits": split,
                    "defect_projective": is_projective(defect),
                }
            )
        if not matched:
            raise AlgebraMismatch("sample module is over neither algebra of the pair")
    bad = [e for e in entries if not (e["splits"] and e["defect_projective"])]
    reason = ""
    if bad:
        e = bad[0]
        reason = (
            f"{e['side']} defect at sample dims {e['sample_dims']}: "
            f"splits={e['splits']}, projective={e['defect_projective']}"
        )
    return UnitCounitReport(not bad, entries, reason)


# ---------------------------------------------------------------------------
# invariant comparison


@dataclass
class InvariantComparison:
    first: FiniteDimAlgebra
    second: FiniteDimAlgebra
    k0: tuple  # group descriptions, or None when the catalog is unsettled
    k1: tuple  # K1Results, or None
    cm: tuple  # catalog verdict strings
    gorenstein: tuple  # (status, dimension) pairs
    k0_equal: object
    k1_equal: object
    cm_equal: object
    gorenstein_equal: object
    all_predicted_equal: bool
    notes: list

    def describe(self) -> str:
        def fmt(x):
            return "unsettled" if x is None else str(x)

        lines = [
            f"{'invariant':<18} {'first':<28} {'second':<28} equal",
            f"{'K0 (stable)':<18} {fmt(self.k0[0]):<28} {fmt(self.k0[1]):<28} "
            f"{fmt(self.k0_equal)}",
            f"{'K1 (stable)':<18} "
            f"{fmt(self.k1[0].group if self.k1[0] else None):<28} "
            f"{fmt(self.k1[1].group if self.k1[1] else None):<28} "
            f"{fmt(self.k1_equal)}",
            f"{'CM verdict':<18} {self.cm[0]:<28} {self.cm[1]:<28} "
            f"{fmt(self.cm_equal)}",
            f"{'Gorenstein':<18} {str(self.gorenstein[0]):<28} "
            f"{str(self.gorenstein[1]):<28} {fmt(self.gorenstein_equal)}",
        ]
        lines.extend(f"note: {x}" for x in self.notes)
        return "\n".join(lines)


def compare_invariants(
    a: FiniteDimAlgebra,
    b: FiniteDimAlgebra,
    dim_cap: int = None,
    iter_cap: int = 32,
    seed: int = 0,
) -> InvariantComparison:
    """Side-by-side stable invariants of two algebras with equality flags.

    Compares K0 and K1 of the stable categories and the CM verdicts; those
    are the invariants a stable equivalence of Morita type must preserve,
    and all_predicted_equal records exactly their conjunction.  The
    Gorenstein data is tabulated alongside for reference.  An unsettled
    catalog propagates as None flags rather than raising.
    """
    notes = []
    cats = [gp_catalog(x, dim_cap=dim_cap, iter_cap=iter_cap) for x in (a, b)]
    cm = (cats[0].verdict, cats[1].verdict)
    k0 = [None, None]
    k1 = [None, None]
    for i, (x, cat) in enumerate(zip((a, b), cats)):
        if cat.verdict != "Unknown":
            k0[i] = k0_gorenstein(x, cat, seed=seed)
            k1[i] = k1_gorenstein(x, cat)
        else:
            notes.append(f"catalog of the {'first' if i == 0 else 'second'} "
                         "algebra is unsettled; K-groups omitted")
    k0_equal = k0[0].same_group(k0[1]) if k0[0] and k0[1] else None
    k1_equal = k1[0].group.same_group(k1[1].group) if k1[0] and k1[1] else None
    cm_equal = None if "Unknown" in cm else cm[0] == cm[1]
    gor = tuple(
        (cat.report.gorenstein_status, cat.report.gorenstein_dim) for cat in cats
    )
    if gor[0][0] == "unknown" or gor[1][0] == "unknown":
        gorenstein_equal = None
    else:
        gorenstein_equal = gor[0] == gor[1]
    all_predicted_equal = bool(k0_equal and k1_equal and cm_equal)
    return InvariantComparison(
        a,
        b,
        tuple(k0),
        tuple(k1),
        cm,
        gor,
        k0_equal,
        k1_equal,
        cm_equal,
        gorenstein_equal,
        all_predicted_equal,
        notes,
    )
