"""Mapping cone T(L0, L1) = CF(L0, L1) + Hom(CF(V, L0), CF(V, L1))[-1].

The cone computes Floer cohomology after twisting along the sphere V; its
corrected endomorphism turns the long exact sequence into an additive
statement about q-intersection numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..errors import IdentityFailure
from ..exactalg import QLaurent, RationalMatrix, rank
from ..qnumbers import EquivariantTable, q_intersection, table_from_endomorphism
from .checks import Report, _sign, build_tilde_phi1, tilde_phi2
from .core import ChainModel, GradedSpace, MultiOp, Vector, basis, vadd, vscale, vsub
from .homology import Cohomology

# coefficients of the three Hom-part terms of the cone differential:
# -mu1(alpha(v)), (-1)^|alpha| alpha(mu1 v), mu2(a, v)
DEFAULT_SIGNS = (-1, 1, 1)


@dataclass(frozen=True)
class ConeComplex:
    model: ChainModel
    V: str
    L0: str
    L1: str
    space: GradedSpace
    hom_pairs: tuple[tuple[int, int], ...]
    differential: MultiOp

    @property
    def n_cf(self) -> int:
        return self.model.cf(self.L0, self.L1).dim

    @property
    def source(self) -> GradedSpace:
        return self.model.cf(self.V, self.L0)

    @property
    def target(self) -> GradedSpace:
        return self.model.cf(self.V, self.L1)

    def hom_index(self, w: int, u: int) -> int:
        return self.n_cf + self.hom_pairs.index((w, u))

    def natural_degree(self, w: int, u: int) -> int:
        return self.target.degrees[w] - self.source.degrees[u]

    def split(self, t: Vector) -> tuple[Vector, dict[tuple[int, int], Fraction]]:
        a = {i: c for i, c in t.items() if i < self.n_cf}
        alpha = {self.hom_pairs[i - self.n_cf]: c for i, c in t.items() if i >= self.n_cf}
        return a, alpha

    def join(self, a: Vector, alpha_of: Callable[[int], Vector]) -> Vector:
        """Element with CF part ``a`` and Hom part given on basis vectors of CF(V, L0)."""
        out = dict(a)
        for u in range(self.source.dim):
            for w, c in alpha_of(u).items():
                if c:
                    out[self.hom_index(w, u)] = out.get(self.hom_index(w, u), Fraction(0)) + c
        return {k: v for k, v in out.items() if v}

    def apply_hom(self, alpha: dict[tuple[int, int], Fraction], v: Vector) -> Vector:
        out: Vector = {}
        for (w, u), c in alpha.items():
            if u in v:
                out = vadd(out, {w: c * v[u]})
        return out


def _hom_layout(m: ChainModel, V: str, L0: str, L1: str):
    src, tgt = m.cf(V, L0), m.cf(V, L1)
    pairs = tuple((w, u) for w in range(tgt.dim) for u in range(src.dim))
    cf = m.cf(L0, L1)
    degrees = list(cf.degrees) + [tgt.degrees[w] - src.degrees[u] + 1 for w, u in pairs]
    labels = list(cf.labels) + [f"{tgt.labels[w]} x {src.labels[u]}^v" for w, u in pairs]
    return GradedSpace(f"T({L0},{L1};{V})", tuple(degrees), tuple(labels)), pairs


def build_cone(m: ChainModel, V: str, L0: str, L1: str, signs=DEFAULT_SIGNS,
               verify: bool = True) -> ConeComplex:
    """Assemble the cone differential; ``signs`` exists only for regression tests."""
    space, pairs = _hom_layout(m, V, L0, L1)
    s_mu1, s_pre, s_mult = signs
    mu1 = m.op("mu1", L0, L1)
    mu1_src, mu1_tgt = m.op("mu1", V, L0), m.op("mu1", V, L1)
    mult = m.op("mu2", V, L0, L1)
    shell = ConeComplex(m, V, L0, L1, space, pairs, MultiOp("mu1_T", (space,), space, 1))
    entries = {}
    for i in range(shell.n_cf):
        a = basis(i)
        entries[(i,)] = shell.join(mu1(a), lambda u: vscale(s_mult, mult(a, basis(u))))
    for (w, u0) in pairs:
        nd = shell.natural_degree(w, u0)
        alpha = {(w, u0): Fraction(1)}

        def hom_part(u, alpha=alpha, nd=nd):
            first = vscale(s_mu1, mu1_tgt(shell.apply_hom(alpha, basis(u))))
            second = vscale(s_pre * _sign(nd), shell.apply_hom(alpha, mu1_src(basis(u))))
            return vadd(first, second)

        entries[(shell.hom_index(w, u0),)] = shell.join({}, hom_part)
    cone = ConeComplex(m, V, L0, L1, space, pairs, MultiOp(f"mu1_T[{L0},{L1};{V}]", (space,), space, 1, entries))
    if verify:
        d = cone.differential
        for i in range(space.dim):
            if d(d(basis(i))):
                raise IdentityFailure(f"cone differential squares to nonzero on {space.labels[i]}")
    return cone


def cone_square_residual(cone: ConeComplex) -> Report:
    rep = Report("cone_differential")
    d = cone.differential
    for i in range(cone.space.dim):
        rep.add([cone.V, cone.L0, cone.L1], [cone.space.labels[i]], d(d(basis(i))))
    return rep


def cone_mu2_left(m: ChainModel, V: str, L0: str, L1: str, L2: str) -> tuple[MultiOp, ConeComplex, ConeComplex]:
    """mu2_T(a2, (a1, alpha1)) = (a2 a1, v -> (-1)^|a2| a2 alpha1(v) - mu3(a2, a1, v))."""
    t01, t02 = build_cone(m, V, L0, L1), build_cone(m, V, L0, L2)
    mu2 = m.op("mu2", L0, L1, L2)
    post = m.op("mu2", V, L1, L2)
    mu3 = m.op("mu3", V, L0, L1, L2)
    a2_space = m.cf(L1, L2)
    entries = {}
    for i in range(a2_space.dim):
        a2 = basis(i)
        sg = _sign(a2_space.degrees[i])
        for j in range(t01.space.dim):
            if j < t01.n_cf:
                a1 = basis(j)
                out = t02.join(mu2(a2, a1), lambda u: vscale(-1, mu3(a2, a1, basis(u))))
            else:
                alpha = {t01.hom_pairs[j - t01.n_cf]: Fraction(1)}
                out = t02.join({}, lambda u: vscale(sg, post(a2, t01.apply_hom(alpha, basis(u)))))
            if out:
                entries[(i, j)] = out
    op = MultiOp(f"mu2_T[{L0},{L1},{L2};{V}]", (a2_space, t01.space), t02.space, 0, entries)
    return op, t01, t02


def cone_mu2_right(m: ChainModel, V: str, L0: str, L1: str, L2: str) -> tuple[MultiOp, ConeComplex, ConeComplex]:
    """mu2_T((a2, alpha2), a1) = (a2 a1, v -> alpha2(a1 v) - mu3(a2, a1, v))."""
    t12, t02 = build_cone(m, V, L1, L2), build_cone(m, V, L0, L2)
    mu2 = m.op("mu2", L0, L1, L2)
    pre = m.op("mu2", V, L0, L1)
    mu3 = m.op("mu3", V, L0, L1, L2)
    a1_space = m.cf(L0, L1)
    entries = {}
    for j in range(t12.space.dim):
        for k in range(a1_space.dim):
            a1 = basis(k)
            if j < t12.n_cf:
                a2 = basis(j)
                out = t02.join(mu2(a2, a1), lambda u: vscale(-1, mu3(a2, a1, basis(u))))
            else:
                alpha = {t12.hom_pairs[j - t12.n_cf]: Fraction(1)}
                out = t02.join({}, lambda u: t12.apply_hom(alpha, pre(a1, basis(u))))
            if out:
                entries[(j, k)] = out
    op = MultiOp(f"mu2_T[{L0},{L1},{L2};{V}]", (t12.space, a1_space), t02.space, 0, entries)
    return op, t12, t02


def check_cone_mu2(m: ChainModel, V: str, L0: str, L1: str, L2: str, side: str) -> Report:
    """Chain-map property of the cone products with respect to mu1 and mu1_T."""
    rep = Report(f"cone_mu2_{side}")
    if side == "left":
        op, t_in, t_out = cone_mu2_left(m, V, L0, L1, L2)
        mu1 = m.op("mu1", L1, L2)
        a_sp = m.cf(L1, L2)
        for i in range(a_sp.dim):
            for j in range(t_in.space.dim):
                a, t = basis(i), basis(j)
                r = vsub(t_out.differential(op(a, t)),
                         vadd(op(mu1(a), t), vscale(_sign(a_sp.degrees[i]), op(a, t_in.differential(t)))))
                rep.add([V, L0, L1, L2], [a_sp.labels[i], t_in.space.labels[j]], r)
    elif side == "right":
        op, t_in, t_out = cone_mu2_right(m, V, L0, L1, L2)
        mu1 = m.op("mu1", L0, L1)
        a_sp = m.cf(L0, L1)
        for j in range(t_in.space.dim):
            for k in range(a_sp.dim):
                t, a = basis(j), basis(k)
                r = vsub(t_out.differential(op(t, a)),
                         vadd(op(t_in.differential(t), a),
                              vscale(_sign(t_in.space.degrees[j]), op(t, mu1(a)))))
                rep.add([V, L0, L1, L2], [t_in.space.labels[j], a_sp.labels[k]], r)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return rep


def build_tilde_phi1T(m: ChainModel, V: str, L0: str, L1: str,
                      cone: ConeComplex | None = None, verify: bool = True) -> MultiOp:
    """Corrected endomorphism of the cone.

    (a, alpha) -> (Phi(a), v -> Phi(alpha(v)) - alpha(Phi(v)) - phi2~(a, v)).
    """
    cone = cone or build_cone(m, V, L0, L1)
    f01 = build_tilde_phi1(m, L0, L1)
    f_src, f_tgt = build_tilde_phi1(m, V, L0), build_tilde_phi1(m, V, L1)
    g = tilde_phi2(m, V, L0, L1)
    entries = {}
    for i in range(cone.n_cf):
        a = basis(i)
        entries[(i,)] = cone.join(f01(a), lambda u: vscale(-1, g(a, basis(u))))
    for (w, u0) in cone.hom_pairs:
        alpha = {(w, u0): Fraction(1)}

        def hom_part(u, alpha=alpha):
            v = basis(u)
            return vsub(f_tgt(cone.apply_hom(alpha, v)), cone.apply_hom(alpha, f_src(v)))

        entries[(cone.hom_index(w, u0),)] = cone.join({}, hom_part)
    op = MultiOp(f"tilde_phi1_T[{L0},{L1};{V}]", (cone.space,), cone.space, 0, entries)
    if verify:
        d = cone.differential
        for i in range(cone.space.dim):
            x = basis(i)
            if vsub(d(op(x)), op(d(x))):
                raise IdentityFailure(f"corrected cone map does not commute with mu1_T on {cone.space.labels[i]}")
    return op


def cone_table(m: ChainModel, V: str, L0: str, L1: str) -> EquivariantTable:
    cone = build_cone(m, V, L0, L1)
    phi = build_tilde_phi1T(m, V, L0, L1, cone)
    coh = Cohomology(cone.space, cone.differential)
    return table_from_endomorphism(coh.induced(phi), m.n)


@dataclass(frozen=True)
class HomTerm:
    """Hom(HF(V, L0), HF(V, L1)) with the endomorphism alpha -> Phi alpha - alpha Phi."""

    labels: tuple[str, ...]
    degrees: tuple[int, ...]  # natural degree |w| - |u|
    matrix: RationalMatrix
    table: EquivariantTable

    def eigen_on_generators(self) -> list[Fraction | None]:
        """Eigenvalue of each standard generator, or None if it is not an eigenvector."""
        out = []
        for j in range(self.matrix.cols):
            col = self.matrix.col(j)
            if any(c for i, c in enumerate(col) if i != j):
                out.append(None)
            else:
                out.append(col[j])
        return out


def hom_term(m: ChainModel, V: str, L0: str, L1: str) -> HomTerm:
    src_coh = Cohomology(m.cf(V, L0), m.op("mu1", V, L0))
    tgt_coh = Cohomology(m.cf(V, L1), m.op("mu1", V, L1))
    f_src, f_tgt = build_tilde_phi1(m, V, L0), build_tilde_phi1(m, V, L1)
    src = src_coh.all_classes()
    tgt = tgt_coh.all_classes()
    # class coordinates of Phi on each side, as (global class index) matrices
    def class_matrix(coh, classes, f):
        offsets, start = {}, 0
        for k in coh.degrees:
            offsets[k] = start
            start += coh.dim(k)
        size = start
        cols = []
        for k, x in classes:
            coords = coh.coordinates(k, f(x))
            if coords is None:
                raise IdentityFailure("corrected map does not preserve cycles")
            col = [Fraction(0)] * size
            for t, c in enumerate(coords):
                col[offsets[k] + t] = c
            cols.append(col)
        return RationalMatrix.from_columns(cols, size) if cols else RationalMatrix.zeros(0, 0)

    p_src = class_matrix(src_coh, src, f_src)
    p_tgt = class_matrix(tgt_coh, tgt, f_tgt)
    ns, nt = len(src), len(tgt)
    gens = [(w, u) for w in range(nt) for u in range(ns)]
    pos = {g: i for i, g in enumerate(gens)}
    cols = []
    for (w, u) in gens:
        col = [Fraction(0)] * len(gens)
        # Phi_tgt o (w x u^v) = sum_w' P_tgt[w', w] (w' x u^v)
        for w2 in range(nt):
            col[pos[(w2, u)]] += p_tgt[w2, w]
        # (w x u^v) o Phi_src = sum_u' P_src[u, u'] (w x u'^v)
        for u2 in range(ns):
            col[pos[(w, u2)]] -= p_src[u, u2]
        cols.append(col)
    mat = RationalMatrix.from_columns(cols, len(gens)) if gens else RationalMatrix.zeros(0, 0)
    degrees = tuple(tgt[w][0] - src[u][0] for w, u in gens)
    src_labels = [_class_label(m.cf(V, L0), x) for _, x in src]
    tgt_labels = [_class_label(m.cf(V, L1), x) for _, x in tgt]
    labels = tuple(f"{tgt_labels[w]} x {src_labels[u]}^v" for w, u in gens)
    per_degree: dict[int, list[int]] = {}
    for i, d in enumerate(degrees):
        per_degree.setdefault(d, []).append(i)
    blocks = {}
    for d, idx in per_degree.items():
        blocks[d] = RationalMatrix.from_rows([[mat[i, j] for j in idx] for i in idx], len(idx))
    return HomTerm(labels, degrees, mat, table_from_endomorphism(blocks, m.n))


def _class_label(space: GradedSpace, x: Vector) -> str:
    if len(x) == 1:
        (i, c), = x.items()
        if c == 1:
            return space.labels[i]
    return "[" + " + ".join(f"{c}*{space.labels[i]}" for i, c in sorted(x.items())) + "]"


def floer_table(m: ChainModel, L0: str, L1: str) -> EquivariantTable:
    coh = Cohomology(m.cf(L0, L1), m.op("mu1", L0, L1))
    return table_from_endomorphism(coh.induced(build_tilde_phi1(m, L0, L1)), m.n)


def les_bookkeeping(m: ChainModel, V: str, L0: str, L1: str) -> dict:
    """Compare the cone with CF(L0, L1) and the Hom term.

    ``additivity`` is q(cone) - q(CF) + q(Hom); ``correction_gap`` is
    -q(Hom) minus (-1)^(n+1) q^(-1) (L0 . V)(V . L1).  Both vanish when the
    model satisfies Poincare duality and the cone carries its corrected map.
    """
    q_cone = q_intersection(cone_table(m, V, L0, L1))
    q_pair = q_intersection(floer_table(m, L0, L1))
    q_hom = q_intersection(hom_term(m, V, L0, L1).table)
    c = QLaurent.monomial(-1, _sign(m.n + 1))
    correction = c * q_intersection(floer_table(m, L0, V)) * q_intersection(floer_table(m, V, L1))
    return {
        "cone": q_cone,
        "pair": q_pair,
        "hom": q_hom,
        "correction": correction,
        "additivity": q_cone - q_pair + q_hom,
        "correction_gap": -q_hom - correction,
    }


def les_rank_count(m: ChainModel, V: str, L0: str, L1: str) -> dict:
    """dim H(T) predicted from the connecting map a -> mu2(a, .) on cohomology."""
    pair_coh = Cohomology(m.cf(L0, L1), m.op("mu1", L0, L1))
    src_coh = Cohomology(m.cf(V, L0), m.op("mu1", V, L0))
    tgt_coh = Cohomology(m.cf(V, L1), m.op("mu1", V, L1))
    mult = m.op("mu2", V, L0, L1)
    src, tgt = src_coh.all_classes(), tgt_coh.all_classes()
    offsets, start = {}, 0
    for k in tgt_coh.degrees:
        offsets[k] = start
        start += tgt_coh.dim(k)
    cols = []
    for _, a in pair_coh.all_classes():
        col = []
        for ku, u in src:
            img = mult(a, u)
            full = [Fraction(0)] * len(tgt)
            if img:
                k = m.cf(V, L1).degree_of(img)
                coords = tgt_coh.coordinates(k, img)
                if coords is None:
                    raise IdentityFailure("product of cycles is not a cycle")
                for t, c in enumerate(coords):
                    full[offsets[k] + t] = c
            col.extend(full)
        cols.append(col)
    hom_dim = len(src) * len(tgt)
    r = rank(RationalMatrix.from_columns(cols, hom_dim)) if cols and hom_dim else 0
    cone = build_cone(m, V, L0, L1)
    actual = Cohomology(cone.space, cone.differential).total_dim()
    predicted = pair_coh.total_dim() + hom_dim - 2 * r
    return {"predicted": predicted, "actual": actual, "connecting_rank": r}
