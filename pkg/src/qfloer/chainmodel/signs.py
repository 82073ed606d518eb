"""Translation between the dga-style signs used here and the A-infinity signs
with reduced degrees (the mu-bar convention).

mu_bar^d(a_d, ..., a_1) = (-1)^(|a_1| + 2|a_2| + ... + d|a_d|) mu^d(a_d, ..., a_1)
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Mapping

from ..exactalg import RationalMatrix, inverse
from .core import GradedSpace, MultiOp, Vector, basis, vadd, vscale, vsub


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def translation_sign(op: MultiOp, key: tuple[int, ...]) -> int:
    d = op.arity
    total = 0
    for pos, i in enumerate(key):
        total += (d - pos) * op.inputs[pos].degrees[i]  # inputs are written a_d, ..., a_1
    return _sign(total)


def to_ainfinity_convention(op: MultiOp) -> MultiOp:
    """Rescale every entry by the translation sign.  The map is an involution."""
    if op.arity > 3:
        raise ValueError("only arities up to 3 are translated")
    entries = {k: vscale(translation_sign(op, k), v) for k, v in op.entries.items()}
    return MultiOp(op.name, op.inputs, op.output, op.shift, entries)


from_ainfinity_convention = to_ainfinity_convention


# ---------------------------------------------------------------------------
# single-object families {1: mu1, 2: mu2, 3: mu3} on one graded space
# ---------------------------------------------------------------------------


def dga_relation_residuals(family: Mapping[int, MultiOp], d: int) -> dict[tuple[int, ...], Vector]:
    """Residuals of mu1^2 = 0, the Leibniz rule and the mu3 homotopy (d = 1, 2, 3)."""
    A = family[1].output
    mu1, mu2 = family[1], family.get(2)
    mu3 = family.get(3)
    out = {}
    for key in product(range(A.dim), repeat=d):
        xs = [basis(i) for i in key]
        degs = [A.degrees[i] for i in key]
        if d == 1:
            r = mu1(mu1(xs[0]))
        elif d == 2:
            a2, a1 = xs
            r = vsub(mu1(mu2(a2, a1)), vadd(mu2(mu1(a2), a1), vscale(_sign(degs[0]), mu2(a2, mu1(a1)))))
        elif d == 3:
            a3, a2, a1 = xs
            lhs = vadd(mu1(mu3(a3, a2, a1)), mu3(mu1(a3), a2, a1),
                       vscale(_sign(degs[0]), mu3(a3, mu1(a2), a1)),
                       vscale(_sign(degs[0] + degs[1]), mu3(a3, a2, mu1(a1))))
            r = vsub(lhs, vsub(mu2(a3, mu2(a2, a1)), mu2(mu2(a3, a2), a1)))
        else:
            raise ValueError("relations are implemented for d <= 3")
        if r:
            out[key] = r
    return out


def ainfinity_relation_residuals(family: Mapping[int, MultiOp], d: int) -> dict[tuple[int, ...], Vector]:
    """sum (-1)^(z_n) mu^(d-m+1)(a_d, .., mu^m(a_(n+m), .., a_(n+1)), a_n, .., a_1)

    with z_n = sum_(j <= n) (|a_j| - 1).  Missing arities count as zero.
    """
    A = family[1].output
    out = {}
    for key in product(range(A.dim), repeat=d):
        # a_1 is the last written argument
        args = [basis(i) for i in reversed(key)]  # args[j-1] = a_j
        degs = [A.degrees[i] for i in reversed(key)]
        total: Vector = {}
        for m in range(1, d + 1):
            inner_op = family.get(m)
            outer_op = family.get(d - m + 1)
            if inner_op is None or outer_op is None:
                continue
            for n in range(0, d - m + 1):
                z = sum(degs[j] - 1 for j in range(n))
                inner_args = args[n:n + m]
                inner = inner_op(*reversed(inner_args))
                if not inner:
                    continue
                outer_args = args[:n] + [inner] + args[n + m:]
                total = vadd(total, vscale(_sign(z), outer_op(*reversed(outer_args))))
        if total:
            out[key] = total
    return out


def translate_family(family: Mapping[int, MultiOp]) -> dict[int, MultiOp]:
    return {k: to_ainfinity_convention(v) for k, v in family.items()}


# ---------------------------------------------------------------------------
# random associative models: End(W) of a random cochain complex W
# ---------------------------------------------------------------------------


def _random_invertible(rng: random.Random, size: int) -> RationalMatrix:
    while True:
        m = RationalMatrix.from_rows([[Fraction(rng.randint(-2, 2)) for _ in range(size)] for _ in range(size)])
        try:
            inverse(m)
            return m
        except ZeroDivisionError:
            continue


def random_endomorphism_dga(rng: random.Random, max_dim: int = 3, degree_range=(-1, 2)) -> dict[int, MultiOp]:
    """End(W) with mu1 = [d, -] and mu2 = composition, for a random complex W.

    W is a sum of cancelling pairs and single classes in random degrees, then
    conjugated by a random degree-preserving change of basis.
    """
    lo, hi = degree_range
    dim = rng.randint(1, max_dim)
    degs = sorted(rng.randint(lo, hi) for _ in range(dim))
    # differential: pair up some (i, j) with deg j = deg i + 1, each index used at most once
    diff = [[Fraction(0)] * dim for _ in range(dim)]
    used: set[int] = set()
    for i in range(dim):
        for j in range(dim):
            if i in used or j in used or i == j:
                continue
            if degs[j] == degs[i] + 1 and rng.random() < 0.7:
                diff[j][i] = Fraction(rng.choice([1, 2, -1, Fraction(1, 2)]))
                used.update((i, j))
    # random change of basis inside each degree
    P = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    for k in set(degs):
        idx = [i for i in range(dim) if degs[i] == k]
        block = _random_invertible(rng, len(idx))
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                P[i][j] = block[a, b]
    Pm = RationalMatrix.from_rows(P)
    D = Pm @ RationalMatrix.from_rows(diff) @ inverse(Pm)

    gens = [(i, j) for i in range(dim) for j in range(dim)]  # E_ij : e_j -> e_i
    gdeg = [degs[i] - degs[j] for i, j in gens]
    order = sorted(range(len(gens)), key=lambda g: gdeg[g])
    gens = [gens[g] for g in order]
    A = GradedSpace("End(W)", tuple(gdeg[g] for g in order))
    pos = {g: t for t, g in enumerate(gens)}

    def to_vec(mat: dict[tuple[int, int], Fraction]) -> Vector:
        return {pos[k]: c for k, c in mat.items() if c}

    mu2 = {}
    for s, (i, j) in enumerate(gens):
        for t, (k, l) in enumerate(gens):
            if j == k:
                mu2[(s, t)] = {pos[(i, l)]: Fraction(1)}
    mu1 = {}
    for s, (i, j) in enumerate(gens):
        # [D, E_ij] = D E_ij - (-1)^|E_ij| E_ij D
        acc: dict[tuple[int, int], Fraction] = {}
        for r in range(dim):
            if D[r, i]:
                acc[(r, j)] = acc.get((r, j), Fraction(0)) + D[r, i]
            if D[j, r]:
                acc[(i, r)] = acc.get((i, r), Fraction(0)) - _sign(A.degrees[s]) * D[j, r]
        v = to_vec(acc)
        if v:
            mu1[(s,)] = v
    return {
        1: MultiOp("mu1", (A,), A, 1, mu1),
        2: MultiOp("mu2", (A, A), A, 0, mu2),
        3: MultiOp("mu3", (A, A, A), A, -1, {}),
    }


def random_family(rng: random.Random, max_dim: int = 4, density: float = 0.3) -> dict[int, MultiOp]:
    """Arbitrary degree-respecting tensors (no relation imposed)."""
    dim = rng.randint(1, max_dim)
    A = GradedSpace("A", tuple(sorted(rng.randint(-1, 2) for _ in range(dim))))
    fam = {}
    for arity, shift in ((1, 1), (2, 0), (3, -1)):
        entries = {}
        for key in product(range(dim), repeat=arity):
            target = sum(A.degrees[i] for i in key) + shift
            outs = A.in_degree(target)
            for o in outs:
                if rng.random() < density:
                    entries.setdefault(key, {})[o] = Fraction(rng.randint(-2, 2))
        fam[arity] = MultiOp(f"mu{arity}", (A,) * arity, A, shift, entries)
    return fam
