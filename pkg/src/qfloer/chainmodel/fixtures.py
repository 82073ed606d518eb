"""Small hand-built chain models that satisfy every identity exactly.

All models use the closed sector (beta-slot, e, b) in degrees -1, 0, 1 with
d = 0 and delta(b) = e, except :func:`padded_sphere_model` which adds a
cancelling pair so that d and mu1 are nonzero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from ..errors import DivisibilityError, UnsupportedDimension
from .core import ChainModel, ModelBuilder, Vector, vadd, vscale

ALL_OPS = ("d", "delta", "mu1", "mu2", "mu3", "phi0", "phi0_dual", "phi1", "phi2",
           "unit_dual", "hvee", "kvee")

# closed basis indices of the standard closed sector
BETA, E, B = 0, 1, 2


def _standard_closed(n: int) -> ModelBuilder:
    mb = ModelBuilder(n, {-1: 1, 0: 1, 1: 1}, ("beta", "e", "b"))
    mb.cochains["e"] = {E: Fraction(1)}
    mb.cochains["b"] = {B: Fraction(1)}
    mb.entry("delta", (), (B,), {E: 1})
    return mb


def _uniform_algebra(mb: ModelBuilder, objects: Sequence[str], degrees: Sequence[int],
                     labels: Sequence[str], mult: Callable[[int, int], Vector],
                     diff: Callable[[int], Vector], top: int, unit: int,
                     phi1: dict[int, Callable[[int], Vector]],
                     phi0: dict[int, Vector]):
    """Put one graded-commutative dga on every CF(X, Y) and fill in all operations.

    ``phi1[j]`` gives phi1(closed basis j, a) on basis elements; ``phi0[j]``
    is the image of closed basis j.  The trace is the coordinate of ``top``.
    """
    for x in objects:
        for y in objects:
            mb.space(x, y, degrees, labels)
    dim = len(degrees)
    for x in objects:
        for y in objects:
            for i in range(dim):
                out = diff(i)
                if out:
                    mb.entry("mu1", (x, y), (i,), out)
                for j, f in phi1.items():
                    out = f(i)
                    if out:
                        mb.entry("phi1", (x, y), (j, i), out)
            for z in objects:
                for i in range(dim):
                    for k in range(dim):
                        out = mult(i, k)
                        if out:
                            mb.entry("mu2", (x, y, z), (i, k), out)
        for j, v in phi0.items():
            mb.entry("phi0", (x,), (j,), v)
        mb.entry("unit_dual", (x,), (top,), {0: 1})
        mb.entry("phi0_dual", (x,), (E, top), {0: 1})
        mb.units[x] = {unit: Fraction(1)}
        mb.c.setdefault(x, {})
    mb.declare_all(*ALL_OPS)


def single_generator_model(n: int, k: int, label: str = "V") -> ChainModel:
    """H*(L) = K[x]/x^(k+1) with |x| = n/k and phi1(b, x^i) = (i/k) x^i."""
    if k <= 0 or n % k:
        raise DivisibilityError(f"{k} does not divide {n}")
    step = n // k
    if step % 2 and k != 1:
        raise DivisibilityError("an odd generator squares to zero, so k must be 1")
    mb = _standard_closed(n)
    degrees = [step * i for i in range(k + 1)]
    labels = ["e_" + label] + (["f"] if k == 1 else [f"x^{i}" for i in range(1, k + 1)])

    def mult(i, j):
        return {i + j: Fraction(1)} if i + j <= k else {}

    _uniform_algebra(mb, [label], degrees, labels, mult, lambda i: {}, top=k, unit=0,
                     phi1={B: lambda i: {i: Fraction(i, k)} if i else {}},
                     phi0={E: {0: Fraction(1)}})
    return mb.build()


def sphere_model(n: int, label: str = "V") -> ChainModel:
    """CF(V, V) = H*(S^n) with basis (e_V, f); phi1(b, .) = diag(0, 1)."""
    return single_generator_model(n, 1, label)


def projective_model(n: int, label: str = "L") -> ChainModel:
    """Zero section of T*CP^(n/2): generator of degree 2 with weights 2i/n."""
    if n % 2:
        raise DivisibilityError("complex projective zero sections need even n")
    return single_generator_model(n, n // 2, label)


def am_model(m: int, n: int = 3) -> ChainModel:
    """Chain of m spheres L1..Lm in the A_m Milnor fibre of dimension 3.

    Adjacent spheres meet in one point: x_i in CF(L_i, L_(i+1)) of degree 1 and
    y_i in CF(L_(i+1), L_i) of degree 2.  Every generator has weight deg/3.
    """
    if n != 3:
        raise UnsupportedDimension("the A_m chain model is built for n = 3")
    if m < 1:
        raise ValueError("m must be positive")
    mb = _standard_closed(n)
    names = [f"L{i}" for i in range(1, m + 1)]
    for i, l in enumerate(names):
        mb.space(l, l, [0, 3], [f"e_{l}", f"f_{l}"])
        if i + 1 < m:
            r = names[i + 1]
            mb.space(l, r, [1], [f"x_{i + 1}"])
            mb.space(r, l, [2], [f"y_{i + 1}"])
    # disjoint spheres: zero complexes, so every tuple of objects composes
    for i, l in enumerate(names):
        for j, r in enumerate(names):
            if abs(i - j) > 1:
                mb.space(l, r, [])
    _fill_units_and_weights(mb)
    for i in range(m - 1):
        l, r = names[i], names[i + 1]
        mb.entry("mu2", (l, r, l), (0, 0), {1: 1})  # y.x = f_l
        mb.entry("mu2", (r, l, r), (0, 0), {1: 1})  # x.y = f_r
    mb.declare_all(*ALL_OPS)
    return mb.build()


def affine_a1_model(n: int = 3) -> ChainModel:
    """Two spheres L0, L1 meeting cleanly in a circle (n = 3).

    CF(L0, L1) has classes of degree 1 and 2; weights act as deg/3.
    """
    if n != 3:
        raise UnsupportedDimension("the affine A_1 chain model is built for n = 3")
    mb = _standard_closed(n)
    for l in ("L0", "L1"):
        mb.space(l, l, [0, 3], [f"e_{l}", f"f_{l}"])
    mb.space("L0", "L1", [1, 2], ["x1", "x2"])
    mb.space("L1", "L0", [1, 2], ["y1", "y2"])
    _fill_units_and_weights(mb)
    # y2.x1 = y1.x2 = f_L0 and x1.y2 = x2.y1 = f_L1
    mb.entry("mu2", ("L0", "L1", "L0"), (1, 0), {1: 1})
    mb.entry("mu2", ("L0", "L1", "L0"), (0, 1), {1: 1})
    mb.entry("mu2", ("L1", "L0", "L1"), (0, 1), {1: 1})
    mb.entry("mu2", ("L1", "L0", "L1"), (1, 0), {1: 1})
    mb.declare_all(*ALL_OPS)
    return mb.build()


def _fill_units_and_weights(mb: ModelBuilder):
    """Unit products, trace, phi0(e) and phi1(b, a) = (|a|/3) a on every space."""
    for l in mb.lagrangians:
        mb.units[l] = {0: Fraction(1)}
        mb.c[l] = {}
        mb.entry("phi0", (l,), (E,), {0: 1})
        mb.entry("unit_dual", (l,), (1,), {0: 1})
        mb.entry("phi0_dual", (l,), (E, 1), {0: 1})
    for (x, y), sp in mb.spaces.items():
        for i, deg in enumerate(sp.degrees):
            if deg:
                mb.entry("phi1", (x, y), (B, i), {i: Fraction(deg, 3)})
            # e_y . a = a and a . e_x = a
            mb.entry("mu2", (x, y, y), (0, i), {i: 1})
            if x != y or i != 0:
                mb.entry("mu2", (x, x, y), (i, 0), {i: 1})


# ---------------------------------------------------------------------------
# padded sphere: nonzero differentials everywhere
# ---------------------------------------------------------------------------

# auxiliary acyclic algebra: 1, t1 (deg -1), s1 = dt1 (deg 0), t2 (deg 0), s2 = dt2 (deg 1);
# all products of non-unit elements vanish
_AUX_DEG = (0, -1, 0, 0, 1)
_AUX_NAMES = ("1", "t1", "s1", "t2", "s2")
_AUX_D = {1: 2, 3: 4}
_AUX_Y = {3: 1, 4: 2}  # odd derivation of degree -1: t2 -> t1, s2 -> s1

PADDED_CLOSED_LABELS = ("beta", "e", "y", "b", "z")


def padded_sphere_model(n: int, objects: Sequence[str] = ("V", "W"),
                        shifts: Sequence[Fraction] | None = None) -> ChainModel:
    """H*(S^n) tensored with an acyclic commutative dga, on several objects.

    The closed sector gains y (deg 0) and z = d(y) (deg 1) with phi0(y) = t2,
    phi0(z) = s2 and phi1(y, .) an odd derivation, so ``b + d(y)`` is a
    second dilation.  ``shifts[i]`` sets c of object i to shifts[i] times
    its unit.
    """
    objects = list(objects)
    shifts = [Fraction(0)] * len(objects) if shifts is None else [Fraction(s) for s in shifts]
    mb = ModelBuilder(n, {-1: 1, 0: 2, 1: 2}, PADDED_CLOSED_LABELS)
    cb = {name: i for i, name in enumerate(PADDED_CLOSED_LABELS)}
    mb.cochains["e"] = {cb["e"]: Fraction(1)}
    mb.cochains["b"] = {cb["b"]: Fraction(1)}
    mb.entry("d", (), (cb["y"],), {cb["z"]: 1})
    mb.entry("delta", (), (cb["b"],), {cb["e"]: 1})

    raw = [(x, u) for x in (0, 1) for u in range(5)]
    raw_deg = [n * x + _AUX_DEG[u] for x, u in raw]
    order = sorted(range(len(raw)), key=lambda r: raw_deg[r])
    pos = {raw[r]: p for p, r in enumerate(order)}
    degrees = [raw_deg[r] for r in order]
    labels = [("e" if raw[r][0] == 0 else "f") + ("" if raw[r][1] == 0 else "." + _AUX_NAMES[raw[r][1]])
              for r in order]
    elems = [raw[r] for r in order]

    def sgn(k):
        return -1 if k % 2 else 1

    def mult(i, j):
        (x, u), (x2, u2) = elems[i], elems[j]
        if x + x2 > 1:
            return {}
        if u and u2:
            return {}
        return {pos[(x + x2, u or u2)]: Fraction(sgn(_AUX_DEG[u] * n * x2))}

    def diff(i):
        x, u = elems[i]
        if u not in _AUX_D:
            return {}
        return {pos[(x, _AUX_D[u])]: Fraction(sgn(n * x))}

    def yder(i):
        x, u = elems[i]
        if u not in _AUX_Y:
            return {}
        return {pos[(x, _AUX_Y[u])]: Fraction(sgn(n * x))}

    def apply(f, v):
        out = {}
        for i, c in v.items():
            out = vadd(out, vscale(c, f(i)))
        return out

    def zder(i):
        # phi1(z, .) = -(mu1 Y + Y mu1), forced by the phi1 homotopy at y
        return vscale(-1, vadd(apply(diff, yder(i)), apply(yder, diff(i))))

    _uniform_algebra(
        mb, objects, degrees, labels, mult, diff,
        top=pos[(1, 0)], unit=pos[(0, 0)],
        phi1={cb["b"]: lambda i: {i: Fraction(1)} if elems[i][0] else {},
              cb["y"]: yder, cb["z"]: zder},
        phi0={cb["e"]: {pos[(0, 0)]: Fraction(1)},
              cb["y"]: {pos[(0, 3)]: Fraction(1)},
              cb["z"]: {pos[(0, 4)]: Fraction(1)}})
    for x, s in zip(objects, shifts):
        if s:
            mb.c[x] = {pos[(0, 0)]: s}
    return mb.build()


def padded_index(n: int, name: str) -> int:
    """Basis index of e.g. 'e.s1' or 'f' in :func:`padded_sphere_model`."""
    m = padded_sphere_model(n, ("V",))
    return m.cf("V", "V").labels.index(name)


FIXTURES = {
    "sphere": lambda n=3: sphere_model(n),
    "projective": lambda n=4: projective_model(n),
    "am": lambda m=2: am_model(m),
    "affine-a1": lambda: affine_a1_model(),
    "padded": lambda n=3: padded_sphere_model(n),
}
