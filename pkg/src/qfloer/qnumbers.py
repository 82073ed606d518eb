"""Bigraded Floer tables and their q-intersection numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DivisibilityError, SchemaError
from .exactalg import QLaurent, RationalMatrix, generalized_eigenspaces, rat


@dataclass(frozen=True)
class EquivariantTable:
    """Dimensions of the generalized eigenspaces, per cohomological degree.

    ``entries`` maps ``(degree, weight)`` to a positive dimension.  ``n`` is the
    complex dimension of the ambient manifold; it only matters for duality.
    """

    n: int
    entries: Mapping[tuple[int, Fraction], int] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[tuple[int, Fraction], int] = {}
        for (deg, weight), dim in self.entries.items():
            if int(dim) < 0:
                raise ValueError("negative dimension in table")
            if dim:
                key = (int(deg), rat(weight))
                clean[key] = clean.get(key, 0) + int(dim)
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_items(cls, n: int, items: Iterable[tuple[int, object, int]]) -> "EquivariantTable":
        acc: dict[tuple[int, Fraction], int] = {}
        for deg, weight, dim in items:
            key = (int(deg), rat(weight))
            acc[key] = acc.get(key, 0) + int(dim)
        return cls(n, acc)

    def __eq__(self, other) -> bool:
        return (isinstance(other, EquivariantTable) and self.n == other.n
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.entries.items())))

    def total_dimension(self) -> int:
        return sum(self.entries.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (d % 2) * dim for (d, _), dim in self.entries.items())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [
                {"deg": d, "weight": [w.numerator, w.denominator], "dim": dim}
                for (d, w), dim in self.entries.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "EquivariantTable":
        try:
            items = [(e["deg"], tuple(e["weight"]), e["dim"]) for e in data["entries"]]
            return cls.from_items(int(data["n"]), items)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad table document: {exc}") from exc

    def __str__(self) -> str:
        rows = [f"  deg {d:>3}  weight {w!s:>6}  dim {dim}" for (d, w), dim in self.entries.items()]
        return f"EquivariantTable(n={self.n})\n" + "\n".join(rows)


@dataclass(frozen=True)
class ShiftSpec:
    """Grading shift ``r`` together with an equivariant shift ``s``."""

    r: int = 0
    s: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "s", rat(self.s))


def q_intersection(t: EquivariantTable) -> QLaurent:
    """Supertrace of q^Phi: sum of (-1)^deg * dim * q^weight."""
    return QLaurent(((w, (-1) ** (d % 2) * dim) for (d, w), dim in t.entries.items()))


def single_generator_table(n: int, k: int) -> EquivariantTable:
    """Table of HF(L, L) when H*(L) is generated by one class of degree n/k.

    The class x^i sits in degree n*i/k with weight i/k.
    """
    if k <= 0:
        raise DivisibilityError("k must be positive")
    if n % k:
        raise DivisibilityError(f"{k} does not divide {n}")
    step = n // k
    return EquivariantTable(n, {(step * i, Fraction(i, k)): 1 for i in range(k + 1)})


def apply_shift(t: EquivariantTable, left: ShiftSpec, right: ShiftSpec) -> EquivariantTable:
    """Table of HF(L0[left.r]<left.s>, L1[right.r]<right.s>) given that of HF(L0, L1)."""
    dr = right.r - left.r
    ds = right.s - left.s
    return EquivariantTable(t.n, {(d + dr, w + ds): dim for (d, w), dim in t.entries.items()})


def poincare_dual(t: EquivariantTable) -> EquivariantTable:
    """HF(L1, L0) from HF(L0, L1): degree d -> n - d, weight w -> 1 - w."""
    return EquivariantTable(t.n, {(t.n - d, 1 - w): dim for (d, w), dim in t.entries.items()})


def table_from_endomorphism(per_degree: Mapping[int, RationalMatrix], n: int) -> EquivariantTable:
    """Read off eigenvalue multiplicities degree by degree.

    Only algebraic multiplicities survive: the unipotent part of q^Phi has
    unit eigenvalues, so Jordan structure never reaches the supertrace.
    """
    entries: dict[tuple[int, Fraction], int] = {}
    for deg, mat in per_degree.items():
        for block in generalized_eigenspaces(mat).blocks:
            entries[(int(deg), block.eigenvalue)] = block.multiplicity
    return EquivariantTable(n, entries)


def classical_table(points: Iterable[tuple[int, object, object]], n: int) -> EquivariantTable:
    """Compact/classical case: an intersection point p has weight c0(p) - c1(p)."""
    return EquivariantTable.from_items(n, ((d, rat(c0) - rat(c1), 1) for d, c0, c1 in points))


def duality_residual(t: EquivariantTable) -> QLaurent:
    """``q_int(dual)(q) - (-1)^n q q_int(t)(1/q)``; zero for every table."""
    lhs = q_intersection(poincare_dual(t))
    rhs = q_intersection(t).invert_variable().shift(1) * (-1) ** (t.n % 2)
    return lhs - rhs
