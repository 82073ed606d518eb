"""Cohomology of finite cochain complexes and induced endomorphisms."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from ..errors import IdentityFailure
from ..exactalg import RationalMatrix, independent_columns, nullspace, solve
from .core import GradedSpace, MultiOp, Vector


class Cohomology:
    """Chosen cycle representatives for H(C, d), degree by degree.

    Within degree k the cycle space is split as boundaries plus the span of
    the representatives, so every cycle has unique class coordinates.
    """

    def __init__(self, space: GradedSpace, differential: MultiOp):
        if differential.arity != 1 or differential.shift != 1:
            raise ValueError("differential must be an arity-one operation of degree +1")
        self.space = space
        self.d = differential
        self.degrees = sorted(set(space.degrees))
        self._idx = {k: space.in_degree(k) for k in self.degrees}
        self._bnd: dict[int, list[list[Fraction]]] = {}
        self._reps: dict[int, list[list[Fraction]]] = {}
        for k in self.degrees:
            idx = self._idx[k]
            dk = differential.matrix(idx, space.in_degree(k + 1))
            cycles = nullspace(dk) if dk.rows else [
                [Fraction(int(i == j)) for i in range(len(idx))] for j in range(len(idx))]
            prev = space.in_degree(k - 1)
            images = differential.matrix(prev, idx) if prev else None
            bnd = []
            if images is not None:
                cols = [images.col(j) for j in range(images.cols)]
                bnd = [cols[j] for j in independent_columns(cols, len(idx))] if cols else []
            keep = independent_columns(bnd + cycles, len(idx))
            self._bnd[k] = bnd
            self._reps[k] = [cycles[j - len(bnd)] for j in keep if j >= len(bnd)]

    def dim(self, k: int) -> int:
        return len(self._reps.get(k, []))

    def dims(self) -> dict[int, int]:
        return {k: self.dim(k) for k in self.degrees if self.dim(k)}

    def total_dim(self) -> int:
        return sum(self.dims().values())

    def classes(self, k: int) -> list[Vector]:
        idx = self._idx.get(k, [])
        return [{idx[i]: c for i, c in enumerate(r) if c} for r in self._reps.get(k, [])]

    def all_classes(self) -> list[tuple[int, Vector]]:
        return [(k, v) for k in self.degrees for v in self.classes(k)]

    def _local(self, k: int, v: Vector) -> list[Fraction]:
        idx = self._idx.get(k, [])
        pos = {g: i for i, g in enumerate(idx)}
        out = [Fraction(0)] * len(idx)
        for g, c in v.items():
            if g not in pos:
                raise ValueError("vector is not homogeneous of the requested degree")
            out[pos[g]] = c
        return out

    def coordinates(self, k: int, v: Vector) -> list[Fraction] | None:
        """Class coordinates of a degree-k cycle, or None if ``v`` is not a cycle."""
        reps = self._reps.get(k, [])
        bnd = self._bnd.get(k, [])
        if not v:
            return [Fraction(0)] * len(reps)
        if not self._idx.get(k):
            return None
        cols = bnd + reps
        if not cols:
            return None
        try:
            local = self._local(k, v)
        except ValueError:
            return None
        x = solve(RationalMatrix.from_columns(cols, len(self._idx[k])), local)
        if x is None:
            return None
        return x[len(bnd):]

    def is_boundary(self, k: int, v: Vector) -> bool:
        coords = self.coordinates(k, v)
        return coords is not None and not any(coords)

    def primitive(self, k: int, v: Vector) -> Vector | None:
        """Some ``x`` of degree k-1 with ``d x = v``; None if none exists."""
        if not v:
            return {}
        prev = self.space.in_degree(k - 1)
        idx = self._idx.get(k, [])
        if not prev or not idx:
            return None
        m = self.d.matrix(prev, idx)
        x = solve(m, self._local(k, v))
        if x is None:
            return None
        return {prev[i]: c for i, c in enumerate(x) if c}

    def induced(self, f: Callable[[Vector], Vector]) -> dict[int, RationalMatrix]:
        """Matrices (in class coordinates) of a degree-0 chain map."""
        out = {}
        for k in self.degrees:
            # boundaries must go to boundaries
            for col in self._bnd[k]:
                img = f({g: c for g, c in zip(self._idx[k], col) if c})
                if not self.is_boundary(k, img):
                    raise IdentityFailure(f"map does not preserve boundaries in degree {k}")
            cols = []
            for rep in self.classes(k):
                coords = self.coordinates(k, f(rep))
                if coords is None:
                    raise IdentityFailure(f"map does not preserve cycles in degree {k}")
                cols.append(coords)
            if cols:
                out[k] = RationalMatrix.from_columns(cols, self.dim(k))
        return out

